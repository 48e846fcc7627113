class Imports:
    """Benchmark importing batsched."""

    def timeraw_import_batsched(self):
        return "import batsched"
