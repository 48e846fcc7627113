from pathlib import Path

from batsched.exceptions import GraphFileError


def _parse_file_type(filename) -> str:
    """Determines the kind of file from its suffix.

    Returns
    -------
    file_type : str
        ``"graph"`` for ``.json`` files, ``"profile"`` for ``.csv`` files

    Raises
    ------
    GraphFileError
        If the suffix is not recognized
    """
    suffix = Path(filename).suffix.lower()
    if suffix == ".json":
        return "graph"
    elif suffix == ".csv":
        return "profile"
    raise GraphFileError(
        f"Could not recognize the format of {filename}; expected a .json graph "
        "file or a .csv profile"
    )
