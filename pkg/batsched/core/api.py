"""batsched file API."""

import os
from importlib.resources import files
from typing import Any, Dict, Optional, Union

from batsched.battery.model import DischargeProfile
from batsched.exceptions import GraphFileError
from batsched.graph.taskgraph import TaskGraph
from batsched.graph.validation import check_energy_bracketing, require_valid
from batsched.io._csv import _read_profile_csv, _write_profile_csv
from batsched.io._json import GraphFile, _dumps, _loads, _read_graph_file
from batsched.io.utils import _parse_file_type

G3_FILENAME = "g3.json"


def _read_text(filename) -> str:
    try:
        with open(filename, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise GraphFileError(f"{filename} is not UTF-8 text: {e}") from e


def open_graph_file(
    filename_or_obj: Union[str, os.PathLike, Dict[str, Any]],
    validate: Optional[bool] = True,
) -> GraphFile:
    """Reads a graph file together with its battery parameters.

    Parameters
    ----------
    filename_or_obj : str, os.PathLike or dict
        Path to a ``.json`` graph file, or an already decoded document
    validate : bool, default=True
        Raise ``InvalidGraphError`` if the graph violates any invariant and
        warn about design point energies outside the column m to column 1
        bracket

    Returns
    -------
    graph_file : GraphFile

    Examples
    --------
    >>> import batsched as bs
    >>> graph_file = bs.open_graph_file("g3.json")
    >>> graph_file.battery.beta
    0.273
    """
    if isinstance(filename_or_obj, dict):
        data = filename_or_obj
    else:
        if _parse_file_type(filename_or_obj) != "graph":
            raise GraphFileError(f"{filename_or_obj} is not a graph file")
        data = _loads(_read_text(filename_or_obj))

    graph_file = _read_graph_file(data)

    if validate:
        require_valid(graph_file.graph)
        check_energy_bracketing(graph_file.graph)

    return graph_file


def open_graph(
    filename_or_obj: Union[str, os.PathLike, Dict[str, Any]],
    validate: Optional[bool] = True,
) -> TaskGraph:
    """Constructs and returns a ``batsched.TaskGraph`` from a graph file.

    See ``open_graph_file`` for the parameters.
    """
    return open_graph_file(filename_or_obj, validate=validate).graph


def write_graph_file(graph_file: GraphFile, filename: Union[str, os.PathLike]):
    """Writes ``graph_file`` as JSON; ``open_graph_file`` reads it back into
    an equal ``GraphFile``."""
    with open(filename, "w", encoding="utf-8", newline="\n") as f:
        f.write(_dumps(graph_file))


def open_profile(filename: Union[str, os.PathLike]) -> DischargeProfile:
    """Reads a discharge profile from CSV."""
    if _parse_file_type(filename) != "profile":
        raise GraphFileError(f"{filename} is not a profile file")
    return _read_profile_csv(filename)


def write_profile(profile: DischargeProfile, filename: Union[str, os.PathLike]):
    """Writes a discharge profile as CSV with ``start_min``,
    ``duration_min`` and ``current_mA`` columns."""
    _write_profile_csv(profile, filename)


def g3_path():
    """Location of the bundled fork-join example graph."""
    return files("batsched") / "data" / G3_FILENAME


def load_g3_file() -> GraphFile:
    """The bundled 15 task, 5 design point fork-join example with its
    230 minute deadline and battery parameters."""
    return open_graph_file(_loads(g3_path().read_text(encoding="utf-8")))


def load_g3() -> TaskGraph:
    return load_g3_file().graph
