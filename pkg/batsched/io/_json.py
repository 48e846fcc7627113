import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List

from batsched.battery.model import BatteryParams
from batsched.constants import DEFAULT_SERIES_TERMS
from batsched.exceptions import GraphFileError, InvalidArgumentError
from batsched.graph.taskgraph import DesignPoint, Task, TaskGraph


@dataclass(frozen=True)
class GraphFile:
    """Contents of a graph file: the task graph with its deadline and the
    battery it runs on."""

    name: str
    graph: TaskGraph
    battery: BatteryParams


def _field(obj: Dict[str, Any], key: str, path: str, required: bool = True):
    if not isinstance(obj, dict):
        raise GraphFileError(f"{path}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        if required:
            raise GraphFileError(f"{path}.{key}: missing required field")
        return None
    return obj[key]


def _number(value, path: str) -> float:
    # bool is an int subclass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFileError(f"{path}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise GraphFileError(f"{path}: expected a finite number, got {value!r}")
    return float(value)


def _list(value, path: str) -> List[Any]:
    if not isinstance(value, list):
        raise GraphFileError(f"{path}: expected a list, got {type(value).__name__}")
    return value


def _read_design_point(obj, path: str) -> DesignPoint:
    current = _number(_field(obj, "current_mA", path), f"{path}.current_mA")
    duration = _number(_field(obj, "duration_min", path), f"{path}.duration_min")
    voltage = _field(obj, "voltage", path, required=False)
    if voltage is None:
        return DesignPoint(current, duration)
    return DesignPoint(current, duration, _number(voltage, f"{path}.voltage"))


def _read_battery(obj, path: str) -> BatteryParams:
    beta = _number(_field(obj, "beta", path), f"{path}.beta")

    alpha = _field(obj, "alpha_mA_min", path, required=False)
    if alpha is not None:
        alpha = _number(alpha, f"{path}.alpha_mA_min")

    series_terms = _field(obj, "series_terms", path, required=False)
    if series_terms is None:
        series_terms = DEFAULT_SERIES_TERMS
    elif isinstance(series_terms, bool) or not isinstance(series_terms, int):
        raise GraphFileError(f"{path}.series_terms: expected an integer, got {series_terms!r}")

    try:
        return BatteryParams(beta=beta, alpha=alpha, series_terms=series_terms)
    except InvalidArgumentError as e:
        raise GraphFileError(f"{path}: {e}") from e


def _read_graph_file(data: Dict[str, Any]) -> GraphFile:
    """Parses the decoded JSON document of a graph file.

    The graph is not validated here; structural problems are left for
    ``batsched.validate`` to report.
    """
    path = "$"
    name = _field(data, "name", path, required=False) or ""
    if not isinstance(name, str):
        raise GraphFileError(f"{path}.name: expected a string, got {name!r}")

    deadline = _number(_field(data, "deadline_min", path), f"{path}.deadline_min")
    battery = _read_battery(_field(data, "battery", path), f"{path}.battery")

    tasks = []
    edges = []
    for i, task in enumerate(_list(_field(data, "tasks", path), f"{path}.tasks")):
        task_path = f"tasks[{i}]"
        task_id = _field(task, "id", task_path)
        if not isinstance(task_id, str) or not task_id:
            raise GraphFileError(f"{task_path}.id: expected a non-empty string, got {task_id!r}")

        label = _field(task, "label", task_path, required=False) or ""
        if not isinstance(label, str):
            raise GraphFileError(f"{task_path}.label: expected a string, got {label!r}")

        parents = _field(task, "parents", task_path, required=False) or []
        for j, parent in enumerate(_list(parents, f"{task_path}.parents")):
            if not isinstance(parent, str):
                raise GraphFileError(
                    f"{task_path}.parents[{j}]: expected a task id, got {parent!r}"
                )
            edges.append((parent, task_id))

        design_points = [
            _read_design_point(dp, f"{task_path}.design_points[{j}]")
            for j, dp in enumerate(
                _list(_field(task, "design_points", task_path), f"{task_path}.design_points")
            )
        ]
        tasks.append(Task(task_id, design_points, label=label))

    return GraphFile(
        name=name, graph=TaskGraph(tasks, edges=edges, deadline=deadline), battery=battery
    )


def _encode_graph_file(graph_file: GraphFile) -> Dict[str, Any]:
    """Encodes a ``GraphFile`` as a JSON ready dict, the inverse of
    ``_read_graph_file``."""
    graph = graph_file.graph
    battery = graph_file.battery

    battery_dict = {"beta": battery.beta}
    if battery.alpha is not None:
        battery_dict["alpha_mA_min"] = battery.alpha
    battery_dict["series_terms"] = battery.series_terms

    parents = {task_id: [] for task_id in graph.task_ids}
    for parent, child in graph.edges:
        parents[child].append(parent)

    tasks = []
    for task in graph.tasks:
        design_points = []
        for dp in task.design_points:
            entry = {"current_mA": dp.current, "duration_min": dp.duration}
            if dp.voltage != 1.0:
                entry["voltage"] = dp.voltage
            design_points.append(entry)

        entry = {"id": task.id}
        if task.label:
            entry["label"] = task.label
        entry["parents"] = parents[task.id]
        entry["design_points"] = design_points
        tasks.append(entry)

    return {
        "name": graph_file.name,
        "deadline_min": graph.deadline,
        "battery": battery_dict,
        "tasks": tasks,
    }


def _loads(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFileError(f"line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise GraphFileError(f"$: expected an object, got {type(data).__name__}")
    return data


def _dumps(graph_file: GraphFile) -> str:
    return json.dumps(_encode_graph_file(graph_file), indent=2) + "\n"
