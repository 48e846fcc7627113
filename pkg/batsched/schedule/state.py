from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Sequence

import numpy as np

from batsched.constants import INT_DTYPE
from batsched.exceptions import InvalidArgumentError


class TaskState(IntEnum):
    """Allocation state of a task."""

    FREE = 0
    TAGGED = 1
    FIXED = 2


@dataclass(frozen=True)
class Window:
    """Contiguous range of eligible design point columns ``start .. m``
    (1-based)."""

    start: int
    n_design_point: int

    def __post_init__(self):
        if not 1 <= self.start <= self.n_design_point:
            raise InvalidArgumentError(
                f"Window start must lie in [1, {self.n_design_point}], got {self.start}"
            )

    @property
    def columns(self) -> range:
        return range(self.start, self.n_design_point + 1)

    def __str__(self):
        return f"{self.start}:{self.n_design_point}"


@dataclass(frozen=True)
class ScoreBreakdown:
    """Suitability of one candidate design point; lower is better."""

    sr: float
    cr: float
    enr: float
    cif: float
    dpf: float

    @property
    def b(self) -> float:
        return self.sr + self.cr + self.enr + self.cif + self.dpf


@dataclass
class AssignmentState:
    """Design point selection for a fixed sequence.

    Rows are bound to sequence positions. ``columns`` holds the 0-based
    selected column of each row, the one-hot selection matrix is derived from
    it. ``energy_state`` is the per-row state in the energy ordered vector,
    where only ``FREE`` and ``FIXED`` are used.
    """

    sequence: List[str]
    n_design_point: int
    columns: np.ndarray
    task_state: np.ndarray
    energy_state: np.ndarray
    scores: Dict[int, Dict[int, ScoreBreakdown]] = field(default_factory=dict)

    @classmethod
    def initial(cls, sequence: Sequence[str], n_design_point: int):
        """Every task free at column m."""
        n = len(sequence)
        return cls(
            sequence=list(sequence),
            n_design_point=n_design_point,
            columns=np.full(n, n_design_point - 1, dtype=INT_DTYPE),
            task_state=np.full(n, TaskState.FREE, dtype=INT_DTYPE),
            energy_state=np.full(n, TaskState.FREE, dtype=INT_DTYPE),
        )

    @property
    def n_task(self) -> int:
        return len(self.sequence)

    @property
    def selection(self) -> np.ndarray:
        """One-hot selection matrix of shape ``(n_task, n_design_point)``."""
        selection = np.zeros((self.n_task, self.n_design_point), dtype=INT_DTYPE)
        selection[np.arange(self.n_task), self.columns] = 1
        return selection

    @property
    def chosen(self) -> Dict[str, int]:
        """1-based design point column of each task id."""
        return {task_id: int(c) + 1 for task_id, c in zip(self.sequence, self.columns)}

    @property
    def tagged(self) -> np.ndarray:
        return np.flatnonzero(self.task_state == TaskState.TAGGED)

    @property
    def is_fixed(self) -> bool:
        return bool(np.all(self.task_state == TaskState.FIXED))

    def tag(self, position: int, column: int):
        if self.tagged.size:
            raise RuntimeError(f"Row {int(self.tagged[0])} is already tagged")
        self.columns[position] = column
        self.task_state[position] = TaskState.TAGGED
        self.energy_state[position] = TaskState.FIXED

    def untag(self, position: int):
        self.columns[position] = self.n_design_point - 1
        self.task_state[position] = TaskState.FREE
        self.energy_state[position] = TaskState.FREE

    def fix(self, position: int, column: int):
        self.columns[position] = column
        self.task_state[position] = TaskState.FIXED
        self.energy_state[position] = TaskState.FIXED

    def copy(self):
        return AssignmentState(
            sequence=list(self.sequence),
            n_design_point=self.n_design_point,
            columns=self.columns.copy(),
            task_state=self.task_state.copy(),
            energy_state=self.energy_state.copy(),
            scores={k: dict(v) for k, v in self.scores.items()},
        )
