import os
import warnings
from pathlib import Path
from unittest import TestCase

import numpy as np
import numpy.testing as nt

import batsched as bs
from batsched.exceptions import InvalidArgumentError, InvalidGraphError
from batsched.graph import check_energy_bracketing, require_valid

try:
    import constants
except ImportError:
    from . import constants

current_path = Path(os.path.dirname(os.path.realpath(__file__)))

graphfile_g3 = current_path / "graphfiles" / "g3.json"


def _two_task_graph(edges=(("A", "B"),), deadline=10.0):
    a = bs.Task("A", [bs.DesignPoint(100.0, 1.0), bs.DesignPoint(20.0, 2.0)])
    b = bs.Task("B", [bs.DesignPoint(80.0, 2.0), bs.DesignPoint(10.0, 5.0)])
    return bs.TaskGraph([a, b], edges=edges, deadline=deadline)


class TestTaskGraph(TestCase):
    g3 = bs.open_graph(graphfile_g3)

    def test_dimensions(self):
        self.assertEqual(self.g3.n_task, constants.G3_N_TASK)
        self.assertEqual(self.g3.n_design_point, constants.G3_N_DESIGN_POINT)
        self.assertEqual(self.g3.deadline, constants.G3_DEADLINE)
        self.assertEqual(self.g3.current.dims, ("n_task", "n_design_point"))
        self.assertEqual(self.g3.duration.shape, (15, 5))
        nt.assert_array_equal(self.g3.dataset["design_point"].values, [1, 2, 3, 4, 5])
        self.assertEqual(list(self.g3.dataset["task_id"].values), self.g3.task_ids)

    def test_matrices(self):
        t4 = self.g3.index("T4")
        nt.assert_array_equal(self.g3.current.values[t4], [938, 576, 295, 124, 34])
        nt.assert_array_equal(self.g3.duration.values[t4], [5.3, 8.2, 10.9, 13.6, 16.0])
        nt.assert_array_equal(self.g3.voltage.values, np.ones((15, 5)))

    def test_column_totals(self):
        nt.assert_allclose(
            self.g3.duration.values.sum(axis=0), constants.G3_COLUMN_TOTALS, rtol=1e-12
        )

    def test_parents_children(self):
        self.assertEqual(sorted(self.g3.parents("T14")), ["T11", "T12", "T13"])
        self.assertEqual(sorted(self.g3.children("T8")), ["T10", "T9"])
        self.assertEqual(self.g3.parents("T1"), [])

    def test_from_matrices(self):
        graph = bs.TaskGraph.from_matrices(
            ["A", "B"],
            currents=[[100.0, 20.0], [80.0, 10.0]],
            durations=[[1.0, 2.0], [2.0, 5.0]],
            edges=[("A", "B")],
            deadline=10.0,
        )
        self.assertEqual(graph, _two_task_graph())

    def test_equality(self):
        self.assertEqual(_two_task_graph(), _two_task_graph())
        self.assertNotEqual(_two_task_graph(), _two_task_graph(deadline=11.0))
        self.assertNotEqual(_two_task_graph(), _two_task_graph(edges=()))

    def test_with_deadline(self):
        graph = self.g3.with_deadline(150.0)
        self.assertEqual(graph.deadline, 150.0)
        self.assertEqual(graph.tasks, self.g3.tasks)
        self.assertEqual(self.g3.deadline, constants.G3_DEADLINE)

    def test_subgraph(self):
        sub = self.g3.subgraph(["T14", "T15", "T1"])
        self.assertEqual(sub.task_ids, ["T1", "T14", "T15"])
        self.assertEqual(sub.edges, (("T14", "T15"),))

    def test_unknown_task(self):
        with self.assertRaises(InvalidArgumentError):
            self.g3.index("T99")

    def test_ragged_design_points(self):
        a = bs.Task("A", [bs.DesignPoint(100.0, 1.0), bs.DesignPoint(20.0, 2.0)])
        b = bs.Task("B", [bs.DesignPoint(80.0, 2.0)])
        graph = bs.TaskGraph([a, b], deadline=10.0)
        with self.assertRaises(InvalidGraphError):
            graph.current


class TestDerivedQuantities(TestCase):
    g3 = bs.open_graph(graphfile_g3)

    def test_mean_current(self):
        nt.assert_allclose(
            bs.mean_current(self.g3.task("T4")), constants.G3_MEAN_CURRENT_T4, rtol=1e-12
        )
        nt.assert_allclose(
            bs.mean_current(self.g3.task("T2")), constants.G3_MEAN_CURRENT_T2, rtol=1e-12
        )
        self.assertEqual(bs.mean_current(bs.Task("A", [bs.DesignPoint(42.0, 1.0)])), 42.0)

    def test_mean_energy(self):
        nt.assert_allclose(
            bs.mean_energy(self.g3.task("T5")), constants.G3_MEAN_ENERGY_T5, rtol=1e-12
        )
        nt.assert_allclose(
            bs.mean_energy(self.g3.task("T4")), constants.G3_MEAN_ENERGY_T4, rtol=1e-12
        )
        self.assertEqual(bs.mean_energy(bs.Task("A", [bs.DesignPoint(100.0, 2.0)])), 200.0)

    def test_mean_energy_scales_with_current(self):
        task = self.g3.task("T7")
        doubled = bs.Task(
            "T7", [bs.DesignPoint(2 * dp.current, dp.duration) for dp in task.design_points]
        )
        nt.assert_allclose(bs.mean_energy(doubled), 2 * bs.mean_energy(task), rtol=1e-12)

    def test_mean_energy_uses_voltage(self):
        task = bs.Task("A", [bs.DesignPoint(100.0, 2.0, voltage=1.5)])
        self.assertEqual(bs.mean_energy(task), 300.0)

    def test_energy_order(self):
        order = bs.energy_order(self.g3)
        self.assertEqual(order[: len(constants.G3_ENERGY_ORDER_HEAD)], constants.G3_ENERGY_ORDER_HEAD)
        self.assertEqual(sorted(order), sorted(self.g3.task_ids))
        nt.assert_allclose(
            bs.mean_energy(self.g3.task("T15")), constants.G3_MEAN_ENERGY_T15, rtol=1e-12
        )

    def test_energy_order_ties(self):
        graph = bs.TaskGraph.from_matrices(
            ["B", "C", "A"],
            currents=[[10.0], [3.0], [10.0]],
            durations=[[0.5], [1.0], [0.5]],
            deadline=10.0,
        )
        # mean energies 5, 3, 5
        self.assertEqual(bs.energy_order(graph), ["C", "A", "B"])

    def test_descendants(self):
        self.assertEqual(bs.descendants(self.g3, "T15"), {"T15"})
        self.assertEqual(bs.descendants(self.g3, "T14"), {"T14", "T15"})
        self.assertEqual(
            bs.descendants(self.g3, "T8"),
            {"T8", "T9", "T10", "T11", "T12", "T13", "T14", "T15"},
        )
        self.assertEqual(bs.descendants(self.g3, "T1"), set(self.g3.task_ids))
        with self.assertRaises(InvalidArgumentError):
            bs.descendants(self.g3, "nope")

    def test_descendants_transitive(self):
        for v in self.g3.task_ids:
            below = bs.descendants(self.g3, v)
            for u in below:
                self.assertTrue(bs.descendants(self.g3, u) <= below)

    def test_current_extremes(self):
        self.assertEqual(bs.current_extremes(self.g3), constants.G3_CURRENT_EXTREMES)
        single = bs.TaskGraph([bs.Task("A", [bs.DesignPoint(7.0, 1.0)])], deadline=2.0)
        self.assertEqual(bs.current_extremes(single), (7.0, 7.0))

    def test_energy_bounds(self):
        emin, emax = bs.energy_bounds(self.g3)
        nt.assert_allclose(emin, constants.G3_EMIN, rtol=1e-12)
        nt.assert_allclose(emax, constants.G3_EMAX, rtol=1e-12)

        single = bs.TaskGraph([bs.Task("A", [bs.DesignPoint(100.0, 1.0)])], deadline=2.0)
        self.assertEqual(bs.energy_bounds(single), (100.0, 100.0))

    def test_energy_bracketing(self):
        energy = self.g3.energy.values
        self.assertTrue(np.all(energy[:, -1:] <= energy))
        self.assertTrue(np.all(energy <= energy[:, :1]))
        self.assertTrue(check_energy_bracketing(self.g3))


class TestValidation(TestCase):

    def test_g3_is_valid(self):
        g3 = bs.open_graph(graphfile_g3, validate=False)
        self.assertEqual(bs.validate(g3), [])
        self.assertIs(require_valid(g3), g3)

    def test_cycle(self):
        graph = _two_task_graph(edges=[("A", "B"), ("B", "A")])
        violations = bs.validate(graph)
        self.assertEqual(len(violations), 1)
        self.assertIn("cycle", violations[0])
        self.assertIn("A", violations[0])
        self.assertIn("B", violations[0])
        with self.assertRaises(InvalidGraphError):
            require_valid(graph)

    def test_duration_order(self):
        task = bs.Task("A", [bs.DesignPoint(100.0, 5.0), bs.DesignPoint(20.0, 4.0)])
        violations = bs.validate(bs.TaskGraph([task], deadline=10.0))
        self.assertEqual(len(violations), 1)
        self.assertIn("durations must be strictly ascending", violations[0])

    def test_current_order(self):
        task = bs.Task("A", [bs.DesignPoint(20.0, 1.0), bs.DesignPoint(20.0, 2.0)])
        violations = bs.validate(bs.TaskGraph([task], deadline=10.0))
        self.assertIn("currents must be strictly descending", violations[0])

    def test_positivity(self):
        task = bs.Task("A", [bs.DesignPoint(100.0, 1.0), bs.DesignPoint(-1.0, 2.0)])
        violations = bs.validate(bs.TaskGraph([task], deadline=10.0))
        self.assertTrue(any("positive and finite" in v for v in violations))

    def test_uniform_design_points(self):
        a = bs.Task("A", [bs.DesignPoint(100.0, 1.0), bs.DesignPoint(20.0, 2.0)])
        b = bs.Task("B", [bs.DesignPoint(80.0, 2.0)])
        violations = bs.validate(bs.TaskGraph([a, b], deadline=10.0))
        self.assertTrue(any("common number of design points" in v for v in violations))

    def test_deadline(self):
        for deadline in (0.0, -5.0, np.inf):
            violations = bs.validate(_two_task_graph(deadline=deadline))
            self.assertTrue(any("deadline" in v for v in violations))

    def test_edges(self):
        self.assertTrue(
            any("unknown" in v for v in bs.validate(_two_task_graph(edges=[("A", "Z")])))
        )
        self.assertTrue(
            any("self-loop" in v for v in bs.validate(_two_task_graph(edges=[("A", "A")])))
        )
        self.assertTrue(
            any(
                "duplicate edge" in v
                for v in bs.validate(_two_task_graph(edges=[("A", "B"), ("A", "B")]))
            )
        )

    def test_duplicate_ids(self):
        a = bs.Task("A", [bs.DesignPoint(100.0, 1.0)])
        violations = bs.validate(bs.TaskGraph([a, a], deadline=10.0))
        self.assertTrue(any("duplicate task ids" in v for v in violations))

    def test_empty(self):
        self.assertEqual(bs.validate(bs.TaskGraph([], deadline=1.0)), ["graph has no tasks"])

    def test_energy_bracketing_warning(self):
        # column 2 uses more energy than column 1
        task = bs.Task("A", [bs.DesignPoint(100.0, 1.0), bs.DesignPoint(90.0, 2.0)])
        graph = bs.TaskGraph([task], deadline=10.0)
        self.assertEqual(bs.validate(graph), [])
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            self.assertFalse(check_energy_bracketing(graph))
        self.assertTrue(any(issubclass(w.category, RuntimeWarning) for w in caught))


class TestGenerators(TestCase):

    def test_scaled_design_points(self):
        dps = bs.scaled_design_points(917.0, 7.3, factors=(1.0, 0.5))
        self.assertEqual(dps[0], bs.DesignPoint(917.0, 7.3, 1.0))
        nt.assert_allclose([dps[1].current, dps[1].duration], [114.625, 14.6], rtol=1e-12)
        self.assertEqual(dps[1].voltage, 0.5)

    def test_invalid_factors(self):
        with self.assertRaises(InvalidArgumentError):
            bs.scaled_design_points(100.0, 1.0, factors=(1.0, 1.0))
        with self.assertRaises(InvalidArgumentError):
            bs.scaled_design_points(100.0, 1.0, factors=(1.2, 0.5))
        with self.assertRaises(InvalidArgumentError):
            bs.scaled_design_points(100.0, 1.0, factors=())

    def test_random_graphs_are_valid(self):
        for seed in range(30):
            n = 1 + seed % 7
            m = 1 + seed % 5
            graph = bs.random_task_graph(n, m, seed=seed)
            self.assertEqual(bs.validate(graph), [], msg=f"seed {seed}")
            self.assertEqual(graph.n_design_point, m)

            fastest = graph.duration.values[:, 0]
            slowest = graph.duration.values[:, -1]
            self.assertGreaterEqual(
                graph.deadline + 1e-9, fastest.sum() + np.max(slowest - fastest)
            )

    def test_random_graph_is_seeded(self):
        self.assertEqual(bs.random_task_graph(6, 3, seed=5), bs.random_task_graph(6, 3, seed=5))

    def test_fork_join_graph(self):
        graph = bs.fork_join_graph(n_stage=2, width=3, seed=1)
        self.assertEqual(graph.n_task, 9)
        self.assertEqual(bs.validate(graph), [])
        self.assertEqual(sorted(graph.children("T1")), ["T2", "T3", "T4"])
        self.assertEqual(sorted(graph.parents("T5")), ["T2", "T3", "T4"])
        self.assertEqual(bs.descendants(graph, "T9"), {"T9"})
