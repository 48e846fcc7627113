import io
import os
import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
import numpy.testing as nt

import batsched as bs
from batsched.exceptions import GraphFileError, InvalidGraphError
from batsched.io._csv import _read_profile_csv, _write_profile_csv
from batsched.io._json import _dumps, _loads, _read_graph_file

try:
    import constants
except ImportError:
    from . import constants

current_path = Path(os.path.dirname(os.path.realpath(__file__)))

graphfile_g3 = current_path / "graphfiles" / "g3.json"
graphfile_single = current_path / "graphfiles" / "single_task.json"
graphfile_cycle = current_path / "graphfiles" / "cycle.json"
graphfile_unordered = current_path / "graphfiles" / "unordered.json"
graphfile_wrong_type = current_path / "graphfiles" / "wrong_type.json"
graphfile_malformed = current_path / "graphfiles" / "malformed.json"


def _document(**overrides):
    document = {
        "name": "doc",
        "deadline_min": 20,
        "battery": {"beta": 0.273},
        "tasks": [
            {
                "id": "A",
                "parents": [],
                "design_points": [
                    {"current_mA": 100, "duration_min": 1.0},
                    {"current_mA": 20, "duration_min": 2.0},
                ],
            }
        ],
    }
    document.update(overrides)
    return document


class TestGraphFile(TestCase):

    def test_open_g3(self):
        graph_file = bs.open_graph_file(graphfile_g3)
        self.assertEqual(graph_file.name, "G3")
        self.assertEqual(graph_file.battery.beta, constants.G3_BETA)
        self.assertIsNone(graph_file.battery.alpha)
        self.assertEqual(graph_file.battery.series_terms, 10)
        self.assertEqual(graph_file.graph.n_task, constants.G3_N_TASK)
        self.assertEqual(graph_file.graph.n_edge, 19)
        self.assertEqual(graph_file.graph.deadline, constants.G3_DEADLINE)

    def test_bundled_g3(self):
        self.assertEqual(bs.load_g3(), bs.open_graph(graphfile_g3))
        self.assertEqual(bs.load_g3_file().battery, bs.open_graph_file(graphfile_g3).battery)

    def test_optional_fields(self):
        graph_file = bs.open_graph_file(graphfile_single)
        self.assertEqual(graph_file.battery.alpha, 40000.0)
        self.assertEqual(graph_file.graph.task("A").label, "only task")
        self.assertEqual(graph_file.graph.voltage.values.tolist(), [[1.0, 1.0, 1.0]])

    def test_open_dict(self):
        graph = bs.open_graph(_document())
        self.assertEqual(graph.task_ids, ["A"])
        self.assertEqual(graph.deadline, 20.0)

    def test_round_trip(self):
        for filename in (graphfile_g3, graphfile_single):
            graph_file = bs.open_graph_file(filename)
            with tempfile.TemporaryDirectory() as tmp:
                out = Path(tmp) / "graph.json"
                bs.write_graph_file(graph_file, out)
                self.assertEqual(bs.open_graph_file(out), graph_file)

    def test_voltage_round_trip(self):
        document = _document()
        document["tasks"][0]["design_points"][1]["voltage"] = 0.5
        graph_file = _read_graph_file(document)
        self.assertEqual(graph_file.graph.task("A").design_points[1].voltage, 0.5)
        self.assertEqual(_read_graph_file(_loads(_dumps(graph_file))), graph_file)

    def test_written_text(self):
        text = _dumps(bs.open_graph_file(graphfile_single))
        self.assertTrue(text.endswith("}\n"))
        self.assertNotIn("voltage", text)
        self.assertIn('"label": "only task"', text)


class TestGraphFileErrors(TestCase):

    def test_malformed(self):
        with self.assertRaises(GraphFileError) as cm:
            bs.open_graph(graphfile_malformed)
        self.assertIn("line 10", str(cm.exception))

    def test_wrong_type(self):
        with self.assertRaises(GraphFileError) as cm:
            bs.open_graph(graphfile_wrong_type)
        self.assertIn("tasks[0].design_points[1].current_mA", str(cm.exception))

    def test_missing_field(self):
        document = _document()
        del document["battery"]
        with self.assertRaises(GraphFileError) as cm:
            bs.open_graph(document)
        self.assertIn("$.battery", str(cm.exception))

        document = _document()
        del document["tasks"][0]["design_points"][0]["duration_min"]
        with self.assertRaises(GraphFileError) as cm:
            bs.open_graph(document)
        self.assertIn("tasks[0].design_points[0].duration_min", str(cm.exception))

    def test_rejects_bool_and_non_finite(self):
        with self.assertRaises(GraphFileError):
            bs.open_graph(_document(deadline_min=True))
        with self.assertRaises(GraphFileError):
            bs.open_graph(_document(deadline_min=float("nan")))

    def test_invalid_battery(self):
        with self.assertRaises(GraphFileError):
            bs.open_graph(_document(battery={"beta": -1.0}))
        with self.assertRaises(GraphFileError):
            bs.open_graph(_document(battery={"beta": 0.273, "series_terms": 2.5}))

    def test_cycle(self):
        with self.assertRaises(InvalidGraphError) as cm:
            bs.open_graph(graphfile_cycle)
        self.assertTrue(any("cycle" in v for v in cm.exception.violations))

        # loading without validation leaves the report to validate
        graph = bs.open_graph(graphfile_cycle, validate=False)
        self.assertEqual(len(bs.validate(graph)), 1)

    def test_unordered(self):
        with self.assertRaises(InvalidGraphError):
            bs.open_graph(graphfile_unordered)

    def test_suffix(self):
        with self.assertRaises(GraphFileError):
            bs.open_graph(current_path / "graphfiles" / "g3.txt")
        with self.assertRaises(GraphFileError):
            bs.open_profile(graphfile_g3)

    def test_not_an_object(self):
        with self.assertRaises(GraphFileError):
            _loads("[1, 2, 3]")


class TestProfileFile(TestCase):
    profile = bs.DischargeProfile([300.0, 0.0, 120.5], [2.0, 1.5, 4.25])

    def test_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "profile.csv"
            bs.write_profile(self.profile, out)
            profile = bs.open_profile(out)
        nt.assert_array_equal(profile.currents, self.profile.currents)
        nt.assert_array_equal(profile.durations, self.profile.durations)

    def test_text(self):
        text = _write_profile_csv(self.profile)
        lines = text.split("\n")
        self.assertEqual(lines[0], "start_min,duration_min,current_mA")
        self.assertEqual(len([line for line in lines if line]), 4)
        self.assertNotIn("\r", text)

        profile = _read_profile_csv(io.StringIO(text))
        nt.assert_array_equal(profile.currents, self.profile.currents)

    def test_schedule_profile(self):
        g3 = bs.load_g3()
        result = bs.schedule(g3, bs.BatteryParams(beta=constants.G3_BETA))
        profile = _read_profile_csv(io.StringIO(_write_profile_csv(result.to_profile())))
        nt.assert_allclose(profile.total_duration, result.delta, rtol=1e-12)
        nt.assert_allclose(
            np.cumsum(profile.durations)[:-1], profile.start_times[1:], rtol=1e-12
        )

    def test_missing_column(self):
        with self.assertRaises(GraphFileError):
            _read_profile_csv(io.StringIO("start_min,current_mA\n0,1\n"))

    def test_non_numeric(self):
        with self.assertRaises(GraphFileError):
            _read_profile_csv(
                io.StringIO("start_min,duration_min,current_mA\n0,1,abc\n")
            )
