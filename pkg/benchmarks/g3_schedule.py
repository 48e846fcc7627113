import os
from pathlib import Path

import batsched as bs

current_path = Path(os.path.dirname(os.path.realpath(__file__))).parents[0]

graph_path = current_path / "test" / "graphfiles" / "g3.json"


class G3Schedule:

    params = [100.0, 150.0, 230.0]
    param_names = ["deadline"]

    def setup(self, deadline):
        graph_file = bs.open_graph_file(graph_path)
        self.graph = graph_file.graph.with_deadline(deadline)
        self.battery = graph_file.battery

    def time_schedule(self, deadline):
        """Time of the full battery-aware scheduling loop"""
        bs.schedule(self.graph, self.battery)

    def time_schedule_parallel(self, deadline):
        """Time of the scheduling loop with concurrent windows"""
        bs.schedule(self.graph, self.battery, bs.ScheduleOptions(parallel=True))

    def time_baseline(self, deadline):
        """Time of the minimum energy baseline"""
        bs.baseline_schedule(self.graph, self.battery)

    def peakmem_schedule(self, deadline):
        """Peak memory usage of the scheduling loop"""
        result = bs.schedule(self.graph, self.battery)
