import math

import numpy as np

from pathreg.approx import endpoint_convergence, fejer_checks, fejer_sup_error
from pathreg.paths import Grid
from pathreg.report import ReportEntry

from ._SuiteCommand import SuiteCommand


class FejerCommand(SuiteCommand):
    """Fejer operator diagnostics on a fixture corpus, the sup error on
    Brownian samples, and the endpoint functional"""

    name = "fejer"

    DEFAULTS = {
        "n_points": 1025,
        "fixtures": {
            "sine": {"kind": "sine", "amplitude": 0.5, "frequency": 0.5},
            "quadratic": {"kind": "quadratic"},
            "brownian": {"kind": "brownian", "seed": 11},
            "offset_sine": {
                "kind": "sine",
                "amplitude": 0.3,
                "frequency": 1.5,
                "present": 0.2,
            },
        },
        "n_values": [4, 8, 16, 32, 64],
        "trend_fixtures": ["sine"],
        "brownian_samples": 6,
        "brownian_n_values": [8, 16, 32, 64, 128],
        "max_ratio": 0.5,
        "endpoint_fixture": "sine",
    }

    def validate(self):
        p = self.params
        self._check_fixtures("fixtures")
        self._check_choices("fixture", p["trend_fixtures"], list(p["fixtures"]))
        self._check_choices("fixture", [p["endpoint_fixture"]], list(p["fixtures"]))
        self._check_positive("n_values", "brownian_samples", "brownian_n_values")
        for key in ["n_values", "brownian_n_values"]:
            if 8 not in p[key]:
                raise ValueError(f"Error in FejerCommand: {key} must contain 8")
        if 64 not in p["n_values"]:
            raise ValueError("Error in FejerCommand: n_values must contain 64")
        if not (0.0 < p["max_ratio"] < 1.0):
            raise ValueError(f"Error in FejerCommand: max_ratio={p['max_ratio']}")
        self.grid = Grid.window(1.0, p["n_points"])

    def run(self) -> list[ReportEntry]:
        p = self.params
        paths = {
            name: self.fixture(spec, self.grid)
            for name, spec in p["fixtures"].items()
        }
        entries = fejer_checks(
            paths,
            n_values=tuple(p["n_values"]),
            trend_fixtures=p["trend_fixtures"],
        )
        for entry in entries:
            if entry.name.startswith("fejer.sup_error."):
                key = entry.name.split(".")[-1]
                self._sup_error_table(key, entry)
        entries.append(self._brownian_ratio())
        entry = endpoint_convergence(paths[p["endpoint_fixture"]])
        self.add_table(
            "endpoint",
            ["eps", "error"],
            np.column_stack([entry.details["eps"], entry.details["errors"]]),
        )
        entries.append(entry)
        return entries

    def _sup_error_table(self, key: str, entry: ReportEntry):
        n_values = entry.details["n"]
        errors = entry.details["sup_error"]
        self.trend("n", n_values, errors)
        self.add_table(
            f"sup_error_{key}", ["n", "sup_error"], np.column_stack([n_values, errors])
        )

    def _brownian_ratio(self) -> ReportEntry:
        """Mean over Brownian samples of ``|T_n eta - eta|`` at the largest
        order relative to ``n = 8``"""
        p = self.params
        n_values = tuple(p["brownian_n_values"])
        n_fine = max(n_values)
        ratios = []
        decreasing = True
        rows = []
        for i in range(p["brownian_samples"]):
            eta = self.fixture({"kind": "brownian", "seed": i}, self.grid)
            entry = fejer_sup_error(eta, n_values=n_values, n_coarse=8, n_fine=n_fine)
            errors = entry.details["sup_error"]
            decreasing = decreasing and errors[-1] < errors[0]
            ratios.append(entry.value)
            rows.extend([[self.seed(i), n, e] for n, e in zip(n_values, errors)])
        self.add_table("sup_error_brownian", ["seed", "n", "sup_error"], rows)
        mean = float(np.mean(ratios))
        return ReportEntry(
            name="fejer.sup_error_ratio.brownian",
            value=mean,
            reference=0.0,
            tolerance=p["max_ratio"],
            gap=mean if decreasing else math.inf,
            provenance="trend",
            seed=self.seed(),
            details={
                "n_coarse": 8,
                "n_fine": n_fine,
                "ratios": ratios,
                "decreasing": decreasing,
            },
        )
