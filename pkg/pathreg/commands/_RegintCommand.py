import numpy as np

from pathreg.paths import Grid
from pathreg.regcalc import EpsilonSchedule, ibp_check, quadratic_variation
from pathreg.report import ReportEntry

from ._SuiteCommand import SuiteCommand


class RegintCommand(SuiteCommand):
    """Integration by parts of regularization integrals, and the quadratic
    variation of Brownian samples

    Each ``(g, f)`` pair of :attr:`DEFAULTS` ``["pairs"]`` gives one entry per
    direction, named ``"regint.ibp_{direction}.{g}.{f}"``. Brownian
    integrators are not in the default corpus: at grid scale their
    piecewise-linear interpolation is too rough for a ``1e-3`` tolerance.
    """

    name = "regint"

    DEFAULTS = {
        "n_points": 1025,
        "eps_max": 0.25,
        "n_levels": 8,
        "tolerance": 1e-3,
        "fixtures": {
            "constant": {"kind": "constant"},
            "linear": {"kind": "linear"},
            "quadratic": {"kind": "quadratic"},
            "sine": {"kind": "sine", "amplitude": 0.5, "frequency": 0.5},
        },
        "pairs": [
            ["constant", "linear"],
            ["linear", "linear"],
            ["linear", "sine"],
            ["sine", "quadratic"],
        ],
        "directions": ["forward", "backward"],
        "qv_paths": 100,
        "qv_points": 2**14 + 1,
        "qv_tolerance": 0.05,
    }

    def validate(self):
        p = self.params
        self._check_fixtures("fixtures")
        for pair in p["pairs"]:
            if len(pair) != 2:
                raise ValueError(f"Error in RegintCommand: bad pair {pair}")
            self._check_choices("fixture", pair, list(p["fixtures"]))
        self._check_choices("direction", p["directions"], ["forward", "backward"])
        self._check_positive("n_levels", "tolerance", "qv_tolerance", "eps_max")
        if p["n_points"] < 2 or p["qv_points"] < 2 or p["qv_paths"] < 1:
            raise ValueError("Error in RegintCommand: grids and paths too small")
        self.schedule = EpsilonSchedule.geometric(
            eps_max=p["eps_max"], n_levels=p["n_levels"]
        )
        self.grid = Grid.window(1.0, p["n_points"])

    def run(self) -> list[ReportEntry]:
        p = self.params
        paths = {
            name: self.fixture(spec, self.grid)
            for name, spec in p["fixtures"].items()
        }
        entries = []
        for g_name, f_name in p["pairs"]:
            for direction in p["directions"]:
                entry = ibp_check(
                    paths[g_name],
                    paths[f_name],
                    direction,
                    sched=self.schedule,
                    tolerance=p["tolerance"],
                )
                entry.name = f"regint.ibp_{direction}.{g_name}.{f_name}"
                self.progress(f"{entry.name} gap={entry.gap:.3g}")
                self.add_table(
                    f"ibp_{direction}_{g_name}_{f_name}",
                    ["eps", "approximant", "gap"],
                    np.column_stack(
                        [
                            entry.details["eps"],
                            entry.details["approximants"],
                            entry.details["gaps"],
                        ]
                    ),
                )
                entries.append(entry)
        entries.append(self._brownian_qv())
        return entries

    def _brownian_qv(self) -> ReportEntry:
        """Mean of ``[W](1)`` over Brownian samples on ``[0, 1]``"""
        p = self.params
        grid = Grid(0.0, 1.0, p["qv_points"])
        seeds = [self.seed(i) for i in range(p["qv_paths"])]
        values = [
            quadratic_variation(
                self.fixture({"kind": "brownian", "seed": i}, grid), 1.0
            ).value
            for i in range(p["qv_paths"])
        ]
        self.add_table("qv_brownian", ["seed", "qv"], np.column_stack([seeds, values]))
        mean = float(np.mean(values))
        self.progress(f"regint.qv_brownian mean={mean:.4g}")
        return ReportEntry(
            name="regint.qv_brownian",
            value=mean,
            reference=1.0,
            tolerance=p["qv_tolerance"],
            provenance="monte-carlo",
            seed=self.seed(),
            details={
                "n_paths": p["qv_paths"],
                "n_points": p["qv_points"],
                "std": float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
            },
        )
