import math
from typing import Optional

import numpy as np

from pathreg.bsde import (
    SDE_SCENARIOS,
    TERMINALS,
    apriori_check,
    apriori_stability,
    bsde_solve,
    bsde_value,
    comparison_check,
    limit_diagnostic,
    make_problem,
    make_sde,
    sde_convergence,
)
from pathreg.report import ReportEntry
from pathreg.simflow import SimConfig

from ._SuiteCommand import SuiteCommand


class BsdeCommand(SuiteCommand):
    """Forward SDEs with mollified coefficients and regression BSDE solvers

    Entries:

    - ``"bsde.feynman_kac.{scenario}"``: with a zero generator, ``Y_0`` equals
      the sample mean of ``g(X_T)`` up to rounding.
    - ``"bsde.linear_oracle"``: relative gap of ``Y_0`` to ``exp(-r T)`` for
      ``f = -r y``, ``g = 1``.
    - ``"bsde.comparison.{scenario}"``: the subsolution (``dK = -k dt``) stays
      below the supersolution (``dK = k dt``) at the sample points.
    - ``"bsde.apriori.nu{nu}"`` and ``"bsde.apriori_stability"``: implied
      constants of the a priori estimate and their spread.
    - ``"bsde.sde_convergence"`` and ``"bsde.limit.q{q}"`` (``q1p5`` for
      1.5): decreasing errors of the mollified problems.
    """

    name = "bsde"

    DEFAULTS = {
        "n_steps": 64,
        "n_paths": 10000,
        "degree": 4,
        "x0": 0.5,
        "fk_scenarios": ["brownian", "ou", "gbm", "abs_drift"],
        "fk_terminal": "sin",
        "fk_tolerance": 1e-12,
        "r": 0.1,
        "linear_tolerance": 0.01,
        "comparison_scenarios": ["brownian", "ou", "abs_drift"],
        "comparison_terminal": "sin",
        "comparison_times": [0.0, 0.5],
        "k_rate": 0.2,
        "n_se": 4.0,
        "apriori_nus": [0.5, 0.75, 1.0, 1.25, 1.5],
        "apriori_steps": 16,
        "apriori_paths": 4000,
        "apriori_ratio": 2.0,
        "sde_scenario": "abs_drift",
        "sde_orders": [4, 16, 64],
        "sde_steps": 32,
        "sde_paths": 2000,
        "limit_terminal": "abs",
        "limit_x0": 0.1,
        "limit_orders": [4, 16, 64],
        "limit_ref": 256,
        "limit_q": [1.0, 1.5],
        "limit_steps": 16,
        "limit_paths": 4000,
        "seed_offsets": {
            "feynman_kac": 0,
            "linear_oracle": 1,
            "comparison": 5,
            "apriori": 7,
            "sde_convergence": 2,
            "limit": 5,
        },
    }

    def validate(self):
        p = self.params
        self._check_choices("scenario", p["fk_scenarios"], SDE_SCENARIOS)
        self._check_choices("scenario", p["comparison_scenarios"], SDE_SCENARIOS)
        self._check_choices("scenario", [p["sde_scenario"]], SDE_SCENARIOS)
        self._check_choices(
            "terminal",
            [p["fk_terminal"], p["comparison_terminal"], p["limit_terminal"]],
            TERMINALS,
        )
        self._check_positive(
            "n_steps",
            "n_paths",
            "fk_tolerance",
            "linear_tolerance",
            "k_rate",
            "n_se",
            "apriori_nus",
            "apriori_steps",
            "apriori_paths",
            "apriori_ratio",
            "sde_orders",
            "sde_steps",
            "sde_paths",
            "limit_orders",
            "limit_ref",
            "limit_steps",
            "limit_paths",
        )
        if not (0 <= p["degree"] <= 4):
            raise ValueError(f"Error in BsdeCommand: degree={p['degree']}")
        for t in p["comparison_times"]:
            if not (0.0 <= t < 1.0):
                raise ValueError(f"Error in BsdeCommand: comparison time {t}")
        for q in p["limit_q"]:
            if not (1.0 <= q < 2.0):
                raise ValueError(f"Error in BsdeCommand: q={q} outside [1, 2)")
        if max(p["limit_orders"]) >= p["limit_ref"]:
            raise ValueError("Error in BsdeCommand: limit_ref must exceed limit_orders")
        self._check_choices(
            "seed_offsets",
            list(p["seed_offsets"]),
            list(self.DEFAULTS["seed_offsets"]),
        )
        p["seed_offsets"] = {**self.DEFAULTS["seed_offsets"], **p["seed_offsets"]}

    def _cfg(
        self,
        check: str,
        n_steps: Optional[int] = None,
        n_paths: Optional[int] = None,
    ) -> SimConfig:
        p = self.params
        return self.sim_config(
            n_steps or p["n_steps"],
            n_paths or p["n_paths"],
            seed_offset=int(p["seed_offsets"][check]),
        )

    def run(self) -> list[ReportEntry]:
        entries = []
        entries.extend(self._feynman_kac())
        entries.append(self._linear_oracle())
        entries.extend(self._comparison())
        entries.extend(self._apriori())
        entries.append(self._sde_convergence())
        entries.extend(self._limit())
        return entries

    def _feynman_kac(self) -> list[ReportEntry]:
        p = self.params
        cfg = self._cfg("feynman_kac")
        entries = []
        rows = []
        for i, scenario in enumerate(p["fk_scenarios"]):
            problem = make_problem(
                scenario, p["fk_terminal"], "zero", params={"x0": p["x0"]}
            )
            sol = bsde_solve(problem, cfg=cfg, degree=p["degree"])
            mean_g = float(np.mean(problem.terminal(sol.sample.terminal)))
            rows.append([i, sol.y0, mean_g, abs(sol.y0 - mean_g), sol.y0_se])
            self.progress(f"{problem.label}: Y0={sol.y0:.6g} +/- {sol.y0_se:.2g}")
            entries.append(
                ReportEntry(
                    name=f"bsde.feynman_kac.{scenario}",
                    value=sol.y0,
                    reference=mean_g,
                    tolerance=p["fk_tolerance"],
                    provenance="monte-carlo",
                    seed=cfg.seed,
                    details={"problem": problem.to_dict(), "y0_se": sol.y0_se},
                )
            )
        self.add_table(
            "feynman_kac", ["scenario", "y0", "mean_g", "gap", "y0_se"], rows
        )
        return entries

    def _linear_oracle(self) -> ReportEntry:
        p = self.params
        cfg = self._cfg("linear_oracle")
        problem = make_problem(
            "brownian", "one", "linear", params={"r": p["r"], "x0": p["x0"]}
        )
        sol = bsde_solve(problem, cfg=cfg, degree=p["degree"])
        exact = math.exp(-p["r"] * cfg.T)
        self.add_table(
            "linear_oracle",
            ["t", "mean_Y", "exact"],
            np.column_stack(
                [
                    sol.times,
                    np.mean(sol.Y, axis=0),
                    np.exp(-p["r"] * (cfg.T - sol.times)),
                ]
            ),
        )
        return ReportEntry(
            name="bsde.linear_oracle",
            value=sol.y0,
            reference=exact,
            tolerance=p["linear_tolerance"],
            gap=abs(sol.y0 - exact) / exact,
            provenance="closed-form",
            seed=cfg.seed,
            details={"r": p["r"], "y0_se": sol.y0_se},
        )

    def _comparison(self) -> list[ReportEntry]:
        p = self.params
        cfg = self._cfg("comparison")
        points = [(t, [p["x0"]]) for t in p["comparison_times"]]
        entries = []
        for scenario in p["comparison_scenarios"]:
            problem = make_problem(
                scenario,
                p["comparison_terminal"],
                "zero",
                params={"k_rate": p["k_rate"]},
            )

            def _value(flavor):
                return lambda t, x: bsde_value(
                    problem, t, x, cfg=cfg, flavor=flavor, degree=p["degree"]
                )

            entry = comparison_check(
                _value("sub"),
                _value("super"),
                points,
                n_se=p["n_se"],
                name=f"bsde.comparison.{scenario}",
            )
            entry.seed = cfg.seed
            self.add_table(
                f"comparison_{scenario}",
                ["t", "x", "sub", "super", "margin", "se"],
                entry.details["rows"],
            )
            entries.append(entry)
        return entries

    def _apriori(self) -> list[ReportEntry]:
        p = self.params
        cfg = self._cfg("apriori", p["apriori_steps"], p["apriori_paths"])
        entries = []
        for nu in p["apriori_nus"]:
            problem = make_problem("brownian", "sin", "zero", params={"nu": nu})
            sol = bsde_solve(problem, cfg=cfg, degree=p["degree"])
            tag = f"nu{nu:g}".replace(".", "p")
            entry = apriori_check(sol, problem, name=f"bsde.apriori.{tag}")
            entry.seed = cfg.seed
            entries.append(entry)
        stability = apriori_stability(entries, max_ratio=p["apriori_ratio"])
        stability.seed = cfg.seed
        self.add_table(
            "apriori",
            ["nu", "constant"],
            [[nu, e.value] for nu, e in zip(p["apriori_nus"], entries)],
        )
        return entries + [stability]

    def _sde_convergence(self) -> ReportEntry:
        p = self.params
        cfg = self._cfg("sde_convergence", p["sde_steps"], p["sde_paths"])
        entry = sde_convergence(
            make_sde(p["sde_scenario"]),
            0.0,
            p["x0"],
            orders=tuple(p["sde_orders"]),
            cfg=cfg,
        )
        self.trend("n", entry.details["n"], entry.details["error"])
        self.add_table(
            "sde_convergence",
            ["n", "error"],
            np.column_stack([entry.details["n"], entry.details["error"]]),
        )
        return entry

    def _limit(self) -> list[ReportEntry]:
        p = self.params
        cfg = self._cfg("limit", p["limit_steps"], p["limit_paths"])
        problem = make_problem(
            "brownian", p["limit_terminal"], "zero", params={"x0": p["limit_x0"]}
        )
        entries = []
        for q in p["limit_q"]:
            tag = f"q{q:g}".replace(".", "p")
            entry = limit_diagnostic(
                problem,
                orders=tuple(p["limit_orders"]),
                n_ref=p["limit_ref"],
                q=q,
                cfg=cfg,
                degree=p["degree"],
                name=f"bsde.limit.{tag}",
            )
            self.trend("n", entry.details["n"], entry.details["error"])
            self.add_table(
                f"limit_{tag}",
                ["n", "error"],
                np.column_stack([entry.details["n"], entry.details["error"]]),
            )
            entries.append(entry)
        return entries
