import numpy as np

from pathreg.funcder import FUNCTIONAL_LABELS, make_functional
from pathreg.report import ReportEntry
from pathreg.simflow import ItoResidual, ito_verify, simulate_bm

from ._SuiteCommand import SuiteCommand


class ItoVerifyCommand(SuiteCommand):
    """Pathwise functional Ito formula along Brownian samples

    The mean sup residual is computed at ``(n_steps, eps)`` and again at
    ``(2 n_steps, eps / 2)`` on fresh seeds. The residual is first order in
    ``eps``, so the entry ``"ito.residual_ratio"`` expects a ratio of 2, within
    ``ratio_tolerance``. The defaults are ``2**12`` steps and ``eps = 2**-6``.

    With ``fine_seed_offset = 0`` both levels draw the same normals, so the
    fine path on ``[0, 1/2]`` is the coarse path in Brownian scaling.
    """

    name = "ito-verify"

    DEFAULTS = {
        "functional": "present_squared",
        "n_steps": 2**12,
        "eps": 2.0**-6,
        "n_seeds": 20,
        "n_paths": 8,
        "fine_seed_offset": 100,
        "ratio_tolerance": 0.6,
    }

    def validate(self):
        p = self.params
        self._check_choices(
            "functional",
            [p["functional"]],
            [x for x in FUNCTIONAL_LABELS if x != "cylindrical"],
        )
        self._check_positive("n_steps", "eps", "n_seeds", "n_paths", "ratio_tolerance")
        self.functional = make_functional(p["functional"], T=1.0)

    def _level(self, n_steps: int, eps: float, offset: int):
        sups = []
        first = None
        for i in range(self.params["n_seeds"]):
            cfg = self.sim_config(
                n_steps, self.params["n_paths"], seed_offset=offset + i
            )
            for X in simulate_bm(cfg):
                result = ito_verify(self.functional, X, eps)
                if first is None:
                    first = result
                sups.append(result.sup_residual)
        return (float(np.mean(sups)), first)

    def run(self) -> list[ReportEntry]:
        p = self.params
        levels = [
            (p["n_steps"], p["eps"], 0),
            (2 * p["n_steps"], p["eps"] / 2.0, p["fine_seed_offset"]),
        ]
        means = []
        for level, (n_steps, eps, offset) in enumerate(levels):
            mean, first = self._level(n_steps, eps, offset)
            self.progress(f"n_steps={n_steps} eps={eps:g} sup residual={mean:.4g}")
            self.add_table(f"residual_level{level}", ItoResidual.COLUMNS, first.rows())
            means.append(mean)
        self.add_table(
            "sup_residual",
            ["n_steps", "eps", "mean_sup_residual"],
            [[n, e, m] for (n, e, _), m in zip(levels, means)],
        )
        if max(means) <= 1e-14:
            # exact at both levels
            ratio = 2.0
        else:
            ratio = means[0] / means[1] if means[1] > 0.0 else np.inf
        return [
            ReportEntry(
                name="ito.residual_ratio",
                value=ratio,
                reference=2.0,
                tolerance=p["ratio_tolerance"],
                provenance="trend",
                seed=self.seed(),
                details={
                    "functional": p["functional"],
                    "n_steps": [n for n, _, _ in levels],
                    "eps": [e for _, e, _ in levels],
                    "mean_sup_residual": means,
                    "n_samples": p["n_seeds"] * p["n_paths"],
                },
            )
        ]
