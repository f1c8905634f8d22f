from pathreg.funcder import CylindricalFunctional
from pathreg.paths import Grid
from pathreg.ppde import (
    GaussianCylModel,
    QuadratureRule,
    classical_solution,
    heat_residual,
    mc_cylindrical_price,
    solution_functional,
)
from pathreg.report import ReportEntry

from ._SuiteCommand import SuiteCommand

#: Largest step of the time differences in the numerical residual
TIME_STEP = 2.0**-6

_CORPUS = [
    ({"type": "linear", "weights": [1.0, -2.0], "constant": 0.5}, [0.0, 1.0], 2.0),
    ({"type": "quadratic", "matrix": [[1.0, 0.3], [0.3, 2.0]]}, [1.0, 0.5], 0.25),
    ({"type": "exp", "weights": [0.5, -0.3]}, [1.0, 1.0], 0.5),
    ({"type": "sin", "weights": [0.7, 0.4]}, [0.0, 0.0, 1.0], 1.0),
    ({"type": "quadratic", "matrix": [[2.0, 0.0], [0.0, 2.0]]}, [1.0], 0.75),
]


def default_heat_corpus() -> dict[str, dict]:
    """Ten cylindrical terminal conditions with two coordinates

    Each outer function is paired with a polynomial basis function and either
    a phase-shifted sine or a cosine.
    """
    corpus = {}
    for i, (outer, coeffs, freq) in enumerate(_CORPUS):
        poly = {"type": "polynomial", "coeffs": coeffs}
        corpus[f"{outer['type']}{i}_sine"] = {
            "outer": outer,
            "basis": [poly, {"type": "sine", "frequency": freq, "phase": 0.3}],
        }
        corpus[f"{outer['type']}{i}_cosine"] = {
            "outer": outer,
            "basis": [poly, {"type": "cosine", "frequency": freq}],
        }
    return corpus


class HeatSolveCommand(SuiteCommand):
    """Classical solutions of the path-dependent heat equation for
    cylindrical terminal conditions

    For each functional of the corpus, ``"heat.residual.{label}"`` is the
    largest residual over ``times`` with the three terms taken by finite
    differences of values of ``U``, relative to ``1 + |d_t U|``. The
    closed-form residual, computed with the same Gauss-Hermite rule, is
    reported alongside. ``"heat.mc.{label}"`` compares the classical
    solution at ``mc_time`` with a Monte Carlo price of the terminal
    condition.
    """

    name = "heat-solve"

    DEFAULTS = {
        "functionals": default_heat_corpus(),
        "gh_order": 64,
        "times": [0.0, 0.25, 0.75],
        "tolerance": 1e-2,
        "path": {"kind": "sine", "amplitude": 0.5},
        "n_points": 1025,
        "mc_time": 0.25,
        "mc_steps": 128,
        "mc_paths": 20000,
        "n_se": 4.0,
        "mc_allowance": 1e-3,
    }

    def validate(self):
        p = self.params
        self._check_fixture("path", p["path"])
        self._check_positive("gh_order", "tolerance", "mc_steps", "mc_paths", "n_se")
        if not p["functionals"]:
            raise ValueError("Error in HeatSolveCommand: no functionals")
        self.corpus = {
            label: CylindricalFunctional.from_dict(data, T=1.0)
            for label, data in p["functionals"].items()
        }
        if not (0.0 <= p["mc_time"] < 1.0):
            raise ValueError(
                f"Error in HeatSolveCommand: mc_time {p['mc_time']} outside [0, 1)"
            )
        for t in p["times"]:
            if not (0.0 <= t <= 1.0 - TIME_STEP):
                raise ValueError(
                    f"Error in HeatSolveCommand: time {t} outside "
                    f"[0, {1.0 - TIME_STEP}]"
                )
        self.quad = QuadratureRule.gauss_hermite(p["gh_order"])

    def run(self) -> list[ReportEntry]:
        p = self.params
        eta = self.fixture(p["path"], Grid.window(1.0, p["n_points"]))
        entries = []
        rows = []
        for i, (label, c) in enumerate(self.corpus.items()):
            model = GaussianCylModel(c)
            u = solution_functional(c, quad=self.quad, model=model)
            closed, residuals = [], []
            for t in p["times"]:
                closed.append(heat_residual(c, t, eta, quad=self.quad, model=model))
                numerical = heat_residual(
                    c, t, eta, quad=self.quad, model=model, numerical=True
                )
                residuals.append(numerical / (1.0 + abs(u.dt(t, eta))))
            entries.append(
                ReportEntry(
                    name=f"heat.residual.{label}",
                    value=max(residuals),
                    reference=0.0,
                    tolerance=p["tolerance"],
                    provenance="finite-difference",
                    details={
                        "times": list(p["times"]),
                        "residuals": residuals,
                        "closed_form": closed,
                        "gh_order": p["gh_order"],
                        "functional": c.to_dict(),
                    },
                )
            )

            t = p["mc_time"]
            exact = classical_solution(c, t, eta, quad=self.quad, model=model)
            cfg = self.sim_config(p["mc_steps"], p["mc_paths"], seed_offset=i)
            mean, se = mc_cylindrical_price(c, t, eta, cfg)
            entries.append(
                ReportEntry(
                    name=f"heat.mc.{label}",
                    value=mean,
                    reference=exact,
                    tolerance=p["n_se"] * se + p["mc_allowance"],
                    provenance="monte-carlo",
                    seed=cfg.seed,
                    details={"t": t, "se": se, "n_paths": cfg.n_paths},
                )
            )
            rows.append([i, max(residuals), exact, mean, se])
            self.progress(
                f"{label}: residual={max(residuals):.3g} "
                f"U={exact:.6g} mc={mean:.6g}"
            )
        self.add_table(
            "corpus",
            ["index", "max_residual", "classical", "mc_mean", "mc_se"],
            rows,
        )
        return entries

