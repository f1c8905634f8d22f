from pathreg.approx import diagonal_schedule, sv_convergence
from pathreg.funcder import make_functional
from pathreg.paths import Grid
from pathreg.ppde import lookback_U
from pathreg.report import ReportEntry

from ._SuiteCommand import SuiteCommand


class SvConvergeCommand(SuiteCommand):
    """Convergence of the smoothed Fejer heat solutions ``U_{n,eps,k}``
    along the diagonal schedule ``k = n**2``, ``eps = 1 / n``

    For ``"sup"`` the reference is the lookback closed form; for the other
    functionals it is a Monte Carlo price on the same settings.
    """

    name = "sv-converge"

    DEFAULTS = {
        "functional": "sup",
        "t": 0.0,
        "path": {"kind": "constant", "value": 0.0},
        "n_points": 257,
        "n_values": [8, 16, 32, 64],
        "n_steps": 512,
        "n_paths": 20000,
        "tolerance": 0.02,
    }

    def validate(self):
        p = self.params
        self._check_choices(
            "functional", [p["functional"]], ["present", "integral", "sup"]
        )
        self._check_fixture("path", p["path"])
        self._check_positive("n_values", "n_steps", "n_paths", "tolerance")
        if len(p["n_values"]) < 2:
            raise ValueError("Error in SvConvergeCommand: n_values needs 2 or more")
        if not (0.0 <= p["t"] < 1.0):
            raise ValueError(f"Error in SvConvergeCommand: t={p['t']}")

    def run(self) -> list[ReportEntry]:
        p = self.params
        G = make_functional(p["functional"])
        eta = self.fixture(p["path"], Grid.window(1.0, p["n_points"]))
        reference = lookback_U(p["t"], eta) if p["functional"] == "sup" else None
        entry = sv_convergence(
            G,
            p["t"],
            eta,
            schedule=diagonal_schedule(tuple(p["n_values"])),
            cfg=self.sim_config(p["n_steps"], p["n_paths"]),
            reference=reference,
            tolerance=p["tolerance"],
            name=f"sv.convergence.{p['functional']}",
        )
        self.add_table("schedule", entry.details["columns"], entry.details["rows"])
        rows = entry.details["rows"]
        gap = entry.details["columns"].index("gap")
        self.trend("n", [row[0] for row in rows], [row[gap] for row in rows])
        return [entry]
