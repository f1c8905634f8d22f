import numpy as np

from pathreg.ppde import (
    hedging_check,
    local_time_check,
    lookback_f,
    lookback_martingale_check,
    lookback_pde_check,
    lookback_value_mc,
    reflection_check,
)
from pathreg.report import ReportEntry

from ._SuiteCommand import SuiteCommand


class LookbackCommand(SuiteCommand):
    """The lookback functional ``U(t, eta) = E[max W]`` through its closed form
    ``f(t, m, x)``

    Monte Carlo checks draw from the run seed plus a fixed offset per check,
    so the checks do not share samples.
    """

    name = "lookback"

    DEFAULTS = {
        "T": 1.0,
        "mc_steps": 2**12,
        "mc_paths": 100000,
        "allowance": 0.01,
        "n_se": 4.0,
        "pde_n": 50,
        "pde_t_max": 0.99,
        "pde_tolerance": 1e-10,
        "fd_tolerance": 1e-4,
        "reflection_steps": 1024,
        "reflection_paths": 1000,
        "martingale_steps": 2**12,
        "martingale_paths": 2000,
        "trend_steps": [64, 256, 1024],
        "trend_paths": 2000,
        "local_time_tolerance": 0.05,
        "hedging_tolerance": 0.1,
        "surface_n": 10,
        "seed_offsets": {
            "value_mc": 12,
            "reflection": 5,
            "martingale": 31,
            "local_time": 2,
            "hedging": 3,
        },
    }

    def validate(self):
        p = self.params
        self._check_positive(
            "T",
            "mc_steps",
            "mc_paths",
            "n_se",
            "pde_n",
            "reflection_steps",
            "reflection_paths",
            "martingale_steps",
            "martingale_paths",
            "trend_steps",
            "trend_paths",
            "surface_n",
        )
        if p["allowance"] < 0.0:
            raise ValueError(f"Error in LookbackCommand: allowance={p['allowance']}")
        if not (0.0 < p["pde_t_max"] < 1.0):
            raise ValueError(
                f"Error in LookbackCommand: pde_t_max={p['pde_t_max']} outside (0, 1)"
            )
        self._check_choices(
            "seed_offsets",
            list(p["seed_offsets"]),
            list(self.DEFAULTS["seed_offsets"]),
        )
        p["seed_offsets"] = {**self.DEFAULTS["seed_offsets"], **p["seed_offsets"]}

    def _offset(self, check: str) -> int:
        return int(self.params["seed_offsets"][check])

    def run(self) -> list[ReportEntry]:
        p = self.params
        T = p["T"]
        entries = []

        cfg = self.sim_config(
            p["mc_steps"], p["mc_paths"], seed_offset=self._offset("value_mc"), T=T
        )
        entry = lookback_value_mc(cfg, allowance=p["allowance"], n_se=p["n_se"])
        self.progress(
            f"E[max W] = {entry.value:.6f} +/- {entry.details['se']:.2g}, "
            f"closed form {entry.reference:.6f}"
        )
        entries.append(entry)

        entries.extend(
            lookback_pde_check(
                T=T,
                n=p["pde_n"],
                tolerance=p["pde_tolerance"],
                fd_tolerance=p["fd_tolerance"],
                t_max=p["pde_t_max"],
            )
        )

        cfg = self.sim_config(
            p["reflection_steps"],
            p["reflection_paths"],
            seed_offset=self._offset("reflection"),
            T=T,
        )
        entries.append(reflection_check(cfg))

        cfg = self.sim_config(
            p["martingale_steps"],
            p["martingale_paths"],
            seed_offset=self._offset("martingale"),
            T=T,
        )
        entries.append(lookback_martingale_check(cfg))

        for check, tolerance in [
            (local_time_check, p["local_time_tolerance"]),
            (hedging_check, p["hedging_tolerance"]),
        ]:
            name = check.__name__.replace("_check", "")
            entry = check(
                n_steps_list=tuple(p["trend_steps"]),
                n_paths=p["trend_paths"],
                seed=self.seed(self._offset(name)),
                T=T,
                tolerance=tolerance,
                n_workers=self.cfg.n_workers,
            )
            self.trend("n_steps", entry.details["n_steps"], entry.details["values"])
            self.add_table(
                name,
                ["n_steps", "value"],
                np.column_stack([entry.details["n_steps"], entry.details["values"]]),
            )
            entries.append(entry)

        self.add_table("surface", ["t", "m", "x", "f"], self._surface())
        return entries

    def _surface(self) -> np.ndarray:
        """``f(t, m, x)`` on ``t in [0, pde_t_max T]``, ``m in [-1, 1]``,
        ``m - x in [0, 2]``"""
        n = self.params["surface_n"]
        T = self.params["T"]
        t, m, gap = np.meshgrid(
            np.linspace(0.0, self.params["pde_t_max"] * T, n),
            np.linspace(-1.0, 1.0, n),
            np.linspace(0.0, 2.0, n),
            indexing="ij",
        )
        x = m - gap
        f = lookback_f(t, m, x, T)
        return np.column_stack([t.ravel(), m.ravel(), x.ravel(), f.ravel()])
