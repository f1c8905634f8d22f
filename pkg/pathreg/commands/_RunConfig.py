import copy
import math
import pathlib
from typing import Optional

from pathreg.report.json_io import pretty_json, read_required, sha256_hash

SUITES = [
    "regint",
    "ito-verify",
    "heat-solve",
    "lookback",
    "fejer",
    "sv-converge",
    "bsde",
]

_KEYS = ["suite", "seed", "tol_scale", "out", "n_workers", "suites"]


class RunConfig:
    """Settings of one ``pathreg`` run

    .. rubric:: Constructor

    Parameters
    ----------
    suite: str = "all"
        One of :data:`SUITES`, or ``"all"``.
    seed: int = 0
        Base seed; suites derive their Monte Carlo seeds from it.
    tol_scale: float = 1.0
        Factor applied to every entry tolerance.
    out: str = "pathreg_out"
        Output directory for ``report.json`` and ``plot/*.csv``.
    n_workers: int = 1
        Number of threads used for Monte Carlo path blocks.
    suites: Optional[dict] = None
        Per-suite parameter overrides, ``{suite: {param: value}}``. The
        special key ``"tolerances"`` maps entry names to tolerances.
    """

    def __init__(
        self,
        suite: str = "all",
        seed: int = 0,
        tol_scale: float = 1.0,
        out: str = "pathreg_out",
        n_workers: int = 1,
        suites: Optional[dict] = None,
    ):
        if suite != "all" and suite not in SUITES:
            raise ValueError(
                f"Error in RunConfig: unknown suite '{suite}', "
                f"expected 'all' or one of {SUITES}"
            )
        if int(seed) != seed or not (0 <= seed < 2**64):
            raise ValueError(f"Error in RunConfig: seed={seed} is not a uint64")
        if not (math.isfinite(tol_scale) and tol_scale >= 0.0):
            raise ValueError(f"Error in RunConfig: tol_scale={tol_scale}")
        if int(n_workers) != n_workers or n_workers < 1:
            raise ValueError(f"Error in RunConfig: n_workers={n_workers} < 1")
        suites = copy.deepcopy(suites) if suites is not None else {}
        for name, overrides in suites.items():
            if name not in SUITES:
                raise ValueError(
                    f"Error in RunConfig: overrides for unknown suite '{name}'"
                )
            if not isinstance(overrides, dict):
                raise ValueError(
                    f"Error in RunConfig: overrides for '{name}' must be an object"
                )
            for entry, tol in overrides.get("tolerances", {}).items():
                if not (isinstance(tol, (int, float)) and tol > 0.0):
                    raise ValueError(
                        f"Error in RunConfig: tolerance for '{entry}' must be "
                        f"positive, got {tol}"
                    )

        self.suite = suite
        """str: Selected suite, or ``"all"``"""

        self.seed = int(seed)
        """int: Base seed"""

        self.tol_scale = float(tol_scale)
        """float: Factor applied to every entry tolerance"""

        self.out = str(out)
        """str: Output directory"""

        self.n_workers = int(n_workers)
        """int: Number of threads for Monte Carlo path blocks"""

        self.suites = suites
        """dict: Per-suite parameter overrides"""

    @property
    def out_dir(self) -> pathlib.Path:
        return pathlib.Path(self.out)

    def selected(self) -> list[str]:
        """Names of the suites to run, in run order"""
        return list(SUITES) if self.suite == "all" else [self.suite]

    def overrides(self, suite: str) -> dict:
        """Parameter overrides of `suite`, without tolerances"""
        data = dict(self.suites.get(suite, {}))
        data.pop("tolerances", None)
        return data

    def tolerances(self, suite: str) -> dict:
        """Entry tolerance overrides of `suite`"""
        return dict(self.suites.get(suite, {}).get("tolerances", {}))

    def replace(self, **kwargs):
        """Return a copy with some settings changed"""
        data = self.to_dict()
        data.update(kwargs)
        return RunConfig.from_dict(data)

    def config_hash(self) -> str:
        """SHA-256 of the resolved configuration

        The output directory and worker count do not change results and are
        excluded.
        """
        data = self.to_dict()
        del data["out"]
        del data["n_workers"]
        return sha256_hash(data)

    @staticmethod
    def from_dict(data: dict):
        unknown = [key for key in data if key not in _KEYS]
        if unknown:
            raise ValueError(
                f"Error in RunConfig.from_dict: unknown keys {unknown}, "
                f"expected a subset of {_KEYS}"
            )
        return RunConfig(
            suite=data.get("suite", "all"),
            seed=data.get("seed", 0),
            tol_scale=data.get("tol_scale", 1.0),
            out=data.get("out", "pathreg_out"),
            n_workers=data.get("n_workers", 1),
            suites=data.get("suites"),
        )

    @staticmethod
    def load(path: pathlib.Path):
        """Read a configuration file; raises FileNotFoundError if missing"""
        data = read_required(path)
        if not isinstance(data, dict):
            raise ValueError(
                f"Error in RunConfig.load: '{path}' does not hold a JSON object"
            )
        return RunConfig.from_dict(data)

    def to_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "tol_scale": self.tol_scale,
            "out": self.out,
            "n_workers": self.n_workers,
            "suites": copy.deepcopy(self.suites),
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
