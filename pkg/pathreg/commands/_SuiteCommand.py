import copy
import sys
from typing import Optional, TextIO

import numpy as np

from pathreg.paths import PATH_GENERATORS, Grid, SampledPath, make_path
from pathreg.report import ReportEntry, print_trend
from pathreg.simflow import SimConfig

from ._RunConfig import RunConfig

FIXTURE_KINDS = [kind for kind in PATH_GENERATORS if kind != "csv"]

FIXTURE_OPTIONS = [
    "value",
    "offset",
    "slope",
    "amplitude",
    "frequency",
    "seed",
    "present",
]


class SuiteCommand:
    """Base class of the verification suites

    Subclasses set :attr:`name` and :attr:`DEFAULTS`, and implement
    :func:`run`. Parameters are resolved and validated on construction, so a
    bad configuration is reported before any suite runs.

    .. rubric:: Constructor

    Parameters
    ----------
    cfg: RunConfig
        Run settings. ``cfg.overrides(name)`` is merged over
        :attr:`DEFAULTS`; unknown keys raise ValueError.
    quiet: bool = False
        If True, do not print progress.
    out: Optional[stream] = None
        Output stream for progress. Defaults to `sys.stdout`.
    """

    name = ""
    """str: Suite name, as given to ``--suite``"""

    DEFAULTS: dict = {}
    """dict: Default suite parameters"""

    def __init__(
        self,
        cfg: RunConfig,
        quiet: bool = False,
        out: Optional[TextIO] = None,
    ):
        if out is None:
            out = sys.stdout

        self.cfg = cfg
        """RunConfig: Run settings"""

        self.quiet = quiet
        """bool: If True, do not print progress"""

        self.out = out
        """stream: Output stream for progress"""

        overrides = cfg.overrides(self.name)
        unknown = [key for key in overrides if key not in self.DEFAULTS]
        if unknown:
            raise ValueError(
                f"Error in {type(self).__name__}: unknown parameters {unknown}, "
                f"expected a subset of {sorted(self.DEFAULTS)}"
            )
        params = copy.deepcopy(self.DEFAULTS)
        params.update(copy.deepcopy(overrides))

        self.params = params
        """dict: Suite parameters, defaults merged with overrides"""

        self.tables = {}
        """dict[str, tuple[list[str], numpy.ndarray]]: Plot tables, by name"""

        self.validate()

    def validate(self):
        """Check :attr:`params`; raise ValueError on a bad value"""
        pass

    def run(self) -> list[ReportEntry]:
        raise NotImplementedError

    def seed(self, offset: int = 0) -> int:
        return self.cfg.seed + offset

    def sim_config(
        self, n_steps: int, n_paths: int, seed_offset: int = 0, T: float = 1.0
    ) -> SimConfig:
        """Monte Carlo settings with the run seed and worker count"""
        return SimConfig(
            n_steps=n_steps,
            n_paths=n_paths,
            T=T,
            seed=self.seed(seed_offset),
            n_workers=self.cfg.n_workers,
        )

    def add_table(self, name: str, columns: list[str], rows):
        self.tables[name] = (list(columns), np.asarray(rows, dtype=float))

    def progress(self, message: str):
        if not self.quiet:
            self.out.write(f"{self.name}: {message}\n")

    def trend(self, label: str, abscissa: list, values: list[float]):
        if not self.quiet:
            print_trend(label, abscissa, values, out=self.out)

    def finalize(self, entries: list[ReportEntry]) -> list[ReportEntry]:
        """Apply tolerance overrides, then ``cfg.tol_scale``"""
        tolerances = self.cfg.tolerances(self.name)
        names = [entry.name for entry in entries]
        unknown = [key for key in tolerances if key not in names]
        if unknown:
            raise ValueError(
                f"Error in {type(self).__name__}: tolerance overrides for "
                f"unknown entries {unknown}"
            )
        result = []
        for entry in entries:
            if entry.name in tolerances:
                entry.tolerance = float(tolerances[entry.name])
            result.append(entry.scaled(self.cfg.tol_scale))
        return result

    def _check_choices(self, key: str, values: list[str], choices: list[str]):
        bad = [value for value in values if value not in choices]
        if bad:
            raise ValueError(
                f"Error in {type(self).__name__}: unknown {key} {bad}, "
                f"expected one of {choices}"
            )

    def _check_positive(self, *keys: str):
        for key in keys:
            values = np.atleast_1d(np.asarray(self.params[key], dtype=float))
            if values.size == 0 or not np.all(values > 0.0):
                raise ValueError(
                    f"Error in {type(self).__name__}: {key}={self.params[key]} "
                    "must be positive"
                )

    def _check_fixtures(self, key: str):
        """Check a ``{name: {"kind": ..., **make_path kwargs}}`` parameter"""
        specs = self.params[key]
        if not isinstance(specs, dict) or not specs:
            raise ValueError(
                f"Error in {type(self).__name__}: {key} must be a non-empty object"
            )
        for name, spec in specs.items():
            self._check_fixture(name, spec)

    def _check_fixture(self, name: str, spec: dict):
        kind = spec.get("kind")
        if kind not in FIXTURE_KINDS:
            raise ValueError(
                f"Error in {type(self).__name__}: fixture '{name}' has kind "
                f"{kind!r}, expected one of {FIXTURE_KINDS}"
            )
        unknown = [k for k in spec if k != "kind" and k not in FIXTURE_OPTIONS]
        if unknown:
            raise ValueError(
                f"Error in {type(self).__name__}: fixture '{name}' has unknown "
                f"options {unknown}"
            )

    def fixture(self, spec: dict, grid: Grid) -> SampledPath:
        """Path from a fixture spec; Brownian seeds are offset by the run seed"""
        kwargs = {k: v for k, v in spec.items() if k != "kind"}
        if spec["kind"] == "brownian":
            kwargs["seed"] = self.seed(int(kwargs.get("seed", 0)))
        return make_path(spec["kind"], grid, **kwargs)
