from typing import Optional

import numpy as np

from pathreg.paths import Grid, SampledPath


class AtomicMeasure:
    """Finite measure: piecewise-linear density plus point masses

    .. rubric:: Constructor

    Parameters
    ----------
    density: SampledPath
        Density of the absolutely continuous part. Its present value is
        ignored.
    atoms: Optional[list[tuple[float, float]]] = None
        Point masses as ``(location, mass)``, locations in the density's
        interval.
    """

    def __init__(
        self,
        density: SampledPath,
        atoms: Optional[list[tuple[float, float]]] = None,
    ):
        atoms = [(float(x), float(m)) for x, m in (atoms or [])]
        for x, m in atoms:
            if not (density.grid.t_min <= x <= density.grid.t_max):
                raise ValueError(
                    f"Error in AtomicMeasure: atom location {x} outside "
                    f"[{density.grid.t_min}, {density.grid.t_max}]"
                )
            if not np.isfinite(m):
                raise ValueError("Error in AtomicMeasure: atom mass must be finite")

        self.density = density
        """SampledPath: Density of the absolutely continuous part"""

        self.atoms = atoms
        """list[tuple[float, float]]: Point masses ``(location, mass)``"""

    @staticmethod
    def lebesgue(grid: Grid, scale: float = 1.0):
        return AtomicMeasure(SampledPath(grid, np.full(grid.n_points, scale)))

    @staticmethod
    def zero(grid: Grid):
        return AtomicMeasure(SampledPath(grid, np.zeros(grid.n_points)))

    @staticmethod
    def dirac(grid: Grid, location: float, mass: float = 1.0):
        return AtomicMeasure(
            SampledPath(grid, np.zeros(grid.n_points)), atoms=[(location, mass)]
        )

    def total_variation(self) -> float:
        """float: Total variation (exact for densities without sign changes
        inside a cell)"""
        v = np.abs(self.density.values)
        ac = 0.5 * np.sum(v[1:] + v[:-1]) * self.density.grid.spacing
        return float(ac + sum(abs(m) for _, m in self.atoms))
