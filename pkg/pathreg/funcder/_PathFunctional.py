import math
from typing import Callable, Optional

import numpy as np

from pathreg.paths import Grid, SampledPath


class PathFunctional:
    """A real functional of time and path, ``u(t, eta)``

    .. rubric:: Constructor

    Parameters
    ----------
    evaluator: Callable[[float, SampledPath], float]
        The map ``(t, eta) -> u(t, eta)``, for ``t`` in ``[0, T]`` and `eta`
        a path on ``[-T, 0]``, possibly with a jump at 0. Must be re-entrant.
    label: str = "functional"
        Name used in reports.
    growth_bound: Optional[tuple[float, float]] = None
        Constants ``(C, m)`` with ``|u(t, eta)| <= C (1 + |eta|_sup**m)``.
    evaluate_many: Optional[Callable] = None
        Optional vectorized evaluator with the signature of
        :func:`PathFunctional.evaluate_many`.
    """

    def __init__(
        self,
        evaluator: Callable[[float, SampledPath], float],
        label: str = "functional",
        growth_bound: Optional[tuple[float, float]] = None,
        evaluate_many: Optional[Callable] = None,
    ):
        self.evaluator = evaluator
        """Callable[[float, SampledPath], float]: The map ``(t, eta) -> u``"""

        self.label = label
        """str: Name used in reports"""

        self.growth_bound = growth_bound
        """Optional[tuple[float, float]]: Polynomial growth constants ``(C, m)``"""

        self._evaluate_many = evaluate_many

    def __call__(self, t: float, eta: SampledPath) -> float:
        value = float(self.evaluator(t, eta))
        if not math.isfinite(value):
            raise ValueError(
                f"Error in PathFunctional '{self.label}': non-finite value at t={t}"
            )
        return value

    def evaluate_many(
        self,
        t: float,
        grid: Grid,
        values: np.ndarray,
        present: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        """Evaluate on many paths sharing a grid

        Parameters
        ----------
        t: float
            Time.
        grid: Grid
            Common grid of the paths.
        values: numpy.ndarray
            Path values, shape ``(n_paths, grid.n_points)``.
        present: Optional[numpy.ndarray] = None
            Present values, shape ``(n_paths,)``. If None, the last grid
            values are used.

        Returns
        -------
        result: numpy.ndarray
            Functional values, shape ``(n_paths,)``.
        """
        values = np.asarray(values, dtype=float)
        if self._evaluate_many is not None:
            return np.asarray(self._evaluate_many(t, grid, values, present))
        if present is None:
            present = values[:, -1]
        return np.array(
            [
                self(t, SampledPath(grid, v, present=a))
                for v, a in zip(values, present)
            ]
        )

    def growth_ok(self, t: float, eta: SampledPath) -> bool:
        """Check the growth certificate at one point (True if none is set)"""
        if self.growth_bound is None:
            return True
        C, m = self.growth_bound
        return abs(self(t, eta)) <= C * (1.0 + eta.sup_norm() ** m)

    def __repr__(self):
        return f"PathFunctional(label={self.label!r})"


class DifferentiablePathFunctional(PathFunctional):
    """A path functional with optional closed-form derivatives

    Derivatives that are not given are computed numerically by
    :func:`~pathreg.funcder.derivatives`.

    .. rubric:: Constructor

    Parameters
    ----------
    evaluator: Callable[[float, SampledPath], float]
        The map ``(t, eta) -> u(t, eta)``.
    label: str = "functional"
        Name used in reports.
    dt, dh, dv, dvv: Optional[Callable[[float, SampledPath], float]] = None
        Closed-form time, horizontal, first and second vertical derivatives.
    frechet_density: Optional[Callable[[SampledPath], SampledPath]] = None
        Absolutely continuous part of the Frechet derivative at the terminal
        time, as a path on the grid of its argument.
    growth_bound: Optional[tuple[float, float]] = None
        Polynomial growth constants ``(C, m)``.
    evaluate_many: Optional[Callable] = None
        Optional vectorized evaluator.
    """

    def __init__(
        self,
        evaluator: Callable[[float, SampledPath], float],
        label: str = "functional",
        dt: Optional[Callable[[float, SampledPath], float]] = None,
        dh: Optional[Callable[[float, SampledPath], float]] = None,
        dv: Optional[Callable[[float, SampledPath], float]] = None,
        dvv: Optional[Callable[[float, SampledPath], float]] = None,
        frechet_density: Optional[Callable[[SampledPath], SampledPath]] = None,
        growth_bound: Optional[tuple[float, float]] = None,
        evaluate_many: Optional[Callable] = None,
    ):
        super().__init__(
            evaluator=evaluator,
            label=label,
            growth_bound=growth_bound,
            evaluate_many=evaluate_many,
        )
        self.dt = dt
        """Optional[Callable]: Closed-form time derivative"""

        self.dh = dh
        """Optional[Callable]: Closed-form horizontal derivative"""

        self.dv = dv
        """Optional[Callable]: Closed-form first vertical derivative"""

        self.dvv = dvv
        """Optional[Callable]: Closed-form second vertical derivative"""

        self.frechet_density = frechet_density
        """Optional[Callable]: Absolutely continuous Frechet density"""

    def __repr__(self):
        closed = [k for k in ["dt", "dh", "dv", "dvv"] if getattr(self, k)]
        return f"DifferentiablePathFunctional(label={self.label!r}, closed={closed})"
