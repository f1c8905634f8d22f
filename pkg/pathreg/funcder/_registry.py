from typing import Optional

import numpy as np

from pathreg.paths import SampledPath

from ._CylindricalFunctional import CylindricalFunctional
from ._PathFunctional import DifferentiablePathFunctional, PathFunctional

FUNCTIONAL_LABELS = ["present", "present_squared", "integral", "sup", "cylindrical"]


def _zero(t, eta):
    return 0.0


def _zero_density(eta: SampledPath) -> SampledPath:
    return SampledPath(eta.grid, np.zeros(eta.grid.n_points))


def _present_many(t, grid, values, present=None):
    return values[:, -1] if present is None else np.asarray(present)


def present_functional() -> DifferentiablePathFunctional:
    """``u(t, eta) = eta(0)``"""
    return DifferentiablePathFunctional(
        evaluator=lambda t, eta: eta.present_value,
        label="present",
        dt=_zero,
        dh=_zero,
        dv=lambda t, eta: 1.0,
        dvv=_zero,
        frechet_density=_zero_density,
        growth_bound=(1.0, 1.0),
        evaluate_many=_present_many,
    )


def present_squared_functional() -> DifferentiablePathFunctional:
    """``u(t, eta) = eta(0)**2``"""
    return DifferentiablePathFunctional(
        evaluator=lambda t, eta: eta.present_value**2,
        label="present_squared",
        dt=_zero,
        dh=_zero,
        dv=lambda t, eta: 2.0 * eta.present_value,
        dvv=lambda t, eta: 2.0,
        frechet_density=_zero_density,
        growth_bound=(1.0, 2.0),
        evaluate_many=lambda t, grid, values, present=None: _present_many(
            t, grid, values, present
        )
        ** 2,
    )


def _integral(values: np.ndarray, spacing: float) -> np.ndarray:
    return 0.5 * spacing * np.sum(values[..., 1:] + values[..., :-1], axis=-1)


def integral_functional() -> DifferentiablePathFunctional:
    """``u(t, eta) = int eta(x) dx`` over the past on the whole grid

    The horizontal derivative is ``eta(0-) - eta(-T)`` and the Frechet density
    is the constant 1.
    """
    return DifferentiablePathFunctional(
        evaluator=lambda t, eta: float(_integral(eta.values, eta.grid.spacing)),
        label="integral",
        dt=_zero,
        dh=lambda t, eta: float(eta.values[-1] - eta.values[0]),
        dv=_zero,
        dvv=_zero,
        frechet_density=lambda eta: SampledPath(eta.grid, np.ones(eta.grid.n_points)),
        growth_bound=(1.0, 1.0),
        evaluate_many=lambda t, grid, values, present=None: _integral(
            values, grid.spacing
        ),
    )


def _window_max(t, grid, values, present):
    """Max of the past on ``[-t, 0]`` and of the present value"""
    values = np.atleast_2d(values)
    lo = -t
    inside = grid.points >= lo
    k = np.searchsorted(grid.points, lo, side="right") - 1
    k = int(np.clip(k, 0, grid.n_points - 2))
    theta = float(np.clip((lo - grid.points[k]) / grid.spacing, 0.0, 1.0))
    edge = (1.0 - theta) * values[:, k] + theta * values[:, k + 1]
    m = np.maximum(np.max(values[:, inside], axis=1, initial=-np.inf), edge)
    return np.maximum(m, present)


def sup_functional() -> PathFunctional:
    """``u(t, eta) = max(sup_{[-t, 0[} eta, eta(0))``, the lookback payoff

    At ``t = T`` this is the supremum of the whole window.
    """

    def _eval(t, eta):
        return float(
            _window_max(t, eta.grid, eta.values, np.array([eta.present_value]))[0]
        )

    def _many(t, grid, values, present=None):
        values = np.asarray(values)
        if present is None:
            present = values[:, -1]
        return _window_max(t, grid, values, np.asarray(present))

    return PathFunctional(
        evaluator=_eval,
        label="sup",
        growth_bound=(1.0, 1.0),
        evaluate_many=_many,
    )


def make_functional(
    label: str,
    T: float = 1.0,
    params: Optional[dict] = None,
) -> PathFunctional:
    """Construct a built-in path functional by label

    Parameters
    ----------
    label: str
        One of ``"present"``, ``"present_squared"``, ``"integral"``,
        ``"sup"`` or ``"cylindrical"``.
    T: float = 1.0
        Horizon, used by ``"cylindrical"``.
    params: Optional[dict] = None
        For ``"cylindrical"``: ``{"outer": {...}, "basis": [{...}, ...]}``,
        as read by :func:`CylindricalFunctional.from_dict`.
    """
    if label == "present":
        return present_functional()
    elif label == "present_squared":
        return present_squared_functional()
    elif label == "integral":
        return integral_functional()
    elif label == "sup":
        return sup_functional()
    elif label == "cylindrical":
        if params is None:
            raise ValueError("Error in make_functional: 'cylindrical' requires params")
        return CylindricalFunctional.from_dict(params, T=T)
    raise ValueError(
        f"Error in make_functional: unknown functional '{label}'; "
        f"expected one of {FUNCTIONAL_LABELS}"
    )
