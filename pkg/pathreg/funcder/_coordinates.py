"""Quadrature weights for the coordinates of cylindrical functionals"""

from typing import Callable

import numpy as np

from pathreg.paths import Grid
from pathreg.regcalc import breakpoints

#: Gauss-Legendre order per cell
COORDINATE_GL_ORDER = 6


def window_weights(
    funcs: list[Callable[[np.ndarray], np.ndarray]],
    t: float,
    grid: Grid,
    order: int = COORDINATE_GL_ORDER,
) -> np.ndarray:
    """Weights of ``int_{-t}^0 eta(x) h(x + t) dx`` as linear forms in the
    grid values of a piecewise-linear `eta`

    Parameters
    ----------
    funcs: list[Callable]
        The functions ``h``, vectorized.
    t: float
        Window length, ``0 <= t <= -grid.t_min``.
    grid: Grid
        Grid of the paths, ending at 0.
    order: int = COORDINATE_GL_ORDER
        Gauss-Legendre order per cell.

    Returns
    -------
    weights: numpy.ndarray
        Shape ``(len(funcs), grid.n_points)``; the integral for ``h = funcs[i]``
        is ``weights[i] @ eta.values``.
    """
    if grid.t_max != 0.0:
        raise ValueError("Error in window_weights: grid must end at 0")
    if t < 0.0 or -t < grid.t_min - 1e-12 * grid.length:
        raise ValueError(f"Error in window_weights: t={t} outside [0, {-grid.t_min}]")
    W = np.zeros((len(funcs), grid.n_points))
    if t == 0.0:
        return W
    lo = max(-t, grid.t_min)
    nodes = breakpoints(lo, 0.0, grid.points)
    xg, wg = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (nodes[1:] + nodes[:-1])
    half = 0.5 * (nodes[1:] - nodes[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()

    k = np.searchsorted(grid.points, x, side="right") - 1
    k = np.clip(k, 0, grid.n_points - 2)
    theta = (x - grid.points[k]) / grid.spacing
    for i, h in enumerate(funcs):
        hw = h(x + t) * w
        np.add.at(W[i], k, hw * (1.0 - theta))
        np.add.at(W[i], k + 1, hw * theta)
    return W
