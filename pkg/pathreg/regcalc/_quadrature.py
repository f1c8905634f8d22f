"""Exact quadrature of piecewise-polynomial integrands"""

from typing import Callable

import numpy as np

from pathreg.paths import SampledPath

#: Gauss-Legendre order per subinterval; exact for cubic integrands
GL_ORDER = 2

_LEFT_EXTENSIONS = ("zero", "hold")


def breakpoints(lo: float, hi: float, *candidates: np.ndarray) -> np.ndarray:
    """Sorted unique breakpoints in ``[lo, hi]``, including both ends"""
    x = np.concatenate([np.atleast_1d(c) for c in candidates] + [[lo, hi]])
    x = x[(x >= lo) & (x <= hi)]
    return np.unique(x)


def integrate_piecewise(
    func: Callable[[np.ndarray], np.ndarray],
    nodes: np.ndarray,
    order: int = GL_ORDER,
) -> float:
    """Integrate `func` over ``[nodes[0], nodes[-1]]`` with Gauss-Legendre
    quadrature on each subinterval

    `func` is only evaluated strictly inside subintervals, so it may be
    discontinuous at `nodes`. It must accept an array of any shape.
    """
    if nodes.size < 2:
        return 0.0
    xg, wg = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (nodes[1:] + nodes[:-1])
    half = 0.5 * (nodes[1:] - nodes[:-1])
    x = mid[:, None] + half[:, None] * xg[None, :]
    return float(np.sum(func(x) * wg[None, :] * half[:, None]))


def check_left(left: str, caller: str):
    if left not in _LEFT_EXTENSIONS:
        raise ValueError(
            f"Error in {caller}: left={left!r}, expected one of {_LEFT_EXTENSIONS}"
        )


def extended(p: SampledPath, x: np.ndarray, left: str = "zero") -> np.ndarray:
    """Evaluate the extension of a path used by regularization integrals

    Right of the path's interval the present value is used. Left of it the
    path is 0 (``left="zero"``) or held at its first value
    (``left="hold"``).
    """
    a, b = p.grid.t_min, p.grid.t_max
    out = np.where(x >= b, p.present_value, p.past_at(x))
    if left == "zero":
        out = np.where(x < a, 0.0, out)
    return out
