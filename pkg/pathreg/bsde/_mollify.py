"""Convolution of coefficients with a radial bump kernel"""

from typing import Callable, Union

import numpy as np

from ._BSDEProblem import BSDEProblem
from ._SDECoeffs import SDECoeffs

#: Gauss-Legendre nodes per dimension of the kernel rule
KERNEL_GL_ORDER = 8

_kernel_cache = {}


def kernel_rule(d: int, order: int = KERNEL_GL_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ``int phi(z) h(z) dz`` for the unit-mass bump
    ``phi(z) ~ exp(1 / (|z|**2 - 1))`` on the unit ball of ``R^d``

    Tensor Gauss-Legendre rule on ``[-1, 1]^d``, restricted to the ball. The
    rule is symmetric, so it integrates affine ``h`` exactly, and the weights
    are positive with sum 1.

    Returns
    -------
    (z, w): tuple[numpy.ndarray, numpy.ndarray]
        Shapes ``(K, d)`` and ``(K,)``.
    """
    key = (d, order)
    if key not in _kernel_cache:
        xg, wg = np.polynomial.legendre.leggauss(order)
        grids = np.meshgrid(*([xg] * d), indexing="ij")
        z = np.stack([g.ravel() for g in grids], axis=1)
        w = np.prod(np.stack(np.meshgrid(*([wg] * d), indexing="ij")), axis=0).ravel()
        r2 = np.sum(z * z, axis=1)
        inside = r2 < 1.0
        z, w, r2 = z[inside], w[inside], r2[inside]
        w = w * np.exp(1.0 / (r2 - 1.0))
        _kernel_cache[key] = (z, w / np.sum(w))
    return _kernel_cache[key]


def _shifted(x: np.ndarray, n: float, d: int):
    """Points ``x - z / n`` for all kernel nodes, flattened to ``(n_x * K, d)``"""
    z, w = kernel_rule(d)
    x = np.asarray(x, dtype=float)
    pts = x[:, None, :] - z[None, :, :] / n
    return pts.reshape(-1, d), w, z.shape[0]


def smooth_map(func: Callable, n: float, d: int) -> Callable:
    """``func_n(x) = int phi_n(x - x') func(x') dx'`` for ``func`` mapping
    ``(m, d)`` states to ``(m, ...)``, with ``phi_n(x) = n**d phi(n x)``"""

    def _smoothed(x):
        pts, w, K = _shifted(x, n, d)
        vals = np.asarray(func(pts))
        vals = vals.reshape((-1, K) + vals.shape[1:])
        return np.tensordot(w, vals, axes=([0], [1]))

    return _smoothed


def _mollify_sde(raw: SDECoeffs, n: float) -> SDECoeffs:
    d = raw.d
    eye = np.eye(d) / n

    def _b(t, x):
        return smooth_map(lambda y: raw.b(t, y), n, d)(x)

    def _sigma(t, x):
        return smooth_map(lambda y: raw.sigma(t, y), n, d)(x) + eye

    return SDECoeffs(
        b=_b,
        sigma=_sigma,
        d=d,
        # I / n moves |sigma(t, 0)| by sqrt(d) / n
        lipschitz_C=raw.lipschitz_C + np.sqrt(d) / n,
        label=f"{raw.label}_n{n:g}",
        data={"mollified": raw.data, "n": n},
        check_certificate=False,
    )


def mollify_coeffs(
    raw: Union[SDECoeffs, BSDEProblem], n: float
) -> Union[SDECoeffs, BSDEProblem]:
    """Smooth coefficients of order `n`

    For :class:`SDECoeffs`:

    .. code-block:: text

        b_n(t, x)     = int phi_n(x - x') b(t, x') dx'
        sigma_n(t, x) = int phi_n(x - x') sigma(t, x') dx' + I / n

    so ``sigma_n`` is uniformly elliptic with floor ``1 / n`` when ``sigma``
    is positive semidefinite, and the Lipschitz constant of ``b, sigma`` is
    not increased. For :class:`BSDEProblem` the forward coefficients, the
    terminal ``g`` and the generator (in ``x``) are all convolved with
    ``phi_n``; certificates are kept.
    """
    if not n > 0:
        raise ValueError(f"Error in mollify_coeffs: n={n} <= 0")
    if isinstance(raw, SDECoeffs):
        return _mollify_sde(raw, n)
    if isinstance(raw, BSDEProblem):
        d = raw.d
        f, g = raw.generator, raw.terminal

        def _generator(t, x, y, z):
            x = np.asarray(x, dtype=float)
            pts, w, K = _shifted(x, n, d)
            vals = f(t, pts, np.repeat(y, K), np.repeat(z, K, axis=0))
            return np.asarray(vals).reshape(-1, K) @ w

        return BSDEProblem(
            coeffs=_mollify_sde(raw.coeffs, n),
            generator=_generator,
            terminal=smooth_map(g, n, d),
            generator_lipschitz=raw.generator_lipschitz,
            growth_bound=raw.growth_bound,
            k_rate=raw.k_rate,
            t0=raw.t0,
            x0=raw.x0,
            label=f"{raw.label}_n{n:g}",
            data={"mollified": raw.data, "n": n},
        )
    raise ValueError(
        f"Error in mollify_coeffs: cannot mollify {type(raw).__name__}"
    )
