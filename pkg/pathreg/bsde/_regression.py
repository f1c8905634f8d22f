"""Least-squares regression on polynomial features of the state"""

import itertools
import warnings

import numpy as np


def exponents(d: int, degree: int) -> np.ndarray:
    """Exponents of the monomials of total degree ``<= degree`` in ``d``
    variables, shape ``(q, d)``, constant first"""
    out = [
        e
        for k in range(degree + 1)
        for e in itertools.product(range(k + 1), repeat=d)
        if sum(e) == k
    ]
    return np.array(out, dtype=int).reshape(-1, d)


def polynomial_features(x: np.ndarray, degree: int) -> np.ndarray:
    """Monomials of the standardized state, shape ``(n, q)``

    Coordinates with zero spread (a deterministic state) only contribute the
    constant.
    """
    x = np.asarray(x, dtype=float)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    live = std > 1e-12 * np.maximum(1.0, np.abs(mean))
    if not np.any(live):
        return np.ones((x.shape[0], 1))
    u = (x[:, live] - mean[live]) / std[live]
    E = exponents(u.shape[1], degree)
    return np.prod(u[:, None, :] ** E[None, :, :], axis=2)


def regress(
    x: np.ndarray,
    target: np.ndarray,
    degree: int,
    caller: str = "regress",
) -> tuple[np.ndarray, int]:
    """Fitted values of the least-squares projection of `target` onto
    polynomials of `x`

    If the feature matrix is rank deficient the degree is lowered, with a
    :class:`RuntimeWarning`, until it has full rank.

    Parameters
    ----------
    x: numpy.ndarray
        States, shape ``(n, d)``.
    target: numpy.ndarray
        Shape ``(n,)`` or ``(n, k)``.
    degree: int
        Maximum total degree.

    Returns
    -------
    (fitted, degree): tuple[numpy.ndarray, int]
        Fitted values with the shape of `target`, and the degree used.
    """
    target = np.asarray(target, dtype=float)
    for deg in range(degree, -1, -1):
        P = polynomial_features(x, deg)
        coef, _, rank, _ = np.linalg.lstsq(P, target, rcond=None)
        if rank == P.shape[1]:
            break
        warnings.warn(
            f"{caller}: rank-deficient regression at degree {deg}, "
            f"retrying with degree {deg - 1}",
            RuntimeWarning,
        )
    fitted = P @ coef
    # the constant column makes the projection mean preserving; remove roundoff
    fitted += np.mean(target, axis=0) - np.mean(fitted, axis=0)
    return fitted, deg
