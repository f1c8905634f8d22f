import math
from typing import Optional, Union

import numpy as np

from ._LimitEstimate import LimitEstimate


def estimate_limit(
    eps: Union[np.ndarray, list[float]],
    approximants: Union[np.ndarray, list[float]],
    tolerance: float = 1e-3,
    order: Optional[float] = None,
) -> LimitEstimate:
    """Richardson extrapolation on the two finest levels

    Parameters
    ----------
    eps: array_like
        Decreasing regularization parameters.
    approximants: array_like
        Approximant at each parameter.
    tolerance: float = 1e-3
        Convergence tolerance on the two finest approximants.
    order: Optional[float] = None
        Assumed order of the leading error term. If None, the order observed
        on the three finest levels is used when it lies in ``[0.5, 4]``, and
        first order otherwise.

    Returns
    -------
    estimate: LimitEstimate
        The extrapolated limit.
    """
    eps = np.asarray(eps, dtype=float)
    a = np.asarray(approximants, dtype=float)
    raw = list(zip(eps.tolist(), a.tolist()))
    if a.size == 0:
        raise ValueError("Error in estimate_limit: no approximants")
    if a.size == 1 or not np.all(np.isfinite(a[-2:])):
        return LimitEstimate(
            value=a[-1],
            raw=raw,
            convergence_rate=math.nan,
            converged=False,
            tolerance=tolerance,
        )

    r = eps[-2] / eps[-1]
    d1 = a[-1] - a[-2]
    observed = math.nan
    if a.size >= 3:
        d0 = a[-2] - a[-3]
        if d0 != 0.0 and d1 != 0.0 and np.sign(d0) == np.sign(d1):
            observed = math.log(abs(d0 / d1)) / math.log(r)

    if order is None:
        order = observed if 0.5 <= observed <= 4.0 else 1.0

    scale = max(1.0, abs(a[-1]))
    if abs(d1) <= 1e-13 * scale:
        value = a[-1]
    else:
        value = a[-1] + d1 / (r**order - 1.0)

    return LimitEstimate(
        value=value,
        raw=raw,
        convergence_rate=observed,
        converged=abs(d1) <= tolerance,
        tolerance=tolerance,
    )


def is_decreasing_trend(
    values: Union[np.ndarray, list[float]],
    slack: float = 0.1,
    atol: float = 0.0,
) -> bool:
    """Check that a sequence of errors decreases

    True if the last value is below the first and no step increases by more
    than ``slack`` relative to the previous value (plus `atol`). NaN values
    never form a decreasing trend.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 2 or not np.all(np.isfinite(v)):
        return False
    if not v[-1] < v[0]:
        return False
    return bool(np.all(v[1:] <= v[:-1] * (1.0 + slack) + atol))
