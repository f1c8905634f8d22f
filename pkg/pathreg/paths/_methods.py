from typing import Optional, Union

import numpy as np

from ._Grid import Grid
from ._SampledPath import SampledPath
from ._Trajectory import Trajectory


def values_at(p: SampledPath, x: Union[np.ndarray, list[float]]) -> np.ndarray:
    """Vectorized :func:`value_at`"""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("Error in values_at: x must be finite")
    return np.where(x >= p.grid.t_max, p.present_value, p.past_at(x))


def value_at(p: SampledPath, x: float) -> float:
    """Evaluate a path with the extension conventions

    Parameters
    ----------
    p: SampledPath
        The path, on ``[a, b]``.
    x: float
        Query point.

    Returns
    -------
    value: float
        Linear interpolation on ``[a, b[``, the first value left of `a`,
        and the present value for ``x >= b``.
    """
    if not np.isfinite(x):
        raise ValueError(f"Error in value_at: x={x} is not finite")
    if x >= p.grid.t_max:
        return p.present_value
    return float(p.past_at(x))


def window_at(tr: Trajectory, t: float, T: float, grid: Grid) -> SampledPath:
    """Window of a trajectory: ``eta(x) = X(t + x)`` for ``x`` in ``[-T, 0]``

    The trajectory is extended by its first value before its first time and
    by its last value after its last time.
    """
    if len(tr) == 0:
        raise ValueError("Error in window_at: empty trajectory")
    if t < 0.0:
        raise ValueError(f"Error in window_at: t={t} < 0")
    if not np.isclose(grid.t_min, -T) or grid.t_max != 0.0:
        raise ValueError(f"Error in window_at: grid does not cover [-{T}, 0]")
    return SampledPath(grid=grid, values=tr(t + grid.points))


def shift_past(p: SampledPath, eps: float) -> SampledPath:
    """Shift the past right by `eps`, keeping the present value

    Returns the path ``x -> p(x - eps)`` on ``[a, b[`` (constant left
    extension) with the present value of `p` at ``b``.
    """
    if eps < 0.0:
        raise ValueError(f"Error in shift_past: eps={eps} < 0")
    if eps == 0.0:
        return p
    return SampledPath(
        grid=p.grid,
        values=p.past_at(p.grid.points - eps),
        present=p.present_value,
    )


def shift_future(p: SampledPath, eps: float) -> SampledPath:
    """Shift the past left by `eps`, assuming the path stays constant after
    its right end

    Returns the path ``x -> p(x + eps)`` on ``[a, b[``, with the present value
    used for ``x + eps >= b``, and the present value of `p` at ``b``.
    """
    if eps < 0.0:
        raise ValueError(f"Error in shift_future: eps={eps} < 0")
    if eps == 0.0:
        return p
    return SampledPath(
        grid=p.grid,
        values=values_at(p, p.grid.points + eps),
        present=p.present_value,
    )


def split(p: SampledPath) -> tuple[SampledPath, float]:
    """Split a path into its past (without present) and present value"""
    return (SampledPath(grid=p.grid, values=p.values), p.present_value)


def join(past: SampledPath, a: float, grid: Optional[Grid] = None) -> SampledPath:
    """Join a past and a present value into a path

    Parameters
    ----------
    past: SampledPath
        The past. Its own present value is ignored.
    a: float
        The present value.
    grid: Optional[Grid] = None
        If given, the grid the result must live on.
    """
    if grid is not None and grid != past.grid:
        raise ValueError("Error in join: grid mismatch")
    return SampledPath(grid=past.grid, values=past.values, present=a)


def restrict(p: SampledPath, t_min: float) -> SampledPath:
    """Restrict a path to ``[t_min, b]``, keeping the grid spacing where
    possible

    The restricted grid has ``ceil((b - t_min) / spacing) + 1`` points and the
    values are interpolated from `p`.
    """
    if not (p.grid.t_min <= t_min < p.grid.t_max):
        raise ValueError(f"Error in restrict: t_min={t_min} outside the grid")
    n = int(np.ceil((p.grid.t_max - t_min) / p.grid.spacing - 1e-9)) + 1
    grid = Grid(t_min, p.grid.t_max, max(n, 2))
    return SampledPath(grid=grid, values=p.past_at(grid.points), present=p.present)
