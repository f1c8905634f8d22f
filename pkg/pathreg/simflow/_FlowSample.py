import numpy as np

from pathreg.paths import Grid, SampledPath, Trajectory, values_at


class FlowSample:
    """One sample of the stochastic flow started from ``(t, eta)``

    .. rubric:: Constructor

    Parameters
    ----------
    base: Trajectory
        A Brownian sample on ``[t, T]``.
    t: float
        Anchor time.
    eta: SampledPath
        Anchor path on ``[-T, 0]``.
    T: float
        Horizon.
    """

    def __init__(self, base: Trajectory, t: float, eta: SampledPath, T: float):
        if not (0.0 <= t <= T):
            raise ValueError(f"Error in FlowSample: t={t} outside [0, {T}]")
        if base.t_start > t + 1e-12 or base.t_end < T - 1e-12:
            raise ValueError(
                f"Error in FlowSample: base covers [{base.t_start}, {base.t_end}], "
                f"not [{t}, {T}]"
            )
        self.base = base
        """Trajectory: Brownian sample on ``[t, T]``"""

        self.t = float(t)
        """float: Anchor time"""

        self.eta = eta
        """SampledPath: Anchor path"""

        self.T = float(T)
        """float: Horizon"""

    def window(self, s: float, grid: Grid) -> SampledPath:
        """The window of the flow at time `s`

        ``eta(x + s - t)`` for ``x <= t - s``, and
        ``eta(0) + W(x + s) - W(t)`` for ``x > t - s``. At ``s = t`` the anchor
        path itself is returned.
        """
        if not (self.t <= s <= self.T):
            raise ValueError(
                f"Error in FlowSample.window: s={s} outside [{self.t}, {self.T}]"
            )
        if s == self.t:
            if grid == self.eta.grid:
                return self.eta
            return SampledPath(
                grid, values_at(self.eta, grid.points), present=self.eta.present
            )
        x = grid.points
        past = x <= self.t - s
        values = np.where(
            past,
            values_at(self.eta, np.minimum(x + s - self.t, 0.0)),
            self.eta.present_value + self.base(x + s) - self.base(self.t),
        )
        return SampledPath(grid, values)
