import math
from typing import Optional

import numpy as np

from pathreg.funcder import PathFunctional, derivatives
from pathreg.paths import Grid, SampledPath, Trajectory, values_at, window_at
from pathreg.regcalc import EpsilonSchedule
from pathreg.report import ReportEntry

from ._FlowSample import FlowSample
from ._ItoResidual import ItoResidual
from ._random import brownian_paths, gaussian_increments, map_blocks, path_rng
from ._SimConfig import SimConfig


def simulate_bm(cfg: SimConfig) -> list[Trajectory]:
    """Brownian sample paths on ``[0, T]``, one :class:`Trajectory` per path"""
    times, W = brownian_paths(cfg)
    return [Trajectory(times, w) for w in W]


def flow_window(fs: FlowSample, s: float, grid: Grid) -> SampledPath:
    """The window ``W_s^{t, eta}`` of a flow sample at time `s`, on `grid`"""
    return fs.window(s, grid)


def sample_flow(
    t: float,
    eta: SampledPath,
    cfg: SimConfig,
    index: int = 0,
) -> FlowSample:
    """Draw the flow sample `index` started from ``(t, eta)``

    The base Brownian path starts at 0 at time `t` and uses steps of at most
    ``cfg.dt``.
    """
    if not (0.0 <= t <= cfg.T):
        raise ValueError(f"Error in sample_flow: t={t} outside [0, {cfg.T}]")
    n = max(int(math.ceil((cfg.T - t) / cfg.dt - 1e-9)), 1)
    if t == cfg.T:
        return FlowSample(Trajectory([t], [0.0]), t=t, eta=eta, T=cfg.T)
    times = np.linspace(t, cfg.T, n + 1)
    incr = path_rng(cfg.seed, index).standard_normal(n) * np.sqrt(np.diff(times))
    values = np.concatenate([[0.0], np.cumsum(incr)])
    return FlowSample(Trajectory(times, values), t=t, eta=eta, T=cfg.T)


def flow_windows(
    t: float,
    eta: SampledPath,
    grid: Grid,
    cfg: SimConfig,
    s: Optional[float] = None,
) -> np.ndarray:
    """Window values of ``cfg.n_paths`` flow samples at time `s`

    The Brownian increments are drawn exactly at the times ``x + s`` of the
    grid points with ``x > t - s``, so no interpolation error enters the
    random part.

    Parameters
    ----------
    t: float
        Anchor time.
    eta: SampledPath
        Anchor path.
    grid: Grid
        Output grid on ``[-T, 0]``.
    cfg: SimConfig
        Number of paths, seed and parallel settings. ``cfg.n_steps`` is not
        used.
    s: Optional[float] = None
        Evaluation time. Defaults to ``cfg.T``.

    Returns
    -------
    values: numpy.ndarray
        Shape ``(cfg.n_paths, grid.n_points)``. The last column holds the
        present values.
    """
    if s is None:
        s = cfg.T
    if not (0.0 <= t <= s <= cfg.T):
        raise ValueError(
            f"Error in flow_windows: need 0 <= t={t} <= s={s} <= T={cfg.T}"
        )
    x = grid.points
    past = x <= t - s
    frozen = values_at(eta, np.minimum(x[past] + s - t, 0.0))
    times = x[~past] + s
    dt = np.diff(np.concatenate([[t], times]))

    def _block(start, stop):
        out = np.empty((stop - start, grid.n_points))
        out[:, past] = frozen
        if times.size:
            incr = gaussian_increments(cfg.seed, start, stop, dt)
            out[:, ~past] = eta.present_value + np.cumsum(incr, axis=1)
        return out

    return map_blocks(_block, cfg.n_paths, cfg.block_size, cfg.n_workers)


def _stopped_sum(y: np.ndarray, x: np.ndarray, m: int, power: int) -> np.ndarray:
    """``(1/m) sum_{j<k} y_j (x_{min(j+m, k)} - x_j)**power`` for every k"""
    n = y.size
    k = np.arange(n + 1)
    lo = np.maximum(k - m + 1, 0)

    full = np.zeros(n)
    if n >= m:
        full[: n - m + 1] = y[: n - m + 1] * (x[m:] - x[: n - m + 1]) ** power
    A = np.concatenate([[0.0], np.cumsum(full)])
    total = A[lo]

    # terms with j + m > k are stopped at x_k
    xk = x[k]
    for q in range(power + 1):
        P = np.concatenate([[0.0], np.cumsum(y * x[:n] ** q)])
        total = total + (
            math.comb(power, q) * (-1) ** q * xk ** (power - q) * (P[k] - P[lo])
        )
    return total / m


def ito_verify(
    u: PathFunctional,
    X: Trajectory,
    eps: float,
    grid: Optional[Grid] = None,
    sched: Optional[EpsilonSchedule] = None,
    h_sched: Optional[EpsilonSchedule] = None,
) -> ItoResidual:
    """Pathwise terms of the functional Ito formula along a sampled process

    Each term is evaluated at the sample times ``s_k = k * dt`` of `X`:

    - ``lhs[k] = u(s_k, X_{s_k})``, where ``X_s`` is the window of `X` at
      ``s`` (constant equal to ``X(0)`` before time 0),
    - time and horizontal derivative terms as left Riemann sums,
    - the forward integral ``int_0^{s_k} D^V u d-X`` at the fixed `eps`,
      with `X` stopped at ``s_k``,
    - ``1/2 int_0^{s_k} D^VV u d[X]``, with ``d[X]`` the increment of the
      covariation approximant at `eps`.

    Derivatives come from closed forms when `u` provides them and from the
    numerical operators otherwise.

    Parameters
    ----------
    u: PathFunctional
        The functional.
    X: Trajectory
        Sampled process, on uniform times starting at 0.
    eps: float
        Regularization parameter, an integer multiple of the time step.
    grid: Optional[Grid] = None
        Window grid on ``[-T, 0]``, ``T = X.t_end``. Defaults to the grid
        with the spacing of `X`.
    sched: Optional[EpsilonSchedule] = None
        Schedule for numerical horizontal derivatives.
    h_sched: Optional[EpsilonSchedule] = None
        Schedule for numerical vertical and time derivatives.

    Returns
    -------
    result: ItoResidual
        The terms and residual. ``result.converged`` is False if a numerical
        derivative did not converge at some time.
    """
    times = X.times
    n = times.size - 1
    if n < 1:
        raise ValueError("Error in ito_verify: X needs at least two times")
    step = times[1] - times[0]
    if times[0] != 0.0 or not np.allclose(np.diff(times), step, rtol=1e-9, atol=0.0):
        raise ValueError("Error in ito_verify: X must have uniform times from 0")
    m = int(round(eps / step))
    if m < 1 or not math.isclose(m * step, eps, rel_tol=1e-9):
        raise ValueError(
            f"Error in ito_verify: eps={eps} is not a positive multiple of the "
            f"time step {step}"
        )
    T = X.t_end
    if grid is None:
        grid = Grid.window(T, n + 1)

    lhs = np.empty(n + 1)
    dt, dh, dv, dvv = (np.zeros(n) for _ in range(4))
    converged = True
    for k, s in enumerate(times):
        eta = window_at(X, s, T, grid)
        lhs[k] = u(s, eta)
        if k == n:
            break
        d = derivatives(u, s, eta, sched=sched, h_sched=h_sched, with_time=True)
        converged = converged and d.converged
        dt[k], dh[k] = float(d.dt), float(d.dh)
        dv[k], dvv[k] = float(d.dv), float(d.dvv)

    x = X.values
    return ItoResidual(
        times=times,
        lhs=lhs,
        drift_term=step * np.concatenate([[0.0], np.cumsum(dt)]),
        horizontal_term=step * np.concatenate([[0.0], np.cumsum(dh)]),
        forward_term=_stopped_sum(dv, x, m, power=1),
        qv_term=0.5 * _stopped_sum(dvv, x, m, power=2),
        eps=eps,
        converged=converged,
    )


def martingale_check(
    process_values: np.ndarray,
    max_times: int = 10,
    threshold: float = 4.0,
    name: str = "simflow.martingale",
    seed: Optional[int] = None,
) -> ReportEntry:
    """Test that the sample means of a process do not drift

    For each pair of times ``s < s'`` among up to `max_times` equally spaced
    columns, the statistic ``|mean(V_s' - V_s)| / SE`` is computed. The entry
    reports the largest one and passes if it is at most `threshold`. A
    nonzero mean difference with zero standard error gives ``inf``.

    Parameters
    ----------
    process_values: numpy.ndarray
        Values, shape ``(n_paths, n_times)``.
    max_times: int = 10
        Maximum number of time columns compared.
    threshold: float = 4.0
        Pass threshold, in standard errors.
    name: str = "simflow.martingale"
        Entry name.
    seed: Optional[int] = None
        Seed recorded in the entry.
    """
    V = np.asarray(process_values, dtype=float)
    if V.ndim != 2 or V.shape[0] < 2:
        raise ValueError(
            "Error in martingale_check: need a (n_paths >= 2, n_times) matrix"
        )
    if not np.all(np.isfinite(V)):
        raise ValueError("Error in martingale_check: values must be finite")
    n_paths, n_times = V.shape
    cols = np.unique(
        np.round(np.linspace(0, n_times - 1, min(max_times, n_times))).astype(int)
    )

    worst = (0.0, None)
    for i, a in enumerate(cols):
        for b in cols[i + 1 :]:
            diff = V[:, b] - V[:, a]
            mean = np.mean(diff)
            se = np.std(diff, ddof=1) / math.sqrt(n_paths)
            if se > 0.0:
                z = abs(mean) / se
            else:
                z = 0.0 if mean == 0.0 else math.inf
            if worst[1] is None or z > worst[0]:
                worst = (z, [int(a), int(b)])

    return ReportEntry(
        name=name,
        value=worst[0],
        reference=0.0,
        tolerance=threshold,
        provenance="monte-carlo",
        seed=seed,
        details={
            "n_paths": n_paths,
            "n_times": int(cols.size),
            "worst_pair": worst[1],
        },
    )
