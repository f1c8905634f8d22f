"""Closed-form lookback value ``f(t, m, x) = E[max(m, x + S_{T-t})]`` and
its checks along simulated Brownian paths"""

import math
from typing import Optional

import numpy as np
from scipy.stats import halfnorm, kstest, norm

from pathreg.funcder import sup_functional
from pathreg.paths import SampledPath
from pathreg.regcalc import is_decreasing_trend
from pathreg.report import ReportEntry
from pathreg.simflow import (
    SimConfig,
    brownian_paths,
    gaussian_increments,
    map_blocks,
    martingale_check,
)

from ._LookbackState import LookbackState

#: Mean downward shift of a Brownian maximum monitored at step dt, per sqrt(dt)
DISCRETE_MAX_SHIFT = 0.5826

_SUP = sup_functional()


def _states(t, m, x, T: float):
    t, m, x = np.broadcast_arrays(
        np.asarray(t, dtype=float),
        np.asarray(m, dtype=float),
        np.asarray(x, dtype=float),
    )
    tau = T - t
    if np.any(tau < 0.0):
        raise ValueError(f"Error in lookback: t > T={T}")
    return (t, m, x, tau)


def lookback_f(t, m, x, T: float = 1.0) -> np.ndarray:
    """Vectorized lookback value

    For ``x <= m``, with ``tau = T - t`` and ``d = (m - x) / sqrt(tau)``:

    .. code-block:: text

        f = 2 (m - x) Phi(d) + 2 sqrt(tau) phi(d) - m + 2 x

    For ``x > m``: ``f = x + sqrt(2 tau / pi)``. At ``t = T``:
    ``f = max(m, x)``.
    """
    t, m, x, tau = _states(t, m, x, T)
    live = tau > 0.0
    sq = np.sqrt(np.where(live, tau, 1.0))
    d = (m - x) / sq
    below = 2.0 * (m - x) * norm.cdf(d) + 2.0 * sq * norm.pdf(d) - m + 2.0 * x
    above = x + np.sqrt(2.0 * tau / math.pi)
    out = np.where(x <= m, below, above)
    return np.where(live, out, np.maximum(m, x))


def lookback_partials(t, m, x, T: float = 1.0) -> dict[str, np.ndarray]:
    """Vectorized closed-form partial derivatives ``dt``, ``dx``, ``dxx`` and
    ``dm`` of :func:`lookback_f`, for ``t < T``"""
    t, m, x, tau = _states(t, m, x, T)
    if np.any(tau <= 0.0):
        raise ValueError(f"Error in lookback_partials: need t < T={T}")
    sq = np.sqrt(tau)
    d = (m - x) / sq
    pdf, cdf = norm.pdf(d), norm.cdf(d)
    below = x <= m
    return {
        "dt": np.where(below, -pdf / sq, -norm.pdf(0.0) / sq),
        "dx": np.where(below, 2.0 * (1.0 - cdf), 1.0),
        "dxx": np.where(below, 2.0 * pdf / sq, 0.0),
        "dm": np.where(below, 2.0 * cdf - 1.0, 0.0),
    }


def lookback_value(state: LookbackState, T: float = 1.0) -> float:
    """Lookback value at one state"""
    if not (0.0 <= state.t <= T):
        raise ValueError(f"Error in lookback_value: t={state.t} outside [0, {T}]")
    return float(lookback_f(state.t, state.m, state.x, T))


def lookback_derivatives(state: LookbackState, T: float = 1.0) -> dict[str, float]:
    """Closed-form ``dt``, ``dx``, ``dxx`` and ``dm`` at one state, ``t < T``"""
    partials = lookback_partials(state.t, state.m, state.x, T)
    return {key: float(value) for key, value in partials.items()}


def lookback_U(t: float, eta: SampledPath, T: float = 1.0) -> float:
    """Path-dependent lookback solution ``f(t, max of eta on [-t, 0], eta(0))``

    At ``t = T`` this is the supremum of the window.
    """
    if not (0.0 <= t <= T):
        raise ValueError(f"Error in lookback_U: t={t} outside [0, {T}]")
    m = _SUP(t, eta)
    return lookback_value(LookbackState(t, m, eta.present_value), T)


def lookback_pde_check(
    T: float = 1.0,
    n: int = 50,
    h: float = 1e-4,
    tolerance: float = 1e-10,
    fd_tolerance: float = 1e-4,
    t_max: float = 0.99,
) -> list[ReportEntry]:
    """Check the backward heat equation ``f_t + f_xx / 2 = 0`` on ``x <= m``

    The closed-form residual is evaluated on an ``n**3`` grid of
    ``t in [0, t_max T]``, ``m in [-1, 1]``, ``m - x in [0, 2]``. The
    closed-form partials are compared with central differences away from
    ``x = m``, where ``f_xx`` jumps. The step at time ``t`` is
    ``h sqrt((T - t) / T)``: the partials vary on the scale ``sqrt(T - t)``
    near the terminal time.

    Returns
    -------
    entries: list[ReportEntry]
        ``"lookback.pde_residual"`` and ``"lookback.pde_fd"``.
    """
    if not (0.0 < t_max < 1.0):
        raise ValueError(
            f"Error in lookback_pde_check: t_max={t_max} outside (0, 1)"
        )
    t, m, gap = np.meshgrid(
        np.linspace(0.0, t_max * T, n),
        np.linspace(-1.0, 1.0, n),
        np.linspace(0.0, 2.0, n),
        indexing="ij",
    )
    x = m - gap
    p = lookback_partials(t, m, x, T)
    residual = float(np.max(np.abs(p["dt"] + 0.5 * p["dxx"])))

    sel = gap >= 2.0 * h
    t, m, x = t[sel], m[sel], x[sel]
    p = {key: value[sel] for key, value in p.items()}
    h = h * np.sqrt((T - t) / T)
    f0 = lookback_f(t, m, x, T)
    fd = {
        "dt": (lookback_f(t + h, m, x, T) - lookback_f(t - h, m, x, T)) / (2 * h),
        "dx": (lookback_f(t, m, x + h, T) - lookback_f(t, m, x - h, T)) / (2 * h),
        "dxx": (lookback_f(t, m, x + h, T) - 2.0 * f0 + lookback_f(t, m, x - h, T))
        / h**2,
        "dm": (lookback_f(t, m + h, x, T) - lookback_f(t, m - h, x, T)) / (2 * h),
    }
    mismatch = {
        key: float(np.max(np.abs(fd[key] - p[key]) / (1.0 + np.abs(p[key]))))
        for key in fd
    }
    return [
        ReportEntry(
            name="lookback.pde_residual",
            value=residual,
            reference=0.0,
            tolerance=tolerance,
            provenance="closed-form",
            details={"n_points": n**3, "T": T, "t_max": t_max},
        ),
        ReportEntry(
            name="lookback.pde_fd",
            value=max(mismatch.values()),
            reference=0.0,
            tolerance=fd_tolerance,
            provenance="finite-difference",
            details={
                "h": float(np.max(h)),
                "h_min": float(np.min(h)),
                "t_max": t_max,
                "relative_mismatch": mismatch,
            },
        ),
    ]


def running_max(W: np.ndarray) -> np.ndarray:
    """Running maximum along the last axis, monitored at the sample times"""
    return np.maximum.accumulate(W, axis=-1)


def reflection_check(
    cfg: SimConfig,
    t: Optional[float] = None,
    critical: float = 1.63,
    name: str = "lookback.reflection",
) -> ReportEntry:
    """Compare the law of the simulated running maximum at `t` with the law
    of ``|W_t|``

    The Kolmogorov-Smirnov distance is accepted up to
    ``critical / sqrt(n_paths)`` plus an allowance for the discrete monitoring
    shift ``DISCRETE_MAX_SHIFT * sqrt(dt)`` times the peak density
    ``sqrt(2 / (pi t))``. No continuity correction is applied.
    """
    if t is None:
        t = cfg.T
    k = int(round(t / cfg.dt))
    if k < 1 or not math.isclose(k * cfg.dt, t, rel_tol=1e-9):
        raise ValueError(
            f"Error in reflection_check: t={t} is not a positive multiple of "
            f"dt={cfg.dt}"
        )
    _, W = brownian_paths(cfg)
    S = np.max(W[:, : k + 1], axis=1)
    result = kstest(S, halfnorm(scale=math.sqrt(t)).cdf)
    density = math.sqrt(2.0 / (math.pi * t))
    allowance = density * DISCRETE_MAX_SHIFT * math.sqrt(cfg.dt)
    return ReportEntry(
        name=name,
        value=float(result.statistic),
        reference=0.0,
        tolerance=critical / math.sqrt(cfg.n_paths) + allowance,
        provenance="monte-carlo",
        seed=cfg.seed,
        details={
            "t": t,
            "n_samples": cfg.n_paths,
            "p_value": float(result.pvalue),
            "monitoring_allowance": allowance,
        },
    )


def _trend_entry(name, n_steps_list, values, tolerance, seed):
    decreasing = is_decreasing_trend(values)
    return ReportEntry(
        name=name,
        value=values[-1],
        reference=0.0,
        tolerance=tolerance,
        gap=abs(values[-1]) if decreasing else math.inf,
        provenance="trend",
        seed=seed,
        details={
            "n_steps": list(n_steps_list),
            "values": list(values),
            "decreasing": decreasing,
        },
    )


def _lookback_paths(n_steps: int, n_paths: int, seed: int, T: float, n_workers: int):
    cfg = SimConfig(
        n_steps=n_steps, n_paths=n_paths, T=T, seed=seed, n_workers=n_workers
    )
    times, W = brownian_paths(cfg)
    return (times, W, running_max(W))


def local_time_check(
    n_steps_list: tuple[int, ...] = (64, 256, 1024),
    n_paths: int = 2000,
    seed: int = 0,
    T: float = 1.0,
    tolerance: float = 0.05,
    n_workers: int = 1,
) -> ReportEntry:
    """The ``dS`` term of the lookback Ito formula vanishes

    Along simulated paths, ``sum_k |f_m(s_k, S_k, W_k)| (S_{k+1} - S_k)`` only
    picks up steps where the running maximum increases, where ``S - W`` is
    small and ``f_m = 2 Phi((S - W) / sqrt(T - s)) - 1`` is close to 0. Its
    path average must decrease with the step and be at most `tolerance` at
    the finest step.
    """
    values = []
    for n_steps in n_steps_list:
        times, W, S = _lookback_paths(n_steps, n_paths, seed, T, n_workers)
        dm = lookback_partials(times[None, :-1], S[:, :-1], W[:, :-1], T)["dm"]
        dS_term = np.sum(np.abs(dm) * np.diff(S, axis=1), axis=1)
        values.append(float(np.mean(dS_term)))
    return _trend_entry("lookback.local_time", n_steps_list, values, tolerance, seed)


def hedging_check(
    n_steps_list: tuple[int, ...] = (64, 256, 1024),
    n_paths: int = 2000,
    seed: int = 0,
    T: float = 1.0,
    tolerance: float = 0.1,
    n_workers: int = 1,
) -> ReportEntry:
    """Replication of the lookback payoff by its ``f_x`` hedge

    For each step count, the RMS over paths of
    ``max W - (f(0, 0, 0) + sum_k f_x(s_k, S_k, W_k) (W_{k+1} - W_k))`` is
    computed. It must decrease with the step and be at most `tolerance` at the
    finest step.
    """
    values = []
    for n_steps in n_steps_list:
        times, W, S = _lookback_paths(n_steps, n_paths, seed, T, n_workers)
        dx = lookback_partials(times[None, :-1], S[:, :-1], W[:, :-1], T)["dx"]
        f0 = float(lookback_f(0.0, 0.0, 0.0, T))
        hedge = f0 + np.sum(dx * np.diff(W, axis=1), axis=1)
        values.append(float(np.sqrt(np.mean((S[:, -1] - hedge) ** 2))))
    return _trend_entry("lookback.hedging", n_steps_list, values, tolerance, seed)


def lookback_martingale_check(
    cfg: SimConfig,
    max_times: int = 5,
    threshold: float = 4.0,
) -> ReportEntry:
    """:func:`martingale_check` of ``s -> f(s, S_s, W_s)`` along simulated
    paths

    The running maximum is monitored at the sample times, so the terminal
    mean is biased down by about ``DISCRETE_MAX_SHIFT * sqrt(dt)``.
    """
    times, W = brownian_paths(cfg)
    V = lookback_f(times[None, :], running_max(W), W, cfg.T)
    entry = martingale_check(
        V,
        max_times=max_times,
        threshold=threshold,
        name="lookback.martingale",
        seed=cfg.seed,
    )
    entry.details["monitoring_bias"] = DISCRETE_MAX_SHIFT * math.sqrt(cfg.dt)
    return entry


def lookback_value_mc(
    cfg: SimConfig,
    allowance: float = 0.01,
    n_se: float = 4.0,
) -> ReportEntry:
    """Monte Carlo ``E[max_{s <= T} W_s]`` against ``f(0, 0, 0) = sqrt(2 T / pi)``

    The maximum is monitored at the ``cfg.n_steps`` sample times and reduced
    block by block, so memory does not grow with the number of paths. The
    entry passes if the mean is within ``n_se`` standard errors plus the
    discrete-monitoring `allowance` of the closed form.
    """
    dt = np.full(cfg.n_steps, cfg.dt)

    def _block(start, stop):
        W = np.cumsum(gaussian_increments(cfg.seed, start, stop, dt), axis=1)
        return np.maximum(np.max(W, axis=1), 0.0)

    S = map_blocks(_block, cfg.n_paths, cfg.block_size, cfg.n_workers)
    mean = float(np.mean(S))
    se = float(np.std(S, ddof=1) / math.sqrt(S.size)) if S.size > 1 else math.inf
    exact = float(lookback_f(0.0, 0.0, 0.0, cfg.T))
    return ReportEntry(
        name="lookback.value_mc",
        value=mean,
        reference=exact,
        tolerance=n_se * se + allowance,
        provenance="monte-carlo",
        seed=cfg.seed,
        details={
            "n_paths": cfg.n_paths,
            "n_steps": cfg.n_steps,
            "se": se,
            "expected_monitoring_bias": DISCRETE_MAX_SHIFT * math.sqrt(cfg.dt),
        },
    )
