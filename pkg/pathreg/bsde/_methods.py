import math
from typing import Callable, Optional, Union

import numpy as np

from pathreg.regcalc import is_decreasing_trend
from pathreg.report import ReportEntry
from pathreg.simflow import SimConfig, gaussian_increments, map_blocks

from ._BSDEProblem import BSDE_FLAVORS, BSDEProblem
from ._BSDESolution import BSDESolution
from ._EulerSample import EulerSample
from ._mollify import mollify_coeffs
from ._regression import regress
from ._SDECoeffs import SDECoeffs

_FLAVOR_SIGN = {"exact": 0.0, "super": 1.0, "sub": -1.0}


def _default_cfg(cfg: Optional[SimConfig]) -> SimConfig:
    return cfg if cfg is not None else SimConfig(n_steps=64, n_paths=10000, T=1.0)


def _time_grid(t: float, cfg: SimConfig, caller: str) -> np.ndarray:
    if not (0.0 <= t < cfg.T):
        raise ValueError(f"Error in {caller}: t={t} outside [0, {cfg.T})")
    m = max(int(math.ceil((cfg.T - t) / cfg.dt - 1e-9)), 1)
    return np.linspace(t, cfg.T, m + 1)


def sde_euler(
    coeffs: SDECoeffs,
    t: float,
    x: Union[float, list[float], np.ndarray],
    cfg: SimConfig,
) -> EulerSample:
    """Euler-Maruyama paths of ``X^{t,x}`` on ``[t, T]``

    The step is at most ``cfg.dt``. Path ``i`` uses the Brownian increments
    of ``np.random.default_rng([cfg.seed, i])``, so results do not depend on
    the block layout or worker count, and different coefficients simulated
    with the same `cfg` share their Brownian paths.

    Raises
    ------
    FloatingPointError
        If a state becomes non-finite; the message names the first such path.
    """
    d = coeffs.d
    x0 = np.atleast_1d(np.asarray(x, dtype=float))
    if x0.shape != (d,):
        raise ValueError(f"Error in sde_euler: x has shape {x0.shape}, expected ({d},)")
    times = _time_grid(t, cfg, "sde_euler")
    dt = np.diff(times)
    m = dt.size

    def _increments(start, stop):
        dW = gaussian_increments(cfg.seed, start, stop, np.repeat(dt, d))
        return dW.reshape(stop - start, m, d)

    dW = map_blocks(_increments, cfg.n_paths, cfg.block_size, cfg.n_workers)

    def _block(start, stop):
        X = np.empty((stop - start, m + 1, d))
        X[:, 0, :] = x0
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(m):
                xi = X[:, i, :]
                X[:, i + 1, :] = (
                    xi
                    + coeffs.b(times[i], xi) * dt[i]
                    + np.einsum(
                        "nij,nj->ni", coeffs.sigma(times[i], xi), dW[start:stop, i]
                    )
                )
        return X

    X = map_blocks(_block, cfg.n_paths, cfg.block_size, cfg.n_workers)
    bad = ~np.all(np.isfinite(X.reshape(cfg.n_paths, -1)), axis=1)
    if np.any(bad):
        raise FloatingPointError(
            f"Error in sde_euler: non-finite state on path {int(np.argmax(bad))} "
            f"of '{coeffs.label}'"
        )
    return EulerSample(times, X, dW)


def moment_bound(sample: EulerSample, p: float = 2.0) -> tuple[float, float]:
    """Monte Carlo ``E[sup_s |X_s|**p]``

    Returns
    -------
    (mean, standard_error): tuple[float, float]
    """
    if not p >= 1.0:
        raise ValueError(f"Error in moment_bound: p={p} < 1")
    sup = np.max(np.linalg.norm(sample.X, axis=2), axis=1) ** p
    return (float(np.mean(sup)), float(np.std(sup, ddof=1) / math.sqrt(sup.size)))


def _trend_entry(name, orders, errors, seed, atol=1e-14):
    flat = bool(np.all(np.asarray(errors) <= atol))
    decreasing = flat or is_decreasing_trend(errors)
    return ReportEntry(
        name=name,
        value=errors[-1],
        reference=0.0,
        tolerance=max(errors[0], atol),
        gap=errors[-1] if decreasing else math.inf,
        provenance="trend",
        seed=seed,
        details={"n": list(orders), "error": list(errors), "decreasing": decreasing},
    )


def sde_convergence(
    raw: SDECoeffs,
    t: float,
    x: Union[float, list[float], np.ndarray],
    orders: tuple[int, ...] = (4, 16, 64),
    cfg: Optional[SimConfig] = None,
    name: str = "bsde.sde_convergence",
) -> ReportEntry:
    """``E[sup_s |X^n_s - X_s|**2]`` for mollified coefficients of order
    ``n`` in `orders`, on common Brownian paths

    The entry passes if the errors form a decreasing trend (or all vanish).
    """
    cfg = _default_cfg(cfg)
    X = sde_euler(raw, t, x, cfg).X
    errors = []
    for n in orders:
        Xn = sde_euler(mollify_coeffs(raw, n), t, x, cfg).X
        sup2 = np.max(np.sum((Xn - X) ** 2, axis=2), axis=1)
        errors.append(float(np.mean(sup2)))
    return _trend_entry(name, orders, errors, cfg.seed)


def bsde_solve(
    p: BSDEProblem,
    flavor: str = "exact",
    cfg: Optional[SimConfig] = None,
    degree: int = 4,
) -> BSDESolution:
    """Solve a :class:`BSDEProblem` by backward regression

    From ``Y_m = g(X_T)``, for each step ``i = m - 1, ..., 0``:

    .. code-block:: text

        Z_i = E[(Y_{i+1} - E[Y_{i+1} | X_i]) dW_i | X_i] / dt_i
        Y_i = E[Y_{i+1} + f(t_i, X_i, Y_{i+1}, Z_i) dt_i + dK_i | X_i]

    where conditional expectations are least-squares regressions on
    polynomials of the standardized state of total degree up to `degree`,
    and ``dK_i = +/- k_rate(t_i, X_i) dt_i`` for the ``"super"`` /
    ``"sub"`` flavors.

    Parameters
    ----------
    p: BSDEProblem
        The problem, started at ``(p.t0, p.x0)``.
    flavor: str = "exact"
        ``"exact"`` (``K = 0``), ``"super"`` or ``"sub"``.
    cfg: Optional[SimConfig] = None
        Simulation settings. Defaults to 64 steps and 10000 paths on
        ``[0, 1]``.
    degree: int = 4
        Maximum regression degree; lowered with a :class:`RuntimeWarning`
        where the regression is rank deficient.
    """
    if flavor not in BSDE_FLAVORS:
        raise ValueError(
            f"Error in bsde_solve: flavor={flavor!r}, expected one of {BSDE_FLAVORS}"
        )
    if degree < 0:
        raise ValueError(f"Error in bsde_solve: degree={degree} < 0")
    cfg = _default_cfg(cfg)
    sample = sde_euler(p.coeffs, p.t0, p.x0, cfg)
    X, dW, times, dt = sample.X, sample.dW, sample.times, sample.dt
    n, m = cfg.n_paths, dt.size

    dK = np.zeros((n, m))
    sign = _FLAVOR_SIGN[flavor]
    if sign != 0.0 and p.k_rate is not None:
        for i in range(m):
            rate = np.broadcast_to(
                np.asarray(p.k_rate(times[i], X[:, i, :]), dtype=float), (n,)
            )
            if np.any(rate < 0.0):
                raise ValueError(
                    f"Error in bsde_solve: negative k_rate at t={times[i]} "
                    f"for '{p.label}'"
                )
            dK[:, i] = sign * rate * dt[i]

    Y = np.empty((n, m + 1))
    Y[:, m] = p.terminal(X[:, m, :])
    if not np.all(np.isfinite(Y[:, m])):
        raise ValueError(
            f"Error in bsde_solve: non-finite terminal values of '{p.label}'"
        )
    Z = np.zeros((n, m, p.d))
    pathwise = Y[:, m].copy()
    degrees = []
    for i in range(m - 1, -1, -1):
        xi = X[:, i, :]
        y_next = Y[:, i + 1]
        cond, deg_y = regress(xi, y_next, degree, "bsde_solve")
        target = (y_next - cond)[:, None] * dW[:, i, :] / dt[i]
        Z[:, i, :], deg_z = regress(xi, target, degree, "bsde_solve")
        drift = np.asarray(p.generator(times[i], xi, y_next, Z[:, i, :])) * dt[i]
        Y[:, i], deg = regress(xi, y_next + drift + dK[:, i], degree, "bsde_solve")
        pathwise += drift + dK[:, i]
        degrees.append(min(deg_y, deg_z, deg))

    K = np.zeros((n, m + 1))
    np.cumsum(dK, axis=1, out=K[:, 1:])
    return BSDESolution(
        sample=sample,
        Y=Y,
        Z=Z,
        K=K,
        flavor=flavor,
        y0_se=float(np.std(pathwise, ddof=1) / math.sqrt(n)),
        degrees=degrees[::-1],
    )


def bsde_value(
    p: BSDEProblem,
    t: float,
    x: Union[float, list[float], np.ndarray],
    cfg: Optional[SimConfig] = None,
    flavor: str = "exact",
    degree: int = 4,
) -> tuple[float, float]:
    """``(Y_t, standard_error)`` for the problem started at ``(t, x)``"""
    sol = bsde_solve(p.replace(t0=t, x0=x), flavor=flavor, cfg=cfg, degree=degree)
    return (sol.y0, sol.y0_se)


def comparison_check(
    sub_value: Callable[[float, np.ndarray], tuple[float, float]],
    super_value: Callable[[float, np.ndarray], tuple[float, float]],
    points: list[tuple[float, list[float]]],
    n_se: float = 4.0,
    name: str = "bsde.comparison",
) -> ReportEntry:
    """Check ``sub(t, x) <= super(t, x)`` at sampled points

    The value maps return ``(value, standard_error)``. The entry gap is the
    largest violation ``sub - super`` in units of the combined standard
    error; it must be at most `n_se`. The worst margin ``super - sub`` is
    the entry value.
    """
    if not points:
        raise ValueError("Error in comparison_check: no sample points")
    rows = []
    worst = 0.0
    for t, x in points:
        lo, se_lo = sub_value(t, x)
        hi, se_hi = super_value(t, x)
        margin = hi - lo
        se = math.hypot(se_lo, se_hi)
        if margin >= 0.0:
            violation = 0.0
        else:
            violation = -margin / se if se > 0.0 else math.inf
        worst = max(worst, violation)
        rows.append([t, *np.atleast_1d(x).tolist(), lo, hi, margin, se])
    margins = [r[-2] for r in rows]
    return ReportEntry(
        name=name,
        value=min(margins),
        reference=0.0,
        tolerance=n_se,
        gap=worst,
        provenance="derived",
        details={
            "rows": rows,
            "columns": ["t", "x...", "sub", "super", "margin", "se"],
        },
    )


def apriori_check(
    sol: BSDESolution,
    p: BSDEProblem,
    max_constant: float = 1e6,
    name: str = "bsde.apriori",
) -> ReportEntry:
    """Implied constant of the a priori estimate

    .. code-block:: text

        |Z|_H2**2 + |K|_S2**2
            <= C (1 + T**3) (|Y|_S2**2 + E int |f(s, X_s, 0, 0)|**2 ds)

    with ``|Y|_S2**2`` the maximum over the grid of ``E[Y_t**2]`` and
    ``|Z|_H2**2 = E int |Z_s|**2 ds``. The entry value is
    ``C = LHS / ((1 + T**3) RHS)`` (0 when both sides vanish).
    """
    times, X = sol.times, sol.sample.X
    dt = np.diff(times)
    T = float(times[-1] - times[0])
    Z2 = float(np.mean(np.sum(np.sum(sol.Z**2, axis=2) * dt, axis=1)))
    K2 = float(np.max(np.mean(sol.K**2, axis=0)))
    Y2 = float(np.max(np.mean(sol.Y**2, axis=0)))
    n = X.shape[0]
    zero_y, zero_z = np.zeros(n), np.zeros((n, p.d))
    F0 = 0.0
    for i in range(dt.size):
        f0 = np.asarray(p.generator(times[i], X[:, i, :], zero_y, zero_z))
        F0 += float(np.mean(f0**2)) * dt[i]
    lhs, rhs = Z2 + K2, Y2 + F0
    if lhs == 0.0:
        C = 0.0
    elif rhs == 0.0:
        C = math.inf
    else:
        C = lhs / ((1.0 + T**3) * rhs)
    return ReportEntry(
        name=name,
        value=C,
        reference=0.0,
        tolerance=max_constant,
        provenance="derived",
        details={
            "lhs": lhs,
            "rhs": rhs,
            "Z_H2": Z2,
            "K_S2": K2,
            "Y_S2": Y2,
            "f0_L2": F0,
            "T": T,
            "flavor": sol.flavor,
        },
    )


def apriori_stability(
    entries: list[ReportEntry],
    max_ratio: float = 2.0,
    name: str = "bsde.apriori_stability",
) -> ReportEntry:
    """Spread ``max C / min C`` of the implied constants of
    :func:`apriori_check` over a scenario family (vanishing constants are
    skipped)"""
    constants = [e.value for e in entries]
    positive = [c for c in constants if c > 0.0]
    if any(not math.isfinite(c) for c in constants):
        ratio = math.inf
    elif len(positive) < 2:
        ratio = 1.0
    else:
        ratio = max(positive) / min(positive)
    return ReportEntry(
        name=name,
        value=ratio,
        reference=1.0,
        tolerance=max_ratio,
        gap=ratio,
        provenance="derived",
        details={"names": [e.name for e in entries], "constants": constants},
    )


def limit_diagnostic(
    raw: BSDEProblem,
    orders: tuple[int, ...] = (4, 16, 64),
    n_ref: int = 256,
    q: float = 1.0,
    cfg: Optional[SimConfig] = None,
    flavor: str = "exact",
    degree: int = 4,
    name: str = "bsde.limit",
) -> ReportEntry:
    """``E int |Z^n - Z^{n_ref}|**q dt`` for the mollified problems of order
    ``n`` in `orders`, on common Brownian paths

    The entry passes if the errors form a decreasing trend (or all vanish).
    """
    if not (1.0 <= q < 2.0):
        raise ValueError(f"Error in limit_diagnostic: q={q} outside [1, 2)")
    if max(orders) >= n_ref:
        raise ValueError(
            f"Error in limit_diagnostic: n_ref={n_ref} must exceed the orders"
        )
    cfg = _default_cfg(cfg)
    ref = bsde_solve(mollify_coeffs(raw, n_ref), flavor, cfg, degree)
    dt = np.diff(ref.times)
    errors = []
    for n in orders:
        sol = bsde_solve(mollify_coeffs(raw, n), flavor, cfg, degree)
        dist = np.linalg.norm(sol.Z - ref.Z, axis=2) ** q
        errors.append(float(np.mean(np.sum(dist * dt, axis=1))))
    entry = _trend_entry(name, orders, errors, cfg.seed)
    entry.details.update({"n_ref": n_ref, "q": q})
    return entry
