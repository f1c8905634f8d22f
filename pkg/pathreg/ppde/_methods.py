import math
from typing import Optional, Union

import numpy as np

from pathreg.funcder import (
    CylindricalFunctional,
    DifferentiablePathFunctional,
    PathFunctional,
    derivatives,
)
from pathreg.paths import Grid, SampledPath
from pathreg.regcalc import EpsilonSchedule
from pathreg.simflow import SimConfig, flow_windows, gaussian_increments, map_blocks

from ._GaussianCylModel import GaussianCylModel
from ._QuadratureRule import QuadratureRule


def _rule(quad: Optional[QuadratureRule]) -> QuadratureRule:
    return quad if quad is not None else QuadratureRule.gauss_hermite()


def _expect(model: GaussianCylModel, t: float, x: np.ndarray, quad, func):
    """Samples ``func(x + A z)`` and weights over the quadrature nodes

    Returns None if ``Sigma(t) = 0``.
    """
    A = model.factor(t)
    if A.shape[1] == 0:
        return None
    z, w = quad.nodes(A.shape[1])
    return (func(x[None, :] + z @ A.T), w)


def _coordinates(model: GaussianCylModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n_inputs,):
        raise ValueError(
            f"Error in psi_eval: x.shape={x.shape}, expected ({model.n_inputs},)"
        )
    return x


def psi_eval(
    model: GaussianCylModel,
    t: float,
    x: Union[np.ndarray, list[float]],
    quad: Optional[QuadratureRule] = None,
    return_se: bool = False,
):
    """The finite-dimensional solution ``Psi(t, x) = E[g(x + int_t^T phi dW)]``

    Parameters
    ----------
    model: GaussianCylModel
        Covariance model of the cylindrical functional.
    t: float
        Time in ``[0, T]``. At ``t = T`` the result is ``g(x)`` exactly.
    x: array_like
        Coordinates, shape ``(N,)``.
    quad: Optional[QuadratureRule] = None
        Quadrature over the Gaussian law. Defaults to Gauss-Hermite of
        order 20.
    return_se: bool = False
        If True, also return the standard error (0 for Gauss-Hermite).

    Returns
    -------
    value: Union[float, tuple[float, float]]
        ``Psi(t, x)``, or ``(Psi(t, x), standard_error)``.
    """
    quad = _rule(quad)
    x = _coordinates(model, x)
    g = model.c.outer
    res = _expect(model, t, x, quad, g.value)
    if res is None:
        value, se = float(g.value(x)), 0.0
    else:
        samples, w = res
        value, se = float(w @ samples), quad.standard_error(samples)
    return (value, se) if return_se else value


def psi_derivatives(
    model: GaussianCylModel,
    t: float,
    x: Union[np.ndarray, list[float]],
    quad: Optional[QuadratureRule] = None,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Derivatives of ``Psi``

    ``dx = E[grad g]`` and ``dxx = E[hess g]`` at the shifted Gaussian
    coordinates, and the right time derivative
    ``dt = -1/2 sum_ij phi_i(t) phi_j(t) dxx_ij``.

    Returns
    -------
    (dt, dx, dxx): tuple[float, numpy.ndarray, numpy.ndarray]
        Shapes ``()``, ``(N,)`` and ``(N, N)``.
    """
    quad = _rule(quad)
    x = _coordinates(model, x)
    g = model.c.outer
    grad = _expect(model, t, x, quad, g.gradient)
    if grad is None:
        dx, dxx = g.gradient(x), g.hessian(x)
    else:
        hess = _expect(model, t, x, quad, g.hessian)
        dx = np.tensordot(grad[1], grad[0], axes=1)
        dxx = np.tensordot(hess[1], hess[0], axes=1)
    phi = model.phi(t)
    dt = -0.5 * float(phi @ dxx @ phi)
    return (dt, np.asarray(dx, dtype=float), np.asarray(dxx, dtype=float))


def classical_solution(
    c: CylindricalFunctional,
    t: float,
    eta: SampledPath,
    quad: Optional[QuadratureRule] = None,
    model: Optional[GaussianCylModel] = None,
) -> float:
    """Classical solution ``U(t, eta) = Psi(t, x(t, eta))`` of the
    path-dependent heat equation with terminal condition `c`

    At ``t = T`` this equals ``c(T, eta)`` exactly.
    """
    if model is None:
        model = GaussianCylModel(c)
    return psi_eval(model, t, c.coordinates(t, eta), quad)


def solution_functional(
    c: CylindricalFunctional,
    quad: Optional[QuadratureRule] = None,
    model: Optional[GaussianCylModel] = None,
) -> DifferentiablePathFunctional:
    """The classical solution as a path functional with closed-form
    derivatives

    With ``(dt, dx, dxx)`` from :func:`psi_derivatives` at ``x(t, eta)``:

    - ``D^V U = dx . phi(t)``, ``D^VV U = phi(t)^T dxx phi(t)``,
    - ``D^H U = -dx . B`` with the left limit at 0,
    - ``d_t U = dt + dx . B`` with the present value at 0,

    where ``B`` is :func:`CylindricalFunctional.coordinate_drift`.
    """
    if model is None:
        model = GaussianCylModel(c)

    def _psi(t, eta):
        return psi_derivatives(model, t, c.coordinates(t, eta), quad)

    def _dt(t, eta):
        dt, dx, _ = _psi(t, eta)
        return dt + float(dx @ c.coordinate_drift(t, eta, use_present=True))

    def _dh(t, eta):
        _, dx, _ = _psi(t, eta)
        return -float(dx @ c.coordinate_drift(t, eta))

    def _dv(t, eta):
        _, dx, _ = _psi(t, eta)
        return float(dx @ model.phi(t))

    def _dvv(t, eta):
        _, _, dxx = _psi(t, eta)
        phi = model.phi(t)
        return float(phi @ dxx @ phi)

    return DifferentiablePathFunctional(
        evaluator=lambda t, eta: classical_solution(c, t, eta, quad, model),
        label=f"{c.label}_solution",
        dt=_dt,
        dh=_dh,
        dv=_dv,
        dvv=_dvv,
    )


def heat_residual(
    c: CylindricalFunctional,
    t: float,
    eta: SampledPath,
    quad: Optional[QuadratureRule] = None,
    model: Optional[GaussianCylModel] = None,
    numerical: bool = False,
    sched: Optional[EpsilonSchedule] = None,
    h_sched: Optional[EpsilonSchedule] = None,
) -> float:
    """``|d_t U + D^H U + 1/2 D^VV U|`` for the classical solution `U`

    Parameters
    ----------
    c: CylindricalFunctional
        Terminal condition.
    t: float
        Time in ``[0, T)``.
    eta: SampledPath
        Path on ``[-T, 0]``.
    quad: Optional[QuadratureRule] = None
        Quadrature for ``Psi`` and its derivatives.
    model: Optional[GaussianCylModel] = None
        Covariance model, built from `c` if None.
    numerical: bool = False
        If False, the three terms come from the closed forms of
        :func:`solution_functional`. If True, they are computed from values
        of ``U`` with :func:`pathreg.funcder.derivatives`; `t` must then leave
        room for the time-difference steps before ``T``.
    sched, h_sched: Optional[EpsilonSchedule] = None
        Schedules for the numerical derivatives.
    """
    if not (0.0 <= t < c.T):
        raise ValueError(f"Error in heat_residual: t={t} outside [0, {c.T})")
    if model is None:
        model = GaussianCylModel(c)
    if numerical:
        u = PathFunctional(
            evaluator=lambda s, p: classical_solution(c, s, p, quad, model),
            label=f"{c.label}_solution",
        )
        d = derivatives(u, t, eta, sched=sched, h_sched=h_sched, with_time=True)
        return abs(float(d.dt) + float(d.dh) + 0.5 * float(d.dvv))

    u = solution_functional(c, quad, model)
    return abs(u.dt(t, eta) + u.dh(t, eta) + 0.5 * u.dvv(t, eta))


def mc_price(
    G: PathFunctional,
    t: float,
    eta: SampledPath,
    cfg: SimConfig,
    grid: Optional[Grid] = None,
) -> tuple[float, float]:
    """Monte Carlo value ``E[G(W_T^{t, eta})]`` over flow samples

    Parameters
    ----------
    G: PathFunctional
        Terminal functional, evaluated at time ``cfg.T`` with
        :func:`PathFunctional.evaluate_many`.
    t: float
        Anchor time.
    eta: SampledPath
        Anchor path; interpolated onto `grid` where needed.
    cfg: SimConfig
        Path count, seed and parallel settings.
    grid: Optional[Grid] = None
        Window grid. Defaults to ``cfg.n_steps + 1`` points on ``[-T, 0]``.

    Returns
    -------
    (mean, standard_error): tuple[float, float]
    """
    if grid is None:
        grid = Grid.window(cfg.T, cfg.n_steps + 1)
    values = flow_windows(t, eta, grid, cfg)
    samples = np.asarray(G.evaluate_many(cfg.T, grid, values), dtype=float)
    if not np.all(np.isfinite(samples)):
        raise ValueError(f"Error in mc_price: non-finite values of '{G.label}'")
    if samples.size < 2:
        return (float(samples[0]), math.inf)
    se = float(np.std(samples, ddof=1) / math.sqrt(samples.size))
    return (float(np.mean(samples)), se)


def coordinate_samples(
    c: CylindricalFunctional,
    t: float,
    eta: SampledPath,
    cfg: SimConfig,
    order: int = 4,
) -> np.ndarray:
    """Samples of the terminal coordinates ``x(t, eta) + int_t^T phi dW``

    The stochastic integral is the sum of ``phi`` averaged over each step of
    at most ``cfg.dt`` times the Brownian increment, so samples for different
    functionals with the same `cfg` share their Brownian paths.

    Returns
    -------
    x: numpy.ndarray
        Shape ``(cfg.n_paths, c.n_inputs)``.
    """
    if not (0.0 <= t <= c.T):
        raise ValueError(f"Error in coordinate_samples: t={t} outside [0, {c.T}]")
    x0 = c.coordinates(t, eta)
    if t == c.T:
        return np.tile(x0, (cfg.n_paths, 1))
    m = max(int(math.ceil((c.T - t) / cfg.dt - 1e-9)), 1)
    times = np.linspace(t, c.T, m + 1)
    dt = np.diff(times)
    xg, wg = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (times[1:] + times[:-1])[:, None] + 0.5 * dt[:, None] * xg[None, :]
    # cell averages of phi, shape (m, N)
    phi_bar = np.stack(
        [0.5 * np.sum(phi.value(s) * wg[None, :], axis=1) for phi in c.basis],
        axis=1,
    )

    def _block(start, stop):
        incr = gaussian_increments(cfg.seed, start, stop, dt)
        return x0[None, :] + incr @ phi_bar

    return map_blocks(_block, cfg.n_paths, cfg.block_size, cfg.n_workers)


def mc_cylindrical_price(
    c: CylindricalFunctional,
    t: float,
    eta: SampledPath,
    cfg: SimConfig,
) -> tuple[float, float]:
    """Monte Carlo value ``E[g(x(T, W_T^{t, eta}))]`` from
    :func:`coordinate_samples`

    Returns
    -------
    (mean, standard_error): tuple[float, float]
    """
    samples = np.asarray(c.outer.value(coordinate_samples(c, t, eta, cfg)))
    if not np.all(np.isfinite(samples)):
        raise ValueError(
            f"Error in mc_cylindrical_price: non-finite values of '{c.label}'"
        )
    if samples.size < 2:
        return (float(samples[0]), math.inf)
    se = float(np.std(samples, ddof=1) / math.sqrt(samples.size))
    return (float(np.mean(samples)), se)
