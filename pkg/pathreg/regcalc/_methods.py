from typing import Optional

import numpy as np

from pathreg.paths import SampledPath
from pathreg.report import ReportEntry

from ._AtomicMeasure import AtomicMeasure
from ._convergence import estimate_limit
from ._EpsilonSchedule import EpsilonSchedule
from ._LimitEstimate import LimitEstimate
from ._quadrature import breakpoints, check_left, extended, integrate_piecewise


def _check_interval(caller: str, *paths: SampledPath):
    a, b = paths[0].grid.t_min, paths[0].grid.t_max
    for p in paths[1:]:
        if p.grid.t_min != a or p.grid.t_max != b:
            raise ValueError(
                f"Error in {caller}: paths live on different intervals "
                f"[{a}, {b}] and [{p.grid.t_min}, {p.grid.t_max}]"
            )


def _schedule(sched: Optional[EpsilonSchedule], caller: str, *paths: SampledPath):
    if sched is None:
        sched = EpsilonSchedule()
    sched.validate(min(p.grid.spacing for p in paths), caller=caller)
    return sched


def forward_approximant(
    g: SampledPath, f: SampledPath, eps: float, left: str = "zero"
) -> float:
    """The integral ``int_[a,b] g(s) (f(s+eps) - f(s)) / eps ds``

    `f` is extended by its present value right of ``b``. The piecewise-linear
    integrand is integrated exactly.
    """
    check_left(left, "forward_approximant")
    a, b = g.grid.t_min, g.grid.t_max
    nodes = breakpoints(
        a, b, g.grid.points, f.grid.points, f.grid.points - eps, b - eps
    )

    def integrand(s):
        return g.past_at(s) * (extended(f, s + eps, left) - extended(f, s, left))

    return integrate_piecewise(integrand, nodes) / eps


def backward_approximant(
    g: SampledPath, f: SampledPath, eps: float, left: str = "zero"
) -> float:
    """The integral ``int_[a,b] g(s) (f(s) - f(s-eps)) / eps ds``

    Left of ``a``, `f` is 0 (``left="zero"``) or ``f(a)`` (``left="hold"``).
    """
    check_left(left, "backward_approximant")
    a, b = g.grid.t_min, g.grid.t_max
    nodes = breakpoints(
        a, b, g.grid.points, f.grid.points, f.grid.points + eps, a + eps
    )

    def integrand(s):
        return g.past_at(s) * (extended(f, s, left) - extended(f, s - eps, left))

    return integrate_piecewise(integrand, nodes) / eps


def covariation_approximant(
    f: SampledPath, g: SampledPath, x: float, eps: float
) -> float:
    """The integral ``(1/eps) int_0^x (f(s+eps) - f(s)) (g(s+eps) - g(s)) ds``

    For ``x < 0`` the integral runs backwards and changes sign.
    """
    lo, hi = min(0.0, x), max(0.0, x)
    b = f.grid.t_max
    nodes = breakpoints(
        lo,
        hi,
        f.grid.points,
        g.grid.points,
        f.grid.points - eps,
        g.grid.points - eps,
        b - eps,
    )

    def integrand(s):
        df = extended(f, s + eps) - extended(f, s)
        dg = extended(g, s + eps) - extended(g, s)
        return df * dg

    value = integrate_piecewise(integrand, nodes) / eps
    return value if x >= 0.0 else -value


def forward_integral(
    g: SampledPath,
    f: SampledPath,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
    left: str = "zero",
) -> LimitEstimate:
    """Forward integral ``int_[a,b] g d-f`` as an eps-limit

    Parameters
    ----------
    g: SampledPath
        Integrand.
    f: SampledPath
        Integrator, on the same interval as `g`. Right of the interval, `f`
        is extended by its present value.
    sched: Optional[EpsilonSchedule] = None
        Regularization schedule. The default is ``EpsilonSchedule()``.
    tolerance: float = 1e-3
        Convergence tolerance on the two finest approximants.
    left: str = "zero"
        Left extension of `f`, ``"zero"`` or ``"hold"``. The forward
        approximants never look left of the interval, so this only matters
        for consistency with :func:`backward_integral`.

    Returns
    -------
    estimate: LimitEstimate
        Extrapolated limit, with the ``(eps, approximant)`` pairs.
    """
    _check_interval("forward_integral", g, f)
    sched = _schedule(sched, "forward_integral", g, f)
    approx = [forward_approximant(g, f, e, left) for e in sched.eps_values]
    return estimate_limit(sched.eps_values, approx, tolerance=tolerance)


def backward_integral(
    g: SampledPath,
    f: SampledPath,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
    left: str = "zero",
) -> LimitEstimate:
    """Backward integral ``int_[a,b] g d+f`` as an eps-limit

    With ``left="zero"`` the integrator vanishes left of ``a``, so for
    ``g = 1`` the limit is ``f(b)``. With ``left="hold"`` it is
    ``f(b) - f(a)``.

    Parameters are as for :func:`forward_integral`.
    """
    _check_interval("backward_integral", g, f)
    sched = _schedule(sched, "backward_integral", g, f)
    approx = [backward_approximant(g, f, e, left) for e in sched.eps_values]
    return estimate_limit(sched.eps_values, approx, tolerance=tolerance)


def covariation(
    f: SampledPath,
    g: SampledPath,
    x: float,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
) -> LimitEstimate:
    """Covariation ``[f, g](x)`` as an eps-limit

    The regularization error of a covariation is first order in eps, so the
    extrapolation assumes order 1.

    Parameters
    ----------
    f, g: SampledPath
        Paths on the same interval ``[a, b]``, with ``0`` in ``[a, b]``.
    x: float
        Upper limit, in ``[a, b]``.
    sched: Optional[EpsilonSchedule] = None
        Regularization schedule.
    tolerance: float = 1e-3
        Convergence tolerance on the two finest approximants.
    """
    _check_interval("covariation", f, g)
    a, b = f.grid.t_min, f.grid.t_max
    if not (a <= 0.0 <= b):
        raise ValueError(f"Error in covariation: 0 is not in [{a}, {b}]")
    if not (a <= x <= b):
        raise ValueError(f"Error in covariation: x={x} is not in [{a}, {b}]")
    sched = _schedule(sched, "covariation", f, g)
    approx = [covariation_approximant(f, g, x, e) for e in sched.eps_values]
    return estimate_limit(sched.eps_values, approx, tolerance=tolerance, order=1.0)


def quadratic_variation(
    f: SampledPath,
    x: float,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
) -> LimitEstimate:
    """Quadratic variation ``[f](x) = [f, f](x)``"""
    return covariation(f, f, x, sched=sched, tolerance=tolerance)


def backward_measure_approximant(
    mu: AtomicMeasure, f: SampledPath, eps: float, left: str = "zero"
) -> float:
    """The integral ``int mu(ds) (f(s) - f(s-eps)) / eps``"""
    value = backward_approximant(mu.density, f, eps, left)
    for loc, mass in mu.atoms:
        s = np.array([loc, loc - eps])
        fs = extended(f, s, left)
        value += mass * (fs[0] - fs[1]) / eps
    return value


def backward_integral_measure(
    mu: AtomicMeasure,
    f: SampledPath,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
    left: str = "zero",
) -> LimitEstimate:
    """Backward integral ``int mu(ds) d+f(s)`` of a finite measure

    The density part is computed exactly as :func:`backward_integral`; each
    atom contributes its mass times the backward difference quotient of `f`
    at its location.

    Parameters
    ----------
    mu: AtomicMeasure
        The measure, on the interval of `f`.
    f: SampledPath
        Continuous integrator (no jump at the right end).
    sched: Optional[EpsilonSchedule] = None
        Regularization schedule.
    tolerance: float = 1e-3
        Convergence tolerance on the two finest approximants.
    left: str = "zero"
        Left extension of `f`, ``"zero"`` or ``"hold"``.
    """
    if f.has_jump:
        raise ValueError(
            "Error in backward_integral_measure: f must be continuous "
            "(present value equal to the last grid value)"
        )
    _check_interval("backward_integral_measure", mu.density, f)
    sched = _schedule(sched, "backward_integral_measure", mu.density, f)
    check_left(left, "backward_integral_measure")
    approx = [backward_measure_approximant(mu, f, e, left) for e in sched.eps_values]
    return estimate_limit(sched.eps_values, approx, tolerance=tolerance)


def stieltjes_integral(f: SampledPath, g: SampledPath) -> float:
    """Lebesgue-Stieltjes integral ``int_]a,b] f dg`` for piecewise-linear
    paths on the same grid

    A jump of `g` at ``b`` (present value different from the last grid value)
    is counted with weight ``f(b)``.
    """
    if f.grid != g.grid:
        raise ValueError("Error in stieltjes_integral: f and g must share a grid")
    dg = np.diff(g.values)
    fm = 0.5 * (f.values[1:] + f.values[:-1])
    jump = g.present_value - g.values[-1]
    return float(np.sum(dg * fm) + jump * f.present_value)


def ibp_check(
    g: SampledPath,
    f: SampledPath,
    direction: str,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
) -> ReportEntry:
    """Compare a regularization integral with its integration by parts form

    Forward: ``int g d-f`` against
    ``g(b-) f(b) - int_]a,b] f dg - g(a) f(a)``, the last term being the atom
    of mass ``g(a)`` that the zero extension of `g` puts at ``a``.

    Backward: ``int g d+f`` against ``g(b) f(b) - int_]a,b] f dg``; `f` must be
    continuous.

    Parameters
    ----------
    g: SampledPath
        Integrand, piecewise linear (so of bounded variation), without a jump.
    f: SampledPath
        Integrator on the same grid as `g`.
    direction: str
        ``"forward"`` or ``"backward"``.
    sched: Optional[EpsilonSchedule] = None
        Regularization schedule.
    tolerance: float = 1e-3
        Pass threshold for the gap between both sides.

    Returns
    -------
    entry: ReportEntry
        ``value`` is the eps-limit, ``reference`` the Stieltjes side. The
        details hold the schedule, the approximants and the gap at each
        level.
    """
    if f.grid != g.grid:
        raise ValueError("Error in ibp_check: f and g must share a grid")
    if g.has_jump:
        raise ValueError("Error in ibp_check: g must not jump at the right end")
    stieltjes = stieltjes_integral(f, g)
    if direction == "forward":
        estimate = forward_integral(g, f, sched=sched, tolerance=tolerance)
        reference = (
            g.values[-1] * f.present_value - stieltjes - g.values[0] * f.values[0]
        )
    elif direction == "backward":
        if f.has_jump:
            raise ValueError(
                "Error in ibp_check: f must be continuous for direction='backward'"
            )
        estimate = backward_integral(g, f, sched=sched, tolerance=tolerance)
        reference = g.present_value * f.present_value - stieltjes
    else:
        raise ValueError(
            f"Error in ibp_check: direction={direction!r}, "
            "expected 'forward' or 'backward'"
        )
    gaps = np.abs(estimate.approximants - reference)
    return ReportEntry(
        name=f"regint.ibp_{direction}",
        value=estimate.value,
        reference=reference,
        tolerance=tolerance,
        provenance="stieltjes",
        details={
            "eps": estimate.eps.tolist(),
            "approximants": estimate.approximants.tolist(),
            "gaps": gaps.tolist(),
            "converged": estimate.converged,
            "convergence_rate": estimate.convergence_rate,
        },
    )
