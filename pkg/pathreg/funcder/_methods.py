from typing import Optional

from pathreg.paths import SampledPath, join, shift_future, shift_past, split
from pathreg.regcalc import (
    EpsilonSchedule,
    LimitEstimate,
    backward_integral,
    estimate_limit,
)
from pathreg.report import ReportEntry

from ._CylindricalFunctional import CylindricalFunctional
from ._DerivativeResult import DerivativeResult, exact_estimate
from ._PathFunctional import DifferentiablePathFunctional, PathFunctional


def default_h_schedule() -> EpsilonSchedule:
    """Steps ``2**-2, ..., 2**-6`` for vertical and time differences"""
    return EpsilonSchedule.geometric(eps_max=0.25, n_levels=5, grid_refine=True)


def eval_cyl(c: CylindricalFunctional, t: float, eta: SampledPath) -> float:
    """Evaluate a cylindrical functional at ``(t, eta)``

    The coordinates are computed in integration by parts form, by
    Gauss-Legendre quadrature of ``eta * phi_i'`` on each grid cell, which is
    exact up to the smoothness of the basis; no eps-limit is needed.

    Parameters
    ----------
    c: CylindricalFunctional
        The functional.
    t: float
        Time in ``[0, c.T]``.
    eta: SampledPath
        Path on a grid ending at 0 and covering ``[-t, 0]``.

    Returns
    -------
    value: float
        ``g(x_1(t, eta), ..., x_N(t, eta))``.
    """
    return c.value(t, eta)


def horizontal_derivative(
    u: PathFunctional,
    t: float,
    eta: SampledPath,
    sched: Optional[EpsilonSchedule] = None,
    mode: str = "left",
    tolerance: float = 1e-3,
) -> LimitEstimate:
    """Horizontal derivative ``D^H u(t, eta)``

    With ``mode="left"`` the approximants are
    ``(u(t, eta) - u(t, shift_past(eta, eps))) / eps``: the past is shifted
    right (constant left extension) and the present value is kept.

    With ``mode="right"`` they are
    ``(u(t, shift_future(eta, eps)) - u(t, eta)) / eps``, the past being
    extended constantly into the future. The two modes differ in general.

    Parameters
    ----------
    u: PathFunctional
        The functional.
    t: float
        Time.
    eta: SampledPath
        The path.
    sched: Optional[EpsilonSchedule] = None
        Shift schedule, validated against the grid spacing of `eta`.
    mode: str = "left"
        ``"left"`` or ``"right"``.
    tolerance: float = 1e-3
        Convergence tolerance.
    """
    if sched is None:
        sched = EpsilonSchedule()
    sched.validate(eta.grid.spacing, caller="horizontal_derivative")
    base = u(t, eta)
    approx = []
    for eps in sched.eps_values:
        if mode == "left":
            approx.append((base - u(t, shift_past(eta, eps))) / eps)
        elif mode == "right":
            approx.append((u(t, shift_future(eta, eps)) - base) / eps)
        else:
            raise ValueError(
                f"Error in horizontal_derivative: mode={mode!r}, "
                "expected 'left' or 'right'"
            )
    return estimate_limit(sched.eps_values, approx, tolerance=tolerance)


def vertical_derivatives(
    u: PathFunctional,
    t: float,
    eta: SampledPath,
    h_sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
) -> tuple[LimitEstimate, LimitEstimate]:
    """First and second vertical derivatives ``D^V u``, ``D^VV u``

    Central differences in the present value ``a`` of ``eta = (past, a)``:
    ``(u(a+h) - u(a-h)) / 2h`` and ``(u(a+h) - 2u(a) + u(a-h)) / h**2``, both
    second order accurate, extrapolated over the step schedule.

    Parameters
    ----------
    u: PathFunctional
        The functional.
    t: float
        Time.
    eta: SampledPath
        The path; perturbed paths keep its past.
    h_sched: Optional[EpsilonSchedule] = None
        Step schedule. The default is :func:`default_h_schedule`.
    tolerance: float = 1e-3
        Convergence tolerance.

    Returns
    -------
    (dv, dvv): tuple[LimitEstimate, LimitEstimate]
        The two derivatives.
    """
    if h_sched is None:
        h_sched = default_h_schedule()
    past, a = split(eta)
    u0 = u(t, eta)
    dv, dvv = [], []
    for h in h_sched.eps_values:
        up = u(t, join(past, a + h))
        down = u(t, join(past, a - h))
        dv.append((up - down) / (2.0 * h))
        dvv.append((up - 2.0 * u0 + down) / (h * h))
    return (
        estimate_limit(h_sched.eps_values, dv, tolerance=tolerance, order=2.0),
        estimate_limit(h_sched.eps_values, dvv, tolerance=tolerance, order=2.0),
    )


def time_derivative(
    u: PathFunctional,
    t: float,
    eta: SampledPath,
    h_sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-4,
) -> LimitEstimate:
    """Right time derivative ``(u(t + h, eta) - u(t, eta)) / h``, path fixed

    The caller must make sure ``t + h`` stays in the domain of `u` for all
    steps of `h_sched`.
    """
    if h_sched is None:
        h_sched = EpsilonSchedule.geometric(
            eps_max=2.0**-6, n_levels=5, grid_refine=True
        )
    u0 = u(t, eta)
    approx = [(u(t + h, eta) - u0) / h for h in h_sched.eps_values]
    return estimate_limit(h_sched.eps_values, approx, tolerance=tolerance)


def derivatives(
    u: PathFunctional,
    t: float,
    eta: SampledPath,
    sched: Optional[EpsilonSchedule] = None,
    h_sched: Optional[EpsilonSchedule] = None,
    with_time: bool = False,
) -> DerivativeResult:
    """All derivatives of `u` at ``(t, eta)``

    Closed forms of a :class:`DifferentiablePathFunctional` are used where
    available; the rest are computed with :func:`horizontal_derivative`,
    :func:`vertical_derivatives` and :func:`time_derivative`.
    """
    closed = {}
    if isinstance(u, DifferentiablePathFunctional):
        for key in ["dt", "dh", "dv", "dvv"]:
            f = getattr(u, key)
            if f is not None:
                closed[key] = exact_estimate(f(t, eta))

    dh = closed.get("dh")
    if dh is None:
        dh = horizontal_derivative(u, t, eta, sched=sched)
    dv, dvv = closed.get("dv"), closed.get("dvv")
    if dv is None or dvv is None:
        dv_num, dvv_num = vertical_derivatives(u, t, eta, h_sched=h_sched)
        dv = dv if dv is not None else dv_num
        dvv = dvv if dvv is not None else dvv_num
    dt = None
    if with_time:
        dt = closed.get("dt")
        if dt is None:
            dt = time_derivative(u, t, eta)
    return DerivativeResult(dh=dh, dv=dv, dvv=dvv, dt=dt)


def frechet_rep_check(
    u: PathFunctional,
    eta: SampledPath,
    sched: Optional[EpsilonSchedule] = None,
    tolerance: float = 1e-3,
) -> ReportEntry:
    """Compare the horizontal derivative at ``t = T`` with the backward
    integral of the Frechet density

    ``D^H u(T, eta)`` is computed numerically with :func:`horizontal_derivative`
    and compared with ``int D^ac u(eta)(x) d+eta(x)``, a
    :func:`~pathreg.regcalc.backward_integral` with the integrator held at
    ``eta(-T)`` left of the window, which is the convention of the
    horizontal shift.

    Parameters
    ----------
    u: PathFunctional
        A functional with a closed-form ``frechet_density``.
    eta: SampledPath
        A continuous path on ``[-T, 0]``.
    sched: Optional[EpsilonSchedule] = None
        Schedule for both sides.
    tolerance: float = 1e-3
        Pass threshold for the gap.

    Returns
    -------
    entry: ReportEntry
        ``value`` is the horizontal derivative, ``reference`` the backward
        integral.
    """
    density = getattr(u, "frechet_density", None)
    if density is None:
        raise ValueError(
            f"Error in frechet_rep_check: functional '{u.label}' has no "
            "closed-form Frechet density"
        )
    T = -eta.grid.t_min
    lhs = horizontal_derivative(u, T, eta, sched=sched, tolerance=tolerance)
    rhs = backward_integral(
        density(eta), eta, sched=sched, tolerance=tolerance, left="hold"
    )
    return ReportEntry(
        name=f"funcder.frechet_{u.label}",
        value=lhs.value,
        reference=rhs.value,
        tolerance=tolerance,
        provenance="backward-integral",
        details={
            "horizontal": lhs.to_dict(),
            "backward_integral": rhs.to_dict(),
        },
    )
