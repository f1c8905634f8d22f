import math
from typing import Optional, Union

import numpy as np

from pathreg.funcder import window_weights
from pathreg.paths import Grid, SampledPath
from pathreg.regcalc import breakpoints, integrate_piecewise, is_decreasing_trend
from pathreg.report import ReportEntry

from ._FejerOperator import FejerOperator
from ._FourierCoefficients import FourierCoefficients
from ._Mollifier import MOLLIFIER_GL_ORDER, MOLLIFIER_PANELS, Mollifier
from ._TrigBasis import TrigBasis

#: Gauss-Legendre order per grid cell for the forward-integral coefficients
CELL_GL_ORDER = 8


def _horizon(eta: SampledPath, caller: str) -> float:
    if eta.grid.t_max != 0.0:
        raise ValueError(f"Error in {caller}: the path grid must end at 0")
    return eta.grid.length


def _check_T(T: float, other: float, caller: str):
    if not math.isclose(T, other, rel_tol=1e-12):
        raise ValueError(
            f"Error in {caller}: horizon {T} does not match the path horizon {other}"
        )


def _cell_integrals(func, grid: Grid, order: int = CELL_GL_ORDER) -> np.ndarray:
    """``int`` of `func` over each grid cell

    `func` maps points of shape ``(n_cells, order)`` to values of shape
    ``(..., n_cells, order)``; the result has shape ``(..., n_cells)``.
    """
    xg, wg = np.polynomial.legendre.leggauss(order)
    x = grid.points
    half = 0.5 * grid.spacing
    pts = 0.5 * (x[1:] + x[:-1])[:, None] + half * xg[None, :]
    return half * np.sum(func(pts) * wg, axis=-1)


def lambda_op(eta: SampledPath) -> SampledPath:
    """Linear correction ``(Lambda eta)(x) = (eta(0) - eta(-T)) x / T``

    ``eta - Lambda eta`` takes the same value at ``-T`` and 0, so it extends
    to a continuous ``T``-periodic function.
    """
    T = _horizon(eta, "lambda_op")
    slope = (eta.present_value - float(eta.values[0])) / T
    return SampledPath(eta.grid, slope * eta.grid.points)


def endpoint_functional(m: Mollifier, eta: SampledPath) -> float:
    """Smoothed left-end evaluation ``int_{-T}^0 eta(x) phi_eps(x) dx``

    By integration by parts this equals the forward integral
    ``int_[-T,0] (phi~_eps(0) - phi~_eps(x)) d-eta(x)``, and it tends to
    ``eta(-T)`` as ``eps -> 0``. The piecewise-linear `eta` is integrated
    against the bump with a composite Gauss-Legendre rule.
    """
    T = _horizon(eta, "endpoint_functional")
    _check_T(m.T, T, "endpoint_functional")
    panels = np.linspace(-T, -T + m.eps, MOLLIFIER_PANELS + 1)
    nodes = breakpoints(-T, -T + m.eps, eta.grid.points, panels)
    return integrate_piecewise(
        lambda x: eta.past_at(x) * m.value(x), nodes, order=MOLLIFIER_GL_ORDER
    )


def fourier_coeffs(
    eta: SampledPath,
    n: int,
    mollifier: Optional[Mollifier] = None,
) -> FourierCoefficients:
    """Coordinates ``x_i = eta_i - (Lambda eta)_i``, ``i = 0, ..., n``, and
    ``x_{-1}``

    ``eta_i`` is computed in the forward-integral form

    .. code-block:: text

        eta_i = int_[-T,0] (e~_i(0) - e~_i(x)) d-eta(x)
              = e~_i(0) eta(-T) + int_]-T,0] (e~_i(0) - e~_i(x)) eta'(x) dx

    and, for cross-validation, as ``int eta e_i dx`` by direct quadrature.
    ``(Lambda eta)_i = a_i (eta(0) - eta(-T))`` with
    ``a_i = int x e_i(x) dx / T``.

    Parameters
    ----------
    eta: SampledPath
        Path on ``[-T, 0]``; the present value is used for ``eta(0)``.
    n: int
        Order.
    mollifier: Optional[Mollifier] = None
        If given, ``eta(-T)`` in the linear correction is replaced by
        :func:`endpoint_functional`.
    """
    T = _horizon(eta, "fourier_coeffs")
    if int(n) != n or n < 0:
        raise ValueError(f"Error in fourier_coeffs: n={n} < 0")
    basis = TrigBasis(T)
    grid = eta.grid
    idx = range(n + 1)

    funcs = [lambda s, i=i: basis.value(i, s - T) for i in idx]
    l2 = window_weights(funcs, T, grid) @ eta.values

    tilde0 = np.array([float(basis.antiderivative(i, 0.0)) for i in idx])
    cells = _cell_integrals(
        lambda x: np.array([tilde0[i] - basis.antiderivative(i, x) for i in idx]),
        grid,
    )
    slopes = np.diff(eta.values) / grid.spacing
    # a jump at 0 is weighted by e~_i(0) - e~_i(0) = 0
    stieltjes = tilde0 * float(eta.values[0]) + cells @ slopes

    if mollifier is None:
        left = float(eta.values[0])
    else:
        _check_T(mollifier.T, T, "fourier_coeffs")
        left = endpoint_functional(mollifier, eta)
    a = np.array([basis.moment(i) for i in idx]) / T
    rise = eta.present_value - left
    return FourierCoefficients(
        stieltjes=stieltjes - a * rise,
        l2=l2 - a * rise,
        x_minus1=rise / T,
        left_value=left,
    )


def coordinate_matrix(n: int, grid: Grid) -> np.ndarray:
    """Fejer coordinates ``(x_{-1}, x_0, ..., x_n)`` of continuous paths as a
    linear map of their grid values

    Returns shape ``(grid.n_points, n + 2)``. For grid values ``v`` of a path
    whose present value is ``v[-1]``, ``v @ C`` is
    ``fourier_coeffs(eta, n).coordinates``; rows of a batch of paths are
    mapped at once.
    """
    if grid.t_max != 0.0:
        raise ValueError("Error in coordinate_matrix: grid must end at 0")
    if int(n) != n or n < 0:
        raise ValueError(f"Error in coordinate_matrix: n={n} < 0")
    T = grid.length
    basis = TrigBasis(T)
    idx = range(n + 1)
    tilde0 = np.array([float(basis.antiderivative(i, 0.0)) for i in idx])
    cells = _cell_integrals(
        lambda x: np.array([tilde0[i] - basis.antiderivative(i, x) for i in idx]),
        grid,
    )
    a = np.array([basis.moment(i) for i in idx]) / T

    C = np.zeros((grid.n_points, n + 2))
    C[0, 0] -= 1.0 / T
    C[-1, 0] += 1.0 / T
    S = C[:, 1:]
    S[0] += tilde0 + a
    S[1:] += cells.T / grid.spacing
    S[:-1] -= cells.T / grid.spacing
    S[-1] -= a
    return C


def fejer_apply(
    op: FejerOperator,
    eta: SampledPath,
    mollifier: Optional[Mollifier] = None,
) -> SampledPath:
    """``T_n eta`` on the grid of `eta`"""
    _check_T(op.T, _horizon(eta, "fejer_apply"), "fejer_apply")
    coeffs = fourier_coeffs(eta, op.n, mollifier)
    return SampledPath(eta.grid, op.reconstruct(coeffs.coordinates, eta.grid))


def endpoint_convergence(
    eta: SampledPath,
    eps_values: Union[np.ndarray, list[float]] = (0.25, 0.125, 0.0625, 0.03125),
    min_order: float = 0.8,
    name: str = "approx.endpoint",
) -> ReportEntry:
    """Convergence of :func:`endpoint_functional` to ``eta(-T)``

    The observed order is the slope of ``log |error|`` against ``log eps``;
    the entry passes if it is at least `min_order`. The fitted constant
    ``max |error| / eps`` is reported.
    """
    T = _horizon(eta, "endpoint_convergence")
    eps = np.asarray(eps_values, dtype=float)
    target = float(eta.values[0])
    errors = np.array(
        [abs(endpoint_functional(Mollifier(e, T), eta) - target) for e in eps]
    )
    if np.all(errors <= 1e-13 * max(1.0, abs(target))):
        order = math.inf
    else:
        keep = errors > 0.0
        order = float(np.polyfit(np.log(eps[keep]), np.log(errors[keep]), 1)[0])
    return ReportEntry(
        name=name,
        value=order,
        reference=1.0,
        tolerance=1.0 - min_order,
        gap=max(0.0, 1.0 - order),
        provenance="derived",
        details={
            "eps": eps.tolist(),
            "errors": errors.tolist(),
            "constant": float(np.max(errors / eps)),
        },
    )


def _sup(values: np.ndarray) -> float:
    return float(np.max(np.abs(values)))


def fejer_exactness(
    grid: Grid,
    n_values: tuple[int, ...] = (4, 8, 16, 32, 64, 128),
    tolerance: float = 1e-12,
    name: str = "fejer.exact",
) -> ReportEntry:
    """``T_n`` reproduces constant and linear paths"""
    T = grid.length
    fixtures = [
        SampledPath(grid, np.full(grid.n_points, 1.7)),
        SampledPath(grid, 0.3 + 0.8 * grid.points),
    ]
    worst = 0.0
    for n in n_values:
        op = FejerOperator(n, T)
        for eta in fixtures:
            worst = max(worst, _sup(fejer_apply(op, eta).values - eta.values))
    return ReportEntry(
        name=name,
        value=worst,
        reference=0.0,
        tolerance=tolerance,
        provenance="closed-form",
        details={"n": list(n_values)},
    )


def fejer_sup_error(
    eta: SampledPath,
    n_values: tuple[int, ...] = (4, 8, 16, 32, 64, 128),
    n_coarse: int = 8,
    n_fine: int = 64,
    max_ratio: float = 0.5,
    name: str = "fejer.sup_error",
) -> ReportEntry:
    """``|T_n eta - eta|_sup`` over `n_values`

    The entry value is the ratio of the error at `n_fine` to the error at
    `n_coarse`; it passes if that ratio is below `max_ratio` and the errors
    decrease. The gap ``|T_n eta(0) - eta(0)|`` at the largest order is
    reported, not asserted.
    """
    T = _horizon(eta, "fejer_sup_error")
    if n_coarse not in n_values or n_fine not in n_values:
        raise ValueError(
            f"Error in fejer_sup_error: n_coarse={n_coarse} and n_fine={n_fine} "
            f"must be in n_values={list(n_values)}"
        )
    errors = []
    present_gap = math.nan
    for n in n_values:
        approx = fejer_apply(FejerOperator(n, T), eta)
        errors.append(_sup(approx.values - eta.values))
        present_gap = abs(float(approx.values[-1]) - eta.present_value)
    coarse = errors[n_values.index(n_coarse)]
    ratio = errors[n_values.index(n_fine)] / max(coarse, 1e-300)
    decreasing = is_decreasing_trend(errors)
    return ReportEntry(
        name=name,
        value=ratio,
        reference=0.0,
        tolerance=max_ratio,
        gap=ratio if decreasing else math.inf,
        provenance="trend",
        details={
            "n": list(n_values),
            "sup_error": errors,
            "decreasing": decreasing,
            "present_gap": present_gap,
        },
    )


def fejer_uniform_bound(
    fixtures: list[SampledPath],
    n_values: tuple[int, ...] = (4, 8, 16, 32, 64, 128),
    n_split: int = 64,
    tolerance: float = 0.05,
    name: str = "fejer.uniform_bound",
) -> ReportEntry:
    """Measured operator bound ``M = max |T_n eta|_sup / |eta|_sup``

    Compares the maximum over all `n_values` with the maximum over
    ``n <= n_split``; the relative difference must be at most `tolerance`.
    """
    ratios = {}
    for n in n_values:
        ratios[n] = max(
            _sup(fejer_apply(FejerOperator(n, eta.grid.length), eta).values)
            / eta.sup_norm()
            for eta in fixtures
        )
    M_all = max(ratios.values())
    M_low = max(r for n, r in ratios.items() if n <= n_split)
    return ReportEntry(
        name=name,
        value=M_all,
        reference=M_low,
        tolerance=tolerance,
        gap=(M_all - M_low) / M_low,
        provenance="derived",
        details={"n": list(ratios), "ratio": list(ratios.values())},
    )


def fejer_damping(
    fixtures: list[SampledPath],
    n_values: tuple[int, ...] = (4, 8, 16, 32, 64, 128),
    tolerance: float = 1e-10,
    name: str = "fejer.damping",
) -> ReportEntry:
    """``|sigma_n(eta - Lambda eta)|_sup <= |eta - Lambda eta|_sup``

    The entry value is the largest excess of the left side over the right
    side.
    """
    excess = -math.inf
    for eta in fixtures:
        lam = lambda_op(eta).values
        bound = _sup(eta.values - lam)
        for n in n_values:
            sigma = fejer_apply(FejerOperator(n, eta.grid.length), eta).values - lam
            excess = max(excess, _sup(sigma) - bound)
    return ReportEntry(
        name=name,
        value=excess,
        reference=0.0,
        tolerance=tolerance,
        gap=max(0.0, excess),
        provenance="derived",
        details={"n": list(n_values), "n_fixtures": len(fixtures)},
    )


def fejer_linearity(
    eta: SampledPath,
    zeta: SampledPath,
    n: int = 32,
    alpha: float = 0.7,
    beta: float = -1.3,
    tolerance: float = 1e-10,
    name: str = "fejer.linearity",
) -> ReportEntry:
    """``T_n(alpha eta + beta zeta) = alpha T_n eta + beta T_n zeta``"""
    if eta.grid != zeta.grid:
        raise ValueError("Error in fejer_linearity: paths must share a grid")
    op = FejerOperator(n, _horizon(eta, "fejer_linearity"))
    mix = SampledPath(
        eta.grid,
        alpha * eta.values + beta * zeta.values,
        present=alpha * eta.present_value + beta * zeta.present_value,
    )
    lhs = fejer_apply(op, mix).values
    rhs = alpha * fejer_apply(op, eta).values + beta * fejer_apply(op, zeta).values
    return ReportEntry(
        name=name,
        value=_sup(lhs - rhs),
        reference=0.0,
        tolerance=tolerance,
        provenance="derived",
        details={"n": n, "alpha": alpha, "beta": beta},
    )


def fejer_checks(
    fixtures: dict[str, SampledPath],
    n_values: tuple[int, ...] = (4, 8, 16, 32, 64, 128),
    trend_fixtures: Optional[list[str]] = None,
) -> list[ReportEntry]:
    """All Fejer operator diagnostics on a named fixture corpus

    Parameters
    ----------
    fixtures: dict[str, SampledPath]
        Named paths on a common ``[-T, 0]``.
    n_values: tuple[int, ...]
        Orders; must contain 8 and 64.
    trend_fixtures: Optional[list[str]] = None
        Fixtures whose sup error trend is checked. Defaults to all.
    """
    if not fixtures:
        raise ValueError("Error in fejer_checks: no fixtures")
    paths = list(fixtures.values())
    if trend_fixtures is None:
        trend_fixtures = list(fixtures)
    entries = [fejer_exactness(paths[0].grid, n_values)]
    for key in trend_fixtures:
        entries.append(
            fejer_sup_error(fixtures[key], n_values, name=f"fejer.sup_error.{key}")
        )
    entries.append(fejer_uniform_bound(paths, n_values))
    entries.append(fejer_damping(paths, n_values))
    if len(paths) >= 2:
        entries.append(fejer_linearity(paths[0], paths[1]))
    return entries
