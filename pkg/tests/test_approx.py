import math

import numpy as np
import pytest
from scipy.integrate import quad

from pathreg.approx import (
    FejerOperator,
    Mollifier,
    TrigBasis,
    axis_nodes,
    build_Gnek,
    coordinate_matrix,
    diagonal_schedule,
    endpoint_convergence,
    endpoint_functional,
    fejer_apply,
    fejer_checks,
    fejer_damping,
    fejer_exactness,
    fejer_linearity,
    fejer_sup_error,
    fejer_uniform_bound,
    fourier_coeffs,
    gaussian_smoothed,
    lambda_op,
    sv_convergence,
    sv_value,
)
from pathreg.funcder import (
    BasisFunction,
    CylindricalFunctional,
    OuterFunction,
    PathFunctional,
    integral_functional,
    present_functional,
    sup_functional,
)
from pathreg.paths import Grid, make_path
from pathreg.ppde import classical_solution
from pathreg.simflow import SimConfig


@pytest.fixture
def fixtures(unit_grid):
    return {
        "sine": make_path("sine", unit_grid, amplitude=0.5, frequency=0.5),
        "quadratic": make_path("quadratic", unit_grid),
        "brownian": make_path("brownian", unit_grid, seed=11),
        "offset_sine": make_path(
            "sine", unit_grid, amplitude=0.3, frequency=1.5, present=0.2
        ),
    }


def test_TrigBasis():
    basis = TrigBasis(1.0)
    assert basis.orthonormality_error(8) <= 1e-8
    assert basis.orthonormality_error(32) <= 1e-8
    assert [basis.frequency(i) for i in range(5)] == [0, 1, 1, 2, 2]
    assert math.isclose(float(basis.value(0, -0.3)), 1.0)

    for i in range(6):
        expected, _ = quad(lambda y: float(basis.value(i, y)), -1.0, -0.3)
        assert math.isclose(
            float(basis.antiderivative(i, -0.3)), expected, abs_tol=1e-10
        )
        moment, _ = quad(lambda y: y * float(basis.value(i, y)), -1.0, 0.0)
        assert math.isclose(basis.moment(i), moment, abs_tol=1e-10)

    with pytest.raises(ValueError):
        TrigBasis(0.0)


def test_TrigBasis_horizon():
    basis = TrigBasis(2.0)
    assert basis.orthonormality_error(6) <= 1e-8
    assert math.isclose(float(basis.value(0, -1.0)), 1.0 / math.sqrt(2.0))


def test_Mollifier():
    m = Mollifier(0.1)
    assert math.isclose(m.mass(), 1.0, abs_tol=1e-8)
    assert math.isclose(float(m.antiderivative(0.0)), 1.0, abs_tol=1e-8)
    assert float(m.antiderivative(-1.0)) == 0.0
    assert float(m.value(-0.85)) == 0.0
    assert float(m.value(-1.05)) == 0.0
    assert float(m.value(-0.95)) > 0.0

    # antiderivative against adaptive quadrature inside the support
    expected, _ = quad(lambda x: float(m.value(x)), -1.0, -0.96)
    assert math.isclose(float(m.antiderivative(-0.96)), expected, abs_tol=1e-10)

    with pytest.raises(ValueError):
        Mollifier(1.5, T=1.0)
    with pytest.raises(ValueError):
        Mollifier(0.0)

    assert Mollifier.from_dict(m.to_dict()).eps == m.eps


def test_lambda_op(unit_grid):
    x = unit_grid.points
    identity = make_path("linear", unit_grid)
    assert np.allclose(lambda_op(identity).values, x, atol=1e-14)

    constant = make_path("constant", unit_grid, value=2.5)
    assert np.allclose(lambda_op(constant).values, 0.0)

    square = make_path("quadratic", unit_grid)
    assert np.allclose(lambda_op(square).values, -x, atol=1e-14)

    # eta - Lambda eta takes the same value at both ends
    eta = make_path("sine", unit_grid, amplitude=0.4, frequency=0.3)
    diff = eta.values - lambda_op(eta).values
    assert math.isclose(diff[0], diff[-1], abs_tol=1e-14)


def test_fourier_coeffs_constant(unit_grid):
    eta = make_path("constant", unit_grid, value=1.7)
    coeffs = fourier_coeffs(eta, 8)
    assert coeffs.n == 8
    assert math.isclose(coeffs.stieltjes[0], 1.7, rel_tol=1e-12)
    assert math.isclose(coeffs.l2[0], 1.7, rel_tol=1e-10)
    assert np.allclose(coeffs.stieltjes[1:], 0.0, atol=1e-12)
    assert np.allclose(coeffs.l2[1:], 0.0, atol=1e-10)
    assert coeffs.x_minus1 == 0.0


def test_fourier_coeffs_linear(unit_grid):
    # eta - Lambda eta = 0
    eta = make_path("linear", unit_grid, slope=0.8)
    coeffs = fourier_coeffs(eta, 8)
    assert np.allclose(coeffs.stieltjes, 0.0, atol=1e-12)
    assert math.isclose(coeffs.x_minus1, 0.8, rel_tol=1e-12)


def test_fourier_coeffs_cross_check(sine_path, fixtures):
    coeffs = fourier_coeffs(sine_path, 16)
    assert coeffs.mismatch <= 1e-6
    assert coeffs.coordinates.shape == (18,)

    coeffs = fourier_coeffs(fixtures["brownian"], 16, mollifier=Mollifier(0.125))
    assert coeffs.mismatch <= 1e-6


def test_fourier_coeffs_errors(coarse_grid):
    eta = make_path("sine", Grid(0.0, 1.0, 65))
    with pytest.raises(ValueError, match="must end at 0"):
        fourier_coeffs(eta, 4)
    with pytest.raises(ValueError):
        fourier_coeffs(make_path("constant", coarse_grid), -1)


def test_fejer_apply_exact(unit_grid):
    op = FejerOperator(16)
    assert op.n_coordinates == 18
    assert op.weights[0] == 1.0
    assert np.all((op.weights > 0.0) & (op.weights <= 1.0))

    constant = make_path("constant", unit_grid, value=-0.6)
    assert np.allclose(fejer_apply(op, constant).values, -0.6, atol=1e-12)
    line = make_path("linear", unit_grid, offset=0.3, slope=0.8)
    assert np.allclose(fejer_apply(op, line).values, line.values, atol=1e-12)

    entry = fejer_exactness(unit_grid, n_values=(4, 16, 64))
    assert entry.passed
    assert entry.provenance == "closed-form"


def test_fejer_operator_matrix_cache(coarse_grid):
    op = FejerOperator(4)
    R = op.matrix(coarse_grid)
    assert R.shape == (6, coarse_grid.n_points)
    assert op.matrix(coarse_grid) is R
    assert not R.flags.writeable
    with pytest.raises(ValueError):
        FejerOperator(-1)


def test_fejer_sup_error_sine(sine_path):
    entry = fejer_sup_error(sine_path, n_values=(4, 8, 16, 32, 64))
    assert entry.passed
    assert entry.details["decreasing"]
    assert math.isfinite(entry.details["present_gap"])


def test_fejer_sup_error_brownian(unit_grid):
    ratios = []
    for seed in range(6):
        eta = make_path("brownian", unit_grid, seed=seed)
        entry = fejer_sup_error(
            eta, n_values=(8, 16, 32, 64, 128), n_coarse=8, n_fine=128
        )
        errors = entry.details["sup_error"]
        assert errors[-1] < errors[0]
        ratios.append(entry.value)
    assert np.mean(ratios) < 0.5


def test_fejer_sup_error_errors(sine_path):
    with pytest.raises(ValueError, match="must be in n_values"):
        fejer_sup_error(sine_path, n_values=(4, 16), n_coarse=8, n_fine=16)


def test_fejer_invariants(fixtures):
    paths = list(fixtures.values())
    assert fejer_uniform_bound(paths).passed
    assert fejer_damping(paths).passed
    entry = fejer_linearity(fixtures["sine"], fixtures["brownian"])
    assert entry.passed
    assert entry.value <= 1e-10


def test_fejer_checks(fixtures):
    entries = fejer_checks(
        fixtures, n_values=(4, 8, 16, 32, 64), trend_fixtures=["sine"]
    )
    names = [e.name for e in entries]
    assert names == [
        "fejer.exact",
        "fejer.sup_error.sine",
        "fejer.uniform_bound",
        "fejer.damping",
        "fejer.linearity",
    ]
    assert all(e.passed for e in entries)

    with pytest.raises(ValueError):
        fejer_checks({})


def test_endpoint_functional(unit_grid, sine_path):
    constant = make_path("constant", unit_grid, value=1.3)
    m = Mollifier(0.1)
    assert math.isclose(endpoint_functional(m, constant), 1.3, rel_tol=1e-8)

    identity = make_path("linear", unit_grid)
    value = endpoint_functional(m, identity)
    assert abs(value + 1.0) <= 0.1
    assert math.isclose(value, -1.0 + m.center(), abs_tol=1e-9)

    entry = endpoint_convergence(sine_path)
    assert entry.passed
    assert entry.value >= 0.8
    assert entry.details["constant"] > 0.0


def test_coordinate_matrix(coarse_grid):
    paths = [
        make_path("brownian", coarse_grid, seed=5),
        make_path("sine", coarse_grid, amplitude=0.5, frequency=1.5),
    ]
    C = coordinate_matrix(8, coarse_grid)
    assert C.shape == (coarse_grid.n_points, 10)
    values = np.array([p.values for p in paths])
    for row, p in zip(values @ C, paths):
        assert np.allclose(row, fourier_coeffs(p, 8).coordinates, atol=1e-10)
    with pytest.raises(ValueError):
        coordinate_matrix(-1, coarse_grid)


def test_gaussian_smoothed_linear():
    g = OuterFunction.linear([1.0, -2.0], constant=0.5)
    smooth = gaussian_smoothed(g.value, 2, bandwidth=0.3)
    y = np.array([0.4, -0.1])
    assert math.isclose(float(smooth.value(y)), float(g.value(y)), abs_tol=1e-12)
    assert np.allclose(smooth.gradient(y), [1.0, -2.0], atol=1e-12)
    assert np.allclose(smooth.hessian(y), 0.0, atol=1e-8)


def test_gaussian_smoothed_square():
    g = OuterFunction.square(2)
    h = 0.2
    smooth = gaussian_smoothed(g.value, 2, bandwidth=h)
    y = np.array([0.5, -0.7])
    # Gaussian convolution of a quadratic: g(y) + h**2 tr(D^2 g) / 2
    expected = float(np.sum(y * y)) + 2.0 * h * h
    assert math.isclose(float(smooth.value(y)), expected, rel_tol=1e-12)
    assert np.allclose(smooth.gradient(y), 2.0 * y, atol=1e-10)
    assert np.allclose(smooth.hessian(y), 2.0 * np.eye(2), atol=1e-8)
    assert smooth.check_derivatives(y) <= 1e-6

    many = np.tile(y, (3, 1))
    assert smooth.value(many).shape == (3,)
    assert smooth.gradient(many).shape == (3, 2)
    assert smooth.hessian(many).shape == (3, 2, 2)


def test_gaussian_smoothed_consistent_derivatives():
    # value, gradient and Hessian come from one deterministic stencil
    g = OuterFunction.exp([1.0, 1.0])
    h = 0.05
    smooth = gaussian_smoothed(g.value, 2, bandwidth=h)
    y = np.array([0.1, -0.2])
    expected = math.exp(-0.1 + h * h)
    assert math.isclose(float(smooth.value(y)), expected, rel_tol=1e-5)
    assert smooth.check_derivatives(y) <= 5e-3
    assert np.array_equal(smooth.gradient(y), smooth.gradient(y.copy()))
    assert smooth.data["rule"] == "axis"


def test_axis_nodes():
    Z = axis_nodes(3)
    assert Z.shape == (6, 3)
    assert np.allclose(Z.mean(axis=0), 0.0, atol=1e-15)
    assert np.allclose(Z.T @ Z / 6.0, np.eye(3), atol=1e-14)
    with pytest.raises(ValueError):
        axis_nodes(0)
    with pytest.raises(ValueError):
        gaussian_smoothed(np.sum, 2, bandwidth=0.0)


def test_diagonal_schedule():
    assert diagonal_schedule((2, 4)) == [(2, 0.5, 4.0), (4, 0.25, 16.0)]


def test_Gnek_coordinates(sine_path):
    G = sup_functional()
    Gnek = build_Gnek(G, 8, 0.25, 64.0)
    assert Gnek.n_inputs == 10
    expected = fourier_coeffs(sine_path, 8, mollifier=Gnek.mollifier).coordinates
    assert np.allclose(Gnek.coordinates(1.0, sine_path), expected, atol=1e-6)


def test_Gnek_present(sine_path):
    # g_n is linear for the present value, so smoothing is exact
    Gnek = build_Gnek(present_functional(), 16, 1.0 / 16.0, 256.0)
    approx = fejer_apply(Gnek.operator, sine_path, mollifier=Gnek.mollifier)
    value = Gnek.value(1.0, sine_path)
    assert math.isclose(value, float(approx.values[-1]), abs_tol=1e-6)
    assert abs(value - sine_path.present_value) < 0.1


def test_sv_value_integral(sine_path):
    # T_n preserves int eta dx exactly, so U_{n,eps,k} is the classical
    # solution for the integral functional
    Gnek = build_Gnek(integral_functional(), 8, 0.25, 64.0)
    reference = classical_solution(
        CylindricalFunctional(
            outer=OuterFunction.linear([1.0]),
            basis=[BasisFunction.polynomial([1.0, -1.0])],
        ),
        0.5,
        sine_path,
    )
    value, se = sv_value(Gnek, 0.5, sine_path)
    assert abs(value - reference) <= 4.0 * se + 1e-6

    # at t = T the value is G_{n,eps,k} itself
    terminal, se = sv_value(Gnek, 1.0, sine_path)
    assert se == 0.0
    assert math.isclose(terminal, Gnek.value(1.0, sine_path), rel_tol=1e-12)


def test_build_Gnek_errors():
    G = PathFunctional(evaluator=lambda t, eta: 0.0, label="unbounded")
    with pytest.raises(ValueError, match="growth certificate"):
        build_Gnek(G, 4, 0.25, 16.0)
    with pytest.raises(ValueError):
        build_Gnek(sup_functional(), 4, 2.0, 16.0)
    with pytest.raises(ValueError):
        build_Gnek(sup_functional(), 4, 0.25, 0.0)


def test_sv_convergence_sup(coarse_grid):
    eta = make_path("constant", coarse_grid, value=0.0)
    cfg = SimConfig(n_steps=128, n_paths=2000, T=1.0, seed=3)
    entry = sv_convergence(
        sup_functional(),
        0.0,
        eta,
        schedule=diagonal_schedule((8, 16, 32)),
        cfg=cfg,
        reference=math.sqrt(2.0 / math.pi),
    )
    assert entry.provenance == "closed-form"
    assert entry.details["diagonal"]
    assert entry.details["decreasing"]
    columns = entry.details["columns"]
    rows = entry.details["rows"]
    gaps = [row[columns.index("gap")] for row in rows]
    assert gaps[-1] < gaps[0]
    assert entry.gap == gaps[-1]
    assert entry.value == rows[-1][columns.index("value")]
    assert entry.passed

    # beyond the truncation bias of T_n, U_{n,eps,k} is within 0.02
    final = rows[-1]
    truncated = final[columns.index("truncated")]
    assert abs(final[columns.index("value")] - truncated) <= 0.02
    bias = entry.details["truncation_bias"]
    assert math.isclose(bias, abs(truncated - math.sqrt(2.0 / math.pi)))
    assert bias > 0.0


def test_sv_convergence_trend_required(coarse_grid):
    eta = make_path("constant", coarse_grid, value=0.0)
    cfg = SimConfig(n_steps=64, n_paths=500, T=1.0, seed=3)
    # the coarse point is closer to a deliberately wrong reference
    entry = sv_convergence(
        sup_functional(),
        0.0,
        eta,
        schedule=diagonal_schedule((4, 16)),
        cfg=cfg,
        reference=0.0,
    )
    assert not entry.details["decreasing"]
    assert entry.gap == math.inf
    assert not entry.passed


def test_sv_convergence_errors(coarse_grid):
    eta = make_path("constant", coarse_grid, value=0.0)
    with pytest.raises(ValueError, match="2 or more"):
        sv_convergence(sup_functional(), 0.0, eta, schedule=[(4, 0.25, 16.0)])
