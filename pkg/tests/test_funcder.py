import numpy as np
import pytest

from pathreg.funcder import (
    BasisFunction,
    CylindricalFunctional,
    DifferentiablePathFunctional,
    OuterFunction,
    PathFunctional,
    derivatives,
    eval_cyl,
    frechet_rep_check,
    horizontal_derivative,
    integral_functional,
    make_functional,
    present_functional,
    sup_functional,
    time_derivative,
    vertical_derivatives,
)
from pathreg.paths import Grid, SampledPath, make_path, value_at
from pathreg.regcalc import EpsilonSchedule, forward_integral


@pytest.fixture
def fine_grid():
    return Grid.window(1.0, 2**12 + 1)


@pytest.fixture
def fine_schedule():
    return EpsilonSchedule.geometric(eps_max=2.0**-4, n_levels=8)


def linear_cyl(basis, T=1.0):
    return CylindricalFunctional(
        outer=OuterFunction.linear([1.0] * len(basis)), basis=basis, T=T
    )


def test_eval_cyl_present(unit_grid, sine_path):
    c = linear_cyl([BasisFunction.constant(1.0)])
    eta = sine_path.with_values(sine_path.values, present=0.7)
    for t in [0.0, 0.3, 1.0]:
        assert eval_cyl(c, t, eta) == pytest.approx(0.7, abs=1e-12)


def test_eval_cyl_forward_integral_oracle(unit_grid, sine_path):
    phi = BasisFunction.polynomial([1.0, -0.5, 0.25])
    c = linear_cyl([phi])
    g = SampledPath(unit_grid, phi(unit_grid.points + 1.0))
    oracle = forward_integral(g, sine_path).value + phi(0.0) * sine_path.values[0]
    assert eval_cyl(c, 1.0, sine_path) == pytest.approx(oracle, abs=1e-4)

    # constant path: k phi(t) - k (phi(t) - phi(0)) = k phi(0)
    k = 2.5
    eta = make_path("constant", unit_grid, value=k)
    for t in [0.25, 1.0]:
        assert eval_cyl(c, t, eta) == pytest.approx(k * phi(0.0), abs=1e-12)


def test_eval_cyl_zero_path(unit_grid, cyl_quadratic):
    eta = make_path("constant", unit_grid, value=0.0)
    assert eval_cyl(cyl_quadratic, 0.5, eta) == pytest.approx(0.1, abs=1e-14)


def test_eval_cyl_errors(unit_grid, cyl_quadratic, sine_path):
    with pytest.raises(ValueError):
        eval_cyl(cyl_quadratic, 1.5, sine_path)
    with pytest.raises(ValueError):
        eval_cyl(cyl_quadratic, -0.1, sine_path)
    with pytest.raises(ValueError):
        CylindricalFunctional(
            outer=OuterFunction.linear([1.0, 1.0]),
            basis=[BasisFunction.constant()],
        )


def test_eval_cyl_grid_refinement(cyl_quadratic):
    values = []
    for n in [65, 129]:
        grid = Grid.window(1.0, n)
        eta = SampledPath(grid, np.sin(3.0 * grid.points))
        values.append(eval_cyl(cyl_quadratic, 0.8, eta))
    spacing = 1.0 / 64
    assert abs(values[1] - values[0]) <= 10.0 * spacing**2


def test_evaluate_many(unit_grid, cyl_quadratic):
    paths = [make_path("brownian", unit_grid, seed=i) for i in range(4)]
    values = np.array([p.values for p in paths])
    present = np.array([0.1, -0.2, 0.3, 0.0])
    for u in [cyl_quadratic, sup_functional(), integral_functional()]:
        many = u.evaluate_many(0.6, unit_grid, values, present)
        one = [
            u(0.6, SampledPath(unit_grid, v, present=a))
            for v, a in zip(values, present)
        ]
        assert np.allclose(many, one, rtol=1e-12, atol=1e-12)


def test_horizontal_derivative_simple(unit_grid, sine_path):
    est = horizontal_derivative(present_functional(), 1.0, sine_path)
    assert est.value == 0.0

    u = PathFunctional(lambda t, eta: integral_functional()(t, eta))
    eta = make_path("linear", unit_grid, offset=0.5, slope=2.0)
    est = horizontal_derivative(u, 1.0, eta)
    assert est.value == pytest.approx(eta.values[-1] - eta.values[0], abs=1e-9)


def test_horizontal_derivative_cylindrical(fine_grid, fine_schedule, cyl_quadratic):
    eta = SampledPath(fine_grid, 0.5 * np.sin(np.pi * fine_grid.points) + 0.2)
    u = PathFunctional(cyl_quadratic.value)
    for t in [0.5, 1.0]:
        est = horizontal_derivative(u, t, eta, sched=fine_schedule)
        closed = cyl_quadratic.dh_closed(t, eta)
        assert est.value == pytest.approx(closed, rel=1e-4, abs=1e-4)


def test_horizontal_derivative_left_right():
    grid = Grid.window(1.0, 2**10 + 1)
    eta = SampledPath(grid, np.abs(grid.points + 0.5))
    u = PathFunctional(lambda t, p: value_at(p, -0.5))
    left = horizontal_derivative(u, 1.0, eta, mode="left")
    right = horizontal_derivative(u, 1.0, eta, mode="right")
    assert left.value == pytest.approx(-1.0, abs=1e-9)
    assert right.value == pytest.approx(1.0, abs=1e-9)

    with pytest.raises(ValueError):
        horizontal_derivative(u, 1.0, eta, mode="middle")


def test_vertical_derivatives(unit_grid, sine_path, cyl_quadratic):
    u = PathFunctional(lambda t, eta: eta.present_value**2)
    eta = sine_path.with_values(sine_path.values, present=3.0)
    dv, dvv = vertical_derivatives(u, 0.5, eta)
    assert dv.value == pytest.approx(6.0, abs=1e-9)
    assert dvv.value == pytest.approx(2.0, abs=1e-8)

    u = PathFunctional(integral_functional().evaluator)
    dv, dvv = vertical_derivatives(u, 0.5, eta)
    assert dv.value == 0.0
    assert dvv.value == 0.0

    u = PathFunctional(cyl_quadratic.value)
    dv, dvv = vertical_derivatives(u, 0.7, sine_path)
    assert dv.value == pytest.approx(cyl_quadratic.dv_closed(0.7, sine_path), rel=1e-8)
    assert dvv.value == pytest.approx(
        cyl_quadratic.dvv_closed(0.7, sine_path), rel=1e-8
    )


def test_time_derivative_cylindrical(unit_grid, sine_path, cyl_quadratic):
    u = PathFunctional(cyl_quadratic.value)
    est = time_derivative(u, 0.5, sine_path)
    closed = cyl_quadratic.dt_closed(0.5, sine_path)
    assert est.value == pytest.approx(closed, rel=1e-4, abs=1e-4)


def test_classical_consistency(unit_grid, sine_path):
    # u(t, eta) = F(t, eta(0)) with F(t, x) = (1 + t) sin(x)
    u = PathFunctional(lambda t, eta: (1.0 + t) * np.sin(eta.present_value))
    eta = sine_path.with_values(sine_path.values, present=0.4)
    result = derivatives(u, 0.5, eta)
    assert result.dh.value == 0.0
    assert result.dv.value == pytest.approx(1.5 * np.cos(0.4), abs=1e-6)
    assert result.dvv.value == pytest.approx(-1.5 * np.sin(0.4), abs=1e-6)
    assert result.converged


def test_linearity(unit_grid, sine_path):
    u = PathFunctional(lambda t, eta: eta.present_value**2)
    v = PathFunctional(integral_functional().evaluator)
    w = PathFunctional(lambda t, eta: 2.0 * u(t, eta) - 3.0 * v(t, eta))
    eta = sine_path.with_values(sine_path.values, present=0.5)
    du, dv_, dw = (derivatives(f, 1.0, eta) for f in [u, v, w])
    for key in ["dh", "dv", "dvv"]:
        combined = 2.0 * getattr(du, key).value - 3.0 * getattr(dv_, key).value
        assert getattr(dw, key).value == pytest.approx(combined, abs=1e-6)


def test_derivatives_closed_form(unit_grid, sine_path, cyl_quadratic):
    result = derivatives(cyl_quadratic, 0.5, sine_path, with_time=True)
    assert result.dh.value == cyl_quadratic.dh_closed(0.5, sine_path)
    assert result.dt.value == cyl_quadratic.dt_closed(0.5, sine_path)
    assert result.dh.converged

    # continuous path: time and horizontal derivatives cancel
    assert result.dt.value + result.dh.value == pytest.approx(0.0, abs=1e-12)


def test_frechet_rep_check(unit_grid, sine_path):
    eta = SampledPath(unit_grid, sine_path.values + 0.3)

    entry = frechet_rep_check(integral_functional(), eta, tolerance=1e-6)
    assert entry.value == pytest.approx(eta.values[-1] - eta.values[0], abs=1e-6)
    assert entry.passed

    entry = frechet_rep_check(present_functional(), eta)
    assert entry.value == 0.0
    assert entry.reference == 0.0
    assert entry.passed

    c = CylindricalFunctional(
        outer=OuterFunction.square(1),
        basis=[BasisFunction.sine(frequency=0.5, phase=0.3)],
    )
    entry = frechet_rep_check(c, eta, tolerance=1e-3)
    assert entry.passed

    with pytest.raises(ValueError):
        frechet_rep_check(PathFunctional(lambda t, p: 0.0, label="bare"), eta)


def test_outer_function_derivatives():
    x = np.array([0.3, -0.7])
    for outer in [
        OuterFunction.linear([1.0, 2.0]),
        OuterFunction.quadratic([[1.0, 0.2], [0.0, 3.0]], weights=[1.0, 0.0]),
        OuterFunction.exp([0.5, -1.0]),
        OuterFunction.sin([2.0, 1.0]),
    ]:
        assert outer.check_derivatives(x) < 1e-6
        restored = OuterFunction.from_dict(outer.to_dict())
        assert restored(x) == pytest.approx(outer(x))
    xs = np.zeros((5, 2))
    assert OuterFunction.exp([1.0, 1.0]).hessian(xs).shape == (5, 2, 2)

    with pytest.raises(ValueError):
        OuterFunction.from_dict({"type": "cubic"})


def test_basis_function():
    phi = BasisFunction.polynomial([1.0, 2.0, 3.0])
    assert phi(2.0) == pytest.approx(17.0)
    assert phi.derivative(2.0) == pytest.approx(14.0)
    assert phi.second(2.0) == pytest.approx(6.0)

    cos = BasisFunction.cosine(0.25)
    assert cos(0.0) == pytest.approx(1.0)
    assert cos.derivative(1.0) == pytest.approx(-0.5 * np.pi)
    assert BasisFunction.from_dict(cos.to_dict())(0.3) == pytest.approx(cos(0.3))

    with pytest.raises(ValueError):
        BasisFunction.from_dict({"type": "wavelet"})


def test_make_functional(unit_grid, sine_path):
    for label in ["present", "present_squared", "integral", "sup"]:
        u = make_functional(label)
        assert u.label == label
        assert np.isfinite(u(1.0, sine_path))

    params = {
        "outer": {"type": "linear", "weights": [1.0]},
        "basis": [{"type": "polynomial", "coeffs": [1.0]}],
    }
    c = make_functional("cylindrical", T=1.0, params=params)
    assert isinstance(c, DifferentiablePathFunctional)
    assert c(0.5, sine_path) == pytest.approx(sine_path.present_value)

    with pytest.raises(ValueError):
        make_functional("cylindrical")
    with pytest.raises(ValueError):
        make_functional("unknown")


def test_sup_functional(unit_grid):
    eta = make_path("linear", unit_grid, offset=0.0, slope=-1.0, present=0.2)
    sup = sup_functional()
    assert sup(1.0, eta) == pytest.approx(1.0)
    assert sup(0.5, eta) == pytest.approx(0.5)
    assert sup(0.0, eta) == pytest.approx(0.2)
