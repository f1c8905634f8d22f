import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.stats import norm

from pathreg.paths import Grid, SampledPath, make_path
from pathreg.regcalc import (
    AtomicMeasure,
    EpsilonSchedule,
    backward_approximant,
    backward_integral,
    backward_integral_measure,
    backward_measure_approximant,
    covariation,
    estimate_limit,
    forward_approximant,
    forward_integral,
    ibp_check,
    is_decreasing_trend,
    quadratic_variation,
)
from pathreg.regcalc._quadrature import extended


def brute_force_forward(g, f, eps, n=200001):
    """Trapezoid rule for the defining integral on a fine grid"""
    s = np.linspace(g.grid.t_min, g.grid.t_max, n)
    integrand = g.past_at(s) * (extended(f, s + eps) - extended(f, s)) / eps
    return trapezoid(integrand, s)


def brute_force_backward(g, f, eps, n=200001):
    s = np.linspace(g.grid.t_min, g.grid.t_max, n)
    integrand = g.past_at(s) * (extended(f, s) - extended(f, s - eps)) / eps
    return trapezoid(integrand, s)


def test_epsilon_schedule():
    sched = EpsilonSchedule()
    assert len(sched) == 8
    assert sched.eps_values[0] == 0.25
    assert sched.eps_min == 2.0**-9

    with pytest.raises(ValueError):
        EpsilonSchedule([0.1, 0.2])
    with pytest.raises(ValueError):
        EpsilonSchedule([0.1, -0.2])
    with pytest.raises(ValueError):
        EpsilonSchedule([])

    with pytest.raises(ValueError):
        sched.validate(spacing=2.0**-9)
    sched.validate(spacing=2.0**-10)
    EpsilonSchedule(sched.eps_values, grid_refine=True).validate(spacing=0.1)

    restored = EpsilonSchedule.from_dict({"eps_max": 0.5, "n_levels": 3})
    assert np.allclose(restored.eps_values, [0.5, 0.25, 0.125])


def test_estimate_limit():
    eps = 2.0 ** -np.arange(2, 8)
    est = estimate_limit(eps, 1.0 - eps / 2.0, tolerance=0.01)
    assert est.value == pytest.approx(1.0, abs=1e-12)
    assert est.convergence_rate == pytest.approx(1.0)
    assert est.converged

    est = estimate_limit(eps, 2.0 + eps**2, tolerance=1e-8)
    assert est.value == pytest.approx(2.0, abs=1e-12)
    assert est.convergence_rate == pytest.approx(2.0)
    assert not est.converged

    est = estimate_limit([0.1], [3.0])
    assert est.value == 3.0
    assert not est.converged


def test_forward_integral(unit_grid, identity_path):
    one = make_path("constant", unit_grid)
    est = forward_integral(one, identity_path)
    assert est.value == pytest.approx(1.0, abs=1e-9)
    assert est.converged
    for eps, a in est.raw:
        assert a == pytest.approx(1.0 - eps / 2.0, abs=1e-12)

    est = forward_integral(identity_path, identity_path)
    assert est.value == pytest.approx(-0.5, abs=1e-5)

    const = make_path("constant", unit_grid, value=2.0)
    est = forward_integral(identity_path, const)
    assert est.value == pytest.approx(0.0, abs=1e-12)


def test_forward_approximant_brute_force(unit_grid, identity_path, sine_path):
    one = make_path("constant", unit_grid)
    for g, f in [(one, identity_path), (identity_path, identity_path)]:
        for eps in [0.25, 0.01]:
            assert forward_approximant(g, f, eps) == pytest.approx(
                brute_force_forward(g, f, eps), abs=1e-5
            )
    assert backward_approximant(sine_path, identity_path, 0.1) == pytest.approx(
        brute_force_backward(sine_path, identity_path, 0.1), abs=1e-5
    )


def test_backward_integral(unit_grid, identity_path):
    one = make_path("constant", unit_grid)
    est = backward_integral(one, identity_path)
    assert est.value == pytest.approx(0.0, abs=1e-9)
    for eps, a in est.raw:
        assert a == pytest.approx(-eps / 2.0, abs=1e-12)

    est = backward_integral(identity_path, identity_path)
    assert est.value == pytest.approx(0.5, abs=1e-5)

    const = make_path("constant", unit_grid, value=2.0)
    est = backward_integral(identity_path, const, left="hold")
    assert est.value == pytest.approx(0.0, abs=1e-12)


def test_backward_integral_gaussian_cdf(unit_grid):
    one = make_path("constant", unit_grid)
    f = SampledPath(unit_grid, norm.cdf(unit_grid.points))

    # the zero extension left of the interval contributes f(a)
    est = backward_integral(one, f)
    assert est.value == pytest.approx(norm.cdf(0.0), abs=1e-5)

    est = backward_integral(one, f, left="hold")
    assert est.value == pytest.approx(norm.cdf(0.0) - norm.cdf(-1.0), abs=1e-5)

    entry = ibp_check(one, f, "backward", tolerance=1e-5)
    assert entry.reference == pytest.approx(norm.cdf(0.0), abs=1e-12)
    assert entry.passed


def test_smooth_integrals_match_riemann(unit_grid, sine_path):
    # f(x) = 0.5 sin(pi x), g(x) = x: int g f' dx = 1/pi
    g = make_path("linear", unit_grid)
    expected = 1.0 / np.pi
    tol = 10.0 * unit_grid.spacing
    assert forward_integral(g, sine_path).value == pytest.approx(expected, abs=tol)
    est = backward_integral(g, sine_path, left="hold")
    assert est.value == pytest.approx(expected, abs=tol)


def test_unknown_left_extension(unit_grid, identity_path):
    with pytest.raises(ValueError):
        backward_integral(identity_path, identity_path, left="reflect")


def test_incompatible_intervals(unit_grid, identity_path):
    other = make_path("linear", Grid(-2.0, 0.0, 2049))
    with pytest.raises(ValueError):
        forward_integral(identity_path, other)


def test_schedule_too_fine(coarse_grid):
    p = make_path("linear", coarse_grid)
    with pytest.raises(ValueError):
        forward_integral(p, p)
    sched = EpsilonSchedule.geometric(eps_max=0.25, n_levels=4)
    assert forward_integral(p, p, sched).value == pytest.approx(-0.5, abs=1e-3)


def test_covariation_smooth(unit_grid):
    f = SampledPath(unit_grid, np.sin(unit_grid.points))
    est = quadratic_variation(f, -1.0)
    assert est.value == pytest.approx(0.0, abs=1e-4)


def test_covariation_symmetric(unit_grid, sine_path):
    b = make_path("brownian", unit_grid, seed=1)
    x = -0.5
    assert covariation(b, sine_path, x).value == covariation(sine_path, b, x).value


def test_brownian_quadratic_variation():
    grid = Grid(0.0, 1.0, 2**14 + 1)
    values = []
    for seed in range(100):
        b = make_path("brownian", grid, seed=seed)
        values.append(quadratic_variation(b, 1.0).value)
    assert np.mean(values) == pytest.approx(1.0, abs=0.05)


def test_brownian_smooth_covariation():
    grid = Grid(0.0, 1.0, 2**14 + 1)
    smooth = SampledPath(grid, np.sin(grid.points))
    for seed in range(5):
        b = make_path("brownian", grid, seed=seed)
        assert abs(covariation(b, smooth, 1.0).value) <= 0.02


def test_quadratic_variation_nondecreasing():
    grid = Grid(0.0, 1.0, 2**12 + 1)
    sched = EpsilonSchedule.geometric(eps_max=2.0**-4, n_levels=5)
    b = make_path("brownian", grid, seed=11)
    x = np.linspace(0.1, 1.0, 10)
    finest = [quadratic_variation(b, xi, sched).finest for xi in x]
    assert np.all(np.diff(finest) >= -1e-12)


def test_backward_integral_measure(unit_grid, identity_path):
    lebesgue = AtomicMeasure.lebesgue(unit_grid)
    est = backward_integral_measure(lebesgue, identity_path)
    assert est.value == pytest.approx(0.0, abs=1e-9)

    square = make_path("quadratic", unit_grid)
    atom = AtomicMeasure.dirac(unit_grid, -0.5)
    for eps in [0.25, 0.125]:
        approx = backward_measure_approximant(atom, square, eps)
        assert approx == pytest.approx(-1.0 - eps, abs=1e-5)
    est = backward_integral_measure(atom, square)
    assert est.value == pytest.approx(-1.0, abs=1e-5)

    zero = AtomicMeasure.zero(unit_grid)
    assert backward_integral_measure(zero, square).value == 0.0

    with pytest.raises(ValueError):
        AtomicMeasure.dirac(unit_grid, 0.5)
    with pytest.raises(ValueError):
        backward_integral_measure(atom, make_path("linear", unit_grid, present=1.0))


def test_measure_density_matches_backward_integral(unit_grid, sine_path):
    density = make_path("linear", unit_grid, offset=1.0, slope=2.0)
    mu = AtomicMeasure(density)
    a = backward_integral_measure(mu, sine_path).value
    b = backward_integral(density, sine_path).value
    assert a == pytest.approx(b, rel=1e-8, abs=1e-14)
    assert mu.total_variation() == pytest.approx(0.5)


def test_ibp_check(unit_grid, identity_path, sine_path):
    one = make_path("constant", unit_grid)
    entry = ibp_check(one, identity_path, "forward", tolerance=1e-6)
    assert entry.reference == pytest.approx(1.0)
    assert entry.passed

    entry = ibp_check(one, identity_path, "backward", tolerance=1e-6)
    assert entry.reference == pytest.approx(0.0, abs=1e-12)
    assert entry.passed

    const = make_path("constant", unit_grid, value=3.0)
    g = make_path("linear", unit_grid, offset=2.0)
    entry = ibp_check(g, const, "forward", tolerance=1e-9)
    # g(b-) f(b) - f (g(b) - g(a)) - g(a) f(a) = 0
    assert entry.reference == pytest.approx(0.0, abs=1e-12)
    assert entry.value == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(ValueError):
        ibp_check(one, identity_path, "sideways")


def test_ibp_gap_decreases(unit_grid, sine_path):
    g = make_path("linear", unit_grid, offset=2.0)
    for direction in ["forward", "backward"]:
        entry = ibp_check(g, sine_path, direction, tolerance=1e-3)
        gaps = entry.details["gaps"]
        assert gaps[-1] < gaps[-2] < gaps[-3]
        assert entry.passed


def test_is_decreasing_trend():
    assert is_decreasing_trend([1.0, 0.5, 0.52, 0.1])
    assert not is_decreasing_trend([1.0, 0.5, 0.9, 0.1])
    assert not is_decreasing_trend([1.0, 1.1])
    assert not is_decreasing_trend([1.0, np.nan, 0.1])
