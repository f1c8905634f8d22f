import math

import numpy as np
import pytest

from pathreg.funcder import (
    BasisFunction,
    CylindricalFunctional,
    OuterFunction,
    present_functional,
    sup_functional,
)
from pathreg.paths import make_path
from pathreg.ppde import (
    DISCRETE_MAX_SHIFT,
    GaussianCylModel,
    LookbackState,
    QuadratureRule,
    classical_solution,
    coordinate_samples,
    hedging_check,
    heat_residual,
    local_time_check,
    lookback_derivatives,
    lookback_f,
    lookback_martingale_check,
    lookback_pde_check,
    lookback_U,
    lookback_value,
    lookback_value_mc,
    mc_cylindrical_price,
    mc_price,
    psi_derivatives,
    psi_eval,
    reflection_check,
)
from pathreg.simflow import SimConfig


def cyl(outer, basis, T=1.0):
    return CylindricalFunctional(outer=outer, basis=basis, T=T)


@pytest.fixture
def square_model():
    """g(y) = y**2, phi = 1"""
    return GaussianCylModel(
        cyl(OuterFunction.quadratic([[2.0]]), [BasisFunction.constant(1.0)])
    )


CORPUS = [
    (OuterFunction.linear([1.0, -2.0], constant=0.5), [0.0, 1.0], [2.0]),
    (OuterFunction.quadratic([[1.0, 0.3], [0.3, 2.0]]), [1.0, 0.5], [0.25]),
    (OuterFunction.exp([0.5, -0.3]), [1.0, 1.0], [0.5]),
    (OuterFunction.sin([0.7, 0.4]), [0.0, 0.0, 1.0], [1.0]),
    (OuterFunction.square(2), [1.0], [0.75]),
]


def corpus_functional(outer, coeffs, freq):
    return cyl(
        outer,
        [BasisFunction.polynomial(coeffs), BasisFunction.sine(freq[0], phase=0.3)],
    )


def test_QuadratureRule_moments():
    quad = QuadratureRule.gauss_hermite(12)
    z, w = quad.nodes(2)
    assert z.shape == (144, 2)
    assert math.isclose(np.sum(w), 1.0, rel_tol=1e-12)
    assert math.isclose(w @ z[:, 0] ** 2, 1.0, rel_tol=1e-12)
    assert math.isclose(w @ (z[:, 0] * z[:, 1]), 0.0, abs_tol=1e-14)
    assert math.isclose(w @ z[:, 1] ** 4, 3.0, rel_tol=1e-12)
    assert quad.standard_error(z[:, 0]) == 0.0

    mc = QuadratureRule.monte_carlo(n_samples=1000, seed=3)
    a, _ = mc.nodes(2)
    b, _ = QuadratureRule.from_dict(mc.to_dict()).nodes(2)
    assert np.array_equal(a, b)

    with pytest.raises(ValueError):
        QuadratureRule(kind="sparse-grid")


def test_covariance_closed_forms():
    model = GaussianCylModel(
        cyl(
            OuterFunction.square(2),
            [BasisFunction.constant(1.0), BasisFunction.polynomial([0.0, 1.0])],
            T=2.0,
        )
    )
    t = 0.5
    expected = np.array(
        [
            [2.0 - t, (4.0 - t**2) / 2.0],
            [(4.0 - t**2) / 2.0, (8.0 - t**3) / 3.0],
        ]
    )
    assert np.allclose(model.covariance(t), expected, rtol=1e-9)
    assert np.array_equal(model.covariance(2.0), np.zeros((2, 2)))
    assert model.rank(2.0) == 0
    assert model.rank(t) == 2
    assert model.is_nonincreasing([0.0, 0.5, 1.0, 1.5, 2.0])

    A = model.factor(t)
    assert np.allclose(A @ A.T, expected, rtol=1e-9)


def test_rank_deficient_covariance():
    model = GaussianCylModel(
        cyl(
            OuterFunction.square(2),
            [BasisFunction.constant(1.0), BasisFunction.constant(2.0)],
        )
    )
    A = model.factor(0.25)
    assert A.shape == (2, 1)
    assert np.allclose(A @ A.T, 0.75 * np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_indefinite_covariance():
    class Indefinite(GaussianCylModel):
        def covariance(self, t):
            return np.array([[1.0, 0.0], [0.0, -0.5]])

    model = Indefinite(
        cyl(
            OuterFunction.square(2),
            [BasisFunction.constant(1.0), BasisFunction.constant(1.0)],
        )
    )
    with pytest.raises(np.linalg.LinAlgError):
        model.factor(0.0)


def test_psi_eval_linear():
    c = cyl(
        OuterFunction.linear([1.0, 0.0]),
        [BasisFunction.cosine(0.5), BasisFunction.sine(1.0)],
    )
    model = GaussianCylModel(c)
    assert psi_eval(model, 0.3, [0.7, -1.0]) == pytest.approx(0.7, abs=1e-12)


def test_psi_eval_square(square_model):
    for t in [0.0, 0.4, 0.9]:
        value = psi_eval(square_model, t, [1.5])
        assert value == pytest.approx(1.5**2 + (1.0 - t), rel=1e-12)
    # terminal condition is exact
    assert psi_eval(square_model, 1.0, [1.5]) == 1.5**2


def test_psi_eval_exp():
    w = np.array([0.5, -0.3])
    c = corpus_functional(OuterFunction.exp(w), [1.0, 1.0], [0.5])
    model = GaussianCylModel(c)
    x = np.array([0.2, 0.1])
    for t in [0.0, 0.5]:
        cov = model.covariance(t)
        expected = math.exp(w @ x + 0.5 * w @ cov @ w)
        assert psi_eval(model, t, x) == pytest.approx(expected, rel=1e-10)


def test_psi_eval_monte_carlo(square_model):
    quad = QuadratureRule.monte_carlo(n_samples=100000, seed=2)
    value, se = psi_eval(square_model, 0.0, [1.0], quad=quad, return_se=True)
    assert se > 0.0
    assert abs(value - 2.0) <= 4.0 * se


def test_psi_derivatives_square(square_model):
    dt, dx, dxx = psi_derivatives(square_model, 0.3, [1.5])
    assert dt == pytest.approx(-1.0, rel=1e-12)
    assert np.allclose(dx, [3.0], rtol=1e-12)
    assert np.allclose(dxx, [[2.0]], rtol=1e-12)


def test_psi_derivatives_linear():
    c = corpus_functional(*CORPUS[0])
    dt, dx, dxx = psi_derivatives(GaussianCylModel(c), 0.5, [0.1, 0.2])
    assert dt == 0.0
    assert np.allclose(dx, [1.0, -2.0])
    assert np.all(dxx == 0.0)


@pytest.mark.parametrize("outer, coeffs, freq", CORPUS)
def test_psi_time_derivative_finite_difference(outer, coeffs, freq):
    model = GaussianCylModel(corpus_functional(outer, coeffs, freq))
    x = np.array([0.3, -0.2])
    t, h = 0.5, 1e-4
    dt, _, _ = psi_derivatives(model, t, x)
    fd = (psi_eval(model, t + h, x) - psi_eval(model, t - h, x)) / (2.0 * h)
    assert dt == pytest.approx(fd, rel=1e-5, abs=1e-6)


def test_classical_solution_terminal(cyl_quadratic, coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    assert classical_solution(cyl_quadratic, 1.0, eta) == cyl_quadratic(1.0, eta)


def test_classical_solution_linear_martingale(coarse_grid):
    c = cyl(OuterFunction.linear([1.0]), [BasisFunction.constant(1.0)])
    eta = make_path("sine", coarse_grid, amplitude=0.5, present=0.25)
    for t in [0.0, 0.3, 0.8]:
        assert classical_solution(c, t, eta) == pytest.approx(0.25, abs=1e-12)


def test_classical_solution_monte_carlo(cyl_quadratic, coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    t = 0.5
    exact = classical_solution(cyl_quadratic, t, eta)
    cfg = SimConfig(n_steps=256, n_paths=20000, seed=17)
    mean, se = mc_price(cyl_quadratic, t, eta, cfg)
    assert abs(mean - exact) <= 4.0 * se


@pytest.mark.parametrize("outer, coeffs, freq", CORPUS)
def test_heat_residual_closed_form(outer, coeffs, freq, coarse_grid):
    c = corpus_functional(outer, coeffs, freq)
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    for t in [0.0, 0.25, 0.75]:
        assert heat_residual(c, t, eta) <= 1e-6


def test_heat_residual_linear_is_zero(coarse_grid):
    c = corpus_functional(*CORPUS[0])
    eta = make_path("linear", coarse_grid, offset=0.5)
    assert heat_residual(c, 0.5, eta) == pytest.approx(0.0, abs=1e-12)


def test_heat_residual_monte_carlo(cyl_quadratic, coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    quad = QuadratureRule.monte_carlo(n_samples=100000, seed=1)
    model = GaussianCylModel(cyl_quadratic)
    _, se = psi_eval(model, 0.5, [0.1, 0.2], quad=quad, return_se=True)
    residual = heat_residual(cyl_quadratic, 0.5, eta, quad=quad, model=model)
    assert residual <= 4.0 * se + 1e-12


def test_heat_residual_numerical(cyl_quadratic, unit_grid):
    eta = make_path("sine", unit_grid, amplitude=0.5)
    assert heat_residual(cyl_quadratic, 0.5, eta, numerical=True) <= 1e-2


def test_heat_residual_errors(cyl_quadratic, coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    with pytest.raises(ValueError):
        heat_residual(cyl_quadratic, 1.0, eta)


def test_lookback_value():
    assert lookback_value(LookbackState(0.0, 0.0, 0.0)) == pytest.approx(
        math.sqrt(2.0 / math.pi), rel=1e-14
    )
    # x > m
    state = LookbackState(0.36, 0.2, 0.5)
    assert lookback_value(state) == pytest.approx(
        0.5 + math.sqrt(2.0 * 0.64 / math.pi), rel=1e-14
    )
    # terminal
    assert lookback_value(LookbackState(1.0, 0.7, 0.1)) == 0.7
    assert lookback_value(LookbackState(1.0 - 1e-12, 0.7, 0.1)) == pytest.approx(
        0.7, abs=1e-9
    )
    with pytest.raises(ValueError):
        lookback_value(LookbackState(1.5, 0.0, 0.0))


def test_lookback_branch_continuity():
    for t in [0.0, 0.3, 0.9]:
        for m in [-1.0, 0.0, 2.5]:
            expected = m + math.sqrt(2.0 * (1.0 - t) / math.pi)
            below = float(lookback_f(t, m, m))
            above = float(lookback_f(t, m, m + 1e-15))
            assert below == pytest.approx(expected, abs=1e-12)
            assert above == pytest.approx(expected, abs=1e-12)


def test_lookback_derivatives():
    d = lookback_derivatives(LookbackState(0.5, 1.0, 0.0))
    h = 1e-5
    fd = (
        float(lookback_f(0.5 + h, 1.0, 0.0)) - float(lookback_f(0.5 - h, 1.0, 0.0))
    ) / (2.0 * h)
    assert d["dt"] == pytest.approx(fd, rel=1e-7)
    assert d["dt"] + 0.5 * d["dxx"] == pytest.approx(0.0, abs=1e-14)

    at_max = lookback_derivatives(LookbackState(0.5, 0.3, 0.3))
    assert at_max["dm"] == 0.0
    assert at_max["dx"] == pytest.approx(1.0)


def test_lookback_U(coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5, present=0.2)
    assert lookback_U(0.0, eta) == pytest.approx(0.2 + math.sqrt(2.0 / math.pi))

    zero = make_path("constant", coarse_grid, value=0.0)
    assert lookback_U(0.5, zero) == pytest.approx(math.sqrt(1.0 / math.pi))

    # terminal: the supremum of the window
    sup = max(np.max(eta.values), eta.present_value)
    assert lookback_U(1.0, eta) == sup


def test_lookback_pde_check():
    residual, fd = lookback_pde_check()
    assert residual.passed
    assert residual.value <= 1e-12
    assert fd.passed, fd.details
    assert residual.details["t_max"] == fd.details["t_max"] == 0.99
    assert fd.details["h_min"] == pytest.approx(1e-5)


def test_lookback_pde_check_range():
    with pytest.raises(ValueError, match="t_max"):
        lookback_pde_check(t_max=1.0)


def test_lookback_mc_price(coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=-0.5)
    t = 0.5
    exact = lookback_U(t, eta)
    cfg = SimConfig(n_steps=256, n_paths=20000, seed=23)
    mean, se = mc_price(sup_functional(), t, eta, cfg)
    bias = DISCRETE_MAX_SHIFT * math.sqrt(cfg.dt)
    assert mean <= exact + 4.0 * se
    assert abs(mean - exact) <= 4.0 * se + bias


def test_mc_price_present(coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5, present=0.3)
    cfg = SimConfig(n_steps=64, n_paths=10000, seed=5)
    mean, se = mc_price(present_functional(), 0.25, eta, cfg)
    assert abs(mean - 0.3) <= 4.0 * se


def test_reflection_check():
    entry = reflection_check(SimConfig(n_steps=1024, n_paths=1000, seed=5))
    assert entry.passed, entry.details
    half = reflection_check(SimConfig(n_steps=1024, n_paths=1000, seed=6), t=0.5)
    assert half.passed, half.details


def test_lookback_martingale():
    entry = lookback_martingale_check(SimConfig(n_steps=2**12, n_paths=2000, seed=31))
    assert entry.passed, entry.details


def test_local_time_check():
    entry = local_time_check(seed=2)
    assert entry.details["decreasing"]
    assert entry.passed, entry.details


def test_hedging_check():
    entry = hedging_check(seed=3)
    assert entry.details["decreasing"]
    assert entry.passed, entry.details


def test_mc_cylindrical_price(cyl_quadratic, coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    t = 0.25
    exact = classical_solution(cyl_quadratic, t, eta)
    cfg = SimConfig(n_steps=128, n_paths=20000, seed=5)
    mean, se = mc_cylindrical_price(cyl_quadratic, t, eta, cfg)
    assert se > 0.0
    assert abs(mean - exact) <= 4.0 * se

    x = coordinate_samples(cyl_quadratic, t, eta, cfg)
    assert x.shape == (20000, 2)
    threaded = coordinate_samples(
        cyl_quadratic, t, eta, cfg.replace(n_workers=2, block_size=3000)
    )
    assert np.array_equal(x, threaded)

    terminal = coordinate_samples(cyl_quadratic, 1.0, eta, cfg.replace(n_paths=3))
    assert np.allclose(terminal, cyl_quadratic.coordinates(1.0, eta)[None, :])


def test_lookback_value_mc():
    cfg = SimConfig(n_steps=1024, n_paths=20000, seed=12)
    entry = lookback_value_mc(cfg, allowance=DISCRETE_MAX_SHIFT * math.sqrt(cfg.dt))
    assert entry.passed, entry.details
    assert entry.reference == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-14)
    assert entry.value <= entry.reference + 4.0 * entry.details["se"]

    threaded = lookback_value_mc(cfg.replace(n_workers=2, block_size=3000))
    assert threaded.value == entry.value
