import math

import numpy as np
import pytest

from pathreg.funcder import (
    DifferentiablePathFunctional,
    present_functional,
    present_squared_functional,
)
from pathreg.paths import (
    Grid,
    SampledPath,
    Trajectory,
    make_path,
    value_at,
    values_at,
)
from pathreg.regcalc import covariation_approximant
from pathreg.simflow import (
    FlowSample,
    SimConfig,
    brownian_paths,
    flow_window,
    flow_windows,
    ito_verify,
    martingale_check,
    sample_flow,
    simulate_bm,
)


def test_SimConfig():
    cfg = SimConfig(n_steps=16, n_paths=10, T=2.0, seed=5)
    assert math.isclose(cfg.dt, 0.125)
    assert SimConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()
    assert cfg.replace(seed=6).seed == 6

    with pytest.raises(ValueError):
        SimConfig(n_steps=0, n_paths=10)
    with pytest.raises(ValueError, match="n_steps=1 < 2"):
        SimConfig(n_steps=1, n_paths=10)
    with pytest.raises(ValueError):
        SimConfig(n_steps=4, n_paths=10, scheme="euler")
    with pytest.raises(ValueError):
        SimConfig(n_steps=4, n_paths=10, seed=-1)


def test_terminal_law():
    n = 100000
    times, W = brownian_paths(SimConfig(n_steps=2, n_paths=n, T=1.0, seed=7))
    assert W.shape == (n, 3)
    assert np.all(W[:, 0] == 0.0)
    assert abs(np.mean(W[:, 2])) <= 4.0 / math.sqrt(n)
    assert np.var(W[:, 2]) == pytest.approx(1.0, rel=0.05)
    assert np.var(W[:, 1]) == pytest.approx(0.5, rel=0.05)


def test_simulate_bm_determinism():
    cfg = SimConfig(n_steps=32, n_paths=5, seed=11)
    a = simulate_bm(cfg)
    b = simulate_bm(cfg)
    assert len(a) == 5
    for x, y in zip(a, b):
        assert np.array_equal(x.values, y.values)
    c = simulate_bm(cfg.replace(seed=12))
    assert not np.array_equal(a[0].values, c[0].values)


def test_worker_count_independence():
    cfg = SimConfig(n_steps=20, n_paths=250, seed=3)
    _, serial = brownian_paths(cfg)
    _, threaded = brownian_paths(cfg.replace(n_workers=4, block_size=16))
    assert np.array_equal(serial, threaded)


def test_brownian_quadratic_variation():
    cfg = SimConfig(n_steps=2**14, n_paths=100, seed=21)
    times, W = brownian_paths(cfg)
    grid = Grid(0.0, 1.0, times.size)
    eps = 2.0**-10
    paths = [SampledPath(grid, w) for w in W]
    qv = np.array([covariation_approximant(p, p, 1.0, eps) for p in paths])
    assert np.mean(np.abs(qv - 1.0)) <= 0.05


@pytest.fixture
def flow_sample(coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5)
    cfg = SimConfig(n_steps=64, n_paths=1, seed=9)
    return sample_flow(0.25, eta, cfg, index=2)


def test_flow_window_at_anchor(flow_sample, coarse_grid):
    assert flow_window(flow_sample, 0.25, coarse_grid) is flow_sample.eta


def test_flow_window_terminal(flow_sample, coarse_grid):
    fs = flow_sample
    window = flow_window(fs, 1.0, coarse_grid)
    expected = fs.eta.present_value + fs.base(1.0) - fs.base(0.25)
    assert math.isclose(window.present_value, expected, abs_tol=1e-12)

    # x <= t - s: the anchor path, shifted
    x = coarse_grid.points
    past = x <= 0.25 - 1.0
    assert np.allclose(window.values[past], values_at(fs.eta, x[past] + 0.75))


def test_flow_window_constant_past(coarse_grid):
    eta = make_path("constant", coarse_grid, value=2.0)
    times = np.linspace(0.5, 1.0, 33)
    base = Trajectory(times, np.sin(7.0 * times))
    fs = FlowSample(base, t=0.5, eta=eta, T=1.0)
    s = 0.75
    window = fs.window(s, coarse_grid)
    x = coarse_grid.points
    expected = np.where(x <= 0.5 - s, 2.0, 2.0 + base(x + s) - base(0.5))
    assert np.allclose(window.values, expected)


def test_flow_window_errors(flow_sample, coarse_grid):
    with pytest.raises(ValueError):
        flow_window(flow_sample, 0.1, coarse_grid)
    with pytest.raises(ValueError):
        flow_window(flow_sample, 1.5, coarse_grid)


def test_flow_windows(coarse_grid):
    eta = make_path("sine", coarse_grid, amplitude=0.5, present=0.3)
    cfg = SimConfig(n_steps=64, n_paths=20000, seed=4)
    values = flow_windows(0.5, eta, coarse_grid, cfg)
    assert values.shape == (20000, coarse_grid.n_points)

    x = coarse_grid.points
    past = x <= -0.5
    assert np.allclose(values[:, past], values_at(eta, x[past] + 0.5)[None, :])

    terminal = values[:, -1]
    assert abs(np.mean(terminal) - 0.3) <= 4.0 * math.sqrt(0.5 / 20000)
    assert np.var(terminal) == pytest.approx(0.5, rel=0.05)

    threaded = flow_windows(
        0.5, eta, coarse_grid, cfg.replace(n_workers=3, block_size=1000)
    )
    assert np.array_equal(values, threaded)


def test_ito_verify_present():
    X = simulate_bm(SimConfig(n_steps=256, n_paths=1, seed=3))[0]
    eps = 2.0**-5
    m = 8
    result = ito_verify(present_functional(), X, eps)
    assert result.converged
    assert np.allclose(result.lhs, X.values)
    assert np.all(result.drift_term == 0.0)
    assert np.all(result.qv_term == 0.0)

    # telescoping: the forward sum misses the average of the first m values
    expected = np.mean(X.values[:m]) - X.values[0]
    assert np.allclose(result.residual[m:], expected, atol=1e-12)


def test_ito_verify_present_squared():
    X = simulate_bm(SimConfig(n_steps=256, n_paths=1, seed=4))[0]
    m = 8
    result = ito_verify(present_squared_functional(), X, m / 256)
    expected = np.mean(X.values[:m] ** 2) - X.values[0] ** 2
    assert np.allclose(result.residual[m:], expected, atol=1e-12)
    assert result.sup_residual >= abs(expected)
    assert result.rows().shape == (257, len(result.COLUMNS))


def mean_sup_residual(n_steps, eps, seeds, n_paths):
    u = present_squared_functional()
    sups = []
    for seed in seeds:
        cfg = SimConfig(n_steps=n_steps, n_paths=n_paths, seed=seed)
        for X in simulate_bm(cfg):
            sups.append(ito_verify(u, X, eps).sup_residual)
    return np.mean(sups)


def test_ito_verify_residual_halves():
    seeds = range(20)
    coarse = mean_sup_residual(2**6, 2.0**-3, seeds, 32)
    fine = mean_sup_residual(2**7, 2.0**-4, [100 + s for s in seeds], 32)
    assert 1.4 <= coarse / fine <= 2.6


def time_weighted_square():
    """``u(t, eta) = t * eta(0)**2``"""
    return DifferentiablePathFunctional(
        evaluator=lambda t, eta: t * eta.present_value**2,
        label="time_weighted_square",
        dt=lambda t, eta: eta.present_value**2,
        dh=lambda t, eta: 0.0,
        dv=lambda t, eta: 2.0 * t * eta.present_value,
        dvv=lambda t, eta: 2.0 * t,
    )


def smooth_residual(n_steps, eps):
    times = np.linspace(0.0, 1.0, n_steps + 1)
    X = Trajectory(times, np.sin(2.0 * times))
    return ito_verify(time_weighted_square(), X, eps)


def test_ito_verify_smooth_chain_rule():
    coarse = smooth_residual(2**8, 2.0**-4)
    fine = smooth_residual(2**10, 2.0**-6)
    assert fine.converged
    assert fine.sup_residual < 0.1
    assert fine.sup_residual < 0.5 * coarse.sup_residual


def test_ito_verify_errors():
    X = Trajectory(np.linspace(0.0, 1.0, 65), np.zeros(65))
    with pytest.raises(ValueError):
        ito_verify(present_functional(), X, eps=0.01)
    Y = Trajectory([0.0, 0.1, 0.3], [0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        ito_verify(present_functional(), Y, eps=0.1)


def test_martingale_check_brownian():
    cfg = SimConfig(n_steps=16, n_paths=20000, seed=8)
    times, W = brownian_paths(cfg)
    entry = martingale_check(W, seed=cfg.seed)
    assert entry.passed
    assert entry.value <= 4.0
    assert entry.provenance == "monte-carlo"

    assert martingale_check(W**2 - times[None, :]).passed


def test_martingale_check_deterministic_drift():
    times = np.linspace(0.0, 1.0, 11)
    entry = martingale_check(np.tile(times, (100, 1)))
    assert entry.value == math.inf
    assert not entry.passed


def test_sample_flow_terminal_value(coarse_grid):
    eta = make_path("linear", coarse_grid, offset=1.0)
    cfg = SimConfig(n_steps=32, n_paths=1, seed=1)
    fs = sample_flow(0.5, eta, cfg, index=7)
    again = sample_flow(0.5, eta, cfg, index=7)
    assert np.array_equal(fs.base.values, again.base.values)
    window = fs.window(1.0, coarse_grid)
    assert math.isclose(
        window.present_value, value_at(eta, 0.0) + fs.base(1.0), abs_tol=1e-12
    )
