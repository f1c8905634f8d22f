import numpy as np
import pytest

from pathreg.paths import (
    Grid,
    SampledPath,
    Trajectory,
    join,
    make_path,
    read_path_csv,
    restrict,
    shift_future,
    shift_past,
    split,
    value_at,
    values_at,
    window_at,
)


def test_grid():
    grid = Grid.window(2.0, 5)
    assert grid.spacing == 0.5
    assert grid.length == 2.0
    assert np.allclose(grid.points, [-2.0, -1.5, -1.0, -0.5, 0.0])
    assert grid.refined(2).n_points == 9
    assert Grid.from_dict(grid.to_dict()) == grid

    with pytest.raises(ValueError):
        Grid(0.0, 0.0, 3)
    with pytest.raises(ValueError):
        Grid(-1.0, 0.0, 1)


def test_sampled_path_validation(coarse_grid):
    with pytest.raises(ValueError):
        SampledPath(coarse_grid, np.zeros(3))
    values = np.zeros(coarse_grid.n_points)
    values[4] = np.nan
    with pytest.raises(ValueError):
        SampledPath(coarse_grid, values)
    with pytest.raises(ValueError):
        SampledPath(coarse_grid, np.zeros(coarse_grid.n_points), present=np.inf)


def test_value_at(coarse_grid):
    p = make_path("linear", coarse_grid)
    assert value_at(p, -0.5) == pytest.approx(-0.5)
    assert value_at(p, -2.0) == -1.0
    assert value_at(p, 0.0) == 0.0

    q = make_path("linear", coarse_grid, present=3.0)
    assert q.has_jump
    assert value_at(q, 0.0) == 3.0
    assert value_at(q, 1.0) == 3.0
    assert q.past_at(0.0) == 0.0

    with pytest.raises(ValueError):
        value_at(p, np.nan)


def test_value_at_extension(coarse_grid, rng):
    for name in ["constant", "linear", "sine", "brownian"]:
        p = make_path(name, coarse_grid, present=2.5)
        left = rng.uniform(-10.0, -1.0, size=1000)
        right = rng.uniform(0.0, 10.0, size=1000)
        assert np.all(values_at(p, left) == p.values[0])
        assert np.all(values_at(p, right) == 2.5)


def test_window_at():
    grid = Grid.window(1.0, 11)
    tr = Trajectory([0.0, 2.0], [0.0, 2.0])

    w = window_at(tr, 1.0, 1.0, grid)
    assert np.allclose(w.values, 1.0 + grid.points)

    w = window_at(tr, 0.5, 1.0, grid)
    assert np.allclose(w.values, np.maximum(0.5 + grid.points, 0.0))
    assert value_at(w, 0.0) == pytest.approx(tr(0.5))

    bm = make_path("brownian", Grid(0.0, 1.0, 101), seed=3)
    tr = Trajectory(bm.grid.points, bm.values)
    w = window_at(tr, 0.0, 1.0, grid)
    assert np.all(w.values == bm.values[0])

    with pytest.raises(ValueError):
        window_at(tr, -0.1, 1.0, grid)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory([], [])
    with pytest.raises(ValueError):
        Trajectory([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        Trajectory([0.0, 1.0], [1.0])


def test_shift_past(coarse_grid):
    p = make_path("linear", coarse_grid)
    assert shift_past(p, 0.0) is p

    q = shift_past(p, 0.25)
    assert np.allclose(q.values, np.maximum(coarse_grid.points - 0.25, -1.0))
    assert q.present_value == 0.0

    c = make_path("constant", coarse_grid, value=2.0)
    assert shift_past(c, 0.3) == c

    with pytest.raises(ValueError):
        shift_past(p, -0.1)


def test_shift_past_contraction(coarse_grid):
    for seed in range(5):
        p = make_path("brownian", coarse_grid, seed=seed)
        for eps in [0.01, 0.1, 0.5]:
            assert shift_past(p, eps).sup_norm() <= p.sup_norm()


def test_shift_future(coarse_grid):
    p = make_path("linear", coarse_grid, present=1.0)
    q = shift_future(p, 0.25)
    x = coarse_grid.points
    assert np.allclose(q.values, np.where(x + 0.25 >= 0.0, 1.0, x + 0.25))
    assert q.present_value == 1.0


def test_split_join(coarse_grid):
    for present in [None, 5.0]:
        p = make_path("sine", coarse_grid, present=present)
        past, a = split(p)
        assert join(past, a) == p

    zero = SampledPath(coarse_grid, np.zeros(coarse_grid.n_points))
    p = join(zero, 5.0)
    assert np.all(p.values == 0.0)
    assert p.present_value == 5.0

    past, a = split(make_path("linear", coarse_grid))
    assert a == 0.0
    assert np.allclose(past.values, coarse_grid.points)

    with pytest.raises(ValueError):
        join(zero, 1.0, grid=Grid.window(1.0, 3))


def test_restrict(coarse_grid):
    p = make_path("linear", coarse_grid, present=2.0)
    q = restrict(p, -0.5)
    assert q.grid.t_min == -0.5
    assert q.grid.spacing == pytest.approx(coarse_grid.spacing)
    assert np.allclose(q.values, q.grid.points)
    assert q.present_value == 2.0


def test_make_path(coarse_grid):
    p = make_path("linear", coarse_grid, offset=1.0, slope=2.0)
    assert np.allclose(p.values, 1.0 + 2.0 * coarse_grid.points)

    b1 = make_path("brownian", coarse_grid, seed=7)
    b2 = make_path("brownian", coarse_grid, seed=7)
    assert b1 == b2
    assert b1.values[0] == 0.0

    with pytest.raises(ValueError):
        make_path("unknown", coarse_grid)
    with pytest.raises(ValueError):
        make_path("csv", coarse_grid)


def test_read_path_csv(shared_datadir):
    p = read_path_csv(shared_datadir / "path_square.csv")
    assert p.grid == Grid.window(1.0, 65)
    assert np.allclose(p.values, p.grid.points**2)

    q = make_path("csv", p.grid, path=shared_datadir / "path_square.csv", present=1.0)
    assert q.present_value == 1.0

    with pytest.raises(FileNotFoundError):
        read_path_csv(shared_datadir / "missing.csv")


def test_sampled_path_io(coarse_grid):
    p = make_path("sine", coarse_grid, present=1.5)
    assert SampledPath.from_dict(p.to_dict()) == p
    q = p.with_values(p.values + 1.0, present=1.5)
    assert p.distance(q) == pytest.approx(1.0)
