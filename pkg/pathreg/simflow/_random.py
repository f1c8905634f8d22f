"""Per-path random streams and block-parallel path simulation"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from ._SimConfig import SimConfig


def path_rng(seed: int, index: int) -> np.random.Generator:
    """Random generator of path `index`, independent of block layout"""
    return np.random.default_rng([seed, index])


def split_blocks(n_paths: int, block_size: int) -> list[tuple[int, int]]:
    """Path index ranges ``(start, stop)`` of consecutive blocks"""
    return [
        (start, min(start + block_size, n_paths))
        for start in range(0, n_paths, block_size)
    ]


def map_blocks(
    func: Callable[[int, int], np.ndarray],
    n_paths: int,
    block_size: int = 1024,
    n_workers: int = 1,
) -> np.ndarray:
    """Apply ``func(start, stop)`` to each path block and concatenate the
    results in block order

    Blocks run on a thread pool when ``n_workers > 1``. Because each path
    draws from its own generator, the result does not depend on
    `block_size` or `n_workers`.
    """
    blocks = split_blocks(n_paths, block_size)
    if n_workers == 1 or len(blocks) == 1:
        outs = [func(start, stop) for start, stop in blocks]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            outs = list(ex.map(lambda b: func(*b), blocks))
    return np.concatenate(outs, axis=0)


def gaussian_increments(
    seed: int, start: int, stop: int, dt: np.ndarray
) -> np.ndarray:
    """Brownian increments over steps `dt` for paths ``start, ..., stop-1``

    Returns shape ``(stop - start, len(dt))``.
    """
    dt = np.asarray(dt, dtype=float)
    scale = np.sqrt(dt)
    out = np.empty((stop - start, dt.size))
    for row, i in enumerate(range(start, stop)):
        out[row] = path_rng(seed, i).standard_normal(dt.size) * scale
    return out


def brownian_paths(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Brownian paths started at 0 on a uniform grid of ``[0, T]``

    Returns
    -------
    (times, W): tuple[numpy.ndarray, numpy.ndarray]
        Times, shape ``(n_steps + 1,)``, and paths, shape
        ``(n_paths, n_steps + 1)``.
    """
    times = np.linspace(0.0, cfg.T, cfg.n_steps + 1)
    dt = np.diff(times)

    def _block(start, stop):
        incr = gaussian_increments(cfg.seed, start, stop, dt)
        W = np.zeros((stop - start, cfg.n_steps + 1))
        np.cumsum(incr, axis=1, out=W[:, 1:])
        return W

    W = map_blocks(_block, cfg.n_paths, cfg.block_size, cfg.n_workers)
    return (times, W)
