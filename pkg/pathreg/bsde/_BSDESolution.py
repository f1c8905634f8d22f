import numpy as np

from pathreg.report.json_io import pretty_json

from ._EulerSample import EulerSample


class BSDESolution:
    """Discrete solution ``(Y, Z, K)`` of a :class:`BSDEProblem`

    .. rubric:: Constructor

    Parameters
    ----------
    sample: EulerSample
        The forward paths.
    Y: numpy.ndarray
        Shape ``(n_paths, m + 1)``.
    Z: numpy.ndarray
        Shape ``(n_paths, m, d)``; ``Z[:, i]`` is the value on step
        ``[t_i, t_{i+1})``.
    K: numpy.ndarray
        Shape ``(n_paths, m + 1)``, with ``K[:, 0] = 0``.
    flavor: str
        One of ``"exact"``, ``"super"``, ``"sub"``.
    y0_se: float
        Standard error of ``Y[:, 0]`` as a Monte Carlo mean.
    degrees: list[int]
        Regression degree used at each step.
    """

    def __init__(
        self,
        sample: EulerSample,
        Y: np.ndarray,
        Z: np.ndarray,
        K: np.ndarray,
        flavor: str,
        y0_se: float,
        degrees: list[int],
    ):
        self.sample = sample
        self.Y = Y
        self.Z = Z
        self.K = K
        self.flavor = flavor
        self.y0_se = float(y0_se)
        self.degrees = list(degrees)

    @property
    def times(self) -> np.ndarray:
        return self.sample.times

    @property
    def y0(self) -> float:
        """``Y_{t0}``"""
        return float(np.mean(self.Y[:, 0]))

    def to_dict(self):
        """Summary, without the path arrays"""
        return {
            "flavor": self.flavor,
            "n_paths": self.sample.n_paths,
            "n_steps": self.times.size - 1,
            "y0": self.y0,
            "y0_se": self.y0_se,
            "min_degree": min(self.degrees) if self.degrees else None,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
