import numpy as np


class EulerSample:
    """Euler-Maruyama trajectories and their Brownian increments

    .. rubric:: Constructor

    Parameters
    ----------
    times: numpy.ndarray
        Time grid, shape ``(m + 1,)``.
    X: numpy.ndarray
        States, shape ``(n_paths, m + 1, d)``.
    dW: numpy.ndarray
        Brownian increments, shape ``(n_paths, m, d)``.
    """

    def __init__(self, times: np.ndarray, X: np.ndarray, dW: np.ndarray):
        self.times = np.asarray(times, dtype=float)
        """numpy.ndarray: Time grid"""

        self.X = X
        """numpy.ndarray: States, shape ``(n_paths, m + 1, d)``"""

        self.dW = dW
        """numpy.ndarray: Brownian increments, shape ``(n_paths, m, d)``"""

    @property
    def n_paths(self) -> int:
        return self.X.shape[0]

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def terminal(self) -> np.ndarray:
        """``X_T``, shape ``(n_paths, d)``"""
        return self.X[:, -1, :]
