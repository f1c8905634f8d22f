import numpy as np

from pathreg.report.json_io import pretty_json


class ItoResidual:
    """Pathwise terms of the functional Ito formula

    .. rubric:: Constructor

    Parameters
    ----------
    times: numpy.ndarray
        Times ``s_k``.
    lhs: numpy.ndarray
        ``u(s_k, X_{s_k})``, with ``X_s`` the window at time ``s``.
    drift_term: numpy.ndarray
        ``int_0^s d_t u dr``.
    horizontal_term: numpy.ndarray
        ``int_0^s D^H u dr``.
    forward_term: numpy.ndarray
        ``int_0^s D^V u d-X`` at fixed eps.
    qv_term: numpy.ndarray
        ``1/2 int_0^s D^VV u d[X]`` at fixed eps.
    eps: float
        Regularization parameter.
    converged: bool = True
        False if a numerical derivative did not converge at some time.
    """

    def __init__(
        self,
        times: np.ndarray,
        lhs: np.ndarray,
        drift_term: np.ndarray,
        horizontal_term: np.ndarray,
        forward_term: np.ndarray,
        qv_term: np.ndarray,
        eps: float,
        converged: bool = True,
    ):
        self.times = np.asarray(times, dtype=float)
        self.lhs = np.asarray(lhs, dtype=float)
        self.drift_term = np.asarray(drift_term, dtype=float)
        self.horizontal_term = np.asarray(horizontal_term, dtype=float)
        self.forward_term = np.asarray(forward_term, dtype=float)
        self.qv_term = np.asarray(qv_term, dtype=float)
        self.eps = float(eps)
        self.converged = bool(converged)

        self.residual = self.lhs - (
            self.lhs[0]
            + self.drift_term
            + self.horizontal_term
            + self.forward_term
            + self.qv_term
        )
        """numpy.ndarray: ``lhs - (lhs[0] + sum of the four terms)``"""

    @property
    def sup_residual(self) -> float:
        """float: ``max |residual|``"""
        return float(np.max(np.abs(self.residual)))

    COLUMNS = ["time", "lhs", "drift", "horizontal", "forward", "qv", "residual"]

    def rows(self) -> np.ndarray:
        """Table with :attr:`COLUMNS`, one row per time"""
        return np.column_stack(
            [
                self.times,
                self.lhs,
                self.drift_term,
                self.horizontal_term,
                self.forward_term,
                self.qv_term,
                self.residual,
            ]
        )

    def to_dict(self):
        return {
            "eps": self.eps,
            "sup_residual": self.sup_residual,
            "converged": self.converged,
            "n_times": int(self.times.size),
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
