import numpy as np
from scipy.integrate import quad_vec

from pathreg.funcder import CylindricalFunctional


class GaussianCylModel:
    """Gaussian law of the coordinates of a cylindrical functional under the
    stochastic flow

    Started from ``(t, eta)``, the terminal coordinates are
    ``x(t, eta) + int_t^T phi(s) dW_s``, a Gaussian vector with covariance

    .. code-block:: text

        Sigma_ij(t) = int_t^T phi_i(s) phi_j(s) ds

    .. rubric:: Constructor

    Parameters
    ----------
    c: CylindricalFunctional
        The terminal functional.
    epsabs: float = 1e-12
        Absolute tolerance of the adaptive quadrature of ``phi_i phi_j``.
    epsrel: float = 1e-10
        Relative tolerance of the adaptive quadrature.
    psd_tol: float = 1e-10
        Eigenvalues below ``-psd_tol * max|eigenvalue|`` make the covariance
        indefinite; eigenvalues below ``psd_tol * max eigenvalue`` are
        dropped from the factor.
    """

    def __init__(
        self,
        c: CylindricalFunctional,
        epsabs: float = 1e-12,
        epsrel: float = 1e-10,
        psd_tol: float = 1e-10,
    ):
        self.c = c
        """CylindricalFunctional: The terminal functional"""

        self.epsabs = epsabs
        self.epsrel = epsrel
        self.psd_tol = psd_tol

        self._cov_cache = {}
        self._factor_cache = {}

    @property
    def T(self) -> float:
        return self.c.T

    @property
    def n_inputs(self) -> int:
        return self.c.n_inputs

    def phi(self, t: float) -> np.ndarray:
        """Basis values ``phi(t)``, shape ``(N,)``"""
        return self.c.basis_values(t)

    def _check_t(self, t: float, caller: str):
        if not (0.0 <= t <= self.T):
            raise ValueError(f"Error in {caller}: t={t} outside [0, {self.T}]")

    def covariance(self, t: float) -> np.ndarray:
        """``Sigma(t)``, shape ``(N, N)``; ``Sigma(T) = 0``"""
        self._check_t(t, "GaussianCylModel.covariance")
        t = float(t)
        if t not in self._cov_cache:
            N = self.n_inputs
            if t == self.T:
                cov = np.zeros((N, N))
            else:
                cov, _ = quad_vec(
                    lambda s: np.outer(self.phi(s), self.phi(s)),
                    t,
                    self.T,
                    epsabs=self.epsabs,
                    epsrel=self.epsrel,
                )
                cov = 0.5 * (cov + cov.T)
            self._cov_cache[t] = cov
        return self._cov_cache[t]

    def factor(self, t: float) -> np.ndarray:
        """A factor ``A`` of shape ``(N, r)`` with ``A @ A.T = Sigma(t)``,
        ``r`` the numerical rank

        Raises
        ------
        numpy.linalg.LinAlgError
            If ``Sigma(t)`` is indefinite beyond `psd_tol`.
        """
        t = float(t)
        if t not in self._factor_cache:
            cov = self.covariance(t)
            lam, V = np.linalg.eigh(cov)
            scale = max(float(np.max(np.abs(lam))), np.finfo(float).tiny)
            if lam[0] < -self.psd_tol * scale:
                raise np.linalg.LinAlgError(
                    f"Error in GaussianCylModel.factor: covariance at t={t} is "
                    f"indefinite (smallest eigenvalue {lam[0]:.3g})"
                )
            keep = lam > self.psd_tol * scale
            self._factor_cache[t] = V[:, keep] * np.sqrt(lam[keep])[None, :]
        return self._factor_cache[t]

    def rank(self, t: float) -> int:
        return int(self.factor(t).shape[1])

    def is_nonincreasing(self, times: list[float], tol: float = 1e-12) -> bool:
        """Spot-check that ``Sigma(s) - Sigma(t)`` is positive semidefinite for
        consecutive ``s < t`` in `times`"""
        times = sorted(float(t) for t in times)
        for s, t in zip(times[:-1], times[1:]):
            lam = np.linalg.eigvalsh(self.covariance(s) - self.covariance(t))
            if lam[0] < -tol:
                return False
        return True
