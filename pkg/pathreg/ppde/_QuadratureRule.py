import functools
import math

import numpy as np

from pathreg.report.json_io import pretty_json

QUADRATURE_KINDS = ["gauss-hermite", "monte-carlo"]


class QuadratureRule:
    """Nodes and weights for expectations under a standard normal law

    .. rubric:: Constructor

    Parameters
    ----------
    kind: str = "gauss-hermite"
        ``"gauss-hermite"`` (tensor product rule) or ``"monte-carlo"``.
    order: int = 20
        Number of Gauss-Hermite nodes per dimension.
    n_samples: int = 100000
        Number of Monte Carlo samples.
    seed: int = 0
        Monte Carlo seed.
    """

    def __init__(
        self,
        kind: str = "gauss-hermite",
        order: int = 20,
        n_samples: int = 100000,
        seed: int = 0,
    ):
        if kind not in QUADRATURE_KINDS:
            raise ValueError(
                f"Error in QuadratureRule: kind={kind!r}, "
                f"expected one of {QUADRATURE_KINDS}"
            )
        if order < 1 or n_samples < 2:
            raise ValueError("Error in QuadratureRule: order >= 1, n_samples >= 2")

        self.kind = kind
        """str: ``"gauss-hermite"`` or ``"monte-carlo"``"""

        self.order = int(order)
        """int: Gauss-Hermite nodes per dimension"""

        self.n_samples = int(n_samples)
        """int: Monte Carlo sample count"""

        self.seed = int(seed)
        """int: Monte Carlo seed"""

        self._nodes_cache = {}

    @staticmethod
    def gauss_hermite(order: int = 20):
        return QuadratureRule(kind="gauss-hermite", order=order)

    @staticmethod
    def monte_carlo(n_samples: int = 100000, seed: int = 0):
        return QuadratureRule(kind="monte-carlo", n_samples=n_samples, seed=seed)

    @property
    def is_random(self) -> bool:
        return self.kind == "monte-carlo"

    def nodes(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``z`` of shape ``(n, dim)`` and weights ``w`` of shape
        ``(n,)``, with ``sum(w) = 1``

        ``E[h(Z)]`` for ``Z ~ N(0, I_dim)`` is approximated by
        ``w @ h(z)``.
        """
        if dim not in self._nodes_cache:
            self._nodes_cache[dim] = self._make_nodes(dim)
        return self._nodes_cache[dim]

    def _make_nodes(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        if dim == 0:
            return (np.zeros((1, 0)), np.ones(1))
        if self.kind == "gauss-hermite":
            x, w = np.polynomial.hermite.hermgauss(self.order)
            z1 = math.sqrt(2.0) * x
            w1 = w / math.sqrt(math.pi)
            mesh = np.meshgrid(*([z1] * dim), indexing="ij")
            z = np.stack([m.ravel() for m in mesh], axis=-1)
            weights = functools.reduce(np.multiply.outer, [w1] * dim).ravel()
            return (z, weights)
        rng = np.random.default_rng([self.seed, dim])
        z = rng.standard_normal((self.n_samples, dim))
        return (z, np.full(self.n_samples, 1.0 / self.n_samples))

    def standard_error(self, samples: np.ndarray) -> float:
        """Standard error of the mean of `samples` along axis 0; 0 for
        deterministic rules"""
        if not self.is_random:
            return 0.0
        samples = np.asarray(samples, dtype=float)
        return float(np.std(samples, axis=0, ddof=1) / math.sqrt(samples.shape[0]))

    @staticmethod
    def from_dict(data: dict):
        return QuadratureRule(
            kind=data.get("kind", "gauss-hermite"),
            order=data.get("order", 20),
            n_samples=data.get("n_samples", 100000),
            seed=data.get("seed", 0),
        )

    def to_dict(self):
        if self.kind == "gauss-hermite":
            return {"kind": self.kind, "order": self.order}
        return {"kind": self.kind, "n_samples": self.n_samples, "seed": self.seed}

    def __repr__(self):
        return pretty_json(self.to_dict())
