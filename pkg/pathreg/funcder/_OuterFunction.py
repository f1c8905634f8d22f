from typing import Callable, Optional

import numpy as np

from pathreg.report.json_io import pretty_json

OUTER_TYPES = ["linear", "quadratic", "exp", "sin"]


class OuterFunction:
    """A smooth map from R^N to R, with gradient and Hessian

    All three callables are vectorized over leading axes: for ``x`` of shape
    ``(..., N)``, `value` returns shape ``(...)``, `gradient` shape
    ``(..., N)`` and `hessian` shape ``(..., N, N)``.

    .. rubric:: Constructor

    Parameters
    ----------
    value: Callable
        The function.
    gradient: Callable
        Its gradient.
    hessian: Callable
        Its Hessian.
    n_inputs: int
        Input dimension ``N``.
    label: str = "outer"
        Description used in reports.
    data: Optional[dict] = None
        Parameters that :func:`from_dict` can rebuild the function from.
    """

    def __init__(
        self,
        value: Callable[[np.ndarray], np.ndarray],
        gradient: Callable[[np.ndarray], np.ndarray],
        hessian: Callable[[np.ndarray], np.ndarray],
        n_inputs: int,
        label: str = "outer",
        data: Optional[dict] = None,
    ):
        if n_inputs < 1:
            raise ValueError(f"Error in OuterFunction: n_inputs={n_inputs} < 1")
        self.value = value
        """Callable: The function"""

        self.gradient = gradient
        """Callable: Gradient"""

        self.hessian = hessian
        """Callable: Hessian"""

        self.n_inputs = int(n_inputs)
        """int: Input dimension"""

        self.label = label
        """str: Description used in reports"""

        self.data = data if data is not None else {"type": "custom", "label": label}
        """dict: Parameters for :func:`to_dict`"""

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=float))

    @property
    def is_linear(self) -> bool:
        return self.data.get("type") == "linear"

    def check_derivatives(self, x: np.ndarray, h: float = 1e-5) -> float:
        """Largest relative mismatch between the derivatives and central
        differences at `x`"""
        x = np.asarray(x, dtype=float)
        n = self.n_inputs
        grad_fd = np.zeros(n)
        hess_fd = np.zeros((n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            grad_fd[i] = (self.value(x + e) - self.value(x - e)) / (2.0 * h)
            hess_fd[i] = (self.gradient(x + e) - self.gradient(x - e)) / (2.0 * h)
        grad = self.gradient(x)
        hess = self.hessian(x)
        scale = 1.0 + max(np.max(np.abs(grad)), np.max(np.abs(hess)))
        return float(
            max(np.max(np.abs(grad - grad_fd)), np.max(np.abs(hess - hess_fd)))
            / scale
        )

    @staticmethod
    def linear(weights: list[float], constant: float = 0.0):
        """``w . x + c``"""
        w = np.asarray(weights, dtype=float)
        n = w.size
        return OuterFunction(
            value=lambda x: x @ w + constant,
            gradient=lambda x: np.broadcast_to(w, np.shape(x)).copy(),
            hessian=lambda x: np.zeros(np.shape(x)[:-1] + (n, n)),
            n_inputs=n,
            label="linear",
            data={"type": "linear", "weights": w.tolist(), "constant": constant},
        )

    @staticmethod
    def quadratic(
        matrix: list[list[float]],
        weights: Optional[list[float]] = None,
        constant: float = 0.0,
    ):
        """``x^T A x / 2 + w . x + c``, with `A` symmetrized"""
        A = np.asarray(matrix, dtype=float)
        A = 0.5 * (A + A.T)
        n = A.shape[0]
        w = np.zeros(n) if weights is None else np.asarray(weights, dtype=float)
        return OuterFunction(
            value=lambda x: 0.5 * np.einsum("...i,ij,...j->...", x, A, x)
            + x @ w
            + constant,
            gradient=lambda x: x @ A + w,
            hessian=lambda x: np.broadcast_to(A, np.shape(x)[:-1] + (n, n)).copy(),
            n_inputs=n,
            label="quadratic",
            data={
                "type": "quadratic",
                "matrix": A.tolist(),
                "weights": w.tolist(),
                "constant": constant,
            },
        )

    @staticmethod
    def square(n_inputs: int = 1):
        """``sum_i x_i**2``"""
        out = OuterFunction.quadratic(2.0 * np.eye(n_inputs))
        out.label = "square"
        return out

    @staticmethod
    def exp(weights: list[float]):
        """``exp(w . x)``"""
        w = np.asarray(weights, dtype=float)

        def _value(x):
            return np.exp(x @ w)

        return OuterFunction(
            value=_value,
            gradient=lambda x: _value(x)[..., None] * w,
            hessian=lambda x: _value(x)[..., None, None] * np.outer(w, w),
            n_inputs=w.size,
            label="exp",
            data={"type": "exp", "weights": w.tolist()},
        )

    @staticmethod
    def sin(weights: list[float]):
        """``sin(w . x)``"""
        w = np.asarray(weights, dtype=float)
        return OuterFunction(
            value=lambda x: np.sin(x @ w),
            gradient=lambda x: np.cos(x @ w)[..., None] * w,
            hessian=lambda x: -np.sin(x @ w)[..., None, None] * np.outer(w, w),
            n_inputs=w.size,
            label="sin",
            data={"type": "sin", "weights": w.tolist()},
        )

    @staticmethod
    def from_dict(data: dict):
        _type = data.get("type")
        if _type == "linear":
            return OuterFunction.linear(
                data["weights"], constant=data.get("constant", 0.0)
            )
        elif _type == "quadratic":
            return OuterFunction.quadratic(
                data["matrix"],
                weights=data.get("weights"),
                constant=data.get("constant", 0.0),
            )
        elif _type == "exp":
            return OuterFunction.exp(data["weights"])
        elif _type == "sin":
            return OuterFunction.sin(data["weights"])
        raise ValueError(
            f"Error in OuterFunction.from_dict: unknown type '{_type}'; "
            f"expected one of {OUTER_TYPES}"
        )

    def to_dict(self):
        return dict(self.data)

    def __repr__(self):
        return pretty_json(self.to_dict())
