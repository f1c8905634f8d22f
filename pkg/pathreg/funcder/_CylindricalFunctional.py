from typing import Optional

import numpy as np

from pathreg.paths import Grid, SampledPath

from ._BasisFunction import BasisFunction
from ._coordinates import window_weights
from ._OuterFunction import OuterFunction
from ._PathFunctional import DifferentiablePathFunctional


class CylindricalFunctional(DifferentiablePathFunctional):
    """Cylindrical functional ``g(x_1(t, eta), ..., x_N(t, eta))``

    The coordinates are the forward integrals
    ``x_i(t, eta) = int_[-t,0] phi_i(x + t) d-eta(x)``, evaluated in the
    integration by parts form

    .. code-block:: text

        x_i(t, eta) = eta(0) phi_i(t) - int_{-t}^0 eta(x) phi_i'(x + t) dx

    where ``eta(0)`` is the present value. At ``t = T`` this is the terminal
    functional ``G(eta)``.

    Horizontal, vertical and time derivatives, and the Frechet density at
    ``t = T``, are available in closed form.

    .. rubric:: Constructor

    Parameters
    ----------
    outer: OuterFunction
        The map ``g``.
    basis: list[BasisFunction]
        The functions ``phi_i`` on ``[0, T]``; ``len(basis)`` must equal
        ``outer.n_inputs``.
    T: float = 1.0
        Horizon.
    label: str = "cylindrical"
        Name used in reports.
    check_outer: bool = True
        If True, spot-check the outer derivatives against central
        differences.
    """

    def __init__(
        self,
        outer: OuterFunction,
        basis: list[BasisFunction],
        T: float = 1.0,
        label: str = "cylindrical",
        check_outer: bool = True,
    ):
        if len(basis) < 1:
            raise ValueError("Error in CylindricalFunctional: empty basis")
        if len(basis) != outer.n_inputs:
            raise ValueError(
                f"Error in CylindricalFunctional: {len(basis)} basis functions "
                f"for an outer function of {outer.n_inputs} inputs"
            )
        if not T > 0.0:
            raise ValueError(f"Error in CylindricalFunctional: T={T} <= 0")
        if check_outer:
            mismatch = outer.check_derivatives(np.full(outer.n_inputs, 0.1))
            if mismatch > 1e-4:
                raise ValueError(
                    "Error in CylindricalFunctional: outer derivatives do not "
                    f"match finite differences (relative mismatch {mismatch:.3g})"
                )

        self.outer = outer
        """OuterFunction: The map ``g``"""

        self.basis = list(basis)
        """list[BasisFunction]: The functions ``phi_i``"""

        self.T = float(T)
        """float: Horizon"""

        self._weights_cache = {}

        super().__init__(
            evaluator=self.value,
            label=label,
            dt=self.dt_closed,
            dh=self.dh_closed,
            dv=self.dv_closed,
            dvv=self.dvv_closed,
            frechet_density=self.frechet_density_closed,
            evaluate_many=self.value_many,
        )

    @property
    def n_inputs(self) -> int:
        return len(self.basis)

    def _check_t(self, t: float, caller: str):
        if not (0.0 <= t <= self.T):
            raise ValueError(f"Error in {caller}: t={t} outside [0, {self.T}]")

    def weights(self, t: float, grid: Grid, order: int) -> np.ndarray:
        """Weights of ``int_{-t}^0 eta(x) phi_i^(order)(x + t) dx``, cached"""
        key = (float(t), grid, order)
        if key not in self._weights_cache:
            if order == 1:
                funcs = [phi.derivative for phi in self.basis]
            elif order == 2:
                funcs = [phi.second for phi in self.basis]
            else:
                raise ValueError(f"Error in CylindricalFunctional.weights: {order=}")
            self._weights_cache[key] = window_weights(funcs, t, grid)
        return self._weights_cache[key]

    def basis_values(self, t: float) -> np.ndarray:
        return np.array([float(phi.value(np.float64(t))) for phi in self.basis])

    def basis_derivatives(self, t: float) -> np.ndarray:
        return np.array([float(phi.derivative(np.float64(t))) for phi in self.basis])

    def coordinates(self, t: float, eta: SampledPath) -> np.ndarray:
        """The coordinate vector ``x(t, eta)``"""
        self._check_t(t, "CylindricalFunctional.coordinates")
        W = self.weights(t, eta.grid, 1)
        return eta.present_value * self.basis_values(t) - W @ eta.values

    def coordinates_many(
        self,
        t: float,
        grid: Grid,
        values: np.ndarray,
        present: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        """Coordinates of many paths, shape ``(n_paths, N)``"""
        self._check_t(t, "CylindricalFunctional.coordinates_many")
        values = np.asarray(values, dtype=float)
        if present is None:
            present = values[:, -1]
        W = self.weights(t, grid, 1)
        return np.asarray(present)[:, None] * self.basis_values(t)[None, :] - (
            values @ W.T
        )

    def coordinate_drift(
        self, t: float, eta: SampledPath, use_present: bool = False
    ) -> np.ndarray:
        """Rate of change of the coordinates under a horizontal shift

        Returns ``B_i = eta(0) phi_i'(t) - eta(-t) phi_i'(0)
        - int_{-t}^0 eta(x) phi_i''(x + t) dx``, with ``eta(0)`` the left limit
        at 0, or the present value if `use_present`. The horizontal derivative
        of ``x_i`` is ``-B_i`` (left limit), the time derivative is ``B_i``
        (present value).
        """
        self._check_t(t, "CylindricalFunctional.coordinate_drift")
        W2 = self.weights(t, eta.grid, 2)
        head = eta.present_value if use_present else float(eta.values[-1])
        phi0 = np.array([float(phi.derivative(np.float64(0.0))) for phi in self.basis])
        return (
            head * self.basis_derivatives(t)
            - float(eta.past_at(-t)) * phi0
            - W2 @ eta.values
        )

    def value(self, t: float, eta: SampledPath) -> float:
        return float(self.outer.value(self.coordinates(t, eta)))

    def value_many(self, t, grid, values, present=None) -> np.ndarray:
        return self.outer.value(self.coordinates_many(t, grid, values, present))

    def dv_closed(self, t: float, eta: SampledPath) -> float:
        """``sum_i D_i g(x) phi_i(t)``"""
        grad = self.outer.gradient(self.coordinates(t, eta))
        return float(grad @ self.basis_values(t))

    def dvv_closed(self, t: float, eta: SampledPath) -> float:
        """``sum_ij D_ij g(x) phi_i(t) phi_j(t)``"""
        phi = self.basis_values(t)
        hess = self.outer.hessian(self.coordinates(t, eta))
        return float(phi @ hess @ phi)

    def dh_closed(self, t: float, eta: SampledPath) -> float:
        """``-sum_i D_i g(x) B_i`` with the left limit at 0"""
        grad = self.outer.gradient(self.coordinates(t, eta))
        return float(-grad @ self.coordinate_drift(t, eta))

    def dt_closed(self, t: float, eta: SampledPath) -> float:
        """``sum_i D_i g(x) B_i`` with the present value at 0"""
        grad = self.outer.gradient(self.coordinates(t, eta))
        return float(grad @ self.coordinate_drift(t, eta, use_present=True))

    def frechet_density_closed(self, eta: SampledPath) -> SampledPath:
        """Density ``-sum_i D_i g(x(T, eta)) phi_i'(x + T)`` on the grid of
        `eta`"""
        grad = self.outer.gradient(self.coordinates(self.T, eta))
        s = eta.grid.points + self.T
        density = -sum(g_i * phi.derivative(s) for g_i, phi in zip(grad, self.basis))
        return SampledPath(eta.grid, density)

    @staticmethod
    def from_dict(data: dict, T: Optional[float] = None):
        return CylindricalFunctional(
            outer=OuterFunction.from_dict(data["outer"]),
            basis=[BasisFunction.from_dict(x) for x in data["basis"]],
            T=T if T is not None else data.get("T", 1.0),
            label=data.get("label", "cylindrical"),
        )

    def to_dict(self):
        return {
            "outer": self.outer.to_dict(),
            "basis": [phi.to_dict() for phi in self.basis],
            "T": self.T,
            "label": self.label,
        }
