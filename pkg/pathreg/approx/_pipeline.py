import math
from typing import Optional

import numpy as np

from pathreg.funcder import BasisFunction, CylindricalFunctional, PathFunctional
from pathreg.paths import Grid, SampledPath
from pathreg.ppde import (
    GaussianCylModel,
    QuadratureRule,
    mc_cylindrical_price,
    mc_price,
    psi_eval,
)
from pathreg.regcalc import is_decreasing_trend
from pathreg.report import ReportEntry
from pathreg.simflow import SimConfig, flow_windows

from ._FejerOperator import FejerOperator
from ._methods import coordinate_matrix
from ._Mollifier import Mollifier
from ._smoothing import gaussian_smoothed

#: Paths per reconstruction chunk when evaluating ``g_n``
RECONSTRUCT_CHUNK = 4096

#: Columns of the rows reported by :func:`sv_convergence`
SV_COLUMNS = ["n", "eps", "k", "value", "se", "truncated", "reference", "gap"]


def _fejer_basis(op: FejerOperator, m: Mollifier) -> list[BasisFunction]:
    """Functions ``psi_{-1}, psi_0, ..., psi_n`` on ``[0, T]`` whose
    cylindrical coordinates at ``t = T`` are the Fejer coordinates with the
    mollified endpoint"""
    T = op.T
    e = op.basis
    a = [e.moment(i) / T for i in range(op.n + 1)]

    def _x(s):
        return np.asarray(s, dtype=float) - T

    basis = [
        BasisFunction(
            value=lambda s: m.antiderivative(_x(s)) / T,
            derivative=lambda s: m.value(_x(s)) / T,
            second=lambda s: m.derivative(_x(s)) / T,
            label="fejer_slope",
            data={"type": "fejer", "index": -1},
        )
    ]
    for i in range(op.n + 1):
        tilde0 = float(e.antiderivative(i, 0.0))
        basis.append(
            BasisFunction(
                value=lambda s, i=i, t0=tilde0: (
                    -a[i]
                    + t0
                    - e.antiderivative(i, _x(s))
                    + a[i] * (1.0 - m.antiderivative(_x(s)))
                ),
                derivative=lambda s, i=i: -e.value(i, _x(s)) - a[i] * m.value(_x(s)),
                second=lambda s, i=i: (
                    -e.derivative(i, _x(s)) - a[i] * m.derivative(_x(s))
                ),
                label=f"fejer_{i}",
                data={"type": "fejer", "index": i},
            )
        )
    return basis


class SmoothedFejerFunctional(CylindricalFunctional):
    """The smooth cylindrical approximation ``G_{n,eps,k}`` of a terminal
    functional ``G``

    The coordinates at ``t = T`` are the Fejer coordinates
    ``(x_{-1}, x_0, ..., x_n)`` of the path, with ``eta(-T)`` replaced by the
    mollified endpoint. The outer function is the Gaussian smoothing of
    ``g_n(y) = G(T, T_n eta)`` at bandwidth ``1 / k``, see
    :func:`gaussian_smoothed`, where ``T_n eta`` is reconstructed from ``y``
    on `grid`.

    .. rubric:: Constructor

    Parameters
    ----------
    G: PathFunctional
        Terminal functional.
    n: int
        Fejer order.
    eps: float
        Mollifier width, ``0 < eps <= T``.
    k: float
        Smoothing parameter; the kernel bandwidth is ``1 / k``.
    T: float = 1.0
        Horizon.
    grid: Optional[Grid] = None
        Reconstruction grid for ``T_n eta``. Defaults to
        ``max(257, 8 (n + 1) + 1)`` points on ``[-T, 0]``.
    """

    def __init__(
        self,
        G: PathFunctional,
        n: int,
        eps: float,
        k: float,
        T: float = 1.0,
        grid: Optional[Grid] = None,
    ):
        if not k > 0.0:
            raise ValueError(f"Error in SmoothedFejerFunctional: k={k} <= 0")
        self.G = G
        """PathFunctional: The approximated terminal functional"""

        self.n = int(n)
        self.eps = float(eps)
        self.k = float(k)

        self.operator = FejerOperator(n, T)
        """FejerOperator: The operator ``T_n``"""

        self.mollifier = Mollifier(eps, T)
        """Mollifier: Smoothed left-end evaluation"""

        if grid is None:
            grid = Grid.window(T, max(257, 8 * (self.n + 1) + 1))
        elif grid.t_max != 0.0 or not math.isclose(grid.length, T, rel_tol=1e-12):
            raise ValueError(
                f"Error in SmoothedFejerFunctional: grid must cover [-{T}, 0]"
            )
        self.grid = grid
        """Grid: Reconstruction grid of ``T_n eta``"""

        outer = gaussian_smoothed(
            self.unsmoothed,
            n_inputs=self.operator.n_coordinates,
            bandwidth=1.0 / self.k,
            label=f"{G.label}_n{self.n}",
        )
        super().__init__(
            outer=outer,
            basis=_fejer_basis(self.operator, self.mollifier),
            T=T,
            label=f"{G.label}[n={self.n},eps={self.eps:g},k={self.k:g}]",
            check_outer=False,
        )

    def unsmoothed(self, y: np.ndarray) -> np.ndarray:
        """``g_n(y) = G(T, T_n eta)`` for coordinates of shape ``(..., n + 2)``"""
        y = np.asarray(y, dtype=float)
        flat = y.reshape(-1, y.shape[-1])
        out = np.empty(flat.shape[0])
        for start in range(0, flat.shape[0], RECONSTRUCT_CHUNK):
            stop = start + RECONSTRUCT_CHUNK
            values = self.operator.reconstruct(flat[start:stop], self.grid)
            out[start:stop] = self.G.evaluate_many(self.T, self.grid, values)
        return out.reshape(y.shape[:-1])

    def to_dict(self):
        return {
            "G": self.G.label,
            "n": self.n,
            "eps": self.eps,
            "k": self.k,
            "T": self.T,
            "grid": self.grid.to_dict(),
        }


def build_Gnek(
    G: PathFunctional,
    n: int,
    eps: float,
    k: float,
    T: float = 1.0,
    grid: Optional[Grid] = None,
) -> SmoothedFejerFunctional:
    """Construct ``G_{n,eps,k}``, see :class:`SmoothedFejerFunctional`

    Raises
    ------
    ValueError
        If `G` has no growth certificate.
    """
    if G.growth_bound is None:
        raise ValueError(
            f"Error in build_Gnek: functional '{G.label}' has no growth certificate"
        )
    return SmoothedFejerFunctional(G, n, eps, k, T=T, grid=grid)


def diagonal_schedule(
    n_values: tuple[int, ...] = (8, 16, 32, 64),
) -> list[tuple[int, float, float]]:
    """The default ``(n, eps, k)`` schedule ``k = n**2``, ``eps = 1 / n``"""
    return [(int(n), 1.0 / n, float(n * n)) for n in n_values]


def sv_value(
    Gnek: SmoothedFejerFunctional,
    t: float,
    eta: SampledPath,
    quad: Optional[QuadratureRule] = None,
) -> tuple[float, float]:
    """``U_{n,eps,k}(t, eta) = E[G_{n,eps,k}(W_T^{t, eta})]``, the classical
    solution of the heat equation with terminal value ``G_{n,eps,k}``

    Parameters
    ----------
    Gnek: SmoothedFejerFunctional
        Output of :func:`build_Gnek`.
    t: float
        Time in ``[0, T]``.
    eta: SampledPath
        Path on ``[-T, 0]``.
    quad: Optional[QuadratureRule] = None
        Quadrature over the Gaussian coordinates. Defaults to Monte Carlo
        with 20000 samples.

    Returns
    -------
    (value, standard_error): tuple[float, float]
    """
    if quad is None:
        quad = QuadratureRule.monte_carlo(n_samples=20000, seed=0)
    model = GaussianCylModel(Gnek)
    return psi_eval(model, t, Gnek.coordinates(t, eta), quad=quad, return_se=True)


def _mean_se(samples: np.ndarray) -> tuple[float, float]:
    if samples.size < 2:
        return (float(samples[0]), math.inf)
    return (
        float(np.mean(samples)),
        float(np.std(samples, ddof=1) / math.sqrt(samples.size)),
    )


def sv_convergence(
    G: PathFunctional,
    t: float,
    eta: SampledPath,
    schedule: Optional[list[tuple[int, float, float]]] = None,
    cfg: Optional[SimConfig] = None,
    reference: Optional[float] = None,
    reference_se: float = 0.0,
    tolerance: float = 0.02,
    name: str = "approx.sv_convergence",
) -> ReportEntry:
    """Convergence of ``U_{n,eps,k}(t, eta)`` to ``E[G(W_T^{t, eta})]``

    Each schedule point is priced with :func:`mc_cylindrical_price` on the
    same Brownian paths. On those paths the truncated value
    ``E[G(T_n W_T^{t, eta})]``, with the exact left end and no smoothing, is
    computed as well; its distance to the reference is the truncation bias of
    ``T_n``, which decays like ``n**-0.5`` for Brownian paths.

    The entry gap is the raw gap ``|U_{n,eps,k} - reference|`` at the last
    schedule point, or infinite if the raw gaps do not decrease. It passes if
    the gap is at most `tolerance` plus the truncation bias at the last point
    plus 4 standard errors. The fit ``a + b / sqrt(n)`` of the values is
    reported in the details.

    Parameters
    ----------
    G: PathFunctional
        Terminal functional, with a growth certificate.
    t: float
        Anchor time.
    eta: SampledPath
        Anchor path on ``[-T, 0]``; ``T`` is ``cfg.T``.
    schedule: Optional[list[tuple[int, float, float]]] = None
        ``(n, eps, k)`` points. Defaults to :func:`diagonal_schedule`.
    cfg: Optional[SimConfig] = None
        Monte Carlo settings. Defaults to 512 steps and 20000 paths on
        ``[0, 1]``.
    reference: Optional[float] = None
        Known value of ``E[G(W_T^{t, eta})]``. If None, it is estimated with
        :func:`mc_price` using `cfg`.
    reference_se: float = 0.0
        Standard error of a given `reference`.
    tolerance: float = 0.02
        Allowed gap beyond the truncation bias and the sampling error.

    Returns
    -------
    entry: ReportEntry
        ``details["rows"]`` holds
        ``[n, eps, k, value, se, truncated, reference, gap]`` per schedule
        point.
    """
    if cfg is None:
        cfg = SimConfig(n_steps=512, n_paths=20000, T=1.0, seed=0)
    if schedule is None:
        schedule = diagonal_schedule()
    if len(schedule) < 2:
        raise ValueError("Error in sv_convergence: schedule needs 2 or more points")
    if G.growth_bound is None:
        raise ValueError(
            f"Error in sv_convergence: functional '{G.label}' has no growth "
            "certificate"
        )
    if reference is None:
        reference, reference_se = mc_price(G, t, eta, cfg)
        provenance = "monte-carlo"
    else:
        provenance = "closed-form"

    schedule = [(int(n), float(eps), float(k)) for n, eps, k in schedule]
    diagonal = schedule == diagonal_schedule(tuple(n for n, _, _ in schedule))
    window = Grid.window(cfg.T, cfg.n_steps + 1)
    paths = flow_windows(t, eta, window, cfg)
    rows = []
    for n, eps, k in schedule:
        Gnek = build_Gnek(G, n, eps, k, T=cfg.T)
        value, se = mc_cylindrical_price(Gnek, t, eta, cfg)
        truncated, _ = _mean_se(Gnek.unsmoothed(paths @ coordinate_matrix(n, window)))
        rows.append(
            [n, eps, k, value, se, truncated, reference, abs(value - reference)]
        )
    table = np.array(rows, dtype=float)
    gaps = table[:, 7]
    b, a = np.polyfit(1.0 / np.sqrt(table[:, 0]), table[:, 3], 1)
    decreasing = is_decreasing_trend(gaps)
    final_se = float(table[-1, 4])
    bias = abs(float(table[-1, 5]) - reference)
    return ReportEntry(
        name=name,
        value=float(table[-1, 3]),
        reference=float(reference),
        tolerance=tolerance + bias + 4.0 * math.hypot(final_se, reference_se),
        gap=float(gaps[-1]) if decreasing else math.inf,
        provenance=provenance,
        seed=cfg.seed,
        details={
            "rows": rows,
            "columns": SV_COLUMNS,
            "truncation_bias": bias,
            "extrapolated": float(a),
            "slope": float(b),
            "decreasing": decreasing,
            "diagonal": diagonal,
        },
    )
