from typing import Callable

import numpy as np

from pathreg.funcder import OuterFunction

#: Function evaluations per block when smoothing a batch of inputs
SMOOTHING_BLOCK = 2**16


def axis_nodes(n_inputs: int) -> np.ndarray:
    """Nodes ``+- sqrt(N) e_i`` of the symmetric axis rule, shape ``(2 N, N)``

    With equal weights the nodes have mean 0 and second moment matrix ``I``
    exactly, so the rule integrates polynomials of degree 3 against the
    standard normal law on ``R^N`` without error.
    """
    if n_inputs < 1:
        raise ValueError(f"Error in axis_nodes: n_inputs={n_inputs} < 1")
    axes = np.sqrt(n_inputs) * np.eye(n_inputs)
    return np.concatenate([axes, -axes])


def gaussian_smoothed(
    func: Callable[[np.ndarray], np.ndarray],
    n_inputs: int,
    bandwidth: float,
    label: str = "smoothed",
) -> OuterFunction:
    """Gaussian-kernel smoothing ``g_h(y) = E[g(y + h Z)]`` of a vectorized
    function ``g``, by the axis rule

    With the step ``a = h sqrt(N)``, value and derivatives come from the same
    stencil of points ``y +- a e_i``:

    .. code-block:: text

        g_h(y)        = mean_i (g(y + a e_i) + g(y - a e_i)) / 2
        d_i g_h(y)    = (g(y + a e_i) - g(y - a e_i)) / (2 a)
        d_ij g_h(y)   = (d_j g_h(y + a e_i) - d_j g_h(y - a e_i)) / (2 a)

    The Hessian is symmetrized. The three agree exactly when ``g`` is a
    quadratic polynomial, where the value is the Gaussian convolution
    ``g(y) + h**2 tr(D^2 g) / 2``; for smooth ``g`` they agree to ``O(a**2)``.

    Parameters
    ----------
    func: Callable[[numpy.ndarray], numpy.ndarray]
        The function ``g``, mapping shape ``(..., N)`` to ``(...)``.
    n_inputs: int
        Input dimension ``N``.
    bandwidth: float
        Kernel bandwidth ``h > 0``.
    label: str = "smoothed"
        Description used in reports.
    """
    if not bandwidth > 0.0:
        raise ValueError(f"Error in gaussian_smoothed: bandwidth={bandwidth} <= 0")
    h = float(bandwidth)
    a = h * np.sqrt(n_inputs)
    shifts = h * axis_nodes(n_inputs)
    rows = max(SMOOTHING_BLOCK // shifts.shape[0], 1)

    def _stencil(y):
        """``g(y + h z)`` over the nodes, shape ``(..., 2 N)``"""
        y = np.asarray(y, dtype=float)
        flat = y.reshape(-1, n_inputs)
        out = np.empty((flat.shape[0], shifts.shape[0]))
        for start in range(0, flat.shape[0], rows):
            block = flat[start : start + rows]
            out[start : start + rows] = func(block[:, None, :] + shifts)
        return out.reshape(y.shape[:-1] + (shifts.shape[0],))

    def _value(y):
        return np.mean(_stencil(y), axis=-1)

    def _gradient(y):
        g = _stencil(y)
        return (g[..., :n_inputs] - g[..., n_inputs:]) / (2.0 * a)

    def _hessian(y):
        y = np.asarray(y, dtype=float)
        step = a * np.eye(n_inputs)
        up = _gradient(y[..., None, :] + step)
        down = _gradient(y[..., None, :] - step)
        H = (up - down) / (2.0 * a)
        return 0.5 * (H + np.swapaxes(H, -1, -2))

    return OuterFunction(
        value=_value,
        gradient=_gradient,
        hessian=_hessian,
        n_inputs=n_inputs,
        label=label,
        data={
            "type": "smoothed",
            "label": label,
            "bandwidth": h,
            "rule": "axis",
        },
    )
