import math
from typing import Optional

import numpy as np

from ._BSDEProblem import BSDEProblem
from ._SDECoeffs import SDECoeffs

SDE_SCENARIOS = ["brownian", "ou", "gbm", "abs_drift"]
TERMINALS = ["zero", "one", "identity", "abs", "square", "sin"]
GENERATORS = ["zero", "linear", "shift"]

DEFAULT_PARAMS = {
    "nu": 1.0,
    "theta": 1.0,
    "mu": 0.05,
    "r": 0.1,
    "c": 0.0,
    "k_rate": 0.0,
}


def _constant_sigma(nu: float, d: int):
    eye = nu * np.eye(d)

    def _sigma(t, x):
        return np.broadcast_to(eye, (x.shape[0], d, d))

    return _sigma


def _constant_rate(k: float):
    def _rate(t, x):
        return np.full(x.shape[0], k)

    return _rate


def make_sde(scenario: str, d: int = 1, params: Optional[dict] = None) -> SDECoeffs:
    """Forward coefficients of a named scenario

    .. code-block:: text

        brownian:   b = 0,          sigma = nu I
        ou:         b = -theta x,   sigma = nu I
        gbm:        b = mu x,       sigma = nu diag(x)
        abs_drift:  b = |x|,        sigma = nu I

    ``abs_drift`` applies ``|.|`` per coordinate and is not differentiable at
    0. Certificates are set from the parameters.
    """
    par = dict(DEFAULT_PARAMS)
    par.update(params or {})
    nu = float(par["nu"])
    data = {"scenario": scenario, "d": d, "nu": nu}
    if scenario == "brownian":
        return SDECoeffs(
            b=lambda t, x: np.zeros_like(x),
            sigma=_constant_sigma(nu, d),
            d=d,
            lipschitz_C=abs(nu) * math.sqrt(d),
            label=scenario,
            data=data,
        )
    if scenario == "ou":
        theta = float(par["theta"])
        data["theta"] = theta
        return SDECoeffs(
            b=lambda t, x: -theta * x,
            sigma=_constant_sigma(nu, d),
            d=d,
            lipschitz_C=max(abs(theta), abs(nu) * math.sqrt(d)),
            label=scenario,
            data=data,
        )
    if scenario == "gbm":
        mu = float(par["mu"])
        data["mu"] = mu
        return SDECoeffs(
            b=lambda t, x: mu * x,
            sigma=lambda t, x: nu * x[:, :, None] * np.eye(d)[None, :, :],
            d=d,
            lipschitz_C=abs(mu) + abs(nu),
            label=scenario,
            data=data,
        )
    if scenario == "abs_drift":
        return SDECoeffs(
            b=lambda t, x: np.abs(x),
            sigma=_constant_sigma(nu, d),
            d=d,
            lipschitz_C=max(1.0, abs(nu) * math.sqrt(d)),
            label=scenario,
            data=data,
        )
    raise ValueError(
        f"Error in make_sde: unknown scenario '{scenario}', "
        f"expected one of {SDE_SCENARIOS}"
    )


def make_terminal(name: str, d: int = 1):
    """Terminal function ``g`` and its growth certificate ``(C, m)``

    ``identity`` and ``sin`` act on the coordinate sum, ``abs`` and
    ``square`` on the Euclidean norm.
    """
    if name == "zero":
        return (lambda x: np.zeros(x.shape[0]), (0.0, 0.0))
    if name == "one":
        return (lambda x: np.ones(x.shape[0]), (1.0, 0.0))
    if name == "identity":
        return (lambda x: np.sum(x, axis=1), (math.sqrt(d), 1.0))
    if name == "abs":
        return (lambda x: np.linalg.norm(x, axis=1), (1.0, 1.0))
    if name == "square":
        return (lambda x: np.sum(x * x, axis=1), (1.0, 2.0))
    if name == "sin":
        return (lambda x: np.sin(np.sum(x, axis=1)), (1.0, 0.0))
    raise ValueError(
        f"Error in make_terminal: unknown terminal '{name}', "
        f"expected one of {TERMINALS}"
    )


def make_generator(name: str, params: Optional[dict] = None):
    """Generator ``f(t, x, y, z)`` and its Lipschitz certificate in ``(y, z)``

    .. code-block:: text

        zero:    f = 0
        linear:  f = -r y
        shift:   f = -c
    """
    par = dict(DEFAULT_PARAMS)
    par.update(params or {})
    if name == "zero":
        return (lambda t, x, y, z: np.zeros(x.shape[0]), 0.0)
    if name == "linear":
        r = float(par["r"])
        return (lambda t, x, y, z: -r * np.asarray(y, dtype=float), abs(r))
    if name == "shift":
        c = float(par["c"])
        return (lambda t, x, y, z: np.full(x.shape[0], -c), 0.0)
    raise ValueError(
        f"Error in make_generator: unknown generator '{name}', "
        f"expected one of {GENERATORS}"
    )


def make_problem(
    scenario: str = "brownian",
    terminal: str = "identity",
    generator: str = "zero",
    d: int = 1,
    params: Optional[dict] = None,
) -> BSDEProblem:
    """Build a :class:`BSDEProblem` from named parts

    Parameters
    ----------
    scenario: str = "brownian"
        One of :data:`SDE_SCENARIOS`.
    terminal: str = "identity"
        One of :data:`TERMINALS`.
    generator: str = "zero"
        One of :data:`GENERATORS`.
    d: int = 1
        State dimension, 1 to 3.
    params: Optional[dict] = None
        Overrides of :data:`DEFAULT_PARAMS`, plus optional ``"x0"`` and
        ``"t0"``. A positive ``"k_rate"`` gives ``dK = k_rate dt`` for the
        ``"super"`` and ``"sub"`` flavors.
    """
    par = dict(DEFAULT_PARAMS)
    par.update(params or {})
    coeffs = make_sde(scenario, d, par)
    g, growth = make_terminal(terminal, d)
    f, lipschitz = make_generator(generator, par)
    k = float(par["k_rate"])
    if k < 0.0:
        raise ValueError(f"Error in make_problem: k_rate={k} < 0")
    k_rate = _constant_rate(k) if k > 0.0 else None
    return BSDEProblem(
        coeffs=coeffs,
        generator=f,
        terminal=g,
        generator_lipschitz=lipschitz,
        growth_bound=growth,
        k_rate=k_rate,
        t0=float(par.get("t0", 0.0)),
        x0=par.get("x0"),
        label=f"{scenario}.{terminal}.{generator}",
        data={
            "scenario": scenario,
            "terminal": terminal,
            "generator": generator,
            "d": d,
            "params": {
                key: value
                for key, value in par.items()
                if key not in ("x0", "t0")
            },
        },
    )
