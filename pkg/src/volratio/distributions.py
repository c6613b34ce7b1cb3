"""The seven candidate distribution families for positive ratio data.

Each family provides log-density, density, CDF, seeded sampling and first
moments (where they exist). Densities are computed in log space throughout:
shape parameters in the tens make linear-space evaluation overflow-prone.

Parameter conventions:

* ``BetaPrimeParams(p, q, beta)`` -- density proportional to
  ``(x/beta)^(p-1) * (1 + x/beta)^(-p-q)``; power law ``x^(p-1)`` below the
  scale and fat tail ``x^(-q-1)`` above it. The family is closed under
  reciprocals: ``1/X ~ BetaPrime(q, p, 1/beta)``.
* ``GammaParams(k, theta)`` -- density proportional to ``x^(k-1) exp(-x/theta)``.
* ``InverseGammaParams(alpha, betascale)`` -- density proportional to
  ``x^(-alpha-1) exp(-betascale/x)``; the law of ``1/X`` for
  ``X ~ Gamma(alpha, 1/betascale)``.
* ``WeibullParams(kshape, lam)`` -- CDF ``1 - exp(-(x/lam)^kshape)``.
* ``InverseGaussianParams(mu, lam)`` -- Wald distribution with mean ``mu``
  and shape ``lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from .special import (
    log_beta,
    log_gamma,
    norm_cdf,
    norm_log_cdf,
    reg_inc_beta,
    reg_inc_gamma_lower,
)

__all__ = [
    "FAMILY_ORDER",
    "POSITIVE_FAMILIES",
    "NormalParams",
    "LogNormalParams",
    "InverseGammaParams",
    "GammaParams",
    "WeibullParams",
    "InverseGaussianParams",
    "BetaPrimeParams",
    "Params",
    "DistributionSpec",
    "make_spec",
    "logpdf",
    "pdf",
    "cdf",
    "sample",
    "dist_mean",
    "bp_logpdf",
    "bp_cdf",
    "bp_sample",
    "bp_mean",
    "bp_tail_exponents",
    "bp_invert_params",
    "invert_spec",
]

#: Canonical family order used by every report table.
FAMILY_ORDER = (
    "normal",
    "lognormal",
    "invgamma",
    "gamma",
    "weibull",
    "invgauss",
    "betaprime",
)

#: Families whose support is the positive half-line.
POSITIVE_FAMILIES = frozenset(FAMILY_ORDER) - {"normal"}

_NEG_INF = float("-inf")
_LN_2PI = math.log(2.0 * math.pi)


def _require_positive(name: str, **values: float) -> None:
    for key, val in values.items():
        if not math.isfinite(val) or val <= 0.0:
            raise ValueError(f"{name}: parameter {key} must be positive and finite, got {val!r}")


@dataclass(frozen=True)
class NormalParams:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.mu):
            raise ValueError(f"normal: mu must be finite, got {self.mu!r}")
        _require_positive("normal", sigma=self.sigma)


@dataclass(frozen=True)
class LogNormalParams:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.mu):
            raise ValueError(f"lognormal: mu must be finite, got {self.mu!r}")
        _require_positive("lognormal", sigma=self.sigma)


@dataclass(frozen=True)
class InverseGammaParams:
    alpha: float
    betascale: float

    def __post_init__(self) -> None:
        _require_positive("invgamma", alpha=self.alpha, betascale=self.betascale)


@dataclass(frozen=True)
class GammaParams:
    k: float
    theta: float

    def __post_init__(self) -> None:
        _require_positive("gamma", k=self.k, theta=self.theta)


@dataclass(frozen=True)
class WeibullParams:
    kshape: float
    lam: float

    def __post_init__(self) -> None:
        _require_positive("weibull", kshape=self.kshape, lam=self.lam)


@dataclass(frozen=True)
class InverseGaussianParams:
    mu: float
    lam: float

    def __post_init__(self) -> None:
        _require_positive("invgauss", mu=self.mu, lam=self.lam)


@dataclass(frozen=True)
class BetaPrimeParams:
    p: float
    q: float
    beta: float

    def __post_init__(self) -> None:
        _require_positive("betaprime", p=self.p, q=self.q, beta=self.beta)


Params = Union[
    NormalParams,
    LogNormalParams,
    InverseGammaParams,
    GammaParams,
    WeibullParams,
    InverseGaussianParams,
    BetaPrimeParams,
]

_PARAM_TYPES = {
    "normal": NormalParams,
    "lognormal": LogNormalParams,
    "invgamma": InverseGammaParams,
    "gamma": GammaParams,
    "weibull": WeibullParams,
    "invgauss": InverseGaussianParams,
    "betaprime": BetaPrimeParams,
}

_FAMILY_OF_TYPE = {cls: fam for fam, cls in _PARAM_TYPES.items()}


@dataclass(frozen=True)
class DistributionSpec:
    """A family tag plus its parameter record; the two must agree."""

    family: str
    params: Params

    def __post_init__(self) -> None:
        expected = _PARAM_TYPES.get(self.family)
        if expected is None:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILY_ORDER}")
        if not isinstance(self.params, expected):
            raise ValueError(
                f"family {self.family!r} requires {expected.__name__}, "
                f"got {type(self.params).__name__}"
            )

    def param_values(self) -> tuple[float, ...]:
        return tuple(getattr(self.params, f.name) for f in fields(self.params))


def make_spec(family: str, *values: float) -> DistributionSpec:
    """Build a DistributionSpec from a family tag and raw parameter values."""
    cls = _PARAM_TYPES.get(family)
    if cls is None:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILY_ORDER}")
    try:
        params = cls(*values)
    except TypeError:
        arity = len(cls.__dataclass_fields__)
        raise ValueError(
            f"family {family!r} takes {arity} parameters, got {len(values)}"
        ) from None
    return DistributionSpec(family, params)


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _restore(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


# --- log densities (vectorized over x) ----------------------------------------


def _normal_logpdf(par: NormalParams, x: np.ndarray) -> np.ndarray:
    z = (x - par.mu) / par.sigma
    return -0.5 * z * z - math.log(par.sigma) - 0.5 * _LN_2PI


def _positive_mask_logpdf(x: np.ndarray, inner) -> np.ndarray:
    """Evaluate inner(x) on x > 0 and return -inf elsewhere (x = 0 included)."""
    out = np.full(x.shape, _NEG_INF)
    mask = x > 0.0
    if mask.any():
        out[mask] = inner(x[mask])
    return out


def _lognormal_logpdf(par: LogNormalParams, x: np.ndarray) -> np.ndarray:
    def inner(xp):
        lx = np.log(xp)
        z = (lx - par.mu) / par.sigma
        return -0.5 * z * z - lx - math.log(par.sigma) - 0.5 * _LN_2PI

    return _positive_mask_logpdf(x, inner)


def _gamma_logpdf(par: GammaParams, x: np.ndarray) -> np.ndarray:
    lg = log_gamma(par.k)

    def inner(xp):
        return (par.k - 1.0) * np.log(xp) - xp / par.theta - par.k * math.log(par.theta) - lg

    return _positive_mask_logpdf(x, inner)


def _invgamma_logpdf(par: InverseGammaParams, x: np.ndarray) -> np.ndarray:
    lg = log_gamma(par.alpha)

    def inner(xp):
        return (
            par.alpha * math.log(par.betascale)
            - (par.alpha + 1.0) * np.log(xp)
            - par.betascale / xp
            - lg
        )

    return _positive_mask_logpdf(x, inner)


def _weibull_logpdf(par: WeibullParams, x: np.ndarray) -> np.ndarray:
    k, lam = par.kshape, par.lam

    def inner(xp):
        z = xp / lam
        return math.log(k / lam) + (k - 1.0) * np.log(z) - z**k

    return _positive_mask_logpdf(x, inner)


def _invgauss_logpdf(par: InverseGaussianParams, x: np.ndarray) -> np.ndarray:
    mu, lam = par.mu, par.lam

    def inner(xp):
        return (
            0.5 * math.log(lam)
            - 0.5 * _LN_2PI
            - 1.5 * np.log(xp)
            - lam * (xp - mu) ** 2 / (2.0 * mu * mu * xp)
        )

    return _positive_mask_logpdf(x, inner)


def _betaprime_logpdf(par: BetaPrimeParams, x: np.ndarray) -> np.ndarray:
    p, q, beta = par.p, par.q, par.beta
    lb = log_beta(p, q)

    def inner(xp):
        z = xp / beta
        return (p - 1.0) * np.log(z) - (p + q) * np.log1p(z) - math.log(beta) - lb

    return _positive_mask_logpdf(x, inner)


_LOGPDF = {
    "normal": _normal_logpdf,
    "lognormal": _lognormal_logpdf,
    "invgamma": _invgamma_logpdf,
    "gamma": _gamma_logpdf,
    "weibull": _weibull_logpdf,
    "invgauss": _invgauss_logpdf,
    "betaprime": _betaprime_logpdf,
}


# --- CDFs (scalar kernels, vectorized wrapper) ---------------------------------


def _normal_cdf1(par: NormalParams, x: float) -> float:
    return norm_cdf((x - par.mu) / par.sigma)


def _lognormal_cdf1(par: LogNormalParams, x: float) -> float:
    if x <= 0.0:
        return 0.0
    return norm_cdf((math.log(x) - par.mu) / par.sigma)


def _gamma_cdf1(par: GammaParams, x: float) -> float:
    if x <= 0.0:
        return 0.0
    return reg_inc_gamma_lower(par.k, x / par.theta)


def _invgamma_cdf1(par: InverseGammaParams, x: float) -> float:
    if x <= 0.0:
        return 0.0
    return 1.0 - reg_inc_gamma_lower(par.alpha, par.betascale / x)


def _weibull_cdf1(par: WeibullParams, x: float) -> float:
    if x <= 0.0:
        return 0.0
    return -math.expm1(-((x / par.lam) ** par.kshape))


def _invgauss_cdf1(par: InverseGaussianParams, x: float) -> float:
    if x <= 0.0:
        return 0.0
    mu, lam = par.mu, par.lam
    s = math.sqrt(lam / x)
    # Two-term Phi expression; the second term is assembled in log space
    # because exp(2*lam/mu) alone can overflow.
    first = norm_cdf(s * (x / mu - 1.0))
    second = math.exp(2.0 * lam / mu + norm_log_cdf(-s * (x / mu + 1.0)))
    return min(1.0, first + second)


def _betaprime_cdf1(par: BetaPrimeParams, x: float) -> float:
    if x <= 0.0:
        return 0.0
    return reg_inc_beta(par.p, par.q, x / (x + par.beta))


_CDF1 = {
    "normal": _normal_cdf1,
    "lognormal": _lognormal_cdf1,
    "invgamma": _invgamma_cdf1,
    "gamma": _gamma_cdf1,
    "weibull": _weibull_cdf1,
    "invgauss": _invgauss_cdf1,
    "betaprime": _betaprime_cdf1,
}


# --- public evaluation surface --------------------------------------------------


def logpdf(spec: DistributionSpec, x):
    """Log density at x (scalar or array). -inf where the density is zero."""
    arr, scalar = _as_array(x)
    return _restore(_LOGPDF[spec.family](spec.params, arr), scalar)


def pdf(spec: DistributionSpec, x):
    """Density at x, computed as exp(logpdf)."""
    arr, scalar = _as_array(x)
    return _restore(np.exp(_LOGPDF[spec.family](spec.params, arr)), scalar)


def cdf(spec: DistributionSpec, x):
    """CDF at x (scalar or array)."""
    arr, scalar = _as_array(x)
    kernel = _CDF1[spec.family]
    out = np.fromiter((kernel(spec.params, float(v)) for v in arr), dtype=float, count=arr.size)
    return _restore(out.reshape(arr.shape), scalar)


# --- sampling -------------------------------------------------------------------


def _gamma_variates(rng: np.random.Generator, shape: float, n: int) -> np.ndarray:
    """Standard-gamma draws via the Marsaglia-Tsang squeeze, vectorized.

    Shapes below one use the boost G(a) = G(a+1) * U^(1/a).
    """
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    remaining = n
    filled = 0
    while remaining > 0:
        z = rng.standard_normal(remaining)
        u = rng.random(remaining)
        v = (1.0 + c * z) ** 3
        ok = v > 0.0
        # Squeeze test first, full log test on the rest.
        accept = ok & (np.log(u) < 0.5 * z * z + d * (1.0 - v + np.log(np.where(ok, v, 1.0))))
        accept |= ok & (u < 1.0 - 0.0331 * z**4)
        taken = int(accept.sum())
        if taken:
            out[filled : filled + taken] = d * v[accept]
            filled += taken
            remaining -= taken
    if boost:
        out *= rng.random(n) ** (1.0 / shape)
    return out


def _sample_normal(par: NormalParams, n: int, rng: np.random.Generator) -> np.ndarray:
    return par.mu + par.sigma * rng.standard_normal(n)


def _sample_lognormal(par: LogNormalParams, n: int, rng) -> np.ndarray:
    return np.exp(par.mu + par.sigma * rng.standard_normal(n))


def _sample_gamma(par: GammaParams, n: int, rng) -> np.ndarray:
    return par.theta * _gamma_variates(rng, par.k, n)


def _sample_invgamma(par: InverseGammaParams, n: int, rng) -> np.ndarray:
    return par.betascale / _gamma_variates(rng, par.alpha, n)


def _sample_weibull(par: WeibullParams, n: int, rng) -> np.ndarray:
    # Inverse transform; -log(U) is a unit exponential.
    return par.lam * (-np.log(rng.random(n))) ** (1.0 / par.kshape)


def _sample_invgauss(par: InverseGaussianParams, n: int, rng) -> np.ndarray:
    # Michael-Schucany-Haas transformation.
    mu, lam = par.mu, par.lam
    nu = rng.standard_normal(n) ** 2
    w = mu * nu
    x1 = mu + mu / (2.0 * lam) * (w - np.sqrt(w * (4.0 * lam + w)))
    u = rng.random(n)
    return np.where(u <= mu / (mu + x1), x1, mu * mu / x1)


def _sample_betaprime(par: BetaPrimeParams, n: int, rng) -> np.ndarray:
    gp = _gamma_variates(rng, par.p, n)
    gq = _gamma_variates(rng, par.q, n)
    return par.beta * gp / gq


_SAMPLE = {
    "normal": _sample_normal,
    "lognormal": _sample_lognormal,
    "invgamma": _sample_invgamma,
    "gamma": _sample_gamma,
    "weibull": _sample_weibull,
    "invgauss": _sample_invgauss,
    "betaprime": _sample_betaprime,
}


def sample(spec: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """n i.i.d. draws; deterministic for a fixed seed (private generator per call)."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return _SAMPLE[spec.family](spec.params, int(n), rng)


def dist_mean(spec: DistributionSpec) -> float:
    """First moment; raises where the family has none at these parameters."""
    par = spec.params
    if spec.family == "normal":
        return par.mu
    if spec.family == "lognormal":
        return math.exp(par.mu + 0.5 * par.sigma**2)
    if spec.family == "gamma":
        return par.k * par.theta
    if spec.family == "invgamma":
        if par.alpha <= 1.0:
            raise ValueError("invgamma mean undefined for alpha <= 1")
        return par.betascale / (par.alpha - 1.0)
    if spec.family == "weibull":
        return par.lam * math.exp(log_gamma(1.0 + 1.0 / par.kshape))
    if spec.family == "invgauss":
        return par.mu
    return bp_mean(par)


# --- Beta Prime specifics --------------------------------------------------------


def bp_logpdf(params: BetaPrimeParams, x):
    """Beta Prime log density; -inf for x <= 0."""
    arr, scalar = _as_array(x)
    return _restore(_betaprime_logpdf(params, arr), scalar)


def bp_cdf(params: BetaPrimeParams, x):
    """Beta Prime CDF: I_{x/(x+beta)}(p, q), 0 for x <= 0."""
    arr, scalar = _as_array(x)
    out = np.fromiter(
        (_betaprime_cdf1(params, float(v)) for v in arr), dtype=float, count=arr.size
    )
    return _restore(out.reshape(arr.shape), scalar)


def bp_sample(params: BetaPrimeParams, n: int, seed: int) -> np.ndarray:
    """Draws via beta * G_p / G_q with independent standard-gamma variates."""
    return sample(DistributionSpec("betaprime", params), n, seed)


def bp_mean(params: BetaPrimeParams) -> float:
    if params.q <= 1.0:
        raise ValueError("betaprime mean undefined for q <= 1")
    return params.beta * params.p / (params.q - 1.0)


def bp_tail_exponents(params: BetaPrimeParams) -> tuple[float, float]:
    """Power-law exponents: x^(p-1) at small x, x^(-q-1) in the tail."""
    return params.p - 1.0, -params.q - 1.0


def bp_invert_params(params: BetaPrimeParams) -> BetaPrimeParams:
    """Exact law of 1/X: shapes swap and the scale inverts."""
    return BetaPrimeParams(params.q, params.p, 1.0 / params.beta)


_INVERTIBLE_ERR = "no exact reciprocal law within the same family for {family!r}"


def invert_spec(spec: DistributionSpec) -> DistributionSpec:
    """Exact law of 1/X where the family is closed under reciprocals.

    BetaPrime(p,q,b) -> BetaPrime(q,p,1/b); LogNormal(m,s) -> LogNormal(-m,s);
    Gamma(k,t) -> InverseGamma(k,1/t) and back.
    """
    par = spec.params
    if spec.family == "betaprime":
        return DistributionSpec("betaprime", bp_invert_params(par))
    if spec.family == "lognormal":
        return DistributionSpec("lognormal", LogNormalParams(-par.mu, par.sigma))
    if spec.family == "gamma":
        return DistributionSpec("invgamma", InverseGammaParams(par.k, 1.0 / par.theta))
    if spec.family == "invgamma":
        return DistributionSpec("gamma", GammaParams(par.alpha, 1.0 / par.betascale))
    raise ValueError(_INVERTIBLE_ERR.format(family=spec.family))
