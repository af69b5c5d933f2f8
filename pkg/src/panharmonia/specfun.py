r"""Modified Bessel functions of half-integer order and mean-value coefficients.

For a :math:`\mu`-panharmonic function in :math:`\mathbb{R}^m`,

.. math::
    M^\circ(u, x, r) = a^\circ(\mu r)\,u(x), \qquad
    M^\bullet(u, x, r) = a^\bullet(\mu r)\,u(x),

with :math:`a^\circ(t) = \Gamma(m/2) I_{(m-2)/2}(t) / (t/2)^{(m-2)/2}` and
:math:`a^\bullet(t) = \Gamma(m/2+1) I_{m/2}(t) / (t/2)^{m/2}`.

Both coefficients are the confluent limit series
:math:`{}_0F_1(;\nu+1;t^2/4) = \sum_k \Gamma(\nu+1)(t^2/4)^k / (k!\,\Gamma(k+\nu+1))`
whose terms are all positive, so they are summed directly. Large arguments are
handled by carrying a binary exponent alongside the partial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

__all__ = [
    "DomainError",
    "HalfOrder",
    "CoeffKind",
    "half_gamma",
    "bessel_i",
    "coeff",
    "coeff_sphere_asymptotic",
    "poisson_integral_u",
    "unit_sphere_area",
    "unit_ball_volume",
]

_REL_STOP = 1e-17
_MIN_TERMS = 300
_RESCALE = 2.0**600
_RESCALE_INV = 2.0**-600
_LOG_RESCALE = 600 * math.log(2.0)
_LOG_DBL_MAX = math.log(np.finfo(float).max)


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


@dataclass(frozen=True)
class HalfOrder:
    """Bessel order :math:`\\nu = k/2` stored exactly as ``twice_order = k``."""

    twice_order: int

    def __post_init__(self):
        if int(self.twice_order) != self.twice_order or self.twice_order < 0:
            raise DomainError(f"twice_order must be a nonnegative integer, got {self.twice_order!r}")

    @property
    def nu(self) -> float:
        return self.twice_order / 2

    @classmethod
    def of(cls, nu) -> "HalfOrder":
        """Build from a float order, which must be a nonnegative multiple of 1/2."""
        if isinstance(nu, HalfOrder):
            return nu
        k = 2 * float(nu)
        if not math.isfinite(k) or k < 0 or k != round(k):
            raise DomainError(f"order must be a nonnegative half-integer, got {nu!r}")
        return cls(int(round(k)))

    def __str__(self):
        k = self.twice_order
        return str(k // 2) if k % 2 == 0 else f"{k}/2"


class CoeffKind(str, Enum):
    SPHERE = "sphere"
    BALL = "ball"
    RATIO = "ratio"


@lru_cache(maxsize=None)
def half_gamma(k: int) -> float:
    """:math:`\\Gamma(k/2)` for a positive integer ``k``, by the exact recursion."""
    if k <= 0:
        raise DomainError("Gamma(k/2) needs k >= 1")
    if k == 1:
        return math.sqrt(math.pi)
    if k == 2:
        return 1.0
    x = (k - 2) / 2
    return x * half_gamma(k - 2)


def unit_sphere_area(m: int) -> float:
    """:math:`\\omega_m = 2\\pi^{m/2}/\\Gamma(m/2)`."""
    return 2.0 * math.pi ** (m / 2) / half_gamma(m)


def unit_ball_volume(m: int) -> float:
    return unit_sphere_area(m) / m


def _as_array(z):
    arr = np.asarray(z, dtype=np.float64)
    return arr, arr.ndim == 0


def _log_series(order: HalfOrder, t: np.ndarray) -> np.ndarray:
    """Natural log of the normalized series ``0F1(; nu+1; t^2/4)`` elementwise.

    Summation for an element is finished once its next term drops below
    1e-17 of the partial sum. Such a term is below half an ulp, so the extra
    terms other elements in the same call keep adding leave it unchanged bit
    for bit: a value never depends on which arguments share the call.
    """
    nu = order.nu
    t = np.atleast_1d(t).ravel()
    q = 0.25 * t * t
    s = np.ones_like(q)
    c = np.ones_like(q)
    expo = np.zeros_like(q)
    cap = max(_MIN_TERMS, int(2 * float(t.max(initial=0.0))) + 60)
    k = 0
    while True:
        k += 1
        if k > cap:
            raise RuntimeError("Bessel series failed to converge")
        c *= q / (k * (k + nu))
        s += c
        if s.max(initial=0.0) > _RESCALE:
            big = s > _RESCALE
            s[big] *= _RESCALE_INV
            c[big] *= _RESCALE_INV
            expo[big] += 1
        if not (c >= _REL_STOP * s).any():
            break
    return np.log(s) + expo * _LOG_RESCALE


def _check_nonneg(t: np.ndarray, name: str):
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise DomainError(f"{name} must be finite and nonnegative")


def _finish(logv: np.ndarray, shape, scalar: bool):
    if np.any(logv > _LOG_DBL_MAX):
        raise OverflowError("result overflows double precision; request the scaled variant")
    out = np.exp(logv).reshape(shape)
    return float(out) if scalar else out


def bessel_i(order, z, scaled: bool = False):
    """Modified Bessel function :math:`I_\\nu(z)` of half-integer order.

    Parameters
    ----------
    order : HalfOrder or float
        Nonnegative multiple of 1/2.
    z : float or array_like
        Nonnegative argument.
    scaled : bool
        Return :math:`e^{-z} I_\\nu(z)` instead.
    """
    order = HalfOrder.of(order)
    zz, scalar = _as_array(z)
    _check_nonneg(zz, "z")
    flat = zz.ravel()
    nu = order.nu
    logv = np.full(flat.shape, -np.inf)
    pos = flat > 0
    if pos.any():
        zp = flat[pos]
        logv[pos] = nu * np.log(zp / 2) - math.log(half_gamma(order.twice_order + 2)) + _log_series(order, zp)
    if order.twice_order == 0:
        logv[~pos] = 0.0
    if scaled:
        logv = logv - flat
    return _finish(logv, zz.shape, scalar)


def _log_coeff(kind: CoeffKind, m: int, t: np.ndarray) -> np.ndarray:
    if kind is CoeffKind.SPHERE:
        return _log_series(HalfOrder(m - 2), t)
    if kind is CoeffKind.BALL:
        return _log_series(HalfOrder(m), t)
    return _log_series(HalfOrder(m), t) - _log_series(HalfOrder(m - 2), t)


def coeff(kind, m: int, t, scaled: bool = False):
    """Mean-value coefficient :math:`a^\\circ`, :math:`a^\\bullet` or their ratio.

    Parameters
    ----------
    kind : {'sphere', 'ball', 'ratio'} or CoeffKind
    m : int
        Space dimension, at least 2.
    t : float or array_like
        The product :math:`\\mu r`; zero gives the exact limit 1.
    scaled : bool
        Multiply by :math:`e^{-t}` (ignored for ``ratio``, which never overflows).
    """
    kind = CoeffKind(kind)
    if int(m) != m or m < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {m!r}")
    m = int(m)
    tt, scalar = _as_array(t)
    _check_nonneg(tt, "t")
    logv = _log_coeff(kind, m, tt)
    if scaled and kind is not CoeffKind.RATIO:
        logv = logv - tt.ravel()
    return _finish(logv, tt.shape, scalar)


def coeff_sphere_asymptotic(m: int, t):
    """Leading large-argument term of :math:`a^\\circ(t)`.

    :math:`\\Gamma(m/2)\\,2^{(m-3)/2}\\pi^{-1/2}\\,e^t\\,t^{-(m-1)/2}`.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {m!r}")
    tt, scalar = _as_array(t)
    if not np.all(np.isfinite(tt)) or np.any(tt <= 0):
        raise DomainError("asymptotic form needs t > 0")
    logc = math.log(half_gamma(int(m))) + (m - 3) / 2 * math.log(2.0) - 0.5 * math.log(math.pi)
    logv = (logc + tt - (m - 1) / 2 * np.log(tt)).ravel()
    return _finish(logv, tt.shape, scalar)


@lru_cache(maxsize=None)
def _poisson_nodes(m: int, n: int = 96):
    x, w = np.polynomial.legendre.leggauss(n)
    theta = (x + 1) * (np.pi / 4)
    w = w * (np.pi / 4) * np.cos(theta) ** (m - 2)
    return np.sin(theta), w / w.sum()


def poisson_integral_u(m: int, t):
    """Poisson-integral evaluation of :math:`a^\\circ(t)`.

    Computes the normalized integral
    :math:`\\int_0^1 (1-s^2)^{(m-3)/2}\\cosh(ts)\\,ds \\,/\\, \\int_0^1 (1-s^2)^{(m-3)/2}\\,ds`
    after the substitution :math:`s = \\sin\\theta`, which turns the weight into
    the bounded factor :math:`\\cos^{m-2}\\theta` (and removes the endpoint
    singularity when ``m = 2``).
    """
    if int(m) != m or m < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {m!r}")
    tt, scalar = _as_array(t)
    _check_nonneg(tt, "t")
    s, w = _poisson_nodes(int(m))
    vals = np.cosh(np.multiply.outer(tt.ravel(), s)) @ w
    out = vals.reshape(tt.shape)
    return float(out) if scalar else out
