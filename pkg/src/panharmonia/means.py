"""Spherical, volume, iterated, domain and boundary mean values.

Deterministic product rules are used in two and three dimensions:

* ``m = 2``: composite trapezoid on the circle (spectral for smooth periodic
  integrands);
* ``m = 3``: Gauss-Legendre in ``cos(theta)`` times a trapezoid in ``phi``.

From four dimensions on, sphere means are Monte Carlo estimates with a
reported standard error. Ball means are composed radially,
``M_ball(r) = m r^-m int_0^r t^(m-1) M_sphere(t) dt``, with Gauss-Legendre
radial nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fields import ScalarField, SingularityError
from .geometry import Ball, Domain, sample_interior, sample_unit_sphere
from .rng import RngStream
from .specfun import unit_sphere_area

__all__ = [
    "MeanEstimate",
    "QuadratureConfig",
    "sphere_mean",
    "ball_mean",
    "iterated_mean",
    "domain_mean",
    "boundary_flux",
    "sphere_rule",
]

DETERMINISTIC = ("trapezoid", "gauss_product", "radial_composite")
_CHUNK = 1 << 18


@dataclass
class MeanEstimate:
    """A computed mean with its error bar.

    ``std_error`` is zero exactly for the deterministic methods.
    """

    value: float
    std_error: float
    samples: int
    method: str
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("a mean needs at least one sample")
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")

    @property
    def deterministic(self) -> bool:
        return self.method.split("[")[0] in DETERMINISTIC

    def to_dict(self) -> dict:
        d = {"value": self.value, "std_error": self.std_error, "samples": self.samples, "method": self.method}
        d.update(self.info)
        return d


@dataclass(frozen=True)
class QuadratureConfig:
    circle_points: int = 256
    polar_nodes: int = 32
    azimuth_points: int = 64
    mc_samples: int = 100_000
    stream: RngStream = RngStream(0, 0)
    radial_nodes: int = 64

    def __post_init__(self):
        for name in ("circle_points", "polar_nodes", "azimuth_points", "mc_samples", "radial_nodes"):
            if getattr(self, name) < 4:
                raise ValueError(f"{name} must be at least 4")


@lru_cache(maxsize=32)
def _deterministic_rule(m: int, circle: int, polar: int, azimuth: int):
    if m == 2:
        phi = 2 * np.pi * np.arange(circle) / circle
        dirs = np.column_stack([np.cos(phi), np.sin(phi)])
        w = np.full(circle, 1.0 / circle)
        return dirs, w, "trapezoid"
    z, wz = np.polynomial.legendre.leggauss(polar)
    phi = 2 * np.pi * np.arange(azimuth) / azimuth
    zz, pp = np.meshgrid(z, phi, indexing="ij")
    rho = np.sqrt(1.0 - zz**2)
    dirs = np.column_stack([(rho * np.cos(pp)).ravel(), (rho * np.sin(pp)).ravel(), zz.ravel()])
    w = np.repeat(wz / 2.0, azimuth) / azimuth
    dirs.setflags(write=False)
    w.setflags(write=False)
    return dirs, w, "gauss_product"


def sphere_rule(m: int, q: QuadratureConfig, stream: RngStream | None = None):
    """Unit-sphere nodes, weights summing to one, and the method tag."""
    if m in (2, 3):
        return _deterministic_rule(m, q.circle_points, q.polar_nodes, q.azimuth_points)
    dirs = sample_unit_sphere(m, stream or q.stream, q.mc_samples)
    return dirs, np.full(q.mc_samples, 1.0 / q.mc_samples), "monte_carlo"


def _check_sphere(f: ScalarField, x, r):
    for p in f.singular_points:
        if abs(np.linalg.norm(p - x) - r) <= 1e-12 * max(1.0, r):
            raise SingularityError(f"sphere S_{r}({list(x)}) passes through a singular point of {f.name}")


def _check_annulus(f: ScalarField, x, r_min, r_max):
    for p in f.singular_points:
        dist = np.linalg.norm(p - x)
        if r_min - 1e-12 * max(1.0, r_min) <= dist <= r_max + 1e-12 * max(1.0, r_max):
            raise SingularityError(f"mean of {f.name} around {list(x)} reaches a singular point")


def _eval_chunked(f: ScalarField, pts: np.ndarray) -> np.ndarray:
    if pts.shape[0] <= _CHUNK:
        return f(pts)
    return np.concatenate([f(pts[i : i + _CHUNK]) for i in range(0, pts.shape[0], _CHUNK)])


def _mc(values: np.ndarray, method: str) -> MeanEstimate:
    n = values.size
    se = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return MeanEstimate(float(values.mean()), se, n, method)


def sphere_mean(f: ScalarField, x, r: float, q: QuadratureConfig = QuadratureConfig()) -> MeanEstimate:
    """Average of ``f`` over the sphere ``S_r(x)``; ``r = 0`` gives ``f(x)``."""
    x = np.asarray(x, dtype=float)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return MeanEstimate(f(x), 0.0, 1, "trapezoid" if f.dim == 2 else "gauss_product")
    _check_sphere(f, x, r)
    dirs, w, method = sphere_rule(f.dim, q)
    vals = _eval_chunked(f, x + r * dirs)
    if method == "monte_carlo":
        return _mc(vals, method)
    return MeanEstimate(float(w @ vals), 0.0, w.size, method)


@lru_cache(maxsize=16)
def _radial_rule(n: int, m: int):
    x, w = np.polynomial.legendre.leggauss(n)
    s = (x + 1) / 2
    return s, (m / 2) * w * s ** (m - 1)


def ball_mean(f: ScalarField, x, r: float, q: QuadratureConfig = QuadratureConfig()) -> MeanEstimate:
    """Average of ``f`` over the ball ``B_r(x)`` by radial composition of sphere means."""
    x = np.asarray(x, dtype=float)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return MeanEstimate(f(x), 0.0, 1, "radial_composite")
    _check_annulus(f, x, 0.0, r)
    m = f.dim
    s, ws = _radial_rule(q.radial_nodes, m)
    dirs, w, method = sphere_rule(m, q)
    pts = x + r * (s[:, None, None] * dirs[None, :, :])
    vals = _eval_chunked(f, pts.reshape(-1, m)).reshape(s.size, dirs.shape[0])
    per_dir = ws @ vals
    if method == "monte_carlo":
        return _mc(per_dir, method)
    return MeanEstimate(float(per_dir @ w), 0.0, vals.size, "radial_composite")


def iterated_mean(f: ScalarField, x, r_outer: float, r_inner: float,
                  q: QuadratureConfig = QuadratureConfig()) -> MeanEstimate:
    """Spherical mean over ``S_{r_outer}(x)`` of the spherical means of radius ``r_inner``."""
    x = np.asarray(x, dtype=float)
    if r_outer < 0 or r_inner < 0:
        raise ValueError("radii must be nonnegative")
    if r_outer == 0 or r_inner == 0:
        return sphere_mean(f, x, r_outer + r_inner, q)
    _check_annulus(f, x, abs(r_outer - r_inner), r_outer + r_inner)
    m = f.dim
    if m in (2, 3):
        dirs, w, method = sphere_rule(m, q)
        inner = r_inner * dirs
        total = 0.0
        per = max(1, _CHUNK // dirs.shape[0])
        for i in range(0, dirs.shape[0], per):
            centers = x + r_outer * dirs[i : i + per]
            pts = (centers[:, None, :] + inner[None, :, :]).reshape(-1, m)
            vals = f(pts).reshape(-1, dirs.shape[0]) @ w
            total += float(w[i : i + per] @ vals)
        return MeanEstimate(total, 0.0, dirs.shape[0] ** 2, method)
    y = sample_unit_sphere(m, q.stream.substream(q.stream.stream_index ^ 0x1), q.mc_samples)
    z = sample_unit_sphere(m, q.stream.substream(q.stream.stream_index ^ 0x2), q.mc_samples)
    return _mc(_eval_chunked(f, x + r_outer * y + r_inner * z), "monte_carlo")


def domain_mean(f: ScalarField, d: Domain, n: int, rng: RngStream) -> MeanEstimate:
    """Monte Carlo volume mean of ``f`` over ``d``."""
    for p in f.singular_points:
        if d.contains(p) or d.distance_to_boundary(p) <= 1e-12 * d.scale:
            raise SingularityError(f"{f.name} has a singular point in the closure of {d!r}")
    pts = sample_interior(d, rng, n)
    return _mc(_eval_chunked(f, pts), "monte_carlo")


def boundary_flux(f: ScalarField, d: Domain, h: float | None = None,
                  q: QuadratureConfig = QuadratureConfig()) -> float:
    """Outward flux of ``grad f`` through a sphere, by centered differences.

    The normal derivative at each sphere node uses step ``h`` (default
    ``1e-5`` times the radius); the truncation error is ``O(h^2)``.
    """
    if not isinstance(d, Ball):
        raise NotImplementedError("boundary_flux supports balls only")
    R = d.radius
    h = 1e-5 * R if h is None else h
    _check_annulus(f, d.center, R - h, R + h)
    dirs, w, method = sphere_rule(d.dim, q)
    outer = _eval_chunked(f, d.center + (R + h) * dirs)
    inner = _eval_chunked(f, d.center + (R - h) * dirs)
    dn = (outer - inner) / (2 * h)
    return float(unit_sphere_area(d.dim) * R ** (d.dim - 1) * (w @ dn))
