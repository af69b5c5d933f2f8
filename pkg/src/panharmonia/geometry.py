"""Bounded domains with exact distance, projection, volume and sampling.

All shapes have closed-form (or, for the ellipsoid, root-bracketed)
nearest-boundary-point maps, so any ball of radius ``distance_to_boundary``
around an interior point is admissible.

Point arguments may be a single point of shape ``(m,)`` or a batch of shape
``(n, m)``; results follow the same convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import RngStream
from .specfun import unit_ball_volume

__all__ = [
    "Domain",
    "Ball",
    "Box",
    "Shell",
    "Ellipsoid",
    "parse_domain",
    "sample_unit_sphere",
    "sample_interior",
    "distance_to_boundary",
    "project_to_boundary",
    "volume",
    "matched_radius",
]

MAX_REJECTION_TRIES = 10**6
_BOUNDARY_TOL = 1e-12


def _points(x, dim: int):
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {np.shape(x)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr, single


def _ret(arr, single):
    return arr[0] if single else arr


def _scalar_out(arr, single):
    return float(arr[0]) if single else arr


class Domain:
    """Base class. Subclasses are immutable dataclasses."""

    dim: int
    center: np.ndarray
    complement_connected = True

    def contains(self, x):
        """Strict interior membership."""
        pts, single = _points(x, self.dim)
        inside = self._inside(pts)
        return bool(inside[0]) if single else inside

    def _inside(self, pts: np.ndarray) -> np.ndarray:
        return self._signed(pts) > 0

    def distance_to_boundary(self, x):
        """Euclidean distance from ``x`` to the boundary (interior or exterior)."""
        pts, single = _points(x, self.dim)
        return _scalar_out(np.abs(self._signed(pts)), single)

    def project_to_boundary(self, x, strict: bool = True):
        """Nearest boundary point of an interior point.

        With ``strict`` an exterior point raises; otherwise points at or past
        the boundary are also projected (used to clean up round-off).
        """
        pts, single = _points(x, self.dim)
        if strict:
            sd = self._signed(pts)
            if np.any(sd < -_BOUNDARY_TOL * self.scale):
                raise ValueError("project_to_boundary requires interior points")
        return _ret(self._project(pts), single)

    @property
    def volume(self) -> float:
        raise NotImplementedError

    @property
    def matched_radius(self) -> float:
        """Radius of the ball with the same volume in the same dimension."""
        return (self.volume / unit_ball_volume(self.dim)) ** (1.0 / self.dim)

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    @property
    def scale(self) -> float:
        return self.diameter / 2

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def boundary_points(self, n: int) -> np.ndarray:
        """Deterministic boundary sample with roughly ``n`` points per direction."""
        raise NotImplementedError

    def _signed(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _project(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def _radial(pts, center):
    v = pts - center
    r = np.linalg.norm(v, axis=1)
    u = np.zeros_like(v)
    nz = r > 0
    u[nz] = v[nz] / r[nz, None]
    u[~nz, 0] = 1.0  # center: every boundary direction is nearest; take e_1
    return r, u


def _sphere_directions(m: int, n: int) -> np.ndarray:
    # tensor grid in hyperspherical angles, adequate as a deterministic probe
    if m == 2:
        phi = np.linspace(0, 2 * np.pi, 4 * n, endpoint=False)
        return np.column_stack([np.cos(phi), np.sin(phi)])
    if m == 3:
        z = np.cos(np.linspace(0, np.pi, n + 1))
        phi = np.linspace(0, 2 * np.pi, 2 * n, endpoint=False)
        zz, pp = np.meshgrid(z, phi, indexing="ij")
        rho = np.sqrt(1 - zz**2)
        return np.column_stack([(rho * np.cos(pp)).ravel(), (rho * np.sin(pp)).ravel(), zz.ravel()])
    g = np.random.Generator(np.random.Philox(key=np.array([m, n], dtype=np.uint64)))
    v = g.standard_normal((max(n, 4) ** 2 * m, m))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class Ball(Domain):
    radius: float
    center: np.ndarray = field(default=None)
    dim: int = 3

    def __post_init__(self):
        c = np.zeros(self.dim) if self.center is None else np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "dim", c.size)
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")
        if self.dim < 2:
            raise ValueError("dimension must be >= 2")

    @property
    def volume(self):
        return unit_ball_volume(self.dim) * self.radius**self.dim

    @property
    def diameter(self):
        return 2.0 * self.radius

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def boundary_points(self, n):
        return self.center + self.radius * _sphere_directions(self.dim, n)

    def _signed(self, pts):
        return self.radius - np.linalg.norm(pts - self.center, axis=1)

    def _project(self, pts):
        _, u = _radial(pts, self.center)
        return self.center + self.radius * u

    def __repr__(self):
        return f"Ball(radius={self.radius}, center={self.center.tolist()})"


@dataclass(frozen=True, eq=False)
class Box(Domain):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size < 2:
            raise ValueError("box corners must be vectors of equal length >= 2")
        if np.any(lo >= hi):
            raise ValueError("box needs lo < hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    @property
    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()

    def boundary_points(self, n):
        axes = [np.linspace(a, b, n + 1) for a, b in zip(self.lo, self.hi)]
        faces = []
        for i in range(self.dim):
            others = [axes[j] for j in range(self.dim) if j != i]
            grid = np.stack(np.meshgrid(*others, indexing="ij"), -1).reshape(-1, self.dim - 1)
            for val in (self.lo[i], self.hi[i]):
                pts = np.insert(grid, i, val, axis=1)
                faces.append(pts)
        return np.concatenate(faces)

    def _signed(self, pts):
        below = pts - self.lo
        above = self.hi - pts
        inner = np.minimum(below, above).min(axis=1)
        outside = np.linalg.norm(np.maximum(np.maximum(-below, -above), 0.0), axis=1)
        return np.where(inner > 0, inner, -outside)

    def _project(self, pts):
        out = np.clip(pts, self.lo, self.hi)
        below = out - self.lo
        above = self.hi - out
        gap = np.minimum(below, above)
        interior = gap.min(axis=1) > 0
        if interior.any():
            rows = np.nonzero(interior)[0]
            axis = gap[rows].argmin(axis=1)
            to_lo = below[rows, axis] <= above[rows, axis]
            out[rows, axis] = np.where(to_lo, self.lo[axis], self.hi[axis])
        return out

    def __repr__(self):
        return f"Box(lo={self.lo.tolist()}, hi={self.hi.tolist()})"


@dataclass(frozen=True, eq=False)
class Shell(Domain):
    r_in: float
    r_out: float
    center: np.ndarray = field(default=None)
    dim: int = 3
    complement_connected = False

    def __post_init__(self):
        c = np.zeros(self.dim) if self.center is None else np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "dim", c.size)
        if not 0 < self.r_in < self.r_out:
            raise ValueError("shell needs 0 < r_in < r_out")

    @property
    def volume(self):
        return unit_ball_volume(self.dim) * (self.r_out**self.dim - self.r_in**self.dim)

    @property
    def diameter(self):
        return 2.0 * self.r_out

    def bounding_box(self):
        return self.center - self.r_out, self.center + self.r_out

    def boundary_points(self, n):
        d = _sphere_directions(self.dim, n)
        return np.concatenate([self.center + self.r_out * d, self.center + self.r_in * d])

    def _signed(self, pts):
        r = np.linalg.norm(pts - self.center, axis=1)
        return np.minimum(r - self.r_in, self.r_out - r)

    def _project(self, pts):
        r, u = _radial(pts, self.center)
        target = np.where(r - self.r_in < self.r_out - r, self.r_in, self.r_out)
        return self.center + target[:, None] * u

    def __repr__(self):
        return f"Shell(r_in={self.r_in}, r_out={self.r_out}, center={self.center.tolist()})"


@dataclass(frozen=True, eq=False)
class Ellipsoid(Domain):
    semi_axes: np.ndarray
    center: np.ndarray = field(default=None)

    def __post_init__(self):
        a = np.asarray(self.semi_axes, dtype=float)
        if a.ndim != 1 or a.size < 2 or np.any(a <= 0):
            raise ValueError("ellipsoid needs >= 2 positive semi-axes")
        c = np.zeros(a.size) if self.center is None else np.asarray(self.center, dtype=float)
        if c.shape != a.shape:
            raise ValueError("center and semi-axes differ in dimension")
        object.__setattr__(self, "semi_axes", a)
        object.__setattr__(self, "center", c)

    @property
    def dim(self):
        return self.semi_axes.size

    @property
    def volume(self):
        return unit_ball_volume(self.dim) * float(np.prod(self.semi_axes))

    @property
    def diameter(self):
        return 2.0 * float(self.semi_axes.max())

    def bounding_box(self):
        return self.center - self.semi_axes, self.center + self.semi_axes

    def boundary_points(self, n):
        return self.center + self.semi_axes * _sphere_directions(self.dim, n)

    def _nearest(self, pts):
        """Nearest boundary point for every row, plus an inside flag.

        The closest point is ``e_i^2 y_i / (t + e_i^2)`` where ``t`` solves
        ``sum (e_i y_i / (t + e_i^2))^2 = 1``. With ``u = t + e_min^2`` the
        left side decreases strictly on ``u > 0``; ``u`` is found by
        bisection in ``log u`` so that small ``u`` keeps full relative
        precision. If every coordinate along the shortest axes vanishes and
        the remaining sum is at most one at ``u -> 0``, the nearest point sits
        at ``t = -e_min^2`` with the slack placed on the first shortest axis.
        """
        e = self.semi_axes
        y = np.abs(pts - self.center)
        sign = np.where(pts - self.center < 0, -1.0, 1.0)
        e2 = e * e
        emin2 = e2.min()
        shortest = e2 == emin2
        gap = e2 - emin2  # >= 0; zero on the shortest axes

        y_short = np.linalg.norm(y[:, shortest], axis=1)
        # F at u -> 0+ restricted to non-shortest axes
        with np.errstate(divide="ignore", invalid="ignore"):
            rest = np.where(shortest, 0.0, (e * y / np.where(shortest, 1.0, gap)) ** 2).sum(axis=1)
        degenerate = (y_short == 0) & (rest <= 1.0)

        n = pts.shape[0]
        x = np.empty_like(y)

        reg = ~degenerate
        if reg.any():
            yr = y[reg]
            lo = np.log(np.maximum(np.sqrt(emin2) * y_short[reg], 1e-300))
            hi = np.log(emin2 + e.max() * np.linalg.norm(yr, axis=1) + 1e-300)
            lo = np.minimum(lo, hi)
            # when y_short == 0 the root lies above the u -> 0 limit; F(exp(lo)) > 0 anyway
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                u = np.exp(mid)
                f = ((e * yr / (u[:, None] + gap)) ** 2).sum(axis=1) - 1.0
                pos = f > 0
                lo = np.where(pos, mid, lo)
                hi = np.where(pos, hi, mid)
                if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(hi))):
                    break
            u = np.exp(0.5 * (lo + hi))
            x[reg] = e2 * yr / (u[:, None] + gap)

        if degenerate.any():
            yd = y[degenerate]
            xd = np.zeros_like(yd)
            xd[:, ~shortest] = (e2 * yd / np.where(shortest, 1.0, gap))[:, ~shortest]
            slack = 1.0 - ((xd[:, ~shortest] / e[~shortest]) ** 2).sum(axis=1)
            first = int(np.argmax(shortest))
            xd[:, first] = np.sqrt(emin2 * np.maximum(slack, 0.0))
            x[degenerate] = xd

        inside = ((y / e) ** 2).sum(axis=1) < 1.0
        nearest = self.center + sign * x
        return nearest, inside

    def _inside(self, pts):
        return (((pts - self.center) / self.semi_axes) ** 2).sum(axis=1) < 1.0

    def _signed(self, pts):
        nearest, inside = self._nearest(pts)
        d = np.linalg.norm(pts - nearest, axis=1)
        return np.where(inside, d, -d)

    def _project(self, pts):
        return self._nearest(pts)[0]

    def __repr__(self):
        return f"Ellipsoid(semi_axes={self.semi_axes.tolist()}, center={self.center.tolist()})"


def distance_to_boundary(d: Domain, x):
    return d.distance_to_boundary(x)


def project_to_boundary(d: Domain, x):
    return d.project_to_boundary(x)


def volume(d: Domain) -> float:
    return d.volume


def matched_radius(d: Domain) -> float:
    return d.matched_radius


def _generator(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else rng.generator()


def sample_unit_sphere(m: int, rng: RngStream, n: int | None = None) -> np.ndarray:
    """Uniform point(s) on the unit sphere from a normalized Gaussian vector.

    ``rng`` is an :class:`RngStream` (read from its start) or a live numpy
    Generator.
    """
    g = _generator(rng)
    v = g.standard_normal((1 if n is None else n, m))
    norm = np.linalg.norm(v, axis=1, keepdims=True)
    v = v / norm
    return v[0] if n is None else v


def sample_interior(d: Domain, rng: RngStream, n: int | None = None) -> np.ndarray:
    """Uniform point(s) in ``d`` by rejection from its bounding box."""
    g = _generator(rng)
    lo, hi = d.bounding_box()
    want = 1 if n is None else n
    out = np.empty((want, d.dim))
    got = 0
    tries_since_hit = 0
    while got < want:
        batch = max(64, int(1.3 * (want - got)) + 16)
        pts = lo + (hi - lo) * g.random((batch, d.dim))
        ok = pts[d.contains(pts)]
        if ok.shape[0] == 0:
            tries_since_hit += batch
            if tries_since_hit >= MAX_REJECTION_TRIES:
                raise RuntimeError(f"rejection sampling failed for {d!r}")
            continue
        tries_since_hit = 0
        take = min(ok.shape[0], want - got)
        out[got : got + take] = ok[:take]
        got += take
    return out[0] if n is None else out


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def parse_domain(spec: str, dim: int = 3) -> Domain:
    """Parse a domain string.

    Grammar::

        ball:<r>[@cx,cy,...]
        box:<lo,...>/<hi,...>
        shell:<rin>,<rout>[@cx,...]
        ellipsoid:<a,b,...>[@cx,...]

    ``dim`` fixes the dimension for shapes whose string does not determine it.
    """
    try:
        kind, _, body = spec.strip().partition(":")
        body, _, at = body.partition("@")
        center = _floats(at) if at else None
        kind = kind.lower()
        if kind == "ball":
            (r,) = _floats(body)
            return Ball(r, center, dim if center is None else len(center))
        if kind == "box":
            lo, hi = body.split("/")
            return Box(_floats(lo), _floats(hi))
        if kind == "shell":
            rin, rout = _floats(body)
            return Shell(rin, rout, center, dim if center is None else len(center))
        if kind == "ellipsoid":
            return Ellipsoid(_floats(body), center)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"malformed domain spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown domain kind in {spec!r}")
