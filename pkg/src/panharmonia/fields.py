"""Catalog of scalar fields with exactly known behavior.

Each field carries truth metadata (``meta``) so that detectors can be scored;
numerical code never reads it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .specfun import coeff, unit_sphere_area

__all__ = [
    "SingularityError",
    "FieldMeta",
    "ScalarField",
    "make_u_radial",
    "make_fundamental",
    "make_harmonic_fundamental",
    "make_control",
    "parse_field",
    "catalog",
]

CLASSES = ("panharmonic", "harmonic", "neither", "unknown")


class SingularityError(ValueError):
    """A field was evaluated at (or a mean touched) one of its singular points."""


@dataclass(frozen=True)
class FieldMeta:
    cls: str = "unknown"
    mu: Optional[float] = None
    singular_points: tuple = ()

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"unknown field class {self.cls!r}")


@dataclass(frozen=True)
class ScalarField:
    """A real field on R^m.

    ``evaluator`` maps an ``(n, m)`` array to ``(n,)`` values. Calling the
    field accepts one point or a batch.
    """

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    meta: FieldMeta = field(default_factory=FieldMeta)
    name: str = ""

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        if pts.shape[-1] != self.dim:
            raise ValueError(f"{self.name or 'field'} expects dimension {self.dim}, got {pts.shape[-1]}")
        lead = pts.shape[:-1]
        pts = pts.reshape(-1, self.dim)
        for p in self.meta.singular_points:
            if np.any(np.all(pts == p, axis=1)):
                raise SingularityError(f"{self.name} is singular at {list(p)}")
        vals = np.asarray(self.evaluator(pts), dtype=np.float64).reshape(lead)
        return float(vals[0]) if single else vals

    @property
    def singular_points(self) -> list[np.ndarray]:
        return [np.asarray(p, dtype=float) for p in self.meta.singular_points]

    def scaled(self, s: float) -> "ScalarField":
        """The field ``x -> f(s x)``; a mu-panharmonic f becomes (mu s)-panharmonic."""
        mu = None if self.meta.mu is None else self.meta.mu * s
        sing = tuple(tuple(np.asarray(p) / s) for p in self.meta.singular_points)
        return ScalarField(
            self.dim,
            lambda pts: self.evaluator(s * pts),
            FieldMeta(self.meta.cls, mu, sing),
            f"{self.name}*{s:g}",
        )


def make_u_radial(m: int, mu: float, center=None) -> ScalarField:
    """The radial witness ``U(x) = a_sphere(mu |x - center|)``; ``U(center) = 1``."""
    if m < 2 or not mu > 0:
        raise ValueError("u_radial needs m >= 2 and mu > 0")
    c = np.zeros(m) if center is None else np.asarray(center, dtype=float)

    def ev(pts):
        return coeff("sphere", m, mu * np.linalg.norm(pts - c, axis=1))

    return ScalarField(m, ev, FieldMeta("panharmonic", float(mu)), f"u_radial(m={m},mu={mu:g})")


def make_fundamental(mu: float, sign: str, pole) -> ScalarField:
    """Yukawa-type fundamental solution ``exp(+-mu |x - pole|) / |x - pole|`` in R^3."""
    pole = np.asarray(pole, dtype=float)
    if pole.shape != (3,):
        raise ValueError("fundamental solutions are three-dimensional")
    if not mu > 0:
        raise ValueError("mu must be positive")
    s = {"+": 1.0, "-": -1.0}[sign]

    def ev(pts):
        rho = np.linalg.norm(pts - pole, axis=1)
        return np.exp(s * mu * rho) / rho

    return ScalarField(
        3, ev, FieldMeta("panharmonic", float(mu), (tuple(pole),)), f"efund{sign}(mu={mu:g})"
    )


def make_harmonic_fundamental(m: int, pole=None) -> ScalarField:
    """Newtonian kernel ``[(2 - m) omega_m |x - pole|^(m-2)]^-1`` for m >= 3."""
    if m < 3:
        raise ValueError("harmonic fundamental solution implemented for m >= 3")
    pole = np.zeros(m) if pole is None else np.asarray(pole, dtype=float)
    k = 1.0 / ((2 - m) * unit_sphere_area(m))

    def ev(pts):
        return k / np.linalg.norm(pts - pole, axis=1) ** (m - 2)

    return ScalarField(m, ev, FieldMeta("harmonic", None, (tuple(pole),)), f"em(m={m})")


def make_control(kind: str, m: int, *, c: float = 1.0, index: int = 1,
                 mu: float = 1.0, direction=None) -> ScalarField:
    """Control fields.

    ``constant``
        ``c``; harmonic, never panharmonic for mu > 0.
    ``coordinate``
        ``x_index`` (1-based); harmonic.
    ``harmonic_quadratic``
        ``x_1^2 - x_2^2``; harmonic.
    ``square_norm``
        ``|x|^2``; its Laplacian is ``2m``, so it is neither.
    ``plane_wave``
        ``exp(mu d . x)`` with ``|d| = 1``; mu-panharmonic.
    """
    if kind == "constant":
        val = float(c)
        return ScalarField(m, lambda pts: np.full(pts.shape[0], val), FieldMeta("harmonic"), f"const({val:g})")
    if kind == "coordinate":
        if not 1 <= index <= m:
            raise ValueError(f"coordinate index must be in 1..{m}")
        i = index - 1
        return ScalarField(m, lambda pts: pts[:, i].copy(), FieldMeta("harmonic"), f"coord({index})")
    if kind == "harmonic_quadratic":
        return ScalarField(m, lambda pts: pts[:, 0] ** 2 - pts[:, 1] ** 2, FieldMeta("harmonic"), "x1^2-x2^2")
    if kind == "square_norm":
        return ScalarField(m, lambda pts: (pts**2).sum(axis=1), FieldMeta("neither"), "|x|^2")
    if kind == "plane_wave":
        d = np.zeros(m) if direction is None else np.asarray(direction, dtype=float)
        if direction is None:
            d[0] = 1.0
        if d.shape != (m,) or not math.isclose(float(np.linalg.norm(d)), 1.0, rel_tol=1e-12):
            raise ValueError("plane wave direction must be a unit vector of the field dimension")
        if not mu > 0:
            raise ValueError("mu must be positive")
        return ScalarField(
            m, lambda pts: np.exp(mu * (pts @ d)), FieldMeta("panharmonic", float(mu)),
            f"planewave(mu={mu:g})",
        )
    raise ValueError(f"unknown control kind {kind!r}")


def _vec(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.split(",")])


def parse_field(spec: str, dim: int = 3, mu: float = 1.0) -> ScalarField:
    """Build a catalog field from its identifier.

    Identifiers: ``u_radial``, ``efund-[@pole]``, ``efund+[@pole]``, ``em[@pole]``,
    ``const:<c>``, ``coord:<i>``, ``planewave:<mu>:<d1,d2,...>``, ``sqnorm``.
    The fundamental solutions default to the pole ``(3, 0, 0)``; ``em``
    defaults to the origin.
    """
    try:
        head, _, at = spec.strip().partition("@")
        pole = _vec(at) if at else None
        if head == "u_radial":
            return make_u_radial(dim, mu)
        if head in ("efund-", "efund+"):
            if dim != 3:
                raise ValueError("efund fields require dim 3")
            return make_fundamental(mu, head[-1], pole if pole is not None else [3.0, 0.0, 0.0])
        if head == "em":
            return make_harmonic_fundamental(dim, pole)
        if head == "sqnorm":
            return make_control("square_norm", dim)
        kind, _, rest = head.partition(":")
        if kind == "const":
            return make_control("constant", dim, c=float(rest))
        if kind == "coord":
            return make_control("coordinate", dim, index=int(rest))
        if kind == "planewave":
            pmu, _, d = rest.partition(":")
            direction = _vec(d) if d else None
            if direction is not None:
                direction = direction / np.linalg.norm(direction)
            return make_control("plane_wave", dim, mu=float(pmu), direction=direction)
    except (ValueError, KeyError) as exc:
        raise ValueError(f"malformed field spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown field id {spec!r}")


def catalog(m: int, mu: float) -> list[ScalarField]:
    """Every catalog member available in dimension ``m`` for parameter ``mu``.

    Singular poles are placed at distance 3 from the origin so that the
    catalog is regular on ``closure(B_1(0))`` and a margin around it.
    """
    out = [make_u_radial(m, mu)]
    d = np.ones(m) / math.sqrt(m)
    out.append(make_control("plane_wave", m, mu=mu, direction=d))
    if m == 3:
        out.append(make_fundamental(mu, "-", [3.0, 0.0, 0.0]))
        out.append(make_fundamental(mu, "+", [0.0, -3.0, 0.0]))
    out.append(make_control("constant", m, c=1.0))
    out.append(make_control("coordinate", m, index=1))
    out.append(make_control("harmonic_quadratic", m))
    if m >= 3:
        out.append(make_harmonic_fundamental(m, [0.0, 0.0, 3.0] + [0.0] * (m - 3)))
    out.append(make_control("square_norm", m))
    return out
