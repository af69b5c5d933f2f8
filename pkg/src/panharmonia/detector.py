"""Decide from point evaluations whether a field is panharmonic, and recover mu.

For a mu-panharmonic field the ratio ``M_sphere(f, x, r) / a_sphere(mu r)``
does not depend on ``r``; it equals ``f(x)``. The detector measures how far
that ratio drifts over a radius grid. A rough ``mu`` comes from the small-radius
expansion ``M_sphere - f(x) ~ mu^2 f(x) r^2 / (2m)``, Richardson-extrapolated;
it is then sharpened by solving ``a_sphere(mu r) = M_sphere / f(x)`` at the
largest radius.

Restricted (single-radius) mean-value tests and panharmonic-mean
characterizations only say that a field with the property at *some* radius
must be panharmonic. In practice they reduce to the same multi-radius ratio
constancy test, which is what is implemented.

Decision bands on the ratio variation: at most ``1e-6`` accepts, at least
``1e-3`` rejects, anything between is inconclusive and reported as "neither"
with low confidence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .fields import ScalarField
from .geometry import Domain, sample_interior
from .means import QuadratureConfig, sphere_mean
from .rng import RngStream
from .specfun import coeff
from .verify import CheckReport, asymptotic_limit

__all__ = [
    "NotPanharmonicError",
    "Verdict",
    "ACCEPT",
    "REJECT",
    "panharmonic_score",
    "estimate_mu",
    "refine_mu",
    "classify",
]

ACCEPT = 1e-6
REJECT = 1e-3
HARMONIC_RADICAND = 1e-6
CLASSES = ("panharmonic", "harmonic", "neither")


class NotPanharmonicError(ValueError):
    """The small-radius expansion has the wrong sign for any mu > 0."""


@dataclass
class Verdict:
    cls: str
    mu_hat: float | None
    residual_profile: list = field(default_factory=list)
    confidence: float = 0.0

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"unknown class {self.cls!r}")
        if (self.mu_hat is not None) != (self.cls == "panharmonic"):
            raise ValueError("mu_hat is present exactly for panharmonic verdicts")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")
        self.residual_profile = [(float(r), float(v)) for r, v in self.residual_profile]

    def to_dict(self) -> dict:
        return {"class": self.cls, "mu_hat": self.mu_hat, "confidence": self.confidence,
                "residual_profile": [list(p) for p in self.residual_profile]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(d["class"], d["mu_hat"], [tuple(p) for p in d["residual_profile"]], d["confidence"])


def _require_deterministic(f: ScalarField):
    if f.dim not in (2, 3):
        raise NotImplementedError("detection needs deterministic sphere quadrature (m = 2 or 3)")


def _room(f: ScalarField, d: Domain, x: np.ndarray) -> float:
    room = float(d.distance_to_boundary(x))
    for p in f.singular_points:
        room = min(room, float(np.linalg.norm(p - x)))
    return room


def _centers(f: ScalarField, d: Domain, n: int, rng: RngStream):
    """Pick ``n`` well-separated-from-trouble centers.

    Candidates must have at least half the best available clearance and a
    field value not small compared with the largest one seen, so that
    relative ratios are meaningful.
    """
    cand = sample_interior(d, rng, 20 * n)
    rooms = np.array([_room(f, d, x) for x in cand])
    vals = np.abs(f(cand))
    ok = (rooms >= 0.5 * rooms.max()) & (vals >= 1e-2 * vals.max())
    if not ok.any():
        raise ValueError(f"{f.name} vanishes on every candidate center")
    idx = np.flatnonzero(ok)[:n]
    return cand[idx], rooms[idx]


def panharmonic_score(f: ScalarField, mu: float, d: Domain, centers: int = 5, radii_per_center: int = 8,
                      q: QuadratureConfig = QuadratureConfig(), rng: RngStream = RngStream(0, 0)) -> CheckReport:
    """Relative drift of ``M_sphere(f, x, r) / a_sphere(mu r)`` away from ``f(x)``.

    Radii ``r_j = j r_max / k`` for ``j = 1..k`` are shared by all centers,
    with ``r_max`` 90% of the smallest clearance. ``mu = 0`` tests the
    harmonic mean-value property. The report passes when the drift is at
    most ``1e-6``.
    """
    _require_deterministic(f)
    xs, rooms = _centers(f, d, centers, rng)
    r_max = 0.9 * float(rooms.min())
    radii = r_max * np.arange(1, radii_per_center + 1) / radii_per_center
    a = coeff("sphere", f.dim, mu * radii)
    cases = []
    for x in xs:
        fx = f(x)
        for r, ar in zip(radii, a):
            ratio = sphere_mean(f, x, r, q).value / ar
            cases.append({"inputs": {"x": x, "r": r, "mu": mu}, "expected": fx, "observed": ratio,
                          "residual": abs(ratio - fx) / abs(fx)})
    return CheckReport("panharmonic_score", cases, ACCEPT,
                       f"ratio drift at mu={mu:.17g}; accept <= {ACCEPT:g}, reject >= {REJECT:g}")


def estimate_mu(f: ScalarField, x, r0: float = 0.25, levels: int = 7,
                q: QuadratureConfig = QuadratureConfig()) -> float:
    """``sqrt(2m L / f(x))`` with ``L`` the extrapolated limit of ``(M_sphere - f(x)) / r^2``.

    Returns 0 when the radicand is within ``1e-6`` of zero (harmonic at
    ``x``). Raises :class:`NotPanharmonicError` for a clearly negative
    radicand and ``ValueError`` when ``f(x) = 0``.
    """
    _require_deterministic(f)
    x = np.asarray(x, dtype=float)
    fx = f(x)
    if fx == 0:
        raise ValueError("f(x) = 0: the expansion does not determine mu")
    lim = asymptotic_limit("sphere", f, x, r0, levels, q)
    radicand = 2 * f.dim * lim / fx
    if radicand < -HARMONIC_RADICAND:
        raise NotPanharmonicError(f"negative radicand {radicand:.3e} at {x.tolist()}")
    return math.sqrt(radicand) if radicand > HARMONIC_RADICAND else 0.0


def refine_mu(f: ScalarField, x, r: float, mu0: float, q: QuadratureConfig = QuadratureConfig()) -> float:
    """Solve ``a_sphere(mu r) = M_sphere(f, x, r) / f(x)`` for mu near ``mu0``."""
    x = np.asarray(x, dtype=float)
    target = sphere_mean(f, x, r, q).value / f(x)
    if target <= 1.0:
        raise NotPanharmonicError("sphere mean does not exceed the center value")

    def g(mu):
        return coeff("sphere", f.dim, mu * r) - target

    lo, hi = 0.0, max(2.0 * mu0, 1.0 / r)
    while g(hi) < 0:
        hi *= 2
        if hi > 1e6 / r:
            raise NotPanharmonicError("no mu reproduces the observed mean")
    return float(brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def _profile(report: CheckReport):
    worst: dict[float, float] = {}
    for c in report.cases:
        r = c["inputs"]["r"]
        worst[r] = max(worst.get(r, 0.0), c["residual"])
    return sorted(worst.items())


def _confidence(variation: float, accepted: bool) -> float:
    # 1 deep inside a band, 0.5 at its edge
    if accepted:
        return float(min(1.0, max(0.5, 1.0 - 0.5 * variation / ACCEPT)))
    return float(min(1.0, max(0.5, 1.0 - 0.5 * REJECT / max(variation, REJECT))))


INCONCLUSIVE_CONFIDENCE = 0.25


def classify(f: ScalarField, d: Domain, centers: int = 5, radii_per_center: int = 8, levels: int = 7,
             mu_rtol: float = 1e-3, q: QuadratureConfig = QuadratureConfig(),
             rng: RngStream = RngStream(0, 0)) -> Verdict:
    """Classify ``f`` on ``d`` as panharmonic (with ``mu_hat``), harmonic, or neither.

    1. Estimate mu at several centers. A negative radicand anywhere means
       neither; all radicands near zero lead to the harmonic test.
    2. Otherwise the estimates must agree to ``mu_rtol``; each is refined by
       inverting ``a_sphere`` at the largest radius and the median is scored.
    3. The ratio-drift score at the candidate mu decides: accept,
       reject, or inconclusive (neither, low confidence).
    """
    _require_deterministic(f)
    xs, rooms = _centers(f, d, centers, rng)
    try:
        mus = np.array([estimate_mu(f, x, 0.5 * room, levels, q) for x, room in zip(xs, rooms)])
    except NotPanharmonicError:
        score = panharmonic_score(f, 0.0, d, centers, radii_per_center, q, rng)
        return Verdict("neither", None, _profile(score), _confidence(score.max_relative_residual, False))

    if np.all(mus == 0.0):
        score = panharmonic_score(f, 0.0, d, centers, radii_per_center, q, rng)
        v = score.max_relative_residual
        if v <= ACCEPT:
            return Verdict("harmonic", None, _profile(score), _confidence(v, True))
        conf = _confidence(v, False) if v >= REJECT else INCONCLUSIVE_CONFIDENCE
        return Verdict("neither", None, _profile(score), conf)

    spread = (mus.max() - mus.min()) / mus.max()
    if np.any(mus == 0.0) or spread > mu_rtol:
        score = panharmonic_score(f, float(np.median(mus)), d, centers, radii_per_center, q, rng)
        return Verdict("neither", None, _profile(score), _confidence(max(score.max_relative_residual, REJECT), False))

    r_top = 0.9 * float(rooms.min())
    try:
        refined = [refine_mu(f, x, r_top, mu0, q) for x, mu0 in zip(xs, mus)]
    except NotPanharmonicError:
        score = panharmonic_score(f, float(np.median(mus)), d, centers, radii_per_center, q, rng)
        return Verdict("neither", None, _profile(score), _confidence(score.max_relative_residual, False))
    mu_hat = float(np.median(refined))
    score = panharmonic_score(f, mu_hat, d, centers, radii_per_center, q, rng)
    v = score.max_relative_residual
    if v <= ACCEPT:
        return Verdict("panharmonic", mu_hat, _profile(score), _confidence(v, True))
    conf = _confidence(v, False) if v >= REJECT else INCONCLUSIVE_CONFIDENCE
    return Verdict("neither", None, _profile(score), conf)
