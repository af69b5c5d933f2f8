"""One test per acceptance criterion, at the stated tolerance.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import time
from functools import lru_cache

import numpy as np
import pytest

from panharmonia.detector import REJECT, classify, estimate_mu, panharmonic_score
from panharmonia.fields import catalog, make_control, make_fundamental, make_u_radial
from panharmonia.geometry import Ball, Ellipsoid, sample_interior
from panharmonia.means import QuadratureConfig, sphere_mean
from panharmonia.rng import RngStream
from panharmonia.specfun import coeff, coeff_sphere_asymptotic, poisson_integral_u
from panharmonia.verify import (
    harmonic_part,
    kugel_discrepancy,
    kugel_fundamental_check,
    riesz_harmonic_part,
    verify_asymptotic,
    verify_identity,
    verify_max_principle,
    within_sigma,
)
from panharmonia.wos import WosConfig, wos_solve

SEED = 20240601
MUS = (0.5, 1.0, 2.0)
DIMS = (2, 3)


def panharmonic_catalog(m, mu):
    return [f for f in catalog(m, mu) if f.meta.cls == "panharmonic"]


def i0_series(t):
    # independent oracle: sum (t^2/4)^k / (k!)^2 in plain floating point
    total, term, k = 1.0, 1.0, 0
    while term > 1e-18 * total:
        k += 1
        term *= (t * t / 4) / (k * k)
        total += term
    return total


def test_criterion_01_special_function_oracles(record):
    start = time.perf_counter()
    t = np.round(np.arange(1, 101) * 0.1, 10)
    rel_s = np.max(np.abs(coeff("sphere", 3, t) / (np.sinh(t) / t) - 1))
    rel_b = np.max(np.abs(coeff("ball", 3, t) / (3 * (t * np.cosh(t) - np.sinh(t)) / t**3) - 1))
    rel_i0 = max(abs(coeff("sphere", 2, x) / i0_series(x) - 1) for x in t)
    tp = np.linspace(0.01, 10, 400)
    rel_p = max(float(np.max(np.abs(poisson_integral_u(m, tp) / coeff("sphere", m, tp) - 1))) for m in (2, 3, 5))
    elapsed = time.perf_counter() - start
    ok = rel_s <= 1e-12 and rel_b <= 1e-12 and rel_i0 <= 1e-12 and rel_p <= 1e-10 and elapsed < 1.0
    record(1, ok, f"sphere {rel_s:.1e}, ball {rel_b:.1e}, I0 {rel_i0:.1e}, poisson {rel_p:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_02_identity_suite(record):
    start = time.perf_counter()
    coarse = QuadratureConfig(circle_points=64, polar_nodes=16, azimuth_points=32)
    worst, count, n_cases = 0.0, 0, []
    for m in DIMS:
        d = Ball(1.0, dim=m)
        for mu in MUS:
            for i, f in enumerate(panharmonic_catalog(m, mu)):
                for kind in ("sphere", "ball", "coupling", "iterated"):
                    q = coarse if kind == "iterated" else QuadratureConfig()
                    rep = verify_identity(kind, f, mu, d, q, trials=20, rng=RngStream(SEED, 1000 * m + 10 * i))
                    worst = max(worst, rep.max_relative_residual)
                    n_cases.append(len(rep.cases))
                    count += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and min(n_cases) >= 20 and elapsed < 30
    record(2, ok, f"{count} checks x >= {min(n_cases)} configs, max residual {worst:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_03_asymptotic_limits(record):
    worst = 0.0
    for m in DIMS:
        pts = np.array([[0.0, 0.0, 0.0], [0.3, 0.0, 0.0], [0.2, -0.25, 0.1]])[:, :m]
        for mu in MUS:
            f = make_u_radial(m, mu)
            for x in pts:
                for kind in ("sphere", "volume"):
                    worst = max(worst, verify_asymptotic(kind, f, mu, x).max_relative_residual)
    ok = worst <= 1e-6
    record(3, ok, f"max relative deviation of the extrapolated limit {worst:.1e}")
    assert ok


def test_criterion_04_max_principle_and_subharmonicity(record):
    mp = verify_max_principle(make_u_radial(3, 1.0), Ball(1.0), 33)
    strict = mp.cases[0]["strict"]
    bmax_ok = abs(mp.cases[0]["expected"] - math.sinh(1.0)) <= 1e-12
    violations, configs = 0, 0
    for m in DIMS:
        for mu in MUS:
            for i, f in enumerate(panharmonic_catalog(m, mu)):
                rep = verify_identity("subharmonic", f, mu, Ball(1.0, dim=m), trials=50,
                                      rng=RngStream(SEED, 5000 + 100 * m + i))
                assert rep.hypothesis_met
                configs += len(rep.cases)
                violations += sum(c["observed"] < c["expected"] for c in rep.cases)
    ok = strict and bmax_ok and mp.passed and violations == 0
    record(4, ok, f"interior max {mp.cases[0]['observed']:.12f} < sinh(1); "
                  f"{violations} subharmonicity violations in {configs} configurations")
    assert ok


def test_criterion_05_liouville_decay(record):
    ratios = {m: float(coeff_sphere_asymptotic(m, 50.0) / coeff("sphere", m, 50.0)) for m in DIMS}
    ratio_ok = {m: abs(r - 1) <= 1e-3 for m, r in ratios.items()}
    env_ok = True
    r = np.linspace(40.0, 400.0, 2000)
    for m in DIMS:
        C = 1.0 / float(coeff_sphere_asymptotic(m, 1.0) / math.e)
        env = C * (1 + r) ** 2 * r ** ((m - 1) / 2) * np.exp(-r)
        env_ok &= bool(np.all(env < 1e-6))
    ok = all(ratio_ok.values()) and env_ok
    record(5, ok, "ratio-1: " + ", ".join(f"m={m} {ratios[m] - 1:+.2e}" for m in DIMS)
           + f" (tol 1e-3); envelope below 1e-6 for r >= 40: {env_ok}")
    assert ok


def test_criterion_06_detector(record):
    wrong, mu_err, reject_min = [], 0.0, math.inf
    for m in DIMS:
        d = Ball(1.0, dim=m)
        for mu in MUS:
            for i, f in enumerate(catalog(m, mu)):
                v = classify(f, d, rng=RngStream(SEED, 7000 + i))
                if v.cls != f.meta.cls:
                    wrong.append((m, mu, f.name, v.cls))
                if f.meta.cls != "panharmonic":
                    continue
                if v.mu_hat is not None:
                    mu_err = max(mu_err, abs(v.mu_hat - mu))
                for x in sample_interior(d, RngStream(SEED, 8000 + i), 5):
                    mu_err = max(mu_err, abs(estimate_mu(f, x, 0.5 * _room(f, d, x)) - mu))
                reject_min = min(reject_min, panharmonic_score(f, 2 * mu, d).max_relative_residual)
    ok = not wrong and mu_err <= 1e-3 and reject_min >= REJECT
    record(6, ok, f"misclassified {wrong or 0}, max mu error {mu_err:.1e}, "
                  f"smallest wrong-mu variation {reject_min:.2e}")
    assert ok


def _room(f, d, x):
    room = float(d.distance_to_boundary(x))
    for p in f.singular_points:
        room = min(room, float(np.linalg.norm(p - x)))
    return room


def test_criterion_07_riesz(record):
    U = make_u_radial(3, 1.0)
    d = Ball(1.0)
    radii = np.linspace(0.0, 0.9, 10)
    probes = np.column_stack([radii, np.zeros(10), np.zeros(10)])
    h = harmonic_part(U, 1.0, d)(probes)
    dev = float(np.max(np.abs(h - math.cosh(1.0))))
    rep = riesz_harmonic_part(U, 1.0, d, probes)
    lap = max(c["residual"] for c in rep.cases if c["inputs"]["check"] == "laplacian")
    major = all(h >= U(probes))
    ok = dev <= 1e-6 and rep.passed and lap <= 1e-6 and major
    record(7, ok, f"max |h - cosh 1| {dev:.1e}, max |discrete Laplacian| {lap:.1e}, majorant {major}")
    assert ok


ELLIPSOID = Ellipsoid([1.2, 1.0, 1 / 1.2])
PROBES = np.array([[2.0, 0.0, 0.0], [0.0, 2.5, 0.0], [-1.5, -1.5, 1.0]])


@lru_cache(maxsize=None)
def kugel_results():
    n = 1_000_000
    return (
        kugel_discrepancy(Ball(1.0), 1.0, n, RngStream(SEED, 1)),
        kugel_discrepancy(ELLIPSOID, 1.0, n, RngStream(SEED, 2)),
        kugel_fundamental_check(Ball(1.0), 1.0, np.zeros(3), PROBES, n, RngStream(SEED, 3)),
        kugel_fundamental_check(ELLIPSOID, 1.0, np.zeros(3), PROBES, n, RngStream(SEED, 4)),
    )


def test_criterion_08_kugel(record):
    start = time.perf_counter()
    ball, ell, fball, fell = kugel_results()
    elapsed = time.perf_counter() - start
    z_ball = abs(ball.value) / ball.std_error
    z_ell = ell.value / ell.std_error
    signs = {c["inputs"]["sign"] for c in fball.cases}
    z_mis = max(c["residual"] for c in fell.cases)
    ok = z_ball <= 3 and z_ell >= 5 and fball.passed and signs == {"+", "-"} and z_mis > 5 and elapsed < 60
    record(8, ok, f"ball |z| {z_ball:.2f}, ellipsoid z {z_ell:.1f}, ball point-source max z "
                  f"{fball.max_relative_residual:.2f}, ellipsoid max z {z_mis:.1f}, {elapsed:.1f}s")
    assert ok


WOS_POINT = np.zeros(3)


def wos_cases():
    return {
        "a": (make_u_radial(3, 1.0), 1.0),
        "b": (make_control("constant", 3), 1.0 / math.sinh(1.0)),
        "c": (make_fundamental(1.0, "-", [3.0, 0.0, 0.0]), math.exp(-3.0) / 3.0),
    }


@lru_cache(maxsize=None)
def wos_run(case, variant, walks, eps=1e-3, workers=1, batch_size=1 << 16):
    g, _ = wos_cases()[case]
    cfg = WosConfig(epsilon_shell=eps, walks=walks, variant=variant, seed=SEED, workers=workers,
                    batch_size=batch_size)
    return wos_solve(Ball(1.0), g, 1.0, WOS_POINT, cfg)


def test_criterion_09_wos(record):
    start = time.perf_counter()
    failures = []
    for case, (_, exact) in wos_cases().items():
        for variant in ("weighted", "killing"):
            small = wos_run(case, variant, 100_000)
            big = wos_run(case, variant, 1_000_000)
            half = wos_run(case, variant, 1_000_000, eps=5e-4)
            if not within_sigma(small.value, exact, small.std_error):
                failures.append(f"{case}/{variant} 1e5 off by {(small.value - exact) / small.std_error:.1f} sigma")
            if abs(big.value - exact) > 0.01:
                failures.append(f"{case}/{variant} 1e6 off by {big.value - exact:.2e}")
            if not within_sigma(half.value, big.value, math.hypot(half.std_error, big.std_error)):
                failures.append(f"{case}/{variant} epsilon halving shift")
        w, k = wos_run(case, "weighted", 1_000_000), wos_run(case, "killing", 1_000_000)
        if not within_sigma(w.value, k.value, math.hypot(w.std_error, k.std_error)):
            failures.append(f"{case} weighted/killing disagree")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    record(9, ok, f"{'; '.join(failures) or 'all cases within bands'}, {elapsed:.1f}s for 18 runs")
    assert ok


def test_criterion_10_reproducibility(record):
    # rerun every Monte Carlo computation above with other worker counts and
    # batch sizes, and compare bit for bit
    fresh = (
        kugel_discrepancy(Ball(1.0), 1.0, 1_000_000, RngStream(SEED, 1)),
        kugel_discrepancy(ELLIPSOID, 1.0, 1_000_000, RngStream(SEED, 2)),
        kugel_fundamental_check(Ball(1.0), 1.0, np.zeros(3), PROBES, 1_000_000, RngStream(SEED, 3)),
        kugel_fundamental_check(ELLIPSOID, 1.0, np.zeros(3), PROBES, 1_000_000, RngStream(SEED, 4)),
    )
    old = kugel_results()
    same = all(a.value == b.value and a.std_error == b.std_error for a, b in zip(fresh[:2], old[:2]))
    same &= all(a.to_dict() == b.to_dict() for a, b in zip(fresh[2:], old[2:]))
    mismatched = []
    for case in wos_cases():
        for variant in ("weighted", "killing"):
            for walks in (100_000, 1_000_000):
                ref = wos_run(case, variant, walks)
                for workers, bs in ((3, 40_009), (2, 250_000)):
                    if walks == 100_000 or workers == 2:
                        other = wos_run(case, variant, walks, workers=workers, batch_size=bs)
                        if (other.value, other.std_error) != (ref.value, ref.std_error):
                            mismatched.append((case, variant, walks, workers))
    m4 = make_u_radial(4, 1.0)
    q = QuadratureConfig(mc_samples=50_000, stream=RngStream(SEED, 9))
    same &= sphere_mean(m4, np.zeros(4), 0.5, q).value == sphere_mean(m4, np.zeros(4), 0.5, q).value
    ok = same and not mismatched
    record(10, ok, f"kugel and sphere-mean reruns identical: {same}; WoS mismatches {mismatched or 0}")
    assert ok
