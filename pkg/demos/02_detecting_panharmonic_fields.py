"""
Is this field panharmonic?
==========================

Only point evaluations are used. For a panharmonic field the ratio of its
sphere mean to a_sphere(mu r) stays equal to the center value at every radius.
We first guess mu from small spheres, then check that the ratio is flat.
"""

from panharmonia import Ball, catalog, classify
from panharmonia.detector import estimate_mu, panharmonic_score
from panharmonia.fields import make_u_radial

d = Ball(1.0)
for f in catalog(3, 1.3):
    v = classify(f, d)
    mu = f"{v.mu_hat:.9f}" if v.mu_hat is not None else "-"
    print(f"{f.name:22s} truth={f.meta.cls:12s} verdict={v.cls:12s} mu_hat={mu}  confidence={v.confidence:.3f}")

# The small-sphere expansion alone recovers mu to several digits.
U = make_u_radial(3, 2.0)
print("\nmu from the expansion at (0.3,0,0):", estimate_mu(U, [0.3, 0, 0]))

# Testing the right field against the wrong mu leaves a clear drift.
for mu in (2.0, 2.2, 4.0):
    drift = panharmonic_score(U, mu, Ball(2.0)).max_relative_residual
    print(f"ratio drift when tested at mu={mu}: {drift:.2e}")
