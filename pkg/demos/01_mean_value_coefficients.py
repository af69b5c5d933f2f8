"""
Mean-value coefficients
=======================

A function with lap u = mu^2 u does not equal its sphere average. The
average is inflated by a factor a_sphere(mu r) that depends only on the
dimension and on mu r. Ball averages carry a smaller factor a_ball(mu r).
"""

import math

import numpy as np

from panharmonia import coeff, coeff_sphere_asymptotic
from panharmonia import sphere_mean, ball_mean
from panharmonia.fields import make_control

# In three dimensions both factors have closed forms.
t = np.array([0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
print("   t      a_sphere       sinh(t)/t      a_ball        3(t cosh t - sinh t)/t^3")
for ti, s, b in zip(t, coeff("sphere", 3, t), coeff("ball", 3, t)):
    print(f"{ti:5.1f}  {s:14.10f}  {math.sinh(ti) / ti:14.10f}  {b:12.10f}  "
          f"{3 * (ti * math.cosh(ti) - math.sinh(ti)) / ti**3:12.10f}")

# A plane wave exp(mu d.x) is panharmonic; its sphere mean around any point
# is the center value times a_sphere.
mu, r = 1.5, 0.7
f = make_control("plane_wave", 3, mu=mu, direction=[0.0, 0.6, 0.8])
x = np.array([0.2, -0.1, 0.4])
print("\nsphere mean / f(x) =", sphere_mean(f, x, r).value / f(x), " a_sphere =", coeff("sphere", 3, mu * r))
print("ball mean   / f(x) =", ball_mean(f, x, r).value / f(x), " a_ball   =", coeff("ball", 3, mu * r))

# For large t the sphere factor grows like exp(t) / t^((m-1)/2). In 3-D the
# leading term is exact up to exp(-2t); in 2-D the next term is -1/(8t).
for m in (2, 3, 4):
    ratio = coeff_sphere_asymptotic(m, 50.0) / coeff("sphere", m, 50.0)
    print(f"m={m}: asymptotic / exact at t=50 is {ratio:.6f}")
