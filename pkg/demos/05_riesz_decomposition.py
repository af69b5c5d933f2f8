"""
Harmonic part of a positive panharmonic function
================================================

A nonnegative panharmonic u is subharmonic, so on a ball it splits into the
Newtonian potential of mu^2 u plus a harmonic function h. For U = sinh|x|/|x|
on the unit ball, h is the constant cosh 1.
"""

import math

import numpy as np

from panharmonia import Ball
from panharmonia.fields import make_u_radial
from panharmonia.verify import harmonic_part, riesz_harmonic_part

U = make_u_radial(3, 1.0)
h = harmonic_part(U, 1.0, Ball(1.0))
r = np.linspace(0, 0.9, 10)
pts = np.column_stack([r, np.zeros_like(r), np.zeros_like(r)])
for ri, ui, hi in zip(r, U(pts), h(pts)):
    print(f"r={ri:.1f}  U={ui:.10f}  h={hi:.10f}  h - cosh 1 = {hi - math.cosh(1):+.1e}")

rep = riesz_harmonic_part(U, 1.0, Ball(1.0), pts)
print("\nall checks (h >= 0, h >= U, mean value, discrete Laplacian) pass:", rep.passed)

# The same decomposition in five dimensions; h is again constant.
U5 = make_u_radial(5, 1.0)
h5 = harmonic_part(U5, 1.0, Ball(1.0, dim=5))
print("m=5 harmonic part at r=0, 0.5, 0.9:", h5(np.outer([0, 0.5, 0.9], np.eye(5)[0])))
