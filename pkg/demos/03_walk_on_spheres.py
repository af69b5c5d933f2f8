"""
Walk on spheres with a survival weight
======================================

Each jump to a sphere of radius r inside the domain multiplies the walk's
weight by 1/a_sphere(mu r). Averaging weight times boundary data at the exit
point solves the Dirichlet problem. The "killing" variant instead ends the
walk with probability 1 - 1/a_sphere(mu r).
"""

import math

import numpy as np

from panharmonia import Ball, Box, WosConfig, coeff, wos_solve
from panharmonia.fields import make_control, make_fundamental

one = make_control("constant", 3)
d = Ball(1.0)

# Boundary data 1 on the unit ball: u(x) = a_sphere(mu |x|) / a_sphere(mu).
for x in ([0, 0, 0], [0.3, 0.2, 0.1], [0.6, 0.0, 0.5]):
    x = np.array(x, dtype=float)
    exact = coeff("sphere", 3, np.linalg.norm(x)) / coeff("sphere", 3, 1.0)
    for variant in ("weighted", "killing"):
        est = wos_solve(d, one, 1.0, x, WosConfig(walks=200_000, variant=variant, seed=1))
        print(f"x={x}  {variant:8s}  {est.value:.5f} +- {est.std_error:.5f}   exact {exact:.5f}"
              f"   mean steps {est.info['mean_steps']:.1f}")

# A decaying point source outside a cube is panharmonic inside it.
g = make_fundamental(1.0, "-", [2.5, 0.5, 0.5])
cube = Box([0, 0, 0], [1, 1, 1])
x = np.array([0.5, 0.5, 0.5])
est = wos_solve(cube, g, 1.0, x, WosConfig(walks=200_000, seed=2))
print(f"\ncube, source outside: {est.value:.6f} +- {est.std_error:.6f}   exact {g(x):.6f}")

# The shell stop introduces a bias of order epsilon.
x = np.array([0.3, 0.2, 0.1])
exact = coeff("sphere", 3, math.sqrt(0.14)) / coeff("sphere", 3, 1.0)
for eps in (4e-3, 2e-3, 1e-3):
    est = wos_solve(d, one, 1.0, x, WosConfig(walks=400_000, epsilon_shell=eps, seed=3))
    print(f"eps={eps:.0e}: bias {est.value - exact:+.2e} +- {est.std_error:.1e}")
