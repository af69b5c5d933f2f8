"""Mean-value calculus for the modified Helmholtz equation ``lap u = mu^2 u``.

Modules
-------
specfun   half-integer modified Bessel functions and mean-value coefficients
geometry  domains: distance, projection, sampling, volume
fields    catalog of fields with known behavior
means     sphere, ball, iterated, domain means and boundary flux
verify    executable checks of the mean-value identities
detector  converse tests: is a field panharmonic, and for which mu
wos       walk-on-spheres Dirichlet solver
cli       command-line front end
"""

__version__ = "0.1.0"

from .specfun import DomainError, bessel_i, coeff, coeff_sphere_asymptotic, poisson_integral_u
from .rng import RngStream
from .geometry import Ball, Box, Domain, Ellipsoid, Shell, parse_domain
from .fields import ScalarField, SingularityError, catalog, parse_field
from .means import MeanEstimate, QuadratureConfig, ball_mean, boundary_flux, domain_mean, iterated_mean, sphere_mean
from .verify import CheckReport, run_suite, verify_identity
from .detector import Verdict, classify, estimate_mu, panharmonic_score
from .wos import WosConfig, wos_solve

__all__ = [
    "__version__",
    "DomainError",
    "bessel_i",
    "coeff",
    "coeff_sphere_asymptotic",
    "poisson_integral_u",
    "RngStream",
    "Domain",
    "Ball",
    "Box",
    "Shell",
    "Ellipsoid",
    "parse_domain",
    "ScalarField",
    "SingularityError",
    "catalog",
    "parse_field",
    "MeanEstimate",
    "QuadratureConfig",
    "sphere_mean",
    "ball_mean",
    "iterated_mean",
    "domain_mean",
    "boundary_flux",
    "CheckReport",
    "verify_identity",
    "run_suite",
    "Verdict",
    "classify",
    "estimate_mu",
    "panharmonic_score",
    "WosConfig",
    "wos_solve",
]
