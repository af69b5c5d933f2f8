"""Command-line front end.

Scalars are printed with 17 significant digits, suite summaries as aligned
CSV, and machine reports as JSON. Every JSON report embeds a
:class:`RunManifest` from which the command line can be rebuilt.

Exit codes: 0 success, 1 a check failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .detector import classify
from .fields import SingularityError, parse_field
from .geometry import Ball, parse_domain
from .means import QuadratureConfig, ball_mean, boundary_flux, domain_mean, iterated_mean, sphere_mean
from .rng import RngStream
from .specfun import DomainError, bessel_i, coeff, coeff_sphere_asymptotic
from .verify import SUITE, kugel_discrepancy, kugel_fundamental_check, run_suite, suite_csv
from .wos import WosConfig, wos_solve

__all__ = ["RunManifest", "build_parser", "run", "main"]

OK, CHECK_FAILED, USAGE = 0, 1, 2


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed: int = 0
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        return cls(d["subcommand"], dict(d["parameters"]), int(d["seed"]), d["tool_version"], d["timestamp"])

    def to_argv(self) -> list[str]:
        """Command line reproducing this run (report destinations omitted)."""
        argv = [self.subcommand]
        for key, val in self.parameters.items():
            if key in ("report", "csv") or val is None or val is False:
                continue
            flag = "--" + key.replace("_", "-")
            if val is True:
                argv.append(flag)
            else:
                argv += [flag, str(val)]
        return argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _point(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ValueError(f"malformed point {text!r}") from None


def _points(text: str) -> np.ndarray:
    return np.array([_point(p) for p in text.split(";") if p.strip()])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="panharmonia", description="Mean values and checks for the modified Helmholtz equation.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("bessel", help="modified Bessel function I_nu(z), nu a half-integer")
    s.add_argument("--order", type=float, required=True)
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--scaled", action="store_true", help="return exp(-z) I_nu(z)")

    s = sub.add_parser("coeff", help="mean-value coefficient a(t)")
    s.add_argument("--kind", choices=["sphere", "ball", "ratio"], default="sphere")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--scaled", action="store_true", help="return exp(-t) a(t)")
    s.add_argument("--asymptotic", action="store_true", help="leading large-t term (sphere only)")

    s = sub.add_parser("mean", help="sphere, ball, iterated, domain mean or boundary flux of a catalog field")
    s.add_argument("--kind", choices=["sphere", "ball", "iterated", "domain", "flux"], default="sphere")
    s.add_argument("--field", required=True)
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--point", default=None, help="center, e.g. 0,0,0")
    s.add_argument("--radius", type=float, default=None)
    s.add_argument("--inner-radius", type=float, default=None)
    s.add_argument("--domain", default=None, help="domain spec for kind=domain")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--report", default=None)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--suite", default="all", help="'all' or comma-separated check ids")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=200_000)
    s.add_argument("--report", default=None)
    s.add_argument("--csv", default=None, help="also write the summary CSV here")

    s = sub.add_parser("detect", help="classify a catalog field")
    s.add_argument("--field", required=True)
    s.add_argument("--domain", default="ball:1")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--mu", type=float, default=1.0, help="parameter used to build the field")
    s.add_argument("--centers", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--report", default=None)

    s = sub.add_parser("wos", help="walk-on-spheres Dirichlet solve")
    s.add_argument("--domain", default="ball:1")
    s.add_argument("--dim", type=int, default=None, help="defaults to the point's dimension")
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--boundary", required=True, help="catalog field id for the boundary data")
    s.add_argument("--point", required=True)
    s.add_argument("--walks", type=int, default=100_000)
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--variant", choices=["weighted", "killing"], default="weighted")
    s.add_argument("--jump-fraction", type=float, default=1.0)
    s.add_argument("--max-steps", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--report", default=None)

    s = sub.add_parser("kugel", help="ball-characterization experiments")
    s.add_argument("--domain", default="ball:1")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--samples", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--fundamental", action="store_true", help="point-source check instead of the discrepancy")
    s.add_argument("--x0", default=None, help="interior source point, defaults to the domain center")
    s.add_argument("--exterior", default="2,0,0;0,2.5,0;-1.5,-1.5,1", help="';'-separated exterior points")
    s.add_argument("--report", default=None)
    return p


def _emit(args, payload: dict, manifest: RunManifest, text: str, out) -> None:
    payload = {"manifest": manifest.to_dict(), **payload}
    if getattr(args, "report", None):
        Path(args.report).write_text(json.dumps(payload, indent=2) + "\n")
    out.write(text if text.endswith("\n") else text + "\n")


def _manifest(args) -> RunManifest:
    params = {k: v for k, v in vars(args).items() if k != "subcommand"}
    return RunManifest(args.subcommand, params, int(params.get("seed") or 0))


def _cmd_bessel(args, out):
    out.write(_fmt(bessel_i(args.order, args.z, scaled=args.scaled)) + "\n")
    return OK


def _cmd_coeff(args, out):
    if args.asymptotic:
        if args.kind != "sphere":
            raise ValueError("--asymptotic applies to --kind sphere")
        val = coeff_sphere_asymptotic(args.dim, args.t)
    else:
        val = coeff(args.kind, args.dim, args.t, scaled=args.scaled)
    out.write(_fmt(val) + "\n")
    return OK


def _cmd_mean(args, out):
    f = parse_field(args.field, args.dim, args.mu)
    q = QuadratureConfig(mc_samples=args.samples, stream=RngStream(args.seed, 0))
    x = _point(args.point) if args.point else np.zeros(args.dim)
    if args.kind == "domain":
        if not args.domain:
            raise ValueError("--domain is required for kind=domain")
        est = domain_mean(f, parse_domain(args.domain, args.dim), args.samples, RngStream(args.seed, 0))
    elif args.kind == "flux":
        if args.radius is None:
            raise ValueError("--radius is required for kind=flux")
        val = boundary_flux(f, Ball(args.radius, x), q=q)
        _emit(args, {"value": val}, _manifest(args), _fmt(val), out)
        return OK
    else:
        if args.radius is None:
            raise ValueError("--radius is required")
        if args.kind == "sphere":
            est = sphere_mean(f, x, args.radius, q)
        elif args.kind == "ball":
            est = ball_mean(f, x, args.radius, q)
        else:
            if args.inner_radius is None:
                raise ValueError("--inner-radius is required for kind=iterated")
            est = iterated_mean(f, x, args.radius, args.inner_radius, q)
    text = _fmt(est.value) if est.deterministic else f"{_fmt(est.value)} +- {_fmt(est.std_error)}"
    _emit(args, est.to_dict(), _manifest(args), text, out)
    return OK


def _cmd_verify(args, out):
    known = [e.check_id for e in SUITE]
    only = None
    if args.suite != "all":
        only = [c.strip() for c in args.suite.split(",") if c.strip()]
        bad = [c for c in only if c not in known]
        if bad:
            raise ValueError(f"unknown check id(s) {bad}; known: {known}")
    reports, skipped = run_suite(args.dim, args.mu, args.seed, args.samples, only)
    csv = suite_csv(reports, skipped)
    if args.csv:
        Path(args.csv).write_text(csv)
    payload = {"passed": all(r.passed for r in reports), "checks": [r.to_dict() for r in reports], "skipped": skipped}
    _emit(args, payload, _manifest(args), csv, out)
    return OK if payload["passed"] else CHECK_FAILED


def _cmd_detect(args, out):
    f = parse_field(args.field, args.dim, args.mu)
    d = parse_domain(args.domain, args.dim)
    v = classify(f, d, centers=args.centers, rng=RngStream(args.seed, 0))
    text = f"class {v.cls}\nmu_hat {_fmt(v.mu_hat) if v.mu_hat is not None else '-'}\nconfidence {_fmt(v.confidence)}"
    _emit(args, v.to_dict(), _manifest(args), text, out)
    return OK


def _cmd_wos(args, out):
    x = _point(args.point)
    dim = args.dim or x.size
    d = parse_domain(args.domain, dim)
    g = parse_field(args.boundary, dim, args.mu)
    cfg = WosConfig(epsilon_shell=args.eps, max_steps=args.max_steps, walks=args.walks, variant=args.variant,
                    jump_fraction=args.jump_fraction, seed=args.seed)
    est = wos_solve(d, g, args.mu, x, cfg)
    payload = {"value": est.value, "std_error": est.std_error, "method": est.method, **est.info}
    text = "\n".join(f"{k} {_fmt(v) if isinstance(v, float) else v}" for k, v in payload.items())
    _emit(args, payload, _manifest(args), text, out)
    return OK


def _cmd_kugel(args, out):
    d = parse_domain(args.domain, args.dim)
    rng = RngStream(args.seed, 0)
    if args.fundamental:
        x0 = _point(args.x0) if args.x0 else d.center
        rep = kugel_fundamental_check(d, args.mu, x0, _points(args.exterior), args.samples, rng)
        _emit(args, rep.to_dict(), _manifest(args), suite_csv([rep]), out)
        return OK if rep.passed else CHECK_FAILED
    est = kugel_discrepancy(d, args.mu, args.samples, rng)
    z = est.value / est.std_error if est.std_error > 0 else float("inf")
    payload = {**est.to_dict(), "z": z}
    text = f"discrepancy {_fmt(est.value)}\nstd_error {_fmt(est.std_error)}\nz {_fmt(z)}"
    _emit(args, payload, _manifest(args), text, out)
    return OK


_COMMANDS = {
    "bessel": _cmd_bessel,
    "coeff": _cmd_coeff,
    "mean": _cmd_mean,
    "verify": _cmd_verify,
    "detect": _cmd_detect,
    "wos": _cmd_wos,
    "kugel": _cmd_kugel,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    """Execute one subcommand and return its exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.subcommand](args, out)
    except (DomainError, SingularityError, ValueError, NotImplementedError, OverflowError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        err.write(f"panharmonia {args.subcommand}: {msg}\n")
        return USAGE


def main() -> None:
    sys.exit(run())
