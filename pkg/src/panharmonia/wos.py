r"""Walk-on-spheres for the Dirichlet problem of :math:`\nabla^2 u = \mu^2 u`.

Rearranging the sphere mean-value identity gives
:math:`u(x) = E[u(X)] / a^\circ(\mu r)` with :math:`X` uniform on any admissible
sphere :math:`S_r(x)`. Iterating over maximal inscribed spheres, every jump of
radius :math:`r` multiplies the walk's weight by :math:`1/a^\circ(\mu r) < 1`
(``weighted``), or alternatively lets the walk survive with that probability
(``killing``). A walk stops inside the :math:`\varepsilon`-shell and scores the
boundary data at the nearest boundary point.

Randomness for walk ``i`` at step ``k`` comes from the Philox block keyed by
``(seed, i)`` at counter ``(k, slot)``, so estimates are bit-identical for any
batch size or worker count.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .fields import ScalarField
from .geometry import Domain
from .means import MeanEstimate
from .rng import gaussian_pairs, stream_words, to_unit_interval
from .specfun import coeff

__all__ = ["WosConfig", "WalkOutcome", "wos_walk", "wos_solve", "run_walks", "THREADS_ENV"]

log = logging.getLogger(__name__)

THREADS_ENV = "PANHARMONIA_THREADS"

RUNNING, SHELL, KILLED, MAX_STEPS = -1, 0, 1, 2
_STATUS = {SHELL: "shell", KILLED: "killed", MAX_STEPS: "max_steps"}
_SLOT_DIRECTION = 0
_SLOT_SURVIVAL = 1


@dataclass(frozen=True)
class WosConfig:
    epsilon_shell: float = 1e-3
    max_steps: int = 10_000
    walks: int = 100_000
    variant: str = "weighted"
    jump_fraction: float = 1.0
    seed: int = 0
    batch_size: int = 1 << 16
    workers: int | None = None

    def __post_init__(self):
        if not 0 < self.epsilon_shell < 1:
            raise ValueError("epsilon_shell must lie in (0, 1)")
        if self.walks < 1:
            raise ValueError("need at least one walk")
        if self.variant not in ("weighted", "killing"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if not 0 < self.jump_fraction <= 1:
            raise ValueError("jump_fraction must lie in (0, 1]")
        if self.max_steps < 1 or self.batch_size < 1:
            raise ValueError("max_steps and batch_size must be positive")


@dataclass
class WalkOutcome:
    boundary_point: np.ndarray
    weight: float
    steps: int
    terminated: str


def _check_start(d: Domain, x: np.ndarray, cfg: WosConfig):
    if x.shape != (d.dim,):
        raise ValueError(f"start point must have dimension {d.dim}")
    if not d.contains(x) or d.distance_to_boundary(x) <= cfg.epsilon_shell * d.diameter:
        raise ValueError("start point must be interior and outside the epsilon-shell")


def _directions(seed: int, ids: np.ndarray, step: int, m: int) -> np.ndarray:
    nblocks = -(-m // 4)
    z = gaussian_pairs(stream_words(seed, ids, step, _SLOT_DIRECTION, nblocks))[:, :m]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def run_walks(d: Domain, mu: float, x, cfg: WosConfig, ids: np.ndarray):
    """Simulate the walks with the given indices.

    Returns ``(boundary_points, weights, steps, status)`` with ``status`` codes
    0 shell, 1 killed, 2 max_steps.
    """
    x = np.asarray(x, dtype=float)
    ids = np.asarray(ids, dtype=np.uint64)
    n, m = ids.size, d.dim
    pos = np.tile(x, (n, 1))
    weight = np.ones(n)
    steps = np.zeros(n, dtype=np.int64)
    status = np.full(n, RUNNING, dtype=np.int8)
    bp = np.full((n, m), np.nan)
    eps_abs = cfg.epsilon_shell * d.diameter
    act = np.arange(n)
    for step in range(cfg.max_steps + 1):
        if act.size == 0:
            break
        dist = d.distance_to_boundary(pos[act])
        hit = dist <= eps_abs
        if hit.any():
            h = act[hit]
            bp[h] = d.project_to_boundary(pos[h], strict=False)
            status[h] = SHELL
            act, dist = act[~hit], dist[~hit]
        if step == cfg.max_steps:
            status[act] = MAX_STEPS
            bp[act] = pos[act]
            break
        if act.size == 0:
            break
        radius = cfg.jump_fraction * dist
        pos[act] += radius[:, None] * _directions(cfg.seed, ids[act], step, m)
        steps[act] += 1
        survival = 1.0 / coeff("sphere", m, mu * radius)
        if cfg.variant == "weighted":
            weight[act] *= survival
        else:
            u = to_unit_interval(stream_words(cfg.seed, ids[act], step, _SLOT_SURVIVAL)[:, 0])
            dead = u >= survival
            if dead.any():
                k = act[dead]
                status[k] = KILLED
                weight[k] = 0.0
                act = act[~dead]
    return bp, weight, steps, status


def wos_walk(d: Domain, mu: float, x, walk_index: int, cfg: WosConfig = WosConfig()) -> WalkOutcome:
    """One walk, identical to walk ``walk_index`` inside :func:`wos_solve`."""
    x = np.asarray(x, dtype=float)
    _check_start(d, x, cfg)
    bp, w, s, st = run_walks(d, mu, x, cfg, np.array([walk_index]))
    return WalkOutcome(bp[0], float(w[0]), int(s[0]), _STATUS[int(st[0])])


def _worker_count(cfg: WosConfig) -> int:
    if cfg.workers is not None:
        return max(1, cfg.workers)
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def wos_solve(d: Domain, g: ScalarField, mu: float, x, cfg: WosConfig = WosConfig()) -> MeanEstimate:
    """Monte Carlo solution at ``x`` of the Dirichlet problem with boundary data ``g``.

    The estimate averages ``weight * g(exit point)`` over walks that ended in
    the shell or were killed (scoring zero); walks that hit ``max_steps`` are
    excluded and counted. ``info`` carries ``walks``, ``killed_fraction``,
    ``mean_steps``, ``max_steps_fraction`` and ``excluded_weight``, the mean
    weight of excluded walks (their contribution is at most this times
    ``max |g|``).
    """
    x = np.asarray(x, dtype=float)
    _check_start(d, x, cfg)
    n = cfg.walks
    contrib = np.empty(n)
    steps = np.empty(n, dtype=np.int64)
    status = np.empty(n, dtype=np.int8)
    weights = np.empty(n)

    def work(lo: int):
        hi = min(n, lo + cfg.batch_size)
        ids = np.arange(lo, hi, dtype=np.uint64)
        bp, w, s, st = run_walks(d, mu, x, cfg, ids)
        c = np.zeros(hi - lo)
        ok = st == SHELL
        if ok.any():
            c[ok] = w[ok] * g(bp[ok])
        contrib[lo:hi], steps[lo:hi], status[lo:hi], weights[lo:hi] = c, s, st, w

    starts = range(0, n, cfg.batch_size)
    workers = _worker_count(cfg)
    if workers == 1:
        for lo in starts:
            work(lo)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, starts))

    counted = status != MAX_STEPS
    vals = contrib[counted]
    k = vals.size
    if k == 0:
        raise RuntimeError("every walk hit max_steps")
    se = float(vals.std(ddof=1) / np.sqrt(k)) if k > 1 else 0.0
    n_max = int(n - k)
    method = "monte_carlo"
    if n_max > 0.01 * n:
        method = "monte_carlo[max_steps_warning]"
        log.warning("%d of %d walks reached max_steps=%d", n_max, n, cfg.max_steps)
    info = {
        "walks": n,
        "killed_fraction": float(np.mean(status == KILLED)),
        "mean_steps": float(steps.mean()),
        "max_steps_fraction": n_max / n,
        "excluded_weight": float(weights[~counted].sum() / n),
        "variant": cfg.variant,
    }
    return MeanEstimate(float(vals.mean()), se, k, method, info)


def with_walks(cfg: WosConfig, walks: int) -> WosConfig:
    return replace(cfg, walks=walks)
