"""Gravitational search (GSA) and the PSOGSA hybrid.

Follows the usual formulation for minimisation:

* masses ``m_i = (fit_i - worst) / (best - worst)``, normalised to sum to 1
  (uniform when every agent has the same fitness);
* ``G(t) = G0 * exp(-alpha * t / I_max)``;
* acceleration of agent i is ``G * sum_j rand_ij * M_j * (x_j - x_i) / (R_ij + eps)``
  over the Kbest heaviest agents, Kbest shrinking linearly from all agents to
  ``kbest_floor * n``;
* GSA velocity ``rand * v + a``; PSOGSA velocity
  ``w * v + c1 * rand * a + c2 * rand * (gbest - x)``.

Positions are clamped into [lb, ub] after every move.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .swarm import ConvergenceTrace, InertiaSchedule, LINEAR_DECREASING, _evaluate, inertia_at

EPS = 1e-12


@dataclass
class GsaConfig:
    algorithm: str = "GSA"
    n_particles: int = 50
    i_max: int = 500
    seed: int = 0
    lb: float = -10.0
    ub: float = 10.0
    g0: float = 1.0
    alpha: float = 10.0
    kbest_floor: float = 0.025
    # PSOGSA only
    c1: float = 1.0
    c2: float = 1.0
    schedule: InertiaSchedule = None

    def __post_init__(self):
        if self.algorithm not in ("GSA", "PSOGSA"):
            raise ConfigError(f"unknown gravitational variant {self.algorithm!r}")
        if self.n_particles < 1 or self.i_max < 0:
            raise ConfigError("population size must be >= 1 and I_max >= 0")
        if self.g0 <= 0:
            raise ConfigError("G0 must be positive")
        if self.alpha < 0:
            raise ConfigError("alpha must be non-negative")
        if not 0 < self.kbest_floor <= 1:
            raise ConfigError("kbest floor must lie in (0, 1]")
        if not (np.all(np.isfinite(self.lb)) and np.all(np.isfinite(self.ub))):
            raise ConfigError("bounds must be finite")
        if np.any(np.asarray(self.lb) >= np.asarray(self.ub)):
            raise ConfigError("lower bounds must be below upper bounds")
        if self.schedule is None:
            self.schedule = InertiaSchedule(LINEAR_DECREASING, 0.5, 0.9)

    @classmethod
    def psogsa(cls, **kw):
        return cls(algorithm="PSOGSA", **kw)


@dataclass
class GsaState:
    positions: np.ndarray
    velocities: np.ndarray
    masses: np.ndarray
    accelerations: np.ndarray
    grav: float
    best_position: np.ndarray
    best_fitness: float


@dataclass
class GsaResult:
    best_position: np.ndarray
    best_fitness: float
    trace: ConvergenceTrace
    state: GsaState


def gravitational_constant(g0, alpha, t, i_max):
    if i_max == 0:
        return g0
    return g0 * math.exp(-alpha * t / i_max)


def masses(fitness):
    fitness = np.asarray(fitness, dtype=float)
    best, worst = fitness.min(), fitness.max()
    if best == worst:
        return np.full(fitness.shape, 1.0 / fitness.size)
    m = (fitness - worst) / (best - worst)
    return m / m.sum()


def kbest_count(n, t, i_max, floor):
    """Number of agents exerting force at iteration ``t``."""
    if i_max == 0:
        return n
    frac = floor + (1.0 - t / i_max) * (1.0 - floor)
    return max(1, min(n, int(round(n * frac))))


def _step(cfg, t, x, v, fit, gbest, rng, lb, ub):
    n, dim = x.shape
    mass = masses(fit)
    grav = gravitational_constant(cfg.g0, cfg.alpha, t, cfg.i_max)
    if cfg.algorithm == "GSA":
        k = kbest_count(n, t, cfg.i_max, cfg.kbest_floor)
    else:
        k = n
    active = np.argsort(-mass, kind="stable")[:k].astype(np.int64)
    weights = rng.random((n, k))
    acc = kernels.gsa_acceleration(np.ascontiguousarray(x), mass, active, weights, grav, EPS)
    if cfg.algorithm == "GSA":
        v = rng.random((n, dim)) * v + acc
    else:
        omega = inertia_at(cfg.schedule, t, cfg.i_max)
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        v = omega * v + cfg.c1 * r1 * acc + cfg.c2 * r2 * (gbest - x)
    x = np.clip(x + v, lb, ub)
    return x, v, mass, acc, grav


def _run(cfg, objective, dim):
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    lb = np.broadcast_to(np.asarray(cfg.lb, dtype=float), (dim,))
    ub = np.broadcast_to(np.asarray(cfg.ub, dtype=float), (dim,))
    n = cfg.n_particles

    x = rng.uniform(lb, ub, size=(n, dim))
    v = np.zeros((n, dim))
    mass = np.zeros(n)
    acc = np.zeros((n, dim))
    grav = cfg.g0

    fit = _evaluate(objective, x)
    g = int(np.argmin(fit))
    gbest, gfit = x[g].copy(), float(fit[g])
    trace = ConvergenceTrace()

    def omega(t):
        if cfg.algorithm == "PSOGSA" and cfg.i_max:
            return inertia_at(cfg.schedule, t, cfg.i_max)
        return gravitational_constant(cfg.g0, cfg.alpha, t, cfg.i_max)

    # for GSA the trace's third column carries G(t)
    trace.record(0, gfit, omega(0))
    for t in range(cfg.i_max):
        x, v, mass, acc, grav = _step(cfg, t, x, v, fit, gbest, rng, lb, ub)
        fit = _evaluate(objective, x)
        g = int(np.argmin(fit))
        if fit[g] < gfit:
            gbest, gfit = x[g].copy(), float(fit[g])
        trace.record(t + 1, gfit, omega(t + 1))

    state = GsaState(x, v, mass, acc, grav, gbest, gfit)
    return GsaResult(gbest, gfit, trace, state)


def run_gsa(cfg, objective, dim):
    if cfg.algorithm != "GSA":
        raise ConfigError("run_gsa needs a GSA config")
    return _run(cfg, objective, dim)


def run_psogsa(cfg, objective, dim):
    if cfg.algorithm != "PSOGSA":
        raise ConfigError("run_psogsa needs a PSOGSA config")
    return _run(cfg, objective, dim)
