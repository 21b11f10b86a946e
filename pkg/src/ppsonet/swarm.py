"""Global-best PSO family: PPSO, BPSO and SGPSO.

PPSO draws its initial swarm from a Sobol sequence and raises the inertia
weight along ``w(t) = w_min + tanh(t * (w_max - w_min) / I_max)``. BPSO and
SGPSO use a linearly decreasing inertia weight and pseudo-random
initialisation; SGPSO adds a third attraction ``c3 * r3 * (center - x)``.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionError, NumericError
from .lowdisc import scale_to_bounds, sobol_points

TANH_INCREASING = "tanh_increasing"
LINEAR_DECREASING = "linear_decreasing"
CONSTANT = "constant"
SCHEDULE_KINDS = (TANH_INCREASING, LINEAR_DECREASING, CONSTANT)

PSO_ALGORITHMS = ("PPSO", "BPSO", "SGPSO")


@dataclass(frozen=True)
class InertiaSchedule:
    kind: str
    w_min: float
    w_max: float

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigError(f"unknown inertia schedule {self.kind!r}")
        if not (math.isfinite(self.w_min) and math.isfinite(self.w_max)):
            raise ConfigError("inertia bounds must be finite")
        if self.w_min > self.w_max:
            raise ConfigError(f"w_min {self.w_min} > w_max {self.w_max}")

    @classmethod
    def constant(cls, value):
        return cls(CONSTANT, value, value)


def inertia_at(schedule, t, i_max):
    if schedule.kind == CONSTANT:
        return schedule.w_max
    if i_max < 1:
        raise ConfigError("a time-varying inertia schedule needs I_max >= 1")
    if not 0 <= t <= i_max:
        raise ConfigError(f"iteration {t} outside [0, {i_max}]")
    span = schedule.w_max - schedule.w_min
    if schedule.kind == TANH_INCREASING:
        return schedule.w_min + math.tanh(t * span / i_max)
    return schedule.w_max - span * t / i_max


@dataclass
class SwarmConfig:
    algorithm: str = "PPSO"
    n_particles: int = 50
    i_max: int = 500
    c1: float = 1.6
    c2: float = 1.7
    c3: float = 0.0
    center: float = 0.0
    schedule: InertiaSchedule = field(default_factory=lambda: InertiaSchedule(TANH_INCREASING, 0.4, 0.9))
    lb: float = -10.0
    ub: float = 10.0
    v_max: float = None
    seed: int = 0
    init: str = None
    sobol_velocities: bool = True
    scalar_draws: bool = False

    def __post_init__(self):
        if self.algorithm not in PSO_ALGORITHMS:
            raise ConfigError(f"unknown PSO variant {self.algorithm!r}")
        if self.n_particles < 1:
            raise ConfigError("population size must be >= 1")
        if self.i_max < 0:
            raise ConfigError("I_max must be >= 0")
        if self.c1 < 0 or self.c2 < 0 or self.c3 < 0:
            raise ConfigError("acceleration coefficients must be >= 0")
        if not (np.all(np.isfinite(self.lb)) and np.all(np.isfinite(self.ub))):
            raise ConfigError("bounds must be finite")
        if np.any(np.asarray(self.lb) >= np.asarray(self.ub)):
            raise ConfigError("lower bounds must be below upper bounds")
        if self.v_max is None:
            self.v_max = 0.2 * (np.asarray(self.ub, dtype=float) - np.asarray(self.lb, dtype=float))
        if np.any(np.asarray(self.v_max) <= 0):
            raise ConfigError("v_max must be positive")
        if self.init is None:
            self.init = "sobol" if self.algorithm == "PPSO" else "uniform"
        if self.init not in ("sobol", "uniform"):
            raise ConfigError(f"unknown initialiser {self.init!r}")

    @classmethod
    def ppso(cls, **kw):
        return cls(algorithm="PPSO", **kw)

    @classmethod
    def bpso(cls, **kw):
        kw.setdefault("c1", 1.5)
        kw.setdefault("c2", 1.5)
        kw.setdefault("schedule", InertiaSchedule(LINEAR_DECREASING, 0.3, 0.9))
        return cls(algorithm="BPSO", **kw)

    @classmethod
    def sgpso(cls, **kw):
        kw.setdefault("c1", 1.5)
        kw.setdefault("c2", 1.5)
        kw.setdefault("c3", 0.5)
        kw.setdefault("center", 100.0)
        kw.setdefault("schedule", InertiaSchedule(LINEAR_DECREASING, 0.3, 0.9))
        return cls(algorithm="SGPSO", **kw)


@dataclass
class ConvergenceTrace:
    iterations: list = field(default_factory=list)
    best: list = field(default_factory=list)
    omega: list = field(default_factory=list)

    def record(self, t, best, omega):
        self.iterations.append(int(t))
        self.best.append(float(best))
        self.omega.append(float(omega))

    def __len__(self):
        return len(self.iterations)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["iteration", "best_mse", "omega"])
            for row in zip(self.iterations, self.best, self.omega):
                writer.writerow([row[0], repr(row[1]), repr(row[2])])

    @classmethod
    def from_csv(cls, path):
        trace = cls()
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["iteration", "best_mse", "omega"]:
                raise ValueError(f"unexpected convergence header {header}")
            for t, best, omega in reader:
                trace.record(int(t), float(best), float(omega))
        return trace


@dataclass
class SwarmResult:
    best_position: np.ndarray
    best_fitness: float
    trace: ConvergenceTrace
    positions: np.ndarray
    velocities: np.ndarray
    personal_best: np.ndarray
    personal_best_fitness: np.ndarray


def velocity_update(x, v, personal_best, global_best, omega, c1, c2, v_max, draws,
                    c3=0.0, center=0.0):
    """New velocity, clamped to [-v_max, v_max].

    ``draws`` stacks r1, r2 (and r3 when ``c3`` is non-zero) along the first axis;
    each draw broadcasts against ``x``.
    """
    x = np.asarray(x, dtype=float)
    if np.shape(v) != x.shape or np.shape(personal_best) != x.shape:
        raise DimensionError("position, velocity and personal best must share a shape")
    if np.shape(global_best)[-1:] != x.shape[-1:]:
        raise DimensionError("global best has the wrong dimension")
    new = omega * v + c1 * draws[0] * (personal_best - x) + c2 * draws[1] * (global_best - x)
    if c3:
        new = new + c3 * draws[2] * (center - x)
    return np.clip(new, -v_max, v_max)


def position_update(x, v, lb, ub):
    return np.clip(np.asarray(x, dtype=float) + v, lb, ub)


def _initial_swarm(cfg, dim, init_rng):
    lb = np.broadcast_to(np.asarray(cfg.lb, dtype=float), (dim,))
    ub = np.broadcast_to(np.asarray(cfg.ub, dtype=float), (dim,))
    v_max = np.broadcast_to(np.asarray(cfg.v_max, dtype=float), (dim,))
    n = cfg.n_particles
    if cfg.init == "sobol":
        # positions and velocities use disjoint blocks of Sobol coordinates
        width = 2 * dim if cfg.sobol_velocities else dim
        pts = sobol_points(width, n, seed=cfg.seed, skip=1)
        x = scale_to_bounds(pts[:, :dim], lb, ub)
        if cfg.sobol_velocities:
            v = scale_to_bounds(pts[:, dim:], -v_max, v_max)
        else:
            v = init_rng.uniform(-v_max, v_max, size=(n, dim))
    else:
        x = init_rng.uniform(lb, ub, size=(n, dim))
        v = init_rng.uniform(-v_max, v_max, size=(n, dim))
    return x, v, lb, ub, v_max


def _evaluate(objective, x):
    fit = np.asarray(objective(x), dtype=float)
    if fit.shape != (x.shape[0],):
        raise DimensionError(f"objective returned shape {fit.shape}, expected ({x.shape[0]},)")
    if np.isnan(fit).any():
        raise NumericError("objective returned NaN")
    return fit


def run_pso(cfg, objective, dim, callback=None):
    """Minimise a batch ``objective`` over ``dim`` dimensions.

    ``objective`` maps an (n, dim) position matrix to n fitness values.
    Updates are synchronous: the whole swarm is evaluated, bests are reduced,
    then every particle moves. ``callback(t, state_dict)`` is invoked after
    each evaluation, mostly for tests.
    """
    root = np.random.SeedSequence(cfg.seed)
    init_seq, *particle_seqs = root.spawn(cfg.n_particles + 1)
    init_rng = np.random.default_rng(init_seq)
    streams = [np.random.default_rng(s) for s in particle_seqs]
    n_draws = 3 if cfg.algorithm == "SGPSO" else 2
    c3 = cfg.c3 if cfg.algorithm == "SGPSO" else 0.0

    x, v, lb, ub, v_max = _initial_swarm(cfg, dim, init_rng)
    fit = _evaluate(objective, x)
    pbest = x.copy()
    pfit = fit.copy()
    g = int(np.argmin(pfit))
    gbest, gfit = pbest[g].copy(), float(pfit[g])

    trace = ConvergenceTrace()
    omega0 = inertia_at(cfg.schedule, 0, cfg.i_max) if cfg.i_max else cfg.schedule.w_min
    trace.record(0, gfit, omega0)
    if callback:
        callback(0, dict(x=x, v=v, fit=fit, pbest_fit=pfit, gbest_fit=gfit))

    draws = np.empty((n_draws, cfg.n_particles, 1 if cfg.scalar_draws else dim))
    for t in range(cfg.i_max):
        omega = inertia_at(cfg.schedule, t, cfg.i_max)
        for i, rng in enumerate(streams):
            draws[:, i, :] = rng.random((n_draws, draws.shape[2]))
        v = velocity_update(x, v, pbest, gbest, omega, cfg.c1, cfg.c2, v_max, draws,
                            c3=c3, center=cfg.center)
        x = position_update(x, v, lb, ub)
        fit = _evaluate(objective, x)

        improved = fit < pfit
        pbest[improved] = x[improved]
        pfit[improved] = fit[improved]
        g = int(np.argmin(pfit))
        if pfit[g] < gfit:
            gbest, gfit = pbest[g].copy(), float(pfit[g])

        trace.record(t + 1, gfit, inertia_at(cfg.schedule, t + 1, cfg.i_max))
        if callback:
            callback(t + 1, dict(x=x, v=v, fit=fit, pbest_fit=pfit, gbest_fit=gfit))

    return SwarmResult(gbest, gfit, trace, x, v, pbest, pfit)


def sphere(positions):
    return np.sum(np.square(positions), axis=-1)
