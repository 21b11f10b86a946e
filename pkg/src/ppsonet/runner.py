"""Experiment orchestration: data -> optimiser -> network -> metrics -> files."""
import dataclasses
import glob
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import datapipe, evaluate, stability
from ._accel import backend_name
from .errors import ConfigError, DataError
from .gravsearch import GsaConfig, run_gsa, run_psogsa
from .network import Topology, decode, network_objective, predict
from .swarm import (LINEAR_DECREASING, TANH_INCREASING, InertiaSchedule, SwarmConfig,
                    ConvergenceTrace, inertia_at, run_pso)

ALGORITHMS = ("PPSO", "BPSO", "SGPSO", "GSA", "PSOGSA")

# Per-algorithm parameter defaults. Keys left as None in an ExperimentConfig fall back to these.
DEFAULTS = {
    "PPSO": dict(c1=1.6, c2=1.7, c3=0.0, center=0.0, schedule=TANH_INCREASING, w_min=0.4, w_max=0.9),
    "BPSO": dict(c1=1.5, c2=1.5, c3=0.0, center=0.0, schedule=LINEAR_DECREASING, w_min=0.3, w_max=0.9),
    "SGPSO": dict(c1=1.5, c2=1.5, c3=0.5, center=100.0, schedule=LINEAR_DECREASING, w_min=0.3, w_max=0.9),
    "PSOGSA": dict(c1=1.0, c2=1.0, schedule=LINEAR_DECREASING, w_min=0.5, w_max=0.9, g0=1.0, alpha=10.0),
    "GSA": dict(g0=1.0, alpha=10.0, kbest_floor=0.025),
}


@dataclass
class ExperimentConfig:
    dataset: str = ""
    label_column: str = "last"
    algorithm: str = "PPSO"
    pop: int = 50
    iters: int = 500
    hidden: int = None
    split: float = 0.8
    seeds: tuple = tuple(range(1, 11))
    stratified: bool = True
    normalize: str = "full"
    lb: float = -10.0
    ub: float = 10.0
    v_max: float = None
    c1: float = None
    c2: float = None
    c3: float = None
    center: float = None
    schedule: str = None
    w_min: float = None
    w_max: float = None
    g0: float = None
    alpha: float = None
    kbest_floor: float = None
    init: str = None
    sobol_velocities: bool = True
    jobs: int = 1

    def __post_init__(self):
        self.algorithm = str(self.algorithm).upper()
        self.seeds = tuple(int(s) for s in self.seeds)
        self.validate()

    def validate(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if self.pop < 1 or self.iters < 0:
            raise ConfigError("pop must be >= 1 and iters >= 0")
        if self.hidden is not None and self.hidden < 1:
            raise ConfigError("hidden must be >= 1")
        if not 0 < self.split < 1:
            raise ConfigError("split must lie in (0, 1)")
        if self.normalize not in ("full", "train"):
            raise ConfigError("normalize must be 'full' or 'train'")
        if not (np.isfinite(self.lb) and np.isfinite(self.ub)):
            raise ConfigError("bounds must be finite")
        if self.lb >= self.ub:
            raise ConfigError("lb must be below ub")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def param(self, name):
        value = getattr(self, name)
        return DEFAULTS[self.algorithm].get(name) if value is None else value

    def optimizer_config(self, seed):
        """Concrete SwarmConfig / GsaConfig for one seed."""
        algo = self.algorithm
        common = dict(n_particles=self.pop, i_max=self.iters, seed=seed, lb=self.lb, ub=self.ub)
        if algo in ("PPSO", "BPSO", "SGPSO"):
            schedule = InertiaSchedule(self.param("schedule"), self.param("w_min"), self.param("w_max"))
            return SwarmConfig(algorithm=algo, c1=self.param("c1"), c2=self.param("c2"),
                               c3=self.param("c3"), center=self.param("center"), schedule=schedule,
                               v_max=self.v_max, init=self.init,
                               sobol_velocities=self.sobol_velocities, **common)
        gsa = dict(g0=self.param("g0"), alpha=self.param("alpha"))
        if algo == "GSA":
            return GsaConfig(algorithm="GSA", kbest_floor=self.param("kbest_floor"), **gsa, **common)
        schedule = InertiaSchedule(self.param("schedule"), self.param("w_min"), self.param("w_max"))
        return GsaConfig(algorithm="PSOGSA", c1=self.param("c1"), c2=self.param("c2"),
                         schedule=schedule, **gsa, **common)

    # ---- flat key = value text format ----

    def to_text(self):
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is None:
                text = "none"
            elif isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, tuple):
                text = ",".join(str(v) for v in value)
            else:
                text = repr(value) if isinstance(value, float) else str(value)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_pairs(cls, pairs):
        """Convert string values keyed by field name into typed constructor kwargs."""
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        out = {}
        for key, raw in pairs.items():
            key = key.strip().replace("-", "_")
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            out[key] = _convert(key, types[key], str(raw).strip())
        return out

    @classmethod
    def from_text(cls, text, **overrides):
        pairs = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            pairs[key.strip()] = value
        kwargs = cls.parse_pairs(pairs)
        kwargs.update(overrides)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path, **overrides):
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_text(text, **overrides)

    def as_dict(self):
        d = dataclasses.asdict(self)
        d["seeds"] = list(self.seeds)
        return d


def _convert(key, typ, raw):
    if raw.lower() == "none" or raw == "":
        return None
    try:
        if typ is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        if typ is tuple:
            return tuple(int(s) for s in raw.replace(" ", "").split(",") if s)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {key}") from None
    return raw


@dataclass
class SeedResult:
    seed: int
    train_mse: float
    train_accuracy: float
    test_accuracy: float
    confusion: evaluate.ConfusionMatrix
    metrics: evaluate.ClassMetrics
    trace: ConvergenceTrace
    n_train: int
    n_test: int

    def as_dict(self):
        return dict(seed=self.seed, train_mse=self.train_mse, train_accuracy=self.train_accuracy,
                    test_accuracy=self.test_accuracy, n_train=self.n_train, n_test=self.n_test,
                    confusion=self.confusion.counts.tolist(), metrics=self.metrics.as_dict())


@dataclass
class RunReport:
    config: ExperimentConfig
    dataset: str
    class_names: tuple
    topology: Topology
    seeds: list
    best_index: int
    backend: str
    stability: dict = None
    wall_clock_seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def best(self):
        return self.seeds[self.best_index]

    @property
    def best_accuracy(self):
        return self.best.test_accuracy

    def as_dict(self):
        return dict(
            config=self.config.as_dict(),
            dataset=self.dataset,
            class_names=list(self.class_names),
            topology=dict(p=self.topology.p, q=self.topology.q, r=self.topology.r, D=self.topology.D),
            backend=self.backend,
            best_seed=self.best.seed,
            best_test_accuracy=self.best.test_accuracy,
            best_headline_f=self.best.metrics.headline_f,
            best_macro_f=self.best.metrics.macro_f,
            per_seed=[s.as_dict() for s in self.seeds],
            stability=self.stability,
            notes=list(self.notes),
            wall_clock_seconds=self.wall_clock_seconds,
        )


def _prepare(config):
    try:
        ds = datapipe.load_csv(config.dataset, label_column=config.label_column)
    except FileNotFoundError:
        raise DataError(f"dataset not found: {config.dataset}") from None
    if config.normalize == "full":
        ds = datapipe.normalize(ds)
    return ds


def _run_seed(config, ds, seed):
    split = datapipe.holdout_split(ds, config.split, seed=seed, stratified=config.stratified)
    train, test = split.train, split.test
    if config.normalize == "train":
        scaler = datapipe.MinMaxScaler.fit(train.features)
        train = datapipe.normalize(train, scaler)
        test = datapipe.normalize(test, scaler)
    topo = Topology.for_data(ds.n_features, ds.n_classes, config.hidden)
    objective = network_objective(topo, train.features, train.targets())
    opt_cfg = config.optimizer_config(seed)
    runner = {"GSA": run_gsa, "PSOGSA": run_psogsa}.get(config.algorithm, run_pso)
    result = runner(opt_cfg, objective, topo.D)

    net = decode(result.best_position, topo)
    train_acc = float(np.mean(predict(net, train.features) == train.labels))
    pred = predict(net, test.features) if test.n_samples else np.zeros(0, dtype=np.int64)
    cm = evaluate.confusion_matrix(test.labels, pred, ds.n_classes)
    metrics = evaluate.class_metrics(cm) if cm.total else None
    return SeedResult(seed, result.best_fitness, train_acc, cm.accuracy, cm, metrics,
                      result.trace, train.n_samples, test.n_samples)


def _schedule_summary(config):
    if config.algorithm not in ("PPSO", "BPSO", "SGPSO", "PSOGSA") or config.iters < 1:
        return None
    schedule = InertiaSchedule(config.param("schedule"), config.param("w_min"), config.param("w_max"))
    omegas = [inertia_at(schedule, t, config.iters) for t in range(config.iters + 1)]
    return stability.summarize_schedule(config.param("c1"), config.param("c2"), omegas)


def run_experiment(config):
    """Train and test once per seed; the report headlines the best seed."""
    start = time.perf_counter()
    ds = _prepare(config)
    if config.jobs > 1 and len(config.seeds) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_seed, [config] * len(config.seeds), [ds] * len(config.seeds),
                                    config.seeds))
    else:
        results = [_run_seed(config, ds, seed) for seed in config.seeds]

    # best run: highest test accuracy, then headline F, then earliest seed
    keys = [(r.test_accuracy, r.metrics.headline_f if r.metrics else 0.0) for r in results]
    best_index = max(range(len(results)), key=lambda i: (keys[i], -i))
    topo = Topology.for_data(ds.n_features, ds.n_classes, config.hidden)
    notes = []
    if config.algorithm == "GSA":
        notes.append("GSA convergence traces carry G(t) in the omega column")
    return RunReport(config, ds.name, ds.class_names, topo, results, best_index, backend_name(),
                     _schedule_summary(config), time.perf_counter() - start, notes)


@dataclass
class ComparisonRow:
    algorithm: str
    best_accuracy: float
    best_headline_f: float
    best_macro_f: float
    best_seed: int
    is_max: bool = False


def compare_algorithms(configs):
    """Run every config on a shared dataset and split seeds; mark the best accuracy."""
    if not configs:
        raise ConfigError("nothing to compare")
    ref = configs[0]
    for cfg in configs[1:]:
        if (os.path.abspath(cfg.dataset), cfg.seeds, cfg.split, cfg.stratified) != \
                (os.path.abspath(ref.dataset), ref.seeds, ref.split, ref.stratified):
            raise ConfigError("compared configs must share dataset, seeds and split settings")
    reports = [run_experiment(cfg) for cfg in configs]
    rows = [ComparisonRow(rep.config.algorithm, rep.best_accuracy, rep.best.metrics.headline_f,
                          rep.best.metrics.macro_f, rep.best.seed) for rep in reports]
    top = max(r.best_accuracy for r in rows)
    for r in rows:
        r.is_max = r.best_accuracy == top
    return rows, reports


def comparison_to_csv(rows, path):
    with open(path, "w") as fh:
        fh.write("algorithm,best_accuracy,best_headline_f,best_macro_f,best_seed,is_max\n")
        for r in rows:
            fh.write(f"{r.algorithm},{r.best_accuracy!r},{r.best_headline_f!r},"
                     f"{r.best_macro_f!r},{r.best_seed},{int(r.is_max)}\n")


def _summary_text(report):
    cfg = report.config
    best = report.best
    lines = [
        f"dataset: {report.dataset} ({', '.join(report.class_names)})",
        f"algorithm: {cfg.algorithm}  topology: {report.topology.p}-{report.topology.q}-{report.topology.r}"
        f" (D={report.topology.D})  backend: {report.backend}",
        f"population: {cfg.pop}  iterations: {cfg.iters}  split: {cfg.split}  seeds: {len(cfg.seeds)}",
        "",
        f"{'seed':>6} {'train_mse':>12} {'train_acc':>10} {'test_acc':>10} {'headline_F':>11}",
    ]
    for s in report.seeds:
        hf = s.metrics.headline_f if s.metrics else float("nan")
        lines.append(f"{s.seed:>6} {s.train_mse:>12.6f} {100 * s.train_accuracy:>9.2f}% "
                     f"{100 * s.test_accuracy:>9.2f}% {100 * hf:>10.2f}%")
    lines += [
        "",
        f"best seed {best.seed}: test accuracy {100 * best.test_accuracy:.2f}% "
        f"({best.confusion.correct}/{best.confusion.total}), "
        f"headline F {100 * best.metrics.headline_f:.2f}%, macro F {100 * best.metrics.macro_f:.2f}%",
    ]
    if report.stability:
        st = report.stability
        lines.append(
            f"stability (psi = {st['psi']:.3f}, {st['psi_convention']}): "
            f"0 < w < psi - 1 holds for {100 * st['paper_stable_fraction']:.1f}% of the schedule, "
            f"spectral-radius stable for {100 * st['sr_stable_fraction']:.1f}%")
    lines += report.notes
    return "\n".join(lines) + "\n"


OUTPUT_PATTERNS = ("convergence_seed*.csv", "confusion_best.csv", "metrics.json", "summary.txt")


def emit_outputs(report, out_dir, force=False):
    """Write convergence CSVs, the best confusion matrix, metrics JSON and a summary."""
    os.makedirs(out_dir, exist_ok=True)
    existing = [p for pat in OUTPUT_PATTERNS for p in glob.glob(os.path.join(out_dir, pat))]
    if existing and not force:
        raise ConfigError(f"{out_dir} already holds run outputs; pass --force to overwrite")
    for path in existing:
        os.remove(path)

    written = []
    for s in report.seeds:
        path = os.path.join(out_dir, f"convergence_seed{s.seed}.csv")
        s.trace.to_csv(path)
        written.append(path)
    path = os.path.join(out_dir, "confusion_best.csv")
    report.best.confusion.to_csv(path, report.class_names)
    written.append(path)
    path = os.path.join(out_dir, "metrics.json")
    with open(path, "w") as fh:
        json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)
    path = os.path.join(out_dir, "summary.txt")
    with open(path, "w") as fh:
        fh.write(_summary_text(report))
    written.append(path)
    return written
