"""Command line entry point: ``ppsonet train | compare | stability``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric failure.
"""
import argparse
import logging
import os
import sys

import numpy as np

from . import runner, stability
from .errors import ConfigError, DataError, DimensionError, NumericError, PPSONetError

log = logging.getLogger("ppsonet")

# CLI flag -> ExperimentConfig field
FLAG_FIELDS = {
    "dataset": "dataset", "label_column": "label_column", "algorithm": "algorithm",
    "pop": "pop", "iters": "iters", "hidden": "hidden", "seeds": "seeds", "split": "split",
    "jobs": "jobs",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _add_experiment_flags(p):
    p.add_argument("--config", help="flat 'key = value' config file; flags override it")
    p.add_argument("--dataset", help="CSV file, label in the last column unless --label-column")
    p.add_argument("--label-column", dest="label_column")
    p.add_argument("--pop", type=int, help="population size (default 50)")
    p.add_argument("--iters", type=int, help="optimiser iterations (default 500)")
    p.add_argument("--hidden", type=int, help="hidden units (default 2p+1)")
    p.add_argument("--seeds", help="comma list such as 1,2,3 or a range 1-10")
    p.add_argument("--split", type=float, help="training fraction (default 0.8)")
    p.add_argument("--jobs", type=int, help="seeds to run in parallel processes")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="any other config key, e.g. --set c1=2.0")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")


def _parse_seeds(text):
    if "-" in text and "," not in text:
        lo, hi = text.split("-", 1)
        return ",".join(str(s) for s in range(int(lo), int(hi) + 1))
    return text


def build_config(args, algorithm=None):
    pairs = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        pairs[key] = value
    for flag, name in FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            pairs[name] = _parse_seeds(value) if flag == "seeds" else value
    if algorithm is not None:
        pairs["algorithm"] = algorithm
    overrides = runner.ExperimentConfig.parse_pairs(pairs)
    if args.config:
        return runner.ExperimentConfig.from_file(args.config, **overrides)
    return runner.ExperimentConfig(**overrides)


def cmd_train(args):
    cfg = build_config(args)
    if not cfg.dataset:
        raise ConfigError("--dataset is required (or set 'dataset' in --config)")
    report = runner.run_experiment(cfg)
    for path in runner.emit_outputs(report, args.out, force=args.force):
        log.info("wrote %s", path)
    print(f"{cfg.algorithm} on {report.dataset}: best seed {report.best.seed}, "
          f"test accuracy {100 * report.best_accuracy:.2f}%")
    return 0


def cmd_compare(args):
    algos = [a.strip().upper() for a in args.algorithms.split(",") if a.strip()]
    configs = [build_config(args, algorithm=a) for a in algos]
    if not configs[0].dataset:
        raise ConfigError("--dataset is required (or set 'dataset' in --config)")
    rows, reports = runner.compare_algorithms(configs)
    os.makedirs(args.out, exist_ok=True)
    table = os.path.join(args.out, "comparison.csv")
    if os.path.exists(table) and not args.force:
        raise ConfigError(f"{table} exists; pass --force to overwrite")
    for rep in reports:
        runner.emit_outputs(rep, os.path.join(args.out, rep.config.algorithm), force=args.force)
    runner.comparison_to_csv(rows, table)
    for r in rows:
        mark = " *" if r.is_max else ""
        print(f"{r.algorithm:>7}  acc {100 * r.best_accuracy:6.2f}%  F {100 * r.best_headline_f:6.2f}%{mark}")
    return 0


def cmd_stability(args):
    os.makedirs(args.out, exist_ok=True)
    targets = [os.path.join(args.out, "stability_region.csv")]
    starts = args.start or ["1,1"]
    targets += [os.path.join(args.out, f"trajectory_{i:02d}.csv") for i in range(1, len(starts) + 1)]
    if not args.force and any(os.path.exists(t) for t in targets):
        raise ConfigError(f"{args.out} already holds stability outputs; pass --force to overwrite")

    grid = stability.region_grid(n_omega=args.grid, n_psi=args.grid)
    stability.write_region_csv(grid, targets[0])
    disagree = int(np.sum(grid["paper_stable"] != grid["sr_stable"]))
    print(f"region grid {args.grid}x{args.grid}: {disagree} cells where the two criteria disagree")

    rep = stability.analyze(args.omega, args.psi)
    print(f"omega={args.omega} psi={args.psi}: trace {rep.trace:.4f}, det {rep.determinant:.4f}, "
          f"radius {rep.spectral_radius:.4f}, paper_stable={rep.paper_stable}, sr_stable={rep.sr_stable}")
    for start, path in zip(starts, targets[1:]):
        try:
            v0, y0 = (float(s) for s in start.split(","))
        except ValueError:
            raise ConfigError(f"--start expects V0,Y0, got {start!r}") from None
        traj = stability.simulate_trajectory(args.omega, args.psi, v0, y0, args.steps)
        traj.to_csv(path)
        status = "diverged" if traj.diverged else f"final |(v,y)| = {np.hypot(traj.v[-1], traj.y[-1]):.3e}"
        print(f"trajectory from ({v0}, {y0}): {status} -> {path}")
    return 0


def make_parser():
    parser = _Parser(prog="ppsonet", description="Particle-swarm training of neural-network classifiers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train and test one algorithm over several seeds")
    p.add_argument("--algorithm", help="PPSO, BPSO, SGPSO, GSA or PSOGSA (default PPSO)")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("compare", help="run several algorithms on one dataset")
    p.add_argument("--algorithms", default=",".join(runner.ALGORITHMS))
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stability", help="stability region grid and phase trajectories")
    p.add_argument("--omega", type=float, default=0.5)
    p.add_argument("--psi", type=float, default=1.65)
    p.add_argument("--start", action="append", metavar="V0,Y0", help="initial state; repeatable")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_stability)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataError, DimensionError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except PPSONetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
