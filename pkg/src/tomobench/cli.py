"""Command-line interface: run benchmark scenarios, check single-qubit
physicality constraints, and reproduce the built-in scenario table."""

import argparse
import os
import sys

import numpy as np

from .harness import ScenarioConfig, emit_outputs, run_scenario
from .qubit import bb84_constraints, tetrahedron_physical
from .states import StateSpec

_TARGET_KINDS = {"ghz4": "ghz4", "w4": "w4", "random-pure": "haar-random-pure"}


def _parse_config_file(path):
    """Flat key = value lines; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _target_spec(kind_arg, seed):
    if kind_arg.startswith("file:"):
        return StateSpec(kind="file", path=kind_arg[5:])
    if kind_arg not in _TARGET_KINDS:
        raise ValueError(f"unknown target {kind_arg!r}")
    return StateSpec(kind=_TARGET_KINDS[kind_arg], seed=seed)


def _build_scenario_config(args):
    file_vals = _parse_config_file(args.config) if args.config else {}

    def pick(name, cast, default):
        cli_val = getattr(args, name, None)
        if cli_val is not None:
            return cli_val
        if name in file_vals:
            raw = file_vals[name]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes")
            return cast(raw)
        return default

    target_arg = pick("target", str, "ghz4")
    target_seed = pick("target_seed", int, 0)
    target = _target_spec(target_arg, target_seed)

    true_file = pick("true_file", str, None)
    true_fidelity = pick("true_fidelity", float, None)
    if true_file is not None:
        true_state = StateSpec(kind="file", path=true_file)
    elif true_fidelity is not None:
        true_state = StateSpec(
            kind=target.kind,
            noise_fidelity=true_fidelity,
            seed=target.seed,
            path=target.path,
        )
    else:
        true_state = target

    estimators = pick("estimators", str, "lin,mle")
    return ScenarioConfig(
        target=target,
        true_state=true_state,
        runs=pick("runs", int, 500),
        copies_per_setting=pick("copies_per_setting", int, 100),
        master_seed=pick("seed", int, 0),
        estimators=tuple(e.strip() for e in estimators.split(",") if e.strip()),
        mle_tol=pick("mle_tol", float, 1e-10),
        mle_max_iter=pick("mle_max_iter", int, 20000),
        bin_width=pick("bin_width", float, 0.002),
        workers=pick("workers", int, 1),
        dump_counts=pick("dump_counts", bool, False),
    ), pick("out_dir", str, "out")


def _cmd_run(args):
    cfg, out_dir = _build_scenario_config(args)
    dump_dir = os.path.join(out_dir, "counts") if cfg.dump_counts else None
    result = run_scenario(cfg, dump_dir=dump_dir)
    emit_outputs(result, out_dir)
    print(f"F0 = {result.f0:.6f}")
    for name, st in result.stats.items():
        line = (
            f"{name}: mean={st.mean:.6f} mse={st.mse:.4e} "
            f"var={st.variance:.4e} bias_sq={st.bias_sq:.4e} "
            f"nonphysical={st.frac_nonphysical_estimates:.3f}"
        )
        if name in result.unconverged:
            line += f" unconverged={result.unconverged[name]}"
        print(line)
    print(f"outputs written to {out_dir}")
    return 0


def _cmd_check_constraints(args):
    values = np.loadtxt(args.file).ravel()
    if values.size != 4:
        print(f"expected 4 numbers, got {values.size}", file=sys.stderr)
        return 2
    if args.pom == "tetrahedron":
        ok = tetrahedron_physical(values)
    else:
        ok = bb84_constraints(values)
    print("physical" if ok else "unphysical")
    return 0 if ok else 1


_TABLE1_SCENARIOS = [
    ("GHZ4", "ghz4", 0.8),
    ("GHZ4", "ghz4", 1.0),
    ("W4", "w4", 1.0),
]


def _cmd_table1(args):
    rows = list(_TABLE1_SCENARIOS)
    if args.include_random:
        rows += [(f"random(seed={s})", "random-pure", 0.8) for s in (1, 2, 3)]
    print(f"{'Target':<16}{'F0':>5}  {'MSE LIN|MLE':>24}  "
          f"{'Var LIN|MLE':>24}  {'Bias^2 LIN|MLE':>24}")
    for label, kind, f0 in rows:
        seed = int(label.split("seed=")[1].rstrip(")")) if "seed=" in label else 0
        target = _target_spec(kind, seed)
        true_state = (
            target
            if f0 >= 1.0
            else StateSpec(kind=target.kind, noise_fidelity=f0, seed=seed)
        )
        cfg = ScenarioConfig(
            target=target,
            true_state=true_state,
            runs=args.runs,
            master_seed=args.seed,
            workers=args.workers,
        )
        result = run_scenario(cfg)
        if args.out_dir:
            emit_outputs(result, os.path.join(args.out_dir, f"{label}_{f0}"))
        lin, mle = result.stats["lin"], result.stats["mle"]
        print(
            f"{label:<16}{f0:>5.3g}  {lin.mse:>11.3e}|{mle.mse:<11.3e}  "
            f"{lin.variance:>11.3e}|{mle.variance:<11.3e}  "
            f"{lin.bias_sq:>11.3e}|{mle.bias_sq:<11.3e}"
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tomobench",
        description="Benchmark linear-inversion vs maximum-likelihood tomography",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one benchmark scenario")
    run_p.add_argument("--config", help="flat key = value config file")
    run_p.add_argument("--target", help="ghz4 | w4 | random-pure | file:PATH")
    run_p.add_argument("--target-seed", type=int, dest="target_seed")
    run_p.add_argument("--true-fidelity", type=float, dest="true_fidelity",
                       help="depolarize the target to this fidelity for the true state")
    run_p.add_argument("--true-file", dest="true_file",
                       help="density-matrix file for the true state")
    run_p.add_argument("--runs", type=int)
    run_p.add_argument("--copies-per-setting", type=int, dest="copies_per_setting")
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--estimators", help="comma list from {lin,mle}")
    run_p.add_argument("--out-dir", dest="out_dir")
    run_p.add_argument("--bin-width", type=float, dest="bin_width")
    run_p.add_argument("--workers", type=int)
    run_p.add_argument("--dump-counts", action="store_const", const=True,
                       default=None, dest="dump_counts")
    run_p.set_defaults(func=_cmd_run)

    chk_p = sub.add_parser(
        "check-constraints",
        help="check a 4-number probability/frequency file for physicality",
    )
    chk_p.add_argument("file")
    chk_p.add_argument("--pom", choices=("tetrahedron", "bb84"), default="tetrahedron")
    chk_p.set_defaults(func=_cmd_check_constraints)

    tbl_p = sub.add_parser("table1", help="run the built-in scenario suite")
    tbl_p.add_argument("--runs", type=int, default=500)
    tbl_p.add_argument("--seed", type=int, default=0)
    tbl_p.add_argument("--workers", type=int, default=1)
    tbl_p.add_argument("--out-dir", dest="out_dir")
    tbl_p.add_argument("--include-random", action="store_true")
    tbl_p.set_defaults(func=_cmd_table1)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
