"""Command line interface: ``heatfuzz <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from .dataset import (
    ATTRIBUTES,
    DataError,
    correlation_matrix,
    describe,
    iqr_clean,
    parse_csv,
    split_train_test,
    write_csv,
)
from .evaluation import (
    compare_report,
    compute_metrics,
    error_analysis,
    fit_mlr,
    format_report,
    residual_histogram,
)
from .inference import optimize_offsets, predict_arrays, predict_batch
from .rules import ModelFileError, learn_rules, load_model, render_rules, save_model
from .synth import GeneratorConfig, generate

log = logging.getLogger("heatfuzz")

ATTRIBUTE_NAMES = {"rh": "R. Humidity", "t": "Temperature", "hi": "Heat Index"}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_split(args):
    data = parse_csv(args.input)
    return split_train_test(data, args.split, args.seed)


def cmd_synth(args) -> int:
    cfg = GeneratorConfig(
        n=args.n,
        seed=args.seed,
        rh_range=tuple(args.rh_range),
        t_range=tuple(args.t_range),
        noise_std=args.noise_std,
        walk=args.walk,
        quantize=args.quantize,
    )
    write_csv(generate(cfg), args.out)
    log.info("wrote %d samples to %s", args.n, args.out)
    return 0


def cmd_clean(args) -> int:
    data = parse_csv(args.input)
    cleaned, removed = iqr_clean(data, args.iqr_k)
    write_csv(cleaned, args.out)
    print(f"removed {removed} of {len(data)} rows; {len(cleaned)} remain", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    data = parse_csv(args.input)
    stats = describe(data)
    corr = correlation_matrix(data)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["attribute", "mean", "std", "min", "max", *(f"r_{b}" for b in ATTRIBUTES)])
        for a in ATTRIBUTES:
            s = stats[a]
            w.writerow([a, repr(s.mean), repr(s.std), repr(s.min), repr(s.max), *(repr(corr[a, b]) for b in ATTRIBUTES)])
        _emit(buf.getvalue(), None)
        return 0
    cols = "".join(f"{ATTRIBUTE_NAMES[a]:>14}" for a in ATTRIBUTES)
    lines = [f"Descriptive statistics (n = {stats.n})", f"{'':<20}{cols}"]
    for label, field in (("Mean", "mean"), ("Standard deviation", "std"), ("Min", "min"), ("Max", "max")):
        lines.append(f"{label:<20}" + "".join(f"{getattr(stats[a], field):>14.2f}" for a in ATTRIBUTES))
    lines += ["", "Pearson correlation", f"{'':<20}{cols}"]
    for a in ATTRIBUTES:
        lines.append(f"{ATTRIBUTE_NAMES[a]:<20}" + "".join(f"{corr[a, b]:>14.2f}" for b in ATTRIBUTES))
    _emit("\n".join(lines) + "\n", None)
    return 0


def cmd_train(args) -> int:
    train, _ = _load_split(args)
    rb = learn_rules(train)
    if args.optimize:
        rb = optimize_offsets(rb, train, args.step)
    save_model(rb, args.out)
    print(f"learned {len(rb)} rules from {len(train)} training samples", file=sys.stderr)
    return 0


def cmd_rules(args) -> int:
    _emit(render_rules(load_model(args.model)), None)
    return 0


def _read_inputs(path: str) -> tuple[list[float], list[float]]:
    """rh,t pairs; data files with a heat index (and timestamp) column are accepted too."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(f.strip() for f in r)]
    rh, t = [], []
    for i, row in enumerate(rows, start=1):
        fields = [f.strip() for f in row]
        if len(fields) == 4:
            fields = fields[1:]
        if len(fields) not in (2, 3):
            raise DataError(f"{path}: row {i}: expected rh,t[,hi] columns, got {len(fields)}")
        try:
            a, b = float(fields[0]), float(fields[1])
        except ValueError:
            if i == 1:
                continue
            raise DataError(f"{path}: row {i}: non-numeric field in {','.join(row)!r}") from None
        rh.append(a)
        t.append(b)
    return rh, t


def cmd_predict(args) -> int:
    rb = load_model(args.model)
    rh, t = _read_inputs(args.input)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rh", "t", "hi_pred", "fallback"])
    if rh:
        pred, fallback = predict_arrays(rh, t, rb)
        for a, b, p, f in zip(rh, t, pred, fallback):
            w.writerow([repr(a), repr(b), repr(float(p)), int(f)])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_evaluate(args) -> int:
    rb = load_model(args.model)
    _, test = _load_split(args)
    y = test.hi
    pred, n_fallback = predict_batch(test, rb)
    m = compute_metrics(y, pred)
    ea = error_analysis(y, pred)
    counts, edges = residual_histogram(ea.residuals, args.bins)

    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "value"])
        for key, value in (
            ("n", m.n), ("r2", m.r2), ("rmse", m.rmse), ("mae", m.mae), ("f_stat", m.f_stat),
            ("p_value", m.p_value), ("df1", m.df1), ("df2", m.df2), ("fallbacks", n_fallback),
            ("abs_error_min", ea.abs_error_min), ("abs_error_max", ea.abs_error_max),
            ("overprediction_fraction", ea.overprediction_fraction),
        ):
            w.writerow([key, repr(value)])
        for i, c in enumerate(counts):
            w.writerow([f"residual_bin[{edges[i]!r},{edges[i + 1]!r}]", c])
        _emit(buf.getvalue(), args.out)
        return 0

    lines = [
        f"Fuzzy model on {m.n} held-out samples ({n_fallback} fallback predictions)",
        f"{'Quantity':<14}{'Value':>12}",
        f"{'R2':<14}{m.r2:>12.4f}",
        f"{'RMSE':<14}{m.rmse:>12.4f}",
        f"{'MAE':<14}{m.mae:>12.4f}",
        f"{'F-statistic':<14}{'score':>12}{'p value':>12}{'df':>12}",
        f"{'':<14}{m.f_stat:>12.3f}{m.p_value:>12.3g}{f'({m.df1},{m.df2})':>12}",
        "",
        f"absolute error range [{ea.abs_error_min:.4f}, {ea.abs_error_max:.4f}]",
        f"overprediction fraction {ea.overprediction_fraction:.4f}",
        "residual histogram:",
    ]
    for i, c in enumerate(counts):
        lines.append(f"  [{edges[i]:+.4f}, {edges[i + 1]:+.4f})  {c}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_compare(args) -> int:
    rb = load_model(args.model)
    train, test = _load_split(args)
    _emit(compare_report(test, rb, fit_mlr(train), args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heatfuzz", description="Fuzzy rule-base heat index modelling.")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def split_opts(p):
        p.add_argument("--input", required=True, help="observation CSV")
        p.add_argument("--seed", type=int, required=True, help="seed of the train/test split")
        p.add_argument("--split", type=float, default=0.7, help="training fraction (default 0.7)")

    p = sub.add_parser("synth", help="generate synthetic observations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise-std", type=float, default=0.0)
    p.add_argument("--rh-range", type=float, nargs=2, default=(68.0, 84.0), metavar=("LO", "HI"))
    p.add_argument("--t-range", type=float, nargs=2, default=(23.0, 26.0), metavar=("LO", "HI"))
    p.add_argument("--walk", action="store_true", help="time-correlated random walk instead of uniform draws")
    p.add_argument("--quantize", action="store_true", help="round rh and t to integers")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("clean", help="drop IQR outliers")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--iqr-k", type=float, default=1.5)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("stats", help="descriptive statistics and correlations")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="learn a rule base from the training split")
    split_opts(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--optimize", action="store_true", help="tune consequent offsets on the training split")
    p.add_argument("--step", type=float, default=0.05, help="offset grid step (default 0.05)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("rules", help="print the rule propositions")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("predict", help="predict heat index for rh,t pairs")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="metrics on the held-out split")
    split_opts(p)
    p.add_argument("--model", required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--bins", type=int, default=10, help="residual histogram bins")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="fuzzy model against a linear regression baseline")
    split_opts(p)
    p.add_argument("--model", required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (DataError, ModelFileError, OSError, ValueError, ArithmeticError) as exc:
        print(f"heatfuzz {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
