"""Command-line entry point: ``xofm {train,predict,evaluate,explain,cv}``.

Exit codes: 0 success, 2 bad flags, 3 data or model-file errors,
4 training errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .dataset_io import DataError, SplitSpec, load_attributes, load_csv
from .encoding import DEFAULT_GAMMA
from .evaluation import cross_validate, default_grid, run_trials, write_trials_csv
from .explain import export_report
from .fm import ModelFormatError, load_model, save_model
from .inference import InferenceError, predict_batch, write_predictions
from .training import Hyperparams, TrainingError, fit, training_loss

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_TRAINING = 4


def _gamma(text: str):
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or comma list, got {text!r}") from None
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("gamma values must be >= 1")
    return values[0] if len(values) == 1 else values


def _add_data(p, required=True):
    p.add_argument("--data", required=required, help="CSV file with a header row")
    p.add_argument("--label-column", default="label", help="label column name or index (default: label)")


def _add_hyper(p):
    d = Hyperparams()
    p.add_argument("--gamma", type=_gamma, default=DEFAULT_GAMMA,
                   help=f"sub-intervals per attribute, one value or a comma list (default: {DEFAULT_GAMMA})")
    p.add_argument("--tau", type=float, default=d.tau, help=f"margin (default: {d.tau})")
    p.add_argument("--k", type=int, default=d.k, help=f"factor dimension (default: {d.k})")
    p.add_argument("--lr", type=float, default=d.eta, help=f"learning rate (default: {d.eta})")
    p.add_argument("--iters", type=int, default=d.iters, help=f"epochs (default: {d.iters})")
    p.add_argument("--l1", type=float, default=d.lambda1, help=f"L2 weight on u (default: {d.lambda1})")
    p.add_argument("--l2", type=float, default=d.lambda2, help=f"L2 weight on V (default: {d.lambda2})")
    p.add_argument("--sigma", type=float, default=d.sigma, help=f"std of the V initialization (default: {d.sigma})")
    p.add_argument("--seed", type=int, default=d.seed, help=f"random seed (default: {d.seed})")
    p.add_argument("--monotone", default=None,
                   help="comma list of attribute names to constrain non-decreasing, or 'all' (default: none)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xofm", description="Explainable ordinal factorization model")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and write it as JSON")
    _add_data(p)
    _add_hyper(p)
    p.add_argument("--out", default="model.json", help="model file (default: model.json)")

    p = sub.add_parser("predict", help="predict class intervals and labels")
    p.add_argument("--model", required=True, help="model file written by train")
    p.add_argument("--data", required=True, help="CSV holding the model's attribute columns")
    p.add_argument("--out", default="-", help="predictions CSV (default: standard output)")

    p = sub.add_parser("evaluate", help="mean accuracy/MAE over repeated random splits")
    _add_data(p)
    _add_hyper(p)
    p.add_argument("--trials", type=int, default=30, help="number of random splits (default: 30)")
    p.add_argument("--train-fraction", type=float, default=0.8, help="training share (default: 0.8)")
    p.add_argument("--split-seed", type=int, default=None, help="seed for splits and folds (default: --seed)")
    p.add_argument("--cv", action="store_true",
                   help="select gamma and tau by cross-validation over the default grid first")
    p.add_argument("--folds", type=int, default=5, help="folds for --cv (default: 5)")
    p.add_argument("--out", default="results.csv", help="per-trial results CSV (default: results.csv)")

    p = sub.add_parser("cv", help="select gamma and tau by k-fold cross-validation")
    _add_data(p)
    _add_hyper(p)
    p.add_argument("--folds", type=int, default=5, help="number of folds (default: 5)")

    p = sub.add_parser("explain", help="export score functions and interaction grids")
    p.add_argument("--model", required=True, help="model file written by train")
    p.add_argument("--out", default="report.json", help="report JSON path; CSVs go alongside (default: report.json)")
    p.add_argument("--pair", action="append", default=[],
                   help="attribute pair 'a,b' whose interaction grid to export; repeatable")
    return parser


def _monotone(spec, attr_names):
    if spec is None:
        return False
    if spec.strip().lower() == "all":
        return True
    names = [s.strip() for s in spec.split(",") if s.strip()]
    unknown = [n for n in names if n not in attr_names]
    if unknown:
        raise DataError(f"--monotone names unknown attributes: {', '.join(unknown)}")
    return tuple(a in names for a in attr_names)


def _hyper(args, attr_names) -> Hyperparams:
    return Hyperparams(tau=args.tau, eta=args.lr, iters=args.iters, lambda1=args.l1, lambda2=args.l2,
                       k=args.k, sigma=args.sigma, seed=args.seed, gamma=args.gamma,
                       monotone=_monotone(args.monotone, attr_names))


def cmd_train(args) -> int:
    ds = load_csv(args.data, args.label_column)
    hp = _hyper(args, ds.attr_names)
    model = fit(ds, hp)
    save_model(model, args.out)
    print(f"training loss: {training_loss(model, ds, hp)!r}")
    print(f"wrote {args.out} (gamma={model.gamma}, k={model.k})")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    X = load_attributes(args.data, model.attr_names)
    preds = predict_batch(X, model)
    write_predictions(preds, model.n_classes, "/dev/stdout" if args.out == "-" else args.out)
    return 0


def cmd_evaluate(args) -> int:
    ds = load_csv(args.data, args.label_column)
    hp = _hyper(args, ds.attr_names)
    split_seed = args.seed if args.split_seed is None else args.split_seed
    spec = SplitSpec(train_fraction=args.train_fraction, seed=split_seed, n_trials=args.trials, n_folds=args.folds)
    if args.cv:
        hp = cross_validate(ds, default_grid(hp), n_folds=args.folds, seed=split_seed)
        print(f"cv selected gamma={hp.gamma} tau={hp.tau}")
    summary = run_trials(ds, hp, spec)
    write_trials_csv(summary, args.out)
    print("trial,acc,mae")
    for t, m in enumerate(summary.trials):
        print(f"{t},{m.acc!r},{m.mae!r}")
    print(summary.summary_line())
    return 0


def cmd_cv(args) -> int:
    ds = load_csv(args.data, args.label_column)
    hp = _hyper(args, ds.attr_names)
    grid = default_grid(hp)
    best, results = cross_validate(ds, grid, n_folds=args.folds, seed=args.seed, return_scores=True)
    print("gamma,tau,acc,mae")
    for g, (acc, err) in zip(grid, results):
        print(f"{g.gamma},{g.tau!r},{acc!r},{err!r}")
    print(f"selected gamma={best.gamma} tau={best.tau}")
    return 0


def cmd_explain(args) -> int:
    model = load_model(args.model)
    pairs = []
    for text in args.pair:
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 2:
            raise DataError(f"--pair expects 'a,b', got {text!r}")
        unknown = [a for a in parts if a not in model.attr_names]
        if unknown:
            raise DataError(f"--pair names unknown attributes: {', '.join(unknown)}")
        pairs.append(tuple(parts))
    for path in export_report(model, args.out, pairs):
        print(f"wrote {path}")
    return 0


COMMANDS = {"train": cmd_train, "predict": cmd_predict, "evaluate": cmd_evaluate, "cv": cmd_cv,
            "explain": cmd_explain}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DataError, ModelFormatError, InferenceError, OSError) as exc:
        print(f"xofm: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as exc:
        print(f"xofm: training failed: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except ValueError as exc:
        print(f"xofm: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
