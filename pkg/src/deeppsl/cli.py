"""Command-line entry point.

Subcommands: ground (rules -> potential dump), train, eval, check
(self-verification), synth (synthetic dataset files). Exit codes: 0
success, 2 input error, 3 numeric failure. Every command is deterministic
given --seed; --threads (or DEEPPSL_THREADS) caps inference workers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .checks import run_checks
from .config import load_run_config
from .errors import InputError, NumericError
from .hlmrf.instance import dump_potentials
from .io import dpm1
from .io.textfiles import (load_attribute_matrix, read_labels, read_split,
                           write_classes, write_labels, write_split)
from .nn.checkpoint import load_mlp, save_mlp
from .rules.ground import ground, potentials_from_grounding
from .rules.parser import parse_domain, parse_program
from .train.loop import predict_batch, train
from .zsl.evaluate import evaluate
from .zsl.rulegen import build_template
from .zsl.synth import synthesize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("DEEPPSL_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"DEEPPSL_THREADS={env!r} is not an integer") from None
    return 1


def _load_samples(features_path, labels_path, class_list):
    """Features + labels filtered to the given classes; labels as indices."""
    features = dpm1.read_matrix(features_path)
    labels = read_labels(labels_path)
    if len(labels) != features.shape[0]:
        raise InputError(
            f"{labels_path}: {len(labels)} labels for {features.shape[0]} feature rows")
    index_of = {c: i for i, c in enumerate(class_list)}
    keep = [i for i, name in enumerate(labels) if name in index_of]
    sel = features[keep]
    idx = np.array([index_of[labels[i]] for i in keep], dtype=np.int64)
    names = [labels[i] for i in keep]
    return sel, idx, names


def cmd_ground(args) -> int:
    program = parse_program(_read_text(args.rules), path=args.rules)
    domain = parse_domain(_read_text(args.domain), path=args.domain)
    grounding = ground(program, domain)
    potentials = potentials_from_grounding(grounding)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dump_potentials(potentials))
    print(f"{len(grounding.ground_rules)} ground rules")
    print(f"{len(potentials)} potentials "
          f"({grounding.n_free} free, {grounding.n_obs} observed atoms)")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    run = load_run_config(args.config, args.set)
    matrix = load_attribute_matrix(args.attributes)
    split = read_split(args.split)
    missing = [c for c in split.train if c not in matrix.class_names]
    if missing:
        raise InputError(f"split train classes missing from attribute matrix: {missing}")
    features, labels, _ = _load_samples(args.features, args.labels, list(split.train))
    if features.shape[0] == 0:
        raise InputError("no training samples with labels in the train split")
    template = build_template(matrix, list(split.train), args.weight_mode)
    config = run.train_config()
    params, history = train(features, labels, template, config, seed=run.seed,
                            metrics_path=args.metrics_out, threads=_threads(args))
    save_mlp(args.model_out, params)
    if history.epoch:
        final_epoch = history.epoch[-1]
        print(f"final train L1 {history.epoch_mean_loss(final_epoch):.6f}")
        print(f"delta {history.epoch_delta[-1]:.6e}")
    else:
        print("no epochs run; wrote initial weights")
    print(f"wrote {args.model_out} and {args.metrics_out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    run = load_run_config(args.config, args.set)
    params = load_mlp(args.model)
    matrix = load_attribute_matrix(args.attributes)
    split = read_split(args.split)
    missing = [c for c in split.test if c not in matrix.class_names]
    if missing:
        raise InputError(f"split test classes missing from attribute matrix: {missing}")
    features, _, names = _load_samples(args.features, args.labels, list(split.test))
    if features.shape[0] == 0:
        raise InputError("no evaluation samples with labels in the test split")
    if features.shape[1] != params.input_dim:
        raise InputError(
            f"feature dim {features.shape[1]} does not match model input "
            f"{params.input_dim}")
    template = build_template(matrix, list(split.test), args.weight_mode)
    pred_idx, _ = predict_batch(params, template, features,
                                run.solver_config(training=False),
                                threads=_threads(args))
    predictions = [template.class_names[i] for i in pred_idx]
    report = evaluate(predictions, names, list(split.test))
    for cls in split.test:
        if cls in report.per_class_accuracy:
            print(f"{cls}: {report.per_class_accuracy[cls]:.4f}")
    if report.excluded_classes:
        print(f"excluded (no samples): {', '.join(report.excluded_classes)}")
    print(f"class-averaged top-1 accuracy: {report.class_averaged_accuracy:.4f}")
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
    print(f"wrote {args.report}")
    return EXIT_OK


def cmd_check(args) -> int:
    results = run_checks(args.mode, seed=args.seed, corrupt=args.corrupt)
    for r in results:
        print(r.line())
    if all(r.passed for r in results):
        print("all checks passed")
        return EXIT_OK
    print("checks FAILED", file=sys.stderr)
    return EXIT_NUMERIC


def cmd_synth(args) -> int:
    if args.noise_sigma < 0:
        raise InputError("--noise-sigma must be >= 0")
    try:
        ds = synthesize(seed=args.seed, n_train_classes=args.train_classes,
                        n_test_classes=args.test_classes,
                        n_attributes=args.attributes_dim,
                        feature_dim=args.feature_dim,
                        per_class=args.per_class, noise_sigma=args.noise_sigma)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    os.makedirs(args.out_dir, exist_ok=True)
    features = np.vstack([ds.train.features, ds.test.features])
    labels = ds.train.label_names() + ds.test.label_names()
    dpm1.write_matrix(os.path.join(args.out_dir, "features.dpm1"), features)
    write_labels(os.path.join(args.out_dir, "labels.txt"), labels)
    dpm1.write_matrix(os.path.join(args.out_dir, "attributes.dpm1"), ds.matrix.values)
    write_classes(os.path.join(args.out_dir, "classes.txt"), ds.matrix.class_names)
    write_split(os.path.join(args.out_dir, "split.txt"), ds.split)
    manifest = {
        "seed": args.seed,
        "train_classes": args.train_classes,
        "test_classes": args.test_classes,
        "attributes": args.attributes_dim,
        "feature_dim": args.feature_dim,
        "per_class": args.per_class,
        "noise_sigma": args.noise_sigma,
        "noiseless": args.noise_sigma == 0.0,
    }
    with open(os.path.join(args.out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    print(f"wrote dataset ({features.shape[0]} samples, "
          f"{args.train_classes}+{args.test_classes} classes) to {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deeppsl",
        description="Rule grounding, MAP inference, and end-to-end training "
                    "of neural predicates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", help="parse and ground a rule program")
    p.add_argument("--rules", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_ground)

    def common(p):
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable; wins over --config)")
        p.add_argument("--threads", type=int, default=None,
                       help="inference worker cap (default: DEEPPSL_THREADS or 1)")
        p.add_argument("--weight-mode", choices=("continuous", "binarized"),
                       default="continuous")

    p = sub.add_parser("train", help="train the attribute network end to end")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--attributes", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--metrics-out", required=True)
    common(p)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="score a trained model on the test split")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--attributes", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--report", default="eval_report.json")
    common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("check", help="run self-verification suites")
    p.add_argument("--mode", choices=("gradients", "oracle", "convexity",
                                      "surrogate", "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--train-classes", type=int, required=True)
    p.add_argument("--test-classes", type=int, required=True)
    p.add_argument("--attributes-dim", type=int, required=True)
    p.add_argument("--feature-dim", type=int, required=True)
    p.add_argument("--per-class", type=int, required=True)
    p.add_argument("--noise-sigma", type=float, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
