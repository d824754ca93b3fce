"""Command-line front end: scales, stats, synth, fit, predict, eval, compare.

Exit codes: 0 success, 2 input/validation error, 3 convergence failure,
4 internal error. Diagnostics go to stderr; machine-readable output goes
to files or stdout only.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import compare as compare_mod
from . import data, evaluation, oprobit, plots, scales, serialize, synth
from .errors import NotConverged, RatingKitError
from .modelspec import ModelSpec, PRESETS, load_model_spec

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_INTERNAL = 4


def _err(message):
    print(f"error: {message}", file=sys.stderr)


def _info(message):
    print(message, file=sys.stderr)


def _scale_arg(parser, default=None, required=False):
    parser.add_argument("--scale", choices=[k.value for k in scales.ScaleKind],
                        default=default, required=required)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ratingkit",
        description="Ordered-probit credit-rating models: estimation, "
                    "prediction, evaluation and two-agency comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scales", help="print the rating-scale tables as CSV")
    _scale_arg(p)

    p = sub.add_parser("stats", help="descriptive statistics and correlations")
    p.add_argument("--data", required=True)
    p.add_argument("--columns", default=",".join(synth.PUBLISHED_STAT_COLUMNS),
                   help="comma-separated regressor sources")
    p.add_argument("--out", help="JSON output path (default stdout)")

    p = sub.add_parser("synth", help="write a calibrated synthetic dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True,
                   help="explicit seed; no wall-clock seeding")
    p.add_argument("--out", required=True, help="dataset CSV path")
    p.add_argument("--sidecar", help="config/true-model JSON (default <out>.json)")
    _scale_arg(p, default=scales.ScaleKind.CLASSES8.value)

    p = sub.add_parser("fit", help="fit an ordered-probit rating model")
    p.add_argument("--data", required=True)
    p.add_argument("--spec", required=True, help="model-spec path or preset name")
    _scale_arg(p, required=True)
    p.add_argument("--agency", choices=[a.value for a in scales.Agency],
                   required=True)
    p.add_argument("--out", required=True, help="model artifact JSON path")
    p.add_argument("--ratings-data",
                   help="separate ratings CSV to lag-join onto --data")
    p.add_argument("--lag-months", type=int, default=18)
    p.add_argument("--returns-dir",
                   help="directory of per-company return CSVs for beta/volatility")
    p.add_argument("--vol-exponent", type=float, default=0.5)

    p = sub.add_parser("predict", help="predict rating codes with a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="predictions CSV (default stdout)")

    p = sub.add_parser("eval", help="forecast-error report for a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    _scale_arg(p)
    p.add_argument("--out", help="report JSON (default stdout)")
    p.add_argument("--histogram", help="delta histogram CSV path")
    p.add_argument("--plot", help="render the delta histogram to this image path")

    p = sub.add_parser("compare", help="two-agency disagreement analysis")
    p.add_argument("--data", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--spec", default="split_1s",
                   help="model-spec path or preset for the disagreement models")
    _scale_arg(p, default=scales.ScaleKind.GRADATIONS18.value)
    p.add_argument("--delta-sign",
                   choices=[compare_mod.SP_MINUS_MOODYS, compare_mod.MOODYS_MINUS_SP],
                   default=compare_mod.SP_MINUS_MOODYS)
    p.add_argument("--plot", action="store_true",
                   help="also render the delta histogram as PNG")

    return parser


def _write_or_print(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_observations(args):
    observations, report = data.load_csv(args.data)
    for exc in report.errors:
        _info(f"skipped {exc}")
    for warning in report.warnings:
        _info(f"warning: {warning}")
    _info(f"loaded {report.loaded} rows, skipped {report.skipped}")
    return observations


def _cmd_scales(args):
    text = scales.scale_table_csv()
    if args.scale:
        lines = text.splitlines()
        keep = [lines[0]] + [l for l in lines[1:] if l.startswith(args.scale + ",")]
        text = "\n".join(keep) + "\n"
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_stats(args):
    observations = _load_observations(args)
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    stats = data.descriptive_stats(observations, columns)
    _write_or_print(serialize.dumps(stats.to_dict()), args.out)
    return EXIT_OK


def _cmd_synth(args):
    config = synth.GeneratorConfig(
        n=args.n, seed=args.seed, scale_kind=scales.ScaleKind(args.scale))
    observations, model = synth.generate_dataset(config)
    data.save_csv(observations, args.out)
    sidecar = args.sidecar or args.out + ".json"
    serialize.dump({
        "config": config.to_dict(),
        "true_model": {
            "beta": [float(v) for v in model.beta],
            "thresholds": [float(v) for v in model.thresholds],
            "columns": [
                {"name": r.source, "transform": r.transform}
                for r in model.columns
            ],
            "scale_kind": model.scale_kind.value,
        },
    }, sidecar)
    _info(f"wrote {args.out} ({args.n} rows) and {sidecar}")
    return EXIT_OK


def _cmd_fit(args):
    spec = load_model_spec(args.spec)
    observations = _load_observations(args)
    if args.ratings_data:
        ratings, _ = data.load_csv(args.ratings_data)
        observations, unmatched = data.align_lag(
            observations, ratings, args.lag_months)
        _info(f"lag join: {len(observations)} matched, {unmatched} unmatched")
    if args.returns_dir:
        filled = data.fill_market_risk(observations, args.returns_dir,
                                       args.vol_exponent)
        _info(f"market-risk indicators filled for {filled} companies")
    design = data.build_design_matrix(
        observations, spec, scales.ScaleKind(args.scale),
        scales.Agency(args.agency))
    _info(f"design: {design.n} rows, {design.p} columns, "
          f"{len(design.deleted)} deleted")
    model, diag = oprobit.fit_design(design)
    serialize.dump(oprobit.model_to_dict(model, diag), args.out)
    _info(f"loglik {diag.loglik:.4f}, pseudo-R2 {diag.pseudo_r2_mcfadden:.4f}, "
          f"{diag.iterations} iterations")
    return EXIT_OK


def _model_design(model, observations, need_response=True):
    spec = ModelSpec("artifact", model.columns)
    if need_response:
        return data.build_design_matrix(
            observations, spec, model.scale_kind, model.agency)
    rows, ids = [], []
    for obs in observations:
        values = [data.regressor_value(obs, r) for r in model.columns]
        if any(v is None for v in values):
            continue
        rows.append(values)
        ids.append(obs.company_id)
    return np.array(rows, dtype=float), ids


def _cmd_predict(args):
    model, _ = oprobit.load_model(args.model)
    observations = _load_observations(args)
    x, ids = _model_design(model, observations, need_response=False)
    if len(ids) == 0:
        raise RatingKitError("no rows with complete regressors")
    codes = oprobit.predict(model, x)
    lines = ["company_id,predicted_code,predicted_grade"]
    for cid, code in zip(ids, codes):
        lines.append(f"{cid},{code},{scales.decode(int(code), model.scale_kind)}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_eval(args):
    model, _ = oprobit.load_model(args.model)
    if args.scale and model.scale_kind and args.scale != model.scale_kind.value:
        raise RatingKitError(
            f"scale mismatch: model uses {model.scale_kind.value}, "
            f"--scale says {args.scale}")
    observations = _load_observations(args)
    design = _model_design(model, observations)
    predicted = oprobit.predict(model, design.x)
    report = evaluation.evaluate(design.y, predicted)
    _write_or_print(serialize.dumps(report.to_dict()), args.out)
    if args.histogram:
        with open(args.histogram, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(evaluation.histogram_csv(report))
    if args.plot:
        plots.render_delta_histogram(report.histogram, args.plot,
                                     title="Forecast errors (predicted - actual)")
    return EXIT_OK


def _cmd_compare(args):
    observations = _load_observations(args)
    spec = load_model_spec(args.spec)
    kind = scales.ScaleKind(args.scale)
    pairs = compare_mod.pair(observations, kind)
    if not pairs:
        raise RatingKitError("no companies rated by both agencies")
    _info(f"{len(pairs)} companies rated by both agencies")
    os.makedirs(args.out_dir, exist_ok=True)

    def path(name):
        return os.path.join(args.out_dir, name)

    with open(path("measures.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(compare_mod.measures_csv(pairs, args.delta_sign))
    mean_delta, histogram = compare_mod.summarize(pairs, args.delta_sign)
    with open(path("delta_histogram.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(compare_mod.delta_histogram_csv(pairs, args.delta_sign))
    if args.plot:
        plots.render_delta_histogram(
            histogram, path("delta_histogram.png"),
            title="S&P vs Moody's rating differences")
    fits = compare_mod.fit_disagreement_models(pairs, spec, args.delta_sign)
    serialize.dump({
        "n_pairs": len(pairs),
        "n_modeled": fits.n_used,
        "mean_delta": mean_delta,
        "delta_sign": args.delta_sign,
        "scale_kind": kind.value,
        "estimator_note": "delta and fds models are ordered probits; "
                          "split is a binary probit",
        "delta_offset": fits.delta_offset,
    }, path("summary.json"))
    serialize.dump(oprobit.model_to_dict(fits.delta_model, fits.delta_diag),
                   path("model_delta.json"))
    serialize.dump(oprobit.model_to_dict(fits.fds_model, fits.fds_diag),
                   path("model_fds.json"))
    serialize.dump(oprobit.model_to_dict(fits.split_model, fits.split_diag),
                   path("model_split.json"))
    _info(f"mean delta {mean_delta:.2f}; artifacts in {args.out_dir}")
    return EXIT_OK


_COMMANDS = {
    "scales": _cmd_scales,
    "stats": _cmd_stats,
    "synth": _cmd_synth,
    "fit": _cmd_fit,
    "predict": _cmd_predict,
    "eval": _cmd_eval,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except NotConverged as exc:
        _err(str(exc))
        return EXIT_CONVERGENCE
    except (RatingKitError, OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        _err(f"internal error: {exc!r}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
