"""Command-line interface.

Subcommands: fetch, segment, import-labels, train, evaluate, predict,
stats, kappa, export-view, serve.  All randomized behavior hangs off
--seed, and every subcommand writes byte-identical primary outputs for
identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import evaluation, pipeline
from .classifiers import load_model, save_model, with_fingerprint
from .corpus import import_gold_labels, parse_thread, segment_thread
from .errors import ArgmineError
from .features import features_from_dict, features_to_dict, load_lexicon

log = logging.getLogger(__name__)

TASKS = ("level1", "component", "standpoint")


def _write_json(path: str, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _read_json(path: str):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _parse_range(raw: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in raw.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected two comma-separated integers") from exc
    return lo, hi


def _parse_floats(raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in raw.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated numbers") from exc


def _load_annotated(path: str) -> pipeline.AnnotatedThread:
    doc = _read_json(path)
    if "thread" in doc:
        return pipeline.annotated_from_dict(doc)
    # raw thread JSON: segment on the fly
    thread = parse_thread(json.dumps(doc))
    return pipeline.annotate_segmented(thread, segment_thread(thread))


def _load_corpus(paths) -> list[pipeline.AnnotatedThread]:
    return [_load_annotated(p) for p in paths]


def _lexicon_from_flag(path: str | None):
    if not path:
        return None
    return load_lexicon(Path(path).read_text(encoding="utf-8"))


def _add_eval_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--task", choices=TASKS, default="level1")
    sub.add_argument("--model", choices=("svm", "cnb"), default="svm")
    sub.add_argument(
        "--features",
        default="all",
        help="comma-separated subset of tfidf,pos,politeness,conv,lexicon or all",
    )
    sub.add_argument("--ngram-range", type=_parse_range, default=(1, 3), metavar="A,B")
    sub.add_argument("--pos-ngram-range", type=_parse_range, default=(1, 3), metavar="A,B")
    sub.add_argument("--lexicon", help="category lexicon file enabling the lexicon feature set")
    sub.add_argument("--seed", type=int, default=42)


def build_parser() -> argparse.ArgumentParser:
    # abbreviation is off so e.g. --token never silently matches --token-env
    parser = argparse.ArgumentParser(
        prog="argmine",
        description="Argument mining over issue-tracker discussion threads.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "fetch", help="download an issue thread into the input JSON schema", allow_abbrev=False
    )
    p.add_argument("--repo", required=True, metavar="OWNER/NAME")
    p.add_argument("--issue", required=True, type=int)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--token-env",
        default="GITHUB_TOKEN",
        help="name of the environment variable holding the API token",
    )

    p = sub.add_parser("segment", help="split a thread into quotes", allow_abbrev=False)
    p.add_argument("--thread", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("import-labels", help="attach gold labels to segmented quotes", allow_abbrev=False)
    p.add_argument("--thread", required=True)
    p.add_argument("--labels", required=True, help="gold label CSV")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train one task's model on labeled data", allow_abbrev=False)
    p.add_argument("--data", required=True, action="append", help="annotated thread JSON (repeatable)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--c", type=float, default=1.0, help="SVM cost parameter")
    p.add_argument("--alpha", type=float, default=1.0, help="CNB smoothing")
    _add_eval_flags(p)

    p = sub.add_parser("evaluate", help="nested cross-validation report", allow_abbrev=False)
    p.add_argument("--data", required=True, action="append")
    p.add_argument("--out", help="write the report JSON here")
    p.add_argument("--outer-k", type=int, default=5)
    p.add_argument("--inner-k", type=int, default=3)
    p.add_argument("--grid-c", type=_parse_floats, default=evaluation.DEFAULT_GRID_C)
    p.add_argument("--grid-alpha", type=_parse_floats, default=evaluation.DEFAULT_GRID_ALPHA)
    _add_eval_flags(p)

    p = sub.add_parser("predict", help="two-layer inference over a thread", allow_abbrev=False)
    p.add_argument("--thread", required=True, help="thread JSON or annotated document")
    p.add_argument("--models", required=True, help="directory written by train (all three tasks)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="argument statistics for an annotated thread", allow_abbrev=False)
    p.add_argument("--annotated", required=True)
    p.add_argument("--use", choices=("gold", "predicted"), default="gold")

    p = sub.add_parser("kappa", help="Cohen's kappa between two label files", allow_abbrev=False)
    p.add_argument("--a", required=True, help="one label per line")
    p.add_argument("--b", required=True)

    p = sub.add_parser("export-view", help="write the viewer JSON for a thread", allow_abbrev=False)
    p.add_argument("--annotated", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-comments", type=int, default=None)

    p = sub.add_parser("serve", help="serve exported viewer files (read-only)", allow_abbrev=False)
    p.add_argument("--dir", required=True)
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_fetch(args) -> int:
    token = os.environ.get(args.token_env)
    if not token:
        log.info("environment variable %s is unset; fetching anonymously", args.token_env)
    doc = pipeline.fetch_issue(args.repo, args.issue, token=token)
    _write_json(args.out, doc)
    print(f"wrote {args.out}")
    return 0


def _cmd_segment(args) -> int:
    thread = parse_thread(Path(args.thread).read_bytes())
    quotes = segment_thread(thread)
    annotated = pipeline.annotate_segmented(thread, quotes)
    _write_json(args.out, pipeline.annotated_to_dict(annotated))
    print(f"{len(quotes)} quotes from {len(thread.comments)} comments -> {args.out}")
    return 0


def _cmd_import_labels(args) -> int:
    thread = parse_thread(Path(args.thread).read_bytes())
    quotes = segment_thread(thread)
    labeled = import_gold_labels(Path(args.labels).read_text(encoding="utf-8"), quotes)
    annotated = pipeline.annotate_segmented(thread, labeled)
    _write_json(args.out, pipeline.annotated_to_dict(annotated))
    n_labeled = sum(1 for q in labeled if q.labels is not None)
    print(f"{n_labeled}/{len(labeled)} quotes labeled -> {args.out}")
    return 0


def _cmd_train(args) -> int:
    corpus = _load_corpus(args.data)
    prepared, labels = pipeline.task_labels(corpus, args.task)
    hyper = args.c if args.model == "svm" else args.alpha
    fitted, model = evaluation.fit_and_train(
        prepared,
        labels,
        model_kind=args.model,
        hyper=hyper,
        feature_sets=args.features.split(","),
        seed=args.seed,
        tfidf_range=args.ngram_range,
        pos_range=args.pos_ngram_range,
        lexicon=_lexicon_from_flag(args.lexicon),
    )
    model = with_fingerprint(model, fitted.fingerprint())
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_model(model, out_dir / f"{args.task}.model.txt")
    _write_json(str(out_dir / f"{args.task}.features.json"), features_to_dict(fitted))
    print(f"trained {args.model} for {args.task} on {len(labels)} quotes -> {out_dir}")
    return 0


def _cmd_evaluate(args) -> int:
    corpus = _load_corpus(args.data)
    prepared, labels = pipeline.task_labels(corpus, args.task)
    report = evaluation.nested_cv(
        prepared,
        labels,
        task=args.task,
        model_kind=args.model,
        feature_sets=args.features.split(","),
        grid=evaluation.HyperGrid(svm_c=tuple(args.grid_c), cnb_alpha=tuple(args.grid_alpha)),
        outer_k=args.outer_k,
        inner_k=args.inner_k,
        seed=args.seed,
        tfidf_range=args.ngram_range,
        pos_range=args.pos_ngram_range,
        lexicon=_lexicon_from_flag(args.lexicon),
    )
    print(report.to_table())
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n", encoding="utf-8")
        print(f"report -> {args.out}")
    return 0


def _cmd_predict(args) -> int:
    annotated = _load_annotated(args.thread)
    models_dir = Path(args.models)
    loaded = {}
    for task in TASKS:
        model_path = models_dir / f"{task}.model.txt"
        features_path = models_dir / f"{task}.features.json"
        if not model_path.is_file() or not features_path.is_file():
            raise ArgmineError(f"missing trained artifacts for task {task} in {models_dir}")
        loaded[task] = (load_model(model_path), features_from_dict(_read_json(str(features_path))))
    result = pipeline.run_two_layer_inference(
        annotated,
        loaded["level1"][0],
        loaded["component"][0],
        loaded["standpoint"][0],
        loaded["level1"][1],
        loaded["component"][1],
        loaded["standpoint"][1],
    )
    _write_json(args.out, pipeline.annotated_to_dict(result))
    n_pred = sum(1 for q in result.quotes if q.predicted is not None)
    print(f"predicted labels for {n_pred} quotes -> {args.out}")
    return 0


def _cmd_stats(args) -> int:
    annotated = pipeline.annotated_from_dict(_read_json(args.annotated))
    stats = pipeline.thread_stats(annotated, use=args.use)
    print(json.dumps(stats.to_dict(), indent=2))
    return 0


def _cmd_kappa(args) -> int:
    a = [ln.strip() for ln in Path(args.a).read_text(encoding="utf-8").splitlines() if ln.strip()]
    b = [ln.strip() for ln in Path(args.b).read_text(encoding="utf-8").splitlines() if ln.strip()]
    print(f"{evaluation.cohens_kappa(a, b):.6f}")
    return 0


def _cmd_export_view(args) -> int:
    annotated = pipeline.annotated_from_dict(_read_json(args.annotated))
    doc = pipeline.export_view_json(annotated, max_comments=args.max_comments)
    _write_json(args.out, doc)
    print(f"viewer export -> {args.out}")
    return 0


def _cmd_serve(args) -> int:
    pipeline.serve(Path(args.dir), args.port)
    return 0


_COMMANDS = {
    "fetch": _cmd_fetch,
    "segment": _cmd_segment,
    "import-labels": _cmd_import_labels,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "predict": _cmd_predict,
    "stats": _cmd_stats,
    "kappa": _cmd_kappa,
    "export-view": _cmd_export_view,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ArgmineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
