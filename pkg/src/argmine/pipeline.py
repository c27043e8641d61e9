"""End-to-end orchestration: prepare quotes, run two-layer inference,
compute thread statistics, fetch issues, export viewer files, and serve them.

The central document is the annotated-thread JSON::

    {"thread": <thread JSON>,
     "quotes": [{"quote_id", "comment_index", "span": [s, e], "text",
                 "gold": <labels>|null, "predicted": <labels>|null}]}

``segment`` produces it unlabeled, ``import-labels`` fills ``gold``,
``predict`` fills ``predicted``, and stats/export consume it.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from statistics import median
from typing import Callable, Mapping, Sequence

from .classifiers import CnbModel, LinearModel, cnb_predict_many, svm_predict_many
from .corpus import (
    Comment,
    Component,
    IssueThread,
    LabelSet,
    Level1,
    Quote,
    Span,
    Standpoint,
    parse_thread,
    segment_thread,
    thread_to_json,
)
from .errors import ConfigurationError, FetchError, SchemaError
from .features import (
    ConversationalContext,
    FittedFeatures,
    PreparedQuote,
    politeness_score,
    pos_tag,
)
from .preprocess import filter_quotes, tokenize_quote

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Annotated threads
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnotatedQuote:
    quote: Quote
    gold: LabelSet | None = None
    predicted: LabelSet | None = None


@dataclass(frozen=True)
class AnnotatedThread:
    thread: IssueThread
    quotes: tuple[AnnotatedQuote, ...] = field(default_factory=tuple)


def annotate_segmented(thread: IssueThread, quotes: Sequence[Quote]) -> AnnotatedThread:
    """Wrap segmented (possibly gold-labeled) quotes into an AnnotatedThread."""
    return AnnotatedThread(
        thread=thread,
        quotes=tuple(AnnotatedQuote(quote=q, gold=q.labels) for q in quotes),
    )


def annotated_to_dict(annotated: AnnotatedThread) -> dict:
    return {
        "thread": thread_to_json(annotated.thread),
        "quotes": [
            {
                "quote_id": aq.quote.quote_id,
                "comment_index": aq.quote.comment_index,
                "span": [aq.quote.span.start, aq.quote.span.end],
                "text": aq.quote.text,
                "gold": aq.gold.to_dict() if aq.gold else None,
                "predicted": aq.predicted.to_dict() if aq.predicted else None,
            }
            for aq in annotated.quotes
        ],
    }


def annotated_from_dict(doc: Mapping) -> AnnotatedThread:
    if "thread" not in doc or "quotes" not in doc:
        raise SchemaError("annotated document requires thread and quotes fields")
    thread = parse_thread(json.dumps(doc["thread"]))
    quotes = []
    for q in doc["quotes"]:
        quote = Quote(
            quote_id=q["quote_id"],
            comment_index=q["comment_index"],
            span=Span(q["span"][0], q["span"][1]),
            text=q["text"],
        )
        quotes.append(
            AnnotatedQuote(
                quote=quote,
                gold=LabelSet.from_dict(q["gold"]) if q.get("gold") else None,
                predicted=LabelSet.from_dict(q["predicted"]) if q.get("predicted") else None,
            )
        )
    return AnnotatedThread(thread=thread, quotes=tuple(quotes))


# ---------------------------------------------------------------------------
# Quote preparation (preprocess + per-quote feature inputs)
# ---------------------------------------------------------------------------


def prepare_quotes(thread: IssueThread, quotes: Sequence[Quote]) -> list[PreparedQuote]:
    """Tokenize, tag, and contextualize quotes for feature extraction."""
    ctx = ConversationalContext(thread, quotes)
    prepared = []
    for q in quotes:
        tq = tokenize_quote(q)
        prepared.append(
            PreparedQuote(
                quote_id=q.quote_id,
                surface_tokens=tq.surface_tokens,
                lexical_tokens=tq.lexical_tokens,
                pos_tags=tuple(pos_tag(tq.surface_tokens)),
                conv=tuple(float(v) for v in ctx.vector(q)),
                politeness=politeness_score(tq.surface_tokens),
            )
        )
    return prepared


def retained_quotes(annotated: AnnotatedThread) -> list[Quote]:
    """The quotes that survive the non-alphabetic filter, with labels attached."""
    labeled = [
        q.quote if q.gold is None else Quote(
            quote_id=q.quote.quote_id,
            comment_index=q.quote.comment_index,
            span=q.quote.span,
            text=q.quote.text,
            labels=q.gold,
        )
        for q in annotated.quotes
    ]
    return filter_quotes(labeled)


# ---------------------------------------------------------------------------
# Two-layer inference
# ---------------------------------------------------------------------------


def _predict_labels(model: LinearModel | CnbModel, X) -> list[str]:
    if isinstance(model, LinearModel):
        return svm_predict_many(model, X)
    return cnb_predict_many(model, X)


def run_two_layer_inference(
    annotated: AnnotatedThread,
    level1_model: LinearModel | CnbModel,
    component_model: LinearModel | CnbModel,
    standpoint_model: LinearModel | CnbModel,
    level1_features: FittedFeatures,
    component_features: FittedFeatures,
    standpoint_features: FittedFeatures,
) -> AnnotatedThread:
    """Layer 1 on every retained quote; layers 2a/2b only on predicted-argumentative.

    Predicted labels never carry an argument_id; models must match the
    feature bundles they were trained with (fingerprints are compared).
    """
    for model, fitted, name in (
        (level1_model, level1_features, "level1"),
        (component_model, component_features, "component"),
        (standpoint_model, standpoint_features, "standpoint"),
    ):
        if model.feature_fingerprint and model.feature_fingerprint != fitted.fingerprint():
            raise ConfigurationError(
                f"{name} model was trained with a different feature configuration"
            )

    quotes = filter_quotes([aq.quote for aq in annotated.quotes])
    if not quotes:
        return annotated
    prepared = prepare_quotes(annotated.thread, quotes)
    level1_pred = _predict_labels(level1_model, level1_features.transform(prepared))

    arg_positions = [
        i for i, p in enumerate(level1_pred) if p == Level1.ARGUMENTATIVE.value
    ]
    component_pred: dict[int, str] = {}
    standpoint_pred: dict[int, str] = {}
    if arg_positions:
        arg_prepared = [prepared[i] for i in arg_positions]
        comp = _predict_labels(component_model, component_features.transform(arg_prepared))
        stand = _predict_labels(standpoint_model, standpoint_features.transform(arg_prepared))
        component_pred = dict(zip(arg_positions, comp))
        standpoint_pred = dict(zip(arg_positions, stand))

    predicted_by_id: dict[int, LabelSet] = {}
    for i, q in enumerate(quotes):
        if i in component_pred:
            predicted_by_id[q.quote_id] = LabelSet(
                level1=Level1.ARGUMENTATIVE,
                component=Component(component_pred[i]),
                standpoint=Standpoint(standpoint_pred[i]),
            )
        else:
            predicted_by_id[q.quote_id] = LabelSet(level1=Level1(level1_pred[i]))

    return AnnotatedThread(
        thread=annotated.thread,
        quotes=tuple(
            AnnotatedQuote(
                quote=aq.quote,
                gold=aq.gold,
                predicted=predicted_by_id.get(aq.quote.quote_id, aq.predicted),
            )
            for aq in annotated.quotes
        ),
    )


# ---------------------------------------------------------------------------
# Thread statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreadStats:
    argument_count: int
    quotes_per_argument_median: float | None
    quotes_per_argument_q1: float | None
    quotes_per_argument_q3: float | None
    per_argument_ratio: dict[int, float | None]
    overall_ratio: float | None
    argumentative_fraction: float

    def to_dict(self) -> dict:
        def enc(x):
            if x is None:
                return None
            if x == float("inf"):
                return "inf"
            return x

        return {
            "argument_count": self.argument_count,
            "quotes_per_argument_median": self.quotes_per_argument_median,
            "quotes_per_argument_q1": self.quotes_per_argument_q1,
            "quotes_per_argument_q3": self.quotes_per_argument_q3,
            "per_argument_ratio": {str(k): enc(v) for k, v in sorted(self.per_argument_ratio.items())},
            "overall_ratio": enc(self.overall_ratio),
            "argumentative_fraction": self.argumentative_fraction,
        }


def _exclusive_quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    """Median plus quartiles of the halves, median excluded when n is odd."""
    ordered = sorted(values)
    n = len(ordered)
    med = median(ordered)
    half = n // 2
    lower = ordered[:half]
    upper = ordered[n - half :]
    q1 = median(lower) if lower else med
    q3 = median(upper) if upper else med
    return float(q1), float(med), float(q3)


def _ratio(against: int, support: int) -> float | None:
    if support == 0 and against == 0:
        return None
    if support == 0:
        return float("inf")
    return against / support


def thread_stats(annotated: AnnotatedThread, use: str = "gold") -> ThreadStats:
    """Argument-level counts and against/support ratios for one label source."""
    if use not in ("gold", "predicted"):
        raise ConfigurationError("label source must be gold or predicted")
    labels = [(aq, aq.gold if use == "gold" else aq.predicted) for aq in annotated.quotes]
    present = [ls for _, ls in labels if ls is not None]
    if not present:
        raise ConfigurationError(f"no {use} labels present in this thread")

    argumentative = [ls for ls in present if ls.level1 is Level1.ARGUMENTATIVE]
    by_argument: dict[int, list[LabelSet]] = {}
    for ls in argumentative:
        if ls.argument_id is not None:
            by_argument.setdefault(ls.argument_id, []).append(ls)

    per_argument_ratio: dict[int, float | None] = {}
    for arg_id, members in by_argument.items():
        against = sum(1 for ls in members if ls.standpoint is Standpoint.AGAINST)
        support = sum(1 for ls in members if ls.standpoint is Standpoint.SUPPORT)
        per_argument_ratio[arg_id] = _ratio(against, support)

    total_against = sum(1 for ls in argumentative if ls.standpoint is Standpoint.AGAINST)
    total_support = sum(1 for ls in argumentative if ls.standpoint is Standpoint.SUPPORT)

    if by_argument:
        sizes = [float(len(m)) for m in by_argument.values()]
        q1, med, q3 = _exclusive_quartiles(sizes)
    else:
        q1 = med = q3 = None

    return ThreadStats(
        argument_count=len(by_argument),
        quotes_per_argument_median=med,
        quotes_per_argument_q1=q1,
        quotes_per_argument_q3=q3,
        per_argument_ratio=per_argument_ratio,
        overall_ratio=_ratio(total_against, total_support),
        argumentative_fraction=len(argumentative) / len(present),
    )


# ---------------------------------------------------------------------------
# Issue fetching (offline-replayable)
# ---------------------------------------------------------------------------

Transport = Callable[[str, Mapping[str, str]], tuple[int, Mapping[str, str], bytes]]

API_ROOT = "https://api.github.com"
PAGE_SIZE = 100
RETRY_DELAYS = (1.0, 2.0, 4.0)


def _requests_transport(url: str, headers: Mapping[str, str]):
    import requests

    resp = requests.get(url, headers=dict(headers), timeout=30)
    return resp.status_code, dict(resp.headers), resp.content


def _get_json(
    url: str,
    headers: Mapping[str, str],
    transport: Transport,
    sleep: Callable[[float], None],
    what: str,
):
    last_error = None
    for attempt, delay in enumerate((*RETRY_DELAYS, None)):
        try:
            status, resp_headers, body = transport(url, headers)
        except Exception as exc:  # network-level failure
            last_error = f"{what}: {exc}"
            status = None
        else:
            if status == 200:
                return json.loads(body.decode("utf-8"))
            if status == 404:
                raise FetchError(f"{what}: not found (404)")
            if status == 403 and resp_headers.get("X-RateLimit-Remaining") == "0":
                reset = resp_headers.get("X-RateLimit-Reset", "")
                when = (
                    datetime.fromtimestamp(int(reset), tz=timezone.utc).isoformat()
                    if reset.isdigit()
                    else "unknown time"
                )
                raise FetchError(f"{what}: rate limited, retry after reset at {when}")
            last_error = f"{what}: HTTP {status}"
        if delay is None:
            break
        sleep(delay)
    raise FetchError(f"{last_error} (after {len(RETRY_DELAYS) + 1} attempts)")


def fetch_issue(
    repo: str,
    issue_number: int,
    token: str | None = None,
    transport: Transport | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> dict:
    """Fetch an issue and its comments; returns the input thread JSON schema.

    ``transport`` is injectable so recorded fixtures can replay offline.
    The token comes from the environment (see the CLI's --token-env); it is
    never taken as a flag value.
    """
    transport = transport or _requests_transport
    headers = {"Accept": "application/vnd.github+json"}
    if token:
        headers["Authorization"] = f"Bearer {token}"

    what = f"{repo}#{issue_number}"
    issue = _get_json(f"{API_ROOT}/repos/{repo}/issues/{issue_number}", headers, transport, sleep, what)

    comments = []
    page = 1
    while True:
        url = f"{API_ROOT}/repos/{repo}/issues/{issue_number}/comments?per_page={PAGE_SIZE}&page={page}"
        batch = _get_json(url, headers, transport, sleep, f"{what} comments page {page}")
        comments.extend(batch)
        if len(batch) < PAGE_SIZE:
            break
        page += 1

    def entry(node: Mapping, body_key: str = "body") -> dict:
        return {
            "author": (node.get("user") or {}).get("login", ""),
            "association": node.get("author_association", ""),
            "created_at": node.get("created_at", ""),
            "body": node.get(body_key) or "",
        }

    return {
        "id": issue.get("number", issue_number),
        "title": issue.get("title", ""),
        "comments": [entry(issue)] + [entry(c) for c in comments],
    }


# ---------------------------------------------------------------------------
# Viewer export
# ---------------------------------------------------------------------------


def export_view_json(annotated: AnnotatedThread, max_comments: int | None = None) -> dict:
    """Produce the viewer schema with per-argument quote-ID lists precomputed."""
    comments: Sequence[Comment] = annotated.thread.comments
    quotes = annotated.quotes
    if max_comments is not None:
        comments = comments[:max_comments]
        kept = {c.index for c in comments}
        quotes = tuple(aq for aq in quotes if aq.quote.comment_index in kept)

    arguments: dict[int, list[int]] = {}
    for aq in quotes:
        if aq.gold is not None and aq.gold.argument_id is not None:
            arguments.setdefault(aq.gold.argument_id, []).append(aq.quote.quote_id)

    return {
        "id": annotated.thread.id,
        "title": annotated.thread.title,
        "comments": [
            {
                "index": c.index,
                "author": c.author,
                "created_at": datetime.fromtimestamp(c.created_at, tz=timezone.utc)
                .isoformat()
                .replace("+00:00", "Z"),
            }
            for c in comments
        ],
        "quotes": [
            {
                "id": aq.quote.quote_id,
                "comment_index": aq.quote.comment_index,
                "span": [aq.quote.span.start, aq.quote.span.end],
                "text": aq.quote.text,
                "gold": aq.gold.to_dict() if aq.gold else None,
                "predicted": aq.predicted.to_dict() if aq.predicted else None,
            }
            for aq in quotes
        ],
        "arguments": [
            {"argument_id": arg_id, "quote_ids": sorted(ids)}
            for arg_id, ids in sorted(arguments.items())
        ],
    }


# ---------------------------------------------------------------------------
# Serving (read-only)
# ---------------------------------------------------------------------------

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
}


def resolve_request(directory: Path, method: str, path: str) -> tuple[int, str, bytes]:
    """Pure request resolver behind the HTTP server (testable without sockets).

    Serves GET /api/threads, GET /threads/{id}.json, and static files from
    ``directory``; everything else is 404, non-GET is 405.
    """
    directory = Path(directory)
    if method != "GET":
        return 405, "text/plain; charset=utf-8", b"method not allowed"
    path = path.split("?", 1)[0]

    if path == "/api/threads":
        entries = []
        for file in sorted(directory.glob("*.json")):
            try:
                doc = json.loads(file.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            if isinstance(doc, dict) and "id" in doc and "title" in doc and "quotes" in doc:
                entries.append({"id": doc["id"], "title": doc["title"], "file": file.name})
        entries.sort(key=lambda e: e["id"])
        return 200, "application/json", json.dumps(entries, indent=2).encode()

    if path.startswith("/threads/"):
        name = path[len("/threads/") :]
        target = (directory / name).resolve()
        if (
            name.endswith(".json")
            and "/" not in name
            and target.is_file()
            and target.parent == directory.resolve()
        ):
            return 200, "application/json", target.read_bytes()
        return 404, "text/plain; charset=utf-8", b"not found"

    name = path.lstrip("/") or "index.html"
    target = (directory / name).resolve()
    try:
        target.relative_to(directory.resolve())
    except ValueError:
        return 404, "text/plain; charset=utf-8", b"not found"
    if target.is_file():
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        return 200, ctype, target.read_bytes()
    return 404, "text/plain; charset=utf-8", b"not found"


def serve(directory: Path, port: int) -> None:
    """Blocking read-only HTTP server over an export directory."""
    from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

    directory = Path(directory)

    class Handler(BaseHTTPRequestHandler):
        def _respond(self) -> None:
            status, ctype, body = resolve_request(directory, self.command, self.path)
            self.send_response(status)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self) -> None:  # noqa: N802 (stdlib naming)
            self._respond()

        def do_POST(self) -> None:  # noqa: N802
            self._respond()

        def do_PUT(self) -> None:  # noqa: N802
            self._respond()

        def do_DELETE(self) -> None:  # noqa: N802
            self._respond()

        def log_message(self, fmt: str, *args) -> None:
            log.info("%s " + fmt, self.address_string(), *args)

    server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
    log.info("serving %s on http://127.0.0.1:%d", directory, port)
    try:
        server.serve_forever()
    finally:
        server.server_close()


# ---------------------------------------------------------------------------
# Corpus assembly over annotated documents
# ---------------------------------------------------------------------------


def task_labels(annotated_docs: Sequence[AnnotatedThread], task: str):
    """Collect (prepared quotes, labels) for one task across documents.

    level1 uses every retained gold-labeled quote; component and standpoint
    admit only gold-argumentative quotes.
    """
    if task not in ("level1", "component", "standpoint"):
        raise ConfigurationError(f"unknown task {task!r}")
    prepared_all: list[PreparedQuote] = []
    labels: list[str] = []
    id_offset = 0
    for annotated in annotated_docs:
        quotes = [q for q in retained_quotes(annotated) if q.labels is not None]
        if task in ("component", "standpoint"):
            quotes = [q for q in quotes if q.labels.level1 is Level1.ARGUMENTATIVE]
        if not quotes:
            id_offset += 100000
            continue
        prepared = prepare_quotes(annotated.thread, quotes)
        for pq, q in zip(prepared, quotes):
            # offset ids so quotes from different threads never collide
            prepared_all.append(
                PreparedQuote(
                    quote_id=pq.quote_id + id_offset,
                    surface_tokens=pq.surface_tokens,
                    lexical_tokens=pq.lexical_tokens,
                    pos_tags=pq.pos_tags,
                    conv=pq.conv,
                    politeness=pq.politeness,
                )
            )
            if task == "level1":
                labels.append(q.labels.level1.value)
            elif task == "component":
                labels.append(q.labels.component.value)
            else:
                labels.append(q.labels.standpoint.value)
        id_offset += 100000
    if not prepared_all:
        raise ConfigurationError(f"no labeled quotes available for task {task!r}")
    return prepared_all, labels
