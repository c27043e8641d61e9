"""Domain model for issue discussion threads.

Covers the raw thread structure (thread, comments), the unit of annotation
(quotes with character spans), the two-level label schema, ingestion of
thread JSON and gold-label CSV files, and rule-based sentence segmentation.

Thread JSON schema (one file per issue)::

    {"id": int, "title": str,
     "comments": [{"author": str, "association": str,
                   "created_at": "ISO-8601", "body": str}]}

``comments[0]`` is the issue description post.  Unrecognized association
strings map to the ``other`` role.

Gold label CSV header::

    quote_id,level1,component,standpoint,argument_id,span_start,span_end

Empty strings stand for absent optionals.  Rows carrying ``span_start`` and
``span_end`` are manual re-splits: their offsets are relative to the parent
quote's text and the child quotes replace the parent.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from importlib import resources
from typing import Iterable, NamedTuple, Sequence

from .errors import LabelValidationError, QuoteReferenceError, SchemaError, ThreadParseError


class AuthorRole(str, Enum):
    OWNER = "owner"
    COLLABORATOR = "collaborator"
    MEMBER = "member"
    OTHER = "other"


class Level1(str, Enum):
    ARGUMENTATIVE = "argumentative"
    NON_ARGUMENTATIVE = "non_argumentative"


class Component(str, Enum):
    CLAIM = "claim"
    GROUND = "ground"
    WARRANT = "warrant"


class Standpoint(str, Enum):
    SUPPORT = "support"
    AGAINST = "against"


# Platform association strings that map onto a named role; anything else is OTHER.
_ASSOCIATION_TO_ROLE = {
    "OWNER": AuthorRole.OWNER,
    "COLLABORATOR": AuthorRole.COLLABORATOR,
    "MEMBER": AuthorRole.MEMBER,
}


class Span(NamedTuple):
    """Half-open character range ``[start, end)`` into a comment body."""

    start: int
    end: int


@dataclass(frozen=True)
class LabelSet:
    """One code from each annotation dimension.

    Argumentative quotes carry a component and a standpoint (and usually an
    argument id); non-argumentative quotes carry nothing else.  Violations
    raise :class:`LabelValidationError` at construction time.
    """

    level1: Level1
    component: Component | None = None
    standpoint: Standpoint | None = None
    argument_id: int | None = None

    def __post_init__(self) -> None:
        if self.level1 is Level1.ARGUMENTATIVE:
            if self.component is None or self.standpoint is None:
                raise LabelValidationError(
                    "argumentative quote requires both component and standpoint"
                )
        else:
            if self.component is not None or self.standpoint is not None or self.argument_id is not None:
                raise LabelValidationError(
                    "non-argumentative quote must not carry component, standpoint, or argument_id"
                )
        if self.argument_id is not None and self.argument_id < 0:
            raise LabelValidationError("argument_id must be non-negative")

    def to_dict(self) -> dict:
        return {
            "level1": self.level1.value,
            "component": self.component.value if self.component else None,
            "standpoint": self.standpoint.value if self.standpoint else None,
            "argument_id": self.argument_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabelSet":
        return cls(
            level1=Level1(d["level1"]),
            component=Component(d["component"]) if d.get("component") else None,
            standpoint=Standpoint(d["standpoint"]) if d.get("standpoint") else None,
            argument_id=d.get("argument_id"),
        )


@dataclass(frozen=True)
class Comment:
    index: int
    author: str
    author_role: AuthorRole
    is_issue_author: bool
    created_at: float  # UTC epoch seconds
    body: str


@dataclass(frozen=True)
class Quote:
    """A sentence or self-contained segment of a comment body.

    ``text`` equals ``body[span.start:span.end]`` for the owning comment;
    segmentation trims surrounding whitespace into the span itself, so no
    further normalization is applied.
    """

    quote_id: int
    comment_index: int
    span: Span
    text: str
    labels: LabelSet | None = None


@dataclass(frozen=True)
class IssueThread:
    id: int
    title: str
    comments: tuple[Comment, ...]


@dataclass(frozen=True)
class Codebook:
    """The closed enumerations of the coding schema plus display names."""

    version: str
    level1_names: dict[Level1, str]
    component_names: dict[Component, str]
    standpoint_names: dict[Standpoint, str]
    role_names: dict[AuthorRole, str]


CODEBOOK = Codebook(
    version="1.0.0",
    level1_names={
        Level1.ARGUMENTATIVE: "Argumentative",
        Level1.NON_ARGUMENTATIVE: "Non-argumentative",
    },
    component_names={
        Component.CLAIM: "Claim",
        Component.GROUND: "Ground",
        Component.WARRANT: "Warrant",
    },
    standpoint_names={
        Standpoint.SUPPORT: "Support",
        Standpoint.AGAINST: "Against",
    },
    role_names={
        AuthorRole.OWNER: "Owner",
        AuthorRole.COLLABORATOR: "Collaborator",
        AuthorRole.MEMBER: "Member",
        AuthorRole.OTHER: "Other",
    },
)


# ---------------------------------------------------------------------------
# Thread JSON ingestion
# ---------------------------------------------------------------------------


def _require(obj: dict, key: str, kind: type | tuple[type, ...], path: str):
    if key not in obj:
        raise SchemaError(f"missing required field at {path}.{key}")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaError(f"field {path}.{key} has wrong type {type(value).__name__}")
    return value


def _parse_timestamp(raw: str, path: str) -> float:
    # datetime.fromisoformat on 3.10 rejects a trailing Z.
    try:
        dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise SchemaError(f"field {path} is not an ISO-8601 timestamp: {exc}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def parse_thread(raw: bytes | str) -> IssueThread:
    """Parse a raw thread JSON document into an :class:`IssueThread`.

    Raises :class:`ThreadParseError` (naming the byte offset) for malformed
    JSON and :class:`SchemaError` (naming the JSON path) for missing or
    mistyped fields.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ThreadParseError(f"malformed JSON at byte {exc.pos}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top-level document must be an object")

    thread_id = _require(doc, "id", int, "$")
    title = _require(doc, "title", str, "$")
    raw_comments = _require(doc, "comments", list, "$")
    if not raw_comments:
        raise SchemaError("field $.comments must contain at least the issue description")

    comments: list[Comment] = []
    issue_author: str | None = None
    for i, rc in enumerate(raw_comments):
        path = f"$.comments[{i}]"
        if not isinstance(rc, dict):
            raise SchemaError(f"field {path} must be an object")
        author = _require(rc, "author", str, path)
        association = _require(rc, "association", str, path)
        created_raw = _require(rc, "created_at", str, path)
        body = _require(rc, "body", str, path)
        if issue_author is None:
            issue_author = author
        comments.append(
            Comment(
                index=i,
                author=author,
                author_role=_ASSOCIATION_TO_ROLE.get(association.upper(), AuthorRole.OTHER),
                is_issue_author=(author == issue_author),
                created_at=_parse_timestamp(created_raw, f"{path}.created_at"),
                body=body,
            )
        )
    return IssueThread(id=thread_id, title=title, comments=tuple(comments))


def thread_to_json(thread: IssueThread) -> dict:
    """Render a thread back into the input JSON schema (round-trip exact)."""
    return {
        "id": thread.id,
        "title": thread.title,
        "comments": [
            {
                "author": c.author,
                "association": c.author_role.value.upper(),
                "created_at": datetime.fromtimestamp(c.created_at, tz=timezone.utc)
                .isoformat()
                .replace("+00:00", "Z"),
                "body": c.body,
            }
            for c in thread.comments
        ],
    }


# ---------------------------------------------------------------------------
# Sentence segmentation
# ---------------------------------------------------------------------------
#
# Rule table (deterministic, versioned via data/abbreviations.txt):
#
#   B1  A fenced code block (``` ... ```, fence lines included; an unclosed
#       fence runs to the end of the body) is one span.
#   B2  A maximal run of block-quote lines (leading whitespace + '>') is one
#       span.
#   B3  Blank lines separate paragraphs; every other maximal run of lines is
#       one paragraph, split by rule S below.
#   S   Inside a paragraph, a split occurs after a maximal run of [.!?] that
#       is followed by whitespace and then an uppercase letter, or that ends
#       the paragraph, unless a guard fires:
#       G1  the run is a single '.' and the dotted word before it (letters
#           and internal dots) is in the abbreviation list;
#       G2  the run is a single '.' preceded by a digit whose digit/dot token
#           contains an internal dot (version numbers such as "1.32.1.");
#       G3  the non-whitespace token containing the run contains "://" or
#           starts with "www." (URLs).
#   Spans are trimmed of surrounding whitespace; empty spans are dropped.

_FENCE_RE = re.compile(r"^\s*```")
_BLOCKQUOTE_RE = re.compile(r"^\s*>")


def _load_word_list(name: str) -> frozenset[str]:
    text = resources.files("argmine.data").joinpath(name).read_text(encoding="utf-8")
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line.lower())
    return frozenset(entries)


ABBREVIATIONS = _load_word_list("abbreviations.txt")


def _paragraph_sentence_breaks(text: str) -> list[int]:
    """Offsets (relative to ``text``) immediately after each sentence end."""
    breaks: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in ".!?":
            i += 1
            continue
        run_start = i
        while i < n and text[i] in ".!?":
            i += 1
        run_end = i  # exclusive
        if run_end < n and not text[run_end].isspace():
            continue  # mid-token punctuation, e.g. "e.g" inner dot or "x.y"
        j = run_end
        while j < n and text[j].isspace():
            j += 1
        at_end = j >= n
        if not at_end and not text[j].isupper():
            continue
        if _guarded(text, run_start, run_end):
            continue
        breaks.append(run_end)
    return breaks


def _guarded(text: str, run_start: int, run_end: int) -> bool:
    run = text[run_start:run_end]
    # G3: URL tokens are atomic.
    tok_start = run_start
    while tok_start > 0 and not text[tok_start - 1].isspace():
        tok_start -= 1
    token = text[tok_start:run_end]
    if "://" in token or token.lower().startswith("www."):
        return True
    if run != ".":
        return False
    # G1: trailing-dot abbreviations ("e.g.", "etc.", "vs."); list entries
    # are stored dot-free, so drop the matched word's internal dots too.
    k = run_start
    while k > 0 and (text[k - 1].isalpha() or text[k - 1] == "."):
        k -= 1
    word = text[k:run_start].replace(".", "").lower()
    if word and word in ABBREVIATIONS:
        return True
    # G2: version numbers ("1.32.1." keeps its trailing dot).
    if run_start > 0 and text[run_start - 1].isdigit():
        k = run_start
        while k > 0 and (text[k - 1].isdigit() or text[k - 1] == "."):
            k -= 1
        if "." in text[k:run_start]:
            return True
    return False


def _trimmed_span(body: str, start: int, end: int) -> Span | None:
    while start < end and body[start].isspace():
        start += 1
    while end > start and body[end - 1].isspace():
        end -= 1
    if start == end:
        return None
    return Span(start, end)


def segment_comment(body: str) -> list[tuple[Span, str]]:
    """Split a comment body into sentence-level spans.

    Deterministic and pure; see the rule table above.  Every non-whitespace
    character of ``body`` lands in exactly one span and each returned text is
    the exact body slice for its span.
    """
    if not body:
        return []
    # Line offsets so blocks can be mapped back to character spans.
    lines: list[tuple[int, str]] = []
    pos = 0
    for line in body.split("\n"):
        lines.append((pos, line))
        pos += len(line) + 1

    raw_spans: list[tuple[int, int]] = []
    i = 0
    para_start: int | None = None

    def close_paragraph(end_offset: int) -> None:
        nonlocal para_start
        if para_start is None:
            return
        text = body[para_start:end_offset]
        prev = 0
        for brk in _paragraph_sentence_breaks(text):
            raw_spans.append((para_start + prev, para_start + brk))
            prev = brk
        if prev < len(text):
            raw_spans.append((para_start + prev, end_offset))
        para_start = None

    while i < len(lines):
        offset, line = lines[i]
        if _FENCE_RE.match(line):
            close_paragraph(offset)
            j = i + 1
            while j < len(lines) and not _FENCE_RE.match(lines[j][1]):
                j += 1
            end_line = min(j, len(lines) - 1)
            block_end = lines[end_line][0] + len(lines[end_line][1])
            raw_spans.append((offset, block_end))
            i = end_line + 1
        elif _BLOCKQUOTE_RE.match(line):
            close_paragraph(offset)
            j = i
            while j + 1 < len(lines) and _BLOCKQUOTE_RE.match(lines[j + 1][1]):
                j += 1
            block_end = lines[j][0] + len(lines[j][1])
            raw_spans.append((offset, block_end))
            i = j + 1
        elif not line.strip():
            close_paragraph(offset)
            i += 1
        else:
            if para_start is None:
                para_start = offset
            i += 1
    close_paragraph(len(body))

    out: list[tuple[Span, str]] = []
    for start, end in raw_spans:
        span = _trimmed_span(body, start, end)
        if span is not None:
            out.append((span, body[span.start : span.end]))
    return out


def segment_thread(thread: IssueThread) -> list[Quote]:
    """Segment every comment of a thread; quote ids run 0..n-1 thread-wide."""
    quotes: list[Quote] = []
    for comment in thread.comments:
        for span, text in segment_comment(comment.body):
            quotes.append(
                Quote(
                    quote_id=len(quotes),
                    comment_index=comment.index,
                    span=span,
                    text=text,
                )
            )
    return quotes


# ---------------------------------------------------------------------------
# Gold label import
# ---------------------------------------------------------------------------

LABEL_CSV_FIELDS = (
    "quote_id",
    "level1",
    "component",
    "standpoint",
    "argument_id",
    "span_start",
    "span_end",
)


def _row_label(row: dict[str, str], row_num: int) -> LabelSet:
    def opt(field: str) -> str | None:
        value = (row.get(field) or "").strip()
        return value or None

    level1_raw = opt("level1")
    if level1_raw is None:
        raise LabelValidationError(f"row {row_num}: missing level1 code")
    try:
        label = LabelSet(
            level1=Level1(level1_raw),
            component=Component(opt("component")) if opt("component") else None,
            standpoint=Standpoint(opt("standpoint")) if opt("standpoint") else None,
            argument_id=int(opt("argument_id")) if opt("argument_id") else None,
        )
    except ValueError as exc:
        raise LabelValidationError(f"row {row_num}: {exc}") from exc
    except LabelValidationError as exc:
        raise LabelValidationError(f"row {row_num}: {exc}") from exc
    return label


def import_gold_labels(rows: str | Iterable[dict[str, str]], quotes: Sequence[Quote]) -> list[Quote]:
    """Attach gold labels to segmented quotes.

    ``rows`` is CSV text (header per :data:`LABEL_CSV_FIELDS`) or an iterable
    of dict rows.  Rows with ``span_start``/``span_end`` replace their parent
    quote with child quotes whose spans are the given offsets into the parent
    text (trimmed of surrounding whitespace).  The returned list is re-ordered
    by position and quote ids are renumbered 0..n-1.
    """
    if isinstance(rows, str):
        reader = csv.DictReader(io.StringIO(rows))
        row_dicts = list(reader)
    else:
        row_dicts = [dict(r) for r in rows]

    by_quote: dict[int, list[tuple[int, dict[str, str]]]] = {}
    quote_index = {q.quote_id: q for q in quotes}
    for row_num, row in enumerate(row_dicts, start=2):  # header is line 1
        raw_id = (row.get("quote_id") or "").strip()
        if not raw_id:
            raise LabelValidationError(f"row {row_num}: missing quote_id")
        try:
            qid = int(raw_id)
        except ValueError as exc:
            raise LabelValidationError(f"row {row_num}: quote_id is not an integer") from exc
        if qid not in quote_index:
            raise QuoteReferenceError(f"row {row_num}: unknown quote_id {qid}")
        by_quote.setdefault(qid, []).append((row_num, row))

    result: list[Quote] = []
    for quote in quotes:
        entries = by_quote.get(quote.quote_id)
        if not entries:
            result.append(quote)
            continue
        has_span = [bool((r.get("span_start") or "").strip()) for _, r in entries]
        if len(entries) == 1 and not has_span[0]:
            row_num, row = entries[0]
            result.append(replace(quote, labels=_row_label(row, row_num)))
            continue
        if not all(has_span):
            first = entries[0][0]
            raise LabelValidationError(
                f"row {first}: multiple rows for quote {quote.quote_id} require span overrides"
            )
        for row_num, row in entries:
            try:
                sub_start = int(row["span_start"])
                sub_end = int(row["span_end"])
            except (KeyError, ValueError) as exc:
                raise LabelValidationError(f"row {row_num}: bad span override") from exc
            if not (0 <= sub_start < sub_end <= len(quote.text)):
                raise LabelValidationError(
                    f"row {row_num}: span [{sub_start},{sub_end}) outside parent quote"
                )
            span = _trimmed_span(
                quote.text, sub_start, sub_end
            )
            if span is None:
                raise LabelValidationError(f"row {row_num}: span override is all whitespace")
            abs_span = Span(quote.span.start + span.start, quote.span.start + span.end)
            result.append(
                Quote(
                    quote_id=-1,  # renumbered below
                    comment_index=quote.comment_index,
                    span=abs_span,
                    text=quote.text[span.start : span.end],
                    labels=_row_label(row, row_num),
                )
            )

    result.sort(key=lambda q: (q.comment_index, q.span.start))
    return [replace(q, quote_id=i) for i, q in enumerate(result)]
