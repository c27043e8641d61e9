"""Feature extraction: TF-IDF n-grams, POS n-grams, politeness, lexicon
categories, and conversational features, assembled into a sparse matrix.

All fit/transform pairs follow a strict split discipline: vocabularies and
statistics come from training-fold quotes only, and every fitted bundle
exposes a content fingerprint so the evaluation harness can prove that no
test-fold data influenced it.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

from .corpus import AuthorRole, IssueThread, Quote
from .errors import ConfigurationError, FitError
from .preprocess import SPECIAL_TOKEN_RULES, replace_special_tokens, tokenize

NGRAM_JOIN = "\x1f"  # unit separator between n-gram members

FEATURE_SET_ORDER = ("tfidf", "lexicon", "politeness", "pos", "conv")

POS_TAGS = (
    "NOUN",
    "VERB",
    "ADJ",
    "ADV",
    "PRON",
    "DET",
    "ADP",
    "NUM",
    "CONJ",
    "PRT",
    "PUNCT",
    "X",
)


# ---------------------------------------------------------------------------
# Sparse carriers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseVector:
    """Sorted (index, value) pairs; no stored zeros."""

    dimension: int
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        prev = -1
        for idx, value in self.entries:
            if idx <= prev or idx >= self.dimension:
                raise ValueError("sparse indices must be strictly increasing and in range")
            if value == 0.0:
                raise ValueError("sparse entries must be nonzero")
            prev = idx

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension)
        for idx, value in self.entries:
            dense[idx] = value
        return dense

    def norm(self) -> float:
        return math.sqrt(sum(v * v for _, v in self.entries))


def _sparse_from_pairs(dimension: int, pairs: dict[int, float]) -> SparseVector:
    entries = tuple(sorted((i, v) for i, v in pairs.items() if v != 0.0))
    return SparseVector(dimension=dimension, entries=entries)


@dataclass(frozen=True)
class FeatureMatrix:
    """Row-per-quote sparse matrix with a column-offset map per feature set."""

    vectors: tuple[SparseVector, ...]
    offsets: dict[str, tuple[int, int]]  # set name -> (start, width)
    quote_ids: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return self.vectors[0].dimension if self.vectors else 0

    def to_array(self) -> np.ndarray:
        if not self.vectors:
            return np.zeros((0, 0))
        out = np.zeros((len(self.vectors), self.dimension))
        for row, vec in enumerate(self.vectors):
            for idx, value in vec.entries:
                out[row, idx] = value
        return out


# ---------------------------------------------------------------------------
# TF-IDF
# ---------------------------------------------------------------------------


def _ngrams(tokens: Sequence[str], lo: int, hi: int) -> list[str]:
    out = []
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            out.append(NGRAM_JOIN.join(tokens[i : i + n]))
    return out


@dataclass(frozen=True)
class TfidfModel:
    ngram_range: tuple[int, int]
    vocabulary: dict[str, int]  # n-gram -> column, bijective onto [0, |vocab|)
    idf: np.ndarray
    document_count: int

    @property
    def dimension(self) -> int:
        return len(self.vocabulary)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"tfidf|{self.ngram_range}|{self.document_count}|".encode())
        terms = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        for term in terms:
            h.update(term.encode())
            h.update(b"\x00")
            h.update(repr(float(self.idf[self.vocabulary[term]])).encode())
            h.update(b"\x01")
        return h.hexdigest()


def fit_tfidf(docs: Sequence[Sequence[str]], ngram_range: tuple[int, int] = (1, 3)) -> TfidfModel:
    """Build vocabulary and idf weights from training documents only.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1.
    """
    lo, hi = ngram_range
    if not (1 <= lo <= hi):
        raise ConfigurationError(f"bad ngram range {ngram_range}")
    if not docs:
        raise FitError("cannot fit tf-idf on an empty corpus")
    df: dict[str, int] = {}
    for tokens in docs:
        for gram in set(_ngrams(tokens, lo, hi)):
            df[gram] = df.get(gram, 0) + 1
    vocabulary = {gram: i for i, gram in enumerate(sorted(df))}
    n = len(docs)
    idf = np.empty(len(vocabulary))
    for gram, col in vocabulary.items():
        idf[col] = math.log((1 + n) / (1 + df[gram])) + 1.0
    return TfidfModel(ngram_range=(lo, hi), vocabulary=vocabulary, idf=idf, document_count=n)


def transform_tfidf(model: TfidfModel, tokens: Sequence[str]) -> SparseVector:
    """Counts times idf, then L2 normalization; unknown n-grams are ignored."""
    lo, hi = model.ngram_range
    counts: dict[int, float] = {}
    for gram in _ngrams(tokens, lo, hi):
        col = model.vocabulary.get(gram)
        if col is not None:
            counts[col] = counts.get(col, 0.0) + 1.0
    for col in counts:
        counts[col] *= float(model.idf[col])
    norm = math.sqrt(sum(v * v for v in counts.values()))
    if norm > 0:
        counts = {c: v / norm for c, v in counts.items()}
    return _sparse_from_pairs(model.dimension, counts)


# ---------------------------------------------------------------------------
# POS tagging and POS n-grams
# ---------------------------------------------------------------------------


def _load_pos_lexicon() -> dict[str, str]:
    text = resources.files("argmine.data").joinpath("pos_lexicon.txt").read_text(
        encoding="utf-8"
    )
    lexicon: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        if tag not in POS_TAGS:
            raise ConfigurationError(f"unknown POS tag {tag!r} in lexicon")
        lexicon[word] = tag
    return lexicon


_POS_LEXICON = _load_pos_lexicon()


def pos_tag(surface_tokens: Sequence[str]) -> list[str]:
    """One universal tag per token: lexicon lookup, then suffix rules, else X."""
    tags = []
    for tok in surface_tokens:
        low = tok.lower()
        tag = _POS_LEXICON.get(low)
        if tag is None:
            if not any(ch.isalnum() for ch in tok):
                tag = "PUNCT"
            elif all(ch.isdigit() or ch in ".,-" for ch in tok):
                tag = "NUM"
            elif low.endswith("ly"):
                tag = "ADV"
            elif low.endswith(("ing", "ed")):
                tag = "VERB"
            elif low.endswith("s") and _POS_LEXICON.get(low[:-1]) == "NOUN":
                tag = "NOUN"
            else:
                tag = "X"
        tags.append(tag)
    return tags


@dataclass(frozen=True)
class PosNgramModel:
    ngram_range: tuple[int, int]
    vocabulary: dict[str, int]

    @property
    def dimension(self) -> int:
        return len(self.vocabulary)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"pos|{self.ngram_range}|".encode())
        for gram in sorted(self.vocabulary, key=self.vocabulary.__getitem__):
            h.update(gram.encode())
            h.update(b"\x00")
        return h.hexdigest()


def fit_pos_ngrams(tag_lists: Sequence[Sequence[str]], ngram_range: tuple[int, int] = (1, 3)) -> PosNgramModel:
    lo, hi = ngram_range
    if not (1 <= lo <= hi):
        raise ConfigurationError(f"bad ngram range {ngram_range}")
    grams = set()
    for tags in tag_lists:
        grams.update(_ngrams(tags, lo, hi))
    return PosNgramModel(ngram_range=(lo, hi), vocabulary={g: i for i, g in enumerate(sorted(grams))})


def pos_ngram_features(model: PosNgramModel, tags: Sequence[str]) -> SparseVector:
    """Tag n-gram counts, L2-normalized; unseen n-grams are ignored."""
    lo, hi = model.ngram_range
    counts: dict[int, float] = {}
    for gram in _ngrams(tags, lo, hi):
        col = model.vocabulary.get(gram)
        if col is not None:
            counts[col] = counts.get(col, 0.0) + 1.0
    norm = math.sqrt(sum(v * v for v in counts.values()))
    if norm > 0:
        counts = {c: v / norm for c, v in counts.items()}
    return _sparse_from_pairs(model.dimension, counts)


# ---------------------------------------------------------------------------
# Politeness
# ---------------------------------------------------------------------------

_IMPERATIVE_SKIP = frozenset({"just", "simply", "now", "then"})


def _load_markers() -> tuple[dict[str, float], frozenset[str], str]:
    text = resources.files("argmine.data").joinpath("politeness_markers.txt").read_text(
        encoding="utf-8"
    )
    weights: dict[str, float] = {}
    imperative: set[str] = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        category, weight, word = line.split("\t")
        if category == "imperative":
            imperative.add(word)
        else:
            weights.setdefault(word, float(weight))  # first category wins
    digest = hashlib.sha256(text.encode()).hexdigest()
    return weights, frozenset(imperative), digest


_MARKER_WEIGHTS, _IMPERATIVE_VERBS, MARKER_TABLE_DIGEST = _load_markers()


def politeness_score(surface_tokens: Sequence[str]) -> float:
    """Logistic of the signed marker sum; exactly 0.5 with no markers.

    Gratitude/please/hedge/deference/dismissive markers count per occurrence
    anywhere in the quote; the imperative penalty fires once when the first
    alphabetic token (after just/simply/now/then) is a known imperative verb.
    """
    total = 0.0
    for tok in surface_tokens:
        weight = _MARKER_WEIGHTS.get(tok.lower())
        if weight is not None:
            total += weight
    for tok in surface_tokens:
        low = tok.lower()
        if not any(ch.isalpha() for ch in low):
            continue
        if low in _IMPERATIVE_SKIP:
            continue
        if low in _IMPERATIVE_VERBS:
            total -= 1.0
        break
    return 1.0 / (1.0 + math.exp(-total))


# ---------------------------------------------------------------------------
# Lexicon categories (pluggable slot)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LexiconModel:
    """Word/prefix to category-list map; vector = per-category relative freq."""

    categories: tuple[str, ...]
    exact: dict[str, tuple[str, ...]]
    prefixes: tuple[tuple[str, tuple[str, ...]], ...]  # longest first

    @property
    def dimension(self) -> int:
        return len(self.categories)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(b"lexicon|")
        for word in sorted(self.exact):
            h.update(f"{word}={','.join(self.exact[word])};".encode())
        for prefix, cats in self.prefixes:
            h.update(f"{prefix}*={','.join(cats)};".encode())
        return h.hexdigest()

    def categories_of(self, token: str) -> tuple[str, ...]:
        hit = self.exact.get(token)
        if hit is not None:
            return hit
        for prefix, cats in self.prefixes:
            if token.startswith(prefix):
                return cats
        return ()


def load_lexicon(text: str) -> LexiconModel:
    """Parse a category lexicon: `word<TAB>cat1,cat2`, `word*` = prefix."""
    exact: dict[str, tuple[str, ...]] = {}
    prefixes: list[tuple[str, tuple[str, ...]]] = []
    categories: set[str] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            word, cats_raw = line.split("\t")
        except ValueError as exc:
            raise ConfigurationError(f"lexicon line {line_no}: expected word<TAB>categories") from exc
        cats = tuple(c.strip() for c in cats_raw.split(",") if c.strip())
        if not cats:
            raise ConfigurationError(f"lexicon line {line_no}: no categories")
        categories.update(cats)
        if word.endswith("*"):
            prefixes.append((word[:-1], cats))
        else:
            exact[word] = cats
    prefixes.sort(key=lambda p: (-len(p[0]), p[0]))
    return LexiconModel(categories=tuple(sorted(categories)), exact=exact, prefixes=tuple(prefixes))


def lexicon_category_features(model: LexiconModel, lexical_tokens: Sequence[str]) -> SparseVector:
    """Per-category counts divided by token count; empty input -> zero vector."""
    if not lexical_tokens:
        return SparseVector(model.dimension, ())
    col = {cat: i for i, cat in enumerate(model.categories)}
    counts: dict[int, float] = {}
    for tok in lexical_tokens:
        for cat in model.categories_of(tok):
            counts[col[cat]] = counts.get(col[cat], 0.0) + 1.0
    n = float(len(lexical_tokens))
    return _sparse_from_pairs(model.dimension, {c: v / n for c, v in counts.items()})


# ---------------------------------------------------------------------------
# Conversational features
# ---------------------------------------------------------------------------

CONV_SLOTS = (
    "is_owner_or_collaborator",
    "is_member",
    "is_other",
    "is_issue_author",
    "quote_tokens",
    "quote_to_comment_ratio",
    "quote_to_mean_ratio",
    "comment_position",
    "quote_position",
    "seconds_since_prev",
    "seconds_until_next",
    "relative_time",
    "has_code",
)

_CODE_PATTERNS = tuple(r.pattern for r in SPECIAL_TOKEN_RULES if r.token_name in ("CODE_BLOCK", "CODE_SEGMENT"))


def _token_count(text: str) -> int:
    return len(tokenize(replace_special_tokens(text), "surface"))


class ConversationalContext:
    """Per-thread context for the fixed 13-slot conversational layout."""

    def __init__(self, thread: IssueThread, quotes: Sequence[Quote]) -> None:
        self.thread = thread
        self.quote_tokens = {q.quote_id: _token_count(q.text) for q in quotes}
        self.by_comment: dict[int, list[int]] = {}
        for q in quotes:
            self.by_comment.setdefault(q.comment_index, []).append(q.quote_id)
        self.comment_tokens = {
            ci: sum(self.quote_tokens[qid] for qid in qids)
            for ci, qids in self.by_comment.items()
        }
        counts = list(self.quote_tokens.values())
        self.mean_quote_tokens = sum(counts) / len(counts) if counts else 0.0
        self.has_code = {
            c.index: 1.0 if any(re.search(p, c.body) for p in _CODE_PATTERNS) else 0.0
            for c in thread.comments
        }
        self.times = [c.created_at for c in thread.comments]

    def vector(self, quote: Quote) -> np.ndarray:
        comment = self.thread.comments[quote.comment_index]
        out = np.zeros(len(CONV_SLOTS))
        out[0] = 1.0 if comment.author_role in (AuthorRole.OWNER, AuthorRole.COLLABORATOR) else 0.0
        out[1] = 1.0 if comment.author_role is AuthorRole.MEMBER else 0.0
        out[2] = 1.0 if comment.author_role is AuthorRole.OTHER else 0.0
        out[3] = 1.0 if comment.is_issue_author else 0.0

        q_tokens = float(self.quote_tokens.get(quote.quote_id, 0))
        c_tokens = float(self.comment_tokens.get(quote.comment_index, 0))
        out[4] = q_tokens
        out[5] = q_tokens / c_tokens if c_tokens > 0 else 0.0
        out[6] = q_tokens / self.mean_quote_tokens if self.mean_quote_tokens > 0 else 0.0

        n_comments = len(self.thread.comments)
        out[7] = quote.comment_index / (n_comments - 1) if n_comments > 1 else 0.0
        siblings = self.by_comment.get(quote.comment_index, [])
        ordinal = siblings.index(quote.quote_id) + 1 if quote.quote_id in siblings else 1
        out[8] = ordinal / len(siblings) if siblings else 0.0

        ci = quote.comment_index
        out[9] = max(0.0, self.times[ci] - self.times[ci - 1]) if ci > 0 else 0.0
        out[10] = max(0.0, self.times[ci + 1] - self.times[ci]) if ci + 1 < n_comments else 0.0
        span = self.times[-1] - self.times[0]
        out[11] = min(1.0, max(0.0, (self.times[ci] - self.times[0]) / span)) if span > 0 else 0.0
        out[12] = self.has_code[ci]
        return out


def conversational_features(quote: Quote, thread: IssueThread, quotes: Sequence[Quote]) -> SparseVector:
    """Single-quote convenience wrapper around :class:`ConversationalContext`."""
    dense = ConversationalContext(thread, quotes).vector(quote)
    return _sparse_from_pairs(len(CONV_SLOTS), {i: float(v) for i, v in enumerate(dense) if v != 0.0})


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreparedQuote:
    """All per-quote inputs the feature transforms need, precomputed once."""

    quote_id: int
    surface_tokens: tuple[str, ...]
    lexical_tokens: tuple[str, ...]
    pos_tags: tuple[str, ...]
    conv: tuple[float, ...]
    politeness: float


def normalize_feature_sets(raw: Sequence[str], lexicon_available: bool) -> tuple[str, ...]:
    """Validate requested set names and expand ``all`` in canonical order."""
    wanted = {s.strip().lower() for s in raw if s.strip()}
    if not wanted:
        raise ConfigurationError("no feature sets selected")
    unknown = wanted - set(FEATURE_SET_ORDER) - {"all"}
    if unknown:
        raise ConfigurationError(f"unknown feature set(s): {', '.join(sorted(unknown))}")
    if "all" in wanted:
        wanted = set(FEATURE_SET_ORDER)
        if not lexicon_available:
            wanted.discard("lexicon")
            import logging

            logging.getLogger(__name__).info(
                "no category lexicon configured; the all set excludes lexicon features"
            )
    elif "lexicon" in wanted and not lexicon_available:
        raise ConfigurationError("lexicon feature set requested but no lexicon file configured")
    return tuple(s for s in FEATURE_SET_ORDER if s in wanted)


@dataclass(frozen=True)
class FittedFeatures:
    """Feature models fitted on one training fold, plus the fold's quote ids."""

    sets: tuple[str, ...]
    tfidf: TfidfModel | None
    pos: PosNgramModel | None
    lexicon: LexiconModel | None
    fitted_on: tuple[int, ...]
    offsets: dict[str, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        offsets: dict[str, tuple[int, int]] = {}
        start = 0
        for name in self.sets:
            width = {
                "tfidf": self.tfidf.dimension if self.tfidf else 0,
                "lexicon": self.lexicon.dimension if self.lexicon else 0,
                "politeness": 1,
                "pos": self.pos.dimension if self.pos else 0,
                "conv": len(CONV_SLOTS),
            }[name]
            offsets[name] = (start, width)
            start += width
        object.__setattr__(self, "offsets", offsets)

    @property
    def dimension(self) -> int:
        return sum(width for _, width in self.offsets.values())

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(("sets=" + ",".join(self.sets)).encode())
        if "tfidf" in self.sets and self.tfidf:
            h.update(self.tfidf.fingerprint().encode())
        if "pos" in self.sets and self.pos:
            h.update(self.pos.fingerprint().encode())
        if "lexicon" in self.sets and self.lexicon:
            h.update(self.lexicon.fingerprint().encode())
        if "politeness" in self.sets:
            h.update(MARKER_TABLE_DIGEST.encode())
        return h.hexdigest()

    def transform(self, prepared: Sequence[PreparedQuote]) -> FeatureMatrix:
        vectors = []
        dim = self.dimension
        for pq in prepared:
            pairs: dict[int, float] = {}
            for name in self.sets:
                start, _ = self.offsets[name]
                if name == "tfidf":
                    part = transform_tfidf(self.tfidf, pq.lexical_tokens)
                elif name == "pos":
                    part = pos_ngram_features(self.pos, pq.pos_tags)
                elif name == "lexicon":
                    part = lexicon_category_features(self.lexicon, pq.lexical_tokens)
                elif name == "politeness":
                    part = SparseVector(1, ((0, pq.politeness),))
                else:  # conv
                    part = _sparse_from_pairs(
                        len(CONV_SLOTS),
                        {i: v for i, v in enumerate(pq.conv) if v != 0.0},
                    )
                for idx, value in part.entries:
                    pairs[start + idx] = value
            vectors.append(_sparse_from_pairs(dim, pairs))
        return FeatureMatrix(
            vectors=tuple(vectors),
            offsets=dict(self.offsets),
            quote_ids=tuple(pq.quote_id for pq in prepared),
        )


def fit_features(
    prepared: Sequence[PreparedQuote],
    sets: Sequence[str],
    *,
    tfidf_range: tuple[int, int] = (1, 3),
    pos_range: tuple[int, int] = (1, 3),
    lexicon: LexiconModel | None = None,
) -> FittedFeatures:
    """Fit every selected feature model on the given training quotes."""
    chosen = normalize_feature_sets(sets, lexicon_available=lexicon is not None)
    if not prepared:
        raise FitError("cannot fit feature models on an empty training fold")
    tfidf = (
        fit_tfidf([pq.lexical_tokens for pq in prepared], tfidf_range)
        if "tfidf" in chosen
        else None
    )
    pos = (
        fit_pos_ngrams([pq.pos_tags for pq in prepared], pos_range)
        if "pos" in chosen
        else None
    )
    return FittedFeatures(
        sets=chosen,
        tfidf=tfidf,
        pos=pos,
        lexicon=lexicon if "lexicon" in chosen else None,
        fitted_on=tuple(sorted(pq.quote_id for pq in prepared)),
    )


def assemble_features(
    prepared: Sequence[PreparedQuote],
    sets: Sequence[str],
    fitted: FittedFeatures,
) -> FeatureMatrix:
    """Transform quotes with already-fitted models; order per FEATURE_SET_ORDER."""
    chosen = tuple(s for s in FEATURE_SET_ORDER if s in {x.lower() for x in sets})
    if chosen != fitted.sets:
        raise ConfigurationError(
            f"selected sets {chosen} do not match fitted sets {fitted.sets}"
        )
    return fitted.transform(prepared)


# ---------------------------------------------------------------------------
# Persistence (JSON round trip for trained bundles)
# ---------------------------------------------------------------------------


def features_to_dict(fitted: FittedFeatures) -> dict:
    doc: dict = {"version": 1, "sets": list(fitted.sets), "fitted_on": list(fitted.fitted_on)}
    if fitted.tfidf:
        terms = sorted(fitted.tfidf.vocabulary, key=fitted.tfidf.vocabulary.__getitem__)
        doc["tfidf"] = {
            "ngram_range": list(fitted.tfidf.ngram_range),
            "terms": terms,
            "idf": [repr(float(x)) for x in fitted.tfidf.idf],
            "document_count": fitted.tfidf.document_count,
        }
    if fitted.pos:
        doc["pos"] = {
            "ngram_range": list(fitted.pos.ngram_range),
            "terms": sorted(fitted.pos.vocabulary, key=fitted.pos.vocabulary.__getitem__),
        }
    if fitted.lexicon:
        doc["lexicon"] = {
            "categories": list(fitted.lexicon.categories),
            "exact": {w: list(c) for w, c in sorted(fitted.lexicon.exact.items())},
            "prefixes": [[p, list(c)] for p, c in fitted.lexicon.prefixes],
        }
    return doc


def features_from_dict(doc: Mapping) -> FittedFeatures:
    tfidf = None
    if "tfidf" in doc:
        t = doc["tfidf"]
        tfidf = TfidfModel(
            ngram_range=tuple(t["ngram_range"]),
            vocabulary={term: i for i, term in enumerate(t["terms"])},
            idf=np.array([float(x) for x in t["idf"]]),
            document_count=t["document_count"],
        )
    pos = None
    if "pos" in doc:
        p = doc["pos"]
        pos = PosNgramModel(
            ngram_range=tuple(p["ngram_range"]),
            vocabulary={term: i for i, term in enumerate(p["terms"])},
        )
    lexicon = None
    if "lexicon" in doc:
        l = doc["lexicon"]
        lexicon = LexiconModel(
            categories=tuple(l["categories"]),
            exact={w: tuple(c) for w, c in l["exact"].items()},
            prefixes=tuple((p, tuple(c)) for p, c in l["prefixes"]),
        )
    return FittedFeatures(
        sets=tuple(doc["sets"]),
        tfidf=tfidf,
        pos=pos,
        lexicon=lexicon,
        fitted_on=tuple(doc["fitted_on"]),
    )
