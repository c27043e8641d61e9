"""Quote filtering, special-token replacement, and tokenization.

The preparation stage between raw quote text and feature extraction:

1. ``filter_quotes`` drops quotes with no alphabetic content ("+1", ":-)").
2. ``replace_special_tokens`` rewrites markdown constructs and platform
   idioms into nine fixed token names so they act as single vocabulary items.
3. ``tokenize`` produces ``surface`` tokens (punctuation kept, politeness
   and POS features consume these) or ``lexical`` tokens (lowercased,
   punctuation and common contractions removed, stemmed).

Rule tables (contractions, stemmer suffix maps) ship as plain-text data
files under ``argmine/data`` so tests can pin their content.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpecialTokenRule:
    """One replacement rule: text matching ``pattern`` becomes ``token_name``."""

    token_name: str
    pattern: re.Pattern
    priority: int


# Application order resolves overlaps: code swallows URLs inside fences,
# quote lines swallow anything already rewritten on the line, and so on.
SPECIAL_TOKEN_RULES: tuple[SpecialTokenRule, ...] = (
    SpecialTokenRule("CODE_BLOCK", re.compile(r"```.*?```|```.*\Z", re.S), 1),
    SpecialTokenRule("CODE_SEGMENT", re.compile(r"`[^`\n]+`"), 2),
    SpecialTokenRule("QUOTE", re.compile(r"^[ \t]*>.*$", re.M), 3),
    SpecialTokenRule("URL", re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*://\S+"), 4),
    SpecialTokenRule("SCREEN_NAME", re.compile(r"@[A-Za-z0-9][A-Za-z0-9_\-]*"), 5),
    SpecialTokenRule("VERSION_NUM", re.compile(r"\d+(?:\.\d+){2,}"), 6),
    SpecialTokenRule("ISSUE_REFERENCE", re.compile(r"#\d+"), 7),
    # +1 / -1 reactions must stand alone (start of text or after whitespace)
    # so numeric ranges and dates are left untouched.
    SpecialTokenRule("PLUS_ONE", re.compile(r"(?<!\S)\+\d+"), 8),
    SpecialTokenRule("MINUS_ONE", re.compile(r"(?<!\S)-\d+"), 9),
)

SPECIAL_TOKEN_NAMES = frozenset(rule.token_name for rule in SPECIAL_TOKEN_RULES)


def replace_special_tokens(text: str) -> str:
    """Rewrite markdown/platform constructs into their token names.

    Idempotent: the token names themselves match none of the patterns.
    """
    for rule in SPECIAL_TOKEN_RULES:
        text = rule.pattern.sub(rule.token_name, text)
    return text


def filter_quotes(quotes: list) -> list:
    """Retain quotes whose text has at least one alphabetic character."""
    kept = [q for q in quotes if any(ch.isalpha() for ch in q.text)]
    dropped = len(quotes) - len(kept)
    if dropped:
        log.info("filtered out %d quote(s) with no alphabetic content", dropped)
    return kept


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------

# Words keep internal apostrophes ("don't"); every other non-space character
# is its own punctuation token.
_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+(?:['’][A-Za-z0-9_]+)*|[^\sA-Za-z0-9_]")

_POSSESSIVE_RE = re.compile(r"['’]s$")


def _load_lines(name: str) -> tuple[str, ...]:
    text = resources.files("argmine.data").joinpath(name).read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return tuple(out)


CONTRACTIONS = frozenset(_load_lines("contractions.txt"))


def tokenize(text: str, mode: str = "surface") -> list[str]:
    """Split text into tokens; ``mode`` is ``surface`` or ``lexical``.

    Surface mode keeps punctuation as separate tokens and preserves case.
    Lexical mode lowercases, drops pure-punctuation tokens and the bundled
    contraction list, strips possessive 's, and stems.  Special token names
    pass through both modes verbatim.
    """
    if mode not in ("surface", "lexical"):
        raise ValueError(f"unknown tokenize mode {mode!r}")
    surface = _TOKEN_RE.findall(text)
    if mode == "surface":
        return surface
    out: list[str] = []
    for tok in surface:
        if tok in SPECIAL_TOKEN_NAMES:
            out.append(tok)
            continue
        if not any(ch.isalnum() for ch in tok):
            continue
        low = _POSSESSIVE_RE.sub("", tok.lower())
        if not low or low in CONTRACTIONS:
            continue
        out.append(stem(low))
    return out


@dataclass(frozen=True)
class TokenizedQuote:
    quote_id: int
    surface_tokens: tuple[str, ...]
    lexical_tokens: tuple[str, ...]


def tokenize_quote(quote) -> TokenizedQuote:
    """Replace special tokens in a quote's text, then tokenize both modes."""
    replaced = replace_special_tokens(quote.text)
    return TokenizedQuote(
        quote_id=quote.quote_id,
        surface_tokens=tuple(tokenize(replaced, "surface")),
        lexical_tokens=tuple(tokenize(replaced, "lexical")),
    )


# ---------------------------------------------------------------------------
# Stemming
# ---------------------------------------------------------------------------
#
# Suffix-stripping in the Porter lineage, with two deliberate differences:
#
#   * step 1a keeps the endings -ss, -us, -is so function words such as
#     "this", "his", "bus" survive intact;
#   * the whole rule pass runs to a fixpoint, which makes stem() idempotent
#     by construction at the cost of occasionally stripping one step deeper
#     than a single pass would.
#
# The lookup steps (2, 3, 4) live in data/stemmer_rules.txt.

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem_part: str) -> int:
    """Count of vowel->consonant transitions (the [C](VC)^m[V] form)."""
    m = 0
    prev_vowel = False
    for i in range(len(stem_part)):
        cons = _is_consonant(stem_part, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _has_vowel(stem_part: str) -> bool:
    return any(not _is_consonant(stem_part, i) for i in range(len(stem_part)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    # the *o condition: ends consonant-vowel-consonant, final not w, x, y
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _load_suffix_steps() -> dict[str, tuple[tuple[str, str], ...]]:
    steps: dict[str, list[tuple[str, str]]] = {"2": [], "3": [], "4": []}
    text = resources.files("argmine.data").joinpath("stemmer_rules.txt").read_text(
        encoding="utf-8"
    )
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        step, suffix, repl = line.split("\t")
        steps[step].append((suffix, "" if repl == "-" else repl))
    # longest suffix wins within a step
    return {
        step: tuple(sorted(rules, key=lambda r: -len(r[0])))
        for step, rules in steps.items()
    }


_SUFFIX_STEPS = _load_suffix_steps()


def _apply_suffix_table(word: str, step: str, min_measure: int) -> str:
    for suffix, repl in _SUFFIX_STEPS[step]:
        if word.endswith(suffix):
            stem_part = word[: len(word) - len(suffix)]
            if _measure(stem_part) > min_measure:
                return stem_part + repl
            return word  # longest match decides; failed condition ends the step
    return word


def _stem_pass(word: str) -> str:
    # step 1a: plurals, keeping -ss/-us/-is endings
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("s") and not word.endswith(("ss", "us", "is")):
        word = word[:-1]
    # step 1b: -eed / -ed / -ing
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    else:
        stripped = None
        if word.endswith("ed") and _has_vowel(word[:-2]):
            stripped = word[:-2]
        elif word.endswith("ing") and _has_vowel(word[:-3]):
            stripped = word[:-3]
        if stripped is not None:
            if stripped.endswith(("at", "bl", "iz")):
                word = stripped + "e"
            elif _ends_double_consonant(stripped) and stripped[-1] not in "lsz":
                word = stripped[:-1]
            elif _measure(stripped) == 1 and _ends_cvc(stripped):
                word = stripped + "e"
            else:
                word = stripped
    # step 1c: terminal y -> i after a vowel-bearing stem
    if word.endswith("y") and _has_vowel(word[:-1]):
        word = word[:-1] + "i"
    # steps 2-4: suffix lookup tables
    word = _apply_suffix_table(word, "2", 0)
    word = _apply_suffix_table(word, "3", 0)
    word = _apply_suffix_table(word, "4", 1)
    # step 5a: drop terminal e
    if word.endswith("e"):
        stem_part = word[:-1]
        m = _measure(stem_part)
        if m > 1 or (m == 1 and not _ends_cvc(stem_part)):
            word = stem_part
    # step 5b: -ll -> -l for long words
    if word.endswith("ll") and _measure(word) > 1:
        word = word[:-1]
    return word


def stem(token: str) -> str:
    """Deterministic suffix stripping; idempotent (runs to a fixpoint)."""
    if len(token) <= 2:
        return token
    current = token
    for _ in range(20):  # converges in a handful of passes
        nxt = _stem_pass(current)
        if nxt == current or len(nxt) <= 2:
            return nxt
        current = nxt
    return current
