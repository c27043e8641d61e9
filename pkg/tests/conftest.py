"""Shared fixtures: small threads, labeled corpora, synthetic datasets."""

from __future__ import annotations

import json

import numpy as np
import pytest

from argmine.corpus import IssueThread, parse_thread
from argmine.features import PreparedQuote


def build_thread(bodies, *, times=None, associations=None, authors=None, thread_id=1) -> IssueThread:
    """Assemble a thread document from comment bodies and parse it."""
    n = len(bodies)
    times = times or [f"2020-01-01T00:{i:02d}:00Z" for i in range(n)]
    associations = associations or ["NONE"] * n
    authors = authors or [f"user{i}" for i in range(n)]
    doc = {
        "id": thread_id,
        "title": "fixture thread",
        "comments": [
            {
                "author": authors[i],
                "association": associations[i],
                "created_at": times[i],
                "body": bodies[i],
            }
            for i in range(n)
        ],
    }
    return parse_thread(json.dumps(doc))


@pytest.fixture
def demo_thread() -> IssueThread:
    return build_thread(
        [
            "Tabs freeze after an update. See #224 for details.\n\n```\nerror code\n```",
            "I can reproduce this. We should fix the event loop.",
            "> Tabs freeze\n\nThanks for the report! Please try 1.32.1.",
        ],
        associations=["NONE", "MEMBER", "OWNER"],
        authors=["alice", "bob", "carol"],
        times=[
            "2020-01-01T00:00:00Z",
            "2020-01-01T00:01:00Z",
            "2020-01-01T00:03:00Z",
        ],
        thread_id=4865,
    )


def disjoint_vocab_dataset(n: int = 200, seed: int = 7, labels=("argumentative", "non_argumentative")):
    """Quotes whose vocabularies are disjoint by class: trivially separable."""
    rng = np.random.default_rng(seed)
    vocab = {labels[0]: [f"alpha{i}" for i in range(30)], labels[1]: [f"beta{i}" for i in range(30)]}
    prepared, y = [], []
    for i in range(n):
        cls = labels[i % 2]
        toks = tuple(rng.choice(vocab[cls], size=8))
        prepared.append(
            PreparedQuote(
                quote_id=i,
                surface_tokens=toks,
                lexical_tokens=toks,
                pos_tags=tuple(["X"] * 8),
                conv=tuple([0.0] * 13),
                politeness=0.5,
            )
        )
        y.append(cls)
    return prepared, y
