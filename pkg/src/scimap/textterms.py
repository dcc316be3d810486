"""Tokenization and term extraction over titles and abstracts.

The stopword list ships as a versioned data file; changing it is a
breaking output change for every bigram-based analysis.
"""
from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_TOKEN_RE = re.compile(r"[a-z0-9][a-z0-9\-']*")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    data = resources.files("scimap.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in data.splitlines()
                     if line.strip() and not line.startswith("#"))


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def bigrams_of(text: str) -> list[str]:
    """Stopword-filtered word bigrams of a text, in order of appearance.

    A bigram survives only when neither word is a stopword and neither is
    a bare number; duplicates within the text are kept (callers that want
    per-document presence semantics take the set).
    """
    words = tokenize(text)
    stop = stopwords()
    out = []
    for first, second in zip(words, words[1:]):
        if first in stop or second in stop:
            continue
        if first.isdigit() or second.isdigit():
            continue
        out.append(f"{first} {second}")
    return out
