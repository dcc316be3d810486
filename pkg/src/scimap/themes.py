"""Thematic evolution over time slices.

Each slice gets its own abstract-bigram co-occurrence network, clustered
with walktrap; clusters below the frequency floor are discarded and the
survivors are linked across consecutive slices by inclusion index.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .community import walktrap
from .graphs import Graph, GraphNode
from .records import Corpus
from .textterms import bigrams_of, stopwords, tokenize


@dataclass
class ThemeCluster:
    label: str
    terms: list[str]
    frequency: int


@dataclass
class ThematicSlice:
    period: tuple[int, int]
    clusters: list[ThemeCluster]
    links_to_next: list[tuple[str, str, float]] = field(default_factory=list)
    flag: Optional[str] = None


def inclusion_index(a: set[str], b: set[str]) -> float:
    """|A n B| / min(|A|, |B|) over member-term sets; in (0, 1] when the
    sets overlap at all."""
    if not a or not b:
        return 0.0
    return len(a & b) / min(len(a), len(b))


def _doc_grams(text: str, ngram: int) -> list[str]:
    if ngram == 1:
        stop = stopwords()
        return [w for w in tokenize(text) if w not in stop and not w.isdigit()]
    return bigrams_of(text)


def thematic_evolution(corpus: Corpus, slice_bounds: list[tuple[int, int]],
                       n_terms: int = 1000, min_cluster_freq: int = 20,
                       min_weight_index: float = 0.02,
                       ngram: int = 2) -> list[ThematicSlice]:
    """Time-sliced theme clusters with inclusion-index links.

    Per slice: the top ``n_terms`` abstract n-grams form a co-occurrence
    network, walktrap clusters it, clusters whose total term frequency
    falls below ``min_cluster_freq`` are dropped, and each survivor is
    labeled by its highest-frequency member term.  Consecutive slices are
    linked where the inclusion index reaches ``min_weight_index``.
    """
    _check_slices(slice_bounds)
    out: list[ThematicSlice] = []
    for start, end in slice_bounds:
        docs = [d for d in corpus.documents
                if d.pub_year is not None and start <= d.pub_year <= end]
        grams = [_doc_grams(d.abstract, ngram) for d in docs if d.abstract]
        if not grams:
            out.append(ThematicSlice(period=(start, end), clusters=[],
                                     flag="no-abstracts"))
            continue
        # Term frequency counts every occurrence; link weights stay
        # per-document (full counting).
        freq = Counter()
        for gram_list in grams:
            freq.update(gram_list)
        kept_terms = {term for term, _ in sorted(
            freq.items(), key=lambda item: (-item[1], item[0]))[:n_terms]}

        pair_weights = Counter()
        for gram_list in grams:
            for u, v in combinations(sorted(set(gram_list) & kept_terms), 2):
                pair_weights[(u, v)] += 1
        graph = Graph(
            nodes=[GraphNode(id=t, label=t, weight=float(freq[t]))
                   for t in sorted(kept_terms)],
            edges=[(u, v, float(w)) for (u, v), w in sorted(pair_weights.items())],
            directed=False)

        clustering = walktrap(graph)
        grouped: dict[int, list[str]] = {}
        for term, cluster in clustering.assignment.items():
            grouped.setdefault(cluster, []).append(term)
        clusters = []
        for terms in grouped.values():
            total = sum(freq[t] for t in terms)
            if total < min_cluster_freq:
                continue
            label = min(terms, key=lambda t: (-freq[t], t))
            clusters.append(ThemeCluster(label=label, terms=sorted(terms),
                                         frequency=total))
        clusters.sort(key=lambda c: (-c.frequency, c.label))
        out.append(ThematicSlice(period=(start, end), clusters=clusters))

    for current, following in zip(out, out[1:]):
        links = []
        for cluster in current.clusters:
            for nxt in following.clusters:
                weight = inclusion_index(set(cluster.terms), set(nxt.terms))
                if weight >= min_weight_index and weight > 0.0:
                    links.append((cluster.label, nxt.label, weight))
        current.links_to_next = sorted(links)
    return out


def _check_slices(slice_bounds: list[tuple[int, int]]) -> None:
    if not slice_bounds:
        raise ValueError("at least one time slice is required")
    for start, end in slice_bounds:
        if start > end:
            raise ValueError(f"slice {start}-{end} is reversed")
    for (_, prev_end), (next_start, _) in zip(slice_bounds, slice_bounds[1:]):
        if next_start <= prev_end:
            raise ValueError("time slices must be ordered and non-overlapping")
