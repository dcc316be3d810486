"""Network construction: co-occurrence, co-citation, collaboration,
local-citation matching, historiograph, three-field flows, spectroscopy.

All link counting is full counting: every co-appearance inside one
document contributes one unit of edge weight.  Undirected graphs store
each edge once with the endpoint ids ordered.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .metrics import document_terms
from .normalize import country_of, institution_of, reference_key, surname_of
from .records import CitedReference, Corpus, Document

# Minimum shared prefix for a cited-source string to match a corpus source.
SOURCE_PREFIX_MIN = 6


@dataclass
class GraphNode:
    id: str
    label: str
    weight: float = 0.0
    cluster: Optional[int] = None


@dataclass
class Graph:
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[tuple[str, str, float]] = field(default_factory=list)
    directed: bool = False
    metadata: dict = field(default_factory=dict)

    def node_ids(self) -> list[str]:
        return [node.id for node in self.nodes]

    def validate(self) -> None:
        ids = self.node_ids()
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node ids")
        known = set(ids)
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge endpoint missing: {u!r}-{v!r}")
            if w <= 0:
                raise ValueError(f"non-positive edge weight on {u!r}-{v!r}")
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if not self.directed and u > v:
                raise ValueError(f"undirected edge not ordered: {u!r}-{v!r}")


def _undirected_graph(node_weights: dict[str, float],
                      pair_weights: dict[tuple[str, str], float],
                      metadata: Optional[dict] = None) -> Graph:
    nodes = [GraphNode(id=nid, label=nid, weight=node_weights[nid])
             for nid in sorted(node_weights)]
    edges = [(u, v, pair_weights[(u, v)]) for u, v in sorted(pair_weights)]
    graph = Graph(nodes=nodes, edges=edges, directed=False,
                  metadata=metadata or {})
    graph.validate()
    return graph


# Local citation matching ------------------------------------------------------

@dataclass
class LocalCitations:
    """Result of matching cited references against the corpus itself."""

    # distinct corpus documents citing each corpus document
    document_counts: dict[str, int]
    # distinct corpus documents citing each reference (corpus or not);
    # a reference matched to a corpus document is keyed ("doc", id)
    reference_counts: dict[tuple, int]
    reference_labels: dict[tuple, str]
    reference_years: dict[tuple, Optional[int]]
    # citing document id -> set of reference keys it mentions
    mentions: dict[str, set[tuple]]
    # citing document id -> set of cited corpus document ids
    direct_citations: dict[str, set[str]]


def _source_prefix_match(a: Optional[str], b: Optional[str]) -> bool:
    if not a or not b:
        return False
    short, long = (a, b) if len(a) <= len(b) else (b, a)
    return len(short) >= SOURCE_PREFIX_MIN and long.startswith(short)


def _ref_label(ref: CitedReference) -> str:
    parts = [ref.first_author or "?", str(ref.year) if ref.year else "?"]
    if ref.source:
        parts.append(ref.source)
    return ", ".join(parts)


def _doc_ref_label(doc: Document) -> str:
    author = surname_of(doc.authors[0]) if doc.authors else "?"
    initials = ""
    if doc.authors and "," in doc.authors[0]:
        initials = " " + doc.authors[0].split(",")[1].strip()
    year = str(doc.pub_year) if doc.pub_year else "?"
    return f"{author}{initials}, {year}" + (f", {doc.source}" if doc.source else "")


def match_local_citations(corpus: Corpus) -> LocalCitations:
    """Match every cited reference against the corpus.

    A reference hits a corpus document when the DOIs agree, or when the
    normalized first-author surname, the year, and a source prefix of at
    least six characters all agree.  Local citation counts are distinct
    citing documents; references never matched still get counted.
    """
    by_doi: dict[str, str] = {}
    by_author_year: dict[tuple[str, int], list[Document]] = {}
    for doc in corpus.documents:
        if doc.doi:
            by_doi.setdefault(doc.doi, doc.id)
        if doc.authors and doc.pub_year is not None:
            key = (surname_of(doc.authors[0]), doc.pub_year)
            by_author_year.setdefault(key, []).append(doc)

    def match(ref: CitedReference) -> Optional[str]:
        if ref.doi and ref.doi in by_doi:
            return by_doi[ref.doi]
        if ref.first_author and ref.year is not None:
            key = (surname_of(ref.first_author), ref.year)
            for doc in by_author_year.get(key, []):
                if _source_prefix_match(ref.source, doc.source):
                    return doc.id
        return None

    citing_docs: dict[tuple, set[str]] = {}
    labels: dict[tuple, str] = {}
    years: dict[tuple, Optional[int]] = {}
    mentions: dict[str, set[tuple]] = {}
    direct: dict[str, set[str]] = {}
    doc_by_id = {doc.id: doc for doc in corpus.documents}

    for doc in corpus.documents:
        seen: set[tuple] = set()
        for ref in doc.cited_refs:
            target = match(ref)
            if target == doc.id:
                continue  # a record citing itself carries no local signal
            key = ("doc", target) if target else reference_key(ref)
            seen.add(key)
            citing_docs.setdefault(key, set()).add(doc.id)
            if target:
                direct.setdefault(doc.id, set()).add(target)
                labels.setdefault(key, _doc_ref_label(doc_by_id[target]))
                years.setdefault(key, doc_by_id[target].pub_year)
            else:
                labels.setdefault(key, _ref_label(ref))
                years.setdefault(key, ref.year)
        mentions[doc.id] = seen

    document_counts = {doc.id: len(citing_docs.get(("doc", doc.id), set()))
                       for doc in corpus.documents}
    reference_counts = {key: len(docs) for key, docs in citing_docs.items()}
    return LocalCitations(document_counts=document_counts,
                          reference_counts=reference_counts,
                          reference_labels=labels, reference_years=years,
                          mentions=mentions, direct_citations=direct)


# Graph builders ----------------------------------------------------------------

def cooccurrence_graph(corpus: Corpus, term_field: str = "DE",
                       min_occurrence: int = 5) -> Graph:
    """Term co-occurrence network over a keyword field (full counting).

    Nodes are terms appearing in at least ``min_occurrence`` documents;
    an edge weight counts the documents where both terms appear.
    """
    occurrence = Counter()
    doc_terms: list[set[str]] = []
    for doc in corpus.documents:
        terms = document_terms(doc, term_field)
        doc_terms.append(terms)
        for term in terms:
            occurrence[term] += 1

    kept = {t for t, c in occurrence.items() if c >= min_occurrence}
    pair_weights = Counter()
    for terms in doc_terms:
        for u, v in combinations(sorted(terms & kept), 2):
            pair_weights[(u, v)] += 1

    graph = _undirected_graph({t: float(occurrence[t]) for t in kept},
                              dict(pair_weights),
                              {"kind": "cooccurrence", "field": term_field,
                               "min_occurrence": min_occurrence,
                               "counting": "full"})
    graph.metadata["total_link_strength"] = sum(w for _, _, w in graph.edges)
    return graph


def cocitation_graph(corpus: Corpus, min_citations: int = 20,
                     local: Optional[LocalCitations] = None) -> Graph:
    """Reference co-citation network (full counting).

    Nodes are cited references mentioned by at least ``min_citations``
    corpus documents; an edge weight counts the documents citing both.
    """
    local = local or match_local_citations(corpus)
    kept = {key for key, count in local.reference_counts.items()
            if count >= min_citations}
    node_ids = {key: local.reference_labels[key] for key in kept}
    # Labels may collide between distinct keys; disambiguate deterministically.
    used: dict[str, int] = {}
    for key in sorted(kept, key=lambda k: (local.reference_labels[k], repr(k))):
        label = node_ids[key]
        if label in used:
            used[label] += 1
            node_ids[key] = f"{label} ({used[label]})"
        else:
            used[label] = 1

    pair_weights = Counter()
    for refs in local.mentions.values():
        cited = sorted(node_ids[key] for key in refs & kept)
        for u, v in combinations(cited, 2):
            pair_weights[(u, v)] += 1

    node_weights = {node_ids[key]: float(local.reference_counts[key])
                    for key in kept}
    return _undirected_graph(node_weights, dict(pair_weights),
                             {"kind": "cocitation",
                              "min_citations": min_citations,
                              "counting": "full"})


COLLABORATION_LEVELS = ("author", "institution", "country")


def _collaboration_entities(doc: Document, level: str) -> set[str]:
    if level == "author":
        return set(doc.authors)
    if level == "institution":
        return {institution_of(a) for a in doc.affiliations}
    if level == "country":
        return {c for c in (country_of(a) for a in doc.affiliations) if c}
    raise ValueError(f"unknown collaboration level {level!r} "
                     f"(expected one of {COLLABORATION_LEVELS})")


def collaboration_graph(corpus: Corpus, level: str = "author",
                        top_n: Optional[int] = None) -> Graph:
    """Co-authorship network between authors, institutions, or countries.

    Edge weight counts co-authored documents; isolated entities are
    dropped.  ``top_n`` restricts nodes to the most productive entities
    before edges are counted.
    """
    doc_counts = Counter()
    doc_entities: list[set[str]] = []
    for doc in corpus.documents:
        entities = _collaboration_entities(doc, level)
        doc_entities.append(entities)
        for entity in entities:
            doc_counts[entity] += 1

    kept = set(doc_counts)
    if top_n is not None:
        ranked = sorted(doc_counts.items(), key=lambda item: (-item[1], item[0]))
        kept = {entity for entity, _ in ranked[:top_n]}

    pair_weights = Counter()
    for entities in doc_entities:
        for u, v in combinations(sorted(entities & kept), 2):
            pair_weights[(u, v)] += 1

    linked = {u for u, _ in pair_weights} | {v for _, v in pair_weights}
    return _undirected_graph({e: float(doc_counts[e]) for e in sorted(linked)},
                             dict(pair_weights),
                             {"kind": "collaboration", "level": level,
                              "top_n": top_n, "counting": "full"})


# Historiograph -------------------------------------------------------------------

def historiograph(corpus: Corpus, n: int = 30,
                  local: Optional[LocalCitations] = None,
                  ) -> tuple[Graph, list[str]]:
    """Direct-citation graph over the ``n`` most locally cited documents.

    Arcs point from the citing (newer) document to the cited (older) one,
    so publication-year orientation keeps the graph acyclic.  A same-year
    citation keeps its citing orientation unless that would close a cycle;
    either way it is flagged, never guessed.
    """
    local = local or match_local_citations(corpus)
    ranked = sorted(corpus.documents,
                    key=lambda d: (-local.document_counts[d.id], d.id))
    top = ranked[:n]
    top_ids = {doc.id for doc in top}
    year = {doc.id: doc.pub_year for doc in corpus.documents}

    arcs = []
    for doc in top:
        for target in sorted(local.direct_citations.get(doc.id, set())):
            if target in top_ids and target != doc.id:
                arcs.append((doc.id, target))

    flags: list[str] = []
    adjacency: dict[str, set[str]] = {doc.id: set() for doc in top}

    def reaches(start: str, goal: str) -> bool:
        stack = [start]
        seen = set()
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(adjacency[node])
        return False

    kept_arcs = []
    for citing, cited in sorted(arcs):
        dated = year[citing] is not None and year[cited] is not None
        same_year = dated and year[citing] == year[cited]
        if dated and year[citing] < year[cited]:
            flags.append(f"arc {citing}->{cited} cites a later-dated document")
        # Publication-year orientation proves acyclicity only for strictly
        # newer-cites-older arcs; anything else gets a reachability check.
        if not (dated and year[citing] > year[cited]):
            if reaches(cited, citing):
                flags.append(f"cycle-closing citation dropped: {citing}->{cited}")
                continue
            if same_year:
                flags.append(f"same-year citation kept by citing relation: "
                             f"{citing}->{cited}")
        adjacency[citing].add(cited)
        kept_arcs.append((citing, cited, 1.0))

    nodes = [GraphNode(id=doc.id, label=_doc_ref_label(doc),
                       weight=float(local.document_counts[doc.id]))
             for doc in top]
    graph = Graph(nodes=nodes, edges=kept_arcs, directed=True,
                  metadata={"kind": "historiograph", "n": n})
    graph.validate()
    return graph, flags


def topological_order(graph: Graph) -> Optional[list[str]]:
    """Kahn's algorithm; None when the directed graph has a cycle."""
    indegree = {node.id: 0 for node in graph.nodes}
    out: dict[str, list[str]] = {node.id: [] for node in graph.nodes}
    for u, v, _ in graph.edges:
        out[u].append(v)
        indegree[v] += 1
    ready = sorted(nid for nid, deg in indegree.items() if deg == 0)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for nxt in sorted(out[node]):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
        ready.sort()
    return order if len(order) == len(graph.nodes) else None


# Three-field flows -----------------------------------------------------------------

FLOW_FIELDS = ("AU", "SO", "DE", "ID", "C1", "CO", "CR", "CR_SO")


def _flow_items(doc: Document, flow_field: str,
                local: Optional[LocalCitations]) -> set[str]:
    if flow_field == "AU":
        return set(doc.authors)
    if flow_field == "SO":
        return {doc.source} if doc.source else set()
    if flow_field == "DE":
        return set(doc.author_keywords)
    if flow_field == "ID":
        return set(doc.keywords_plus)
    if flow_field == "C1":
        return {institution_of(a) for a in doc.affiliations}
    if flow_field == "CO":
        return {c for c in (country_of(a) for a in doc.affiliations) if c}
    if flow_field == "CR":
        assert local is not None
        return {local.reference_labels[key] for key in local.mentions.get(doc.id, set())}
    if flow_field == "CR_SO":
        return {ref.source for ref in doc.cited_refs if ref.source}
    raise ValueError(f"unknown flow field {flow_field!r} (expected one of {FLOW_FIELDS})")


@dataclass
class ThreeFieldFlow:
    left: list[tuple[str, int]]
    middle: list[tuple[str, int]]
    right: list[tuple[str, int]]
    flows_left: list[tuple[str, str, int]]
    flows_right: list[tuple[str, str, int]]
    fields: tuple[str, str, str] = ("", "", "")


def three_field_flow(corpus: Corpus, left: str, middle: str, right: str,
                     k_left: int = 10, k_mid: int = 10, k_right: int = 10,
                     ) -> ThreeFieldFlow:
    """Document flows between the top items of three fields.

    Pillar items are the top-k by document count; a flow weight counts
    the documents exhibiting both of its endpoints.
    """
    local = match_local_citations(corpus) if "CR" in (left, middle, right) else None
    per_doc = []
    counts = {side: Counter() for side in (left, middle, right)}
    for doc in corpus.documents:
        items = {side: _flow_items(doc, side, local)
                 for side in (left, middle, right)}
        per_doc.append(items)
        for side in (left, middle, right):
            counts[side].update(items[side])

    def top(side: str, k: int) -> list[tuple[str, int]]:
        ranked = sorted(counts[side].items(), key=lambda it: (-it[1], it[0]))
        return ranked[:k]

    pillars = {side: dict(top(side, k))
               for side, k in ((left, k_left), (middle, k_mid), (right, k_right))}
    flows_left = Counter()
    flows_right = Counter()
    for items in per_doc:
        for a in items[left] & set(pillars[left]):
            for b in items[middle] & set(pillars[middle]):
                flows_left[(a, b)] += 1
        for b in items[middle] & set(pillars[middle]):
            for c in items[right] & set(pillars[right]):
                flows_right[(b, c)] += 1

    return ThreeFieldFlow(
        left=top(left, k_left), middle=top(middle, k_mid),
        right=top(right, k_right),
        flows_left=sorted((a, b, w) for (a, b), w in flows_left.items()),
        flows_right=sorted((b, c, w) for (b, c), w in flows_right.items()),
        fields=(left, middle, right))


# Reference publication year spectroscopy --------------------------------------------

@dataclass
class RpysRow:
    year: int
    n_references: int
    citations: int


def rpys(corpus: Corpus, local: Optional[LocalCitations] = None,
         ) -> tuple[list[RpysRow], int]:
    """Distinct references and citing mentions per reference year.

    Returns one row per year spanning the full min..max cited-year range
    plus the count of undated reference mentions (excluded from rows).
    """
    local = local or match_local_citations(corpus)
    refs_per_year: dict[int, set[tuple]] = {}
    mentions_per_year: Counter = Counter()
    undated = 0
    for doc_id, keys in local.mentions.items():
        for key in keys:
            year = local.reference_years.get(key)
            if year is None:
                undated += 1
                continue
            refs_per_year.setdefault(year, set()).add(key)
            mentions_per_year[year] += 1
    if not refs_per_year:
        return [], undated
    rows = [RpysRow(year=year,
                    n_references=len(refs_per_year.get(year, set())),
                    citations=mentions_per_year[year])
            for year in range(min(refs_per_year), max(refs_per_year) + 1)]
    return rows, undated
