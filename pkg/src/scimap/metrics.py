"""Corpus-level descriptive statistics, distribution laws, term statistics.

All operations here are pure functions of an immutable corpus; nothing
mutates shared state.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .amortize import citable_years
from .normalize import country_of, institution_of, reference_key
from .records import Corpus, Document
from .tables import round_half_up
from .textterms import bigrams_of


@dataclass
class AnnualSeries:
    points: list[tuple[int, float]]
    unit: str = ""
    undated: int = 0


@dataclass
class SummaryStats:
    first_year: int
    last_year: int
    sources: int
    documents: int
    annual_growth_rate_pct: Optional[float]
    document_average_age: float
    average_citations: float
    total_references: int
    author_keywords: int
    keywords_plus: int
    authors: int
    single_document_authors: int
    single_authored_documents: int
    coauthors_per_document: float
    international_coauthorship_pct: float


def descriptive_summary(corpus: Corpus,
                        exclude_final_year: bool = False) -> SummaryStats:
    """Headline statistics of a corpus (timespan, production, collaboration).

    ``exclude_final_year`` recomputes the growth rate with the last dated
    year dropped, for corpora whose final year is still in progress.
    """
    dated = [doc for doc in corpus.documents if doc.pub_year is not None]
    if not dated:
        raise ValueError("descriptive summary needs at least one dated document")
    years = [doc.pub_year for doc in dated]
    first_year, last_year = min(years), max(years)
    n = len(corpus.documents)

    refs = {reference_key(ref) for doc in corpus.documents for ref in doc.cited_refs}
    author_counts = Counter(a for doc in corpus.documents for a in set(doc.authors))

    international = 0
    for doc in corpus.documents:
        countries = {c for c in (country_of(a) for a in doc.affiliations) if c}
        if len(countries) >= 2:
            international += 1

    return SummaryStats(
        first_year=first_year,
        last_year=last_year,
        sources=len({doc.source for doc in corpus.documents if doc.source}),
        documents=n,
        annual_growth_rate_pct=annual_growth_rate(
            corpus, exclude_final_year=exclude_final_year),
        document_average_age=sum(
            corpus.reference_year - y for y in years) / len(years),
        average_citations=sum(d.total_citations for d in corpus.documents) / n,
        total_references=len(refs),
        author_keywords=len({t for d in corpus.documents for t in d.author_keywords}),
        keywords_plus=len({t for d in corpus.documents for t in d.keywords_plus}),
        authors=len(author_counts),
        single_document_authors=sum(1 for c in author_counts.values() if c == 1),
        single_authored_documents=sum(
            1 for d in corpus.documents if len(d.authors) == 1),
        coauthors_per_document=sum(len(d.authors) for d in corpus.documents) / n,
        international_coauthorship_pct=100.0 * international / n,
    )


def annual_growth_rate(corpus: Corpus,
                       exclude_final_year: bool = False) -> Optional[float]:
    """Compound annual growth between the first and last dated year, in
    percent: (N_last / N_first) ** (1 / (Y_last - Y_first)) - 1."""
    per_year = Counter(doc.pub_year for doc in corpus.documents
                       if doc.pub_year is not None)
    if not per_year:
        raise ValueError("growth rate needs dated documents")
    years = sorted(per_year)
    if exclude_final_year and len(years) > 1:
        years = years[:-1]
    first, last = years[0], years[-1]
    if last == first:
        return None
    ratio = per_year[last] / per_year[first]
    return 100.0 * (ratio ** (1.0 / (last - first)) - 1.0)


def annual_production(corpus: Corpus) -> AnnualSeries:
    """Documents per publication year; undated documents go into the
    series' remainder bucket, never silently dropped."""
    per_year = Counter()
    undated = 0
    for doc in corpus.documents:
        if doc.pub_year is None:
            undated += 1
        else:
            per_year[doc.pub_year] += 1
    points = [(year, float(per_year[year])) for year in sorted(per_year)]
    return AnnualSeries(points=points, unit="documents", undated=undated)


def mean_citation_per_elapsed_years(corpus: Corpus) -> list[tuple[int, Fraction]]:
    """Per publication year: mean total citations of that year's documents
    divided by the citable years.  Exact rational values."""
    per_year: dict[int, list[int]] = {}
    for doc in corpus.documents:
        if doc.pub_year is not None:
            per_year.setdefault(doc.pub_year, []).append(doc.total_citations)
    out = []
    for year in sorted(per_year):
        tcs = per_year[year]
        mean = Fraction(sum(tcs), len(tcs))
        out.append((year, mean / citable_years(year, corpus.reference_year)))
    return out


# Source and author laws ------------------------------------------------------

@dataclass
class BradfordZone:
    zone_index: int
    sources: list[tuple[str, int]]
    cumulative: list[int]
    cumulative_articles: int
    source_share_pct: float
    article_share_pct: float


def bradford_zones(source_counts: Sequence[tuple[str, int]]) -> list[BradfordZone]:
    """Partition sources into the three Bradford productivity zones.

    Sources are ranked by descending article count (ties lexicographic);
    a source belongs to zone 1 while the cumulative article count stays
    within the first third (ceiling), to zone 2 within two thirds.
    """
    if len(source_counts) < 3:
        raise ValueError("Bradford zoning needs at least 3 sources")
    ranked = sorted(source_counts, key=lambda item: (-item[1], item[0]))
    total_articles = sum(count for _, count in ranked)
    total_sources = len(ranked)
    t1 = -(-total_articles // 3)        # ceil(total / 3)
    t2 = -(-2 * total_articles // 3)    # ceil(2 * total / 3)

    zones: dict[int, list[tuple[str, int]]] = {1: [], 2: [], 3: []}
    cumulatives: dict[int, list[int]] = {1: [], 2: [], 3: []}
    running = 0
    for rank, (source, count) in enumerate(ranked):
        running += count
        index = 1 if running <= t1 else 2 if running <= t2 else 3
        if rank == 0:
            # the most productive source is the core even when it alone
            # holds more than a third of all articles
            index = 1
        zones[index].append((source, count))
        cumulatives[index].append(running)

    out = []
    for index in (1, 2, 3):
        articles = sum(count for _, count in zones[index])
        out.append(BradfordZone(
            zone_index=index,
            sources=zones[index],
            cumulative=cumulatives[index],
            cumulative_articles=cumulatives[index][-1] if cumulatives[index] else 0,
            source_share_pct=round_half_up(
                100.0 * len(zones[index]) / total_sources, 2),
            article_share_pct=round_half_up(
                100.0 * articles / total_articles, 2),
        ))
    return out


def source_article_counts(corpus: Corpus) -> list[tuple[str, int]]:
    counts = Counter(doc.source for doc in corpus.documents if doc.source)
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


@dataclass
class LotkaFit:
    observed: dict[int, int]
    predicted: dict[int, float]
    baseline_authors: int


def lotka_fit(author_doc_counts: Sequence[tuple[str, int]]) -> LotkaFit:
    """Observed authors-per-document-count histogram against the classical
    inverse-square prediction anchored on single-document authors."""
    observed = Counter(n for _, n in author_doc_counts if n > 0)
    baseline = observed.get(1, 0)
    if baseline == 0:
        raise ValueError("Lotka baseline undefined: no single-document author")
    predicted = {n: baseline / (n * n) for n in sorted(observed)}
    return LotkaFit(observed=dict(sorted(observed.items())),
                    predicted=predicted, baseline_authors=baseline)


def author_document_counts(corpus: Corpus) -> list[tuple[str, int]]:
    counts = Counter(a for doc in corpus.documents for a in set(doc.authors))
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


# Term statistics -------------------------------------------------------------

@dataclass
class TermStat:
    term: str
    frequency: int
    q1_year: Optional[int] = None
    median_year: Optional[int] = None
    q3_year: Optional[int] = None


TERM_FIELDS = ("DE", "ID", "title-bigrams", "abstract-bigrams")


def document_terms(doc: Document, term_field: str) -> set[str]:
    """The distinct terms a document contributes for a term field."""
    if term_field == "DE":
        return set(doc.author_keywords)
    if term_field == "ID":
        return set(doc.keywords_plus)
    if term_field == "title-bigrams":
        return set(bigrams_of(doc.title))
    if term_field == "abstract-bigrams":
        return set(bigrams_of(doc.abstract or ""))
    raise ValueError(f"unknown term field {term_field!r} (expected one of {TERM_FIELDS})")


def term_frequencies(corpus: Corpus, term_field: str = "DE",
                     top_n: Optional[int] = None) -> list[TermStat]:
    """Document-occurrence counts per term, descending, ties lexicographic.

    A term repeated inside one document counts once (per-document
    presence, matching the full-counting link semantics)."""
    counts = Counter()
    for doc in corpus.documents:
        for term in document_terms(doc, term_field):
            counts[term] += 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    if top_n is not None:
        ranked = ranked[:top_n]
    return [TermStat(term=term, frequency=count) for term, count in ranked]


def _nearest_rank(sorted_values: list[int], quantile: float) -> int:
    rank = max(1, -(-int(quantile * 100) * len(sorted_values) // 100))
    return sorted_values[rank - 1]


def trending_terms(corpus: Corpus, min_freq: int = 5, max_per_year: int = 4,
                   term_field: str = "DE") -> list[TermStat]:
    """Terms with quartile placement over their occurrence years.

    A term qualifies at ``min_freq`` dated occurrences; its occurrence
    years give Q1/median/Q3 by the nearest-rank method.  Each calendar
    year shows at most ``max_per_year`` terms, ranked by that-year
    frequency.
    """
    years_by_term: dict[str, list[int]] = {}
    for doc in corpus.documents:
        if doc.pub_year is None:
            continue
        for term in document_terms(doc, term_field):
            years_by_term.setdefault(term, []).append(doc.pub_year)

    candidates = []
    for term, years in years_by_term.items():
        if len(years) < min_freq:
            continue
        years.sort()
        stat = TermStat(term=term, frequency=len(years),
                        q1_year=_nearest_rank(years, 0.25),
                        median_year=_nearest_rank(years, 0.50),
                        q3_year=_nearest_rank(years, 0.75))
        year_freq = years.count(stat.median_year)
        candidates.append((stat.median_year, -year_freq, -stat.frequency,
                           term, stat))

    out: list[TermStat] = []
    per_year_kept = Counter()
    for median_year, _, _, _, stat in sorted(candidates, key=lambda c: c[:4]):
        if per_year_kept[median_year] < max_per_year:
            per_year_kept[median_year] += 1
            out.append(stat)
    return out


# Collaboration ---------------------------------------------------------------

@dataclass
class CountryCollaboration:
    country: str
    scp: int
    mcp: int
    mcp_pct: float


def collaboration_indices(corpus: Corpus,
                          resolver: Optional[Callable[[str], Optional[str]]] = None,
                          ) -> tuple[list[CountryCollaboration], list[str]]:
    """Single- vs multi-country publication counts per country.

    A document whose affiliations span one country is an SCP of that
    country; one spanning several is an MCP attributed to the
    corresponding author's country.  Documents without a resolvable
    country are excluded and their ids returned for flagging.
    """
    resolve = resolver or country_of
    scp = Counter()
    mcp = Counter()
    excluded = []
    for doc in corpus.documents:
        countries = []
        for aff in doc.affiliations:
            country = resolve(aff)
            if country and country not in countries:
                countries.append(country)
        if not countries:
            excluded.append(doc.id)
            continue
        if len(countries) == 1:
            scp[countries[0]] += 1
            continue
        lead = resolve(doc.corresponding) if doc.corresponding else None
        mcp[lead if lead in countries else countries[0]] += 1

    out = []
    for country in sorted(set(scp) | set(mcp),
                          key=lambda c: (-(scp[c] + mcp[c]), c)):
        s, m = scp[country], mcp[country]
        out.append(CountryCollaboration(
            country=country, scp=s, mcp=m,
            mcp_pct=mcp_ratio_pct(s, m)))
    return out, excluded


def mcp_ratio_pct(scp: int, mcp: int) -> float:
    """MCP share of a country's output, in percent, half-up to 1 decimal."""
    if scp + mcp == 0:
        return 0.0
    return round_half_up(100.0 * mcp / (scp + mcp), 1)


# Production over time --------------------------------------------------------

ENTITY_LEVELS = ("source", "country", "affiliation")


def _document_entities(doc: Document, level: str) -> set[str]:
    if level == "source":
        return {doc.source} if doc.source else set()
    if level == "country":
        return {c for c in (country_of(a) for a in doc.affiliations) if c}
    if level == "affiliation":
        return {institution_of(a) for a in doc.affiliations}
    raise ValueError(f"unknown entity level {level!r} (expected one of {ENTITY_LEVELS})")


def entity_production_over_time(corpus: Corpus, level: str = "source",
                                top_n: Optional[int] = None,
                                ) -> dict[str, tuple[AnnualSeries, AnnualSeries]]:
    """Yearly and cumulative document production per entity.

    The cumulative series carries forward flat through years without
    output, up to the corpus' last dated year; undated documents are
    excluded from both series and counted in the yearly series' remainder
    bucket.
    """
    yearly: dict[str, Counter] = {}
    undated: Counter = Counter()
    last_dated = max((d.pub_year for d in corpus.documents
                      if d.pub_year is not None), default=None)
    for doc in corpus.documents:
        for entity in _document_entities(doc, level):
            if doc.pub_year is None:
                undated[entity] += 1
            else:
                yearly.setdefault(entity, Counter())[doc.pub_year] += 1

    entities = sorted(yearly, key=lambda e: (-sum(yearly[e].values()), e))
    if top_n is not None:
        entities = entities[:top_n]

    out = {}
    for entity in entities:
        counts = yearly[entity]
        points = [(year, float(counts[year])) for year in sorted(counts)]
        series = AnnualSeries(points=points, unit="documents",
                              undated=undated[entity])
        running = 0.0
        cumulative = []
        for year in range(min(counts), (last_dated or max(counts)) + 1):
            running += counts.get(year, 0)
            cumulative.append((year, running))
        out[entity] = (series, AnnualSeries(points=cumulative,
                                            unit="documents cumulative"))
    return out


# Lexicon-driven method tally -------------------------------------------------

@dataclass
class MethodOccurrence:
    niches: list[str]
    methods: list[str]
    counts: dict[tuple[str, str], int] = field(default_factory=dict)
    row_totals: dict[str, int] = field(default_factory=dict)
    column_totals: dict[str, int] = field(default_factory=dict)
    suppressed: list[tuple[str, str, int]] = field(default_factory=list)


def method_occurrence(corpus: Corpus,
                      niche_of: Callable[[Document], set[str]],
                      lexicon: dict[str, list[str]],
                      min_occ: int = 3) -> MethodOccurrence:
    """Tally lexicon-matched method mentions per topic niche.

    A document counts toward (niche, method) when any of its author
    keywords matches a synonym of the method.  Cells below ``min_occ``
    are reported as 0 and listed as suppressed; totals cover retained
    cells only.
    """
    if not lexicon:
        raise ValueError("method occurrence needs a non-empty lexicon")
    synonyms = {method: {s.strip().lower() for s in terms}
                for method, terms in lexicon.items()}
    raw: dict[tuple[str, str], int] = {}
    niches: list[str] = []
    for doc in corpus.documents:
        doc_terms = set(doc.author_keywords)
        doc_niches = niche_of(doc)
        for niche in doc_niches:
            if niche not in niches:
                niches.append(niche)
            for method, terms in synonyms.items():
                if doc_terms & terms:
                    raw[(niche, method)] = raw.get((niche, method), 0) + 1

    result = MethodOccurrence(niches=sorted(niches), methods=sorted(lexicon))
    for niche in result.niches:
        for method in result.methods:
            count = raw.get((niche, method), 0)
            if 0 < count < min_occ:
                result.suppressed.append((niche, method, count))
                count = 0
            result.counts[(niche, method)] = count
            result.row_totals[niche] = result.row_totals.get(niche, 0) + count
            result.column_totals[method] = result.column_totals.get(method, 0) + count
    return result
