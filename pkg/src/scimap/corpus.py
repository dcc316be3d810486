"""Corpus construction: deduplication, screening, coverage, file round-trip.

Duplicates arise from overlapping export queries; the merge keeps the
maximum citation snapshot and the union of keyword lists.  DOI equality
outranks the title+year key because the DOI is the only globally unique
key among the exported fields.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Optional

from .normalize import fold_ascii, normalize_doi
from .records import (
    Corpus, CoverageReport, CoverageRow, CitedReference, Document,
    FIELD_ROLES, ScreeningEntry, coverage_label,
)
from .tables import round_half_up

CORPUS_SCHEMA = "scimap-corpus/1"


def normalized_title(title: str) -> str:
    text = fold_ascii(title).lower()
    text = re.sub(r"[^a-z0-9]+", " ", text)
    return re.sub(r"\s+", " ", text).strip()


def dedupe_and_screen(documents: Iterable[Document],
                      retracted: Iterable[str] = (),
                      reference_year: Optional[int] = None,
                      provenance: Iterable[str] = ()) -> Corpus:
    """Merge duplicates, drop retracted items, and freeze a corpus.

    Duplicate matching is DOI-first, then (normalized title, year).  Every
    removal lands in the screening ledger with its reason; applying the
    function to an already-screened corpus removes nothing.
    """
    retracted_keys = set()
    for key in retracted:
        retracted_keys.add(key)
        doi = normalize_doi(key)
        if doi:
            retracted_keys.add(doi)

    kept: list[Document] = []
    screening: list[ScreeningEntry] = []
    by_doi: dict[str, str] = {}
    by_title_year: dict[tuple, str] = {}
    by_id: dict[str, Document] = {}

    for doc in documents:
        if doc.id in retracted_keys or (doc.doi and doc.doi in retracted_keys):
            screening.append(ScreeningEntry(removed_id=doc.id, reason="retracted"))
            continue
        target_id = None
        reason = ""
        if doc.doi and doc.doi in by_doi:
            target_id, reason = by_doi[doc.doi], "duplicate-doi"
        else:
            title_key = (normalized_title(doc.title), doc.pub_year)
            if doc.title and title_key in by_title_year:
                candidate = by_id[by_title_year[title_key]]
                # DOI outranks the title+year key: conflicting DOIs mean
                # distinct works even under an identical title.
                if not (doc.doi and candidate.doi and doc.doi != candidate.doi):
                    target_id, reason = candidate.id, "duplicate-title-year"
        if target_id is not None:
            _merge_into(by_id[target_id], doc)
            screening.append(ScreeningEntry(removed_id=doc.id, reason=reason,
                                            kept_id=target_id))
            continue
        kept.append(doc)
        by_id[doc.id] = doc
        if doc.doi:
            by_doi[doc.doi] = doc.id
        if doc.title:
            by_title_year[(normalized_title(doc.title), doc.pub_year)] = doc.id

    if reference_year is None:
        dated = [d.pub_year for d in kept if d.pub_year is not None]
        if not dated:
            raise ValueError("reference_year must be given for an undated corpus")
        reference_year = max(dated)

    return Corpus(documents=kept, reference_year=reference_year,
                  provenance=list(provenance), screening=screening,
                  by_doi=by_doi, by_title_year=by_title_year)


def _merge_into(target: Document, dup: Document) -> None:
    """Merge a duplicate record: max citations, union of list fields,
    missing scalars filled from the duplicate."""
    target.total_citations = max(target.total_citations, dup.total_citations)
    target.author_keywords = _union(target.author_keywords, dup.author_keywords)
    target.keywords_plus = _union(target.keywords_plus, dup.keywords_plus)
    target.categories = _union(target.categories, dup.categories)
    if not target.authors:
        target.authors = list(dup.authors)
    if not target.affiliations:
        target.affiliations = list(dup.affiliations)
    if not target.cited_refs:
        target.cited_refs = list(dup.cited_refs)
    for attr in ("pub_year", "abstract", "doi", "corresponding", "ref_count"):
        if getattr(target, attr) in (None, "") and getattr(dup, attr) not in (None, ""):
            setattr(target, attr, getattr(dup, attr))
    for attr in ("title", "source", "doc_type", "language"):
        if not getattr(target, attr) and getattr(dup, attr):
            setattr(target, attr, getattr(dup, attr))
    if target.missing_fields is not None and dup.missing_fields is not None:
        target.missing_fields = [t for t in target.missing_fields
                                 if t in set(dup.missing_fields)]
    target.quality_flags.extend(f for f in dup.quality_flags
                                if f not in target.quality_flags)


def _union(first: list[str], second: list[str]) -> list[str]:
    merged = list(first)
    known = set(first)
    for item in second:
        if item not in known:
            merged.append(item)
            known.add(item)
    return merged


# Coverage ----------------------------------------------------------------

def _field_missing(doc: Document, tag: str) -> bool:
    if doc.missing_fields is not None:
        return tag in doc.missing_fields
    value = {
        "AU": doc.authors, "CR": doc.cited_refs, "DT": doc.doc_type,
        "SO": doc.source, "LA": doc.language, "NR": doc.ref_count,
        "TI": doc.title, "TC": doc.total_citations, "AB": doc.abstract,
        "C1": doc.affiliations, "RP": doc.corresponding, "DI": doc.doi,
        "PY": doc.pub_year, "DE": doc.author_keywords,
        "ID": doc.keywords_plus, "WC": doc.categories,
    }[tag]
    if tag == "TC":  # value 0 is a legal citation count, not absence
        return False
    if value is None:
        return True
    if isinstance(value, (list, str)):
        return len(value) == 0
    return False


def coverage_report(corpus: Corpus) -> CoverageReport:
    """Per-field missing counts with the quality label scale applied."""
    if not corpus.documents:
        raise ValueError("coverage report needs a non-empty corpus")
    n = len(corpus.documents)
    rows = []
    for tag, description in FIELD_ROLES:
        missing = sum(1 for doc in corpus.documents if _field_missing(doc, tag))
        pct = round_half_up(100.0 * missing / n, 2)
        rows.append(CoverageRow(tag=tag, description=description,
                                missing_count=missing, missing_pct=pct,
                                label=coverage_label(pct)))
    return CoverageReport(rows=rows, corpus_size=n)


# Canonical corpus file ----------------------------------------------------

def _ref_to_json(ref: CitedReference) -> dict:
    out = {"raw": ref.raw}
    for attr in ("first_author", "year", "source", "volume", "page", "doi"):
        value = getattr(ref, attr)
        if value is not None:
            out[attr] = value
    return out


def _doc_to_json(doc: Document) -> dict:
    return {
        "id": doc.id,
        "authors": doc.authors,
        "title": doc.title,
        "source": doc.source,
        "pub_year": doc.pub_year,
        "total_citations": doc.total_citations,
        "cited_refs": [_ref_to_json(r) for r in doc.cited_refs],
        "ref_count": doc.ref_count,
        "author_keywords": doc.author_keywords,
        "keywords_plus": doc.keywords_plus,
        "abstract": doc.abstract,
        "affiliations": doc.affiliations,
        "corresponding": doc.corresponding,
        "doi": doc.doi,
        "doc_type": doc.doc_type,
        "language": doc.language,
        "categories": doc.categories,
        "quality_flags": doc.quality_flags,
        "extra": doc.extra,
        "missing_fields": doc.missing_fields,
    }


def _doc_from_json(data: dict) -> Document:
    refs = [CitedReference(**entry) for entry in data.get("cited_refs", [])]
    return Document(
        id=data["id"], authors=list(data.get("authors", [])),
        title=data.get("title", ""), source=data.get("source", ""),
        pub_year=data.get("pub_year"),
        total_citations=int(data.get("total_citations", 0)),
        cited_refs=refs, ref_count=data.get("ref_count"),
        author_keywords=list(data.get("author_keywords", [])),
        keywords_plus=list(data.get("keywords_plus", [])),
        abstract=data.get("abstract"),
        affiliations=list(data.get("affiliations", [])),
        corresponding=data.get("corresponding"), doi=data.get("doi"),
        doc_type=data.get("doc_type", ""), language=data.get("language", ""),
        categories=list(data.get("categories", [])),
        quality_flags=list(data.get("quality_flags", [])),
        extra=dict(data.get("extra", {})),
        missing_fields=data.get("missing_fields"),
    )


def save_corpus(corpus: Corpus, path: str | Path) -> Path:
    """Write the versioned corpus file: one JSON header line, then one
    JSON document per line in stable field order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps({
        "schema": CORPUS_SCHEMA,
        "reference_year": corpus.reference_year,
        "provenance": corpus.provenance,
        "screening": [{"removed_id": e.removed_id, "reason": e.reason,
                       "kept_id": e.kept_id, "detail": e.detail}
                      for e in corpus.screening],
    }, ensure_ascii=True, separators=(",", ":"))]
    lines.extend(json.dumps(_doc_to_json(doc), ensure_ascii=True,
                            separators=(",", ":"))
                 for doc in corpus.documents)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_corpus(path: str | Path) -> Corpus:
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        header_line = handle.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"not a corpus file: {path}") from exc
        if header.get("schema") != CORPUS_SCHEMA:
            raise ValueError(f"unsupported corpus schema in {path}: "
                             f"{header.get('schema')!r}")
        documents = [_doc_from_json(json.loads(line))
                     for line in handle if line.strip()]
    screening = [ScreeningEntry(**entry) for entry in header.get("screening", [])]
    corpus = Corpus(documents=documents,
                    reference_year=int(header["reference_year"]),
                    provenance=list(header.get("provenance", [])),
                    screening=screening)
    for doc in documents:
        if doc.doi:
            corpus.by_doi.setdefault(doc.doi, doc.id)
        if doc.title:
            corpus.by_title_year.setdefault(
                (normalized_title(doc.title), doc.pub_year), doc.id)
    return corpus
