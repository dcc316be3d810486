"""Name, reference, and record normalization.

Turns raw export records into typed documents: author names into the
``SURNAME, IJ`` convention, cited-reference strings into classified
segments, DOIs into their canonical lowercase form.
"""
from __future__ import annotations

import re
import unicodedata
from typing import Optional

from .records import (
    Document, CitedReference, RawRecord, FIELD_ROLES, MIN_PLAUSIBLE_YEAR,
)

_DOI_RE = re.compile(r"^10\.[^/\s]+/\S+$")
_YEAR_SEG = re.compile(r"^(1[4-9]\d{2}|20\d{2}|21\d{2})$")
_VOLUME_SEG = re.compile(r"^V\d+[A-Z]?$")
_PAGE_SEG = re.compile(r"^P[A-Z]?\d+[A-Z]?$")

# Country aliases for the ragged last segment of WoS affiliation strings.
_UK_PARTS = {"ENGLAND", "SCOTLAND", "WALES", "NORTH IRELAND", "NORTHERN IRELAND"}


def fold_ascii(text: str) -> str:
    """Fold diacritics to ASCII (NFKD decomposition, combining marks dropped)."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_author_name(raw: str) -> str:
    """Normalize a personal name to ``SURNAME, IJ``.

    Accepts the comma form ("Tsai, Chih-Fong"), the surname-first citing
    form ("SHIN KS"), and anything already normalized; the function is
    idempotent and case-insensitive on input.  Blank input is an error.
    """
    if not raw or not raw.strip():
        raise ValueError("blank author name")
    text = fold_ascii(raw).replace(".", " ").strip()
    text = re.sub(r"\s+", " ", text)
    if "," in text:
        surname, _, given = text.partition(",")
    else:
        tokens = text.split(" ")
        if len(tokens) == 1:
            surname, given = tokens[0], ""
        else:
            # Surname-first convention: a short final token is the initials.
            surname, given = " ".join(tokens[:-1]), tokens[-1]
    initials = "".join(_initials_of(part) for part in re.split(r"[\s\-]+", given) if part)
    surname = re.sub(r"[^A-Za-z\- ]", "", surname).upper().strip()
    if not surname:
        raise ValueError(f"no surname in author name: {raw!r}")
    return f"{surname}, {initials}" if initials else surname


def _initials_of(part: str) -> str:
    # "KS" is two initials; "Kyung" contributes one.
    if part.isupper() and len(part) <= 3:
        return "".join(ch for ch in part if ch.isalpha())
    for ch in part:
        if ch.isalpha():
            return ch.upper()
    return ""


def surname_of(name: str) -> str:
    """Surname match key of a name in either convention.

    Handles "KUMAR, PR" and the citing form "KUMAR PR" alike; spaces and
    hyphens are squeezed out so multi-word surnames compare stably.
    """
    head = fold_ascii(name).upper().replace(".", " ").strip()
    if "," in head:
        head = head.split(",")[0]
    else:
        tokens = head.split()
        if len(tokens) > 1 and len(tokens[-1]) <= 3:
            tokens = tokens[:-1]  # trailing initials
        head = " ".join(tokens)
    return re.sub(r"[\s\-]+", "", head)


def normalize_doi(raw: str) -> Optional[str]:
    """Canonical lowercase DOI, or None when the syntax does not hold."""
    text = raw.strip()
    for prefix in ("https://doi.org/", "http://doi.org/", "http://dx.doi.org/", "doi:", "DOI:", "DOI "):
        if text.lower().startswith(prefix.lower()):
            text = text[len(prefix):].strip()
    text = text.strip("[]")
    if "," in text:  # bracketed DOI lists in some CR exports: keep the first
        text = text.split(",")[0].strip()
    text = text.lower().rstrip(".;")
    return text if _DOI_RE.match(text) else None


def parse_cited_reference(raw: str) -> CitedReference:
    """Classify the comma-separated segments of a cited-reference string.

    Segments are assigned positionally and by shape: leading name, 4-digit
    year, venue, V-token, P-token, DOI token.  Whatever cannot be
    classified stays in ``raw`` only; the function never fails.
    """
    ref = CitedReference(raw=raw)
    if not raw.strip():
        return ref
    segments = [seg.strip() for seg in raw.split(",")]
    claimed = [False] * len(segments)

    for i, seg in enumerate(segments):
        upper = seg.upper()
        if ref.doi is None and (upper.startswith("DOI") or _DOI_RE.match(seg.rstrip(".;"))):
            doi = normalize_doi(seg if not upper.startswith("DOI") else seg[3:])
            if doi:
                ref.doi = doi
                claimed[i] = True
        elif ref.year is None and _YEAR_SEG.match(seg):
            ref.year = int(seg)
            claimed[i] = True
        elif ref.volume is None and _VOLUME_SEG.match(upper):
            ref.volume = upper
            claimed[i] = True
        elif ref.page is None and _PAGE_SEG.match(upper):
            ref.page = upper
            claimed[i] = True

    if segments and not claimed[0] and segments[0]:
        ref.first_author = re.sub(r"\s+", " ", fold_ascii(segments[0]).replace(".", " ")).strip().upper()
        claimed[0] = True
    # The venue is the first unclaimed letter-initial segment after the
    # author; segments of other shapes (e.g. a malformed year) stay in raw.
    for i, seg in enumerate(segments):
        if not claimed[i] and seg and i > 0 and seg[0].isalpha():
            ref.source = re.sub(r"\s+", " ", fold_ascii(seg)).strip().upper()
            break
    return ref


def reference_key(ref: CitedReference) -> tuple:
    """Identity of a cited reference: the DOI when present, else the
    (author, year, source) triple.  Volume and page never discriminate,
    so two renderings differing only there merge."""
    if ref.doi:
        return ("doi", ref.doi)
    return ("meta", ref.first_author or "", ref.year or 0, ref.source or "")


def normalize_affiliation(raw: str) -> str:
    """Normalize one affiliation line: strip the bracketed author list WoS
    prepends, fold to ASCII uppercase, collapse whitespace."""
    text = re.sub(r"^\[[^\]]*\]\s*", "", raw)
    text = fold_ascii(text).upper()
    text = re.sub(r"\s+", " ", text).strip().rstrip(".")
    return text


def institution_of(affiliation: str) -> str:
    """Leading segment of a normalized affiliation (the institution name)."""
    return affiliation.split(",")[0].strip()


def country_of(affiliation: str) -> Optional[str]:
    """Country from the trailing segment of a normalized affiliation."""
    segments = [seg.strip() for seg in affiliation.split(",") if seg.strip()]
    if not segments:
        return None
    tail = segments[-1].rstrip(".").strip()
    if not tail:
        return None
    if tail.endswith("USA"):
        return "USA"
    if tail in _UK_PARTS:
        return "UNITED KINGDOM"
    if tail == "PEOPLES R CHINA":
        return "CHINA"
    return tail


_DT_MAP = (
    ("early access", "early-access"),
    ("review", "review"),
    ("article", "article"),
)


def classify_doc_type(raw: str) -> str:
    lowered = raw.lower()
    for needle, label in _DT_MAP:
        if needle in lowered:
            return label
    return "other"


def _split_terms(values: list[str]) -> list[str]:
    """Split keyword value lines on ';', lowercase and trim, drop repeats."""
    seen: dict[str, None] = {}
    for value in values:
        for term in value.split(";"):
            term = re.sub(r"\s+", " ", term).strip().lower()
            if term:
                seen.setdefault(term, None)
    return list(seen)


def to_document(record: RawRecord, reference_year: int,
                doc_id: Optional[str] = None) -> Document:
    """Map a raw record onto the sixteen field roles of a ``Document``.

    Missing tags yield empty or optional fields (reported later by the
    coverage report, never an error here).  An unparseable publication
    year degrades to an absent year plus a quality flag; a total-citation
    value that is not a non-negative integer is a hard error.
    """
    entries = record.entries
    doc = Document(id=doc_id or record.first("UT")
                   or f"{record.source_file or 'record'}:{record.record_index}")
    doc.quality_flags.extend(record.flags)

    for raw_name in entries.get("AU", []):
        if raw_name.strip():
            doc.authors.append(normalize_author_name(raw_name))
    doc.title = re.sub(r"\s+", " ", " ".join(entries.get("TI", []))).strip()
    doc.source = re.sub(r"\s+", " ", " ".join(entries.get("SO", []))).strip().upper()

    py_raw = record.first("PY")
    if py_raw is not None:
        try:
            year = int(py_raw.strip())
        except ValueError:
            year = None
        if year is not None and MIN_PLAUSIBLE_YEAR <= year <= reference_year:
            doc.pub_year = year
        else:
            doc.quality_flags.append(f"unparseable-py:{py_raw.strip()}")

    tc_raw = record.first("TC")
    if tc_raw is not None:
        try:
            tc = int(tc_raw.strip())
        except ValueError:
            raise ValueError(f"total citations not an integer: {tc_raw!r} "
                             f"(document {doc.id})") from None
        if tc < 0:
            raise ValueError(f"negative total citations: {tc} (document {doc.id})")
        doc.total_citations = tc

    doc.cited_refs = [parse_cited_reference(line)
                      for line in entries.get("CR", []) if line.strip()]

    nr_raw = record.first("NR")
    if nr_raw is not None:
        try:
            doc.ref_count = int(nr_raw.strip())
        except ValueError:
            doc.quality_flags.append(f"unparseable-nr:{nr_raw.strip()}")
        if doc.ref_count is not None and doc.cited_refs \
                and doc.ref_count != len(doc.cited_refs):
            doc.quality_flags.append(
                f"nr-cr-mismatch:{doc.ref_count}!={len(doc.cited_refs)}")

    doc.author_keywords = _split_terms(entries.get("DE", []))
    doc.keywords_plus = _split_terms(entries.get("ID", []))

    abstract = re.sub(r"\s+", " ", " ".join(entries.get("AB", []))).strip()
    doc.abstract = abstract or None

    doc.affiliations = [normalize_affiliation(line)
                        for line in entries.get("C1", []) if line.strip()]

    rp_raw = " ".join(entries.get("RP", [])).strip()
    if rp_raw:
        doc.corresponding = normalize_affiliation(rp_raw)

    di_raw = record.first("DI")
    if di_raw:
        doc.doi = normalize_doi(di_raw)
        if doc.doi is None:
            doc.quality_flags.append(f"invalid-doi:{di_raw.strip()}")

    dt_raw = (record.first("DT") or "").strip()
    doc.doc_type = classify_doc_type(dt_raw) if dt_raw else ""
    doc.language = (record.first("LA") or "").strip()
    doc.categories = [seg.strip() for value in entries.get("WC", [])
                      for seg in value.split(";") if seg.strip()]

    known = {"AU", "TI", "SO", "PY", "TC", "CR", "NR", "DE", "ID", "AB",
             "C1", "RP", "DI", "DT", "LA", "WC", "UT", "PT"}
    doc.extra = {tag: list(values) for tag, values in entries.items()
                 if tag not in known}
    doc.missing_fields = [tag for tag, _ in FIELD_ROLES
                          if not any(v.strip() for v in entries.get(tag, []))]
    return doc
