from __future__ import annotations

import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from scimap.records import Document  # noqa: E402
from scimap.corpus import dedupe_and_screen  # noqa: E402


def make_document(doc_id, *, authors=(), title="", source="", pub_year=None,
                  total_citations=0, cited_refs=(), keywords=(), keywords_plus=(),
                  abstract=None, affiliations=(), corresponding=None, doi=None,
                  doc_type="article", language="English", categories=(),
                  ref_count=None):
    return Document(
        id=doc_id, authors=list(authors), title=title, source=source,
        pub_year=pub_year, total_citations=total_citations,
        cited_refs=list(cited_refs), ref_count=ref_count,
        author_keywords=[k.lower() for k in keywords],
        keywords_plus=[k.lower() for k in keywords_plus],
        abstract=abstract, affiliations=list(affiliations),
        corresponding=corresponding, doi=doi, doc_type=doc_type,
        language=language, categories=list(categories),
    )


def make_ref(text):
    from scimap.normalize import parse_cited_reference
    return parse_cited_reference(text)


def build_corpus(documents, reference_year=None, retracted=(), provenance=("test",)):
    return dedupe_and_screen(documents, retracted=retracted,
                             reference_year=reference_year,
                             provenance=provenance)
