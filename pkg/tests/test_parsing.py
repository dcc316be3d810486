from __future__ import annotations

import random

import pytest

from scimap.parsing import (
    ExportParseError, parse_bibtex_export, parse_plaintext_export,
)

HEADER = "FN Clarivate Analytics Web of Science\nVR 1.0\n"

MINIMAL_RECORD = (
    "PT J\n"
    "AU Altman, EI\n"
    "TI Financial ratios and the prediction of corporate bankruptcy\n"
    "SO JOURNAL OF FINANCE\n"
    "PY 1968\n"
    "TC 512\n"
    "ER\n"
)


def test_single_record_has_six_tags():
    records = parse_plaintext_export((HEADER + MINIMAL_RECORD + "EF\n").encode())
    assert len(records) == 1
    assert set(records[0].entries) == {"PT", "AU", "TI", "SO", "PY", "TC"}


def test_empty_file_after_header():
    assert parse_plaintext_export((HEADER + "EF\n").encode()) == []
    assert parse_plaintext_export(b"") == []


def test_cr_block_with_three_continuation_lines():
    # Hand-parse oracle: the CR tag line opens the block, each of the three
    # indented lines contributes one value.
    text = (
        HEADER
        + "PT J\n"
        + "AU Kumar, P. Ravi\n"
        + "TI A review\n"
        + "CR\n"
        + "   ALTMAN EI, 1968, J FINANC, V23, P589\n"
        + "   OHLSON JA, 1980, J ACCOUNTING RES, V18, P109\n"
        + "   BEAVER WH, 1966, J ACCOUNTING RES, V4, P71\n"
        + "PY 2007\n"
        + "TC 609\n"
        + "ER\nEF\n"
    )
    records = parse_plaintext_export(text.encode())
    assert len(records) == 1
    assert records[0].entries["CR"] == [
        "ALTMAN EI, 1968, J FINANC, V23, P589",
        "OHLSON JA, 1980, J ACCOUNTING RES, V18, P109",
        "BEAVER WH, 1966, J ACCOUNTING RES, V4, P71",
    ]


def test_continuation_appends_to_previous_tag():
    text = (
        HEADER
        + "PT J\n"
        + "TI Bankruptcy prediction in banks and firms via statistical and\n"
        + "   intelligent techniques - A review\n"
        + "TC 609\n"
        + "ER\nEF\n"
    )
    records = parse_plaintext_export(text.encode())
    assert records[0].entries["TI"] == [
        "Bankruptcy prediction in banks and firms via statistical and",
        "intelligent techniques - A review",
    ]


def test_unterminated_record_names_file_and_index():
    data = (HEADER + "PT J\nTI No terminator\n").encode()
    with pytest.raises(ExportParseError) as err:
        parse_plaintext_export(data, source_file="broken.txt")
    assert "broken.txt" in str(err.value)
    assert "record 0" in str(err.value)


def test_unknown_tags_preserved():
    text = HEADER + "PT J\nZ9 640\nU1 12\nTC 1\nER\nEF\n"
    records = parse_plaintext_export(text.encode())
    assert records[0].entries["Z9"] == ["640"]
    assert records[0].entries["U1"] == ["12"]


def test_bom_tolerated():
    data = b"\xef\xbb\xbf" + (HEADER + MINIMAL_RECORD + "EF\n").encode()
    assert len(parse_plaintext_export(data)) == 1


def test_plaintext_totality_on_fuzz_input():
    rng = random.Random(20230505)
    for _ in range(300):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(200)))
        try:
            result = parse_plaintext_export(blob)
        except ExportParseError:
            continue
        assert isinstance(result, list)


BIBTEX_ENTRY = """\
@article{ WOS:000245606900001,
Author = {Kumar, P. Ravi and Ravi, V.},
Title = {{Bankruptcy prediction in banks and firms via statistical and
   intelligent techniques - A review}},
Journal = {{EUROPEAN JOURNAL OF OPERATIONAL RESEARCH}},
Year = {{2007}},
Keywords = {{bankruptcy prediction; neural networks}},
Cited-References = {{ALTMAN EI, 1968, J FINANC, V23, P589.
OHLSON JA, 1980, J ACCOUNTING RES, V18, P109.}},
Times-Cited = {{187}},
DOI = {{10.1016/j.ejor.2006.08.043}},
}
"""


def test_bibtex_times_cited_maps_to_tc():
    records = parse_bibtex_export("@article{X, Times-Cited = {{187}}}".encode())
    assert len(records) == 1
    assert records[0].entries["TC"] == ["187"]


def test_bibtex_full_entry_vocabulary():
    records = parse_bibtex_export(BIBTEX_ENTRY.encode())
    record = records[0]
    assert record.entries["AU"] == ["Kumar, P. Ravi", "Ravi, V."]
    assert record.entries["SO"] == ["EUROPEAN JOURNAL OF OPERATIONAL RESEARCH"]
    assert record.entries["PY"] == ["2007"]
    assert record.entries["DE"] == ["bankruptcy prediction", "neural networks"]
    assert record.entries["DI"] == ["10.1016/j.ejor.2006.08.043"]
    assert "A review" in record.entries["TI"][0]


def test_bibtex_missing_abstract_is_not_an_error():
    records = parse_bibtex_export(BIBTEX_ENTRY.encode())
    assert "AB" not in records[0].entries


def test_bibtex_cited_references_split_on_separator():
    # Two separator-joined references, checked against a manual split.
    records = parse_bibtex_export(BIBTEX_ENTRY.encode())
    assert records[0].entries["CR"] == [
        "ALTMAN EI, 1968, J FINANC, V23, P589",
        "OHLSON JA, 1980, J ACCOUNTING RES, V18, P109",
    ]


def test_bibtex_duplicate_field_last_wins_and_flags():
    entry = "@article{X,\nYear = {{1999}},\nYear = {{2001}},\n}\n"
    records = parse_bibtex_export(entry.encode())
    assert records[0].entries["PY"] == ["2001"]
    assert any(flag.startswith("duplicate-field:year") for flag in records[0].flags)


def test_bibtex_unbalanced_braces_reports_offset():
    entry = "@article{X,\nTitle = {{broken},\n}\n"
    with pytest.raises(ExportParseError) as err:
        parse_bibtex_export(entry.encode(), source_file="bad.bib")
    assert err.value.offset is not None
    assert "bad.bib" in str(err.value)


def test_bibtex_totality_on_fuzz_input():
    rng = random.Random(424242)
    for _ in range(300):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(200)))
        try:
            result = parse_bibtex_export(blob)
        except ExportParseError:
            continue
        assert isinstance(result, list)


def test_mutation_fuzz_over_real_exports():
    # flipped bytes in a well-formed export either still parse or raise
    # the positioned error, never anything else
    from pathlib import Path
    base = (Path(__file__).parent / "data" / "sample_export.txt").read_bytes()
    rng = random.Random(515151)
    for _ in range(120):
        blob = bytearray(base)
        for _ in range(rng.randrange(1, 6)):
            blob[rng.randrange(len(blob))] = rng.randrange(256)
        try:
            records = parse_plaintext_export(bytes(blob))
        except ExportParseError:
            continue
        assert isinstance(records, list)
