import json

import pytest

from scholarkit.corpus.records import (
    RecordInvalid,
    canonical_json,
    record_from_json,
    record_to_json,
)
from scholarkit.corpus.store import CorpusStore
from scholarkit.errors import PaperNotFound

from conftest import make_record_json, write_jsonl


def test_ingest_single_valid_record(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    obj = make_record_json(
        "x1",
        title="Topology of random graphs",
        abstract_sentences=["Random graphs exhibit phase transitions."],
        fullbody_sentences=["The proof [1] uses a counting argument."],
        year=2007,
        month=3,
        authors=[("Daiki", "Ito")],
        references=[("Counting arguments in combinatorics", [("S", "Hale")], 1973, "1. Hale, S.")],
        cite_spans_on_first_fullbody=[{"start": "10", "end": "13", "text": "[1]", "ref_id": "0"}],
    )
    report = store.ingest_jsonl(write_jsonl(tmp_path / "one.jsonl", [obj]))
    assert report.accepted == 1
    assert report.rejected == 0


def test_ingest_empty_file(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    report = store.ingest_jsonl(write_jsonl(tmp_path / "empty.jsonl", []))
    assert (report.accepted, report.rejected) == (0, 0)


def test_ingest_rejects_dangling_ref_id(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    obj = make_record_json(
        "x1",
        fullbody_sentences=["Shown in [7] previously."],
        references=[("A", [], 2000, ""), ("B", [], 2001, "")],
        cite_spans_on_first_fullbody=[{"start": "9", "end": "12", "text": "[7]", "ref_id": "7"}],
    )
    report = store.ingest_jsonl(write_jsonl(tmp_path / "bad.jsonl", [obj]))
    assert (report.accepted, report.rejected) == (0, 1)
    assert "dangling ref_id" in report.reasons[0]


def test_ingest_counts_malformed_json_line(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    path = tmp_path / "mixed.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(make_record_json("ok1", title="T")) + "\n")
        fh.write("{not json at all\n")
    report = store.ingest_jsonl(path)
    assert (report.accepted, report.rejected) == (1, 1)


def test_ingest_missing_file_raises(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    with pytest.raises(OSError):
        store.ingest_jsonl(tmp_path / "nope.jsonl")


def test_get_round_trip_and_overwrite(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    first = make_record_json("x1", title="First title", year=2019)
    second = make_record_json("x1", title="Second title", year=2019)
    store.ingest_jsonl(write_jsonl(tmp_path / "a.jsonl", [first]))
    assert store.get("x1").title == "First title"
    store.ingest_jsonl(write_jsonl(tmp_path / "b.jsonl", [second]))
    assert store.get("x1").title == "Second title"


def test_get_unknown_raises_not_found(tmp_path):
    store = CorpusStore(tmp_path / "store.sqlite", "c1")
    with pytest.raises(PaperNotFound):
        store.get("missing")


def test_canonical_round_trip_is_byte_identical(tmp_path, small_store):
    for record in small_store.iter_records():
        reparsed = record_from_json(json.loads(canonical_json(record)), record.corpus_id)
        assert canonical_json(reparsed) == canonical_json(record)
        assert small_store.get_raw(record.paper_id) == canonical_json(record)


def test_string_digit_ids_canonicalize_to_integers():
    obj = make_record_json("x1", fullbody_sentences=["One sentence."])
    record = record_from_json(obj, "c1")
    sec = record.fullbody_parsed[0]
    assert sec.section_id == 0
    assert sec.paragraphs[0].paragraph_id == 0
    assert sec.paragraphs[0].sentences[0].sentence_id == 0
    emitted = record_to_json(record)
    assert emitted["Content"]["Fullbody_Parsed"][0]["section_id"] == 0


def test_missing_paper_id_rejected():
    obj = make_record_json("x1")
    del obj["PaperID"]
    with pytest.raises(RecordInvalid):
        record_from_json(obj, "c1")


def test_non_consecutive_sentence_ids_rejected():
    obj = make_record_json("x1", fullbody_sentences=["A.", "B."])
    obj["Content"]["Fullbody_Parsed"][0]["section_text"][0]["paragraph_text"][1]["sentence_id"] = "5"
    with pytest.raises(RecordInvalid):
        record_from_json(obj, "c1")


def test_cite_span_text_must_match_offsets():
    obj = make_record_json(
        "x1",
        fullbody_sentences=["See [1] for details."],
        references=[("R", [], 2000, "")],
        cite_spans_on_first_fullbody=[{"start": 4, "end": 7, "text": "[2]", "ref_id": 0}],
    )
    with pytest.raises(RecordInvalid):
        record_from_json(obj, "c1")


def test_cite_span_offsets_must_be_ordered_and_in_bounds():
    obj = make_record_json(
        "x1",
        fullbody_sentences=["Short."],
        references=[("R", [], 2000, "")],
        cite_spans_on_first_fullbody=[{"start": 5, "end": 99, "text": "x", "ref_id": 0}],
    )
    with pytest.raises(RecordInvalid):
        record_from_json(obj, "c1")


def test_reads_are_safe_from_other_threads(small_store):
    import threading

    errors = []

    def reader():
        try:
            for _ in range(20):
                assert small_store.get("p001").paper_id == "p001"
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=reader) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
