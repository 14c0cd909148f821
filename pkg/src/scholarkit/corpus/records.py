"""Parsed-paper records and their JSON (de)serialization.

The on-disk interchange format is JSONL, one object per line, with
TitleCase field names: ``Title``, ``Author``, ``Abstract``, ``Venue``,
``DOI``, ``URL``, ``PublicationDate``, ``Content.Abstract_Parsed``,
``Content.Fullbody_Parsed``, ``Reference`` and ``PaperID``.  Section,
paragraph and sentence IDs as well as cite-span offsets may arrive either
as integers or as strings of digits; they are canonicalized to integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator


class RecordInvalid(ValueError):
    """Raised while parsing or validating a single JSONL record."""


@dataclass(frozen=True)
class Author:
    given_name: str = ""
    family_name: str = ""


@dataclass(frozen=True)
class PublicationDate:
    year: int | None = None
    month: int | None = None


@dataclass(frozen=True)
class CiteSpan:
    start: int
    end: int
    text: str
    ref_id: int


@dataclass(frozen=True)
class SentenceUnit:
    sentence_id: int
    sentence_text: str
    cite_spans: tuple[CiteSpan, ...] = ()


@dataclass(frozen=True)
class Paragraph:
    paragraph_id: int
    sentences: tuple[SentenceUnit, ...] = ()


@dataclass(frozen=True)
class Section:
    section_id: int
    section_title: str = ""
    paragraphs: tuple[Paragraph, ...] = ()


@dataclass(frozen=True)
class ReferenceEntry:
    title: str = ""
    authors: tuple[Author, ...] = ()
    venue: str = ""
    publication_date: PublicationDate = PublicationDate()
    reference_text: str = ""


@dataclass
class PaperRecord:
    paper_id: str
    corpus_id: str
    title: str = ""
    authors: tuple[Author, ...] = ()
    abstract_raw: str = ""
    venue: str = ""
    doi: str = ""
    url: str = ""
    publication_date: PublicationDate = field(default_factory=PublicationDate)
    abstract_parsed: tuple[Section, ...] = ()
    fullbody_parsed: tuple[Section, ...] = ()
    references: tuple[ReferenceEntry, ...] = ()

    def iter_sentences(self, part: str = "fullbody") -> Iterator[tuple[Section, Paragraph, SentenceUnit]]:
        sections = self.fullbody_parsed if part == "fullbody" else self.abstract_parsed
        for section in sections:
            for paragraph in section.paragraphs:
                for sentence in paragraph.sentences:
                    yield section, paragraph, sentence

    def abstract_sentences(self) -> list[str]:
        sents = [s.sentence_text for _, _, s in self.iter_sentences("abstract")]
        if sents:
            return sents
        return [self.abstract_raw] if self.abstract_raw else []

    def text_units(self) -> list[str]:
        """Title, abstract sentences and fullbody sentences, in order."""
        units = [self.title] if self.title else []
        units.extend(self.abstract_sentences())
        units.extend(s.sentence_text for _, _, s in self.iter_sentences("fullbody"))
        return units


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise RecordInvalid(f"{what}: expected integer, got boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value.strip())
    raise RecordInvalid(f"{what}: expected integer or digit string, got {value!r}")


def _opt_int(value: Any, what: str) -> int | None:
    if value is None or value == "":
        return None
    return _as_int(value, what)


def _as_str(value: Any) -> str:
    return value if isinstance(value, str) else ("" if value is None else str(value))


def _parse_authors(raw: Any) -> tuple[Author, ...]:
    if not raw:
        return ()
    if not isinstance(raw, list):
        raise RecordInvalid("Author: expected a list")
    return tuple(
        Author(
            given_name=_as_str(entry.get("GivenName", "")),
            family_name=_as_str(entry.get("FamilyName", "")),
        )
        for entry in raw
    )


def _parse_date(raw: Any) -> PublicationDate:
    if not raw:
        return PublicationDate()
    if not isinstance(raw, dict):
        raise RecordInvalid("PublicationDate: expected an object")
    return PublicationDate(
        year=_opt_int(raw.get("Year"), "PublicationDate.Year"),
        month=_opt_int(raw.get("Month"), "PublicationDate.Month"),
    )


def _parse_cite_span(raw: Any) -> CiteSpan:
    return CiteSpan(
        start=_as_int(raw.get("start"), "cite_spans.start"),
        end=_as_int(raw.get("end"), "cite_spans.end"),
        text=_as_str(raw.get("text", "")),
        ref_id=_as_int(raw.get("ref_id"), "cite_spans.ref_id"),
    )


def _parse_sections(raw: Any, what: str) -> tuple[Section, ...]:
    if not raw:
        return ()
    if not isinstance(raw, list):
        raise RecordInvalid(f"{what}: expected a list of sections")
    sections = []
    for sec in raw:
        paragraphs = []
        for para in sec.get("section_text", []) or []:
            sentences = []
            for sent in para.get("paragraph_text", []) or []:
                sentences.append(
                    SentenceUnit(
                        sentence_id=_as_int(sent.get("sentence_id"), "sentence_id"),
                        sentence_text=_as_str(sent.get("sentence_text", "")),
                        cite_spans=tuple(_parse_cite_span(c) for c in sent.get("cite_spans", []) or []),
                    )
                )
            paragraphs.append(
                Paragraph(
                    paragraph_id=_as_int(para.get("paragraph_id"), "paragraph_id"),
                    sentences=tuple(sentences),
                )
            )
        sections.append(
            Section(
                section_id=_as_int(sec.get("section_id"), "section_id"),
                section_title=_as_str(sec.get("section_title", "")),
                paragraphs=tuple(paragraphs),
            )
        )
    return tuple(sections)


def _parse_references(raw: Any) -> tuple[ReferenceEntry, ...]:
    if not raw:
        return ()
    if not isinstance(raw, list):
        raise RecordInvalid("Reference: expected a list")
    return tuple(
        ReferenceEntry(
            title=_as_str(entry.get("Title", "")),
            authors=_parse_authors(entry.get("Author")),
            venue=_as_str(entry.get("Venue", "")),
            publication_date=_parse_date(entry.get("PublicationDate")),
            reference_text=_as_str(entry.get("ReferenceText", "")),
        )
        for entry in raw
    )


def record_from_json(obj: dict[str, Any], corpus_id: str) -> PaperRecord:
    """Parse one JSONL object into a record. Raises RecordInvalid."""
    if not isinstance(obj, dict):
        raise RecordInvalid("record is not a JSON object")
    paper_id = obj.get("PaperID") or obj.get("paper_id") or obj.get("id")
    if not paper_id or not isinstance(paper_id, str):
        raise RecordInvalid("missing or empty PaperID")
    content = obj.get("Content") or {}
    record = PaperRecord(
        paper_id=paper_id,
        corpus_id=corpus_id,
        title=_as_str(obj.get("Title", "")),
        authors=_parse_authors(obj.get("Author")),
        abstract_raw=_as_str(obj.get("Abstract", "")),
        venue=_as_str(obj.get("Venue", "")),
        doi=_as_str(obj.get("DOI", "")),
        url=_as_str(obj.get("URL", "")),
        publication_date=_parse_date(obj.get("PublicationDate")),
        abstract_parsed=_parse_sections(content.get("Abstract_Parsed"), "Abstract_Parsed"),
        fullbody_parsed=_parse_sections(content.get("Fullbody_Parsed"), "Fullbody_Parsed"),
        references=_parse_references(obj.get("Reference")),
    )
    validate_record(record)
    return record


def validate_record(record: PaperRecord) -> None:
    """Enforce the structural invariants; raises RecordInvalid on the first breach."""
    if not record.paper_id:
        raise RecordInvalid("empty paper_id")
    n_refs = len(record.references)
    for part, sections in (("Abstract_Parsed", record.abstract_parsed), ("Fullbody_Parsed", record.fullbody_parsed)):
        for sec_pos, section in enumerate(sections):
            if section.section_id != sec_pos:
                raise RecordInvalid(f"{part}: section_id {section.section_id} at position {sec_pos} is not consecutive")
            for para_pos, paragraph in enumerate(section.paragraphs):
                if paragraph.paragraph_id != para_pos:
                    raise RecordInvalid(
                        f"{part}[{sec_pos}]: paragraph_id {paragraph.paragraph_id} at position {para_pos} is not consecutive"
                    )
                for sent_pos, sentence in enumerate(paragraph.sentences):
                    if sentence.sentence_id != sent_pos:
                        raise RecordInvalid(
                            f"{part}[{sec_pos}][{para_pos}]: sentence_id {sentence.sentence_id} "
                            f"at position {sent_pos} is not consecutive"
                        )
                    for span in sentence.cite_spans:
                        if not (0 <= span.start <= span.end <= len(sentence.sentence_text)):
                            raise RecordInvalid(
                                f"cite span [{span.start},{span.end}) out of bounds for sentence of "
                                f"length {len(sentence.sentence_text)}"
                            )
                        if sentence.sentence_text[span.start : span.end] != span.text:
                            raise RecordInvalid(
                                f"cite span text {span.text!r} does not match substring "
                                f"{sentence.sentence_text[span.start:span.end]!r}"
                            )
                        if not (0 <= span.ref_id < n_refs):
                            raise RecordInvalid(f"dangling ref_id {span.ref_id} (only {n_refs} references)")


def _authors_to_json(authors: tuple[Author, ...]) -> list[dict[str, str]]:
    return [{"GivenName": a.given_name, "FamilyName": a.family_name} for a in authors]


def _date_to_json(date: PublicationDate) -> dict[str, int]:
    out: dict[str, int] = {}
    if date.year is not None:
        out["Year"] = date.year
    if date.month is not None:
        out["Month"] = date.month
    return out


def _sections_to_json(sections: tuple[Section, ...]) -> list[dict[str, Any]]:
    return [
        {
            "section_id": sec.section_id,
            "section_title": sec.section_title,
            "section_text": [
                {
                    "paragraph_id": para.paragraph_id,
                    "paragraph_text": [
                        {
                            "sentence_id": sent.sentence_id,
                            "sentence_text": sent.sentence_text,
                            "cite_spans": [
                                {"start": c.start, "end": c.end, "text": c.text, "ref_id": c.ref_id}
                                for c in sent.cite_spans
                            ],
                        }
                        for sent in para.sentences
                    ],
                }
                for para in sec.paragraphs
            ],
        }
        for sec in sections
    ]


def record_to_json(record: PaperRecord) -> dict[str, Any]:
    """The canonical JSON object for a record (integer IDs, known keys only)."""
    return {
        "PaperID": record.paper_id,
        "Title": record.title,
        "Author": _authors_to_json(record.authors),
        "Abstract": record.abstract_raw,
        "Venue": record.venue,
        "DOI": record.doi,
        "URL": record.url,
        "PublicationDate": _date_to_json(record.publication_date),
        "Content": {
            "Abstract_Parsed": _sections_to_json(record.abstract_parsed),
            "Fullbody_Parsed": _sections_to_json(record.fullbody_parsed),
        },
        "Reference": [
            {
                "Title": ref.title,
                "Author": _authors_to_json(ref.authors),
                "Venue": ref.venue,
                "PublicationDate": _date_to_json(ref.publication_date),
                "ReferenceText": ref.reference_text,
            }
            for ref in record.references
        ],
    }


def canonical_json(record: PaperRecord) -> str:
    """Byte-stable serialization: sorted keys, no whitespace, raw unicode."""
    return json.dumps(record_to_json(record), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
