from hypothesis import given
from hypothesis import strategies as st

from scholarkit.corpus.keywords import extract_keywords
from scholarkit.corpus.records import PaperRecord, PublicationDate
from scholarkit.text import tokenize


def record_with_text(text, year=None):
    return PaperRecord(
        paper_id="t1",
        corpus_id="c",
        title=text,
        publication_date=PublicationDate(year=year),
    )


def test_bigrams_skip_stopwords():
    kw = extract_keywords(record_with_text("machine learning of trees"), frozenset({"of"}))
    unigrams = {k for k in kw if " " not in k and ":" not in k}
    bigrams = {k for k in kw if " " in k}
    assert unigrams == {"machine", "learning", "trees"}
    assert bigrams == {"machine learning"}


def test_empty_text_yields_only_year_keyword():
    kw = extract_keywords(record_with_text("", year=2020), frozenset())
    assert dict(kw) == {"publicationdate.year:2020": 1}


def test_year_field_keyword_present():
    kw = extract_keywords(record_with_text("anything", year=2020), frozenset())
    assert "publicationdate.year:2020" in kw


def test_no_year_no_field_keyword():
    kw = extract_keywords(record_with_text("anything"), frozenset())
    assert not any(k.startswith("publicationdate.year:") for k in kw)


def test_counts_are_multiset():
    kw = extract_keywords(record_with_text("data data data"), frozenset())
    assert kw["data"] == 3
    assert kw["data data"] == 2


def test_tokens_strip_surrounding_punctuation():
    kw = extract_keywords(record_with_text("Sparse, recovery. (fast)"), frozenset())
    assert {"sparse", "recovery", "fast"} <= set(kw)


@given(
    st.lists(st.sampled_from(["alpha", "beta", "gamma", "the", "of", "delta"]), min_size=0, max_size=12),
    st.sets(st.sampled_from(["the", "of", "alpha"])),
)
def test_extracted_keywords_lowercase_and_stopword_free_bigrams(words, stops):
    stops = frozenset(stops)
    record = record_with_text(" ".join(words))
    for keyword in extract_keywords(record, stops):
        assert keyword == keyword.lower()
        parts = keyword.split(" ")
        if len(parts) == 2:
            assert parts[0] not in stops
            assert parts[1] not in stops


def test_title_abstract_and_fullbody_are_all_indexed(small_records, stopwords):
    record = small_records[0]
    kw = extract_keywords(record, stopwords)
    assert "gradient" in kw             # title
    assert "convergence" in kw          # abstract
    assert "imaging" in kw              # fullbody
    # adjacency never crosses sentences
    last_abstract = tokenize(record.abstract_sentences()[-1])[-1]
    first_body = tokenize(record.fullbody_parsed[0].paragraphs[0].sentences[0].sentence_text)[0]
    assert f"{last_abstract} {first_body}" not in kw
