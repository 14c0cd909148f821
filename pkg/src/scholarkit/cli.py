"""Platform CLI: corpus ingestion, index building and serving.

Typical flow for one corpus::

    scholarkit ingest        --data-dir data --corpus mycorpus papers.jsonl
    scholarkit build-vectors --data-dir data --corpus mycorpus --out data/vectors.txt
    scholarkit build-index   --data-dir data --corpus mycorpus
    scholarkit build-embeddings --data-dir data --corpus mycorpus --vectors data/vectors.txt
    scholarkit serve --config config.json
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from scholarkit.corpus.store import open_store
from scholarkit.indexing import inverted as inverted_mod
from scholarkit.indexing.embeddings import DEFAULT_SHARD_SIZE, build as build_embeddings
from scholarkit.indexing.vectors import DEFAULT_DIM, WordVectors, seeded_word_vectors
from scholarkit.text import load_stopwords, tokenize


@click.group()
def main() -> None:
    """Literature discovery and writing-assist toolkit."""


@main.command()
@click.argument("jsonl", type=click.Path(exists=True, path_type=Path))
@click.option("--data-dir", required=True, type=click.Path(path_type=Path))
@click.option("--corpus", "corpus_id", required=True)
def ingest(jsonl: Path, data_dir: Path, corpus_id: str) -> None:
    """Load a JSONL paper file into a corpus store."""
    store = open_store(data_dir, corpus_id)
    report = store.ingest_jsonl(jsonl)
    click.echo(f"accepted {report.accepted}, rejected {report.rejected}")
    for reason in report.reasons[:20]:
        click.echo(f"  {reason}")
    if len(report.reasons) > 20:
        click.echo(f"  ... and {len(report.reasons) - 20} more")


@main.command("build-index")
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_id", required=True)
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True, path_type=Path), default=None)
def build_index(data_dir: Path, corpus_id: str, stopwords_path: Path | None) -> None:
    """Build the on-disk inverted index for a corpus."""
    store = open_store(data_dir, corpus_id)
    index = inverted_mod.build(store.iter_records(), load_stopwords(stopwords_path), data_dir / corpus_id / "inverted")
    click.echo(f"indexed {index.manifest['record_count']} records, {index.stats['num_keywords']} keywords")


@main.command("build-vectors")
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_ids", required=True, multiple=True,
              help="Corpora whose vocabulary seeds the vectors (repeatable).")
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--dim", default=DEFAULT_DIM, show_default=True)
@click.option("--seed", default=0, show_default=True)
def build_vectors(data_dir: Path, corpus_ids: tuple[str, ...], out_path: Path, dim: int, seed: int) -> None:
    """Derive deterministic word vectors from corpus vocabulary.

    Stands in for pretrained vectors; point --vectors at your own file in
    the same text format to use a trained model instead.
    """
    vocab: set[str] = set()
    for corpus_id in corpus_ids:
        store = open_store(data_dir, corpus_id)
        for record in store.iter_records():
            for unit in record.text_units():
                vocab.update(tokenize(unit))
    wv = seeded_word_vectors(vocab, dim=dim, seed=seed)
    wv.save(out_path)
    click.echo(f"wrote {len(wv)} vectors of dim {dim} to {out_path}")


@main.command("build-embeddings")
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_id", required=True)
@click.option("--vectors", "vectors_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--shard-size", default=DEFAULT_SHARD_SIZE, show_default=True)
def build_embeddings_cmd(data_dir: Path, corpus_id: str, vectors_path: Path, shard_size: int) -> None:
    """Build the document-embedding index for a corpus."""
    store = open_store(data_dir, corpus_id)
    wv = WordVectors.load(vectors_path)
    index, extras = build_embeddings(store.iter_records(), wv, shard_size=shard_size)
    index.save(data_dir / corpus_id / "embedding", extra_manifest=extras)
    click.echo(f"embedded {len(index)} documents (skipped {len(extras['skipped'])})")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(config_path: Path, host: str, port: int) -> None:
    """Run the API gateway."""
    import uvicorn

    from scholarkit.services.config import load_config
    from scholarkit.services.gateway import Gateway, create_app

    gateway = Gateway.from_config(load_config(config_path))
    uvicorn.run(create_app(gateway), host=host, port=port)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--context", default="")
@click.option("--keywords", default="")
@click.option("--np", "prefetch_limit", type=int, default=None)
@click.option("--k", "top_k", type=int, default=None)
def search(config_path: Path, context: str, keywords: str, prefetch_limit: int | None, top_k: int | None) -> None:
    """One in-process search; prints the response JSON."""
    from scholarkit.services.config import load_config
    from scholarkit.services.gateway import Gateway

    gateway = Gateway.from_config(load_config(config_path))
    result = gateway.search(context=context, keywords=keywords, prefetch_limit=prefetch_limit, top_k=top_k)
    click.echo(json.dumps(result, indent=2, ensure_ascii=False))


if __name__ == "__main__":
    main()
