"""Evaluation harness CLI.

``evalkit run --config <path>`` evaluates a configured platform against a
sample file and writes JSON + TSV tables and PNG figures; the exit code is
nonzero when any suite property fails.  ``evalkit synth`` generates a
fully-built synthetic platform (corpus, indexes, vectors, trained scorer,
samples and a ready config) to run against.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from scholarkit.evalkit.suite import ARM_WITH, ARM_WITHOUT, SuiteConfig, run_suite
from scholarkit.evalkit.synth import SynthSpec, build_platform
from scholarkit.services.config import load_config
from scholarkit.services.gateway import Gateway


def _int_list(raw: str) -> list[int]:
    return [int(part) for part in raw.split(",") if part.strip()]


@click.group()
def main() -> None:
    """Evaluation harness: recall grids, ROUGE tables and ablations."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--samples", "samples_path", type=click.Path(exists=True, path_type=Path), default=None,
              help="Sample JSONL; defaults to the config's eval.samples entry.")
@click.option("--np", "np_values", default="50,100,200,300", show_default=True,
              help="Comma-separated prefetch budgets.")
@click.option("--k", "k_values", default="1,5,10,20,50,100", show_default=True,
              help="Comma-separated recall cutoffs.")
@click.option("--generation-k", default="1,5,10", show_default=True,
              help="Comma-separated best-of-top-k cutoffs.")
@click.option("--no-keywords", is_flag=True, help="Evaluate only the keywordless arm.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None,
              help="Report directory; defaults to the config's eval.out entry or ./reports.")
@click.option("--seed", default=0, show_default=True)
def run(config_path: Path, samples_path: Path | None, np_values: str, k_values: str,
        generation_k: str, no_keywords: bool, out_dir: Path | None, seed: int) -> None:
    """Run the evaluation suite against the configured platform."""
    from scholarkit.evalkit.report import render_console, write_report

    raw = json.loads(config_path.read_text("utf-8"))
    eval_section = raw.get("eval", {})
    base = config_path.parent.resolve()

    def resolve(p) -> Path | None:
        if p is None:
            return None
        p = Path(p)
        return p if p.is_absolute() else base / p

    samples = samples_path or resolve(eval_section.get("samples"))
    if samples is None:
        raise click.UsageError("no sample file: pass --samples or set eval.samples in the config")
    out = out_dir or resolve(eval_section.get("out")) or Path("reports")

    gateway = Gateway.from_config(load_config(config_path))
    config = SuiteConfig(
        samples_path=samples,
        np_values=_int_list(np_values),
        k_values=_int_list(k_values),
        generation_k=_int_list(generation_k),
        arms=[ARM_WITHOUT] if no_keywords else [ARM_WITH, ARM_WITHOUT],
        seed=seed,
    )
    report = run_suite(gateway, config)
    paths = write_report(report, out)
    click.echo(render_console(report))
    click.echo(f"\nreport written to {paths['report'].parent}")
    if report["property_failures"]:
        sys.exit(1)


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--papers", default=1000, show_default=True)
@click.option("--queries", default=50, show_default=True)
@click.option("--hard-queries", default=10, show_default=True)
@click.option("--training-queries", default=150, show_default=True)
@click.option("--clusters", default=50, show_default=True)
@click.option("--dim", default=64, show_default=True)
@click.option("--seed", default=0, show_default=True)
def synth(out_dir: Path, papers: int, queries: int, hard_queries: int, training_queries: int,
          clusters: int, dim: int, seed: int) -> None:
    """Generate and fully build a synthetic evaluation platform."""
    spec = SynthSpec(
        papers=papers,
        clusters=clusters,
        planted_queries=queries,
        hard_queries=hard_queries,
        training_queries=training_queries,
        dim=dim,
        seed=seed,
    )
    paths = build_platform(spec, out_dir)
    click.echo(f"synthetic platform ready: {paths.root}")
    click.echo(f"  config:  {paths.config}")
    click.echo(f"  samples: {paths.samples}")
    click.echo(f"run it with: evalkit run --config {paths.config}")


if __name__ == "__main__":
    main()
