"""Report rendering: JSON + tab-separated tables + figures.

Every table is written both as TSV (machine-friendly) and echoed as an
aligned text block for the console; figures are PNG files rendered next to
the tables.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from scholarkit.evalkit.metrics import ROUGE_VARIANTS

ARM_LABELS = {"with_keywords": "w/ keywords", "without_keywords": "w/o keywords"}


def _write_tsv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(cell) for cell in row) + "\n")


def _format_table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _recall_rows(report: dict) -> tuple[list[str], list[list]]:
    header = ["arm", "np"] + [f"r@{k}" for k in report["k_values"]]
    rows = []
    for arm in report["arms"]:
        for budget in report["np_values"]:
            grid = report["recall_grid"][arm][budget]
            rows.append([ARM_LABELS.get(arm, arm), budget] + [f"{grid[k]:.3f}" for k in report["k_values"]])
    return header, rows


def _sweep_rows(report: dict) -> tuple[list[str], list[list]]:
    header = ["arm"] + [f"np={b}" for b in report["np_values"]]
    rows = []
    for arm in report["arms"]:
        rows.append(
            [ARM_LABELS.get(arm, arm)] + [f"{report['np_sweep'][arm][b]:.3f}" for b in report["np_values"]]
        )
    return header, rows


def _generation_rows(report: dict) -> tuple[list[str], list[list]]:
    header = ["arm", "k"] + [f"rouge-{v}" for v in ROUGE_VARIANTS]
    rows = []
    for arm in report["arms"]:
        for k in report["generation_k"]:
            scores = report["generation"][arm][k]
            rows.append([ARM_LABELS.get(arm, arm), k] + [f"{scores[v]:.3f}" for v in ROUGE_VARIANTS])
    return header, rows


def _summarization_rows(report: dict) -> tuple[list[str], list[list]]:
    header = [f"rouge-{v}" for v in ROUGE_VARIANTS]
    return header, [[f"{report['summarization'][v]:.3f}" for v in ROUGE_VARIANTS]]


def _figure_recall_curves(report: dict, path: Path) -> None:
    fig, axes = plt.subplots(1, len(report["arms"]), figsize=(5.5 * len(report["arms"]), 4), squeeze=False)
    for ax, arm in zip(axes[0], report["arms"]):
        for budget in report["np_values"]:
            grid = report["recall_grid"][arm][budget]
            ax.plot(report["k_values"], [grid[k] for k in report["k_values"]], marker="o", label=f"np={budget}")
        ax.set_xlabel("k")
        ax.set_ylabel("recall@k")
        ax.set_title(ARM_LABELS.get(arm, arm))
        ax.set_xscale("log")
        ax.grid(True, alpha=0.3)
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _figure_np_sweep(report: dict, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for arm in report["arms"]:
        ax.plot(
            report["np_values"],
            [report["np_sweep"][arm][b] for b in report["np_values"]],
            marker="s",
            label=ARM_LABELS.get(arm, arm),
        )
    ax.set_xlabel("prefetch budget (cutoff = budget)")
    ax.set_ylabel("recall")
    ax.set_ylim(0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _figure_generation(report: dict, path: Path) -> None:
    fig, axes = plt.subplots(1, len(ROUGE_VARIANTS), figsize=(11, 3.6))
    width = 0.35
    for ax, variant in zip(axes, ROUGE_VARIANTS):
        for offset, arm in enumerate(report["arms"]):
            xs = [i + offset * width for i in range(len(report["generation_k"]))]
            ys = [report["generation"][arm][k][variant] for k in report["generation_k"]]
            ax.bar(xs, ys, width=width, label=ARM_LABELS.get(arm, arm))
        ax.set_xticks([i + width / 2 for i in range(len(report["generation_k"]))])
        ax.set_xticklabels([f"top-{k}" for k in report["generation_k"]])
        ax.set_title(f"rouge-{variant}")
        ax.set_ylim(0, 1.05)
    axes[0].set_ylabel("best-of-top-k F1")
    axes[-1].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(report: dict, out_dir: str | Path) -> dict[str, Path]:
    """Write report.json, the TSV tables and the figures; return the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    paths["report"] = out_dir / "report.json"
    paths["report"].write_text(json.dumps(report, indent=2, sort_keys=True), "utf-8")

    for name, builder in (
        ("recall_grid", _recall_rows),
        ("np_sweep", _sweep_rows),
        ("generation", _generation_rows),
        ("summarization", _summarization_rows),
    ):
        header, rows = builder(report)
        paths[name] = out_dir / f"{name}.tsv"
        _write_tsv(paths[name], header, rows)

    paths["recall_curves_png"] = out_dir / "recall_curves.png"
    _figure_recall_curves(report, paths["recall_curves_png"])
    paths["np_sweep_png"] = out_dir / "np_sweep.png"
    _figure_np_sweep(report, paths["np_sweep_png"])
    paths["generation_png"] = out_dir / "generation.png"
    _figure_generation(report, paths["generation_png"])
    return paths


def render_console(report: dict) -> str:
    blocks = []
    for title, builder in (
        ("Recall grid", _recall_rows),
        ("Budget sweep (cutoff = budget)", _sweep_rows),
        ("Best-of-top-k generation", _generation_rows),
        ("Highlights vs abstract", _summarization_rows),
    ):
        header, rows = builder(report)
        blocks.append(f"{title}\n{_format_table(header, rows)}")
    blocks.append(f"samples: {report['sample_count']} evaluated, {report['skipped']} skipped")
    if report["property_failures"]:
        blocks.append("PROPERTY FAILURES:\n" + "\n".join(f"  - {f}" for f in report["property_failures"]))
    else:
        blocks.append("all suite properties held")
    return "\n\n".join(blocks)
