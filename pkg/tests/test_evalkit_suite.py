import json
import random

import pytest

from scholarkit.evalkit.samples import load_samples, save_samples
from scholarkit.evalkit.suite import ARM_WITH, ARM_WITHOUT, SuiteConfig, run_suite
from scholarkit.evalkit.synth import SynthSpec, build_platform, generate_corpus
from scholarkit.services.config import load_config
from scholarkit.services.gateway import Gateway

SMALL_SPEC = SynthSpec(
    papers=120,
    clusters=8,
    planted_queries=8,
    hard_queries=2,
    training_queries=16,
    dim=32,
    seed=3,
)


@pytest.fixture(scope="module")
def platform(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    paths = build_platform(SMALL_SPEC, root)
    gateway = Gateway.from_config(load_config(paths.config))
    return paths, gateway


class TestSynthCorpus:
    def test_marker_appears_only_in_target(self):
        synth = generate_corpus(SMALL_SPEC)
        for sample in synth.samples:
            holders = [r["PaperID"] for r in synth.records if sample.keywords in r["Title"].lower()]
            assert holders == [sample.cited_paper_id]

    def test_keywords_occur_in_context_and_citation_and_paper(self):
        synth = generate_corpus(SMALL_SPEC)
        by_id = {r["PaperID"]: r for r in synth.records}
        for sample in synth.samples:
            assert sample.keywords in sample.context.lower()
            assert sample.keywords in sample.citation_sentence.lower()
            assert sample.keywords in by_id[sample.cited_paper_id]["Abstract"].lower()

    def test_each_citation_sentence_cites_one_paper(self):
        synth = generate_corpus(SMALL_SPEC)
        targets = [s.cited_paper_id for s in synth.samples]
        assert len(targets) == len(set(targets))

    def test_training_targets_disjoint_from_eval_targets(self):
        synth = generate_corpus(SMALL_SPEC)
        eval_targets = {s.cited_paper_id for s in synth.samples}
        assert not eval_targets & {pid for _, pid in synth.training}

    def test_deterministic_generation(self):
        a = generate_corpus(SMALL_SPEC)
        b = generate_corpus(SMALL_SPEC)
        assert a.records == b.records
        assert a.samples == b.samples


class TestPlantingExperiment:
    def test_exact_abstract_context_ranks_target_first(self, platform):
        """Contexts copied verbatim from an abstract must retrieve that paper."""
        import random

        paths, gateway = platform
        snapshot = gateway.registry.snapshot()
        handle = snapshot.handles[0]
        paper_ids = handle.store.paper_ids()
        rng = random.Random(123)
        hits = 0
        trials = 100
        for _ in range(trials):
            pid = rng.choice(paper_ids)
            record = handle.store.get(pid)
            context = " ".join(record.abstract_sentences())
            response = gateway.search(
                context=context, keywords="", top_k=1, with_highlights=False, with_citations=False
            )
            if response["results"] and response["results"][0]["paper_id"] == pid:
                hits += 1
        assert hits >= 95, f"target ranked first in only {hits}/{trials} trials"


class TestSuiteRun:
    def test_grid_fully_populated(self, platform):
        paths, gateway = platform
        config = SuiteConfig(samples_path=paths.samples, np_values=[20, 40], k_values=[1, 5, 10], generation_k=[1, 3])
        report = run_suite(gateway, config)
        assert report["sample_count"] == SMALL_SPEC.planted_queries
        assert report["skipped"] == 0
        for arm in (ARM_WITH, ARM_WITHOUT):
            for budget in (20, 40):
                for k in (1, 5, 10):
                    assert 0.0 <= report["recall_grid"][arm][budget][k] <= 1.0
        assert report["property_failures"] == []

    def test_budget_sweep_non_decreasing(self, platform):
        paths, gateway = platform
        config = SuiteConfig(samples_path=paths.samples, np_values=[10, 20, 40], k_values=[5], generation_k=[1])
        report = run_suite(gateway, config)
        for arm in (ARM_WITH, ARM_WITHOUT):
            sweep = [report["np_sweep"][arm][b] for b in (10, 20, 40)]
            assert sweep == sorted(sweep)

    def test_keyword_arm_beats_keywordless_on_planted_samples(self, platform):
        paths, gateway = platform
        config = SuiteConfig(samples_path=paths.samples, np_values=[40], k_values=[10], generation_k=[1])
        report = run_suite(gateway, config)
        with_kw = report["recall_grid"][ARM_WITH][40][10]
        without_kw = report["recall_grid"][ARM_WITHOUT][40][10]
        assert with_kw >= without_kw

    def test_missing_cited_paper_skipped_and_counted(self, platform, tmp_path):
        paths, gateway = platform
        samples = load_samples(paths.samples)
        ghost = samples[0].__class__(
            context="Some context.", keywords="", cited_paper_id="ghost999", citation_sentence="Ghost et al. (2020) x."
        )
        mixed = tmp_path / "mixed.jsonl"
        save_samples(mixed, [samples[0], ghost])
        config = SuiteConfig(samples_path=mixed, np_values=[10], k_values=[5], generation_k=[1])
        report = run_suite(gateway, config)
        assert report["sample_count"] == 1
        assert report["skipped"] == 1

    def test_aggregation_order_independent(self, platform, tmp_path):
        paths, gateway = platform
        samples = load_samples(paths.samples)
        shuffled = list(samples)
        random.Random(5).shuffle(shuffled)
        shuffled_path = tmp_path / "shuffled.jsonl"
        save_samples(shuffled_path, shuffled)
        config = SuiteConfig(samples_path=paths.samples, np_values=[20], k_values=[5], generation_k=[1])
        base = run_suite(gateway, config)
        config_shuffled = SuiteConfig(samples_path=shuffled_path, np_values=[20], k_values=[5], generation_k=[1])
        again = run_suite(gateway, config_shuffled)
        assert base["recall_grid"] == again["recall_grid"]
        for arm in base["generation"]:
            for k in base["generation"][arm]:
                for variant, score in base["generation"][arm][k].items():
                    # identical up to float summation order
                    assert again["generation"][arm][k][variant] == pytest.approx(score, abs=1e-12)

    def test_report_files_written(self, platform, tmp_path):
        from scholarkit.evalkit.report import render_console, write_report

        paths, gateway = platform
        config = SuiteConfig(samples_path=paths.samples, np_values=[10, 20], k_values=[1, 5], generation_k=[1, 3])
        report = run_suite(gateway, config)
        written = write_report(report, tmp_path / "reports")
        assert written["report"].exists()
        parsed = json.loads(written["report"].read_text())
        assert parsed["recall_grid"][ARM_WITH]["10"]["1"] is not None
        grid_lines = written["recall_grid"].read_text().splitlines()
        assert grid_lines[0].startswith("arm\tnp\t")
        assert len(grid_lines) == 1 + 2 * 2  # two arms x two budgets
        for key in ("recall_curves_png", "np_sweep_png", "generation_png"):
            assert written[key].stat().st_size > 0
        console = render_console(report)
        assert "Recall grid" in console
        assert "all suite properties held" in console


class TestCli:
    def test_synth_then_run_exits_zero(self, tmp_path):
        from click.testing import CliRunner

        from scholarkit.evalkit.cli import main

        runner = CliRunner()
        out = tmp_path / "platform"
        result = runner.invoke(
            main,
            [
                "synth", "--out", str(out), "--papers", "60", "--queries", "4", "--hard-queries", "1",
                "--training-queries", "8", "--clusters", "6", "--dim", "16", "--seed", "2",
            ],
        )
        assert result.exit_code == 0, result.output
        config_path = out / "config.json"
        assert config_path.exists()

        result = runner.invoke(
            main,
            ["run", "--config", str(config_path), "--np", "10,20", "--k", "1,5", "--generation-k", "1"],
        )
        assert result.exit_code == 0, result.output
        assert (out / "reports" / "report.json").exists()
        assert "Recall grid" in result.output

    def test_no_keywords_flag_runs_single_arm(self, tmp_path):
        from click.testing import CliRunner

        from scholarkit.evalkit.cli import main

        runner = CliRunner()
        out = tmp_path / "platform"
        runner.invoke(
            main,
            [
                "synth", "--out", str(out), "--papers", "40", "--queries", "3", "--hard-queries", "1",
                "--training-queries", "6", "--clusters", "4", "--dim", "16",
            ],
        )
        result = runner.invoke(
            main,
            ["run", "--config", str(out / "config.json"), "--np", "10", "--k", "1", "--generation-k", "1",
             "--no-keywords"],
        )
        assert result.exit_code == 0, result.output
        report = json.loads((out / "reports" / "report.json").read_text())
        assert report["arms"] == [ARM_WITHOUT]
