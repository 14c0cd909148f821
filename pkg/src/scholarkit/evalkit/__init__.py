from scholarkit.evalkit.metrics import best_of_top_k, mean_recall, recall_at_k, rouge_all, rouge_f1
from scholarkit.evalkit.samples import EvalSample, load_samples, save_samples, truncate_context
from scholarkit.evalkit.suite import ARM_WITH, ARM_WITHOUT, SuiteConfig, run_suite
from scholarkit.evalkit.synth import SynthSpec, build_platform, generate_corpus

__all__ = [
    "ARM_WITH",
    "ARM_WITHOUT",
    "EvalSample",
    "SuiteConfig",
    "SynthSpec",
    "best_of_top_k",
    "build_platform",
    "generate_corpus",
    "load_samples",
    "mean_recall",
    "recall_at_k",
    "rouge_all",
    "rouge_f1",
    "run_suite",
    "save_samples",
    "truncate_context",
]
