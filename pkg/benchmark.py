from src.datasets.data_loaders import load_corpus, load_targeted
from src.datasets.scalable_data_generator import ProofGenerator
from src.normalization_evaluator import NormalizationEvaluator


def main():
    """Normalize the corpus, the targeted proofs and the generated chains, then run the sweeps."""

    evaluator = NormalizationEvaluator()

    evaluator.benchmark_corpus(load_corpus(), "corpus")
    evaluator.benchmark_corpus(load_targeted(), "targeted")
    evaluator.benchmark_scale(ProofGenerator(seed=evaluator.config.seed).generate_suite())

    evaluator.order_law_sweep()
    evaluator.order_fact_sweep()
    evaluator.hull_coherence_sweep()
    evaluator.certificate_sweep()

    # Generate outputs
    evaluator.save_results()
    evaluator.generate_report()

    print("\n" + "="*70)
    print("BENCHMARKING COMPLETE")
    print("="*70)


if __name__ == "__main__":
    main()
