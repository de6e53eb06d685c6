import logging
from typing import List

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from src.datasets.data_loaders import load_corpus, load_targeted
from src.prooftheory.calculus import check_sbl, proof_ordinal
from src.prooftheory.embedding_bridge import embed_sbl, extract_lk
from src.prooftheory.ordinal_notation import compare
from src.prooftheory.proof_codec import format_proof
from src.prooftheory.proof_tree import proof_size
from src.prooftheory.reduction_engine import normalize
from src.prooftheory.sexpr_codec import parse_ordinal
from src.visualize import ordinal_ranks


def main():
    """
    Main function to walk through the pipeline on the bundled proofs.
    """
    logging.basicConfig(level=logging.WARNING)
    print("=" * 70)
    print("PROOF NORMALIZATION - DEMONSTRATION")
    print("=" * 70)

    corpus = load_corpus()

    print("\n1. CHECKING THE CORPUS")
    print("-" * 70)
    for name, proof in corpus.items():
        report = check_sbl(proof)
        print(f"  {name:24s}: {'ok' if report.ok else report.diagnostics[0]}  ({proof_size(proof.root)} nodes)")

    print("\n\n2. EMBEDDING AND NORMALIZING cut_disjunction")
    print("-" * 70)
    p0, _ = embed_sbl(corpus["cut_disjunction"])
    print(f"Embedded proof: {proof_size(p0.root)} nodes, o = {proof_ordinal(p0)}")
    outcome = normalize(p0)
    for step in outcome.trace:
        print(f"  {step.case:4s} {step.o_before}  ->  {step.o_after}")
    print(f"\nExtracted LK derivation:\n{format_proof(extract_lk(outcome.proof))}")

    print("\n3. A TARGETED PROOF")
    print("-" * 70)
    targeted = load_targeted()["cut_on_axiom"]
    target_outcome = normalize(targeted)
    print("Cases: " + " ".join(s.case for s in target_outcome.trace))
    plot_descent(target_outcome.ordinals(), [s.case for s in target_outcome.trace],
                 "Ordinal Descent of cut_on_axiom")
    print("Plot saved as 'ordinal_descent.png'")

    print("\n\n4. COMPARING ORDINAL TERMS")
    print("-" * 70)
    for a, b in [("(w 1)", "(+ 2 3)"), ("(p I 0)", "(p I 1)"), ("I", "(p I 0)")]:
        print(f"  {a:14s} vs {b:14s}: {compare(parse_ordinal(a), parse_ordinal(b)).name}")

    print("\n" + "=" * 70)
    print("DEMONSTRATION COMPLETE")
    print("=" * 70)


def plot_descent(ordinals: List, cases: List[str], title: str):
    """
    Line chart of the proof ordinal's rank after every step.
    """
    if not ordinals:
        print("No steps to plot.")
        return

    ranks = ordinal_ranks(ordinals)
    x = np.arange(len(ranks))

    fig, ax = plt.subplots(figsize=(12, 6))
    ax.plot(x, ranks, marker='o')
    ax.set_xticks(x)
    ax.set_xticklabels(["start"] + cases, rotation=45, ha='right')
    ax.set_ylabel('Ordinal rank')
    ax.set_title(title)

    plt.tight_layout()
    plt.savefig('ordinal_descent.png')
    plt.close()


if __name__ == "__main__":
    main()
