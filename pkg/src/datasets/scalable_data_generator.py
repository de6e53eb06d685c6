"""
Scalable Proof Generator for the Normalization Benchmarks
Generates SBL derivations with growing numbers of nested cuts
"""

import logging
import random
from pathlib import Path
from typing import Dict, List

from src.prooftheory.config import DEFAULT_CONFIG
from src.prooftheory.formula_language import FoName, Formula, Literal, Or, RelConst, negate
from src.prooftheory.proof_codec import format_proof
from src.prooftheory.proof_tree import CUT, OR, SBL, Preproof, ProofNode, Rule, axiom

_logger = logging.getLogger(__name__)


def _atom(pred: str, const: str) -> Literal:
    return Literal(True, RelConst(pred), FoName(const))


class ProofGenerator:
    """Generate cut chains of increasing depth for the scaling runs."""

    SCALES = [1, 2, 4, 8, 16]
    CONSTANTS = ["c", "d"]

    def __init__(self, output_dir: str = "data/generated", seed: int = DEFAULT_CONFIG.seed):
        self.output_dir = Path(output_dir)
        self.rng = random.Random(seed)

        self.r = _atom("R", "c")
        self.goal = Or(self.r, _atom("Q", "c"))
        # end-sequent ¬Rc, Rc∨Qc: not an axiom, so every chain needs real reductions
        self.end = frozenset({negate(self.r), self.goal})

    def _leaf(self, context: frozenset) -> ProofNode:
        """context, ¬Rc, Rc∨Qc by (∨) from the axiom context, ¬Rc, Rc."""
        premise = axiom(context | {negate(self.r), self.r})
        rule = Rule(OR, main=self.goal, minor=self.r)
        return ProofNode(context | self.end, rule, (premise,))

    def _cut_formula(self, k: int) -> Formula:
        lit = _atom(f"P{k}", self.rng.choice(self.CONSTANTS))
        return lit if self.rng.random() < 0.5 else negate(lit)

    def cut_chain(self, depth: int) -> Preproof:
        """
        Input:
            depth (int): number of nested cuts, at least 0
        Output:
            Preproof: an SBL derivation of ¬Rc, Rc∨Qc
        Explanation:
            Level k cuts on a fresh literal ±Pk; the left premise is a leaf,
            the right premise carries the cut formula into level k-1.
        """
        if depth < 0:
            raise ValueError(f"depth must be non-negative, got {depth}")
        cuts = [self._cut_formula(k) for k in range(1, depth + 1)]

        def level(k: int, context: frozenset) -> ProofNode:
            if k == 0:
                return self._leaf(context)
            c = cuts[k - 1]
            left = self._leaf(context | {negate(c)})
            right = level(k - 1, context | {c})
            return ProofNode(context | self.end, Rule(CUT, cut=c), (left, right))

        return Preproof(level(depth, frozenset()), SBL)

    def generate_all_scales(self) -> Dict[int, Path]:
        """Writes cut_chain_<depth>.sbl for every scale and returns the paths."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        print(f"\nGenerating cut chains in {self.output_dir}")
        written = {}
        for depth in self.SCALES:
            path = self.output_dir / f"cut_chain_{depth}.sbl"
            path.write_text(format_proof(self.cut_chain(depth)), encoding="utf-8")
            written[depth] = path
            print(f"  ✓ Saved {path.name}")
        return written

    def generate_suite(self, scales: List[int] = None) -> Dict[int, Preproof]:
        """In-memory variant of generate_all_scales."""
        return {depth: self.cut_chain(depth) for depth in (scales or self.SCALES)}


if __name__ == "__main__":
    ProofGenerator().generate_all_scales()
