"""
Normalization Evaluator with Scaling Analysis
Runs embedding and cut elimination over the corpus and the generated chains,
sweeps the ordinal order laws and the certificate checker, and writes reports
"""

import json
import logging
import random
import time
import tracemalloc
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.prooftheory.calculus import proof_ordinal
from src.prooftheory.config import DEFAULT_CONFIG, EngineConfig
from src.prooftheory.embedding_bridge import embed_sbl, extract_lk
from src.prooftheory.errors import ProofToolError
from src.prooftheory.essential_order import bounded_refute, check_certificate, derive_ell
from src.prooftheory.ordinal_notation import (
    I, ONE, ZERO, OmegaIndex, OmegaPow, OmegaSucc, OrdTerm, Ordering, Psi, Sum, compare, components,
    enumerate_terms, g_coefficients, in_hull, natural_sum, omega_pow, omega_tower, succ, validate_psi,
)
from src.prooftheory.proof_tree import SBL, Preproof, proof_size
from src.prooftheory.reduction_engine import NormalizationOutcome, normalize

_logger = logging.getLogger(__name__)


# ============================================================================ #
#                            NORMALIZATION RESULT                              #
# ============================================================================ #

@dataclass
class NormalizationResult:
    """Store results from normalizing a single proof."""
    name: str
    source: str
    proof_size: int
    steps: int
    cut_free: bool
    o_initial: str = ""
    o_final: str = ""
    cases: Dict[str, int] = field(default_factory=dict)
    error: Optional[str] = None

    # Mean values
    time_ms: float = 0.0
    embed_time_ms: float = 0.0
    normalize_time_ms: float = 0.0
    memory_peak_kb: float = 0.0

    # Statistical fields
    time_ms_std: float = 0.0
    time_ms_min: float = 0.0
    time_ms_max: float = 0.0


@dataclass
class SweepResult:
    """Counts from one order-law or certificate sweep."""
    name: str
    depth: int
    checked: int
    violations: int
    details: Dict[str, int] = field(default_factory=dict)


# ============================================================================ #
#                          NORMALIZATION EVALUATOR                             #
# ============================================================================ #

class NormalizationEvaluator:
    """Evaluator for the cut-elimination pipeline and the ordinal machinery."""

    def __init__(self, output_dir: str = "results", config: EngineConfig = DEFAULT_CONFIG):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.config = config
        self.results: List[NormalizationResult] = []
        self.sweeps: List[SweepResult] = []

        # Seed for reproducibility
        self.rng = random.Random(config.seed)
        np.random.seed(config.seed)

    # ---------------------------------------------------------------------- #
    #                      Embedding + Normalization Timers                  #
    # ---------------------------------------------------------------------- #

    def measure_pipeline(self, proof: Preproof) -> Tuple[NormalizationOutcome, Preproof, float, float, float]:
        """
        Measure embedding separately from normalization.

        Returns:
            (outcome, embedded proof, embed_time_ms, normalize_time_ms, memory_peak_kb)
        """
        tracemalloc.start()
        try:
            start = time.perf_counter()
            p0 = embed_sbl(proof, self.config)[0] if proof.system == SBL else proof
            embed_time = (time.perf_counter() - start) * 1000

            start = time.perf_counter()
            outcome = normalize(p0, config=self.config)
            normalize_time = (time.perf_counter() - start) * 1000

            if outcome.cut_free:
                extract_lk(outcome.proof)
            _, peak = tracemalloc.get_traced_memory()
        finally:
            tracemalloc.stop()
        return outcome, p0, embed_time, normalize_time, peak / 1024

    # ---------------------------------------------------------------------- #
    #                        RUN 2x FOR ACCURACY                             #
    # ---------------------------------------------------------------------- #

    def benchmark_single(self, name: str, source: str, proof: Preproof, repeats: int = 2) -> NormalizationResult:
        """Run the pipeline `repeats` times; a ProofToolError is recorded, not raised."""
        totals, embeds, norms, peaks = [], [], [], []
        outcome, p0 = None, proof
        try:
            for _ in range(repeats):
                outcome, p0, embed_ms, norm_ms, peak_kb = self.measure_pipeline(proof)
                totals.append(embed_ms + norm_ms)
                embeds.append(embed_ms)
                norms.append(norm_ms)
                peaks.append(peak_kb)
        except ProofToolError as e:
            _logger.warning("%s: %s", name, e)
            result = NormalizationResult(name, source, proof_size(proof.root), 0, False,
                                         error=f"{type(e).__name__}: {e}")
            self.results.append(result)
            return result

        ordinals = outcome.ordinals()
        result = NormalizationResult(
            name=name,
            source=source,
            proof_size=proof_size(p0.root),
            steps=outcome.steps,
            cut_free=outcome.cut_free,
            o_initial=str(ordinals[0] if ordinals else proof_ordinal(p0)),
            o_final=str(ordinals[-1] if ordinals else proof_ordinal(p0)),
            cases=dict(Counter(step.case for step in outcome.trace)),

            time_ms=float(np.mean(totals)),
            embed_time_ms=float(np.mean(embeds)),
            normalize_time_ms=float(np.mean(norms)),
            memory_peak_kb=float(np.mean(peaks)),

            time_ms_std=float(np.std(totals)),
            time_ms_min=float(np.min(totals)),
            time_ms_max=float(np.max(totals)),
        )
        self.results.append(result)
        return result

    def benchmark_corpus(self, proofs: Dict[str, Preproof], source: str):
        print(f"\n{'='*70}")
        print(f"NORMALIZING: {source}")
        print(f"{'='*70}")
        for name, proof in proofs.items():
            r = self.benchmark_single(name, source, proof)
            if r.error:
                print(f"  {name:28s}: ERROR - {r.error}")
                continue
            status = "cut-free" if r.cut_free else "fuel exhausted"
            print(f"  {name:28s}: {r.steps:4d} steps  {status:14s}  "
                  f"{r.time_ms:9.2f} ms  (mem={r.memory_peak_kb:8.2f} KB)")

    def benchmark_scale(self, suite: Dict[int, Preproof]):
        """Normalize generated cut chains keyed by depth."""
        self.benchmark_corpus({f"cut_chain_{d}": p for d, p in sorted(suite.items())}, "generated")

    # ---------------------------------------------------------------------- #
    #                              SWEEPS                                    #
    # ---------------------------------------------------------------------- #

    def _terms(self, depth: Optional[int]) -> Tuple[int, List[OrdTerm]]:
        depth = self.config.sweep_depth if depth is None else depth
        return depth, enumerate_terms(depth)

    def _pairs(self, terms: List[OrdTerm]) -> List[Tuple[OrdTerm, OrdTerm]]:
        if len(terms) ** 2 <= self.config.pair_limit:
            return list(product(terms, repeat=2))
        return [(self.rng.choice(terms), self.rng.choice(terms)) for _ in range(self.config.pair_limit)]

    def _record(self, name: str, depth: int, checked: int, details: Counter,
                violations: Optional[int] = None) -> SweepResult:
        if violations is None:
            violations = sum(details.values())
        result = SweepResult(name, depth, checked, violations, dict(details))
        _logger.info("%s sweep at depth %d: %d checked, %d violations", name, depth, checked, violations)
        self.sweeps.append(result)
        return result

    def order_law_sweep(self, depth: Optional[int] = None, samples: int = 2000) -> SweepResult:
        """
        Check that the ascending enumeration is a strict chain, antisymmetry
        and equality on pairs (all of them when few enough), and
        transitivity on sampled triples.
        """
        depth = self.config.enumeration_depth if depth is None else depth
        terms = enumerate_terms(depth)
        details = Counter()
        checked = 0
        for a, b in zip(terms, terms[1:]):
            checked += 1
            if compare(a, b) != Ordering.LT:
                details["chain"] += 1
        for a, b in self._pairs(terms):
            ab, ba = compare(a, b), compare(b, a)
            checked += 1
            if ab != Ordering(-ba):
                details["antisymmetry"] += 1
            if (ab == Ordering.EQ) != (a == b):
                details["equality"] += 1
        for _ in range(samples if len(terms) > 2 else 0):
            a, b, c = self.rng.sample(terms, 3)
            checked += 1
            if compare(a, b) == Ordering.LT and compare(b, c) == Ordering.LT and compare(a, c) != Ordering.LT:
                details["transitivity"] += 1
        return self._record("order_laws", depth, checked, details)

    def order_fact_sweep(self, depth: Optional[int] = None, instances: Optional[int] = None) -> SweepResult:
        """
        Check the arithmetic facts the ordinal assignment relies on, for
        randomly drawn a, b, c below I:

            a < a+1,  a # b = b # a,  a ≤ a # b,  a < b ⇒ a # c < b # c,
            a ≤ ω^a,  a < b ⇒ ω^a < ω^b,  ψ_I a < I,
            a < b ⇒ ψ_σ a < ψ_σ b  (both valid)
        """
        depth, terms = self._terms(depth)
        instances = self.config.sweep_instances if instances is None else instances
        small = [t for t in terms if compare(t, I) == Ordering.LT]
        details = Counter()

        def fact(name: str, holds: bool):
            if not holds:
                details[name] += 1

        for _ in range(instances):
            a, b, c = (self.rng.choice(small) for _ in range(3))
            if compare(b, a) == Ordering.LT:
                a, b = b, a
            fact("successor", compare(a, succ(a)) == Ordering.LT)
            fact("commutative", natural_sum(a, b) == natural_sum(b, a))
            fact("sum_bound", compare(a, natural_sum(a, b)) != Ordering.GT)
            fact("omega_bound", compare(a, omega_pow(a)) != Ordering.GT)
            if validate_psi(I, a):
                fact("psi_below_i", compare(Psi(I, a), I) == Ordering.LT)
            if a == b:
                continue
            fact("sum_monotone", compare(natural_sum(a, c), natural_sum(b, c)) == Ordering.LT)
            fact("omega_monotone", compare(omega_pow(a), omega_pow(b)) == Ordering.LT)
            for reg in (I, OmegaSucc(ZERO)):
                if validate_psi(reg, a) and validate_psi(reg, b):
                    fact("psi_monotone", compare(Psi(reg, a), Psi(reg, b)) == Ordering.LT)
        return self._record("order_facts", depth, instances, details)

    def hull_coherence_sweep(self, depth: Optional[int] = None, instances: Optional[int] = None) -> SweepResult:
        """
        Check hull membership against its G-coefficients and ψ validity:
        every enumerated ψ_σα keeps α in H_α(ψ_σα), hulls grow with α and
        with β, and a member's components, exponents, Ω-indices and (for
        ψ-terms not below β) ψ-arguments are members too.
        """
        depth, terms = self._terms(depth)
        instances = self.config.sweep_instances if instances is None else instances
        details = Counter()
        checked = 0
        for p in terms:
            if isinstance(p, Psi):
                checked += 1
                if not validate_psi(p.reg, p.arg) or not in_hull(p.arg, p.arg, p):
                    details["psi_validity"] += 1

        for _ in range(instances):
            gamma, alpha, alpha2, beta, beta2 = (self.rng.choice(terms) for _ in range(5))
            if compare(alpha2, alpha) == Ordering.LT:
                alpha, alpha2 = alpha2, alpha
            if compare(beta2, beta) == Ordering.LT:
                beta, beta2 = beta2, beta
            checked += 1
            member = in_hull(gamma, alpha, beta)
            coefficients = g_coefficients(beta, gamma)
            if member != all(compare(x, alpha) == Ordering.LT for x in coefficients):
                details["coefficients"] += 1
            if not member:
                continue
            if not in_hull(gamma, alpha2, beta):
                details["alpha_monotone"] += 1
            if not in_hull(gamma, alpha, beta2):
                details["beta_monotone"] += 1
            parts = list(components(gamma)) if isinstance(gamma, Sum) else []
            if isinstance(gamma, OmegaPow):
                parts.append(gamma.exponent)
            if isinstance(gamma, OmegaIndex):
                parts.append(gamma.index)
            if isinstance(gamma, Psi) and compare(gamma, beta) != Ordering.LT:
                parts.append(gamma.arg)
            if not all(in_hull(x, alpha, beta) for x in parts):
                details["reverse_closure"] += 1
        return self._record("hull_coherence", depth, checked, details)

    def _descent_instance(self, low: OrdTerm, high: OrdTerm, addend: OrdTerm) -> Optional[Tuple[OrdTerm, OrdTerm]]:
        """Wrap low < high in one of the shapes a reduction step compares."""
        shape = self.rng.choice(("successor", "sum", "tower", "collapse_i", "collapse_omega"))
        if shape == "successor":
            return high, succ(high)
        if shape == "sum":
            return natural_sum(addend, low), natural_sum(addend, high)
        if shape == "tower":
            n = self.rng.randint(1, 3)
            return omega_tower(n, low), omega_tower(n, high)
        reg = I if shape == "collapse_i" else OmegaSucc(ZERO)
        stack = omega_tower(self.rng.randint(1, 3), succ(I))
        lo, hi = natural_sum(stack, omega_pow(low)), natural_sum(stack, omega_pow(high))
        if not (validate_psi(reg, lo) and validate_psi(reg, hi)):
            return None
        return Psi(reg, lo), Psi(reg, hi)

    def certificate_sweep(self, depth: Optional[int] = None, target: Optional[int] = None) -> SweepResult:
        """
        Draw descents in the shapes the ordinal assignment produces (ψ over
        a stack plus ω^α, ω-towers, natural sums and successors) until
        `target` of them are certified. Each certificate is re-checked and
        searched for a counterexample.
        """
        depth, terms = self._terms(depth)
        target = self.config.sweep_instances if target is None else target
        base = [t for t in terms if compare(t, OmegaIndex(ONE)) == Ordering.LT]
        details = Counter()
        attempts = 0
        while details["certified"] < target and attempts < 20 * target:
            attempts += 1
            a, b, c = (self.rng.choice(base) for _ in range(3))
            if a == b:
                continue
            if compare(b, a) == Ordering.LT:
                a, b = b, a
            instance = self._descent_instance(a, b, c)
            if instance is None:
                details["invalid"] += 1
                continue
            d0, d1 = instance
            cert = derive_ell(d0, d1)
            if cert is None:
                details["underivable"] += 1
            elif not check_certificate(cert):
                details["rejected"] += 1
            elif bounded_refute(d0, d1) is not None:
                details["refuted"] += 1
            else:
                details["certified"] += 1
        checked = attempts
        violations = details["rejected"] + details["refuted"]
        return self._record("certificates", depth, checked, details, violations)

    # ---------------------------------------------------------------------- #
    #                          SAVE RESULTS                                  #
    # ---------------------------------------------------------------------- #

    def save_results(self, filename: str = "normalization_results.json") -> Path:
        output_file = self.output_dir / filename
        payload = {
            "runs": [asdict(r) for r in self.results],
            "sweeps": [asdict(s) for s in self.sweeps],
        }
        with open(output_file, 'w') as f:
            json.dump(payload, f, indent=2)
        print(f"✓ Saved results to: {output_file}")
        return output_file

    # ---------------------------------------------------------------------- #
    #                             REPORT                                     #
    # ---------------------------------------------------------------------- #

    def generate_report(self) -> Path:
        report_file = self.output_dir / "normalization_report.txt"

        with open(report_file, 'w') as f:
            f.write("="*70 + "\n")
            f.write("CUT ELIMINATION - NORMALIZATION REPORT\n")
            f.write("="*70 + "\n\n")

            sources = sorted(set(r.source for r in self.results))
            f.write(f"Total runs: {len(self.results)}\n")
            f.write(f"Sources: {', '.join(sources)}\n\n")

            for source in sources:
                sr = [r for r in self.results if r.source == source]
                ok = [r for r in sr if not r.error]
                f.write("-"*70 + "\n")
                f.write(f"{source.upper()}\n")
                f.write("-"*70 + "\n")
                for r in sr:
                    if r.error:
                        f.write(f"  {r.name:28s} ERROR {r.error}\n")
                    else:
                        f.write(f"  {r.name:28s} {r.steps:4d} steps  o = {r.o_initial}\n")
                if ok:
                    steps = [r.steps for r in ok]
                    f.write(f"\n  Steps: mean {np.mean(steps):.2f}, max {np.max(steps)}\n")
                    f.write(f"  Time:  mean {np.mean([r.time_ms for r in ok]):.2f} ms\n\n")

            cases = Counter()
            for r in self.results:
                cases.update(r.cases)
            if cases:
                f.write("-"*70 + "\n")
                f.write("REDUCTION CASES\n")
                f.write("-"*70 + "\n")
                for case, count in sorted(cases.items(), key=lambda kv: int(kv[0][1:])):
                    f.write(f"  {case:4s} {count:6d}\n")
                f.write("\n")

            if self.sweeps:
                f.write("-"*70 + "\n")
                f.write("SWEEPS\n")
                f.write("-"*70 + "\n")
                for s in self.sweeps:
                    f.write(f"  {s.name:14s} depth {s.depth}: {s.checked} checked, "
                            f"{s.violations} violations {s.details}\n")

        print(f"✓ Saved report: {report_file}")
        return report_file
