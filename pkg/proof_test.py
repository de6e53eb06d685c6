import unittest
import sys
import os
import io
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import replace
from pathlib import Path

# Add parent directory to path to import the toolkit
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.datasets.data_loaders import TARGETED_DIR, load_corpus, load_targeted
from src.datasets.scalable_data_generator import ProofGenerator
from src.normalization_evaluator import NormalizationEvaluator
from src.proof_wrapper import ProofWrapper
from src.prooftheory.calculus import (
    ancestors, assign_ordinals, check_lk, check_preproof, check_proof, check_sbl, descendants, heights,
    proof_ordinal, structure,
)
from src.prooftheory.cli import EXIT_FUEL, EXIT_USAGE, main
from src.prooftheory.embedding_bridge import embed_sbl, extract_lk
from src.prooftheory.errors import EmbeddingError, NoRedex
from src.prooftheory.formula_language import HEIGHT_OMEGA, HEIGHT_ZERO, INDEX_ZERO, PI, Height, fix_atom, strat_level
from src.prooftheory.ordinal_notation import (
    I, ONE, ZERO, OmegaIndex, OmegaSucc, Ordering, Psi, compare, finite, omega_pow, psi,
)
from src.prooftheory.proof_codec import format_proof, parse_formula, parse_proof
from src.prooftheory.proof_tree import (
    AX, CRIT, CUT, EX_RED, LK, S1, S2, SUB, WEAK, Preproof, ProofNode, Rule, expected_minor, iter_nodes,
    node_at, proof_size, replace_at,
)
from src.prooftheory.reduction_engine import (
    FuelExhausted, find_redex, format_trace, normalize, parse_trace, reduce_step,
)


CORPUS = load_corpus()
BROKEN_AXIOM = "(proof sbl (node (seq (rel R c) (rel Q c)) (rule Ax)))"


def _cut_free(name: str) -> Preproof:
    p0, _ = embed_sbl(CORPUS[name])
    return normalize(p0).proof


def _normalized(name: str):
    p0, _ = embed_sbl(CORPUS[name])
    return normalize(p0)


def _one_rule(rule: Rule) -> Preproof:
    """A one-step preproof: rule applied above an axiom on R c."""
    rule = replace(rule, minor=expected_minor(rule))
    side = {parse_formula("(rel R c)"), parse_formula("(not (rel R c))")}
    upper = ProofNode(frozenset(side | {rule.minor}), Rule(AX))
    return Preproof(ProofNode(frozenset(side | {rule.main}), rule, (upper,)))


def _with_rule(proof: Preproof, path, **changes) -> Preproof:
    node = node_at(proof.root, path)
    new = replace(node, rule=replace(node.rule, **changes))
    return Preproof(replace_at(proof.root, path, new), proof.system)


EXCLUDED_MIDDLE = parse_formula("(All X (or (not (var X c)) (var X c)))")
TIED = parse_formula("(All X (All Y I (or (not (var X c)) (var Y c))))")


class TestCalculus(unittest.TestCase):
    """Test the rule checkers"""

    def test_corpus_is_sbl(self):
        """Every bundled derivation passes the SBL checker"""
        self.assertEqual(len(CORPUS), 10)
        for name, proof in CORPUS.items():
            with self.subTest(name=name):
                self.assertTrue(check_sbl(proof).ok, check_sbl(proof).diagnostics)

    def test_broken_axiom(self):
        """An axiom without a complementary pair is reported"""
        report = check_sbl(parse_proof(BROKEN_AXIOM))
        self.assertFalse(report.ok)
        self.assertIn("axiom", report.conditions())

    def test_lk_rejects_cut(self):
        """The LK checker only accepts cut-free derivations"""
        lk = Preproof(CORPUS["cut_prime"].root, LK)
        self.assertFalse(check_lk(lk).ok)

    def test_weak_rule(self):
        """(w) takes its index from st_Π and needs Gr = 0"""
        good = Rule(WEAK, main=EXCLUDED_MIDDLE, eigen="U", index=strat_level(PI, EXCLUDED_MIDDLE))
        self.assertEqual(good.index, INDEX_ZERO)
        report = check_preproof(_one_rule(good))
        self.assertTrue(report.ok, report.diagnostics)
        wrong = replace(good, index=fix_atom(psi(I, ZERO)))
        self.assertIn("index", check_preproof(_one_rule(wrong)).conditions())
        graded = Rule(WEAK, main=TIED, eigen="U", index=INDEX_ZERO)
        self.assertIn("grade", check_preproof(_one_rule(graded)).conditions())

    def test_s1_rule(self):
        """(s1) needs Gr ≠ 0 and the index st_Π with the eigenvariable for I"""
        flat = Rule(S1, main=EXCLUDED_MIDDLE, eigen="U", index=INDEX_ZERO)
        self.assertIn("grade", check_preproof(_one_rule(flat)).conditions())
        good = Rule(S1, main=TIED, eigen="U", index=strat_level(PI, TIED, eigen="U"))
        report = check_preproof(_one_rule(good))
        self.assertTrue(report.ok, report.diagnostics)
        wrong = replace(good, index=INDEX_ZERO)
        self.assertIn("index", check_preproof(_one_rule(wrong)).conditions())

    def test_existential_reduction_rule(self):
        """An ∃^I-reduction needs a fixed-point type and no ∀^I above it"""
        side = {parse_formula("(rel R c)"), parse_formula("(not (rel R c))")}

        def reduction(extra, eta):
            sequent = frozenset(side | extra)
            upper = ProofNode(sequent, Rule(AX))
            return Preproof(ProofNode(sequent, Rule(EX_RED, eta=eta, stack=ZERO), (upper,)))

        clean = check_preproof(reduction(set(), psi(I, ZERO)))
        self.assertTrue(clean.ok, clean.diagnostics)
        self.assertIn("type", check_preproof(reduction(set(), ONE)).conditions())
        self.assertIn("type", check_preproof(reduction(set(), I)).conditions())
        universal = parse_formula("(All X I (Ex Y (or (not (var X c)) (var Y c))))")
        self.assertIn("klein", check_preproof(reduction({universal}, psi(I, ZERO))).conditions())

    def test_reduction_type_bound(self):
        """The type of an ∃^I-reduction may not drop below ψ_I(γ#ω^α)"""
        p0, _ = embed_sbl(CORPUS["critical_triangle"])
        self.assertEqual(node_at(p0.root, (0,)).rule.tag, EX_RED)
        self.assertTrue(check_proof(p0).ok)
        lowered = _with_rule(p0, (0,), eta=psi(I, ZERO))
        self.assertTrue(check_preproof(lowered).ok)
        self.assertIn("4", check_proof(lowered).conditions())

    def test_bar_needs_vacuous_substitution(self):
        """A proof whose bar sequent is a cut is rejected"""
        p0, _ = embed_sbl(CORPUS["cut_prime"])
        bare = Preproof(p0.root.children[0], p0.system)
        self.assertEqual(bare.root.rule.tag, CUT)
        self.assertIn("7", check_proof(bare).conditions())


class TestProofMeasures(unittest.TestCase):
    """Test heights, ordinal assignment and the structure of an embedded proof"""

    def setUp(self):
        self.proof, _ = embed_sbl(CORPUS["critical_triangle"])
        self.cut = node_at(self.proof.root, (0, 0)).rule.cut

    def test_shape(self):
        """A substitution over a vacuous ∃^I-reduction over the cut"""
        tags = [node_at(self.proof.root, p).rule.tag for p in [(), (0,), (0, 0), (0, 0, 0), (0, 0, 1)]]
        self.assertEqual(tags, [SUB, EX_RED, CUT, CRIT, S2])

    def test_heights(self):
        """0 above a substitution, ω above a reduction and dg(A) above a cut"""
        hs = heights(self.proof)
        self.assertEqual(hs[()], HEIGHT_ZERO)
        self.assertEqual(hs[(0,)], HEIGHT_ZERO)
        self.assertEqual(hs[(0, 0)], HEIGHT_OMEGA)
        self.assertEqual(hs[(0, 0, 0)], Height(1, 1))
        self.assertEqual(hs[(0, 0, 1)], Height(1, 1))
        self.assertEqual(hs[(0, 0, 1, 0, 0, 0)], Height(1, 1))

    def test_ordinals(self):
        """Axioms get 1, one-premise rules add one, the cut sums and climbs one height"""
        ann = assign_ordinals(self.proof)
        self.assertEqual(ann.sequent[(0, 0, 0, 0, 0, 0)], ONE)
        self.assertEqual(compare(ann.sequent[(0, 0, 0, 0, 0)], finite(2)), Ordering.EQ)
        self.assertEqual(compare(ann.sequent[(0, 0, 0)], finite(4)), Ordering.EQ)
        self.assertEqual(compare(ann.sequent[(0, 0, 1)], finite(4)), Ordering.EQ)
        self.assertEqual(compare(ann.rule[(0, 0)], finite(8)), Ordering.EQ)
        self.assertEqual(compare(ann.sequent[(0, 0)], omega_pow(finite(8))), Ordering.EQ)
        collapsed = psi(I, omega_pow(omega_pow(finite(8))))
        self.assertEqual(compare(ann.sequent[(0,)], collapsed), Ordering.EQ)
        root = ann.sequent[()]
        self.assertIsInstance(root, Psi)
        self.assertEqual(root.reg, OmegaSucc(ZERO))
        self.assertEqual(root, proof_ordinal(self.proof))

    def test_structure(self):
        """The cut sits in the end-piece of the root with one suitable triangle"""
        st = structure(self.proof)
        self.assertEqual(st.bar_sequents, {()})
        self.assertEqual(st.boundary_rules, {(0, 0, 0), (0, 0, 1)})
        self.assertEqual(st.suitable_triangles, [((0, 0, 1), (0, 0, 0), (0, 0))])
        self.assertIn((0, 0, 1, 0), st.explicit_rules)
        self.assertEqual(st.end_piece_of((0, 0)), ())

    def test_descendants(self):
        """The end formula runs down to the root; the cut formula stops at the cut"""
        end = next(iter(self.proof.end_sequent))
        self.assertIn(((), end), descendants(((0, 0, 1, 0), end), self.proof))
        self.assertIn(((0, 0, 0, 0, 0), end), ancestors(((), end), self.proof))
        self.assertEqual(descendants(((0, 0, 1), self.cut), self.proof), {((0, 0, 1), self.cut)})


class TestEmbedding(unittest.TestCase):
    """Test the embedding into SBL′ and the extraction back to LK"""

    def test_cut_prime_embedding(self):
        """A single cut gets a substitution below its bar"""
        p0, sck = embed_sbl(CORPUS["cut_prime"])
        self.assertEqual(p0.root.rule.tag, SUB)
        self.assertEqual(proof_size(p0.root), 4)
        self.assertIn((), structure(p0).bar_sequents)
        self.assertTrue(check_proof(p0).ok)
        self.assertTrue(sck)

    def test_embedding_keeps_end_sequent(self):
        """The embedded proof keeps the end-sequent and starts below Ω_1"""
        for name, proof in CORPUS.items():
            with self.subTest(name=name):
                p0, _ = embed_sbl(proof)
                self.assertEqual(p0.end_sequent, proof.end_sequent)
                self.assertEqual(compare(proof_ordinal(p0), OmegaIndex(ONE)), Ordering.LT)

    def test_embedding_rejects_sblp(self):
        """Only SBL derivations are embedded"""
        targeted = load_targeted()["cut_on_axiom"]
        with self.assertRaises(EmbeddingError):
            embed_sbl(targeted)

    def test_extract_needs_cut_free(self):
        """Extraction refuses a proof with a bar sequent"""
        p0, _ = embed_sbl(CORPUS["cut_prime"])
        with self.assertRaises(EmbeddingError):
            extract_lk(p0)


class TestReduction(unittest.TestCase):
    """Test the reduction engine"""

    def test_cut_prime_trace(self):
        """A cut on an axiom disappears in one step"""
        p0, _ = embed_sbl(CORPUS["cut_prime"])
        outcome = normalize(p0)
        self.assertTrue(outcome.cut_free)
        self.assertEqual([s.case for s in outcome.trace], ["C2"])

    def test_cut_disjunction_trace(self):
        """An explicit rule is moved before the cut drops"""
        p0, _ = embed_sbl(CORPUS["cut_disjunction"])
        outcome = normalize(p0)
        self.assertEqual([s.case for s in outcome.trace], ["C1", "C2"])
        lk = extract_lk(outcome.proof)
        self.assertTrue(check_lk(lk).ok)
        self.assertEqual(lk.end_sequent, CORPUS["cut_disjunction"].end_sequent)

    def test_propositional_triangle(self):
        """A conjunction against a disjunction is split, then the explicit rules move down"""
        outcome = _normalized("propositional_triangle")
        self.assertTrue(outcome.cut_free)
        self.assertEqual([s.case for s in outcome.trace], ["C13", "C1", "C1", "C1", "C1", "C2"])

    def test_quantifier_triangle(self):
        """A first-order ∀ against ∃ is instantiated with the witness term"""
        outcome = _normalized("quantifier_triangle")
        self.assertTrue(outcome.cut_free)
        self.assertEqual([s.case for s in outcome.trace], ["C14", "C1", "C1", "C2"])

    def test_weak_against_bar(self):
        """A (w) against a (BI) becomes a cut under a new substitution"""
        outcome = _normalized("weak_against_bar")
        self.assertTrue(outcome.cut_free)
        self.assertEqual([s.case for s in outcome.trace], ["C10", "C1", "C1", "C1", "C1", "C2"])

    def test_critical_triangle(self):
        """An (s2) against a (c) on an I-indexed cut is split first"""
        p0, _ = embed_sbl(CORPUS["critical_triangle"])
        redex = find_redex(p0)
        self.assertEqual(redex.case, "C11")
        self.assertEqual(node_at(p0.root, redex.paths["universal"]).rule.tag, S2)
        self.assertEqual(node_at(p0.root, redex.paths["existential"]).rule.tag, CRIT)
        outcome = _normalized("critical_triangle")
        cases = [s.case for s in outcome.trace]
        self.assertTrue(outcome.cut_free)
        self.assertEqual(cases[0], "C11")
        self.assertEqual(cases[-1], "C2")
        self.assertEqual(set(cases[1:-1]), {"C1"})

    def test_triangles_extract_to_lk(self):
        """Every triangle proof normalizes to a cut-free LK derivation of the same end-sequent"""
        for name in ("propositional_triangle", "quantifier_triangle", "weak_against_bar", "critical_triangle"):
            with self.subTest(name=name):
                lk = extract_lk(_normalized(name).proof)
                self.assertTrue(check_lk(lk).ok)
                self.assertEqual(lk.end_sequent, CORPUS[name].end_sequent)

    def test_targeted_proof(self):
        """The targeted proof starts with a piece cut and ends cut-free"""
        outcome = normalize(load_targeted()["cut_on_axiom"])
        self.assertTrue(outcome.cut_free)
        self.assertEqual(outcome.trace[0].case, "C3")

    def test_every_step_descends(self):
        """The proof ordinal strictly decreases along the trace"""
        for name, proof in CORPUS.items():
            with self.subTest(name=name):
                p0, _ = embed_sbl(proof)
                outcome = normalize(p0)
                for step in outcome.trace:
                    self.assertEqual(compare(step.o_after, step.o_before), Ordering.LT)
                ordinals = outcome.ordinals()
                if ordinals:
                    self.assertEqual(ordinals[0], proof_ordinal(p0))

    def test_cut_free_result_has_no_cut(self):
        """Normalization leaves no cut rule behind"""
        proof = _cut_free("cut_disjunction")
        self.assertFalse(structure(proof).bar_sequents)
        self.assertFalse(any(n.rule.tag == CUT for _, n in iter_nodes(proof.root)))

    def test_no_redex_on_cut_free(self):
        """Asking for a redex in a cut-free proof fails"""
        proof = _cut_free("cut_prime")
        with self.assertRaises(NoRedex):
            find_redex(proof)
        with self.assertRaises(NoRedex):
            reduce_step(proof)

    def test_fuel(self):
        """Zero fuel stops before the first step; negative fuel is refused"""
        p0, _ = embed_sbl(CORPUS["cut_prime"])
        outcome = normalize(p0, fuel=0)
        self.assertIsInstance(outcome, FuelExhausted)
        self.assertFalse(outcome.cut_free)
        self.assertEqual(outcome.steps, 0)
        with self.assertRaises(ValueError):
            normalize(p0, fuel=-1)

    def test_trace_file(self):
        """A printed trace reads back with the same cases and ordinals"""
        p0, _ = embed_sbl(CORPUS["cut_disjunction"])
        outcome = normalize(p0)
        steps = parse_trace(format_trace(outcome.trace))
        self.assertEqual([s["case"] for s in steps], [s.case for s in outcome.trace])
        self.assertEqual(steps[-1]["o_after"], outcome.trace[-1].o_after)


class TestCommandLine(unittest.TestCase):
    """Test the command-line exit codes"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.proof_file = self.dir / "cut_prime.sbl"
        self.proof_file.write_text(format_proof(CORPUS["cut_prime"]), encoding="utf-8")

    def tearDown(self):
        self.tmp.cleanup()

    def _main(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_cmp(self):
        code, out, _ = self._main("cmp", "(w 1)", "(+ 2 3)")
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), "GT")

    def test_check(self):
        code, out, _ = self._main("check", str(self.proof_file))
        self.assertEqual(code, 0)
        self.assertIn("ok sbl", out)

    def test_run_writes_trace_and_lk(self):
        trace, lk = self.dir / "trace.sx", self.dir / "out.lk"
        code, out, _ = self._main("run", str(self.proof_file), "--trace", str(trace),
                                  "--emit-lk", str(lk), "--quiet")
        self.assertEqual(code, 0)
        self.assertIn("cut-free after 1 steps", out)
        self.assertEqual([s["case"] for s in parse_trace(trace.read_text())], ["C2"])
        self.assertEqual(parse_proof(lk.read_text()).system, LK)

    def test_malformed_file(self):
        bad = self.dir / "bad.sbl"
        bad.write_text("(proof sbl (node", encoding="utf-8")
        code, _, err = self._main("check", str(bad))
        self.assertEqual(code, 2)
        self.assertIn("error", err)

    def test_failed_check(self):
        bad = self.dir / "axiom.sbl"
        bad.write_text(BROKEN_AXIOM, encoding="utf-8")
        code, _, _ = self._main("check", str(bad))
        self.assertEqual(code, 3)

    def test_usage_errors(self):
        self.assertEqual(self._main("search", "x")[0], EXIT_USAGE)
        self.assertEqual(self._main("cmp", "0")[0], EXIT_USAGE)
        self.assertEqual(self._main("run", str(self.proof_file), "--fuel", "-1")[0], EXIT_USAGE)

    def test_fuel_exhausted(self):
        code, out, _ = self._main("run", str(self.proof_file), "--fuel", "0")
        self.assertEqual(code, EXIT_FUEL)
        self.assertIn("fuel exhausted", out)

    def test_invalid_ordinal(self):
        code, _, _ = self._main("cmp", "(p (w 1) 0)", "0")
        self.assertEqual(code, 2)

    def test_embed_sblp_input(self):
        code, _, _ = self._main("embed", str(TARGETED_DIR / "cut_on_axiom.sblp"))
        self.assertEqual(code, 4)


class TestDatasets(unittest.TestCase):
    """Test the loaders and the generator"""

    def test_targeted_stacks_filled(self):
        """The loader fills in every missing substitution stack"""
        targeted = load_targeted()
        self.assertIn("cut_on_axiom", targeted)
        for _, node in iter_nodes(targeted["cut_on_axiom"].root):
            if node.rule.tag == SUB:
                self.assertIsNotNone(node.rule.stack)

    def test_missing_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(FileNotFoundError):
                load_corpus(tmp)

    def test_cut_chain(self):
        """A generated chain is a valid derivation of the fixed end-sequent"""
        proof = ProofGenerator().cut_chain(3)
        self.assertTrue(check_sbl(proof).ok)
        self.assertEqual(proof_size(proof.root), 11)
        self.assertEqual(proof.end_sequent, CORPUS["cut_disjunction"].end_sequent)

    def test_cut_chain_rejects_negative_depth(self):
        with self.assertRaises(ValueError):
            ProofGenerator().cut_chain(-1)

    def test_generation_is_seeded(self):
        self.assertEqual(format_proof(ProofGenerator(seed=7).cut_chain(4)),
                         format_proof(ProofGenerator(seed=7).cut_chain(4)))


class TestProofWrapper(unittest.TestCase):
    """Test the wrapper used by the web application"""

    def test_cmp(self):
        res = ProofWrapper.run_operation("cmp", {"terms": ["0", "I"]})
        self.assertEqual(res["ordering"], "LT")
        self.assertIn("time_taken", res)

    def test_refute(self):
        res = ProofWrapper.run_operation("refute", {"terms": ["(p I 1)", "(p I 0)"]})
        self.assertIsNone(res["certificate"])
        self.assertEqual(res["counterexample"], ["I", "(w 0)"])

    def test_missing_proof(self):
        res = ProofWrapper.run_operation("check", {})
        self.assertEqual(res["code"], 1)

    def test_run_reports_fuel(self):
        res = ProofWrapper.run_operation("run", {"proof": format_proof(CORPUS["cut_prime"])}, fuel=0)
        self.assertFalse(res["cut_free"])
        self.assertNotIn("lk", res)


class TestNormalizationEvaluator(unittest.TestCase):
    """Test the benchmark evaluator"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.evaluator = NormalizationEvaluator(output_dir=self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_benchmark_single(self):
        r = self.evaluator.benchmark_single("cut_prime", "corpus", CORPUS["cut_prime"], repeats=1)
        self.assertIsNone(r.error)
        self.assertTrue(r.cut_free)
        self.assertEqual(r.steps, 1)
        self.assertEqual(r.cases, {"C2": 1})

    def test_errors_are_recorded(self):
        r = self.evaluator.benchmark_single("broken", "corpus", parse_proof(BROKEN_AXIOM), repeats=1)
        self.assertIn("EmbeddingError", r.error)

    def test_order_laws(self):
        sweep = self.evaluator.order_law_sweep(depth=2, samples=200)
        self.assertGreater(sweep.checked, 0)
        self.assertEqual(sweep.violations, 0)

    def test_order_laws_at_depth_four(self):
        """Test the depth-4 enumeration finishes and is a strict chain"""
        sweep = self.evaluator.order_law_sweep(depth=4, samples=500)
        self.assertEqual(sweep.depth, 4)
        self.assertGreater(sweep.checked, 500)
        self.assertEqual(sweep.violations, 0)

    def test_order_facts(self):
        """Test 1000 drawn instances of the ordinal arithmetic facts"""
        sweep = self.evaluator.order_fact_sweep()
        self.assertEqual(sweep.checked, 1000)
        self.assertEqual(sweep.violations, 0, sweep.details)

    def test_hull_coherence(self):
        """Test hulls agree with G-coefficients, ψ validity, monotonicity and reverse closure"""
        sweep = self.evaluator.hull_coherence_sweep()
        self.assertGreater(sweep.checked, 1000)
        self.assertEqual(sweep.violations, 0, sweep.details)

    def test_certificate_sweep(self):
        """Test 1000 descents in reduction shapes are certified and survive refutation"""
        sweep = self.evaluator.certificate_sweep()
        self.assertEqual(sweep.details.get("certified"), 1000)
        self.assertEqual(sweep.violations, 0, sweep.details)

    def test_save_results(self):
        self.evaluator.benchmark_single("cut_prime", "corpus", CORPUS["cut_prime"], repeats=1)
        path = self.evaluator.save_results()
        self.assertTrue(path.exists())
        self.assertTrue(self.evaluator.generate_report().exists())


def run_tests():
    """Run all test suites"""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestCalculus))
    suite.addTests(loader.loadTestsFromTestCase(TestProofMeasures))
    suite.addTests(loader.loadTestsFromTestCase(TestEmbedding))
    suite.addTests(loader.loadTestsFromTestCase(TestReduction))
    suite.addTests(loader.loadTestsFromTestCase(TestCommandLine))
    suite.addTests(loader.loadTestsFromTestCase(TestDatasets))
    suite.addTests(loader.loadTestsFromTestCase(TestProofWrapper))
    suite.addTests(loader.loadTestsFromTestCase(TestNormalizationEvaluator))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print("\n" + "="*70)
    print(f"Tests run: {result.testsRun}")
    print(f"Successes: {result.testsRun - len(result.failures) - len(result.errors)}")
    print(f"Failures: {len(result.failures)}")
    print(f"Errors: {len(result.errors)}")
    print("="*70)

    return result.wasSuccessful()


if __name__ == '__main__':
    success = run_tests()
    sys.exit(0 if success else 1)
