import unittest
import sys
import os
import random
from dataclasses import replace

# Add parent directory to path to import the toolkit
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.prooftheory.errors import CheckError, InvalidTerm, ParseError
from src.prooftheory.essential_order import (
    HULL_TRANSFER, SUBTERM_BASE, SUCCESSOR_BASE, HullFact, bounded_refute, check_certificate,
    derive_ell,
)
from src.prooftheory.formula_language import (
    ALL, EX, INDEX_ZERO, PI, SIGMA, Abstraction, And, BoundVarRef, FoName, Height, Literal, Or, RelConst,
    SecondVar, SoQuant, big_grade, classify, degree, erase, fix_atom, index_max, index_measures,
    index_subst, index_succ, index_var, is_pi, is_sigma, is_sigma_i, is_stratified, match_separation,
    negate, od, relabel, rename_part, separation_formula, strat_level, stratify, subst_pred,
)
from src.prooftheory.ordinal_notation import (
    CACHE_SIZE, I, ONE, OMEGA, ZERO, OmegaIndex, OmegaSucc, Ordering, Sum, compare, enumerate_terms, finite,
    g_coefficients, in_hull, is_fixpoint, is_valid, natural_sum, omega_tower, psi, validate_psi,
)
from src.prooftheory.proof_codec import index_from_sexpr, parse_formula, parse_proof
from src.prooftheory.sexpr_codec import parse_ordinal, parse_sexpr


OMEGA_1 = OmegaIndex(ONE)
OMEGA_2 = OmegaIndex(finite(2))
PSI_OMEGA1_0 = psi(OmegaSucc(ZERO), ZERO)
PSI_I_0 = psi(I, ZERO)
PSI_I_1 = psi(I, ONE)


def atom(pred: str, const: str = "c", positive: bool = True) -> Literal:
    return Literal(positive, RelConst(pred), FoName(const))


TIED = parse_formula("(All X (All Y I (or (not (var X c)) (var Y c))))")


class TestOrdinalComparison(unittest.TestCase):
    """Test cases for the order on ordinal terms"""

    def test_zero_is_least(self):
        """Test 0 < I"""
        self.assertEqual(compare(ZERO, I), Ordering.LT)
        self.assertEqual(compare(I, ZERO), Ordering.GT)

    def test_collapse_below_psi_i(self):
        """Test ψ_{Ω_1}0 < ψ_I 0"""
        self.assertEqual(compare(PSI_OMEGA1_0, PSI_I_0), Ordering.LT)

    def test_sandwich_between_cardinals(self):
        """Test Ω_1 < ψ_{Ω_2}0 < Ω_2"""
        psi_omega2 = psi(OmegaSucc(ONE), ZERO)
        self.assertEqual(compare(OMEGA_1, psi_omega2), Ordering.LT)
        self.assertEqual(compare(psi_omega2, OMEGA_2), Ordering.LT)

    def test_psi_i_monotone(self):
        """Test ψ_I 0 < ψ_I 1"""
        self.assertEqual(compare(PSI_I_0, PSI_I_1), Ordering.LT)

    def test_equal_terms(self):
        """Test EQ on structurally identical terms"""
        self.assertEqual(compare(natural_sum(OMEGA, ONE), natural_sum(ONE, OMEGA)), Ordering.EQ)

    def test_sum_is_lexicographic(self):
        """Test ω < ω+1 < ω+ω"""
        self.assertEqual(compare(OMEGA, natural_sum(OMEGA, ONE)), Ordering.LT)
        self.assertEqual(compare(natural_sum(OMEGA, ONE), natural_sum(OMEGA, OMEGA)), Ordering.LT)


class TestOrdinalArithmetic(unittest.TestCase):
    """Test cases for natural sums, towers and fixed points"""

    def test_natural_sum_identity(self):
        """Test α # 0 = α"""
        self.assertEqual(natural_sum(OMEGA, ZERO), OMEGA)

    def test_natural_sum_descending_merge(self):
        """Test 1 # ω = ω + 1"""
        self.assertEqual(natural_sum(ONE, OMEGA), Sum((OMEGA, ONE)))

    def test_natural_sum_commutes(self):
        """Test commutativity on a few mixed terms"""
        terms = [ONE, OMEGA, PSI_I_0, OMEGA_1, natural_sum(OMEGA, ONE)]
        for a in terms:
            for b in terms:
                self.assertEqual(natural_sum(a, b), natural_sum(b, a))

    def test_omega_tower(self):
        """Test ω_0(α) = α, ω_2(0) = ω and ω_1(Ω_1) = Ω_1"""
        self.assertEqual(omega_tower(0, PSI_I_0), PSI_I_0)
        self.assertEqual(omega_tower(2, ZERO), OMEGA)
        self.assertEqual(omega_tower(1, OMEGA_1), OMEGA_1)

    def test_fixpoints(self):
        """Test I and ψ_I 0 are fixed points, Ω_1 is not"""
        self.assertTrue(is_fixpoint(I))
        self.assertTrue(is_fixpoint(PSI_I_0))
        self.assertFalse(is_fixpoint(OMEGA_1))


class TestHulls(unittest.TestCase):
    """Test cases for G-coefficients, hull membership and ψ validity"""

    def test_coefficients_of_zero(self):
        """Test G_β(0) = ∅"""
        self.assertEqual(g_coefficients(OMEGA, ZERO), frozenset())

    def test_coefficients_of_collapse(self):
        """Test G_0(ψ_{Ω_1}0) = {0} and G_{Ω_1}(ψ_{Ω_1}0) = ∅"""
        self.assertEqual(g_coefficients(ZERO, PSI_OMEGA1_0), frozenset([ZERO]))
        self.assertEqual(g_coefficients(OMEGA_1, PSI_OMEGA1_0), frozenset())

    def test_in_hull(self):
        """Test membership of 0, I and ψ_{Ω_1}0"""
        self.assertTrue(in_hull(ZERO, ZERO, ZERO))
        self.assertTrue(in_hull(I, ZERO, ZERO))
        self.assertFalse(in_hull(PSI_OMEGA1_0, ZERO, ZERO))
        self.assertTrue(in_hull(PSI_OMEGA1_0, ONE, ZERO))

    def test_validate_psi(self):
        """Test ψ validity for small arguments"""
        self.assertTrue(validate_psi(OmegaSucc(ZERO), ZERO))
        self.assertTrue(validate_psi(I, ZERO))
        # the argument lies below the candidate, so G is empty
        self.assertTrue(validate_psi(OmegaSucc(ZERO), psi(OmegaSucc(ZERO), ONE)))


class TestTermEnumeration(unittest.TestCase):
    """Test cases for the depth-bounded term enumeration and sampled order properties"""

    FLIP = {Ordering.LT: Ordering.GT, Ordering.EQ: Ordering.EQ, Ordering.GT: Ordering.LT}

    @classmethod
    def setUpClass(cls):
        cls.terms = enumerate_terms(3)

    def test_first_level(self):
        """Test depth 1 holds only 0 and I"""
        self.assertEqual(enumerate_terms(1), [ZERO, I])
        self.assertEqual(enumerate_terms(0), [ZERO, I])

    def test_levels_grow(self):
        """Test each level contains the previous one"""
        shallow = enumerate_terms(2)
        self.assertTrue(set(shallow) <= set(self.terms))
        self.assertGreater(len(self.terms), len(shallow))

    def test_sorted_and_valid(self):
        """Test the enumeration is duplicate-free, ascending and canonical"""
        self.assertEqual(len(set(self.terms)), len(self.terms))
        for t in self.terms:
            self.assertTrue(is_valid(t), str(t))
        for a, b in zip(self.terms, self.terms[1:]):
            self.assertNotEqual(compare(a, b), Ordering.GT)

    def test_caches_are_bounded(self):
        """Test the memoised comparison and hull caches have a size limit"""
        self.assertEqual(compare.cache_info().maxsize, CACHE_SIZE)
        self.assertEqual(g_coefficients.cache_info().maxsize, CACHE_SIZE)

    def test_order_laws(self):
        """Test antisymmetry, equality and transitivity on sampled triples"""
        rng = random.Random(3)
        for _ in range(300):
            a, b, c = (rng.choice(self.terms) for _ in range(3))
            ab, bc = compare(a, b), compare(b, c)
            self.assertEqual(compare(b, a), self.FLIP[ab])
            self.assertEqual(ab == Ordering.EQ, a == b)
            if ab != Ordering.GT and bc != Ordering.GT:
                self.assertNotEqual(compare(a, c), Ordering.GT)

    def test_hull_monotone(self):
        """Test H_α(β) grows with α and with β"""
        rng = random.Random(5)
        for _ in range(300):
            gamma, alpha, alpha2, beta, beta2 = (rng.choice(self.terms) for _ in range(5))
            if compare(alpha2, alpha) == Ordering.LT:
                alpha, alpha2 = alpha2, alpha
            if compare(beta2, beta) == Ordering.LT:
                beta, beta2 = beta2, beta
            if in_hull(gamma, alpha, beta):
                self.assertTrue(in_hull(gamma, alpha2, beta))
                self.assertTrue(in_hull(gamma, alpha, beta2))


class TestOrdinalCodec(unittest.TestCase):
    """Test cases for the s-expression form of ordinal terms"""

    def test_parse_canonicalizes(self):
        """Test unsorted sums are sorted"""
        self.assertEqual(parse_ordinal("(+ 1 (w 1))"), natural_sum(OMEGA, ONE))

    def test_parse_psi(self):
        """Test (p I 1) and (p (W 1) 0)"""
        self.assertEqual(parse_ordinal("(p I 1)"), PSI_I_1)
        self.assertEqual(parse_ordinal("(p (W 1) 0)"), PSI_OMEGA1_0)

    def test_print_then_parse(self):
        """Test printed terms read back unchanged"""
        for t in [ZERO, I, natural_sum(OMEGA, ONE), PSI_I_1, OMEGA_2]:
            self.assertEqual(parse_ordinal(str(t)), t)

    def test_rejects_non_regular_subscript(self):
        """Test ψ_ω is rejected"""
        with self.assertRaises(ParseError):
            parse_ordinal("(p (w 1) 0)")

    def test_rejects_malformed(self):
        """Test unknown heads and unbalanced input"""
        with self.assertRaises(ParseError):
            parse_ordinal("(foo 1)")
        with self.assertRaises(ParseError):
            parse_ordinal("(+ 1")


class TestEssentialOrder(unittest.TestCase):
    """Test cases for certificates and the bounded refuter"""

    def test_successor(self):
        """Test β ≪ β+1"""
        cert = derive_ell(OMEGA, natural_sum(OMEGA, ONE))
        self.assertEqual(cert.kind, SUCCESSOR_BASE)
        self.assertTrue(check_certificate(cert))

    def test_subterm(self):
        """Test α ≪ α#α for a ψ-free α"""
        cert = derive_ell(OMEGA, natural_sum(OMEGA, OMEGA))
        self.assertEqual(cert.kind, SUBTERM_BASE)
        self.assertTrue(check_certificate(cert))

    def test_hull_transfer(self):
        """Test ψ_I 0 ≪ ψ_I 1 through the shared regular"""
        cert = derive_ell(PSI_I_0, PSI_I_1)
        self.assertEqual(cert.kind, HULL_TRANSFER)
        self.assertTrue(check_certificate(cert))

    def test_wrong_direction_fails(self):
        """Test no certificate when d0 is not below d1"""
        self.assertIsNone(derive_ell(PSI_I_1, PSI_I_0))
        self.assertIsNone(derive_ell(OMEGA, OMEGA))

    def test_tampered_certificate_rejected(self):
        """Test a certificate with a false witness or wrong conclusion fails"""
        cert = derive_ell(PSI_I_0, PSI_I_1)
        bad_witness = replace(cert, witnesses=(HullFact(PSI_OMEGA1_0, ZERO, ZERO),))
        self.assertFalse(check_certificate(bad_witness))
        bad_succ = replace(derive_ell(OMEGA, natural_sum(OMEGA, ONE)), high=natural_sum(OMEGA, finite(2)))
        self.assertFalse(check_certificate(bad_succ))

    def test_refute_finds_counterexample(self):
        """Test ψ_I 1 ≪ ψ_I 0 is refuted at (I, 1)"""
        self.assertEqual(bounded_refute(PSI_I_1, PSI_I_0), (I, ONE))

    def test_refute_nothing(self):
        """Test certified and equal pairs are not refuted"""
        self.assertIsNone(bounded_refute(OMEGA, natural_sum(OMEGA, OMEGA)))
        self.assertIsNone(bounded_refute(PSI_I_0, PSI_I_0))


class TestFormulaLanguage(unittest.TestCase):
    """Test cases for negation, substitution and classification"""

    def test_negation(self):
        """Test ¬(Rc ∧ ¬Rc) = ¬Rc ∨ Rc and involution"""
        a = And(atom("R"), atom("R", positive=False))
        self.assertEqual(negate(a), Or(atom("R", positive=False), atom("R")))
        self.assertEqual(negate(negate(a)), a)

    def test_negating_second_order_quantifier(self):
        """Test ¬∀X F = ∃X ¬F"""
        body = Literal(True, BoundVarRef("X"), FoName("c"))
        n = negate(SoQuant(ALL, "X", None, body))
        self.assertEqual(n, SoQuant(EX, "X", None, negate(body)))

    def test_predicate_substitution(self):
        """Test Xc and ¬Xc under X := {x : Rx ∧ Qx}"""
        inst = Abstraction("x", And(atom("R", "x"), atom("Q", "x")))
        pos = Literal(True, BoundVarRef("X"), FoName("c"))
        neg = Literal(False, BoundVarRef("X"), FoName("c"))
        self.assertEqual(subst_pred(pos, inst, "X"), And(atom("R"), atom("Q")))
        self.assertEqual(subst_pred(neg, inst, "X"), Or(atom("R", positive=False), atom("Q", positive=False)))
        self.assertEqual(subst_pred(atom("R"), inst, "X"), atom("R"))

    def test_classification(self):
        """Test Σ¹₁ is in both classes and a tied ∀X∃Y is only Π"""
        comprehension = parse_formula(
            "(Ex X (all y (and (or (not (var X y)) (rel R y)) (or (not (rel R y)) (var X y)))))")
        self.assertTrue(is_pi(comprehension))
        self.assertTrue(is_sigma(comprehension))
        tied = parse_formula("(All X (Ex Y (or (not (var X c)) (var Y c))))")
        self.assertTrue(is_pi(tied))
        self.assertFalse(is_sigma(tied))

    def test_separation_shape(self):
        """Test ∃X(A⊂X⊂B) is recognised and a literal is not"""
        sep = separation_formula(Abstraction("x", atom("R", "x")), Abstraction("x", atom("Q", "x")))
        self.assertIsNotNone(match_separation(sep))
        self.assertIsNone(match_separation(atom("R")))

    def test_grades(self):
        """Test first-order formulas have Gr 0 and dg = gr"""
        a = And(atom("R"), atom("Q"))
        self.assertEqual(big_grade(a), 0)
        self.assertEqual(degree(a), Height(0, 1))

    def test_index_ordinals(self):
        """Test od on successor and max indices"""
        self.assertEqual(od(index_succ(fix_atom(PSI_I_0))), natural_sum(PSI_I_0, ONE))
        self.assertEqual(od(index_succ(fix_atom(I))), I)
        self.assertEqual(od(index_max(fix_atom(PSI_I_0), fix_atom(I))), I)

    def test_index_constant_must_be_fixpoint(self):
        """Test 1 is not an index constant"""
        with self.assertRaises(InvalidTerm):
            fix_atom(ONE)

    def test_index_measures_keep_zero(self):
        """Test I(max 0 ψ_I0) = {0, ψ_I0}"""
        s = index_from_sexpr(parse_sexpr("(max 0 (fix (p I 0)))"))
        self.assertEqual(s, index_max(INDEX_ZERO, fix_atom(PSI_I_0)))
        self.assertEqual(index_measures(s), (PSI_I_0, frozenset([ZERO, PSI_I_0]), frozenset()))
        open_index = index_max(index_var("U", I), INDEX_ZERO)
        self.assertEqual(index_measures(open_index), (I, frozenset([I, ZERO]), frozenset(["U"])))
        self.assertEqual(index_max(INDEX_ZERO, INDEX_ZERO), INDEX_ZERO)
        self.assertEqual(index_max(), INDEX_ZERO)

    def test_stratification_levels(self):
        """Test st_Π on an I-indexed ∀, with and without an eigenvariable"""
        self.assertEqual(strat_level(PI, TIED), index_max(fix_atom(I), INDEX_ZERO))
        self.assertEqual(strat_level(PI, TIED, eigen="U"), index_max(index_var("U", I), INDEX_ZERO))
        with self.assertRaises(CheckError):
            strat_level(SIGMA, TIED)
        exists = parse_formula("(Ex X (and (var X c) (rel R c)))")
        self.assertEqual(strat_level(PI, exists), index_succ(INDEX_ZERO))
        self.assertEqual(strat_level(SIGMA, exists), INDEX_ZERO)

    def test_stratified_and_sigma_i(self):
        """Test free variables need closed indices below I; Σ_I excludes ∀^I"""
        self.assertTrue(is_stratified(parse_formula("(var U (fix (p I 0)) c)")))
        self.assertFalse(is_stratified(parse_formula("(var U (fix I) c)")))
        self.assertFalse(is_stratified(parse_formula("(var U (iv V I) c)")))
        self.assertTrue(is_stratified(TIED))
        self.assertFalse(is_sigma_i(TIED))
        self.assertTrue(is_sigma_i(negate(TIED)))
        self.assertTrue(is_sigma_i(atom("R")))

    def test_index_substitution(self):
        """Test V^{U^I}c[ψ_I0/U^I] = V^{ψ_I0}c while a part U is untouched"""
        target = index_var("U", I)
        a = Literal(True, SecondVar("V", target), FoName("c"))
        self.assertEqual(index_subst(a, fix_atom(PSI_I_0), target),
                         Literal(True, SecondVar("V", fix_atom(PSI_I_0)), FoName("c")))
        part = Literal(True, SecondVar("U", INDEX_ZERO), FoName("c"))
        self.assertEqual(index_subst(part, fix_atom(PSI_I_0), target), part)

    def test_relabel_and_rename(self):
        """Test ∀^I relabels to ∀^η only for the matching kind; renaming keeps indices"""
        body = Literal(True, BoundVarRef("X"), FoName("c"))
        q = SoQuant(ALL, "X", I, body)
        self.assertEqual(relabel(q, PSI_I_0, ALL), SoQuant(ALL, "X", PSI_I_0, body))
        self.assertEqual(relabel(q, PSI_I_0, EX), q)
        a = Literal(True, SecondVar("U", index_var("U", I)), FoName("c"))
        self.assertEqual(rename_part(a, "U", "W"),
                         Literal(True, SecondVar("W", index_var("U", I)), FoName("c")))

    def test_stratify_then_erase(self):
        """Test erasing the indices of a stratified formula gives it back"""
        tied = parse_formula("(All X (Ex Y (or (not (var X c)) (var Y c))))")
        stratified = stratify(tied)
        self.assertEqual(stratified.index, I)
        self.assertIsNone(stratified.body.index)
        for text in ("(All X (Ex Y (or (not (var X c)) (var Y c))))",
                     "(or (var U c) (All X (var X c)))",
                     "(Ex X (all y (and (or (not (var X y)) (rel R y)) (or (not (rel R y)) (var X y)))))"):
            with self.subTest(formula=text):
                a = parse_formula(text)
                self.assertEqual(erase(stratify(a)), a)

    def test_classification_is_dual_under_negation(self):
        """Test ¬A is Π exactly when A is Σ, with the same distinguished quantifiers"""
        for text in ("(All X (Ex Y (or (not (var X c)) (var Y c))))",
                     "(All X (Ex Y (and (var X c) (var Y c))))",
                     "(Ex X (all y (and (or (not (var X y)) (rel R y)) (or (not (rel R y)) (var X y)))))",
                     "(and (All X (var X c)) (Ex Y (not (var Y c))))"):
            with self.subTest(formula=text):
                a = parse_formula(text)
                c, n = classify(a), classify(negate(a))
                self.assertEqual(n.pi, c.sigma)
                self.assertEqual(n.sigma, c.pi)
                self.assertEqual(n.distinguished, c.distinguished)

    def test_tied_universal_is_not_distinguished(self):
        """Test only ∃Y is distinguished in ∀X∃Y(Xc ∧ Yc)"""
        a = parse_formula("(All X (Ex Y (and (var X c) (var Y c))))")
        self.assertEqual(classify(a).distinguished, frozenset([(0,)]))
        self.assertTrue(is_pi(a))
        self.assertFalse(is_sigma(a))


class TestProofCodec(unittest.TestCase):
    """Test cases for reading formulas and proofs"""

    def test_not_is_pushed_inwards(self):
        """Test (not (and ...)) reads as a disjunction of negations"""
        f = parse_formula("(not (and (rel R c) (rel Q c)))")
        self.assertEqual(f, Or(atom("R", positive=False), atom("Q", positive=False)))

    def test_unknown_system(self):
        """Test the system tag is checked"""
        with self.assertRaises(ParseError):
            parse_proof("(proof zf (node (seq (rel R c) (not (rel R c))) (rule Ax)))")

    def test_unknown_rule_parameter(self):
        """Test rule keys are checked"""
        with self.assertRaises(ParseError):
            parse_proof("(proof sbl (node (seq (rel R c) (not (rel R c))) (rule Ax (colour red))))")

    def test_parse_error_position(self):
        """Test malformed input reports a ParseError"""
        with self.assertRaises(ParseError):
            parse_proof("(proof sbl (node")


def run_tests():
    """Run all test suites"""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestOrdinalComparison))
    suite.addTests(loader.loadTestsFromTestCase(TestOrdinalArithmetic))
    suite.addTests(loader.loadTestsFromTestCase(TestHulls))
    suite.addTests(loader.loadTestsFromTestCase(TestTermEnumeration))
    suite.addTests(loader.loadTestsFromTestCase(TestOrdinalCodec))
    suite.addTests(loader.loadTestsFromTestCase(TestEssentialOrder))
    suite.addTests(loader.loadTestsFromTestCase(TestFormulaLanguage))
    suite.addTests(loader.loadTestsFromTestCase(TestProofCodec))

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
