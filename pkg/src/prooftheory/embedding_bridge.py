"""
Bridges between the calculi: SBL derivations are embedded into SBL′ proofs
with stacks, and cut-free SBL′ proofs are read back as first-order LK
derivations.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from src.prooftheory.calculus import (
    OrdinalAnnotation, assign_ordinals, check_lk, check_proof, check_sbl, heights, indices_above,
    level_regular, sequent_so_names, structure,
)
from src.prooftheory.config import DEFAULT_CONFIG, EngineConfig
from src.prooftheory.errors import CheckError, EmbeddingError, InvalidTerm
from src.prooftheory.formula_language import (
    ALL, DEFAULT_RELATION, EX, HEIGHT_OMEGA, INDEX_ZERO, PI, Abstraction, And, BoundVarRef,
    FoName, FoQuant, Formula, Index, IndexVar, Instance, Literal, Or, RelConst, SecondVar,
    Sequent, SoQuant, StratificationScheme, apply_instance, big_grade, children, free_fo_names,
    is_first_order, is_pi, is_sigma, match_separation, negate, open_quantifier, strat_level,
    stratify, subst_fo, subst_pred,
)
from src.prooftheory.ordinal_notation import (
    I, ZERO, OrdTerm, Ordering, Psi, compare, in_hull, omega_pow, omega_tower, psi, succ,
)
from src.prooftheory.proof_tree import (
    ALL1, ALL2, AND, AX, BI, BI1, BI2, CRIT, CUT, D1, D2, EX1, EX2, EX_RED, LK, OR,
    S1, S2, SBL, SBLP, SEP, SUB, TH, WEAK, NameSupply, Preproof, ProofNode,
    Rule, StackAssignment, axiom, erase_proof, expected_minor, ground_variable, iter_nodes,
    node_at, rename_eigenvariables, replace_at, stack_assignment,
)

_logger = logging.getLogger(__name__)

LkDerivation = Preproof


# ============================================================================ #
#                             DERIVATION BUILDERS                              #
# ============================================================================ #

def identity_proof(a: Formula, context: Sequent, supply: NameSupply) -> ProofNode:
    """
    Input:
        a (Formula): any L-formula
        context (Sequent): side formulas carried through every sequent
        supply (NameSupply): source of fresh eigenvariables
    Output:
        ProofNode: a cut-free SBL derivation of context, a, ¬a
    Explanation:
        Induction on a. Literals are axioms; a conjunction is split by (∧)
        after one (∨) per side; universal quantifiers are opened with a
        fresh eigenvariable and matched by the dual existential rule.
        Disjunctions and existentials reuse the case of their negation.
    """
    na = negate(a)
    lower = frozenset(context) | {a, na}
    if isinstance(a, Literal):
        return axiom(lower)
    if isinstance(a, Or) or (isinstance(a, (FoQuant, SoQuant)) and a.kind == EX):
        return identity_proof(na, context, supply)
    if isinstance(a, And):
        premises = []
        for part in (a.left, a.right):
            inner = identity_proof(part, context, supply)
            premises.append(ProofNode(frozenset(context) | {na, part},
                                      Rule(OR, main=na, minor=negate(part)), (inner,)))
        return ProofNode(lower, Rule(AND, main=a), tuple(premises))
    if isinstance(a, FoQuant):
        e = supply.fresh(a.var)
        opened = subst_fo(a.body, a.var, FoName(e))
        inner = identity_proof(opened, context, supply)
        dual = ProofNode(frozenset(context) | {na, opened},
                         Rule(EX1, main=na, minor=negate(opened), term=FoName(e)), (inner,))
        return ProofNode(lower, Rule(ALL1, main=a, minor=opened, eigen=e), (dual,))
    u = supply.fresh(a.var)
    opened = open_quantifier(a, SecondVar(u))
    inner = identity_proof(opened, context, supply)
    dual = ProofNode(frozenset(context) | {na, opened},
                     Rule(EX2, main=na, minor=negate(opened), instance=SecondVar(u)), (inner,))
    return ProofNode(lower, Rule(ALL2, main=a, minor=opened, eigen=u), (dual,))


def disjunction_proof(disj: Or, context: Sequent, supply: NameSupply, system: str = SBL) -> ProofNode:
    """context, p ∨ ¬p from context, p, ¬p by two (∨); the top is an axiom in SBL′."""
    p, q = disj.left, disj.right
    if system == SBLP:
        top = axiom(frozenset(context) | {p, q})
    else:
        top = identity_proof(q, context, supply)
    first = ProofNode(frozenset(context) | {p, disj}, Rule(OR, main=disj, minor=q), (top,))
    return ProofNode(frozenset(context) | {disj}, Rule(OR, main=disj, minor=p), (first,))


def excluded_middle_proof(f: FoQuant, context: Sequent, supply: NameSupply, system: str = SBL) -> ProofNode:
    """context, ∀x(¬A(x) ∨ A(x)), i.e. A ⊂ A, closed by (∀₁) over disjunction_proof."""
    u = supply.fresh(f.var)
    disj = subst_fo(f.body, f.var, FoName(u))
    inner = disjunction_proof(disj, context, supply, system)
    return ProofNode(frozenset(context) | {f}, Rule(ALL1, main=f, minor=disj, eigen=u), (inner,))


# ============================================================================ #
#                               PRE-TRANSFORMS                                 #
# ============================================================================ #

def _mentions(g: Formula, var: str) -> bool:
    if isinstance(g, Literal):
        return g.pred == BoundVarRef(var)
    if isinstance(g, SoQuant) and g.var == var:
        return False
    return any(_mentions(c, var) for c in children(g))


def coincidence_formula(a: Abstraction, supply: NameSupply) -> SoQuant:
    """∃X∀y((¬Xy ∨ A(y)) ∧ (¬A(y) ∨ Xy)): some set coincides with A."""
    x = supply.fresh("X")
    y = supply.fresh("y")
    while y in free_fo_names(a):
        y = supply.fresh("y")
    yt = FoName(y)
    xv = BoundVarRef(x)
    body = And(Or(Literal(False, xv, yt), apply_instance(a, yt, True)),
               Or(apply_instance(a, yt, False), Literal(True, xv, yt)))
    return SoQuant(EX, x, None, FoQuant(ALL, y, body))


def _coincidence_proof(c: SoQuant, a: Abstraction, supply: NameSupply) -> ProofNode:
    """⊢ C by (BI)₁ with instance A: both conjuncts become ¬A(y) ∨ A(y)."""
    minor = open_quantifier(c, a)
    u = supply.fresh(minor.var)
    conj = subst_fo(minor.body, minor.var, FoName(u))
    sides = tuple(disjunction_proof(part, frozenset(), supply) for part in (conj.left, conj.right))
    both = ProofNode(frozenset([conj]), Rule(AND, main=conj), sides)
    opened = ProofNode(frozenset([minor]), Rule(ALL1, main=minor, minor=conj, eigen=u), (both,))
    return ProofNode(frozenset([c]), Rule(BI1, main=c, minor=minor, instance=a), (opened,))


def _transfer_proof(g: Formula, var: str, a: Abstraction, u: SecondVar, not_e: Formula,
                    supply: NameSupply) -> ProofNode:
    """¬g[A/X], g[U/X], ¬E(U): if U differs nowhere from A, g(A) gives g(U)."""
    ga, gu = subst_pred(g, a, var), subst_pred(g, u, var)
    nga = negate(ga)
    lower = frozenset([nga, gu, not_e])
    if not _mentions(g, var):
        return identity_proof(ga, frozenset([not_e]), supply)
    if isinstance(g, Literal):
        t = g.arg
        disj = subst_fo(not_e.body, not_e.var, t)
        # disj = (Ut ∧ ¬A(t)) ∨ (A(t) ∧ ¬Ut)
        conj = disj.right if g.positive else disj.left
        at = apply_instance(a, t, True)
        pair_ctx = frozenset([nga, gu])
        sides = []
        u_atoms = (Literal(True, u, t), Literal(False, u, t))
        for part in (conj.left, conj.right):
            if part in u_atoms:
                sides.append(axiom(pair_ctx | {part}))
            else:
                sides.append(identity_proof(at, frozenset([gu]), supply))
        split = ProofNode(pair_ctx | {conj}, Rule(AND, main=conj), tuple(sides))
        pick = ProofNode(pair_ctx | {disj}, Rule(OR, main=disj, minor=conj), (split,))
        return ProofNode(lower, Rule(EX1, main=not_e, minor=disj, term=t), (pick,))
    if isinstance(g, (And, Or)):
        # the conjunction side is whichever of ¬g(A), g(U) is an And
        conj_side, disj_side = (gu, nga) if isinstance(g, And) else (nga, gu)
        premises = []
        for k, part in enumerate((g.left, g.right)):
            inner = _transfer_proof(part, var, a, u, not_e, supply)
            minor = disj_side.left if k == 0 else disj_side.right
            kept = conj_side.left if k == 0 else conj_side.right
            premises.append(ProofNode(frozenset([kept, disj_side, not_e]),
                                      Rule(OR, main=disj_side, minor=minor), (inner,)))
        return ProofNode(lower, Rule(AND, main=conj_side), tuple(premises))
    if isinstance(g, FoQuant):
        e = supply.fresh(g.var)
        inner_g = subst_fo(g.body, g.var, FoName(e))
        inner = _transfer_proof(inner_g, var, a, u, not_e, supply)
        univ, exist = (gu, nga) if g.kind == ALL else (nga, gu)
        univ_minor = subst_fo(univ.body, univ.var, FoName(e))
        ex_minor = subst_fo(exist.body, exist.var, FoName(e))
        dual = ProofNode(frozenset([univ_minor, exist, not_e]),
                         Rule(EX1, main=exist, minor=ex_minor, term=FoName(e)), (inner,))
        return ProofNode(lower, Rule(ALL1, main=univ, minor=univ_minor, eigen=e), (dual,))
    w = supply.fresh(g.var)
    inner_g = subst_pred(g.body, SecondVar(w), g.var)
    inner = _transfer_proof(inner_g, var, a, u, not_e, supply)
    univ, exist = (gu, nga) if g.kind == ALL else (nga, gu)
    univ_minor = open_quantifier(univ, SecondVar(w))
    ex_minor = open_quantifier(exist, SecondVar(w))
    dual = ProofNode(frozenset([univ_minor, exist, not_e]),
                     Rule(EX2, main=exist, minor=ex_minor, instance=SecondVar(w)), (inner,))
    return ProofNode(lower, Rule(ALL2, main=univ, minor=univ_minor, eigen=w), (dual,))


def eliminate_bi2(node: ProofNode, supply: NameSupply) -> ProofNode:
    """
    Replace a (BI)₂ concluding node by (BI)₁ on a coincidence formula and two cuts.

    Explanation:
        With C = ∃X(X coincides with A), the premise Γ, F(A) and a transfer
        derivation of ¬F(A), F(U), ¬E(U) give Γ, F(U), ¬E(U) by a cut; then
        (∃₂) with instance U, (∀₂) on ¬C with eigenvariable U, and a cut
        against ⊢ C. A (BI)₂ whose main formula is already in Π¹₂∩Σ¹₂ is
        simply a (BI)₁.
    """
    rule = node.rule
    main = rule.main
    if is_pi(main) and is_sigma(main):
        return replace(node, rule=replace(rule, tag=BI1))
    if not isinstance(rule.instance, Abstraction):
        return replace(node, rule=replace(rule, tag=EX2))
    a = rule.instance
    premise = node.children[0]
    fa = rule.minor
    rest = premise.sequent - {fa}
    c = coincidence_formula(a, supply)
    not_c = negate(c)
    u = supply.fresh(main.var)
    not_e = open_quantifier(not_c, SecondVar(u))
    fu = open_quantifier(main, SecondVar(u))
    transfer = _transfer_proof(main.body, main.var, a, SecondVar(u), not_e, supply)
    first = ProofNode(rest | {fu, not_e}, Rule(CUT, cut=fa), (transfer, premise))
    witness = ProofNode(rest | {main, not_e}, Rule(EX2, main=main, minor=fu, instance=SecondVar(u)), (first,))
    general = ProofNode(rest | {main, not_c}, Rule(ALL2, main=not_c, minor=not_e, eigen=u), (witness,))
    closed = ProofNode(rest | {main}, Rule(CUT, cut=c), (general, _coincidence_proof(c, a, supply)))
    if closed.sequent == node.sequent:
        return closed
    return ProofNode(node.sequent, Rule(TH), (closed,))


def separation_to_bi(node: ProofNode, supply: NameSupply) -> ProofNode:
    """A (sep) with a Π¹₂ main formula ∃X(A⊂X⊂B) becomes (BI)₁ with instance A."""
    rule = node.rule
    main = rule.main
    a, _ = match_separation(main)
    opened = open_quantifier(main, a)
    ctx = node.sequent
    premise = node.children[0]
    if premise.sequent != ctx | {opened.right}:
        premise = ProofNode(ctx | {opened.right}, Rule(TH), (premise,))
    reflexive = excluded_middle_proof(opened.left, ctx, supply)
    conj = ProofNode(ctx | {opened}, Rule(AND, main=opened), (reflexive, premise))
    return ProofNode(ctx, Rule(BI1, main=main, minor=opened, instance=a), (conj,))


def _rewrite_bottom_up(root: ProofNode, tag: str, fn) -> ProofNode:
    paths = sorted((p for p, n in iter_nodes(root) if n.rule.tag == tag), key=len, reverse=True)
    for path in paths:
        root = replace_at(root, path, fn(node_at(root, path)))
    return root


def normalize_rules(proof: Preproof, supply: NameSupply) -> Preproof:
    """Remove (BI)₂ and the (sep) rules with a Π¹₂ main formula."""
    root = _rewrite_bottom_up(proof.root, BI2, lambda n: eliminate_bi2(n, supply))
    root = _rewrite_bottom_up(
        root, SEP, lambda n: separation_to_bi(n, supply) if is_pi(n.rule.main) else n)
    return Preproof(root, proof.system)


def purify(proof: Preproof, supply: Optional[NameSupply] = None) -> Preproof:
    """
    Establish the pure variable condition.

    Every eigenvariable is renamed apart (uppermost rules first), and a free
    second-order variable that disappears at a rule other than its own
    eigenvariable rule is replaced by the relation constant R above it.
    """
    supply = supply or NameSupply.for_proof(proof.root)
    root = rename_eigenvariables(proof.root, supply)

    paths = [p for p, _ in iter_nodes(root)]
    for path in paths:
        node = node_at(root, path)
        lower = sequent_so_names(node.sequent)
        vanished = set()
        for child in node.children:
            vanished |= sequent_so_names(child.sequent) - lower - {node.rule.eigen}
        if not vanished:
            continue
        for name in sorted(vanished):
            var = SecondVar(name)
            grounded = ground_variable(node, var, DEFAULT_RELATION)
            node = ProofNode(node.sequent, grounded.rule, grounded.children)
        _logger.debug("grounded %s at %s", ", ".join(sorted(vanished)), path)
        root = replace_at(root, path, node)
    return Preproof(root, proof.system)


# ============================================================================ #
#                                 TRANSLATION                                  #
# ============================================================================ #

def _instance_with_index(inst: Instance, env: Dict[str, Index], scheme: StratificationScheme) -> Instance:
    if isinstance(inst, RelConst):
        return inst
    if isinstance(inst, SecondVar):
        return SecondVar(inst.name, env.get(inst.name, INDEX_ZERO))
    return Abstraction(inst.var, stratify(inst.body, scheme))


def _instance_index(inst: Instance) -> Index:
    return INDEX_ZERO if isinstance(inst, RelConst) else inst.index


@dataclass
class _Translator:
    """Top-down translation of an SBL derivation (after the pre-transforms) into SBL′."""
    retagged: Dict[str, int] = field(default_factory=dict)

    def rule(self, rule: Rule, image: Dict[Formula, Formula], env: Dict[str, Index]):
        tag = rule.tag
        scheme = StratificationScheme(variable_indices=env)
        m = image[rule.main] if rule.main is not None else None
        if tag in (AX, TH):
            return Rule(tag), {}, env
        if tag == CUT:
            c = stratify(rule.cut, scheme)
            return Rule(CUT, cut=c), {0: (negate(rule.cut), negate(c)), 1: (rule.cut, c)}, env
        if tag == AND:
            return Rule(AND, main=m), {0: (rule.main.left, m.left), 1: (rule.main.right, m.right)}, env
        if tag == OR:
            minor = m.left if rule.minor == rule.main.left else m.right
            return Rule(OR, main=m, minor=minor), {0: (rule.minor, minor)}, env
        if tag == ALL1:
            minor = subst_fo(m.body, m.var, FoName(rule.eigen))
            return Rule(ALL1, main=m, minor=minor, eigen=rule.eigen), {0: (rule.minor, minor)}, env
        if tag == EX1:
            minor = subst_fo(m.body, m.var, rule.term)
            return Rule(EX1, main=m, minor=minor, term=rule.term), {0: (rule.minor, minor)}, env
        if tag == EX2:
            inst = _instance_with_index(rule.instance, env, scheme)
            minor = open_quantifier(m, inst)
            if m.index == I:
                new = Rule(CRIT, main=m, minor=minor, instance=inst, eta=I, index=_instance_index(inst))
            elif big_grade(m) != 0:
                new = Rule(D2, main=m, minor=minor, instance=inst)
            else:
                new = Rule(BI, main=m, minor=minor, instance=inst)
            return new, {0: (rule.minor, minor)}, env
        if tag == ALL2:
            u = rule.eigen
            if m.index == I:
                new_tag, s, eta = S2, IndexVar(u, I), I
            elif big_grade(m) != 0:
                new_tag, s, eta = S1, strat_level(PI, m, eigen=u), None
            else:
                new_tag, s, eta = WEAK, strat_level(PI, m), None
            minor = open_quantifier(m, SecondVar(u, s))
            return (Rule(new_tag, main=m, minor=minor, eigen=u, index=s, eta=eta),
                    {0: (rule.minor, minor)}, {**env, u: s})
        if tag == BI1:
            inst = _instance_with_index(rule.instance, env, scheme)
            minor = open_quantifier(m, inst)
            return Rule(BI, main=m, minor=minor, instance=inst), {0: (rule.minor, minor)}, env
        if tag == SEP:
            minor = expected_minor(Rule(D1, main=m))
            return Rule(D1, main=m, minor=minor), {0: (rule.minor, minor)}, env
        raise EmbeddingError(f"no translation for ({tag})")

    def translate(self, node: ProofNode, image: Dict[Formula, Formula], env: Dict[str, Index]) -> ProofNode:
        new_rule, minors, child_env = self.rule(node.rule, image, env)
        if new_rule.tag != node.rule.tag:
            self.retagged[new_rule.tag] = self.retagged.get(new_rule.tag, 0) + 1
        scheme = StratificationScheme(variable_indices=child_env)
        kids = []
        for i, child in enumerate(node.children):
            child_image = {}
            for g in child.sequent:
                if i in minors and g == minors[i][0]:
                    child_image[g] = minors[i][1]
                elif g in image:
                    child_image[g] = image[g]
                else:
                    child_image[g] = stratify(g, scheme)
            kids.append(self.translate(child, child_image, child_env))
        return ProofNode(frozenset(image.values()), new_rule, tuple(kids))


# ============================================================================ #
#                          REDUCTIONS AND SUBSTITUTIONS                        #
# ============================================================================ #

def _insert_vacuous_reductions(root: ProofNode, limit: int) -> Tuple[ProofNode, int]:
    """Put a vacuous ∃^I-reduction wherever the height falls from ω to a finite value."""
    count = 0
    for _ in range(limit):
        hs = heights(Preproof(root))
        target = None
        for path, node in iter_nodes(root):
            if node.rule.tag == EX_RED:
                continue
            if hs[path] < HEIGHT_OMEGA and any(HEIGHT_OMEGA <= hs[path + (i,)]
                                               for i in range(len(node.children))):
                target = path
                break
        if target is None:
            return root, count
        node = node_at(root, target)
        root = replace_at(root, target, ProofNode(node.sequent, Rule(EX_RED, stack=ZERO), (node,)))
        count += 1
    raise EmbeddingError("inserting vacuous reductions did not converge")


def _is_vacuous_sub(node: ProofNode) -> bool:
    rule = node.rule
    return (rule.tag == SUB and rule.index == INDEX_ZERO and node.children[0].sequent == node.sequent
            and rule.eigen not in sequent_so_names(node.sequent))


def _insert_vacuous_substitutions(root: ProofNode, supply: NameSupply, limit: int) -> Tuple[ProofNode, int]:
    """Put a vacuous (sub)⁰ below every bar sequent."""
    count = 0
    for _ in range(limit):
        st = structure(Preproof(root))
        pending = [b for b in sorted(st.bar_sequents) if not _is_vacuous_sub(node_at(root, b))]
        if not pending:
            return root, count
        bar = pending[0]
        node = node_at(root, bar)
        sub = Rule(SUB, eigen=supply.fresh("V"), index=INDEX_ZERO, instance=RelConst(DEFAULT_RELATION))
        root = replace_at(root, bar, ProofNode(node.sequent, sub, (node,)))
        count += 1
    raise EmbeddingError("inserting vacuous substitutions did not converge")


def reduction_type(upper: ProofNode) -> OrdTerm:
    """ψ_I(ω^α) for the ordinal α of the upper sequent of a vacuous ∃^I-reduction."""
    alpha = assign_ordinals(Preproof(upper), base=HEIGHT_OMEGA).proof_ordinal
    return psi(I, omega_pow(alpha))


def _stack_ok(node: ProofNode, gamma: OrdTerm) -> bool:
    candidate = replace(node, rule=replace(node.rule, stack=gamma))
    try:
        ann: OrdinalAnnotation = assign_ordinals(Preproof(candidate))
    except (CheckError, InvalidTerm):
        return False
    bound = Psi(level_regular(node.rule.index), gamma)
    alpha = ann.rule[()]
    if compare(ann.sequent[(0,)], I) != Ordering.LT:
        return False
    members = indices_above(Preproof(candidate), (), ann) | {gamma, alpha}
    return all(in_hull(s, gamma, bound) for s in members)


def substitution_stack(node: ProofNode, max_tower: int = 8) -> OrdTerm:
    """The least ω_n(I+1), n ≤ max_tower, that makes the (sub) at node satisfy the hull conditions."""
    for n in range(max_tower + 1):
        gamma = omega_tower(n, succ(I))
        if _stack_ok(node, gamma):
            return gamma
    raise EmbeddingError(f"no stack ω_n(I+1) with n ≤ {max_tower} fits the substitution")


def _assign_types_and_stacks(root: ProofNode, max_tower: int) -> ProofNode:
    for path, node in list(iter_nodes(root)):
        if node.rule.tag == EX_RED and node.rule.eta is None:
            node = node_at(root, path)
            eta = reduction_type(node.children[0])
            root = replace_at(root, path, replace(node, rule=replace(node.rule, eta=eta)))
    sub_paths = sorted((p for p, n in iter_nodes(root) if n.rule.tag == SUB and n.rule.stack is None),
                       key=len, reverse=True)
    for path in sub_paths:
        node = node_at(root, path)
        gamma = substitution_stack(node, max_tower)
        root = replace_at(root, path, replace(node, rule=replace(node.rule, stack=gamma)))
    return root


# ============================================================================ #
#                                  ENTRY POINTS                                #
# ============================================================================ #

def embed_sbl(proof: Preproof, config: EngineConfig = DEFAULT_CONFIG) -> Tuple[Preproof, StackAssignment]:
    """
    Input:
        proof (Preproof): an SBL derivation of a first-order end-sequent
        config (EngineConfig): limits for the insertion loops and the stack search
    Output:
        (P0, sck0): an SBL′ proof with its stack assignment, o(P0) < Ω_1
    Explanation:
        The derivation is normalised ((BI)₂ and Π¹₂ separations removed),
        purified, and translated top-down with the end-sequent at index 0.
        Vacuous ∃^I-reductions are placed where the height falls below ω
        and vacuous (sub)⁰ below each bar sequent, then types and stacks
        are chosen and the result is checked.
    """
    if proof.system != SBL:
        raise EmbeddingError(f"expected an SBL derivation, got {proof.system}")
    report = check_sbl(proof)
    if not report.ok:
        raise EmbeddingError(f"not an SBL derivation: {report.diagnostics[0]}")
    for a in proof.end_sequent:
        if not is_first_order(a):
            raise EmbeddingError(f"end-sequent formula {a} is not first-order")

    supply = NameSupply.for_proof(proof.root)
    normal = normalize_rules(proof, supply)
    pure = purify(normal, supply)

    translator = _Translator()
    scheme = StratificationScheme(variable_indices={})
    image = {a: stratify(a, scheme) for a in pure.root.sequent}
    root = translator.translate(pure.root, image, {})

    root, reds = _insert_vacuous_reductions(root, config.insertion_limit)
    root, subs = _insert_vacuous_substitutions(root, supply, config.insertion_limit)
    root = _assign_types_and_stacks(root, config.stack_tower_limit)
    p0 = Preproof(root, SBLP)

    report = check_proof(p0)
    if not report.ok:
        raise EmbeddingError(f"embedded preproof is not a proof: {report.diagnostics[0]}")
    _logger.info("embedded derivation: %d vacuous reductions, %d substitutions, rules %s",
                 reds, subs, translator.retagged or "{}")
    return p0, stack_assignment(p0)


def extract_lk(proof: Preproof) -> LkDerivation:
    """A cut-free SBL′ proof, indices erased, as a first-order LK derivation."""
    st = structure(proof)
    if st.bar_sequents:
        where = "/".join(str(i) for i in sorted(st.bar_sequents)[0]) or "root"
        raise EmbeddingError(f"proof is not cut-free: bar sequent at {where}")
    lk = erase_proof(proof, LK)
    report = check_lk(lk)
    if not report.ok:
        raise EmbeddingError(f"extracted derivation fails the LK checker: {report.diagnostics[0]}")
    return lk
