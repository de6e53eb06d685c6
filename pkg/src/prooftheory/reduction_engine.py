"""
The rewriting procedure that drives a proof with stacks towards cut-free
form: find_redex locates the highest-priority configuration, reduce_step
rewrites it and certifies the ordinal descent, and normalize iterates until
no bar sequent is left or the fuel runs out.

Case tags:
    C1          an explicit rule in an end-piece moves below the bar
    C2          a bar sequent containing A, ¬A becomes an axiom
    C3          a cut in an end-piece whose formula recurs below is thinned away
    C4 .. C8    a boundary (d1)/(d2)/(c)/(s1)/(s2) changed by a reduction is exchanged
    C9 .. C14   a suitable triangle is reduced
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.prooftheory.calculus import (
    ProofStructure, assign_ordinals, check_proof, heights, level_regular, proof_ordinal, structure,
)
from src.prooftheory.config import DEFAULT_CONFIG, EngineConfig
from src.prooftheory.embedding_bridge import excluded_middle_proof
from src.prooftheory.errors import (
    CertificateFailure, CheckError, InvalidTerm, NoRedex, ParseError, SideConditionFailure,
)
from src.prooftheory.essential_order import (
    EllCertificate, bounded_refute, check_certificate, derive_ell,
)
from src.prooftheory.formula_language import (
    ALL, EX, HEIGHT_OMEGA, HEIGHT_ZERO, PI, Formula, Height, Literal, SecondVar, big_grade,
    fix_atom, index_subst, index_var, match_separation, negate, od, open_quantifier, relabel,
    strat_level, subst_fo, subst_free_var,
)
from src.prooftheory.ordinal_notation import (
    I, ONE, ZERO, OrdTerm, Ordering, compare, natural_sum, omega_pow, psi,
)
from src.prooftheory.proof_tree import (
    ALL1, ALL_RED, AND, BI, CRIT, CUT, D1, D2, EX1, EX_RED, OR, RED_TAGS, S1, S2, SBLP, SUB, TH,
    WEAK, NameSupply, Path, Preproof, ProofNode, Rule, StackAssignment, apply_stacks, axiom,
    descend, instantiate_first_order, is_above, iter_nodes, map_formulas, node_at,
    premise_minor, rename_eigenvariables, replace_at, stack_assignment, sub_target,
    substitute_index, used_names,
)
from src.prooftheory.sexpr_codec import (
    expect_atom, expect_list, format_sexpr, ordinal_from_sexpr, parse_all,
)

_logger = logging.getLogger(__name__)

CASES = tuple(f"C{n}" for n in range(1, 15))

_MOVABLE_TAGS = frozenset([AND, OR, ALL1, EX1])
_EXCHANGE_CASES = {D1: "C4", D2: "C5", CRIT: "C6", S1: "C7", S2: "C8"}


# ============================================================================ #
#                                    TYPES                                     #
# ============================================================================ #

@dataclass
class RedexDescriptor:
    """Where a reduction applies: the case, its bar sequent and the participating nodes."""
    case: str
    bar: Optional[Path]
    paths: Dict[str, Path] = field(default_factory=dict)
    formulas: Dict[str, Formula] = field(default_factory=dict)


def format_path(path: Path) -> str:
    return "/".join(str(i) for i in path) or "root"


def parse_path(text: str) -> Path:
    if text == "root":
        return ()
    try:
        return tuple(int(part) for part in text.split("/"))
    except ValueError as e:
        raise ParseError(f"bad node path {text!r}") from e


def _group(head: str, items: Iterable) -> list:
    return [head] + list(items)


@dataclass(frozen=True)
class StepTrace:
    """One executed reduction: o_after is strictly below o_before."""
    case: str
    paths: Tuple[Tuple[str, Path], ...]
    o_before: OrdTerm
    o_after: OrdTerm
    certificates: Tuple[EllCertificate, ...] = ()
    fresh_names: Tuple[str, ...] = ()

    def to_sexpr(self) -> str:
        return format_sexpr([
            "step", self.case,
            _group("paths", ([name, format_path(p)] for name, p in self.paths)),
            ["before", self.o_before],
            ["after", self.o_after],
            _group("certs", (c.digest() for c in self.certificates)),
            _group("fresh", self.fresh_names),
        ])

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "paths": {name: format_path(p) for name, p in self.paths},
            "o_before": str(self.o_before),
            "o_after": str(self.o_after),
            "certificates": [c.digest() for c in self.certificates],
            "fresh_names": list(self.fresh_names),
        }


def format_trace(trace: Iterable[StepTrace]) -> str:
    return "\n".join(step.to_sexpr() for step in trace) + "\n"


def parse_trace(text: str) -> List[dict]:
    """Read a trace file back into one dict per step (certificates as digests)."""
    steps = []
    for item in parse_all(text):
        value = expect_list(item, "step", 2)
        record = {"case": expect_atom(value[1]), "paths": {}, "certificates": [], "fresh_names": []}
        for group in value[2:]:
            group = expect_list(group)
            head = expect_atom(group[0])
            if head == "paths":
                for entry in group[1:]:
                    name, where = expect_list(entry, min_len=2)
                    record["paths"][expect_atom(name)] = parse_path(expect_atom(where))
            elif head == "before":
                record["o_before"] = ordinal_from_sexpr(group[1])
            elif head == "after":
                record["o_after"] = ordinal_from_sexpr(group[1])
            elif head == "certs":
                record["certificates"] = [expect_atom(d) for d in group[1:]]
            elif head == "fresh":
                record["fresh_names"] = [expect_atom(n) for n in group[1:]]
            else:
                raise ParseError(f"unknown trace field {head!r}")
        if record["case"] not in CASES:
            raise ParseError(f"unknown case tag {record['case']!r}")
        steps.append(record)
    return steps


@dataclass
class NormalizationOutcome:
    proof: Preproof
    trace: List[StepTrace]

    @property
    def cut_free(self) -> bool:
        raise NotImplementedError

    @property
    def steps(self) -> int:
        return len(self.trace)

    @property
    def stacks(self) -> StackAssignment:
        return stack_assignment(self.proof)

    def ordinals(self) -> List[OrdTerm]:
        if not self.trace:
            return []
        return [self.trace[0].o_before] + [t.o_after for t in self.trace]


class CutFree(NormalizationOutcome):
    @property
    def cut_free(self) -> bool:
        return True


class FuelExhausted(NormalizationOutcome):
    """The state reached when the step bound ran out; the proof still has bar sequents."""

    @property
    def cut_free(self) -> bool:
        return False


# ============================================================================ #
#                               TREE SURGERY                                   #
# ============================================================================ #

def _thin_to(premise: ProofNode, target: FrozenSet[Formula]) -> ProofNode:
    if premise.sequent == target:
        return premise
    return ProofNode(frozenset(target), Rule(TH), (premise,))


def _open_rule(node: ProofNode, i: int, formula: Formula) -> ProofNode:
    """Premise i of node, thinned up to the node's conclusion plus formula."""
    return _thin_to(node.children[i], node.sequent | {formula})


def _thread(root: ProofNode, upper: Path, new_node: ProofNode, lower: Path,
            added: Iterable[Formula]) -> Tuple[ProofNode, FrozenSet[Formula]]:
    """
    Input:
        root (ProofNode): the proof before the rewrite
        upper (Path): where new_node replaces the old subtree
        new_node (ProofNode): the rewritten subtree, carrying `added` on top of the old sequent
        lower (Path): a prefix of upper where the rebuilt path ends
        added (Iterable[Formula]): the formulas new_node carries beyond the old sequent
    Output:
        (ProofNode, FrozenSet[Formula]): the rebuilt node for `lower` and the
        images of the carried formulas in its sequent
    Explanation:
        Every sequent strictly between gets the carried formulas. A (sub)
        substitutes into them, a quantifier reduction relabels the ones it
        changes (they join its part), and the other premise of an (∧) is
        thinned so the context discipline still holds.
    """
    node = new_node
    carried = frozenset(added)
    for k in range(len(upper) - 1, len(lower) - 1, -1):
        old = node_at(root, upper[:k])
        i = upper[k]
        rule = old.rule
        if rule.tag == SUB:
            carried = frozenset(subst_free_var(f, sub_target(rule), rule.instance) for f in carried)
        elif rule.tag in RED_TAGS:
            kind = rule.quantifier_kind
            before = old.children[i].sequent
            moved = frozenset(f for f in carried
                              if f in rule.part or (f not in before and relabel(f, rule.eta, kind) != f))
            rule = replace(rule, part=rule.part | moved)
            carried = frozenset(relabel(f, rule.eta, kind) if f in moved else f for f in carried)
        kids = list(old.children)
        kids[i] = node
        if rule.tag == AND:
            j = 1 - i
            kids[j] = _thin_to(kids[j], kids[j].sequent | (carried - {rule.main}))
        node = ProofNode(old.sequent | carried, rule, tuple(kids))
    return node, carried


def _only(images: FrozenSet[Formula]) -> Formula:
    if len(images) != 1:
        raise CheckError(f"expected a single image, found {len(images)}", condition="descent")
    return next(iter(images))


def _descendant_at(root: ProofNode, start: Path, f: Formula, target: Path) -> Optional[Formula]:
    """The descendant at target of the occurrence f at start, following the occurrence itself."""
    for k in range(len(start) - 1, len(target) - 1, -1):
        node = node_at(root, start[:k])
        images = descend(node.rule, node.sequent, start[k], f)
        if not images:
            return None
        f = images[0]
    return f


def _first_below(root: ProofNode, path: Path, pred: Callable[[Path, ProofNode], bool]) -> Optional[Path]:
    for k in range(len(path) - 1, -1, -1):
        q = path[:k]
        if pred(q, node_at(root, q)):
            return q
    return None


def _vacuous_red_below(root: ProofNode, hs: Dict[Path, Height], path: Path) -> Optional[Path]:
    """The rule where the height first drops below ω under path, if it is a vacuous ∃-reduction."""
    q = _first_below(root, path, lambda p, _: hs[p] < HEIGHT_OMEGA)
    if q is None:
        return None
    node = node_at(root, q)
    if node.rule.tag == EX_RED and node.children[0].sequent == node.sequent:
        return q
    return None


def _changing_red(root: ProofNode, start: Path, f: Formula, stop: Path) -> Optional[Path]:
    """The uppermost reduction strictly between start and stop that relabels a descendant of f."""
    for k in range(len(start) - 1, len(stop), -1):
        q = start[:k]
        node = node_at(root, q)
        rule = node.rule
        if rule.tag in RED_TAGS and f in rule.part and relabel(f, rule.eta, rule.quantifier_kind) != f:
            return q
        images = descend(rule, node.sequent, start[k], f)
        if not images:
            return None
        f = images[0]
    return None


def _restack(node: ProofNode, rel: Path, gamma: OrdTerm) -> ProofNode:
    target = node_at(node, rel)
    return replace_at(node, rel, replace(target, rule=replace(target.rule, stack=gamma)))


def _measure(node: ProofNode, base: Height) -> OrdTerm:
    return assign_ordinals(Preproof(node, SBLP), base=base).proof_ordinal


def _uppermost_leftmost(paths: Iterable[Path]) -> Path:
    return min(paths, key=lambda p: (-len(p), p))


# ============================================================================ #
#                                REDEX SEARCH                                  #
# ============================================================================ #

def _find_explicit(root, nodes, hs, st: ProofStructure) -> Optional[RedexDescriptor]:
    candidates = []
    for bar, piece in st.end_pieces.items():
        for p in piece:
            rule = nodes[p].rule
            if p in st.explicit_rules and rule.tag in _MOVABLE_TAGS and is_above(p, bar) \
                    and rule.main in nodes[bar].sequent:
                candidates.append((bar, p))
    if not candidates:
        return None
    bar, j = min(candidates, key=lambda c: (len(c[1]), c[1]))
    return RedexDescriptor("C1", bar, {"bar": bar, "rule": j}, {"main": nodes[j].rule.main})


def _axiom_pair(sequent) -> Optional[Formula]:
    for f in sorted(sequent, key=str):
        if negate(f) in sequent and (isinstance(f, Literal) or big_grade(f) == 0):
            return f
    return None


def _find_axiom_pair(root, nodes, hs, st: ProofStructure) -> Optional[RedexDescriptor]:
    bars = [b for b in st.bar_sequents if _axiom_pair(nodes[b].sequent) is not None]
    if not bars:
        return None
    bar = _uppermost_leftmost(bars)
    return RedexDescriptor("C2", bar, {"bar": bar}, {"pair": _axiom_pair(nodes[bar].sequent)})


def _find_piece_cut(root, nodes, hs, st: ProofStructure) -> Optional[RedexDescriptor]:
    found = {}
    for bar, piece in st.end_pieces.items():
        for p in piece:
            node = nodes[p]
            if node.rule.tag == CUT and (node.rule.cut in node.sequent or negate(node.rule.cut) in node.sequent):
                found[p] = bar
    if not found:
        return None
    cut = _uppermost_leftmost(found)
    return RedexDescriptor("C3", found[cut], {"bar": found[cut], "cut": cut}, {"cut": nodes[cut].rule.cut})


def _find_exchange(root, nodes, hs, st: ProofStructure) -> Optional[RedexDescriptor]:
    found = {}
    for j in st.boundary_rules:
        rule = nodes[j].rule
        case = _EXCHANGE_CASES.get(rule.tag)
        if case is None:
            continue
        v = _vacuous_red_below(root, hs, j)
        if v is None:
            continue
        red = _changing_red(root, j, rule.main, v)
        if red is None or _descendant_at(root, j, rule.main, v) is None:
            continue
        found[j] = RedexDescriptor(case, st.end_piece_of(j), {"rule": j, "red": red, "vacuous": v},
                                   {"main": rule.main})
    if not found:
        return None
    return found[_uppermost_leftmost(found)]


def _triangle_case(univ: Rule, ex: Rule) -> Optional[str]:
    pair = (univ.tag, ex.tag)
    if univ.tag == S1 and ex.tag in (D1, D2):
        return "C9"
    if pair == (WEAK, BI):
        return "C10"
    if pair == (S2, CRIT):
        return "C11" if univ.main.index == I else "C12"
    if pair == (AND, OR):
        return "C13"
    if pair == (ALL1, EX1):
        return "C14"
    return None


def _triangle_sites(case: str, root: ProofNode, nodes, hs, ju: Path, cut: Path) -> Optional[Dict[str, Path]]:
    if case == "C9":
        r3 = _first_below(root, cut, lambda _, n: n.rule.tag == EX_RED)
        r4 = _vacuous_red_below(root, hs, cut)
        if r3 is None or r4 is None or not is_above(r3, r4):
            return None
        return {"red": r3, "vacuous": r4}
    if case == "C10":
        s = od(nodes[ju].rule.index)
        r3 = _first_below(root, cut, lambda _, n: n.rule.tag == SUB
                          and compare(od(n.rule.index), s) != Ordering.GT)
        return None if r3 is None else {"sub": r3}
    limit = hs[cut + (0,)]
    phi = _first_below(root, cut + (0,), lambda p, _: hs[p] < limit)
    return {"split": cut if phi is None else phi}


def _find_triangle(root, nodes, hs, st: ProofStructure) -> Optional[RedexDescriptor]:
    found = {}
    for ju, je, cut in st.suitable_triangles:
        case = _triangle_case(nodes[ju].rule, nodes[je].rule)
        if case is None or cut in found:
            continue
        if case == "C13":
            m = nodes[je].rule.minor
            if negate(m) not in (nodes[ju].rule.main.left, nodes[ju].rule.main.right):
                continue
        sites = _triangle_sites(case, root, nodes, hs, ju, cut)
        if sites is None:
            continue
        paths = {"universal": ju, "existential": je, "cut": cut, **sites}
        found[cut] = RedexDescriptor(case, st.end_piece_of(cut), paths, {"cut": nodes[cut].rule.cut})
    if not found:
        return None
    return found[_uppermost_leftmost(found)]


_FINDERS = (_find_explicit, _find_axiom_pair, _find_piece_cut, _find_exchange, _find_triangle)


def find_redex(proof: Preproof, sck: Optional[StackAssignment] = None) -> RedexDescriptor:
    """
    Input:
        proof (Preproof): a proof that still has a bar sequent
        sck (StackAssignment, optional): stacks overriding the ones stored on the rules
    Output:
        RedexDescriptor: the highest-priority redex
    Explanation:
        C1 takes the lowest explicit rule of an end-piece; every other class
        takes its uppermost, then leftmost, instance. Classes are tried in
        the order C1, C2, C3, C4..C8, C9..C14.
    """
    if sck is not None:
        proof = apply_stacks(proof, sck)
    st = structure(proof)
    if not st.bar_sequents:
        raise NoRedex("the proof has no bar sequent")
    root = proof.root
    nodes = dict(iter_nodes(root))
    hs = heights(proof)
    for finder in _FINDERS:
        redex = finder(root, nodes, hs, st)
        if redex is not None:
            _logger.debug("redex %s at %s", redex.case,
                          ", ".join(f"{k}={format_path(p)}" for k, p in sorted(redex.paths.items())))
            return redex
    bars = ", ".join(format_path(b) for b in sorted(st.bar_sequents))
    raise NoRedex(f"bar sequents at {bars} but no reduction pattern matches")


# ============================================================================ #
#                                 REWRITERS                                    #
# ============================================================================ #

Rewrite = Tuple[ProofNode, OrdTerm]


def _move_explicit(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    root = proof.root
    bar, j = redex.paths["bar"], redex.paths["rule"]
    node = node_at(root, j)
    rule = node.rule
    lower = node_at(root, bar).sequent
    if rule.tag == AND:
        premises = []
        for i in range(2):
            minor = premise_minor(rule, i)
            piece, _ = _thread(root, j, _open_rule(node, i, minor), bar, [minor])
            premises.append(piece if i == 0 else rename_eigenvariables(piece, supply))
        return replace_at(root, bar, ProofNode(lower, rule, tuple(premises))), ZERO
    piece, carried = _thread(root, j, _open_rule(node, 0, rule.minor), bar, [rule.minor])
    moved = ProofNode(lower, replace(rule, minor=_only(carried)), (piece,))
    return replace_at(root, bar, moved), ZERO


def _close_bar(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    bar = redex.paths["bar"]
    return replace_at(proof.root, bar, axiom(node_at(proof.root, bar).sequent)), ZERO


def _drop_cut(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    path = redex.paths["cut"]
    node = node_at(proof.root, path)
    i = 0 if negate(node.rule.cut) in node.sequent else 1
    return replace_at(proof.root, path, _open_rule(node, i, premise_minor(node.rule, i))), ZERO


def _exchange(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    root = proof.root
    j, red, v = redex.paths["rule"], redex.paths["red"], redex.paths["vacuous"]
    node = node_at(root, j)
    rule = node.rule
    eta = node_at(root, red).rule.eta
    premise, minor = node.children[0], rule.minor
    if rule.tag in (S1, S2):
        target = index_var(rule.eigen, I)
        value = fix_atom(eta) if rule.tag == S1 else index_var(rule.eigen, eta)
        premise = substitute_index(premise, target, value)
        minor = index_subst(minor, value, target)
    opened = _thin_to(premise, node.sequent | {minor})
    threaded, carried = _thread(root, j, opened, v, [minor])
    g = _only(carried)
    main = _descendant_at(root, j, rule.main, v)
    vseq = node_at(root, v).sequent

    if rule.tag == D1:
        parts = match_separation(main)
        if parts is None:
            raise CheckError(f"{main} lost its separation shape", v, "C4")
        both = open_quantifier(main, parts[0])
        reflexive = excluded_middle_proof(both.left, vseq, supply, SBLP)
        split = ProofNode(vseq | {both}, Rule(AND, main=both), (reflexive, threaded))
        new = ProofNode(vseq, Rule(BI, main=main, minor=both, instance=parts[0]), (split,))
    elif rule.tag == D2:
        new = ProofNode(vseq, Rule(BI, main=main, minor=g, instance=rule.instance), (threaded,))
    elif rule.tag == CRIT:
        new = ProofNode(vseq, Rule(CRIT, main=main, minor=g, instance=rule.instance,
                                   index=rule.index, eta=main.index), (threaded,))
    elif rule.tag == S1:
        new = ProofNode(vseq, Rule(WEAK, main=main, minor=g, eigen=rule.eigen,
                                   index=strat_level(PI, main)), (threaded,))
    else:
        new = ProofNode(vseq, Rule(S2, main=main, minor=g, eigen=rule.eigen,
                                   index=index_var(rule.eigen, eta), eta=eta), (threaded,))
    return replace_at(root, v, new), eta


def _push_cut_below_reduction(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    """(s1) against (d): the cut moves below the ∃-reduction, guarded by two new reductions of type η."""
    root = proof.root
    ju, cut = redex.paths["universal"], redex.paths["cut"]
    r3, r4 = redex.paths["red"], redex.paths["vacuous"]
    cnode = node_at(root, cut)
    su = ju[len(cut)]
    fu, fe = premise_minor(cnode.rule, su), premise_minor(cnode.rule, 1 - su)
    pi = r3 + (0,)
    u_pi, cu = _thread(root, cut, _open_rule(cnode, su, fu), pi, [fu])
    e_pi, ce = _thread(root, cut, _open_rule(cnode, 1 - su, fe), pi, [fe])
    gu, ge = _only(cu), _only(ce)

    alpha3 = node_at(root, r3).rule.stack
    delta2 = _measure(e_pi, HEIGHT_OMEGA)
    eta = psi(I, natural_sum(alpha3, omega_pow(delta2)))
    ru, re_ = relabel(gu, eta, ALL), relabel(ge, eta, EX)
    u_red = ProofNode((u_pi.sequent - {gu}) | {ru}, Rule(ALL_RED, eta=eta, part=frozenset([gu])), (u_pi,))
    e_red = ProofNode((e_pi.sequent - {ge}) | {re_},
                      Rule(EX_RED, eta=eta, stack=alpha3, part=frozenset([ge])), (e_pi,))

    bumped = natural_sum(alpha3, omega_pow(delta2), ONE)
    rel = r3[len(r4):]
    u_low, cu = _thread(root, pi, u_red, r4, [ru])
    e_low, ce = _thread(root, pi, e_red, r4, [re_])
    u_low, e_low = _restack(u_low, rel, bumped), _restack(e_low, rel, bumped)
    g = _only(ce)
    if negate(g) not in cu:
        raise CheckError(f"the images of the cut formula no longer match at {format_path(r4)}", r4, "C9")
    new = ProofNode(node_at(root, r4).sequent, Rule(CUT, cut=g),
                    (u_low, rename_eigenvariables(e_low, supply)))
    return replace_at(root, r4, new), eta


def _introduce_substitution(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    """(w) against (BI): the (BI) becomes a cut against a new (sub)^s of the opened (w)."""
    root = proof.root
    ju, je, r3 = redex.paths["universal"], redex.paths["existential"], redex.paths["sub"]
    wnode, bnode = node_at(root, ju), node_at(root, je)
    s = wnode.rule.index
    pi = r3 + (0,)
    inner, carried = _thread(root, ju, _open_rule(wnode, 0, wnode.rule.minor), pi, [wnode.rule.minor])
    m = _only(carried)
    context = inner.sequent - {m}

    gamma = node_at(root, r3).rule.stack
    delta = _measure(inner, HEIGHT_ZERO)
    target = SecondVar(wnode.rule.eigen, s)
    image = frozenset(subst_free_var(f, target, bnode.rule.instance) for f in inner.sequent)
    new_sub = ProofNode(image, Rule(SUB, eigen=wnode.rule.eigen, index=s,
                                    instance=bnode.rule.instance, stack=gamma), (inner,))
    new_sub = rename_eigenvariables(new_sub, supply)

    premise = bnode.children[0]
    right = _thin_to(premise, premise.sequent | {bnode.rule.main})
    new_cut = ProofNode(bnode.sequent | context, Rule(CUT, cut=bnode.rule.minor), (new_sub, right))
    threaded, _ = _thread(root, je, new_cut, pi, context)
    root = replace_at(root, pi, threaded)
    root = replace_at(root, r3, _restack(node_at(root, r3), (), natural_sum(gamma, omega_pow(delta), ONE)))
    return root, psi(level_regular(s), natural_sum(gamma, omega_pow(delta)))


def _split_triangle(proof: Preproof, redex: RedexDescriptor, supply: NameSupply) -> Rewrite:
    """
    The shared template for (s2)/(c), (∧)/(∨) and (∀₁)/(∃₁): one copy with the
    universal rule removed, one with the existential rule removed, joined by a
    cut on the minor formula where the height first drops below the old cut.
    """
    root = proof.root
    ju, je, phi = redex.paths["universal"], redex.paths["existential"], redex.paths["split"]
    unode, enode = node_at(root, ju), node_at(root, je)
    urule, erule = unode.rule, enode.rule
    context = ZERO
    if urule.tag == S2:
        s, inst = erule.index, erule.instance
        target = SecondVar(urule.eigen, s)

        def instantiate(f: Formula) -> Formula:
            return subst_free_var(index_subst(f, s, urule.index), target, inst)

        premise = map_formulas(substitute_index(unode.children[0], urule.index, s),
                               lambda f: subst_free_var(f, target, inst))
        minor = instantiate(urule.minor)
        context = od(s)
    elif urule.tag == AND:
        i = 0 if urule.main.left == negate(erule.minor) else 1
        premise, minor = unode.children[i], premise_minor(urule, i)
    else:
        premise = instantiate_first_order(unode.children[0], urule.eigen, erule.term)
        minor = subst_fo(urule.minor, urule.eigen, erule.term)

    left, cl = _thread(root, ju, _thin_to(premise, unode.sequent | {minor}), phi, [minor])
    right, cr = _thread(root, je, _open_rule(enode, 0, erule.minor), phi, [erule.minor])
    g = _only(cr)
    if negate(g) not in cl:
        raise CheckError(f"the split formulas do not match at {format_path(phi)}", phi, redex.case)
    new = ProofNode(node_at(root, phi).sequent, Rule(CUT, cut=g),
                    (left, rename_eigenvariables(right, supply)))
    return replace_at(root, phi, new), context


_REWRITERS: Dict[str, Callable[[Preproof, RedexDescriptor, NameSupply], Rewrite]] = {
    "C1": _move_explicit,
    "C2": _close_bar,
    "C3": _drop_cut,
    **{case: _exchange for case in ("C4", "C5", "C6", "C7", "C8")},
    "C9": _push_cut_below_reduction,
    "C10": _introduce_substitution,
    **{case: _split_triangle for case in ("C11", "C12", "C13", "C14")},
}


# ============================================================================ #
#                                   STEPS                                      #
# ============================================================================ #

def _certify(low: OrdTerm, high: OrdTerm, context: OrdTerm, config: EngineConfig) -> Tuple[EllCertificate, ...]:
    cert = derive_ell(low, high)
    if cert is None and context != ZERO:
        cert = derive_ell(low, high, context)
    if cert is not None and not check_certificate(cert):
        _logger.warning("derived certificate for %s << %s failed its own check", low, high)
        cert = None
    if cert is None:
        if config.require_certificates:
            raise CertificateFailure(low, high, context)
        _logger.warning("descent %s < %s holds but is uncertified", low, high)
        return ()
    if config.refute_certificates and bounded_refute(low, high, cert.context) is not None:
        raise CertificateFailure(low, high, cert.context)
    return (cert,)


def reduce_step(proof: Preproof, sck: Optional[StackAssignment] = None,
                config: EngineConfig = DEFAULT_CONFIG) -> Tuple[Preproof, StackAssignment, StepTrace]:
    """
    Input:
        proof (Preproof): a proof with stacks that still has a bar sequent
        sck (StackAssignment, optional): stacks overriding the ones stored on the rules
        config (EngineConfig): verification and certification switches
    Output:
        (Preproof, StackAssignment, StepTrace): the reduct, its stacks and the step record
    Explanation:
        Finds the redex, rewrites it, then insists on the same end-sequent,
        a passing proof check (when verify_each_step is set), a strictly
        smaller ordinal and a checked certificate for the descent.
    """
    if sck is not None:
        proof = apply_stacks(proof, sck)
    redex = find_redex(proof)
    supply = NameSupply.for_proof(proof.root)
    before = proof_ordinal(proof)
    try:
        root, context = _REWRITERS[redex.case](proof, redex, supply)
    except (CheckError, InvalidTerm) as e:
        raise SideConditionFailure(f"{redex.case}: {e}") from e
    if root.sequent != proof.end_sequent:
        raise SideConditionFailure(f"{redex.case} changed the end-sequent")
    result = Preproof(root, proof.system)

    if config.verify_each_step:
        report = check_proof(result)
        if not report.ok:
            raise SideConditionFailure(f"{redex.case} produced an invalid proof: {report.diagnostics[0]}")
    try:
        after = proof_ordinal(result)
    except (CheckError, InvalidTerm) as e:
        raise SideConditionFailure(f"{redex.case}: {e}") from e
    if compare(after, before) != Ordering.LT:
        raise SideConditionFailure(f"{redex.case} does not descend: {after} is not below {before}")
    certificates = _certify(after, before, context, config)

    fresh = tuple(sorted(used_names(root) - used_names(proof.root)))
    trace = StepTrace(redex.case, tuple(sorted(redex.paths.items())), before, after, certificates, fresh)
    _logger.info("%s: %s -> %s", redex.case, before, after)
    return result, stack_assignment(result), trace


def normalize(proof: Preproof, sck: Optional[StackAssignment] = None, fuel: Optional[int] = None,
              config: EngineConfig = DEFAULT_CONFIG) -> NormalizationOutcome:
    """Iterate reduce_step until no bar sequent remains or `fuel` steps have run."""
    if sck is not None:
        proof = apply_stacks(proof, sck)
    fuel = config.fuel if fuel is None else fuel
    if fuel < 0:
        raise ValueError(f"fuel must be non-negative, got {fuel}")
    if config.verify_each_step:
        check_proof(proof).raise_for_errors()

    trace: List[StepTrace] = []
    while structure(proof).bar_sequents:
        if len(trace) >= fuel:
            _logger.warning("fuel exhausted after %d steps at o = %s", len(trace), proof_ordinal(proof))
            return FuelExhausted(proof, trace)
        proof, _, step = reduce_step(proof, config=config)
        trace.append(step)
    _logger.info("cut-free after %d steps", len(trace))
    return CutFree(proof, trace)
