"""
Proof trees shared by SBL derivations, SBL′ preproofs and LK derivations.

A node holds its (lower) sequent, the rule that concludes it and the
premise nodes. Nodes are addressed by root-to-node paths of child
positions; every rewrite builds a new tree.
"""

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from src.prooftheory.formula_language import (
    Abstraction, FoName, FoTerm, Formula, Instance, Index, IndexVar, Literal, RelConst, SecondVar,
    Sequent, all_fo_names, all_so_names, erase, index_subst, match_separation, negate,
    open_quantifier, relabel, rename_in_index, rename_variable, subst_fo, subst_free_var,
    subst_term, substitute_in_index, ALL, EX,
)
from src.prooftheory.ordinal_notation import OrdTerm

Path = Tuple[int, ...]

SBL = "sbl"
SBLP = "sblp"
LK = "lk"

AX = "Ax"
AND = "and"
OR = "or"
ALL1 = "all1"
EX1 = "ex1"
CUT = "cut"
TH = "th"
# SBL only
EX2 = "ex2"
ALL2 = "all2"
BI1 = "BI1"
BI2 = "BI2"
SEP = "sep"
# SBL′ only
CRIT = "c"
D1 = "d1"
D2 = "d2"
BI = "BI"
S1 = "s1"
S2 = "s2"
WEAK = "w"
SUB = "sub"
ALL_RED = "all-red"
EX_RED = "ex-red"

SYSTEM_TAGS = {
    SBL: frozenset([AX, AND, OR, ALL1, EX1, CUT, EX2, ALL2, BI1, BI2, SEP]),
    SBLP: frozenset([AX, AND, OR, ALL1, EX1, CUT, TH, CRIT, D1, D2, BI, S1, S2, WEAK, SUB, ALL_RED, EX_RED]),
    LK: frozenset([AX, AND, OR, ALL1, EX1, TH]),
}

MAIN_FORMULA_TAGS = frozenset([AND, OR, ALL1, EX1, EX2, ALL2, BI1, BI2, SEP,
                               CRIT, D1, D2, BI, S1, S2, WEAK])
UNIVERSAL_TAGS = frozenset([AND, ALL1, S1, S2, WEAK])
EXISTENTIAL_TAGS = frozenset([OR, EX1, CRIT, D1, D2, BI])
EIGEN_TAGS = frozenset([ALL1, ALL2, S1, S2, WEAK, SUB])
SO_EIGEN_TAGS = frozenset([ALL2, S1, S2, WEAK, SUB])
STACK_TAGS = frozenset([SUB, EX_RED])
RED_TAGS = frozenset([ALL_RED, EX_RED])


@dataclass(frozen=True)
class Rule:
    """
    A rule occurrence with its parameters. Only the fields a tag uses are set:
    `minor` for one-premise rules with a main formula, `eigen` for ∀₁ and the
    second-order eigenvariable rules, `term` for ∃₁, `instance` for ∃₂/BI/c/d2/sub,
    `index` for the index or level s, `eta` for a type, `cut` for the cut
    formula, `stack` for sub/∃-red and `part` for the relabelled formulas of a
    quantifier reduction.
    """
    tag: str
    main: Optional[Formula] = None
    minor: Optional[Formula] = None
    eigen: Optional[str] = None
    term: Optional[FoTerm] = None
    instance: Optional[Instance] = None
    index: Optional[Index] = None
    eta: Optional[OrdTerm] = None
    cut: Optional[Formula] = None
    stack: Optional[OrdTerm] = None
    part: FrozenSet[Formula] = frozenset()

    @property
    def quantifier_kind(self) -> Optional[str]:
        if self.tag == ALL_RED:
            return ALL
        if self.tag == EX_RED:
            return EX
        return None


@dataclass(frozen=True)
class ProofNode:
    sequent: Sequent
    rule: Rule
    children: Tuple["ProofNode", ...] = ()


@dataclass(frozen=True)
class Preproof:
    root: ProofNode
    system: str = SBLP

    @property
    def end_sequent(self) -> Sequent:
        return self.root.sequent


def seq(*formulas: Formula) -> Sequent:
    return frozenset(formulas)


def sorted_formulas(sequent: Iterable[Formula]) -> List[Formula]:
    return sorted(sequent, key=str)


def axiom(sequent: Iterable[Formula]) -> ProofNode:
    return ProofNode(frozenset(sequent), Rule(AX))


# ============================================================================ #
#                                    PATHS                                     #
# ============================================================================ #

def iter_nodes(root: ProofNode, path: Path = ()) -> Iterator[Tuple[Path, ProofNode]]:
    """Pre-order walk, leftmost child first."""
    stack = [(path, root)]
    while stack:
        p, node = stack.pop()
        yield p, node
        for i in reversed(range(len(node.children))):
            stack.append((p + (i,), node.children[i]))


def node_at(root: ProofNode, path: Path) -> ProofNode:
    node = root
    for i in path:
        node = node.children[i]
    return node


def replace_at(root: ProofNode, path: Path, new: ProofNode) -> ProofNode:
    if not path:
        return new
    i = path[0]
    child = replace_at(root.children[i], path[1:], new)
    return replace(root, children=root.children[:i] + (child,) + root.children[i + 1:])


def parent_path(path: Path) -> Path:
    return path[:-1]


def is_above(upper: Path, lower: Path) -> bool:
    """upper lies strictly above lower (in the subtree of one of lower's premises)."""
    return len(upper) > len(lower) and upper[:len(lower)] == lower


def proof_size(root: ProofNode) -> int:
    return sum(1 for _ in iter_nodes(root))


def proof_depth(root: ProofNode) -> int:
    return 1 + max((proof_depth(c) for c in root.children), default=0)


# ============================================================================ #
#                          MINOR FORMULAS AND DESCENT                          #
# ============================================================================ #

def premise_minor(rule: Rule, i: int) -> Optional[Formula]:
    """The formula the rule consumes from premise i (the cut-side formula for a cut)."""
    if rule.tag == AND:
        return rule.main.left if i == 0 else rule.main.right
    if rule.tag == CUT:
        return negate(rule.cut) if i == 0 else rule.cut
    return rule.minor


def expected_minor(rule: Rule) -> Optional[Formula]:
    """The minor formula determined by the rule's parameters, or None when not determined."""
    tag, main = rule.tag, rule.main
    if tag == ALL1:
        return subst_fo(main.body, main.var, FoName(rule.eigen))
    if tag == EX1:
        return subst_fo(main.body, main.var, rule.term)
    if tag in (EX2, BI1, BI2, CRIT, D2, BI):
        return open_quantifier(main, rule.instance)
    if tag in (ALL2, S1, S2, WEAK):
        return open_quantifier(main, SecondVar(rule.eigen, rule.index))
    if tag in (SEP, D1):
        parts = match_separation(main)
        return open_quantifier(main, parts[0]).right if parts else None
    return None


def sub_target(rule: Rule) -> SecondVar:
    return SecondVar(rule.eigen, rule.index)


def descend(rule: Rule, lower: Sequent, i: int, f: Formula) -> Tuple[Formula, ...]:
    """Images in the lower sequent of an occurrence f in premise i."""
    tag = rule.tag
    if tag == SUB:
        g = subst_free_var(f, sub_target(rule), rule.instance)
        return (g,) if g in lower else ()
    if tag in RED_TAGS:
        g = relabel(f, rule.eta, rule.quantifier_kind) if f in rule.part else f
        return (g,) if g in lower else ()
    images = []
    if f in lower:
        images.append(f)
    if tag in MAIN_FORMULA_TAGS and f == premise_minor(rule, i) and rule.main not in images:
        images.append(rule.main)
    return tuple(images)


# ============================================================================ #
#                               FORMULA MAPPING                                #
# ============================================================================ #

def _map_instance(inst: Optional[Instance], fn: Callable[[Formula], Formula]) -> Optional[Instance]:
    if inst is None:
        return None
    if isinstance(inst, Abstraction):
        return Abstraction(inst.var, fn(inst.body))
    arg_name = "x"
    result = fn(Literal(True, inst, FoName(arg_name)))
    if isinstance(result, Literal) and result.positive and result.arg == FoName(arg_name):
        return result.pred
    return Abstraction(arg_name, result)


def map_rule(rule: Rule, fn: Callable[[Formula], Formula]) -> Rule:
    return replace(
        rule,
        main=fn(rule.main) if rule.main is not None else None,
        minor=fn(rule.minor) if rule.minor is not None else None,
        cut=fn(rule.cut) if rule.cut is not None else None,
        instance=_map_instance(rule.instance, fn),
        part=frozenset(fn(f) for f in rule.part),
    )


def map_formulas(node: ProofNode, fn: Callable[[Formula], Formula]) -> ProofNode:
    """Apply fn to every formula of every sequent and rule parameter in the subtree."""
    return ProofNode(
        frozenset(fn(f) for f in node.sequent),
        map_rule(node.rule, fn),
        tuple(map_formulas(c, fn) for c in node.children),
    )


def erase_proof(proof: Preproof, system: str = LK) -> Preproof:
    """A^L applied to every formula of the proof."""
    return Preproof(map_formulas(proof.root, erase), system)


def rename_second_order(node: ProofNode, old: str, new: str) -> ProofNode:
    """Rename a second-order variable throughout a subtree: parts, indices and eigenvariables."""
    rule = map_rule(node.rule, lambda f: rename_variable(f, old, new))
    rule = replace(
        rule,
        eigen=new if rule.eigen == old else rule.eigen,
        index=rename_in_index(rule.index, old, new) if rule.index is not None else None,
    )
    return ProofNode(
        frozenset(rename_variable(f, old, new) for f in node.sequent),
        rule,
        tuple(rename_second_order(c, old, new) for c in node.children),
    )


def rename_first_order(node: ProofNode, old: str, new: str) -> ProofNode:
    value = FoName(new)
    rule = map_rule(node.rule, lambda f: subst_fo(f, old, value))
    rule = replace(
        rule,
        eigen=new if rule.eigen == old else rule.eigen,
        term=subst_term(rule.term, old, value) if rule.term is not None else None,
    )
    return ProofNode(
        frozenset(subst_fo(f, old, value) for f in node.sequent),
        rule,
        tuple(rename_first_order(c, old, new) for c in node.children),
    )


def substitute_index(node: ProofNode, target: IndexVar, value: Index) -> ProofNode:
    """P^[s/U^η]: replace the index variable target by value in every formula and rule index."""
    rule = map_rule(node.rule, lambda f: index_subst(f, value, target))
    if rule.index is not None:
        rule = replace(rule, index=substitute_in_index(rule.index, target, value))
    return ProofNode(
        frozenset(index_subst(f, value, target) for f in node.sequent),
        rule,
        tuple(substitute_index(c, target, value) for c in node.children),
    )


def instantiate_first_order(node: ProofNode, name: str, value: FoTerm) -> ProofNode:
    """Replace the free individual variable name by the term value throughout a subtree."""
    rule = map_rule(node.rule, lambda f: subst_fo(f, name, value))
    if rule.term is not None:
        rule = replace(rule, term=subst_term(rule.term, name, value))
    return ProofNode(
        frozenset(subst_fo(f, name, value) for f in node.sequent),
        rule,
        tuple(instantiate_first_order(c, name, value) for c in node.children),
    )


def ground_variable(node: ProofNode, var: SecondVar, constant: str) -> ProofNode:
    """Replace the free variable var by a relation constant everywhere in the subtree."""
    return map_formulas(node, lambda f: subst_free_var(f, var, RelConst(constant)))


# ============================================================================ #
#                                    NAMES                                     #
# ============================================================================ #

def _instance_names(inst: Optional[Instance]) -> FrozenSet[str]:
    if inst is None or isinstance(inst, RelConst):
        return frozenset()
    if isinstance(inst, SecondVar):
        return frozenset([inst.name])
    return all_so_names(inst) | all_fo_names(inst.body) | {inst.var}


def used_names(root: ProofNode) -> FrozenSet[str]:
    names = set()
    for _, node in iter_nodes(root):
        for f in node.sequent:
            names |= all_fo_names(f) | all_so_names(f)
        r = node.rule
        if r.eigen:
            names.add(r.eigen)
        names |= _instance_names(r.instance)
    return frozenset(names)


@dataclass
class NameSupply:
    """Monotone fresh-name generator for one proof; a name is never handed out twice."""
    used: set = field(default_factory=set)
    counter: itertools.count = field(default_factory=lambda: itertools.count(1))

    @classmethod
    def for_proof(cls, root: ProofNode) -> "NameSupply":
        return cls(set(used_names(root)))

    def fresh(self, base: str) -> str:
        root = base.rstrip("0123456789'") or base
        while True:
            candidate = f"{root}{next(self.counter)}"
            if candidate not in self.used:
                self.used.add(candidate)
                return candidate


def rename_eigenvariables(root: ProofNode, supply: NameSupply) -> ProofNode:
    """Give every eigenvariable rule of the subtree a fresh eigenvariable, uppermost rules first."""
    paths = sorted((p for p, n in iter_nodes(root) if n.rule.tag in EIGEN_TAGS and n.rule.eigen is not None),
                   key=len, reverse=True)
    for path in paths:
        node = node_at(root, path)
        old = node.rule.eigen
        new = supply.fresh(old)
        if node.rule.tag in SO_EIGEN_TAGS:
            renamed = rename_second_order(node, old, new)
        else:
            renamed = rename_first_order(node, old, new)
        root = replace_at(root, path, renamed)
    return root


# ============================================================================ #
#                                    STACKS                                    #
# ============================================================================ #

StackAssignment = Dict[Path, OrdTerm]


def stack_assignment(proof: Preproof) -> StackAssignment:
    """The stacks stored on the sub and ∃-red rules of a proof."""
    return {p: n.rule.stack for p, n in iter_nodes(proof.root)
            if n.rule.tag in STACK_TAGS and n.rule.stack is not None}


def apply_stacks(proof: Preproof, sck: StackAssignment) -> Preproof:
    root = proof.root
    for path, gamma in sck.items():
        node = node_at(root, path)
        root = replace_at(root, path, replace(node, rule=replace(node.rule, stack=gamma)))
    return Preproof(root, proof.system)
