"""
Typed s-expression codecs for indices, formulas, proofs and certificates.

    (proof sbl|sblp|lk NODE)
    NODE = (node (seq F ...) (rule TAG (key value) ...) NODE ...)

Formulas print through their __str__; parsing goes through here.
"""

from typing import Dict, FrozenSet, List, Tuple

from src.prooftheory.errors import ParseError
from src.prooftheory.essential_order import EllCertificate, HullFact
from src.prooftheory.formula_language import (
    ALL, EX, Abstraction, And, BoundVarRef, FoApp, FoName, FoQuant, FoTerm, Formula, INDEX_ZERO,
    Index, Instance, Literal, Or, RelConst, SecondVar, SoQuant,
    fix_atom, index_max, index_succ, index_var, negate,
)
from src.prooftheory.ordinal_notation import OrdTerm
from src.prooftheory.proof_tree import LK, SBL, SBLP, Preproof, ProofNode, Rule, sorted_formulas
from src.prooftheory.sexpr_codec import (
    SExpr, expect_atom, expect_list, format_sexpr, ordinal_from_sexpr, parse_all, parse_sexpr,
)

SYSTEMS = (SBL, SBLP, LK)


# ---------------------------------------------------------------------- #
#                          Terms and indices                             #
# ---------------------------------------------------------------------- #

def term_from_sexpr(value: SExpr) -> FoTerm:
    if isinstance(value, list):
        items = expect_list(value, min_len=2)
        return FoApp(expect_atom(items[0]), tuple(term_from_sexpr(a) for a in items[1:]))
    return FoName(value)


def index_from_sexpr(value: SExpr) -> Index:
    if value == "0":
        return INDEX_ZERO
    items = expect_list(value, min_len=2)
    head = items[0]
    if head == "fix" and len(items) == 2:
        return fix_atom(ordinal_from_sexpr(items[1]))
    if head == "iv" and len(items) == 3:
        return index_var(expect_atom(items[1]), ordinal_from_sexpr(items[2]))
    if head == "succ" and len(items) == 2:
        return index_succ(index_from_sexpr(items[1]))
    if head == "max" and len(items) >= 3:
        return index_max(*[index_from_sexpr(a) for a in items[1:]])
    raise ParseError(f"unknown index {format_sexpr(value)}")


# ---------------------------------------------------------------------- #
#                               Formulas                                 #
# ---------------------------------------------------------------------- #

def formula_from_sexpr(value: SExpr, bound: FrozenSet[str] = frozenset()) -> Formula:
    """
    Input:
        value (SExpr): a parsed formula
        bound (FrozenSet[str]): second-order variables bound by enclosing quantifiers
    Output:
        Formula in negation normal form (`not` is pushed inwards)
    """
    items = expect_list(value, min_len=2)
    head = items[0]
    if head == "rel" and len(items) == 3:
        return Literal(True, RelConst(expect_atom(items[1])), term_from_sexpr(items[2]))
    if head == "var" and len(items) in (3, 4):
        name = expect_atom(items[1])
        arg = term_from_sexpr(items[-1])
        if len(items) == 3:
            pred = BoundVarRef(name) if name in bound else SecondVar(name)
            return Literal(True, pred, arg)
        return Literal(True, SecondVar(name, index_from_sexpr(items[2])), arg)
    if head == "not" and len(items) == 2:
        return negate(formula_from_sexpr(items[1], bound))
    if head in ("and", "or") and len(items) >= 3:
        parts = [formula_from_sexpr(a, bound) for a in items[1:]]
        cls = And if head == "and" else Or
        result = parts[-1]
        for p in reversed(parts[:-1]):
            result = cls(p, result)
        return result
    if head in (ALL, EX) and len(items) == 3:
        return FoQuant(head, expect_atom(items[1]), formula_from_sexpr(items[2], bound))
    if head in ("All", "Ex") and len(items) in (3, 4):
        var = expect_atom(items[1])
        index = ordinal_from_sexpr(items[2]) if len(items) == 4 else None
        body = formula_from_sexpr(items[-1], bound | {var})
        return SoQuant(ALL if head == "All" else EX, var, index, body)
    raise ParseError(f"unknown formula {format_sexpr(value)}")


def parse_formula(text: str) -> Formula:
    return formula_from_sexpr(parse_sexpr(text))


def instance_from_sexpr(value: SExpr) -> Instance:
    items = expect_list(value, min_len=2)
    head = items[0]
    if head == "lam" and len(items) == 3:
        return Abstraction(expect_atom(items[1]), formula_from_sexpr(items[2]))
    if head == "rel" and len(items) == 2:
        return RelConst(expect_atom(items[1]))
    if head == "var" and len(items) in (2, 3):
        index = index_from_sexpr(items[2]) if len(items) == 3 else None
        return SecondVar(expect_atom(items[1]), index)
    raise ParseError(f"unknown substitution instance {format_sexpr(value)}")


def format_instance(inst: Instance) -> str:
    if isinstance(inst, Abstraction):
        return str(inst)
    if isinstance(inst, RelConst):
        return f"(rel {inst.name})"
    if inst.index is None:
        return f"(var {inst.name})"
    return f"(var {inst.name} {inst.index})"


# ---------------------------------------------------------------------- #
#                                Proofs                                  #
# ---------------------------------------------------------------------- #

def format_rule(rule: Rule) -> str:
    parts = ["rule", rule.tag]
    if rule.main is not None:
        parts.append(f"(main {rule.main})")
    if rule.minor is not None:
        parts.append(f"(minor {rule.minor})")
    if rule.eigen is not None:
        parts.append(f"(eigen {rule.eigen})")
    if rule.term is not None:
        parts.append(f"(term {rule.term})")
    if rule.instance is not None:
        parts.append(f"(inst {format_instance(rule.instance)})")
    if rule.index is not None:
        parts.append(f"(index {rule.index})")
    if rule.eta is not None:
        parts.append(f"(type {rule.eta})")
    if rule.cut is not None:
        parts.append(f"(cut {rule.cut})")
    if rule.stack is not None:
        parts.append(f"(stack {rule.stack})")
    if rule.part:
        parts.append("(part " + " ".join(str(f) for f in sorted_formulas(rule.part)) + ")")
    return "(" + " ".join(parts) + ")"


def format_node(node: ProofNode, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}(node (seq " + " ".join(str(f) for f in sorted_formulas(node.sequent)) + ")"
    head = head.replace("(seq )", "(seq)")
    lines = [head, f"{pad}  {format_rule(node.rule)}"]
    for child in node.children:
        lines.append(format_node(child, indent + 1))
    return "\n".join(lines) + ")"


def format_proof(proof: Preproof) -> str:
    return f"(proof {proof.system}\n{format_node(proof.root, 1)})\n"


def _rule_from_sexpr(value: SExpr) -> Rule:
    items = expect_list(value, "rule", min_len=2)
    fields: Dict[str, object] = {"tag": expect_atom(items[1])}
    for entry in items[2:]:
        kv = expect_list(entry, min_len=1)
        key, args = kv[0], kv[1:]
        if key == "part":
            fields["part"] = frozenset(formula_from_sexpr(a) for a in args)
            continue
        if len(args) != 1:
            raise ParseError(f"rule parameter {key} expects one value")
        arg = args[0]
        if key in ("main", "minor", "cut"):
            fields[key] = formula_from_sexpr(arg)
        elif key == "eigen":
            fields["eigen"] = expect_atom(arg)
        elif key == "term":
            fields["term"] = term_from_sexpr(arg)
        elif key == "inst":
            fields["instance"] = instance_from_sexpr(arg)
        elif key == "index":
            fields["index"] = index_from_sexpr(arg)
        elif key == "type":
            fields["eta"] = ordinal_from_sexpr(arg)
        elif key == "stack":
            fields["stack"] = ordinal_from_sexpr(arg)
        else:
            raise ParseError(f"unknown rule parameter {key}")
    return Rule(**fields)


def node_from_sexpr(value: SExpr) -> ProofNode:
    items = expect_list(value, "node", min_len=3)
    sequent = expect_list(items[1], "seq")
    formulas = frozenset(formula_from_sexpr(f) for f in sequent[1:])
    rule = _rule_from_sexpr(items[2])
    children = tuple(node_from_sexpr(c) for c in items[3:])
    return ProofNode(formulas, rule, children)


def proof_from_sexpr(value: SExpr) -> Preproof:
    items = expect_list(value, "proof", min_len=3)
    system = expect_atom(items[1])
    if system not in SYSTEMS:
        raise ParseError(f"unknown proof system {system!r}")
    return Preproof(node_from_sexpr(items[2]), system)


def parse_proof(text: str) -> Preproof:
    return proof_from_sexpr(parse_sexpr(text))


def parse_proofs(text: str) -> List[Preproof]:
    return [proof_from_sexpr(v) for v in parse_all(text)]


# ---------------------------------------------------------------------- #
#                             Certificates                               #
# ---------------------------------------------------------------------- #

def certificate_from_sexpr(value: SExpr) -> EllCertificate:
    items = expect_list(value, "cert", min_len=5)
    kind = expect_atom(items[1])
    low, high, ctx = (ordinal_from_sexpr(v) for v in items[2:5])
    params: Tuple[OrdTerm, ...] = ()
    witnesses: Tuple[HullFact, ...] = ()
    premises = []
    for entry in items[5:]:
        entry = expect_list(entry)
        if entry[0] == "params":
            params = tuple(ordinal_from_sexpr(v) for v in entry[1:])
        elif entry[0] == "witness":
            facts = []
            for w in entry[1:]:
                w = expect_list(w, "hull", min_len=4)
                facts.append(HullFact(*(ordinal_from_sexpr(v) for v in w[1:4])))
            witnesses = tuple(facts)
        else:
            premises.append(certificate_from_sexpr(entry))
    return EllCertificate(kind, low, high, ctx, tuple(premises), params, witnesses)


def parse_certificate(text: str) -> EllCertificate:
    return certificate_from_sexpr(parse_sexpr(text))


def parse_stacks(text: str) -> Dict[Tuple[int, ...], OrdTerm]:
    """`(stacks (at 0 1 (stack t)) ...)` into a path → ordinal map."""
    items = expect_list(parse_sexpr(text), "stacks", min_len=1)
    result = {}
    for entry in items[1:]:
        entry = expect_list(entry, "at", min_len=2)
        path = tuple(int(expect_atom(i)) for i in entry[1:-1])
        stack = expect_list(entry[-1], "stack", min_len=2)
        result[path] = ordinal_from_sexpr(stack[1])
    return result


def format_stacks(sck: Dict[Tuple[int, ...], OrdTerm]) -> str:
    lines = ["(stacks"]
    for path in sorted(sck, key=lambda p: (len(p), p)):
        lines.append("  (at " + " ".join(str(i) for i in path) + (" " if path else "") + f"(stack {sck[path]}))")
    return "\n".join(lines) + ")\n"
