"""
Checking and analysing proof trees.

check_sbl / check_preproof / check_lk validate rule schemas, heights and
assign_ordinals compute the measures, structure finds the zones the
reductions act on, and check_proof decides whether a preproof together
with its stacks is a proof.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from src.prooftheory.errors import CheckError, InvalidTerm
from src.prooftheory.formula_language import (
    ALL, EX, HEIGHT_OMEGA, HEIGHT_ZERO, PI, SIGMA, Abstraction, FoQuant, Formula, Height,
    INDEX_ZERO, IndexVar, Literal, Or, RelConst, SecondVar, SoQuant, big_grade, classify, degree,
    erase, formula_index_set, free_fo_names, height_gap, is_closed, is_first_order, is_pi,
    is_sigma, is_sigma_i, is_stratified, match_separation, negate, od, part_variables, relabel,
    strat_level, subst_free_var, variables_in_indices, vt,
)
from src.prooftheory.ordinal_notation import (
    I, ONE, ZERO, OmegaSucc, OrdTerm, Ordering, Psi, compare, in_hull, is_fixpoint, natural_sum,
    omega_index, omega_pow, omega_tower, psi, sigma_term, succ,
)
from src.prooftheory.proof_tree import (
    ALL1, ALL2, AND, AX, BI, BI1, BI2, CRIT, CUT, D1, D2, EIGEN_TAGS, EX1, EX2, EX_RED,
    EXISTENTIAL_TAGS, LK, MAIN_FORMULA_TAGS, OR, Path, Preproof, ProofNode, RED_TAGS, Rule, S1,
    S2, SBL, SBLP, SEP, SO_EIGEN_TAGS, SUB, SYSTEM_TAGS, TH, UNIVERSAL_TAGS, WEAK,
    StackAssignment, apply_stacks, descend, expected_minor, iter_nodes, node_at, premise_minor,
    sub_target,
)

_logger = logging.getLogger(__name__)


# ============================================================================ #
#                                   REPORTS                                    #
# ============================================================================ #

@dataclass(frozen=True)
class Diagnostic:
    path: Path
    rule: str
    condition: str
    message: str

    def __str__(self) -> str:
        where = "/".join(str(i) for i in self.path) or "root"
        return f"[{where}] {self.rule}: {self.condition}: {self.message}"


@dataclass
class CheckReport:
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def add(self, path: Path, rule: str, condition: str, message: str):
        self.diagnostics.append(Diagnostic(tuple(path), rule, condition, message))

    def extend(self, other: "CheckReport"):
        self.diagnostics.extend(other.diagnostics)

    def conditions(self) -> Set[str]:
        return {d.condition for d in self.diagnostics}

    def raise_for_errors(self):
        if self.diagnostics:
            first = self.diagnostics[0]
            raise CheckError(str(first), first.path, first.condition)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "diagnostics": [str(d) for d in self.diagnostics]}


# ============================================================================ #
#                                RULE SCHEMAS                                  #
# ============================================================================ #

def _so_names(f: Formula) -> FrozenSet[str]:
    return frozenset(v.name for v in part_variables(f)) | frozenset(v.name for v in variables_in_indices(f))


def sequent_so_names(sequent) -> FrozenSet[str]:
    names = frozenset()
    for f in sequent:
        names = names | _so_names(f)
    return names


def sequent_fo_names(sequent) -> FrozenSet[str]:
    names = frozenset()
    for f in sequent:
        names = names | free_fo_names(f)
    return names


def _check_shape(report: CheckReport, path: Path, node: ProofNode) -> bool:
    """Premise counts and the context discipline shared by both calculi."""
    rule, lower, kids = node.rule, node.sequent, node.children
    tag = rule.tag
    arity = {AX: 0, AND: 2, CUT: 2}.get(tag, 1)
    if len(kids) != arity:
        report.add(path, tag, "arity", f"expected {arity} premises, found {len(kids)}")
        return False
    if tag == AX:
        return True
    if tag in MAIN_FORMULA_TAGS:
        if rule.main is None or rule.main not in lower:
            report.add(path, tag, "main", f"main formula {rule.main} is not in the lower sequent")
            return False
        for i, child in enumerate(kids):
            minor = premise_minor(rule, i)
            if minor is None or minor not in child.sequent:
                report.add(path, tag, "minor", f"minor formula {minor} missing from premise {i}")
                return False
            if not (child.sequent - {minor}) <= lower:
                extra = ", ".join(str(f) for f in child.sequent - {minor} - lower)
                report.add(path, tag, "context", f"premise {i} has formulas not in the conclusion: {extra}")
                return False
            if not lower <= child.sequent | {rule.main}:
                extra = ", ".join(str(f) for f in lower - child.sequent - {rule.main})
                report.add(path, tag, "context", f"conclusion has formulas not in premise {i}: {extra}")
                return False
        return True
    if tag == CUT:
        left, right = kids[0].sequent, kids[1].sequent
        c = rule.cut
        if c is None or negate(c) not in left or c not in right:
            report.add(path, tag, "cut", f"cut formula {c} does not match the premises")
            return False
        if not ((left - {negate(c)}) | (right - {c})) <= lower or not lower <= left | right:
            report.add(path, tag, "context", "conclusion is not the union of the premise contexts")
            return False
        return True
    if tag == TH:
        if not kids[0].sequent <= lower:
            report.add(path, tag, "context", "thinning drops a formula")
            return False
        return True
    if tag == SUB:
        image = frozenset(subst_free_var(f, sub_target(rule), rule.instance) for f in kids[0].sequent)
        if image != lower:
            report.add(path, tag, "substitution", "lower sequent is not the substituted upper sequent")
            return False
        return True
    if tag in RED_TAGS:
        upper = kids[0].sequent
        if not rule.part <= upper:
            report.add(path, tag, "part", "relabelled formulas are not in the upper sequent")
            return False
        image = frozenset(relabel(f, rule.eta, rule.quantifier_kind) for f in rule.part) | (upper - rule.part)
        if image != lower:
            report.add(path, tag, "relabel", "lower sequent is not the relabelled upper sequent")
            return False
        return True
    return True


def _check_axiom(report: CheckReport, path: Path, node: ProofNode, system: str):
    for f in node.sequent:
        if negate(f) not in node.sequent:
            continue
        if isinstance(f, Literal) or (system == SBLP and big_grade(f) == 0):
            return
    report.add(path, AX, "axiom", "no pair A, ¬A of the required shape")


def _check_minor(report: CheckReport, path: Path, rule: Rule) -> bool:
    tag = rule.tag
    if tag in (AND, AX, CUT, TH, SUB) or tag in RED_TAGS:
        return True
    main = rule.main
    if tag == OR:
        ok = isinstance(main, Or) and rule.minor in (main.left, main.right)
        if not ok:
            report.add(path, tag, "minor", f"{rule.minor} is not a disjunct of {main}")
        return ok
    shape_ok = {
        ALL1: isinstance(main, FoQuant) and main.kind == ALL,
        EX1: isinstance(main, FoQuant) and main.kind == EX,
    }.get(tag)
    if shape_ok is None:
        want_kind = ALL if tag in (ALL2, S1, S2, WEAK) else EX
        shape_ok = isinstance(main, SoQuant) and main.kind == want_kind
    if not shape_ok:
        report.add(path, tag, "main", f"{main} has the wrong shape for ({tag})")
        return False
    expected = expected_minor(rule)
    if expected is None or expected != rule.minor:
        report.add(path, tag, "minor", f"minor formula {rule.minor} should be {expected}")
        return False
    return True


def _check_eigen(report: CheckReport, path: Path, node: ProofNode):
    rule = node.rule
    if rule.tag == ALL1 and rule.eigen in sequent_fo_names(node.sequent):
        report.add(path, ALL1, "eigenvariable", f"{rule.eigen} occurs in the lower sequent")
    if rule.tag in SO_EIGEN_TAGS and rule.eigen in sequent_so_names(node.sequent):
        report.add(path, rule.tag, "eigenvariable", f"{rule.eigen} occurs in the lower sequent")


def check_sbl(proof: Preproof) -> CheckReport:
    """Every node of an L-derivation instantiates an SBL axiom or rule."""
    report = CheckReport()
    for path, node in iter_nodes(proof.root):
        rule = node.rule
        if rule.tag not in SYSTEM_TAGS[SBL]:
            report.add(path, rule.tag, "tag", "not an SBL rule")
            continue
        for f in node.sequent:
            if f != erase(f):
                report.add(path, rule.tag, "language", f"{f} carries indices")
                break
        if not _check_shape(report, path, node):
            continue
        if rule.tag == AX:
            _check_axiom(report, path, node, SBL)
            continue
        if not _check_minor(report, path, rule):
            continue
        _check_eigen(report, path, node)
        main = rule.main
        if rule.tag == EX2 and not isinstance(rule.instance, (RelConst, SecondVar)):
            report.add(path, EX2, "instance", "the instance must be a variable or relation constant")
        elif rule.tag == BI1:
            cls = classify(main)
            if not (cls.pi and cls.sigma):
                report.add(path, BI1, "class", f"{main} is not in Π¹₂∩Σ¹₂")
        elif rule.tag == BI2:
            body = rule.instance.body if isinstance(rule.instance, Abstraction) else None
            if body is not None and not (is_pi(body) and is_sigma(body)):
                report.add(path, BI2, "class", "the instance is not in Π¹₂∩Σ¹₂")
        elif rule.tag == SEP:
            parts = match_separation(main)
            if parts is None:
                report.add(path, SEP, "main", f"{main} is not of the form ∃X(A⊂X⊂B)")
            elif not is_pi(parts[0].body) or not is_sigma(parts[1].body):
                report.add(path, SEP, "class", "separation needs A ∈ Π¹₂ and B ∈ Σ¹₂")
    return report


def check_lk(proof: Preproof) -> CheckReport:
    """The independent checker for cut-free first-order LK derivations."""
    report = CheckReport()
    for path, node in iter_nodes(proof.root):
        rule = node.rule
        if rule.tag not in SYSTEM_TAGS[LK]:
            report.add(path, rule.tag, "tag", "not a cut-free LK rule")
            continue
        for f in node.sequent:
            if not is_first_order(f) or f != erase(f):
                report.add(path, rule.tag, "language", f"{f} is not a first-order L-formula")
                break
        if not _check_shape(report, path, node):
            continue
        if rule.tag == AX:
            _check_axiom(report, path, node, LK)
            continue
        if _check_minor(report, path, rule):
            _check_eigen(report, path, node)
    return report


def _index_of(inst) -> Optional[object]:
    if isinstance(inst, RelConst):
        return INDEX_ZERO
    if isinstance(inst, SecondVar):
        return inst.index
    return None


def _check_sblp_rule(report: CheckReport, path: Path, node: ProofNode):
    rule, tag, main = node.rule, node.rule.tag, node.rule.main
    if tag == CRIT:
        if main.index is None or rule.eta != main.index:
            report.add(path, tag, "type", f"type {rule.eta} does not match {main}")
            return
        s = _index_of(rule.instance)
        if s is None or s != rule.index:
            report.add(path, tag, "index", f"instance {rule.instance} does not carry the index {rule.index}")
            return
        if rule.eta != I and not (is_closed(s) and compare(od(s), rule.eta) == Ordering.LT):
            report.add(path, tag, "index", f"type {rule.eta} ≠ I needs a closed index below it, got {s}")
    elif tag in (D1, D2):
        if main.index is not None:
            report.add(path, tag, "main", "distinguished rules need an unindexed quantifier")
        elif big_grade(main) == 0:
            report.add(path, tag, "grade", f"Gr({main}) = 0")
        elif tag == D2 and _index_of(rule.instance) is None:
            report.add(path, tag, "instance", "the instance must be a variable or relation constant")
    elif tag == BI:
        if main.index is not None:
            report.add(path, tag, "main", "(BI) needs an unindexed quantifier")
        elif not is_pi(main) and not is_stratified(main):
            report.add(path, tag, "stratified", f"{main} is neither Π¹₂ nor stratified")
        elif big_grade(main) != 0:
            report.add(path, tag, "grade", f"Gr({main}) ≠ 0")
    elif tag == S1:
        if main.index is not None or big_grade(main) == 0:
            report.add(path, tag, "grade", f"(s1) needs an unindexed ∀ with Gr ≠ 0, got {main}")
            return
        expected = strat_level(PI, main, eigen=rule.eigen)
        if rule.index != expected:
            report.add(path, tag, "index", f"index {rule.index} should be {expected}")
    elif tag == S2:
        if main.index is None or rule.eta != main.index:
            report.add(path, tag, "type", f"type {rule.eta} does not match {main}")
            return
        if rule.index != IndexVar(rule.eigen, main.index):
            report.add(path, tag, "index", f"the eigenvariable must carry the index {rule.eigen}^{main.index}")
    elif tag == WEAK:
        if main.index is not None:
            report.add(path, tag, "main", "(w) needs an unindexed quantifier")
            return
        if not is_sigma(main) and not is_stratified(main):
            report.add(path, tag, "stratified", f"{main} is neither Σ¹₂ nor stratified")
        if big_grade(main) != 0:
            report.add(path, tag, "grade", f"Gr({main}) ≠ 0")
        try:
            expected = strat_level(PI, main)
        except CheckError as e:
            report.add(path, tag, "index", str(e))
            return
        if rule.index != expected:
            report.add(path, tag, "index", f"s = {rule.index} but st_Π = {expected}")
    elif tag == SUB:
        s = rule.index
        if s is None or not is_closed(s) or compare(od(s), I) != Ordering.LT:
            report.add(path, tag, "level", f"level {s} must be closed and below I")
            return
        inst = rule.instance
        if isinstance(inst, Abstraction) and not is_stratified(inst.body):
            report.add(path, tag, "instance", "the substituted formula is not stratified")
        if isinstance(inst, SecondVar) and (inst.index is None or not is_closed(inst.index)
                                            or compare(od(inst.index), I) != Ordering.LT):
            report.add(path, tag, "instance", "the substituted variable is not stratified")
        for b in node.children[0].sequent:
            if not is_pi(b) or not is_stratified(b):
                report.add(path, tag, "upper", f"{b} is not a stratified Π¹₂ formula")
                continue
            level = strat_level(PI, b)
            if compare(od(level), od(s)) == Ordering.GT:
                report.add(path, tag, "upper", f"st_Π({b}) = {level} exceeds the level {s}")
            if rule.eigen in vt(erase(b)):
                report.add(path, tag, "upper", f"{rule.eigen} is tied in {b}")
    elif tag in RED_TAGS:
        if rule.eta is None or not is_fixpoint(rule.eta) or compare(rule.eta, I) != Ordering.LT:
            report.add(path, tag, "type", f"type {rule.eta} must be a fixed point below I")
            return
        upper = node.children[0].sequent
        for a in upper:
            ok = is_sigma_i(a) if tag == EX_RED else (is_sigma_i(a) or is_sigma_i(negate(a)))
            if not ok:
                report.add(path, tag, "klein", f"{a} is outside the class the reduction allows")
                break


def check_preproof(proof: Preproof) -> CheckReport:
    """Every node instantiates an SBL′ schema and the pure variable condition holds."""
    report = CheckReport()
    for path, node in iter_nodes(proof.root):
        rule = node.rule
        if rule.tag not in SYSTEM_TAGS[SBLP]:
            report.add(path, rule.tag, "tag", "not an SBL′ rule")
            continue
        if not _check_shape(report, path, node):
            continue
        if rule.tag == AX:
            _check_axiom(report, path, node, SBLP)
            continue
        if not _check_minor(report, path, rule):
            continue
        _check_eigen(report, path, node)
        try:
            _check_sblp_rule(report, path, node)
        except (CheckError, InvalidTerm) as e:
            report.add(path, rule.tag, "side condition", str(e))
    report.extend(check_pure_variables(proof))
    return report


def check_pure_variables(proof: Preproof) -> CheckReport:
    """Distinct eigenvariables, none in the end-sequent, and no other variable disappears."""
    report = CheckReport()
    seen: Dict[str, Path] = {}
    end_names = sequent_so_names(proof.end_sequent) | sequent_fo_names(proof.end_sequent)
    for path, node in iter_nodes(proof.root):
        rule = node.rule
        if rule.tag in EIGEN_TAGS and rule.eigen is not None:
            if rule.eigen in seen:
                report.add(path, rule.tag, "pure variables", f"eigenvariable {rule.eigen} is reused")
            seen[rule.eigen] = path
            if rule.eigen in end_names:
                report.add(path, rule.tag, "pure variables", f"eigenvariable {rule.eigen} occurs in the end-sequent")
        lower = sequent_so_names(node.sequent)
        for child in node.children:
            vanished = sequent_so_names(child.sequent) - lower - {rule.eigen}
            if vanished:
                names = ", ".join(sorted(vanished))
                report.add(path, rule.tag, "pure variables", f"{names} disappear without being eigenvariables")
    return report


# ============================================================================ #
#                                   HEIGHTS                                    #
# ============================================================================ #

def instance_degree(inst) -> Height:
    if isinstance(inst, Abstraction):
        return degree(inst.body)
    return HEIGHT_ZERO


def heights(proof: Preproof, base: Height = HEIGHT_ZERO) -> Dict[Path, Height]:
    """h(Δ) for every node, computed from the end-sequent (at height base) upwards."""
    result = {(): base}
    for path, node in iter_nodes(proof.root):
        h = result[path]
        tag = node.rule.tag
        for i in range(len(node.children)):
            if tag == SUB:
                hc = HEIGHT_ZERO
            elif tag in RED_TAGS:
                hc = HEIGHT_OMEGA
            elif tag == CUT:
                hc = max(h, degree(node.rule.cut))
            elif tag == BI:
                hc = max(h, instance_degree(node.rule.instance))
            else:
                hc = h
            result[path + (i,)] = hc
    return result


def height(path: Path, proof: Preproof) -> Height:
    return heights(proof)[path]


# ============================================================================ #
#                                   ORDINALS                                   #
# ============================================================================ #

ONE_SUCC_TAGS = frozenset([OR, ALL1, EX1, CRIT, D1, D2, S1, S2, WEAK])


@dataclass
class OrdinalAnnotation:
    sequent: Dict[Path, OrdTerm]
    rule: Dict[Path, OrdTerm]
    height: Dict[Path, Height]

    @property
    def proof_ordinal(self) -> OrdTerm:
        return self.sequent[()]

    def dump(self) -> str:
        lines = []
        for path in sorted(self.sequent, key=lambda p: (len(p), p)):
            where = "/".join(str(i) for i in path) or "root"
            rule_o = self.rule.get(path)
            lines.append(f"{where}\th={self.height[path]}\to={self.sequent[path]}"
                         + (f"\to(J)={rule_o}" if rule_o is not None else ""))
        return "\n".join(lines)


def level_regular(s) -> OmegaSucc:
    """Ω_{s+1} as a regular term for a closed index s below I."""
    return OmegaSucc(od(s))


def bi_summand(main: Formula) -> OrdTerm:
    if is_stratified(main):
        try:
            s = strat_level(SIGMA, main)
        except CheckError:
            return I
        return sigma_term(level_regular(s))
    return I


def assign_ordinals(proof: Preproof, sck: Optional[StackAssignment] = None,
                    base: Height = HEIGHT_ZERO) -> OrdinalAnnotation:
    """
    o(Δ) and o(J) for every sequent and rule; stacks come from sck or the rules.

    base is the height of the root sequent, so a subproof can be measured in
    place (HEIGHT_OMEGA above a quantifier reduction, HEIGHT_ZERO above a sub).
    """
    if sck is not None:
        proof = apply_stacks(proof, sck)
    hs = heights(proof, base)
    seq_o: Dict[Path, OrdTerm] = {}
    rule_o: Dict[Path, OrdTerm] = {}
    order = sorted((p for p, _ in iter_nodes(proof.root)), key=len, reverse=True)
    for path in order:
        node = node_at(proof.root, path)
        rule = node.rule
        tag = rule.tag
        if tag == AX:
            seq_o[path] = ONE
            continue
        above = [seq_o[path + (i,)] for i in range(len(node.children))]
        if tag in (SUB, TH) or tag in RED_TAGS:
            oj = above[0]
        elif tag in ONE_SUCC_TAGS:
            oj = succ(above[0])
        elif tag in (AND, CUT):
            oj = natural_sum(*above)
        elif tag == BI:
            oj = natural_sum(bi_summand(rule.main), above[0])
        else:
            raise CheckError(f"no ordinal clause for ({tag})", path, "ordinal")
        rule_o[path] = oj
        if tag in (SUB, EX_RED):
            if rule.stack is None:
                raise CheckError(f"missing stack for ({tag})", path, "stack")
            reg = level_regular(rule.index) if tag == SUB else I
            seq_o[path] = psi(reg, natural_sum(rule.stack, omega_pow(oj)))
            continue
        gap = height_gap(hs[path + (0,)], hs[path])
        seq_o[path] = ZERO if gap is None else omega_tower(gap, oj)
    return OrdinalAnnotation(seq_o, rule_o, hs)


def proof_ordinal(proof: Preproof, sck: Optional[StackAssignment] = None) -> OrdTerm:
    return assign_ordinals(proof, sck).proof_ordinal


# ============================================================================ #
#                          DESCENDANTS AND STRUCTURE                           #
# ============================================================================ #

Occurrence = Tuple[Path, Formula]


def descendants(occurrence: Occurrence, proof: Preproof) -> Set[Occurrence]:
    """All occurrences reachable downwards from (path, formula), itself included."""
    result = {occurrence}
    frontier = [occurrence]
    while frontier:
        path, f = frontier.pop()
        if not path:
            continue
        parent_path = path[:-1]
        node = node_at(proof.root, parent_path)
        for g in descend(node.rule, node.sequent, path[-1], f):
            occ = (parent_path, g)
            if occ not in result:
                result.add(occ)
                frontier.append(occ)
    return result


def ancestors(occurrence: Occurrence, proof: Preproof) -> Set[Occurrence]:
    """All occurrences above that descend to the given one, itself included."""
    path, f = occurrence
    result = {occurrence}
    node = node_at(proof.root, path)
    for i, child in enumerate(node.children):
        for g in child.sequent:
            if f in descend(node.rule, node.sequent, i, g):
                result |= ancestors((path + (i,), g), proof)
    return result


class _CutTracer:
    """Memoised 'does this occurrence descend to a cut formula' queries."""

    def __init__(self, proof: Preproof):
        self.proof = proof
        self.memo: Dict[Occurrence, Optional[Path]] = {}

    def cut_below(self, path: Path, f: Formula) -> Optional[Path]:
        """Path of the uppermost cut consuming a descendant of (path, f), if any."""
        key = (path, f)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None
        result = None
        if path:
            parent = path[:-1]
            node = node_at(self.proof.root, parent)
            i = path[-1]
            if node.rule.tag == CUT and f == premise_minor(node.rule, i):
                result = parent
            else:
                for g in descend(node.rule, node.sequent, i, f):
                    result = self.cut_below(parent, g)
                    if result is not None:
                        break
        self.memo[key] = result
        return result


@dataclass
class ProofStructure:
    implicit_rules: Set[Path]
    explicit_rules: Set[Path]
    explicit_part: Set[Path]
    bar_sequents: Set[Path]
    end_pieces: Dict[Path, Set[Path]]
    boundary_rules: Set[Path]
    suitable_triangles: List[Tuple[Path, Path, Path]]

    def end_piece_of(self, path: Path) -> Optional[Path]:
        for bar, piece in self.end_pieces.items():
            if path in piece:
                return bar
        return None


def structure(proof: Preproof) -> ProofStructure:
    """Explicit part, bar sequents, end-pieces, boundary rules and suitable triangles."""
    tracer = _CutTracer(proof)
    nodes = dict(iter_nodes(proof.root))
    implicit, explicit = set(), set()
    for path, node in nodes.items():
        if node.rule.tag in MAIN_FORMULA_TAGS:
            if tracer.cut_below(path, node.rule.main) is not None:
                implicit.add(path)
            else:
                explicit.add(path)

    def passable(path: Path) -> bool:
        return path in explicit or nodes[path].rule.tag == TH

    explicit_part = set()
    for path, node in nodes.items():
        if not (passable(path) or node.rule.tag == AX):
            continue
        if all(passable(path[:k]) for k in range(len(path))):
            explicit_part.add(path)

    bars = set()
    for path in nodes:
        if path in explicit_part:
            continue
        if not path or (passable(path[:-1]) and path[:-1] in explicit_part):
            bars.add(path)

    pieces: Dict[Path, Set[Path]] = {}
    for bar in bars:
        piece, frontier = set(), [bar]
        while frontier:
            p = frontier.pop()
            piece.add(p)
            if p in implicit:
                continue
            frontier.extend(p + (i,) for i in range(len(nodes[p].children)))
        pieces[bar] = piece

    in_pieces = set().union(*pieces.values()) if pieces else set()
    boundary = {p for p in implicit if p in in_pieces}

    triangles = []
    by_cut: Dict[Path, Dict[int, List[Path]]] = {}
    for j in sorted(boundary):
        cut = tracer.cut_below(j, nodes[j].rule.main)
        if cut is None:
            continue
        by_cut.setdefault(cut, {}).setdefault(j[len(cut)], []).append(j)
    for cut, sides in sorted(by_cut.items()):
        node = nodes[cut]
        a = node.rule.cut
        if a in node.sequent or negate(a) in node.sequent:
            continue
        for j_left in sides.get(0, []):
            for j_right in sides.get(1, []):
                j_univ, j_ex = _orient(nodes, j_left, j_right)
                if j_univ is not None:
                    triangles.append((j_univ, j_ex, cut))
    return ProofStructure(implicit, explicit, explicit_part, bars, pieces, boundary, triangles)


def _orient(nodes, j_left: Path, j_right: Path) -> Tuple[Optional[Path], Optional[Path]]:
    tl, tr = nodes[j_left].rule.tag, nodes[j_right].rule.tag
    if tl in UNIVERSAL_TAGS and tr in EXISTENTIAL_TAGS:
        return j_left, j_right
    if tr in UNIVERSAL_TAGS and tl in EXISTENTIAL_TAGS:
        return j_right, j_left
    return None, None


# ============================================================================ #
#                              PROOF CONDITIONS                                #
# ============================================================================ #

def _red_series_ok(proof: Preproof, report: CheckReport):
    nodes = dict(iter_nodes(proof.root))
    for path, node in nodes.items():
        if node.rule.tag not in RED_TAGS:
            continue
        below = path[:-1] if path else None
        if below is not None and nodes[below].rule.tag in RED_TAGS:
            continue
        # path is the lowest rule of its series; walk upwards
        series = [path]
        while nodes[series[-1]].children and nodes[series[-1]].children[0].rule.tag in RED_TAGS:
            series.append(series[-1] + (0,))
        tags = [nodes[p].rule.tag for p in reversed(series)]
        seen_ex = False
        for t in tags:
            if t == EX_RED:
                seen_ex = True
            elif seen_ex:
                report.add(path, t, "2", "a ∀^I-reduction sits below an ∃^I-reduction in one series")
                break
        if tags[-1] != EX_RED:
            report.add(path, tags[-1], "2", "a reduction series must end with an ∃^I-reduction")


def indices_above(proof: Preproof, path: Path, ann: OrdinalAnnotation) -> Set[OrdTerm]:
    """Ordinals counted as indices occurring above the rule at path."""
    result: Set[OrdTerm] = set()
    for p, node in iter_nodes(proof.root):
        if not (len(p) > len(path) and p[:len(path)] == path):
            continue
        for f in node.sequent:
            result |= formula_index_set(f)
        rule = node.rule
        if rule.tag == EX_RED:
            result.add(rule.eta)
            if rule.stack is not None and p in ann.rule:
                result.add(Psi(I, natural_sum(rule.stack, omega_pow(ann.rule[p]))))
    return result


def check_proof(proof: Preproof, sck: Optional[StackAssignment] = None) -> CheckReport:
    """The preproof checks plus the seven conditions on a proof with stacks."""
    if sck is not None:
        proof = apply_stacks(proof, sck)
    report = check_preproof(proof)
    if not report.ok:
        return report

    for a in proof.end_sequent:
        if not is_first_order(a) or not is_stratified(a):
            report.add((), "end", "1", f"{a} is not a stratified first-order formula")
        elif od(strat_level(PI, a)) != ZERO:
            report.add((), "end", "1", f"st_Π({a}) ≠ 0")

    try:
        ann = assign_ordinals(proof)
    except (CheckError, InvalidTerm) as e:
        report.add(getattr(e, "path", ()), "ordinal", "stack", str(e))
        return report

    nodes = dict(iter_nodes(proof.root))
    hs = ann.height
    for path, node in nodes.items():
        for i in range(len(node.children)):
            if hs[path] < HEIGHT_OMEGA <= hs[path + (i,)]:
                vacuous = node.rule.tag == EX_RED and node.children[0].sequent == node.sequent
                if not vacuous:
                    report.add(path, node.rule.tag, "2", "the height drops below ω at a rule other than a vacuous ∃^I-reduction")
    _red_series_ok(proof, report)

    for path, node in nodes.items():
        rule = node.rule
        if rule.tag not in (SUB, EX_RED):
            continue
        gamma = rule.stack
        alpha = ann.rule[path]
        reg = I if rule.tag == EX_RED else level_regular(rule.index)
        bound = Psi(reg, gamma)
        for s in sorted(indices_above(proof, path, ann), key=str):
            if not in_hull(s, gamma, bound):
                report.add(path, rule.tag, "3", f"index {s} is outside H_γ(ψ_σγ) for γ = {gamma}")
                break
        for member, name in ((gamma, "stack"), (alpha, "o(J)")):
            if not in_hull(member, gamma, bound):
                report.add(path, rule.tag, "3", f"{name} {member} is outside H_γ(ψ_σγ)")
        if rule.tag == EX_RED:
            least = Psi(I, natural_sum(gamma, omega_pow(alpha)))
            if compare(rule.eta, least) == Ordering.LT:
                report.add(path, rule.tag, "4", f"type {rule.eta} is below ψ_I(γ#ω^α) = {least}")
        else:
            if compare(ann.sequent[path + (0,)], I) != Ordering.LT:
                report.add(path, SUB, "3", "the upper sequent of a substitution has ordinal ≥ I")

    st = structure(proof)
    in_piece = set().union(*st.end_pieces.values()) if st.end_pieces else set()
    tracer = _CutTracer(proof)
    for path, node in nodes.items():
        if node.rule.tag != SUB:
            continue
        if path not in in_piece:
            report.add(path, SUB, "5", "substitution outside every end-piece")
        upper = path + (0,)
        for f in node.children[0].sequent:
            if tracer.cut_below(upper, f) is None and node.rule.eigen in _so_names(f):
                report.add(path, SUB, "6", f"eigenvariable {node.rule.eigen} occurs in explicit formula {f}")
    for bar in sorted(st.bar_sequents):
        node = nodes[bar]
        rule = node.rule
        vacuous = (rule.tag == SUB and rule.index is not None and od(rule.index) == ZERO
                   and node.children[0].sequent == node.sequent
                   and rule.eigen not in sequent_so_names(node.sequent))
        if not vacuous:
            report.add(bar, rule.tag, "7", "bar sequent is not the lower sequent of a vacuous (sub)⁰")

    if report.ok and compare(ann.proof_ordinal, omega_index(ONE)) != Ordering.LT:
        report.add((), "ordinal", "bound", f"o(P) = {ann.proof_ordinal} is not below Ω_1")
    return report
