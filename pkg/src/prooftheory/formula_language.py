"""
Second-order formulas of the base language L and the stratified language L′.

Formulas are immutable dataclasses in negation normal form: negation only
lives on literals and `negate` pushes it through with de Morgan's laws.
L-formulas carry no indices; L′-formulas carry an Index on free
second-order variables and an Fx ordinal on undistinguished quantifiers.
"""

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Set, Tuple, Union

from src.prooftheory.errors import CheckError, InvalidTerm
from src.prooftheory.ordinal_notation import (
    CACHE_SIZE, I, ZERO, OrdTerm, Ordering, compare, is_fixpoint, ord_max, succ,
)

ALL = "all"
EX = "ex"
PI = "pi"
SIGMA = "sigma"

# relation constant substituted for a bound variable when grading and stratifying
DEFAULT_RELATION = "R"


# ============================================================================ #
#                              FIRST-ORDER TERMS                               #
# ============================================================================ #

@dataclass(frozen=True)
class FoName:
    """An individual constant or variable."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FoApp:
    fn: str
    args: Tuple["FoTerm", ...]

    def __str__(self) -> str:
        return "(" + " ".join([self.fn] + [str(a) for a in self.args]) + ")"


FoTerm = Union[FoName, FoApp]


def term_names(t: FoTerm) -> FrozenSet[str]:
    if isinstance(t, FoName):
        return frozenset([t.name])
    return frozenset().union(*[term_names(a) for a in t.args])


def subst_term(t: FoTerm, name: str, value: FoTerm) -> FoTerm:
    if isinstance(t, FoName):
        return value if t.name == name else t
    return FoApp(t.fn, tuple(subst_term(a, name, value) for a in t.args))


# ============================================================================ #
#                                   INDICES                                    #
# ============================================================================ #

@dataclass(frozen=True)
class IndexZero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class FixAtom:
    """A constant index drawn from the Ω-fixed points."""
    value: OrdTerm

    def __str__(self) -> str:
        return f"(fix {self.value})"


@dataclass(frozen=True)
class IndexVar:
    """The stratified variable U^fix used inside an index."""
    name: str
    fix: OrdTerm

    def __str__(self) -> str:
        return f"(iv {self.name} {self.fix})"


@dataclass(frozen=True)
class IndexSucc:
    inner: "Index"

    def __str__(self) -> str:
        return f"(succ {self.inner})"


@dataclass(frozen=True)
class IndexMax:
    """max over two or more indices; built only through index_max."""
    args: Tuple["Index", ...]

    def __str__(self) -> str:
        return "(max " + " ".join(str(a) for a in self.args) + ")"


Index = Union[IndexZero, FixAtom, IndexVar, IndexSucc, IndexMax]

INDEX_ZERO = IndexZero()


def fix_atom(value: OrdTerm) -> Index:
    if value == ZERO:
        return INDEX_ZERO
    if not is_fixpoint(value):
        raise InvalidTerm(f"index constant {value} is not an Ω-fixed point")
    return FixAtom(value)


def index_var(name: str, fix: OrdTerm) -> IndexVar:
    if not is_fixpoint(fix):
        raise InvalidTerm(f"index of variable {name} must be an Ω-fixed point, got {fix}")
    return IndexVar(name, fix)


def index_succ(s: Index) -> Index:
    return IndexSucc(s)


def index_max(*indices: Index) -> Index:
    """Flattened, duplicate-free max; 0 stays an argument so that I(s) keeps it."""
    flat = []
    for s in indices:
        flat.extend(s.args if isinstance(s, IndexMax) else [s])
    unique = sorted(set(flat), key=str)
    if not unique:
        return INDEX_ZERO
    if len(unique) == 1:
        return unique[0]
    return IndexMax(tuple(unique))


@lru_cache(maxsize=CACHE_SIZE)
def od(s: Index) -> OrdTerm:
    """The ordinal denoted by an index; I exactly when some U^I occurs."""
    if isinstance(s, IndexZero):
        return ZERO
    if isinstance(s, FixAtom):
        return s.value
    if isinstance(s, IndexVar):
        return s.fix
    if isinstance(s, IndexSucc):
        inner = od(s.inner)
        return I if inner == I else succ(inner)
    result = ZERO
    for a in s.args:
        result = ord_max(result, od(a))
    return result


def index_set(s: Index) -> FrozenSet[OrdTerm]:
    if isinstance(s, IndexZero):
        return frozenset([ZERO])
    if isinstance(s, FixAtom):
        return frozenset([s.value])
    if isinstance(s, IndexVar):
        return frozenset([s.fix])
    if isinstance(s, IndexSucc):
        return index_set(s.inner)
    return frozenset().union(*[index_set(a) for a in s.args])


def index_vars(s: Index) -> FrozenSet[IndexVar]:
    if isinstance(s, IndexVar):
        return frozenset([s])
    if isinstance(s, IndexSucc):
        return index_vars(s.inner)
    if isinstance(s, IndexMax):
        return frozenset().union(*[index_vars(a) for a in s.args])
    return frozenset()


def index_measures(s: Index) -> Tuple[OrdTerm, FrozenSet[OrdTerm], FrozenSet[str]]:
    """
    Input:
        s (Index): a valid index
    Output:
        (od(s), I(s), Var(s)) with Var(s) given by variable names
    """
    return od(s), index_set(s), frozenset(v.name for v in index_vars(s))


def is_closed(s: Index) -> bool:
    return not index_vars(s)


def substitute_in_index(s: Index, target: IndexVar, value: Index) -> Index:
    if s == target:
        return value
    if isinstance(s, IndexSucc):
        return index_succ(substitute_in_index(s.inner, target, value))
    if isinstance(s, IndexMax):
        return index_max(*[substitute_in_index(a, target, value) for a in s.args])
    return s


# ============================================================================ #
#                                   FORMULAS                                   #
# ============================================================================ #

@dataclass(frozen=True)
class RelConst:
    """A relation constant; in L′ it implicitly carries index 0."""
    name: str


@dataclass(frozen=True)
class SecondVar:
    """A free second-order variable, with an index in L′."""
    name: str
    index: Optional[Index] = None


@dataclass(frozen=True)
class BoundVarRef:
    name: str


Predicate = Union[RelConst, SecondVar, BoundVarRef]


@dataclass(frozen=True)
class Literal:
    positive: bool
    pred: Predicate
    arg: FoTerm

    def __str__(self) -> str:
        p = self.pred
        if isinstance(p, RelConst):
            atom = f"(rel {p.name} {self.arg})"
        elif isinstance(p, SecondVar) and p.index is not None:
            atom = f"(var {p.name} {p.index} {self.arg})"
        else:
            atom = f"(var {p.name} {self.arg})"
        return atom if self.positive else f"(not {atom})"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"(and {self.left} {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"(or {self.left} {self.right})"


@dataclass(frozen=True)
class FoQuant:
    kind: str
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return f"({self.kind} {self.var} {self.body})"


@dataclass(frozen=True)
class SoQuant:
    """∀X / ∃X; `index` is None on distinguished (and on all L) quantifiers."""
    kind: str
    var: str
    index: Optional[OrdTerm]
    body: "Formula"

    def __str__(self) -> str:
        head = "All" if self.kind == ALL else "Ex"
        if self.index is None:
            return f"({head} {self.var} {self.body})"
        return f"({head} {self.var} {self.index} {self.body})"


@dataclass(frozen=True)
class Abstraction:
    """The class term {x : body} used as a substitution instance."""
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return f"(lam {self.var} {self.body})"


Formula = Union[Literal, And, Or, FoQuant, SoQuant]
Instance = Union[Abstraction, RelConst, SecondVar]
Sequent = FrozenSet[Formula]


def _dual(kind: str) -> str:
    return EX if kind == ALL else ALL


def negate(a: Formula) -> Formula:
    if isinstance(a, Literal):
        return Literal(not a.positive, a.pred, a.arg)
    if isinstance(a, And):
        return Or(negate(a.left), negate(a.right))
    if isinstance(a, Or):
        return And(negate(a.left), negate(a.right))
    if isinstance(a, FoQuant):
        return FoQuant(_dual(a.kind), a.var, negate(a.body))
    return SoQuant(_dual(a.kind), a.var, a.index, negate(a.body))


def children(a: Formula) -> Tuple[Formula, ...]:
    if isinstance(a, (And, Or)):
        return (a.left, a.right)
    if isinstance(a, (FoQuant, SoQuant)):
        return (a.body,)
    return ()


def subformulas(a: Formula) -> Iterable[Formula]:
    yield a
    for c in children(a):
        yield from subformulas(c)


def literals(a: Formula) -> Iterable[Literal]:
    return (f for f in subformulas(a) if isinstance(f, Literal))


def is_first_order(a: Formula) -> bool:
    return not any(isinstance(f, SoQuant) for f in subformulas(a))


def is_prime(a: Formula) -> bool:
    return isinstance(a, Literal)


# ---------------------------------------------------------------------- #
#                          Names and freshness                           #
# ---------------------------------------------------------------------- #

def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    root = base.rstrip("0123456789") or base
    for i in itertools.count(1):
        candidate = f"{root}{i}"
        if candidate not in avoid:
            return candidate


def free_fo_names(a: Union[Formula, Abstraction]) -> FrozenSet[str]:
    if isinstance(a, Abstraction):
        return free_fo_names(a.body) - {a.var}
    if isinstance(a, Literal):
        return term_names(a.arg)
    if isinstance(a, FoQuant):
        return free_fo_names(a.body) - {a.var}
    return frozenset().union(*[free_fo_names(c) for c in children(a)])


def all_fo_names(a: Formula) -> FrozenSet[str]:
    names = set()
    for f in subformulas(a):
        if isinstance(f, Literal):
            names |= term_names(f.arg)
        elif isinstance(f, FoQuant):
            names.add(f.var)
    return frozenset(names)


def part_variables(a: Union[Formula, Abstraction]) -> FrozenSet[SecondVar]:
    """Free second-order variables occurring as a part of the formula (with their indices)."""
    if isinstance(a, Abstraction):
        a = a.body
    return frozenset(f.pred for f in literals(a) if isinstance(f.pred, SecondVar))


def free_so_vars(a: Union[Formula, Abstraction]) -> FrozenSet[str]:
    return frozenset(v.name for v in part_variables(a))


def index_occurrences(a: Formula) -> Iterable[Index]:
    """Every index of a free variable in a."""
    return (v.index for v in part_variables(a) if v.index is not None)


def variables_in_indices(a: Formula) -> FrozenSet[IndexVar]:
    result = frozenset()
    for s in index_occurrences(a):
        result = result | index_vars(s)
    return result


def all_so_names(a: Union[Formula, Abstraction]) -> FrozenSet[str]:
    if isinstance(a, Abstraction):
        a = a.body
    names = {v.name for v in part_variables(a)} | {v.name for v in variables_in_indices(a)}
    names |= {f.var for f in subformulas(a) if isinstance(f, SoQuant)}
    return frozenset(names)


def formula_index_set(a: Formula) -> FrozenSet[OrdTerm]:
    """I(A): the union of I(s) over indices of free variables and quantifier indices in A."""
    result = set()
    for s in index_occurrences(a):
        result |= index_set(s)
    for f in subformulas(a):
        if isinstance(f, SoQuant) and f.index is not None:
            result.add(f.index)
    return frozenset(result)


# ---------------------------------------------------------------------- #
#                            Substitution                                #
# ---------------------------------------------------------------------- #

def _rename_fo_binder(q: FoQuant, avoid: Iterable[str]) -> FoQuant:
    new = fresh_name(q.var, set(avoid) | all_fo_names(q.body))
    return FoQuant(q.kind, new, subst_fo(q.body, q.var, FoName(new)))


def subst_fo(a: Formula, name: str, value: FoTerm) -> Formula:
    """A[value/name] on free occurrences, renaming binders that would capture."""
    if isinstance(a, Literal):
        return Literal(a.positive, a.pred, subst_term(a.arg, name, value))
    if isinstance(a, (And, Or)):
        return type(a)(subst_fo(a.left, name, value), subst_fo(a.right, name, value))
    if isinstance(a, FoQuant):
        if a.var == name:
            return a
        if a.var in term_names(value):
            a = _rename_fo_binder(a, term_names(value) | {name})
        return FoQuant(a.kind, a.var, subst_fo(a.body, name, value))
    return SoQuant(a.kind, a.var, a.index, subst_fo(a.body, name, value))


def _rename_bound_so(a: Formula, old: str, new: str) -> Formula:
    if isinstance(a, Literal):
        if isinstance(a.pred, BoundVarRef) and a.pred.name == old:
            return Literal(a.positive, BoundVarRef(new), a.arg)
        return a
    if isinstance(a, (And, Or)):
        return type(a)(_rename_bound_so(a.left, old, new), _rename_bound_so(a.right, old, new))
    if isinstance(a, FoQuant):
        return FoQuant(a.kind, a.var, _rename_bound_so(a.body, old, new))
    if a.var == old:
        return a
    return SoQuant(a.kind, a.var, a.index, _rename_bound_so(a.body, old, new))


def apply_instance(inst: Instance, arg: FoTerm, positive: bool = True) -> Formula:
    """T t for a predicate T, or body[t/x] for {x : body}; negated when positive is False."""
    if isinstance(inst, Abstraction):
        body = subst_fo(inst.body, inst.var, arg)
        return body if positive else negate(body)
    return Literal(positive, inst, arg)


def _instance_names(inst: Instance) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    if isinstance(inst, Abstraction):
        return free_fo_names(inst), all_so_names(inst)
    return frozenset(), frozenset([inst.name])


def replace_predicate(a: Formula, target: Predicate, inst: Instance) -> Formula:
    """Replace every literal T t (¬T t) with T == target by inst(t) (its negation)."""
    fo_avoid, so_avoid = _instance_names(inst)
    return _replace(a, target, inst, fo_avoid, so_avoid)


def _replace(a, target, inst, fo_avoid, so_avoid):
    if isinstance(a, Literal):
        if a.pred == target:
            return apply_instance(inst, a.arg, a.positive)
        return a
    if isinstance(a, (And, Or)):
        return type(a)(_replace(a.left, target, inst, fo_avoid, so_avoid),
                       _replace(a.right, target, inst, fo_avoid, so_avoid))
    if isinstance(a, FoQuant):
        if a.var in fo_avoid:
            a = _rename_fo_binder(a, fo_avoid)
        return FoQuant(a.kind, a.var, _replace(a.body, target, inst, fo_avoid, so_avoid))
    if isinstance(target, BoundVarRef) and a.var == target.name:
        return a
    if a.var in so_avoid:
        new = fresh_name(a.var, set(so_avoid) | all_so_names(a.body))
        a = SoQuant(a.kind, new, a.index, _rename_bound_so(a.body, a.var, new))
    return SoQuant(a.kind, a.var, a.index, _replace(a.body, target, inst, fo_avoid, so_avoid))


def subst_pred(f: Formula, inst: Instance, var: str) -> Formula:
    """F[A/X]: Xt becomes A[t/x] and ¬Xt becomes ¬A[t/x]."""
    return replace_predicate(f, BoundVarRef(var), inst)


def open_quantifier(q: SoQuant, inst: Instance) -> Formula:
    return subst_pred(q.body, inst, q.var)


def subst_free_var(a: Formula, var: SecondVar, inst: Instance) -> Formula:
    """Γ[A/U^s] for a single formula: replace part occurrences of var."""
    return replace_predicate(a, var, inst)


def zero_instance(q: SoQuant) -> Formula:
    """F[R⁰/X] for QX F."""
    return open_quantifier(q, RelConst(DEFAULT_RELATION))


def contained(a: Instance, b: Instance) -> Formula:
    """a ⊂ b, i.e. ∀x(¬a(x) ∨ b(x))."""
    names = set()
    for inst in (a, b):
        if isinstance(inst, Abstraction):
            names |= all_fo_names(inst.body) | {inst.var}
    x = fresh_name("x", names)
    return FoQuant(ALL, x, Or(apply_instance(a, FoName(x), False), apply_instance(b, FoName(x), True)))


def separation_formula(a: Instance, b: Instance, var: str = "X", index: Optional[OrdTerm] = None) -> SoQuant:
    """∃X(a ⊂ X ⊂ b)."""
    x = BoundVarRef(var)
    return SoQuant(EX, var, index, And(contained(a, x), contained(x, b)))


def match_separation(a: Formula) -> Optional[Tuple[Abstraction, Abstraction]]:
    """Recover (A, B) from a formula of the shape ∃X(A ⊂ X ⊂ B)."""
    if not (isinstance(a, SoQuant) and a.kind == EX and isinstance(a.body, And)):
        return None
    x = BoundVarRef(a.var)
    lower, upper = a.body.left, a.body.right
    for side in (lower, upper):
        if not (isinstance(side, FoQuant) and side.kind == ALL and isinstance(side.body, Or)):
            return None
    # lower: ∀x(¬A(x) ∨ Xx), upper: ∀x(¬Xx ∨ B(x))
    if lower.body.right != Literal(True, x, FoName(lower.var)):
        return None
    if upper.body.left != Literal(False, x, FoName(upper.var)):
        return None
    return Abstraction(lower.var, negate(lower.body.left)), Abstraction(upper.var, upper.body.right)


# ============================================================================ #
#                                CLASSIFICATION                                #
# ============================================================================ #

@dataclass(frozen=True)
class Classification:
    pi: bool
    sigma: bool
    vt: FrozenSet[str]
    distinguished: FrozenSet[Tuple[int, ...]]


def _tied(a: Formula, inside: bool, bound: FrozenSet[str]) -> Set[str]:
    if isinstance(a, Literal):
        p = a.pred
        if inside and not isinstance(p, RelConst) and p.name not in bound:
            return {p.name}
        return set()
    if isinstance(a, SoQuant):
        return _tied(a.body, True, bound | {a.var})
    result = set()
    for c in children(a):
        result |= _tied(c, inside, bound)
    return result


def vt(a: Formula) -> FrozenSet[str]:
    """Second-order variables free in a that occur inside the scope of a second-order quantifier."""
    return frozenset(_tied(a, False, frozenset()))


@lru_cache(maxsize=CACHE_SIZE)
def _classify(a: Formula) -> Tuple[bool, bool, FrozenSet[Tuple[int, ...]]]:
    if isinstance(a, Literal):
        return True, True, frozenset()
    if isinstance(a, (And, Or)):
        p0, s0, d0 = _classify(a.left)
        p1, s1, d1 = _classify(a.right)
        dist = frozenset((0,) + x for x in d0) | frozenset((1,) + x for x in d1)
        return p0 and p1, s0 and s1, dist
    p, s, d = _classify(a.body)
    inner = frozenset((0,) + x for x in d)
    untied = a.var not in vt(a.body)
    if isinstance(a, FoQuant):
        return p, s, inner
    if a.kind == ALL:
        here = p and untied
        return p, p and s and untied, inner | ({()} if here else set())
    here = s and untied
    return p and s and untied, s, inner | ({()} if here else set())


def classify(a: Formula) -> Classification:
    """
    Input:
        a (Formula): any formula; indices are ignored
    Output:
        Classification: membership in Π¹₂ and Σ¹₂, the tied variables and the
        addresses (child-index paths) of the distinguished quantifiers
    """
    pi, sigma, dist = _classify(erase(a))
    return Classification(pi, sigma, vt(a), dist)


def is_pi(a: Formula) -> bool:
    return classify(a).pi


def is_sigma(a: Formula) -> bool:
    return classify(a).sigma


def is_distinguished(q: SoQuant) -> bool:
    return () in classify(q).distinguished


# ============================================================================ #
#                                    GRADES                                    #
# ============================================================================ #

@dataclass(frozen=True, order=True)
class Height:
    """A value below ω+ω: `omega` is 0 or 1, `finite` the natural part."""
    omega: int = 0
    finite: int = 0

    @property
    def infinite(self) -> bool:
        return self.omega > 0

    def __str__(self) -> str:
        return f"w+{self.finite}" if self.omega else str(self.finite)


HEIGHT_ZERO = Height(0, 0)
HEIGHT_OMEGA = Height(1, 0)


def height_gap(upper: Height, lower: Height) -> Optional[int]:
    """m with upper = lower + m, or None when upper crosses ω and lower does not."""
    if upper.omega != lower.omega:
        return None
    return upper.finite - lower.finite


def has_i_quantifier(a: Formula) -> bool:
    return any(isinstance(f, SoQuant) and f.index == I for f in subformulas(a))


@lru_cache(maxsize=CACHE_SIZE)
def big_grade(a: Formula) -> int:
    if not has_i_quantifier(a):
        return 0
    if isinstance(a, (And, Or)):
        return max(big_grade(a.left), big_grade(a.right)) + 1
    if isinstance(a, FoQuant):
        return big_grade(a.body) + 1
    if isinstance(a, SoQuant):
        if a.index is None:
            return 1
        if a.index == I:
            return max(2, big_grade(zero_instance(a)) + 1)
        return big_grade(zero_instance(a)) + 1
    return 0


@lru_cache(maxsize=CACHE_SIZE)
def small_grade(a: Formula) -> int:
    if isinstance(a, Literal):
        return 0
    if isinstance(a, (And, Or)):
        return max(small_grade(a.left), small_grade(a.right)) + 1
    if isinstance(a, FoQuant):
        return small_grade(a.body) + 1
    if a.index is None:
        return 0
    return small_grade(zero_instance(a)) + 1


def degree(a: Formula) -> Height:
    g = big_grade(a)
    if g == 0:
        return Height(0, small_grade(a))
    return Height(1, g - 1)


def grade(a: Formula) -> Tuple[int, int, Height]:
    """(Gr(A), gr(A), dg(A))"""
    return big_grade(a), small_grade(a), degree(a)


# ============================================================================ #
#                             STRATIFICATION LEVELS                            #
# ============================================================================ #

def strat_level(kind: str, a: Formula, eigen: Optional[str] = None) -> Index:
    """
    st_Π(A) or st_Σ(A) in the index algebra.

    Input:
        kind (str): PI or SIGMA
        a (Formula): an L′-formula in the requested class
        eigen (str, optional): when given, the I contributed by an
            undistinguished quantifier becomes the index variable eigen^I
    Output:
        Index
    """
    cls = classify(a)
    if (kind == PI and not cls.pi) or (kind == SIGMA and not cls.sigma):
        raise CheckError(f"st_{kind} undefined: {a} is not in the {kind} class", condition="class")
    return _st(kind, a, eigen)


def _st(kind: str, a: Formula, eigen: Optional[str]) -> Index:
    if isinstance(a, Literal):
        p = a.pred
        if isinstance(p, RelConst):
            return INDEX_ZERO
        if isinstance(p, SecondVar):
            if p.index is None:
                raise CheckError(f"free variable {p.name} carries no index", condition="index")
            return p.index
        raise CheckError(f"unbound second-order variable {p.name}", condition="index")
    if isinstance(a, (And, Or)):
        return index_max(_st(kind, a.left, eigen), _st(kind, a.right, eigen))
    if isinstance(a, FoQuant):
        return _st(kind, a.body, eigen)
    f0 = zero_instance(a)
    if a.index is None:
        own = PI if a.kind == ALL else SIGMA
        inner = _st(own, f0, eigen)
        return inner if kind == own else index_succ(inner)
    if (a.kind == ALL and kind == PI) or (a.kind == EX and kind == SIGMA):
        eta = index_var(eigen, I) if (eigen is not None and a.index == I) else fix_atom(a.index)
        return index_max(eta, _st(kind, f0, eigen))
    raise CheckError(f"st_{kind} undefined on an undistinguished {a.kind} quantifier", condition="class")


def is_stratified(a: Formula) -> bool:
    for v in part_variables(a):
        if v.index is None:
            continue
        if not is_closed(v.index) or compare(od(v.index), I) != Ordering.LT:
            return False
    return True


def is_sigma_i(a: Formula) -> bool:
    """No ∀^I occurs in a."""
    return not any(isinstance(f, SoQuant) and f.kind == ALL and f.index == I for f in subformulas(a))


# ============================================================================ #
#                                  REWRITERS                                   #
# ============================================================================ #

def map_part_variables(a: Formula, fn) -> Formula:
    """Rebuild a with every free-variable predicate v replaced by fn(v)."""
    if isinstance(a, Literal):
        if isinstance(a.pred, SecondVar):
            return Literal(a.positive, fn(a.pred), a.arg)
        return a
    if isinstance(a, (And, Or)):
        return type(a)(map_part_variables(a.left, fn), map_part_variables(a.right, fn))
    return replace(a, body=map_part_variables(a.body, fn))


def index_subst(a: Formula, value: Index, target: IndexVar) -> Formula:
    """A^[s/U^η]: replace U^η where it occurs inside an index; part occurrences are untouched."""
    def fn(v: SecondVar) -> SecondVar:
        if v.index is None:
            return v
        return SecondVar(v.name, substitute_in_index(v.index, target, value))
    return map_part_variables(a, fn)


def relabel(a: Formula, eta: OrdTerm, kind: str) -> Formula:
    """Replace every quantifier of the given kind indexed I by the same quantifier indexed eta."""
    if isinstance(a, Literal):
        return a
    if isinstance(a, (And, Or)):
        return type(a)(relabel(a.left, eta, kind), relabel(a.right, eta, kind))
    body = relabel(a.body, eta, kind)
    if isinstance(a, SoQuant) and a.kind == kind and a.index == I:
        return SoQuant(a.kind, a.var, eta, body)
    return replace(a, body=body)


def rename_part(a: Formula, old: str, new: str) -> Formula:
    """Replace the part occurrences of variable old by new, keeping indices."""
    return map_part_variables(a, lambda v: SecondVar(new, v.index) if v.name == old else v)


@dataclass(frozen=True)
class StratificationScheme:
    """Which index each free variable and each undistinguished quantifier receives."""
    quantifier_index: OrdTerm = I
    variable_indices: Mapping[str, Index] = None
    default_index: Optional[Index] = INDEX_ZERO

    def index_for(self, name: str) -> Index:
        if self.variable_indices and name in self.variable_indices:
            return self.variable_indices[name]
        if self.default_index is None:
            raise CheckError(f"stratification scheme has no index for {name}", condition="scheme")
        return self.default_index


def stratify(a: Formula, scheme: StratificationScheme = StratificationScheme()) -> Formula:
    """Attach indices to an L-formula, giving an L′-formula."""
    dist = classify(a).distinguished

    def go(f: Formula, addr: Tuple[int, ...]) -> Formula:
        if isinstance(f, Literal):
            if isinstance(f.pred, SecondVar):
                return Literal(f.positive, SecondVar(f.pred.name, scheme.index_for(f.pred.name)), f.arg)
            return f
        if isinstance(f, (And, Or)):
            return type(f)(go(f.left, addr + (0,)), go(f.right, addr + (1,)))
        body = go(f.body, addr + (0,))
        if isinstance(f, SoQuant):
            return SoQuant(f.kind, f.var, None if addr in dist else scheme.quantifier_index, body)
        return FoQuant(f.kind, f.var, body)

    return go(a, ())


def erase(a: Formula) -> Formula:
    """A^L: drop every index."""
    if isinstance(a, Literal):
        if isinstance(a.pred, SecondVar) and a.pred.index is not None:
            return Literal(a.positive, SecondVar(a.pred.name), a.arg)
        return a
    if isinstance(a, (And, Or)):
        return type(a)(erase(a.left), erase(a.right))
    if isinstance(a, FoQuant):
        return FoQuant(a.kind, a.var, erase(a.body))
    return SoQuant(a.kind, a.var, None, erase(a.body))


def erase_instance(inst: Instance) -> Instance:
    if isinstance(inst, Abstraction):
        return Abstraction(inst.var, erase(inst.body))
    if isinstance(inst, SecondVar):
        return SecondVar(inst.name)
    return inst


def attach_index_zero(a: Formula) -> Formula:
    """Γ⁰ for a first-order formula: every free variable gets index 0."""
    return stratify(a, StratificationScheme(default_index=INDEX_ZERO))


def index_names(a: Formula) -> Dict[str, Index]:
    """Name → index for the free variables of a (last occurrence wins)."""
    return {v.name: v.index for v in part_variables(a)}


def rename_in_index(s: Index, old: str, new: str) -> Index:
    if isinstance(s, IndexVar):
        return IndexVar(new, s.fix) if s.name == old else s
    if isinstance(s, IndexSucc):
        return index_succ(rename_in_index(s.inner, old, new))
    if isinstance(s, IndexMax):
        return index_max(*[rename_in_index(a, old, new) for a in s.args])
    return s


def rename_variable(a: Formula, old: str, new: str) -> Formula:
    """Rename a free second-order variable, both as a part and inside indices."""
    def fn(v: SecondVar) -> SecondVar:
        index = rename_in_index(v.index, old, new) if v.index is not None else None
        return SecondVar(new if v.name == old else v.name, index)
    return map_part_variables(a, fn)
