"""
Ordinal Notation System

Canonical terms for the ordinals generated from {0, I} by natural sums,
ω-exponentiation, Ω-indexing and the collapsing functions ψ_σ with
σ ∈ {I} ∪ {Ω_{μ+1} : μ < I}. Terms are immutable and canonical, so two
terms denote the same ordinal exactly when they are equal as values.
"""

from dataclasses import dataclass
from enum import IntEnum
from functools import cmp_to_key, lru_cache
from itertools import combinations_with_replacement
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from src.prooftheory.errors import InvalidTerm


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


# ============================================================================ #
#                                 TERM TYPES                                   #
# ============================================================================ #

@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class IConst:
    """The weakly inaccessible I."""

    def __str__(self) -> str:
        return "I"


@dataclass(frozen=True)
class OmegaPow:
    """ω^exponent; the exponent is never an epsilon-form term."""
    exponent: "OrdTerm"

    def __str__(self) -> str:
        return f"(w {self.exponent})"


@dataclass(frozen=True)
class OmegaIndex:
    """Ω_index for a nonzero index below I that is not an Ω-fixed point."""
    index: "OrdTerm"

    def __str__(self) -> str:
        return f"(W {self.index})"


@dataclass(frozen=True)
class OmegaSucc:
    """The regular cardinal Ω_{mu+1}."""
    mu: "OrdTerm"

    def __str__(self) -> str:
        return f"(W {succ(self.mu)})"


@dataclass(frozen=True)
class Psi:
    reg: "RegularTerm"
    arg: "OrdTerm"

    def __str__(self) -> str:
        return f"(p {self.reg} {self.arg})"


@dataclass(frozen=True)
class Sum:
    """Natural sum of at least two principal terms in non-increasing order."""
    components: Tuple["OrdTerm", ...]

    def __str__(self) -> str:
        return "(+ " + " ".join(str(c) for c in self.components) + ")"


OrdTerm = Union[Zero, IConst, OmegaPow, OmegaIndex, Psi, Sum]
RegularTerm = Union[IConst, OmegaSucc]

ZERO = Zero()
I = IConst()
ONE = OmegaPow(ZERO)

# entries kept by each memoised comparison and hull computation
CACHE_SIZE = 1 << 16
OMEGA = OmegaPow(ONE)


def is_epsilon_form(t: OrdTerm) -> bool:
    return isinstance(t, (IConst, OmegaIndex, Psi))


def is_principal(t: OrdTerm) -> bool:
    return not isinstance(t, (Zero, Sum))


def components(t: OrdTerm) -> Tuple[OrdTerm, ...]:
    if isinstance(t, Zero):
        return ()
    if isinstance(t, Sum):
        return t.components
    return (t,)


def _from_components(comps: List[OrdTerm]) -> OrdTerm:
    if not comps:
        return ZERO
    if len(comps) == 1:
        return comps[0]
    return Sum(tuple(comps))


# ============================================================================ #
#                                 COMPARISON                                   #
# ============================================================================ #

def _flip(c: Ordering) -> Ordering:
    return Ordering(-int(c))


@lru_cache(maxsize=CACHE_SIZE)
def compare(a: OrdTerm, b: OrdTerm) -> Ordering:
    """
    Compare two canonical terms.

    Input:
        a, b (OrdTerm): valid terms
    Output:
        Ordering: LT, EQ or GT for the denoted ordinals
    Explanation:
        Sums are compared lexicographically on their components. Principal
        terms use ω^α < E ⇔ α < E for epsilon-forms E, the sandwich
        Ω_μ < ψ_{Ω_{μ+1}}β < Ω_{μ+1}, ψ_{Ω_{μ+1}}β < ψ_Iγ ⇔ μ < ψ_Iγ and
        ψ_Iγ = Ω_{ψ_Iγ}.
    """
    if a == b:
        return Ordering.EQ
    if isinstance(a, Zero):
        return Ordering.LT
    if isinstance(b, Zero):
        return Ordering.GT
    if isinstance(a, Sum) or isinstance(b, Sum):
        ca, cb = components(a), components(b)
        for x, y in zip(ca, cb):
            c = compare(x, y)
            if c != Ordering.EQ:
                return c
        if len(ca) == len(cb):
            return Ordering.EQ
        return Ordering.LT if len(ca) < len(cb) else Ordering.GT
    return _compare_principal(a, b)


def _compare_principal(a: OrdTerm, b: OrdTerm) -> Ordering:
    if isinstance(a, OmegaPow):
        if isinstance(b, OmegaPow):
            return compare(a.exponent, b.exponent)
        return compare(a.exponent, b)
    if isinstance(b, OmegaPow):
        return compare(a, b.exponent)
    return _compare_epsilon(a, b)


def _compare_epsilon(a: OrdTerm, b: OrdTerm) -> Ordering:
    if isinstance(a, IConst):
        return Ordering.GT
    if isinstance(b, IConst):
        return Ordering.LT
    if isinstance(a, OmegaIndex):
        if isinstance(b, OmegaIndex):
            return compare(a.index, b.index)
        return _compare_omega_psi(a, b)
    if isinstance(b, OmegaIndex):
        return _flip(_compare_omega_psi(b, a))
    return _compare_psi_psi(a, b)


def _compare_omega_psi(a: OmegaIndex, b: Psi) -> Ordering:
    if isinstance(b.reg, IConst):
        return compare(a.index, b)
    return Ordering.LT if compare(a.index, b.reg.mu) != Ordering.GT else Ordering.GT


def _compare_succ_psi_i(a: Psi, b: Psi) -> Ordering:
    # a = ψ_{Ω_{μ+1}}β, b = ψ_Iγ
    return Ordering.LT if compare(a.reg.mu, b) == Ordering.LT else Ordering.GT


def _compare_psi_psi(a: Psi, b: Psi) -> Ordering:
    a_i, b_i = isinstance(a.reg, IConst), isinstance(b.reg, IConst)
    if a_i and b_i:
        return compare(a.arg, b.arg)
    if a_i:
        return _flip(_compare_succ_psi_i(b, a))
    if b_i:
        return _compare_succ_psi_i(a, b)
    c = compare(a.reg.mu, b.reg.mu)
    if c != Ordering.EQ:
        return c
    return compare(a.arg, b.arg)


def less(a: OrdTerm, b: OrdTerm) -> bool:
    return compare(a, b) == Ordering.LT


def ord_max(a: OrdTerm, b: OrdTerm) -> OrdTerm:
    return b if compare(a, b) == Ordering.LT else a


def ord_min(a: OrdTerm, b: OrdTerm) -> OrdTerm:
    return a if compare(a, b) == Ordering.LT else b


def sort_descending(terms: Iterable[OrdTerm]) -> List[OrdTerm]:
    return sorted(terms, key=cmp_to_key(compare), reverse=True)


# ============================================================================ #
#                               CONSTRUCTORS                                   #
# ============================================================================ #

def natural_sum(*terms: OrdTerm) -> OrdTerm:
    """Commutative sum: merge all principal components in non-increasing order."""
    comps = [c for t in terms for c in components(t)]
    return _from_components(sort_descending(comps))


def succ(t: OrdTerm) -> OrdTerm:
    return natural_sum(t, ONE)


def finite(n: int) -> OrdTerm:
    if n < 0:
        raise InvalidTerm(f"negative natural number {n}")
    return _from_components([ONE] * n)


def as_natural(t: OrdTerm) -> Optional[int]:
    """Return n when t denotes the natural number n."""
    comps = components(t)
    if all(c == ONE for c in comps):
        return len(comps)
    return None


def omega_pow(t: OrdTerm) -> OrdTerm:
    """ω^t, absorbing epsilon-form exponents."""
    if is_epsilon_form(t):
        return t
    return OmegaPow(t)


def omega_tower(m: int, alpha: OrdTerm) -> OrdTerm:
    """ω_0(α) = α and ω_{m+1}(α) = ω^{ω_m(α)}."""
    if m < 0:
        raise InvalidTerm(f"negative tower height {m}")
    for _ in range(m):
        alpha = omega_pow(alpha)
    return alpha


def is_fixpoint(t: OrdTerm) -> bool:
    return isinstance(t, IConst) or (isinstance(t, Psi) and isinstance(t.reg, IConst))


def omega_index(t: OrdTerm) -> OrdTerm:
    """Ω_t with Ω_0 = 0 and Ω_η = η on fixed points."""
    if isinstance(t, Zero):
        return ZERO
    if is_fixpoint(t):
        return t
    if compare(t, I) != Ordering.LT:
        raise InvalidTerm(f"Ω index {t} is not below I")
    return OmegaIndex(t)


def predecessor(t: OrdTerm) -> Optional[OrdTerm]:
    comps = components(t)
    if comps and comps[-1] == ONE:
        return _from_components(list(comps[:-1]))
    return None


def omega_succ(mu: OrdTerm) -> OmegaSucc:
    if compare(mu, I) != Ordering.LT:
        raise InvalidTerm(f"Ω_{{{mu}+1}} is not below I")
    return OmegaSucc(mu)


def sigma_term(reg: RegularTerm) -> OrdTerm:
    """The ordinal term denoted by a regular term."""
    if isinstance(reg, IConst):
        return I
    return OmegaIndex(succ(reg.mu))


def to_regular(t: OrdTerm) -> Optional[RegularTerm]:
    if isinstance(t, IConst):
        return I
    if isinstance(t, OmegaIndex):
        mu = predecessor(t.index)
        if mu is not None:
            return OmegaSucc(mu)
    return None


def is_regular(t: OrdTerm) -> bool:
    return to_regular(t) is not None


# ============================================================================ #
#                          HULLS AND COEFFICIENTS                              #
# ============================================================================ #

@lru_cache(maxsize=CACHE_SIZE)
def g_coefficients(beta: OrdTerm, gamma: OrdTerm) -> FrozenSet[OrdTerm]:
    """
    The finite set G_β(γ) of ψ-arguments that decide hull membership.

    Input:
        beta (OrdTerm): the hull's bound
        gamma (OrdTerm): the term being analysed
    Output:
        FrozenSet[OrdTerm]
    Explanation:
        G(0) = G(I) = ∅, sums take the union of their components,
        G(ω^α) = G(Ω_α) = G(α), and G(ψ_σα) = ∅ when ψ_σα < β,
        otherwise G(σ) ∪ G(α) ∪ {α}.
    """
    if isinstance(gamma, (Zero, IConst)):
        return frozenset()
    if isinstance(gamma, Sum):
        result = frozenset()
        for c in gamma.components:
            result = result | g_coefficients(beta, c)
        return result
    if isinstance(gamma, OmegaPow):
        return g_coefficients(beta, gamma.exponent)
    if isinstance(gamma, OmegaIndex):
        return g_coefficients(beta, gamma.index)
    if compare(gamma, beta) == Ordering.LT:
        return frozenset()
    return _g_regular(beta, gamma.reg) | g_coefficients(beta, gamma.arg) | {gamma.arg}


def _g_regular(beta: OrdTerm, reg: RegularTerm) -> FrozenSet[OrdTerm]:
    if isinstance(reg, IConst):
        return frozenset()
    return g_coefficients(beta, reg.mu)


def in_hull(gamma: OrdTerm, alpha: OrdTerm, beta: OrdTerm) -> bool:
    """γ ∈ H_α(β) iff every coefficient in G_β(γ) is below α."""
    return all(compare(c, alpha) == Ordering.LT for c in g_coefficients(beta, gamma))


def _regular_in_hull(reg: RegularTerm, alpha: OrdTerm, beta: OrdTerm) -> bool:
    return all(compare(c, alpha) == Ordering.LT for c in _g_regular(beta, reg))


def validate_psi(sigma: RegularTerm, alpha: OrdTerm) -> bool:
    """ψ_σα is a notation iff σ and α both lie in H_α(ψ_σα)."""
    if isinstance(sigma, OmegaSucc) and compare(sigma.mu, I) != Ordering.LT:
        return False
    candidate = Psi(sigma, alpha)
    return _regular_in_hull(sigma, alpha, candidate) and in_hull(alpha, alpha, candidate)


def psi(sigma: RegularTerm, alpha: OrdTerm) -> Psi:
    if not validate_psi(sigma, alpha):
        raise InvalidTerm(f"ψ_{sigma}({alpha}) is not a notation")
    return Psi(sigma, alpha)


def is_valid(t: OrdTerm) -> bool:
    """Check every canonical-form invariant, recursively."""
    if isinstance(t, (Zero, IConst)):
        return True
    if isinstance(t, Sum):
        comps = t.components
        if len(comps) < 2 or not all(is_principal(c) and is_valid(c) for c in comps):
            return False
        return all(compare(x, y) != Ordering.LT for x, y in zip(comps, comps[1:]))
    if isinstance(t, OmegaPow):
        return not is_epsilon_form(t.exponent) and is_valid(t.exponent)
    if isinstance(t, OmegaIndex):
        x = t.index
        return (not isinstance(x, Zero) and not is_fixpoint(x) and is_valid(x)
                and compare(x, I) == Ordering.LT)
    if isinstance(t, Psi):
        if isinstance(t.reg, OmegaSucc) and not is_valid(t.reg.mu):
            return False
        return is_valid(t.arg) and validate_psi(t.reg, t.arg)
    return False


def psi_subterms(t: OrdTerm) -> FrozenSet[Psi]:
    """ψ-terms reachable from t through +, ω and Ω (ψ arguments are not entered)."""
    if isinstance(t, Sum):
        result = frozenset()
        for c in t.components:
            result = result | psi_subterms(c)
        return result
    if isinstance(t, OmegaPow):
        return psi_subterms(t.exponent)
    if isinstance(t, OmegaIndex):
        return psi_subterms(t.index)
    if isinstance(t, Psi):
        return frozenset([t])
    return frozenset()


def enumerate_terms(depth: int, width: int = 2) -> List[OrdTerm]:
    """
    Valid terms of constructor depth ≤ depth, sorted ascending.

    A constructor sits one level above its deepest argument. Sums are built
    from principal terms of the level below and carry at most `width`
    summands. The Ω_{μ+1} used as ψ-subscripts take μ from two levels below.
    """
    levels = [frozenset(), frozenset([ZERO, I])]
    for d in range(2, depth + 1):
        prev = levels[d - 1]
        regs = [I, OmegaSucc(ZERO)] + sorted(
            (OmegaSucc(m) for m in levels[d - 2] if m != ZERO and compare(m, I) == Ordering.LT), key=str)
        new = set(prev)
        for t in prev:
            new.add(omega_pow(t))
            if not isinstance(t, Zero) and not is_fixpoint(t) and compare(t, I) == Ordering.LT:
                new.add(OmegaIndex(t))
            for reg in regs:
                if validate_psi(reg, t):
                    new.add(Psi(reg, t))
        principals = sorted((t for t in prev if is_principal(t)), key=str)
        for k in range(2, width + 1):
            for combo in combinations_with_replacement(principals, k):
                new.add(natural_sum(*combo))
        levels.append(frozenset(new))
    return sorted(levels[max(depth, 1)], key=cmp_to_key(compare))
