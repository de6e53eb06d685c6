"""
Essential Order Certificates

δ₀ ≪ δ₁ {η} holds when δ₀ < δ₁ and δ₀ belongs to every hull H_α(ψ_σα)
that contains δ₁ and η. The relation quantifies over all (σ, α), so it is
not decided here; instead derive_ell builds a self-checking certificate
from closure facts about hulls, and bounded_refute searches a finite set
of (σ, α) pairs for a counterexample.
"""

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Optional, Tuple

from src.prooftheory.ordinal_notation import (
    CACHE_SIZE, I, ONE, OMEGA, ZERO, IConst, OmegaIndex, OmegaPow, OmegaSucc, OrdTerm, Ordering,
    Psi, Sum, components, compare, in_hull, natural_sum, omega_index, omega_pow, psi_subterms,
    sigma_term, sort_descending, succ, to_regular, validate_psi,
)

_logger = logging.getLogger(__name__)

SUBTERM_BASE = "SubtermBase"
SUCCESSOR_BASE = "SuccessorBase"
ADD_CONGRUENCE = "AddCongruence"
OMEGA_CONGRUENCE = "OmegaCongruence"
PSI_CONGRUENCE = "PsiCongruence"
COLLAPSE_BELOW = "CollapseBelow"
CONTEXT_DISCHARGE = "ContextDischarge"
HULL_TRANSFER = "HullTransfer"
COMPONENT_JOIN = "ComponentJoin"
UPPER_COMPONENT = "UpperComponent"


@dataclass(frozen=True)
class HullFact:
    """The claim member ∈ H_alpha(beta)."""
    member: OrdTerm
    alpha: OrdTerm
    beta: OrdTerm

    def holds(self) -> bool:
        return in_hull(self.member, self.alpha, self.beta)

    def __str__(self) -> str:
        return f"(hull {self.member} {self.alpha} {self.beta})"


@dataclass(frozen=True)
class EllCertificate:
    kind: str
    low: OrdTerm
    high: OrdTerm
    context: OrdTerm
    premises: Tuple["EllCertificate", ...] = ()
    params: Tuple[OrdTerm, ...] = ()
    witnesses: Tuple[HullFact, ...] = ()

    def __str__(self) -> str:
        parts = [f"(cert {self.kind} {self.low} {self.high} {self.context}"]
        if self.params:
            parts.append(" (params " + " ".join(str(p) for p in self.params) + ")")
        if self.witnesses:
            parts.append(" (witness " + " ".join(str(w) for w in self.witnesses) + ")")
        for p in self.premises:
            parts.append(" " + str(p))
        parts.append(")")
        return "".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(str(self).encode("utf-8")).hexdigest()[:16]

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


def certifies(cert: Optional[EllCertificate], d0: OrdTerm, d1: OrdTerm, eta: OrdTerm = ZERO) -> bool:
    """A certificate for context 0 also certifies any larger context."""
    return (cert is not None and cert.low == d0 and cert.high == d1
            and cert.context in (ZERO, eta))


# ============================================================================ #
#                               CLOSURE HELPERS                                #
# ============================================================================ #

def _generated(t: OrdTerm, atoms: FrozenSet[Psi]) -> bool:
    """t is built from 0, I and the given ψ-atoms by +, ω^· and Ω_·."""
    if t == ZERO or t == I:
        return True
    if isinstance(t, Sum):
        return all(_generated(c, atoms) for c in t.components)
    if isinstance(t, OmegaPow):
        return _generated(t.exponent, atoms)
    if isinstance(t, OmegaIndex):
        return _generated(t.index, atoms)
    return t in atoms


def _split_common(a: OrdTerm, b: OrdTerm) -> Tuple[OrdTerm, OrdTerm, OrdTerm]:
    """Return (common, rest_a, rest_b) with a = common # rest_a and b = common # rest_b."""
    ca, cb = Counter(components(a)), Counter(components(b))
    common = ca & cb
    rest_a = list((ca - common).elements())
    rest_b = list((cb - common).elements())
    return (natural_sum(*common.elements()), natural_sum(*rest_a), natural_sum(*rest_b))


def _exponent_of(t: OrdTerm) -> OrdTerm:
    return t.exponent if isinstance(t, OmegaPow) else t


def all_psi_subterms(t: OrdTerm) -> FrozenSet[Psi]:
    """Every ψ-term occurring anywhere in t, arguments included."""
    found = set()
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Sum):
            stack.extend(x.components)
        elif isinstance(x, OmegaPow):
            stack.append(x.exponent)
        elif isinstance(x, OmegaIndex):
            stack.append(x.index)
        elif isinstance(x, Psi):
            found.add(x)
            stack.append(x.arg)
            if isinstance(x.reg, OmegaSucc):
                stack.append(x.reg.mu)
    return frozenset(found)


# ============================================================================ #
#                                  CHECKING                                    #
# ============================================================================ #

def check_certificate(c: EllCertificate) -> bool:
    """
    Re-verify every node of a certificate.

    Input:
        c (EllCertificate): certificate tree
    Output:
        bool: True iff each node's shape, order facts and hull witnesses check
    """
    try:
        return _check(c)
    except (AttributeError, TypeError, ValueError) as e:
        _logger.debug("malformed certificate %s: %s", c.kind, e)
        return False


def _premise_context_ok(p: EllCertificate, c: EllCertificate) -> bool:
    return p.context in (ZERO, c.context)


def _has_witness(c: EllCertificate, fact: HullFact) -> bool:
    return fact in c.witnesses


def _check(c: EllCertificate) -> bool:
    if compare(c.low, c.high) != Ordering.LT:
        return False
    if not all(w.holds() for w in c.witnesses):
        return False
    if not all(_check(p) for p in c.premises):
        return False
    kind, ps = c.kind, c.premises

    if kind == SUBTERM_BASE:
        atoms = psi_subterms(c.high) | psi_subterms(c.context)
        return not ps and _generated(c.low, atoms)

    if kind == SUCCESSOR_BASE:
        return not ps and c.high == succ(c.low)

    if kind == ADD_CONGRUENCE:
        (p,), (addend,) = ps, c.params
        return (c.low == natural_sum(p.low, addend) and c.high == natural_sum(p.high, addend)
                and _premise_context_ok(p, c))

    if kind == OMEGA_CONGRUENCE:
        (p,) = ps
        return (c.low == omega_pow(p.low) and c.high == omega_pow(p.high)
                and _premise_context_ok(p, c))

    if kind in (PSI_CONGRUENCE, HULL_TRANSFER):
        (p,), (sigma, gamma) = ps, c.params
        reg = to_regular(sigma)
        if reg is None or not _premise_context_ok(p, c):
            return False
        if c.low != Psi(reg, natural_sum(gamma, p.low)) or c.high != Psi(reg, natural_sum(gamma, p.high)):
            return False
        if not (validate_psi(reg, c.low.arg) and validate_psi(reg, c.high.arg)):
            return False
        if kind == PSI_CONGRUENCE:
            needed = [HullFact(x, gamma, c.high) for x in (gamma, p.high, c.context)]
            return all(_has_witness(c, f) for f in needed)
        return True

    if kind == COLLAPSE_BELOW:
        (p,), (mu,) = ps, c.params
        if p.low != c.low or p.context != ZERO or c.context != ZERO:
            return False
        if c.high != Psi(OmegaSucc(mu), p.high):
            return False
        if compare(c.low, omega_index(mu)) == Ordering.GT:
            return False
        return _has_witness(c, HullFact(p.high, p.high, c.high))

    if kind == CONTEXT_DISCHARGE:
        (p,) = ps
        if not isinstance(c.high, Psi) or p.high != c.high or p.low != c.low or c.context != ZERO:
            return False
        gamma = c.high.arg
        atoms = psi_subterms(gamma) | psi_subterms(sigma_term(c.high.reg))
        return _generated(p.context, atoms) and _has_witness(c, HullFact(gamma, gamma, c.high))

    if kind == COMPONENT_JOIN:
        if isinstance(c.high, (Sum,)) or len(ps) != len(components(c.low)):
            return False
        return all(p.high == c.high and p.low == x and _premise_context_ok(p, c)
                   for p, x in zip(ps, components(c.low)))

    if kind == UPPER_COMPONENT:
        (p,) = ps
        return (p.low == c.low and p.high in components(c.high)
                and _premise_context_ok(p, c))

    return False


# ============================================================================ #
#                                 DERIVATION                                   #
# ============================================================================ #

def derive_ell(d0: OrdTerm, d1: OrdTerm, eta: OrdTerm = ZERO) -> Optional[EllCertificate]:
    """
    Try to certify d0 ≪ d1 {eta}.

    Input:
        d0, d1, eta (OrdTerm): valid terms
    Output:
        Optional[EllCertificate]: a certificate, or None when no derivation is found
    Explanation:
        Tries, in order: successor and subterm leaves, cancelling common
        components, moving to a component of a sum on the right, joining the
        components of a sum on the left, ω-congruence, ψ-congruence with a
        shared argument part, and collapsing below Ω_{μ+1}. A failure does not
        mean the relation is false.
    """
    cert = _derive(d0, d1, eta)
    if cert is not None:
        _logger.debug("certified %s << %s {%s} by %s", d0, d1, eta, cert.kind)
    return cert


def derive_ell_or_equal(d0: OrdTerm, d1: OrdTerm, eta: OrdTerm = ZERO) -> bool:
    return d0 == d1 or derive_ell(d0, d1, eta) is not None


@lru_cache(maxsize=CACHE_SIZE)
def _derive(d0: OrdTerm, d1: OrdTerm, eta: OrdTerm) -> Optional[EllCertificate]:
    if compare(d0, d1) != Ordering.LT:
        return None
    if d1 == succ(d0):
        return EllCertificate(SUCCESSOR_BASE, d0, d1, eta)
    if _generated(d0, psi_subterms(d1) | psi_subterms(eta)):
        return EllCertificate(SUBTERM_BASE, d0, d1, eta)

    common, r0, r1 = _split_common(d0, d1)
    if common != ZERO:
        p = _derive(r0, r1, eta)
        if p is not None:
            return EllCertificate(ADD_CONGRUENCE, d0, d1, p.context, (p,), (common,))

    if isinstance(d1, Sum):
        for c in sort_descending(set(d1.components)):
            p = _derive(d0, c, eta)
            if p is not None:
                return EllCertificate(UPPER_COMPONENT, d0, d1, p.context, (p,))
        return None

    if isinstance(d0, Sum):
        ps = []
        for c in d0.components:
            p = _derive(c, d1, eta)
            if p is None:
                return None
            ps.append(p)
        ctx = eta if any(p.context != ZERO for p in ps) else ZERO
        return EllCertificate(COMPONENT_JOIN, d0, d1, ctx, tuple(ps))

    if isinstance(d0, OmegaPow) or isinstance(d1, OmegaPow):
        e0, e1 = _exponent_of(d0), _exponent_of(d1)
        p = _derive(e0, e1, eta)
        if p is not None:
            return EllCertificate(OMEGA_CONGRUENCE, d0, d1, p.context, (p,))

    if isinstance(d1, Psi):
        if isinstance(d0, Psi) and d0.reg == d1.reg:
            gamma, r0, r1 = _split_common(d0.arg, d1.arg)
            p = _derive(r0, r1, eta)
            if p is not None:
                return EllCertificate(HULL_TRANSFER, d0, d1, p.context, (p,),
                                      (sigma_term(d1.reg), gamma))
        if isinstance(d1.reg, OmegaSucc):
            cert = _collapse_below(d0, d1)
            if cert is not None:
                return cert
    return None


def _collapse_below(d0: OrdTerm, d1: Psi) -> Optional[EllCertificate]:
    mu, gamma = d1.reg.mu, d1.arg
    if compare(d0, omega_index(mu)) == Ordering.GT:
        return None
    fact = HullFact(gamma, gamma, d1)
    if not fact.holds():
        return None
    p = _derive(d0, gamma, ZERO)
    if p is None:
        return None
    return EllCertificate(COLLAPSE_BELOW, d0, d1, ZERO, (p,), (mu,), (fact,))


def psi_congruence(sigma: OrdTerm, gamma: OrdTerm, premise: EllCertificate) -> Optional[EllCertificate]:
    """Lift δ₀ ≪ δ₁ {η} to ψ_σ(γ#δ₀) ≪ ψ_σ(γ#δ₁) {η} when the hull side condition holds."""
    reg = to_regular(sigma)
    if reg is None:
        return None
    high_arg = natural_sum(gamma, premise.high)
    low_arg = natural_sum(gamma, premise.low)
    if not (validate_psi(reg, high_arg) and validate_psi(reg, low_arg)):
        return None
    high = Psi(reg, high_arg)
    facts = tuple(HullFact(x, gamma, high) for x in (gamma, premise.high, premise.context))
    if not all(f.holds() for f in facts):
        return None
    return EllCertificate(PSI_CONGRUENCE, Psi(reg, low_arg), high, premise.context,
                          (premise,), (sigma, gamma), facts)


def discharge_context(cert: EllCertificate) -> Optional[EllCertificate]:
    """Drop the context of α ≪ ψ_τγ {η} when η is generated from γ and τ."""
    if cert.context == ZERO or not isinstance(cert.high, Psi):
        return cert if cert.context == ZERO else None
    gamma = cert.high.arg
    fact = HullFact(gamma, gamma, cert.high)
    atoms = psi_subterms(gamma) | psi_subterms(sigma_term(cert.high.reg))
    if not fact.holds() or not _generated(cert.context, atoms):
        return None
    return EllCertificate(CONTEXT_DISCHARGE, cert.low, cert.high, ZERO, (cert,), (), (fact,))


# ============================================================================ #
#                                 REFUTATION                                   #
# ============================================================================ #

def _candidate_pairs(d0: OrdTerm, d1: OrdTerm, eta: OrdTerm) -> List[Tuple[object, OrdTerm]]:
    subterms = all_psi_subterms(d0) | all_psi_subterms(d1) | all_psi_subterms(eta)
    sigmas = [I, OmegaSucc(ZERO)]
    for p in sort_descending(subterms):
        if isinstance(p.reg, OmegaSucc) and p.reg not in sigmas:
            sigmas.append(p.reg)
    bases = [ZERO] + [p.arg for p in sort_descending(subterms)]
    alphas = []
    for a in bases:
        for x in (a, natural_sum(a, ONE), natural_sum(a, OMEGA)):
            if x not in alphas:
                alphas.append(x)
    return [(s, a) for s in sigmas for a in alphas]


def bounded_refute(d0: OrdTerm, d1: OrdTerm, eta: OrdTerm = ZERO) -> Optional[Tuple[object, OrdTerm]]:
    """
    Search for (σ, α) with {d1, eta} ⊂ H_α(ψ_σα) but d0 ∉ H_α(ψ_σα).

    Output:
        (σ, α) for the first counterexample found, or None. None is not a proof.
    """
    if d0 == d1:
        return None
    for sigma, alpha in _candidate_pairs(d0, d1, eta):
        if not validate_psi(sigma, alpha):
            continue
        b = Psi(sigma, alpha)
        if in_hull(d1, alpha, b) and in_hull(eta, alpha, b) and not in_hull(d0, alpha, b):
            return (sigma, alpha)
    return None
