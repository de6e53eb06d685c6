"""
S-expression reader and printer shared by every artifact format
(ordinal terms, formulas, proofs, certificates and traces).
"""

from typing import Any, List, Union

from lark import Lark, Transformer, Token
from lark.exceptions import UnexpectedInput

from src.prooftheory.errors import InvalidTerm, ParseError
from src.prooftheory.ordinal_notation import (
    I, ZERO, OrdTerm, finite, natural_sum, omega_index, omega_pow, psi, to_regular,
)

SExpr = Union[str, List["SExpr"]]

grammar = r"""
    start: expr*
    ?expr: atom
         | list
    list: "(" expr* ")"
    atom: SYMBOL

    SYMBOL: /[^\s();]+/
    COMMENT: /;[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


class ToNested(Transformer):
    def start(self, items):
        return list(items)

    def list(self, items):
        return list(items)

    def atom(self, items):
        token: Token = items[0]
        return str(token)


parser = Lark(grammar, parser="lalr", transformer=ToNested())


def parse_all(text: str) -> List[SExpr]:
    """Parse every top-level s-expression in text."""
    try:
        return parser.parse(text)
    except UnexpectedInput as e:
        raise ParseError(f"malformed s-expression ({e.__class__.__name__})",
                         getattr(e, "line", None), getattr(e, "column", None)) from e


def parse_sexpr(text: str) -> SExpr:
    """Parse exactly one top-level s-expression."""
    items = parse_all(text)
    if len(items) != 1:
        raise ParseError(f"expected one s-expression, found {len(items)}")
    return items[0]


def format_sexpr(value: Any) -> str:
    if isinstance(value, list):
        return "(" + " ".join(format_sexpr(v) for v in value) + ")"
    return str(value)


def expect_list(value: SExpr, head: str = None, min_len: int = 1) -> List[SExpr]:
    if not isinstance(value, list) or len(value) < min_len:
        raise ParseError(f"expected a list{' headed ' + head if head else ''}, got {format_sexpr(value)}")
    if head is not None and value[0] != head:
        raise ParseError(f"expected ({head} ...), got {format_sexpr(value)}")
    return value


def expect_atom(value: SExpr) -> str:
    if isinstance(value, list):
        raise ParseError(f"expected an atom, got {format_sexpr(value)}")
    return value


# ---------------------------------------------------------------------- #
#                            Ordinal terms                               #
# ---------------------------------------------------------------------- #

def ordinal_from_sexpr(value: SExpr) -> OrdTerm:
    """
    Build a canonical term from `0`, `I`, `n`, `(+ t ...)`, `(w t)`, `(W t)` or `(p s t)`.

    Non-canonical input (unsorted sums, ω^ε) is canonicalized; invalid ψ
    applications are rejected.
    """
    if not isinstance(value, list):
        if value == "0":
            return ZERO
        if value == "I":
            return I
        if value.isdigit():
            return finite(int(value))
        raise ParseError(f"unknown ordinal atom {value!r}")
    if not value:
        raise ParseError("empty ordinal expression")
    head, args = value[0], value[1:]
    try:
        if head == "+":
            return natural_sum(*[ordinal_from_sexpr(a) for a in args])
        if head == "w" and len(args) == 1:
            return omega_pow(ordinal_from_sexpr(args[0]))
        if head == "W" and len(args) == 1:
            return omega_index(ordinal_from_sexpr(args[0]))
        if head == "p" and len(args) == 2:
            reg = to_regular(ordinal_from_sexpr(args[0]))
            if reg is None:
                raise ParseError(f"ψ subscript {format_sexpr(args[0])} is not regular")
            return psi(reg, ordinal_from_sexpr(args[1]))
    except InvalidTerm as e:
        raise ParseError(str(e)) from e
    raise ParseError(f"unknown ordinal expression {format_sexpr(value)}")


def parse_ordinal(text: str) -> OrdTerm:
    return ordinal_from_sexpr(parse_sexpr(text))
