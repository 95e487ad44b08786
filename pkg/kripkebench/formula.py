"""
Formula syntax: the language {~, &, |, ->, T} over named atoms.

Grammar (loosest binding first):

    imp   := or ( '->' imp )?          right-associative
    or    := and ( '|' and )*          left-associative
    and   := unary ( '&' unary )*      left-associative
    unary := '~' unary | primary
    primary := 'T' | atom | '(' imp ')'

Unicode aliases: ¬ ∧ ∨ → ⊤.

Formulas nest at most MAX_NESTING connectives deep and the parser keeps at most
MAX_OPEN parentheses, negations and right-nested implications open at once,
which keeps the recursive traversals inside the interpreter stack.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from kripkebench.errors import FormulaSyntaxError, FormulaTooDeep

ATOM_PATTERN = r"[a-z][a-z0-9_]*"
ATOM_RE = re.compile(ATOM_PATTERN)
MAX_NESTING = 64
# a rendered formula opens at most two parentheses, negations or implications per level
MAX_OPEN = 2 * MAX_NESTING


class Connective(str, Enum):
    NEG = "neg"
    AND = "and"
    OR = "or"
    IMP = "imp"
    TOP = "top"


BINARY = (Connective.AND, Connective.OR, Connective.IMP)


@dataclass(frozen=True)
class Top:
    nesting = 0


@dataclass(frozen=True)
class Atom:
    name: str

    nesting = 0

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


def _set_nesting(f, *subs) -> None:
    nesting = 1 + max(sub.nesting for sub in subs)
    if nesting > MAX_NESTING:
        raise FormulaTooDeep(nesting, MAX_NESTING)
    object.__setattr__(f, "nesting", nesting)


@dataclass(frozen=True)
class Neg:
    sub: "Formula"
    nesting: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_nesting(self, self.sub)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    nesting: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_nesting(self, self.left, self.right)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"
    nesting: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_nesting(self, self.left, self.right)


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"
    nesting: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_nesting(self, self.left, self.right)


Formula = Top | Atom | Neg | And | Or | Imp

TOP = Top()

_BINARY_CLASS = {Connective.AND: And, Connective.OR: Or, Connective.IMP: Imp}


def make(op: Connective, left: Formula, right: Formula | None = None) -> Formula:
    """Build the formula `op(left, right)`; `right` is ignored for negation."""
    if op is Connective.NEG:
        return Neg(left)
    if op is Connective.TOP:
        return TOP
    return _BINARY_CLASS[op](left, right)


def connective_of(f: Formula) -> Connective | None:
    match f:
        case Top():
            return Connective.TOP
        case Neg():
            return Connective.NEG
        case And():
            return Connective.AND
        case Or():
            return Connective.OR
        case Imp():
            return Connective.IMP
    return None


def atoms(f: Formula) -> frozenset[str]:
    match f:
        case Atom(name):
            return frozenset((name,))
        case Top():
            return frozenset()
        case Neg(sub):
            return atoms(sub)
        case And(left, right) | Or(left, right) | Imp(left, right):
            return atoms(left) | atoms(right)


def depth(f: Formula) -> int:
    return f.nesting


def size(f: Formula) -> int:
    """Number of connective applications (atoms and T count zero)."""
    match f:
        case Atom() | Top():
            return 0
        case Neg(sub):
            return 1 + size(sub)
        case And(left, right) | Or(left, right) | Imp(left, right):
            return 1 + size(left) + size(right)


# ---------------------------------------------------------------------------
# Fragments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fragment:
    connectives: frozenset[Connective]
    atoms: frozenset[str]

    @classmethod
    def of(cls, connectives: Iterable[Connective | str], atom_names: Iterable[str]) -> "Fragment":
        return cls(frozenset(Connective(c) for c in connectives), frozenset(atom_names))

    def __le__(self, other: "Fragment") -> bool:
        return self.connectives <= other.connectives and self.atoms <= other.atoms


def in_fragment(f: Formula, frag: Fragment) -> bool:
    match f:
        case Atom(name):
            return name in frag.atoms
        case Top():
            return Connective.TOP in frag.connectives
        case Neg(sub):
            return Connective.NEG in frag.connectives and in_fragment(sub, frag)
        case And(left, right) | Or(left, right) | Imp(left, right):
            return (
                connective_of(f) in frag.connectives
                and in_fragment(left, frag)
                and in_fragment(right, frag)
            )


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3, Neg: 4, Atom: 5, Top: 5}
_SYMBOL = {Imp: "->", Or: "|", And: "&"}


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def render(f: Formula) -> str:
    """Canonical text with the fewest parentheses that parse back to `f`."""
    match f:
        case Top():
            return "T"
        case Atom(name):
            return name
        case Neg(sub):
            return "~" + _wrap(render(sub), _PREC[type(sub)] < _PREC[Neg])
    prec = _PREC[type(f)]
    left_prec = _PREC[type(f.left)]
    right_prec = _PREC[type(f.right)]
    right_assoc = isinstance(f, Imp)
    left = _wrap(render(f.left), left_prec < prec or (left_prec == prec and right_assoc))
    right = _wrap(render(f.right), right_prec < prec or (right_prec == prec and not right_assoc))
    return f"{left} {_SYMBOL[type(f)]} {right}"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<imp>->|→)|(?P<neg>~|¬)|(?P<and>&|∧)|(?P<or>\||∨)"
    r"|(?P<lpar>\()|(?P<rpar>\))|(?P<top>T|⊤)|(?P<atom>" + ATOM_PATTERN + ")"
)


class _Parser:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            match = _TOKEN_RE.match(text, position)
            if match is None:
                raise FormulaSyntaxError(
                    _byte_offset(text, position), "a formula token", repr(text[position])
                )
            if match.lastgroup != "ws":
                self.tokens.append((match.lastgroup, match.group(), _byte_offset(text, position)))
            position = match.end()
        self.end_offset = len(text.encode("utf-8"))
        self.index = 0
        self.level = 0

    def peek(self) -> str | None:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def fail(self, expected: str) -> FormulaSyntaxError:
        if self.index < len(self.tokens):
            _, value, offset = self.tokens[self.index]
            return FormulaSyntaxError(offset, expected, repr(value))
        return FormulaSyntaxError(self.end_offset, expected, "end of input")

    def take(self, kind: str, expected: str) -> str:
        if self.peek() != kind:
            raise self.fail(expected)
        value = self.tokens[self.index][1]
        self.index += 1
        return value

    def parse(self) -> Formula:
        result = self.imp()
        if self.peek() is not None:
            raise self.fail("an operator or end of input")
        return result

    def open(self) -> int:
        """Step over a nesting token; returns its index for error reporting."""
        if self.level == MAX_OPEN:
            raise self.fail(f"at most {MAX_OPEN} nested parentheses, negations and implications")
        self.level += 1
        self.index += 1
        return self.index - 1

    def node(self, cls, at: int, *parts: Formula) -> Formula:
        try:
            return cls(*parts)
        except FormulaTooDeep:
            _, value, offset = self.tokens[at]
            raise FormulaSyntaxError(offset, f"at most {MAX_NESTING} levels of nesting", repr(value)) from None

    def imp(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "imp":
            at = self.open()
            right = self.imp()
            self.level -= 1
            return self.node(Imp, at, left, right)
        return left

    def disjunction(self) -> Formula:
        result = self.conjunction()
        while self.peek() == "or":
            at = self.index
            self.index += 1
            result = self.node(Or, at, result, self.conjunction())
        return result

    def conjunction(self) -> Formula:
        result = self.unary()
        while self.peek() == "and":
            at = self.index
            self.index += 1
            result = self.node(And, at, result, self.unary())
        return result

    def unary(self) -> Formula:
        if self.peek() == "neg":
            at = self.open()
            sub = self.unary()
            self.level -= 1
            return self.node(Neg, at, sub)
        return self.primary()

    def primary(self) -> Formula:
        kind = self.peek()
        if kind == "top":
            self.index += 1
            return TOP
        if kind == "atom":
            return Atom(self.take("atom", "an atom"))
        if kind == "lpar":
            self.open()
            inner = self.imp()
            self.take("rpar", "')'")
            self.level -= 1
            return inner
        raise self.fail("an atom, 'T', '~' or '('")


def _byte_offset(text: str, position: int) -> int:
    return len(text[:position].encode("utf-8"))


def parse(text: str) -> Formula:
    if not text or not text.strip():
        raise FormulaSyntaxError(0, "a formula", "empty input")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Enumeration and sampling
# ---------------------------------------------------------------------------

def _leaves(frag: Fragment) -> list[Formula]:
    leaves: list[Formula] = [Atom(name) for name in frag.atoms]
    if Connective.TOP in frag.connectives:
        leaves.append(TOP)
    return leaves


def enumerate_formulas(frag: Fragment, max_depth: int) -> Iterator[Formula]:
    """
    Every formula of `frag` with depth <= max_depth, exactly once, ordered by
    depth and then by canonical rendering.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    layers: list[list[Formula]] = []
    upto: list[Formula] = []
    for d in range(max_depth + 1):
        if d == 0:
            layer = _leaves(frag)
        else:
            newest = layers[d - 1]
            older = upto[: len(upto) - len(newest)]
            layer = []
            if Connective.NEG in frag.connectives:
                layer.extend(Neg(sub) for sub in newest)
            for op in BINARY:
                if op not in frag.connectives:
                    continue
                cls = _BINARY_CLASS[op]
                layer.extend(cls(left, right) for left in newest for right in upto)
                layer.extend(cls(left, right) for left in older for right in newest)
        layer.sort(key=render)
        layers.append(layer)
        upto = upto + layer
        yield from layer


def random_formula(
    rng: random.Random,
    atom_names: Iterable[str],
    max_depth: int,
    connectives: Iterable[Connective] = tuple(Connective),
) -> Formula:
    names = sorted(atom_names)
    allowed = set(connectives)
    operators = [c for c in Connective if c is not Connective.TOP and c in allowed]

    def leaf() -> Formula:
        if Connective.TOP in allowed and (not names or rng.random() < 0.1):
            return TOP
        return Atom(rng.choice(names))

    def build(remaining: int) -> Formula:
        if remaining == 0 or not operators or rng.random() < 0.25:
            return leaf()
        op = rng.choice(operators)
        if op is Connective.NEG:
            return Neg(build(remaining - 1))
        return make(op, build(remaining - 1), build(remaining - 1))

    if not names and Connective.TOP not in allowed:
        raise ValueError("no atoms and no T: the fragment is empty")
    return build(max_depth)
