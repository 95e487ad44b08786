"""
The countable value space: eventually constant sequences of upsets indexed by
the frame catalog, with the pointwise truth-table operations.

A value is stored as a canonical prefix of component bitmasks (component i is
an upset of catalog frame i) plus a constant tail, all-ones or all-zeros.
Trailing prefix entries equal to the tail constant are absorbed, so equality
of values is equality of the stored data.

Finite matrices (the n-element Gödel and Łukasiewicz chains among them) are
checked for tautologies by exhaustive batched evaluation.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Sequence

import numpy as np

from kripkebench.config import settings
from kripkebench.errors import ModelError, SearchSpaceTooLarge, ValuationError
from kripkebench.formula import And, Atom, Connective, Formula, Imp, Neg, Or, Top, atoms, connective_of
from kripkebench.frames import catalog
from kripkebench.kripke import Frame, Upset, bits

logger = logging.getLogger(__name__)


class Tail(str, Enum):
    ONES = "ones"
    ZEROS = "zeros"

    def on(self, fr: Frame) -> int:
        return fr.full if self is Tail.ONES else 0

    @classmethod
    def of(cls, value: bool) -> "Tail":
        return cls.ONES if value else cls.ZEROS


def frame_op(op: Connective, fr: Frame, f: int, g: int = 0) -> int:
    """The frame operations on bitmask upsets: pseudo-complement, meet, join, relative pseudo-complement."""
    match op:
        case Connective.NEG:
            return sum(1 << k for k in range(fr.size) if fr.up[k] & f == 0)
        case Connective.AND:
            return f & g
        case Connective.OR:
            return f | g
        case Connective.IMP:
            bad = f & ~g
            return sum(1 << k for k in range(fr.size) if fr.up[k] & bad == 0)
    raise ValueError(f"{op} is not an operation")


def apply_frame_op(op: Connective, fr: Frame, f: Upset, g: Upset | None = None) -> Upset:
    if (g is None) != (op is Connective.NEG):
        raise ValueError(f"wrong number of operands for {op.value}")
    for operand in (f, g):
        if operand is not None and operand.frame != fr:
            raise ModelError("operand upset belongs to another frame")
    return Upset(fr, frame_op(op, fr, f.mask, g.mask if g is not None else 0))


def _classical(op: Connective, x: bool, y: bool) -> bool:
    match op:
        case Connective.NEG:
            return not x
        case Connective.AND:
            return x and y
        case Connective.OR:
            return x or y
        case Connective.IMP:
            return (not x) or y
    raise ValueError(f"{op} is not an operation")


@dataclass(frozen=True)
class ValueSeq:
    prefix: tuple[int, ...]
    tail: Tail

    def __post_init__(self):
        for i, mask in enumerate(self.prefix):
            fr = catalog.frame_at(i)
            if mask < 0 or mask > fr.full or not fr.is_upset(mask):
                raise ValuationError(f"component {i} is not an upset of catalog frame {i}")
        if self.prefix and self.prefix[-1] == self.tail.on(catalog.frame_at(len(self.prefix) - 1)):
            raise ValuationError("value is not canonical: trailing component equals the tail")

    @classmethod
    def of(cls, prefix: Sequence[int], tail: Tail = Tail.ONES) -> "ValueSeq":
        """Canonicalising constructor."""
        trimmed = list(prefix)
        while trimmed and trimmed[-1] == tail.on(catalog.frame_at(len(trimmed) - 1)):
            trimmed.pop()
        return cls(tuple(trimmed), tail)

    def component_mask(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.tail.on(catalog.frame_at(n))

    def component(self, n: int) -> Upset:
        """The n-th element of the sequence, an upset of catalog frame n."""
        return Upset(catalog.frame_at(n), self.component_mask(n))

    def __str__(self) -> str:
        parts = ["{" + ",".join(str(k) for k in bits(mask)) + "}" for mask in self.prefix]
        return f"<{' '.join(parts)}{' ' if parts else ''}| {self.tail.value}>"


TAU = ValueSeq((), Tail.ONES)
ZERO = ValueSeq((), Tail.ZEROS)

Valuation = Mapping[str, ValueSeq]


def seq_op(op: Connective, x: ValueSeq, y: ValueSeq | None = None) -> ValueSeq:
    if (y is None) != (op is Connective.NEG):
        raise ValueError(f"wrong number of operands for {op.value}")
    length = max(len(x.prefix), len(y.prefix) if y is not None else 0)
    prefix = []
    for i in range(length):
        fr = catalog.frame_at(i)
        g = y.component_mask(i) if y is not None else 0
        prefix.append(frame_op(op, fr, x.component_mask(i), g))
    tail = _classical(op, x.tail is Tail.ONES, y is not None and y.tail is Tail.ONES)
    return ValueSeq.of(prefix, Tail.of(tail))


def extend_valuation(v: Valuation, f: Formula) -> ValueSeq:
    match f:
        case Top():
            return TAU
        case Atom(name):
            try:
                return v[name]
            except KeyError:
                raise ValuationError(f"valuation does not assign atom {name}") from None
        case Neg(sub):
            return seq_op(Connective.NEG, extend_valuation(v, sub))
        case And(left, right):
            return seq_op(Connective.AND, extend_valuation(v, left), extend_valuation(v, right))
        case Or(left, right):
            return seq_op(Connective.OR, extend_valuation(v, left), extend_valuation(v, right))
        case Imp(left, right):
            return seq_op(Connective.IMP, extend_valuation(v, left), extend_valuation(v, right))


def is_designated(x: ValueSeq) -> bool:
    return x == TAU


def enumerate_values() -> Iterator[ValueSeq]:
    """
    Every value of the space, each exactly once: by prefix length, then tail,
    then component choices in upset order.
    """
    for length in itertools.count():
        choices = [catalog.frame_at(i).upsets() for i in range(length)]
        for tail in (Tail.ZEROS, Tail.ONES):
            for prefix in itertools.product(*choices):
                if length and prefix[-1] == tail.on(catalog.frame_at(length - 1)):
                    continue
                yield ValueSeq(tuple(prefix), tail)


# ---------------------------------------------------------------------------
# Finite matrices
# ---------------------------------------------------------------------------

OPERATIONS = (Connective.NEG, Connective.AND, Connective.OR, Connective.IMP)


@dataclass(frozen=True, eq=False)
class FiniteMatrix:
    """
    A finitely many-valued logic: values 0..size-1, the value of T, the
    designated values, and one truth table per connective (a vector for
    negation, a size x size array for the binary connectives).
    """

    name: str
    top: int
    designated: frozenset[int]
    tables: Mapping[Connective, np.ndarray]

    def __post_init__(self):
        if set(self.tables) != set(OPERATIONS):
            raise ValueError("a matrix needs exactly one table for each of neg, and, or, imp")
        n = self.size
        for op, table in self.tables.items():
            shape = (n,) if op is Connective.NEG else (n, n)
            if table.shape != shape:
                raise ValueError(f"{op.value} table has shape {table.shape}, expected {shape}")
            if table.min() < 0 or table.max() >= n:
                raise ValueError(f"{op.value} table leaves the value range 0..{n - 1}")
        if not 0 <= self.top < n or not self.designated or not all(0 <= d < n for d in self.designated):
            raise ValueError("T and the designated values must lie in the value range")

    @property
    def size(self) -> int:
        return len(self.tables[Connective.NEG])

    def evaluate(self, f: Formula, columns: Mapping[str, np.ndarray]) -> np.ndarray:
        """Value of f under a batch of assignments, one array entry per assignment."""
        match f:
            case Top():
                count = len(next(iter(columns.values()))) if columns else 1
                return np.full(count, self.top, dtype=np.int64)
            case Atom(name):
                try:
                    return columns[name]
                except KeyError:
                    raise ValuationError(f"assignment does not give a value to atom {name}") from None
            case Neg(sub):
                return self.tables[Connective.NEG][self.evaluate(sub, columns)]
            case And(left, right) | Or(left, right) | Imp(left, right):
                table = self.tables[connective_of(f)]
                return table[self.evaluate(left, columns), self.evaluate(right, columns)]

    def value(self, f: Formula, assignment: Mapping[str, int]) -> int:
        columns = {name: np.array([v], dtype=np.int64) for name, v in assignment.items()}
        return int(self.evaluate(f, columns)[0])


def godel_chain(n: int) -> FiniteMatrix:
    """The n-element Gödel chain: min, max, and x -> y = top if x <= y else y."""
    if n < 2:
        raise ValueError("a chain needs at least 2 values")
    top = n - 1
    x = np.arange(n, dtype=np.int64)
    left, right = np.meshgrid(x, x, indexing="ij")
    return FiniteMatrix(f"G{n}", top, frozenset({top}), {
        Connective.NEG: np.where(x == 0, top, 0),
        Connective.AND: np.minimum(left, right),
        Connective.OR: np.maximum(left, right),
        Connective.IMP: np.where(left <= right, top, right),
    })


def lukasiewicz_chain(n: int) -> FiniteMatrix:
    """The n-element Łukasiewicz chain with lattice conjunction and disjunction."""
    if n < 2:
        raise ValueError("a chain needs at least 2 values")
    top = n - 1
    x = np.arange(n, dtype=np.int64)
    left, right = np.meshgrid(x, x, indexing="ij")
    return FiniteMatrix(f"L{n}", top, frozenset({top}), {
        Connective.NEG: top - x,
        Connective.AND: np.minimum(left, right),
        Connective.OR: np.maximum(left, right),
        Connective.IMP: np.minimum(top, top - left + right),
    })


MATRIX_FAMILIES = {"godel": godel_chain, "lukasiewicz": lukasiewicz_chain}


def find_falsifying(m: FiniteMatrix, f: Formula, *, ceiling: int | None = None) -> dict[str, int] | None:
    """
    The first assignment, in lexicographic order over the sorted atoms, giving
    f an undesignated value; None if f is a tautology of the matrix.
    """
    names = sorted(atoms(f))
    total = m.size ** len(names)
    limit = ceiling or settings.ceiling
    if total > limit:
        raise SearchSpaceTooLarge(total, limit)
    designated = np.array(sorted(m.designated), dtype=np.int64)
    for start in range(0, total, settings.batch_size):
        index = np.arange(start, min(total, start + settings.batch_size), dtype=np.int64)
        columns = {name: (index // m.size ** (len(names) - 1 - a)) % m.size for a, name in enumerate(names)}
        values = np.broadcast_to(m.evaluate(f, columns), index.shape)
        failing = np.flatnonzero(~np.isin(values, designated))
        if failing.size:
            hit = int(failing[0])
            return {name: int(column[hit]) for name, column in columns.items()}
    logger.info(f"{m.name}: tautology over {total} assignments")
    return None


def is_tautology(m: FiniteMatrix, f: Formula, *, ceiling: int | None = None) -> bool:
    return find_falsifying(m, f, ceiling=ceiling) is None


# ---------------------------------------------------------------------------
# Valuation text format
# ---------------------------------------------------------------------------

def parse_valuation_text(text: str) -> dict[str, ValueSeq]:
    """
    `atom p tail=ones` declares an atom; `component 2 p = 1 3` sets component 2
    of p to the upset {1, 3} of catalog frame 2. Unset components follow the tail.
    """
    tails: dict[str, Tail] = {}
    components: dict[str, dict[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        if words[0] == "atom":
            if len(words) != 3 or not words[2].startswith("tail="):
                raise ValuationError(f"line {lineno}: expected 'atom NAME tail=ones|zeros'")
            try:
                tails[words[1]] = Tail(words[2].removeprefix("tail="))
            except ValueError:
                raise ValuationError(f"line {lineno}: tail must be ones or zeros") from None
            components.setdefault(words[1], {})
        elif words[0] == "component":
            if len(words) < 4 or words[3] != "=":
                raise ValuationError(f"line {lineno}: expected 'component N ATOM = WORLDS...'")
            name = words[2]
            if name not in tails:
                raise ValuationError(f"line {lineno}: atom {name} used before its declaration")
            try:
                n = int(words[1])
                worlds = [int(w) for w in words[4:]]
            except ValueError:
                raise ValuationError(f"line {lineno}: frame and world indices must be integers") from None
            if n < 0:
                raise ValuationError(f"line {lineno}: negative frame index")
            fr = catalog.frame_at(n)
            if any(w < 0 or w >= fr.size for w in worlds):
                raise ValuationError(f"line {lineno}: catalog frame {n} has only {fr.size} worlds")
            mask = sum(1 << w for w in worlds)
            if not fr.is_upset(mask):
                raise ValuationError(f"line {lineno}: {sorted(worlds)} is not an upset of catalog frame {n}")
            components[name][n] = mask
        else:
            raise ValuationError(f"line {lineno}: unknown directive {words[0]!r}")
    valuation = {}
    for name, tail in tails.items():
        given = components[name]
        length = max(given) + 1 if given else 0
        prefix = [given.get(i, tail.on(catalog.frame_at(i))) for i in range(length)]
        valuation[name] = ValueSeq.of(prefix, tail)
    return valuation


def render_valuation_text(v: Valuation) -> str:
    lines = []
    for name in sorted(v):
        x = v[name]
        lines.append(f"atom {name} tail={x.tail.value}")
        for i, mask in enumerate(x.prefix):
            lines.append(" ".join(["component", str(i), name, "=", *(str(k) for k in bits(mask))]))
    return "\n".join(lines) + "\n"
