"""
Connective definability over one finite model.

The truth sets of all formulas built from some generators with some connectives
form the least set of upsets that contains the generators and is closed under
the matching frame operations.  That set is finite, so it is computed as a
fixpoint and doubles as a certificate: a target outside a closed set that
contains the generators cannot be defined in the fragment on this model, and
hence not in any logic whose frame class contains the model.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from kripkebench.errors import ModelError
from kripkebench.formula import BINARY, TOP, Atom, Connective, Formula, Fragment, Neg, make, render, size
from kripkebench.kripke import Model, Upset, truth_set
from kripkebench.values import frame_op

logger = logging.getLogger(__name__)

OPERATIONS = frozenset({Connective.NEG, Connective.AND, Connective.OR, Connective.IMP})
TOP_GENERATOR = "T"


@dataclass(frozen=True)
class CloneProblem:
    model: Model
    generators: tuple[tuple[Formula, Upset], ...]
    connectives: frozenset[Connective]
    target: Upset

    def __post_init__(self):
        if not self.connectives <= OPERATIONS:
            raise ValueError("connectives must be drawn from neg, and, or, imp")
        for _, upset in (*self.generators, (None, self.target)):
            if upset.frame != self.model.frame:
                raise ModelError(f"upset {upset} does not belong to the model's frame")

    @classmethod
    def build(
        cls,
        model: Model,
        connectives: Iterable[Connective | str],
        target: Formula | Upset,
        generators: Sequence[str] | None = None,
    ) -> "CloneProblem":
        """
        Generators are named: `T` is the all-worlds set, any other name is an
        atom of the model.  Default: T plus every atom the model valuates.
        """
        names = list(generators) if generators is not None else [TOP_GENERATOR, *sorted(model.val)]
        gens = []
        for name in names:
            if name == TOP_GENERATOR:
                gens.append((TOP, Upset(model.frame, model.frame.full)))
            elif name in model.val:
                gens.append((Atom(name), model.val[name]))
            else:
                raise ModelError(f"generator {name!r} is neither T nor an atom of the model")
        goal = target if isinstance(target, Upset) else truth_set(model, target)
        ops = frozenset(Connective(c) for c in connectives)
        return cls(model, tuple(gens), ops, goal)

    def fragment(self) -> Fragment:
        extra = {Connective.TOP} if any(leaf == TOP for leaf, _ in self.generators) else set()
        names = [leaf.name for leaf, _ in self.generators if isinstance(leaf, Atom)]
        return Fragment.of(self.connectives | extra, names)


@dataclass(frozen=True)
class Definable:
    witness: Formula

    decision = "DEFINABLE"


@dataclass(frozen=True)
class NotDefinable:
    closure: tuple[Upset, ...]

    decision = "NOT-DEFINABLE"


CloneCertificate = Definable | NotDefinable


def _better(candidate: Formula, current: Formula | None) -> bool:
    """Shorter rendering wins; equal lengths fall back to text order."""
    if current is None:
        return True
    a, b = render(candidate), render(current)
    return (len(a), a) < (len(b), b)


def _generator_layer(p: CloneProblem) -> dict[int, Formula]:
    layer: dict[int, Formula] = {}
    for leaf, upset in p.generators:
        if _better(leaf, layer.get(upset.mask)):
            layer[upset.mask] = leaf
    return layer


def _combine(p: CloneProblem, op: Connective, left: Mapping[int, Formula], right: Mapping[int, Formula]):
    fr = p.model.frame
    for f, lf in left.items():
        for g, rf in right.items():
            yield frame_op(op, fr, f, g), make(op, lf, rf)


def clone_closure(p: CloneProblem) -> dict[int, Formula]:
    """
    Every upset reachable from the generators, mapped to a witness with the
    fewest connective applications (ties: shortest rendering, then text order, among
    witnesses built from the chosen witnesses of smaller sizes).
    """
    fr = p.model.frame
    levels = [_generator_layer(p)]
    closure = dict(levels[0])
    largest = 0
    s = 1
    # A mask first reached at size s needs parts first reached at sizes adding
    # to s - 1, so nothing new can appear once s exceeds 2 * largest + 1.
    while s <= 2 * largest + 1:
        fresh: dict[int, Formula] = {}
        if Connective.NEG in p.connectives:
            for f, sub in levels[s - 1].items():
                mask = frame_op(Connective.NEG, fr, f)
                if mask not in closure and _better(Neg(sub), fresh.get(mask)):
                    fresh[mask] = Neg(sub)
        for op in BINARY:
            if op not in p.connectives:
                continue
            for i in range(s):
                for mask, f in _combine(p, op, levels[i], levels[s - 1 - i]):
                    if mask not in closure and _better(f, fresh.get(mask)):
                        fresh[mask] = f
        levels.append(fresh)
        closure.update(fresh)
        if fresh:
            largest = s
        s += 1
    logger.info(f"Clone closure: {len(closure)} upsets, largest witness size {largest}")
    return closure


def is_closed(p: CloneProblem, masks: Iterable[int]) -> bool:
    """Whether the set contains the generators and is stable under every chosen operation."""
    members = set(masks)
    fr = p.model.frame
    if any(upset.mask not in members for _, upset in p.generators):
        return False
    for op in p.connectives:
        if op is Connective.NEG:
            if any(frame_op(op, fr, f) not in members for f in members):
                return False
        elif any(frame_op(op, fr, f, g) not in members for f in members for g in members):
            return False
    return True


def check_definable(p: CloneProblem) -> CloneCertificate:
    closure = clone_closure(p)
    witness = closure.get(p.target.mask)
    if witness is not None:
        logger.info(f"Target {p.target} defined by {render(witness)} (size {size(witness)})")
        return Definable(witness)
    fr = p.model.frame
    return NotDefinable(tuple(Upset(fr, mask) for mask in sorted(closure)))


def check_separation(
    p: CloneProblem,
    premise_worlds: Iterable[str | int],
    conclusion_clauses: Iterable[Iterable[str | int]],
) -> bool:
    """
    True iff every closure member that contains all premise worlds contains
    every world of at least one conclusion clause.
    """
    fr = p.model.frame
    premise = fr.mask_of(premise_worlds)
    clauses = [fr.mask_of(clause) for clause in conclusion_clauses]
    for mask in clone_closure(p):
        if premise & ~mask == 0 and not any(clause & ~mask == 0 for clause in clauses):
            logger.info(f"Separation fails at {fr.names(mask)}")
            return False
    return True


def enumerate_truth_sets(p: CloneProblem, max_depth: int) -> dict[int, Formula]:
    """
    The truth sets of all fragment formulas of depth <= max_depth, each with a
    minimal-depth representative.  A truth set depends only on the truth sets of
    the immediate subformulas, so one representative per set per depth suffices.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    fr = p.model.frame
    found = _generator_layer(p)
    for d in range(1, max_depth + 1):
        known = dict(found)
        fresh: dict[int, Formula] = {}
        if Connective.NEG in p.connectives:
            for f, sub in known.items():
                mask = frame_op(Connective.NEG, fr, f)
                if mask not in found and _better(Neg(sub), fresh.get(mask)):
                    fresh[mask] = Neg(sub)
        for op in BINARY:
            if op in p.connectives:
                for mask, f in _combine(p, op, known, known):
                    if mask not in found and _better(f, fresh.get(mask)):
                        fresh[mask] = f
        if not fresh:
            break
        found.update(fresh)
    return found
