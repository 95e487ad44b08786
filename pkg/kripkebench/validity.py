"""
Bounded validity and equivalence for CPL, IPL and GDL, plus the pigeonhole
family and the fan models that refute it.

The search walks catalog frames in index order and, inside a frame, every
assignment of upsets to the formula's atoms in lexicographic order (first atom
most significant, upsets in increasing bitmask order).  Assignments are
evaluated in numpy batches: each row is one assignment, each value a bitmask
truth set.

A formula fails somewhere in a frame iff it fails at the root of some cone
(the worlds above a given world), so frames that are not rooted are first
screened cone by cone; only frames with a failing cone get the full
lexicographic search that yields the canonical counterexample.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from kripkebench.config import settings
from kripkebench.errors import SearchSpaceTooLarge
from kripkebench.formula import MAX_NESTING, And, Atom, Formula, Imp, Neg, Or, Top, atoms, render
from kripkebench.frames import catalog
from kripkebench.kripke import Frame, Model, Upset, build_model, cone, forces, is_connected

logger = logging.getLogger(__name__)


class LogicClass(str, Enum):
    CPL = "cpl"
    IPL = "ipl"
    GDL = "gdl"

    def admits(self, fr: Frame) -> bool:
        if self is LogicClass.CPL:
            return fr.size == 1
        if self is LogicClass.GDL:
            return is_connected(fr)
        return True


class Verdict(str, Enum):
    VALID = "VALID"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


@dataclass(frozen=True)
class Valid:
    bound: int
    logic: LogicClass

    decision = Verdict.VALID


@dataclass(frozen=True)
class Counterexample:
    model: Model
    world: str
    frame_index: int
    logic: LogicClass
    direction: str | None = None

    decision = Verdict.COUNTEREXAMPLE


ValidityVerdict = Valid | Counterexample


# ---------------------------------------------------------------------------
# Vectorised evaluation
# ---------------------------------------------------------------------------

class _Program:
    """A formula flattened into slots; shared subformulas are computed once."""

    def __init__(self, f: Formula, names: list[str]):
        self.names = names
        self.steps: list[tuple[str, int, int]] = []
        self._slots: dict[Formula, int] = {Atom(name): i for i, name in enumerate(names)}
        self.result = self._compile(f)

    def _compile(self, f: Formula) -> int:
        if f in self._slots:
            return self._slots[f]
        match f:
            case Top():
                step = ("top", -1, -1)
            case Neg(sub):
                step = ("neg", self._compile(sub), -1)
            case And(left, right):
                step = ("and", self._compile(left), self._compile(right))
            case Or(left, right):
                step = ("or", self._compile(left), self._compile(right))
            case Imp(left, right):
                step = ("imp", self._compile(left), self._compile(right))
        self.steps.append(step)
        slot = len(self.names) + len(self.steps) - 1
        self._slots[f] = slot
        return slot

    def run(self, fr: Frame, atom_rows: list[np.ndarray], count: int) -> np.ndarray:
        up = [np.uint64(mask) for mask in fr.up]
        world_bits = [np.uint64(1 << k) for k in range(fr.size)]
        zero = np.uint64(0)

        def unblocked(blocked: np.ndarray) -> np.ndarray:
            # worlds none of whose successors lie in `blocked`
            out = np.zeros(count, dtype=np.uint64)
            for k in range(fr.size):
                out |= np.where(blocked & up[k] == zero, world_bits[k], zero)
            return out

        values: list[np.ndarray] = list(atom_rows)
        for op, a, b in self.steps:
            if op == "top":
                values.append(np.full(count, fr.full, dtype=np.uint64))
            elif op == "neg":
                values.append(unblocked(values[a]))
            elif op == "and":
                values.append(values[a] & values[b])
            elif op == "or":
                values.append(values[a] | values[b])
            else:
                values.append(unblocked(values[a] & ~values[b]))
        return values[self.result]


def _first_failure(
    program: _Program, fr: Frame, target: int, batch_size: int
) -> tuple[tuple[int, ...], int] | None:
    """
    First assignment (as upset masks) in lexicographic order under which some
    world of `target` is not forced, with the lowest such world.
    """
    upsets = np.array(fr.upsets(), dtype=np.uint64)
    width = len(upsets)
    arity = len(program.names)
    total = width ** arity
    goal = np.uint64(target)
    for start in range(0, total, batch_size):
        stop = min(total, start + batch_size)
        index = np.arange(start, stop, dtype=np.int64)
        rows = [upsets[(index // width ** (arity - 1 - a)) % width] for a in range(arity)]
        result = program.run(fr, rows, stop - start)
        failing = np.flatnonzero(result & goal != goal)
        if failing.size:
            hit = int(failing[0])
            missing = target & ~int(result[hit])
            world = (missing & -missing).bit_length() - 1
            return tuple(int(row[hit]) for row in rows), world
    return None


class _Budget:
    def __init__(self, ceiling: int):
        self.ceiling = ceiling
        self.spent = 0

    def charge(self, amount: int) -> None:
        if self.spent + amount > self.ceiling:
            logger.warning(f"Search refused: {self.spent + amount:,} evaluations planned, ceiling {self.ceiling:,}")
            raise SearchSpaceTooLarge(self.spent + amount, self.ceiling)
        self.spent += amount


class _Search:
    def __init__(self, f: Formula, logic: LogicClass, ceiling: int, batch_size: int):
        self.formula = f
        self.logic = logic
        self.names = sorted(atoms(f))
        self.program = _Program(f, self.names)
        self.budget = _Budget(ceiling)
        self.batch_size = batch_size
        self._planned_cones: set[tuple] = set()
        self._cone_fails: dict[tuple, bool] = {}

    def plan(self, fr: Frame) -> None:
        """Charge the budget for one frame: a full search if rooted, else its unseen cones."""
        arity = len(self.names)
        if fr.up[0] == fr.full:
            self.budget.charge(len(fr.upsets()) ** arity)
            return
        for k in range(fr.size):
            sub = cone(fr, k)
            if sub.leq not in self._planned_cones:
                self._planned_cones.add(sub.leq)
                self.budget.charge(len(sub.upsets()) ** arity)

    def cone_fails(self, sub: Frame) -> bool:
        if sub.leq not in self._cone_fails:
            self._cone_fails[sub.leq] = _first_failure(self.program, sub, 1, self.batch_size) is not None
        return self._cone_fails[sub.leq]

    def screen(self, fr: Frame) -> bool:
        """Whether some world of the frame can fail at all."""
        if fr.up[0] == fr.full:
            return True
        return any(self.cone_fails(cone(fr, k)) for k in range(fr.size))

    def search(self, fr: Frame) -> tuple[tuple[int, ...], int] | None:
        if not self.screen(fr):
            return None
        return _first_failure(self.program, fr, fr.full, self.batch_size)


def _model_for(fr: Frame, names: list[str], masks: tuple[int, ...]) -> Model:
    return Model(fr, {name: Upset(fr, mask) for name, mask in zip(names, masks)})


def check_validity(
    f: Formula,
    logic: LogicClass,
    max_worlds: int,
    *,
    ceiling: int | None = None,
    threads: int | None = None,
) -> ValidityVerdict:
    """
    Exhaustive search over catalog frames with at most max_worlds worlds in the
    logic's frame class. Returns the canonically first counterexample or a
    bounded Valid verdict.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be >= 1")
    search = _Search(f, logic, ceiling or settings.ceiling, settings.batch_size)
    workers = threads or settings.threads
    # the only classical frame is the one-world frame
    bound = 1 if logic is LogicClass.CPL else max_worlds
    frames = ((i, fr) for i, fr in catalog.frames_up_to(bound) if logic.admits(fr))
    visited = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            window = [item for _, item in zip(range(workers), frames)]
            if not window:
                break
            for _, fr in window:
                search.plan(fr)
            # results come back in window order, so the earliest frame wins
            for (i, fr), hit in zip(window, pool.map(search.search, [fr for _, fr in window])):
                visited += 1
                if hit is None:
                    continue
                masks, world = hit
                model = _model_for(fr, search.names, masks)
                if forces(model, world, f):
                    logger.error(f"Counterexample on frame {i} re-verifies as forced: {render(f)}")
                    raise RuntimeError("vectorised search disagrees with the forcing relation")
                logger.info(f"Counterexample on catalog frame {i} after {visited} frames")
                return Counterexample(model, fr.worlds[world], i, logic)
    logger.info(f"{render(f)} valid in {logic.value} up to {max_worlds} worlds ({visited} frames)")
    return Valid(max_worlds, logic)


def check_equivalence(f: Formula, g: Formula, logic: LogicClass, max_worlds: int, **kwargs) -> ValidityVerdict:
    verdict = check_validity(And(Imp(f, g), Imp(g, f)), logic, max_worlds, **kwargs)
    if isinstance(verdict, Valid):
        return verdict
    if not forces(verdict.model, verdict.world, Imp(f, g)):
        direction = f"{render(f)}  =>  {render(g)}"
    else:
        direction = f"{render(g)}  =>  {render(f)}"
    return Counterexample(verdict.model, verdict.world, verdict.frame_index, logic, direction)


def pigeonhole_formula(n: int) -> Formula:
    """The disjunction of p_i -> p_j over i < j <= n, right-nested in lexicographic pair order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n * (n + 1) // 2 > MAX_NESTING:
        raise ValueError(f"the {n}-pigeonhole formula nests deeper than {MAX_NESTING}")
    disjuncts = [Imp(Atom(f"p{i}"), Atom(f"p{j}")) for i in range(n) for j in range(i + 1, n + 1)]
    return reduce(lambda rest, d: Or(d, rest), reversed(disjuncts[:-1]), disjuncts[-1])


def godel_fan(n: int) -> tuple[Model, Formula]:
    """
    Root k below leaves k0..k(n-1); leaf ki forces exactly p_i, and p_n holds
    nowhere. The root does not force pigeonhole_formula(n).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    leaves = [f"k{i}" for i in range(n)]
    forced = {f"p{i}": [leaves[i]] for i in range(n)}
    forced[f"p{n}"] = []
    model = build_model(["k", *leaves], [("k", leaf) for leaf in leaves], forced)
    return model, pigeonhole_formula(n)
