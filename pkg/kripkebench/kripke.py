"""
Finite Kripke frames and models, the forcing relation and the model text format.

Worlds are named; internally world i is bit i of an int, so world sets
(upsets, truth sets) are plain bitmasks.  `frame.leq[k][j]` means world j
is above world k (j ≽ k).
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from kripkebench.errors import ModelError
from kripkebench.formula import ATOM_RE, And, Atom, Formula, Imp, Neg, Or, Top

logger = logging.getLogger(__name__)


def bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class Frame:
    worlds: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n = len(self.worlds)
        if n == 0:
            raise ModelError("a frame needs at least one world")
        if len(set(self.worlds)) != n:
            raise ModelError("duplicate world names")
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise ModelError("order matrix does not match the world list")
        for k in range(n):
            if not self.leq[k][k]:
                raise ModelError(f"order is not reflexive at {self.worlds[k]}")
            for j in range(n):
                if j != k and self.leq[k][j] and self.leq[j][k]:
                    raise ModelError(
                        f"antisymmetry violated: {self.worlds[k]} and {self.worlds[j]} lie on a cycle"
                    )
                if self.leq[k][j] and any(self.leq[j][i] and not self.leq[k][i] for i in range(n)):
                    raise ModelError(f"order is not transitive through {self.worlds[j]}")

    @property
    def size(self) -> int:
        return len(self.worlds)

    @cached_property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def up(self) -> tuple[int, ...]:
        """up[k] is the bitmask of all worlds above k (k included)."""
        return tuple(
            sum(1 << j for j in range(self.size) if self.leq[k][j]) for k in range(self.size)
        )

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.worlds)}

    def index(self, world: str | int) -> int:
        if isinstance(world, int):
            if 0 <= world < self.size:
                return world
            raise ModelError(f"unknown world index {world}")
        try:
            return self._index[world]
        except KeyError:
            raise ModelError(f"unknown world {world!r}") from None

    def mask_of(self, worlds: Iterable[str | int]) -> int:
        mask = 0
        for w in worlds:
            mask |= 1 << self.index(w)
        return mask

    def names(self, mask: int) -> list[str]:
        return [self.worlds[i] for i in bits(mask)]

    def is_upset(self, mask: int) -> bool:
        return all(self.up[k] & ~mask == 0 for k in bits(mask))

    def close_up(self, mask: int) -> int:
        closed = 0
        for k in bits(mask):
            closed |= self.up[k]
        return closed

    def upset(self, worlds: Iterable[str | int]) -> "Upset":
        return Upset(self, self.mask_of(worlds))

    def upsets(self) -> list[int]:
        """All upsets as bitmasks, in increasing bitmask order."""
        return self._upsets

    @cached_property
    def _upsets(self) -> list[int]:
        if self.size > 20:
            raise ModelError(f"refusing to list the upsets of a {self.size}-world frame")
        return [mask for mask in range(self.full + 1) if self.is_upset(mask)]

    def covering_pairs(self) -> list[tuple[int, int]]:
        """Pairs (k, j) with j strictly above k and nothing strictly between."""
        pairs = []
        for k in range(self.size):
            for j in range(self.size):
                if j == k or not self.leq[k][j]:
                    continue
                if not any(
                    i not in (k, j) and self.leq[k][i] and self.leq[i][j] for i in range(self.size)
                ):
                    pairs.append((k, j))
        return pairs

    def same_shape(self, other: "Frame") -> bool:
        """Structural identity, ignoring world names."""
        return self.leq == other.leq


@dataclass(frozen=True)
class Upset:
    frame: Frame
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.frame.full:
            raise ModelError(f"world set {self.mask:#b} does not belong to the frame")
        if not self.frame.is_upset(self.mask):
            raise ModelError(
                f"world set {{{', '.join(self.frame.names(self.mask))}}} is not upward closed"
            )

    def __contains__(self, world: str | int) -> bool:
        return bool(self.mask >> self.frame.index(world) & 1)

    def worlds(self) -> list[str]:
        return self.frame.names(self.mask)

    def __str__(self) -> str:
        return "{" + ", ".join(self.worlds()) + "}"


@dataclass(frozen=True)
class Model:
    frame: Frame
    val: Mapping[str, Upset] = field(default_factory=dict)

    def __post_init__(self):
        for name, upset in self.val.items():
            if not ATOM_RE.fullmatch(name):
                raise ModelError(f"invalid atom name {name!r}")
            if upset.frame != self.frame:
                raise ModelError(f"valuation of {name} lives on another frame")

    def atom_mask(self, name: str) -> int:
        upset = self.val.get(name)
        return upset.mask if upset is not None else 0


def build_frame(worlds: Iterable[str], pairs: Iterable[tuple[str, str]]) -> Frame:
    """Frame whose order is the reflexive-transitive closure of `pairs` ((a, b): b ≽ a)."""
    names = tuple(worlds)
    if len(set(names)) != len(names):
        raise ModelError("duplicate world names")
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    rel = [[i == j for j in range(n)] for i in range(n)]
    for low, high in pairs:
        for w in (low, high):
            if w not in index:
                raise ModelError(f"unknown world {w!r}")
        rel[index[low]][index[high]] = True
    for via in range(n):
        for i in range(n):
            if rel[i][via]:
                for j in range(n):
                    if rel[via][j]:
                        rel[i][j] = True
    return Frame(names, tuple(tuple(row) for row in rel))


def build_model(
    worlds: Iterable[str],
    pairs: Iterable[tuple[str, str]],
    atom_spec: Mapping[str, Iterable[str]] | Iterable[tuple[str, str]],
    close_up: bool = False,
) -> Model:
    """
    Build and validate a model. `atom_spec` maps atoms to the worlds forcing them
    (or lists (atom, world) pairs). Non-persistent atoms are an error unless
    `close_up` is set, in which case they are replaced by their upward closures.
    """
    frame = build_frame(worlds, pairs)
    if isinstance(atom_spec, Mapping):
        forced = {atom: list(ws) for atom, ws in atom_spec.items()}
    else:
        forced = {}
        for atom, world in atom_spec:
            forced.setdefault(atom, []).append(world)
    val = {}
    for atom in sorted(forced):
        if not ATOM_RE.fullmatch(atom):
            raise ModelError(f"invalid atom name {atom!r}")
        mask = frame.mask_of(forced[atom])
        closed = frame.close_up(mask)
        if closed != mask:
            if not close_up:
                missing = ", ".join(frame.names(closed & ~mask))
                raise ModelError(f"persistency violated for {atom}: also needs {missing}")
            logger.warning(f"Closing up {atom}: added {frame.names(closed & ~mask)}")
        val[atom] = Upset(frame, closed)
    return Model(frame, val)


def forces(m: Model, k: str | int, f: Formula) -> bool:
    return _forces(m, m.frame.index(k), f, {})


def _forces(m: Model, k: int, f: Formula, memo: dict) -> bool:
    key = (k, f)
    cached = memo.get(key)
    if cached is not None:
        return cached
    frame = m.frame
    match f:
        case Top():
            result = True
        case Atom(name):
            result = bool(m.atom_mask(name) >> k & 1)
        case And(left, right):
            result = _forces(m, k, left, memo) and _forces(m, k, right, memo)
        case Or(left, right):
            result = _forces(m, k, left, memo) or _forces(m, k, right, memo)
        case Neg(sub):
            result = all(not _forces(m, j, sub, memo) for j in bits(frame.up[k]))
        case Imp(left, right):
            result = all(
                not _forces(m, j, left, memo) or _forces(m, j, right, memo)
                for j in bits(frame.up[k])
            )
    memo[key] = result
    return result


def truth_set(m: Model, f: Formula) -> Upset:
    memo: dict = {}
    mask = sum(1 << k for k in range(m.frame.size) if _forces(m, k, f, memo))
    # Upset() re-checks persistency of the computed set.
    return Upset(m.frame, mask)


def is_connected(fr: Frame) -> bool:
    for k in range(fr.size):
        above = bits(fr.up[k])
        for i in above:
            for j in above:
                if not (fr.leq[i][j] or fr.leq[j][i]):
                    return False
    return True


def cone(fr: Frame, k: str | int) -> Frame:
    """The subframe of worlds above k, in frame order."""
    members = bits(fr.up[fr.index(k)])
    return Frame(
        tuple(fr.worlds[j] for j in members),
        tuple(tuple(fr.leq[i][j] for j in members) for i in members),
    )


def random_upset(rng: random.Random, fr: Frame) -> Upset:
    """Uniform over all upsets of the frame."""
    return Upset(fr, rng.choice(fr.upsets()))


def random_model(rng: random.Random, fr: Frame, atom_names: Iterable[str]) -> Model:
    return Model(fr, {name: random_upset(rng, fr) for name in sorted(atom_names)})


# ---------------------------------------------------------------------------
# Model text format
# ---------------------------------------------------------------------------

def parse_model_text(text: str, close_up: bool = False) -> Model:
    """
    One directive per line, `#` starts a comment:
        worlds a b c
        order a b        (b ≽ a)
        atom p b c       (p forced at b and c)
    """
    worlds: list[str] | None = None
    pairs: list[tuple[str, str]] = []
    forced: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        directive, args = words[0], words[1:]
        if directive == "worlds":
            if worlds is not None:
                raise ModelError(f"line {lineno}: worlds declared twice")
            if not args:
                raise ModelError(f"line {lineno}: worlds needs at least one name")
            worlds = args
        elif directive == "order":
            if len(args) != 2:
                raise ModelError(f"line {lineno}: order takes exactly two worlds")
            pairs.append((args[0], args[1]))
        elif directive == "atom":
            if not args:
                raise ModelError(f"line {lineno}: atom needs a name")
            if args[0] in forced:
                raise ModelError(f"line {lineno}: atom {args[0]} declared twice")
            forced[args[0]] = args[1:]
        else:
            raise ModelError(f"line {lineno}: unknown directive {directive!r}")
    if worlds is None:
        raise ModelError("model text has no worlds line")
    return build_model(worlds, pairs, forced, close_up=close_up)


def render_frame_text(fr: Frame) -> str:
    lines = ["worlds " + " ".join(fr.worlds)]
    lines.extend(f"order {fr.worlds[k]} {fr.worlds[j]}" for k, j in fr.covering_pairs())
    return "\n".join(lines) + "\n"


def render_model_text(m: Model) -> str:
    lines = [render_frame_text(m.frame).rstrip("\n")]
    for name in sorted(m.val):
        lines.append(" ".join(["atom", name, *m.val[name].worlds()]))
    return "\n".join(lines) + "\n"
