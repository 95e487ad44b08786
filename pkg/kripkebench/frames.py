"""
The canonical enumeration of finite Kripke frames.

Frames come in blocks by world count n = 1, 2, ...  Inside a block every
relation on {0..n-1} that is a partial order compatible with the index order
(j ≽ k implies j >= k) appears once, sorted by the integer read off the
relation matrix row by row (row 0 most significant).  Every finite poset has
a linear extension, so every poset is isomorphic to some entry.

Block sizes grow fast: 1, 2, 7, 40, 357, 4824, 96428 for n = 1..7.
"""
from __future__ import annotations

import itertools
import logging
import threading
from typing import Iterator

from kripkebench.kripke import Frame, bits

logger = logging.getLogger(__name__)


def _block(n: int) -> list[Frame]:
    """All index-compatible partial orders on n worlds, in catalog order."""
    # succ[i] is the strict up-set of i as a bitmask; rows are fixed bottom-up
    # because row i may only mention larger indices.
    found: list[tuple[int, ...]] = []
    succ = [0] * n

    def choose(i: int) -> None:
        if i < 0:
            found.append(tuple(succ))
            return
        higher = list(range(i + 1, n))
        for r in range(1 << len(higher)):
            chosen = sum(1 << higher[t] for t in range(len(higher)) if r >> t & 1)
            if all(succ[j] & ~chosen == 0 for j in bits(chosen)):
                succ[i] = chosen
                choose(i - 1)
        succ[i] = 0

    choose(n - 1)

    def matrix_key(rows: tuple[int, ...]) -> int:
        key = 0
        for i in range(n):
            for j in range(n):
                key = key << 1 | (1 if i == j or rows[i] >> j & 1 else 0)
        return key

    found.sort(key=matrix_key)
    names = tuple(str(i) for i in range(n))
    return [
        Frame(names, tuple(tuple(i == j or bool(rows[i] >> j & 1) for j in range(n)) for i in range(n)))
        for rows in found
    ]


class FrameCatalog:
    """Lazily extended, thread-safe list of all finite frames in canonical order."""

    def __init__(self):
        self._frames: list[Frame] = []
        self._starts: list[int] = []
        self._lock = threading.Lock()

    def _extend_to_size(self, n: int) -> None:
        with self._lock:
            while len(self._starts) < n:
                size = len(self._starts) + 1
                block = _block(size)
                logger.info(f"Frame catalog: {len(block)} frames with {size} worlds")
                self._starts.append(len(self._frames))
                self._frames.extend(block)

    def frame_at(self, i: int) -> Frame:
        if i < 0:
            raise IndexError("catalog index must be >= 0")
        while i >= len(self._frames):
            self._extend_to_size(len(self._starts) + 1)
        return self._frames[i]

    def block_range(self, n: int) -> range:
        """Catalog indices of the frames with exactly n worlds."""
        self._extend_to_size(n)
        start = self._starts[n - 1]
        end = self._starts[n] if n < len(self._starts) else len(self._frames)
        return range(start, end)

    def count_frames(self, n: int) -> int:
        return len(self.block_range(n))

    def frames_up_to(self, max_worlds: int) -> Iterator[tuple[int, Frame]]:
        """(index, frame) for every entry with at most max_worlds worlds, generated on demand."""
        for n in range(1, max_worlds + 1):
            for i in self.block_range(n):
                yield i, self._frames[i]

    def catalog_index(self, fr: Frame) -> int:
        """Index of the entry with the same order matrix as `fr` (names ignored)."""
        for i in self.block_range(fr.size):
            if self._frames[i].same_shape(fr):
                return i
        raise LookupError("frame is not index-compatible with the catalog ordering")


catalog = FrameCatalog()


def frame_at(i: int) -> Frame:
    return catalog.frame_at(i)


def _signature(fr: Frame) -> tuple:
    return tuple(sorted((bin(fr.up[k]).count("1"), sum(fr.leq[j][k] for j in range(fr.size)))
                        for k in range(fr.size)))


def is_isomorphic(a: Frame, b: Frame) -> bool:
    """Exhaustive bijection search; meant for small frames (<= 8 worlds)."""
    if a.size != b.size or _signature(a) != _signature(b):
        return False
    n = a.size
    for perm in itertools.permutations(range(n)):
        if all(a.leq[i][j] == b.leq[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return True
    return False


def enumerate_frames(count: int, up_to_iso: bool = False) -> list[Frame]:
    """The first `count` catalog entries, optionally without isomorphic repeats."""
    if count < 0:
        raise ValueError("count must be >= 0")
    result: list[Frame] = []
    for i in range(count):
        fr = catalog.frame_at(i)
        if up_to_iso and any(is_isomorphic(fr, kept) for kept in result):
            continue
        result.append(fr)
    return result
