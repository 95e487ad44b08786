"""
Moving between valuations into the value space and Kripke models on catalog frames.

induced_model(v, n): the model on catalog frame n whose atoms are the n-th components of v.
induced_valuation(m, i): the valuation that is 1 everywhere except component i, which
carries the atom truth sets of m.

check_lemma3 runs both constructions against random formulas: forcing in the model
must agree with the matching component of the extended valuation.
"""
from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, Iterable, Literal

from pydantic import BaseModel

from kripkebench.errors import ModelError, ValuationError
from kripkebench.formula import Formula, atoms, random_formula, render, size
from kripkebench.frames import catalog
from kripkebench.kripke import Model, Upset, forces, random_model, truth_set
from kripkebench.values import Tail, Valuation, ValueSeq, extend_valuation, is_designated

logger = logging.getLogger(__name__)

TRIAL_ATOMS = ("p", "q", "r")


def induced_model(v: Valuation, n: int, atom_set: Iterable[str]) -> Model:
    fr = catalog.frame_at(n)
    val = {}
    for name in sorted(atom_set):
        if name not in v:
            raise ValuationError(f"valuation does not assign atom {name}")
        val[name] = v[name].component(n)
    return Model(fr, val)


def induced_valuation(m: Model, m_index: int, atom_set: Iterable[str]) -> dict[str, ValueSeq]:
    fr = catalog.frame_at(m_index)
    if not m.frame.same_shape(fr):
        raise ModelError(f"model frame is not catalog frame {m_index}")
    ones = [catalog.frame_at(i).full for i in range(m_index)]
    return {name: ValueSeq.of(ones + [m.atom_mask(name)], Tail.ONES) for name in sorted(atom_set)}


class Lemma3Violation(BaseModel):
    direction: Literal["valuation-to-model", "model-to-valuation"]
    frame_index: int
    world: int
    formula: str
    forced: bool
    component_bit: int


class Lemma3Report(BaseModel):
    depth: int
    frames: int
    trials: int
    seed: int
    checks: int = 0
    violations: int = 0
    counterexample: Lemma3Violation | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


Extender = Callable[[Valuation, Formula], ValueSeq]


def random_value(rng: random.Random, length: int) -> ValueSeq:
    prefix = [rng.choice(catalog.frame_at(i).upsets()) for i in range(length)]
    return ValueSeq.of(prefix, rng.choice((Tail.ONES, Tail.ZEROS)))


def _run_trial(
    trial: int, depth: int, n_frames: int, seed: int, evaluator: Extender
) -> tuple[int, list[tuple[int, Lemma3Violation]]]:
    rng = random.Random(f"{seed}:{trial}")
    n = rng.randrange(n_frames)
    fr = catalog.frame_at(n)
    atom_set = TRIAL_ATOMS[: rng.randint(1, len(TRIAL_ATOMS))]
    phi = random_formula(rng, atom_set, depth)
    checks = 0
    found = []

    # valuation -> model
    v = {name: random_value(rng, rng.randint(0, n_frames + 1)) for name in atom_set}
    model = induced_model(v, n, atom_set)
    component = evaluator(v, phi).component_mask(n)
    for k in range(fr.size):
        checks += 1
        is_forced = forces(model, k, phi)
        bit = component >> k & 1
        if is_forced != bool(bit):
            found.append((size(phi), Lemma3Violation(
                direction="valuation-to-model", frame_index=n, world=k,
                formula=render(phi), forced=is_forced, component_bit=bit)))

    # model -> valuation
    m = random_model(rng, fr, atom_set)
    nu = induced_valuation(m, n, atom_set)
    component = evaluator(nu, phi).component_mask(n)
    for k in range(fr.size):
        checks += 1
        is_forced = forces(m, k, phi)
        bit = component >> k & 1
        if (not is_forced) != (bit == 0):
            found.append((size(phi), Lemma3Violation(
                direction="model-to-valuation", frame_index=n, world=k,
                formula=render(phi), forced=is_forced, component_bit=bit)))
    return checks, found


def check_lemma3(
    depth: int,
    n_frames: int,
    trials: int,
    seed: int,
    *,
    threads: int = 1,
    evaluator: Extender = extend_valuation,
) -> Lemma3Report:
    """
    Randomised check of both correspondences over the first n_frames catalog
    frames. Violations are reported, never raised; the smallest violating
    formula (earliest trial on ties) is kept as the counterexample.
    """
    if depth < 0 or n_frames < 1 or trials < 1:
        raise ValueError("depth must be >= 0, frames and trials >= 1")
    report = Lemma3Report(depth=depth, frames=n_frames, trials=trials, seed=seed)
    # warm the catalog before worker threads read it
    catalog.frame_at(n_frames - 1)
    run = partial(_run_trial, depth=depth, n_frames=n_frames, seed=seed, evaluator=evaluator)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(run, range(trials)))
    best: tuple[int, Lemma3Violation] | None = None
    for checks, found in outcomes:
        report.checks += checks
        report.violations += len(found)
        for candidate in found:
            if best is None or candidate[0] < best[0]:
                best = candidate
    report.counterexample = best[1] if best else None
    logger.info(f"Correspondence check: {report.checks} checks, {report.violations} violations")
    return report


class Theorem2Report(BaseModel):
    formula: str
    frames: int
    kripke_valid: bool
    designated_everywhere: bool

    @property
    def agrees(self) -> bool:
        return self.kripke_valid == self.designated_everywhere


def check_theorem2(f: Formula, n_frames: int) -> Theorem2Report:
    """
    Bounded form of the countable-values theorem: f is forced everywhere in
    every model on catalog frames 0..n_frames-1 iff every valuation induced
    from those models sends f to the designated value.
    """
    names = sorted(atoms(f))
    kripke_valid = True
    designated = True
    for i in range(n_frames):
        fr = catalog.frame_at(i)
        for choice in itertools.product(fr.upsets(), repeat=len(names)):
            m = Model(fr, {name: Upset(fr, mask) for name, mask in zip(names, choice)})
            if kripke_valid and truth_set(m, f).mask != fr.full:
                kripke_valid = False
            if designated and not is_designated(extend_valuation(induced_valuation(m, i, names), f)):
                designated = False
            if not kripke_valid and not designated:
                break
    return Theorem2Report(
        formula=render(f), frames=n_frames, kripke_valid=kripke_valid, designated_everywhere=designated
    )
