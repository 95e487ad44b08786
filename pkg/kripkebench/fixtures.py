"""
Small models, formula families and the definability certificates built on them.

Each model here separates two fragments: some target truth set stays outside
the clone closure of the weaker fragment.  `certificate_suite()` and
`separation_suite()` list the claims; `certify.py` replays them.
"""
from __future__ import annotations

from dataclasses import dataclass

from kripkebench.definability import CloneProblem
from kripkebench.formula import Formula, parse
from kripkebench.kripke import Model, build_model

# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

def lambda_model() -> Model:
    """b above both a and c; p at a, b and q at b, c.  b forces p & q, a and c do not."""
    return build_model(["a", "b", "c"], [("a", "b"), ("c", "b")], {"p": ["a", "b"], "q": ["b", "c"]})


def lambda_model_lean() -> Model:
    """Same frame, p at a, b and q only at b.  b and c force p -> q, a does not."""
    return build_model(["a", "b", "c"], [("a", "b"), ("c", "b")], {"p": ["a", "b"], "q": ["b"]})


def two_chains_model() -> Model:
    """Chains a <= b and c <= d with p at b and q at d; p | q holds exactly at b, d."""
    return build_model(["a", "b", "c", "d"], [("a", "b"), ("c", "d")], {"p": ["b"], "q": ["d"]})


def v_model() -> Model:
    """a below b and c, p at b, q at c: the smallest frame that is not connected."""
    return build_model(["a", "b", "c"], [("a", "b"), ("a", "c")], {"p": ["b"], "q": ["c"]})


def negation_chain() -> Model:
    """The 2-chain 0 <= 1 with p at 1.  ~p holds nowhere."""
    return build_model(["0", "1"], [("0", "1")], {"p": ["1"]})


GDL_CHAIN_LENGTHS = (1, 2, 3)


def gdl_two_atom_model() -> Model:
    """
    Disjoint union of every chain with at most three worlds under every
    persistent valuation of p and q.  Any two-atom GDL countermodel reduces
    to a chain of at most three distinct points, so a truth-set identity that
    holds here holds throughout GDL.

    World `c{i}w{j}` is position j (bottom 0) of component i.
    """
    worlds: list[str] = []
    pairs: list[tuple[str, str]] = []
    forced: dict[str, list[str]] = {"p": [], "q": []}
    component = 0
    for length in GDL_CHAIN_LENGTHS:
        # an upset of a chain is its top t worlds
        for tp in range(length + 1):
            for tq in range(length + 1):
                names = [f"c{component}w{j}" for j in range(length)]
                worlds.extend(names)
                pairs.extend(zip(names, names[1:]))
                forced["p"].extend(names[length - tp:])
                forced["q"].extend(names[length - tq:])
                component += 1
    return build_model(worlds, pairs, forced)


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

DISJUNCTION_BY_IMPLICATION = parse("((p -> q) -> q) & ((q -> p) -> p)")

# (formula, valid in intuitionistic logic)
BOUNDED_VALIDITY_FIXTURES: tuple[tuple[str, bool], ...] = (
    ("p -> p", True),
    ("p -> q -> p", True),
    ("p & q -> p", True),
    ("~~(p | ~p)", True),
    ("(p -> q) -> ~q -> ~p", True),
    ("p | ~p", False),
    ("~~p -> p", False),
    ("(p -> q) | (q -> p)", False),
    ("((p -> q) -> p) -> p", False),
    ("~p | ~~p", False),
)


def bounded_validity_fixtures() -> list[tuple[Formula, bool]]:
    return [(parse(text), valid) for text, valid in BOUNDED_VALIDITY_FIXTURES]


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DefinabilityClaim:
    name: str
    description: str
    problem: CloneProblem
    definable: bool
    # formula the witness must match, checked for GDL equivalence
    expected_equivalent: Formula | None = None


@dataclass(frozen=True)
class SeparationClaim:
    name: str
    problem: CloneProblem
    premise: tuple[str, ...]
    clauses: tuple[tuple[str, ...], ...]


def certificate_suite() -> list[DefinabilityClaim]:
    lam, lean, chains, vee = lambda_model(), lambda_model_lean(), two_chains_model(), v_model()
    return [
        DefinabilityClaim(
            "and-from-neg-or-imp",
            "p & q is not definable from ~, |, ->, T (IPL and GDL)",
            CloneProblem.build(lam, ["neg", "or", "imp"], parse("p & q")),
            definable=False,
        ),
        DefinabilityClaim(
            "imp-from-neg-or-and",
            "p -> q is not definable from ~, |, &, T (IPL and GDL)",
            CloneProblem.build(lean, ["neg", "or", "and"], parse("p -> q")),
            definable=False,
        ),
        DefinabilityClaim(
            "or-from-and-imp-gdl",
            "p | q is definable from &, -> in GDL",
            CloneProblem.build(gdl_two_atom_model(), ["and", "imp"], parse("p | q")),
            definable=True,
            expected_equivalent=DISJUNCTION_BY_IMPLICATION,
        ),
        DefinabilityClaim(
            "or-from-neg-imp",
            "p | q is not definable from ~, ->, T (IPL and GDL)",
            CloneProblem.build(chains, ["neg", "imp"], parse("p | q")),
            definable=False,
        ),
        DefinabilityClaim(
            "or-from-neg-and",
            "p | q is not definable from ~, &, T (IPL and GDL)",
            CloneProblem.build(chains, ["neg", "and"], parse("p | q")),
            definable=False,
        ),
        DefinabilityClaim(
            "or-from-neg-and-imp-ipl",
            "p | q is not definable from ~, &, ->, T in IPL",
            CloneProblem.build(vee, ["neg", "and", "imp"], parse("p | q")),
            definable=False,
        ),
        DefinabilityClaim(
            "neg-from-positive",
            "~p is not definable from &, |, ->, T",
            CloneProblem.build(negation_chain(), ["and", "or", "imp"], parse("~p")),
            definable=False,
        ),
    ]


def separation_suite() -> list[SeparationClaim]:
    lam, lean, chains, vee = lambda_model(), lambda_model_lean(), two_chains_model(), v_model()
    return [
        SeparationClaim(
            "b-splits-to-a-or-c",
            CloneProblem.build(lam, ["neg", "or", "imp"], parse("p & q")),
            ("b",), (("a",), ("c",)),
        ),
        SeparationClaim(
            "bc-pulls-down-to-a",
            CloneProblem.build(lean, ["neg", "or", "and"], parse("p -> q")),
            ("b", "c"), (("a",),),
        ),
        SeparationClaim(
            "bd-splits-to-a-or-c",
            CloneProblem.build(chains, ["neg", "imp"], parse("p | q")),
            ("b", "d"), (("a",), ("c",)),
        ),
        SeparationClaim(
            "bd-pulls-down-to-ac",
            CloneProblem.build(chains, ["neg", "and"], parse("p | q")),
            ("b", "d"), (("a", "c"),),
        ),
        SeparationClaim(
            "bc-pulls-down-to-a-ipl",
            CloneProblem.build(vee, ["neg", "and", "imp"], parse("p | q")),
            ("b", "c"), (("a",),),
        ),
    ]
