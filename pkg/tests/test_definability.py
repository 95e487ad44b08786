import pytest

from kripkebench.definability import (
    CloneProblem,
    Definable,
    NotDefinable,
    check_definable,
    check_separation,
    clone_closure,
    enumerate_truth_sets,
    is_closed,
)
from kripkebench.errors import ModelError
from kripkebench.fixtures import (
    DISJUNCTION_BY_IMPLICATION,
    certificate_suite,
    gdl_two_atom_model,
    negation_chain,
    separation_suite,
)
from kripkebench.formula import TOP, Atom, depth, enumerate_formulas, in_fragment, parse, size
from kripkebench.kripke import Upset, build_model, truth_set
from kripkebench.validity import LogicClass, Valid, check_equivalence

# lambda model world bits: a = 1, b = 2, c = 4
A, B, C = 0b001, 0b010, 0b100


@pytest.fixture
def conjunction_problem(lambda_model):
    return CloneProblem.build(lambda_model, ["neg", "or", "imp"], parse("p & q"))


def test_conjunction_is_outside_the_closure(conjunction_problem):
    closure = clone_closure(conjunction_problem)
    assert set(closure) == {0, A | B, B | C, A | B | C}
    assert conjunction_problem.target.mask == B
    assert B not in closure


def test_no_connectives_leaves_the_generators(lambda_model):
    problem = CloneProblem.build(lambda_model, [], parse("p & q"))
    assert set(clone_closure(problem)) == {A | B | C, A | B, B | C}


def test_witnesses_match_their_truth_sets(conjunction_problem):
    frag = conjunction_problem.fragment()
    for mask, witness in clone_closure(conjunction_problem).items():
        assert in_fragment(witness, frag)
        assert truth_set(conjunction_problem.model, witness).mask == mask


def test_witnesses_have_minimal_size(conjunction_problem):
    model = conjunction_problem.model
    smallest: dict[int, int] = {}
    for f in enumerate_formulas(conjunction_problem.fragment(), 2):
        mask = truth_set(model, f).mask
        smallest[mask] = min(smallest.get(mask, size(f)), size(f))
    for mask, witness in clone_closure(conjunction_problem).items():
        assert smallest[mask] >= size(witness)
        if size(witness) <= 2:
            assert smallest[mask] == size(witness)


def test_implication_is_not_definable_from_neg_or_and(lean_model):
    problem = CloneProblem.build(lean_model, ["neg", "or", "and"], parse("p -> q"))
    assert problem.target.worlds() == ["b", "c"]
    certificate = check_definable(problem)
    assert isinstance(certificate, NotDefinable)
    assert problem.target not in certificate.closure


def test_generator_target_has_an_atomic_witness(lambda_model):
    certificate = check_definable(CloneProblem.build(lambda_model, ["neg", "or", "imp"], Atom("p")))
    assert certificate == Definable(Atom("p"))


def test_shorter_witness_wins_a_tie():
    model = build_model(["w"], [], {"aa": [], "b": []})
    problem = CloneProblem.build(model, [], Atom("b"), generators=["aa", "b"])
    assert clone_closure(problem)[0] == Atom("b")
    assert check_definable(problem) == Definable(Atom("b"))


@pytest.mark.parametrize("connectives", [["neg", "imp"], ["neg", "and"]])
def test_disjunction_is_not_definable_on_two_chains(two_chains, connectives):
    problem = CloneProblem.build(two_chains, connectives, parse("p | q"))
    assert problem.target.worlds() == ["b", "d"]
    assert isinstance(check_definable(problem), NotDefinable)


def test_disjunction_is_not_definable_with_all_but_or_in_ipl(v_model):
    problem = CloneProblem.build(v_model, ["neg", "and", "imp"], parse("p | q"))
    assert isinstance(check_definable(problem), NotDefinable)


def test_negation_is_not_positive():
    problem = CloneProblem.build(negation_chain(), ["and", "or", "imp"], parse("~p"))
    assert problem.target.mask == 0
    certificate = check_definable(problem)
    assert isinstance(certificate, NotDefinable)
    # every positive truth set contains the top world
    assert all("1" in upset for upset in certificate.closure)


def test_disjunction_is_definable_in_gdl():
    model = gdl_two_atom_model()
    assert model.frame.size == 70
    problem = CloneProblem.build(model, ["and", "imp"], parse("p | q"))
    certificate = check_definable(problem)
    assert isinstance(certificate, Definable)
    witness = certificate.witness
    assert in_fragment(witness, problem.fragment())
    assert truth_set(model, witness) == problem.target
    assert isinstance(check_equivalence(witness, DISJUNCTION_BY_IMPLICATION, LogicClass.GDL, 5), Valid)


@pytest.mark.parametrize("claim", certificate_suite(), ids=lambda c: c.name)
def test_certificate_suite(claim):
    certificate = check_definable(claim.problem)
    assert isinstance(certificate, Definable) == claim.definable
    if isinstance(certificate, NotDefinable):
        masks = [u.mask for u in certificate.closure]
        assert is_closed(claim.problem, masks)
        assert claim.problem.target.mask not in masks
        # the fixpoint is exactly what formulas up to depth 6 reach
        assert set(enumerate_truth_sets(claim.problem, 6)) == set(masks)


@pytest.mark.parametrize("claim", [c for c in certificate_suite() if not c.definable], ids=lambda c: c.name)
def test_pruned_enumeration_matches_raw_enumeration(claim):
    problem = claim.problem
    raw = {truth_set(problem.model, f).mask for f in enumerate_formulas(problem.fragment(), 2)}
    assert set(enumerate_truth_sets(problem, 2)) == raw


def test_truth_set_enumeration_grows_with_depth(conjunction_problem):
    previous = set()
    for d in range(5):
        found = enumerate_truth_sets(conjunction_problem, d)
        assert previous <= set(found)
        assert all(depth(f) <= d for f in found.values())
        previous = set(found)
    assert set(enumerate_truth_sets(conjunction_problem, 0)) == {A | B | C, A | B, B | C}


@pytest.mark.parametrize("claim", separation_suite(), ids=lambda c: c.name)
def test_separation_suite(claim):
    assert check_separation(claim.problem, claim.premise, claim.clauses)
    # scan the closure directly as well
    fr = claim.problem.model.frame
    premise = fr.mask_of(claim.premise)
    for mask in clone_closure(claim.problem):
        if premise & ~mask == 0:
            assert any(fr.mask_of(clause) & ~mask == 0 for clause in claim.clauses)


def test_separation_fails_once_the_target_is_a_generator(conjunction_problem, lambda_model):
    assert check_separation(conjunction_problem, ["b"], [["a"], ["c"]])
    extended = CloneProblem(
        lambda_model,
        conjunction_problem.generators + ((parse("p & q"), Upset(lambda_model.frame, B)),),
        conjunction_problem.connectives,
        conjunction_problem.target,
    )
    assert not check_separation(extended, ["b"], [["a"], ["c"]])
    assert isinstance(check_definable(extended), Definable)


def test_fragment_includes_top_only_with_the_top_generator(lambda_model):
    with_top = CloneProblem.build(lambda_model, ["imp"], Atom("p"))
    without = CloneProblem.build(lambda_model, ["imp"], Atom("p"), generators=["p", "q"])
    assert in_fragment(TOP, with_top.fragment())
    assert not in_fragment(TOP, without.fragment())


def test_problem_validation(lambda_model, v_model):
    with pytest.raises(ModelError):
        CloneProblem.build(lambda_model, ["neg"], Atom("p"), generators=["r"])
    with pytest.raises(ValueError):
        CloneProblem.build(lambda_model, ["top"], Atom("p"))
    with pytest.raises(ValueError):
        CloneProblem.build(lambda_model, ["xor"], Atom("p"))
    with pytest.raises(ModelError):
        CloneProblem.build(lambda_model, ["neg"], v_model.val["p"])
