import itertools

import pytest

from kripkebench.frames import FrameCatalog, catalog, enumerate_frames, frame_at, is_isomorphic
from kripkebench.kripke import build_frame


def _brute_force(n):
    """Index-compatible partial orders on n points, by filtering all n*n relations."""
    found = set()
    for cells in itertools.product((False, True), repeat=n * n):
        leq = tuple(tuple(cells[i * n: (i + 1) * n]) for i in range(n))
        if not all(leq[i][i] for i in range(n)):
            continue
        if any(leq[i][j] and j < i for i in range(n) for j in range(n)):
            continue
        if any(leq[i][j] and leq[j][k] and not leq[i][k] for i in range(n) for j in range(n) for k in range(n)):
            continue
        found.add(leq)
    return found


@pytest.mark.parametrize("n", [1, 2, 3])
def test_block_matches_brute_force(n):
    block = [frame_at(i).leq for i in catalog.block_range(n)]
    assert len(block) == len(set(block))
    assert set(block) == _brute_force(n)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 7), (4, 40)])
def test_block_sizes(n, count):
    assert catalog.count_frames(n) == count


def test_first_frames():
    one, antichain, chain = enumerate_frames(3)
    assert one.size == 1
    assert antichain.leq == ((True, False), (False, True))
    assert chain.leq == ((True, True), (False, True))


def test_up_to_iso_three_world_classes():
    three = [frame_at(i) for i in catalog.block_range(3)]
    classes = []
    for fr in three:
        if not any(is_isomorphic(fr, kept) for kept in classes):
            classes.append(fr)
    assert len(classes) == 5
    assert len(enumerate_frames(10, up_to_iso=True)) == 1 + 2 + 5


@pytest.mark.parametrize("pairs", [
    [],
    [("x", "y"), ("y", "z")],
    [("x", "y"), ("x", "z")],
    [("x", "z"), ("y", "z")],
    [("x", "y")],
])
def test_every_small_poset_has_an_isomorphic_entry(pairs):
    fr = build_frame(["z", "y", "x"], pairs)
    assert any(is_isomorphic(fr, frame_at(i)) for i in catalog.block_range(3))


def test_isomorphism_distinguishes_v_from_lambda(v_model, lambda_model):
    assert not is_isomorphic(v_model.frame, lambda_model.frame)
    renamed = build_frame(["x", "y", "z"], [("x", "z"), ("y", "z")])
    assert is_isomorphic(renamed, lambda_model.frame)


def test_catalog_index_of_the_v_frame(v_model):
    i = catalog.catalog_index(v_model.frame)
    assert i in catalog.block_range(3)
    assert frame_at(i).same_shape(v_model.frame)


def test_catalog_index_rejects_unlabelled_order(lambda_model):
    # c below b has c after b in the world order
    with pytest.raises(LookupError):
        catalog.catalog_index(lambda_model.frame)


def test_frames_up_to_is_in_index_order():
    indices = [i for i, _ in catalog.frames_up_to(4)]
    assert indices == list(range(50))


def test_blocks_are_sorted_by_matrix_bits():
    def key(fr):
        return [cell for row in fr.leq for cell in row]

    block = [frame_at(i) for i in catalog.block_range(4)]
    assert [key(fr) for fr in block] == sorted(key(fr) for fr in block)


def test_catalog_is_deterministic():
    fresh = FrameCatalog()
    assert [fresh.frame_at(i) for i in range(50)] == [frame_at(i) for i in range(50)]


def test_negative_index():
    with pytest.raises(IndexError):
        frame_at(-1)
