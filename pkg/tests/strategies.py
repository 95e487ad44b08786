from hypothesis import strategies as st

from kripkebench.formula import TOP, And, Atom, Imp, Neg, Or
from kripkebench.frames import catalog
from kripkebench.kripke import Model, Upset

ATOM_NAMES = ("p", "q", "r")

# catalog entries with at most four worlds: 1 + 2 + 7 + 40
SMALL_FRAME_COUNT = 50


def formulas(atom_names=ATOM_NAMES, max_leaves=10):
    leaves = st.sampled_from([TOP, *(Atom(name) for name in atom_names)])
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(Neg, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Imp, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def frames(count=SMALL_FRAME_COUNT):
    return st.integers(min_value=0, max_value=count - 1).map(catalog.frame_at)


@st.composite
def models(draw, atom_names=ATOM_NAMES, frame_count=SMALL_FRAME_COUNT):
    fr = draw(frames(frame_count))
    return Model(fr, {name: Upset(fr, draw(st.sampled_from(fr.upsets()))) for name in atom_names})
