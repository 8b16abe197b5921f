"""Table 1, label helpers and random context generators shared by the tests."""

import random
from pathlib import Path

from conceptminer import FormalContext

DATA = Path(__file__).resolve().parent.parent / "data"

TABLE1_ROWS = [{"A", "B"}, {"A", "B"}, {"B", "C"}, {"B", "C", "D"}, {"C", "D"}]


def table1() -> FormalContext:
    props = "ABCD"
    return FormalContext.from_incidence(
        [[props.index(p) for p in row] for row in TABLE1_ROWS],
        object_labels=[f"o{i}" for i in range(1, 6)],
        property_labels=list(props),
    )


def O(*names):
    """Object indices of Table 1 from labels like 'o3'."""
    return frozenset(int(n[1:]) - 1 for n in names)


def P(letters):
    return frozenset("ABCD".index(ch) for ch in letters)


def random_context(rng: random.Random, max_objects=12, max_properties=10) -> FormalContext:
    n_obj = rng.randint(0, max_objects)
    n_prop = rng.randint(1, max_properties)
    density = rng.choice([0.15, 0.3, 0.5, 0.7, 0.9])
    rows = [[p for p in range(n_prop) if rng.random() < density] for _ in range(n_obj)]
    return FormalContext.from_incidence(rows, n_properties=n_prop)


# filled by test_acceptance, printed by conftest
ACCEPTANCE_LINES = []


def contexts(max_objects=12, max_properties=10):
    """Hypothesis strategy for small formal contexts."""
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n_prop = draw(st.integers(1, max_properties))
        n_obj = draw(st.integers(0, max_objects))
        rows = draw(
            st.lists(st.sets(st.integers(0, n_prop - 1)), min_size=n_obj, max_size=n_obj)
        )
        return FormalContext.from_incidence(rows, n_properties=n_prop)

    return build()
