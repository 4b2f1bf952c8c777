import random

import pytest
from hypothesis import strategies as st

from genlogic import Dataset, load_fixture
from genlogic.formula import And, Atom, Iff, Implies, Not, Or, TimedFormula, parse_condition

ROOMS = "abcdefghijklmnopq"


@pytest.fixture(scope="session")
def maze():
    return load_fixture("maze")


@pytest.fixture(scope="session")
def weather():
    return load_fixture("weather")


@pytest.fixture(scope="session")
def rooms():
    return ["L_" + r for r in ROOMS]


def obs(*readings):
    """obs((1, "0011"), (2, "0000")) -> split timed literals over N, E, S, W."""
    return parse_condition(", ".join(f"OBS NESW={bits} @{t}" for t, bits in readings))


# ---------------------------------------------------------------------------
# random instances (plain random, for seeded campaigns)

def random_formula(rng, atoms, depth=2):
    if depth == 0 or rng.random() < 0.35:
        a = Atom(rng.choice(atoms))
        return Not(a) if rng.random() < 0.4 else a
    kind = rng.choice([Not, And, Or, Implies, Iff])
    if kind is Not:
        return Not(random_formula(rng, atoms, depth - 1))
    return kind(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))


def random_dataset(rng, max_atoms=12, max_K=16, max_T=4, density=None):
    n = rng.randint(1, max_atoms)
    K = rng.randint(1, max_K)
    T = rng.randint(1, max_T)
    p = density if density is not None else rng.choice([0.2, 0.5, 0.8])
    atoms = [f"x{i}" for i in range(n)]
    # few distinct prototypes so models repeat across data
    protos = [[int(rng.random() < p) for _ in atoms] for _ in range(rng.randint(1, 6))]
    rows = [[list(rng.choice(protos)) if rng.random() < 0.6 else [int(rng.random() < p) for _ in atoms]
             for _ in range(T)] for _ in range(K)]
    return Dataset.from_bits(atoms, rows)


def random_condition(rng, ds, size, unfounded=False):
    atoms = list(ds.vocabulary.atoms)
    items = []
    for _ in range(size):
        f = random_formula(rng, atoms)
        if unfounded:
            f = And(f, Not(f))
        items.append(TimedFormula(f, rng.randint(1, ds.T)))
    return tuple(items)


# ---------------------------------------------------------------------------
# hypothesis strategies

ATOMS = ["p", "q", "r"]


def formulas(atoms=ATOMS, max_leaves=8):
    leaves = st.sampled_from(atoms).map(Atom)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
            st.tuples(sub, sub).map(lambda t: Implies(*t)),
            st.tuples(sub, sub).map(lambda t: Iff(*t)),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def datasets(draw, atoms=ATOMS, max_K=6, max_T=3):
    K = draw(st.integers(1, max_K))
    T = draw(st.integers(1, max_T))
    bits = st.lists(st.integers(0, 1), min_size=len(atoms), max_size=len(atoms))
    rows = draw(st.lists(st.lists(bits, min_size=T, max_size=T), min_size=K, max_size=K))
    return Dataset.from_bits(atoms, rows)


@st.composite
def conditions(draw, ds, min_size=0, max_size=4, atoms=ATOMS):
    return tuple(
        draw(st.lists(
            st.builds(TimedFormula, formulas(atoms, 4), st.integers(1, ds.T)),
            min_size=min_size, max_size=max_size,
        ))
    )
