import itertools

import pytest
from hypothesis import strategies as st

from unionclosed.family import SetFamily, full_mask, union_closure


def fam(*sets, n=None):
    return SetFamily.from_sets(sets, n=n)


# Oracles on plain frozensets, deliberately not sharing code with the bitmask paths.

def as_sets(F):
    return [frozenset(s) for s in F.to_sets()]


def oracle_union_closed(sets):
    s = set(sets)
    return all(a | b in s for a in s for b in s)


def oracle_frequency(sets, n):
    return [sum(1 for S in sets if x in S) for x in range(1, n + 1)]


def oracle_separating(sets, n):
    sigs = [frozenset(S for S in sets if x in S) for x in range(1, n + 1)]
    return len(set(sigs)) == n


def oracle_union_closure(sets):
    out = set(sets)
    while True:
        new = {a | b for a in out for b in out} - out
        if not new:
            return out
        out |= new


def oracle_interior(sets, X):
    inside = [S for S in sets if S <= X]
    return frozenset().union(*inside) if inside else frozenset()


def powerset(ground):
    ground = list(ground)
    return [frozenset(c) for r in range(len(ground) + 1) for c in itertools.combinations(ground, r)]


@st.composite
def families(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    masks = draw(st.sets(st.integers(0, (1 << n) - 1), max_size=min(1 << n, 24)))
    return SetFamily.from_masks(n, masks)


@st.composite
def uc_families(draw, min_n=1, max_n=6, with_empty=None):
    """Nontrivial union-closed families."""
    n = draw(st.integers(min_n, max_n))
    gens = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=2 * n))
    F = union_closure(SetFamily.from_masks(n, [*gens, full_mask(n)]))
    if with_empty is None:
        with_empty = draw(st.booleans())
    if with_empty:
        F = F.with_masks([0])
    return F


@pytest.fixture(scope="session")
def population_n4():
    from unionclosed.search import enumerate_union_closed
    return [F for n in range(1, 5) for F in enumerate_union_closed(n, nontrivial_only=True)]
