import numpy as np
import pytest
from hypothesis import given, settings

from unionclosed import cryptomorphs as cm
from unionclosed.errors import PreconditionError
from unionclosed.family import SetFamily, classify_family, elements_of, mask_from_elements
from unionclosed.search import enumerate_union_closed, random_union_closed

from conftest import as_sets, fam, oracle_interior, powerset, uc_families

CHAIN = fam([], [1], [1, 2], n=2)


def m(*elements):
    return mask_from_elements(elements)


class TestInteriorOperator:
    def test_chain_values(self):
        tau = cm.interior_operator(CHAIN)
        sets = as_sets(CHAIN)
        for X in powerset([1, 2]):
            assert set(elements_of(tau(m(*X)))) == oracle_interior(sets, X)
        assert tau(m(2)) == 0 and tau(m(1)) == m(1) and tau(m(1, 2)) == m(1, 2) and tau(0) == 0

    @given(uc_families(with_empty=True))
    def test_matches_oracle(self, F):
        tau = cm.interior_operator(F)
        sets = as_sets(F)
        for X in powerset(range(1, F.n + 1)):
            assert set(elements_of(tau(m(*X)))) == oracle_interior(sets, X)

    @given(uc_families(with_empty=True))
    def test_fixed_points(self, F):
        tau = cm.interior_operator(F)
        assert all(tau(x) == x for x in F)
        assert tau.fixed_points() == F

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_empty_and_full(self, n):
        full = (1 << n) - 1
        tau = cm.interior_operator(SetFamily(n, (0, full)))
        assert all(tau(x) == (full if x == full else 0) for x in range(1 << n))

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            cm.interior_operator(fam([1], [1, 2], n=2))
        with pytest.raises(PreconditionError):
            cm.interior_operator(fam([], [1], [2], n=2))


class TestVerifyInterior:
    def test_roundtrip(self):
        assert cm.verify_interior_operator(cm.interior_operator(CHAIN)) == (True, CHAIN)

    def test_identity(self):
        ok, F = cm.verify_interior_operator(cm.InteriorTable.identity(3))
        assert ok and F == SetFamily.power_set(3)

    def test_exclusivity_violation(self):
        table = np.arange(4)
        table[m(1)] = m(2)
        assert cm.verify_interior_operator(cm.InteriorTable(2, table)) == (False, None)

    def test_monotonicity_violation(self):
        # tau({1}) = {1} but tau({1,2}) = {2}
        table = np.array([0, m(1), m(2), m(2)])
        assert not cm.verify_interior_operator(cm.InteriorTable(2, table))[0]

    def test_idempotence_violation(self):
        # exclusive and monotone but tau({1,2}) = {1} is not fixed
        table = np.array([0, 0, 0, m(1)])
        assert not cm.verify_interior_operator(cm.InteriorTable(2, table))[0]

    def test_all_tables_n2_match_theorem(self):
        """Every exclusive table on P(2) is an interior operator iff it is one of the UC-with-empty families."""
        import itertools
        choices = [[s for s in range(4) if s & ~x == 0] for x in range(4)]
        families = {F.members for F in enumerate_union_closed(2, require_empty=True)}
        hits = set()
        for values in itertools.product(*choices):
            ok, F = cm.verify_interior_operator(cm.InteriorTable(2, np.array(values)))
            if ok:
                assert F.members in families
                assert cm.interior_operator(F) == cm.InteriorTable(2, np.array(values))
                hits.add(F.members)
        assert hits == families


class TestCongruencePartition:
    def test_chain_classes(self):
        p = cm.partition_of(CHAIN)
        classes = {p.class_min[c]: set(p.class_members[c]) for c in range(p.num_classes)}
        # group by tau image, computed with the frozenset oracle
        sets = as_sets(CHAIN)
        expected = {}
        for X in powerset([1, 2]):
            expected.setdefault(m(*oracle_interior(sets, X)), set()).add(m(*X))
        assert classes == expected == {0: {0, m(2)}, m(1): {m(1)}, m(1, 2): {m(1, 2)}}

    def test_power_set_singletons(self):
        p = cm.partition_of(SetFamily.power_set(3))
        assert p.num_classes == 8 and set(p.class_sizes) == {1}

    def test_two_classes(self):
        p = cm.partition_of(SetFamily(3, (0, 7)))
        assert p.num_classes == 2
        assert sorted(p.class_sizes) == [1, 7]
        assert p.fiber(7) == (7,)

    @given(uc_families(with_empty=True))
    def test_class_count_and_same_image(self, F):
        tau = cm.interior_operator(F)
        p = cm.congruence_partition(tau)
        assert p.num_classes == len(F)
        assert sum(p.class_sizes) == 1 << F.n
        for x in range(1 << F.n):
            assert p.class_min[p.class_of[x]] == tau(x)

    def test_invalid_table(self):
        with pytest.raises(PreconditionError):
            cm.congruence_partition(cm.InteriorTable(2, np.array([0, 2, 2, 3])))


class TestVerifyCongruence:
    def test_from_operator(self):
        assert cm.verify_congruence(cm.partition_of(CHAIN))

    def test_bad_partition(self):
        # A={1}, B={2}, C={1}: {1} and {} would have to be related
        p = cm.CongruencePartition.from_classes(2, [[0, m(1, 2)], [m(1), m(2)]])
        assert not cm.verify_congruence(p)

    def test_bad_partition_counterexample_search(self):
        """Direct search for a violating (A, B, C) agrees."""
        classes = [[0, 3], [1, 2]]
        cls = {x: i for i, c in enumerate(classes) for x in c}
        bad = [(a, b, c) for a in range(4) for b in range(4) for c in range(4)
               if cls[a] == cls[b] and cls[a & c] != cls[b & c]]
        assert (1, 2, 1) in bad

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_singletons(self, n):
        p = cm.CongruencePartition.from_classes(n, [[x] for x in range(1 << n)])
        assert cm.verify_congruence(p)

    def test_exhaustive_limit(self):
        p = cm.partition_of(random_union_closed(7, seed=1).with_masks([0]))
        with pytest.raises(PreconditionError):
            cm.verify_congruence(p, exhaustive=True)
        assert cm.verify_congruence(p, exhaustive=False)

    def test_all_partitions_of_p2(self):
        """Over every set partition of P(2), congruences are exactly the operator partitions."""
        def partitions(items):
            if not items:
                yield []
                return
            first, rest = items[0], items[1:]
            for part in partitions(rest):
                yield [[first], *part]
                for i in range(len(part)):
                    yield [*part[:i], [first, *part[i]], *part[i + 1:]]

        from_ops = set()
        for F in enumerate_union_closed(2, require_empty=True):
            p = cm.partition_of(F)
            from_ops.add(frozenset(frozenset(c) for c in p.class_members))
        found = set()
        for part in partitions([0, 1, 2, 3]):
            p = cm.CongruencePartition.from_classes(2, part)
            if cm.verify_congruence(p):
                found.add(frozenset(frozenset(c) for c in part))
        assert found == from_ops

    @settings(max_examples=50)
    @given(uc_families(min_n=5, max_n=6, with_empty=True))
    def test_sampled_agrees(self, F):
        p = cm.partition_of(F)
        assert cm.verify_congruence(p, exhaustive=True)
        assert cm.verify_congruence(p, exhaustive=False, samples=64)


class TestEmbedding:
    def test_identity(self):
        p = cm.partition_of(CHAIN)
        assert cm.congruence_embedding(p, m(1), m(1)) == {m(1): m(1)}

    def test_chain(self):
        p = cm.partition_of(CHAIN)
        iota = cm.congruence_embedding(p, 0, m(1))
        assert iota == {m(1): 0}
        assert set(p.fiber(0)) == {0, m(2)}
        assert cm.check_embedding(p, 0, m(1))

    def test_preconditions(self):
        p = cm.partition_of(CHAIN)
        with pytest.raises(PreconditionError):
            cm.congruence_embedding(p, m(1), 0)
        with pytest.raises(PreconditionError):
            cm.congruence_embedding(p, m(2), m(1, 2))

    def test_sizes_exhaustive_n4(self):
        for F in enumerate_union_closed(4, require_empty=True):
            p = cm.partition_of(F)
            for E in F:
                for G in F:
                    if E & ~G == 0:
                        assert len(p.fiber(G)) <= len(p.fiber(E))


class TestOrdering:
    def test_chain(self):
        o = cm.corollary_ordering(CHAIN)
        assert o.labels == (m(1, 2), m(1), 0)
        assert o.class_sizes == (1, 1, 2)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_empty_full(self, n):
        o = cm.corollary_ordering(SetFamily(n, (0, (1 << n) - 1)))
        assert o.labels == ((1 << n) - 1, 0)
        assert o.class_sizes == (1, (1 << n) - 1)

    def test_chain_family(self):
        chain = SetFamily(4, (0, 0b1, 0b11, 0b111, 0b1111))
        o = cm.corollary_ordering(chain)
        assert o.labels == tuple(reversed(chain.members))

    def test_requires_nontrivial(self):
        with pytest.raises(PreconditionError):
            cm.corollary_ordering(fam([], [1], n=2))

    @given(uc_families(with_empty=True, max_n=7))
    def test_invariants(self, F):
        o = cm.corollary_ordering(F)
        assert sorted(o.labels) == list(F.members)
        assert cm.check_ordering(o)
        assert o.labels[0] == F.full and o.class_sizes[0] == 1

    def test_greedy_rule(self):
        """Matches a literal step-by-step implementation of the selection rule."""
        for F in enumerate_union_closed(4, require_empty=True, nontrivial_only=True):
            p = cm.partition_of(F)
            size = {x: len(p.fiber(x)) for x in F}
            remaining = set(F)
            expected = []
            while remaining:
                lo = min(size[x] for x in remaining)
                group = [x for x in remaining if size[x] == lo]
                maximal = [x for x in group if not any(y != x and x & ~y == 0 for y in group)]
                pick = min(maximal)
                expected.append(pick)
                remaining.remove(pick)
            assert cm.corollary_ordering(F, p).labels == tuple(expected)


@settings(max_examples=30, deadline=None)
@given(uc_families(min_n=8, max_n=12, with_empty=True))
def test_roundtrip_large(F):
    tau = cm.interior_operator(F)
    ok, fixed = cm.verify_interior_operator(tau)
    assert ok and fixed == F
    assert cm.interior_operator(fixed) == tau
    assert classify_family(fixed).union_closed
