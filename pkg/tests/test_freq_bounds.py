from fractions import Fraction

import pytest
from hypothesis import given

from unionclosed.errors import PreconditionError
from unionclosed.family import SetFamily, classify_family, mask_from_elements, popcount
from unionclosed.freq_bounds import (
    all_lemma_pairs_hold,
    extremal_family,
    frequency_profile,
    lemma_fiber_sizes,
    lemma_frequency_bound,
)

from conftest import as_sets, fam, oracle_frequency, uc_families


class TestLemmaBound:
    def test_chain_example(self):
        F = fam([], [1], [1, 2], [1, 2, 3], n=3)
        cert = lemma_frequency_bound(F, 2)
        assert cert.witness == mask_from_elements([1, 2])
        assert cert.bound == Fraction(4, 3)
        assert cert.frequency == 2 and cert.holds

    def test_singleton_gives_half(self):
        F = fam([], [2], [1, 2], [1, 2, 3], n=3)
        cert = lemma_frequency_bound(F, 2)
        assert cert.bound == Fraction(len(F), 2)

    def test_tie_break_smallest_mask(self):
        F = fam([], [1, 2], [1, 3], [1, 2, 3], n=3)
        assert lemma_frequency_bound(F, 1).witness == mask_from_elements([1, 2])

    def test_errors(self):
        F = fam([], [1], [1, 2], n=2)
        with pytest.raises(PreconditionError):
            lemma_frequency_bound(F, 3)
        with pytest.raises(PreconditionError):
            lemma_frequency_bound(fam([1], [2], n=2), 1)

    @given(uc_families())
    def test_holds_and_worst_witness(self, F):
        for x in range(1, F.n + 1):
            cert = lemma_frequency_bound(F, x)
            assert cert.holds
            assert cert.witness >> (x - 1) & 1 and cert.witness in F
            assert cert.bound >= Fraction(len(F), 2 ** (F.n - 1) + 1)

    @given(uc_families())
    def test_every_pair(self, F):
        assert all_lemma_pairs_hold(F)
        counts = oracle_frequency(as_sets(F), F.n)
        for A in as_sets(F):
            for x in A:
                assert counts[x - 1] * (2 ** (len(A) - 1) + 1) >= len(F)

    def test_pairs_population(self, population_n4):
        assert all(all_lemma_pairs_hold(F) for F in population_n4)


class TestProfile:
    def test_extremal_n3(self):
        p = frequency_profile(extremal_family(3, 3))
        assert p.frequencies[2] == 1 and p.total == 5
        assert p.equality[2] and p.conjectured[2] and p.proven_last

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_power_set(self, n):
        p = frequency_profile(SetFamily.power_set(n))
        assert p.frequencies == (2 ** (n - 1),) * n
        assert p.all_conjectured and p.all_conditional

    def test_chain_n2(self):
        p = frequency_profile(fam([], [1], [1, 2], n=2))
        assert p.frequencies == (2, 1) and p.total == 3
        assert p.conjectured == (True, True)
        assert p.conditional == (True, True)
        assert p.equality == (False, True)
        assert p.proven_second_last is True

    def test_n1_second_last_none(self):
        assert frequency_profile(fam([], [1], n=1)).proven_second_last is None

    def test_requires_uc(self):
        with pytest.raises(PreconditionError):
            frequency_profile(fam([1], [2], n=2))

    @given(uc_families())
    def test_invariants(self, F):
        p = frequency_profile(F)
        assert list(p.frequencies) == sorted(p.frequencies, reverse=True)
        counts = oracle_frequency(as_sets(F), F.n)
        assert sorted(counts, reverse=True) == list(p.frequencies)
        for k, f in enumerate(p.frequencies, start=1):
            assert p.conjectured[k - 1] == (Fraction(f) >= Fraction(len(F), 2 ** (k - 1) + 1))
            assert p.conditional[k - 1] == (Fraction(f) >= Fraction(len(F), 2 ** k))
        assert p.proven_last
        assert p.proven_second_last in (True, None)

    def test_last_ranks_population(self, population_n4):
        for F in population_n4:
            p = frequency_profile(F)
            assert p.proven_last and p.proven_second_last in (True, None)


class TestExtremal:
    def test_n3(self):
        assert extremal_family(3, 3) == fam([], [1], [2], [1, 2], [1, 2, 3], n=3)

    @pytest.mark.parametrize("n", [1, 4])
    def test_k1(self, n):
        assert extremal_family(n, 1) == SetFamily(n, (0, (1 << n) - 1))

    def test_range(self):
        with pytest.raises(PreconditionError):
            extremal_family(3, 4)
        with pytest.raises(PreconditionError):
            extremal_family(3, 0)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_equality_all_k(self, n):
        for k in range(1, n + 1):
            F = extremal_family(n, k)
            flags = classify_family(F)
            assert flags.union_closed and flags.nontrivial
            assert len(F) == 2 ** (k - 1) + 1
            # element k: only [n] contains it
            freq_k = oracle_frequency(as_sets(F), n)[k - 1]
            assert freq_k * (2 ** (k - 1) + 1) == len(F)
            assert frequency_profile(F).equality[k - 1]

    @pytest.mark.parametrize("n", range(1, 7))
    def test_separating_iff_last(self, n):
        for k in range(1, n + 1):
            assert classify_family(extremal_family(n, k)).separating == (k == n)


@pytest.mark.parametrize("n", range(1, 7))
def test_fiber_sizes(n):
    for x in range(1, n + 1):
        bit = 1 << (x - 1)
        for A in range(1 << n):
            if not A & bit:
                continue
            sizes = lemma_fiber_sizes(n, x, A)
            supersets = [Y for Y in range(1 << n) if Y & A == A]
            assert sorted(sizes) == supersets
            assert set(sizes.values()) == {2 ** (popcount(A) - 1)}
