"""Frequency bounds for union-closed families.

All verdicts compare ``freq * denominator >= #F`` in integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .family import (
    SetFamily,
    frequency_vector,
    is_nontrivial,
    is_union_closed,
    order_by_counts,
    popcount,
)


@dataclass(frozen=True)
class LemmaBoundCertificate:
    element: int
    witness: int          # mask of the smallest member containing ``element``
    frequency: int
    total: int
    bound: Fraction       # total / (2^(|witness|-1) + 1)
    holds: bool


@dataclass(frozen=True)
class FrequencyProfile:
    """Sorted frequencies and per-rank verdicts.

    ``conjectured[k-1]``  : freq_k * (2^(k-1) + 1) >= #F
    ``conditional[k-1]``  : freq_k * 2^k >= #F, the bound that follows from
                            iterating the conjecture on derived families
    ``equality[k-1]``     : the conjectured inequality is tight at k
    """
    ordering: tuple[int, ...]
    frequencies: tuple[int, ...]
    total: int
    conjectured: tuple[bool, ...]
    conditional: tuple[bool, ...]
    equality: tuple[bool, ...]
    proven_last: bool                 # rank n
    proven_second_last: bool | None   # rank n-1; None when n < 2

    @property
    def n(self) -> int:
        return len(self.frequencies)

    @property
    def conjecture_holds(self) -> bool:
        """Some element lies in at least half of the members."""
        return self.n > 0 and self.conjectured[0]

    @property
    def all_conjectured(self) -> bool:
        return all(self.conjectured)

    @property
    def all_conditional(self) -> bool:
        return all(self.conditional)


def _require_nontrivial_uc(F: SetFamily):
    if not is_union_closed(F):
        raise PreconditionError("family is not union closed")
    if not is_nontrivial(F):
        raise PreconditionError("family is not nontrivial")


def lemma_holds(freq: int, total: int, witness_size: int) -> bool:
    return freq * ((1 << (witness_size - 1)) + 1) >= total


def lemma_frequency_bound(F: SetFamily, x: int) -> LemmaBoundCertificate:
    """Frequency bound for ``x`` from the smallest member that contains it."""
    _require_nontrivial_uc(F)
    if not 1 <= x <= F.n:
        raise PreconditionError(f"element {x} outside [1, {F.n}]")
    bit = 1 << (x - 1)
    containing = [m for m in F.members if m & bit]
    if not containing:
        raise PreconditionError(f"no member contains {x}")
    witness = min(containing, key=lambda m: (popcount(m), m))
    size = popcount(witness)
    freq = len(containing)
    return LemmaBoundCertificate(
        element=x,
        witness=witness,
        frequency=freq,
        total=len(F),
        bound=Fraction(len(F), (1 << (size - 1)) + 1),
        holds=lemma_holds(freq, len(F), size),
    )


def all_lemma_pairs_hold(F: SetFamily) -> bool:
    """The frequency lemma for every element x and every member A containing x."""
    counts = frequency_vector(F).counts
    total = len(F)
    for a in F.members:
        size = popcount(a)
        for e in range(F.n):
            if a >> e & 1 and not lemma_holds(counts[e], total, size):
                return False
    return True


def profile_from_counts(counts, total: int) -> FrequencyProfile:
    ordering = order_by_counts(counts)
    freqs = tuple(counts[e - 1] for e in ordering)
    n = len(freqs)
    conj = tuple(f * ((1 << k) + 1) >= total for k, f in enumerate(freqs))
    cond = tuple(f * (1 << (k + 1)) >= total for k, f in enumerate(freqs))
    eq = tuple(f * ((1 << k) + 1) == total for k, f in enumerate(freqs))
    return FrequencyProfile(
        ordering=ordering,
        frequencies=freqs,
        total=total,
        conjectured=conj,
        conditional=cond,
        equality=eq,
        proven_last=conj[n - 1] if n else True,
        proven_second_last=conj[n - 2] if n >= 2 else None,
    )


def frequency_profile(F: SetFamily) -> FrequencyProfile:
    _require_nontrivial_uc(F)
    fv = frequency_vector(F)
    return profile_from_counts(fv.counts, fv.total)


def extremal_family(n: int, k: int) -> SetFamily:
    """All subsets of [k-1] together with [n]: tight for the rank-k bound."""
    if not 1 <= k <= n:
        raise PreconditionError(f"need 1 <= k <= n, got k={k}, n={n}")
    return SetFamily.from_masks(n, [*range(1 << (k - 1)), (1 << n) - 1])


def lemma_fiber_sizes(n: int, x: int, witness: int) -> dict[int, int]:
    """Fibre sizes of X -> X | witness over subsets X avoiding ``x``.

    Keys are the images (every superset of ``witness``).
    """
    bit = 1 << (x - 1)
    if not witness & bit:
        raise PreconditionError("witness must contain x")
    sizes: dict[int, int] = {}
    for X in range(1 << n):
        if X & bit:
            continue
        Y = X | witness
        sizes[Y] = sizes.get(Y, 0) + 1
    return sizes
