"""Up-set constructions: halving up-sets from congruence classes, and
disjoint packings inside small up-sets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .cryptomorphs import corollary_ordering, interior_table_array, InteriorTable, congruence_partition
from .errors import FamilyError, PreconditionError, ProvenStatementViolation
from .family import (
    SetFamily,
    indicator_is_up_set,
    is_nontrivial,
    is_union_closed,
    is_up_set,
    popcount,
)

PACKING_CONSTANT = 1 + math.exp(-1)
_GUARD = 2.0 ** -40


# ---------------------------------------------------------------- prefix sums

def weighted_prefix_inequality(values: Sequence[Real], theta: Real):
    """``theta * sum(values) >= sum(values[:floor(theta * m)])`` for sorted values.

    Arithmetic is exact (floats are converted to their exact binary value).
    Returns ``(lhs, rhs, holds)`` as Fractions and a bool.
    """
    vals = [Fraction(v) for v in values]
    th = Fraction(theta)
    if any(v < 0 for v in vals):
        raise ValueError("values must be non-negative")
    if any(a > b for a, b in zip(vals, vals[1:])):
        raise ValueError("values must be sorted nondecreasing")
    if not 0 <= th <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    lhs = th * sum(vals, Fraction(0))
    rhs = sum(vals[: math.floor(th * len(vals))], Fraction(0))
    return lhs, rhs, lhs >= rhs


# ---------------------------------------------------------------- halving up-sets

@dataclass(frozen=True)
class HalvingUpsetCertificate:
    t: int
    upset: SetFamily
    family_size: int          # size of the family the certificate speaks about
    size_bound: int           # ceil(2^n / t)
    intersection_count: int   # #(F cap U)
    is_upset: bool
    size_ok: bool
    intersection_ok: bool
    # 2 #(F cap U) >= #U; reported only, it is not implied by the construction
    dense_in_upset: bool

    @property
    def holds(self) -> bool:
        return self.is_upset and self.size_ok and self.intersection_ok


def construct_halving_upset(F: SetFamily, t: int, with_empty: bool = True) -> HalvingUpsetCertificate:
    """Union of the first ceil(m/t) congruence classes in the canonical ordering.

    The construction runs on F plus the empty set. Counts refer to that
    family unless ``with_empty`` is false, in which case they refer to F as
    given (the up-set itself is the same either way).
    """
    if t < 1:
        raise PreconditionError(f"t must be a positive integer, got {t}")
    if not is_union_closed(F) or not is_nontrivial(F):
        raise PreconditionError("need a nontrivial union-closed family")
    G = F if 0 in F else F.with_masks([0])
    tau = interior_table_array(G)
    p = congruence_partition(InteriorTable(G.n, tau))
    ordered = corollary_ordering(G, p)
    m = len(G)
    take = -(-m // t)
    chosen = np.zeros(1 << G.n, dtype=bool)
    chosen[list(ordered.labels[:take])] = True
    in_u = chosen[tau]

    members = F if not with_empty else G
    ind = members.indicator()
    inter = int(np.count_nonzero(in_u & ind))
    u_size = int(np.count_nonzero(in_u))
    bound = -(-(1 << G.n) // t)
    upset = SetFamily(G.n, tuple(int(x) for x in np.flatnonzero(in_u)))
    return HalvingUpsetCertificate(
        t=t,
        upset=upset,
        family_size=len(members),
        size_bound=bound,
        intersection_count=inter,
        is_upset=indicator_is_up_set(in_u, G.n),
        size_ok=u_size <= bound,
        intersection_ok=inter * t >= len(members),
        dense_in_upset=2 * inter >= u_size,
    )


# ---------------------------------------------------------------- disjoint packings

def union_of_intervals_cardinality(A_list: Sequence[int], n: int) -> int:
    """Number of subsets of [n] containing at least one of the disjoint masks.

    Counted by enumeration and cross-checked against the product formula
    ``2^n - 2^(n - sum a_i) * prod(2^a_i - 1)``.
    """
    seen = 0
    for a in A_list:
        if a == 0:
            raise ValueError("sets must be nonempty")
        if a >> n:
            raise ValueError(f"mask {a} outside [{n}]")
        if a & seen:
            raise ValueError("sets must be pairwise disjoint")
        seen |= a
    brute = sum(1 for X in range(1 << n) if any(X & a == a for a in A_list))
    total = sum(popcount(a) for a in A_list)
    prod = 1
    for a in A_list:
        prod *= (1 << popcount(a)) - 1
    closed = (1 << n) - (prod << (n - total))
    if brute != closed:
        raise ProvenStatementViolation(
            "interval-union-count", f"enumeration {brute} != closed form {closed} for {list(A_list)}"
        )
    return brute


def packing_threshold(n: int) -> int:
    """Smallest integer t with t >= C n / log2 n, C = 1 + 1/e."""
    if n < 2:
        raise PreconditionError("threshold needs n >= 2")
    x = PACKING_CONSTANT * n / math.log2(n)
    return math.ceil(x * (1 - _GUARD))


def largest_feasible_packing(n: int) -> int:
    """Largest t for which t disjoint sets could fit in an up-set of size 2^(n-1).

    Uses the real relaxation with equal set sizes: t disjoint sets force at
    least ``2^n (1 - (1 - 2^(-n/t))^t)`` members, which must stay <= 2^(n-1).
    """
    best = 1
    t = 1
    while True:
        t += 1
        if (1 - 2.0 ** (-n / t)) ** t < 0.5:
            return best
        best = t


@dataclass(frozen=True)
class PackingReport:
    max_disjoint: int
    witness: tuple[int, ...]
    threshold: int
    holds: bool

    @property
    def ratio(self) -> float:
        return self.max_disjoint / self.threshold


def minimal_members(U: SetFamily) -> list[int]:
    s = U.member_set
    out = []
    for m in U.members:
        if not any((m & ~(1 << e)) in s for e in range(U.n) if m >> e & 1):
            out.append(m)
    return out


def max_disjoint_sets(sets: Sequence[int], n: int) -> tuple[int, ...]:
    """Largest pairwise-disjoint subcollection of nonempty masks.

    Branch and bound over ground elements: the lowest undecided element is
    either left uncovered, or covered by a set whose minimum it is. The
    bound is the number of chosen sets plus remaining free elements divided
    by the smallest set size.
    """
    sets = sorted(set(sets), key=lambda s: (popcount(s), s))
    if not sets:
        return ()
    if 0 in sets:
        raise ValueError("empty set cannot be packed")
    by_low: list[list[int]] = [[] for _ in range(n)]
    for s in sets:
        by_low[(s & -s).bit_length() - 1].append(s)
    min_size = popcount(sets[0])

    # greedy start: smallest sets first
    greedy: list[int] = []
    used = 0
    for s in sets:
        if not s & used:
            greedy.append(s)
            used |= s
    best = list(greedy)
    chosen: list[int] = []

    def search(e: int, used: int):
        nonlocal best
        while e < n and used >> e & 1:
            e += 1
        free = ((1 << n) - 1) & ~used & ~((1 << e) - 1)
        if len(chosen) + popcount(free) // min_size <= len(best):
            return
        if e == n:
            return
        for s in by_low[e]:
            if not s & used:
                chosen.append(s)
                if len(chosen) > len(best):
                    best = list(chosen)
                search(e + 1, used | s)
                chosen.pop()
        search(e + 1, used | (1 << e))

    search(0, 0)
    return tuple(sorted(best))


def max_disjoint_packing(U: SetFamily, enforce_size_cap: bool = True) -> PackingReport:
    """Exact largest disjoint subcollection of an up-set, against the packing threshold.

    The threshold statement needs #U <= 2^(n-1); ``enforce_size_cap=False``
    still computes the packing for larger up-sets.
    """
    if U.n < 2:
        raise PreconditionError("need n >= 2")
    if not is_up_set(U):
        raise FamilyError("family is not an up-set")
    if enforce_size_cap and len(U) > 1 << (U.n - 1):
        raise PreconditionError(f"up-set has {len(U)} members, more than 2^(n-1)")
    # any disjoint collection shrinks to one of minimal members
    witness = max_disjoint_sets(minimal_members(U), U.n)
    threshold = packing_threshold(U.n)
    return PackingReport(
        max_disjoint=len(witness),
        witness=witness,
        threshold=threshold,
        holds=len(witness) < threshold,
    )


def brute_force_max_disjoint(sets: Sequence[int]) -> int:
    """Reference answer by trying every subcollection; only for small inputs."""
    sets = list(sets)
    best = 0
    for pick in range(1 << len(sets)):
        used = 0
        ok = True
        k = 0
        for i, s in enumerate(sets):
            if pick >> i & 1:
                if s & used:
                    ok = False
                    break
                used |= s
                k += 1
        if ok:
            best = max(best, k)
    return best

