"""Set families over a ground set [n], stored as sorted tuples of bitmasks.

Element ``i`` (1-based, as users see it) lives at bit ``i - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import FamilyError, PreconditionError

MAX_N = 20


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_from_elements(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise FamilyError(f"elements are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def submasks(mask: int):
    """Yield every submask of ``mask``, including ``mask`` and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class SetFamily:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or not 0 <= self.n <= MAX_N:
            raise FamilyError(f"ground size must be in [0, {MAX_N}], got {self.n!r}")
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        limit = 1 << self.n
        prev = -1
        for m in members:
            if not isinstance(m, (int, np.integer)) or m < 0 or m >= limit:
                raise FamilyError(f"member {m!r} is not a subset of [{self.n}]")
            if m <= prev:
                if m == prev:
                    raise FamilyError(f"duplicate member {elements_of(m)}")
                raise FamilyError("members must be strictly increasing")
            prev = m

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        """Build from masks in any order; duplicates are dropped."""
        return cls(n, tuple(sorted({int(m) for m in masks})))

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], n: int | None = None) -> "SetFamily":
        masks = [mask_from_elements(s) for s in sets]
        if n is None:
            n = max(masks, default=0).bit_length()
        return cls.from_masks(n, masks)

    @classmethod
    def power_set(cls, n: int) -> "SetFamily":
        return cls(n, tuple(range(1 << n)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask) -> bool:
        return mask in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def indicator(self) -> np.ndarray:
        """Boolean array of length 2^n marking members."""
        arr = np.zeros(1 << self.n, dtype=bool)
        arr[list(self.members)] = True
        return arr

    def to_sets(self) -> list[list[int]]:
        return [elements_of(m) for m in self.members]

    def with_masks(self, extra: Iterable[int]) -> "SetFamily":
        return SetFamily.from_masks(self.n, [*self.members, *extra])

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, elements_of(m))) + "}" for m in self.members)
        return f"SetFamily(n={self.n}, [{body}])"


@dataclass(frozen=True)
class FamilyFlags:
    union_closed: bool
    intersection_closed: bool
    up_set: bool
    nontrivial: bool
    separating: bool
    contains_empty: bool
    contains_full: bool


@dataclass(frozen=True)
class FrequencyVector:
    counts: tuple[int, ...]
    total: int

    def count(self, element: int) -> int:
        return self.counts[element - 1]


# ---------------------------------------------------------------- predicates

def is_union_closed(F: SetFamily) -> bool:
    s = F.member_set
    ms = F.members
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if a | b not in s:
                return False
    return True


def is_intersection_closed(F: SetFamily) -> bool:
    s = F.member_set
    ms = F.members
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if a & b not in s:
                return False
    return True


def is_up_set(F: SetFamily) -> bool:
    s = F.member_set
    for m in F.members:
        for i in range(F.n):
            if not m >> i & 1 and m | (1 << i) not in s:
                return False
    return True


def is_nontrivial(F: SetFamily) -> bool:
    union = 0
    for m in F.members:
        union |= m
    return len(F) > 0 and union == F.full


def member_signatures(F: SetFamily) -> list[int]:
    """For each element (0-based), the bitset of member indices containing it."""
    sig = [0] * F.n
    for idx, m in enumerate(F.members):
        for e in range(F.n):
            if m >> e & 1:
                sig[e] |= 1 << idx
    return sig


def is_separating(F: SetFamily) -> bool:
    sig = member_signatures(F)
    return len(set(sig)) == len(sig)


def is_intersecting(F: SetFamily) -> bool:
    """Every two members (a member with itself included) share an element."""
    ms = F.members
    if 0 in F.member_set:
        return False
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if not a & b:
                return False
    return True


def classify_family(F: SetFamily) -> FamilyFlags:
    return FamilyFlags(
        union_closed=is_union_closed(F),
        intersection_closed=is_intersection_closed(F),
        up_set=is_up_set(F),
        nontrivial=is_nontrivial(F),
        separating=is_separating(F),
        contains_empty=0 in F,
        contains_full=F.full in F,
    )


# ---------------------------------------------------------------- closures

def union_closure(G: SetFamily) -> SetFamily:
    """Smallest union-closed family containing ``G``."""
    closed: set[int] = set()
    for g in G.members:
        if g in closed:
            continue
        closed |= {g | c for c in closed}
        closed.add(g)
    return SetFamily.from_masks(G.n, closed)


def up_closure_indicator(n: int, masks: Iterable[int]) -> np.ndarray:
    """Indicator over P(n) of all supersets of the given masks."""
    arr = np.zeros(1 << n, dtype=bool)
    arr[list(masks)] = True
    for i in range(n):
        view = arr.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return arr


def up_closure(n: int, masks: Iterable[int]) -> SetFamily:
    arr = up_closure_indicator(n, masks)
    return SetFamily(n, tuple(int(x) for x in np.flatnonzero(arr)))


def indicator_is_up_set(arr: np.ndarray, n: int) -> bool:
    for i in range(n):
        view = arr.reshape(-1, 2, 1 << i)
        if np.any(view[:, 0, :] & ~view[:, 1, :]):
            return False
    return True


# ---------------------------------------------------------------- frequencies

def frequency_vector(F: SetFamily) -> FrequencyVector:
    counts = [0] * F.n
    for m in F.members:
        e = 0
        while m:
            if m & 1:
                counts[e] += 1
            m >>= 1
            e += 1
    return FrequencyVector(tuple(counts), len(F))


def frequency_ordering(F: SetFamily) -> tuple[int, ...]:
    """Elements (1-based) by decreasing frequency; ties keep the smaller element first."""
    counts = frequency_vector(F).counts
    return tuple(sorted(range(1, F.n + 1), key=lambda e: (-counts[e - 1], e)))


def order_by_counts(counts: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(range(1, len(counts) + 1), key=lambda e: (-counts[e - 1], e)))


def separation_quotient(F: SetFamily) -> tuple[SetFamily, dict[int, int]]:
    """Merge elements contained in exactly the same members.

    Returns the quotient family and a map from each original element to its
    new element. New elements are numbered by the smallest original element
    in their class.
    """
    if not is_union_closed(F):
        raise PreconditionError("separation_quotient needs a union-closed family")
    sig = member_signatures(F)
    new_index: dict[int, int] = {}
    element_map: dict[int, int] = {}
    for e in range(F.n):
        if sig[e] not in new_index:
            new_index[sig[e]] = len(new_index)
        element_map[e + 1] = new_index[sig[e]] + 1
    masks = []
    for m in F.members:
        q = 0
        for e in elements_of(m):
            q |= 1 << (element_map[e] - 1)
        masks.append(q)
    return SetFamily.from_masks(len(new_index), masks), element_map


def _drop_bit(mask: int, pos: int) -> int:
    low = mask & ((1 << pos) - 1)
    return low | ((mask >> (pos + 1)) << pos)


def derived_family_above(F: SetFamily, x: int) -> SetFamily:
    """``{A \\ {x} : x in A in F}`` re-indexed onto the ground set [n] \\ {x}."""
    if not 1 <= x <= F.n:
        raise PreconditionError(f"element {x} outside [1, {F.n}]")
    bit = 1 << (x - 1)
    return SetFamily.from_masks(
        F.n - 1, (_drop_bit(m, x - 1) for m in F.members if m & bit)
    )


def complement_dual(F: SetFamily) -> SetFamily:
    full = F.full
    return SetFamily.from_masks(F.n, (full ^ m for m in F.members))


def is_simply_rooted(G: SetFamily) -> bool:
    """Every nonempty member G has a root x in G with all of {X subset G : x in X} inside."""
    s = G.member_set
    for g in G.members:
        if g == 0:
            continue
        for x in elements_of(g):
            bit = 1 << (x - 1)
            rest = g & ~bit
            if all((sub | bit) in s for sub in submasks(rest)):
                break
        else:
            return False
    return True
