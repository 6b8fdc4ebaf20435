"""Interior operators and congruence partitions of P(n).

A union-closed family F with the empty set determines the interior operator
``tau(X) = union of members of F inside X``; its fibres partition P(n) into
congruence classes, one per member of F.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import PreconditionError
from .family import SetFamily, is_nontrivial, is_union_closed, submasks

EXHAUSTIVE_CONGRUENCE_MAX_N = 6


@dataclass(frozen=True, eq=False)
class InteriorTable:
    n: int
    map: np.ndarray  # map[X] = tau(X), length 2^n

    def __post_init__(self):
        arr = np.asarray(self.map, dtype=np.int64)
        if arr.shape != (1 << self.n,):
            raise PreconditionError(f"table must have 2^{self.n} entries, got shape {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "map", arr)

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, InteriorTable)
            and self.n == other.n
            and np.array_equal(self.map, other.map)
        )

    def fixed_points(self) -> SetFamily:
        idx = np.arange(1 << self.n)
        return SetFamily(self.n, tuple(int(x) for x in np.flatnonzero(self.map == idx)))

    @classmethod
    def identity(cls, n: int) -> "InteriorTable":
        return cls(n, np.arange(1 << n))


@dataclass(frozen=True, eq=False)
class CongruencePartition:
    n: int
    class_of: np.ndarray           # class id for every subset mask
    class_min: tuple[int, ...]     # per class: intersection of the class

    @classmethod
    def from_classes(cls, n: int, classes) -> "CongruencePartition":
        """Build from an explicit list of classes (each an iterable of masks)."""
        class_of = np.full(1 << n, -1, dtype=np.int64)
        mins = []
        for cid, members in enumerate(classes):
            members = list(members)
            if not members:
                raise PreconditionError("empty class")
            inter = (1 << n) - 1
            for m in members:
                if class_of[m] != -1:
                    raise PreconditionError(f"mask {m} appears in two classes")
                class_of[m] = cid
                inter &= m
            mins.append(inter)
        if np.any(class_of < 0):
            raise PreconditionError("classes do not cover P(n)")
        return cls(n, class_of, tuple(mins))

    def __post_init__(self):
        arr = np.asarray(self.class_of, dtype=np.int64).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "class_of", arr)

    @property
    def num_classes(self) -> int:
        return len(self.class_min)

    @cached_property
    def class_members(self) -> tuple[tuple[int, ...], ...]:
        order = np.argsort(self.class_of, kind="stable")
        bounds = np.searchsorted(self.class_of[order], np.arange(self.num_classes + 1))
        return tuple(
            tuple(int(x) for x in order[bounds[c]:bounds[c + 1]])
            for c in range(self.num_classes)
        )

    @cached_property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.bincount(self.class_of, minlength=self.num_classes))

    @cached_property
    def class_by_min(self) -> dict[int, int]:
        return {m: c for c, m in enumerate(self.class_min)}

    def class_containing(self, mask: int) -> tuple[int, ...]:
        return self.class_members[int(self.class_of[mask])]

    def fiber(self, fixed: int) -> tuple[int, ...]:
        """The class whose minimum is ``fixed``."""
        return self.class_members[self.class_by_min[fixed]]


@dataclass(frozen=True)
class OrderedFamily:
    labels: tuple[int, ...]
    class_sizes: tuple[int, ...]


def _require_uc_with_empty(F: SetFamily):
    if 0 not in F:
        raise PreconditionError("interior operator needs the empty set in the family")
    if not is_union_closed(F):
        raise PreconditionError("interior operator needs a union-closed family")


def interior_table_array(F: SetFamily) -> np.ndarray:
    """tau over P(n) as an int64 array, via an OR-zeta transform over subsets.

    No precondition checks; for families that are not union closed the result
    is still the union of contained members, just not a member itself.
    """
    n = F.n
    arr = np.zeros(1 << n, dtype=np.int64)
    arr[list(F.members)] = list(F.members)
    for i in range(n):
        view = arr.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return arr


def interior_operator(F: SetFamily) -> InteriorTable:
    _require_uc_with_empty(F)
    return InteriorTable(F.n, interior_table_array(F))


def verify_interior_operator(t: InteriorTable) -> tuple[bool, SetFamily | None]:
    """Check exclusivity, monotonicity (on covering pairs) and idempotence.

    Returns ``(ok, Fix t)``; the family is ``None`` when ``ok`` is false.
    """
    tau = t.map
    idx = np.arange(1 << t.n, dtype=np.int64)
    if np.any((tau & ~idx) != 0):
        return False, None
    for i in range(t.n):
        bit = 1 << i
        lower = idx[(idx & bit) == 0]
        if np.any((tau[lower] & ~tau[lower | bit]) != 0):
            return False, None
    if not np.array_equal(tau[tau], tau):
        return False, None
    return True, t.fixed_points()


def congruence_partition(t: InteriorTable) -> CongruencePartition:
    ok, fixed = verify_interior_operator(t)
    if not ok:
        raise PreconditionError("table is not an interior operator")
    lookup = np.full(1 << t.n, -1, dtype=np.int64)
    lookup[list(fixed.members)] = np.arange(len(fixed))
    return CongruencePartition(t.n, lookup[t.map], fixed.members)


def partition_of(F: SetFamily) -> CongruencePartition:
    return congruence_partition(interior_operator(F))


def verify_congruence(p: CongruencePartition, exhaustive: bool = True,
                      samples: int = 1024, seed: int = 0) -> bool:
    """Check that ``p`` is the partition of some interior operator.

    Tests compatibility with intersection by every fixed set C (sampled C
    when not exhaustive), that every class is intersection closed and
    interval closed around its minimum, and that the class minima are the
    fixed points of the induced operator.
    """
    n = p.n
    if exhaustive and n > EXHAUSTIVE_CONGRUENCE_MAX_N:
        raise PreconditionError(
            f"exhaustive congruence check limited to n <= {EXHAUSTIVE_CONGRUENCE_MAX_N}"
        )
    rng = random.Random(seed)
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    cls = p.class_of
    mins = np.asarray(p.class_min, dtype=np.int64)

    # minima really are the intersections, and lie in their own class
    for c, members in enumerate(p.class_members):
        inter = size - 1
        for m in members:
            inter &= m
        if inter != p.class_min[c] or cls[inter] != c:
            return False

    # A ~ B  =>  A & C ~ B & C; compare each mask against its class minimum
    rep = mins[cls]
    cs = range(size) if exhaustive else (rng.randrange(size) for _ in range(samples))
    for c in cs:
        if not np.array_equal(cls[idx & c], cls[rep & c]):
            return False

    for c, members in enumerate(p.class_members):
        lo = p.class_min[c]
        if exhaustive:
            pairs = ((a, b) for i, a in enumerate(members) for b in members[i + 1:])
            probes = members
        else:
            k = min(len(members), 32)
            pairs = ((rng.choice(members), rng.choice(members)) for _ in range(k))
            probes = [rng.choice(members) for _ in range(k)]
        for a, b in pairs:
            if cls[a & b] != c:
                return False
        for y in probes:
            free = y & ~lo
            if exhaustive:
                inside = (lo | s for s in submasks(free))
            else:
                inside = (lo | (free & rng.randrange(size)) for _ in range(8))
            if any(cls[x] != c for x in inside):
                return False

    tau = InteriorTable(n, rep)
    ok, fixed = verify_interior_operator(tau)
    return ok and fixed.members == tuple(sorted(p.class_min))


def congruence_embedding(p: CongruencePartition, E: int, F: int) -> dict[int, int]:
    """The map X -> X minus (F minus E) from the class of F into the class of E."""
    if E not in p.class_by_min or F not in p.class_by_min:
        raise PreconditionError("E and F must both be fixed points")
    if E & ~F:
        raise PreconditionError("E must be a subset of F")
    drop = F & ~E
    return {x: x & ~drop for x in p.fiber(F)}


def check_embedding(p: CongruencePartition, E: int, F: int) -> bool:
    """Image lies in the class of E, and the map preserves and reflects inclusion."""
    iota = congruence_embedding(p, E, F)
    target = set(p.fiber(E))
    if not all(v in target for v in iota.values()):
        return False
    if len(set(iota.values())) != len(iota):
        return False
    dom = list(iota)
    for x in dom:
        for y in dom:
            if ((x & ~y) == 0) != ((iota[x] & ~iota[y]) == 0):
                return False
    return True


def corollary_ordering(F: SetFamily, p: CongruencePartition | None = None) -> OrderedFamily:
    """Label F so class sizes never decrease and supersets come first.

    Greedy: among the remaining members of minimal class size, take an
    inclusion-maximal one, smallest mask on ties. Since supersets of a member
    have class size at most its own, maximality within the minimal-size group
    is enough for the superset rule.
    """
    _require_uc_with_empty(F)
    if not is_nontrivial(F):
        raise PreconditionError("ordering needs a nontrivial family")
    if p is None:
        p = partition_of(F)
    sizes = {m: p.class_sizes[p.class_by_min[m]] for m in F.members}

    groups: dict[int, list[int]] = {}
    for m in F.members:
        groups.setdefault(sizes[m], []).append(m)

    labels: list[int] = []
    for size in sorted(groups):
        group = np.asarray(groups[size], dtype=np.int64)
        # sup[i, j]: group[j] is a strict superset of group[i]
        sup = ((group[None, :] & group[:, None]) == group[:, None])
        np.fill_diagonal(sup, False)
        pending = sup.sum(axis=1)
        heap = [int(group[i]) for i in np.flatnonzero(pending == 0)]
        heapq.heapify(heap)
        pos = {int(g): i for i, g in enumerate(group)}
        while heap:
            m = heapq.heappop(heap)
            labels.append(m)
            for i in np.flatnonzero(sup[:, pos[m]]):
                pending[i] -= 1
                if pending[i] == 0:
                    heapq.heappush(heap, int(group[i]))
    return OrderedFamily(tuple(labels), tuple(sizes[m] for m in labels))


def check_ordering(ordered: OrderedFamily) -> bool:
    sizes = ordered.class_sizes
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        return False
    labels = ordered.labels
    for i, a in enumerate(labels):
        for b in labels[:i]:
            # b precedes a, so a must not strictly contain b
            if a != b and (b & ~a) == 0:
                return False
    return True
