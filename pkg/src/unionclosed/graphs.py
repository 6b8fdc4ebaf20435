"""Intersection graphs of set families and the counting arguments built on them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError, ProvenStatementViolation
from .family import SetFamily, is_intersecting, mask_from_elements, popcount

EXACT_VERTEX_LIMIT = 64
REL_TOL = 1e-9


@dataclass(frozen=True)
class FamilyGraph:
    """Simple graph on members of a family. ``adj[i]`` is a bitset of neighbours."""
    vertices: tuple[int, ...]
    adj: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.order) for j in range(i + 1, self.order)
                if self.adj[i] >> j & 1]

    @property
    def num_edges(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def complement(self) -> "FamilyGraph":
        everyone = (1 << self.order) - 1
        return FamilyGraph(
            self.vertices,
            tuple(everyone & ~a & ~(1 << i) for i, a in enumerate(self.adj)),
        )

    @classmethod
    def from_edges(cls, order: int, edges) -> "FamilyGraph":
        adj = [0] * order
        for i, j in edges:
            if i == j:
                raise ValueError("loops are not allowed")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(tuple(range(order)), tuple(adj))


def intersection_graph(E: SetFamily) -> FamilyGraph:
    ms = E.members
    adj = [0] * len(ms)
    for i, a in enumerate(ms):
        for j in range(i + 1, len(ms)):
            if a & ms[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return FamilyGraph(ms, tuple(adj))


# ---------------------------------------------------------------- exact search

def _greedy_colour_bound(cand: int, adj) -> list[tuple[int, int]]:
    """Sequential colouring of ``cand``; returns (vertex, colour) in colour order."""
    out = []
    colour = 0
    rest = cand
    while rest:
        colour += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~(1 << v) & ~adj[v]
            rest &= ~(1 << v)
            out.append((v, colour))
    return out


def max_clique(G: FamilyGraph) -> tuple[int, ...]:
    """Maximum clique by branch and bound with a greedy colouring bound."""
    if G.order > EXACT_VERTEX_LIMIT:
        raise PreconditionError(
            f"exact clique search limited to {EXACT_VERTEX_LIMIT} vertices; "
            "use turan_bounds for a bound-only estimate"
        )
    adj = G.adj
    best: list[int] = []

    def expand(current: list[int], cand: int):
        nonlocal best
        order = _greedy_colour_bound(cand, adj)
        for v, colour in reversed(order):
            if len(current) + colour <= len(best):
                return
            current.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(current, nxt)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            cand &= ~(1 << v)

    if G.order:
        expand([], (1 << G.order) - 1)
    return tuple(sorted(best))


def max_independent_set_size(G: FamilyGraph) -> int:
    """Independence number by branching on a vertex of maximum degree.

    Kept separate from the clique search so the two can check each other.
    """
    if G.order > EXACT_VERTEX_LIMIT:
        raise PreconditionError(f"exact search limited to {EXACT_VERTEX_LIMIT} vertices")
    adj = G.adj

    def alpha(alive: int) -> int:
        if not alive:
            return 0
        best_v, best_deg = -1, -1
        a = alive
        while a:
            v = (a & -a).bit_length() - 1
            a &= a - 1
            d = popcount(adj[v] & alive)
            if d > best_deg:
                best_v, best_deg = v, d
        if best_deg <= 1:
            # paths of length <= 1 and isolated vertices: take one per component
            count = 0
            a = alive
            while a:
                v = (a & -a).bit_length() - 1
                count += 1
                a &= ~(1 << v) & ~adj[v]
            return count
        v = best_v
        take = 1 + alpha(alive & ~(1 << v) & ~adj[v])
        skip = alpha(alive & ~(1 << v))
        return max(take, skip)

    return alpha((1 << G.order) - 1)


def graph_invariants(G: FamilyGraph) -> tuple[int, int]:
    """Exact (independence number, clique number)."""
    omega = len(max_clique(G))
    alpha = len(max_clique(G.complement()))
    if alpha != max_independent_set_size(G):
        raise ProvenStatementViolation("complement-duality", "alpha(G) != omega(complement)")
    return alpha, omega


# ---------------------------------------------------------------- Turán

def turan_bounds(v: int, t: int) -> tuple[Fraction, Fraction]:
    """Edge bounds on v vertices: (max if clique number < t, min if independence number < t)."""
    if v < 1:
        raise PreconditionError("need at least one vertex")
    if t < 2:
        raise PreconditionError(f"need t >= 2, got {t}")
    vv = Fraction(v * v)
    return (1 - Fraction(1, t - 1)) * vv / 2, vv / (2 * (t - 1)) - Fraction(v, 2)


def independence_numbers_all_graphs(v: int) -> np.ndarray:
    """alpha(G) for every labelled graph on v vertices.

    Graph ``g`` has edge number k (in lexicographic pair order) iff bit k of
    ``g`` is set.
    """
    pairs = list(itertools.combinations(range(v), 2))
    if len(pairs) > 24:
        raise PreconditionError("too many graphs to tabulate")
    graphs = np.arange(1 << len(pairs), dtype=np.int64)
    alpha = np.zeros(graphs.shape, dtype=np.int8)
    for S in range(1, 1 << v):
        inside = 0
        for k, (i, j) in enumerate(pairs):
            if S >> i & 1 and S >> j & 1:
                inside |= 1 << k
        size = popcount(S)
        mask = (graphs & inside) == 0
        np.maximum(alpha, np.where(mask, size, 0).astype(np.int8), out=alpha)
    return alpha


def edge_counts_all_graphs(v: int) -> np.ndarray:
    e = v * (v - 1) // 2
    g = np.arange(1 << e, dtype=np.int64)
    counts = np.zeros(g.shape, dtype=np.int8)
    for k in range(e):
        counts += ((g >> k) & 1).astype(np.int8)
    return counts


def graph_from_code(v: int, code: int) -> FamilyGraph:
    pairs = itertools.combinations(range(v), 2)
    return FamilyGraph.from_edges(v, [p for k, p in enumerate(pairs) if code >> k & 1])


def verify_turan_exhaustive(v: int, shards: int = 1, shard: int | None = None):
    """Check the lower edge bound for every graph on v vertices and every t.

    Returns ``(graphs_checked, violations)``; ``violations`` lists
    (graph code, t). With ``shard`` set only that slice of graph codes is
    examined.
    """
    alpha = independence_numbers_all_graphs(v)
    edges = edge_counts_all_graphs(v).astype(np.int64)
    codes = np.arange(alpha.size)
    if shard is not None:
        sel = codes % shards == shard
        alpha, edges, codes = alpha[sel], edges[sel], codes[sel]
    violations = []
    for t in range(2, v + 2):
        # compare 2(t-1) #E >= v^2 - v(t-1) in integers
        bad = (alpha < t) & (2 * (t - 1) * edges < v * v - v * (t - 1))
        violations.extend((int(c), t) for c in codes[bad])
    return int(codes.size), violations


# ---------------------------------------------------------------- colouring

@dataclass(frozen=True)
class ColoringCertificate:
    rule: str
    colouring: dict[tuple[int, int], int]   # (member i, member j) -> element
    colour: int | None                      # most used colour, None without edges
    colour_edges: int
    mu_prime: int                           # vertices touched by edges of that colour
    frequency_of_colour: int
    frequency_bound: int
    intersecting_bound: float | None = None


def frequency_via_coloring(E: SetFamily, mode: str = "general") -> ColoringCertificate:
    """Colour each edge of the intersection graph by the smallest shared element."""
    if mode not in ("general", "intersecting"):
        raise ValueError(f"unknown mode {mode!r}")
    if not len(E):
        raise PreconditionError("family must be nonempty")
    if mode == "intersecting" and not is_intersecting(E):
        raise PreconditionError("family is not intersecting")
    G = intersection_graph(E)
    ms = E.members
    colouring: dict[tuple[int, int], int] = {}
    tally: dict[int, int] = {}
    for i, j in G.edges():
        common = ms[i] & ms[j]
        c = (common & -common).bit_length()
        colouring[(i, j)] = c
        tally[c] = tally.get(c, 0) + 1

    if tally:
        colour = min(tally, key=lambda c: (-tally[c], c))
        touched = set()
        for (i, j), c in colouring.items():
            if c == colour:
                touched.update((i, j))
        bit = 1 << (colour - 1)
        if not all(ms[i] & bit for i in touched):
            raise ProvenStatementViolation("edge-colouring", "coloured vertex misses its colour", E)
        mu = len(touched)
        freq = sum(1 for m in ms if m & bit)
    else:
        colour, mu, freq = None, 0, 0
    fallback = 1 if any(ms) else 0
    bound = max(mu, fallback)

    exact = None
    if mode == "intersecting":
        exact, _ = intersecting_frequency_bound(len(E), E.n)
        if not meets_real_bound(bound, exact):
            raise ProvenStatementViolation(
                "intersecting-frequency", f"colour class has {bound} vertices < {exact}", E)
    return ColoringCertificate(
        rule="smallest common element",
        colouring=colouring,
        colour=colour,
        colour_edges=tally.get(colour, 0) if colour else 0,
        mu_prime=mu,
        frequency_of_colour=freq,
        frequency_bound=bound,
        intersecting_bound=exact,
    )


def meets_real_bound(value: int, bound: float) -> bool:
    """Integer ``value`` >= real ``bound``, allowing float error on the bound side."""
    return value >= bound - REL_TOL * max(1.0, abs(bound))


def intersecting_frequency_bound(m: int, n: int) -> tuple[float, float]:
    if m < 1 or n < 1:
        raise PreconditionError("need m >= 1 and n >= 1")
    exact = 0.5 + math.sqrt(0.25 + (m * m - m) / n)
    simplified = math.sqrt((m - 1) / (m * n)) * m
    return exact, simplified


def thm313_guarantee(n: int, m: int) -> tuple[bool, float]:
    """Whether m >= 7n / log2 n, and the frequency sqrt(log2 n) / (3n) * m it then guarantees."""
    if n < 2:
        raise PreconditionError("need n >= 2")
    lg = math.log2(n)
    return m * lg >= 7 * n, math.sqrt(lg) / (3 * n) * m


def max_intersecting_subfamily(F: SetFamily) -> tuple[SetFamily, bool]:
    """Largest intersecting subfamily, and whether it has at least half the members."""
    nonempty = SetFamily(F.n, tuple(m for m in F.members if m))
    if len(nonempty) > EXACT_VERTEX_LIMIT:
        raise PreconditionError(f"exact search limited to {EXACT_VERTEX_LIMIT} members")
    clique = max_clique(intersection_graph(nonempty))
    sub = SetFamily(F.n, tuple(nonempty.members[i] for i in clique))
    return sub, 2 * len(sub) >= len(F)


FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def fano_plane() -> SetFamily:
    return SetFamily.from_masks(7, [mask_from_elements(line) for line in FANO_LINES])
