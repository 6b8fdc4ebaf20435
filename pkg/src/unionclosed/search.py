"""Populations of families (exhaustive and seeded random) and conjecture sweeps."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from . import cryptomorphs as cm
from .errors import PreconditionError, ProvenStatementViolation
from .family import SetFamily, frequency_vector, full_mask, is_intersecting, union_closure
from .freq_bounds import all_lemma_pairs_hold, profile_from_counts
from .graphs import (
    EXACT_VERTEX_LIMIT,
    frequency_via_coloring,
    max_intersecting_subfamily,
)
from .upsets import construct_halving_upset, max_disjoint_packing

EXHAUSTIVE_MAX_N = 5
EXHAUSTIVE_CLIQUE_MAX_N = 4


# ---------------------------------------------------------------- enumeration

def enumerate_union_closed(n: int, require_empty: bool = False,
                           nontrivial_only: bool = False) -> Iterator[SetFamily]:
    """Every union-closed family over [n] meeting the flags, each exactly once.

    Masks are decided from the full set downwards. Including mask m is
    allowed iff m | x is already included for every included x; those unions
    are all larger than m and hence already decided, so no partial choice
    ever has to be undone. Inclusion is tried before exclusion.
    """
    if n > EXHAUSTIVE_MAX_N:
        raise PreconditionError(
            f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}; "
            "use random_union_closed for larger ground sets"
        )
    if n < 1:
        raise PreconditionError("need n >= 1")
    top = full_mask(n)
    chosen: list[int] = []

    def rec(m: int, present: int) -> Iterator[SetFamily]:
        if m < 0:
            yield SetFamily(n, tuple(reversed(chosen)))
            return
        forced_in = (m == top and nontrivial_only) or (m == 0 and require_empty)
        if all(present >> (m | x) & 1 for x in chosen):
            chosen.append(m)
            yield from rec(m - 1, present | (1 << m))
            chosen.pop()
        elif forced_in:
            return
        if not forced_in:
            yield from rec(m - 1, present)

    yield from rec(top, 0)


def naive_union_closed_count(n: int, require_empty: bool = False,
                             nontrivial_only: bool = False) -> int:
    """Count by filtering all 2^(2^n) subfamilies of P(n); only sensible for n <= 3."""
    from .family import is_nontrivial, is_union_closed
    size = 1 << n
    count = 0
    for code in range(1 << size):
        F = SetFamily(n, tuple(m for m in range(size) if code >> m & 1))
        if require_empty and 0 not in F:
            continue
        if nontrivial_only and not is_nontrivial(F):
            continue
        if is_union_closed(F):
            count += 1
    return count


# ---------------------------------------------------------------- random populations

def random_union_closed(n: int, generator_count: int | None = None, seed: int = 0) -> SetFamily:
    """Union closure of random masks together with [n]."""
    if generator_count is None:
        generator_count = n
    rng = random.Random(seed)
    gens = [rng.getrandbits(n) for _ in range(generator_count)]
    return union_closure(SetFamily.from_masks(n, [*gens, full_mask(n)]))


def _random_mask(rng: random.Random, n: int) -> int:
    density = rng.random()
    mask = 0
    for e in range(n):
        if rng.random() < density:
            mask |= 1 << e
    return mask


def random_upset(n: int, size_cap: int | None = None, seed: int = 0) -> SetFamily:
    """Random up-set of at most ``size_cap`` members (default 2^(n-1)).

    Starts from {[n]} and adds up-closures of random masks whenever that
    keeps the size within the cap.
    """
    if n < 2:
        raise PreconditionError("need n >= 2")
    half = 1 << (n - 1)
    if size_cap is None:
        size_cap = half
    if not 1 <= size_cap <= half:
        raise PreconditionError(f"size_cap must be in [1, 2^(n-1)], got {size_cap}")
    rng = random.Random(seed)
    idx = np.arange(1 << n, dtype=np.int64)
    arr = idx == full_mask(n)
    for _ in range(rng.randint(1, 2 * n)):
        x = _random_mask(rng, n)
        if x == 0:
            continue
        cand = arr | ((idx & x) == x)
        if np.count_nonzero(cand) <= size_cap:
            arr = cand
    return SetFamily(n, tuple(int(x) for x in np.flatnonzero(arr)))


def random_intersecting(n: int, seed: int = 0, max_size: int | None = None) -> SetFamily:
    """Random intersecting family built greedily from random nonempty masks."""
    if n < 1:
        raise PreconditionError("need n >= 1")
    rng = random.Random(seed)
    if max_size is None:
        max_size = rng.randint(1, min(1 << (n - 1), 40))
    chosen: list[int] = []
    for _ in range(8 * max_size):
        if len(chosen) >= max_size:
            break
        x = _random_mask(rng, n)
        if x and x not in chosen and all(x & c for c in chosen):
            chosen.append(x)
    if not chosen:
        chosen.append(full_mask(n))
    return SetFamily.from_masks(n, chosen)


# ---------------------------------------------------------------- sweeps

PROVEN = "proven"
CONJECTURED = "conjectured"

# name -> (kind, statement the verdict refers to)
CHECKS: dict[str, tuple[str, str]] = {
    "union-closed-conjecture": (
        CONJECTURED, "Union Closed Sets Conjecture: some element lies in >= #F/2 members"),
    "rank-frequencies": (
        CONJECTURED, "Frequency question: k-th most frequent element lies in >= #F/(2^(k-1)+1) members"),
    "iterated-frequencies": (
        CONJECTURED, "Iterated bound (conditional on the conjecture): rank k >= #F/2^k"),
    "frequency-lemma": (
        PROVEN, "Frequency lemma: x in A in F implies freq(x)(2^(|A|-1)+1) >= #F"),
    "last-ranks": (
        PROVEN, "Frequency question holds for the two least frequent ranks k = n, n-1"),
    "cryptomorphism": (
        PROVEN, "Interior operator / congruence partition correspondence, class embedding, class-size ordering"),
    "halving-upset": (
        PROVEN, "Up-set U from congruence classes: #U <= ceil(2^n/t), #(F cap U) >= #F/t"),
    "disjoint-packing": (
        PROVEN, "Up-set with #U <= 2^(n-1) holds fewer than ceil(C n / log2 n) disjoint sets, C = 1+1/e"),
    "half-intersecting": (
        CONJECTURED, "Intersecting subfamily question: some intersecting E in F has #E >= #F/2"),
    "intersecting-frequency": (
        PROVEN, "Intersecting family of size m has an element in >= 1/2 + sqrt(1/4 + (m^2-m)/n) members"),
}

DEFAULT_TS = tuple(range(1, 9))


@dataclass
class CheckTally:
    checked: int = 0
    passes: int = 0
    violations: int = 0
    equality_cases: int = 0
    skipped: int = 0

    def record(self, ok: bool):
        self.checked += 1
        if ok:
            self.passes += 1
        else:
            self.violations += 1

    def merge(self, other: "CheckTally") -> "CheckTally":
        return CheckTally(*(a + b for a, b in zip(
            (self.checked, self.passes, self.violations, self.equality_cases, self.skipped),
            (other.checked, other.passes, other.violations, other.equality_cases, other.skipped),
        )))


@dataclass
class SweepReport:
    n: int
    population: dict
    checks: tuple[str, ...]
    tallies: dict[str, CheckTally] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)
    equality_cases: list[dict] = field(default_factory=list)
    observations: dict = field(default_factory=dict)
    families: int = 0
    wall_time: float = 0.0

    @property
    def conjecture_violations(self) -> int:
        return sum(t.violations for name, t in self.tallies.items() if CHECKS[name][0] == CONJECTURED)

    def merge(self, other: "SweepReport") -> "SweepReport":
        """Combine shard reports; the result does not depend on merge order."""
        tallies = {k: self.tallies.get(k, CheckTally()).merge(other.tallies.get(k, CheckTally()))
                   for k in sorted(set(self.tallies) | set(other.tallies))}
        key = lambda d: (d["check"], d["family"])
        obs = dict(self.observations)
        for k, v in other.observations.items():
            obs[k] = _combine_observation(k, obs.get(k), v)
        return SweepReport(
            n=self.n,
            population=self.population,
            checks=self.checks,
            tallies=tallies,
            counterexamples=sorted(self.counterexamples + other.counterexamples, key=key),
            equality_cases=sorted(self.equality_cases + other.equality_cases, key=key),
            observations=obs,
            families=self.families + other.families,
            wall_time=self.wall_time + other.wall_time,
        )

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "population": self.population,
            "families": self.families,
            "checks": {
                name: {
                    "kind": CHECKS[name][0],
                    "anchor": CHECKS[name][1],
                    **vars(self.tallies[name]),
                }
                for name in self.checks
            },
            "counterexamples": self.counterexamples,
            "equality_cases": self.equality_cases,
            "observations": self.observations,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


def _combine_observation(key, a, b):
    if a is None:
        return b
    if b is None:
        return a
    if key.startswith("min_"):
        return min(a, b)
    return max(a, b)


def _observe(obs: dict, key: str, value):
    obs[key] = _combine_observation(key, obs.get(key), value)


def _fail(check: str, message: str, F: SetFamily):
    raise ProvenStatementViolation(check, message, F)


def check_cryptomorphism(F: SetFamily, exhaustive: bool = True) -> bool:
    """Round trips, congruence axioms, class-size ordering and class embeddings on F plus the empty set."""
    G = F if 0 in F else F.with_masks([0])
    tau = cm.interior_operator(G)
    ok, fixed = cm.verify_interior_operator(tau)
    if not ok or fixed != G:
        return False
    if cm.interior_operator(fixed) != tau:
        return False
    p = cm.congruence_partition(tau)
    if sum(p.class_sizes) != 1 << G.n:
        return False
    if not cm.verify_congruence(p, exhaustive=exhaustive and G.n <= cm.EXHAUSTIVE_CONGRUENCE_MAX_N):
        return False
    ordered = cm.corollary_ordering(G, p)
    if not cm.check_ordering(ordered) or ordered.labels[0] != G.full or ordered.class_sizes[0] != 1:
        return False
    for E in G.members:
        for Fm in G.members:
            if E & ~Fm == 0 and not cm.check_embedding(p, E, Fm):
                return False
    return True


def _check_family(F: SetFamily, checks, report: SweepReport, ts, exhaustive: bool):
    fams = F.to_sets()
    fv = frequency_vector(F)
    prof = profile_from_counts(fv.counts, fv.total)
    tallies = report.tallies

    def finding(name, detail):
        report.counterexamples.append({"check": name, "family": fams, "n": F.n, "detail": detail})

    if "union-closed-conjecture" in checks:
        ok = prof.conjecture_holds
        name = "union-closed-conjecture"
        tallies[name].record(ok)
        if prof.equality[0]:
            tallies[name].equality_cases += 1
        if not ok:
            finding(name, {"max_frequency": prof.frequencies[0], "size": fv.total})

    if "rank-frequencies" in checks:
        ok = prof.all_conjectured
        name = "rank-frequencies"
        tallies[name].record(ok)
        ranks = [k + 1 for k, e in enumerate(prof.equality) if e]
        if ranks:
            tallies[name].equality_cases += 1
            report.equality_cases.append({"check": name, "family": fams, "n": F.n, "ranks": ranks})
        if not ok:
            bad = [k + 1 for k, c in enumerate(prof.conjectured) if not c]
            finding(name, {"ranks": bad, "frequencies": list(prof.frequencies), "size": fv.total})

    if "iterated-frequencies" in checks:
        ok = prof.all_conditional
        name = "iterated-frequencies"
        tallies[name].record(ok)
        if not ok:
            bad = [k + 1 for k, c in enumerate(prof.conditional) if not c]
            finding(name, {"ranks": bad, "frequencies": list(prof.frequencies), "size": fv.total})

    if "frequency-lemma" in checks:
        ok = all_lemma_pairs_hold(F)
        tallies["frequency-lemma"].record(ok)
        if not ok:
            _fail("frequency-lemma", "some (x, A) pair violates the bound", F)

    if "last-ranks" in checks:
        ok = prof.proven_last and prof.proven_second_last is not False
        tallies["last-ranks"].record(ok)
        if not ok:
            _fail("last-ranks", f"profile {prof.frequencies} of {prof.total}", F)

    if "cryptomorphism" in checks:
        ok = check_cryptomorphism(F, exhaustive=exhaustive)
        tallies["cryptomorphism"].record(ok)
        if not ok:
            _fail("cryptomorphism", "round trip, congruence, ordering or embedding failed", F)

    upset_t2 = None
    if "halving-upset" in checks:
        for t in ts:
            cert = construct_halving_upset(F, t)
            tallies["halving-upset"].record(cert.holds)
            if not cert.holds:
                _fail("halving-upset", f"t={t}: {cert}", F)
            if t == 2:
                upset_t2 = cert.upset

    if "disjoint-packing" in checks:
        if F.n < 2:
            tallies["disjoint-packing"].skipped += 1
        else:
            if upset_t2 is None:
                upset_t2 = construct_halving_upset(F, 2).upset
            rep = max_disjoint_packing(upset_t2)
            tallies["disjoint-packing"].record(rep.holds)
            _observe(report.observations, "max_packing_ratio", rep.ratio)
            if not rep.holds:
                _fail("disjoint-packing", f"{rep}", F)

    need_clique = "half-intersecting" in checks or "intersecting-frequency" in checks
    if need_clique:
        if sum(1 for m in F.members if m) > EXACT_VERTEX_LIMIT:
            for name in ("half-intersecting", "intersecting-frequency"):
                if name in checks:
                    tallies[name].skipped += 1
        else:
            sub, half = max_intersecting_subfamily(F)
            if "half-intersecting" in checks:
                tallies["half-intersecting"].record(half)
                if 2 * len(sub) == len(F):
                    tallies["half-intersecting"].equality_cases += 1
                if not half:
                    finding("half-intersecting", {"largest_intersecting": len(sub), "size": len(F)})
            if "intersecting-frequency" in checks:
                if len(sub):
                    # raises on failure
                    frequency_via_coloring(sub, mode="intersecting")
                    tallies["intersecting-frequency"].record(True)
                else:
                    tallies["intersecting-frequency"].skipped += 1

    if is_intersecting(F):
        _observe(report.observations, "min_frequency_ratio_intersecting",
                 float(Fraction(max(fv.counts), fv.total)))


def sweep(n: int, checks: Iterable[str] | None = None, population: str = "exhaustive",
          count: int = 0, seed: int = 0, ts=DEFAULT_TS,
          generator_count: int | None = None) -> SweepReport:
    """Run the selected checks over a population of nontrivial union-closed families.

    ``population`` is ``"exhaustive"`` (every such family, with and without
    the empty set) or ``"random"`` (``count`` families from
    :func:`random_union_closed`, seeded by ``seed``). Proven statements that
    fail raise :class:`ProvenStatementViolation`; conjectured ones are
    collected in ``counterexamples``.
    """
    checks = tuple(CHECKS) if checks is None else tuple(checks)
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise PreconditionError(f"unknown checks: {unknown}")
    if population == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise PreconditionError(f"exhaustive sweeps are limited to n <= {EXHAUSTIVE_MAX_N}")
        clique = {"half-intersecting", "intersecting-frequency"} & set(checks)
        if clique and n > EXHAUSTIVE_CLIQUE_MAX_N:
            raise PreconditionError(
                f"exhaustive intersecting-subfamily checks are limited to n <= {EXHAUSTIVE_CLIQUE_MAX_N}")
        families: Iterable[SetFamily] = enumerate_union_closed(n, nontrivial_only=True)
        pop = {"kind": "exhaustive"}
    elif population == "random":
        if count < 0:
            raise PreconditionError("count must be non-negative")
        rng = random.Random(seed)
        seeds = [rng.getrandbits(64) for _ in range(count)]
        families = (random_union_closed(n, generator_count, s) for s in seeds)
        pop = {"kind": "random", "count": count, "seed": seed,
               "generator_count": n if generator_count is None else generator_count}
    else:
        raise PreconditionError(f"unknown population {population!r}")

    report = SweepReport(n=n, population=pop, checks=checks,
                         tallies={c: CheckTally() for c in checks})
    start = time.perf_counter()
    for F in families:
        report.families += 1
        _check_family(F, checks, report, ts, exhaustive=population == "exhaustive")
    report.wall_time = time.perf_counter() - start
    return report
