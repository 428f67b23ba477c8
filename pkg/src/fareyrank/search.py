"""Closest member of F_n to an arbitrary proper fraction p/q.

Three routes: binary search over the bracketing rank range, the
interpolating (regula falsi) search, and an exhaustive scan used as the
oracle.  All three share one tie rule: a key exactly halfway between two
members resolves to the larger one.  Only integer arithmetic is used.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .sequence import FareySequence, Fraction, fraction_at_rank, generate_sequence
from .table import FareyTable, build_table, rank_of

BINARY = "binary"
REGULA_FALSI = "regula_falsi"
BRUTE = "brute"


@dataclass(frozen=True)
class SearchKey:
    """Proper fraction p/q; not necessarily reduced, q unbounded."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or self.p < 0 or self.p > self.q:
            raise InvalidArgument(f"{self.p}/{self.q} is not a proper fraction")

    @classmethod
    def parse(cls, text: str) -> "SearchKey":
        p, sep, q = text.strip().partition("/")
        if not sep:
            raise InvalidArgument(f"expected p/q, got {text!r}")
        try:
            return cls(int(p), int(q))
        except ValueError:
            raise InvalidArgument(f"expected p/q, got {text!r}") from None


@dataclass(frozen=True)
class RankRange:
    f1: int
    f2: int


@dataclass(frozen=True)
class SearchResult:
    closest: Fraction
    rank: int
    iterations: int
    algorithm: str
    bracket: RankRange | None = None


def bracket_range(seq: FareySequence, table: FareyTable, key: SearchKey):
    """Ranks of floor(p*n/q)/n and ceil(p*n/q)/n, which enclose the key."""
    n = seq.order
    low = key.p * n // key.q
    high = -(-key.p * n // key.q)
    f1 = rank_of(table, low, n)
    f2 = rank_of(table, high, n)
    return RankRange(f1, f2), fraction_at_rank(seq, f1), fraction_at_rank(seq, f2)


def _sign_at(seq: FareySequence, rank: int, p: int, q: int) -> int:
    """Sign of (member at rank) - p/q."""
    d = seq.nums[rank - 1] * q - seq.dens[rank - 1] * p
    return (d > 0) - (d < 0)


def _nearer(seq: FareySequence, lo: int, hi: int, p: int, q: int) -> int:
    """Pick between ranks lo < hi with member(lo) <= p/q <= member(hi); ties go to hi."""
    a1, b1 = seq.nums[lo - 1], seq.dens[lo - 1]
    a2, b2 = seq.nums[hi - 1], seq.dens[hi - 1]
    below = (p * b1 - a1 * q) * b2
    above = (a2 * q - p * b2) * b1
    return lo if below < above else hi


def _result(seq, rank, iterations, algorithm, bracket=None):
    return SearchResult(fraction_at_rank(seq, rank), rank, iterations, algorithm, bracket)


def closest_binary(seq: FareySequence, table: FareyTable, key: SearchKey) -> SearchResult:
    """Bisect the bracketing rank range for the sign change of member - key.

    One iteration is one midpoint probe.
    """
    rng, _, _ = bracket_range(seq, table, key)
    p, q = key.p, key.q
    lo, hi = rng.f1, rng.f2
    if lo == hi:
        return _result(seq, lo, 0, BINARY, rng)
    iterations = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        iterations += 1
        s = _sign_at(seq, mid, p, q)
        if s == 0:
            return _result(seq, mid, iterations, BINARY, rng)
        if s < 0:
            lo = mid
        else:
            hi = mid
    return _result(seq, _nearer(seq, lo, hi, p, q), iterations, BINARY, rng)


def interpolate_rank(f1: int, f2: int, n1: int, d1: int, n2: int, d2: int) -> int:
    """floor of the zero of the line through (f1, n1/d1) and (f2, n2/d2).

    Requires n1/d1 < 0 < n2/d2 with positive d1, d2.
    """
    return (f1 * n2 * d1 - f2 * n1 * d2) // (n2 * d1 - n1 * d2)


def closest_regula_falsi(seq: FareySequence, table: FareyTable, key: SearchKey,
                         guard: bool = True) -> SearchResult:
    """Interpolating search: probe where the secant of member - key crosses zero.

    The probe is clamped strictly inside the bracket, so each unresolved
    iteration removes at least two ranks.  With ``guard`` on, two
    consecutive iterations that each fail to halve the bracket make the next
    probe a midpoint, so the width halves at least every third iteration.
    """
    rng, _, _ = bracket_range(seq, table, key)
    p, q = key.p, key.q
    nums, dens = seq.nums, seq.dens
    lo, hi = rng.f1, rng.f2
    if lo == hi:
        return _result(seq, lo, 0, REGULA_FALSI, rng)
    iterations = 0
    slow = 0
    while hi - lo > 1:
        iterations += 1
        width = hi - lo
        if slow >= 2:
            slow = 0
            x = (lo + hi) // 2
        else:
            n1 = nums[lo - 1] * q - dens[lo - 1] * p
            n2 = nums[hi - 1] * q - dens[hi - 1] * p
            x = interpolate_rank(lo, hi, n1, dens[lo - 1], n2, dens[hi - 1])
        r = min(max(x, lo + 1), hi - 1)
        s = _sign_at(seq, r, p, q)
        if s == 0:
            return _result(seq, r, iterations, REGULA_FALSI, rng)
        if s < 0:
            if _sign_at(seq, r + 1, p, q) >= 0:
                return _result(seq, _nearer(seq, r, r + 1, p, q), iterations, REGULA_FALSI, rng)
            lo = r + 1
        else:
            if _sign_at(seq, r - 1, p, q) <= 0:
                return _result(seq, _nearer(seq, r - 1, r, p, q), iterations, REGULA_FALSI, rng)
            hi = r - 1
        slow = slow + 1 if guard and 2 * (hi - lo) > width else 0
    return _result(seq, _nearer(seq, lo, hi, p, q), iterations, REGULA_FALSI, rng)


def closest_bruteforce(seq: FareySequence, key: SearchKey) -> SearchResult:
    """Scan every member; the oracle for the two searches."""
    p, q = key.p, key.q
    best = 1
    best_num, best_den = p, 1  # distance to 0/1, scaled by q
    for rank in range(2, seq.f_max + 1):
        a, b = seq.nums[rank - 1], seq.dens[rank - 1]
        num = abs(p * b - a * q)
        # num/b <= best_num/best_den; <= so that ties move to the larger member
        if num * best_den <= best_num * b:
            best, best_num, best_den = rank, num, b
    return _result(seq, best, seq.f_max, BRUTE)


def closest_bruteforce_many(seq: FareySequence, ps, qs, chunk: int = 64) -> np.ndarray:
    """Brute-force closest ranks for many keys at once.

    Same exhaustive scan and tie rule as closest_bruteforce, done as a
    pairwise knockout over numpy int64 arrays.
    """
    ps = np.asarray(ps, dtype=np.int64)
    qs = np.asarray(qs, dtype=np.int64)
    n = seq.order
    if qs.size and int(qs.max()) * n * n >= 2**62:
        return np.array([closest_bruteforce(seq, SearchKey(int(p), int(q))).rank
                         for p, q in zip(ps, qs)])
    a = np.asarray(seq.nums, dtype=np.int64)
    b = np.asarray(seq.dens, dtype=np.int64)
    out = np.empty(ps.size, dtype=np.int64)
    for start in range(0, ps.size, chunk):
        p = ps[start:start + chunk, None]
        q = qs[start:start + chunk, None]
        dist = np.abs(p * b - a * q)
        den = np.broadcast_to(b, dist.shape).copy()
        idx = np.broadcast_to(np.arange(1, b.size + 1), dist.shape).copy()
        while dist.shape[1] > 1:
            if dist.shape[1] % 2:
                # pad with a copy of the last column so it survives its pairing
                dist = np.concatenate([dist, dist[:, -1:]], axis=1)
                den = np.concatenate([den, den[:, -1:]], axis=1)
                idx = np.concatenate([idx, idx[:, -1:]], axis=1)
            left = slice(0, None, 2)
            right = slice(1, None, 2)
            take_right = dist[:, right] * den[:, left] <= dist[:, left] * den[:, right]
            dist = np.where(take_right, dist[:, right], dist[:, left])
            den = np.where(take_right, den[:, right], den[:, left])
            idx = np.where(take_right, idx[:, right], idx[:, left])
        out[start:start + chunk] = idx[:, 0]
    return out


@dataclass(frozen=True)
class BenchRow:
    order: int
    algo: str
    trials: int
    total_iters: int
    min_iters: int
    max_iters: int
    agreement: int

    @property
    def mean_iters(self):
        from fractions import Fraction as Q
        return Q(self.total_iters, self.trials)


def bench_keys(order: int, trials: int, seed: int) -> tuple[list[int], list[int]]:
    """Deterministic keys: q uniform in [n+1, 100n], p uniform in [0, q].

    Trial t of order n draws from its own stream seeded by (seed, n, t).
    """
    ps, qs = [], []
    for t in range(trials):
        gen = np.random.default_rng([seed, order, t])
        q = int(gen.integers(order + 1, 100 * order, endpoint=True))
        p = int(gen.integers(0, q, endpoint=True))
        ps.append(p)
        qs.append(q)
    return ps, qs


def _bench_order(order: int, trials: int, seed: int) -> list[BenchRow]:
    seq = generate_sequence(order)
    table = build_table(seq)
    ps, qs = bench_keys(order, trials, seed)
    oracle = closest_bruteforce_many(seq, ps, qs)
    rows = []
    for algo, fn in ((BINARY, closest_binary), (REGULA_FALSI, closest_regula_falsi)):
        iters = []
        agree = 0
        for p, q, want in zip(ps, qs, oracle):
            res = fn(seq, table, SearchKey(p, q))
            iters.append(res.iterations)
            agree += res.rank == want
        rows.append(BenchRow(order, algo, trials, sum(iters), min(iters), max(iters), agree))
    return rows


def bench_iterations(orders, trials: int, seed: int, workers: int = 1) -> list[BenchRow]:
    """Iteration counts of both searches over seeded random keys, per order.

    Output does not depend on ``workers``.
    """
    orders = list(orders)
    if not orders:
        raise InvalidArgument("at least one order is required")
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    if any(n < 1 for n in orders):
        raise InvalidArgument("orders must be positive")
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_bench_order, orders, [trials] * len(orders),
                                  [seed] * len(orders)))
    else:
        parts = [_bench_order(n, trials, seed) for n in orders]
    return [row for part in parts for row in part]
