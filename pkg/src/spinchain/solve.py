"""Volume-constrained ground states of the chain energies.

Three routes:

* ``brute_force_min``   exhaustive oracle (full 2^N sweep, or subset
  enumeration when only C(N, k) is small); exact, guarded.
* ``column_dp_min``     exact open-chain minimum via dynamic programming
  over per-column occupation counts, each column filled bottom-up.
* ``periodic_min``      exact when the brute-force guard allows it,
  otherwise the better of a cyclic column DP and simulated annealing,
  flagged as an upper bound.

The DP searches prefix profiles only: within each column the occupied
sites form a bottom prefix.  Moving every column's sites to the bottom
does not always lower the energy configuration-by-configuration (the
cross-column wrap pair can flip against it), but the minimum over prefix
profiles still matches the exhaustive minimum on every instance we can
afford to enumerate; `tests/test_acceptance.py` pins that equivalence.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .lattice import (
    EdgeKind,
    SpinConfig,
    column_heights,
    config_to_text,
    energy_open,
    energy_periodic,
    lambda_defect,
    site_count,
)
from .rationals import frac

__all__ = [
    "ColumnProfile",
    "SolveResult",
    "SolverGuardError",
    "block_rearrange",
    "brute_force_min",
    "column_dp_min",
    "periodic_min",
    "profile_to_config",
]

FULL_SWEEP_MAX_N = 28
SUBSET_ENUM_MAX = 10**7
MAX_OPTIMA = 10**4
_INF = 1 << 30


class SolverGuardError(ValueError):
    """Instance too large for the requested exact method."""


@dataclass(frozen=True)
class ColumnProfile:
    """Per-column occupation counts of a prefix-form configuration."""

    n: int
    heights: tuple[int, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.heights) != len(self.counts):
            raise ValueError("heights and counts must align")
        for h, a in zip(self.heights, self.counts):
            if not (0 <= a <= h <= self.n):
                raise ValueError(f"count {a} outside column of height {h}")

    def volume(self) -> int:
        return sum(self.counts)


def profile_to_config(profile: ColumnProfile, L=None) -> SpinConfig:
    """Materialize a profile: column j gets ones on its first counts[j] sites."""
    values: list[int] = []
    for h, a in zip(profile.heights, profile.counts):
        values.extend([1] * a + [0] * (h - a))
    if L is None:
        L = Fraction(len(values), profile.n * profile.n)
    return SpinConfig(profile.n, frac(L), tuple(values))


def config_to_profile(cfg: SpinConfig) -> ColumnProfile:
    return ColumnProfile(cfg.n, column_heights(cfg.n, cfg.L), cfg.column_counts())


def block_rearrange(cfg: SpinConfig) -> SpinConfig:
    """Move the ones of every column to that column's bottom prefix.

    Preserves per-column (hence total) volume and is idempotent.  Note:
    this does NOT always decrease the open energy; the wrap pair between
    a column's top site and the next column's bottom site can flip from
    matched to mismatched (e.g. n=2, (0,1,1,1) -> (1,0,1,1)).
    """
    values: list[int] = []
    pos = 0
    for h in column_heights(cfg.n, cfg.L):
        a = sum(cfg.values[pos : pos + h])
        values.extend([1] * a + [0] * (h - a))
        pos += h
    return SpinConfig(cfg.n, cfg.L, tuple(values))


@dataclass
class SolveResult:
    value: Fraction
    config: SpinConfig
    method: str              # "BruteForce" | "ColumnDP" | "LocalSearch"
    exact: bool
    profile: Optional[ColumnProfile] = None
    optima: Optional[list[SpinConfig]] = None  # brute force argmin set
    optima_truncated: bool = False

    def to_json(self) -> str:
        v = self.value
        doc = {
            "value": f"{v.numerator}/{v.denominator}",
            "method": self.method,
            "exact": self.exact,
            "config": config_to_text(self.config, rle=True).splitlines()[1],
            "profile": list(self.profile.counts) if self.profile else None,
        }
        return json.dumps(doc)


# --- brute force ------------------------------------------------------------


def _distance_set(n: int, N: int, periodic: bool) -> list[int]:
    if periodic:
        return sorted({d for d in (1, N - 1, n, N - n) if 1 <= d <= N - 1})
    return sorted({d for d in (1, n) if 1 <= d <= N - 1})


def _chunk_min_by_volume(args):
    lo, hi, N, dists = args
    c = np.arange(lo, hi, dtype=np.uint32)
    e = np.zeros(hi - lo, np.uint8)
    for d in dists:
        window = np.uint32((1 << (N - d)) - 1)
        e += np.bitwise_count((c ^ (c >> np.uint32(d))) & window).astype(np.uint8)
    mins = np.full(N + 1, 255, np.uint8)
    np.minimum.at(mins, np.bitwise_count(c), e)
    return mins


@lru_cache(maxsize=32)
def _sweep_min_table(n: int, L_key: tuple, periodic: bool):
    """Full 2^N sweep; per-volume minimal mismatch counts (numpy int array).

    The enumeration range is partitioned into chunks evaluated on a small
    thread pool (the numpy kernels release the GIL) and reduced by minimum,
    which is order-independent.
    """
    L = Fraction(*L_key)
    N = site_count(n, L)
    dists = tuple(_distance_set(n, N, periodic))
    total = 1 << N
    step = 1 << 22
    chunks = [(lo, min(total, lo + step), N, dists) for lo in range(0, total, step)]
    if len(chunks) == 1:
        return _chunk_min_by_volume(chunks[0])
    with ThreadPoolExecutor(max_workers=min(4, len(chunks))) as pool:
        tables = list(pool.map(_chunk_min_by_volume, chunks))
    return np.minimum.reduce(tables)


def _sweep_argmin(n: int, L: Fraction, k: int, periodic: bool, target: int,
                  cap: int) -> tuple[list[int], bool]:
    """Second pass: collect up to `cap` bitmasks of volume k hitting the target count."""
    N = site_count(n, L)
    dists = _distance_set(n, N, periodic)
    found: list[int] = []
    truncated = False
    total = 1 << N
    step = 1 << 22
    for lo in range(0, total, step):
        hi = min(total, lo + step)
        c = np.arange(lo, hi, dtype=np.uint32)
        e = np.zeros(hi - lo, np.uint8)
        for d in dists:
            window = np.uint32((1 << (N - d)) - 1)
            e += np.bitwise_count((c ^ (c >> np.uint32(d))) & window).astype(np.uint8)
        mask = (np.bitwise_count(c) == k) & (e == target)
        hits = c[mask]
        room = cap - len(found)
        if len(hits) > room:
            found.extend(int(x) for x in hits[:room])
            truncated = True
            break
        found.extend(int(x) for x in hits)
    return found, truncated


def _mismatch_count_int(mask: int, N: int, dists) -> int:
    total = 0
    for d in dists:
        window = (1 << (N - d)) - 1
        total += ((mask ^ (mask >> d)) & window).bit_count()
    return total


def _gosper_min(n: int, N: int, k: int, dists) -> tuple[int, list[int], bool]:
    """Enumerate volume-k bitmasks in increasing order, track the argmin set."""
    if k == 0:
        return 0, [0], False
    best = None
    optima: list[int] = []
    truncated = False
    c = (1 << k) - 1
    limit = 1 << N
    while c < limit:
        e = _mismatch_count_int(c, N, dists)
        if best is None or e < best:
            best, optima, truncated = e, [c], False
        elif e == best:
            if len(optima) < MAX_OPTIMA:
                optima.append(c)
            else:
                truncated = True
        u = c & (-c)
        v = c + u
        c = v | (((v ^ c) // u) >> 2)
    return best, optima, truncated


def brute_force_min(n: int, L, k: int, boundary="open") -> SolveResult:
    """Exhaustive exact minimum over all volume-k configurations.

    Guarded: requires N <= 28 (full sweep) or C(N, k) <= 10^7 (subset
    enumeration); larger instances are refused outright.
    """
    L = frac(L)
    N = site_count(n, L)
    periodic = boundary == "periodic" or (
        isinstance(boundary, EdgeKind) and boundary.periodic
    )
    if not 0 <= k <= N:
        raise ValueError(f"volume {k} outside [0, {N}]")
    if periodic and N < 2:
        raise ValueError("periodic energy needs at least 2 sites")

    if N <= FULL_SWEEP_MAX_N:
        mins = _sweep_min_table(n, (L.numerator, L.denominator), periodic)
        target = int(mins[k])
        masks, truncated = _sweep_argmin(n, L, k, periodic, target, MAX_OPTIMA)
    elif math.comb(N, k) <= SUBSET_ENUM_MAX:
        dists = _distance_set(n, N, periodic)
        target, masks, truncated = _gosper_min(n, N, k, dists)
    else:
        raise SolverGuardError(
            f"instance too large for brute force: N={N}, C(N,k)={math.comb(N, k)}"
        )

    optima = [SpinConfig.from_bitmask(n, L, m) for m in masks]
    cfg = optima[0]
    value = Fraction(target, n)
    check = energy_periodic(cfg) if periodic else energy_open(cfg)
    assert check == value, "sweep bookkeeping must match the energy"
    return SolveResult(
        value=value,
        config=cfg,
        method="BruteForce",
        exact=True,
        profile=None,
        optima=optima,
        optima_truncated=truncated,
    )


# --- column dynamic program ---------------------------------------------------


def _transition_cost(n: int, h_prev: int, h: int) -> np.ndarray:
    """cost[a1, a2] of following a count-a1 column (height h_prev) by a count-a2
    column (height h): horizontal clip term + wrap pair + internal jump."""
    a1 = np.arange(n + 1)[:, None]
    a2 = np.arange(n + 1)[None, :]
    horizontal = np.abs(np.minimum(a1, h) - a2)
    wrap = ((a1 == h_prev) != (a2 >= 1)).astype(np.int64)
    internal = ((a2 > 0) & (a2 < h)).astype(np.int64)
    cost = horizontal + wrap + internal
    cost[np.arange(n + 1) > h_prev, :] = _INF
    cost[:, np.arange(n + 1) > h] = _INF
    return cost


def column_dp_min(n: int, L, k: int) -> SolveResult:
    """Exact open-chain minimum at volume k via DP over column prefix counts.

    State: (column, count, volume used); transition cost as in
    ``_transition_cost``; the first column contributes its own internal
    jump.  Ties break toward the smaller count, then the smaller column
    index, so the returned profile is deterministic.
    """
    L = frac(L)
    N = site_count(n, L)
    if not 0 <= k <= N:
        raise ValueError(f"volume {k} outside [0, {N}]")
    heights = column_heights(n, L)
    ncols = len(heights)

    dp = np.full((n + 1, k + 1), _INF, np.int64)
    h1 = heights[0]
    for a in range(min(h1, k) + 1):
        dp[a, a] = 1 if 0 < a < h1 else 0

    parents = np.zeros((ncols, n + 1, k + 1), np.int16)
    for ci in range(1, ncols):
        cost = _transition_cost(n, heights[ci - 1], heights[ci])
        ndp = np.full_like(dp, _INF)
        for a2 in range(heights[ci] + 1):
            cand = dp + cost[:, a2][:, None]
            best = cand.min(axis=0)
            arg = cand.argmin(axis=0)
            if a2 > k:
                break
            ndp[a2, a2:] = best[: k + 1 - a2]
            parents[ci, a2, a2:] = arg[: k + 1 - a2]
        dp = ndp

    final = dp[:, k]
    total = int(final.min())
    if total >= _INF:
        raise ValueError(f"volume {k} not representable over {ncols} columns")
    a_cur = int(final.argmin())

    counts = [0] * ncols
    v = k
    for ci in range(ncols - 1, 0, -1):
        counts[ci] = a_cur
        v -= a_cur
        a_cur = int(parents[ci, counts[ci], v + counts[ci]])
    counts[0] = a_cur

    profile = ColumnProfile(n, heights, tuple(counts))
    cfg = profile_to_config(profile, L)
    value = Fraction(total, n)
    assert energy_open(cfg) == value, "DP bookkeeping must match the energy"
    return SolveResult(value, cfg, "ColumnDP", True, profile=profile)


# --- periodic: cyclic DP and annealing ----------------------------------------


def _prefix_range_mismatch(A: int, B: int, lo: int, hi: int) -> int:
    """|{i in (lo, hi] : (i <= A) != (i <= B)}| for threshold indicators."""
    ca = min(max(A, lo), hi)
    cb = min(max(B, lo), hi)
    return abs(ca - cb)


def _cyclic_dp(n: int, L: Fraction, k: int) -> Optional[SolveResult]:
    """Best periodic energy over cyclic prefix profiles; upper bound on the minimum.

    Runs the open-chain DP with the first-column count pinned, then adds
    the seam terms: the distance N-1 pair and the n distance N-n pairs
    (shifted by the column defect when the last column is partial).
    """
    N = site_count(n, L)
    if n < 2 or N <= 2 * n:  # distance classes collide; not worth special-casing
        return None
    heights = column_heights(n, L)
    ncols = len(heights)
    if ncols < 3:
        return None
    lam = lambda_defect(n, L)

    best_total = None
    best_counts = None
    for a1 in range(min(heights[0], k) + 1):
        dp = np.full((n + 1, k + 1), _INF, np.int64)
        dp[a1, a1] = 1 if 0 < a1 < heights[0] else 0
        parents = np.zeros((ncols, n + 1, k + 1), np.int16)
        for ci in range(1, ncols):
            cost = _transition_cost(n, heights[ci - 1], heights[ci])
            if ci == ncols - 1:
                cost = cost.copy()
                # seam horizontal terms tie the last column(s) back to column 1
                for ap in range(n + 1):
                    for al in range(n + 1):
                        if cost[ap, al] >= _INF:
                            continue
                        if lam:
                            seam = _prefix_range_mismatch(a1, ap - lam, 0, n - lam)
                            seam += _prefix_range_mismatch(
                                a1, al + n - lam, n - lam, n)
                        else:
                            seam = abs(a1 - al)
                        seam += 1 if (a1 >= 1) != (al == heights[-1]) else 0
                        cost[ap, al] += seam
            ndp = np.full_like(dp, _INF)
            for a2 in range(heights[ci] + 1):
                if a2 > k:
                    break
                cand = dp + cost[:, a2][:, None]
                best = cand.min(axis=0)
                arg = cand.argmin(axis=0)
                ndp[a2, a2:] = best[: k + 1 - a2]
                parents[ci, a2, a2:] = arg[: k + 1 - a2]
            dp = ndp
        final = dp[:, k]
        total = int(final.min())
        if total >= _INF:
            continue
        a_cur = int(final.argmin())
        counts = [0] * ncols
        v = k
        for ci in range(ncols - 1, 0, -1):
            counts[ci] = a_cur
            v -= a_cur
            a_cur = int(parents[ci, counts[ci], v + counts[ci]])
        counts[0] = a_cur
        if best_total is None or total < best_total:
            best_total, best_counts = total, counts

    if best_total is None:
        return None
    profile = ColumnProfile(n, heights, tuple(best_counts))
    cfg = profile_to_config(profile, L)
    value = energy_periodic(cfg)
    assert value == Fraction(best_total, n), "cyclic DP seam accounting is off"
    return SolveResult(value, cfg, "ColumnDP", False, profile=profile)


def _anneal(n: int, L: Fraction, k: int, seed: int, steps: int,
            t0: float = 1.0, ratio: float = 0.995,
            periodic: bool = True) -> SolveResult:
    """Volume-preserving pair-swap annealing with geometric cooling."""
    N = site_count(n, L)
    rng = random.Random(seed)
    dists = _distance_set(n, N, periodic=periodic)

    sites = list(range(1, N + 1))
    ones = set(rng.sample(sites, k))
    values = [1 if i in ones else 0 for i in sites]

    def pair_mismatches(site: int) -> int:
        total = 0
        for d in dists:
            if site - d >= 1 and values[site - 1] != values[site - d - 1]:
                total += 1
            if site + d <= N and values[site - 1] != values[site + d - 1]:
                total += 1
        return total

    def swap_delta(i: int, j: int) -> int:
        affected = set()
        for s in (i, j):
            for d in dists:
                if s - d >= 1:
                    affected.add((s - d, s))
                if s + d <= N:
                    affected.add((s, s + d))
        before = sum(values[a - 1] != values[b - 1] for a, b in affected)
        values[i - 1], values[j - 1] = values[j - 1], values[i - 1]
        after = sum(values[a - 1] != values[b - 1] for a, b in affected)
        values[i - 1], values[j - 1] = values[j - 1], values[i - 1]
        return after - before

    occupied = [i for i in sites if values[i - 1] == 1]
    empty = [i for i in sites if values[i - 1] == 0]
    current = sum(
        1
        for d in dists
        for i in range(1, N - d + 1)
        if values[i - 1] != values[i + d - 1]
    )
    best = current
    best_values = values[:]
    T = t0
    for _ in range(steps):
        if not occupied or not empty:
            break
        oi = rng.randrange(len(occupied))
        ei = rng.randrange(len(empty))
        i, j = occupied[oi], empty[ei]
        delta = swap_delta(i, j)
        if delta <= 0 or rng.random() < math.exp(-(delta / n) / T):
            values[i - 1], values[j - 1] = 0, 1
            occupied[oi], empty[ei] = j, i
            current += delta
            if current < best:
                best = current
                best_values = values[:]
        T = max(T * ratio, 1e-300)

    cfg = SpinConfig(n, L, tuple(best_values))
    value = energy_periodic(cfg) if periodic else energy_open(cfg)
    assert value == Fraction(best, n)
    return SolveResult(value, cfg, "LocalSearch", False)


def periodic_min(n: int, L, k: int, seed: int = 0, steps: int = 10**5) -> SolveResult:
    """Minimum of the periodic energy at volume k.

    Exact (brute force) whenever the guard allows; otherwise returns the
    better of the cyclic column DP and simulated annealing, flagged
    exact=False - an upper bound on the true minimum.
    """
    L = frac(L)
    N = site_count(n, L)
    if not 0 <= k <= N:
        raise ValueError(f"volume {k} outside [0, {N}]")
    if k in (0, N):
        cfg = SpinConfig(n, L, tuple([1 if k else 0] * N))
        return SolveResult(Fraction(0), cfg, "BruteForce", True, optima=[cfg])
    try:
        return brute_force_min(n, L, k, boundary="periodic")
    except SolverGuardError:
        pass
    candidates = []
    dp = _cyclic_dp(n, L, k)
    if dp is not None:
        candidates.append(dp)
    candidates.append(_anneal(n, L, k, seed, steps))
    return min(candidates, key=lambda r: r.value)
