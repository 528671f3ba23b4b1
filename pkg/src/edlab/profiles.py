"""Cluster profiles: step functions, parameter selection, lower bounds.

A profile is the multiset of duplicate-cluster sizes of an input, i.e.
its duplicate graph up to isomorphism.  Everything downstream is driven
by the two step functions

    C(L) = total number of elements in clusters of size < L
    D(L) = number of clusters of size >= L

which only change at L = s+1 for sizes s present in the profile, so all
minimizations scan piece representatives instead of every L.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional

from .core import Answer
from .sortsel import drive_with, select_gen


class ClusterProfile:
    """Multiset of cluster sizes with O(log m) C/D evaluation."""

    def __init__(self, sizes):
        sizes = tuple(int(s) for s in sizes)
        if not sizes:
            raise ValueError("profile needs at least one cluster")
        if any(s < 1 for s in sizes):
            raise ValueError("cluster sizes must be >= 1")
        self.sizes = sizes
        self.m = len(sizes)
        self.n = sum(sizes)
        self._sorted = sorted(sizes)
        pref = [0]
        for s in self._sorted:
            pref.append(pref[-1] + s)
        self._prefix = pref

    def c(self, L: int) -> int:
        """Total size of clusters strictly smaller than L."""
        return self._prefix[bisect_left(self._sorted, L)]

    def d(self, L: int) -> int:
        """Number of clusters of size at least L."""
        return self.m - bisect_left(self._sorted, L)

    def max_size(self) -> int:
        return self._sorted[-1]

    def piece_starts(self) -> list[int]:
        """Left endpoints of the constancy pieces of C and D."""
        starts = [1]
        for s in sorted(set(self._sorted)):
            starts.append(s + 1)
        return starts

    def __repr__(self):
        return f"ClusterProfile({list(self.sizes)})"

    def __eq__(self, other):
        return isinstance(other, ClusterProfile) and self._sorted == other._sorted

    def __hash__(self):
        return hash(tuple(self._sorted))


def cd(profile: ClusterProfile, L: int) -> tuple[int, int]:
    if L < 1:
        raise ValueError("L must be >= 1")
    return profile.c(L), profile.d(L)


# --- objective terms -------------------------------------------------------
# These exact float expressions are part of the contract: tests compare
# them against brute-force scans bit for bit.

def bound1_value(n: int, C: int, L: int) -> float:
    """n + C(L)*log2(C(L)/L), with the C = 0 and C <= L cases clamped to n."""
    if C == 0:
        return float(n)
    return n + C * max(0.0, math.log2(C / L))


def bound2_value(C: int, D: int) -> float:
    """(C(L)+D(L)) * max(1, log2 D(L))."""
    if D <= 0:
        return float(C)
    return (C + D) * max(1.0, math.log2(D))


def median_bound_value(C: int, L: int) -> float:
    """(1/4)*C(L)*log2(C(L)/(2L)), clamped at zero."""
    if C == 0:
        return 0.0
    return 0.25 * C * max(0.0, math.log2(C / (2 * L)))


@dataclass
class ParameterSelection:
    """Clairvoyantly chosen parameters for both algorithm families."""

    L1: Optional[int]
    bound1: Optional[float]
    L2: int
    bound2: float
    L2_approx: int
    approx_objective: float


def _l1_candidates(profile: ClusterProfile):
    """Piece representatives for minimizing n + C*log2(C/L) over L >= 2.

    Within a piece C is constant and the term is non-increasing in L, so
    the piece minimum sits at the right end, or at L = C where the log
    clamps to zero; ties must resolve to the smallest L, matching a full
    scan.
    """
    smax = profile.max_size()
    starts = profile.piece_starts()
    for idx, lo in enumerate(starts):
        hi = starts[idx + 1] - 1 if idx + 1 < len(starts) else smax
        lo2, hi2 = max(lo, 2), min(hi, smax)
        if lo2 > hi2:
            continue
        C = profile.c(lo2)
        if C <= lo2:
            yield C, lo2
        else:
            yield C, hi2
            if C <= hi2:
                yield C, C


def select_L1(profile: ClusterProfile) -> Optional[tuple[int, float]]:
    """argmin over {L >= 2 : C(L) < n} of n + C(L)*log2(C(L)/L).

    Returns (L1, bound1) or None when no L >= 2 has C(L) < n (the
    all-singleton case).  Ties go to the smaller L.
    """
    if profile.max_size() < 2:
        return None
    n = profile.n
    best = None
    for C, L in _l1_candidates(profile):
        val = bound1_value(n, C, L)
        if best is None or val < best[1] or (val == best[1] and L < best[0]):
            best = (L, val)
    return best


def select_L2(profile: ClusterProfile) -> tuple[int, float]:
    """argmin over {L >= 1 : 2*C(L) < n} of (C+D)*max(1, log2 D).

    The objective is constant on pieces, so piece starts are scanned and
    ties resolve to the smaller L.  L = 1 always qualifies.
    """
    n = profile.n
    best = None
    for L in profile.piece_starts():
        C = profile.c(L)
        if 2 * C >= n:
            continue
        val = bound2_value(C, profile.d(L))
        if best is None or val < best[1]:
            best = (L, val)
    return best


def approx_L2(profile: ClusterProfile) -> int:
    """Linear-time approximation of select_L2 from size arithmetic only."""
    return approx_L2_scan(profile)[0]


def approx_L2_scan(profile: ClusterProfile) -> tuple[int, float, int]:
    """Recursive-halving scan behind approx_L2.

    Repeatedly selects the median of the surviving sizes and keeps the
    upper half, recording the minimum t_j of each call together with the
    exact C(t_j), D(t_j) maintained from running totals.  Returns
    (L2_approx, objective, size_comparisons); the objective is within a
    small constant factor (3x on the tested families) of select_L2's and
    the comparison count is linear in m.
    """
    sizes = profile.sizes
    n, m = profile.n, profile.m
    counter = [0]

    def cmp3(i, j):
        counter[0] += 1
        a, b = sizes[i], sizes[j]
        return Answer.LT if a < b else Answer.GT if a > b else Answer.EQ

    cur = list(range(m))
    tmin = cur[0]
    for tok in cur[1:]:
        if cmp3(tok, tmin) is Answer.LT:
            tmin = tok
    candidates = [(sizes[tmin], 0, m)]  # (t_1, C, D): nothing sits below the min

    dropped_sum = 0
    dropped_eq = 0  # dropped elements equal to the current pivot value
    v_prev = None
    while len(cur) > 1:
        r = len(cur)
        u = (r + 1) // 2
        v_tok = drive_with(select_gen(cur, r - u + 1), cmp3)
        v = sizes[v_tok]
        less, equal, greater = [], [], []
        for tok in cur:
            if tok == v_tok:
                equal.append(tok)
                continue
            a = cmp3(tok, v_tok)
            (less if a is Answer.LT else greater if a is Answer.GT else equal).append(tok)
        keep_eq = u - len(greater)
        kept = greater + equal[:keep_eq]
        shed = len(equal) - keep_eq
        dropped_sum += sum(sizes[t] for t in less) + v * shed
        dropped_eq = (dropped_eq if v == v_prev else 0) + shed
        v_prev = v
        C = dropped_sum - v * dropped_eq
        D = len(kept) + dropped_eq
        candidates.append((v, C, D))
        cur = kept

    best = None
    for t, C, D in candidates:
        if 2 * C >= n:
            continue
        val = bound2_value(C, D)
        if best is None or val < best[1]:
            best = (t, val)
    return best[0], best[1], counter[0]


def derive_reduced(profile: ClusterProfile) -> tuple[ClusterProfile, int, int]:
    """Delete maximum clusters until at most 3/4 of the vertices remain.

    Returns (reduced profile, its vertex count, size of the smallest
    deleted cluster).  Deletions are by decreasing size so the last one
    deleted is the smallest; the result is never empty because no single
    cluster can hold more than half of the remaining vertices at the
    time it becomes the only one left.
    """
    if profile.m < 2:
        raise ValueError("reduction needs at least two clusters")
    remaining = sorted(profile.sizes, reverse=True)
    n = profile.n
    n_cur = n
    last_deleted = None
    while 4 * n_cur > 3 * n:
        last_deleted = remaining.pop(0)
        n_cur -= last_deleted
    return ClusterProfile(remaining), n_cur, last_deleted


def lower_bound_median(profile: ClusterProfile) -> float:
    """(1/4) * min over {L >= 2 : C(L) < n} of C(L)*log2(C(L)/(2L)).

    Zero when the candidate set is empty or the log term clamps away.
    Rounds below this budget leave Median Recursion without a duplicate
    on some isomorphic instance.
    """
    if profile.max_size() < 2:
        return 0.0
    smax = profile.max_size()
    starts = profile.piece_starts()
    best = None
    for idx, lo in enumerate(starts):
        hi = starts[idx + 1] - 1 if idx + 1 < len(starts) else smax
        lo2, hi2 = max(lo, 2), min(hi, smax)
        if lo2 > hi2:
            continue
        C = profile.c(lo2)
        cands = [lo2] if C == 0 else [hi2]
        if C > 0:
            entry = (C + 1) // 2  # first L where C/(2L) <= 1
            if entry <= lo2:
                cands = [lo2]
            elif entry <= hi2:
                cands.append(entry)
        for L in cands:
            val = median_bound_value(C, L)
            if best is None or val < best:
                best = val
    return best if best is not None else 0.0


def lower_bound_block(profile: ClusterProfile) -> float:
    """(1/1000) * min(n, min over {L >= 1 : 2C < n} of (C+D)*max(1, log2 D))."""
    _, b2 = select_L2(profile)
    return 0.001 * min(float(profile.n), b2)


def lower_bound_combined(profile: ClusterProfile) -> float:
    """(1/1000) * min of the median-style and block-style budgets."""
    sel1 = select_L1(profile)
    term1 = sel1[1] if sel1 is not None else math.inf
    _, term2 = select_L2(profile)
    return 0.001 * min(term1, term2)


@dataclass
class LowerBounds:
    median: float
    block: float
    combined: float

    @classmethod
    def of(cls, profile: ClusterProfile) -> "LowerBounds":
        return cls(lower_bound_median(profile),
                   lower_bound_block(profile),
                   lower_bound_combined(profile))


def _g_min_objective(profile: ClusterProfile) -> float:
    """min over {L >= 1 : C(L) < n} of (C+D)*max(1, log2 D), no /2 filter."""
    n = profile.n
    best = None
    for L in profile.piece_starts():
        C = profile.c(L)
        if C >= n:
            continue
        val = bound2_value(C, profile.d(L))
        if best is None or val < best:
            best = val
    return best


def check_linear_subset(profile: ClusterProfile) -> bool:
    """Verify the reduction inequality tying G' budgets back to G.

    min(n'/8, (1/32)*min_{C'(L)<n'} (C'+D')*max(1,log2 D'))
        >= (1/1000)*min(n, min_{2C<n} (C+D)*max(1,log2 D))

    holds for every profile with at least two clusters; a False here
    means a bug, and the harness treats it as such.
    """
    reduced, n_prime, _ = derive_reduced(profile)
    lhs = min(n_prime / 8.0, _g_min_objective(reduced) / 32.0)
    return lhs >= lower_bound_block(profile)


def selection_for(profile: ClusterProfile) -> ParameterSelection:
    sel1 = select_L1(profile)
    L2, b2 = select_L2(profile)
    t, obj, _ = approx_L2_scan(profile)
    return ParameterSelection(
        L1=sel1[0] if sel1 else None,
        bound1=sel1[1] if sel1 else None,
        L2=L2, bound2=b2, L2_approx=t, approx_objective=obj,
    )


# --- profile file format: one decimal cluster size per line ---------------

def write_profile(path, profile: ClusterProfile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in profile.sizes:
            fh.write(f"{s}\n")


def read_profile(path) -> ClusterProfile:
    with open(path, encoding="utf-8") as fh:
        sizes = [int(line) for line in fh if line.strip()]
    return ClusterProfile(sizes)
