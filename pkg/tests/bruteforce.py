"""Independent reference implementations used to cross-check the package.

Everything here recomputes results from first principles with full scans
over every parameter value L in {1..n+1}, deliberately ignoring the
piecewise-constant structure the library exploits.  Float expressions
mirror the documented contract term by term so equality checks are
bit-for-bit, not approximate.
"""

import math


def brute_cd(sizes, L):
    return (sum(s for s in sizes if s < L),
            sum(1 for s in sizes if s >= L))


def _val1(n, C, L):
    if C == 0:
        return float(n)
    return n + C * max(0.0, math.log2(C / L))


def _val2(C, D):
    if D <= 0:
        return float(C)
    return (C + D) * max(1.0, math.log2(D))


def brute_select_L1(sizes):
    """Full scan of n + C*log2(C/L) over L in {2..n+1} with C(L) < n."""
    n = sum(sizes)
    best = None
    for L in range(2, n + 2):
        C, _ = brute_cd(sizes, L)
        if C >= n:
            continue
        val = _val1(n, C, L)
        if best is None or val < best[1]:
            best = (L, val)
    return best


def brute_select_L2(sizes):
    """Full scan of (C+D)*max(1, log2 D) over L in {1..n+1} with 2C < n."""
    n = sum(sizes)
    best = None
    for L in range(1, n + 2):
        C, D = brute_cd(sizes, L)
        if 2 * C >= n:
            continue
        val = _val2(C, D)
        if best is None or val < best[1]:
            best = (L, val)
    return best


def brute_lower_bound_median(sizes):
    n = sum(sizes)
    best = None
    for L in range(2, n + 2):
        C, _ = brute_cd(sizes, L)
        if C >= n:
            continue
        val = 0.0 if C == 0 else 0.25 * C * max(0.0, math.log2(C / (2 * L)))
        if best is None or val < best:
            best = val
    return best if best is not None else 0.0


def brute_lower_bound_block(sizes):
    sel = brute_select_L2(sizes)
    return 0.001 * min(float(sum(sizes)), sel[1])


def brute_lower_bound_combined(sizes):
    sel1 = brute_select_L1(sizes)
    term1 = sel1[1] if sel1 is not None else math.inf
    term2 = brute_select_L2(sizes)[1]
    return 0.001 * min(term1, term2)
