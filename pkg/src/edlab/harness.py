"""Experiment layer: random profile families, sweeps, duels, CSV rows.

Every command returns (header, rows, violations); the CLI renders rows
as comma-separated CSV with a header line and LF terminators, and exits
non-zero listing the first violation.  All randomness flows from one
seed (overridable via the EDLAB_SEED environment variable), so every
row is reproducible from the configuration alone.
"""

from __future__ import annotations

import math
import os
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .core import (CountingOracle, Instance, Outcome, realize_instance,
                   replay_transcript, verify_graph, write_instance)
from .profiles import (ClusterProfile, LowerBounds, _g_min_objective,
                       approx_L2_scan, cd, check_linear_subset,
                       derive_reduced, select_L1, select_L2, selection_for,
                       write_profile)
from .algorithms import (block_sorting, block_sorting_gen, clairvoyant,
                         doubling_gen, median_recursion,
                         median_recursion_gen, oblivious, oblivious_gen,
                         order_doubling, preprocess, run_preprocessed)
from .adversary import (few_deep_index, pack_separation, play_game, realize,
                        reconstruct)
from .setint import read_si_instance, si_clairvoyant, si_doubling

RUN_ALGOS = ("block", "median", "clairvoyant", "oblivious", "preprocessed",
             "doubling")
DUEL_ALGOS = ("block", "median", "oblivious", "doubling")


def effective_seed(seed: int) -> int:
    env = os.environ.get("EDLAB_SEED")
    return int(env) if env else seed


def derive_seed(seed: int, *parts: int) -> int:
    """Stable per-row seed; plain arithmetic so it survives interpreters."""
    h = seed & 0xFFFFFFFF
    for p in parts:
        h = (h * 1000003 + p + 0x9E3779B9) & 0xFFFFFFFF
    return h


@dataclass
class ExperimentConfig:
    experiment: str
    ns: tuple = ()
    profile_path: Optional[str] = None
    algos: tuple = ()
    reps: int = 1
    seed: int = 0
    out: Optional[str] = None
    threads: int = 1

    def seeded(self) -> "ExperimentConfig":
        self.seed = effective_seed(self.seed)
        return self


# --- random profile families ------------------------------------------------
#
# Four size distributions.  Small cluster sizes dominate mode 0, one
# cluster dominates mode 1, mode 2 is flat, mode 3 is a uniform random
# composition; together they exercise both the C-heavy and the D-heavy
# regimes of the bounds.

def random_profile(rng: random.Random, n: int, mode: int = 0) -> list:
    if mode == 0:  # truncated power law
        sizes, left = [], n
        while left > 0:
            s = min(left, max(1, int(rng.paretovariate(1.2))))
            sizes.append(s)
            left -= s
    elif mode == 1:  # one clique plus dust
        big = rng.randrange(2, n + 1)
        sizes = [big] + [1] * (n - big)
    elif mode == 2:  # equal blocks
        b = rng.choice([2, 3, 4, 8, 16])
        sizes = [b] * (n // b)
        if n % b:
            sizes.append(n % b)
    else:  # uniform composition
        sizes, left = [], n
        while left > 0:
            s = rng.randrange(1, left + 1)
            sizes.append(s)
            left -= s
    if max(sizes) < 2:  # keep at least one duplicate pair
        sizes[0] += sizes.pop()
    return sizes


def random_multicluster_profile(rng: random.Random, n: int,
                                mode: int = 0) -> list:
    """Same families, but never a single cluster (reduction needs two)."""
    sizes = random_profile(rng, n, mode)
    if len(sizes) < 2:
        sizes = [n - n // 2, n // 2]
    return sizes


def power_law_sizes(rng: random.Random, m: int, n: int) -> list:
    """Exactly m power-law sizes adjusted to sum to n."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    sizes = [max(1, int(rng.paretovariate(1.2))) for _ in range(m)]
    total = sum(sizes)
    sizes = [max(1, s * n // total) for s in sizes]
    diff = n - sum(sizes)
    i = 0
    while diff:
        if diff > 0:
            sizes[i % m] += 1
            diff -= 1
        elif sizes[i % m] > 1:
            sizes[i % m] -= 1
            diff += 1
        i += 1
    return sizes


def profile_of_instance(inst: Instance) -> ClusterProfile:
    return ClusterProfile(sorted(Counter(inst.values).values(), reverse=True))


# --- single-run dispatch ------------------------------------------------

def default_block_k(profile: ClusterProfile) -> int:
    L2, _ = select_L2(profile)
    return 2 * profile.d(L2)


def default_median_L(profile: ClusterProfile) -> int:
    sel1 = select_L1(profile)
    return sel1[0] if sel1 is not None else 2


def run_algorithm(algo: str, inst: Instance,
                  profile: Optional[ClusterProfile] = None,
                  k: Optional[int] = None, L: Optional[int] = None):
    """Run one algorithm on one instance; returns (oracle, RunReport)."""
    n = len(inst)
    oracle = CountingOracle(inst)
    prof = profile or profile_of_instance(inst)
    if algo == "block":
        return oracle, block_sorting(oracle, range(n),
                                     k if k is not None else default_block_k(prof))
    if algo == "median":
        return oracle, median_recursion(oracle, range(n),
                                        L if L is not None else default_median_L(prof))
    if algo == "clairvoyant":
        return oracle, clairvoyant(oracle, inst, prof)
    if algo == "oblivious":
        return oracle, oblivious(oracle, n)
    if algo == "preprocessed":
        return oracle, run_preprocessed(preprocess(prof), oracle, inst)
    if algo == "doubling":
        return oracle, order_doubling(oracle, n)
    raise ValueError(f"unknown algorithm {algo!r}")


def check_report(inst: Instance, rep) -> Optional[str]:
    """Ground-truth check of a RunReport against the open instance."""
    if rep.outcome is Outcome.DUPLICATE:
        x, y = rep.witness
        if x == y or inst.values[x] != inst.values[y]:
            return f"witness ({x},{y}) is not an equal pair"
    elif rep.outcome is Outcome.DISTINCT:
        if len(set(inst.values)) != len(inst.values):
            return "distinct verdict on an instance with duplicates"
    return None


# --- gen ------------------------------------------------------------------

def cmd_gen(out_dir: str, clique_n: Optional[int] = None,
            random_m: Optional[int] = None, random_n: Optional[int] = None,
            seed: int = 0):
    seed = effective_seed(seed)
    os.makedirs(out_dir, exist_ok=True)
    if clique_n is not None:
        prof = ClusterProfile([clique_n])
        name = str(clique_n)
    else:
        rng = random.Random(seed)
        prof = ClusterProfile(power_law_sizes(rng, random_m, random_n))
        name = f"random-m{random_m}-n{random_n}-s{seed}"
    inst = realize_instance(prof, seed=seed)
    violations = []
    if not verify_graph(inst, prof):
        violations.append("generated instance does not realize its profile")
    ppath = os.path.join(out_dir, name)
    ipath = ppath + ".inst"
    write_profile(ppath, prof)
    write_instance(ipath, inst)
    return [ppath, ipath], violations


# --- run --------------------------------------------------------------

RUN_HEADER = ["algo", "n", "outcome", "comparisons", "witness_x", "witness_y"]


def cmd_run(algo: str, inst: Instance,
            profile: Optional[ClusterProfile] = None,
            k: Optional[int] = None, L: Optional[int] = None):
    _, rep = run_algorithm(algo, inst, profile, k=k, L=L)
    wx, wy = rep.witness if rep.witness is not None else ("", "")
    row = [algo, len(inst), rep.outcome.value, rep.comparisons, wx, wy]
    err = check_report(inst, rep)
    return RUN_HEADER, [row], [err] if err else []


# --- duel -------------------------------------------------------------

DUEL_HEADER = ["n", "rounds", "algo", "survived", "consistency",
               "clairvoyant_comparisons"]


def reconstruction_budget(profile: ClusterProfile) -> int:
    """Round cap under which whole/split reconstruction is guaranteed."""
    reduced, n_prime, _ = derive_reduced(profile)
    return int(min(n_prime / 8.0, _g_min_objective(reduced) / 32.0))


def duel_opponent(algo: str, profile: ClusterProfile):
    if algo == "oblivious":
        return oblivious_gen
    if algo == "doubling":
        return doubling_gen
    if algo == "block":
        k = default_block_k(profile)
        return lambda n: block_sorting_gen(range(n), k)
    if algo == "median":
        L = default_median_L(profile)
        return lambda n: median_recursion_gen(range(n), L)
    raise ValueError(f"no adversary opponent named {algo!r}")


def cmd_duel(algo: str, n: int, profile: ClusterProfile,
             rounds: Optional[int] = None):
    if profile.n != n:
        raise ValueError(f"profile covers {profile.n} elements, not {n}")
    budget = rounds if rounds is not None else reconstruction_budget(profile)
    state = play_game(duel_opponent(algo, profile), n, budget)
    survived = state.halted is None  # opponent still running at the cap
    violations = []
    consistency: object = False
    cv: object = ""
    try:
        clusters, _ = reconstruct(state, profile)
        inst = realize(state, clusters)
        consistency = (replay_transcript(inst, state.transcript)
                       and verify_graph(inst, profile))
        cv = clairvoyant(CountingOracle(inst), inst, profile).comparisons
        if not consistency:
            # a realized instance must always replay; this is a soundness bug
            violations.append(
                "realized instance inconsistent with transcript/profile")
    except (RuntimeError, ValueError) as exc:
        # reconstruction is only guaranteed up to the default budget; a
        # failure past it is data (consistency stays False), not a violation
        if budget <= reconstruction_budget(profile):
            violations.append(
                f"reconstruction failed inside the guaranteed budget: {exc}")
    row = [n, state.rounds_played, algo, survived, consistency, cv]
    return DUEL_HEADER, [row], violations


# --- sweeps ------------------------------------------------------------

def _fan_out(worker, tasks, threads: int):
    if threads <= 1:
        return [worker(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(worker, tasks))


COMPETITIVE_HEADER = ["n", "profile_id", "clairvoyant_cmp", "oblivious_cmp",
                      "ratio", "ratio_over_llog"]


def cmd_sweep_competitive(cfg: ExperimentConfig):
    cfg.seeded()
    tasks = [(n, pid) for n in cfg.ns for pid in range(cfg.reps)]

    def one(task):
        n, pid = task
        rng = random.Random(derive_seed(cfg.seed, n, pid))
        prof = ClusterProfile(random_profile(rng, n, pid % 4))
        inst = realize_instance(prof, seed=derive_seed(cfg.seed, n, pid, 1))
        r_cv = clairvoyant(CountingOracle(inst), inst, prof)
        r_ob = oblivious(CountingOracle(inst), n)
        bad = check_report(inst, r_cv) or check_report(inst, r_ob)
        for rep, name in ((r_cv, "clairvoyant"), (r_ob, "oblivious")):
            if rep.outcome is not Outcome.DUPLICATE:
                bad = bad or f"{name} missed the duplicate on n={n} id={pid}"
        ratio = r_ob.comparisons / max(1, r_cv.comparisons)
        lln = math.log2(math.log2(n))
        row = [n, pid, r_cv.comparisons, r_ob.comparisons,
               f"{ratio:.4f}", f"{ratio / lln:.4f}"]
        return row, bad

    results = _fan_out(one, tasks, cfg.threads)
    rows = [r for r, _ in results]
    violations = [b for _, b in results if b]
    return COMPETITIVE_HEADER, rows, violations


SEPARATION_HEADER = ["n", "rounds_survived", "few_deep_i", "L", "c_bound_ok",
                     "median_cmp", "ratio", "consistent"]


def separation_row(n: int):
    """One adversarial round-budget reproduction at size n.

    The oblivious schedule plays against the tree adversary for
    floor(n*log2(log2 n)/8) rounds; the final positions are packed into
    chains of length L = n/2^(2^(i-1)) for the few-deep index i, and the
    packed clusters are realized in that order, so median recursion sees
    the realized instance with each cluster's elements contiguous.
    """
    lln = math.log2(math.log2(n))
    budget = int(n * lln / 8)
    state = play_game(oblivious_gen, n, budget)
    survived = state.halted is None
    i = few_deep_index(state, n)
    L = n // 2 ** (2 ** (i - 1))
    bigs, singles = pack_separation(state, L)
    q = len(bigs)
    prof = ClusterProfile([L] * q + [1] * (n - q * L))
    C = prof.c(L)
    # exact integer form of C <= n / 2^(i-3)
    bound_ok = C * 2 ** max(0, i - 3) <= n * 2 ** max(0, 3 - i)
    inst = realize(state, bigs + singles)
    items = [e for c in bigs + singles for e in c]
    rep = median_recursion(CountingOracle(inst), items, L)
    consistent = (replay_transcript(inst, state.transcript)
                  and verify_graph(inst, prof))
    ratio = state.rounds_played / max(1, rep.comparisons)
    row = [n, state.rounds_played, i, L, bound_ok, rep.comparisons,
           f"{ratio:.4f}", consistent]
    bad = None
    if not survived:
        bad = f"opponent finished inside the round budget at n={n}"
    elif rep.outcome is not Outcome.DUPLICATE:
        bad = f"median recursion failed on the realized instance at n={n}"
    elif not bound_ok:
        bad = f"C(L) exceeded n/2^(i-3) at n={n}"
    elif not consistent:
        bad = f"realized instance inconsistent at n={n}"
    return row, bad, ratio


def cmd_sweep_separation(cfg: ExperimentConfig):
    cfg.seeded()  # deterministic anyway; kept for config completeness
    results = _fan_out(separation_row, list(cfg.ns), cfg.threads)
    rows = [r for r, _, _ in results]
    violations = [b for _, b, _ in results if b]
    ratios = [x for _, _, x in results]
    if list(cfg.ns) == sorted(cfg.ns) and len(ratios) > 1:
        if any(b < a for a, b in zip(ratios, ratios[1:])):
            violations.append("separation ratio not non-decreasing in n")
    return SEPARATION_HEADER, rows, violations


CHECK_HEADER = ["profile_id", "n", "m", "linear_subset_ok", "approx_factor",
                "block_iters_ok"]


def bounds_row(args):
    pid, seed, nmax = args
    rng = random.Random(derive_seed(seed, pid))
    n = rng.randrange(8, nmax + 1)
    prof = ClusterProfile(random_multicluster_profile(rng, n, pid % 4))
    linear_ok = check_linear_subset(prof)
    _, obj, _ = approx_L2_scan(prof)
    _, opt = select_L2(prof)
    factor = obj / opt if opt > 0 else 1.0
    L2, _ = select_L2(prof)
    C2, D2 = cd(prof, L2)
    block_ok: object = ""
    if 2 * C2 < n and D2 > 0:
        inst = realize_instance(prof, seed=derive_seed(seed, pid, 1))
        rep = block_sorting(CountingOracle(inst), range(n), 2 * D2)
        block_ok = (rep.outcome is Outcome.DUPLICATE
                    and rep.stats["iterations"] <= 1 + math.ceil(C2 / D2))
    row = [pid, n, prof.m, linear_ok, f"{factor:.4f}", block_ok]
    bad = None
    if not linear_ok:
        bad = f"linear-subset inequality failed on profile {pid}"
    elif factor > 3.0:
        bad = f"approximation factor {factor:.3f} > 3 on profile {pid}"
    elif block_ok is False:
        bad = f"block iteration bound violated on profile {pid}"
    return row, bad


def cmd_check_bounds(cfg: ExperimentConfig):
    cfg.seeded()
    nmax = max(cfg.ns) if cfg.ns else 1024
    tasks = [(pid, cfg.seed, nmax) for pid in range(cfg.reps)]
    results = _fan_out(bounds_row, tasks, cfg.threads)
    rows = [r for r, _ in results]
    violations = [b for _, b in results if b]
    return CHECK_HEADER, rows, violations


# --- set intersection ------------------------------------------------------

SI_HEADER = ["algo", "na", "nb", "outcome", "comparisons", "witness_a",
             "witness_b"]


def cmd_si_run(algo: str, path, i: Optional[int] = None,
               n: Optional[int] = None):
    inst = read_si_instance(path)
    oracle = inst.oracle()
    if algo == "doubling":
        rep = si_doubling(oracle, inst.na, inst.nb)
    elif algo == "clairvoyant":
        if i is None or n is None:
            raise ValueError("clairvoyant needs --i and --n")
        rep = si_clairvoyant(oracle, inst.na, inst.nb, i, n)
    else:
        raise ValueError(f"unknown si algorithm {algo!r}")
    # witnesses live in the combined index space: A first, then B
    wa, wb = rep.witness if rep.witness is not None else ("", "")
    row = [algo, inst.na, inst.nb, rep.outcome.value, rep.comparisons, wa, wb]
    violations = []
    if rep.outcome is Outcome.DUPLICATE:
        if inst.a_values[wa] != inst.b_values[wb - inst.na]:
            violations.append(f"witness ({wa},{wb}) is not a crossing pair")
    elif rep.outcome is Outcome.DISTINCT:
        if set(inst.a_values) & set(inst.b_values):
            violations.append("disjoint verdict on intersecting inputs")
    return SI_HEADER, [row], violations


# --- profile inspection --------------------------------------------------

STATS_HEADER = ["n", "m", "max_size", "L1", "bound1", "L2", "bound2",
                "L2_approx", "approx_objective"]
BOUNDS_HEADER = ["M_median", "M_block", "M_combined"]


def cmd_profile_stats(profile: ClusterProfile):
    sel = selection_for(profile)
    row = [profile.n, profile.m, profile.max_size(),
           sel.L1 if sel.L1 is not None else "",
           f"{sel.bound1:.3f}" if sel.bound1 is not None else "",
           sel.L2, f"{sel.bound2:.3f}", sel.L2_approx,
           f"{sel.approx_objective:.3f}"]
    return STATS_HEADER, [row], []


def cmd_profile_bounds(profile: ClusterProfile):
    lb = LowerBounds.of(profile)
    row = [f"{lb.median:.6f}", f"{lb.block:.6f}", f"{lb.combined:.6f}"]
    return BOUNDS_HEADER, [row], []
