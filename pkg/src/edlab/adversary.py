"""Adaptive comparison adversaries over an implicit binary tree.

Elements carry bit-string positions (tree paths, root = empty string);
the tree itself is never materialized.  Answers are always derived from
the bit at which the two paths diverge after any movement, so
consistency with the final realized values is structural.  Realization
pushes each target cluster to a fresh leaf below its deepest member and
reads values off the lexicographic order of the terminal paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import Answer, CountingOracle, Instance, Outcome
from .profiles import ClusterProfile
from .setint import SIInstance, bipartite_profile_of, si_family
from .sortsel import drive_bounded

LT, EQ, GT = Answer.LT, Answer.EQ, Answer.GT


@dataclass
class AdversaryState:
    positions: list
    rounds_played: int
    transcript: list
    halted: Optional[tuple] = None  # set when the opponent stopped inside budget

    def depth_sum(self) -> int:
        return sum(len(p) for p in self.positions)


class TreeAdversary:
    """Element-distinctness adversary: answers LT/GT only, never EQ.

    Rules, with p(x), p(y) the current paths: equal paths split (x left,
    y right, answer LT); when one path is a proper prefix of the other,
    the shallower element steps to the sibling of the deeper one's next
    move, i.e. appends the complement of the deeper path's next bit;
    already-diverged pairs are answered in place.  At most two elements
    move per answer, each by one step.
    """

    def __init__(self, n: int):
        self.n = n
        self.positions = [""] * n

    def answer(self, x: int, y: int) -> Answer:
        pos = self.positions
        px, py = pos[x], pos[y]
        if px == py:
            pos[x] = px + "0"
            pos[y] = py + "1"
            return LT
        if len(px) < len(py) and py.startswith(px):
            nxt = py[len(px)]
            px = px + ("1" if nxt == "0" else "0")
            pos[x] = px
        elif len(py) < len(px) and px.startswith(py):
            nxt = px[len(py)]
            py = py + ("1" if nxt == "0" else "0")
            pos[y] = py
        d = 0
        while px[d] == py[d]:
            d += 1
        return LT if px[d] < py[d] else GT


def play_game(opponent_factory: Callable[[int], object], n: int,
              rounds: int) -> AdversaryState:
    """Drive an algorithm generator against the tree adversary.

    Stops after `rounds` comparisons or when the opponent halts.  A
    Duplicate claim is impossible (no EQ is ever answered) and raises; a
    Distinct claim is recorded in .halted and is an opponent failure,
    since the realization will contain duplicates.
    """
    adv = TreeAdversary(n)
    oracle = CountingOracle(adversary=adv.answer, n=n)
    result, finished = drive_bounded(opponent_factory(n), oracle, rounds)
    state = AdversaryState(adv.positions, oracle.count, oracle.transcript)
    if finished:
        if result[0] is Outcome.DUPLICATE:
            raise RuntimeError("opponent claims a duplicate but no EQ was answered")
        state.halted = result
    return state


def few_deep_index(state: AdversaryState, n: int) -> int:
    """Smallest i in [floor(loglog(n)/2), floor(loglog n)] with
    fewer than n/2^i elements at depth >= 2^i."""
    lln = math.log2(math.log2(n))
    lo, hi = int(math.floor(lln / 2)), int(math.floor(lln))
    depths = sorted(len(p) for p in state.positions)
    from bisect import bisect_left
    for i in range(lo, hi + 1):
        deep = len(depths) - bisect_left(depths, 2 ** i)
        if deep < n / 2 ** i:
            return i
    raise RuntimeError("no few-deep index in range; depth budget violated")


# --- chain packing over a position trie -----------------------------------

def _build_trie(positions, indices):
    root = {"elems": []}
    for idx in indices:
        node = root
        for b in positions[idx]:
            node = node.setdefault(b, {"elems": []})
        node["elems"].append(idx)
    return root


def _extract_chain(root, take: int):
    """Remove and return `take` elements from the max-count root-to-leaf
    chain (shallowest first, ties by index; '0'-child preferred on equal
    subtree counts).  None when no chain holds that many."""
    order = []
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        for b in ("0", "1"):
            if b in node:
                stack.append(node[b])
    score = {}
    for node in reversed(order):
        best_child = 0
        for b in ("0", "1"):
            if b in node:
                best_child = max(best_child, score[id(node[b])])
        score[id(node)] = len(node["elems"]) + best_child
    if score[id(root)] < take:
        return None
    chain = [root]
    node = root
    while "0" in node or "1" in node:
        c0, c1 = node.get("0"), node.get("1")
        if c1 is None or (c0 is not None and score[id(c0)] >= score[id(c1)]):
            node = c0
        else:
            node = c1
        chain.append(node)
    picked = []
    for nd in chain:
        for idx in sorted(nd["elems"]):
            picked.append(idx)
            if len(picked) == take:
                break
        if len(picked) == take:
            break
    pickset = set(picked)
    for nd in chain:
        nd["elems"] = [e for e in nd["elems"] if e not in pickset]
    return picked


def pack_isomorphic(state: AdversaryState, profile: ClusterProfile):
    """Assign elements to target clusters, each cluster on one chain.

    Clusters are processed in decreasing size through max-count chain
    extraction.  Once only singletons remain they are assigned directly,
    shallowest position first (equivalent for realization purposes: a
    single element is trivially a chain).  Returns a cluster list
    aligned with profile.sizes.
    """
    n = len(state.positions)
    if profile.n != n:
        raise ValueError("profile does not cover all elements")
    order = sorted(range(profile.m), key=lambda c: -profile.sizes[c])
    clusters: list = [None] * profile.m
    used = set()
    root = _build_trie(state.positions, range(n))
    for pos_i, cid in enumerate(order):
        size = profile.sizes[cid]
        if size == 1:
            rest = sorted((i for i in range(n) if i not in used),
                          key=lambda i: (len(state.positions[i]),
                                         state.positions[i], i))
            for sid, elem in zip(order[pos_i:], rest):
                clusters[sid] = [elem]
            break
        picked = _extract_chain(root, size)
        if picked is None:
            raise RuntimeError("no chain can hold this cluster; "
                               "packing budget was violated")
        clusters[cid] = picked
        used.update(picked)
    return clusters


def pack_separation(state: AdversaryState, L: int):
    """Greedy chains of exactly L while any chain holds L elements,
    then singletons.  Returns (big_clusters, singleton_clusters); the
    concatenation is exactly what pack_isomorphic produces for the
    profile [L]*q + [1]*(n - q*L)."""
    n = len(state.positions)
    root = _build_trie(state.positions, range(n))
    bigs = []
    while True:
        picked = _extract_chain(root, L)
        if picked is None:
            break
        bigs.append(picked)
    used = {i for c in bigs for i in c}
    singles = [[i] for i in sorted((i for i in range(n) if i not in used),
                                   key=lambda i: (len(state.positions[i]),
                                                  state.positions[i], i))]
    return bigs, singles


def reconstruct(state: AdversaryState, profile: ClusterProfile):
    """Whole/split realization against the reduced profile.

    Forms the reduced profile's clusters in decreasing size, anchoring
    each at the shallowest occupied non-root node and topping up from
    root elements; once the reduced clusters (or the non-root nodes) are
    exhausted, every remaining cluster of the full profile is formed
    from root elements.  Returns (clusters aligned with profile.sizes,
    fallback flag: True when non-root nodes ran out early).
    """
    n = len(state.positions)
    if profile.n != n:
        raise ValueError("profile does not cover all elements")
    if profile.m < 2:
        raise ValueError("reduction needs at least two clusters")
    sizes = profile.sizes
    order_desc = sorted(range(profile.m), key=lambda c: -sizes[c])
    n_cur, k = n, 0
    while 4 * n_cur > 3 * n:
        n_cur -= sizes[order_desc[k]]
        k += 1
    gprime_ids = order_desc[k:]

    nodes: dict = {}
    roots = []
    for idx, p in enumerate(state.positions):
        if p:
            nodes.setdefault(p, []).append(idx)
        else:
            roots.append(idx)
    node_order = sorted(nodes, key=lambda p: (len(p), p))
    clusters: list = [None] * profile.m
    fallback = False
    ni = 0
    for cid in gprime_ids:
        while ni < len(node_order) and not nodes[node_order[ni]]:
            ni += 1
        if ni >= len(node_order):
            fallback = True
            break
        avail = nodes[node_order[ni]]
        t = min(sizes[cid], len(avail))
        take = avail[:t]
        nodes[node_order[ni]] = avail[t:]
        need = sizes[cid] - t
        if need > len(roots):
            raise RuntimeError("root pool exhausted while topping up")
        take = take + roots[:need]
        roots = roots[need:]
        clusters[cid] = take
    leftovers = [cid for cid in range(profile.m) if clusters[cid] is None]
    leftovers.sort(key=lambda c: -sizes[c])
    for cid in leftovers:
        s = sizes[cid]
        if s > len(roots):
            raise RuntimeError("root pool exhausted while forming clusters")
        clusters[cid] = roots[:s]
        roots = roots[s:]
    return clusters, fallback


def realize(state: AdversaryState, clusters) -> Instance:
    """Move each cluster to a fresh leaf and read off values.

    Terminal key = deepest member's path + zero padding + '1' + fixed-
    width cluster counter; all keys share one length, so they are
    pairwise distinct and non-prefix.  Values are lexicographic key
    ranks, hence equal within a cluster and consistent with every
    answered divergence.
    """
    n = len(state.positions)
    covered = sorted(i for c in clusters for i in c)
    if covered != list(range(n)):
        raise ValueError("assignment must cover every element exactly once")
    anchors = []
    for c in clusters:
        anchor = max((state.positions[i] for i in c), key=len)
        for i in c:
            if not anchor.startswith(state.positions[i]):
                raise ValueError("cluster is not a chain in the tree")
        anchors.append(anchor)
    W = max(1, (len(clusters) - 1).bit_length())
    K = max(len(a) for a in anchors) + 1 + W
    keys = [a + "0" * (K - len(a) - 1 - W) + "1" + format(cid, f"0{W}b")
            for cid, a in enumerate(anchors)]
    rank = {kk: r for r, kk in enumerate(sorted(keys))}
    values = [0] * n
    for cid, c in enumerate(clusters):
        for i in c:
            values[i] = rank[keys[cid]]
    return Instance(tuple(values))


@dataclass
class GameReport:
    state: AdversaryState
    instance: Instance
    profile: ClusterProfile
    params: dict
    consistent: bool


def order_game(n: int):
    """Adversarial known-rank instance for the prefix-doubling opponent.

    Plays floor(n*log2(n)/8) rounds, then realizes a permutation whose
    single duplicate pair sits on the two highest-index untouched
    elements.  The doubling schedule reaches those indices only inside
    its final block, after re-sorting every shorter prefix, so
    rediscovery on the realized input costs the whole cascade while
    rank-aware selection stays linear.

    Returns (instance, k, state) with the pair at sorted ranks k, k+1.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    from .algorithms import doubling_gen
    state = play_game(doubling_gen, n, int(n * math.log2(n) / 8))
    roots = [i for i in range(n) if state.positions[i] == ""]
    if len(roots) < 2:
        raise RuntimeError("no two untouched elements left to pair up")
    pair = roots[-2:]
    rest = [[i] for i in range(n) if i != pair[0] and i != pair[1]]
    inst = realize(state, rest + [pair])
    v = inst.values[pair[0]]
    k = sum(1 for u in inst.values if u < v) + 1
    return inst, k, state


# --- set-intersection adversary --------------------------------------------

class SIAdversary:
    """B-elements walk down the tree; A-elements sit at fixed leaves.

    The big A-cluster occupies the leftmost leaf (smallest value); the
    type-1 cluster j sits at one leaf below the j-th depth-l node.  Leaf
    depth exceeds the round budget, so a B-element can never reach or
    pass an A-leaf; same-cluster A pairs answer EQ (true equalities,
    not witnesses), everything else answers by divergence with only
    B-elements moving.
    """

    def __init__(self, n: int):
        s = round(n ** (1 / 3))
        while s ** 3 < n:
            s += 1
        if s ** 3 != n or s < 2 or s & (s - 1):
            raise ValueError("n must be 2**(3t) for integer t >= 1")
        self.n = n
        self.s = s
        self.l = round(math.log2(n)) // 3
        self.rounds_budget = n * self.l // 2
        self.depth_leaf = self.rounds_budget + self.l + 2
        self.big = n - s * (s + 1) // 2
        self.cluster_leaf = {}
        self.a_cluster = []
        for _ in range(self.big):
            self.a_cluster.append(0)
        self.cluster_leaf[0] = "0" * self.depth_leaf
        for j in range(1, s + 1):
            u = format(j - 1, f"0{self.l}b")
            self.cluster_leaf[j] = u + "1" + "0" * (self.depth_leaf - self.l - 1)
            self.a_cluster.extend([j] * j)
        assert len(self.a_cluster) == n
        self.bpos = [""] * n  # B index offset by n

    def _path(self, idx: int) -> str:
        if idx < self.n:
            return self.cluster_leaf[self.a_cluster[idx]]
        return self.bpos[idx - self.n]

    def answer(self, x: int, y: int) -> Answer:
        n = self.n
        if x < n and y < n:
            if self.a_cluster[x] == self.a_cluster[y]:
                return EQ
            px, py = self._path(x), self._path(y)
        else:
            px, py = self._path(x), self._path(y)
            if px == py:  # both must be B: A-leaves are deeper than B can go
                self.bpos[x - n] = px + "0"
                self.bpos[y - n] = py + "1"
                return LT
            if len(px) < len(py) and py.startswith(px):
                nxt = py[len(px)]
                px = px + ("1" if nxt == "0" else "0")
                self.bpos[x - n] = px
            elif len(py) < len(px) and px.startswith(py):
                nxt = px[len(py)]
                py = py + ("1" if nxt == "0" else "0")
                self.bpos[y - n] = py
        d = 0
        while px[d] == py[d]:
            d += 1
        return LT if px[d] < py[d] else GT


@dataclass
class SIGameReport:
    instance: SIInstance
    j: int
    rounds_played: int
    transcript: list
    opponent_finished: bool
    opponent_result: Optional[tuple]


def si_adversary_game(opponent_factory: Callable[[int], object],
                      n: int) -> SIGameReport:
    """Run the bipartite game and realize the hard instance.

    After floor(n*l/2) rounds some B-element x still sits at depth <= l
    (each round adds at most 2 depth in total); the shallowest such x is
    merged into the type-1 cluster below it: x was never answered
    against that cluster, otherwise x would have diverged away from its
    subtree.  All other B-elements become fresh singletons; the result
    realizes si_family(n, j).
    """
    adv = SIAdversary(n)
    oracle = CountingOracle(adversary=adv.answer, n=2 * n)
    result, finished = drive_bounded(opponent_factory(n), oracle,
                                     adv.rounds_budget)
    cands = [(len(p), i) for i, p in enumerate(adv.bpos) if len(p) <= adv.l]
    if not cands:
        raise RuntimeError("every B-element is deep; depth budget violated")
    _, xb = min(cands)
    px = adv.bpos[xb]
    j = int((px + "0" * adv.l)[:adv.l], 2) + 1

    W = max(1, (n - 1).bit_length())
    K = adv.depth_leaf + 1 + W
    b_keys = [None] * n
    b_keys[xb] = adv.cluster_leaf[j]
    ctr = 0
    for i, p in enumerate(adv.bpos):
        if i == xb:
            continue
        b_keys[i] = p + "1" + "0" * (K - len(p) - 2 - W) + format(ctr, f"0{W}b")
        ctr += 1
    a_keys = [adv.cluster_leaf[c] for c in adv.a_cluster]
    rank = {kk: r for r, kk in enumerate(sorted(set(a_keys + b_keys)))}
    inst = SIInstance(tuple(rank[kk] for kk in a_keys),
                      tuple(rank[kk] for kk in b_keys))
    if not bipartite_profile_of(inst) == si_family(n, j):
        raise RuntimeError("realized instance is not in the target family")
    return SIGameReport(inst, j, oracle.count, oracle.transcript,
                        finished, result if finished else None)
