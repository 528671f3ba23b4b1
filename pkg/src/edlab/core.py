"""Instances, the comparison-counting oracle, and transcript plumbing.

Every algorithm in this package works in the comparison model: inputs are
lists of opaque values that may only be inspected through three-way
comparisons.  Values are realized as integer ranks, but only realization
and verification code is allowed to look at them; algorithms receive an
oracle plus index lists and nothing else.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence


class Answer(Enum):
    """Outcome of a single three-way comparison."""

    LT = "<"
    EQ = "="
    GT = ">"


class Outcome(Enum):
    """Terminal verdict of a run."""

    DUPLICATE = "duplicate"
    DISTINCT = "distinct"
    GAVE_UP = "gave_up"


@dataclass(frozen=True)
class Instance:
    """A list of opaque ordered values, stored as integer ranks.

    Algorithm code must not read ``values`` directly; it goes through a
    CountingOracle.  Realization, verification and replay helpers are the
    only intended readers.
    """

    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class RunReport:
    outcome: Outcome
    witness: Optional[tuple[int, int]]
    comparisons: int
    branch_costs: dict[str, int] = field(default_factory=dict)
    stats: dict = field(default_factory=dict)


Transcript = list  # list of (x, y, Answer) triples


class CountingOracle:
    """Gateway for comparisons: counts them and records a transcript.

    Two modes: backed by a realized Instance (answers come from value
    ranks) or backed by an adversary hook (answers come from a callable;
    no instance exists until the adversary commits to one).
    """

    def __init__(self, instance: Optional[Instance] = None,
                 adversary: Optional[Callable[[int, int], Answer]] = None,
                 n: Optional[int] = None):
        if (instance is None) == (adversary is None):
            raise ValueError("exactly one of instance/adversary required")
        self.instance = instance
        self.adversary = adversary
        self.n = len(instance) if instance is not None else n
        if self.n is None:
            raise ValueError("adversary mode needs an explicit n")
        self.count = 0
        self.transcript: Transcript = []

    def compare(self, x: int, y: int) -> Answer:
        if x == y:
            raise ValueError(f"comparison of an index with itself: {x}")
        if not (0 <= x < self.n and 0 <= y < self.n):
            raise ValueError(f"index out of range: ({x}, {y}) with n={self.n}")
        if self.adversary is not None:
            ans = self.adversary(x, y)
        else:
            vx = self.instance.values[x]
            vy = self.instance.values[y]
            ans = Answer.LT if vx < vy else Answer.GT if vx > vy else Answer.EQ
        self.count += 1
        self.transcript.append((x, y, ans))
        return ans


def compare(oracle: CountingOracle, x: int, y: int) -> Answer:
    """Free-function form of oracle.compare, for symmetry with the ops."""
    return oracle.compare(x, y)


def realize_instance(profile, seed: int) -> Instance:
    """Build an instance whose duplicate structure matches ``profile``.

    Each cluster receives one of m distinct ranks; both the rank
    assignment and the positions are seed-determined permutations, so the
    same (profile, seed) pair always yields the same instance.
    """
    sizes = tuple(profile.sizes)
    rng = random.Random(seed)
    ranks = list(range(len(sizes)))
    rng.shuffle(ranks)
    vals = []
    for ci, s in enumerate(sizes):
        vals.extend([ranks[ci]] * s)
    rng.shuffle(vals)
    return Instance(tuple(vals))


def verify_graph(instance: Instance, profile) -> bool:
    """True iff the instance's duplicate graph is isomorphic to profile.

    Structural check used by harnesses and tests; it reads values
    directly and performs no oracle comparisons.
    """
    counts = sorted(Counter(instance.values).values())
    return counts == sorted(profile.sizes)


def replay_transcript(instance: Instance, transcript: Iterable) -> bool:
    """Check every recorded answer against the instance's true order."""
    vals = instance.values
    n = len(vals)
    for x, y, ans in transcript:
        if x == y or not (0 <= x < n and 0 <= y < n):
            return False
        vx, vy = vals[x], vals[y]
        truth = Answer.LT if vx < vy else Answer.GT if vx > vy else Answer.EQ
        if truth is not ans:
            return False
    return True


# --- file formats ---------------------------------------------------------
# instance file: one decimal rank per line
# transcript file: x <TAB> y <TAB> {<,=,>}

def write_instance(path, instance: Instance) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in instance.values:
            fh.write(f"{v}\n")


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        vals = tuple(int(line) for line in fh if line.strip())
    return Instance(vals)


def write_transcript(path, transcript: Iterable) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x, y, ans in transcript:
            fh.write(f"{x}\t{y}\t{ans.value}\n")


def read_transcript(path) -> Transcript:
    out = []
    sym = {a.value: a for a in Answer}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            x, y, s = line.split("\t")
            out.append((int(x), int(y), sym[s]))
    return out


def ceil_log2(x: int) -> int:
    """Smallest k with 2**k >= x, for x >= 1.  Integer-exact."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def floor_log2(x: int) -> int:
    if x < 1:
        raise ValueError("floor_log2 needs x >= 1")
    return x.bit_length() - 1
