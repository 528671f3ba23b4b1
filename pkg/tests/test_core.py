"""Oracle counting, realization, verification and transcript plumbing."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edlab.core import (Answer, CountingOracle, Instance, Outcome,
                        ceil_log2, floor_log2, read_instance, read_transcript,
                        realize_instance, replay_transcript, verify_graph,
                        write_instance, write_transcript)
from edlab.profiles import ClusterProfile

sizes_lists = st.lists(st.integers(min_value=1, max_value=9), min_size=1,
                       max_size=12)


def test_equal_pair_answers_eq():
    o = CountingOracle(instance=Instance((5, 5)))
    assert o.compare(0, 1) is Answer.EQ
    assert o.count == 1


def test_ordered_pair_both_directions():
    o = CountingOracle(instance=Instance((1, 2)))
    assert o.compare(0, 1) is Answer.LT
    assert o.count == 1
    assert o.compare(1, 0) is Answer.GT
    assert o.count == 2
    assert o.transcript == [(0, 1, Answer.LT), (1, 0, Answer.GT)]


def test_self_and_out_of_range_comparisons_rejected():
    o = CountingOracle(instance=Instance((1, 2)))
    with pytest.raises(ValueError):
        o.compare(1, 1)
    with pytest.raises(ValueError):
        o.compare(0, 2)
    with pytest.raises(ValueError):
        o.compare(-1, 0)
    assert o.count == 0  # rejected calls are not charged


def test_oracle_constructor_contract():
    with pytest.raises(ValueError):
        CountingOracle()
    with pytest.raises(ValueError):
        CountingOracle(instance=Instance((1,)), adversary=lambda x, y: Answer.LT)
    with pytest.raises(ValueError):
        CountingOracle(adversary=lambda x, y: Answer.LT)  # needs n


def test_adversary_mode_uses_callback():
    calls = []

    def hook(x, y):
        calls.append((x, y))
        return Answer.GT

    o = CountingOracle(adversary=hook, n=4)
    assert o.compare(2, 3) is Answer.GT
    assert calls == [(2, 3)]
    assert o.transcript == [(2, 3, Answer.GT)]


def test_realize_single_pair():
    inst = realize_instance(ClusterProfile([2]), seed=0)
    assert len(inst) == 2
    assert inst.values[0] == inst.values[1]


def test_realize_all_distinct():
    inst = realize_instance(ClusterProfile([1, 1, 1]), seed=0)
    assert len(set(inst.values)) == 3


def test_realize_matches_profile():
    prof = ClusterProfile([3, 1, 1, 1])
    inst = realize_instance(prof, seed=7)
    assert verify_graph(inst, prof)


def test_realize_is_deterministic():
    prof = ClusterProfile([4, 2, 2])
    a = realize_instance(prof, seed=3)
    b = realize_instance(prof, seed=3)
    assert a.values == b.values


def test_verify_graph_examples():
    assert verify_graph(Instance((5, 5, 9)), ClusterProfile([2, 1]))
    assert not verify_graph(Instance((5, 5, 9)), ClusterProfile([3]))


def test_realize_verify_round_trip_100_seeds():
    prof = ClusterProfile([4, 2, 2])
    for seed in range(100):
        assert verify_graph(realize_instance(prof, seed), prof)


@settings(max_examples=60)
@given(sizes=sizes_lists, seed=st.integers(min_value=0, max_value=10**6))
def test_realize_verify_round_trip_random(sizes, seed):
    prof = ClusterProfile(sizes)
    inst = realize_instance(prof, seed)
    assert len(inst) == sum(sizes)
    assert verify_graph(inst, prof)


def test_replay_empty_transcript():
    assert replay_transcript(Instance((3, 1, 4)), [])


def test_replay_truthful_and_false_answers():
    inst = Instance((1, 2))
    assert replay_transcript(inst, [(0, 1, Answer.LT)])
    assert not replay_transcript(inst, [(0, 1, Answer.GT)])
    assert not replay_transcript(inst, [(0, 1, Answer.EQ)])
    assert not replay_transcript(inst, [(0, 0, Answer.EQ)])  # degenerate pair
    assert not replay_transcript(inst, [(0, 5, Answer.LT)])  # out of range


@settings(max_examples=40)
@given(sizes=sizes_lists, seed=st.integers(min_value=0, max_value=10**6),
       pairs=st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)),
                      max_size=40))
def test_replay_accepts_every_real_transcript(sizes, seed, pairs):
    inst = realize_instance(ClusterProfile(sizes), seed)
    o = CountingOracle(instance=inst)
    n = len(inst)
    for x, y in pairs:
        if x != y and x < n and y < n:
            o.compare(x, y)
    assert replay_transcript(inst, o.transcript)


def test_instance_file_round_trip(tmp_path):
    inst = Instance((3, 0, 2, 2, 1))
    p = tmp_path / "inst"
    write_instance(p, inst)
    assert read_instance(p) == inst


def test_transcript_file_round_trip(tmp_path):
    inst = realize_instance(ClusterProfile([2, 1, 1]), seed=1)
    o = CountingOracle(instance=inst)
    o.compare(0, 1), o.compare(2, 3), o.compare(3, 1)
    p = tmp_path / "tr"
    write_transcript(p, o.transcript)
    assert read_transcript(p) == o.transcript


def test_outcome_labels():
    assert Outcome.DUPLICATE.value == "duplicate"
    assert Outcome.DISTINCT.value == "distinct"
    assert Outcome.GAVE_UP.value == "gave_up"


@given(st.integers(min_value=1, max_value=10**9))
def test_log2_helpers_match_float_math(x):
    assert ceil_log2(x) == math.ceil(math.log2(x)) or 2 ** ceil_log2(x) >= x > 2 ** (ceil_log2(x) - 1)
    assert floor_log2(x) == int(math.log2(x)) or 2 ** floor_log2(x) <= x < 2 ** (floor_log2(x) + 1)
    assert 2 ** ceil_log2(x) >= x and (x == 1 or 2 ** (ceil_log2(x) - 1) < x)
    assert 2 ** floor_log2(x) <= x < 2 ** (floor_log2(x) + 1)


def test_log2_helpers_reject_nonpositive():
    with pytest.raises(ValueError):
        ceil_log2(0)
    with pytest.raises(ValueError):
        floor_log2(0)
