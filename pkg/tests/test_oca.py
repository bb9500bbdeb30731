import random

import pytest

from ctakit.errors import TopologyError
from ctakit.gadgets import gen_subset_sum
from ctakit.generators import random_two_chain
from ctakit.oca import (
    INITIAL_STACK,
    OcaReachable,
    OcaUnreachable,
    audit_witness,
    build_oca,
    decide_2cta_reach,
    lift_witness,
    pushdown_reach,
    visible_stack,
)
from ctakit.semantics import ExploreBounds, Reached, Target, explore_reach, format_configuration
from ctakit.types import Automaton, Channel, Network, Read, Transition

# (rule, transition index, label after the move, visible stack after the move)
FIRST_VISIT = [
    ("3(d)", 0, "(s2,0)|(q1,0),a|0", "⊥"),
    ("3(b)", None, "(s2,0)|(q1,1),a|1", "⊥"),
    ("1(c)", None, "(s2,0)|(q1_bot,1),a|1", ""),
    ("2(b)", None, "(s2,0)|(q1'_bot,1),a|1", "⊥"),
    ("3(f)", 0, "(s2,0)|(q2,1),eps|1", "⊥"),
]
BACK_TO_START = [
    ("1(b)", None, "(s2_bot,1)|(q2,1),eps|0", ""),
    ("2(a)", None, "(s2,1)|(q2,1),eps|0", "⊥"),
    ("3(a)", 1, "(s3,1)|(q2,1),eps|0", "⊥"),
]
DETOUR = [
    ("3(d)", 2, "(s3,1)|(q2,1),c|0", "⊥"),
    ("3(a)", 1, "(s3,1)|(q3,1),c|0", "⊥"),
    ("3(b)", None, "(s3,1)|(q3,inf),c|1", "⊥"),
    ("2(d)", None, "(s3,1)|(q3,inf),c|1", "1⊥"),
    ("1(d)", None, "(s3,1)|(q3_1,inf),c|1", "⊥"),
    ("2(c)", None, "(s3,1)|(q3'_1,inf),c|1", "1⊥"),
    ("3(g)", 2, "(s3,1)|(q2,inf),eps|1", "1⊥"),
    ("1(a)", None, "(s3,inf)|(q2,inf),eps|1", "⊥"),
    ("1(b)", None, "(s3_bot,inf)|(q2,inf),eps|0", ""),
    ("2(a)", None, "(s3,inf)|(q2,inf),eps|0", "⊥"),
    ("3(a)", 3, "(s2,0)|(q2,inf),eps|0", "⊥"),
    ("3(d)", 4, "(s2,0)|(q2,inf),a|0", "⊥"),
    ("3(b)", None, "(s2,0)|(q2,inf),a|1", "⊥"),
    ("1(c)", None, "(s2,0)|(q2_bot,inf),a|1", ""),
    ("2(b)", None, "(s2,0)|(q2'_bot,inf),a|1", "⊥"),
    ("3(f)", 3, "(s2,0)|(q2,inf),eps|1", "⊥"),
    ("3(d)", 5, "(s2,0)|(q2,inf),b|1", "⊥"),
    ("1(c)", None, "(s2,0)|(q2_bot,inf),b|1", ""),
    ("2(b)", None, "(s2,0)|(q2'_bot,inf),b|1", "⊥"),
    ("3(f)", 4, "(s2,0)|(q2,inf),eps|1", "⊥"),
    ("1(b)", None, "(s2_bot,1)|(q2,inf),eps|0", ""),
    ("2(a)", None, "(s2,1)|(q2,inf),eps|0", "⊥"),
]


def _fire_all(ocs, state, stack, moves):
    for rule, index, label, shown in moves:
        state, stack = ocs.fire(state, stack, rule, index)
        assert (rule, state.label(), visible_stack(stack)) == (rule, label, shown)
    return state, stack


class TestConstruction:
    def test_initial_state(self, two_chain) -> None:
        ocs = build_oca(two_chain)
        assert ocs.bound == 1
        assert (ocs.writer, ocs.reader) == ("A", "B")
        assert [s.label() for s in ocs.initial] == ["(s1,0)|(q1,0),eps|0"]

    def test_first_visit(self, two_chain) -> None:
        ocs = build_oca(two_chain)
        state, stack = _fire_all(ocs, ocs.initial[0], INITIAL_STACK, FIRST_VISIT)
        assert state.label() == "(s2,0)|(q2,1),eps|1"
        assert stack == INITIAL_STACK

    def test_detour_returns_with_reader_ahead(self, two_chain) -> None:
        ocs = build_oca(two_chain)
        state, stack = _fire_all(ocs, ocs.initial[0], INITIAL_STACK, FIRST_VISIT + BACK_TO_START)
        assert state.label() == "(s3,1)|(q2,1),eps|0"
        state, stack = _fire_all(ocs, state, stack, DETOUR[:4])
        assert visible_stack(stack) == "1⊥"
        state, stack = _fire_all(ocs, state, stack, DETOUR[4:])
        assert state.label() == "(s2,1)|(q2,inf),eps|0"
        assert stack == INITIAL_STACK

    def test_unknown_rule_is_rejected(self, two_chain) -> None:
        ocs = build_oca(two_chain)
        with pytest.raises(ValueError):
            ocs.fire(ocs.initial[0], INITIAL_STACK, "1(a)")

    def test_writer_without_writes_has_no_write_rule(self) -> None:
        writer = Automaton("A", ("s",), ("s",), clocks=("x",), transitions=(Transition("s", "s"),))
        reader = Automaton("B", ("q",), ("q",), transitions=(Transition("q", "q", op=Read("c", "m")),))
        net = Network((writer, reader), (), (Channel("c", "A", "B"),), ("m",))
        assert "3(d)" not in build_oca(net).rules_used()

    def test_requires_two_chain(self, bounded_context) -> None:
        with pytest.raises(TopologyError):
            build_oca(bounded_context)

    def test_rejects_self_channel(self) -> None:
        looped = Automaton("A", ("s",), ("s",), transitions=(Transition("s", "s", op=Read("c", "m")),))
        idle = Automaton("B", ("q",), ("q",))
        net = Network((looped, idle), (), (Channel("c", "A", "A"),), ("m",))
        with pytest.raises(TopologyError):
            build_oca(net)


class TestPushdownReach:
    def test_initial_target(self, two_chain) -> None:
        ocs = build_oca(two_chain)
        result = pushdown_reach(ocs, lambda s: s.a.location == "s1")
        assert isinstance(result, OcaReachable)
        assert result.witness == []
        assert result.final == result.start

    def test_no_goal(self, two_chain) -> None:
        ocs = build_oca(two_chain)
        assert isinstance(pushdown_reach(ocs, lambda s: False), OcaUnreachable)


class TestDecide:
    def test_example_reachable(self, two_chain) -> None:
        verdict = decide_2cta_reach(two_chain, {"A": "s2", "B": "q2"})
        assert verdict.reachable
        final = verdict.trace[-1].configuration
        assert final.locations == ("s2", "q2")
        assert not any(final.channels)

    def test_witness_passes_audit(self, two_chain) -> None:
        verdict = decide_2cta_reach(two_chain, {"A": "s2", "B": "q2"})
        ocs = build_oca(two_chain)
        assert audit_witness(ocs, ocs.initial[0], verdict.oca_witness) == []
        assert lift_witness(ocs, verdict.oca_witness) == verdict.steps

    def test_detour_target(self, two_chain) -> None:
        verdict = decide_2cta_reach(two_chain, Target((("A", "s3"), ("B", "q3"))))
        assert verdict.reachable
        assert format_configuration(verdict.trace[-1].configuration).endswith(",eps)")

    def test_unknown_target(self, two_chain) -> None:
        with pytest.raises(ValueError):
            decide_2cta_reach(two_chain, {"A": "nowhere"})
        with pytest.raises(ValueError):
            decide_2cta_reach(two_chain, {"C": "s1"})

    @pytest.mark.parametrize(
        ("values", "target", "expected"),
        [([1, 2], 3, True), ([2, 3], 4, False), ([2], 0, True), ([3], 3, True)],
    )
    def test_subset_sum(self, values, target, expected) -> None:
        verdict = decide_2cta_reach(gen_subset_sum(values, target), {"B": "r_f"})
        assert verdict.reachable is expected

    @pytest.mark.slow
    @pytest.mark.parametrize(("target", "expected"), [(8, True), (4, False)])
    def test_subset_sum_larger(self, target, expected) -> None:
        verdict = decide_2cta_reach(gen_subset_sum([3, 5], target), {"B": "r_f"})
        assert verdict.reachable is expected


def _agree(net: Network, explore_steps: int, channel_len: int = 4) -> None:
    targets = {a.id: a.final[0] for a in net.automata}
    verdict = decide_2cta_reach(net, targets)
    explored = explore_reach(
        net,
        ExploreBounds(max_steps=explore_steps, max_channel_len=channel_len),
        Target(tuple(targets.items()), channel_empty=True),
    )
    if isinstance(explored, Reached):
        assert verdict.reachable
    if verdict.reachable:
        final = verdict.trace[-1].configuration if verdict.trace else verdict.initial
        assert final.locations == tuple(targets.values())
        assert not any(final.channels)
        ocs = build_oca(net)
        assert audit_witness(ocs, ocs.initial[0], verdict.oca_witness) == []


def test_agrees_with_bounded_exploration():
    rng = random.Random(17)
    for _ in range(30):
        _agree(random_two_chain(rng), 10)


@pytest.mark.slow
def test_agrees_with_bounded_exploration_sweep():
    rng = random.Random(4242)
    for _ in range(500):
        _agree(random_two_chain(rng), 22, channel_len=6)
