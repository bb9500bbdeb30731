import random

import pytest

from ctakit.errors import RegionBoundError
from ctakit.generators import random_timed_automaton
from ctakit.regions import RegionState, build_region_automaton, region_nonempty
from ctakit.semantics import ExploreBounds, reachable_locations, replay
from ctakit.types import INF, Automaton, Network, Transition


def test_writer_region_automaton(two_chain):
    region = build_region_automaton(two_chain.automaton("A"), 1)
    assert region.initial == (RegionState("s1", (0,)),)
    assert RegionState("s3", (INF,)) in region.states
    ticks = [e for e in region.edges if e.is_tick]
    assert len(ticks) == len(region.states)
    assert str(RegionState("s2", (INF,))) == "(s2,inf)"


def test_guard_blocks_edges(two_chain):
    region = build_region_automaton(two_chain.automaton("A"), 1)
    late = RegionState("s1", (1,))
    labels = [region.label(e) for e in region.outgoing[late]]
    assert labels == ["tick"]


def test_bound_below_constant():
    with pytest.raises(RegionBoundError) as excinfo:
        build_region_automaton(
            random_timed_automaton(random.Random(3), bound=2).automata[0], -1
        )
    assert excinfo.value.bound == -1


def test_foreign_clock_rejected(two_chain):
    a = two_chain.automaton("A")
    stranger = Automaton(a.id, a.locations, a.initial, a.final, (), a.transitions)
    with pytest.raises(ValueError):
        build_region_automaton(stranger, 1)


def test_clockless_automaton_ticks_in_place():
    a = Automaton("A", ("s0", "s1"), ("s0",), ("s1",), (), (Transition("s0", "s1"),))
    region = build_region_automaton(a, 2)
    assert region.states == (RegionState("s0"), RegionState("s1"))
    ticks = [e for e in region.edges if e.is_tick]
    assert [(e.source, e.target) for e in ticks] == [
        (RegionState("s0"), RegionState("s0")),
        (RegionState("s1"), RegionState("s1")),
    ]
    discrete = [e for e in region.edges if not e.is_tick]
    assert [(e.source.location, e.target.location) for e in discrete] == [("s0", "s1")]
    witness = region_nonempty(region, a.final)
    assert witness.nonempty
    assert len(witness.path) == 1


def test_empty_language():
    a = Automaton("A", ("s0", "s1"), ("s0",), ("s1",), ("x",))
    witness = region_nonempty(build_region_automaton(a, 0), a.final)
    assert not witness.nonempty
    assert witness.steps("A") == []


def test_region_and_exploration_agree():
    rng = random.Random(2024)
    for _ in range(40):
        net = random_timed_automaton(rng)
        automaton = net.automata[0]
        bound = automaton.max_constant
        region = build_region_automaton(automaton, bound)
        from_regions = {state.location for state in region.states}
        explored = reachable_locations(net, ExploreBounds(max_steps=len(region.states) + 1))
        assert from_regions == {locations[0] for locations in explored}


def test_witness_replays():
    rng = random.Random(99)
    checked = 0
    for _ in range(40):
        net = random_timed_automaton(rng)
        automaton = net.automata[0]
        bound = automaton.max_constant
        region = build_region_automaton(automaton, bound)
        witness = region_nonempty(region, automaton.final)
        if not witness.nonempty:
            continue
        checked += 1
        trace = replay(
            Network((automaton,)), witness.steps("A"), age_cap=bound, cap_clocks=True
        )
        final = trace[-1].configuration if trace else None
        end = witness.path[-1].target if witness.path else witness.start
        if final is not None:
            assert final.locations == (end.location,)
            assert final.valuations == (end.values,)
        assert end.location in automaton.final
    assert checked > 0
