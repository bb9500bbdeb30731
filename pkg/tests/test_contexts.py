import pytest

from ctakit.contexts import annotate_contexts, context_states
from ctakit.errors import ReplayError
from ctakit.semantics import Discrete, format_configuration, replay
from ctakit.types import Automaton, Channel, Network, Read, Transition, Write


def test_round_trip_run(bounded_context, round_trip):
    final = replay(bounded_context, round_trip)[-1].configuration
    assert format_configuration(final) == "((p2,2),(q3,3),eps,(g,0)(a,1)(a,3))"


def test_round_trip_contexts(bounded_context, round_trip):
    annotation = annotate_contexts(bounded_context, round_trip)
    assert annotation.switches == 2
    assert annotation.indices == (0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2)
    assert annotation.active[0] == "A2"
    assert annotation.active[8] == "A1"
    assert annotation.to_dict()["switches"] == 2


def test_write_by_other_automaton_switches(bounded_context):
    steps = [Discrete("A2", 0), Discrete("A1", 0), Discrete("A1", 1)]
    assert annotate_contexts(bounded_context, steps).switches == 1


def test_indices_never_decrease(bounded_context, round_trip):
    indices = [s.index for s in context_states(bounded_context, round_trip)]
    assert indices == sorted(indices)


def test_reading_a_second_channel_switches():
    reader = Automaton(
        "R",
        ("r",),
        ("r",),
        transitions=(
            Transition("r", "r", op=Read("c1", "m")),
            Transition("r", "r", op=Read("c2", "m")),
        ),
    )
    w1 = Automaton("W1", ("w",), ("w",), transitions=(Transition("w", "w", op=Write("c1", "m")),))
    w2 = Automaton("W2", ("w",), ("w",), transitions=(Transition("w", "w", op=Write("c2", "m")),))
    net = Network(
        (reader, w1, w2), (), (Channel("c1", "W1", "R"), Channel("c2", "W2", "R")), ("m",)
    )
    steps = [Discrete("W1", 0), Discrete("W2", 0), Discrete("R", 0), Discrete("R", 1)]
    assert annotate_contexts(net, steps).indices == (0, 1, 2, 3)


def test_empty_run_has_no_switches(bounded_context):
    assert annotate_contexts(bounded_context, []).switches == 0


def test_disabled_step_is_reported(bounded_context):
    with pytest.raises(ReplayError) as excinfo:
        annotate_contexts(bounded_context, [Discrete("A1", 3)])
    assert excinfo.value.step_index == 0


def test_round_trip_leaves_one_a_unread(bounded_context, round_trip):
    with pytest.raises(ReplayError) as excinfo:
        replay(bounded_context, round_trip + [Discrete("A1", 3)])
    assert excinfo.value.step_index == len(round_trip)
