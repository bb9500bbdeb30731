from ctakit.types import Automaton, Channel, Network, Read, Transition, Write
from ctakit.validation import validate_network


def _codes(net: Network) -> list[str]:
    return [d.code for d in validate_network(net)]


def _pair(a_clocks=("x",), b_clocks=("y",), channels=None, alphabet=("m",), a_op=None):
    a = Automaton("A", ("s",), ("s",), (), a_clocks, (Transition("s", "s", op=a_op or Write("c", "m")),))
    b = Automaton("B", ("q",), ("q",), (), b_clocks, (Transition("q", "q", op=Read("c", "m")),))
    if channels is None:
        channels = (Channel("c", "A", "B"),)
    return Network((a, b), (), channels, alphabet)


def test_catalog_network_is_clean(two_chain, bounded_context):
    assert validate_network(two_chain) == []
    assert validate_network(bounded_context) == []


def test_shared_clock_is_reported():
    diagnostics = validate_network(_pair(a_clocks=("x",), b_clocks=("x",)))
    assert [d.code for d in diagnostics] == ["shared-clock"]
    assert "x" in diagnostics[0].message


def test_duplicate_channel_pair():
    codes = _codes(_pair(channels=(Channel("c", "A", "B"), Channel("d", "A", "B"))))
    assert "duplicate-channel-pair" in codes


def test_self_channel_and_direction():
    net = _pair(channels=(Channel("c", "A", "A"),))
    codes = _codes(net)
    assert "self-channel" in codes
    assert "wrong-direction" in codes


def test_unknown_message_and_channel():
    assert "unknown-message" in _codes(_pair(alphabet=()))
    assert "unknown-channel" in _codes(_pair(a_op=Write("nowhere", "m")))


def test_global_clock_shadowing():
    net = _pair()
    shadowed = Network(net.automata, ("x",), net.channels, net.alphabet)
    assert _codes(shadowed) == ["shadowed-global"]


def test_missing_initial_location():
    a = Automaton("A", ("s",), ())
    assert _codes(Network((a,))) == ["no-initial"]


def test_diagnostic_to_dict():
    (diagnostic,) = validate_network(_pair(a_clocks=("x",), b_clocks=("x",)))
    assert diagnostic.to_dict() == {"code": "shared-clock", "message": diagnostic.message}
