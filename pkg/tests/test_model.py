import json
from pathlib import Path

import pytest

from ctakit.counter_machine import Halt, TwoCounterMachine
from ctakit.errors import ModelReferenceError, ModelSyntaxError
from ctakit.gadgets import gen_subset_sum, gen_three_cta
from ctakit.model import (
    Classification,
    analyze_topology,
    load_model,
    network_to_dict,
    parse_model,
    save_model,
    serialize_model,
)
from ctakit.types import INF, Automaton, Channel, Interval, Network, Read, Transition, Write


def test_fixture_matches_catalog(example_path: Path, two_chain):
    assert load_model(example_path) == two_chain


def test_parse_example_shape(example_path: Path):
    net = parse_model(example_path.read_text(encoding="utf-8"))
    assert [a.id for a in net.automata] == ["A", "B"]
    assert [c.id for c in net.channels] == ["cAB"]
    reader = net.automaton("B")
    assert reader.transitions[2].op == Read("cAB", "c", Interval(1, False))
    assert reader.transitions[4].op.age.upper == INF
    assert net.automaton("A").transitions[0].op == Write("cAB", "a")


def test_minimal_yaml_model(fixtures_dir: Path):
    net = load_model(fixtures_dir / "minimal.yaml")
    assert net.channels == ()
    assert len(net.automata[0].transitions) == 1


@pytest.mark.parametrize(
    "net_factory",
    [
        lambda two_chain: two_chain,
        lambda two_chain: gen_subset_sum([3, 5], 8),
        lambda two_chain: gen_three_cta(TwoCounterMachine((Halt(),)), ghosts=True),
    ],
)
def test_serialize_then_parse_is_identity(net_factory, two_chain):
    net = net_factory(two_chain)
    assert parse_model(serialize_model(net)) == net


def test_save_model_creates_directories(tmp_path: Path, two_chain):
    path = tmp_path / "nested" / "model.json"
    save_model(path, two_chain)
    assert json.loads(path.read_text(encoding="utf-8")) == network_to_dict(two_chain)


def test_syntax_error_reports_position():
    with pytest.raises(ModelSyntaxError) as excinfo:
        parse_model('{"automata": [\n  {"id": "A",, }]}')
    assert excinfo.value.line == 2
    assert excinfo.value.column is not None


def test_unknown_key_rejected(two_chain):
    data = network_to_dict(two_chain)
    data["automata"][0]["invariant"] = []
    with pytest.raises(ModelSyntaxError, match="Unknown key 'invariant'"):
        parse_model(data)


def test_bad_interval_rejected(two_chain):
    data = network_to_dict(two_chain)
    data["automata"][1]["transitions"][0]["op"]["read"]["age"] = "[2,1]"
    with pytest.raises(ModelSyntaxError):
        parse_model(data)


def test_read_from_foreign_channel_is_reference_error(two_chain):
    data = network_to_dict(two_chain)
    data["automata"][0]["transitions"].append(
        {"from": "s1", "to": "s1", "op": {"read": {"channel": "cAB", "msg": "a", "age": "[0,inf)"}}}
    )
    with pytest.raises(ModelReferenceError) as excinfo:
        parse_model(data)
    assert excinfo.value.ref == "cAB"


def test_unknown_clock_is_reference_error(two_chain):
    data = network_to_dict(two_chain)
    data["automata"][0]["transitions"][0]["resets"] = ["z"]
    with pytest.raises(ModelReferenceError) as excinfo:
        parse_model(data)
    assert excinfo.value.ref == "z"


class TestTopology:
    def test_two_chain(self, two_chain):
        report = analyze_topology(two_chain)
        assert report.max_constant == 1
        assert report.underlying_acyclic
        assert report.classification is Classification.TWO_CHAIN_NO_GLOBALS
        assert report.fan_out == {"A": 1, "B": 0}

    def test_three_chain_is_polyforest(self):
        net = gen_three_cta(TwoCounterMachine((Halt(),)))
        assert analyze_topology(net).classification is Classification.POLYFOREST

    def test_two_way_channels_are_cyclic(self, bounded_context):
        report = analyze_topology(bounded_context)
        assert not report.underlying_acyclic
        assert report.classification is Classification.CYCLIC
        assert report.max_constant == 2

    def test_self_channel_is_not_two_chain(self):
        echo = (Transition("s", "s", op=Write("c", "m")), Transition("s", "s", op=Read("c", "m")))
        looped = Automaton("A", ("s",), ("s",), transitions=echo)
        idle = Automaton("B", ("q",), ("q",))
        net = Network((looped, idle), (), (Channel("c", "A", "A"),), ("m",))
        report = analyze_topology(net)
        assert not report.underlying_acyclic
        assert report.classification is Classification.CYCLIC
        assert report.fan_in == {"A": 1, "B": 0}

    def test_report_to_dict(self, two_chain):
        data = analyze_topology(two_chain).to_dict()
        assert data["classification"] == "two-chain-no-globals"
        assert data["has_globals"] is False
