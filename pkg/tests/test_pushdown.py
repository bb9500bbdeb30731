import pytest

from ctakit.pushdown import Rule, pre_star

PUSH = Rule("p", "a", "q", ("b", "a"))
POP = Rule("q", "b", "r", ())


def test_push_then_pop_reaches_target():
    saturation = pre_star([PUSH, POP], ["r"], ["a", "b"])
    assert saturation.accepts("p", ("a",))
    assert saturation.witness("p", ("a",)) == [PUSH, POP]


def test_wrong_top_is_rejected():
    saturation = pre_star([PUSH, POP], ["r"], ["a", "b"])
    assert not saturation.accepts("p", ("b",))
    assert saturation.witness("p", ("b",)) is None


def test_targets_accept_any_nonempty_stack():
    saturation = pre_star([], ["r"], ["a", "b"])
    assert saturation.accepts("r", ("a", "b", "b"))
    assert saturation.witness("r", ("a",)) == []
    assert not saturation.accepts("r", ())


def test_internal_rule_chain():
    rules = [Rule("p", "a", "q", ("a",)), Rule("q", "a", "s", ("b",)), Rule("s", "b", "t", ())]
    saturation = pre_star(rules, ["t"], ["a", "b"])
    assert saturation.witness("p", ("a", "a")) == rules
    assert not saturation.accepts("q", ("b",))


def test_rule_apply():
    assert PUSH.apply(("a", "c")) == ("b", "a", "c")
    with pytest.raises(ValueError):
        POP.apply(("a",))


def test_rule_writes_at_most_two_symbols():
    with pytest.raises(ValueError):
        Rule("p", "a", "q", ("a", "b", "c"))
