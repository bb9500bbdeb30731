import pytest

from ctakit.counter_machine import (
    ChannelAutomaton,
    ChannelEdge,
    Dec,
    Halt,
    Halted,
    IfZero,
    Inc,
    Running,
    Stuck,
    TwoCounterMachine,
    boundaries,
    counter_machine_to_channel_automaton,
    load_counter_machine,
    machine_from_dict,
    run_2cm,
    save_counter_machine,
)


class TestInterpreter:
    def test_transfer_program(self, transfer_machine) -> None:
        assert run_2cm(transfer_machine, 50) == Halted(13, 0, 3)

    def test_boundaries(self, transfer_machine) -> None:
        run = boundaries(transfer_machine, 50)
        assert run[0] == (0, 0, 0)
        assert run[3] == (3, 3, 0)
        assert run[-1] == (6, 0, 3)
        assert len(boundaries(transfer_machine, 4)) == 5

    def test_decrement_at_zero_is_stuck(self) -> None:
        assert run_2cm(TwoCounterMachine((Dec(1, 1), Halt())), 10) == Stuck(0, 0, 0, 0)

    def test_step_budget(self) -> None:
        looping = TwoCounterMachine((IfZero(1, 0, 0), Halt()))
        assert run_2cm(looping, 5) == Running(0, 0, 0, 5)

    def test_invalid_machine(self) -> None:
        with pytest.raises(ValueError):
            run_2cm(TwoCounterMachine((Inc(3, 1), Halt())), 5)


@pytest.mark.parametrize(
    ("instructions", "problem"),
    [
        ((), "no instructions"),
        ((Halt(), Inc(1, 0)), "exactly one halt"),
        ((Inc(1, 4), Halt()), "out of range"),
        ((Dec(0, 1), Halt()), "counter must be 1 or 2"),
    ],
)
def test_validate(instructions, problem):
    problems = TwoCounterMachine(instructions).validate()
    assert any(problem in p for p in problems)


def test_program_files(tmp_path, programs_dir, transfer_machine):
    assert load_counter_machine(programs_dir / "halt.json") == TwoCounterMachine((Halt(),))
    path = tmp_path / "copy.json"
    save_counter_machine(path, transfer_machine)
    assert load_counter_machine(path) == transfer_machine


def test_unknown_instruction():
    with pytest.raises(ValueError, match="unknown op"):
        machine_from_dict([{"op": "jump"}])
    with pytest.raises(ValueError):
        machine_from_dict({"op": "halt"})


class TestChannelAutomaton:
    def test_increment_then_halt(self, programs_dir) -> None:
        machine = load_counter_machine(programs_dir / "inc_halt.json")
        automaton = counter_machine_to_channel_automaton(machine)
        assert automaton.validate() == []
        halted = {word for loc, word in automaton.reachable(4) if loc == "l1"}
        assert halted == {("#", "a")}

    def test_transfer_program(self, transfer_machine) -> None:
        automaton = counter_machine_to_channel_automaton(transfer_machine)
        halted = {word for loc, word in automaton.reachable(6) if loc == "l6"}
        assert halted == {("#", "b", "b", "b")}

    def test_zero_test_branch(self, programs_dir) -> None:
        machine = load_counter_machine(programs_dir / "zero_test.json")
        automaton = counter_machine_to_channel_automaton(machine)
        halted = {word for loc, word in automaton.reachable(4) if loc == "l2"}
        assert halted == {("#", "b")}

    def test_reachable_respects_channel_bound(self) -> None:
        automaton = ChannelAutomaton(
            ("p",), "p", ("a",), (ChannelEdge("p", "write", "a", "p"),)
        )
        words = {word for _, word in automaton.reachable(3)}
        assert max(len(w) for w in words) == 3

    def test_validate_reports_unknown_endpoints(self) -> None:
        automaton = ChannelAutomaton(("p",), "p", ("a",), (ChannelEdge("p", "read", "z", "q"),))
        assert len(automaton.validate()) == 2
