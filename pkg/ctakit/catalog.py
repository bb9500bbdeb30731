"""Worked example networks used by the tests and the documentation."""

from __future__ import annotations

from .types import (
    NOP,
    TRUE,
    Atom,
    Automaton,
    Channel,
    ClockConstraint,
    Interval,
    Network,
    Read,
    Transition,
    Write,
)


def _when(clock: str, rel: str, bound: int) -> ClockConstraint:
    return ClockConstraint((Atom(clock, rel, bound),))


def example_two_chain() -> Network:
    """Writer ``A`` and reader ``B`` over ``cAB`` with K = 1.

    From ``((s1,0),(q1,0),eps)`` the pair ``(s2, q2)`` is reachable with an
    empty channel, first at ``((s2,1),(q2,1),eps)`` and again after a detour
    through ``s3``/``q3`` at ``((s2,1),(q2,inf),eps)``.
    """
    a = Automaton(
        "A",
        ("s1", "s2", "s3"),
        ("s1",),
        ("s2",),
        ("x",),
        (
            Transition("s1", "s2", _when("x", "<", 1), Write("cAB", "a")),
            Transition("s2", "s3", _when("x", "=", 1), NOP),
            Transition("s3", "s3", TRUE, Write("cAB", "c")),
            Transition("s3", "s2", TRUE, NOP, frozenset({"x"})),
            Transition("s2", "s2", _when("x", "<", 1), Write("cAB", "a")),
            Transition("s2", "s2", _when("x", "<", 1), Write("cAB", "b")),
        ),
    )
    b = Automaton(
        "B",
        ("q1", "q2", "q3"),
        ("q1",),
        ("q2",),
        ("y",),
        (
            Transition("q1", "q2", TRUE, Read("cAB", "a", Interval.point(1))),
            Transition("q2", "q3", TRUE, NOP),
            Transition("q3", "q2", TRUE, Read("cAB", "c", Interval(1, False))),
            Transition("q2", "q2", TRUE, Read("cAB", "a", Interval.point(1))),
            Transition("q2", "q2", TRUE, Read("cAB", "b", Interval(1, True))),
        ),
    )
    return Network((a, b), (), (Channel("cAB", "A", "B"),), ("a", "b", "c"))


def bounded_context_example() -> Network:
    """Two automata exchanging messages in both directions, K = 2.

    ``A2`` seeds ``c21`` with two ``a``; ``A1`` sends ``e`` then ``b`` and
    consumes one ``a`` at age exactly 2, after which ``A2`` drains ``c12``
    and may move to ``q3`` announcing ``g``.

    In the two-switch run that goes round this loop once, ``A2`` writes a
    third ``a`` before leaving ``q1``, and ``A1`` reads only one. The last
    configuration therefore holds ``c21 = (g,0)(a,1)(a,3)``. A listing of
    ``(g,0)(a,3)`` at that point is not reachable with these edges: it
    would need a second read of ``a``, which ``A1`` can only do from ``p1``,
    and ``A1`` has already moved on to ``p2``.
    """
    a1 = Automaton(
        "A1",
        ("p1", "p2", "p2b"),
        ("p1",),
        ("p2",),
        ("x",),
        (
            Transition("p1", "p2", TRUE, NOP),
            Transition("p2", "p2b", TRUE, Write("c12", "e"), frozenset({"x"})),
            Transition("p2b", "p1", TRUE, Write("c12", "b")),
            Transition("p1", "p1", TRUE, Read("c21", "a", Interval.point(2))),
        ),
    )
    a2 = Automaton(
        "A2",
        ("q1", "q2", "q2e", "q3"),
        ("q1",),
        ("q3",),
        ("y",),
        (
            Transition("q1", "q1", TRUE, Write("c21", "a")),
            Transition("q1", "q2", TRUE, NOP),
            Transition("q2", "q2e", TRUE, Read("c12", "e", Interval.point(1))),
            Transition("q2e", "q1", TRUE, Read("c12", "b", Interval.point(1))),
            Transition("q2", "q3", TRUE, Write("c21", "g")),
        ),
    )
    return Network(
        (a1, a2),
        (),
        (Channel("c12", "A1", "A2"), Channel("c21", "A2", "A1")),
        ("a", "b", "e", "g"),
    )
