import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ctakit.clocks import cap
from ctakit.contexts import context_states
from ctakit.generators import random_bounded_context_net, random_two_chain
from ctakit.semantics import initial_configuration, replay, simulate, timed_step

seeds = st.integers(min_value=0, max_value=100_000)


def _walk(seed: int, steps: int = 25):
    rng = random.Random(seed)
    net = random_bounded_context_net(rng) if rng.random() < 0.5 else random_two_chain(rng)
    trace = simulate(net, steps, seed=seed, age_cap=None)
    return net, [item.step for item in trace]


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=5))
def test_time_advances_every_clock_and_age(seed, t):
    net, steps = _walk(seed)
    cfg = replay(net, steps)[-1].configuration if steps else initial_configuration(net)[0]
    later = timed_step(net, cfg, t)
    for before, after in zip(cfg.valuations, later.valuations):
        assert all(b + t == a for b, a in zip(before, after))
    for before, after in zip(cfg.channels, later.channels):
        assert after.symbols == before.symbols
        assert all(b + t == a for (_, b), (_, a) in zip(before.entries, after.entries))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_channels_stay_monotonic(seed):
    net, steps = _walk(seed)
    for item in replay(net, steps):
        assert all(word.is_monotonic() for word in item.configuration.channels)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_replay_is_deterministic(seed):
    net, steps = _walk(seed)
    assert replay(net, steps) == replay(net, steps)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_capped_run_abstracts_exact_run(seed):
    net, steps = _walk(seed)
    k = net.max_constant
    exact = replay(net, steps)
    capped = replay(net, steps, age_cap=k, cap_clocks=True)
    for left, right in zip(exact, capped):
        assert left.configuration.locations == right.configuration.locations
        assert tuple(w.capped(k) for w in left.configuration.channels) == right.configuration.channels
        assert tuple(
            tuple(cap(v, k) for v in values) for values in left.configuration.valuations
        ) == right.configuration.valuations


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_context_indices_grow_by_at_most_one(seed):
    net, steps = _walk(seed)
    indices = [0] + [s.index for s in context_states(net, steps)]
    assert all(0 <= b - a <= 1 for a, b in zip(indices, indices[1:]))
