import json
import random
import sys

import click
from tqdm import tqdm

from ctakit.bmps import decide_bmps_reach
from ctakit.gadgets import crosscheck_gadget, gen_subset_sum, subset_sum_oracle
from ctakit.generators import (
    random_bounded_context_net,
    random_counter_machine,
    random_subset_sum,
    random_two_chain,
)
from ctakit.oca import decide_2cta_reach
from ctakit.semantics import ExploreBounds, Reached, Target, explore_reach


def sweep_two_chain(rng: random.Random, count: int, explore_steps: int) -> list[dict]:
    failures = []
    for index in tqdm(range(count), desc="two-chain", file=sys.stderr):
        net = random_two_chain(rng, max_locations=4, max_transitions=6)
        targets = {a.id: a.final[0] for a in net.automata}
        verdict = decide_2cta_reach(net, targets)
        explored = explore_reach(
            net,
            ExploreBounds(max_steps=explore_steps, max_channel_len=6),
            Target(tuple(targets.items()), channel_empty=True),
        )
        if isinstance(explored, Reached) and not verdict.reachable:
            failures.append({"sweep": "two-chain", "index": index, "targets": targets})
    return failures


def sweep_subset_sum(rng: random.Random, count: int) -> list[dict]:
    failures = []
    for index in tqdm(range(count), desc="subset-sum", file=sys.stderr):
        values, target = random_subset_sum(rng, max_size=3, max_value=4, max_target=10)
        verdict = decide_2cta_reach(gen_subset_sum(values, target), {"B": "r_f"})
        if verdict.reachable != subset_sum_oracle(values, target):
            failures.append({"sweep": "subset-sum", "index": index, "set": values, "target": target})
    return failures


def sweep_bounded_context(rng: random.Random, count: int, contexts: int) -> list[dict]:
    # Short witnesses must also be found by the explorer within the same depth.
    failures = []
    for index in tqdm(range(count), desc="bounded-context", file=sys.stderr):
        net = random_bounded_context_net(rng)
        target = Target(tuple((a.id, a.final[0]) for a in net.automata))
        verdict = decide_bmps_reach(net, target, contexts=contexts, max_steps=60)
        explored = explore_reach(net, ExploreBounds(max_steps=6, max_channel_len=6), target)
        if verdict.reached and not isinstance(explored, Reached) and len(verdict.steps) <= 6:
            failures.append({"sweep": "bounded-context", "index": index})
    return failures


def sweep_counter_machines(rng: random.Random, count: int, steps: int) -> list[dict]:
    failures = []
    for index in tqdm(range(count), desc="two-counter", file=sys.stderr):
        machine = random_counter_machine(rng, max_run=steps)
        report = crosscheck_gadget(machine, steps)
        if not report.ok:
            failures.append(
                {"sweep": "two-counter", "index": index, "divergence": report.divergence}
            )
    return failures


@click.command()
@click.option("--seed", type=int, default=1701, show_default=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--contexts", type=int, default=2, show_default=True)
def main(seed: int, count: int, contexts: int) -> None:
    """Random agreement sweeps between the decision procedures and the reference semantics."""
    rng = random.Random(seed)
    failures = (
        sweep_two_chain(rng, count, explore_steps=22)
        + sweep_subset_sum(rng, count)
        + sweep_bounded_context(rng, count, contexts)
        + sweep_counter_machines(rng, max(1, count // 10), steps=25)
    )
    click.echo(json.dumps({"seed": seed, "count": count, "failures": failures}, indent=2))
    if failures:
        raise SystemExit(1)
    click.echo("crossvalidation ok", err=True)


if __name__ == "__main__":
    main()
