"""Command line interface.

Verdicts and other results go to standard output as JSON; logs and progress
bars go to standard error. The exit status reports whether the command ran,
not what it found.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

import click
from tqdm import tqdm

from .bmps import build_bmps, decide_bmps_reach
from .config import VerifierConfig, with_overrides
from .counter_machine import counter_machine_to_channel_automaton, load_counter_machine
from .dot import export_dot
from .errors import LiftError, ModelError, TopologyError
from .gadgets import crosscheck_gadget, gen_selfloop_sim, gen_subset_sum, gen_three_cta
from .metrics import SearchStats
from .model import analyze_topology, load_model, parse_model, serialize_model
from .oca import build_oca, decide_2cta_reach
from .regions import build_region_automaton
from .semantics import (
    ExploreBounds,
    Reached,
    explore_reach,
    format_configuration,
    parse_target,
    save_trace,
    simulate as simulate_run,
    steps_to_dict,
)
from .types import Network
from .validation import validate_config, validate_network
from .verdict import Method, Status, Verdict, write_verdict_jsonl

logger = logging.getLogger(__name__)


def _emit(data: Any) -> None:
    click.echo(json.dumps(data, sort_keys=True, indent=2))


def _load(model: str) -> Network:
    try:
        if model == "-":
            return parse_model(click.get_text_stream("stdin").read())
        return load_model(model)
    except OSError as exc:
        raise click.ClickException(f"{model}: {exc.strerror or exc}") from exc
    except ModelError as exc:
        raise click.ClickException(f"{model}: {exc}") from exc


def _split_stats(stats: SearchStats) -> tuple[dict[str, Any], float]:
    data = stats.to_dict()
    elapsed = float(data.pop("elapsed_ms"))
    return data, elapsed


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level (default: CTA_LOG_LEVEL or WARNING).",
)
@click.option("--threads", type=int, default=None, help="Exploration worker threads.")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None, threads: int | None) -> None:
    """Reachability tools for communicating timed automata."""
    config = with_overrides(
        VerifierConfig.from_env(),
        log_level=log_level.upper() if log_level else None,
        threads=threads,
    )
    try:
        for warning in validate_config(config):
            click.echo(f"warning: {warning.message}", err=True)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    logging.basicConfig(
        level=getattr(logging, config.log_level),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    ctx.obj = config


@cli.command()
@click.argument("model")
def validate(model: str) -> None:
    """Check MODEL and report diagnostics and its topology class."""
    net = _load(model)
    diagnostics = validate_network(net)
    _emit(
        {
            "diagnostics": [d.to_dict() for d in diagnostics],
            "topology": analyze_topology(net).to_dict(),
        }
    )


@cli.command()
@click.argument("model")
@click.option("--steps", type=int, default=20, show_default=True)
@click.option("--max-channel", type=int, default=None, help="Longest channel word.")
@click.option("--seed", type=int, default=None)
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def simulate(
    config: VerifierConfig,
    model: str,
    steps: int,
    max_channel: int | None,
    seed: int | None,
    trace_path: str | None,
) -> None:
    """Random walk of STEPS steps through MODEL."""
    net = _load(model)
    config = with_overrides(config, max_channel_len=max_channel)
    trace = simulate_run(
        net, steps, max_channel_len=config.max_channel_len, seed=seed, age_cap=config.age_cap
    )
    run_steps = [item.step for item in trace]
    if trace_path:
        save_trace(trace_path, run_steps)
    final = trace[-1].configuration if trace else None
    _emit(
        {
            "steps": steps_to_dict(run_steps),
            "configurations": [format_configuration(item.configuration) for item in trace],
            "final": final.to_dict(net) if final is not None else None,
        }
    )


def _reach(
    net: Network,
    method: Method,
    target_spec: str,
    config: VerifierConfig,
    max_steps: int | None,
) -> Verdict:
    try:
        target = parse_target(target_spec)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--target") from exc
    for automaton_id, location in target.locations:
        if automaton_id not in net.automaton_index:
            raise click.BadParameter(f"unknown automaton {automaton_id!r}", param_hint="--target")
        if location not in net.automaton(automaton_id).locations:
            raise click.BadParameter(
                f"{automaton_id} has no location {location!r}", param_hint="--target"
            )

    if method is Method.EXPLORE:
        bounds = ExploreBounds.from_config(config)
        result = explore_reach(net, bounds, target)
        stats, elapsed = _split_stats(result.stats)
        if isinstance(result, Reached):
            return Verdict(Status.REACHABLE, method, steps_to_dict(result.steps), stats, elapsed)
        return Verdict(Status.EXHAUSTED, method, None, stats, elapsed)

    if method is Method.OCA:
        try:
            verdict = decide_2cta_reach(net, target)
        except TopologyError as exc:
            return Verdict(Status.ERROR, method, message=str(exc))
        stats, elapsed = _split_stats(verdict.stats)
        if verdict.reachable:
            return Verdict(Status.REACHABLE, method, steps_to_dict(verdict.steps), stats, elapsed)
        return Verdict(Status.UNREACHABLE, method, None, stats, elapsed)

    result_b = decide_bmps_reach(
        net,
        target,
        contexts=config.contexts,
        phase_bound=config.phase_bound,
        max_steps=max_steps if max_steps is not None else 200,
        max_stack_depth=config.max_stack_depth,
    )
    stats, elapsed = _split_stats(result_b.stats)
    if result_b.reached:
        return Verdict(Status.REACHABLE, method, steps_to_dict(result_b.steps), stats, elapsed)
    return Verdict(Status.EXHAUSTED, method, None, stats, elapsed)


@cli.command()
@click.argument("model")
@click.option(
    "--method",
    type=click.Choice([m.value for m in Method]),
    default=Method.EXPLORE.value,
    show_default=True,
)
@click.option("--target", "target_spec", required=True, help="e.g. A:s2,B:q2,channel-empty")
@click.option("--phase-bound", type=int, default=None)
@click.option("--contexts", type=int, default=None)
@click.option("--max-steps", type=int, default=None)
@click.option("--max-channel", type=int, default=None)
@click.option("--no-timing", is_flag=True, help="Leave elapsed time out of the verdict.")
@click.pass_obj
def reach(
    config: VerifierConfig,
    model: str,
    method: str,
    target_spec: str,
    phase_bound: int | None,
    contexts: int | None,
    max_steps: int | None,
    max_channel: int | None,
    no_timing: bool,
) -> None:
    """Decide or search reachability of a target in MODEL."""
    net = _load(model)
    config = with_overrides(
        config,
        phase_bound=phase_bound,
        contexts=contexts,
        max_steps=max_steps,
        max_channel_len=max_channel,
    )
    try:
        validate_config(config)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    chosen = Method(method)
    try:
        verdict = _reach(net, chosen, target_spec, config, max_steps)
    except LiftError as exc:
        logger.error("witness lifting failed: %s", exc)
        _emit(Verdict(Status.ERROR, chosen, message=str(exc)).to_dict(include_timing=False))
        sys.exit(1)
    if config.verdicts_jsonl_path is not None:
        write_verdict_jsonl(
            config.verdicts_jsonl_path, verdict, {"model": model, "target": target_spec}
        )
    click.echo(json.dumps(verdict.to_dict(include_timing=not no_timing), sort_keys=True))


@cli.group()
def gen() -> None:
    """Generate reduction networks."""


@gen.command("two-counter")
@click.argument("program", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--variant",
    type=click.Choice(["three-cta", "selfloop"]),
    default="three-cta",
    show_default=True,
)
@click.option("--ghosts", is_flag=True, help="Add the never-reset bookkeeping clocks.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def gen_two_counter(program: str, variant: str, ghosts: bool, out: str | None) -> None:
    """Encode a two-counter PROGRAM as a network."""
    try:
        machine = load_counter_machine(program)
        if variant == "three-cta":
            net = gen_three_cta(machine, ghosts=ghosts)
        else:
            net = gen_selfloop_sim(counter_machine_to_channel_automaton(machine))
    except (ValueError, KeyError) as exc:
        raise click.ClickException(f"{program}: {exc}") from exc
    _write_model(net, out)


@gen.command("subset-sum")
@click.option("--set", "values", required=True, help="Comma-separated positive values.")
@click.option("--target", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def gen_subset_sum_command(values: str, target: int, out: str | None) -> None:
    """Subset-sum instance: B:r_f is reachable iff a subset sums to TARGET."""
    try:
        parsed = [int(v) for v in values.split(",") if v.strip()]
        net = gen_subset_sum(parsed, target)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--set") from exc
    _write_model(net, out)


def _write_model(net: Network, out: str | None) -> None:
    text = serialize_model(net)
    if out is None:
        click.echo(text, nl=False)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


@cli.command()
@click.argument("model")
@click.option("--what", required=True, help="region:<automaton>, oca or bmps")
@click.option("--dot", "dot_path", required=True, type=click.Path(dir_okay=False))
@click.option("--contexts", type=int, default=None)
@click.pass_obj
def export(
    config: VerifierConfig, model: str, what: str, dot_path: str, contexts: int | None
) -> None:
    """Write a DOT graph of a construction built from MODEL."""
    net = _load(model)
    kind, _, automaton_id = what.partition(":")
    try:
        if kind == "region":
            if automaton_id not in net.automaton_index:
                raise click.BadParameter(f"unknown automaton {automaton_id!r}", param_hint="--what")
            obj: Any = build_region_automaton(net.automaton(automaton_id), net.max_constant)
        elif kind == "oca":
            obj = build_oca(net)
        elif kind == "bmps":
            obj = build_bmps(net, contexts if contexts is not None else config.contexts)
        else:
            raise click.BadParameter(f"unknown export {what!r}", param_hint="--what")
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    try:
        export_dot(obj, dot_path)
    except OSError as exc:
        raise click.ClickException(f"{dot_path}: {exc.strerror or exc}") from exc
    _emit({"what": what, "dot": dot_path})


@cli.command()
@click.argument("programs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--steps", type=int, default=25, show_default=True)
def crosscheck(programs: Sequence[str], steps: int) -> None:
    """Co-simulate two-counter PROGRAMS with their three-automata encoding."""
    reports = []
    for program in tqdm(programs, desc="crosscheck", unit="program", file=sys.stderr):
        try:
            machine = load_counter_machine(program)
            report = crosscheck_gadget(machine, steps)
        except (ValueError, KeyError) as exc:
            raise click.ClickException(f"{program}: {exc}") from exc
        data = report.to_dict()
        data["stats"].pop("elapsed_ms", None)
        reports.append({"program": program, **data})
    _emit({"ok": all(r["ok"] for r in reports), "programs": reports})


def run_command(argv: Sequence[str]) -> int:
    """Run the CLI with ``argv`` and return its exit status."""
    try:
        cli.main(args=list(argv), prog_name="ctakit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


def main() -> None:
    cli(prog_name="ctakit")


if __name__ == "__main__":
    main()
