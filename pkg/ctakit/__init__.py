"""ctakit: reachability tools for communicating timed automata over discrete time.

Networks of timed automata exchange aged messages over FIFO channels. The
package provides the reference semantics with a bounded explorer, an exact
decision procedure for two automata joined by one channel, a phase-bounded
witness search for bounded-context networks, and generators for the
reduction gadgets.

Example:
    >>> from ctakit import decide_2cta_reach, example_two_chain
    >>> verdict = decide_2cta_reach(example_two_chain(), {"A": "s2", "B": "q2"})
    >>> verdict.reachable
    True
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("ctakit")
except PackageNotFoundError:  # pragma: no cover
    # Fallback for editable installs without metadata or direct source usage.
    __version__ = "0.0.0"

# Model
from .types import (
    INF,
    Atom,
    Automaton,
    Channel,
    ClockConstraint,
    Interval,
    Network,
    Nop,
    Read,
    Transition,
    Write,
)
from .model import (
    Classification,
    TopologyReport,
    analyze_topology,
    load_model,
    parse_model,
    save_model,
    serialize_model,
)
from .validation import Diagnostic, validate_config, validate_network
from .config import VerifierConfig, with_overrides
from .errors import (
    LiftError,
    ModelError,
    ModelReferenceError,
    ModelSyntaxError,
    RegionBoundError,
    ReplayError,
    TopologyError,
)

# Semantics
from .semantics import (
    Configuration,
    Discrete,
    Elapse,
    Exhausted,
    ExploreBounds,
    Reached,
    Target,
    TimedWord,
    TraceStep,
    enabled_discrete,
    explore_reach,
    initial_configuration,
    load_trace,
    parse_target,
    reachable_locations,
    replay,
    save_trace,
    simulate,
    timed_step,
)
from .contexts import ContextAnnotation, annotate_contexts

# Regions
from .regions import RegionAutomaton, RegionState, build_region_automaton, region_nonempty

# One-counter reduction
from .pushdown import Rule, pre_star
from .oca import (
    OcaState,
    OneCounterSystem,
    TwoCtaVerdict,
    audit_witness,
    build_oca,
    decide_2cta_reach,
    pushdown_reach,
)

# Multistack translation
from .bmps import (
    Bmps,
    BmpsVerdict,
    ExplicitMps,
    MultistackSystem,
    PhaseTrace,
    TimedMps,
    build_bmps,
    count_phases,
    decide_bmps_reach,
    induce_bmps_trace,
    phase_bounded_reach,
    reconstruct_channel,
    regionize_mps,
)

# Gadgets
from .counter_machine import (
    ChannelAutomaton,
    Dec,
    Halt,
    IfZero,
    Inc,
    TwoCounterMachine,
    counter_machine_to_channel_automaton,
    load_counter_machine,
    run_2cm,
    save_counter_machine,
)
from .gadgets import (
    CrosscheckReport,
    crosscheck_gadget,
    gen_selfloop_sim,
    gen_subset_sum,
    gen_three_cta,
    subset_sum_oracle,
)
from .catalog import bounded_context_example, example_two_chain

# Output
from .dot import export_dot, to_dot
from .verdict import Method, Status, Verdict, write_verdict_jsonl
from .metrics import SearchStats, log_search_stats

__all__ = [
    # Version
    "__version__",
    # Model
    "INF",
    "Atom",
    "Automaton",
    "Channel",
    "ClockConstraint",
    "Interval",
    "Network",
    "Nop",
    "Read",
    "Transition",
    "Write",
    "Classification",
    "TopologyReport",
    "analyze_topology",
    "load_model",
    "parse_model",
    "save_model",
    "serialize_model",
    "Diagnostic",
    "validate_config",
    "validate_network",
    "VerifierConfig",
    "with_overrides",
    # Errors
    "LiftError",
    "ModelError",
    "ModelReferenceError",
    "ModelSyntaxError",
    "RegionBoundError",
    "ReplayError",
    "TopologyError",
    # Semantics
    "Configuration",
    "Discrete",
    "Elapse",
    "Exhausted",
    "ExploreBounds",
    "Reached",
    "Target",
    "TimedWord",
    "TraceStep",
    "enabled_discrete",
    "explore_reach",
    "initial_configuration",
    "load_trace",
    "parse_target",
    "reachable_locations",
    "replay",
    "save_trace",
    "simulate",
    "timed_step",
    "ContextAnnotation",
    "annotate_contexts",
    # Regions
    "RegionAutomaton",
    "RegionState",
    "build_region_automaton",
    "region_nonempty",
    # One-counter reduction
    "Rule",
    "pre_star",
    "OcaState",
    "OneCounterSystem",
    "TwoCtaVerdict",
    "audit_witness",
    "build_oca",
    "decide_2cta_reach",
    "pushdown_reach",
    # Multistack translation
    "Bmps",
    "BmpsVerdict",
    "ExplicitMps",
    "MultistackSystem",
    "PhaseTrace",
    "TimedMps",
    "build_bmps",
    "count_phases",
    "decide_bmps_reach",
    "induce_bmps_trace",
    "phase_bounded_reach",
    "reconstruct_channel",
    "regionize_mps",
    # Gadgets
    "ChannelAutomaton",
    "Dec",
    "Halt",
    "IfZero",
    "Inc",
    "TwoCounterMachine",
    "counter_machine_to_channel_automaton",
    "load_counter_machine",
    "run_2cm",
    "save_counter_machine",
    "CrosscheckReport",
    "crosscheck_gadget",
    "gen_selfloop_sim",
    "gen_subset_sum",
    "gen_three_cta",
    "subset_sum_oracle",
    "bounded_context_example",
    "example_two_chain",
    # Output
    "export_dot",
    "to_dot",
    "Method",
    "Status",
    "Verdict",
    "write_verdict_jsonl",
    "SearchStats",
    "log_search_stats",
]
