"""History-deterministic pushdown automata toolkit."""

from .core import (
    BOTTOM,
    EOW,
    EPSILON,
    Alphabet,
    AutomatonError,
    Configuration,
    Partition,
    Pda,
    PdTransducer,
    PositionalResolver,
    Resolver,
    ResolverError,
    Run,
    Transition,
    complete,
    enabled,
    is_deterministic,
    mkalphabet,
    mkpda,
    replay,
    run_with_eow_resolver,
    run_with_resolver,
    step,
    validate,
)

__all__ = [
    "BOTTOM", "EOW", "EPSILON", "Alphabet", "AutomatonError", "Configuration",
    "Partition", "Pda", "PdTransducer", "PositionalResolver", "Resolver",
    "ResolverError", "Run", "Transition", "complete", "enabled",
    "is_deterministic", "mkalphabet", "mkpda", "replay",
    "run_with_eow_resolver", "run_with_resolver", "step", "validate",
]

__version__ = "0.1.0"
