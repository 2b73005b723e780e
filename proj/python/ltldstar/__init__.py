"""Incremental LTL motion planning with lexicographic (violation, travel) costs."""

from ._ltldstar import (
    NoAcceptingRun,
    Nba,
    ParseError,
    UnknownEdge,
    UnsupportedFeature,
    UsageError,
    benchmark_map,
    build,
    oracle,
    parse_nba,
    plan,
    random_map,
    sequencing_nba,
    simulate,
)

__all__ = [
    "NoAcceptingRun",
    "Nba",
    "ParseError",
    "UnknownEdge",
    "UnsupportedFeature",
    "UsageError",
    "benchmark_map",
    "build",
    "oracle",
    "parse_nba",
    "plan",
    "random_map",
    "sequencing_nba",
    "simulate",
]
