"""Run configuration: priority bound, resource guards, output options."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_MAX_PRIORITY = 12
GUARD_ENV_VAR = "OPG_GUARD_BYTES"


@dataclass(frozen=True)
class RunConfig:
    max_priority: int = DEFAULT_MAX_PRIORITY
    # distinct expression nodes built when unfolding a game into terms
    term_nodes: int = 10**6
    # states of one loop-elimination arena (oracle route)
    arena_states: int = 10**5
    # (exit, priority) outcomes enumerated by the arena oracle
    antichain_universe: int = 24
    # clauses held by a single normal form
    max_clauses: int = 200_000
    seed: int = 0
    output_format: str = "text"
    trace_path: str | None = None

    def __post_init__(self):
        if self.max_priority < 2:
            raise ValueError(f"max_priority must be >= 2, got {self.max_priority}")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def with_env_guards(self) -> "RunConfig":
        """Apply the OPG_GUARD_BYTES override, if set, to every size guard."""
        raw = os.environ.get(GUARD_ENV_VAR)
        if not raw:
            return self
        budget = int(raw)
        return replace(
            self,
            term_nodes=budget,
            arena_states=budget,
            max_clauses=budget,
        )


DEFAULT_CONFIG = RunConfig()
