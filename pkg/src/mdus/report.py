from __future__ import annotations

from dataclasses import dataclass, field

from .matching import MultiDimPattern
from .model import Money

STATS_KEYS = ("algo", "delta", "min_util", "db_util", "candidates_seq", "candidates_dim",
              "candidates_total", "pattern_count", "runtime_ms")


@dataclass
class MiningReport:
    """Canonically sorted ``(pattern, utility)`` pairs plus run counters."""

    patterns: list
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.patterns = sorted(self.patterns, key=lambda pu: pu[0].sort_key())
        self.stats["pattern_count"] = len(self.patterns)

    def as_dict(self) -> dict:
        return {p: u for p, u in self.patterns}

    def as_set(self) -> set:
        return set(self.patterns)

    def utility_of(self, pattern: MultiDimPattern) -> Money:
        return self.as_dict()[pattern]

    def __contains__(self, item):
        if isinstance(item, MultiDimPattern):
            return item in self.as_dict()
        return item in self.as_set()

    def __len__(self):
        return len(self.patterns)
