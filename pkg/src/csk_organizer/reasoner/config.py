"""Search configuration and its key-value file format.

Example file::

    # depth-3 search, widest first hop used for the explainability runs
    max_depth = 3
    beam_width = 50            # or "unlimited"
    strategy = first_edge      # or "average"
    first_hop_relations = AtLocation, UsedFor
    relations = all
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..errors import ConfigError
from ..kg.labels import relation_names
from .paths import ScoringStrategy

_KEYS = ("max_depth", "beam_width", "strategy", "first_hop_relations", "relations")


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 3
    beam_width: int | None = 50
    strategy: ScoringStrategy = ScoringStrategy.FIRST_EDGE
    first_hop_relations: frozenset[str] | None = field(default_factory=lambda: frozenset({"AtLocation"}))
    relations: frozenset[str] | None = None

    def __post_init__(self) -> None:
        if isinstance(self.max_depth, bool) or not isinstance(self.max_depth, int) or self.max_depth < 1:
            raise ConfigError(f"max_depth must be an integer >= 1, got {self.max_depth!r}")
        if self.beam_width is not None and (
            isinstance(self.beam_width, bool) or not isinstance(self.beam_width, int) or self.beam_width < 1
        ):
            raise ConfigError(f"beam_width must be >= 1 or None, got {self.beam_width!r}")
        try:
            object.__setattr__(self, "strategy", ScoringStrategy.parse(self.strategy))
            object.__setattr__(self, "first_hop_relations", relation_names(self.first_hop_relations))
            object.__setattr__(self, "relations", relation_names(self.relations))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def unlimited(self) -> SearchConfig:
        """Same search without beam pruning."""
        return replace(self, beam_width=None)

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> SearchConfig:
        unknown = set(values) - set(_KEYS)
        if unknown:
            raise ConfigError(f"unknown search config keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        try:
            if "max_depth" in values:
                kwargs["max_depth"] = int(values["max_depth"])
            if "beam_width" in values:
                v = values["beam_width"].strip().lower()
                kwargs["beam_width"] = None if v in ("unlimited", "none", "0", "") else int(v)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if "strategy" in values:
            kwargs["strategy"] = values["strategy"]
        for key in ("first_hop_relations", "relations"):
            if key in values:
                v = values[key].strip()
                kwargs[key] = None if v.lower() in ("all", "*", "") else [x for x in v.split(",") if x.strip()]
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> SearchConfig:
        text = Path(path).read_text(encoding="utf-8")
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        if not text.lstrip().startswith("["):
            text = "[search]\n" + text
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
        if not parser.has_section("search"):
            raise ConfigError(f"{path}: no [search] section")
        return cls.from_mapping(dict(parser.items("search")))

    def to_text(self) -> str:
        def rels(v):
            return "all" if v is None else ", ".join(sorted(v))

        return (
            f"max_depth = {self.max_depth}\n"
            f"beam_width = {'unlimited' if self.beam_width is None else self.beam_width}\n"
            f"strategy = {self.strategy.value}\n"
            f"first_hop_relations = {rels(self.first_hop_relations)}\n"
            f"relations = {rels(self.relations)}\n"
        )


DEFAULT_CONFIG = SearchConfig()
# wider first hop so a UsedFor anchor (playroom -> fun) can explain a placement
EXPLAINABILITY_CONFIG = SearchConfig(first_hop_relations=frozenset({"AtLocation", "UsedFor"}))
