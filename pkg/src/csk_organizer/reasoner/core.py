"""Path search between a context concept and an object, and bin selection."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from ..bins import BinRegistry, as_registry
from ..errors import EmptyBinRegistry, FocusNotSubset
from ..kg import Direction, KnowledgeGraph, Traversal, normalize_label
from .config import DEFAULT_CONFIG, SearchConfig
from .paths import Hop, ReasoningPath, ScoringStrategy, render_path, score_path


class Reason(Enum):
    MATCHED = "matched"
    UNMATCHED = "unmatched"
    UNKNOWN_OBJECT = "unknown_object"


@dataclass(frozen=True)
class BinScore:
    bin_id: str
    context: str
    path: ReasoningPath | None
    score: float | None


@dataclass(frozen=True)
class Decision:
    object: str
    chosen_bin: str | None
    winning_path: ReasoningPath | None
    score: float | None
    per_bin_ranking: tuple[BinScore, ...]
    reason: Reason

    @property
    def matched(self) -> bool:
        return self.reason is Reason.MATCHED

    @property
    def explanation(self) -> str | None:
        return None if self.winning_path is None else render_path(self.winning_path)


def path_sort_key(path: ReasoningPath, cfg: SearchConfig) -> tuple:
    return (-score_path(path, cfg.strategy), len(path.hops), render_path(path))


def _raw_paths(g: KnowledgeGraph, context: str, obj: str, cfg: SearchConfig) -> list[tuple[tuple[int, int], ...]]:
    """Depth-first search; each result is a tuple of ``(edge id, traversal)`` hops."""
    s, t = g.node_id(context), g.node_id(obj)
    if s is None or t is None or s == t:
        return []
    first_ids = g.relation_ids(cfg.first_hop_relations)
    later_ids = g.relation_ids(cfg.relations)
    max_depth, beam = cfg.max_depth, cfg.beam_width

    # hops that land on the target, keyed by the node they leave from
    into_target: dict[int, list[tuple[int, int, int]]] = {}
    for _, r, other, trav, eid in g.iter_neighbor_ids(t, Direction.BOTH):
        # t's outgoing edge (trav 0) is walked against its direction when arriving at t
        into_target.setdefault(other, []).append((r, 1 - trav, eid))

    found: list[tuple[tuple[int, int], ...]] = []
    stack: list[tuple[int, int]] = []
    visited = {s}

    def walk(u: int, depth: int) -> None:
        allowed = first_ids if depth == 0 else later_ids
        for r, trav, eid in into_target.get(u, ()):
            if allowed is None or r in allowed:
                found.append((*stack, (eid, trav)))
        if depth + 1 >= max_depth:
            return
        taken = 0
        for _, _, other, trav, eid in g.iter_neighbor_ids(u, Direction.BOTH, allowed):
            if other == t or other in visited:
                continue
            if beam is not None and taken >= beam:
                break
            taken += 1
            visited.add(other)
            stack.append((eid, trav))
            walk(other, depth + 1)
            stack.pop()
            visited.discard(other)

    walk(s, 0)
    return found


class _Builder:
    """Turns raw hops into Hop objects and sort keys, sharing work across paths."""

    def __init__(self, g: KnowledgeGraph, cfg: SearchConfig) -> None:
        self.g = g
        self.average = cfg.strategy is ScoringStrategy.AVERAGE
        self.hops: dict[tuple[int, int], tuple[Hop, str]] = {}

    def hop(self, key: tuple[int, int]) -> tuple[Hop, str]:
        got = self.hops.get(key)
        if got is None:
            eid, trav = key
            e = self.g.edge(eid)
            if trav == 0:
                h = Hop(e.start, e.end, e.relation, e.weight, Traversal.WITH_EDGE)
                text = f" -({e.relation.name})-> {e.end}"
            else:
                h = Hop(e.end, e.start, e.relation, e.weight, Traversal.AGAINST_EDGE)
                text = f" <-({e.relation.name})- {e.start}"
            got = self.hops[key] = (h, text)
        return got

    def key(self, raw: tuple[tuple[int, int], ...]) -> tuple:
        parts = [self.hop(k) for k in raw]
        if self.average:
            score = math.fsum(h.weight for h, _ in parts) / len(parts)
        else:
            score = parts[0][0].weight
        return (-score, len(parts), parts[0][0].source + "".join(t for _, t in parts))

    def path(self, raw: tuple[tuple[int, int], ...]) -> ReasoningPath:
        return ReasoningPath._trusted(tuple(self.hop(k)[0] for k in raw))


def enumerate_paths(
    g: KnowledgeGraph,
    context: str,
    obj: str,
    cfg: SearchConfig = DEFAULT_CONFIG,
) -> list[ReasoningPath]:
    """All simple paths from ``context`` to ``obj`` of at most ``cfg.max_depth`` hops.

    The first hop must use a relation from ``cfg.first_hop_relations``, later
    hops one from ``cfg.relations``; any hop may run with or against its edge.
    With a beam width ``k`` only the ``k`` strongest admissible neighbors of a
    node are expanded as intermediate concepts; a hop that lands on ``obj`` is
    always kept. Results are ordered best first: score, then fewer hops, then
    rendered text.
    """
    raw = _raw_paths(g, context, obj, cfg)
    b = _Builder(g, cfg)
    raw.sort(key=b.key)
    return [b.path(r) for r in raw]


def best_path(
    g: KnowledgeGraph,
    context: str,
    obj: str,
    cfg: SearchConfig = DEFAULT_CONFIG,
) -> ReasoningPath | None:
    """The first path :func:`enumerate_paths` would return, without building the rest."""
    raw = _raw_paths(g, context, obj, cfg)
    if not raw:
        return None
    b = _Builder(g, cfg)
    return b.path(min(raw, key=b.key))


def rank_bins(
    g: KnowledgeGraph,
    obj: str,
    bins: BinRegistry,
    cfg: SearchConfig = DEFAULT_CONFIG,
) -> tuple[BinScore, ...]:
    """Best path and score per bin, in registry order."""
    out = []
    for b in bins:
        best = best_path(g, b.context, obj, cfg)
        if best is not None:
            out.append(BinScore(b.bin_id, b.context, best, score_path(best, cfg.strategy)))
        else:
            out.append(BinScore(b.bin_id, b.context, None, None))
    return tuple(out)


def decide(obj: str, ranking: Iterable[BinScore], reason_if_empty: Reason = Reason.UNMATCHED) -> Decision:
    """Pick the winning bin: highest score, fewer hops, rendered path, bin id."""
    ranking = tuple(ranking)
    scored = [b for b in ranking if b.path is not None]
    if not scored:
        return Decision(obj, None, None, None, ranking, reason_if_empty)
    best = min(scored, key=lambda b: (-b.score, len(b.path.hops), render_path(b.path), b.bin_id))
    return Decision(obj, best.bin_id, best.path, best.score, ranking, Reason.MATCHED)


def classify(
    g: KnowledgeGraph,
    obj: str,
    bins,
    cfg: SearchConfig = DEFAULT_CONFIG,
) -> Decision:
    """Choose a bin for ``obj``; ``bins`` is a BinRegistry or anything BinRegistry.of accepts."""
    bins = as_registry(bins)
    if not len(bins):
        raise EmptyBinRegistry("no bins to classify into")
    obj = normalize_label(obj)
    if obj not in g:
        empty = tuple(BinScore(b.bin_id, b.context, None, None) for b in bins)
        return Decision(obj, None, None, None, empty, Reason.UNKNOWN_OBJECT)
    return decide(obj, rank_bins(g, obj, bins, cfg))


def classify_focused(
    g: KnowledgeGraph,
    obj: str,
    bins,
    focus: Iterable[str],
    cfg: SearchConfig = DEFAULT_CONFIG,
) -> Decision:
    """:func:`classify` restricted to the bins whose ids are in ``focus``."""
    bins = as_registry(bins)
    focus = list(focus)
    missing = [f for f in focus if f not in bins]
    if missing:
        raise FocusNotSubset(f"focus bins not in the registry: {', '.join(map(repr, missing))}")
    restricted = bins.restrict(focus)
    if not len(restricted):
        raise EmptyBinRegistry("focus selects no bins")
    return classify(g, obj, restricted, cfg)


class Reasoner:
    """A graph and a search config bundled together."""

    def __init__(self, graph: KnowledgeGraph, config: SearchConfig = DEFAULT_CONFIG) -> None:
        self.graph = graph
        self.config = config

    def enumerate_paths(self, context: str, obj: str) -> list[ReasoningPath]:
        return enumerate_paths(self.graph, context, obj, self.config)

    def classify(self, obj: str, bins) -> Decision:
        return classify(self.graph, obj, bins, self.config)

    def classify_focused(self, obj: str, bins, focus: Iterable[str]) -> Decision:
        return classify_focused(self.graph, obj, bins, focus, self.config)
