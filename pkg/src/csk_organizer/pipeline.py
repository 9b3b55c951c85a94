"""Sort a stream of detections into context bins and keep an auditable log.

Input is a JSON-lines detection stream, one object per line::

    {"frame": 0, "label": "pear", "confidence": 0.91, "bbox": [12, 40, 64, 80]}

Output is a JSON-lines decision log, one record per processed detection, with
fields in this fixed order::

    frame, label, concept, bin, reason, score, path, timestamp

``path`` is the rendered explanation (see :func:`render_path`), ``bin``,
``score`` and ``path`` are null for objects that were not placed.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import math
import os
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path

from .bins import BinRegistry, as_registry, load_bins
from .errors import CorruptLogLine, StreamParseError, UnknownBin
from .kg import KnowledgeGraph, normalize_label
from .reasoner import DEFAULT_CONFIG, Decision, Reason, SearchConfig, classify

log = logging.getLogger(__name__)

LOG_FIELDS = ("frame", "label", "concept", "bin", "reason", "score", "path", "timestamp")

__all__ = [
    "LOG_FIELDS",
    "DecisionRecord",
    "DetectionEvent",
    "LogEntry",
    "PipelineConfig",
    "RunResult",
    "SortState",
    "SortedObject",
    "load_bins",
    "read_log",
    "read_stream",
    "replay",
    "run",
    "write_log",
]


@dataclass(frozen=True)
class DetectionEvent:
    frame: int
    label: str
    confidence: float
    bbox: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if isinstance(self.frame, bool) or not isinstance(self.frame, int) or self.frame < 0:
            raise ValueError(f"frame must be a nonnegative integer, got {self.frame!r}")
        if not isinstance(self.label, str) or not self.label.strip():
            raise ValueError("label must be a non-empty string")
        c = self.confidence
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not 0.0 <= c <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {c!r}")
        box = tuple(self.bbox)
        if len(box) != 4 or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in box):
            raise ValueError(f"bbox must be 4 numbers, got {self.bbox!r}")
        if any(not math.isfinite(v) or v < 0 for v in box):
            raise ValueError(f"bbox coordinates must be nonnegative, got {self.bbox!r}")
        if box[2] <= 0 or box[3] <= 0:
            raise ValueError(f"bbox width and height must be positive, got {self.bbox!r}")
        object.__setattr__(self, "bbox", box)
        object.__setattr__(self, "confidence", float(c))

    def to_json(self) -> str:
        return json.dumps(
            {"frame": self.frame, "label": self.label, "confidence": self.confidence, "bbox": list(self.bbox)}
        )


def _parse_event(line: str, line_no: int) -> DetectionEvent:
    try:
        obj = json.loads(line)
    except ValueError as exc:
        raise StreamParseError(line_no, f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise StreamParseError(line_no, "expected a JSON object")
    frame = obj.get("frame") if isinstance(obj.get("frame"), int) else None
    try:
        return DetectionEvent(obj["frame"], obj["label"], obj["confidence"], tuple(obj["bbox"]))
    except KeyError as exc:
        raise StreamParseError(line_no, f"missing field {exc}", frame) from None
    except (TypeError, ValueError) as exc:
        raise StreamParseError(line_no, str(exc), frame) from None


def _numbered(source) -> Iterator[tuple[int, DetectionEvent | StreamParseError]]:
    if isinstance(source, (str, os.PathLike)):
        with Path(source).open(encoding="utf-8") as fh:
            yield from _numbered(fh)
        return
    for n, item in enumerate(source, start=1):
        if isinstance(item, DetectionEvent):
            yield n, item
            continue
        if not item.strip():
            continue
        try:
            yield n, _parse_event(item, n)
        except StreamParseError as err:
            yield n, err


def read_stream(source) -> Iterator[DetectionEvent | StreamParseError]:
    """Yield events from a JSONL path, an iterable of lines, or an iterable of events.

    Bad lines come out as :class:`StreamParseError` values rather than being
    raised, so a consumer can log them and carry on.
    """
    for _, item in _numbered(source):
        yield item


@dataclass(frozen=True)
class SortedObject:
    frame: int
    label: str
    concept: str


@dataclass
class SortState:
    bins: dict[str, list[SortedObject]]
    unmatched: list[SortedObject] = field(default_factory=list)
    frames: int = 0

    @classmethod
    def empty(cls, registry: BinRegistry) -> SortState:
        return cls({b.bin_id: [] for b in registry})

    @property
    def placed(self) -> int:
        return sum(len(v) for v in self.bins.values())

    @property
    def total(self) -> int:
        return self.placed + len(self.unmatched)

    def counts(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.bins.items()}


@dataclass(frozen=True)
class DecisionRecord:
    frame: int
    label: str
    concept: str
    decision: Decision
    explanation: str | None
    timestamp: str

    def to_log(self) -> dict:
        d = self.decision
        return {
            "frame": self.frame,
            "label": self.label,
            "concept": self.concept,
            "bin": d.chosen_bin,
            "reason": d.reason.value,
            "score": d.score,
            "path": self.explanation,
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_log(), ensure_ascii=False)


@dataclass(frozen=True)
class PipelineConfig:
    min_confidence: float = 0.5
    dedup: bool = True
    search: SearchConfig = DEFAULT_CONFIG
    annotate: bool = False


@dataclass
class RunResult:
    state: SortState
    records: list[DecisionRecord]
    errors: list[StreamParseError] = field(default_factory=list)
    skipped_low_confidence: int = 0
    annotations: list[str] = field(default_factory=list)

    def __iter__(self):
        # unpacks as (state, records)
        return iter((self.state, self.records))


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="microseconds")


def run(
    stream,
    bins,
    graph: KnowledgeGraph,
    cfg: PipelineConfig = PipelineConfig(),
    clock: Callable[[], str] = _now,
) -> RunResult:
    """Classify every confident detection in stream order and place it.

    Objects without any path to a bin go to ``state.unmatched`` and are not
    force-assigned. With ``cfg.dedup`` each distinct concept is classified
    once per run and its decision reused.
    """
    registry = as_registry(bins)
    state = SortState.empty(registry)
    result = RunResult(state, [])
    cache: dict[str, Decision] = {}
    frames_seen: set[int] = set()
    current: tuple[int, list[str]] | None = None

    def flush() -> None:
        if current is not None:
            line = f"frame {current[0]}: " + ", ".join(current[1])
            log.info(line)
            if cfg.annotate:
                result.annotations.append(line)

    for line_no, item in _numbered(stream):
        if isinstance(item, StreamParseError):
            log.warning("skipping detection: %s", item)
            result.errors.append(item)
            continue
        if item.confidence < cfg.min_confidence:
            result.skipped_low_confidence += 1
            continue
        try:
            concept = normalize_label(item.label)
        except ValueError as exc:
            err = StreamParseError(line_no, f"label {item.label!r}: {exc}", item.frame)
            log.warning("skipping detection: %s", err)
            result.errors.append(err)
            continue

        decision = cache.get(concept) if cfg.dedup else None
        if decision is None:
            decision = classify(graph, concept, registry, cfg.search)
            if cfg.dedup:
                cache[concept] = decision

        obj = SortedObject(item.frame, item.label, concept)
        if decision.reason is Reason.MATCHED:
            state.bins[decision.chosen_bin].append(obj)
        else:
            state.unmatched.append(obj)
        frames_seen.add(item.frame)
        result.records.append(
            DecisionRecord(item.frame, item.label, concept, decision, decision.explanation, clock())
        )

        if current is None or current[0] != item.frame:
            flush()
            current = (item.frame, [])
        current[1].append(f"{concept}->{decision.chosen_bin or 'unmatched'}")

    flush()
    state.frames = len(frames_seen)
    return result


def write_log(records: Iterable[DecisionRecord], path: str | os.PathLike) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
    return path


@dataclass(frozen=True)
class LogEntry:
    line: int
    frame: int
    label: str
    concept: str
    bin: str | None
    reason: Reason
    score: float | None
    path: str | None
    timestamp: str


def _entry(obj, n: int) -> LogEntry:
    if not isinstance(obj, dict):
        raise CorruptLogLine(n, "not a JSON object")
    missing = [f for f in LOG_FIELDS if f not in obj]
    if missing:
        raise CorruptLogLine(n, f"missing fields {missing}")
    frame, label, concept, bin_id = obj["frame"], obj["label"], obj["concept"], obj["bin"]
    score, path, ts = obj["score"], obj["path"], obj["timestamp"]
    if isinstance(frame, bool) or not isinstance(frame, int) or frame < 0:
        raise CorruptLogLine(n, "bad frame")
    if not isinstance(label, str) or not isinstance(concept, str) or not concept:
        raise CorruptLogLine(n, "bad label or concept")
    try:
        reason = Reason(obj["reason"])
    except ValueError:
        raise CorruptLogLine(n, f"unknown reason {obj['reason']!r}") from None
    if score is not None and (isinstance(score, bool) or not isinstance(score, (int, float))):
        raise CorruptLogLine(n, "bad score")
    if not isinstance(ts, str):
        raise CorruptLogLine(n, "bad timestamp")
    if reason is Reason.MATCHED:
        if not isinstance(bin_id, str) or not isinstance(path, str) or score is None:
            raise CorruptLogLine(n, "matched record without bin, score or path")
    elif bin_id is not None:
        raise CorruptLogLine(n, "unplaced record names a bin")
    return LogEntry(n, frame, label, concept, bin_id, reason, None if score is None else float(score), path, ts)


def read_log(source) -> list[LogEntry]:
    """Parse a decision log (path or iterable of lines); raises CorruptLogLine."""
    if isinstance(source, (str, os.PathLike)):
        with Path(source).open(encoding="utf-8") as fh:
            return read_log(list(fh))
    entries = []
    for n, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise CorruptLogLine(n, f"invalid JSON: {exc}") from None
        entries.append(_entry(obj, n))
    return entries


def replay(log_source, bins) -> SortState:
    """Rebuild the sort state from a decision log alone."""
    registry = as_registry(bins)
    state = SortState.empty(registry)
    frames = set()
    for e in read_log(log_source):
        obj = SortedObject(e.frame, e.label, e.concept)
        if e.reason is Reason.MATCHED:
            if e.bin not in state.bins:
                raise UnknownBin(e.bin, e.line)
            state.bins[e.bin].append(obj)
        else:
            state.unmatched.append(obj)
        frames.add(e.frame)
    state.frames = len(frames)
    return state
