"""Evaluation protocols: consistency, accuracy, adaptability and explanation audit.

Any object with ``classify(object, contexts)`` and
``classify_focused(object, contexts, focus)`` methods returning a context label
(or ``None``) can be evaluated; :class:`CSKClassifier` adapts the reasoner and
the stub classifiers exist to validate the metrics themselves.
"""

from __future__ import annotations

import csv
import json
import os
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from .bins import BinRegistry
from .errors import InvalidPath, InvalidTrial, MalformedCsv, MissingGroundTruth, PathParseError
from .kg import KnowledgeGraph, normalize_label
from .pipeline import read_log
from .reasoner import DEFAULT_CONFIG, Reason, ScoringStrategy, SearchConfig, classify, classify_focused, parse_path, score_path

NO_ANSWER = "<none>"


class Classifier(Protocol):
    def classify(self, obj: str, contexts: Sequence[str]) -> str | None: ...

    def classify_focused(self, obj: str, contexts: Sequence[str], focus: Sequence[str]) -> str | None: ...


class CSKClassifier:
    """The commonsense reasoner behind the harness interface; each context is its own bin."""

    def __init__(self, graph: KnowledgeGraph, config: SearchConfig = DEFAULT_CONFIG) -> None:
        self.graph = graph
        self.config = config

    def classify(self, obj: str, contexts: Sequence[str]) -> str | None:
        return classify(self.graph, obj, BinRegistry.of(contexts), self.config).chosen_bin

    def classify_focused(self, obj: str, contexts: Sequence[str], focus: Sequence[str]) -> str | None:
        keep = [normalize_label(f) for f in focus]
        return classify_focused(self.graph, obj, BinRegistry.of(contexts), keep, self.config).chosen_bin


class ConstantClassifier:
    """Always answers ``answer``; ignores focus directives."""

    def __init__(self, answer: str | None) -> None:
        self.answer = answer

    def classify(self, obj, contexts):
        return self.answer

    def classify_focused(self, obj, contexts, focus):
        return self.answer


class RoundRobinClassifier:
    """Cycles through ``answers`` on successive calls, across all objects."""

    def __init__(self, answers: Sequence[str]) -> None:
        self.answers = list(answers)
        self.calls = 0

    def _next(self) -> str:
        a = self.answers[self.calls % len(self.answers)]
        self.calls += 1
        return a

    def classify(self, obj, contexts):
        return self._next()

    def classify_focused(self, obj, contexts, focus):
        return self._next()


class NonAdaptiveClassifier:
    """Wraps a classifier and drops every focus directive."""

    def __init__(self, inner: Classifier) -> None:
        self.inner = inner

    def classify(self, obj, contexts):
        return self.inner.classify(obj, contexts)

    def classify_focused(self, obj, contexts, focus):
        return self.inner.classify(obj, contexts)


# -- inputs -----------------------------------------------------------------


@dataclass(frozen=True)
class TrialSpec:
    object: str
    contexts: tuple[str, ...]
    repetitions: int = 10
    focus: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "contexts", tuple(self.contexts))
        if self.focus is not None:
            object.__setattr__(self, "focus", tuple(self.focus))
        if not self.contexts:
            raise InvalidTrial(f"{self.object!r}: no candidate contexts")
        if isinstance(self.repetitions, bool) or not isinstance(self.repetitions, int) or self.repetitions < 1:
            raise InvalidTrial(f"{self.object!r}: repetitions must be >= 1")
        if self.focus is not None and (not self.focus or not set(self.focus) <= set(self.contexts)):
            raise InvalidTrial(f"{self.object!r}: focus must be a non-empty subset of the contexts")


def _split(cell: str) -> tuple[str, ...]:
    return tuple(normalize_label(x) for x in cell.split(";") if x.strip())


def load_trial_specs(path: str | os.PathLike) -> list[TrialSpec]:
    """Read ``object,contexts,repetitions[,focus]``; list cells are ``;``-separated."""
    specs = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header[:3] != ["object", "contexts", "repetitions"] or header[3:] not in ([], ["focus"]):
            raise MalformedCsv(1, "expected header 'object,contexts,repetitions[,focus]'")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            line = reader.line_num
            if len(row) not in (3, 4):
                raise MalformedCsv(line, f"expected 3 or 4 fields, got {len(row)}")
            try:
                focus = _split(row[3]) if len(row) == 4 and row[3].strip() else None
                specs.append(TrialSpec(normalize_label(row[0]), _split(row[1]), int(row[2]), focus))
            except (ValueError, InvalidTrial) as exc:
                raise MalformedCsv(line, str(exc)) from exc
    return specs


def write_trial_specs(specs: Iterable[TrialSpec], path: str | os.PathLike) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["object", "contexts", "repetitions", "focus"])
        for s in specs:
            w.writerow([s.object, ";".join(s.contexts), s.repetitions, ";".join(s.focus or ())])


@dataclass(frozen=True)
class GroundTruth:
    expected: dict[str, str]

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, str]]) -> GroundTruth:
        expected: dict[str, str] = {}
        for obj, ctx in rows:
            obj = normalize_label(obj)
            if obj in expected:
                raise InvalidTrial(f"duplicate ground truth for {obj!r}")
            expected[obj] = normalize_label(ctx)
        return cls(expected)

    def __getitem__(self, obj: str) -> str:
        try:
            return self.expected[obj]
        except KeyError:
            raise MissingGroundTruth(obj) from None

    def __contains__(self, obj: object) -> bool:
        return obj in self.expected


def load_ground_truth(path: str | os.PathLike) -> GroundTruth:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if [h.strip() for h in next(reader, [])] != ["object", "context"]:
            raise MalformedCsv(1, "expected header 'object,context'")
        rows = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise MalformedCsv(reader.line_num, f"expected 2 fields, got {len(row)}")
            rows.append((row[0], row[1]))
    return GroundTruth.from_rows(rows)


# -- reports ------------------------------------------------------------------


@dataclass
class TrialResult:
    spec: TrialSpec
    histogram: dict[str, int] = field(default_factory=dict)
    predominant: str | None = None
    consistency_rate: float | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class AccuracyRow:
    object: str
    expected: str
    predominant: str | None
    correct: bool


@dataclass
class ShiftRow:
    emphasized: str
    focus: tuple[str, ...]
    histogram: dict[str, int]
    answer: str | None
    shifted: bool
    matches_emphasized: bool


@dataclass
class AuditRow:
    line: int
    concept: str
    status: str  # pass | parse_error | invalid_path | score_mismatch
    detail: str = ""


@dataclass
class Report:
    protocol: str
    trials: list[TrialResult] = field(default_factory=list)
    accuracy: float | None = None
    accuracy_rows: list[AccuracyRow] = field(default_factory=list)
    preferred: str | None = None
    shift_table: list[ShiftRow] = field(default_factory=list)
    audit_rows: list[AuditRow] = field(default_factory=list)

    @property
    def consistency_rates(self) -> list[float | None]:
        return [t.consistency_rate for t in self.trials]

    @property
    def failed_trials(self) -> list[TrialResult]:
        return [t for t in self.trials if t.failed]

    @property
    def adaptive(self) -> bool | None:
        if self.protocol != "adaptability":
            return None
        return any(r.shifted for r in self.shift_table)

    @property
    def verdict(self) -> str | None:
        a = self.adaptive
        return None if a is None else ("ADAPTIVE" if a else "NON-ADAPTIVE")

    @property
    def audit_counts(self) -> dict[str, int]:
        c = Counter(r.status for r in self.audit_rows)
        return {k: c.get(k, 0) for k in ("pass", "parse_error", "invalid_path", "score_mismatch")}

    def summary(self) -> dict:
        out: dict = {"protocol": self.protocol}
        if self.trials:
            rates = [t.consistency_rate for t in self.trials if not t.failed]
            out["trials"] = len(self.trials)
            out["failed_trials"] = len(self.failed_trials)
            out["mean_consistency"] = sum(rates) / len(rates) if rates else None
            out["min_consistency"] = min(rates) if rates else None
            out["fully_consistent_trials"] = sum(1 for r in rates if r == 1.0)
        if self.protocol == "accuracy":
            out["accuracy"] = self.accuracy
            out["correct"] = sum(r.correct for r in self.accuracy_rows)
            out["scored"] = len(self.accuracy_rows)
        if self.protocol == "adaptability":
            out["preferred"] = self.preferred
            out["shift_rows"] = len(self.shift_table)
            out["shifted_rows"] = sum(r.shifted for r in self.shift_table)
            out["verdict"] = self.verdict
        if self.protocol == "audit":
            counts = self.audit_counts
            out["records"] = len(self.audit_rows)
            out.update(counts)
            out["all_pass"] = counts["pass"] == len(self.audit_rows)
        return out


def _histogram(answers: Iterable[str | None]) -> dict[str, int]:
    c = Counter(NO_ANSWER if a is None else a for a in answers)
    return dict(sorted(c.items(), key=lambda kv: (-kv[1], kv[0])))


def _modal(hist: dict[str, int]) -> str | None:
    if not hist:
        return None
    label = next(iter(hist))
    return None if label == NO_ANSWER else label


def _ask(spec: TrialSpec, classifier: Classifier) -> list[str | None]:
    return [
        classifier.classify(spec.object, spec.contexts)
        if spec.focus is None
        else classifier.classify_focused(spec.object, spec.contexts, spec.focus)
        for _ in range(spec.repetitions)
    ]


def _run_trial(spec: TrialSpec, classifier: Classifier, catch: bool = True) -> TrialResult:
    result = TrialResult(spec)
    if catch:
        try:
            answers = _ask(spec, classifier)
        except Exception as exc:  # a failing trial must not abort the suite
            result.error = f"{type(exc).__name__}: {exc}"
            return result
    else:
        answers = _ask(spec, classifier)
    result.histogram = _histogram(answers)
    result.predominant = _modal(result.histogram)
    result.consistency_rate = next(iter(result.histogram.values())) / spec.repetitions
    return result


def run_consistency(specs: Sequence[TrialSpec], classifier: Classifier) -> Report:
    """Repeat each trial and measure how often the modal answer comes back."""
    for s in specs:
        if s.repetitions < 2:
            raise InvalidTrial(f"{s.object!r}: consistency needs at least 2 repetitions")
    return Report("consistency", [_run_trial(s, classifier) for s in specs])


def run_accuracy(specs: Sequence[TrialSpec], truth: GroundTruth, classifier: Classifier) -> Report:
    for s in specs:
        expected = truth[s.object]
        if expected not in s.contexts:
            raise InvalidTrial(f"ground truth {expected!r} for {s.object!r} is not a candidate context")
    report = Report("accuracy", [_run_trial(s, classifier) for s in specs])
    for t in report.trials:
        expected = truth[t.spec.object]
        report.accuracy_rows.append(AccuracyRow(t.spec.object, expected, t.predominant, t.predominant == expected))
    report.accuracy = sum(r.correct for r in report.accuracy_rows) / len(specs) if specs else None
    return report


def run_adaptability(
    obj: str,
    contexts: Sequence[str],
    classifier: Classifier,
    repetitions: int = 10,
) -> Report:
    """Find the preferred context, then exclude it and see where answers go.

    One shift-table row per remaining context; every row queries with the
    preferred context removed from the focus set and records whether the
    answer moved and whether it landed on that row's context.
    """
    contexts = tuple(contexts)
    if len(contexts) < 2:
        raise InvalidTrial("adaptability needs at least two contexts")
    base = _run_trial(TrialSpec(obj, contexts, repetitions), classifier, catch=False)
    report = Report("adaptability", [base])
    report.preferred = base.predominant
    focus = tuple(c for c in contexts if c != base.predominant)
    for c in focus:
        trial = _run_trial(TrialSpec(obj, contexts, repetitions, focus), classifier, catch=False)
        report.trials.append(trial)
        report.shift_table.append(
            ShiftRow(
                emphasized=c,
                focus=focus,
                histogram=trial.histogram,
                answer=trial.predominant,
                shifted=trial.predominant != base.predominant,
                matches_emphasized=trial.predominant == c,
            )
        )
    return report


def run_explainability_audit(
    log_source,
    graph: KnowledgeGraph,
    strategy: ScoringStrategy = ScoringStrategy.FIRST_EDGE,
) -> Report:
    """Check every placed record: its path parses, exists in ``graph`` and reproduces the logged score."""
    report = Report("audit")
    for e in read_log(log_source):
        if e.reason is not Reason.MATCHED:
            continue
        try:
            path = parse_path(e.path, graph)
        except PathParseError as exc:
            report.audit_rows.append(AuditRow(e.line, e.concept, "parse_error", str(exc)))
            continue
        except InvalidPath as exc:
            report.audit_rows.append(AuditRow(e.line, e.concept, "invalid_path", str(exc)))
            continue
        if path.object != e.concept:
            report.audit_rows.append(
                AuditRow(e.line, e.concept, "invalid_path", f"path ends at {path.object!r}")
            )
            continue
        score = score_path(path, strategy)
        if score != e.score:
            report.audit_rows.append(
                AuditRow(e.line, e.concept, "score_mismatch", f"logged {e.score}, recomputed {score}")
            )
            continue
        report.audit_rows.append(AuditRow(e.line, e.concept, "pass"))
    return report


# -- report files ---------------------------------------------------------------

CONSISTENCY_COLUMNS = ("object", "contexts", "focus", "repetitions", "predominant", "consistency_rate", "histogram", "error")
ACCURACY_COLUMNS = ("object", "expected", "predominant", "correct")
ADAPTABILITY_COLUMNS = ("object", "preferred", "emphasized", "focus", "answer", "shifted", "matches_emphasized", "histogram")
AUDIT_COLUMNS = ("line", "concept", "status", "detail")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return ";".join(v)
    if isinstance(v, dict):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def report_rows(report: Report, obj: str | None = None) -> tuple[tuple[str, ...], list[list[str]]]:
    if report.protocol == "consistency":
        rows = [
            [t.spec.object, t.spec.contexts, t.spec.focus, t.spec.repetitions, t.predominant, t.consistency_rate, t.histogram, t.error]
            for t in report.trials
        ]
        return CONSISTENCY_COLUMNS, [[_cell(v) for v in r] for r in rows]
    if report.protocol == "accuracy":
        rows = [[r.object, r.expected, r.predominant, r.correct] for r in report.accuracy_rows]
        return ACCURACY_COLUMNS, [[_cell(v) for v in r] for r in rows]
    if report.protocol == "adaptability":
        name = obj or (report.trials[0].spec.object if report.trials else "")
        rows = [
            [name, report.preferred, r.emphasized, r.focus, r.answer, r.shifted, r.matches_emphasized, r.histogram]
            for r in report.shift_table
        ]
        return ADAPTABILITY_COLUMNS, [[_cell(v) for v in r] for r in rows]
    rows = [[r.line, r.concept, r.status, r.detail] for r in report.audit_rows]
    return AUDIT_COLUMNS, [[_cell(v) for v in r] for r in rows]


def write_reports(reports: Sequence[Report], out_dir: str | os.PathLike) -> Path:
    """Write ``<protocol>.csv`` (all reports of a protocol concatenated) and ``summary.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    by_protocol: dict[str, list[Report]] = {}
    for r in reports:
        by_protocol.setdefault(r.protocol, []).append(r)
    for protocol, group in by_protocol.items():
        with (out / f"{protocol}.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(report_rows(Report(protocol))[0])
            for r in group:
                w.writerows(report_rows(r)[1])
    summary = [r.summary() for r in reports]
    (out / "summary.json").write_text(
        json.dumps(summary[0] if len(summary) == 1 else summary, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return out


__all__ = [
    "NO_ANSWER",
    "AccuracyRow",
    "AuditRow",
    "CSKClassifier",
    "Classifier",
    "ConstantClassifier",
    "GroundTruth",
    "NonAdaptiveClassifier",
    "Report",
    "RoundRobinClassifier",
    "ShiftRow",
    "TrialResult",
    "TrialSpec",
    "load_ground_truth",
    "load_trial_specs",
    "report_rows",
    "run_accuracy",
    "run_adaptability",
    "run_consistency",
    "run_explainability_audit",
    "write_reports",
    "write_trial_specs",
]
