"""Loader for ConceptNet 5.x assertion dumps (tab-separated, optionally gzipped)."""

from __future__ import annotations

import datetime as _dt
import gzip
import hashlib
import json
import logging
import os
from pathlib import Path

from ..errors import MalformedRow, NonEnglishConcept
from .graph import GraphBuilder, GraphMetadata, KnowledgeGraph
from .labels import Relation, normalize_label, parse_weight, relation_names

log = logging.getLogger(__name__)

MALFORMED_TOLERANCE = 0.01
_MAX_REPORTED_LINES = 100


def file_digest(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _mtime_iso(path: Path) -> str:
    ts = path.stat().st_mtime
    return _dt.datetime.fromtimestamp(ts, _dt.timezone.utc).isoformat(timespec="seconds")


def load_dump(path: str | os.PathLike, relations=None) -> KnowledgeGraph:
    """Read an assertions TSV into a graph.

    ``relations`` is an allow-list (names, ``/r/`` URIs or Relation objects);
    ``None`` keeps every relation. Rows with a non-English endpoint, a weight
    that is not strictly positive, or a relation outside the allow-list are
    counted in the metadata and dropped. Rows with the wrong field count or an
    unreadable weight are skipped and their line numbers recorded; if more than
    1% of rows are malformed the load fails with :class:`MalformedRow`.

    ``built_at`` in the metadata is the dump's modification time, so loading
    the same file twice yields identical graphs down to the metadata.
    """
    path = Path(path)
    allowed = relation_names(relations)
    digest = hashlib.sha256()
    builder = GraphBuilder()
    rows = malformed = f_lang = f_weight = f_rel = 0
    bad_lines: list[int] = []
    norm_cache: dict[str, str] = {}

    def concept(uri: str) -> str:
        c = norm_cache.get(uri)
        if c is None:
            c = normalize_label(uri)
            if len(norm_cache) < 1_000_000:
                norm_cache[uri] = c
        return c

    gzipped = path.suffix == ".gz"
    opener = gzip.open if gzipped else open
    with opener(path, "rb") as fh:
        for line_no, raw in enumerate(fh, start=1):
            digest.update(raw)
            line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
            if not line.strip():
                continue
            rows += 1
            fields = line.split("\t")
            if len(fields) != 5:
                malformed += 1
                if len(bad_lines) < _MAX_REPORTED_LINES:
                    bad_lines.append(line_no)
                continue
            _, rel_uri, start_uri, end_uri, meta = fields
            try:
                relation = Relation.parse(rel_uri).name
                weight = parse_weight(json.loads(meta)["weight"])
                try:
                    start, end = concept(start_uri), concept(end_uri)
                except NonEnglishConcept:
                    f_lang += 1
                    continue
            except (ValueError, KeyError, TypeError):
                malformed += 1
                if len(bad_lines) < _MAX_REPORTED_LINES:
                    bad_lines.append(line_no)
                continue
            if weight <= 0:
                f_weight += 1
                continue
            if allowed is not None and relation not in allowed:
                f_rel += 1
                continue
            builder.add(start, end, relation, weight)

    if rows and malformed / rows > MALFORMED_TOLERANCE:
        raise MalformedRow(bad_lines[0], malformed, rows)
    if malformed:
        log.warning("%s: skipped %d malformed rows (first at line %d)", path, malformed, bad_lines[0])

    meta = GraphMetadata(
        source=str(path),
        # digest always covers the file bytes as stored on disk
        source_digest=file_digest(path) if gzipped else digest.hexdigest(),
        built_at=_mtime_iso(path),
        rows_total=rows,
        filtered=f_lang + f_weight + f_rel,
        filtered_language=f_lang,
        filtered_weight=f_weight,
        filtered_relation=f_rel,
        malformed=malformed,
        malformed_lines=tuple(bad_lines),
        relation_filter=None if allowed is None else tuple(sorted(allowed)),
    )
    return builder.build(meta)
