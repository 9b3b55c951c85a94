"""Context bins: the destinations objects are sorted into."""

from __future__ import annotations

import csv
import os
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateBinId, MalformedCsv
from .kg.labels import normalize_label


@dataclass(frozen=True, slots=True)
class Bin:
    bin_id: str
    context: str


@dataclass(frozen=True)
class BinRegistry:
    """Ordered, duplicate-free set of bins, each anchored at a context concept."""

    bins: tuple[Bin, ...] = ()

    def __post_init__(self) -> None:
        bins = tuple(self.bins)
        object.__setattr__(self, "bins", bins)
        seen = set()
        for b in bins:
            if b.bin_id in seen:
                raise DuplicateBinId(f"duplicate bin id {b.bin_id!r}")
            seen.add(b.bin_id)

    @classmethod
    def of(cls, items: Iterable[str | Bin | tuple[str, str]]) -> BinRegistry:
        """Build from bins, ``(bin_id, context)`` pairs, or bare context labels.

        A bare label becomes a bin whose id is the normalized context.
        """
        out = []
        for item in items:
            if isinstance(item, Bin):
                out.append(item)
            elif isinstance(item, str):
                c = normalize_label(item)
                out.append(Bin(c, c))
            else:
                bin_id, context = item
                out.append(Bin(bin_id, normalize_label(context)))
        return cls(tuple(out))

    def __iter__(self) -> Iterator[Bin]:
        return iter(self.bins)

    def __len__(self) -> int:
        return len(self.bins)

    def __contains__(self, bin_id: object) -> bool:
        return any(b.bin_id == bin_id for b in self.bins)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(b.bin_id for b in self.bins)

    def get(self, bin_id: str) -> Bin:
        for b in self.bins:
            if b.bin_id == bin_id:
                return b
        raise KeyError(bin_id)

    def restrict(self, bin_ids: Iterable[str]) -> BinRegistry:
        keep = set(bin_ids)
        return BinRegistry(tuple(b for b in self.bins if b.bin_id in keep))


def as_registry(bins) -> BinRegistry:
    return bins if isinstance(bins, BinRegistry) else BinRegistry.of(bins)


def load_bins(path: str | os.PathLike) -> BinRegistry:
    """Read a ``bin_id,context`` CSV. Rows keep file order; contexts are normalized."""
    bins: list[Bin] = []
    seen: set[str] = set()
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["bin_id", "context"]:
            raise MalformedCsv(1, "expected header 'bin_id,context'")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise MalformedCsv(line, f"expected 2 fields, got {len(row)}")
            bin_id, context = row[0].strip(), row[1].strip()
            if not bin_id:
                raise MalformedCsv(line, "empty bin_id")
            try:
                context = normalize_label(context)
            except ValueError as exc:
                raise MalformedCsv(line, str(exc)) from exc
            if bin_id in seen:
                raise DuplicateBinId(f"duplicate bin id {bin_id!r} at line {line}")
            seen.add(bin_id)
            bins.append(Bin(bin_id, context))
    return BinRegistry(tuple(bins))


def write_bins(registry: BinRegistry, path: str | os.PathLike) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_id", "context"])
        for b in registry:
            w.writerow([b.bin_id, b.context])
