"""Compiled binary index for a :class:`KnowledgeGraph`.

Layout (all integers little-endian)::

    offset  size  field
    0       4     magic b"CSKG"
    4       4     format version (u32)
    8       32    sha256 of the source dump (zeros when there is none)
    40      8     header length H (u64)
    48      H     header: UTF-8 JSON, sorted keys, holding the graph metadata
                  and a table of sections (name, dtype, byte offset, length)
    48+H    ...   sections, each 8-byte aligned relative to the section base:
                    labels     UTF-8 node labels joined by "\\n"
                    relations  UTF-8 relation names joined by "\\n"
                    src, dst   int32 endpoint ids, canonical edge order
                    rel        int32 relation ids
                    weight     float64
                    fwd_order  int64 edge ids, per-node outgoing neighbor order
                    rev_order  int64 edge ids, per-node incoming neighbor order
    end-32  32    sha256 of every preceding byte

Node and relation ids are ranks of their sorted names. Serializing the same
graph always yields the same bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np

from ..errors import ChecksumMismatch, IndexFormatError, VersionMismatch
from .dump import file_digest
from .graph import GraphMetadata, KnowledgeGraph

MAGIC = b"CSKG"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sI32sQ")
_ARRAYS = (
    ("src", "<i4"),
    ("dst", "<i4"),
    ("rel", "<i4"),
    ("weight", "<f8"),
    ("fwd_order", "<i8"),
    ("rev_order", "<i8"),
)


def _pad(n: int) -> int:
    return (-n) % 8


def dumps_index(g: KnowledgeGraph) -> bytes:
    blobs: list[tuple[str, str, bytes]] = [
        ("labels", "utf8", "\n".join(g.nodes).encode("utf-8")),
        ("relations", "utf8", "\n".join(r.name for r in g.relations).encode("utf-8")),
    ]
    cols = {
        "src": g._src,
        "dst": g._dst,
        "rel": g._rel,
        "weight": g._weight,
        "fwd_order": g._fwd_order,
        "rev_order": g._rev_order,
    }
    for name, dtype in _ARRAYS:
        blobs.append((name, dtype, np.ascontiguousarray(cols[name], dtype=dtype).tobytes()))

    sections = []
    body = bytearray()
    for name, dtype, data in blobs:
        sections.append({"name": name, "dtype": dtype, "offset": len(body), "length": len(data)})
        body += data
        body += b"\0" * _pad(len(data))

    header = json.dumps(
        {"metadata": g.metadata.to_dict(), "sections": sections},
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    header += b" " * _pad(len(header))
    digest = bytes.fromhex(g.metadata.source_digest) if g.metadata.source_digest else b"\0" * 32
    out = _PREFIX.pack(MAGIC, FORMAT_VERSION, digest, len(header)) + header + bytes(body)
    return out + hashlib.sha256(out).digest()


def loads_index(data: bytes) -> KnowledgeGraph:
    if len(data) < 8 or data[:4] != MAGIC:
        raise IndexFormatError("not a CSKG index (bad magic bytes)")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"index format version {version}, expected {FORMAT_VERSION}")
    if len(data) < _PREFIX.size + 32:
        raise ChecksumMismatch("index file is truncated")
    payload, stored = data[:-32], data[-32:]
    if hashlib.sha256(payload).digest() != stored:
        raise ChecksumMismatch("index checksum does not match its contents")

    _, _, _, header_len = _PREFIX.unpack_from(data, 0)
    base = _PREFIX.size + header_len
    try:
        header = json.loads(data[_PREFIX.size : base])
        sections = {s["name"]: s for s in header["sections"]}
        metadata = GraphMetadata.from_dict(header["metadata"])
    except (ValueError, KeyError, TypeError) as exc:
        raise IndexFormatError(f"unreadable index header: {exc}") from exc

    def raw(name: str) -> bytes:
        s = sections[name]
        return data[base + s["offset"] : base + s["offset"] + s["length"]]

    def text(name: str) -> tuple[str, ...]:
        blob = raw(name).decode("utf-8")
        return tuple(blob.split("\n")) if blob else ()

    arrays = {name: np.frombuffer(raw(name), dtype=dtype) for name, dtype in _ARRAYS}
    return KnowledgeGraph(
        text("labels"),
        text("relations"),
        arrays["src"],
        arrays["dst"],
        arrays["rel"],
        arrays["weight"],
        metadata,
        arrays["fwd_order"],
        arrays["rev_order"],
    )


def save_index(g: KnowledgeGraph, path: str | os.PathLike) -> Path:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(dumps_index(g))
    os.replace(tmp, path)
    return path


def load_index(path: str | os.PathLike, dump: str | os.PathLike | None = None) -> KnowledgeGraph:
    """Load an index written by :func:`save_index`.

    When ``dump`` is given its digest is compared with the one recorded at
    build time; a mismatch is reported in ``metadata.warnings`` rather than
    raised, since the index itself is intact.
    """
    g = loads_index(Path(path).read_bytes())
    if dump is not None:
        actual = file_digest(dump)
        if actual != g.metadata.source_digest:
            msg = (
                f"index was built from a dump with digest {g.metadata.source_digest}, "
                f"but {os.fspath(dump)} has digest {actual}"
            )
            g = g.with_metadata(warnings=g.metadata.warnings + (msg,))
    return g
