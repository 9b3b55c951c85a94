"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CSKError(Exception):
    """Base class for all errors raised by csk_organizer."""


# -- labels / graph ---------------------------------------------------------


class EmptyLabel(CSKError, ValueError):
    pass


class NonEnglishConcept(CSKError, ValueError):
    def __init__(self, raw: str, language: str) -> None:
        super().__init__(f"{raw!r} is tagged with language {language!r}, only 'en' is supported")
        self.raw = raw
        self.language = language


class MalformedRow(CSKError, ValueError):
    """Raised when too many dump rows fail to parse.

    ``line_no`` is the first offending line; ``count`` the total number of
    malformed rows seen before the load was aborted.
    """

    def __init__(self, line_no: int, count: int = 1, total: int | None = None) -> None:
        msg = f"malformed row at line {line_no}"
        if total is not None:
            msg += f" ({count} of {total} rows malformed, above the 1% tolerance)"
        super().__init__(msg)
        self.line_no = line_no
        self.count = count
        self.total = total


class IndexFormatError(CSKError, ValueError):
    pass


class VersionMismatch(IndexFormatError):
    pass


class ChecksumMismatch(IndexFormatError):
    pass


# -- reasoning ----------------------------------------------------------------


class EmptyBinRegistry(CSKError, ValueError):
    pass


class FocusNotSubset(CSKError, ValueError):
    pass


class PathParseError(CSKError, ValueError):
    pass


class InvalidPath(CSKError, ValueError):
    """A parsed path does not resolve to edges of the graph."""


class ConfigError(CSKError, ValueError):
    pass


# -- network client -----------------------------------------------------------


class HttpError(CSKError):
    def __init__(self, status: int, url: str = "") -> None:
        super().__init__(f"HTTP {status} for {url}" if url else f"HTTP {status}")
        self.status = status
        self.url = url


class RateLimited(HttpError):
    def __init__(self, retry_after: float | None, url: str = "") -> None:
        super().__init__(429, url)
        self.retry_after = retry_after


class ParseError(CSKError, ValueError):
    pass


class NetworkDisabled(CSKError):
    pass


# -- pipeline / harness ---------------------------------------------------------


class DuplicateBinId(CSKError, ValueError):
    pass


class MalformedCsv(CSKError, ValueError):
    def __init__(self, line: int, reason: str = "") -> None:
        super().__init__(f"line {line}: {reason}" if reason else f"line {line}")
        self.line = line


class StreamParseError(CSKError, ValueError):
    def __init__(self, line: int, reason: str, frame: int | None = None) -> None:
        where = f"line {line}" + (f" (frame {frame})" if frame is not None else "")
        super().__init__(f"{where}: {reason}")
        self.line = line
        self.frame = frame
        self.reason = reason


class CorruptLogLine(CSKError, ValueError):
    def __init__(self, line: int, reason: str = "") -> None:
        super().__init__(f"decision log line {line} is corrupt" + (f": {reason}" if reason else ""))
        self.line = line


class UnknownBin(CSKError, KeyError):
    def __init__(self, bin_id: str, line: int | None = None) -> None:
        super().__init__(f"bin {bin_id!r} is not in the registry" + (f" (log line {line})" if line else ""))
        self.bin_id = bin_id
        self.line = line

    def __str__(self) -> str:
        return self.args[0]


class MissingGroundTruth(CSKError, KeyError):
    def __init__(self, obj: str) -> None:
        super().__init__(f"no ground truth for object {obj!r}")
        self.object = obj

    def __str__(self) -> str:
        return self.args[0]


class InvalidTrial(CSKError, ValueError):
    pass
