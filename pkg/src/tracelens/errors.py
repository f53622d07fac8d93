"""Error types shared across the toolkit.

Every failure carries a stable machine-readable code so callers (CLI,
HTTP service, tests) can dispatch without parsing messages.
"""
from __future__ import annotations


class TraceLensError(Exception):
    """Base error with a stable code attribute."""

    code = "ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DiffKeyMismatch(TraceLensError):
    code = "DIFF_KEY_MISMATCH"


class ScanIoError(TraceLensError):
    code = "SCAN_IO"


class ManifestParseError(TraceLensError):
    code = "MANIFEST_PARSE"

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TraceParseError(TraceLensError):
    code = "TRACE_PARSE"

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TraceNestingError(TraceLensError):
    code = "TRACE_NESTING"

    def __init__(self, message: str, seq: int):
        super().__init__(f"seq {seq}: {message}")
        self.seq = seq


class FilterFieldsError(TraceLensError):
    code = "FILTER_FIELDS"


class EvalMissingField(TraceLensError):
    code = "EVAL_MISSING_FIELD"


class AbstractConfigMismatch(TraceLensError):
    code = "ABSTRACT_CONFIG_MISMATCH"


class ZoomMissingTrace(TraceLensError):
    code = "ZOOM_MISSING_TRACE"


class MineTimeout(TraceLensError):
    code = "MINE_TIMEOUT"


class MineOutOfMemory(TraceLensError):
    code = "MINE_OOM"


class ExamUnreachable(TraceLensError):
    code = "EXAM_UNREACHABLE"


class DiffConfigMismatch(TraceLensError):
    code = "DIFF_CONFIG_MISMATCH"


class ModelParseError(TraceLensError):
    code = "MODEL_PARSE"

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ConfigParseError(TraceLensError):
    code = "CONFIG_PARSE"


class ServeBindError(TraceLensError):
    code = "SERVE_BIND"
