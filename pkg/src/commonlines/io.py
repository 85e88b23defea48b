"""Dataset file format: canonical JSON with full-precision floats.

Two dataset kinds share one envelope:

    {
      "schema_version": 1,
      "kind": "frames" | "common_lines",
      "n": <int>,
      "payload": [...],
      "metadata": {...}
    }

Frames payload records are {"a": [x, y, z], "b": [x, y, z]} in order;
common-lines records are {"i": i, "j": j, "v_ij": [x, y], "v_ji": [x, y]}
sorted by (i, j) with 1-based indices, i < j.  Stored vectors use the
canonical representative (unit halves, first nonzero coordinate of v_ij
positive), so save(load(x)) is byte-identical for canonical inputs.
"""

from __future__ import annotations

import json

from .errors import CommonLinesError
from .geometry import Frame, FrameSet
from .lines import CommonLinePair, CommonLinesData

SCHEMA_VERSION = 1

KIND_FRAMES = "frames"
KIND_LINES = "common_lines"


class DatasetFormatError(CommonLinesError):
    """The file is not a well-formed dataset of the expected kind."""


def _envelope(kind, n, payload, metadata):
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "n": n,
        "payload": payload,
        "metadata": dict(metadata or {}),
    }


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def frames_document(frames, metadata=None):
    payload = [
        {"a": [float(x) for x in f.a], "b": [float(x) for x in f.b]}
        for f in frames
    ]
    return _envelope(KIND_FRAMES, len(payload), payload, metadata)


def lines_document(data, metadata=None):
    payload = [
        {
            "i": p.i,
            "j": p.j,
            "v_ij": [float(x) for x in p.v_ij],
            "v_ji": [float(x) for x in p.v_ji],
        }
        for p in data.iter_pairs()
    ]
    return _envelope(KIND_LINES, data.n, payload, metadata)


def save_frames(path, frames, metadata=None):
    with open(path, "w") as fh:
        fh.write(_dump(frames_document(frames, metadata)))


def save_lines(path, data, metadata=None):
    with open(path, "w") as fh:
        fh.write(_dump(lines_document(data, metadata)))


def _load_document(path, kind):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DatasetFormatError(f"cannot read dataset {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != kind:
        raise DatasetFormatError(
            f"{path}: expected a {kind!r} dataset, got kind {doc.get('kind')!r}"
            if isinstance(doc, dict)
            else f"{path}: not a dataset object"
        )
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DatasetFormatError(
            f"{path}: unsupported schema_version {doc.get('schema_version')}"
        )
    return doc


def load_frames(path):
    doc = _load_document(path, KIND_FRAMES)
    try:
        frames = tuple(Frame(rec["a"], rec["b"]) for rec in doc["payload"])
        fs = FrameSet(frames)
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"{path}: bad frames payload: {exc}") from exc
    if fs.n != doc["n"]:
        raise DatasetFormatError(f"{path}: n field disagrees with payload length")
    return fs


def load_lines(path, tol=1e-9, strict=False):
    """Load common lines data.  With strict=False (the default for tool use)
    norm-equality violations are recorded per pair rather than rejected, so
    certification can report them."""
    doc = _load_document(path, KIND_LINES)
    try:
        pairs = {}
        for rec in doc["payload"]:
            p = CommonLinePair.from_vectors(
                rec["i"], rec["j"], rec["v_ij"], rec["v_ji"], tol=tol, strict=strict
            )
            pairs[(p.i, p.j)] = p
        data = CommonLinesData(doc["n"], pairs)
    except (KeyError, TypeError, ValueError, CommonLinesError) as exc:
        if isinstance(exc, DatasetFormatError):
            raise
        raise DatasetFormatError(f"{path}: bad common-lines payload: {exc}") from exc
    return data
