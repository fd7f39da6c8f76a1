"""Structured report documents (JSON) for measure, embedding and claim results."""

from __future__ import annotations

import json
import os
from pathlib import Path

REPORT_FORMAT = "permbases-report"
REPORT_VERSION = 1
TIMING_KEYS = frozenset({"elapsed_ms", "wall_s"})


def report_document(kind: str, entries: list[dict], **meta) -> dict:
    return {"format": REPORT_FORMAT, "version": REPORT_VERSION, "kind": kind, **meta,
            "entries": entries}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("format") != REPORT_FORMAT:
        raise ValueError("not a report document")
    if doc.get("version") != REPORT_VERSION:
        raise ValueError(f"unsupported report version {doc.get('version')!r}")
    return doc


def strip_timing(obj):
    """Copy of ``obj`` without timing fields, for reproducibility comparisons."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def write_atomic(path, text: str) -> None:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)
