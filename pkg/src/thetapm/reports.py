"""Line-structured report format: one JSON object per line, header first.

Reports are deterministic given identical inputs; the only volatile field
is the header timestamp, which comparison helpers strip.
"""

from __future__ import annotations

import json
import time
from fractions import Fraction

SCHEMA = "thetapm-report"
VERSION = 1


def _canon(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_canon(x) for x in obj)
    return obj


def render_report(kind, records, timestamp=None):
    """Serialize records to the line format; returns a string."""
    header = {"schema": SCHEMA, "version": VERSION, "kind": kind,
              "generated_at": timestamp if timestamp is not None
              else time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
    lines = [json.dumps(header, sort_keys=True)]
    for rec in records:
        lines.append(json.dumps(_canon(rec), sort_keys=True))
    return "\n".join(lines) + "\n"


def parse_report(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty report")
    header = json.loads(lines[0])
    if header.get("schema") != SCHEMA:
        raise ValueError("not a %s document" % SCHEMA)
    return header, [json.loads(ln) for ln in lines[1:]]


def comparable(text):
    """Report body with the volatile header timestamp removed."""
    header, records = parse_report(text)
    header = {k: v for k, v in header.items() if k != "generated_at"}
    return json.dumps(header, sort_keys=True) + "\n" + "\n".join(
        json.dumps(r, sort_keys=True) for r in records)
