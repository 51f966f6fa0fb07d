"""On-disk eigensymbol cache with atomic writes.

Cache location comes from an explicit directory or the WORKBENCH_CACHE
environment variable; without either, caching is disabled.  Entries are
keyed by (level, label, sign, code version) and validated on load, so a
corrupted file is treated as a miss and overwritten.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

CODE_VERSION = "1"
ENV_VAR = "WORKBENCH_CACHE"


def resolve_cache_dir(explicit=None):
    d = explicit or os.environ.get(ENV_VAR)
    if not d:
        return None
    os.makedirs(d, exist_ok=True)
    return d


def _entry_path(cache_dir, level, label, sign, version=CODE_VERSION):
    safe = "".join(ch if ch.isalnum() else "_" for ch in str(label))
    name = "symbol_%s_N%d_s%s_v%s.json" % (safe, level,
                                           "p" if sign > 0 else "m", version)
    return os.path.join(cache_dir, name)


def load_symbol(cache_dir, level, label, sign):
    """Cached generator values, or None on miss/corruption."""
    if not cache_dir:
        return None
    path = _entry_path(cache_dir, level, label, sign)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("code_version") != CODE_VERSION:
            return None
        if (data["level"], data["label"], data["sign"]) != (level, label, sign):
            return None
        values = [int(v) for v in data["values"]]
        Fraction(data["content"])
        [(int(l), int(a)) for l, a in data["ap_certificate"]]
        return data | {"values": values}
    except (OSError, ValueError, KeyError, TypeError):
        return None


def store_symbol(cache_dir, symbol):
    """Atomic write (temp file then rename) of a symbol cache entry."""
    if not cache_dir:
        return None
    entry = symbol.to_dict() | {"code_version": CODE_VERSION}
    path = _entry_path(cache_dir, symbol.level, symbol.label, symbol.sign)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path
