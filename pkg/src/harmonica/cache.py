"""On-disk cache for built spaces: one JSON file per (n, space kind).

Each file carries a versioned header (format version, n, monomial order
identifier) followed by the per-degree data in exact rational text encoding.
Files are keyed by those parameters; anything stale or malformed is ignored,
never migrated.  Writes go through a temporary file and an atomic rename, so
readers never observe partial files (single-writer discipline).
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .spaces import Block, GradedSubspace, QuotientSpace
from .superpoly import MONOMIAL_ORDER_ID, TriDegree

FORMAT_VERSION = 1


def cache_path(cache_dir, kind: str, n: int) -> Path:
    return Path(cache_dir) / f"{kind}-n{n}.json"


def _header(kind: str, n: int) -> dict:
    return {
        "format": FORMAT_VERSION,
        "order": MONOMIAL_ORDER_ID,
        "kind": kind,
        "n": n,
    }


def _header_matches(payload: dict, kind: str, n: int) -> bool:
    return (
        isinstance(payload, dict)
        and payload.get("format") == FORMAT_VERSION
        and payload.get("order") == MONOMIAL_ORDER_ID
        and payload.get("kind") == kind
        and payload.get("n") == n
    )


def _atomic_write(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _vec_out(vec: dict) -> list:
    return [[int(j), str(Fraction(v))] for j, v in sorted(vec.items())]


def _vec_in(items) -> dict:
    return {int(j): Fraction(s) for j, s in items}


def save_quotient(cache_dir, space: QuotientSpace) -> Path:
    payload = _header(space.kind, space.n)
    payload["blocks"] = [
        {
            "deg": list(deg),
            "reps": list(block.reps),
            "nf": [[int(piv), _vec_out(vec)] for piv, vec in sorted(block.nf.items())],
        }
        for deg, block in sorted(space.blocks.items())
    ]
    path = cache_path(cache_dir, space.kind, space.n)
    _atomic_write(path, payload)
    return path


def load_quotient(cache_dir, kind: str, n: int) -> Optional[QuotientSpace]:
    path = cache_path(cache_dir, kind, n)
    if not path.is_file():
        return None
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return None
    if not _header_matches(payload, kind, n):
        return None
    try:
        blocks = {}
        for rec in payload["blocks"]:
            deg = TriDegree(*rec["deg"])
            nf = {int(piv): _vec_in(vec) for piv, vec in rec["nf"]}
            block = Block(n, deg, [int(r) for r in rec["reps"]], nf)
            blocks[deg] = block
        return QuotientSpace(n, kind, blocks)
    except (KeyError, TypeError, ValueError):
        return None


def save_subspace(cache_dir, space: GradedSubspace) -> Path:
    payload = _header(space.kind, space.n)
    payload["pieces"] = [
        {"deg": list(deg), "basis": [_vec_out(v) for v in vecs]}
        for deg, vecs in sorted(space.pieces.items())
    ]
    path = cache_path(cache_dir, space.kind, space.n)
    _atomic_write(path, payload)
    return path


def load_subspace(cache_dir, kind: str, n: int) -> Optional[GradedSubspace]:
    path = cache_path(cache_dir, kind, n)
    if not path.is_file():
        return None
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return None
    if not _header_matches(payload, kind, n):
        return None
    try:
        pieces = {}
        for rec in payload["pieces"]:
            deg = TriDegree(*rec["deg"])
            pieces[deg] = [_vec_in(v) for v in rec["basis"]]
        return GradedSubspace(n, kind, pieces)
    except (KeyError, TypeError, ValueError):
        return None
