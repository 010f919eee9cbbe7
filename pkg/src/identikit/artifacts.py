"""Deterministic artifact plumbing: seed derivation, config hashing, file IO.

Artifacts carry no timestamps, hostnames, or absolute paths, so two runs with
the same inputs and seed are byte-identical regardless of working directory.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from typing import Any, Iterable

FORMAT_PREFIX = "identikit"
ARTIFACT_VERSION = 1


def derive_seed(seed: int, label: str) -> int:
    """Mix a stage label into the run seed.

    Stages must not share raw RNG streams; sha256 of "seed:label" keeps the
    derivation reproducible across platforms and Python versions.
    """
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


def config_hash(config: dict[str, Any]) -> str:
    """16-hex-digit digest of the semantic configuration.

    Callers must pass only run-semantic fields (seed, hyperparameters,
    framework, category, fold count). File paths never belong here; hashing
    them would break byte-identical runs from different directories.
    """
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def atomic_write_text(path: str, text: str) -> None:
    """Write via a same-directory temp file and rename, so readers never see
    a half-written artifact."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_float(value: float) -> str:
    """repr round-trips float64 exactly; that is the only requirement."""
    return repr(float(value))


def csv_text(
    kind: str,
    meta: dict[str, Any],
    header: Iterable[str],
    rows: Iterable[Iterable[Any]],
) -> str:
    """Render a self-describing CSV: '#' comment lines, then header, then rows.

    Cells that are floats go through format_float; everything else through str.
    """
    lines = [f"# format: {FORMAT_PREFIX}/{kind} v{ARTIFACT_VERSION}"]
    for key, value in meta.items():
        lines.append(f"# {key}: {value}")
    lines.append(",".join(header))
    for row in rows:
        cells = [
            format_float(cell) if isinstance(cell, float) else str(cell)
            for cell in row
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_csv(
    path: str,
    kind: str,
    meta: dict[str, Any],
    header: Iterable[str],
    rows: Iterable[Iterable[Any]],
) -> None:
    atomic_write_text(path, csv_text(kind, meta, header, rows))


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    """Read a self-describing CSV, skipping '#' comment lines.

    Returns (header, rows) as raw strings; callers own the typing.
    """
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if header is None:
                header = cells
            else:
                rows.append(cells)
    if header is None:
        raise ValueError(f"no header row in {path}")
    return header, rows


def json_artifact_text(kind: str, payload: dict[str, Any]) -> str:
    """Render a JSON artifact with a format/version envelope.

    json.dumps emits repr-faithful floats, so float64 payloads survive a
    round trip bit-exactly.
    """
    body: dict[str, Any] = {
        "format": f"{FORMAT_PREFIX}/{kind}",
        "version": ARTIFACT_VERSION,
    }
    body.update(payload)
    return json.dumps(body, indent=2, sort_keys=False) + "\n"


def write_json(path: str, kind: str, payload: dict[str, Any]) -> None:
    atomic_write_text(path, json_artifact_text(kind, payload))
