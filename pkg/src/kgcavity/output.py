"""Deterministic CSV/JSON writers and the per-run manifest.

CSV is the numeric contract: fixed 17-significant-digit decimals, fixed
column order, fixed '\n' newlines, metadata only in '#'-prefixed header
lines — identical inputs produce byte-identical payloads. Every CSV gets a
JSON sidecar carrying the configuration, truncation, tail-bound summary and
the payload digest; a run-level manifest lists all outputs.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass

from .config import CavityConfig, Truncation

VERSION = "0.1.0"

__all__ = ["VERSION", "fmt17", "write_csv", "write_sidecar", "RunManifest", "write_manifest"]


def fmt17(v) -> str:
    """One CSV cell: shortest-faithful decimal for floats, plain for the rest."""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path: str, comments: list[str], names: list[str], rows) -> str:
    """Write '#'-commented CSV; returns the sha256 hex digest of the payload."""
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(names))
    for row in rows:
        lines.append(",".join(fmt17(v) for v in row))
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(payload)
    return hashlib.sha256(payload).hexdigest()


def _config_dict(cfg: CavityConfig) -> dict:
    return {"R": cfg.R, "r": cfg.r, "mu": cfg.mu, "r_bar": cfg.r_bar}


def _trunc_dict(trunc: Truncation) -> dict:
    return {
        "n_max_global": trunc.n_max_global,
        "m_max_local": trunc.m_max_local,
        "grid_points": trunc.grid_points,
        "resonance_eps": trunc.resonance_eps,
    }


def write_sidecar(
    csv_path: str,
    command: str,
    cfg: CavityConfig,
    trunc: Truncation,
    tail_bounds,
    digest: str,
) -> str:
    """JSON sidecar next to a CSV; returns the sidecar path."""
    sidecar = os.path.splitext(csv_path)[0] + ".json"
    doc = {
        "command": command,
        "config": _config_dict(cfg),
        "truncation": _trunc_dict(trunc),
        "tail_bounds": tail_bounds,
        "version": VERSION,
        "digest": digest,
    }
    with open(sidecar, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


@dataclass
class RunManifest:
    """What one CLI invocation produced, and under which knobs."""

    command: str
    cfg: CavityConfig
    trunc: Truncation
    outputs: list        # [(path, digest), ...]
    wall_time_s: float
    tail_bound_summary: dict


def write_manifest(out_dir: str, manifest: RunManifest) -> str:
    path = os.path.join(out_dir, "manifest.json")
    doc = {
        "command": manifest.command,
        "config": _config_dict(manifest.cfg),
        "truncation": _trunc_dict(manifest.trunc),
        "outputs": [{"path": p, "digest": d} for p, d in manifest.outputs],
        "wall_time_s": manifest.wall_time_s,
        "tail_bounds": manifest.tail_bound_summary,
        "version": VERSION,
        "written": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
