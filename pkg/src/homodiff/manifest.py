"""Run manifests: parameters, input/output checksums, and stage timings.

Every CLI run writes a manifest next to its outputs, recording enough to
re-derive each artifact bit-exactly: the subcommand, all effective
parameters (seeds included), sha256 of every input and output, and library
versions.
"""

from __future__ import annotations

import hashlib
import json
import platform
import sys
from pathlib import Path

import numpy
import scipy


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _describe(path: str | Path) -> dict:
    p = Path(path)
    return {"path": str(p), "bytes": p.stat().st_size, "sha256": file_sha256(p)}


class RunManifest:
    """Accumulates one run's parameters, files, and timings."""

    def __init__(self, command: str, parameters: dict):
        self.command = command
        self.parameters = dict(parameters)
        self.inputs: dict[str, dict] = {}
        self.outputs: dict[str, dict] = {}
        self.timings_s: dict[str, float] = {}
        self.stats: dict = {}

    def add_input(self, name: str, path: str | Path) -> None:
        self.inputs[name] = _describe(path)

    def add_output(self, name: str, path: str | Path) -> None:
        self.outputs[name] = _describe(path)

    def add_timing(self, stage: str, seconds: float) -> None:
        self.timings_s[stage] = round(float(seconds), 6)

    def to_dict(self) -> dict:
        return {
            "tool": "homodiff",
            "command": self.command,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "stats": self.stats,
            "timings_s": self.timings_s,
            "environment": {
                "python": sys.version.split()[0],
                "platform": platform.platform(),
                "numpy": numpy.__version__,
                "scipy": scipy.__version__,
            },
        }

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
