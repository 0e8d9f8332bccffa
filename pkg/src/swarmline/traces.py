"""Run traces: a JSONL format with one header line followed by one record per
round, byte-deterministic for a given run configuration.

The header embeds the fully resolved start state (positions, chirality,
lights / chain frames) and every parameter that influences the run, so a trace
can be replayed without any external file. Replaying and byte-comparing the
emitted lines is the tamper check: any edit to a record diverges from the
deterministic re-simulation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

TRACE_VERSION = 1


def dumps_line(obj: dict) -> str:
    """The one true serialization for trace lines (stable key order, compact
    separators, shortest round-tripping floats)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class Trace:
    header: dict
    records: list[dict] = field(default_factory=list)

    def lines(self) -> Iterator[str]:
        yield dumps_line(self.header)
        for rec in self.records:
            yield dumps_line(rec)

    def write_jsonl(self, path: str) -> None:
        with open(path, "w") as f:
            for line in self.lines():
                f.write(line + "\n")

    @staticmethod
    def read_jsonl(path: str) -> "Trace":
        with open(path) as f:
            raw = [line.rstrip("\n") for line in f if line.strip()]
        if not raw:
            raise ValueError(f"trace {path!r} is empty")
        header = json.loads(raw[0])
        if header.get("type") != "header":
            raise ValueError("first trace line is not a header")
        if header.get("version") != TRACE_VERSION:
            raise ValueError(f"unsupported trace version {header.get('version')}")
        records = [json.loads(line) for line in raw[1:]]
        return Trace(header=header, records=records)

    @staticmethod
    def read_lines(path: str) -> list[str]:
        with open(path) as f:
            return [line.rstrip("\n") for line in f if line.strip()]
