"""JSON files for instances and traces.

Instance: ``{"jobs": [{"id": 1, "r": 0.0, "p": 1.0, "w": 1.0}, ...]}``; ids
are optional and default to 1..n in file order.

Trace: ``{"events": [{"t": 0.0, "kind": "start", "job": 1}, ...], "wc_max": 1.0}``.

Floats are written with ``repr``, the shortest string that reads back to the
same binary64 value, so files round-trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import EventKind, Instance, Job, Trace, TraceEvent


class FormatError(ValueError):
    pass


def instance_to_dict(instance: Instance) -> dict:
    return {"jobs": [{"id": j.id, "r": j.release, "p": j.proc, "w": j.weight}
                     for j in instance.jobs]}


def instance_from_dict(data) -> Instance:
    try:
        rows = data["jobs"]
        if not isinstance(rows, list):
            raise FormatError("'jobs' must be a list")
        jobs = []
        for k, row in enumerate(rows, 1):
            jid = row.get("id", k)
            if not isinstance(jid, int) or isinstance(jid, bool):
                raise FormatError(f"job {k}: id must be an integer")
            jobs.append(Job(jid, float(row["r"]), float(row["p"]), float(row["w"])))
        return Instance(jobs)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed instance: {exc}") from exc


def trace_to_dict(trace: Trace) -> dict:
    return {"events": [{"t": e.time, "kind": e.kind.label, "job": e.job} for e in trace.events],
            "wc_max": trace.objective}


def trace_from_dict(data) -> Trace:
    try:
        events = tuple(TraceEvent(float(e["t"]), EventKind.parse(e["kind"]), int(e["job"]))
                       for e in data["events"])
        return Trace(events, float(data["wc_max"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed trace: {exc}") from exc


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def read_instance(path: str | Path) -> Instance:
    return instance_from_dict(_load(path))


def write_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=1) + "\n")


def read_trace(path: str | Path) -> Trace:
    return trace_from_dict(_load(path))


def write_trace(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(json.dumps(trace_to_dict(trace), indent=1) + "\n")
