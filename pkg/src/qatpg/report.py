"""Report documents: plain key/value trees rendered as JSON or text.

Machine output is JSON with sorted keys and every float written with 17
significant digits, so documents round-trip losslessly and identical runs
produce identical bytes. Field names are frozen::

    tool            {"name", "version"}
    circuit         {"width", "gate_count", "gates"}
    command         command name
    parameters      command-specific inputs
    rng             {"algorithm", "seed"}            (simulate only)
    result          command-specific payload
"""

from __future__ import annotations

import json
import math

import numpy as np

from . import __version__
from .atpg import DetectionClass, TestSetReport, bitstring
from .circuit import Circuit
from .mcsim import TrialResult


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".e"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with 17-significant-digit floats and sorted keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def circuit_digest(c: Circuit) -> dict:
    return {
        "width": c.width,
        "gate_count": len(c.gates),
        "gates": [g.statement() for g in c.gates],
    }


def document(command: str, c: Circuit, parameters: dict, result: dict, rng: dict | None = None) -> dict:
    doc = {
        "tool": {"name": "qatpg", "version": __version__},
        "circuit": circuit_digest(c),
        "command": command,
        "parameters": parameters,
        "result": result,
    }
    if rng is not None:
        doc["rng"] = rng
    return doc


def matrix_payload(u) -> dict:
    u = np.asarray(u)
    return {
        "dim": int(u.shape[0]),
        "re": [[float(v) for v in row] for row in u.real],
        "im": [[float(v) for v in row] for row in u.imag],
    }


def _trials(k) -> int | str:
    return "unbounded" if k == math.inf else int(k)


def atpg_payload(report: TestSetReport) -> dict:
    w = report.width
    per_fault = []
    for f in report.faults:
        cov = report.per_fault.get(f)
        if cov is None:
            per_fault.append(
                {"fault": f.ident, "class": DetectionClass.UNDETECTABLE.value,
                 "test_input": None, "per_trial_p": report.max_p.get(f, 0.0),
                 "trials_needed": "unbounded"}
            )
        else:
            per_fault.append(
                {"fault": f.ident, "class": cov.detection_class.value,
                 "test_input": bitstring(cov.test_input, w), "per_trial_p": cov.per_trial_p,
                 "trials_needed": _trials(cov.trials_needed)}
            )
    return {
        "confidence": report.confidence,
        "test_set": [bitstring(i, w) for i in report.test_set],
        "test_set_indices": list(report.test_set),
        "faults": per_fault,
        "undetectable": [f.ident for f in report.undetectable],
        "all_detectable": report.all_detectable,
    }


def trial_payload(r: TrialResult) -> dict:
    return {
        "detections": r.detections,
        "trials": r.trials,
        "p_hat": r.p_hat,
        "analytic_p": r.analytic_p,
        "abs_error": r.abs_error,
    }
