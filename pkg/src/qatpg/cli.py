"""Command-line frontend.

Exit status: 0 on success (and, for ``atpg``, when every fault is
detectable), 2 when ``atpg`` finds undetectable faults, 1 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .atpg import DEFAULT_CONFIDENCE, best_vector_for_gate, bitstring, generate_test_set, partition_atpg
from .circuit import CircuitError, embed_gate, load_circuit, total_matrix
from .faults import (
    DEFAULT_STUCK_STATES,
    FaultEnumConfig,
    FaultError,
    enumerate_faults,
    parse_fault,
    parse_stuck_state,
)
from .mcsim import RNG_ALGORITHM, TrialPlan, estimate_detection
from .report import atpg_payload, document, dumps, matrix_payload, trial_payload

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDETECTABLE = 2

DEFAULT_SELECTORS = "smgf,mmgf:2,rgf:2-3,stuck:0,1,+,-"
_CLASSES = ("smgf", "mmgf", "rgf", "stuck", "cross")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def parse_selectors(text: str) -> FaultEnumConfig:
    """Class-level selector list, e.g. ``smgf,mmgf:2,rgf:2-3,stuck:0,1,+,-,cross``.

    Tokens after ``stuck:`` that are not class names extend its state list.
    """
    opts = {"smgf": False, "mmgf_max_cardinality": 0, "rgf_multiplicities": (),
            "stuck_states": (), "include_crosspoint": False}
    stuck: list | None = None
    for tok in _split_top_level(text):
        name, _, arg = tok.partition(":")
        name = name.strip().lower()
        if name not in _CLASSES:
            if stuck is None:
                raise UsageError(f"unknown fault selector {tok!r}")
            stuck.append(_stuck_state(tok))
            continue
        stuck = None
        try:
            if name == "smgf":
                opts["smgf"] = True
            elif name == "mmgf":
                opts["mmgf_max_cardinality"] = int(arg) if arg else 2
            elif name == "rgf":
                lo, _, hi = (arg or "2-3").partition("-")
                opts["rgf_multiplicities"] = tuple(range(int(lo), int(hi or lo) + 1))
                if any(t < 2 for t in opts["rgf_multiplicities"]):
                    raise UsageError("rgf multiplicities must be >= 2")
            elif name == "stuck":
                stuck = [_stuck_state(arg)] if arg else []
                opts["stuck_states"] = stuck
            elif name == "cross":
                opts["include_crosspoint"] = True
        except ValueError:
            raise UsageError(f"malformed fault selector {tok!r}") from None
    if opts["stuck_states"] == []:
        opts["stuck_states"] = DEFAULT_STUCK_STATES
    opts["stuck_states"] = tuple(opts["stuck_states"])
    return FaultEnumConfig(**opts)


def _stuck_state(tok):
    try:
        return parse_stuck_state(tok)
    except FaultError as exc:
        raise UsageError(str(exc)) from None


def _fault_list(c, args):
    faults = []
    if args.faults is not None or not args.fault:
        faults = enumerate_faults(c, parse_selectors(args.faults or DEFAULT_SELECTORS))
    for ident in args.fault or []:
        f = parse_fault(ident)
        f.validate(c)
        if f not in faults:
            faults.append(f)
    return faults


def _fmt_entry(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return format(z.real, ".6g")
    return f"{z.real:.6g}{z.imag:+.6g}j"


def render_matrix_text(u) -> str:
    u = np.asarray(u)
    if np.all(np.abs(u.imag) <= 1e-12) and np.all(np.abs(u.real - np.round(u.real)) <= 1e-12):
        cells = [[str(int(round(v))) for v in row] for row in u.real]
    else:
        cells = [[_fmt_entry(complex(v)) for v in row] for row in u]
    width = max(len(s) for row in cells for s in row)
    return "\n".join(" ".join(s.rjust(width) for s in row) for row in cells) + "\n"


def _render_atpg_text(payload: dict) -> list[str]:
    lines = [f"test set: {' '.join('|' + b + '>' for b in payload['test_set']) or '(empty)'}",
             f"confidence: {payload['confidence']}"]
    for row in payload["faults"]:
        tin = row["test_input"] or "-"
        lines.append(
            f"  {row['fault']:<24} {row['class']}  input={tin:<6} "
            f"p={row['per_trial_p']:.6g}  trials={row['trials_needed']}"
        )
    if payload["undetectable"]:
        lines.append("undetectable: " + ", ".join(payload["undetectable"]))
    return lines


def cmd_matrix(args):
    c = load_circuit(args.file)
    u = total_matrix(c)
    doc = document("matrix", c, {}, {"matrix": matrix_payload(u)})
    return doc, render_matrix_text(u), EXIT_OK


def cmd_faults(args):
    c = load_circuit(args.file)
    faults = _fault_list(c, args)
    params = {"faults": args.faults, "fault": args.fault or []}
    doc = document("faults", c, params, {"faults": [f.ident for f in faults]})
    return doc, "".join(f.ident + "\n" for f in faults), EXIT_OK


def cmd_atpg(args):
    c = load_circuit(args.file)
    if not 0 < args.confidence < 1:
        raise UsageError("--confidence must lie in (0, 1)")
    params = {"faults": args.faults, "fault": args.fault or [], "confidence": args.confidence}
    if args.partition:
        try:
            bounds = [int(b) for b in args.partition.split(",")]
        except ValueError:
            raise UsageError(f"malformed --partition {args.partition!r}") from None
        cfg = parse_selectors(args.faults or DEFAULT_SELECTORS)
        try:
            parts = partition_atpg(c, bounds, cfg, args.confidence)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        params["partition"] = bounds
        result = {"partitions": [
            {"gates": [g.statement() for g in sub.gates], **atpg_payload(rep)} for sub, rep in parts
        ]}
        text = []
        for k, (sub, rep) in enumerate(parts):
            text.append(f"partition {k}: {'; '.join(g.statement() for g in sub.gates)}")
            text += _render_atpg_text(atpg_payload(rep))
        ok = all(rep.all_detectable for _, rep in parts)
    else:
        faults = _fault_list(c, args)
        if not faults:
            raise UsageError("no faults selected")
        rep = generate_test_set(c, faults, args.confidence)
        result = atpg_payload(rep)
        text = _render_atpg_text(result)
        ok = rep.all_detectable
    doc = document("atpg", c, params, result)
    return doc, "\n".join(text) + "\n", EXIT_OK if ok else EXIT_UNDETECTABLE


def cmd_simulate(args):
    c = load_circuit(args.file)
    bits = args.input
    if len(bits) != c.width or set(bits) - {"0", "1"}:
        raise UsageError(f"--input must be a {c.width}-character bitstring, got {bits!r}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    fault = parse_fault(args.fault)
    fault.validate(c)
    plan = TrialPlan(c, fault, int(bits, 2), args.trials, args.seed)
    r = estimate_detection(plan)
    params = {"fault": fault.ident, "input": bits, "trials": args.trials, "seed": args.seed}
    doc = document("simulate", c, params, trial_payload(r),
                   rng={"algorithm": RNG_ALGORITHM, "seed": args.seed})
    text = (f"fault {fault.ident} input |{bits}>: {r.detections}/{r.trials} detections\n"
            f"p_hat={r.p_hat:.6g} analytic_p={r.analytic_p:.6g} abs_error={r.abs_error:.3g}\n")
    return doc, text, EXIT_OK


def cmd_best_vector(args):
    c = load_circuit(args.file)
    if len(c.gates) != 1:
        raise UsageError(f"best-vector needs a circuit with exactly one gate, got {len(c.gates)}")
    indices, p = best_vector_for_gate(embed_gate(c.gates[0], c.width))
    result = {"indices": indices, "inputs": [bitstring(i, c.width) for i in indices],
              "per_trial_p": p}
    doc = document("best-vector", c, {}, result)
    text = f"best inputs: {' '.join('|' + b + '>' for b in result['inputs'])}  p={p:.6g}\n"
    return doc, text, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--out", help="output path (default: standard output)")

    p = _Parser(prog="qatpg", description="Fault testing for quantum circuits.")
    p.add_argument("--version", action="version", version=f"qatpg {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("matrix", parents=[common], help="print the total circuit matrix")
    sp.add_argument("file")
    sp.set_defaults(run=cmd_matrix)

    for name, run, helptext in (("faults", cmd_faults, "list enumerated faults"),
                                ("atpg", cmd_atpg, "generate a test set")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file")
        sp.add_argument("--faults", help=f"fault class selectors (default {DEFAULT_SELECTORS})")
        sp.add_argument("--fault", action="append", help="explicit fault identifier (repeatable)")
        sp.set_defaults(run=run)
        if name == "atpg":
            sp.add_argument("--confidence", type=float, default=DEFAULT_CONFIDENCE)
            sp.add_argument("--partition", help="comma-separated gate boundaries")

    sp = sub.add_parser("simulate", parents=[common], help="Monte-Carlo detection estimate")
    sp.add_argument("file")
    sp.add_argument("--fault", required=True)
    sp.add_argument("--input", required=True, help="input bitstring, line 0 leftmost")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(run=cmd_simulate)

    sp = sub.add_parser("best-vector", parents=[common], help="best test input for one gate")
    sp.add_argument("file")
    sp.set_defaults(run=cmd_best_vector)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        doc, text, status = args.run(args)
    except (CircuitError, FaultError, UsageError, OSError) as exc:
        print(f"qatpg: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = dumps(doc) + "\n" if args.format == "machine" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
