"""Small circuit corpus and its regenerated missing-gate test-vector table.

Run ``python -m qatpg.corpus`` to rewrite ``TABLE.md`` next to this file.
"""

from __future__ import annotations

from pathlib import Path

from ..atpg import DETECT_TOL, classify, detection_profile, generate_test_set
from ..circuit import Circuit, load_circuit
from ..faults import FaultEnumConfig, enumerate_faults

HERE = Path(__file__).parent
TABLE_PATH = HERE / "TABLE.md"

# single and multiple missing-gate faults, as in the classic SMF/MMF tables
TABLE_FAULTS = FaultEnumConfig(mmgf_max_cardinality=2, rgf_multiplicities=(), stuck_states=())


def corpus() -> dict[str, Circuit]:
    return {p.stem: load_circuit(p) for p in sorted(HERE.glob("*.qc"))}


def _ket(i: int, width: int) -> str:
    return format(i, f"0{width}b")


def table_rows(name: str, c: Circuit) -> list[dict]:
    rows = []
    for f in enumerate_faults(c, TABLE_FAULTS):
        prof = detection_profile(c, f)
        best = max(o.per_trial_p for o in prof)
        rows.append({
            "circuit": name,
            "fault": f.ident,
            "detecting": [o.input_index for o in prof if o.per_trial_p > DETECT_TOL],
            "best": [o.input_index for o in prof if best > DETECT_TOL and o.per_trial_p >= best - DETECT_TOL],
            "p": best,
            "class": classify(best).value,
        })
    return rows


def render_table() -> str:
    out = [
        "# Regenerated test-vector table",
        "",
        "Single (smgf) and double (mmgf) missing-gate faults for the bundled corpus.",
        "Inputs are basis bitstrings, line 0 leftmost. `p` is the best per-trial",
        "detection probability; class D = deterministic,",
        "P = probabilistic, U = undetectable. Regenerate with `python -m qatpg.corpus`.",
        "",
    ]
    for name, c in corpus().items():
        w = c.width
        rep = generate_test_set(c, enumerate_faults(c, TABLE_FAULTS))
        out += [
            f"## {name}",
            "",
            "gates: " + "; ".join(g.statement() for g in c.gates),
            "",
            "| fault | detecting inputs | best inputs | p | class |",
            "|---|---|---|---|---|",
        ]
        for r in table_rows(name, c):
            det = " ".join(_ket(i, w) for i in r["detecting"]) or "-"
            best = " ".join(_ket(i, w) for i in r["best"]) or "-"
            out.append(f"| {r['fault']} | {det} | {best} | {r['p']:.6g} | {r['class']} |")
        out += ["", "test set: " + (" ".join(_ket(i, w) for i in rep.test_set) or "-"), ""]
    return "\n".join(out)


def main() -> None:
    TABLE_PATH.write_text(render_table(), encoding="utf-8")
    print(f"wrote {TABLE_PATH}")
