import pytest

from qatpg.corpus import TABLE_FAULTS, TABLE_PATH, corpus, render_table, table_rows
from qatpg.faults import enumerate_faults
from qatpg.linalg import is_unitary
from qatpg.circuit import total_matrix

import oracle

CIRCUITS = corpus()


def test_shipped_table_is_current():
    assert TABLE_PATH.read_text(encoding="utf-8") == render_table()


def test_corpus_contents():
    assert {"epr", "double_cnot", "hadamard", "toffoli", "fredkin", "peres"} <= set(CIRCUITS)
    for c in CIRCUITS.values():
        assert is_unitary(total_matrix(c))


@pytest.mark.parametrize("name", sorted(CIRCUITS))
def test_rows_match_oracle(name):
    c = CIRCUITS[name]
    for row in table_rows(name, c):
        f = next(f for f in enumerate_faults(c, TABLE_FAULTS) if f.ident == row["fault"])
        ps = [oracle.per_trial_p(c, f, i) for i in range(c.dim)]
        assert row["detecting"] == [i for i, p in enumerate(ps) if p > 1e-9]
        assert abs(row["p"] - max(ps)) <= 1e-9
        assert row["class"] == oracle.detection_class(max(ps))


def test_worked_examples_in_table():
    text = render_table()
    epr = text.split("## epr\n")[1].split("## ")[0]
    assert "test set: 00" in epr
    dcx = text.split("## double_cnot\n")[1].split("## ")[0]
    assert "test set: 10" in dcx
