import pytest

from qatpg.circuit import parse_circuit

EPR_TEXT = "qubits 2\nx 0\ncx 0 1\n"
DOUBLE_CNOT_TEXT = "qubits 2\ncx 0 1\ncx 1 0\n"
HADAMARD_TEXT = "qubits 1\nh 0\n"

# Golden matrices for the two worked examples, row i = output for input i.
EPR_B = [[0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0]]
EPR_B1 = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
EPR_B2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
DCX_B1 = EPR_B2
DCX_B2 = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]
DCX_B = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]]


@pytest.fixture
def epr():
    return parse_circuit(EPR_TEXT)


@pytest.fixture
def dcx():
    return parse_circuit(DOUBLE_CNOT_TEXT)


@pytest.fixture
def hadamard():
    return parse_circuit(HADAMARD_TEXT)


# --- acceptance summary -----------------------------------------------------

_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, title = marker.args
    key = f"{num}"
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _criteria.get(key, ("PASS", title))[0]
        status = "PASS" if rep.outcome == "passed" and prev == "PASS" else "FAIL"
        if rep.outcome == "skipped":
            status = "SKIP"
        _criteria[key] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=int):
        status, title = _criteria[key]
        terminalreporter.write_line(f"criterion {key:>2}: {status}  {title}")
