"""Random circuit generation shared by the test modules."""

from qatpg.circuit import Circuit, gate

ARITY = {"cx": 2, "cz": 2, "swap": 2, "ccx": 3, "cswap": 3}


def random_circuit(rng, width, m, names=("x", "h", "cx", "ccx")):
    usable = [n for n in names if ARITY.get(n, 1) <= width]
    gates = []
    for _ in range(m):
        name = str(rng.choice(usable))
        lines = rng.permutation(width)[: ARITY.get(name, 1)]
        gates.append(gate(name, *map(int, lines)))
    return Circuit(width, gates)
