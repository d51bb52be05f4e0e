import random

import pytest

import heisensim as hs

R, A, S, B, U_R, U_A, W_S, W_B = range(8)


@pytest.fixture(scope="session")
def fr_circuit():
    return hs.preset_fr()


@pytest.fixture(scope="session")
def fr_trace(fr_circuit):
    return hs.run_circuit(fr_circuit)


@pytest.fixture(scope="session")
def fr_states(fr_circuit):
    return hs.evolve_state(fr_circuit)


@pytest.fixture(scope="session")
def fr_crosscheck(fr_trace, fr_circuit):
    return hs.cross_check(fr_trace, fr_circuit)


@pytest.fixture(scope="session")
def fr_watch(fr_circuit):
    return hs.default_watch_pairs(fr_circuit)


def random_circuit(rng: random.Random, n_qubits: int, n_gates: int) -> hs.Circuit:
    """One gate per slot, kinds weighted to keep term growth moderate."""
    steps = []
    for slot in range(n_gates):
        kind = rng.choices(("ry", "h", "cx", "ch"), weights=(35, 20, 30, 15))[0]
        if kind == "ry":
            steps.append(hs.ry(rng.randrange(n_qubits), rng.uniform(0, 6.283), slot=slot))
        elif kind == "h":
            steps.append(hs.h(rng.randrange(n_qubits), slot=slot))
        else:
            c, t = rng.sample(range(n_qubits), 2)
            step = hs.cx(c, t, slot=slot) if kind == "cx" else hs.ch(c, t, slot=slot)
            steps.append(step)
    return hs.Circuit(n_qubits, tuple(steps))
