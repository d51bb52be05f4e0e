"""Operator algebra unit tests, with dense 2x2/2^n matrices as the oracle."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heisensim.oracle import expand
from heisensim.pauli import (
    DROP_TOLERANCE,
    DimensionMismatch,
    HermiticityError,
    PauliString,
    PauliSum,
    allclose,
    canonicalize,
    letter_mul,
    linear_combine,
    string_mul,
    sum_mul,
    vacuum_expectation,
)

MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

C = -1.0 / 3.0
S = math.sqrt(8.0) / 3.0


# -- letters -----------------------------------------------------------------


def test_letter_mul_reproduces_matrix_products():
    for a in "IXYZ":
        for b in "IXYZ":
            phase, c = letter_mul(a, b)
            assert np.allclose(phase * MATS[c], MATS[a] @ MATS[b])


def test_letter_mul_examples():
    assert letter_mul("X", "Y") == (1j, "Z")
    assert letter_mul("X", "X") == (1, "I")
    assert letter_mul("I", "Z") == (1, "Z")


def test_letter_mul_rejects_garbage():
    with pytest.raises(ValueError):
        letter_mul("X", "Q")


# -- strings -----------------------------------------------------------------


def test_string_mul_self_inverse():
    s = PauliString(1.0, {0: "X"})
    assert string_mul(s, s) == PauliString(1.0, {})


def test_string_mul_accumulates_phase():
    left = PauliString(1.0, {0: "X", 1: "Z"})
    right = PauliString(1.0, {0: "Y"})
    assert string_mul(left, right) == PauliString(1j, {0: "Z", 1: "Z"})


def test_string_mul_scalar_identity():
    assert string_mul(PauliString(2.0), PauliString(3.0, {5: "Z"})) == PauliString(6.0, {5: "Z"})


def test_string_normalisation_elides_identity_letters():
    s = PauliString(1.0, {0: "I", 3: "X"})
    assert s.letters == ((3, "X"),)
    assert s.support == frozenset({3})


@st.composite
def strings(draw, n_qubits=3):
    support = draw(st.lists(st.integers(0, n_qubits - 1), unique=True, max_size=n_qubits))
    letters = {q: draw(st.sampled_from("XYZ")) for q in support}
    coeff = complex(
        draw(st.floats(-2, 2, allow_nan=False)), draw(st.floats(-2, 2, allow_nan=False))
    )
    return PauliString(coeff, letters)


@given(strings(), strings())
def test_string_mul_matches_dense_product(s1, s2):
    n = 3
    left = expand(PauliSum(n, [s1]))
    right = expand(PauliSum(n, [s2]))
    product = expand(PauliSum(n, [string_mul(s1, s2)]))
    assert np.allclose(product, left @ right, atol=1e-12)


# -- sums --------------------------------------------------------------------


def rotated_z(n=1, qubit=0):
    return PauliSum(
        n, [PauliString(C, {qubit: "Z"}), PauliString(-S, {qubit: "X"})]
    )


def test_sum_mul_rotated_component_squares_to_identity():
    a = PauliSum(1, [PauliString(C, {0: "X"}), PauliString(S, {0: "Z"})])
    assert allclose(a @ a, PauliSum.identity(1), 1e-12)


def test_sum_mul_identity_neutral():
    a = rotated_z()
    assert allclose(sum_mul(a, PauliSum.identity(1)), a, 1e-15)


def test_sum_mul_disjoint_supports():
    zi = PauliSum.single(2, 0, "Z")
    iz = PauliSum.single(2, 1, "Z")
    assert zi @ iz == PauliSum(2, [PauliString(1.0, {0: "Z", 1: "Z"})])


def test_sum_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sum_mul(PauliSum.identity(2), PauliSum.identity(3))


@st.composite
def sum_triples(draw, n_qubits=4, real=False):
    # nonzero coefficients stay well above the drop tolerance: a coefficient
    # inside the drop band is truncated by construction, which legitimately
    # breaks exact identities at the 1e-12 scale
    def coeff_part():
        v = draw(st.floats(-2, 2, allow_nan=False))
        return 0.0 if abs(v) < 1e-5 else v

    def one():
        k = draw(st.integers(0, 3))
        out = []
        for _ in range(k):
            support = draw(
                st.lists(st.integers(0, n_qubits - 1), unique=True, max_size=n_qubits)
            )
            letters = {q: draw(st.sampled_from("XYZ")) for q in support}
            re = coeff_part()
            im = 0.0 if real else coeff_part()
            out.append(PauliString(complex(re, im), letters))
        return PauliSum(n_qubits, out)

    return one(), one(), one()


@given(sum_triples())
@settings(max_examples=60)
def test_sum_mul_associative_and_distributive(triple):
    a, b, c = triple
    assert allclose((a @ b) @ c, a @ (b @ c), 1e-12)
    assert allclose(a @ (b + c), a @ b + a @ c, 1e-12)


def test_linear_combine_projector():
    p_plus = linear_combine([(0.5, PauliSum.identity(1)), (0.5, PauliSum.single(1, 0, "Z"))])
    assert vacuum_expectation(p_plus) == pytest.approx(1.0)


def test_linear_combine_cancellation():
    a = rotated_z()
    assert len(linear_combine([(1.0, a), (-1.0, a)])) == 0


def test_linear_combine_keeps_unlike_terms():
    zi = PauliSum.single(2, 0, "Z")
    xz = PauliSum(2, [PauliString(1.0, {0: "X", 1: "Z"})])
    out = linear_combine([(1 / 3, zi), (2 / 3, xz)])
    assert len(out) == 2
    assert out.coefficient({0: "Z"}) == pytest.approx(1 / 3)


def test_linear_combine_rejects_empty_and_mismatched():
    with pytest.raises(ValueError):
        linear_combine([])
    with pytest.raises(DimensionMismatch):
        linear_combine([(1.0, PauliSum.identity(1)), (1.0, PauliSum.identity(2))])


# -- canonical form ----------------------------------------------------------


def test_canonicalize_merges_like_terms():
    a = PauliSum(1, [PauliString(1.0, {0: "X"}), PauliString(1.0, {0: "X"})])
    assert a == PauliSum(1, [PauliString(2.0, {0: "X"})])


def test_canonicalize_drops_negligible_terms():
    a = PauliSum(1, [PauliString(1e-15, {0: "Z"})])
    assert len(a) == 0
    assert a == PauliSum.zero(1)


def test_canonicalize_idempotent():
    a = rotated_z(2, 1) + PauliSum.single(2, 0, "Y", 0.25j)
    assert canonicalize(a) == a


@given(sum_triples(), st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_canonical_form_is_permutation_invariant(triple, rng):
    a, b, _ = triple
    terms = list((a + b).terms) + list(a.terms)
    shuffled = terms[:]
    rng.shuffle(shuffled)
    assert PauliSum(4, terms) == PauliSum(4, shuffled)


def test_term_order_is_deterministic():
    a = PauliSum(
        2,
        [
            PauliString(1.0, {1: "Z"}),
            PauliString(1.0, {0: "X", 1: "Z"}),
            PauliString(0.5, {}),
        ],
    )
    keys = [term.letters for term in a.terms]
    assert keys == [(), ((0, "X"), (1, "Z")), ((1, "Z"),)]


def test_to_json_canonical_order():
    a = PauliSum(2, [PauliString(1.0, {1: "Z"}), PauliString(2.0, {0: "X"})])
    assert a.to_json() == [
        {"coeff": [2.0, 0.0], "letters": {"0": "X"}},
        {"coeff": [1.0, 0.0], "letters": {"1": "Z"}},
    ]


def test_rejects_string_beyond_register():
    with pytest.raises(DimensionMismatch):
        PauliSum(2, [PauliString(1.0, {2: "X"})])


# -- vacuum expectation ------------------------------------------------------


def test_vacuum_expectation_all_z():
    zz = PauliSum(2, [PauliString(1.0, {0: "Z", 1: "Z"})])
    assert vacuum_expectation(zz) == pytest.approx(1.0)


def test_vacuum_expectation_transverse_vanishes():
    assert vacuum_expectation(PauliSum.single(3, 1, "X")) == 0.0


def test_vacuum_expectation_rotated_component():
    assert vacuum_expectation(rotated_z()) == pytest.approx(C, abs=1e-12)


def test_vacuum_expectation_hermiticity_guard():
    skew = PauliSum(1, [PauliString(1j, {0: "Z"})])
    with pytest.raises(HermiticityError):
        vacuum_expectation(skew)


@given(
    sum_triples(real=True),
    st.floats(-2, 2, allow_nan=False),
    st.floats(-2, 2, allow_nan=False),
)
@settings(max_examples=60)
def test_vacuum_expectation_linear(triple, alpha, beta):
    a, b, _ = triple
    lhs = vacuum_expectation(linear_combine([(alpha, a), (beta, b)]))
    rhs = alpha * vacuum_expectation(a) + beta * vacuum_expectation(b)
    assert lhs == pytest.approx(rhs, abs=1e-9)


@given(sum_triples(real=True))
@settings(max_examples=60)
def test_vacuum_expectation_matches_dense(triple):
    a, _, _ = triple
    dense = expand(a)
    assert vacuum_expectation(a) == pytest.approx(dense[0, 0].real, abs=1e-9)


def test_drop_tolerance_below_comparison_tolerance():
    assert DROP_TOLERANCE < 1e-9
