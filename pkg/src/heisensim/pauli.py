"""Sparse algebra of Pauli operators on an n-qubit register.

Operators are linear combinations of Pauli strings: a complex coefficient
times one letter of {I, X, Y, Z} per qubit, with identity letters elided so
the stored support stays sparse.  Every construction path canonicalises the
result: like strings are merged (with order-insensitive ``fsum``
accumulation), coefficients below :data:`DROP_TOLERANCE` are dropped, and
the term order is fixed lexicographically by (qubit index, letter rank).
Two equal operators therefore always have identical representations, which
keeps serialised output byte-stable.

All values are immutable after construction and all operations are pure
functions, so they are safe to evaluate concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import fsum
from typing import Iterable, Iterator, Mapping

__all__ = [
    "LETTERS",
    "DROP_TOLERANCE",
    "DEFAULT_TOLERANCE",
    "DimensionMismatch",
    "HermiticityError",
    "PauliString",
    "PauliSum",
    "letter_mul",
    "string_mul",
    "sum_mul",
    "linear_combine",
    "canonicalize",
    "vacuum_expectation",
    "allclose",
]

LETTERS = ("I", "X", "Y", "Z")

#: Coefficients with magnitude below this are treated as exact zeros.
DROP_TOLERANCE = 1e-12

#: Tolerance for every user-visible comparison (verdicts, cross-checks).
#: Kept two orders above the drop tolerance so dropped terms can never
#: flip a comparison.
DEFAULT_TOLERANCE = 1e-9

_RANK = {"I": 0, "X": 1, "Y": 2, "Z": 3}

# Single-qubit products a*b = phase * c, tabulated for all 16 pairs.
_LETTER_MUL: dict[tuple[str, str], tuple[complex, str]] = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


class DimensionMismatch(ValueError):
    """Operands are defined on different qubit counts."""


class HermiticityError(ValueError):
    """An expectation value came out with a non-negligible imaginary part."""


def letter_mul(a: str, b: str) -> tuple[complex, str]:
    """Product of two single-qubit letters: ``a*b = phase*c``.

    Total on {I, X, Y, Z}; the phase is one of 1, -1, i, -i.
    """
    try:
        return _LETTER_MUL[(a, b)]
    except KeyError:
        raise ValueError(f"not Pauli letters: {a!r}, {b!r}") from None


LetterMap = tuple[tuple[int, str], ...]


def _normalize_letters(letters) -> LetterMap:
    if isinstance(letters, Mapping):
        items = letters.items()
    else:
        items = tuple(letters)
    out = []
    for qubit, letter in sorted(items):
        if letter == "I":
            continue
        if letter not in _RANK:
            raise ValueError(f"not a Pauli letter: {letter!r}")
        if not isinstance(qubit, int) or qubit < 0:
            raise ValueError(f"bad qubit index: {qubit!r}")
        if out and out[-1][0] == qubit:
            raise ValueError(f"duplicate qubit index: {qubit}")
        out.append((qubit, letter))
    return tuple(out)


@dataclass(frozen=True)
class PauliString:
    """One term: a complex coefficient times a tensor product of letters.

    ``letters`` maps qubit index to letter; absent indices mean identity,
    and identity letters are never stored.  An empty map is a multiple of
    the identity operator.
    """

    coeff: complex = 1.0
    letters: LetterMap = ()

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "letters", _normalize_letters(self.letters))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(q for q, _ in self.letters)

    def letter_at(self, qubit: int) -> str:
        for q, letter in self.letters:
            if q == qubit:
                return letter
        return "I"

    def __mul__(self, other: "PauliString") -> "PauliString":
        return string_mul(self, other)

    def __repr__(self):
        body = " ".join(f"{letter}{q}" for q, letter in self.letters) or "I"
        return f"({self.coeff:g})*{body}"


def _mul_keys(k1: LetterMap, k2: LetterMap) -> tuple[complex, LetterMap]:
    """Merge two sorted letter maps, accumulating the product phase."""
    phase: complex = 1
    out = []
    i, j = 0, 0
    n1, n2 = len(k1), len(k2)
    while i < n1 and j < n2:
        q1, a = k1[i]
        q2, b = k2[j]
        if q1 == q2:
            p, c = _LETTER_MUL[(a, b)]
            phase *= p
            if c != "I":
                out.append((q1, c))
            i += 1
            j += 1
        elif q1 < q2:
            out.append(k1[i])
            i += 1
        else:
            out.append(k2[j])
            j += 1
    out.extend(k1[i:])
    out.extend(k2[j:])
    return phase, tuple(out)


def string_mul(s1: PauliString, s2: PauliString) -> PauliString:
    """Qubit-wise product of two strings, phases folded into the coefficient."""
    phase, key = _mul_keys(s1.letters, s2.letters)
    return PauliString(s1.coeff * s2.coeff * phase, key)


def _sort_key(key: LetterMap):
    return tuple((q, _RANK[letter]) for q, letter in key)


class PauliSum:
    """Canonicalised linear combination of Pauli strings on ``n_qubits``.

    The terms are stored keyed by letter map, in a fixed lexicographic
    order.  Construction merges like terms with ``fsum`` so any permutation
    of the input yields the identical canonical form.
    """

    __slots__ = ("n_qubits", "_terms", "_keys")

    def __init__(self, n_qubits: int, strings: Iterable[PauliString] = ()):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        buckets: dict[LetterMap, list[complex]] = {}
        for s in strings:
            if s.letters and s.letters[-1][0] >= n_qubits:
                raise DimensionMismatch(
                    f"string on qubit {s.letters[-1][0]} does not fit in {n_qubits} qubits"
                )
            buckets.setdefault(s.letters, []).append(s.coeff)
        terms: dict[LetterMap, complex] = {}
        for key, coeffs in buckets.items():
            c = complex(fsum(z.real for z in coeffs), fsum(z.imag for z in coeffs))
            if abs(c) >= DROP_TOLERANCE:
                terms[key] = c
        self.n_qubits = n_qubits
        self._terms = terms
        self._keys = tuple(sorted(terms, key=_sort_key))

    @classmethod
    def _from_dict(cls, n_qubits: int, terms: dict[LetterMap, complex]) -> "PauliSum":
        """Internal fast path: keys already valid, just drop tiny coefficients."""
        self = object.__new__(cls)
        self.n_qubits = n_qubits
        self._terms = {k: c for k, c in terms.items() if abs(c) >= DROP_TOLERANCE}
        self._keys = tuple(sorted(self._terms, key=_sort_key))
        return self

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, [PauliString(coeff)])

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str, coeff: complex = 1.0) -> "PauliSum":
        """A single-letter operator, e.g. ``single(4, 2, "Z")`` for Z on qubit 2."""
        return cls(n_qubits, [PauliString(coeff, ((qubit, letter),))])

    # -- views -------------------------------------------------------------

    @property
    def terms(self) -> tuple[PauliString, ...]:
        """Terms in canonical order."""
        return tuple(PauliString(self._terms[k], k) for k in self._keys)

    def coefficient(self, letters) -> complex:
        return self._terms.get(_normalize_letters(letters), 0j)

    @property
    def support(self) -> frozenset[int]:
        """Qubits on which any stored term acts non-trivially."""
        return frozenset(q for key in self._terms for q, _ in key)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __hash__(self):
        return hash((self.n_qubits, tuple((k, self._terms[k]) for k in self._keys)))

    def __repr__(self):
        if not self._terms:
            return f"<PauliSum n={self.n_qubits}: 0>"
        parts = []
        for k in self._keys[:6]:
            body = " ".join(f"{letter}{q}" for q, letter in k) or "I"
            parts.append(f"({self._terms[k]:.4g})*{body}")
        tail = " + ..." if len(self._keys) > 6 else ""
        return f"<PauliSum n={self.n_qubits}: {' + '.join(parts)}{tail}>"

    # -- algebra -----------------------------------------------------------

    def _check_dim(self, other: "PauliSum"):
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatch(
                f"operands on {self.n_qubits} and {other.n_qubits} qubits"
            )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_dim(other)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, 0j) + c
        return PauliSum._from_dict(self.n_qubits, terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __neg__(self) -> "PauliSum":
        return PauliSum._from_dict(self.n_qubits, {k: -c for k, c in self._terms.items()})

    def __mul__(self, scalar: complex) -> "PauliSum":
        if isinstance(scalar, PauliSum):
            raise TypeError("use @ for operator products, * for scalars")
        return PauliSum._from_dict(
            self.n_qubits, {k: c * scalar for k, c in self._terms.items()}
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "PauliSum":
        return self * (1 / scalar)

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        self._check_dim(other)
        terms: dict[LetterMap, complex] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                phase, key = _mul_keys(k1, k2)
                terms[key] = terms.get(key, 0j) + c1 * c2 * phase
        return PauliSum._from_dict(self.n_qubits, terms)

    def commutes_with(self, other: "PauliSum", tol: float = DEFAULT_TOLERANCE) -> bool:
        """True when [self, other] vanishes to ``tol``.

        Disjoint supports commute exactly and short-circuit the product.
        """
        self._check_dim(other)
        if not (self.support & other.support):
            return True
        comm = (self @ other) - (other @ self)
        return all(abs(c) <= tol for c in comm._terms.values())

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> list[dict]:
        """Terms in canonical order as JSON-ready dicts."""
        return [
            {
                "coeff": [self._terms[k].real, self._terms[k].imag],
                "letters": {str(q): letter for q, letter in k},
            }
            for k in self._keys
        ]


def sum_mul(a: PauliSum, b: PauliSum) -> PauliSum:
    """Distributive operator product; canonicalised."""
    return a @ b


def linear_combine(pairs: Iterable[tuple[complex, PauliSum]]) -> PauliSum:
    """Canonicalised weighted sum of operators sharing one qubit count."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("linear_combine needs at least one operand")
    n = pairs[0][1].n_qubits
    terms: dict[LetterMap, list[complex]] = {}
    for w, a in pairs:
        if a.n_qubits != n:
            raise DimensionMismatch(f"operands on {n} and {a.n_qubits} qubits")
        for key, c in a._terms.items():
            terms.setdefault(key, []).append(w * c)
    merged = {
        key: complex(fsum(z.real for z in cs), fsum(z.imag for z in cs))
        for key, cs in terms.items()
    }
    return PauliSum._from_dict(n, merged)


def canonicalize(a: PauliSum) -> PauliSum:
    """Re-canonicalise an operator (idempotent: sums are always canonical)."""
    return PauliSum(a.n_qubits, a.terms)


def vacuum_expectation(a: PauliSum, tol: float = DEFAULT_TOLERANCE) -> float:
    """Expectation in the all-zeros product state.

    Only terms whose letters are all Z (or identity) contribute, each with
    weight equal to its coefficient.  The operator must be Hermitian up to
    ``tol``: a larger imaginary residue raises :class:`HermiticityError`.
    """
    vals = [c for key, c in a._terms.items() if all(l == "Z" for _, l in key)]
    re = fsum(v.real for v in vals)
    im = fsum(v.imag for v in vals)
    if abs(im) >= tol:
        raise HermiticityError(f"imaginary residue {im:g} in expectation value")
    return re


def allclose(a: PauliSum, b: PauliSum, tol: float = DEFAULT_TOLERANCE) -> bool:
    """True when every coefficient of ``a - b`` is below ``tol``."""
    if a.n_qubits != b.n_qubits:
        return False
    keys = set(a._terms) | set(b._terms)
    return all(abs(a._terms.get(k, 0j) - b._terms.get(k, 0j)) <= tol for k in keys)
