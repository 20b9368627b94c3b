"""Bit-packed Pauli strings and weighted Pauli Hamiltonians.

A Pauli string on ``n`` qubits is stored as two bitmasks plus a phase::

    P = i**phase * (sigma_0 (x) sigma_1 (x) ... (x) sigma_{n-1})

where qubit ``j`` carries ``X`` if only bit ``j`` of ``x`` is set, ``Z`` if
only bit ``j`` of ``z`` is set and ``Y`` (the Hermitian one) if both are set.
Qubit 0 is the least significant bit; :meth:`PauliString.words` exposes the
same layout as little-endian ``uint64`` words.

Text labels list qubit 0 first, e.g. ``"XIZ"`` is ``X`` on qubit 0 and ``Z``
on qubit 2.  An optional phase prefix (``-``, ``i``, ``-i``) is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

__all__ = [
    "PauliString",
    "WeightedPauli",
    "WeightedPauliHamiltonian",
    "anticommutes",
    "product",
    "nested_commutator",
    "pack_masks",
]

_WORD = 64
_WORD_MASK = (1 << _WORD) - 1
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}


@dataclass(frozen=True, slots=True)
class PauliString:
    """Immutable Pauli string ``i**phase * sigma``.

    Attributes:
        n_qubits: Number of qubits the string acts on.
        x: X bitmask (bit ``j`` set where qubit ``j`` holds X or Y).
        z: Z bitmask (bit ``j`` set where qubit ``j`` holds Z or Y).
        phase: Exponent of ``i`` modulo 4.
    """

    n_qubits: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 0:
            raise ValidationError(f"n_qubits must be non-negative, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValidationError("mask has bits beyond n_qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls(n_qubits)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse ``"XIZY"``-style text with an optional phase prefix."""
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PREFIX_PHASE:
            raise ValidationError(f"bad phase prefix {prefix!r} in {label!r}")
        x = z = 0
        for j, ch in enumerate(body):
            if ch == "X":
                x |= 1 << j
            elif ch == "Z":
                z |= 1 << j
            elif ch == "Y":
                x |= 1 << j
                z |= 1 << j
            elif ch != "I":
                raise ValidationError(f"invalid Pauli character {ch!r} in {label!r}")
        return cls(len(body), x, z, _PREFIX_PHASE[prefix])

    @classmethod
    def from_sparse(cls, n_qubits: int, ops: dict[int, str]) -> PauliString:
        """Build from a ``{qubit: 'X'|'Y'|'Z'}`` mapping."""
        x = z = 0
        for q, ch in ops.items():
            if not 0 <= q < n_qubits:
                raise ValidationError(f"qubit {q} out of range for {n_qubits} qubits")
            if len(ch) != 1 or ch not in "XYZI":
                raise ValidationError(f"invalid Pauli character {ch!r}")
            if ch in "XY":
                x |= 1 << q
            if ch in "ZY":
                z |= 1 << q
        return cls(n_qubits, x, z)

    def to_label(self, with_phase: bool = True) -> str:
        chars = []
        for j in range(self.n_qubits):
            bx = (self.x >> j) & 1
            bz = (self.z >> j) & 1
            chars.append("IXZY"[bx | (bz << 1)])
        body = "".join(chars)
        return (_PHASE_PREFIX[self.phase] if with_phase else "") + body

    def __str__(self) -> str:
        return self.to_label()

    @property
    def support(self) -> int:
        """Bitmask of qubits acted on non-trivially."""
        return self.x | self.z

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def unsigned(self) -> PauliString:
        """The same string with phase reset to +1."""
        return PauliString(self.n_qubits, self.x, self.z)

    def words(self) -> np.ndarray:
        """Return ``(2, n_words)`` uint64 array of the packed x and z masks."""
        n_words = max(1, -(-self.n_qubits // _WORD))
        return np.array(
            [_split_words(self.x, n_words), _split_words(self.z, n_words)], dtype=np.uint64
        )

    def __mul__(self, other: PauliString) -> PauliString:
        return product(self, other)


@dataclass(frozen=True, slots=True)
class WeightedPauli:
    """A real coefficient times a Pauli string."""

    coeff: float
    pauli: PauliString

    def __post_init__(self) -> None:
        if not np.isfinite(self.coeff):
            raise ValidationError(f"non-finite coefficient {self.coeff!r}")

    @property
    def norm(self) -> float:
        return abs(self.coeff)


def _split_words(mask: int, n_words: int) -> list[int]:
    return [(mask >> (_WORD * w)) & _WORD_MASK for w in range(n_words)]


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def anticommutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic product of ``a`` and ``b`` is odd."""
    _check_sizes(a, b)
    return bool(((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1)


def product(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b`` including the phase."""
    _check_sizes(a, b)
    xa_only = a.x & ~a.z
    ya = a.x & a.z
    za_only = a.z & ~a.x
    xb_only = b.x & ~b.z
    yb = b.x & b.z
    zb_only = b.z & ~b.x
    # XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i
    plus = (xa_only & yb) | (ya & zb_only) | (za_only & xb_only)
    minus = (xa_only & zb_only) | (ya & xb_only) | (za_only & yb)
    phase = a.phase + b.phase + plus.bit_count() - minus.bit_count()
    return PauliString(a.n_qubits, a.x ^ b.x, a.z ^ b.z, phase)


def nested_commutator(seq: Sequence[WeightedPauli]) -> WeightedPauli | None:
    """Evaluate ``[P_p, [..., [P_1, P_0]]]`` for weighted Pauli strings.

    The sequence is ``P_0, P_1, ..., P_p`` (innermost first).  Returns ``None``
    when the commutator vanishes, which happens exactly when some ``P_i``
    anticommutes with an even number of its predecessors.  Otherwise the
    result is ``2**p * prod(c) * P_p ... P_1 P_0``; the coefficient carries
    the sign of the coefficients and the string carries the operator phase.
    """
    if len(seq) < 2:
        raise ValueError("nested commutator needs at least two operators (p >= 1)")
    paulis = [t.pauli for t in seq]
    n = paulis[0].n_qubits
    for q in paulis[1:]:
        if q.n_qubits != n:
            raise DimensionError(f"size mismatch: {n} vs {q.n_qubits} qubits")
    for t in seq:
        if t.coeff == 0:
            raise ValueError("nested commutator requires nonzero coefficients")
    for i in range(1, len(paulis)):
        odd = False
        for j in range(i):
            odd ^= anticommutes(paulis[j], paulis[i])
        if not odd:
            return None
    acc = paulis[0]
    coeff = seq[0].coeff
    for t in seq[1:]:
        acc = product(t.pauli, acc)
        coeff *= t.coeff
    return WeightedPauli(coeff * 2 ** (len(seq) - 1), acc)


def pack_masks(paulis: Iterable[PauliString], n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Pack strings into ``(N, n_words)`` uint64 arrays of x and z masks."""
    n_words = max(1, -(-n_qubits // _WORD))
    xs, zs = [], []
    for p in paulis:
        xs.append(_split_words(p.x, n_words))
        zs.append(_split_words(p.z, n_words))
    shape = (len(xs), n_words)
    x = np.array(xs, dtype=np.uint64).reshape(shape)
    z = np.array(zs, dtype=np.uint64).reshape(shape)
    return x, z


@dataclass(frozen=True)
class WeightedPauliHamiltonian:
    """``H = sum_i c_i P_i`` with real ``c_i`` and Hermitian strings ``P_i``.

    Strings are stored with phase +1; any sign lives in the coefficient.
    """

    n_qubits: int
    terms: tuple[WeightedPauli, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        seen = set()
        for t in terms:
            if t.pauli.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"term {t.pauli} acts on {t.pauli.n_qubits} qubits, expected {self.n_qubits}"
                )
            if t.pauli.phase != 0:
                raise ValidationError(f"term {t.pauli} must be stored with phase +1")
            key = (t.pauli.x, t.pauli.z)
            if key in seen:
                raise ValidationError(f"duplicate Pauli string {t.pauli}")
            seen.add(key)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_labels(cls, pairs: Iterable[tuple[float, str]], meta: dict | None = None):
        """Build from ``(coeff, label)`` pairs, merging repeated labels."""
        merged: dict[str, float] = {}
        n = None
        for c, label in pairs:
            p = PauliString.from_label(label)
            if n is None:
                n = p.n_qubits
            sign = {0: 1.0, 2: -1.0}.get(p.phase)
            if sign is None:
                raise ValidationError(f"non-Hermitian label {label!r}")
            key = p.to_label(with_phase=False)
            merged[key] = merged.get(key, 0.0) + sign * float(c)
        terms = tuple(WeightedPauli(c, PauliString.from_label(k)) for k, c in merged.items())
        return cls(n or 0, terms, dict(meta or {}))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=float)

    @cached_property
    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        """``(x, z)`` uint64 arrays of shape ``(N, n_words)``."""
        return pack_masks((t.pauli for t in self.terms), self.n_qubits)

    def scaled(self, factor: float) -> WeightedPauliHamiltonian:
        return WeightedPauliHamiltonian(
            self.n_qubits,
            tuple(WeightedPauli(t.coeff * factor, t.pauli) for t in self.terms),
            dict(self.meta),
        )

    def subset(self, indices: Iterable[int]) -> WeightedPauliHamiltonian:
        return WeightedPauliHamiltonian(
            self.n_qubits, tuple(self.terms[i] for i in indices), dict(self.meta)
        )
