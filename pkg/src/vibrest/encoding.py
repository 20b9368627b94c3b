"""Qubit encodings of second-quantized vibrational Hamiltonians.

Unary: one qubit per modal, qubit ``l*d + k`` is |1> when modal ``k`` of
mode ``l`` is occupied.  ``a^dag_k a_h`` becomes ``sigma+_k sigma-_h`` with
``sigma+- = (X -+ iY)/2`` and ``a^dag_k a_k`` the projector ``(I - Z)/2``.

Binary: ``ceil(log2 d)`` qubits per mode, qubit ``l*b + j`` holding bit ``j``
(least significant first) of the modal index.  ``|k><h|`` is the tensor
product of single-qubit outer products, each a sum of two Paulis.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Literal

from .errors import ValidationError
from .hamiltonian import SecondQuantizedHamiltonian
from .pauli import PauliString, WeightedPauli, WeightedPauliHamiltonian

__all__ = [
    "EncodingSpec",
    "LocalityStats",
    "WeightedPauliHamiltonian",
    "encode",
    "locality_stats",
    "qubit_count",
    "packed_binary_qubits",
    "gray_code",
    "DEFAULT_CUTOFF",
]

DEFAULT_CUTOFF = 1e-8  # cm^-1
IMAG_TOL = 1e-12

# (x_bit, z_bit, coeff) expansions of |a><b| on one qubit
_OUTER = {
    (0, 0): ((0, 0, 0.5), (0, 1, 0.5)),
    (1, 1): ((0, 0, 0.5), (0, 1, -0.5)),
    (0, 1): ((1, 0, 0.5), (1, 1, 0.5j)),
    (1, 0): ((1, 0, 0.5), (1, 1, -0.5j)),
}


def gray_code(k: int) -> int:
    """Reflected binary code; pass as ``EncodingSpec.code`` for a Gray encoding."""
    return k ^ (k >> 1)


@dataclass(frozen=True)
class EncodingSpec:
    """Which encoding to apply and where to cut small coefficients.

    ``code`` maps a modal index to the integer whose bits are stored in a
    binary register; it is ignored for the unary encoding.
    """

    kind: Literal["unary", "binary"]
    n_modes: int
    modals: int
    cutoff: float = DEFAULT_CUTOFF
    code: Callable[[int], int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("unary", "binary"):
            raise ValidationError(f"unknown encoding {self.kind!r}")
        if self.n_modes < 1 or self.modals < 1:
            raise ValidationError("n_modes and modals must be >= 1")
        if self.cutoff < 0:
            raise ValidationError("cutoff must be non-negative")

    @property
    def qubits_per_mode(self) -> int:
        if self.kind == "unary":
            return self.modals
        return max(1, math.ceil(math.log2(self.modals)))

    @property
    def n_qubits(self) -> int:
        return self.n_modes * self.qubits_per_mode


def qubit_count(spec: EncodingSpec) -> int:
    """``L*d`` qubits for unary, ``L*ceil(log2 d)`` for binary."""
    return spec.n_qubits


def packed_binary_qubits(n_modes: int, modals: int) -> int:
    """``ceil(L*log2 d)``: the count if all modes shared a single register.

    This is a lower bound only; per-mode registers, which the binary
    encoding here uses, need :func:`qubit_count`.
    """
    return math.ceil(n_modes * math.log2(modals))


def _factor_expansion(spec: EncodingSpec, mode: int, raise_: int, lower: int):
    """Pauli expansion of ``a^dag_raise a_lower`` on ``mode`` as (x, z, coeff) list."""
    nb = spec.qubits_per_mode
    base = mode * nb
    if spec.kind == "unary":
        if raise_ == lower:
            outer = [(raise_, 1, 1)]
        else:
            outer = [(raise_, 1, 0), (lower, 0, 1)]
    else:
        code = spec.code or (lambda k: k)
        kb, hb = code(raise_), code(lower)
        if kb >> nb or hb >> nb:
            raise ValidationError(f"code word does not fit in {nb} bits")
        outer = [(j, (kb >> j) & 1, (hb >> j) & 1) for j in range(nb)]
    out = [(0, 0, 1.0 + 0j)]
    for q, a, b in outer:
        bit = 1 << (base + q)
        nxt = []
        for x, z, c in out:
            for bx, bz, cc in _OUTER[(a, b)]:
                nxt.append((x | (bit if bx else 0), z | (bit if bz else 0), c * cc))
        out = nxt
    return out


def _check_hermitian(sq: SecondQuantizedHamiltonian) -> dict:
    merged: dict = {}
    for t in sq.terms:
        merged.setdefault(t.factors, []).append(t.coeff)
    merged = {k: math.fsum(v) for k, v in merged.items()}
    scale = max((abs(c) for c in merged.values()), default=0.0)
    tol = 1e-12 * max(1.0, scale)
    for key, c in merged.items():
        partner = tuple((l, h, k) for l, k, h in key)
        other = merged.get(partner, 0.0)
        if abs(other - c) > tol:
            raise ValidationError(
                f"non-Hermitian input: term {list(key)} (coeff {c!r}) has conjugate partner "
                f"{list(partner)} with coeff {other!r}"
            )
    return merged


def encode(sq: SecondQuantizedHamiltonian, spec: EncodingSpec) -> WeightedPauliHamiltonian:
    """Map ``sq`` to a qubit Hamiltonian.

    Like strings are merged with exactly rounded summation, so the result does
    not depend on the order of the input terms.  Terms with ``|c| <= cutoff``
    are dropped.
    """
    if sq.n_modes != spec.n_modes or sq.modals != spec.modals:
        raise ValidationError(
            f"encoding spec ({spec.n_modes} modes, {spec.modals} modals) does not match "
            f"Hamiltonian ({sq.n_modes} modes, {sq.modals} modals)"
        )
    sq.validate()
    merged = _check_hermitian(sq)

    cache: dict = {}
    re_parts: dict[tuple[int, int], list[float]] = {}
    im_parts: dict[tuple[int, int], list[float]] = {}
    for key in sorted(merged):
        coeff = merged[key]
        if coeff == 0:
            continue
        acc = [(0, 0, complex(coeff))]
        for factor in key:
            exp = cache.get(factor)
            if exp is None:
                exp = cache[factor] = _factor_expansion(spec, *factor)
            acc = [(x | fx, z | fz, c * fc) for x, z, c in acc for fx, fz, fc in exp]
        for x, z, c in acc:
            re_parts.setdefault((x, z), []).append(c.real)
            if c.imag:
                im_parts.setdefault((x, z), []).append(c.imag)

    scale = max((abs(c) for c in merged.values()), default=0.0)
    imag_tol = IMAG_TOL * max(1.0, scale)
    n = spec.n_qubits
    terms = []
    for x, z in sorted(re_parts):
        im = math.fsum(im_parts.get((x, z), ()))
        if abs(im) > imag_tol:
            label = PauliString(n, x, z).to_label()
            raise ValidationError(f"encoded coefficient of {label} has imaginary part {im!r}")
        c = math.fsum(re_parts[(x, z)])
        if abs(c) > spec.cutoff and c != 0:
            terms.append(WeightedPauli(c, PauliString(n, x, z)))
    meta = {
        "encoding": spec.kind,
        "n_modes": spec.n_modes,
        "modals": spec.modals,
        "qubits_per_mode": spec.qubits_per_mode,
        "cutoff": spec.cutoff,
    }
    if sq.truncation_order is not None:
        meta["truncation_order"] = sq.truncation_order
    return WeightedPauliHamiltonian(n, tuple(terms), meta)


@dataclass(frozen=True)
class LocalityStats:
    histogram: dict[int, int]
    max_weight: int
    mean_weight: float

    def to_dict(self) -> dict:
        return {
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "max_weight": self.max_weight,
            "mean_weight": self.mean_weight,
        }


def locality_stats(h: WeightedPauliHamiltonian) -> LocalityStats:
    """Histogram of Pauli weights (number of non-identity sites)."""
    weights = [t.pauli.weight for t in h.terms]
    if not weights:
        raise ValidationError("locality statistics need a nonempty Hamiltonian")
    hist = Counter(weights)
    return LocalityStats(dict(sorted(hist.items())), max(weights), sum(weights) / len(weights))
