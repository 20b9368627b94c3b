"""L-mode vibrational Hamiltonians in a harmonic-oscillator modal basis.

The potential is given as a polynomial in dimensionless normal coordinates,
``V = sum_t c_t prod_l Q_l**k_l``, on top of the harmonic part, which is
folded analytically into diagonal terms ``omega_l (n + 1/2)``.  Every
coupling term becomes a set of transfer-operator products
``a^dag_{k_l} a_{h_l}`` whose coefficients are products of single-mode
integrals ``<k|Q**n|h>``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import ValidationError

__all__ = [
    "VibProblem",
    "PesTerm",
    "SqTerm",
    "SecondQuantizedHamiltonian",
    "ho_matrix_element",
    "build_second_quantized",
    "count_terms",
    "polyyne_modes",
]


@dataclass(frozen=True)
class VibProblem:
    """Sizing of a vibrational problem.

    Attributes:
        n_modes: Number of vibrational modes ``L``.
        truncation_order: Maximum number of coupled modes ``D``.
        modals: Modals per mode ``d`` (uniform).
        omegas: Harmonic frequencies in cm^-1, one per mode.
    """

    n_modes: int
    truncation_order: int
    modals: int
    omegas: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "omegas", tuple(float(w) for w in self.omegas))
        if self.n_modes < 1:
            raise ValidationError(f"n_modes must be >= 1, got {self.n_modes}")
        if not 1 <= self.truncation_order <= self.n_modes:
            raise ValidationError(
                f"truncation_order must be in [1, {self.n_modes}], got {self.truncation_order}"
            )
        if self.modals < 2:
            raise ValidationError(f"modals must be >= 2, got {self.modals}")
        if len(self.omegas) != self.n_modes:
            raise ValidationError(f"expected {self.n_modes} omegas, got {len(self.omegas)}")
        if any(not w > 0 for w in self.omegas):
            raise ValidationError("all harmonic frequencies must be positive")


@dataclass(frozen=True)
class PesTerm:
    """``coeff * prod_i Q_{modes[i]} ** powers[i]``; empty ``modes`` is the constant."""

    modes: tuple[int, ...]
    powers: tuple[int, ...]
    coeff: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        object.__setattr__(self, "powers", tuple(int(k) for k in self.powers))
        if len(self.modes) != len(self.powers):
            raise ValidationError(f"modes and powers differ in length in {self}")
        if any(b <= a for a, b in zip(self.modes, self.modes[1:])):
            raise ValidationError(f"modes must be strictly increasing in {self}")
        if any(k < 1 for k in self.powers):
            raise ValidationError(f"powers must be >= 1 in {self}")
        if not math.isfinite(self.coeff):
            raise ValidationError(f"non-finite coefficient in {self}")


# One factor (mode, raise, lower) stands for a^dag_raise a_lower on that mode.
Factor = tuple[int, int, int]


@dataclass(frozen=True)
class SqTerm:
    """``coeff * prod_f a^dag_{f.raise} a_{f.lower}`` over distinct modes."""

    coeff: float
    factors: tuple[Factor, ...]

    def __post_init__(self) -> None:
        facs = tuple((int(l), int(k), int(h)) for l, k, h in self.factors)
        object.__setattr__(self, "factors", facs)
        modes = [f[0] for f in facs]
        if any(b <= a for a, b in zip(modes, modes[1:])):
            raise ValidationError(f"factor modes must be strictly increasing in {self}")

    def conjugate_key(self) -> tuple[Factor, ...]:
        return tuple((l, h, k) for l, k, h in self.factors)


@dataclass(frozen=True)
class SecondQuantizedHamiltonian:
    """Sum of :class:`SqTerm` on ``n_modes`` modes with ``modals`` modals each."""

    n_modes: int
    modals: int
    terms: tuple[SqTerm, ...]
    truncation_order: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def validate(self) -> None:
        """Check index ranges; raise :class:`ValidationError` naming bad terms."""
        for i, t in enumerate(self.terms):
            for l, k, h in t.factors:
                if not 0 <= l < self.n_modes:
                    raise ValidationError(f"term {i}: mode {l} out of range [0, {self.n_modes})")
                if not (0 <= k < self.modals and 0 <= h < self.modals):
                    raise ValidationError(
                        f"term {i}: modal index ({k}, {h}) out of range [0, {self.modals})"
                    )
            if self.truncation_order is not None and len(t.factors) > self.truncation_order:
                raise ValidationError(
                    f"term {i}: couples {len(t.factors)} modes, above truncation order "
                    f"{self.truncation_order}"
                )

    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)


@lru_cache(maxsize=None)
def _q_power(size: int, k: int) -> np.ndarray:
    q = np.zeros((size, size))
    off = np.sqrt(np.arange(1, size) / 2.0)
    q[np.arange(size - 1), np.arange(1, size)] = off
    q[np.arange(1, size), np.arange(size - 1)] = off
    out = np.linalg.matrix_power(q, k)
    out.setflags(write=False)
    return out


def ho_matrix_element(m: int, n: int, k: int, d: int | None = None) -> float:
    """Return ``<m| Q**k |n>`` for the dimensionless harmonic oscillator.

    ``Q = (a + a^dag)/sqrt(2)``.  The tridiagonal ``Q`` is built in a basis
    of ``d + k`` states so that the ``d x d`` block of ``Q**k`` is exact.
    ``d`` defaults to ``max(m, n) + 1``.
    """
    if m < 0 or n < 0 or k < 0:
        raise ValueError(f"indices and power must be non-negative, got ({m}, {n}, {k})")
    if d is None:
        d = max(m, n) + 1
    if m >= d or n >= d:
        raise ValueError(f"modal index out of range for basis size {d}")
    if abs(m - n) > k or (m - n - k) % 2:
        return 0.0
    return float(_q_power(d + k, k)[m, n])


def _mode_integrals(d: int, k: int) -> np.ndarray:
    return np.array([[ho_matrix_element(a, b, k, d) for b in range(d)] for a in range(d)])


def build_second_quantized(
    problem: VibProblem, pes: Iterable[PesTerm], cutoff: float = 0.0
) -> SecondQuantizedHamiltonian:
    """Assemble the second-quantized Hamiltonian of ``problem`` plus ``pes``.

    Terms whose coefficient magnitude is ``<= cutoff`` are dropped; with
    the default ``cutoff=0`` only exact zeros go.  A constant PES term is
    folded into mode 0 as ``V0 * sum_k a^dag_k a_k``, which is the identity
    on the physical (one modal per mode) space.
    """
    L, d, D = problem.n_modes, problem.modals, problem.truncation_order
    acc: dict[tuple[Factor, ...], list[float]] = {}

    def add(key: tuple[Factor, ...], value: float) -> None:
        acc.setdefault(key, []).append(value)

    for l, w in enumerate(problem.omegas):
        for n in range(d):
            add(((l, n, n),), w * (n + 0.5))

    bad = []
    pes = list(pes)
    for idx, t in enumerate(pes):
        if len(t.modes) > D or any(not 0 <= m < L for m in t.modes):
            bad.append((idx, t))
    if bad:
        lines = "; ".join(
            f"term {i} modes={list(t.modes)} powers={list(t.powers)}" for i, t in bad
        )
        raise ValidationError(f"PES terms outside {L} modes / order {D}: {lines}")

    for t in pes:
        if t.coeff == 0:
            continue
        if not t.modes:
            for n in range(d):
                add(((0, n, n),), t.coeff)
            continue
        blocks = [_mode_integrals(d, k) for k in t.powers]
        nonzero = [list(zip(*np.nonzero(b))) for b in blocks]
        for combo in itertools.product(*nonzero):
            value = t.coeff
            for b, (k, h) in zip(blocks, combo):
                value *= b[k, h]
            key = tuple((l, int(k), int(h)) for l, (k, h) in zip(t.modes, combo))
            add(key, value)

    terms = []
    for key in sorted(acc):
        c = math.fsum(acc[key])
        if abs(c) > cutoff:
            terms.append(SqTerm(c, key))
    return SecondQuantizedHamiltonian(L, d, tuple(terms), D, {"cutoff": cutoff})


def count_terms(n_modes: int, modals: int, order: int) -> int:
    """Number of summands of the L-mode Hamiltonian, zeros included.

    ``sum_{m=1}^{D} C(L, m) * d**(2m)``.
    """
    if n_modes < 1 or modals < 1 or order < 1:
        raise ValueError("n_modes, modals and order must be >= 1")
    if order > n_modes:
        raise ValueError(f"order {order} exceeds number of modes {n_modes}")
    return sum(math.comb(n_modes, m) * modals ** (2 * m) for m in range(1, order + 1))


def polyyne_modes(n_triple_bonds: int) -> int:
    """Vibrational modes of a linear polyyne with ``n`` triple bonds."""
    if n_triple_bonds < 1:
        raise ValueError(f"need at least one triple bond, got {n_triple_bonds}")
    return 6 * n_triple_bonds + 1

