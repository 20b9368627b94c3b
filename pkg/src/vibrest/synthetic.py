"""Synthetic inputs for demos and tests.

Real anharmonic force fields are not shipped with this package, so these
generators produce structurally similar stand-ins: chain-coupled polynomial
potentials whose coefficients shrink with coupling order, and random Pauli
Hamiltonians with log-uniform coefficient magnitudes.
"""

from __future__ import annotations

import math

import numpy as np

from .hamiltonian import PesTerm, VibProblem
from .pauli import PauliString, WeightedPauli, WeightedPauliHamiltonian

__all__ = ["chain_pes", "random_pauli_hamiltonian"]


def _log_uniform(rng: np.random.Generator, scale: float, decades: float) -> float:
    mag = scale * 10.0 ** rng.uniform(-decades, 0.0)
    return float(mag if rng.random() < 0.5 else -mag)


def chain_pes(
    n_modes: int,
    modals: int,
    seed: int = 0,
    order: int = 3,
    reach: int = 2,
    scales: tuple[float, float, float] = (30.0, 3.0, 0.3),
    decades: float = 4.0,
) -> tuple[VibProblem, list[PesTerm]]:
    """Anharmonic potential with couplings between modes at most ``reach`` apart.

    One-mode terms are cubic and quartic, two-mode terms cover all cubic and
    quartic monomials of a pair, and three-mode terms are ``Q_l Q_m Q_n``
    and the quartic monomials with one squared coordinate.  Magnitudes are
    log-uniform over ``decades`` below ``scales[order - 1]`` (cm^-1).
    """
    rng = np.random.default_rng(seed)
    omegas = tuple(float(w) for w in np.sort(rng.uniform(300.0, 3400.0, n_modes))[::-1])
    problem = VibProblem(n_modes, min(order, n_modes), modals, omegas)
    terms: list[PesTerm] = []
    for l in range(n_modes):
        for k in (3, 4):
            terms.append(PesTerm((l,), (k,), _log_uniform(rng, scales[0], decades)))
    if order >= 2:
        for l in range(n_modes):
            for m in range(l + 1, min(n_modes, l + reach + 1)):
                for pw in ((1, 2), (2, 1), (2, 2), (1, 3), (3, 1)):
                    terms.append(PesTerm((l, m), pw, _log_uniform(rng, scales[1], decades)))
    if order >= 3:
        for l in range(n_modes):
            for m in range(l + 1, min(n_modes, l + reach + 1)):
                for n in range(m + 1, min(n_modes, l + reach + 1)):
                    for pw in ((1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)):
                        terms.append(PesTerm((l, m, n), pw, _log_uniform(rng, scales[2], decades)))
    return problem, terms


def random_pauli_hamiltonian(
    n_terms: int,
    n_qubits: int,
    rng: np.random.Generator,
    max_weight: int | None = None,
    decades: float = 4.0,
) -> WeightedPauliHamiltonian:
    """Distinct random Pauli strings with log-uniform coefficient magnitudes.

    With ``max_weight=None`` every site is drawn uniformly from I, X, Y, Z;
    otherwise each string gets a uniformly drawn weight in ``[1, max_weight]``
    on random sites.
    """
    top = n_qubits if max_weight is None else min(max_weight, n_qubits)
    available = sum(math.comb(n_qubits, w) * 3**w for w in range(1, top + 1))
    if n_terms > available:
        raise ValueError(f"only {available} distinct strings available, {n_terms} requested")
    seen: set[tuple[int, int]] = set()
    terms = []
    while len(terms) < n_terms:
        if max_weight is None:
            x = int(rng.integers(0, 2, n_qubits) @ (1 << np.arange(n_qubits, dtype=object)))
            z = int(rng.integers(0, 2, n_qubits) @ (1 << np.arange(n_qubits, dtype=object)))
        else:
            w = int(rng.integers(1, max_weight + 1))
            sites = rng.choice(n_qubits, size=min(w, n_qubits), replace=False)
            x = z = 0
            for s in sites:
                kind = int(rng.integers(1, 4))
                if kind & 1:
                    x |= 1 << int(s)
                if kind & 2:
                    z |= 1 << int(s)
        if (x, z) == (0, 0) or (x, z) in seen:
            continue
        seen.add((x, z))
        mag = 10.0 ** rng.uniform(-decades, 0.0)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        terms.append(WeightedPauli(sign * mag, PauliString(n_qubits, x, z)))
    return WeightedPauliHamiltonian(n_qubits, tuple(terms), {"source": "random"})
