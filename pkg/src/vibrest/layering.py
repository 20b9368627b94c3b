"""Greedy packing of Pauli exponentials into layers with disjoint supports.

Terms are visited in a random order.  A term joins the current layer when its
support is disjoint from everything already in the layer; otherwise the layer
is closed and the term opens a new one.  The ratio of terms to layers is a
proxy for how much a Trotter step can be parallelized.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliString, WeightedPauliHamiltonian

__all__ = ["LayeringStats", "greedy_layers", "greedy_partition", "depth_ratio", "run_rng"]


def run_rng(seed: int, run: int = 0) -> np.random.Generator:
    """Generator for run ``run`` of a master ``seed`` (counter offset)."""
    return np.random.Generator(np.random.PCG64(seed + run))


def _supports(terms: Iterable) -> list[int]:
    out = []
    for t in terms:
        if isinstance(t, PauliString):
            out.append(t.support)
        elif isinstance(t, int):
            out.append(t)
        else:
            out.append(t.pauli.support)
    return out


def greedy_partition(
    supports: Sequence[int], order: Sequence[int], strategy: str = "scan"
) -> list[list[int]]:
    """Pack term indices, visited in ``order``, into layers.

    ``strategy="scan"`` only ever looks at the newest layer.
    ``strategy="best_fit"`` places each term in the first earlier layer it
    fits, opening a new layer only if none fits; this goes beyond the plain
    scan and is offered for comparison.
    """
    if strategy not in ("scan", "best_fit"):
        raise ValueError(f"unknown strategy {strategy!r}")
    layers: list[list[int]] = []
    occupied: list[int] = []
    for i in order:
        s = supports[i]
        if strategy == "scan":
            if layers and not (occupied[-1] & s):
                layers[-1].append(i)
                occupied[-1] |= s
                continue
        else:
            for k, occ in enumerate(occupied):
                if not occ & s:
                    layers[k].append(i)
                    occupied[k] |= s
                    break
            else:
                layers.append([i])
                occupied.append(s)
            continue
        layers.append([i])
        occupied.append(s)
    return layers


def greedy_layers(terms: Sequence, seed: int, strategy: str = "scan") -> int:
    """Number of layers after a seeded random shuffle of ``terms``.

    ``terms`` may hold :class:`PauliString`, weighted terms or raw support
    bitmasks.
    """
    supports = _supports(terms)
    if not supports:
        raise ValueError("greedy layering needs at least one term")
    order = run_rng(seed).permutation(len(supports))
    return len(greedy_partition(supports, order, strategy))


@dataclass(frozen=True)
class LayeringStats:
    n_terms: int
    runs: int
    seed: int
    ratios: tuple[float, ...]
    layer_counts: tuple[int, ...]
    strategy: str = "scan"

    @property
    def mean_ratio(self) -> float:
        return statistics.fmean(self.ratios)

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)

    @property
    def std_ratio(self) -> float:
        return statistics.pstdev(self.ratios) if len(self.ratios) > 1 else 0.0

    def to_dict(self) -> dict:
        return {
            "n_terms": self.n_terms,
            "runs": self.runs,
            "seed": self.seed,
            "strategy": self.strategy,
            "mean_ratio": self.mean_ratio,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "std_ratio": self.std_ratio,
            "ratios": list(self.ratios),
            "layer_counts": list(self.layer_counts),
        }


def depth_ratio(
    h: WeightedPauliHamiltonian | Sequence,
    runs: int = 100,
    seed: int = 0,
    strategy: str = "scan",
) -> LayeringStats:
    """Run greedy layering ``runs`` times; run ``i`` uses seed ``seed + i``."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    terms = h.terms if isinstance(h, WeightedPauliHamiltonian) else h
    supports = _supports(terms)
    if not supports:
        raise ValueError("greedy layering needs at least one term")
    n = len(supports)
    counts = []
    for run in range(runs):
        order = run_rng(seed, run).permutation(n)
        counts.append(len(greedy_partition(supports, order, strategy)))
    return LayeringStats(n, runs, seed, tuple(n / c for c in counts), tuple(counts), strategy)
