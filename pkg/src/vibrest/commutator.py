"""Commutator scaling of weighted Pauli Hamiltonians.

``alpha_p(S)`` sums the spectral norm of every nested commutator
``[H_{i_p}, [..., [H_{i_1}, H_{i_0}]]]`` over ordered index tuples drawn from
``S``.  For Pauli terms each summand is ``2**p * prod |c|`` or zero, and it is
nonzero exactly when every ``P_{i_k}`` anticommutes with an odd number of its
predecessors.  By bilinearity of the symplectic form that is the same as
``P_{i_k}`` anticommuting with the product ``P_{i_{k-1}} ... P_{i_0}``, so a
prefix only needs its running product.  :func:`alpha_exact` walks prefixes
level by level, drops dead ones immediately and merges prefixes whose running
products coincide (they have identical futures).

:func:`alpha_bounds` splits terms at a magnitude threshold and sandwiches
``alpha_p`` between the exact value on the big terms and that value plus
cross-term estimates.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError
from .pauli import WeightedPauliHamiltonian

__all__ = [
    "ScalingResult",
    "term_norm_sum",
    "alpha_exact",
    "alpha_exact_stats",
    "alpha_bounds",
    "crude_bound",
    "anticommutation_matrix",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**10  # parity checks
BLOCK = 256  # leading indices per work unit; fixed so results do not depend on workers
_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True)
class ScalingResult:
    """Bounds ``lower <= alpha_p <= upper`` and how they were obtained."""

    p: int
    mode: str  # "exact" | "crude" | "split"
    lower: float
    upper: float
    tol: float
    n_big: int
    n_small: int
    norm_big: float
    norm_small: float
    tuples_evaluated: int
    wall_time: float
    rigorous: bool = False
    refine: str = "none"

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(self.tol):
            d["tol"] = "inf"
        return d


def term_norm_sum(h: WeightedPauliHamiltonian, subset: Iterable[int] | None = None) -> float:
    """``N(S) = sum_{i in S} |c_i|`` (all terms when ``subset`` is None)."""
    c = h.coeffs
    if subset is None:
        return math.fsum(np.abs(c))
    return math.fsum(abs(c[i]) for i in subset)


def crude_bound(h: WeightedPauliHamiltonian, p: int, rigorous: bool = False) -> float:
    """``N(S)**(p+1)``, times ``2**p`` when ``rigorous``."""
    _check_order(p)
    return (2**p if rigorous else 1) * term_norm_sum(h) ** (p + 1)


def _check_order(p: int) -> None:
    if p < 1:
        raise ValueError(f"product-formula order must be >= 1, got {p}")


def _anti(sx, sz, tx, tz) -> np.ndarray:
    """Boolean (M, N) anticommutation table between rows of two mask arrays."""
    t = (sx[:, None, :] & tz[None, :, :]) ^ (sz[:, None, :] & tx[None, :, :])
    return (np.bitwise_count(t).sum(axis=-1, dtype=np.int64) & 1).astype(bool)


def anticommutation_matrix(h: WeightedPauliHamiltonian) -> np.ndarray:
    """Dense boolean ``N x N`` table of which terms anticommute."""
    x, z = h.packed
    return _anti(x, z, x, z)


def _merge(sx, sz, sw):
    keys = np.ascontiguousarray(np.concatenate([sx, sz], axis=1))
    void = keys.view(np.dtype((np.void, keys.dtype.itemsize * keys.shape[1]))).ravel()
    _, first, inverse = np.unique(void, return_index=True, return_inverse=True)
    weights = np.bincount(inverse.ravel(), weights=sw, minlength=len(first))
    return sx[first], sz[first], weights


def _chains(x, z, w, p, lead, budget):
    """Sum of ``prod |c|`` over nonvanishing chains whose first index is in ``lead``.

    Returns ``(value, checks)``.  ``value`` still lacks the ``2**p`` factor.
    """
    n, n_words = x.shape
    sx, sz, sw = x[lead], z[lead], w[lead]
    checks = 0
    chunk = max(1, _CHUNK_ELEMS // max(1, n * n_words))
    for level in range(1, p + 1):
        m = len(sw)
        if m == 0:
            return 0.0, checks
        checks += m * n
        if checks > budget:
            raise ResourceLimitError(
                f"commutator enumeration exceeded budget of {budget:.3g} parity checks; "
                "raise the splitting tolerance or the budget"
            )
        last = level == p
        partial = []
        nx, nz, nw = [], [], []
        for s in range(0, m, chunk):
            a = _anti(sx[s : s + chunk], sz[s : s + chunk], x, z)
            if last:
                partial.append(float(sw[s : s + chunk] @ (a @ w)))
            else:
                mi, ni = np.nonzero(a)
                mi = mi + s
                nx.append(sx[mi] ^ x[ni])
                nz.append(sz[mi] ^ z[ni])
                nw.append(sw[mi] * w[ni])
        if last:
            return math.fsum(partial), checks
        sx, sz, sw = _merge(np.concatenate(nx), np.concatenate(nz), np.concatenate(nw))
    raise AssertionError("unreachable")


_WORKER_STATE: dict = {}


def _init_worker(x, z, w, p, budget):
    _WORKER_STATE.update(x=x, z=z, w=w, p=p, budget=budget)


def _run_block(bounds):
    s = _WORKER_STATE
    lead = np.arange(*bounds)
    return _chains(s["x"], s["z"], s["w"], s["p"], lead, s["budget"])


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("VIBREST_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def alpha_exact_stats(
    h: WeightedPauliHamiltonian,
    p: int,
    subset: Sequence[int] | None = None,
    *,
    budget: float = DEFAULT_BUDGET,
    workers: int | None = 1,
) -> tuple[float, int]:
    """Like :func:`alpha_exact` but also return the number of parity checks."""
    _check_order(p)
    x, z = h.packed
    w = np.abs(h.coeffs)
    if subset is not None:
        idx = np.asarray(list(subset), dtype=np.int64)
        x, z, w = x[idx], z[idx], w[idx]
    n = len(w)
    if n == 0:
        return 0.0, 0
    blocks = [(s, min(n, s + BLOCK)) for s in range(0, n, BLOCK)]
    workers = min(_resolve_workers(workers), len(blocks))
    if workers == 1:
        results = []
        spent = 0
        for b in blocks:
            val, chk = _chains(x, z, w, p, np.arange(*b), budget - spent)
            spent += chk
            results.append((val, chk))
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(x, z, w, p, budget)
        ) as pool:
            results = list(pool.map(_run_block, blocks))
    checks = sum(c for _, c in results)
    if checks > budget:
        raise ResourceLimitError(
            f"commutator enumeration exceeded budget of {budget:.3g} parity checks"
        )
    return 2**p * math.fsum(v for v, _ in results), checks


def alpha_exact(
    h: WeightedPauliHamiltonian,
    p: int,
    subset: Sequence[int] | None = None,
    *,
    budget: float = DEFAULT_BUDGET,
    workers: int | None = 1,
) -> float:
    """Exact commutator scaling ``alpha_p`` over ``subset`` (default: all terms).

    Raises:
        ResourceLimitError: when more than ``budget`` parity checks are needed.
    """
    return alpha_exact_stats(h, p, subset, budget=budget, workers=workers)[0]


def alpha_bounds(
    h: WeightedPauliHamiltonian,
    p: int,
    tol: float,
    *,
    refine: str | None = None,
    rigorous: bool = False,
    budget: float = DEFAULT_BUDGET,
    workers: int | None = 1,
) -> ScalingResult:
    """Bound ``alpha_p`` by splitting terms at ``|c| > tol``.

    The lower bound is ``alpha_p`` of the big terms.  The upper bound adds
    ``sum_{k>=1} C(p+1, k) N_big**(p+1-k) N_small**k`` for the tuples that use
    at least one small term.  For ``p == 2`` the default ``refine="alpha1"``
    replaces the one-small-term piece by
    ``N_small alpha_1(big) + N_big (alpha_1(all) - alpha_1(big))``;
    ``refine="full"`` additionally bounds the two- and three-small-term
    pieces through ``alpha_1`` and keeps the smaller total.

    With ``rigorous=True`` every cross-term estimate carries the commutator
    factor (``2**p`` for the binomial terms, 2 for the ``alpha_1`` terms), so
    the upper bound is a true bound for every Hamiltonian.  Without it the
    estimates use the plain norm products, which is the convention under
    which ``tol=inf`` reproduces :func:`crude_bound`.
    """
    _check_order(p)
    if tol < 0 or math.isnan(tol):
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    if refine is None:
        refine = "alpha1" if p == 2 else "none"
    if refine not in ("none", "alpha1", "full"):
        raise ValueError(f"unknown refinement {refine!r}")
    if refine != "none" and p != 2:
        raise ValueError("alpha_1 refinements are only defined for p = 2")
    start = time.perf_counter()
    mags = np.abs(h.coeffs)
    big = np.flatnonzero(mags > tol)
    small = np.flatnonzero(mags <= tol)
    nb = term_norm_sum(h, big)
    ns = term_norm_sum(h, small)
    lower, checks = alpha_exact_stats(h, p, big, budget=budget, workers=workers)
    c_bin = 2**p if rigorous else 1
    c_one = 2 if rigorous else 1

    if len(small) == 0:
        mode, upper = "exact", lower
    else:
        mode = "crude" if len(big) == 0 else "split"
        binom = [math.comb(p + 1, k) * nb ** (p + 1 - k) * ns**k for k in range(1, p + 2)]
        upper = lower + c_bin * math.fsum(binom)
        if refine != "none" and len(big) > 0:
            a1_big, chk1 = alpha_exact_stats(h, 1, big, budget=budget - checks, workers=workers)
            a1_all, chk2 = alpha_exact_stats(h, 1, None, budget=budget - checks - chk1, workers=workers)
            checks += chk1 + chk2
            cross = max(0.0, a1_all - a1_big)
            upper = lower + c_one * (ns * a1_big + nb * cross) + c_bin * math.fsum(binom[1:])
            if refine == "full":
                upper = min(upper, lower + c_one * (ns * a1_big + (nb + ns) * cross))
    return ScalingResult(
        p=p,
        mode=mode,
        lower=lower,
        upper=max(upper, lower),
        tol=float(tol),
        n_big=len(big),
        n_small=len(small),
        norm_big=nb,
        norm_small=ns,
        tuples_evaluated=checks,
        wall_time=time.perf_counter() - start,
        rigorous=rigorous,
        refine=refine,
    )
