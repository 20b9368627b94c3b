import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_alpha
from vibrest.commutator import (
    alpha_bounds,
    alpha_exact,
    alpha_exact_stats,
    anticommutation_matrix,
    crude_bound,
    term_norm_sum,
)
from vibrest.errors import ResourceLimitError
from vibrest.pauli import WeightedPauliHamiltonian, anticommutes
from vibrest.synthetic import random_pauli_hamiltonian


def H(*pairs):
    return WeightedPauliHamiltonian.from_labels(pairs)


def random_h(seed, n_terms, n_qubits, **kw):
    return random_pauli_hamiltonian(n_terms, n_qubits, np.random.default_rng(seed), **kw)


def labels_of(h):
    return [t.pauli.to_label() for t in h], [t.coeff for t in h]


class TestNormSum:
    def test_examples(self):
        h = H((1.0, "X"), (-2.0, "Z"))
        assert term_norm_sum(h) == 3.0
        assert term_norm_sum(h, []) == 0.0

    def test_random(self):
        h = random_h(1, 50, 8)
        assert term_norm_sum(h) == pytest.approx(sum(abs(t.coeff) for t in h.terms), rel=1e-15)

    def test_crude(self):
        assert crude_bound(H((1.0, "X"), (1.0, "Z")), 1) == 4.0
        assert crude_bound(WeightedPauliHamiltonian(1, ()), 1) == 0.0
        assert crude_bound(H((1.0, "X"), (1.0, "Z")), 2, rigorous=True) == 32.0


class TestExact:
    def test_x_plus_z(self):
        h = H((1.0, "X"), (1.0, "Z"))
        assert alpha_exact(h, 1) == 4.0
        assert brute_alpha([1.0, 1.0], ["X", "Z"], 1) == pytest.approx(4.0)

    def test_commuting(self):
        h = H((1.0, "ZZI"), (2.0, "IZZ"), (0.5, "ZIZ"))
        for p in (1, 2, 3):
            assert alpha_exact(h, p) == 0.0

    def test_pauli_triplet(self):
        # frozen from the dense oracle: every ordered pair of distinct Paulis survives
        h = H((1.0, "X"), (1.0, "Y"), (1.0, "Z"))
        assert alpha_exact(h, 1) == 12.0
        assert alpha_exact(h, 2) == 48.0
        assert brute_alpha([1.0] * 3, ["X", "Y", "Z"], 2) == pytest.approx(48.0)

    @pytest.mark.parametrize("seed", range(3))
    def test_random_against_dense(self, seed):
        h = random_h(seed, 20, 6)
        labs, cs = labels_of(h)
        for p in (1, 2):
            assert alpha_exact(h, p) == pytest.approx(brute_alpha(cs, labs, p), rel=1e-9)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 8), st.integers(1, 4), st.integers(1, 3))
    def test_small_against_dense(self, seed, n, nq, p):
        n = min(n, 4**nq - 1)
        h = random_h(seed, n, nq)
        labs, cs = labels_of(h)
        assert alpha_exact(h, p) == pytest.approx(brute_alpha(cs, labs, p), rel=1e-9, abs=1e-12)

    def test_subset(self):
        h = random_h(4, 30, 6)
        sub = [0, 3, 5, 7, 11]
        assert alpha_exact(h, 2, sub) == pytest.approx(alpha_exact(h.subset(sub), 2), rel=1e-12)

    def test_large_qubit_count(self):
        # more than one 64-bit word per mask
        h = random_h(5, 40, 150, max_weight=4)
        a = anticommutation_matrix(h)
        for i in range(0, 40, 7):
            for j in range(0, 40, 5):
                assert a[i, j] == anticommutes(h.terms[i].pauli, h.terms[j].pauli)
        small = h.subset(range(8))
        brute = sum(
            (2 * abs(s.coeff) * abs(t.coeff)) for s in small for t in small if anticommutes(s.pauli, t.pauli)
        )
        assert alpha_exact(small, 1) == pytest.approx(brute, rel=1e-12)

    def test_budget(self):
        h = random_h(6, 100, 10)
        _, checks = alpha_exact_stats(h, 2)
        with pytest.raises(ResourceLimitError):
            alpha_exact(h, 2, budget=checks - 1)
        assert alpha_exact(h, 2, budget=checks) > 0

    def test_workers_do_not_change_result(self):
        h = random_h(7, 600, 12)
        assert alpha_exact(h, 2, workers=1) == alpha_exact(h, 2, workers=2)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            alpha_exact(H((1.0, "X")), 0)

    @pytest.mark.parametrize("gamma", [0.5, 2.0, 10.0])
    def test_homogeneity(self, gamma):
        h = random_h(8, 40, 6)
        for p in (1, 2):
            assert alpha_exact(h.scaled(gamma), p) == pytest.approx(gamma ** (p + 1) * alpha_exact(h, p), rel=1e-10)


class TestBounds:
    def test_tol_zero_is_exact(self):
        h = random_h(9, 60, 8)
        for p in (1, 2):
            r = alpha_bounds(h, p, 0.0)
            assert r.mode == "exact" and r.lower == r.upper == alpha_exact(h, p)

    def test_tol_inf_is_crude(self):
        h = random_h(10, 60, 8)
        for p in (1, 2):
            r = alpha_bounds(h, p, math.inf)
            assert r.mode == "crude" and r.lower == 0.0
            assert r.upper == pytest.approx(term_norm_sum(h) ** (p + 1), rel=1e-12)
            assert r.to_dict()["tol"] == "inf"

    def test_rigorous_sandwich(self):
        for seed in range(10):
            h = random_h(100 + seed, 80, 8)
            mags = np.abs(h.coeffs)
            for p in (1, 2):
                exact = alpha_exact(h, p)
                for tol in (0.0, *np.quantile(mags, [0.25, 0.5, 0.75]), math.inf):
                    for refine in ([None, "none", "full"] if p == 2 else [None]):
                        r = alpha_bounds(h, p, tol, rigorous=True, refine=refine)
                        assert r.lower <= exact * (1 + 1e-12)
                        assert exact <= r.upper * (1 + 1e-12)

    def test_default_convention_can_undershoot(self):
        # documents the gap: N**(p+1) without the 2**p commutator factor is not a bound here
        h = H((1.0, "X"), (1.0, "Y"), (1.0, "Z"))
        assert alpha_bounds(h, 1, math.inf).upper == 9.0 < alpha_exact(h, 1) == 12.0

    def test_median_split_sandwich(self):
        h = random_h(11, 200, 12, max_weight=3)
        exact = alpha_exact(h, 2)
        r = alpha_bounds(h, 2, float(np.median(np.abs(h.coeffs))), rigorous=True)
        assert r.mode == "split" and r.lower <= exact <= r.upper

    def test_refined_tighter_than_binomial(self):
        h = random_h(12, 200, 16, max_weight=3)
        tol = float(np.quantile(np.abs(h.coeffs), 0.75))
        plain = alpha_bounds(h, 2, tol, refine="none")
        ref = alpha_bounds(h, 2, tol)
        full = alpha_bounds(h, 2, tol, refine="full")
        assert ref.refine == "alpha1" and full.upper <= ref.upper <= plain.upper

    def test_bounds_monotone_in_tol(self):
        h = random_h(13, 120, 10)
        tols = sorted(np.abs(h.coeffs))[::20]
        lowers = [alpha_bounds(h, 2, t, refine="none").lower for t in tols]
        assert lowers == sorted(lowers, reverse=True)

    def test_argument_checks(self):
        h = H((1.0, "X"), (1.0, "Z"))
        with pytest.raises(ValueError):
            alpha_bounds(h, 1, -1.0)
        with pytest.raises(ValueError):
            alpha_bounds(h, 1, float("nan"))
        with pytest.raises(ValueError):
            alpha_bounds(h, 1, 0.5, refine="alpha1")
        with pytest.raises(ValueError):
            alpha_bounds(h, 2, 0.5, refine="bogus")

    def test_budget_surfaces(self):
        h = random_h(14, 200, 12)
        with pytest.raises(ResourceLimitError, match="budget"):
            alpha_bounds(h, 2, 0.0, budget=1000)
