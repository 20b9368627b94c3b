import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense_boson, quadrature_element
from vibrest.errors import ValidationError
from vibrest.hamiltonian import (
    PesTerm,
    SecondQuantizedHamiltonian,
    SqTerm,
    VibProblem,
    build_second_quantized,
    count_terms,
    ho_matrix_element,
    polyyne_modes,
)
from vibrest.io import read_pes, read_sq

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def as_dict(sq):
    return {t.factors: t.coeff for t in sq.terms}


class TestMatrixElements:
    def test_examples(self):
        assert ho_matrix_element(0, 1, 1) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert ho_matrix_element(0, 0, 1) == 0.0
        assert ho_matrix_element(0, 0, 2) == pytest.approx(0.5, abs=1e-15)

    def test_q_squared_from_dense_diagonalization(self):
        # position operator of a 12-level oscillator: <0|Q^2|0> from its eigenbasis
        n = 12
        off = np.sqrt(np.arange(1, n) / 2.0)
        q = np.diag(off, 1) + np.diag(off, -1)
        vals, vecs = np.linalg.eigh(q)
        q2 = vecs @ np.diag(vals**2) @ vecs.T
        assert q2[0, 0] == pytest.approx(ho_matrix_element(0, 0, 2), abs=1e-12)

    @given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
    def test_against_quadrature(self, m, n, k):
        assert ho_matrix_element(m, n, k) == pytest.approx(quadrature_element(m, n, k), abs=1e-10)

    def test_truncation_does_not_leak(self):
        # powers are taken in a basis large enough that truncation is invisible
        assert ho_matrix_element(1, 1, 4, d=2) == pytest.approx(quadrature_element(1, 1, 4), abs=1e-12)


class TestBuild:
    def test_harmonic_two_modals(self):
        sq = build_second_quantized(VibProblem(1, 1, 2, (1000.0,)), [])
        assert as_dict(sq) == {((0, 0, 0),): 500.0, ((0, 1, 1),): 1500.0}

    def test_linear_term(self):
        c = 7.0
        sq = build_second_quantized(VibProblem(1, 1, 2, (1000.0,)), [PesTerm((0,), (1,), c)])
        d = as_dict(sq)
        assert d[((0, 0, 1),)] == pytest.approx(c / math.sqrt(2), rel=1e-15)
        assert d[((0, 1, 0),)] == pytest.approx(c / math.sqrt(2), rel=1e-15)

    def test_bilinear_against_kronecker(self):
        c = 3.5
        sq = build_second_quantized(VibProblem(2, 2, 3, (1.0, 1.0)), [PesTerm((0, 1), (1, 1), c)])
        got = dense_boson(2, 3, [(t.coeff, t.factors) for t in sq.terms if len(t.factors) == 2])
        q = np.array([[quadrature_element(a, b, 1) for b in range(3)] for a in range(3)])
        assert np.allclose(got, c * np.kron(q, q), atol=1e-12)

    def test_golden_sample(self):
        problem, pes = read_pes(SAMPLES / "cubic3.pes.json")
        got = as_dict(build_second_quantized(problem, pes))
        want = as_dict(read_sq(SAMPLES / "cubic3.golden.sq.json"))
        assert set(got) == set(want)
        for k in want:
            assert got[k] == pytest.approx(want[k], rel=1e-12, abs=1e-12)

    def test_harmonic_only_is_diagonal(self):
        sq = build_second_quantized(VibProblem(3, 2, 4, (1.0, 2.0, 3.0)), [])
        assert all(len(t.factors) == 1 and t.factors[0][1] == t.factors[0][2] for t in sq.terms)

    def test_constant_folds_into_identity(self):
        sq = build_second_quantized(VibProblem(2, 1, 2, (1.0, 1.0)), [PesTerm((), (), 10.0)])
        d = as_dict(sq)
        assert d[((0, 0, 0),)] == 10.5 and d[((1, 0, 0),)] == 0.5

    def test_order_independent(self):
        problem, pes = read_pes(SAMPLES / "cubic3.pes.json")
        a = build_second_quantized(problem, pes)
        b = build_second_quantized(problem, pes[::-1])
        assert as_dict(a) == as_dict(b)

    def test_bad_terms_named(self):
        with pytest.raises(ValidationError, match="term 1"):
            build_second_quantized(
                VibProblem(2, 1, 2, (1.0, 1.0)),
                [PesTerm((0,), (3,), 1.0), PesTerm((0, 1), (1, 1), 1.0)],
            )
        with pytest.raises(ValidationError, match="modes=\\[5\\]"):
            build_second_quantized(VibProblem(2, 2, 2, (1.0, 1.0)), [PesTerm((5,), (1,), 1.0)])

    def test_cutoff(self):
        problem, pes = read_pes(SAMPLES / "cubic3.pes.json")
        full = build_second_quantized(problem, pes)
        cut = build_second_quantized(problem, pes, cutoff=1.0)
        assert len(cut) < len(full)
        assert all(abs(t.coeff) > 1.0 for t in cut.terms)


class TestTypes:
    def test_problem_validation(self):
        with pytest.raises(ValidationError):
            VibProblem(0, 1, 2, ())
        with pytest.raises(ValidationError):
            VibProblem(2, 3, 2, (1.0, 1.0))
        with pytest.raises(ValidationError):
            VibProblem(1, 1, 1, (1.0,))

    def test_sqterm_mode_order(self):
        with pytest.raises(ValidationError):
            SqTerm(1.0, ((1, 0, 0), (0, 0, 0)))
        assert SqTerm(1.0, ((0, 1, 2),)).conjugate_key() == ((0, 2, 1),)

    def test_validate_ranges(self):
        sq = SecondQuantizedHamiltonian(1, 2, (SqTerm(1.0, ((0, 2, 0),)),))
        with pytest.raises(ValidationError, match="modal index"):
            sq.validate()


class TestCounting:
    @pytest.mark.parametrize(
        "L, d, expected",
        [(7, 4, 148848), (13, 4, 1191632), (7, 6, 1660428), (19, 6, 45431964)],
    )
    def test_table_values(self, L, d, expected):
        assert count_terms(L, d, 3) == expected

    def test_trivial(self):
        assert count_terms(1, 1, 1) == 1

    @given(st.integers(1, 6), st.integers(1, 4), st.integers(1, 3))
    def test_brute_force(self, L, d, D):
        D = min(D, L)
        # every ordered (raise, lower) pair on each nonempty set of at most D modes
        from itertools import combinations

        brute = sum(d ** (2 * len(s)) for m in range(1, D + 1) for s in combinations(range(L), m))
        assert count_terms(L, d, D) == brute

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            count_terms(2, 4, 3)
        with pytest.raises(ValueError):
            count_terms(0, 4, 1)

    def test_polyyne(self):
        assert [polyyne_modes(n) for n in (1, 2, 3, 80)] == [7, 13, 19, 481]
        with pytest.raises(ValueError):
            polyyne_modes(0)
