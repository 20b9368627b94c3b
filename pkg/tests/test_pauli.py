import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_label, dense_pauli, recursive_commutator
from vibrest.errors import DimensionError, ValidationError
from vibrest.pauli import (
    PauliString,
    WeightedPauli,
    WeightedPauliHamiltonian,
    anticommutes,
    nested_commutator,
    pack_masks,
    product,
)

labels = st.integers(1, 9).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n))


def P(label):
    return PauliString.from_label(label)


class TestConstruction:
    def test_label_round_trip(self):
        for lab in ["X", "IZY", "-XX", "iZ", "-iYI"]:
            assert P(lab).to_label() == lab

    def test_qubit_zero_is_leftmost_and_lsb(self):
        p = P("XIZ")
        assert p.x == 0b001 and p.z == 0b100
        assert p.support == 0b101 and p.weight == 2

    def test_sparse(self):
        assert PauliString.from_sparse(4, {0: "Y", 3: "Z"}) == P("YIIZ")
        with pytest.raises(ValueError):
            PauliString.from_sparse(2, {5: "X"})
        with pytest.raises(ValueError):
            PauliString.from_sparse(2, {0: "Q"})

    def test_bad_label(self):
        with pytest.raises(ValueError):
            P("XQ")

    def test_words_layout(self):
        p = PauliString.from_sparse(70, {0: "X", 64: "Z", 65: "Y"})
        assert p.words().tolist() == [[1, 2], [0, 3]]

    def test_identity_and_hermitian(self):
        e = PauliString.identity(3)
        assert e.weight == 0 and e.is_hermitian
        assert not P("iX").is_hermitian


class TestAlgebra:
    def test_anticommutes_examples(self):
        assert anticommutes(P("X"), P("Z"))
        assert not anticommutes(P("XI"), P("IZ"))
        assert not anticommutes(P("XY"), P("YX"))
        a, b = dense_label("XY"), dense_label("YX")
        assert np.allclose(a @ b - b @ a, 0)

    def test_product_examples(self):
        assert product(P("X"), P("Z")) == P("-iY")
        r = product(P("XY"), P("ZZ"))
        assert np.allclose(dense_pauli(r), dense_label("XY") @ dense_label("ZZ"))
        assert r == P("YX")  # frozen from the dense product above

    @given(labels)
    def test_involution(self, lab):
        p = P(lab)
        assert p * p == PauliString.identity(len(lab))

    @given(st.data())
    def test_product_matches_dense(self, data):
        n = data.draw(st.integers(1, 5))
        a = data.draw(st.text("IXYZ", min_size=n, max_size=n))
        b = data.draw(st.text("IXYZ", min_size=n, max_size=n))
        pa = data.draw(st.sampled_from(["", "-", "i", "-i"]))
        got = dense_pauli(product(P(pa + a), P(b)))
        assert np.allclose(got, dense_label(pa + a) @ dense_label(b))

    @given(st.data())
    def test_anticommutes_matches_dense(self, data):
        n = data.draw(st.integers(1, 5))
        la = data.draw(st.text("IXYZ", min_size=n, max_size=n))
        lb = data.draw(st.text("IXYZ", min_size=n, max_size=n))
        a, b = dense_label(la), dense_label(lb)
        assert anticommutes(P(la), P(lb)) == np.allclose(a @ b, -(b @ a))

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            product(P("X"), P("XX"))
        with pytest.raises(DimensionError):
            anticommutes(P("X"), P("XX"))


class TestNestedCommutator:
    def test_single_qubit(self):
        r = nested_commutator([WeightedPauli(1.0, P("Y")), WeightedPauli(1.0, P("X"))])
        assert r.coeff == 2.0 and r.pauli == P("iZ")
        assert r.norm == 2.0

    def test_parity_zero(self):
        seq = [WeightedPauli(1.0, P(l)) for l in ("Y", "X", "Z")]
        assert nested_commutator(seq) is None

    def test_commuting_is_zero(self):
        assert nested_commutator([WeightedPauli(1.0, P("ZI")), WeightedPauli(2.0, P("IZ"))]) is None

    def test_rejects_short_and_zero(self):
        with pytest.raises(ValueError):
            nested_commutator([WeightedPauli(1.0, P("X"))])
        with pytest.raises(ValueError):
            nested_commutator([WeightedPauli(0.0, P("X")), WeightedPauli(1.0, P("Z"))])

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_matches_dense(self, data):
        n = data.draw(st.integers(1, 4))
        p = data.draw(st.integers(1, 3))
        labs = [data.draw(st.text("IXYZ", min_size=n, max_size=n)) for _ in range(p + 1)]
        cs = [data.draw(st.floats(0.1, 3.0)) * data.draw(st.sampled_from([1, -1])) for _ in labs]
        res = nested_commutator([WeightedPauli(c, P(l)) for c, l in zip(cs, labs)])
        want = recursive_commutator([c * dense_label(l) for c, l in zip(cs, labs)])
        got = np.zeros_like(want) if res is None else res.coeff * dense_pauli(res.pauli)
        assert np.allclose(got, want, atol=1e-10)


class TestHamiltonian:
    def test_from_labels_merges(self):
        h = WeightedPauliHamiltonian.from_labels([(1.0, "XZ"), (0.5, "-XZ"), (2.0, "ZZ")])
        assert len(h) == 2
        assert dict((t.pauli.to_label(), t.coeff) for t in h) == {"XZ": 0.5, "ZZ": 2.0}

    def test_rejects_duplicates_and_phases(self):
        with pytest.raises(ValidationError):
            WeightedPauliHamiltonian(1, (WeightedPauli(1.0, P("X")), WeightedPauli(2.0, P("X"))))
        with pytest.raises(ValidationError):
            WeightedPauliHamiltonian(1, (WeightedPauli(1.0, P("-X")),))
        with pytest.raises(DimensionError):
            WeightedPauliHamiltonian(2, (WeightedPauli(1.0, P("X")),))
        with pytest.raises(ValidationError):
            WeightedPauliHamiltonian.from_labels([(1.0, "iX")])

    def test_nonfinite_coeff(self):
        with pytest.raises(ValueError):
            WeightedPauli(float("nan"), P("X"))

    def test_packed(self):
        h = WeightedPauliHamiltonian.from_labels([(1.0, "XI"), (1.0, "IY")])
        x, z = h.packed
        assert x.tolist() == [[1], [2]] and z.tolist() == [[0], [2]]
        x2, z2 = pack_masks([t.pauli for t in h], 2)
        assert (x == x2).all() and (z == z2).all()

    def test_scaled_and_subset(self):
        h = WeightedPauliHamiltonian.from_labels([(1.0, "X"), (-2.0, "Z")])
        assert h.scaled(3).coeffs.tolist() == [3.0, -6.0]
        assert len(h.subset([1])) == 1
