import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from descryptor.errors import ContractError, ResourceError
from descryptor.oracle import pauli_string_matrix
from descryptor.pauli import (
    PauliString,
    PauliSum,
    expectation_of_product,
    expectation_zero,
    multiply,
    tensor,
    to_dense,
)

P = PauliString.parse


def kron_oracle(s: PauliString) -> np.ndarray:
    return pauli_string_matrix(s.letters, s.phase)


strings = st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.text("IXYZ", min_size=n, max_size=n), st.integers(0, 3))
).map(lambda t: PauliString.from_letters(*t))


@st.composite
def string_pairs(draw):
    n = draw(st.integers(1, 6))
    one = lambda: PauliString.from_letters(draw(st.text("IXYZ", min_size=n, max_size=n)), draw(st.integers(0, 3)))
    return one(), one()


@st.composite
def sums(draw, n=None):
    n = n or draw(st.integers(1, 3))
    k = draw(st.integers(0, 4))
    coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
    return PauliSum.from_terms(n, [(draw(st.text("IXYZ", min_size=n, max_size=n)), draw(coeff)) for _ in range(k)])


class TestMultiply:
    def test_x_times_y(self):
        assert multiply(P("+.X"), P("+.Y")) == P("+i.Z")

    def test_involution(self):
        assert multiply(P("+.IX"), P("+.IX")) == PauliString.identity(2)

    def test_two_qubit_product_matches_dense(self):
        a, b = P("+.ZX"), P("+.YX")
        out = multiply(a, b)
        assert out == P("-i.XI")
        assert np.array_equal(kron_oracle(out), kron_oracle(a) @ kron_oracle(b))

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            multiply(P("+.X"), P("+.XX"))

    def test_cyclic_table(self):
        for a, b, c in ("XYZ", "YZX", "ZXY"):
            assert multiply(P(f"+.{a}"), P(f"+.{b}")) == P(f"+i.{c}")
            assert multiply(P(f"+.{b}"), P(f"+.{a}")) == P(f"-i.{c}")

    @given(string_pairs())
    def test_closure_and_dense_homomorphism(self, pair):
        a, b = pair
        out = multiply(a, b)
        assert out.phase in (1, -1, 1j, -1j)
        assert np.array_equal(kron_oracle(out), kron_oracle(a) @ kron_oracle(b))

    def test_ten_thousand_random_pairs(self):
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            n = int(rng.integers(1, 7))
            a, b = (PauliString.from_letters("".join(rng.choice(list("IXYZ"), n)), int(rng.integers(4))) for _ in range(2))
            out = multiply(a, b)
            assert out.phase in (1, -1, 1j, -1j)
            assert np.array_equal(kron_oracle(out), kron_oracle(a) @ kron_oracle(b))

    @given(string_pairs())
    def test_anticommutation(self, pair):
        a, b = pair
        odd = sum(1 for p, q in zip(a.letters, b.letters) if "I" not in (p, q) and p != q) % 2
        ab, ba = multiply(a, b), multiply(b, a)
        assert ab == (-ba if odd else ba)
        assert a.commutes_with(b) == (not odd)

    @given(strings)
    def test_square_is_signed_identity(self, s):
        sq = multiply(s, s)
        assert sq.x == sq.z == 0 and sq.k in (0, 2)


class TestTensor:
    def test_plain(self):
        out = tensor(P("+.X"), P("+.Z"))
        assert out.letters == "XZ" and out.phase == 1

    def test_phase_carried(self):
        assert tensor(P("+i.Y"), P("+.Z")) == P("+i.YZ")

    def test_phases_multiply(self):
        assert tensor(P("-.Z"), P("+i.X")) == P("-i.ZX")

    @given(strings, strings)
    def test_matches_kron(self, a, b):
        assert np.array_equal(kron_oracle(tensor(a, b)), np.kron(kron_oracle(a), kron_oracle(b)))


class TestText:
    @given(strings)
    def test_round_trip(self, s):
        assert P(str(s)) == s

    @pytest.mark.parametrize("label", ["ZXI", "+ZXI", "*.X", "+.ZQ", "-i."])
    def test_bad_labels(self, label):
        with pytest.raises(ContractError):
            P(label)

    def test_grammar(self):
        assert str(P("-i.ZXI")) == "-i.ZXI"
        assert str(PauliSum.parse("-.XY")) == "-.XY"


class TestExpectationZero:
    def test_all_z(self):
        assert expectation_zero(P("+.ZZZ")) == 1

    def test_x_or_y_vanishes(self):
        assert expectation_zero(P("+.ZXZ")) == 0
        s = PauliSum.from_terms(2, [("XI", 1.0), ("ZY", 2.0), ("ZZ", 0.5)])
        assert expectation_zero(s) == 0.5

    def test_phase(self):
        assert expectation_zero(P("+i.ZI")) == 1j

    @given(sums())
    def test_matches_dense(self, s):
        d = to_dense(s)
        assert np.isclose(expectation_zero(s), d[0, 0], atol=1e-12)

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(sums(n), sums(n), sums(n))))
    def test_product_expectation(self, triple):
        a, b, c = triple
        expect = (to_dense(a) @ to_dense(b) @ to_dense(c))[0, 0]
        assert np.isclose(expectation_of_product(a, b, c), expect, atol=1e-9)


class TestDense:
    def test_single_x(self):
        assert np.array_equal(to_dense(P("+.X")), [[0, 1], [1, 0]])

    def test_identity(self):
        assert np.array_equal(to_dense(P("+.II")), np.eye(4))

    def test_kronecker(self):
        z, x = np.diag([1, -1]), np.array([[0, 1], [1, 0]])
        assert np.array_equal(to_dense(P("+.ZX")), np.kron(z, x))

    @given(strings)
    def test_string_matches_oracle(self, s):
        assert np.array_equal(s.to_dense(), kron_oracle(s))

    @given(sums())
    def test_from_dense_round_trip(self, s):
        assert PauliSum.from_dense(to_dense(s)).allclose(s, atol=1e-12)

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(sums(n), sums(n))))
    def test_sum_product_commutes_with_dense(self, pair):
        a, b = pair
        assert np.allclose(to_dense(a * b), to_dense(a) @ to_dense(b), atol=1e-12)
        assert np.allclose(to_dense(a + b), to_dense(a) + to_dense(b), atol=1e-12)

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("DESCRYPTOR_DENSE_CAP", "2")
        with pytest.raises(ResourceError):
            to_dense(P("+.XXX"))
        assert to_dense(P("+.XX")).shape == (4, 4)

    def test_default_cap(self, monkeypatch):
        monkeypatch.delenv("DESCRYPTOR_DENSE_CAP", raising=False)
        with pytest.raises(ResourceError):
            PauliSum.identity(11).to_dense()


class TestSum:
    def test_pruning(self):
        s = PauliSum.from_terms(1, [("X", 1.0), ("X", -1.0 + 1e-14), ("Z", 1e-13)])
        assert len(s) == 0

    def test_hermitian(self):
        assert PauliSum.from_terms(2, [("XY", 0.5), ("ZZ", -1)]).is_hermitian()
        assert not PauliSum.from_terms(1, [("X", 1j)]).is_hermitian()

    def test_restrict(self):
        # letters outside the mask become I; qubit 1 is the top bit
        s = PauliSum.parse("+.ZIX")
        assert s.restrict(0b100) == PauliSum.parse("+.ZII")
        assert s.restrict(0b101) == s

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            PauliSum.identity(1) + PauliSum.identity(2)
