import numpy as np
import pytest

from descryptor.analysis import ppt_separability
from descryptor.descriptors import Circuit, Gate, Register
from descryptor.errors import ContractError
from descryptor.oracle import reduced_density, simulate
from descryptor.pauli import PauliString, PauliSum, expectation_of_product, expectation_zero
from descryptor.protocols import (
    BELL_CIRCUIT,
    GHZ_CIRCUIT,
    bell_measurement_protocol,
    build_bell,
    build_ghz,
    canonical_w,
    cross_commutators,
    extract_bit,
    load_fixture,
    run_protocol,
    w_fixture,
    w_report,
)

R2 = 1 / np.sqrt(2)


def table(r: Register) -> dict[int, tuple[str, ...]]:
    return {d.qubit: d.labels() for d in r}


class TestBell:
    def test_matches_fixture(self):
        assert table(build_bell()) == load_fixture("bell")

    def test_rows(self):
        r = build_bell()
        assert r[1].labels() == ("+.ZX", "-.YX", "+.XI")
        assert r[2].labels() == ("+.IX", "+.XY", "+.XZ")

    def test_oracle_state(self):
        assert np.allclose(simulate(BELL_CIRCUIT).amplitudes, [R2, 0, 0, R2])


class TestGHZ:
    def test_matches_fixture(self):
        assert table(build_ghz()) == load_fixture("ghz")

    def test_rows(self):
        r = build_ghz()
        assert r[1].labels() == ("+.ZXX", "-.YXX", "+.XII")
        assert r[3].labels() == ("+.IIX", "+.XIY", "+.XIZ")

    @pytest.mark.parametrize("pair", [(1, 2), (1, 3), (2, 3)])
    def test_pairs_separable(self, pair):
        rho = reduced_density(simulate(GHZ_CIRCUIT), pair)
        assert ppt_separability(rho).separable


class TestW:
    def test_loaded_verbatim(self):
        r = w_fixture()
        assert r[1].labels() == ("+.ZXX", "+.YXX", "-.XII")
        assert r[2].labels() == ("+.XZX", "-.IYX", "+.XXI")
        assert r[3].labels() == ("+.IIX", "+.IXY", "+.IXZ")

    def test_report_fields(self):
        rep = w_report()
        w = canonical_w()
        assert rep.rho.shape == (8, 8)
        assert rep.fidelity == pytest.approx(float(np.real(np.vdot(w, rep.rho @ w))))
        assert rep.trace == pytest.approx(1.0)

    def test_commutation_diagnostic(self):
        # every row satisfies the single-qubit algebra but rows from different qubits clash
        assert (1, "x", 2, "y") in cross_commutators(w_fixture())
        assert cross_commutators(build_ghz()) == []

    def test_reconstruction_on_a_consistent_table(self):
        rep = w_report(build_ghz())
        assert rep.is_density_matrix()
        ghz = np.zeros(8)
        ghz[[0, 7]] = R2
        assert rep.fidelity == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(rep.rho, np.outer(ghz, ghz), atol=1e-12)


class TestMeasurement:
    def test_detector_four_matches_fixture(self):
        r = bell_measurement_protocol().final
        assert r[4].labels() == load_fixture("bell_measurement")[4]

    def test_detector_three_from_the_engine(self):
        # Z3 -> Z1 Z3 under CNOT(1,3) with q1z = X on slot 1
        r = bell_measurement_protocol().final
        assert r[3].labels() == ("+.IIXI", "+.XIYI", "+.XIZI")

    def test_fixture_row_three_is_not_a_descriptor(self):
        row = [PauliString.parse(s) for s in load_fixture("bell_measurement")[3]]
        assert row[0].commutes_with(row[1])

    def test_bits(self):
        t = bell_measurement_protocol()
        b3, b4 = t.bit_channels
        assert str(b4) == load_fixture("bits")[4][0]
        assert b3.content == t.final[3].z
        assert expectation_of_product(b3.content, b4.content) == 1
        assert expectation_zero(b3.content) == 0 and expectation_zero(b4.content) == 0

    def test_locality(self):
        t = bell_measurement_protocol()
        assert t.snapshot("measure-1")[2].same_comps(t.snapshot("bell")[2])

    def test_steps_are_one_evolution(self):
        t = bell_measurement_protocol()
        labels = [label for label, _ in t.steps]
        assert labels == ["initial", "bell", "measure-1", "measure-2"]
        c = Circuit(4, (Gate("H", [1]), Gate("CNOT", [1, 2]), Gate("CNOT", [1, 3]), Gate("CNOT", [2, 4])))
        assert t.final.same_tables(Register.fresh(4).run(c))


def test_extract_fresh_bit():
    b = extract_bit(Register.fresh(3), 2)
    assert b.content == PauliSum.parse("+.IZI") and b.source == 2


def test_unknown_protocol():
    with pytest.raises(ContractError):
        run_protocol("teleport")


@pytest.mark.parametrize("name", ["bell", "ghz", "w", "bell-measurement"])
def test_every_protocol_runs(name):
    t = run_protocol(name)
    assert t.steps and t.name == name
