import math

import numpy as np
import pytest

from qudyn import hamiltonians as hm

X, Y, Z, I2 = (hm.PAULI[k] for k in "XYZI")
SX, SY, SZ = (hm.SPIN1[k] for k in "XYZ")


def test_build_qubit_examples():
    np.testing.assert_array_equal(hm.build_qubit((0, 0, 1)).generator, Z)
    np.testing.assert_array_equal(hm.build_qubit((1, 0, 0)).generator, X)
    pot = hm.build_qubit()
    assert pot.potency == (2, 0) and pot.hermitian
    assert np.max(np.abs(pot.generator @ pot.generator - np.eye(2))) <= 1e-14


def test_build_qubit_normalizes_and_rejects_zero():
    np.testing.assert_allclose(hm.build_qubit((0, 0, 5)).generator, Z)
    with pytest.raises(hm.HamiltonianError):
        hm.build_qubit((0, 0, 0))


def test_pauli_tensor_power():
    assert np.array_equal(hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, 1).generator, hm.build_qubit().generator)
    two = hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, 2)
    assert np.max(np.abs(two.generator @ two.generator - np.eye(4))) <= 1e-14
    assert hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, 3).dim == 8
    with pytest.raises(hm.HamiltonianError):
        hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, 7)
    with pytest.raises(hm.HamiltonianError):
        hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, 0)


@pytest.mark.parametrize("N", range(1, 5))
def test_tensor_power_equals_repeated_kron(N):
    q = hm.build_qubit().generator
    ref = q
    for _ in range(N - 1):
        ref = np.kron(ref, q)
    np.testing.assert_array_equal(hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, N).generator, ref)


def test_pauli_string():
    np.testing.assert_array_equal(hm.build_pauli_string(["X"]).generator, X)
    xiy = hm.build_pauli_string(["X", "I", "Y"])
    np.testing.assert_array_equal(xiy.generator, np.kron(np.kron(X, I2), Y))
    assert np.max(np.abs(xiy.generator @ xiy.generator - np.eye(8))) == 0
    np.testing.assert_array_equal(hm.build_pauli_string(["Z", "Z"]).generator, np.diag([1, -1, -1, 1]))
    with pytest.raises(hm.HamiltonianError):
        hm.build_pauli_string(["I", "I"])


def test_clock_qutrit():
    pot = hm.build_clock_qutrit()
    assert pot.potency == (3, 0) and not pot.hermitian
    h = pot.generator
    assert np.max(np.abs(h @ h @ h - np.eye(3))) <= 1e-13
    assert np.max(np.abs(h - h.conj().T)) > 0.5
    sigma, tau = hm.clock_operators(3)
    assert np.max(np.abs(sigma @ tau - hm.OMEGA3 * tau @ sigma)) <= 1e-15
    for m in (sigma, tau):
        assert np.max(np.abs(np.linalg.matrix_power(m, 3) - np.eye(3))) <= 1e-14


def test_spin1():
    z = hm.build_spin1((0, 0, 1))
    np.testing.assert_array_equal(z.generator, np.diag([1, 0, -1]))
    assert z.potency == (3, 1)
    pot = hm.build_spin1()
    h = pot.generator
    assert pot.hermitian and np.max(np.abs(h @ h @ h - h)) <= 1e-13
    assert np.max(np.abs(SX @ SY - SY @ SX - 1j * SZ)) <= 1e-14


def test_detect_potency_examples(rng):
    assert hm.detect_potency(Z) == (2, 0)
    assert hm.detect_potency(SZ) == (3, 1)
    assert hm.detect_potency(rng.normal(size=(3, 3))) is None
    assert hm.detect_potency(np.eye(2)) == (1, 0)
    with pytest.raises(hm.HamiltonianError):
        hm.detect_potency(np.zeros((2, 2)))


def test_detect_potency_prefers_minimal_class():
    # sigma_z also satisfies H^4 = H^0 and H^3 = H^1; minimal is (2, 0)
    assert hm.detect_potency(Z, p_max=8) == (2, 0)
    # a projector is (2, 1)
    assert hm.detect_potency(np.diag([1.0, 0.0])) == (2, 1)


@pytest.mark.parametrize(
    "pot",
    [
        hm.build_qubit(),
        hm.build_qubit((0.3, -0.2, 0.9)),
        hm.build_pauli_tensor_power(hm.DEFAULT_AXIS, 3),
        hm.build_pauli_string(["Y", "Z", "I"]),
        hm.build_clock_qutrit(),
        hm.build_spin1(),
        hm.build_spin1((1, 0, 0)),
    ],
    ids=lambda p: p.label,
)
def test_builders_pass_detection(pot):
    assert hm.detect_potency(pot.generator) == pot.potency
    assert pot.hermitian == bool(np.max(np.abs(pot.generator - pot.generator.conj().T)) <= 1e-12)


def test_power_reduction():
    pot = hm.build_spin1()
    h = pot.generator
    for m in range(0, 9):
        np.testing.assert_allclose(pot.power(m), np.linalg.matrix_power(h, m), atol=1e-12)
    assert pot.reduce_exponent(5) == 1 and pot.reduce_exponent(4) == 2


def test_custom_rejects_wrong_potency():
    with pytest.raises(hm.HamiltonianError):
        hm.build_custom(Z, 3, 0)
    assert hm.build_custom(Z).potency == (2, 0)


def test_from_spec_round_trip():
    assert hm.from_spec({"type": "qubit_axis", "n": [0, 0, 1]}).potency == (2, 0)
    assert hm.from_spec({"type": "clock_qutrit"}).potency == (3, 0)
    assert hm.from_spec({"type": "spin1_axis"}).potency == (3, 1)
    assert hm.from_spec({"type": "pauli_tensor_power", "N": 2}).dim == 4
    assert hm.from_spec({"type": "pauli_string", "labels": ["X", "Z"]}).dim == 4
    custom = hm.from_spec({"type": "custom", "matrix": hm.complex_matrix_to_json(Y), "p": 2, "q": 0})
    np.testing.assert_array_equal(custom.generator, Y)
    with pytest.raises(hm.HamiltonianError):
        hm.from_spec({"type": "mystery"})


def test_generator_is_read_only():
    pot = hm.build_qubit()
    with pytest.raises(ValueError):
        pot.generator[0, 0] = 5
