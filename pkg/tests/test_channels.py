"""Channel algebra: Kraus/superoperator/Choi conversions and fidelities."""

import numpy as np
import pytest

from s17bench.channels import (
    HADAMARD,
    SX,
    SY,
    SZ,
    KrausChannel,
    choi_to_superop,
    compose_superoperators,
    gate_infidelity,
    hermitian_exponential,
    is_unitary,
    kraus_from_superoperator,
    kron,
    pauli_eigenvector_products,
    pure_state_fidelity,
    state_fidelity,
    strip_global_phase,
    superop_to_choi,
    unitary_superoperator,
)
from s17bench.gates import CNOT
from s17bench.noise import depolarizing


def random_cptp(dim, n_kraus, rng):
    """Random CPTP channel from a Haar-ish isometry."""
    block = rng.normal(size=(n_kraus * dim, dim)) + 1j * rng.normal(size=(n_kraus * dim, dim))
    q, _ = np.linalg.qr(block)
    return KrausChannel([q[i * dim : (i + 1) * dim] for i in range(n_kraus)])


def random_density(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_pauli_algebra():
    assert np.allclose(SX @ SX, np.eye(2))
    assert np.allclose(SX @ SY, 1j * SZ)
    assert np.allclose(HADAMARD @ SX @ HADAMARD, SZ)
    assert is_unitary(HADAMARD)


def test_kron_matches_numpy():
    assert np.allclose(kron(SX, SZ, SY), np.kron(np.kron(SX, SZ), SY))


def test_hermitian_exponential_agrees_with_expm():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = a + a.conj().T
    from scipy.linalg import expm

    assert np.allclose(hermitian_exponential(h, 0.37), expm(-1j * 0.37 * h), atol=1e-12)


def test_strip_global_phase_idempotent():
    u = np.exp(1j * 1.234) * HADAMARD
    v = strip_global_phase(u)
    assert np.allclose(strip_global_phase(v), v)
    assert np.allclose(v @ v.conj().T, np.eye(2), atol=1e-12)


def test_kraus_channel_rejects_non_trace_preserving():
    with pytest.raises(ValueError):
        KrausChannel([0.5 * np.eye(2)])


def test_channel_action_depolarizing():
    """Depolarizing with weight p mixes toward the maximally mixed state."""
    rng = np.random.default_rng(0)
    p = 0.13
    chan = depolarizing(p)
    for _ in range(20):
        rho = random_density(2, rng)
        out = sum(k @ rho @ k.conj().T for k in chan.kraus_ops)
        expect = (1 - p) * rho + p * np.eye(2) / 2
        assert np.allclose(out, expect, atol=1e-12)


def test_superop_choi_roundtrip():
    rng = np.random.default_rng(3)
    chan = random_cptp(4, 3, rng)
    s = chan.superoperator()
    assert np.allclose(choi_to_superop(superop_to_choi(s)), s, atol=1e-12)


def test_kraus_from_superoperator_reproduces_action():
    rng = np.random.default_rng(4)
    chan = random_cptp(2, 4, rng)
    rebuilt = kraus_from_superoperator(chan.superoperator())
    rho = random_density(2, rng)
    out_a = sum(k @ rho @ k.conj().T for k in chan.kraus_ops)
    out_b = sum(k @ rho @ k.conj().T for k in rebuilt.kraus_ops)
    assert np.allclose(out_a, out_b, atol=1e-10)


def test_compose_superoperators_order():
    rng = np.random.default_rng(5)
    a = random_cptp(2, 2, rng).superoperator()
    b = random_cptp(2, 2, rng).superoperator()
    # the first argument acts last
    assert np.allclose(compose_superoperators(a, b), a @ b, atol=1e-12)


def test_state_fidelity_limits():
    """Square-root convention: F = Tr sqrt(sqrt(rho) sigma sqrt(rho))."""
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    assert state_fidelity(zero, zero) == pytest.approx(1.0, abs=1e-12)
    assert state_fidelity(zero, one) == pytest.approx(0.0, abs=1e-12)
    plus = np.full((2, 2), 0.5, dtype=complex)
    assert state_fidelity(zero, plus) == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_pure_state_fidelity_matches_density_form():
    rng = np.random.default_rng(6)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    phi = rng.normal(size=4) + 1j * rng.normal(size=4)
    phi /= np.linalg.norm(phi)
    sigma = np.outer(phi, phi.conj())
    dense = state_fidelity(np.outer(psi, psi.conj()), sigma)
    assert pure_state_fidelity(psi, sigma) == pytest.approx(dense, abs=1e-8)


def test_pauli_eigenvector_products_span():
    states = pauli_eigenvector_products(2)
    assert len(states) == 36
    for psi in states:
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    # the 36 product states must span the full two-qubit space
    mat = np.array(states)
    assert np.linalg.matrix_rank(mat) == 4


def test_gate_infidelity_ideal_is_zero():
    assert gate_infidelity(KrausChannel.from_unitary(CNOT), CNOT) <= 1e-14


def oracle_minimum_fidelity(target, channel):
    """Direct worst-case product-state fidelity over the 36 Pauli products.

    Written independently of the package implementation: enumerate the
    single-qubit Pauli eigenvectors by hand and minimize <psi|U' E(psi) U'|psi>.
    """
    eigvecs = []
    for mat in (SX, SY, SZ):
        vals, vecs = np.linalg.eigh(mat)
        eigvecs.extend(vecs[:, i] for i in range(2))
    worst = 1.0
    for a in eigvecs:
        for b in eigvecs:
            psi = np.kron(a, b)
            ideal = target @ psi
            rho = sum(
                (k @ psi)[:, None] @ (k @ psi)[None, :].conj() for k in channel.kraus_ops
            )
            fid = np.sqrt(max(0.0, (ideal.conj() @ rho @ ideal).real))
            worst = min(worst, fid)
    return worst


def test_gate_infidelity_matches_direct_minimization():
    noisy = KrausChannel(
        [np.kron(ka, kb) @ CNOT for ka in depolarizing(0.02).kraus_ops
         for kb in depolarizing(0.03).kraus_ops]
    )
    expect = 1.0 - oracle_minimum_fidelity(CNOT, noisy)
    assert gate_infidelity(noisy, CNOT) == pytest.approx(expect, abs=1e-12)


def test_unitary_superoperator_action():
    rng = np.random.default_rng(9)
    rho = random_density(2, rng)
    s = unitary_superoperator(HADAMARD)
    out = (s @ rho.reshape(-1)).reshape(2, 2)
    assert np.allclose(out, HADAMARD @ rho @ HADAMARD.conj().T, atol=1e-12)
