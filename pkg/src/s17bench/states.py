"""Dense register states: exact density matrices and trajectory pure states.

Qubit labels map register qubits to tensor slots; slot 0 is the most
significant bit of the computational-basis index.  Channel application
works slot-wise and never materializes full-register Kraus matrices.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .channels import KrausChannel

DM_HERMITICITY_TOL = 1e-10
DM_TRACE_TOL = 1e-9
DM_EIGENVALUE_TOL = 1e-9
SV_NORM_TOL = 1e-10

MAX_DENSE_QUBITS = 14


def _tensor_apply(op: np.ndarray, tensor: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Contract op (2^k x 2^k) into the given axes of a (2,)*m tensor."""
    k = len(axes)
    op_t = op.reshape((2,) * (2 * k))
    out = np.tensordot(op_t, tensor, axes=(tuple(range(k, 2 * k)), tuple(axes)))
    return np.moveaxis(out, tuple(range(k)), tuple(axes))


class DensityMatrix:
    """Mixed state of a labeled qubit register."""

    def __init__(self, mat: np.ndarray, qubit_labels: Sequence[int]):
        self.qubit_labels = list(qubit_labels)
        self.n_qubits = len(self.qubit_labels)
        dim = 2**self.n_qubits
        if mat.shape != (dim, dim):
            raise ValueError("matrix shape does not match label count")
        self.mat = np.asarray(mat, dtype=complex)

    @classmethod
    def from_bits(cls, bits: Sequence[int], qubit_labels: Sequence[int]) -> "DensityMatrix":
        dim = 2 ** len(bits)
        idx = 0
        for b in bits:
            idx = (idx << 1) | int(b)
        mat = np.zeros((dim, dim), dtype=complex)
        mat[idx, idx] = 1.0
        return cls(mat, qubit_labels)

    @classmethod
    def from_statevector(cls, psi: "StateVector") -> "DensityMatrix":
        return cls(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.qubit_labels)

    def slot(self, label: int) -> int:
        return self.qubit_labels.index(label)

    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def validate(self) -> None:
        if float(np.max(np.abs(self.mat - self.mat.conj().T))) > DM_HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(self.trace() - 1.0) > DM_TRACE_TOL:
            raise ValueError(f"density matrix trace {self.trace()} is not 1")
        if float(np.linalg.eigvalsh(self.mat).min()) < -DM_EIGENVALUE_TOL:
            raise ValueError("density matrix has a significant negative eigenvalue")

    def _tensor(self) -> np.ndarray:
        return self.mat.reshape((2,) * (2 * self.n_qubits))

    def apply_unitary(self, u: np.ndarray, targets: Sequence[int]) -> None:
        slots = [self.slot(t) for t in targets]
        n = self.n_qubits
        t = self._tensor()
        t = _tensor_apply(u, t, slots)
        t = _tensor_apply(u.conj(), t, [n + s for s in slots])
        self.mat = t.reshape(self.mat.shape)

    def add_qubit(self, label: int, bit: int = 0) -> None:
        """Append a fresh qubit in |bit> as the least significant slot."""
        if label in self.qubit_labels:
            raise ValueError(f"qubit {label} already in register")
        single = np.zeros((2, 2), dtype=complex)
        single[bit, bit] = 1.0
        self.mat = np.kron(self.mat, single)
        self.qubit_labels.append(label)
        self.n_qubits += 1

    def measure_probabilities(self, label: int) -> tuple[float, float]:
        s = self.slot(label)
        n = self.n_qubits
        t = self._tensor()
        diag = np.einsum(t, list(range(2 * n)), list(range(n)) + list(range(n)))
        p1 = float(np.real(diag.sum(axis=tuple(i for i in range(n) if i != s))[1]))
        p0 = float(np.real(np.trace(self.mat))) - p1
        return max(p0, 0.0), max(p1, 0.0)

    def project_and_remove(self, label: int, outcome: int) -> float:
        """Project a qubit onto |outcome>, drop it, and return the branch weight.

        The returned weight is the unnormalized probability; the state is
        left unnormalized so branch weights stay multiplicative.
        """
        s = self.slot(label)
        n = self.n_qubits
        t = self._tensor()
        sub = np.take(np.take(t, outcome, axis=n + s), outcome, axis=s)
        self.mat = sub.reshape((2 ** (n - 1), 2 ** (n - 1)))
        self.qubit_labels.pop(s)
        self.n_qubits -= 1
        return float(np.real(np.trace(self.mat)))

    def project_pauli(self, z_labels: Sequence[int], x_labels: Sequence[int], sign: int) -> float:
        """Project onto the +/-1 eigenspace of a product of z/x factors.

        Returns the unnormalized branch weight.
        """
        n = self.n_qubits
        t = self._tensor()
        op = t.copy()
        for lab in z_labels:
            s = self.slot(lab)
            idx = np.array([1.0, -1.0])
            shape = [1] * (2 * n)
            shape[s] = 2
            op = op * idx.reshape(shape)
        for lab in x_labels:
            s = self.slot(lab)
            op = np.flip(op, axis=s)
        proj = (t + sign * op) / 2
        # apply the same projector from the right
        op = proj.copy()
        for lab in z_labels:
            s = self.slot(lab)
            idx = np.array([1.0, -1.0])
            shape = [1] * (2 * n)
            shape[n + s] = 2
            op = op * idx.reshape(shape)
        for lab in x_labels:
            s = self.slot(lab)
            op = np.flip(op, axis=n + s)
        out = (proj + sign * op) / 2
        self.mat = out.reshape(self.mat.shape)
        return float(np.real(np.trace(self.mat)))

    def renormalize(self) -> None:
        self.mat = self.mat / np.real(np.trace(self.mat))

    def diagonal_probabilities(self) -> np.ndarray:
        return np.real(np.diag(self.mat)).copy()

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.mat.copy(), list(self.qubit_labels))


class StateVector:
    """Pure state of a labeled qubit register (one trajectory)."""

    def __init__(self, amplitudes: np.ndarray, qubit_labels: Sequence[int]):
        self.qubit_labels = list(qubit_labels)
        self.n_qubits = len(self.qubit_labels)
        if amplitudes.shape != (2**self.n_qubits,):
            raise ValueError("amplitude count does not match label count")
        self.amplitudes = np.asarray(amplitudes, dtype=complex)

    @classmethod
    def from_bits(cls, bits: Sequence[int], qubit_labels: Sequence[int]) -> "StateVector":
        idx = 0
        for b in bits:
            idx = (idx << 1) | int(b)
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[idx] = 1.0
        return cls(amps, qubit_labels)

    def slot(self, label: int) -> int:
        return self.qubit_labels.index(label)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def validate(self) -> None:
        if abs(self.norm() - 1.0) > SV_NORM_TOL:
            raise ValueError(f"state vector norm {self.norm()} is not 1")

    def apply_unitary(self, u: np.ndarray, targets: Sequence[int]) -> None:
        slots = [self.slot(t) for t in targets]
        t = self.amplitudes.reshape((2,) * self.n_qubits)
        t = _tensor_apply(u, t, slots)
        self.amplitudes = t.reshape(-1)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), list(self.qubit_labels))


def _check_targets(state, ch: KrausChannel, targets: Sequence[int]) -> None:
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits: {list(targets)}")
    for t in targets:
        if t not in state.qubit_labels:
            raise ValueError(f"target qubit {t} not in register {state.qubit_labels}")
    if ch.dim != 2 ** len(targets):
        raise ValueError("channel dimension does not match target count")


def apply_channel(rho: DensityMatrix, ch: KrausChannel, targets: Sequence[int]) -> DensityMatrix:
    """In-place rho <- sum_j K_j rho K_j^dag on the target slots."""
    _check_targets(rho, ch, targets)
    slots = [rho.slot(t) for t in targets]
    n = rho.n_qubits
    tensor = rho._tensor()
    acc = None
    for k in ch.kraus_ops:
        term = _tensor_apply(k, tensor, slots)
        term = _tensor_apply(k.conj(), term, [n + s for s in slots])
        acc = term if acc is None else acc + term
    rho.mat = acc.reshape(rho.mat.shape)
    return rho


def trajectory_step(
    psi: StateVector,
    ch: KrausChannel,
    targets: Sequence[int],
    rng: np.random.Generator,
) -> StateVector:
    """Sample one Kraus branch with probability ||K_j psi||^2 and normalize."""
    _check_targets(psi, ch, targets)
    if len(ch.kraus_ops) == 1:
        psi.apply_unitary(ch.kraus_ops[0], targets)
        psi.amplitudes /= np.linalg.norm(psi.amplitudes)
        return psi
    slots = [psi.slot(t) for t in targets]
    tensor = psi.amplitudes.reshape((2,) * psi.n_qubits)
    branches = [_tensor_apply(k, tensor, slots) for k in ch.kraus_ops]
    weights = np.array([float(np.sum(np.abs(b) ** 2)) for b in branches])
    total = weights.sum()
    if total < 1e-14:
        raise ValueError("all Kraus branch norms vanish; channel is not trace preserving here")
    j = int(rng.choice(len(branches), p=weights / total))
    psi.amplitudes = branches[j].reshape(-1) / np.sqrt(weights[j])
    return psi
