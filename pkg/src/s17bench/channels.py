"""Complex linear algebra for quantum channels.

Kraus channels, superoperator/Choi conversions and the fidelity metrics
used to score two-qubit gates.  Superoperators use the column-stacking
convention throughout: vec(A rho B) = (B^T (x) A) vec(rho).
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

PAULIS = {"I": I2, "X": SX, "Y": SY, "Z": SZ}

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
TRACE_PRESERVATION_TOL = 1e-8
DEFAULT_CP_TOL = 1e-8


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices."""
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def max_asymmetry(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return max_asymmetry(m) <= tol


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    d = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(d)))) <= tol


def hermitian_exponential(h: np.ndarray, t: float) -> np.ndarray:
    """Return exp(-i h t) for Hermitian h, via eigendecomposition."""
    if not is_hermitian(h):
        raise ValueError(
            f"generator is not Hermitian: max asymmetry {max_asymmetry(h):.3e}"
        )
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def strip_global_phase(u: np.ndarray) -> np.ndarray:
    """Rescale so the first nonzero entry is real and positive."""
    flat = u.ravel()
    idx = int(np.argmax(np.abs(flat) > 1e-12))
    phase = flat[idx] / abs(flat[idx])
    return u / phase


class KrausChannel:
    """A quantum operation as a list of dim x dim Kraus operators.

    Trace preservation (sum K^dag K = I) is asserted at construction.
    ``cp_defect`` records the largest negative Choi eigenvalue clipped
    when the channel was built from a marginally non-CP superoperator.
    """

    def __init__(self, kraus_ops: Sequence[np.ndarray], cp_defect: float = 0.0):
        ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise ValueError("Kraus operators must be square and same-sized")
        acc = sum(k.conj().T @ k for k in ops)
        defect = float(np.max(np.abs(acc - np.eye(dim))))
        if defect > TRACE_PRESERVATION_TOL:
            raise ValueError(
                f"channel is not trace preserving: sum K^dag K deviates by {defect:.3e}"
            )
        self.kraus_ops = ops
        self.dim = dim
        self.cp_defect = float(cp_defect)

    @classmethod
    def from_unitary(cls, u: np.ndarray) -> "KrausChannel":
        if not is_unitary(u):
            raise ValueError("matrix is not unitary")
        return cls([u])

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.dim)))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        """Apply to a dim x dim density matrix (full-dimension action)."""
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops)

    def superoperator(self) -> np.ndarray:
        """Column-stacking superoperator matrix, sum conj(K) (x) K."""
        return sum(np.kron(k.conj(), k) for k in self.kraus_ops)


def unitary_superoperator(u: np.ndarray) -> np.ndarray:
    return np.kron(u.conj(), u)


def superop_to_choi(s: np.ndarray) -> np.ndarray:
    """Reshuffle a column-stacking superoperator into its Choi matrix.

    With S = sum conj(K) (x) K the Choi matrix is
    C = sum vec(K) vec(K)^dag where vec is column stacking.
    """
    d2 = s.shape[0]
    d = int(round(np.sqrt(d2)))
    # S[(j', i'), (j, i)] = K[i', i] conj(K[j', j]) summed over Kraus terms;
    # C[(i, i'), (j, j')] = sum K[i', i] conj(K[j', j])  (column-stacked vec)
    t = s.reshape(d, d, d, d)  # [j', i', j, i]
    c = t.transpose(3, 1, 2, 0).reshape(d2, d2)  # [(i, i'), (j, j')]
    return c


def choi_to_superop(c: np.ndarray) -> np.ndarray:
    d2 = c.shape[0]
    d = int(round(np.sqrt(d2)))
    t = c.reshape(d, d, d, d)  # [i, i', j, j']
    s = t.transpose(3, 1, 2, 0).reshape(d2, d2)  # [(j', i'), (j, i)]
    return s


def kraus_from_superoperator(
    s: np.ndarray, cp_tolerance: float = DEFAULT_CP_TOL
) -> KrausChannel:
    """Extract Kraus operators from a column-stacking superoperator.

    Eigendecomposes the Choi matrix.  Eigenvalues in [-cp_tolerance, 0)
    are clipped to zero and recorded as the channel's cp_defect;
    anything more negative aborts since the map is genuinely non-CP.
    After clipping the Kraus set is rescaled (K_j <- K_j M^{-1/2} with
    M = sum K^dag K) so trace preservation holds exactly.
    """
    d2 = s.shape[0]
    d = int(round(np.sqrt(d2)))
    choi = superop_to_choi(s)
    if not is_hermitian(choi, tol=1e-9):
        raise ValueError("superoperator does not yield a Hermitian Choi matrix")
    evals, evecs = np.linalg.eigh((choi + choi.conj().T) / 2)
    min_eval = float(evals.min())
    if min_eval < -cp_tolerance:
        raise ValueError(
            f"map is not completely positive: Choi eigenvalue {min_eval:.6e} "
            f"below tolerance {-cp_tolerance:.1e}"
        )
    cp_defect = max(0.0, -min_eval)
    ops = []
    for lam, vec in zip(evals, evecs.T):
        if lam <= 0.0:
            continue
        # column-stacked vec: K[i', i] = vec[i * d + i']
        k = np.sqrt(lam) * vec.reshape(d, d).T
        ops.append(k)
    if not ops:
        raise ValueError("superoperator has no positive Choi eigenvalues")
    # renormalize so the clipped channel is exactly trace preserving
    m = sum(k.conj().T @ k for k in ops)
    m_evals, m_evecs = np.linalg.eigh((m + m.conj().T) / 2)
    if float(np.max(np.abs(m_evals - 1.0))) > 1e-6:
        raise ValueError(
            "trace-preservation defect after CP clipping exceeds 1e-6: "
            f"{float(np.max(np.abs(m_evals - 1.0))):.3e}"
        )
    m_inv_sqrt = (m_evecs / np.sqrt(m_evals)) @ m_evecs.conj().T
    ops = [k @ m_inv_sqrt for k in ops]
    return KrausChannel(ops, cp_defect=cp_defect)


def compose_superoperators(*supers: np.ndarray) -> np.ndarray:
    """Compose superoperators; the first argument acts last."""
    out = supers[0]
    for s in supers[1:]:
        out = out @ s
    return out


# --- fidelity metrics -------------------------------------------------------


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    return (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T


def state_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1]."""
    if rho.shape != sigma.shape:
        raise ValueError("density matrices have mismatched dimensions")
    sq = _psd_sqrt(rho)
    inner = sq @ sigma @ sq
    evals = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    return float(min(1.0, np.sum(np.sqrt(np.clip(evals, 0.0, None)))))


def pure_state_fidelity(psi: np.ndarray, sigma: np.ndarray) -> float:
    """Closed form sqrt(<psi|sigma|psi>) when one state is pure."""
    val = np.real(psi.conj() @ sigma @ psi)
    return float(np.sqrt(min(1.0, max(0.0, val))))


def pauli_eigenvector_products(n_qubits: int = 2) -> list[np.ndarray]:
    """All tensor products of single-qubit Pauli eigenvectors (6^n states)."""
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    plus_i = np.array([1, 1j], dtype=complex) / np.sqrt(2)
    minus_i = np.array([1, -1j], dtype=complex) / np.sqrt(2)
    zero = np.array([1, 0], dtype=complex)
    one = np.array([0, 1], dtype=complex)
    singles = [plus, minus, plus_i, minus_i, zero, one]
    out = []
    for combo in itertools.product(singles, repeat=n_qubits):
        vec = combo[0]
        for nxt in combo[1:]:
            vec = np.kron(vec, nxt)
        out.append(vec)
    return out


def _haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def gate_infidelity(
    approx: KrausChannel,
    exact: np.ndarray,
    refine_samples: int = 0,
    seed: int = 0,
) -> float:
    """Worst-case infidelity of a channel against an ideal unitary.

    Minimizes the state fidelity between channel output and unitary
    output over all products of single-qubit Pauli eigenvectors (36
    states on two qubits), which upper-bounds the fidelity.  Setting
    refine_samples adds that many Haar-random product-free pure states
    to the search as a sanity check on the restriction.
    """
    if exact.shape != (approx.dim, approx.dim):
        raise ValueError("unitary dimension does not match channel dimension")
    states = pauli_eigenvector_products(approx.n_qubits)
    if refine_samples:
        rng = np.random.default_rng(seed)
        states = states + [_haar_state(approx.dim, rng) for _ in range(refine_samples)]
    worst = 1.0
    for psi in states:
        out = approx(np.outer(psi, psi.conj()))
        target = exact @ psi
        worst = min(worst, pure_state_fidelity(target, out))
    return 1.0 - worst
