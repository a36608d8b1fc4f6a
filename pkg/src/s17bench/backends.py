"""Schedule executors: exact density-matrix enumeration and sampled trajectories.

Both backends run an :class:`~s17bench.code.ExtractionSchedule` with a
given two-qubit gate channel and preparation-noise strength, and return
the distribution over the 9-bit result key (syndrome bits, msb first,
with the derived logical bit last).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import HADAMARD, KrausChannel
from .code import (
    ANCILLAS,
    HADAMARD_FRAME_QUBITS,
    ExtractionSchedule,
    LOGICAL_X,
    Op,
    PauliString,
    build_schedule,
)
from .gates import ideal_cnot_channel
from .noise import depolarizing
from .states import DensityMatrix, MAX_DENSE_QUBITS

BRANCH_PRUNE = 1e-14
TRAJECTORY_CHUNK = 1024
# cap on amplitudes held per chunk (chunk_size * 2**peak_qubits)
TRAJECTORY_AMP_BUDGET = 2**23
# single precision: float32 roundoff (~1e-6 through a schedule) is far below
# the sampling error of any feasible trajectory count
TRAJECTORY_DTYPE = np.complex64

RESULT_KEY_BITS = 9


@dataclass(frozen=True)
class RunConfig:
    """One benchmark run: scenario, gate channel, noise and backend knobs."""

    scenario: str
    cnot: KrausChannel | None = None
    p_init: float = 0.0
    backend: str = "exact_dm"
    n_samples: int = 0
    seed: int = 0
    serialization: str = "serialized"
    gate_order: str = "geometric"
    encoded: int = 0  # logical state to prepare: 0 or 1

    def __post_init__(self):
        if self.scenario not in ("I", "II"):
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.backend not in ("exact_dm", "trajectory"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if not 0.0 <= self.p_init <= 1.0:
            raise ValueError("p_init must lie in [0, 1]")
        if self.backend == "trajectory" and self.n_samples <= 0:
            raise ValueError("trajectory backend needs n_samples > 0")
        if self.encoded not in (0, 1):
            raise ValueError("encoded must be 0 or 1")

    def gate_channel(self) -> KrausChannel:
        return self.cnot if self.cnot is not None else ideal_cnot_channel()


@dataclass
class SyndromeDistribution:
    """Probabilities over the 9-bit result key, keyed by integer."""

    probabilities: dict[int, float]
    std_errors: dict[int, float]
    n_samples: int = 0

    def total(self) -> float:
        return sum(self.probabilities.values())


def run(config: RunConfig) -> SyndromeDistribution:
    if config.backend == "exact_dm":
        return run_exact(config)
    return run_trajectories(config)


def _key_layout(schedule: ExtractionSchedule) -> list[list[str]]:
    return [list(group) for group in schedule.result_bits]


# --- exact backends ------------------------------------------------------------

_PAULI_MATS = {
    "X": np.array([[0, 1], [1, 0]], complex),
    "Y": np.array([[0, -1j], [1j, 0]], complex),
    "Z": np.array([[1, 0], [0, -1]], complex),
}


class _PureBranch:
    """Unnormalized pure amplitude tensor for the noiseless exact path."""

    def __init__(self, amp: np.ndarray, labels: list[int]):
        self.amp = amp
        self.labels = labels

    @classmethod
    def empty(cls) -> "_PureBranch":
        return cls(np.ones((), complex), [])

    def weight(self) -> float:
        return float(np.sum(np.abs(self.amp) ** 2))

    def copy(self) -> "_PureBranch":
        return _PureBranch(self.amp.copy(), list(self.labels))

    def add_qubit(self, q: int) -> None:
        out = np.zeros(self.amp.shape + (2,), complex)
        out[..., 0] = self.amp
        self.amp = out
        self.labels.append(q)

    def apply_unitary(self, u: np.ndarray, qubits: list[int]) -> None:
        from .states import _tensor_apply

        slots = [self.labels.index(q) for q in qubits]
        self.amp = _tensor_apply(u, self.amp, slots)

    def apply_pauli(self, pauli: PauliString) -> np.ndarray:
        out = self.amp
        for q in pauli.support():
            slot = self.labels.index(q)
            out = np.moveaxis(
                np.einsum("ij,...j->...i", _PAULI_MATS[pauli.op_on(q)], np.moveaxis(out, slot, -1)),
                -1,
                slot,
            )
        return out

    def project_and_remove(self, q: int, outcome: int) -> None:
        slot = self.labels.index(q)
        self.amp = np.take(self.amp, outcome, axis=slot)
        self.labels.pop(slot)

    def project_pauli(self, pauli: PauliString, sign: int) -> None:
        self.amp = (self.amp + sign * self.apply_pauli(pauli)) / 2.0

    def renormalize(self) -> None:
        self.amp = self.amp / np.sqrt(self.weight())


def _run_exact_pure(
    schedule: ExtractionSchedule, config: RunConfig, gate: KrausChannel
) -> SyndromeDistribution:
    layout = _key_layout(schedule)
    branches: list[tuple[dict[str, int], _PureBranch]] = [({}, _PureBranch.empty())]
    probabilities: dict[int, float] = {}
    unitary = gate.kraus_ops[0]
    for step in schedule.timesteps:
        for op in step:
            if op.kind == "alloc":
                for bits, b in branches:
                    for q in op.qubits:
                        b.add_qubit(q)
            elif op.kind == "h":
                for bits, b in branches:
                    b.apply_unitary(HADAMARD, [op.qubits[0]])
            elif op.kind == "encode":
                if config.encoded:
                    for bits, b in branches:
                        b.amp = b.apply_pauli(LOGICAL_X)
            elif op.kind == "depol":
                pass  # p_init == 0 on this path
            elif op.kind == "cnot":
                for bits, b in branches:
                    b.apply_unitary(unitary, list(op.qubits))
            elif op.kind == "project":
                for bits, b in branches:
                    b.project_pauli(op.pauli, op.sign)
                    b.renormalize()
            elif op.kind == "measure":
                out = []
                for bits, b in branches:
                    for outcome in (0, 1):
                        child = b.copy()
                        child.project_and_remove(op.qubits[0], outcome)
                        if child.weight() > BRANCH_PRUNE:
                            out.append(({**bits, op.label: outcome}, child))
                branches = out
            elif op.kind == "measure_pauli":
                out = []
                for bits, b in branches:
                    for outcome, sign in ((0, +1), (1, -1)):
                        child = b.copy()
                        child.project_pauli(op.pauli, sign)
                        if child.weight() > BRANCH_PRUNE:
                            out.append(({**bits, op.label: outcome}, child))
                branches = out
            elif op.kind == "measure_all":
                for bits, b in branches:
                    probs = np.abs(b.amp.reshape(-1)) ** 2
                    labels = b.labels
                    for idx in np.flatnonzero(probs > BRANCH_PRUNE):
                        full = dict(bits)
                        for slot, q in enumerate(labels):
                            full[f"{op.label}{q}"] = (int(idx) >> (len(labels) - 1 - slot)) & 1
                        key = _bits_to_key(full, layout)
                        probabilities[key] = probabilities.get(key, 0.0) + float(probs[idx])
                branches = []
            else:
                raise ValueError(f"unknown op kind {op.kind!r}")
    for bits, b in branches:
        w = b.weight()
        if w > BRANCH_PRUNE:
            key = _bits_to_key(bits, layout)
            probabilities[key] = probabilities.get(key, 0.0) + w
    return SyndromeDistribution(
        probabilities=dict(sorted(probabilities.items())),
        std_errors={k: 0.0 for k in probabilities},
        n_samples=0,
    )


# --- exact density-matrix backend ---------------------------------------------


def _row_major_superop(channel: KrausChannel) -> np.ndarray:
    """sum_K kron(K, K*): acts on rho with (row, col) indices flattened."""
    return sum(np.kron(k, k.conj()) for k in channel.kraus_ops)


def _apply_superop(rho: DensityMatrix, s: np.ndarray, targets: list[int]) -> None:
    """Apply a k-qubit channel to a density matrix in one contraction."""
    k = len(targets)
    n = rho.n_qubits
    slots = [rho.slot(t) for t in targets]
    axes = slots + [n + sl for sl in slots]
    t = np.moveaxis(rho._tensor(), axes, range(2 * k))
    rest = t.shape[2 * k :]
    flat = t.reshape(4**k, -1)
    flat = s @ flat
    t = flat.reshape((2,) * (2 * k) + rest)
    rho.mat = np.moveaxis(t, range(2 * k), axes).reshape(rho.mat.shape)


def _pauli_zx(pauli: PauliString) -> tuple[list[int], list[int]]:
    z = [q for q in pauli.support() if pauli.op_on(q) == "Z"]
    x = [q for q in pauli.support() if pauli.op_on(q) == "X"]
    if len(z) + len(x) != len(pauli.support()):
        raise ValueError("projector Paulis with Y factors are not supported")
    return z, x


def _apply_pauli_dm(rho: DensityMatrix, pauli: PauliString) -> None:
    mats = {"X": np.array([[0, 1], [1, 0]], complex),
            "Y": np.array([[0, -1j], [1j, 0]], complex),
            "Z": np.array([[1, 0], [0, -1]], complex)}
    for q in pauli.support():
        rho.apply_unitary(mats[pauli.op_on(q)], [q])


def run_exact(config: RunConfig) -> SyndromeDistribution:
    """Enumerate all measurement branches on a dense density matrix."""
    if config.backend != "exact_dm":
        raise ValueError("run_exact called with a non-exact config")
    schedule = build_schedule(config.scenario, config.serialization, config.gate_order)
    peak = schedule.peak_qubits()
    if peak > MAX_DENSE_QUBITS:
        raise ValueError(
            f"schedule needs {peak} simultaneous qubits; dense backend "
            f"caps at {MAX_DENSE_QUBITS} (use the trajectory backend)"
        )
    gate = config.gate_channel()
    if config.p_init == 0.0 and len(gate.kraus_ops) == 1:
        # noiseless unitary circuit: pure-state branch enumeration
        return _run_exact_pure(schedule, config, gate)
    gate_s = _row_major_superop(gate)
    noise_s = _row_major_superop(depolarizing(config.p_init))

    # branch = (bits so far, unnormalized density matrix); the trace of
    # the matrix carries the branch weight
    branches: list[tuple[dict[str, int], DensityMatrix]] = [({}, _empty_dm())]
    probabilities: dict[int, float] = {}
    layout = _key_layout(schedule)

    for step in schedule.timesteps:
        for op in step:
            if op.kind == "measure":
                branches = _branch_measure(branches, op)
            elif op.kind == "measure_pauli":
                branches = _branch_measure_pauli(branches, op)
            elif op.kind == "measure_all":
                for bits, rho in branches:
                    _terminal_readout(bits, rho, op, layout, probabilities)
                branches = []
            else:
                for bits, rho in branches:
                    _apply_deterministic(rho, op, gate_s, noise_s, config)
    for bits, rho in branches:
        weight = rho.trace().real
        if weight > BRANCH_PRUNE:
            key = _bits_to_key(bits, layout)
            probabilities[key] = probabilities.get(key, 0.0) + weight
    return SyndromeDistribution(
        probabilities=dict(sorted(probabilities.items())),
        std_errors={k: 0.0 for k in probabilities},
        n_samples=0,
    )


def _empty_dm() -> DensityMatrix:
    return DensityMatrix(np.ones((1, 1), complex), [])


def _apply_deterministic(
    rho: DensityMatrix, op: Op, gate_s: np.ndarray, noise_s: np.ndarray, config: RunConfig
) -> None:
    if op.kind == "alloc":
        for q in op.qubits:
            rho.add_qubit(q)
    elif op.kind == "h":
        rho.apply_unitary(HADAMARD, [op.qubits[0]])
    elif op.kind == "encode":
        if config.encoded:
            _apply_pauli_dm(rho, LOGICAL_X)
    elif op.kind == "depol":
        if config.p_init > 0.0:
            _apply_superop(rho, noise_s, [op.qubits[0]])
    elif op.kind == "cnot":
        _apply_superop(rho, gate_s, list(op.qubits))
    elif op.kind == "project":
        z, x = _pauli_zx(op.pauli)
        rho.project_pauli(z, x, op.sign)
        rho.renormalize()
    elif op.kind == "discard":
        raise NotImplementedError("explicit discard is folded into measure")
    else:
        raise ValueError(f"unknown op kind {op.kind!r}")


def _branch_measure(
    branches: list[tuple[dict[str, int], DensityMatrix]], op: Op
) -> list[tuple[dict[str, int], DensityMatrix]]:
    out = []
    q = op.qubits[0]
    for bits, rho in branches:
        for outcome in (0, 1):
            child = rho.copy()
            child.project_and_remove(q, outcome)
            if child.trace().real > BRANCH_PRUNE:
                out.append(({**bits, op.label: outcome}, child))
    return out


def _branch_measure_pauli(
    branches: list[tuple[dict[str, int], DensityMatrix]], op: Op
) -> list[tuple[dict[str, int], DensityMatrix]]:
    out = []
    for bits, rho in branches:
        z, x = _pauli_zx(op.pauli)
        for outcome, sign in ((0, +1), (1, -1)):
            child = rho.copy()
            child.project_pauli(z, x, sign)
            if child.trace().real > BRANCH_PRUNE:
                out.append(({**bits, op.label: outcome}, child))
    return out


def _terminal_readout(
    bits: dict[str, int],
    rho: DensityMatrix,
    op: Op,
    layout: list[list[str]],
    probabilities: dict[int, float],
) -> None:
    """Joint computational-basis readout of all remaining qubits."""
    probs = rho.diagonal_probabilities()
    labels = rho.qubit_labels
    if set(labels) != set(op.qubits):
        raise ValueError("measure_all must consume exactly the remaining qubits")
    for idx, p in enumerate(probs):
        if p <= BRANCH_PRUNE:
            continue
        full = dict(bits)
        for slot, q in enumerate(labels):
            # slot 0 is the most significant axis of the register
            full[f"{op.label}{q}"] = (idx >> (len(labels) - 1 - slot)) & 1
        key = _bits_to_key(full, layout)
        probabilities[key] = probabilities.get(key, 0.0) + p


def _bits_to_key(bits: dict[str, int], layout: list[list[str]]) -> int:
    key = 0
    for group in layout:
        value = 0
        for label in group:
            value ^= bits[label]
        key = (key << 1) | value
    return key


# --- batched trajectory backend -----------------------------------------------


class _Batch:
    """A chunk of trajectories as one (B, 2, ..., 2) amplitude array."""

    def __init__(self, size: int, rng: np.random.Generator, dtype=None):
        self.dtype = np.dtype(dtype if dtype is not None else TRAJECTORY_DTYPE)
        self.amp = np.ones((size,), self.dtype)
        self.labels: list[int] = []
        self.rng = rng

    @property
    def size(self) -> int:
        return self.amp.shape[0]

    def slot(self, q: int) -> int:
        return self.labels.index(q)

    def _axis(self, slot: int) -> int:
        return 1 + slot

    def add_qubit(self, q: int) -> None:
        if q in self.labels:
            raise ValueError(f"qubit {q} already allocated")
        out = np.zeros(self.amp.shape + (2,), self.dtype)
        out[..., 0] = self.amp
        self.amp = out
        self.labels.append(q)

    def _move_last(self, qubits: list[int]) -> np.ndarray:
        axes = [self._axis(self.slot(q)) for q in qubits]
        t = np.moveaxis(self.amp, axes, range(-len(axes), 0))
        return t.reshape(self.size, -1, 2 ** len(qubits))

    def _restore(self, flat: np.ndarray, qubits: list[int]) -> None:
        # the gate qubits stay in the trailing slots; only the label
        # bookkeeping moves, so no transpose-back pass is needed
        self.labels = [q for q in self.labels if q not in qubits] + list(qubits)
        self.amp = flat.reshape((self.size,) + (2,) * len(self.labels))

    def apply_unitary(self, u: np.ndarray, qubits: list[int]) -> None:
        x = self._move_last(qubits)
        x = x @ np.ascontiguousarray(u.T, dtype=self.dtype)
        self._restore(x, qubits)

    def apply_channel(self, channel: KrausChannel, qubits: list[int]) -> None:
        ks = channel.kraus_ops
        if len(ks) == 1:
            self.apply_unitary(ks[0], qubits)
            return
        x = self._move_last(qubits)
        rho_red = x.conj().transpose(0, 2, 1) @ x  # (B, k, k) reduced density matrices
        mats = np.stack([k.conj().T @ k for k in ks]).astype(self.dtype)
        probs = np.tensordot(rho_red, mats, axes=([1, 2], [2, 1])).real
        probs = np.clip(probs, 0.0, None)
        norm = probs.sum(axis=1, keepdims=True)
        if np.any(norm <= 0):
            raise RuntimeError("all Kraus branch probabilities vanished")
        rel = probs / norm
        cum = np.cumsum(rel, axis=1)
        u = self.rng.random(self.size)
        choice = (u[:, None] > cum).sum(axis=1)
        choice = np.minimum(choice, len(ks) - 1)
        # bulk-apply the most common branch, then patch the minority rows
        # from a saved copy; avoids gathering/scattering nearly all rows
        bulk = int(np.bincount(choice).argmax())
        minority = np.flatnonzero(choice != bulk)
        saved = x[minority]
        x = x @ np.ascontiguousarray(ks[bulk].T, dtype=self.dtype)
        for k_idx in range(len(ks)):
            if k_idx == bulk:
                continue
            sub = np.flatnonzero(choice[minority] == k_idx)
            if sub.size == 0:
                continue
            x[minority[sub]] = saved[sub] @ np.ascontiguousarray(
                ks[k_idx].T, dtype=self.dtype
            )
        # the norm of the selected branch is exactly its sampled probability
        norms = np.sqrt(np.take_along_axis(rel, choice[:, None], axis=1)[:, 0])
        x /= norms[:, None, None].astype(self.dtype)
        self._restore(x, qubits)

    def apply_sampled_unitaries(
        self, unitaries: list[np.ndarray], choice: np.ndarray, q: int
    ) -> None:
        """Apply ``unitaries[choice[b]]`` on qubit ``q`` per trajectory.

        Entry 0 is assumed to be the identity and is skipped, so for dilute
        noise almost no work is done.
        """
        ax = self._axis(self.slot(q))
        for idx in range(1, len(unitaries)):
            sel = np.flatnonzero(choice == idx)
            if sel.size == 0:
                continue
            sub = np.moveaxis(self.amp[sel], ax, -1)
            sub = sub @ unitaries[idx].T
            self.amp[sel] = np.moveaxis(sub, -1, ax)

    def apply_pauli(self, pauli: PauliString) -> np.ndarray:
        """Return P|psi> for every trajectory (does not modify state).

        Implemented as a single basis-permutation-plus-phase pass: a Pauli
        product maps |i> to phase(i) |i XOR xmask>.
        """
        n = len(self.labels)
        dim = 2**n
        xmask = 0
        zymask = 0
        n_y = 0
        for q in pauli.support():
            bit = 1 << (n - 1 - self.slot(q))
            op = pauli.op_on(q)
            if op in ("X", "Y"):
                xmask |= bit
            if op in ("Z", "Y"):
                zymask |= bit
            if op == "Y":
                n_y += 1
        idx = np.arange(dim)
        signs = 1 - 2 * (
            np.bitwise_count(np.bitwise_and(idx, zymask)).astype(np.int64) & 1
        )
        phase = (1j**n_y) * signs
        flat = self.amp.reshape(self.size, dim)
        out = flat[:, idx ^ xmask] * phase.astype(self.dtype)[None, :]
        return out.reshape(self.amp.shape)

    def measure(self, q: int) -> np.ndarray:
        """Sample one qubit, project and remove it; returns the outcomes."""
        slot = self.slot(q)
        ax = self._axis(slot)
        mag = np.abs(self.amp) ** 2
        other = tuple(a for a in range(1, self.amp.ndim) if a != ax)
        pr = mag.sum(axis=other)  # (B, 2)
        u = self.rng.random(self.size)
        outcome = (u < pr[:, 1] / (pr[:, 0] + pr[:, 1])).astype(np.uint8)
        view = np.moveaxis(self.amp, ax, 1)
        sel = view[np.arange(self.size), outcome.astype(np.intp)]
        norms = np.sqrt(np.where(outcome == 1, pr[:, 1], pr[:, 0]))
        self.labels.pop(slot)
        shape = (self.size,) + (1,) * sel.ndim
        self.amp = sel / norms.reshape(shape[: sel.ndim])
        return outcome

    def measure_pauli(self, pauli: PauliString) -> np.ndarray:
        flipped = self.apply_pauli(pauli)
        rest = tuple(range(1, self.amp.ndim))
        expect = np.sum(self.amp.conj() * flipped, axis=rest).real
        p_plus = np.clip((1.0 + expect) / 2.0, 0.0, 1.0)
        u = self.rng.random(self.size)
        outcome = (u >= p_plus).astype(np.uint8)  # 0 => +1 eigenvalue
        signs = (1.0 - 2.0 * outcome).astype(self.amp.real.dtype)
        shape = (self.size,) + (1,) * (self.amp.ndim - 1)
        new = self.amp + signs.reshape(shape) * flipped
        norms = np.sqrt(np.sum(np.abs(new) ** 2, axis=rest))
        if np.any(norms <= 0):
            raise RuntimeError("Pauli measurement produced a null state")
        self.amp = new / norms.reshape(shape)
        return outcome

    def project(self, pauli: PauliString, sign: int) -> None:
        flipped = self.apply_pauli(pauli)
        new = (self.amp + sign * flipped) / 2.0
        norms = np.sqrt(np.sum(np.abs(new) ** 2, axis=tuple(range(1, self.amp.ndim))))
        if np.any(norms <= 0):
            raise RuntimeError("projection annihilated a trajectory")
        shape = (self.size,) + (1,) * (self.amp.ndim - 1)
        self.amp = new / norms.reshape(shape)


def _unitary_mixture(channel: KrausChannel) -> tuple[np.ndarray, list[np.ndarray]] | None:
    """Decompose a channel into a probabilistic mixture of unitaries, if possible.

    Returns ``(probs, unitaries)`` with each Kraus operator written as
    ``sqrt(p) * U``; branch probabilities are then state-independent, so
    trajectory sampling needs no reduced-density-matrix work.  The identity
    branch (if any) is moved to index 0.
    """
    d = channel.dim
    probs = []
    unitaries = []
    for k in channel.kraus_ops:
        m = k.conj().T @ k
        p = np.trace(m).real / d
        if p <= 0 or not np.allclose(m, p * np.eye(d), atol=1e-12):
            return None
        probs.append(p)
        unitaries.append(k / np.sqrt(p))
    order = sorted(
        range(len(probs)),
        key=lambda i: 0 if np.allclose(unitaries[i], np.eye(d), atol=1e-12) else 1,
    )
    return np.array([probs[i] for i in order]), [unitaries[i] for i in order]


class _FusingRunner:
    """Streams schedule ops into a _Batch, folding 1q unitaries into channels.

    Hadamard (and any other single-qubit unitary) applications are held
    pending and absorbed into the next two-qubit channel acting on that
    qubit, halving the number of full passes over the amplitude array.
    Pending unitaries commute with depolarizing noise (which is unitarily
    covariant), so the noise slot never forces a flush.
    """

    def __init__(self, batch: _Batch, gate: KrausChannel):
        self.batch = batch
        self.gate = gate
        self.pending: dict[int, np.ndarray] = {}
        self._wrapped: dict[tuple[bytes, bytes], KrausChannel] = {}

    def push_unitary(self, u: np.ndarray, q: int) -> None:
        self.pending[q] = u @ self.pending.get(q, np.eye(2))

    def flush(self, qubits=None) -> None:
        targets = list(self.pending) if qubits is None else qubits
        for q in targets:
            u = self.pending.pop(q, None)
            if u is not None:
                self.batch.apply_unitary(u, [q])

    def apply_gate(self, control: int, target: int) -> None:
        uc = self.pending.pop(control, None)
        ut = self.pending.pop(target, None)
        if uc is None and ut is None:
            self.batch.apply_channel(self.gate, [control, target])
            return
        uc = np.eye(2) if uc is None else uc
        ut = np.eye(2) if ut is None else ut
        key = (uc.tobytes(), ut.tobytes())
        wrapped = self._wrapped.get(key)
        if wrapped is None:
            pre = np.kron(uc, ut)
            wrapped = KrausChannel([k @ pre for k in self.gate.kraus_ops])
            self._wrapped[key] = wrapped
        self.batch.apply_channel(wrapped, [control, target])


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    key = np.array([np.uint64(seed & (2**64 - 1)), np.uint64(chunk_index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def run_trajectories(config: RunConfig) -> SyndromeDistribution:
    """Monte-Carlo sampling in fixed-size chunks with per-chunk RNG streams.

    The random stream of chunk ``c`` depends only on ``(seed, c)``, so
    results are bit-identical regardless of how chunks are scheduled.
    """
    if config.backend != "trajectory":
        raise ValueError("run_trajectories called with a non-trajectory config")
    schedule = build_schedule(config.scenario, config.serialization, config.gate_order)
    gate = config.gate_channel()
    noise = depolarizing(config.p_init)
    layout = _key_layout(schedule)
    counts = np.zeros(2**RESULT_KEY_BITS, dtype=np.int64)

    chunk_size = min(
        TRAJECTORY_CHUNK, max(16, TRAJECTORY_AMP_BUDGET >> schedule.peak_qubits())
    )
    remaining = config.n_samples
    chunk_index = 0
    while remaining > 0:
        size = min(chunk_size, remaining)
        counts += _run_chunk(schedule, config, gate, noise, layout, size, chunk_index)
        remaining -= size
        chunk_index += 1

    n = config.n_samples
    probabilities = {}
    std_errors = {}
    for key in np.flatnonzero(counts):
        p = counts[key] / n
        probabilities[int(key)] = float(p)
        std_errors[int(key)] = float(np.sqrt(p * (1.0 - p) / n))
    return SyndromeDistribution(probabilities, std_errors, n_samples=n)


def _run_chunk(
    schedule: ExtractionSchedule,
    config: RunConfig,
    gate: KrausChannel,
    noise: KrausChannel,
    layout: list[list[str]],
    size: int,
    chunk_index: int,
) -> np.ndarray:
    batch = _Batch(size, _chunk_rng(config.seed, chunk_index))
    runner = _FusingRunner(batch, gate)
    mixture = _unitary_mixture(noise) if config.p_init > 0.0 else None
    noise_cum = None if mixture is None else np.cumsum(mixture[0])
    bits: dict[str, np.ndarray] = {}
    for step in schedule.timesteps:
        for op in step:
            if op.kind == "alloc":
                for q in op.qubits:
                    batch.add_qubit(q)
            elif op.kind == "h":
                runner.push_unitary(HADAMARD, op.qubits[0])
            elif op.kind == "encode":
                if config.encoded:
                    runner.flush()
                    batch.amp = batch.apply_pauli(LOGICAL_X)
            elif op.kind == "depol":
                if config.p_init <= 0.0:
                    continue
                if mixture is not None:
                    u = batch.rng.random(size)
                    choice = np.searchsorted(noise_cum, u, side="right")
                    choice = np.minimum(choice, len(mixture[1]) - 1)
                    batch.apply_sampled_unitaries(mixture[1], choice, op.qubits[0])
                else:
                    runner.flush([op.qubits[0]])
                    batch.apply_channel(noise, [op.qubits[0]])
            elif op.kind == "cnot":
                runner.apply_gate(op.qubits[0], op.qubits[1])
            elif op.kind == "measure":
                runner.flush([op.qubits[0]])
                bits[op.label] = batch.measure(op.qubits[0])
            elif op.kind == "measure_all":
                runner.flush()
                for q in list(op.qubits):
                    bits[f"{op.label}{q}"] = batch.measure(q)
            elif op.kind == "measure_pauli":
                runner.flush()
                bits[op.label] = batch.measure_pauli(op.pauli)
            elif op.kind == "project":
                runner.flush()
                batch.project(op.pauli, op.sign)
            else:
                raise ValueError(f"unknown op kind {op.kind!r}")
    runner.flush()
    keys = np.zeros(size, dtype=np.int64)
    for group in layout:
        value = np.zeros(size, dtype=np.int64)
        for label in group:
            value ^= bits[label].astype(np.int64)
        keys = (keys << 1) | value
    return np.bincount(keys, minlength=2**RESULT_KEY_BITS)
