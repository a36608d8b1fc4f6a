"""The 17-qubit surface code: stabilizers, logicals and extraction schedules.

Data qubits are labeled 9..17 (row-major on the 3x3 lattice), ancillas
1..8, each ancilla measuring the like-numbered stabilizer.  Qubits 10,
12, 14 and 16 live in a Hadamard-rotated frame, which is why the
stabilizers mix single-qubit x and z factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

DATA_QUBITS = tuple(range(9, 18))
ANCILLAS = tuple(range(1, 9))
HADAMARD_FRAME_QUBITS = (10, 12, 14, 16)

N_QUBITS = 18  # labels 1..17; bit index = label


@dataclass(frozen=True)
class PauliString:
    """n-qubit Pauli operator as x/z bit masks (sigma_y where both set)."""

    n: int
    x_bits: int
    z_bits: int
    phase: complex = 1

    def __post_init__(self):
        if self.x_bits >> self.n or self.z_bits >> self.n:
            raise ValueError("bit mask does not fit in n bits")

    @classmethod
    def from_ops(cls, ops: dict[int, str], n: int = N_QUBITS) -> "PauliString":
        x = z = 0
        for q, p in ops.items():
            if p in ("X", "Y"):
                x |= 1 << q
            if p in ("Z", "Y"):
                z |= 1 << q
        return cls(n, x, z)

    def op_on(self, q: int) -> str:
        x = bool(self.x_bits >> q & 1)
        z = bool(self.z_bits >> q & 1)
        return "Y" if x and z else "X" if x else "Z" if z else "I"

    def support(self) -> tuple[int, ...]:
        mask = self.x_bits | self.z_bits
        return tuple(q for q in range(self.n) if mask >> q & 1)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("size mismatch")
        # phase tracking is not needed for syndrome algebra; keep +1
        return PauliString(self.n, self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits)

    def __str__(self) -> str:
        return " ".join(f"{self.op_on(q)}{q}" for q in self.support()) or "I"


def commutes(p: PauliString, q: PauliString) -> bool:
    """Symplectic product: true iff the operators commute."""
    if p.n != q.n:
        raise ValueError("size mismatch between Pauli strings")
    overlap = bin(p.x_bits & q.z_bits).count("1") + bin(p.z_bits & q.x_bits).count("1")
    return overlap % 2 == 0


def _p(ops: dict[int, str]) -> PauliString:
    return PauliString.from_ops(ops)


# stabilizers keyed by their like-numbered ancilla
STABILIZERS: dict[int, PauliString] = {
    2: _p({9: "X", 10: "Z", 12: "Z", 13: "X"}),
    7: _p({13: "X", 14: "Z", 16: "Z", 17: "X"}),
    4: _p({11: "X", 14: "Z"}),
    5: _p({12: "Z", 15: "X"}),
    3: _p({10: "X", 11: "Z", 13: "Z", 14: "X"}),
    6: _p({12: "X", 13: "Z", 15: "Z", 16: "X"}),
    1: _p({9: "Z", 10: "X"}),
    8: _p({16: "X", 17: "Z"}),
}

LOGICAL_Z = _p({10: "X", 13: "Z", 16: "X"})
LOGICAL_X = _p({12: "Z", 13: "X", 14: "Z"})

Z_TYPE_ANCILLAS = (1, 3, 6, 8)
X_TYPE_ANCILLAS = (2, 4, 5, 7)

# syndrome bit order used everywhere: ascending ancilla index
SYNDROME_ORDER = tuple(sorted(STABILIZERS))


@dataclass(frozen=True)
class CodeSpec:
    stabilizers: dict[int, PauliString] = field(default_factory=lambda: dict(STABILIZERS))
    logical_z: PauliString = LOGICAL_Z
    logical_x: PauliString = LOGICAL_X
    data_qubits: tuple[int, ...] = DATA_QUBITS
    ancillas: tuple[int, ...] = ANCILLAS

    def validate(self) -> None:
        stabs = list(self.stabilizers.values())
        for i, s in enumerate(stabs):
            for t in stabs[i + 1 :]:
                if not commutes(s, t):
                    raise ValueError(f"stabilizers {s} and {t} anticommute")
        for l in (self.logical_z, self.logical_x):
            for s in stabs:
                if not commutes(l, s):
                    raise ValueError(f"logical {l} anticommutes with stabilizer {s}")
        if commutes(self.logical_z, self.logical_x):
            raise ValueError("logical Z and X must anticommute")


def syndrome_of_error(e: PauliString) -> tuple[int, ...]:
    """Syndrome bits (ancilla-index order): 1 where e anticommutes."""
    for q in e.support():
        if q not in DATA_QUBITS:
            raise ValueError(f"error acts on non-data qubit {q}")
    return tuple(0 if commutes(e, STABILIZERS[a]) else 1 for a in SYNDROME_ORDER)


def single_qubit_errors() -> list[PauliString]:
    return [_p({q: p}) for q in DATA_QUBITS for p in ("X", "Y", "Z")]


def in_stabilizer_group(p: PauliString) -> bool:
    """Membership (up to phase) via GF(2) elimination over the generators."""
    basis: dict[int, int] = {}  # pivot bit -> reduced row
    for s in STABILIZERS.values():
        row = (s.x_bits << N_QUBITS) | s.z_bits
        while row:
            pivot = row.bit_length() - 1
            if pivot not in basis:
                basis[pivot] = row
                break
            row ^= basis[pivot]
    target = (p.x_bits << N_QUBITS) | p.z_bits
    while target:
        pivot = target.bit_length() - 1
        if pivot not in basis:
            return False
        target ^= basis[pivot]
    return True


def degenerate_pairs() -> list[tuple[PauliString, PauliString]]:
    """Same-syndrome pairs of single-qubit errors, verified equivalent.

    Raises if two errors share a syndrome but do not differ by a
    stabilizer product, which would mean the code tables are corrupt.
    """
    by_syndrome: dict[tuple[int, ...], list[PauliString]] = {}
    for e in single_qubit_errors():
        by_syndrome.setdefault(syndrome_of_error(e), []).append(e)
    pairs = []
    for group in by_syndrome.values():
        for i, a in enumerate(group):
            for b in group[i + 1 :]:
                if not in_stabilizer_group(a * b):
                    raise ValueError(
                        f"errors {a} and {b} share a syndrome but are not "
                        "equivalent up to stabilizers"
                    )
                pairs.append((a, b))
    return pairs


# --- extraction schedules -----------------------------------------------------


@dataclass(frozen=True)
class Op:
    """One schedule instruction (gate, noise slot, measurement or prep)."""

    kind: str  # alloc | h | encode | depol | cnot | measure | measure_all | measure_pauli | project | discard
    qubits: tuple[int, ...] = ()
    label: str = ""
    pauli: PauliString | None = None
    sign: int = +1

    def __str__(self) -> str:
        if self.kind == "cnot":
            return f"cnot({self.qubits[0]}->{self.qubits[1]})"
        if self.kind == "measure":
            return f"measure({self.qubits[0]}:{self.label})"
        if self.kind == "measure_all":
            return f"measure_all({','.join(map(str, self.qubits))})"
        if self.kind == "measure_pauli":
            return f"measure_pauli({self.pauli}:{self.label})"
        if self.kind == "project":
            return f"project({self.pauli}:{self.sign:+d})"
        body = ",".join(map(str, self.qubits))
        return f"{self.kind}({body})"


@dataclass(frozen=True)
class ExtractionSchedule:
    scenario: str
    serialization: str
    timesteps: tuple[tuple[Op, ...], ...]
    # result key layout, most significant bit first: each entry is the
    # XOR of the named raw measurement labels
    result_bits: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        measured = []
        for step in self.timesteps:
            seen: set[int] = set()
            for op in step:
                for q in op.qubits:
                    if q in seen:
                        raise ValueError(f"qubit {q} used twice in one timestep")
                    seen.add(q)
                if op.kind == "measure" and op.qubits[0] in ANCILLAS:
                    measured.append(op.qubits[0])
        if len(measured) != len(set(measured)):
            raise ValueError("an ancilla is measured more than once")

    def peak_qubits(self) -> int:
        live: set[int] = set()
        peak = 0
        for step in self.timesteps:
            for op in step:
                if op.kind == "alloc":
                    live.update(op.qubits)
                peak = max(peak, len(live))
                if op.kind in ("measure", "discard"):
                    live.difference_update(op.qubits)
        return peak

    def gate_multiset(self) -> dict[tuple, int]:
        counts: dict[tuple, int] = {}
        for step in self.timesteps:
            for op in step:
                if op.kind in ("cnot", "h"):
                    key = (op.kind,) + op.qubits
                    counts[key] = counts.get(key, 0) + 1
        return counts

    def dump(self) -> str:
        """Human-readable listing, one timestep per line."""
        lines = [f"# scenario {self.scenario}, {self.serialization}"]
        for i, step in enumerate(self.timesteps):
            lines.append(f"t{i:03d}: " + "  ".join(str(op) for op in step))
        return "\n".join(lines)


def _coupling_ops(ancilla: int, data_q: int) -> list[Op]:
    """One stabilizer-extraction coupling: basis wrap + CNOT(data->ancilla)."""
    basis = STABILIZERS[ancilla].op_on(data_q)
    ops: list[list[Op]] = []
    wrap = [Op("h", (data_q,))] if basis == "X" else []
    return [wrap, [Op("cnot", (data_q, ancilla))], wrap]


def _stabilizer_support(ancilla: int, order: str) -> tuple[int, ...]:
    qubits = STABILIZERS[ancilla].support()
    return tuple(reversed(qubits)) if order == "reversed" else qubits


def _prep_steps(scenario: str, serialization: str, gate_order: str) -> list[list[Op]]:
    steps = [
        [Op("alloc", DATA_QUBITS)],
        [Op("h", (q,)) for q in HADAMARD_FRAME_QUBITS],
    ]
    if scenario == "II":
        for a in X_TYPE_ANCILLAS:
            steps.append([Op("project", pauli=STABILIZERS[a], label=f"prep{a}")])
    steps.append([Op("encode")])
    steps.append([Op("depol", (q,)) for q in DATA_QUBITS])
    return steps


def _serialized_round(ancillas: Sequence[int], scenario: str, gate_order: str) -> list[list[Op]]:
    steps = []
    for a in ancillas:
        steps.append([Op("alloc", (a,))])
        if scenario == "I":
            steps.append([Op("depol", (a,))])
        for q in _stabilizer_support(a, gate_order):
            for micro in _coupling_ops(a, q):
                if micro:
                    steps.append(micro)
        steps.append([Op("measure", (a,), label=f"a{a}")])
    return steps


def _concurrent_round(ancillas: Sequence[int], scenario: str, gate_order: str) -> list[list[Op]]:
    # greedy layering: every qubit at most once per layer, each ancilla's
    # couplings in its fixed geometric order
    layers: list[list[tuple[int, int]]] = []
    used: list[set[int]] = []
    ordered = sorted(ancillas, key=lambda a: -len(STABILIZERS[a].support()))
    for a in ordered:
        prev = -1
        for q in _stabilizer_support(a, gate_order):
            lay = prev + 1
            while True:
                while lay >= len(layers):
                    layers.append([])
                    used.append(set())
                if q not in used[lay] and a not in used[lay]:
                    break
                lay += 1
            layers[lay].append((a, q))
            used[lay].update((a, q))
            prev = lay
    steps: list[list[Op]] = [[Op("alloc", tuple(ancillas))]]
    if scenario == "I":
        steps.append([Op("depol", (a,)) for a in ancillas])
    for layer in layers:
        pre = [Op("h", (q,)) for a, q in layer if STABILIZERS[a].op_on(q) == "X"]
        if pre:
            steps.append(pre)
        steps.append([Op("cnot", (q, a)) for a, q in layer])
        if pre:
            steps.append(list(pre))
    steps.append([Op("measure", (a,), label=f"a{a}") for a in sorted(ancillas)])
    return steps


def build_schedule(
    scenario: str, serialization: str = "serialized", gate_order: str = "geometric"
) -> ExtractionSchedule:
    """Assemble the full measurement schedule for one scenario.

    Scenario I: Z-stabilizer round via ancillas 1, 3, 6, 8 plus a final
    direct data readout from which a second Z-syndrome round and the
    logical Z value are derived classically.  Scenario II: one full
    round over all eight ancillas on an encoded logical state, followed
    by a direct logical-Z measurement.
    """
    if scenario not in ("I", "II"):
        raise ValueError(f"unknown scenario {scenario!r}")
    if serialization not in ("serialized", "concurrent"):
        raise ValueError(f"unknown serialization {serialization!r}")
    round_fn = _serialized_round if serialization == "serialized" else _concurrent_round
    steps = _prep_steps(scenario, serialization, gate_order)
    if scenario == "I":
        steps += round_fn(Z_TYPE_ANCILLAS, scenario, gate_order)
        steps.append([Op("h", (q,)) for q in HADAMARD_FRAME_QUBITS])
        steps.append([Op("measure_all", DATA_QUBITS, label="d")])
        result_bits = tuple(
            [(f"a{a}",) for a in Z_TYPE_ANCILLAS]
            + [tuple(f"d{q}" for q in STABILIZERS[a].support()) for a in Z_TYPE_ANCILLAS]
            + [tuple(f"d{q}" for q in LOGICAL_Z.support())]
        )
    else:
        steps += round_fn(ANCILLAS, scenario, gate_order)
        steps.append([Op("measure_pauli", pauli=LOGICAL_Z, label="L")])
        result_bits = tuple([(f"a{a}",) for a in ANCILLAS] + [("L",)])
    return ExtractionSchedule(
        scenario=scenario,
        serialization=serialization,
        timesteps=tuple(tuple(s) for s in steps),
        result_bits=result_bits,
    )
