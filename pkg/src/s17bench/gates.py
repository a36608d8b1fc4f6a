"""Approximate CNOT constructions for spin qubits.

Two families are built here:

* the exchange-based CNOT (sqrt-SWAP sequence), with a noisy variant
  where each exchange pulse is replaced by a channel
  V(t) = exp[-(t - tau_s) K3] U_s(tau_s) (1 - K2)
  parametrized by a relaxation rate Gamma and a phase shift Delta;
* the capacitive floating-gate CNOT, where a sqrt(XX) gate is compiled
  from evolutions under the exact two-spin Hamiltonian instead of the
  flip-flop approximation that would make it exact.

Energy normalization: the transverse coupling J12*gamma_x^2 is fixed to
one energy unit, so a floating-gate point is specified by the ratio
R = E_z/(J12 gamma_x^2) and gamma = gamma_y/gamma_x.  Exchange-pulse
times are in units of the pulse duration tau_s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .channels import (
    I2,
    SX,
    SY,
    SZ,
    HADAMARD,
    KrausChannel,
    hermitian_exponential,
    kraus_from_superoperator,
    kron,
    unitary_superoperator,
)

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)

LDIV_CP_TOL = 1e-7


@dataclass(frozen=True)
class LdivParams:
    """Exchange-pulse channel parameters (times in units of tau_s)."""

    t: float
    gamma: float
    delta: float
    include_k2: bool = True

    def __post_init__(self):
        if self.t < 1.0:
            raise ValueError("total time t must be >= 1 (tau_s units)")
        if self.gamma < 0.0:
            raise ValueError("relaxation rate must be non-negative")


@dataclass(frozen=True)
class FloatingGateParams:
    """Floating-gate CNOT parameters: R = E_z/(J12 gamma_x^2), gamma = gamma_y/gamma_x."""

    R: float
    gamma_ratio: float
    variant: str = "v1"

    def __post_init__(self):
        if self.R <= 0.0:
            raise ValueError("R must be positive")
        if self.gamma_ratio < 0.0:
            raise ValueError("gamma_ratio must be non-negative")
        if self.variant not in ("v1", "v2"):
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class SoiInput:
    """Rashba/Dresselhaus strengths and crystallographic wire angle."""

    alpha_R: float
    alpha_D: float
    angle: float


def soi_vector(s: SoiInput) -> tuple[float, float, float]:
    """Effective spin-coupling vector set by the spin-orbit interaction."""
    gx = s.alpha_D * np.cos(2 * s.angle)
    gy = -s.alpha_R - s.alpha_D * np.sin(2 * s.angle)
    return (float(gx), float(gy), 0.0)


# --- exchange (sqrt-SWAP) construction --------------------------------------


def sqrt_swap() -> np.ndarray:
    """Square root of SWAP from a pi/2-integrated exchange pulse.

    Phase-normalized so that sqrt_swap @ sqrt_swap == SWAP exactly
    (triplet eigenvalue 1, singlet eigenvalue i).
    """
    exchange = kron(SX, SX) + kron(SY, SY) + kron(SZ, SZ)
    return np.exp(1j * np.pi / 8) * hermitian_exponential(exchange, np.pi / 8)


def _sqrt_z(sign: int) -> np.ndarray:
    # sqrt of +/-Z up to global phase: proportional to diag(1, +/-i)
    return hermitian_exponential(SZ, sign * np.pi / 4)


def _ldiv_frame() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-qubit frame of the exchange sequence.

    The z-rotation sequence around the two exchange pulses is diagonal
    and composes to a controlled-Z; ideal Hadamards on the target wrap
    it into a literal CNOT.  Returns (pre, z1, post) with the sequence
    read as pre . sqrtSWAP . z1 . sqrtSWAP . post.
    """
    h2 = kron(I2, HADAMARD)
    pre = h2 @ kron(_sqrt_z(+1), _sqrt_z(-1))
    z1 = kron(hermitian_exponential(SZ, -np.pi / 2), I2)
    return pre, z1, h2


def ldiv_ideal_cnot() -> np.ndarray:
    """Exact CNOT from the exchange sequence sqrtZ(1) sqrt(-Z)(2) sqrtSWAP Z(1) sqrtSWAP."""
    ss = sqrt_swap()
    pre, z1, post = _ldiv_frame()
    return pre @ ss @ z1 @ ss @ post


def k3_generator(gamma: float, delta: float) -> np.ndarray:
    """Environment generator during/after the pulse, as a 16x16 superoperator.

    Each spin relaxes (sigma_minus jumps) at rate gamma and its excited
    level picks up a phase shift at rate delta; exp[-s * K3] is the CPTP
    semigroup element for elapsed time s.  Reconstructed as a two-spin
    Born-Markov master-equation generator.
    """
    dim = 4
    lind = np.zeros((dim * dim, dim * dim), dtype=complex)
    ident = np.eye(dim, dtype=complex)
    n_op = (I2 - SZ) / 2  # excited-state projector
    for ops in ((SIGMA_MINUS, I2), (I2, SIGMA_MINUS)):
        l_op = kron(*ops)
        ll = l_op.conj().T @ l_op
        lind += np.kron(l_op.conj(), l_op) * gamma
        lind -= gamma / 2 * (np.kron(ident, ll) + np.kron(ll.T, ident))
    for ops in ((n_op, I2), (I2, n_op)):
        h_op = kron(*ops)
        lind += -1j * delta * (np.kron(ident, h_op) - np.kron(h_op.T, ident))
    return -lind


def k2_superoperator(gamma: float) -> np.ndarray:
    """Initial-state correction superoperator.

    Modeled as partial loss of initial coherence: 1 - K2 is the convex
    mixture (1 - gamma) * Id + gamma * Phi with Phi full dephasing of
    both spins, which keeps the corrected map exactly CPTP.
    """
    dim = 4
    ident = np.eye(dim * dim, dtype=complex)
    deph = np.zeros_like(ident)
    for z_ops in ((I2, I2), (SZ, I2), (I2, SZ), (SZ, SZ)):
        z = kron(*z_ops)
        deph += np.kron(z.conj(), z) / 4
    return gamma * (ident - deph)


def ldiv_pulse_superoperator(params: LdivParams) -> np.ndarray:
    """Superoperator of one noisy exchange pulse V(t)."""
    u_s = unitary_superoperator(sqrt_swap())
    v = expm(-(params.t - 1.0) * k3_generator(params.gamma, params.delta)) @ u_s
    if params.include_k2:
        v = v @ (np.eye(16, dtype=complex) - k2_superoperator(params.gamma))
    return v


def ldiv_noisy_cnot(params: LdivParams) -> KrausChannel:
    """Noisy exchange CNOT: V(t) substituted for both sqrt-SWAP pulses."""
    v = ldiv_pulse_superoperator(params)
    pre, z1, post = _ldiv_frame()
    s = (
        unitary_superoperator(pre)
        @ v
        @ unitary_superoperator(z1)
        @ v
        @ unitary_superoperator(post)
    )
    return kraus_from_superoperator(s, cp_tolerance=LDIV_CP_TOL)


# --- floating-gate construction ----------------------------------------------


def floating_hamiltonians(params: FloatingGateParams) -> tuple[np.ndarray, np.ndarray]:
    """Full coupling Hamiltonian and its flip-flop approximation.

    In normalized units (J12 gamma_x^2 = 1, g = gamma_y/gamma_x):

        H  = R (Z1 + Z2) + (X + g Y) (x) (X + g Y)
        H' = (1 + g^2)/2 (XX + YY) + R (Z1 + Z2)

    H' keeps only the co-rotating part of the transverse coupling, hence
    the (1 + g^2) weight; the sequence below is exact for H'.
    """
    g = params.gamma_ratio
    zeeman = params.R * (kron(SZ, I2) + kron(I2, SZ))
    axis = SX + g * SY
    h_full = zeeman + kron(axis, axis)
    h_prime = zeeman + (1 + g * g) / 2 * (kron(SX, SX) + kron(SY, SY))
    return h_full, h_prime


def floating_application_time(params: FloatingGateParams) -> float:
    """Evolution time t = pi / (4 J12 (gamma_x^2 + gamma_y^2)), normalized units."""
    return np.pi / (4.0 * (1.0 + params.gamma_ratio**2))


def floating_sqrt_xx(params: FloatingGateParams, use_h_prime: bool = False) -> np.ndarray:
    """Approximate sqrt(XX) from two (v1) or four (v2) coupling evolutions.

    The sequences are exact when run with the flip-flop Hamiltonian
    (use_h_prime=True); with the full Hamiltonian they are unitary but
    only approximately sqrt(XX), which is the error source under study.
    """
    h_full, h_prime = floating_hamiltonians(params)
    h = h_prime if use_h_prime else h_full
    t = floating_application_time(params)
    x1 = kron(SX, I2)
    x2 = kron(I2, SX)
    if params.variant == "v1":
        zeeman = kron(SZ, I2) + kron(I2, SZ)
        echo = hermitian_exponential(zeeman, -params.R * t)  # exp(+i Ez (Z1+Z2) t)
        step = echo @ hermitian_exponential(h, t) @ x1
        return step @ step
    half = hermitian_exponential(h, t / 2)
    x12 = x1 @ x2
    return x2 @ half @ x12 @ half @ x2 @ half @ x12 @ half


def floating_cnot_unitary(params: FloatingGateParams, use_h_prime: bool = False) -> np.ndarray:
    """CNOT compiled as sqrtZ(1) sqrtX(2) H(1) sqrt(XX) H(1)."""
    sxx = floating_sqrt_xx(params, use_h_prime=use_h_prime)
    h1 = kron(HADAMARD, I2)
    pre = kron(hermitian_exponential(SZ, -np.pi / 4), hermitian_exponential(SX, -np.pi / 4))
    return pre @ h1 @ sxx @ h1


def floating_cnot(params: FloatingGateParams, use_h_prime: bool = False) -> KrausChannel:
    """Floating-gate CNOT as a rank-1 (unitary) channel."""
    return KrausChannel.from_unitary(floating_cnot_unitary(params, use_h_prime=use_h_prime))


def ideal_cnot_channel() -> KrausChannel:
    return KrausChannel([CNOT.copy()])
