"""Single-qubit noise channels in Kraus form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import I2, SX, SY, SZ, KrausChannel

BIT_FLIP = "bit_flip"
PHASE_FLIP = "phase_flip"
DEPOLARIZING = "depolarizing"

_KINDS = (BIT_FLIP, PHASE_FLIP, DEPOLARIZING)


@dataclass(frozen=True)
class NoiseKind:
    tag: str
    p: float

    def __post_init__(self):
        if self.tag not in _KINDS:
            raise ValueError(f"unknown noise kind {self.tag!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability {self.p} outside [0, 1]")


def noise_channel(kind: NoiseKind) -> KrausChannel:
    """Kraus channel for bit flip, phase flip or depolarizing noise.

    bit flip / phase flip apply sigma_x / sigma_z with probability p;
    depolarizing replaces the state with the maximally mixed state with
    probability p, i.e. Kraus weights (1 - 3p/4, p/4, p/4, p/4) on
    (I, X, Y, Z).
    """
    p = kind.p
    if kind.tag == BIT_FLIP:
        return KrausChannel([np.sqrt(1 - p) * I2, np.sqrt(p) * SX])
    if kind.tag == PHASE_FLIP:
        return KrausChannel([np.sqrt(1 - p) * I2, np.sqrt(p) * SZ])
    return KrausChannel(
        [
            np.sqrt(1 - 3 * p / 4) * I2,
            np.sqrt(p / 4) * SX,
            np.sqrt(p / 4) * SY,
            np.sqrt(p / 4) * SZ,
        ]
    )


def depolarizing(p: float) -> KrausChannel:
    return noise_channel(NoiseKind(DEPOLARIZING, p))
