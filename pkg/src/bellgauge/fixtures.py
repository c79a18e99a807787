"""The two X-shaped states used to refute the entropy bound, and the bound itself."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qstate import DensityMatrix, validate

SANTOS_THRESHOLD = 1.0 / math.sqrt(2.0) - 0.25

RHO1_ENTRIES = np.array(
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.549027, 0.125, 0.0],
        [0.0, 0.125, 0.449798, 0.0],
        [0.0, 0.0, 0.0, 0.001175],
    ]
)

# printed entries sum to 1.000003, so this one is loaded with renormalize
RHO2_ENTRIES = np.array(
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.632864, 0.125, 0.0],
        [0.0, 0.125, 0.317431, 0.0],
        [0.0, 0.0, 0.0, 0.049708],
    ]
)

PAPER_S12 = 0.465
PAPER_CHSH_RHO1 = 2.05699
PAPER_CHSH_RHO2 = 1.86929


def rho1() -> DensityMatrix:
    return validate(RHO1_ENTRIES, trace_policy="strict")


def rho2() -> DensityMatrix:
    return validate(RHO2_ENTRIES, trace_policy="renormalize")


@dataclass(frozen=True)
class PaperFixtures:
    rho1: DensityMatrix = field(default_factory=rho1)
    rho2: DensityMatrix = field(default_factory=rho2)
    santos_threshold: float = SANTOS_THRESHOLD
