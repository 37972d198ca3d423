"""Transmitter states: two-mode squeezed vacuum and classically-correlated noise.

Both sources emit a (signal, idler) pair; the signal always carries exactly
``N_S`` photons so the two radars are compared at equal transmitted power.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from .errors import DomainError, InfeasibleError
from .gaussian import GaussianState, apply_beamsplitter, make_thermal, make_tmsv, tensor

SIGNAL, IDLER = 0, 1


def solve_power_constraint(N_S: float, xi: float, N_1: float = 0.0) -> float:
    """Hot-port photon number ``N_0`` giving ``N_S = xi N_0 + (1 - xi) N_1``."""
    if not 0.0 < xi < 1.0:
        raise DomainError(f"xi must lie in (0, 1), got {xi}")
    if N_S < 0 or N_1 < 0:
        raise DomainError("photon numbers must be nonnegative")
    N_0 = (N_S - (1.0 - xi) * N_1) / xi
    if not N_0 > N_1:
        raise InfeasibleError(
            f"equal-power constraint N_S = xi*N_0 + (1-xi)*N_1 requires N_0 > N_1 "
            f"(equivalently N_S > N_1); got N_0 = {N_0!r}, N_1 = {N_1!r}"
        )
    return N_0


@dataclass(frozen=True)
class SourceSpec:
    kind: Literal["TMSV", "CCN"]
    N_S: float
    xi: Optional[float] = None
    N_1: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.kind not in ("TMSV", "CCN"):
            raise DomainError(f"unknown source kind {self.kind!r}")
        if self.N_S < 0:
            raise DomainError(f"N_S must be nonnegative, got {self.N_S}")
        if self.kind == "CCN":
            if self.xi is None:
                raise DomainError("CCN source needs a beamsplitter coefficient xi")
            solve_power_constraint(self.N_S, self.xi, self.N_1)

    @property
    def N_0(self) -> float:
        if self.kind != "CCN":
            raise DomainError("N_0 is only defined for the CCN source")
        return solve_power_constraint(self.N_S, self.xi, self.N_1)

    def as_ccn(self, xi: Optional[float] = None) -> "SourceSpec":
        """Classical comparator at the same transmitted power."""
        return SourceSpec("CCN", self.N_S, self.xi if xi is None else xi, self.N_1, self.phi)

    def as_tmsv(self) -> "SourceSpec":
        return SourceSpec("TMSV", self.N_S, self.xi, self.N_1, self.phi)


def build_source(spec: SourceSpec) -> GaussianState:
    """Joint (signal, idler) state of a source."""
    if spec.kind == "TMSV":
        return make_tmsv(spec.N_S)
    N_0 = solve_power_constraint(spec.N_S, spec.xi, spec.N_1)
    inputs = tensor(make_thermal(N_0), make_thermal(spec.N_1))
    return apply_beamsplitter(inputs, SIGNAL, IDLER, spec.xi, spec.phi)
