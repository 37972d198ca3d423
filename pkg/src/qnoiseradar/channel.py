"""Target return channel and amplifier placements."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import DomainError
from .gaussian import (
    GaussianState,
    apply_amplifier,
    apply_beamsplitter,
    apply_phase,
    make_thermal,
    partial_trace,
    tensor,
)
from .sources import IDLER, SIGNAL, SourceSpec, build_source


class Hypothesis(Enum):
    TARGET_ABSENT = "absent"
    TARGET_PRESENT = "present"


@dataclass(frozen=True)
class RadarScenario:
    source: SourceSpec
    eta: float
    N_B: float
    theta: float = 0.0
    G_S: float = 1.0
    G_R: float = 1.0
    G_I: float = 1.0
    N_GS: float = 0.0
    N_GR: float = 0.0
    N_GI: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {self.eta}")
        if self.N_B < 0:
            raise DomainError(f"N_B must be nonnegative, got {self.N_B}")
        for name in ("G_S", "G_R", "G_I"):
            if getattr(self, name) < 1.0:
                raise DomainError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("N_GS", "N_GR", "N_GI"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be nonnegative, got {getattr(self, name)}")

    def with_source(self, source: SourceSpec) -> "RadarScenario":
        return replace(self, source=source)

    def effective_eta(self, hypothesis: Hypothesis) -> float:
        return self.eta if hypothesis is Hypothesis.TARGET_PRESENT else 0.0


def target_return(
    state: GaussianState, signal_mode: int, eta: float, N_B: float, theta: float = 0.0
) -> GaussianState:
    """Replace the signal by ``sqrt(eta) a_S e^{-i theta} + sqrt(1-eta) a_B``.

    ``a_B`` is a fresh thermal mode with ``N_B`` photons, uncorrelated with
    every other mode.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    if N_B < 0:
        raise DomainError(f"N_B must be nonnegative, got {N_B}")
    n = state.n_modes
    rotated = apply_phase(state, signal_mode, theta)
    if eta == 1.0:
        return rotated
    joint = tensor(rotated, make_thermal(N_B))
    mixed = apply_beamsplitter(joint, signal_mode, n, eta)
    return partial_trace(mixed, range(n))


def simulate_scenario(scenario: RadarScenario, hypothesis: Hypothesis) -> GaussianState:
    """(received, idler) state after the full transmit/receive chain."""
    s = scenario
    state = build_source(s.source)
    state = apply_amplifier(state, SIGNAL, s.G_S, s.N_GS)
    state = target_return(state, SIGNAL, s.effective_eta(hypothesis), s.N_B, s.theta)
    state = apply_amplifier(state, SIGNAL, s.G_R, s.N_GR)
    state = apply_amplifier(state, IDLER, s.G_I, s.N_GI)
    return state


def received_photons(N_S: float, eta: float, N_B: float) -> float:
    """``N_R = eta N_S + (1 - eta) N_B``."""
    return eta * N_S + (1.0 - eta) * N_B
