"""Momentum jumps at depopulation, drift wavevector and the resulting beams."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analytic import FieldPoint, diamagnetic_shift, field_point, omega_rise
from .constants import HBAR
from .core import Confinement, Material, Parabolic
from .errors import DomainError, UnsupportedConfinementError
from .occupancy import SubbandLadder, depopulation_fields, ladder_at

WEIGHT_MODEL = (
    "outer beams carry the reference-ladder density of each emptied subband, "
    "split 50/50 between +kx and -kx"
)


@dataclass(frozen=True)
class Beam:
    kx: float
    ky: float
    weight: float
    origin_subband: int

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise DomainError(f"beam weight must lie in [0, 1], got {self.weight}")

    @property
    def angle_deg(self) -> float:
        return deflection_angle(self.kx, self.ky)


@dataclass(frozen=True)
class BeamSet:
    beams: tuple[Beam, ...]
    B: float
    metadata: dict = field(default_factory=lambda: {"weight_model": WEIGHT_MODEL}, compare=False)

    @property
    def total_weight(self) -> float:
        return math.fsum(b.weight for b in self.beams)

    def max_angle_deg(self) -> float:
        return max((abs(b.angle_deg) for b in self.beams), default=0.0)

    def mirrored(self) -> "BeamSet":
        return BeamSet(tuple(Beam(-b.kx, b.ky, b.weight, b.origin_subband) for b in self.beams), self.B, self.metadata)


def jump_kx(fp: FieldPoint, confinement: Confinement | None = None) -> float:
    """Positive kx acquired by an electron launched with kx = 0 at the depopulation field.

    Solves hbar^2 kx^2 / 2M = hbar (sqrt((eB/m)^2 + w0^2) - w0).
    """
    if confinement is not None and not isinstance(confinement, Parabolic):
        raise UnsupportedConfinementError("closed-form jump needs parabolic confinement")
    return math.sqrt(2.0 * fp.M_long * omega_rise(fp) / HBAR)


def generalized_jump_kx(kx_initial: float, n_from: int, n_to: int, fp: FieldPoint) -> float:
    """Post-jump |kx| for a drop n_from -> n_to starting from kx_initial.

    The released energy is the diamagnetic-shift difference between the two
    subbands, added to the kinetic energy hbar^2 kx^2 / 2M along x.
    """
    if n_from <= n_to or n_to < 0:
        raise DomainError(f"need n_from > n_to >= 0, got {n_from} -> {n_to}")
    release = diamagnetic_shift(n_from, fp) - diamagnetic_shift(n_to, fp)
    return math.sqrt(kx_initial**2 + 2.0 * fp.M_long * release / HBAR**2)


def drift_ky(F: float, material: Material) -> float:
    """k_y = m mu F / hbar for a drive field F (V/m)."""
    if F < 0:
        raise DomainError(f"F must be >= 0, got {F}")
    return material.mass * material.mobility * F / HBAR


def deflection_angle(kx: float, ky: float) -> float:
    """atan(kx / ky) in degrees."""
    if not ky > 0:
        raise DomainError(f"ky must be > 0 for propagation toward the collector, got {ky}")
    return math.degrees(math.atan(kx / ky))


def beam_set_at(
    B: float,
    reference: SubbandLadder,
    F: float,
    material: Material,
    confinement: Confinement,
    max_subbands: int = 8,
    events: list[float] | None = None,
) -> BeamSet:
    """Propagation states at field B for electrons launched along the field.

    ``reference`` is the ladder before the ramp (normally B = 0); its densities
    fix which fraction of the electrons sits in each subband. When the field
    has emptied subband n those electrons drop to n - 1 at the event field and
    split symmetrically into +kx and -kx. Electrons that dropped earlier carry
    their kx into later drops. Beams with identical kx are merged.
    """
    N_total = reference.total_density
    if events is None:
        events = depopulation_fields(N_total, confinement, material, max_subbands) if reference.occupied_count > 1 else []
    now = ladder_at(B, N_total, confinement, material, max_subbands)
    ref_count = reference.occupied_count
    happened = ref_count - now.occupied_count
    if happened > len(events):
        raise DomainError(f"{happened} depopulation events at B={B} but only {len(events)} supplied")
    ky = drift_ky(F, material)

    groups = []  # (origin, |kx|, weight)
    for origin, dens in enumerate(reference.densities):
        if dens <= 0:
            continue
        current, k = origin, 0.0
        for j in range(happened):
            if current == ref_count - 1 - j:
                k = generalized_jump_kx(k, current, current - 1, field_point(events[j], material, confinement))
                current -= 1
        groups.append((origin, k, dens / N_total))

    merged: dict[float, list] = {}
    for origin, k, w in groups:
        for kx, share in ((0.0, w),) if k == 0.0 else ((-k, 0.5 * w), (k, 0.5 * w)):
            slot = merged.setdefault(kx, [origin, 0.0])
            slot[0] = min(slot[0], origin)
            slot[1] += share
    beams = tuple(Beam(kx, ky, min(w, 1.0), origin) for kx, (origin, w) in sorted(merged.items()))
    return BeamSet(beams=beams, B=float(B))
