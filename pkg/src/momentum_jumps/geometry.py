"""Planar emitter / collector / detector layout and beam tracing.

Detection is modelled in angle space: every aperture is seen from the emitter
as an angular window, and a straight ray leaving the emitter at angle theta
(measured from +y, positive toward +x) lands in whichever window contains it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import UM
from .errors import DomainError
from .kinematics import BeamSet

DETECTOR_IDS = ("C", "D1", "D2")


@dataclass(frozen=True)
class Aperture:
    """A segment of width ``width`` facing the emitter at ``distance`` along ``angle_deg``."""

    name: str
    angle_deg: float
    distance: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError(f"{self.name}: width must be > 0, got {self.width}")
        if not self.distance > 0:
            raise DomainError(f"{self.name}: distance must be > 0, got {self.distance}")

    @property
    def half_angle_deg(self) -> float:
        return math.degrees(math.atan(0.5 * self.width / self.distance))

    @property
    def window(self) -> tuple[float, float]:
        return self.angle_deg - self.half_angle_deg, self.angle_deg + self.half_angle_deg

    @property
    def center(self) -> tuple[float, float]:
        t = math.radians(self.angle_deg)
        return self.distance * math.sin(t), self.distance * math.cos(t)


@dataclass(frozen=True)
class Scene:
    emitter_aperture: float
    collector: Aperture
    d1: Aperture
    d2: Aperture

    def __post_init__(self):
        if not self.emitter_aperture > 0:
            raise DomainError("emitter aperture must be > 0")
        c_lo, c_hi = self.collector.window
        for det in (self.d1, self.d2):
            lo, hi = det.window
            # shared edges are allowed; tolerate rounding in the tiling
            if lo < c_hi - 1e-9 and c_lo + 1e-9 < hi:
                raise DomainError(f"{det.name} window {det.window} overlaps the collector {self.collector.window}")

    @property
    def apertures(self) -> tuple[Aperture, ...]:
        return self.collector, self.d1, self.d2


@dataclass(frozen=True)
class TraceResult:
    fractions: dict
    missed: float

    def __getitem__(self, key):
        return self.fractions[key]


def default_scene(theta_design: float, distance: float = 10 * UM, emitter_aperture: float = 1 * UM,
                  detector_distance: float | None = None) -> Scene:
    """Collector on axis, D1/D2 centered on the +-theta_design rays.

    Each aperture subtends a half-angle of theta_design / 2, so the collector
    and detector windows tile (-3/2, 3/2) theta_design without overlap.
    """
    if not 0 < theta_design < 45:
        raise DomainError(f"theta_design must lie in (0, 45) degrees, got {theta_design}")
    detector_distance = distance if detector_distance is None else detector_distance
    half = math.radians(0.5 * theta_design)
    collector = Aperture("C", 0.0, distance, 2.0 * distance * math.tan(half))
    w_d = 2.0 * detector_distance * math.tan(half)
    return Scene(
        emitter_aperture=emitter_aperture,
        collector=collector,
        d1=Aperture("D1", theta_design, detector_distance, w_d),
        d2=Aperture("D2", -theta_design, detector_distance, w_d),
    )


def _window_mass(theta, sigma, lo, hi):
    """Gaussian(theta, sigma) probability inside [lo, hi]; exactly odd under mirroring."""
    s = sigma * math.sqrt(2.0)
    return 0.5 * (math.erf((hi - theta) / s) - math.erf((lo - theta) / s))


def trace(beams: BeamSet, scene: Scene, divergence: float = 0.0) -> TraceResult:
    """Share of the beam current landing on C, D1 and D2.

    divergence is the Gaussian angular spread (degrees, one sigma) of every
    beam; 0 means ideal rays. A ray exactly on the shared edge of two
    windows is split equally between them.
    """
    if divergence < 0:
        raise DomainError(f"divergence must be >= 0, got {divergence}")
    totals = dict.fromkeys(DETECTOR_IDS, 0.0)
    windows = [(a.name, a.window) for a in scene.apertures]
    for beam in beams.beams:
        theta = beam.angle_deg
        if divergence == 0:
            hits = [name for name, (lo, hi) in windows if lo <= theta <= hi]
            for name in hits:
                totals[name] += beam.weight / len(hits)
        else:
            for name, (lo, hi) in windows:
                totals[name] += beam.weight * _window_mass(theta, divergence, lo, hi)
    missed = 1.0 - math.fsum(totals.values())
    if -1e-12 < missed < 0:  # rounding of a fully collected beam set
        missed = 0.0
    return TraceResult(fractions=totals, missed=missed)


def switch_state(result: TraceResult, threshold: float = 1e-3) -> tuple[bool, bool]:
    """(D1 active, D2 active) for a current-fraction threshold."""
    return result["D1"] > threshold, result["D2"] > threshold
