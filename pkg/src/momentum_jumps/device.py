"""A complete device description: host, well, electron density, drive and detectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .analytic import field_point
from .constants import HBAR, NM, UM
from .core import GAAS, Confinement, Material, Parabolic
from .errors import DomainError, UnsupportedConfinementError
from .geometry import Scene, default_scene
from .occupancy import SubbandLadder, density_of_states, depopulation_fields, fermi_fill


def densities_from_subbands(per_subband: Sequence[Optional[float]], confinement: Confinement,
                            material: Material, rtol: float = 1e-6) -> float:
    """Total density of an equilibrium ladder given some of its subband densities.

    At B = 0 adjacent occupied subbands of a parabolic well differ by
    dos * hbar * omega0, so a single entry fixes the others; None entries are
    filled in and given entries must agree to ``rtol``. The list length is
    the number of occupied subbands.
    """
    if not isinstance(confinement, Parabolic):
        raise UnsupportedConfinementError("per-subband densities need a parabolic well; give the total instead")
    known = [(i, v) for i, v in enumerate(per_subband) if v is not None]
    if not known:
        raise DomainError("at least one subband density must be given")
    step = density_of_states(material) * HBAR * confinement.omega0
    i_ref, v_ref = known[-1]
    full = [v_ref + (i_ref - n) * step for n in range(len(per_subband))]
    for i, v in known:
        if not math.isclose(v, full[i], rel_tol=rtol):
            raise DomainError(
                f"subband {i} density {v:.6e} is inconsistent with equilibrium filling "
                f"(expected {full[i]:.6e} m^-2)"
            )
    if not full[-1] > 0:
        raise DomainError("highest listed subband must hold a positive density")
    if full[-1] >= step:
        raise DomainError(
            f"highest listed subband density {full[-1]:.6e} m^-2 would occupy subband {len(full)} too "
            f"(limit {step:.6e} m^-2)"
        )
    return math.fsum(full)


@dataclass(frozen=True)
class Device:
    material: Material
    confinement: Confinement
    N_total: float
    F: float
    theta_design: float = 10.0
    divergence: float = 0.0
    scene: Optional[Scene] = None
    max_subbands: int = 8
    switch_threshold: float = 1e-3
    depopulation_xtol: float = 1e-12

    def __post_init__(self):
        if not self.N_total > 0:
            raise DomainError(f"N_total must be > 0, got {self.N_total}")
        if self.F < 0:
            raise DomainError(f"F must be >= 0, got {self.F}")
        if self.scene is None:
            object.__setattr__(self, "scene", default_scene(self.theta_design))

    def field_point(self, B: float):
        return field_point(B, self.material, self.confinement)

    def ladder(self, B: float) -> SubbandLadder:
        return fermi_fill(self.N_total, self.field_point(B), self.max_subbands)

    @cached_property
    def reference(self) -> SubbandLadder:
        """The B = 0 ladder that fixes beam weights."""
        return self.ladder(0.0)

    @cached_property
    def events(self) -> list[float]:
        if self.reference.occupied_count < 2:
            return []
        return depopulation_fields(self.N_total, self.confinement, self.material, self.max_subbands,
                                   self.depopulation_xtol)


def paper_device(z0_nm: float = 4.0, F: float = 640.0, N1: float = 1.2e14, material: Material = GAAS,
                 **kwargs) -> Device:
    """Two-subband GaAs device of the worked examples (upper subband density N1 at B = 0)."""
    confinement = Parabolic.from_z0(z0_nm * NM, material)
    total = densities_from_subbands([None, N1], confinement, material)
    return Device(material=material, confinement=confinement, N_total=total, F=F, **kwargs)
