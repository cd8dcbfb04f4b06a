"""Base parameter types and confinement-length conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .constants import E_CHARGE, HBAR, M0
from .errors import DomainError


@dataclass(frozen=True)
class Material:
    """Host of the 2DEG.

    effective_mass_ratio is m*/m0; mobility is in m^2 V^-1 s^-1.
    """

    effective_mass_ratio: float
    mobility: float

    def __post_init__(self):
        if not self.effective_mass_ratio > 0:
            raise DomainError(f"effective_mass_ratio must be > 0, got {self.effective_mass_ratio}")
        if not self.mobility > 0:
            raise DomainError(f"mobility must be > 0, got {self.mobility}")

    @property
    def mass(self) -> float:
        """Effective mass in kg."""
        return self.effective_mass_ratio * M0


GAAS = Material(effective_mass_ratio=0.067, mobility=6e2)


@dataclass(frozen=True)
class Parabolic:
    """V(z) = m omega0^2 z^2 / 2."""

    omega0: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise DomainError(f"omega0 must be > 0, got {self.omega0}")

    @classmethod
    def from_z0(cls, z0: float, material: Material) -> "Parabolic":
        return cls(omega0_from_z0(z0, material))

    def potential(self, z, material: Material):
        return 0.5 * material.mass * self.omega0**2 * z**2


@dataclass(frozen=True)
class Triangular:
    """V(z) = e E_s z for z >= 0, infinite wall for z < 0."""

    slope_field: float

    def __post_init__(self):
        if not self.slope_field > 0:
            raise DomainError(f"slope_field must be > 0, got {self.slope_field}")

    def length_scale(self, material: Material) -> float:
        """(hbar^2 / (2 m e E_s))^(1/3), the natural width of the well."""
        return (HBAR**2 / (2.0 * material.mass * E_CHARGE * self.slope_field)) ** (1.0 / 3.0)

    def potential(self, z, material: Material):
        return E_CHARGE * self.slope_field * z


Confinement = Union[Parabolic, Triangular]


def omega0_from_z0(z0: float, material: Material) -> float:
    """Zero-field oscillator frequency hbar/(m z0^2) for a confinement length z0 (m)."""
    if not z0 > 0:
        raise DomainError(f"z0 must be > 0, got {z0}")
    return HBAR / (material.mass * z0 * z0)


def z0_from_omega0(omega: float, material: Material) -> float:
    """Oscillator length sqrt(hbar/(m omega)).

    Called with the hybrid frequency omega(B) this gives the field-dependent
    width of the transverse wavefunction.
    """
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    return math.sqrt(HBAR / (material.mass * omega))
