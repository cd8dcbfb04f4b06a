"""Closed-form magnetoelectric subbands of a parabolic well in an in-plane field.

The field B points along y with gauge A = (Bz, 0, 0). Motion along x acquires
the heavier mass M = m (1 + wc^2/w0^2), the confinement stiffens to
w = sqrt(w0^2 + wc^2), and every level n shifts up by hbar (n + 1/2)(w - w0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import E_CHARGE, HBAR
from .core import Confinement, Material, Parabolic, z0_from_omega0
from .errors import DomainError, UnsupportedConfinementError

MAX_HERMITE_INDEX = 20


@dataclass(frozen=True)
class FieldPoint:
    B: float
    omega_c: float
    omega: float
    M_long: float
    omega0: float
    material: Material

    @property
    def mass(self) -> float:
        return self.material.mass

    @property
    def z0(self) -> float:
        """Field-dependent oscillator length sqrt(hbar/(m omega))."""
        return z0_from_omega0(self.omega, self.material)


@dataclass(frozen=True)
class SubbandState:
    n: int
    kx: float
    ky: float
    energy: float


def field_point(B: float, material: Material, confinement: Confinement) -> FieldPoint:
    if not isinstance(confinement, Parabolic):
        raise UnsupportedConfinementError(
            f"analytic subband model needs parabolic confinement, got {type(confinement).__name__}"
        )
    if B < 0:
        raise DomainError(f"B must be >= 0, got {B}")
    m = material.mass
    w0 = confinement.omega0
    wc = E_CHARGE * B / m
    return FieldPoint(
        B=float(B),
        omega_c=wc,
        omega=math.hypot(w0, wc),
        M_long=m * (1.0 + (wc / w0) ** 2),
        omega0=w0,
        material=material,
    )


def _check_index(n):
    if n < 0:
        raise DomainError(f"subband index must be >= 0, got {n}")


def transverse_energy(n: int, kx: float, fp: FieldPoint) -> float:
    """E_{n,kx}(B) = hbar^2 kx^2 / 2M + hbar omega (n + 1/2)."""
    _check_index(n)
    return HBAR**2 * kx**2 / (2.0 * fp.M_long) + HBAR * fp.omega * (n + 0.5)


def subband_energy(n: int, kx: float, ky: float, fp: FieldPoint) -> float:
    return transverse_energy(n, kx, fp) + HBAR**2 * ky**2 / (2.0 * fp.mass)


def subband_state(n: int, kx: float, ky: float, fp: FieldPoint) -> SubbandState:
    return SubbandState(n=n, kx=kx, ky=ky, energy=subband_energy(n, kx, ky, fp))


def omega_rise(fp: FieldPoint) -> float:
    """omega - omega0, evaluated without cancellation at small fields."""
    return fp.omega_c**2 / (fp.omega + fp.omega0)


def diamagnetic_shift(n: int, fp: FieldPoint) -> float:
    """Upward shift of subband n relative to B = 0, in joules."""
    _check_index(n)
    return HBAR * (n + 0.5) * omega_rise(fp)


def orbit_center(kx: float, fp: FieldPoint) -> float:
    """Orbit center (hbar kx / eB)(wc^2 / w^2).

    Returns 0 at B = 0, which is the B -> 0 limit since wc^2 vanishes faster
    than 1/B diverges. The expression equals hbar kx wc / (m w^2), written that
    way here so B = 0 needs no special case. The well minimum of the
    electron Hamiltonian (hbar kx + eBz)^2/2m + V(z) sits at minus this value;
    only the magnitude enters the perturbation ratio.
    """
    return HBAR * kx * fp.omega_c / (fp.mass * fp.omega**2)


def hermite_functions(n_max: int, xi):
    """Normalized Hermite functions psi_0..psi_n_max at xi.

    Uses the three-term recurrence
    psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1},
    which never forms n! or H_n explicitly. Returns shape (n_max + 1, *xi.shape).
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((n_max + 1,) + xi.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * xi**2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * xi * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def eigenfunction_value(n: int, z, kx: float, fp: FieldPoint):
    """Normalized transverse profile f_n(z) in 1/sqrt(m).

    Width z0(B) = sqrt(hbar/(m omega)), centered at orbit_center(kx, fp).
    Accepts scalar or array z.
    """
    if not 0 <= n <= MAX_HERMITE_INDEX:
        raise DomainError(f"n must lie in [0, {MAX_HERMITE_INDEX}], got {n}")
    length = fp.z0
    xi = (np.asarray(z, dtype=float) - orbit_center(kx, fp)) / length
    val = hermite_functions(n, xi)[n] / math.sqrt(length)
    return float(val) if val.ndim == 0 else val
