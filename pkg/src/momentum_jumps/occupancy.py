"""Zero-temperature subband filling and magnetic depopulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .analytic import FieldPoint, diamagnetic_shift, field_point
from .constants import E_CHARGE, HBAR
from .core import Confinement, Material, Parabolic
from .errors import DomainError, NumericalError, UnsupportedConfinementError
from .rootfind import bisect_bool

MAX_FIELD = 1e4  # T, upper limit when bracketing a depopulation event


def two_subband_transfer_dos(material: Material) -> float:
    """m / (2 pi hbar^2), the prefactor of the two-subband transfer law."""
    return material.mass / (2.0 * math.pi * HBAR**2)


def density_of_states(material: Material) -> float:
    """Spin-degenerate 2D density of states per subband, m / (pi hbar^2), in J^-1 m^-2.

    With a common Fermi level this is the value for which the equilibrium
    filling moves exactly m/(2 pi hbar^2) (dE1 - dE0) electrons per unit area
    from the upper to the lower subband.
    """
    return material.mass / (math.pi * HBAR**2)


@dataclass(frozen=True)
class SubbandLadder:
    B: float
    densities: tuple[float, ...]
    fermi_energy: float
    occupied_count: int
    levels: tuple[float, ...]

    @property
    def total_density(self) -> float:
        return math.fsum(self.densities)


class TwoSubbandPopulations(NamedTuple):
    N0: float
    N1: float
    depopulated: bool


def populations_two_subband(N0: float, N1: float, fp: FieldPoint) -> TwoSubbandPopulations:
    """Subband populations after applying the in-plane field.

    N_0(B) = N_0 + (m / 2 pi hbar^2)(dE_1 - dE_0) and N_1(B) the mirror image.
    Past the depopulation field N_1 is clamped to 0, all density is put into
    the lower subband and ``depopulated`` is set.
    """
    if N1 < 0 or N1 > N0:
        raise DomainError(f"need N0 >= N1 >= 0, got N0={N0}, N1={N1}")
    transfer = two_subband_transfer_dos(fp.material) * (diamagnetic_shift(1, fp) - diamagnetic_shift(0, fp))
    n0, n1 = N0 + transfer, N1 - transfer
    if n1 < 0:
        return TwoSubbandPopulations(N0 + N1, 0.0, True)
    return TwoSubbandPopulations(n0, n1, False)


def depopulation_field_closed_form(N1: float, omega0: float, material: Material) -> float:
    """Field that empties the upper of two subbands holding N1 at B = 0."""
    if not N1 > 0:
        raise DomainError(f"N1 must be > 0, got {N1}")
    m = material.mass
    a = 2.0 * math.pi * HBAR * N1 / m
    # (w0 + a)^2 - w0^2 expanded to keep precision when a << w0
    return (m / E_CHARGE) * math.sqrt(a * (2.0 * omega0 + a))


def fill_levels(N_total: float, levels: Sequence[float], dos: float):
    """T = 0 filling of ascending levels with a constant DOS per level.

    Returns (fermi_energy, densities). The Fermi level is found exactly: with
    j levels occupied it is (N/dos + sum of those j levels) / j, and j is the
    smallest count for which that value does not exceed level j.
    """
    if not N_total > 0:
        raise DomainError(f"N_total must be > 0, got {N_total}")
    if len(levels) < 1:
        raise DomainError("need at least one level")
    if any(b < a for a, b in zip(levels, levels[1:])):
        raise DomainError("levels must be ascending")
    reservoir = N_total / dos
    partial = 0.0
    for j in range(1, len(levels) + 1):
        partial += levels[j - 1]
        ef = (reservoir + partial) / j
        if j == len(levels) or ef <= levels[j]:
            break
    densities = tuple(dos * (ef - e) if e < ef else 0.0 for e in levels)
    return ef, densities


def fermi_fill(N_total: float, fp: FieldPoint, max_subbands: int = 8) -> SubbandLadder:
    """Distribute N_total over the ladder E_n = hbar omega (n + 1/2) at T = 0.

    Raises NumericalError if the density would spill into subband
    ``max_subbands``, i.e. the ladder was truncated too early.
    """
    if max_subbands < 1:
        raise DomainError(f"max_subbands must be >= 1, got {max_subbands}")
    levels = tuple(HBAR * fp.omega * (n + 0.5) for n in range(max_subbands + 1))
    ef, dens = fill_levels(N_total, levels, density_of_states(fp.material))
    if dens[-1] > 0:
        raise NumericalError(
            f"filling not converged at B={fp.B!r} T: Fermi energy {ef:.6e} J is above "
            f"subband {max_subbands} (N_total={N_total!r}); raise max_subbands"
        )
    dens, levels = dens[:-1], levels[:-1]
    return SubbandLadder(
        B=fp.B,
        densities=dens,
        fermi_energy=ef,
        occupied_count=sum(1 for d in dens if d > 0),
        levels=levels,
    )


def ladder_at(B: float, N_total: float, confinement: Confinement, material: Material, max_subbands: int = 8):
    return fermi_fill(N_total, field_point(B, material, confinement), max_subbands)


def depopulation_fields(
    N_total: float,
    confinement: Confinement,
    material: Material,
    max_subbands: int = 8,
    xtol: float = 1e-12,
) -> list[float]:
    """Ascending fields (T) at which the occupied-subband count drops by one.

    Each entry is the smallest field, to within xtol, at which the count is
    already reduced. A device with a single occupied subband returns [].
    """
    if not isinstance(confinement, Parabolic):
        raise UnsupportedConfinementError("depopulation is computed for parabolic confinement only")

    def count(B):
        return ladder_at(B, N_total, confinement, material, max_subbands).occupied_count

    start = count(0.0)
    fields = []
    lo = 0.0
    for target in range(start - 1, 0, -1):
        if count(lo) <= target:  # coincident events
            fields.append(lo)
            continue
        hi = max(2.0 * lo, 1.0)
        while count(hi) > target:
            lo, hi = hi, 2.0 * hi
            if hi > MAX_FIELD:
                raise NumericalError(
                    f"could not bracket depopulation to {target} subbands below {MAX_FIELD} T "
                    f"(N_total={N_total!r}, count at {lo!r} T = {count(lo)})"
                )
        lo, hi = bisect_bool(lambda B: count(B) <= target, lo, hi, xtol)
        fields.append(hi)
        lo = hi
    return fields
