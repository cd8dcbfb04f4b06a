"""Field sweeps with event bracketing, and inverse design of drive field and well width."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analytic import diamagnetic_shift, field_point
from .constants import HBAR, NM
from .core import Material, Parabolic, omega0_from_z0
from .device import Device
from .errors import DomainError, MomentumJumpError, NoSolutionError, NumericalError
from .geometry import TraceResult, switch_state, trace
from .kinematics import BeamSet, beam_set_at, deflection_angle, drift_ky, jump_kx
from .occupancy import depopulation_field_closed_form
from .rootfind import bisect_root

EVENT_OFFSET = 1e-6  # relative offset of the records bracketing each event


@dataclass(frozen=True)
class SweepRecord:
    B: float
    densities: tuple[float, ...]
    occupied_count: int
    shifts: tuple[float, ...]
    beams: BeamSet
    theta: float
    detector_fractions: TraceResult
    resistance_proxy: float


class DesignResult(NamedTuple):
    value: float
    residual: float


def evaluate(B: float, device: Device) -> SweepRecord:
    """Occupancy, beams and detector currents at a single field."""
    try:
        ladder = device.ladder(B)
        fp = device.field_point(B)
        beams = beam_set_at(B, device.reference, device.F, device.material, device.confinement,
                            device.max_subbands, device.events)
        fractions = trace(beams, device.scene, device.divergence)
    except MomentumJumpError as exc:
        exc.args = (f"at B={B!r} T: {exc}",) + exc.args[1:]
        exc.B = B
        raise
    return SweepRecord(
        B=float(B),
        densities=ladder.densities,
        occupied_count=ladder.occupied_count,
        shifts=tuple(diamagnetic_shift(n, fp) for n in range(len(ladder.densities))),
        beams=beams,
        theta=beams.max_angle_deg(),
        detector_fractions=fractions,
        # open channels conduct in parallel; proxy only, no absolute scale
        resistance_proxy=1.0 / ladder.occupied_count,
    )


def sweep_fields(B_start: float, B_end: float, steps: int, events) -> list[float]:
    if not 0 <= B_start < B_end:
        raise DomainError(f"need 0 <= B_start < B_end, got [{B_start}, {B_end}]")
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    fields = set(np.linspace(B_start, B_end, steps).tolist())
    for b in events:
        for f in (b * (1 - EVENT_OFFSET), b * (1 + EVENT_OFFSET)):
            if B_start <= f <= B_end:
                fields.add(f)
    return sorted(fields)


def sweep(B_start: float, B_end: float, steps: int, device: Device, workers: int = 1) -> list[SweepRecord]:
    """Records at `steps` evenly spaced fields plus two records bracketing each event.

    Points are independent; with workers > 1 they are evaluated on a thread
    pool and returned in ascending B, identical to the serial result.
    """
    fields = sweep_fields(B_start, B_end, steps, device.events)
    device.reference  # noqa: B018 - warm the cache before fanning out
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda b: evaluate(b, device), fields))
    return [evaluate(b, device) for b in fields]


def first_jump_kx(B1: float, material: Material, confinement) -> float:
    return jump_kx(field_point(B1, material, confinement), confinement)


def solve_F_for_theta(theta_target: float, B1: float, material: Material, confinement) -> DesignResult:
    """Drive field F (V/m) giving deflection theta_target (degrees) at the event field B1.

    F = hbar kx / (tan(theta) m mu); the residual is the forward-evaluated
    angle error in degrees.
    """
    if not 0 < theta_target < 90:
        raise DomainError(f"theta_target must lie in (0, 90) degrees, got {theta_target}")
    if not B1 > 0:
        raise DomainError(f"B1 must be > 0, got {B1}")
    kx = first_jump_kx(B1, material, confinement)
    F = HBAR * kx / (math.tan(math.radians(theta_target)) * material.mass * material.mobility)
    if not (F > 0 and math.isfinite(F)):
        raise DomainError(f"degenerate inversion: F={F!r}")
    residual = deflection_angle(kx, drift_ky(F, material)) - theta_target
    return DesignResult(F, residual)


def solve_z0_for_B1(B1_target: float, N1: float, material: Material,
                    z_bounds: tuple[float, float] = (0.1 * NM, 100 * NM)) -> DesignResult:
    """Zero-field confinement length (m) whose upper subband empties at B1_target.

    Bisection on the closed-form depopulation field, after checking that it
    decreases monotonically across the bracket. Residual in tesla.
    """
    if not B1_target > 0 or not N1 > 0:
        raise DomainError(f"need B1_target > 0 and N1 > 0, got {B1_target}, {N1}")
    lo, hi = z_bounds

    def b1(z0):
        return depopulation_field_closed_form(N1, omega0_from_z0(z0, material), material)

    probe = [b1(z) for z in np.geomspace(lo, hi, 257)]
    if any(b >= a for a, b in zip(probe, probe[1:])):
        raise NumericalError("depopulation field is not monotone in z0 over the bracket")
    if not probe[-1] <= B1_target <= probe[0]:
        raise NoSolutionError(
            f"B1 target {B1_target!r} T outside [{probe[-1]:.6g}, {probe[0]:.6g}] T "
            f"reachable for z0 in [{lo / NM:g}, {hi / NM:g}] nm"
        )
    z0 = bisect_root(lambda z: b1(z) - B1_target, lo, hi)
    return DesignResult(z0, b1(z0) - B1_target)


def device_N1(device: Device) -> float:
    ref = device.reference
    if ref.occupied_count != 2:
        raise DomainError(f"closed-form design needs exactly two occupied subbands at B = 0, found {ref.occupied_count}")
    return ref.densities[1]


def design_drive(theta_target: float, device: Device) -> DesignResult:
    if not device.events:
        raise NoSolutionError("device has no depopulation event, so no momentum jump to steer")
    return solve_F_for_theta(theta_target, device.events[0], device.material, device.confinement)


def design_width(B1_target: float, device: Device) -> DesignResult:
    if not isinstance(device.confinement, Parabolic):
        raise DomainError("well-width design needs parabolic confinement")
    return solve_z0_for_B1(B1_target, device_N1(device), device.material)


class SwitchRow(NamedTuple):
    B: float
    d1_active: bool
    d2_active: bool
    frac_D1: float
    frac_D2: float


def switch_truth_table(B_values, device: Device, threshold: float | None = None) -> list[SwitchRow]:
    """Detector on/off states over a list of fields.

    A detector is active when its current fraction exceeds the threshold
    (device.switch_threshold unless given).
    """
    threshold = device.switch_threshold if threshold is None else threshold
    rows = []
    for B in B_values:
        frac = evaluate(B, device).detector_fractions
        d1, d2 = switch_state(frac, threshold)
        rows.append(SwitchRow(float(B), d1, d2, frac["D1"], frac["D2"]))
    return rows
