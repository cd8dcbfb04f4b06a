"""Magnetoelectric subbands, magnetic depopulation and momentum jumps of
ballistic electrons in a quasi-2D electron gas under an in-plane field."""

from .analytic import (
    FieldPoint,
    diamagnetic_shift,
    eigenfunction_value,
    field_point,
    orbit_center,
    subband_energy,
)
from .core import GAAS, Material, Parabolic, Triangular, omega0_from_z0, z0_from_omega0
from .device import Device, paper_device
from .kinematics import Beam, BeamSet, beam_set_at, deflection_angle, drift_ky, generalized_jump_kx, jump_kx
from .occupancy import (
    SubbandLadder,
    depopulation_field_closed_form,
    depopulation_fields,
    fermi_fill,
    populations_two_subband,
)
from .sweep import solve_F_for_theta, solve_z0_for_B1, sweep

__version__ = "0.1.0"
