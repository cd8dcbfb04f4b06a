"""Finite-difference transverse Hamiltonian at fixed kx for arbitrary V(z).

H = (hbar kx + e B z)^2 / 2m + p_z^2 / 2m + V(z) on a uniform grid with the
three-point second-derivative stencil and Dirichlet ends.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import E_CHARGE, HBAR
from .core import Confinement, Material, Parabolic, Triangular, z0_from_omega0
from .errors import DomainError
from .tridiag import eigenvectors, lowest_eigenvalues

PARABOLIC_HALF_WIDTH = 6.0  # in zero-field z0
TRIANGULAR_EXTENT = 40.0  # in (hbar^2 / 2 m e E_s)^(1/3)
DEFAULT_POINTS = 2001


@dataclass(frozen=True)
class Grid1D:
    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise DomainError(f"grid needs at least 3 points, got {self.n_points}")
        if not self.z_max > self.z_min:
            raise DomainError(f"empty grid [{self.z_min}, {self.z_max}]")

    @property
    def spacing(self) -> float:
        return (self.z_max - self.z_min) / (self.n_points - 1)

    @property
    def z(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.n_points)


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    diag: np.ndarray
    off: np.ndarray
    grid: Grid1D
    warnings: tuple[str, ...] = ()

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


@dataclass(frozen=True)
class DispersionCurve:
    kx_samples: np.ndarray
    energies: np.ndarray  # shape (len(kx_samples), n_bands)
    minima_kx: np.ndarray
    interpolation_tolerance: float
    warnings: tuple[str, ...] = field(default=())


def default_grid(confinement: Confinement, material: Material, n_points: int = DEFAULT_POINTS,
                 half_width: float = PARABOLIC_HALF_WIDTH, extent: float = TRIANGULAR_EXTENT) -> Grid1D:
    """Grid covering the bound states of interest.

    Parabolic: +-half_width zero-field oscillator lengths. Triangular: the
    interior grid starts at the wall z = 0 and spans ``extent`` natural lengths.
    """
    if isinstance(confinement, Parabolic):
        z0 = z0_from_omega0(confinement.omega0, material)
        return Grid1D(-half_width * z0, half_width * z0, n_points)
    length = confinement.length_scale(material)
    z_max = extent * length
    # Dirichlet wall sits one spacing below the first interior point
    h = z_max / n_points
    return Grid1D(h, z_max, n_points)


def build_hamiltonian(kx: float, B: float, confinement: Confinement, material: Material,
                      grid: Grid1D) -> TridiagonalHamiltonian:
    m = material.mass
    z = grid.z
    h = grid.spacing
    if isinstance(confinement, Triangular) and grid.z_min <= 0:
        raise DomainError("triangular grid must lie strictly inside z > 0 (wall at z = 0)")
    kinetic = HBAR**2 / (2.0 * m * h * h)
    diag = 2.0 * kinetic + (HBAR * kx + E_CHARGE * B * z) ** 2 / (2.0 * m) + confinement.potential(z, material)
    off = np.full(grid.n_points - 1, -kinetic)
    notes = []
    if isinstance(confinement, Parabolic):
        z0 = z0_from_omega0(confinement.omega0, material)
        if h > z0 / 4:
            notes.append(f"grid spacing {h:.3e} m exceeds z0/4 = {z0 / 4:.3e} m; eigenvalues unreliable")
    else:
        length = confinement.length_scale(material)
        if h > length / 4:
            notes.append(f"grid spacing {h:.3e} m exceeds a quarter of the well length {length:.3e} m")
    return TridiagonalHamiltonian(diag=diag, off=off, grid=grid, warnings=tuple(notes))


def solve(ham: TridiagonalHamiltonian, n_bands: int, with_vectors: bool = False):
    """Lowest n_bands energies (J), and optionally unit-norm eigenvectors as columns."""
    vals = lowest_eigenvalues(ham.diag, ham.off, n_bands)
    if with_vectors:
        return vals, eigenvectors(ham.diag, ham.off, vals)
    return vals


def _parabolic_vertex(x, y):
    """Abscissa of the parabola through three points."""
    (x0, x1, x2), (y0, y1, y2) = x, y
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    return -b / (2.0 * a)


def locate_minima(kx, energies) -> np.ndarray:
    """Per-band kx of the minimum, from a parabola through the lowest sample and its neighbours."""
    kx = np.asarray(kx, dtype=float)
    out = np.empty(energies.shape[1])
    for n in range(energies.shape[1]):
        col = energies[:, n]
        i = int(np.argmin(col))
        if i == 0 or i == len(kx) - 1:
            # minimum at the edge of the sampled window: report the edge
            out[n] = kx[i]
            continue
        # energies relative to the minimum keep the fit well conditioned
        out[n] = _parabolic_vertex(kx[i - 1:i + 2], col[i - 1:i + 2] - col[i])
    return out


def dispersion(kx_samples, B: float, confinement: Confinement, material: Material,
               grid: Grid1D | None = None, n_bands: int = 3, workers: int = 1) -> DispersionCurve:
    """Numerical subband dispersion E_n(kx) at field B.

    kx_samples must be symmetric about 0 with at least 21 points. Each kx is
    an independent diagonalization; with workers > 1 they run on a thread
    pool and are collected in kx order, so results do not depend on workers.
    The reported interpolation tolerance is 1e-3 of the sample spacing.
    """
    kx = np.asarray(kx_samples, dtype=float)
    if kx.ndim != 1 or kx.size < 21:
        raise DomainError("need at least 21 kx samples")
    if not np.allclose(kx, -kx[::-1], rtol=0, atol=1e-12 * np.max(np.abs(kx))):
        raise DomainError("kx samples must be symmetric about 0")
    grid = grid or default_grid(confinement, material)

    def one(k):
        ham = build_hamiltonian(k, B, confinement, material, grid)
        return solve(ham, n_bands), ham.warnings

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, kx))
    else:
        results = [one(k) for k in kx]
    energies = np.array([r[0] for r in results])
    notes = tuple(dict.fromkeys(w for r in results for w in r[1]))
    step = float(np.min(np.diff(kx)))
    return DispersionCurve(
        kx_samples=kx,
        energies=energies,
        minima_kx=locate_minima(kx, energies),
        interpolation_tolerance=1e-3 * step,
        warnings=notes,
    )
