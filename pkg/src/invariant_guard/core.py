"""Grids, field containers, and the volume-weighted brackets the correctors use.

All field values are float64 throughout: the corrector post-conditions are
machine-precision identities and need the headroom.  2D arrays are indexed
``[i, j]`` with ``i`` the x index; CSV dumps flatten with i fastest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

PERIODIC = "periodic"
DIRICHLET = "dirichlet"


def _as_float_array(values):
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("field values must be finite")
    return arr


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniformGrid1D:
    """1D grid of N cells covering [0, L].

    ``cell_volumes`` defaults to the uniform L/N but may be any positive
    per-cell widths summing to L (rel. tol 1e-12).
    """

    n_cells: int
    length: float
    boundary: str = PERIODIC
    cell_volumes: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("need at least 2 cells")
        if self.length <= 0:
            raise ValueError("domain length must be positive")
        if self.boundary not in (PERIODIC, DIRICHLET):
            raise ConfigurationError(f"unknown boundary kind {self.boundary!r}")
        if self.cell_volumes is None:
            vols = np.full(self.n_cells, self.length / self.n_cells)
        else:
            vols = np.asarray(self.cell_volumes, dtype=np.float64)
            if vols.shape != (self.n_cells,):
                raise ValueError("cell_volumes must have one entry per cell")
            if np.any(vols <= 0):
                raise ValueError("cell volumes must be positive")
            if abs(vols.sum() - self.length) > 1e-12 * self.length:
                raise ValueError("cell volumes must sum to the domain length")
        vols.flags.writeable = False
        object.__setattr__(self, "cell_volumes", vols)

    @property
    def periodic(self):
        return self.boundary == PERIODIC

    @property
    def dx_min(self):
        return float(self.cell_volumes.min())

    def cell_centers(self):
        edges = np.concatenate(([0.0], np.cumsum(self.cell_volumes)))
        return 0.5 * (edges[:-1] + edges[1:])

    def n_interfaces(self):
        """Number of stored interface fluxes: N for periodic, N+1 otherwise."""
        return self.n_cells if self.periodic else self.n_cells + 1


@dataclass(frozen=True)
class UniformGrid2D:
    """Uniform periodic rectangular grid, nx*ny cells on [0,lx]x[0,ly]."""

    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("need at least 2 cells per direction")
        if self.lx <= 0 or self.ly <= 0:
            raise ValueError("domain sides must be positive")

    @property
    def dx(self):
        return self.lx / self.nx

    @property
    def dy(self):
        return self.ly / self.ny

    @property
    def cell_volume(self):
        return self.dx * self.dy

    def cell_centers(self):
        x = (np.arange(self.nx) + 0.5) * self.dx
        y = (np.arange(self.ny) + 0.5) * self.dy
        return np.meshgrid(x, y, indexing="ij")


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

@dataclass
class FvField1D:
    """Cell-average scalar field u_j on a 1D grid."""

    grid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self):
        self.values = _as_float_array(self.values)
        if self.values.shape != (self.grid.n_cells,):
            raise ValueError("values must have one entry per cell")

    def copy(self):
        return FvField1D(self.grid, self.values.copy())


@dataclass
class FvField2D:
    """Cell-average scalar field u_{i,j}, shape (nx, ny), i along x."""

    grid: UniformGrid2D
    values: np.ndarray

    def __post_init__(self):
        self.values = _as_float_array(self.values)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError("values must have shape (nx, ny)")

    def copy(self):
        return FvField2D(self.grid, self.values.copy())


#: squared L2 norms of the Legendre basis on the reference cell, <psi_k|psi_k>
LEGENDRE_NORMS = np.array([1.0, 1.0 / 3.0, 1.0 / 5.0])


@dataclass
class DgField:
    """Per-cell Legendre coefficients a_{jk}, shape (N, p+1), degree p in {0,1,2}."""

    grid: UniformGrid1D
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _as_float_array(self.coeffs)
        if self.coeffs.ndim != 2 or self.coeffs.shape[0] != self.grid.n_cells:
            raise ValueError("coeffs must have shape (n_cells, p+1)")
        if not 1 <= self.coeffs.shape[1] <= 3:
            raise ConfigurationError("only degrees p in {0, 1, 2} are supported")

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    @property
    def basis_norms(self):
        return LEGENDRE_NORMS[: self.degree + 1]

    def cell_means(self):
        return self.coeffs[:, 0].copy()

    def copy(self):
        return DgField(self.grid, self.coeffs.copy())


@dataclass
class SpectralField:
    """Fourier coefficients u~_m for m = 0..N on a periodic domain of size L.

    Negative modes are implied by conjugate symmetry, so the 2N+1 real
    degrees of freedom are (u_0^r, u_m^r, u_m^i).  The imaginary part of
    mode 0 is forced to zero on construction.
    """

    length: float
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128).copy()
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("coeffs must hold modes m = 0..N with N >= 1")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("coefficients must be finite")
        arr[0] = arr[0].real
        self.coeffs = arr
        if self.length <= 0:
            raise ValueError("domain length must be positive")

    @property
    def n_modes(self):
        return self.coeffs.size - 1

    def evaluate(self, x):
        """Reconstruct the real-valued solution at points x."""
        x = np.asarray(x, dtype=np.float64)
        m = np.arange(1, self.n_modes + 1)
        phase = np.exp(2j * np.pi * np.outer(x, m) / self.length)
        return self.coeffs[0].real + 2.0 * (phase @ self.coeffs[1:]).real

    def copy(self):
        return SpectralField(self.length, self.coeffs.copy())


@dataclass
class EulerState1D:
    """Cell averages (rho, rho*v, E) of the 1D compressible Euler equations."""

    grid: UniformGrid1D
    rho: np.ndarray
    mom: np.ndarray
    energy: np.ndarray
    gamma: float = 1.4

    def __post_init__(self):
        self.rho = _as_float_array(self.rho)
        self.mom = _as_float_array(self.mom)
        self.energy = _as_float_array(self.energy)
        n = self.grid.n_cells
        if not (self.rho.shape == self.mom.shape == self.energy.shape == (n,)):
            raise ValueError("component arrays must have one entry per cell")
        if self.gamma <= 1.0:
            raise ValueError("gamma must exceed 1")

    def velocity(self):
        return self.mom / self.rho

    def pressure(self):
        return (self.gamma - 1.0) * (self.energy - 0.5 * self.mom**2 / self.rho)

    def sound_speed(self):
        return np.sqrt(self.gamma * self.pressure() / self.rho)

    def conserved(self):
        """Stack (rho, mom, E) as an (N, 3) array."""
        return np.stack([self.rho, self.mom, self.energy], axis=1)

    @classmethod
    def from_conserved(cls, grid, u, gamma):
        return cls(grid, u[:, 0], u[:, 1], u[:, 2], gamma)

    @classmethod
    def from_primitive(cls, grid, rho, v, p, gamma):
        rho = np.asarray(rho, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        p = np.asarray(p, dtype=np.float64)
        return cls(grid, rho, rho * v, p / (gamma - 1.0) + 0.5 * rho * v**2, gamma)

    def copy(self):
        return EulerState1D(self.grid, self.rho.copy(), self.mom.copy(),
                            self.energy.copy(), self.gamma)


@dataclass
class VorticityState2D:
    """Vorticity cell averages plus the cell-average streamfunction.

    ``psi_bar`` must be refreshed (via ``schemes.poisson_solve``) after every
    change to ``chi``; the energy corrector's brackets read it directly.
    """

    chi: FvField2D
    psi_bar: np.ndarray

    def __post_init__(self):
        self.psi_bar = _as_float_array(self.psi_bar)
        if self.psi_bar.shape != self.chi.values.shape:
            raise ValueError("psi_bar must match the vorticity field shape")

    def copy(self):
        return VorticityState2D(self.chi.copy(), self.psi_bar.copy())


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------

def bracket(a, b, volumes):
    """Volume-weighted inner product <a|b> = sum_j a_j b_j |Omega_j|.

    Works on flat or 2D arrays (2D volumes may be a scalar cell volume).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"bracket arguments differ in shape: {a.shape} vs {b.shape}")
    vol = np.asarray(volumes, dtype=np.float64)
    if vol.ndim > 0 and vol.shape != a.shape:
        raise ValueError("volumes must be scalar or match the field shape")
    return float(np.sum(a * b * vol))


def volume_mean(a, volumes):
    """Volume-weighted average <a> = <a|1>/<1|1>."""
    a = np.asarray(a, dtype=np.float64)
    ones = np.ones_like(a)
    return bracket(a, ones, volumes) / bracket(ones, ones, volumes)


def coarse_grain(fine: FvField1D, factor: int) -> FvField1D:
    """Block-average a fine field onto a grid coarsened by ``factor``.

    Volume-weighted, so the total mass is preserved exactly.
    """
    if factor < 1 or fine.grid.n_cells % factor != 0:
        raise ValueError("fine grid size must be divisible by the factor")
    n_coarse = fine.grid.n_cells // factor
    vols = fine.grid.cell_volumes.reshape(n_coarse, factor)
    vals = fine.values.reshape(n_coarse, factor)
    coarse_vols = vols.sum(axis=1)
    coarse_vals = (vals * vols).sum(axis=1) / coarse_vols
    grid = UniformGrid1D(n_coarse, fine.grid.length, fine.grid.boundary,
                         cell_volumes=coarse_vols)
    return FvField1D(grid, coarse_vals)


def coarse_grain_2d(fine: FvField2D, factor: int) -> FvField2D:
    """2D block averaging; uniform cells, so plain means preserve mass."""
    g = fine.grid
    if factor < 1 or g.nx % factor != 0 or g.ny % factor != 0:
        raise ValueError("grid sizes must be divisible by the factor")
    nx, ny = g.nx // factor, g.ny // factor
    vals = fine.values.reshape(nx, factor, ny, factor).mean(axis=(1, 3))
    return FvField2D(UniformGrid2D(nx, ny, g.lx, g.ly), vals)
