"""Periodic grids and normalized complex wave fields.

The box is [-L/2, L/2)^dim with n points per dimension (n a power of two),
coordinates at cell centers x_j = -L/2 + j L/n, and plane waves
exp(i k·x) with k = 2π m / L as the exact spectral modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PeriodicGrid", "WaveField", "field_distance"]

NORM_TOL = 1e-9


@dataclass(frozen=True)
class PeriodicGrid:
    dim: int
    points_per_dim: int
    box_length: float

    def __post_init__(self):
        n = self.points_per_dim
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2, or 3")
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError("points_per_dim must be a power of two >= 8")
        if not (self.box_length > 0):
            raise ValueError("box_length must be positive")

    @property
    def spacing(self) -> float:
        return self.box_length / self.points_per_dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple:
        return (self.points_per_dim,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_dim**self.dim

    def axis(self) -> np.ndarray:
        """Cell-center coordinates along one axis, starting at -L/2."""
        return -0.5 * self.box_length + self.spacing * np.arange(self.points_per_dim)

    def meshes(self) -> list:
        """Coordinate meshes, one per dimension, each of shape `self.shape`."""
        ax = self.axis()
        return list(np.meshgrid(*([ax] * self.dim), indexing="ij"))

    def k_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_dim, d=self.spacing)

    def k_squared(self) -> np.ndarray:
        """|k|² mesh matching FFT layout."""
        k = self.k_axis()
        if self.dim == 1:
            return k**2
        mesh = np.meshgrid(*([k] * self.dim), indexing="ij")
        return sum(m**2 for m in mesh)

    def min_image_radius(self) -> np.ndarray:
        """|x| of each grid displacement under the minimum-image convention.

        Index j corresponds to the displacement j·h wrapped into [-L/2, L/2).
        """
        d = self.spacing * np.arange(self.points_per_dim)
        d = (d + 0.5 * self.box_length) % self.box_length - 0.5 * self.box_length
        if self.dim == 1:
            return np.abs(d)
        mesh = np.meshgrid(*([d] * self.dim), indexing="ij")
        return np.sqrt(sum(m**2 for m in mesh))

    def radius(self) -> np.ndarray:
        """|x| at the grid points (coordinates centered at the origin)."""
        if self.dim == 1:
            return np.abs(self.axis())
        return np.sqrt(sum(m**2 for m in self.meshes()))

    def integrate(self, values) -> complex:
        """Quadrature sum with the cell-volume weight."""
        return values.sum() * self.cell_volume

    def norm(self, values) -> float:
        """Discrete L² norm with the cell-volume weight."""
        return float(np.sqrt((np.abs(values) ** 2).sum() * self.cell_volume))


@dataclass(frozen=True)
class WaveField:
    """Complex field on a periodic grid, L²-normalized to 1.

    Construct with `WaveField.normalized` for arbitrary samples; the direct
    constructor asserts the norm instead of silently renormalizing (evolution
    steps are norm-preserving by construction and must not hide drift).
    """

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", v)
        nrm = self.grid.norm(v)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"field norm {nrm!r} deviates from 1 beyond {NORM_TOL}")

    @classmethod
    def normalized(cls, grid: PeriodicGrid, values) -> "WaveField":
        v = np.asarray(values, dtype=complex)
        nrm = grid.norm(v)
        if nrm == 0.0 or not np.isfinite(nrm):
            raise ValueError("cannot normalize a zero or non-finite field")
        return cls(grid=grid, values=v / nrm)

    @classmethod
    def constant(cls, grid: PeriodicGrid) -> "WaveField":
        """The uniform field vol^(-1/2), the trap-free minimizer on the torus."""
        vol = grid.box_length**grid.dim
        return cls(grid=grid, values=np.full(grid.shape, vol**-0.5, dtype=complex))

    @classmethod
    def plane_wave(cls, grid: PeriodicGrid, freq) -> "WaveField":
        """exp(i k·x)/√vol for integer frequency vector m, k = 2π m / L."""
        freq = np.atleast_1d(np.asarray(freq, dtype=int))
        if freq.size != grid.dim:
            raise ValueError("frequency vector size must match grid dim")
        vol = grid.box_length**grid.dim
        phase = sum(
            2.0 * np.pi * freq[d] / grid.box_length * mesh for d, mesh in enumerate(grid.meshes())
        )
        return cls(grid=grid, values=np.exp(1j * phase) / np.sqrt(vol))

    def norm(self) -> float:
        return self.grid.norm(self.values)

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def sobolev_norm(self, order: int = 1) -> float:
        """H^n norm via (1 + |k|²)^n weights; monitored, never asserted."""
        fhat = np.fft.fftn(self.values)
        w = (1.0 + self.grid.k_squared()) ** order
        return float(
            np.sqrt((w * np.abs(fhat) ** 2).sum() * self.grid.cell_volume / self.grid.size)
        )


def field_distance(phi: WaveField, psi: WaveField) -> float:
    """Discrete L² norm of the difference of two fields on the same grid."""
    if phi.grid != psi.grid:
        raise ValueError("fields live on different grids")
    return phi.grid.norm(phi.values - psi.values)
