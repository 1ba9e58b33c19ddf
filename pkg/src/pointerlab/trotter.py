"""Trotterized measurement evolution as a coherent grid of displaced Gaussians.

Each site carries a two-component polarization amplitude (aH, aV); steps
split sites in the relevant eigenbasis and translate the branches.  The
displacement convention matches the continuous model: eigenvalue +1 moves
toward the positive axis.  Centers are tracked on an exact integer lattice
(step counts along the two displacement vectors), so coinciding centers
merge without floating-point comparisons.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .continuous import Geometry

_PRUNE = 1e-15


@dataclass
class BeamGrid:
    """Coherent superposition of equal-spread Gaussians at lattice centers.

    sites maps (i, j) -> [aH, aV], with center = i * vec_z + j * vec_x.
    The step vectors are fixed by the first step of each kind; subsequent
    steps must reuse the same displacement.
    """

    spread: float
    sites: dict = field(default_factory=dict)
    vec_z: tuple | None = None
    vec_x: tuple | None = None

    @classmethod
    def initial(cls, psi, spread):
        if spread <= 0:
            raise ValueError(f"spread must be positive, got {spread}")
        return cls(spread=spread,
                   sites={(0, 0): np.array([psi.alpha, psi.beta])})

    def centers(self):
        """(m, 2) array of site centers and (m, 2) array of amplitudes."""
        vz = np.asarray(self.vec_z if self.vec_z is not None else (0.0, 0.0))
        vx = np.asarray(self.vec_x if self.vec_x is not None else (0.0, 0.0))
        idx = np.array(list(self.sites.keys()), dtype=np.float64).reshape(-1, 2)
        amps = np.array(list(self.sites.values())).reshape(-1, 2)
        return idx[:, :1] * vz + idx[:, 1:] * vx, amps

    def norm_sq(self):
        """Overlap-weighted squared norm of the coherent superposition."""
        centers, amps = self.centers()
        d2 = np.sum((centers[:, None, :] - centers[None, :, :]) ** 2, axis=-1)
        overlap = np.exp(-d2 / (8.0 * self.spread ** 2))
        return float(np.einsum("sc,tc,st->", amps, amps, overlap))


def _merged(spread, vec_z, vec_x, contributions):
    sites = {}
    for key, amp in contributions:
        if key in sites:
            sites[key] = sites[key] + amp
        else:
            sites[key] = amp
    sites = {k: a for k, a in sites.items()
             if abs(a[0]) > _PRUNE or abs(a[1]) > _PRUNE}
    return BeamGrid(spread=spread, sites=sites, vec_z=vec_z, vec_x=vec_x)


def _step_vector(existing, wanted, label):
    if existing is None:
        return wanted
    if existing != wanted:
        raise ValueError(
            f"{label} step displacement {wanted} conflicts with the grid's "
            f"established lattice vector {existing}")
    return existing


def step_z(grid, d):
    """Split each site in the H/V basis and translate by +/- d along z."""
    if d <= 0:
        raise ValueError(f"displacement must be positive, got {d}")
    vec_z = _step_vector(grid.vec_z, (d, 0.0), "z")
    contributions = []
    for (i, j), amp in grid.sites.items():
        contributions.append(((i + 1, j), np.array([amp[0], 0.0])))
        contributions.append(((i - 1, j), np.array([0.0, amp[1]])))
    return _merged(grid.spread, vec_z, grid.vec_x, contributions)


def _split_x(grid, d, vec_x):
    contributions = []
    for (i, j), amp in grid.sites.items():
        plus = 0.5 * (amp[0] + amp[1])
        minus = 0.5 * (amp[0] - amp[1])
        contributions.append(((i, j + 1), np.array([plus, plus])))
        contributions.append(((i, j - 1), np.array([minus, -minus])))
    return _merged(grid.spread, grid.vec_z, vec_x, contributions)


def step_x_orthogonal(grid, d):
    """Split each site in the +/- basis and translate by +/- d along x."""
    if d <= 0:
        raise ValueError(f"displacement must be positive, got {d}")
    vec_x = _step_vector(grid.vec_x, (0.0, d), "x")
    return _split_x(grid, d, vec_x)


def step_x_diagonal(grid, d, angle=np.pi / 4.0):
    """As step_x_orthogonal, but displacing along (cos angle, sin angle)."""
    if d <= 0:
        raise ValueError(f"displacement must be positive, got {d}")
    vec_x = _step_vector(grid.vec_x,
                         (d * np.cos(angle), d * np.sin(angle)), "x")
    return _split_x(grid, d, vec_x)


def evolve(psi, cfg):
    """Apply trotter_depth rounds of (z step, x step) to the initial beam."""
    if cfg.geometry not in (Geometry.ORTHOGONAL90, Geometry.DIAGONAL45):
        raise ValueError(f"evolve requires a Trotter geometry, "
                         f"got {cfg.geometry}")
    grid = BeamGrid.initial(psi, cfg.spread)
    d = cfg.step_displacement
    for _ in range(cfg.trotter_depth):
        grid = step_z(grid, d)
        if cfg.geometry is Geometry.ORTHOGONAL90:
            grid = step_x_orthogonal(grid, d)
        else:
            grid = step_x_diagonal(grid, d)
    return grid


def density_at(grid, z, x):
    """Outcome density of the beam grid; accepts scalars or arrays.

    Amplitudes are summed coherently per polarization component before
    squaring.
    """
    if not grid.sites:
        raise ValueError("density_at requires a non-empty grid")
    centers, amps = grid.centers()
    scalar = np.isscalar(z) and np.isscalar(x)
    out = _kernels.coherent_density(
        z, x,
        np.ascontiguousarray(centers[:, 0]),
        np.ascontiguousarray(centers[:, 1]),
        np.ascontiguousarray(amps[:, 0]),
        np.ascontiguousarray(amps[:, 1]),
        grid.spread)
    return float(out[0]) if scalar else out
