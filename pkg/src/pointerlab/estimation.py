"""Direction guessing, fidelity functionals, and weakness sweeps.

The guess interprets the two pointer readouts as one planar pointer and
takes its direction: theta_g = atan2(x, z), guessing the pure state at
polar angle theta_g.  For the 45-degree geometry the readout is first
mapped back to orthogonal displacement coordinates (diag_to_orth) and the
same rule applied.
"""

from dataclasses import dataclass

import numpy as np

from . import continuous, trotter
from .continuous import Geometry, MeasurementConfig, QubitState
from .quadrature import QuadratureError, QuadSpec, integrate_periodic, integrate_plane

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Guess:
    theta_g: float

    @property
    def sigma_z_g(self):
        return np.cos(self.theta_g)

    @property
    def sigma_x_g(self):
        return np.sin(self.theta_g)


@dataclass(frozen=True)
class FidelityCurve:
    model: Geometry
    theta_i: float
    weakness: tuple
    f_avg: tuple

    def __post_init__(self):
        w = np.asarray(self.weakness)
        if w.size and not np.all(np.diff(w) > 0):
            raise ValueError("weakness samples must be strictly increasing")


def guess_from_point(z, x):
    """Direction guess from one pointer readout.

    The exact origin is a measure-zero event; it falls back to theta_g = 0
    (atan2(0, 0) = 0).
    """
    return Guess(theta_g=float(np.arctan2(x, z)) % TWO_PI)


def diag_to_orth(z, x):
    """Map oblique-frame readout to orthogonal displacement coordinates.

    Solves r = u * e_z + v * (e_z + e_x)/sqrt(2) for (u, v), the
    components along the z-displacement axis and the diagonal
    x-displacement axis.
    """
    return z - x, np.sqrt(2.0) * x


def pointwise_fidelity(theta_i, theta_g):
    """Squared overlap between planar pure states at the two polar angles."""
    c = np.cos((theta_i - theta_g) / 2.0)
    return c * c


def _guess_angles(Z, X, geometry):
    if geometry is Geometry.DIAGONAL45:
        U, V = diag_to_orth(Z, X)
        return np.arctan2(V, U)
    return np.arctan2(X, Z)


def _density_fn(psi, cfg, density_abs_tol):
    if cfg.geometry is Geometry.CONTINUOUS:
        return lambda Z, X: continuous.prob_density(
            Z, X, psi, cfg, abs_tol=density_abs_tol)
    grid = trotter.evolve(psi, cfg)
    return lambda Z, X: trotter.density_at(grid, Z, X)


def density_normalization(psi, cfg, abs_tol=1e-7):
    """Integral of the outcome density over the standard window."""
    density = _density_fn(psi, cfg, density_abs_tol=min(1e-9, abs_tol))
    W = cfg.window_halfwidth()
    spec = QuadSpec(abs_tol=abs_tol, rel_tol=abs_tol, max_refinements=8,
                    initial_panels=continuous._panels_for(cfg))
    res = integrate_plane(density, (-W, W, -W, W), spec)
    if not res.converged:
        raise QuadratureError("normalization integral did not converge", res)
    return res.value


def avg_fidelity(psi, cfg, abs_tol=1e-4, oblique_guess=True):
    """Average guessing fidelity: density-weighted pointwise fidelity.

    Cartesian quadrature over the standard truncated window.  For the
    45-degree geometry the guess is taken on diag_to_orth coordinates
    unless oblique_guess is False (raw-coordinate guessing, exposed for
    comparison).
    """
    # the plane integral dilutes pointwise density error by the window area,
    # so the inner angle quadrature can run two orders looser than abs_tol
    density = _density_fn(psi, cfg, density_abs_tol=max(1e-9, 0.01 * abs_tol))
    guess_geometry = cfg.geometry if oblique_guess else Geometry.CONTINUOUS

    W = cfg.window_halfwidth()

    def integrand(Z, X):
        # the density support is a disk of radius W up to the same Gaussian
        # tail already discarded by the window truncation; skip the corners
        inside = Z * Z + X * X <= W * W
        out = np.zeros(Z.shape)
        Zi, Xi = Z[inside], X[inside]
        tg = _guess_angles(Zi, Xi, guess_geometry)
        c = np.cos((psi.theta - tg) / 2.0)
        out[inside] = density(Zi, Xi) * c * c
        return out
    spec = QuadSpec(abs_tol=abs_tol, rel_tol=abs_tol, max_refinements=6,
                    initial_panels=continuous._panels_for(cfg))
    res = integrate_plane(integrand, (-W, W, -W, W), spec)
    if not res.converged:
        raise QuadratureError("avg_fidelity quadrature did not converge", res)
    return res.value


def avg_fidelity_polar(psi, cfg, abs_tol=1e-4, n_radial=512):
    """Polar-form cross-check of avg_fidelity for the continuous model.

    Outer periodic integral over the guess angle of the radial mass times
    the pointwise fidelity.  Kept as an independent route against the
    Cartesian path.
    """
    if cfg.geometry is not Geometry.CONTINUOUS:
        raise ValueError("polar cross-check applies to the continuous model")
    R = cfg.window_halfwidth()
    # Gauss-Legendre nodes on [0, R] for the radial integral
    t, wts = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * R * (t + 1.0)
    wr = 0.5 * R * wts

    def outer(theta_g):
        Z = r[None, :] * np.cos(theta_g)[:, None]
        X = r[None, :] * np.sin(theta_g)[:, None]
        P = continuous.prob_density(Z, X, psi, cfg)
        radial = np.sum(P * (r * wr)[None, :], axis=1)
        c = np.cos((psi.theta - theta_g) / 2.0)
        return radial * c * c

    res = integrate_periodic(outer, QuadSpec(abs_tol=abs_tol, rel_tol=abs_tol,
                                             max_refinements=6), m0=64)
    if not res.converged:
        raise QuadratureError("polar fidelity quadrature did not converge", res)
    return res.value


def fidelity_curve(psi, cfg_base, weakness_grid, abs_tol=1e-4,
                   oblique_guess=True):
    """Evaluate avg_fidelity over a strictly increasing weakness grid."""
    weakness_grid = [float(w) for w in weakness_grid]
    if any(w <= 0 for w in weakness_grid):
        raise ValueError("weakness values must be positive")
    if any(b <= a for a, b in zip(weakness_grid, weakness_grid[1:])):
        raise ValueError("weakness grid must be strictly increasing")
    values = []
    for w in weakness_grid:
        cfg = MeasurementConfig(
            spread=w * cfg_base.coupling, coupling=cfg_base.coupling,
            geometry=cfg_base.geometry, trotter_depth=cfg_base.trotter_depth)
        try:
            values.append(avg_fidelity(psi, cfg, abs_tol=abs_tol,
                                       oblique_guess=oblique_guess))
        except QuadratureError as exc:
            raise QuadratureError(
                f"fidelity sweep failed at weakness {w}", exc.result) from exc
    return FidelityCurve(model=cfg_base.geometry, theta_i=psi.theta,
                         weakness=tuple(weakness_grid), f_avg=tuple(values))


def default_weakness_grid(lo=0.02, hi=3.0, count=40):
    """Log-spaced sweep resolving both the strong plateau and second wind."""
    return list(np.geomspace(lo, hi, count))
