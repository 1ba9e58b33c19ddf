"""Exact continuous-coupling measurement model.

Outcome densities and post-measurement states for the simultaneous weak
measurement of sigma_z and sigma_x with two Gaussian pointers, via the
closed-form angle integrals (I1, I2, I3) of Dawson functions, plus a
brute-force momentum-space oracle that evaluates the same state without
the Dawson shortcut.

Sign convention (used consistently by every model in this package):
a sigma-eigenvalue of +1 displaces its pointer toward the positive axis,
so |0> accumulates probability at z > 0 and |+> at x > 0.  This is the
convention under which the direction guess attains the 3/4 strong-coupling
optimum.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .quadrature import QuadratureError, QuadResult, QuadSpec, integrate_plane

TWO_PI = 2.0 * np.pi


class Geometry(enum.Enum):
    CONTINUOUS = "continuous"
    ORTHOGONAL90 = "orthogonal90"
    DIAGONAL45 = "diagonal45"


@dataclass(frozen=True)
class QubitState:
    """Pure qubit state in the x-z plane: cos(theta/2)|0> + sin(theta/2)|1>."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @property
    def alpha(self):
        return np.cos(self.theta / 2.0)

    @property
    def beta(self):
        return np.sin(self.theta / 2.0)

    @property
    def exp_z(self):
        return np.cos(self.theta)

    @property
    def exp_x(self):
        return np.sin(self.theta)


# Named preparations matching the polarization labels H/V/D/A.
STATE_H = QubitState(0.0)
STATE_V = QubitState(np.pi)
STATE_D = QubitState(np.pi / 2.0)
STATE_A = QubitState(3.0 * np.pi / 2.0)


@dataclass(frozen=True)
class MeasurementConfig:
    """Pointer spread, total coupling, and the coupling geometry.

    All results depend only on the weakness ratio spread/coupling; the
    default coupling of 1 makes spread the weakness directly.
    """

    spread: float
    coupling: float = 1.0
    geometry: Geometry = Geometry.CONTINUOUS
    trotter_depth: int = 1

    def __post_init__(self):
        if self.spread <= 0:
            raise ValueError(f"spread must be positive, got {self.spread}")
        if self.coupling <= 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")
        if self.trotter_depth < 1:
            raise ValueError(
                f"trotter_depth must be >= 1, got {self.trotter_depth}")

    @classmethod
    def from_weakness(cls, weakness, geometry=Geometry.CONTINUOUS,
                      trotter_depth=1):
        return cls(spread=weakness, coupling=1.0, geometry=geometry,
                   trotter_depth=trotter_depth)

    @property
    def weakness(self):
        return self.spread / self.coupling

    @property
    def step_displacement(self):
        """Per-branch center displacement of one Trotter step.

        The operator coupling per step is coupling/n; the physical crystal
        displacement between the two polarization branches is twice that.
        """
        return self.coupling / self.trotter_depth

    def window_halfwidth(self, margin=8.0):
        """Half-width of the standard truncation window for plane integrals.

        Sized to hold every displaced Gaussian center plus a tail margin;
        the 45-degree geometry pushes centers out to (1 + 1/sqrt(2)) times
        the coupling along z.
        """
        extent = 1.0 + 2.0 ** -0.5 if self.geometry is Geometry.DIAGONAL45 else 1.0
        return extent * self.coupling + margin * self.spread


@dataclass(frozen=True)
class UnnormalizedQubit:
    """Real-amplitude qubit state whose squared norm is an outcome density."""

    c0: float
    c1: float

    @property
    def norm_sq(self):
        return self.c0 * self.c0 + self.c1 * self.c1


def _require_continuous(cfg):
    if cfg.geometry is not Geometry.CONTINUOUS:
        raise ValueError(f"operation requires Continuous geometry, "
                         f"got {cfg.geometry}")


def _check_converged(err, abs_tol, what):
    worst = float(np.max(err))
    if not np.isfinite(worst) or worst > 10.0 * abs_tol:
        raise QuadratureError(
            f"{what}: angle quadrature did not converge",
            QuadResult(np.nan, worst, False, 0))


def i_integrals(z, x, cfg, abs_tol=1e-9, rel_tol=1e-8):
    """The three closed-form angle integrals (I1, I2, I3) at one point."""
    _require_continuous(cfg)
    I1, I2, I3, err = _kernels.i_integrals_batch(
        z, x, cfg.spread, cfg.coupling, abs_tol, rel_tol)
    _check_converged(err, abs_tol, "i_integrals")
    return float(I1[0]), float(I2[0]), float(I3[0])


def post_state(z, x, psi, cfg, abs_tol=1e-9):
    """Unnormalized post-measurement state conditioned on outcome (z, x)."""
    I1, I2, I3 = i_integrals(z, x, cfg, abs_tol=abs_tol)
    a, b = psi.alpha, psi.beta
    return UnnormalizedQubit(c0=(I1 + I2) * a + I3 * b,
                             c1=I3 * a + (I1 - I2) * b)


def prob_density(z, x, psi, cfg, abs_tol=1e-9):
    """Outcome density P(z, x | psi); accepts scalars or arrays."""
    _require_continuous(cfg)
    scalar = np.isscalar(z) and np.isscalar(x)
    I1, I2, I3, err = _kernels.i_integrals_batch(
        z, x, cfg.spread, cfg.coupling, abs_tol)
    _check_converged(err, abs_tol, "prob_density")
    P = (I1 * I1 + I2 * I2 + I3 * I3
         + 2.0 * I1 * I2 * psi.exp_z + 2.0 * I1 * I3 * psi.exp_x)
    return float(P[0]) if scalar else P


def _panels_for(cfg, order=12):
    """Initial panel count sized so one GL panel spans a few pointer widths."""
    W = cfg.window_halfwidth()
    return int(max(4, min(256, np.ceil(2.0 * W / (5.0 * cfg.spread)))))


def momentum_oracle_amplitudes(z, x, psi, cfg, rel_tol=1e-8,
                               max_refinements=8):
    """Post-measurement amplitudes from the raw 2D momentum integral.

    Brute-force oracle: integrates the momentum-space form directly
    (complex integrand, no Dawson evaluation, no shared code with the
    closed-form path).  Returns complex (c0, c1).
    """
    _require_continuous(cfg)
    spread, coupling = cfg.spread, cfg.coupling
    a, b = psi.alpha, psi.beta
    # e^{-Delta^2 p^2} tail below 1e-24 beyond the cutoff
    W = 7.5 / spread

    def level_value(n_per_axis):
        p = np.linspace(-W, W, n_per_axis)
        h = p[1] - p[0]
        PZ, PX = np.meshgrid(p, p, indexing="ij")
        pr = np.hypot(PZ, PX)
        gt = (2.0 * spread * spread / np.pi) ** 0.25 * np.exp(
            -spread * spread * p * p)
        amp2d = np.outer(gt, gt)
        phase = np.exp(1j * (z * PZ + x * PX))
        cosd = np.cos(coupling * pr)
        sincd = coupling * np.sinc(coupling * pr / np.pi)
        common = amp2d * phase / TWO_PI
        c0 = np.sum(common * (cosd * a - 1j * sincd * (PZ * a + PX * b)))
        c1 = np.sum(common * (cosd * b - 1j * sincd * (PX * a - PZ * b)))
        return c0 * h * h, c1 * h * h

    # integrand vanishes at the boundary to machine precision, so the
    # uniform rule needs no endpoint correction
    n = 129
    prev = level_value(n)
    for _ in range(max_refinements):
        n = 2 * n - 1
        c0, c1 = level_value(n)
        scale = max(abs(c0), abs(c1), 1e-300)
        if (abs(c0 - prev[0]) <= rel_tol * scale
                and abs(c1 - prev[1]) <= rel_tol * scale):
            return c0, c1
        prev = (c0, c1)
    raise QuadratureError(
        "momentum oracle did not converge",
        QuadResult(abs(prev[0]), np.nan, False, n * n))


def momentum_oracle_state(z, x, psi, cfg, rel_tol=1e-8, imag_tol=1e-9):
    """Real post-measurement state from the momentum-space oracle."""
    c0, c1 = momentum_oracle_amplitudes(z, x, psi, cfg, rel_tol=rel_tol)
    scale = max(abs(c0), abs(c1), 1e-300)
    if max(abs(c0.imag), abs(c1.imag)) > imag_tol * max(1.0, scale):
        raise QuadratureError(
            "momentum oracle produced non-real amplitudes",
            QuadResult(abs(c0), max(abs(c0.imag), abs(c1.imag)), False, 0))
    return UnnormalizedQubit(c0=c0.real, c1=c1.real)
