"""Shared numerical integration: periodic 1D rules and tensor-grid 2D rules.

Both integrators report an error estimate and a convergence flag instead of
raising; callers that need a hard guarantee wrap the result and raise
QuadratureError themselves.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-8
    max_refinements: int = 10
    initial_panels: int = 4

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    converged: bool
    n_evals: int


class QuadratureError(RuntimeError):
    """Refinement budget exhausted; carries the best value and error."""

    def __init__(self, message, result):
        super().__init__(f"{message} (value={result.value!r}, "
                         f"err_est={result.err_est!r})")
        self.result = result


def _within(value, err, spec):
    return err <= max(spec.abs_tol, spec.rel_tol * abs(value))


def integrate_periodic(f, spec=QuadSpec(), m0=16):
    """Integrate a smooth 2*pi-periodic function over [0, 2*pi].

    Uniform trapezoid nodes with doubling; spectral accuracy for smooth
    periodic integrands.  f must accept an ndarray of angles.
    """
    m = m0
    total = float(np.sum(f(2.0 * np.pi * np.arange(m) / m)))
    value = 2.0 * np.pi * total / m
    err = np.inf
    n_evals = m
    for _ in range(spec.max_refinements):
        new = float(np.sum(f(2.0 * np.pi * (np.arange(m) + 0.5) / m)))
        total += new
        n_evals += m
        m *= 2
        next_value = 2.0 * np.pi * total / m
        err = abs(next_value - value)
        value = next_value
        if _within(value, err, spec):
            return QuadResult(value, err, True, n_evals)
    return QuadResult(value, err, False, n_evals)


def _panel_nodes(lo, hi, panels, nodes, weights):
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * nodes).ravel()
    ws = (half[:, None] * weights).ravel()
    return xs, ws


def integrate_plane(f, window, spec=QuadSpec(), order=12):
    """Integrate f(z, x) over a rectangle with a composite tensor GL rule.

    window is (z_min, z_max, x_min, x_max).  f must accept flat coordinate
    arrays and return values of the same shape.  Panel counts double until
    two consecutive levels agree within tolerance.
    """
    z_min, z_max, x_min, x_max = window
    nodes, weights = leggauss(order)
    panels = spec.initial_panels
    value = None
    err = np.inf
    n_evals = 0
    for _ in range(spec.max_refinements + 1):
        zs, wz = _panel_nodes(z_min, z_max, panels, nodes, weights)
        xs, wx = _panel_nodes(x_min, x_max, panels, nodes, weights)
        Z = np.repeat(zs, xs.size)
        X = np.tile(xs, zs.size)
        vals = np.asarray(f(Z, X), dtype=np.float64).reshape(zs.size, xs.size)
        n_evals += vals.size
        next_value = float(wz @ vals @ wx)
        if value is not None:
            err = abs(next_value - value)
            value = next_value
            if _within(value, err, spec):
                return QuadResult(value, err, True, n_evals)
        else:
            value = next_value
        panels *= 2
    return QuadResult(value, err, False, n_evals)
