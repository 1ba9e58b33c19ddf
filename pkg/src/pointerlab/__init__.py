"""Simultaneous weak von Neumann measurement of sigma_z and sigma_x.

Continuous Gaussian-pointer model (closed-form Dawson integrals plus a
momentum-space oracle), Trotterized beam-displacer approximations at 90
and 45 degrees, and direction-guess fidelity analysis including the
second-wind non-monotonicity.
"""

from ._kernels import USING_NUMBA
from .continuous import (
    Geometry,
    MeasurementConfig,
    QubitState,
    STATE_A,
    STATE_D,
    STATE_H,
    STATE_V,
    UnnormalizedQubit,
    i_integrals,
    momentum_oracle_state,
    post_state,
    prob_density,
)
from .estimation import (
    FidelityCurve,
    Guess,
    avg_fidelity,
    avg_fidelity_polar,
    default_weakness_grid,
    density_normalization,
    diag_to_orth,
    fidelity_curve,
    guess_from_point,
    pointwise_fidelity,
)
from .quadrature import QuadratureError, QuadResult, QuadSpec
from .specfun import dawson, gaussian_amp
from .trotter import (
    BeamGrid,
    density_at,
    evolve,
    step_x_diagonal,
    step_x_orthogonal,
    step_z,
)

__version__ = "0.1.0"
