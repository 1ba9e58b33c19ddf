import numpy as np
import pytest

from pointerlab import trotter
from pointerlab.continuous import (
    Geometry,
    MeasurementConfig,
    QubitState,
    STATE_D,
    STATE_H,
    STATE_V,
)
from pointerlab.specfun import gaussian_amp
from pointerlab.trotter import (
    BeamGrid,
    density_at,
    evolve,
    step_x_diagonal,
    step_x_orthogonal,
    step_z,
)


def test_initial_grid():
    psi = QubitState(0.8)
    g = BeamGrid.initial(psi, 0.2)
    assert set(g.sites) == {(0, 0)}
    assert g.sites[(0, 0)] == pytest.approx([psi.alpha, psi.beta])
    assert g.norm_sq() == pytest.approx(1.0, abs=1e-15)


def test_initial_rejects_bad_spread():
    with pytest.raises(ValueError):
        BeamGrid.initial(STATE_H, 0.0)


def test_z_step_translates_eigenstates():
    # |0> moves one lattice unit toward +z, |1> toward -z, no splitting
    gh = step_z(BeamGrid.initial(STATE_H, 0.2), 0.5)
    assert set(gh.sites) == {(1, 0)}
    assert gh.sites[(1, 0)] == pytest.approx([1.0, 0.0])
    assert gh.vec_z == (0.5, 0.0)

    gv = step_z(BeamGrid.initial(STATE_V, 0.2), 0.5)
    assert set(gv.sites) == {(-1, 0)}
    assert gv.sites[(-1, 0)] == pytest.approx([0.0, 1.0])


def test_x_step_translates_diagonal_eigenstate():
    gd = step_x_orthogonal(BeamGrid.initial(STATE_D, 0.2), 0.5)
    assert set(gd.sites) == {(0, 1)}
    assert gd.sites[(0, 1)] == pytest.approx([2**-0.5, 2**-0.5])


def test_one_round_from_h():
    cfg = MeasurementConfig.from_weakness(0.2, Geometry.ORTHOGONAL90, 1)
    g = evolve(STATE_H, cfg)
    assert set(g.sites) == {(1, 1), (1, -1)}
    assert g.sites[(1, 1)] == pytest.approx([0.5, 0.5])
    assert g.sites[(1, -1)] == pytest.approx([0.5, -0.5])
    assert g.vec_z == (1.0, 0.0)
    assert g.vec_x == (0.0, 1.0)


@pytest.mark.parametrize("geometry",
                         [Geometry.ORTHOGONAL90, Geometry.DIAGONAL45])
@pytest.mark.parametrize("theta", [0.0, 0.7, np.pi / 2, 4.1])
def test_every_step_preserves_norm(geometry, theta):
    cfg = MeasurementConfig.from_weakness(0.15, geometry, 6)
    g = BeamGrid.initial(QubitState(theta), cfg.spread)
    d = cfg.step_displacement
    for _ in range(cfg.trotter_depth):
        g = step_z(g, d)
        assert g.norm_sq() == pytest.approx(1.0, abs=1e-12)
        if geometry is Geometry.ORTHOGONAL90:
            g = step_x_orthogonal(g, d)
        else:
            g = step_x_diagonal(g, d)
        assert g.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_diagonal_at_right_angle_matches_orthogonal():
    psi = QubitState(1.3)
    d = 1.0 / 3.0
    ga = BeamGrid.initial(psi, 0.15)
    gb = BeamGrid.initial(psi, 0.15)
    for _ in range(3):
        ga = step_x_orthogonal(step_z(ga, d), d)
        gb = step_x_diagonal(step_z(gb, d), d, angle=np.pi / 2)
    rng = np.random.default_rng(3)
    z = rng.uniform(-1.6, 1.6, 50)
    x = rng.uniform(-1.6, 1.6, 50)
    np.testing.assert_allclose(density_at(ga, z, x), density_at(gb, z, x),
                               rtol=0, atol=1e-14)


@pytest.mark.parametrize("geometry",
                         [Geometry.ORTHOGONAL90, Geometry.DIAGONAL45])
def test_site_count_bound(geometry):
    for n in (1, 3, 6, 10):
        cfg = MeasurementConfig.from_weakness(0.15, geometry, n)
        g = evolve(QubitState(0.9), cfg)
        assert len(g.sites) <= (n + 1) ** 2


def test_lattice_vector_conflict_raises():
    g = step_z(BeamGrid.initial(STATE_D, 0.2), 0.5)
    with pytest.raises(ValueError):
        step_z(g, 0.25)


def test_step_rejects_nonpositive_displacement():
    g = BeamGrid.initial(STATE_D, 0.2)
    for bad in (0.0, -0.5):
        with pytest.raises(ValueError):
            step_z(g, bad)
        with pytest.raises(ValueError):
            step_x_orthogonal(g, bad)
        with pytest.raises(ValueError):
            step_x_diagonal(g, bad)


def test_evolve_rejects_continuous_geometry():
    with pytest.raises(ValueError):
        evolve(STATE_H, MeasurementConfig.from_weakness(0.3))


def test_density_at_rejects_empty_grid():
    with pytest.raises(ValueError):
        density_at(BeamGrid(spread=0.2), 0.0, 0.0)


def test_density_against_hand_formula():
    # one round from |0>: branches at (1, +-d) with polarization amplitudes
    # (1/2, 1/2) and (1/2, -1/2); sum each component coherently, then square
    spread, d = 0.2, 1.0
    cfg = MeasurementConfig(spread=spread, geometry=Geometry.ORTHOGONAL90)
    g = evolve(STATE_H, cfg)

    def expected(z, x):
        gp = gaussian_amp(z - 1.0, spread) * gaussian_amp(x - d, spread)
        gm = gaussian_amp(z - 1.0, spread) * gaussian_amp(x + d, spread)
        return (0.5 * gp + 0.5 * gm) ** 2 + (0.5 * gp - 0.5 * gm) ** 2

    for z, x in [(1.0, 1.0), (1.0, 0.0), (0.4, -0.9), (1.3, 0.5)]:
        assert density_at(g, z, x) == pytest.approx(expected(z, x), rel=1e-13)


def test_coherent_interference_differs_from_incoherent():
    # two same-polarization branches with opposite signs cancel exactly at
    # the midpoint; an incoherent sum of the branch densities would not
    spread = 0.6
    g = BeamGrid(spread=spread,
                 sites={(0, 1): np.array([2**-0.5, 0.0]),
                        (0, -1): np.array([-(2**-0.5), 0.0])},
                 vec_z=(1.0, 0.0), vec_x=(0.0, 1.0))
    mid = density_at(g, 0.0, 0.0)
    branch = 0.5 * (gaussian_amp(0.0, spread) * gaussian_amp(1.0, spread)) ** 2
    assert mid == pytest.approx(0.0, abs=1e-15)
    assert 2 * branch > 1e-2


def test_mirror_symmetry():
    cfg = MeasurementConfig.from_weakness(0.15, Geometry.ORTHOGONAL90, 4)
    ga = evolve(QubitState(0.8), cfg)
    gb = evolve(QubitState(-0.8), cfg)
    rng = np.random.default_rng(5)
    z = rng.uniform(-1.7, 1.7, 40)
    x = rng.uniform(-1.7, 1.7, 40)
    np.testing.assert_allclose(density_at(ga, z, x), density_at(gb, z, -x),
                               rtol=1e-12, atol=1e-15)


def test_norm_sq_matches_overlap_formula():
    # two displaced branches with amplitudes a and b:
    # |a|^2 + |b|^2 + 2 a b exp(-|r1 - r2|^2 / 8 spread^2)
    spread = 0.3
    g = BeamGrid(spread=spread,
                 sites={(1, 0): np.array([0.6, 0.0]),
                        (-1, 0): np.array([0.7, 0.0])},
                 vec_z=(0.4, 0.0), vec_x=(0.0, 0.4))
    expected = 0.36 + 0.49 + 2 * 0.6 * 0.7 * np.exp(-0.64 / (8 * spread**2))
    assert g.norm_sq() == pytest.approx(expected, rel=1e-13)


def test_density_mass_matches_norm():
    cfg = MeasurementConfig.from_weakness(0.15, Geometry.DIAGONAL45, 5)
    g = evolve(QubitState(2.1), cfg)
    W = cfg.window_halfwidth()
    n = 400
    c = -W + (np.arange(n) + 0.5) * (2 * W / n)
    Z, X = np.meshgrid(c, c, indexing="ij")
    mass = float(np.sum(density_at(g, Z.ravel(), X.ravel()))) * (2 * W / n) ** 2
    assert mass == pytest.approx(g.norm_sq(), abs=1e-4)


def test_density_scalar_and_batch_agree():
    cfg = MeasurementConfig.from_weakness(0.2, Geometry.ORTHOGONAL90, 3)
    g = evolve(QubitState(1.0), cfg)
    zs = np.array([0.3, -0.2, 1.1])
    xs = np.array([0.5, 0.1, -0.7])
    batch = density_at(g, zs, xs)
    for k in range(3):
        assert batch[k] == pytest.approx(
            density_at(g, float(zs[k]), float(xs[k])), rel=1e-14)
