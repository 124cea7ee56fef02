"""Increment models: analytic moments, samplers, scaling maps, grammar."""

import math

import numpy as np
import pytest

from hullwalk import geom2d
from hullwalk import walkgen as w
from hullwalk.errors import (
    NotFiniteSupportError,
    NotPSDError,
    ZeroDriftError,
    ZeroPerpVarianceError,
)

FINITE_VARIANCE_SPECS = ["lattice", "hex6", "pr", "pr:0.2,0", "gauss", "st-binary", "st-gauss"]


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def test_pearson_rayleigh_zero_drift_moments():
    # E[cos^2] = E[sin^2] = 1/2 and E[cos sin] = 0 over a uniform angle
    m = w.PearsonRayleigh().moments()
    assert m.mu == (0.0, 0.0)
    assert m.Sigma == ((0.5, 0.0), (0.0, 0.5))
    assert m.sigma2 == 1.0
    assert m.det_Sigma == 0.25
    assert m.sigma2_mu is None and m.rho_cross is None


def test_pearson_rayleigh_drift_moments():
    m = w.PearsonRayleigh((0.2, 0.0)).moments()
    assert m.sigma2_mu == 0.5
    assert 4.0 * m.sigma2_mu == 2.0
    assert m.sigma2_perp == 0.5
    assert m.rho_cross == 0.0


def test_spacetime_binary_moments():
    m = w.SpacetimeBinary().moments()
    assert m.mu == (1.0, 0.0)
    assert m.sigma2_mu == 0.0  # fluctuations orthogonal to the drift
    assert m.sigma2_perp == 1.0
    assert m.det_Sigma == 0.0


def test_lattice_and_hex_moments():
    m = w.LatticeSRW().moments()
    assert m.Sigma == ((0.5, 0.0), (0.0, 0.5)) and m.sigma2 == 1.0
    h = w.Hex6().moments()
    assert np.allclose(h.sigma_matrix(), [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]])
    assert math.isclose(h.det_Sigma, 1 / 3)


def test_gaussian_moments_decomposition():
    cov = ((2.0, 0.3), (0.3, 0.7))
    m = w.Gaussian(mean=(1.0, 2.0), cov=cov).moments()
    assert math.isclose(m.sigma2, m.sigma2_mu + m.sigma2_perp)
    mu_hat = np.array([1.0, 2.0]) / math.sqrt(5.0)
    assert math.isclose(m.sigma2_mu, mu_hat @ np.array(cov) @ mu_hat)


def test_pareto_moments():
    heavy = w.ParetoDirection(alpha=1.5).moments()
    assert not heavy.finite_variance
    assert heavy.Sigma is None and heavy.sigma2 is None
    light = w.ParetoDirection(alpha=3.0, drift=(0.1, 0.0)).moments()
    assert light.finite_variance
    assert math.isclose(light.sigma2, 3.0)  # E R^2 = alpha/(alpha-2) = 3
    with pytest.raises(ValueError):
        w.ParetoDirection(alpha=1.0)


@pytest.mark.parametrize("spec", FINITE_VARIANCE_SPECS)
def test_empirical_moments_match_analytic(spec):
    model = w.parse_model(spec)
    mom = model.moments()
    n = 10**6
    inc = model.sample_increments(n, w.RngStream(2024, hash(spec) % 1000).generator())
    se_mean = inc.std(axis=0, ddof=1) / math.sqrt(n)
    assert np.all(np.abs(inc.mean(axis=0) - mom.mu) <= 5 * se_mean + 1e-12)
    centered = inc - np.asarray(mom.mu)
    prods = np.stack([centered[:, 0] ** 2, centered[:, 0] * centered[:, 1], centered[:, 1] ** 2])
    sample = prods.mean(axis=1)
    se = prods.std(axis=1, ddof=1) / math.sqrt(n)
    S = mom.sigma_matrix()
    target = np.array([S[0, 0], S[0, 1], S[1, 1]])
    assert np.all(np.abs(sample - target) <= 5 * se + 1e-12)


# ---------------------------------------------------------------------------
# streams and paths
# ---------------------------------------------------------------------------


def test_stream_determinism_and_independence():
    a = w.sample_path(w.LatticeSRW(), 50, w.RngStream(7, 3)).positions
    b = w.sample_path(w.LatticeSRW(), 50, w.RngStream(7, 3)).positions
    c = w.sample_path(w.LatticeSRW(), 50, w.RngStream(7, 4)).positions
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_path_basics():
    assert w.sample_path(w.Hex6(), 0, w.RngStream(1)).positions.tolist() == [[0.0, 0.0]]
    path = w.sample_path(w.LatticeSRW(), 3, w.RngStream(5, 0)).positions
    steps = np.diff(path, axis=0)
    support = {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert all(tuple(s) in support for s in steps)
    assert np.allclose(np.hypot(steps[:, 0], steps[:, 1]), 1.0)
    with pytest.raises(ValueError):
        w.sample_path(w.LatticeSRW(), -1, w.RngStream(1))


def test_walkpath_must_start_at_origin():
    with pytest.raises(ValueError):
        w.WalkPath(np.array([[1.0, 0.0], [2.0, 0.0]]))


# ---------------------------------------------------------------------------
# Brownian and bridge paths
# ---------------------------------------------------------------------------


def test_brownian_path_zero_cov_and_single_step():
    p = w.brownian_path(np.zeros((2, 2)), 16, w.RngStream(1))
    assert np.all(p.positions == 0.0)
    q = w.brownian_path(np.eye(2), 1, w.RngStream(1))
    assert q.positions.shape == (2, 2)


def test_brownian_path_endpoint_second_moment():
    # E|S_N|^2 = trace(cov) = 2 by independence of the increments
    vals = []
    for i in range(600):
        p = w.brownian_path(np.eye(2), 64, w.RngStream(11, i))
        vals.append(float(p.positions[-1] @ p.positions[-1]))
    vals = np.asarray(vals)
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - 2.0) <= 3 * se


def test_brownian_path_rejects_non_psd():
    with pytest.raises(NotPSDError):
        w.brownian_path([[1.0, 0.0], [0.0, -1.0]], 8, w.RngStream(0))
    with pytest.raises(NotPSDError):
        w.brownian_path([[1.0, 0.5], [0.0, 1.0]], 8, w.RngStream(0))


def test_bridge_path_pinned_at_both_ends():
    p = w.bridge_path(256, w.RngStream(3, 1)).positions
    assert p[0].tolist() == [0.0, 0.0]
    assert p[-1].tolist() == [0.0, 0.0]
    tiny = w.bridge_path(1, w.RngStream(3)).positions
    assert np.all(tiny == 0.0)


def test_psd_sqrt_closed_form():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.standard_normal((2, 2))
        cov = a @ a.T
        root = w.psd_sqrt(cov)
        assert np.allclose(root @ root, cov, atol=1e-12)
        assert np.allclose(root, root.T)
    assert np.all(w.psd_sqrt(np.zeros((2, 2))) == 0.0)


def test_brownian_area_scaling_with_paired_seeds():
    # doubling the covariance doubles hull areas pathwise: A(sqrt(2) K) = 2 A(K)
    from hullwalk.hullstream import _functionals_from_vertices, hull_vertices

    ratios = []
    for i in range(40):
        p1 = w.brownian_path(np.eye(2), 4096, w.RngStream(21, i)).positions
        p2 = w.brownian_path(2.0 * np.eye(2), 4096, w.RngStream(21, i)).positions
        a1 = _functionals_from_vertices(hull_vertices(p1))[1]
        a2 = _functionals_from_vertices(hull_vertices(p2))[1]
        ratios.append(a2 / a1)
    assert abs(np.mean(ratios) - 2.0) <= 0.1


# ---------------------------------------------------------------------------
# psi scaling and centre of mass
# ---------------------------------------------------------------------------


def test_psi_scaling_values_and_convention():
    assert w.psi_scaling((4.0, 2.0), (1.0, 0.0), 1.0, 4).tolist() == [1.0, 1.0]
    assert w.psi_scaling((0.0, 0.0), (1.0, 0.0), 1.0, 4).tolist() == [0.0, 0.0]
    # mu_perp is mu_hat rotated a quarter turn counterclockwise: for mu = e_y,
    # mu_perp = (-1, 0), so (1, 0) lands on the negative second coordinate.
    out = w.psi_scaling((1.0, 0.0), (0.0, 1.0), 1.0, 4)
    assert out.tolist() == [0.0, -0.5]


def test_psi_scaling_is_affine():
    rng = np.random.default_rng(5)
    mu, s2, n = (0.3, -0.4), 0.7, 9
    for _ in range(25):
        p, q = rng.standard_normal(2), rng.standard_normal(2)
        lam = rng.random()
        mix = lam * p + (1 - lam) * q
        lhs = w.psi_scaling(mix, mu, s2, n)
        rhs = lam * w.psi_scaling(p, mu, s2, n) + (1 - lam) * w.psi_scaling(q, mu, s2, n)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_psi_scaling_errors():
    with pytest.raises(ZeroDriftError):
        w.psi_scaling((1.0, 0.0), (0.0, 0.0), 1.0, 4)
    with pytest.raises(ZeroPerpVarianceError):
        w.psi_scaling((1.0, 0.0), (1.0, 0.0), 0.0, 4)


def test_center_of_mass():
    n = 8
    straight = w.WalkPath(np.column_stack([np.arange(n + 1, dtype=float), np.zeros(n + 1)]))
    com = w.center_of_mass(straight)
    assert com.positions[-1].tolist() == [(n + 1) / 2, 0.0]
    one = w.sample_path(w.PearsonRayleigh(), 1, w.RngStream(9))
    assert np.allclose(w.center_of_mass(one).positions[1], one.positions[1])


def test_center_of_mass_hull_contained_in_walk_hull():
    path = w.sample_path(w.PearsonRayleigh((0.1, 0.0)), 300, w.RngStream(13, 2))
    hull = geom2d.convex_hull(path.positions)
    for p in w.center_of_mass(path).positions:
        assert hull.contains(p)


# ---------------------------------------------------------------------------
# model grammar
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    ["lattice", "hex6", "pr", "pr:0.2,0", "pr:-0.3,0.4", "gauss", "gauss:1,0.2,2",
     "gauss:1,0,1,0.5,-0.5", "st-binary", "st-gauss", "pareto:1.5", "pareto:1.5,0.1,0"],
)
def test_grammar_round_trip(spec):
    model = w.parse_model(spec)
    assert w.parse_model(w.format_model(model)) == model


@pytest.mark.parametrize("bad", ["", "walk", "pr:1", "gauss:1,2", "pareto", "lattice:3"])
def test_grammar_rejects_bad_specs(bad):
    with pytest.raises(ValueError):
        w.parse_model(bad)


def test_support_available_only_for_finite_models():
    for model in (w.LatticeSRW(), w.Hex6(), w.SpacetimeBinary()):
        steps, probs = model.support()
        assert math.isclose(probs.sum(), 1.0)
        assert len(steps) == len(probs)
    for model in (w.PearsonRayleigh(), w.Gaussian(), w.SpacetimeGaussian(), w.ParetoDirection()):
        with pytest.raises(NotFiniteSupportError):
            model.support()
