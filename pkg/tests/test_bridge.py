"""Monte Carlo subordination of classical flow vs. fractional solves.

Oracles used here:

* free particle started at (0, 1): the subordinated mean position at time
  t is E[S(t)] = t^a/Gamma(1+a), so x(1) = 1/Gamma(1.5) at a = 1/2;
* harmonic oscillator started at (1, 0): the subordinated mean equals
  E_{2a}(-t^{2a}), which at a = 1/2, t = 1 is E_1(-1) = 1/e;
* for gradients linear in the state, averaging commutes with gradient
  evaluation, so commutation gaps sit at rounding level; the quartic
  gradient breaks this with a Jensen gap far above noise.

Statistical budgets are 3 standard errors plus the documented scheme
terms; seeds are frozen.
"""

import math

import numpy as np
import pytest

from fractime import (
    ConfigError,
    FracOrder,
    OutOfRangeError,
    TimeGrid,
    commutation_gap,
    free_particle,
    grad_along_paths,
    harmonic,
    legendre_transform,
    quartic,
    subordinate_flow,
    verify_compatibility,
    verify_stanislavsky,
)

HALF = FracOrder(0.5)


def _free_obs(m_paths=10000, n=8, seed=42, **kw):
    H = legendre_transform(free_particle())
    grid = TimeGrid(0.0, 1.0, n)
    return subordinate_flow(H, np.array([0.0, 1.0]), grid, HALF, m_paths, seed=seed, **kw)


def test_subordinated_free_particle_mean_matches_power_law():
    obs = _free_obs()
    oracle = 1.0 / math.gamma(1.5)
    dev = abs(obs.mean_x[-1, 0] - oracle)
    assert dev <= 3.0 * obs.stderr_x[-1, 0] + obs.tau_step


def test_initial_node_is_pinned_exactly():
    obs = _free_obs(m_paths=64)
    assert obs.mean_x[0, 0] == 0.0
    assert obs.mean_p[0, 0] == 1.0
    assert obs.stderr_x[0, 0] == 0.0
    assert obs.stderr_p[0, 0] == 0.0


def test_subordinated_free_particle_mean_is_monotone_concave():
    obs = _free_obs()
    mean = obs.mean_x[:, 0]
    band = obs.stderr_x[:, 0]
    diffs = np.diff(mean)
    assert np.all(diffs >= -(band[1:] + band[:-1]))
    second = np.diff(diffs)
    assert np.all(second <= 3.0 * (band[2:] + band[1:-1] + band[:-2]) + 1e-12)


def test_subordinated_harmonic_mean_matches_mittag_leffler():
    H = legendre_transform(harmonic())
    grid = TimeGrid(0.0, 1.0, 8)
    obs = subordinate_flow(H, np.array([1.0, 0.0]), grid, HALF, 10000, seed=42)
    dev = abs(obs.mean_x[-1, 0] - math.exp(-1.0))
    assert dev <= 3.0 * obs.stderr_x[-1, 0] + 5e-3


def test_momentum_mean_is_tracked_alongside_position():
    obs = _free_obs(m_paths=500)
    np.testing.assert_allclose(obs.mean_p[:, 0], 1.0, atol=1e-12)


def test_phase_views_stack_position_and_momentum():
    obs = _free_obs(m_paths=64)
    assert obs.phase_mean().shape == (9, 2)
    assert obs.phase_stderr().shape == (9, 2)
    np.testing.assert_array_equal(obs.phase_mean()[:, 0], obs.mean_x[:, 0])


def test_initial_state_size_is_validated():
    H = legendre_transform(harmonic())
    with pytest.raises(OutOfRangeError):
        subordinate_flow(H, np.array([1.0]), TimeGrid(0.0, 1.0, 4), HALF, 16, seed=0)


def test_observable_is_reproducible():
    a = _free_obs(m_paths=256, seed=9)
    b = _free_obs(m_paths=256, seed=9)
    np.testing.assert_array_equal(a.mean_x, b.mean_x)
    np.testing.assert_array_equal(a.stderr_p, b.stderr_p)


def test_commutation_needs_retained_paths():
    H = legendre_transform(harmonic())
    obs = subordinate_flow(H, np.array([1.0, 0.0]), TimeGrid(0.0, 1.0, 4), HALF, 16, seed=0)
    with pytest.raises(ConfigError, match="keep_paths"):
        grad_along_paths(H, obs)


def test_single_path_commutation_gap_is_bitwise_zero():
    H = legendre_transform(harmonic())
    obs = subordinate_flow(
        H, np.array([1.0, 0.0]), TimeGrid(0.0, 1.0, 16), HALF, 1, seed=3, keep_paths=True
    )
    rep = commutation_gap(H, obs)
    assert rep.max_gap == 0.0


def test_quadratic_gradients_commute_with_averaging():
    # omega in {0.5, 1, 2} crossed with alpha in {0.3, 0.5, 0.8}
    for omega in (0.5, 1.0, 2.0):
        H = legendre_transform(harmonic(omega=omega))
        for alpha in (0.3, 0.5, 0.8):
            obs = subordinate_flow(
                H,
                np.array([1.0, 0.0]),
                TimeGrid(0.0, 2.0, 32),
                FracOrder(alpha),
                2000,
                seed=42,
                keep_paths=True,
            )
            rep = commutation_gap(H, obs)
            assert rep.within(sigma=3.0), (omega, alpha, rep.significance)


def test_quartic_gradient_opens_significant_gap():
    H = legendre_transform(quartic())
    obs = subordinate_flow(
        H, np.array([1.0, 0.0]), TimeGrid(0.0, 2.0, 64), HALF, 10000, seed=42, keep_paths=True
    )
    rep = commutation_gap(H, obs)
    assert rep.significance > 10.0


def test_equivalence_check_passes_for_harmonic_oscillator():
    H = legendre_transform(harmonic())
    grid = TimeGrid(0.0, 2.0, 512)
    rep = verify_stanislavsky(H, np.array([1.0, 0.0]), grid, HALF, M=4000, seed=42)
    assert rep.passed
    assert rep.fraction_within >= 0.95
    assert rep.alpha.alpha == 0.5


def test_equivalence_report_serializes_and_reruns_identically(tmp_path):
    H = legendre_transform(free_particle())
    grid = TimeGrid(0.0, 1.0, 64)
    rep = verify_stanislavsky(H, np.array([0.0, 1.0]), grid, HALF, M=1000, seed=7)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    files_a = rep.save(str(out_a), "eq")
    rep2 = verify_stanislavsky(H, np.array([0.0, 1.0]), grid, HALF, M=1000, seed=7)
    files_b = rep2.save(str(out_b), "eq")
    assert [f.split("/")[-1] for f in files_a] == [f.split("/")[-1] for f in files_b]
    for fa, fb in zip(files_a, files_b):
        assert open(fa, "rb").read() == open(fb, "rb").read()


def test_near_unit_order_collapses_to_classical_flow():
    H = legendre_transform(harmonic())
    grid = TimeGrid(0.0, 2.0, 512)
    obs = subordinate_flow(
        H, np.array([1.0, 0.0]), grid, FracOrder(0.999), 4000, seed=42
    )
    dev = np.abs(obs.mean_x[:, 0] - np.cos(grid.nodes()))
    budget = 2e-2 + 3.0 * obs.stderr_x[:, 0]
    assert np.all(dev <= budget)


def test_compatibility_check_passes_for_natural_harmonic():
    rep = verify_compatibility(
        harmonic(), np.array([1.0, 0.0]), TimeGrid(0.0, 2.0, 512), HALF, M=4000, seed=42
    )
    assert rep.momentum.passed
    assert rep.causal_el.passed
    assert rep.commutation_passed
    assert rep.passed


def test_compatibility_requires_natural_structure():
    from fractime import LagrangianSystem

    odd = LagrangianSystem(
        dim=1,
        lagrangian=lambda x, v, t: np.sum(v, axis=-1) ** 3,
        dLdx=lambda x, v, t: np.zeros_like(x),
        dLdv=lambda x, v, t: 3.0 * np.asarray(v) ** 2,
        natural=None,
        label="cubic-velocity",
    )
    with pytest.raises(ConfigError):
        verify_compatibility(
            odd, np.array([1.0, 0.0]), TimeGrid(0.0, 1.0, 64), HALF, M=100, seed=0
        )


def test_compatibility_report_saves_expected_files(tmp_path):
    rep = verify_compatibility(
        harmonic(), np.array([1.0, 0.0]), TimeGrid(0.0, 1.0, 128), HALF, M=500, seed=1
    )
    files = rep.save(str(tmp_path), "compat")
    names = sorted(f.split("/")[-1] for f in files)
    assert "compat_momentum_x0.csv" in names
    assert "compat_causal_el_x0.csv" in names
    assert "compat_summary.txt" in names
    for f in files:
        assert open(f).read()
