"""Fractional action, its variations, and the two Euler-Lagrange branches.

The load-bearing facts checked here:

* the directional derivative of the action along an admissible variation
  equals the pairing of the general Euler-Lagrange residual with that
  variation (discrete integration by parts makes the boundary terms drop);
* on a fractional canonical solution the causal branch nearly vanishes
  while the general branch stays order one, so the two branches are not
  interchangeable;
* the causal branch is literally the embedded classical operator, node by
  node, bit for bit.
"""

import math

import numpy as np
import pytest

from fractime import (
    FracOrder,
    TimeGrid,
    Trajectory,
    VariationSpace,
    action,
    causal_el_residual,
    classical_el_operator,
    directional_derivative,
    embed_operator,
    general_el_residual,
    hamiltonian_action_residual,
    harmonic,
    k_alpha_apply,
    legendre_transform,
    quartic,
    sample_variation,
    solve_fde,
    trapezoid,
    variation_space_check,
)

HALF = FracOrder(0.5)


def _bent_path(grid):
    return Trajectory.from_callable(grid, lambda t: np.cos(t) + 0.3 * t)


def test_action_value_is_finite_and_labeled():
    grid = TimeGrid(0.0, 1.0, 128)
    val = action(harmonic(), _bent_path(grid), HALF)
    assert math.isfinite(val.value)
    assert val.lagrangian.startswith("harmonic")
    assert val.grid == grid


def test_action_of_rest_state_is_zero_for_free_particle():
    from fractime import free_particle

    grid = TimeGrid(0.0, 1.0, 64)
    val = action(free_particle(), Trajectory.constant(grid, 2.0), HALF)
    assert val.value == 0.0


def test_directional_derivative_matches_residual_pairing():
    grid = TimeGrid(0.0, 1.0, 256)
    L = harmonic()
    x = _bent_path(grid)
    a_val = action(L, x, HALF).value
    res = general_el_residual(L, x, HALF).residual.values[:, 0]
    budget = 1e-4 * (1.0 + abs(a_val))
    for s in range(5):
        rng = np.random.default_rng(1000 + s)
        h = sample_variation(grid, HALF, rng)
        dd = directional_derivative(L, x, h, HALF)
        pairing = trapezoid(res * h.values[:, 0], grid.h)
        assert abs(dd - pairing) <= budget


def test_sampled_variations_are_admissible():
    grid = TimeGrid(0.0, 1.0, 256)
    for s in range(3):
        h = sample_variation(grid, HALF, np.random.default_rng(s))
        ok, diag = variation_space_check(h, VariationSpace("V_alpha"), HALF)
        assert ok, diag


def test_strict_variation_space_rejects_generic_bump():
    grid = TimeGrid(0.0, 1.0, 512)
    bump = Trajectory.from_callable(grid, lambda t: (t * (1.0 - t)) ** 2)
    ok, diag = variation_space_check(bump, VariationSpace("V_alpha_tilde"), HALF)
    assert not ok
    assert diag["k_alpha_max"] > diag["k_alpha_tol"]


def test_two_sided_derivative_sum_preserves_symmetry():
    # reversing a symmetric input leaves the left+right sum unchanged,
    # and at the midpoint both one-sided derivatives agree
    grid = TimeGrid(0.0, 1.0, 512)
    bump = Trajectory.from_callable(grid, lambda t: (t * (1.0 - t)) ** 2)
    combined = k_alpha_apply(bump, HALF).values[:, 0]
    np.testing.assert_array_equal(combined, combined[::-1])
    from fractime import caputo_left

    mid = grid.n // 2
    one_sided = caputo_left(bump, HALF).values[mid, 0]
    assert combined[mid] == pytest.approx(2.0 * one_sided, abs=1e-14)


def test_causal_branch_vanishes_on_fractional_solution():
    L = harmonic()
    H = legendre_transform(L)
    grid = TimeGrid(0.0, 2.0, 2048)
    sol = solve_fde(H, np.array([1.0, 0.0]), grid, HALF)
    causal = causal_el_residual(L, sol.x_part(), HALF)
    assert causal.max_norm <= 5e-3


def test_general_branch_stays_large_on_fractional_solution():
    L = harmonic()
    H = legendre_transform(L)
    grid = TimeGrid(0.0, 2.0, 2048)
    sol = solve_fde(H, np.array([1.0, 0.0]), grid, HALF)
    causal = causal_el_residual(L, sol.x_part(), HALF)
    general = general_el_residual(L, sol.x_part(), HALF)
    assert general.max_norm >= 0.1
    assert general.max_norm >= 10.0 * causal.max_norm


def test_causal_branch_is_embedded_classical_operator_bitwise():
    for L in (harmonic(), quartic()):
        grid = TimeGrid(0.0, 2.0, 512)
        x = _bent_path(grid)
        causal = causal_el_residual(L, x, HALF).residual.values
        embedded = embed_operator(classical_el_operator(L), HALF)(x).values
        np.testing.assert_array_equal(causal, embedded)


def test_canonical_action_residual_small_on_fractional_solution():
    H = legendre_transform(harmonic())
    grid = TimeGrid(0.0, 2.0, 2048)
    sol = solve_fde(H, np.array([1.0, 0.0]), grid, HALF)
    report = hamiltonian_action_residual(H, sol.x_part(), sol.p_part(), HALF)
    assert report.max_norm < 5e-3


def test_canonical_residual_large_on_wrong_trajectory():
    H = legendre_transform(harmonic())
    grid = TimeGrid(0.0, 2.0, 512)
    x = Trajectory.from_callable(grid, lambda t: np.cos(2.0 * t))
    p = Trajectory.from_callable(grid, lambda t: np.sin(3.0 * t))
    report = hamiltonian_action_residual(H, x, p, HALF)
    assert report.max_norm > 0.1
