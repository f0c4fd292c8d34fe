"""Fractional action functionals and Euler-Lagrange residuals.

The action integrates L(x, D^a x, t) over the grid.  Stationarity under
unrestricted endpoint-pinned variations yields the general equation
dL/dx + D^a_right dL/dv = 0, whose right derivative makes the dynamics
anticausal; restricting variations yields the causal branch
dL/dx - D^a_left dL/dv = 0.  The causal residual is, node for node, the
fractional embedding of the classical Euler-Lagrange operator: both are
assembled from the same discrete primitives, so they agree bitwise and
the embedding commutes with the least-action principle.  The general and
causal equations have genuinely different solutions; reports on both
sides of that dichotomy use interior norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracops import (
    FracOrder,
    OperatorSpec,
    OperatorTerm,
    caputo_left,
    caputo_right,
    embed_operator,
    rl_integral_left,
)
from .grids import TimeGrid, Trajectory, trapezoid
from .reports import ResidualReport, make_report
from .systems import HamiltonianSystem, LagrangianSystem

__all__ = [
    "ActionValue",
    "VariationSpace",
    "action",
    "directional_derivative",
    "general_el_residual",
    "causal_el_residual",
    "classical_el_operator",
    "k_alpha_apply",
    "hamiltonian_action_residual",
    "variation_space_check",
    "sample_variation",
]


@dataclass(frozen=True)
class ActionValue:
    """Value of the fractional action for one Lagrangian on one grid."""

    value: float
    grid: TimeGrid
    lagrangian: str


@dataclass(frozen=True)
class VariationSpace:
    """Marker for the admissible-variation space used by membership checks.

    kind "V_alpha" demands h(b) = 0 and a vanishing left integral of
    complementary order at a (identically zero for the discrete operator;
    the computed value is reported).  kind "V_alpha_tilde" additionally
    demands that left and right derivatives of h cancel.
    """

    kind: str
    tol: float = 1e-8


def _phase_eval(L: LagrangianSystem, x: Trajectory, order: FracOrder):
    t = x.grid.nodes()
    v = caputo_left(x, order).values
    return x.values, v, t


def action(L: LagrangianSystem, x: Trajectory, order: FracOrder) -> ActionValue:
    """Trapezoid quadrature of L(x, D^a_left x, t) over the grid."""
    xv, v, t = _phase_eval(L, x, order)
    integrand = np.asarray(L.lagrangian(xv, v, t), dtype=float)
    return ActionValue(
        value=trapezoid(integrand, x.grid.h), grid=x.grid, lagrangian=L.label
    )


def directional_derivative(
    L: LagrangianSystem,
    x: Trajectory,
    h: Trajectory,
    order: FracOrder,
    eps: float = 1e-5,
) -> float:
    """Central difference of the action along h: [A(x+eh) - A(x-eh)]/(2e)."""
    x.same_grid(h)
    up = action(L, Trajectory(x.grid, x.values + eps * h.values), order).value
    dn = action(L, Trajectory(x.grid, x.values - eps * h.values), order).value
    return (up - dn) / (2.0 * eps)


def general_el_residual(
    L: LagrangianSystem, x: Trajectory, order: FracOrder
) -> ResidualReport:
    """Per-node value of dL/dx(x, D^a x, t) + D^a_right dL/dv(x, D^a x, t)."""
    xv, v, t = _phase_eval(L, x, order)
    p1 = np.broadcast_to(np.asarray(L.dLdx(xv, v, t), dtype=float), xv.shape)
    p2 = np.broadcast_to(np.asarray(L.dLdv(xv, v, t), dtype=float), xv.shape)
    res = p1 + caputo_right(Trajectory(x.grid, p2.copy()), order).values
    return make_report("general_EL", Trajectory(x.grid, res))


def causal_el_residual(
    L: LagrangianSystem, x: Trajectory, order: FracOrder
) -> ResidualReport:
    """Per-node value of dL/dx(x, D^a x, t) - D^a_left dL/dv(x, D^a x, t)."""
    xv, v, t = _phase_eval(L, x, order)
    p1 = np.broadcast_to(np.asarray(L.dLdx(xv, v, t), dtype=float), xv.shape)
    p2 = np.broadcast_to(np.asarray(L.dLdv(xv, v, t), dtype=float), xv.shape)
    res = p1 - caputo_left(Trajectory(x.grid, p2.copy()), order).values
    return make_report("causal_EL", Trajectory(x.grid, res))


def classical_el_operator(L: LagrangianSystem) -> OperatorSpec:
    """The classical Euler-Lagrange operator dL/dx - d/dt dL/dv as a spec.

    Feeding this to embed_operator reproduces causal_el_residual exactly:
    the embedding and the restricted least-action principle commute.
    """
    return OperatorSpec(
        terms=(
            OperatorTerm(lambda x, v, t: 1.0, lambda x, v, t: L.dLdx(x, v, t), 0),
            OperatorTerm(lambda x, v, t: -1.0, lambda x, v, t: L.dLdv(x, v, t), 1),
        ),
        arg_order=1,
    )


def k_alpha_apply(x: Trajectory, order: FracOrder) -> Trajectory:
    """Sum of left and right Caputo derivatives, componentwise."""
    return Trajectory(
        x.grid, caputo_left(x, order).values + caputo_right(x, order).values
    )


def hamiltonian_action_residual(
    H: HamiltonianSystem, x: Trajectory, p: Trajectory, order: FracOrder
) -> ResidualReport:
    """Causal stationarity defect of the phase-space action of p v - H(x, p).

    Stacked components: -dH/dx(x,p) - D^a_left p and D^a_left x - dH/dp(x,p),
    which is exactly the embedded canonical system, so causal critical
    points and fractional canonical solutions coincide.
    """
    x.same_grid(p)
    xv, pv = x.values, p.values
    c1 = -np.asarray(H.dHdx(xv, pv), dtype=float) - caputo_left(p, order).values
    c2 = caputo_left(x, order).values - np.asarray(H.dHdp(xv, pv), dtype=float)
    return make_report("canonical", Trajectory(x.grid, np.hstack([c1, c2])))


def variation_space_check(
    h: Trajectory, space: VariationSpace, order: FracOrder
) -> tuple[bool, dict]:
    """Membership test with diagnostics for the admissible-variation spaces.

    Returns (member, diagnostics).  Diagnostics always report the endpoint
    value and the left integral of complementary order at a; the stricter
    space adds the per-node cancellation profile |D^a_left h + D^a_right h|
    and its tolerance 10 * h_step^(2 - a).
    """
    comp = FracOrder(1.0 - order.alpha)
    endpoint = float(np.max(np.abs(h.values[-1])))
    left_integral_at_a = float(
        np.max(np.abs(rl_integral_left(h, comp).values[0]))
    )
    ok = endpoint <= space.tol and left_integral_at_a <= space.tol
    diag = {
        "endpoint_value": endpoint,
        "left_integral_at_a": left_integral_at_a,
    }
    if space.kind == "V_alpha_tilde":
        profile = np.max(np.abs(k_alpha_apply(h, order).values), axis=1)
        tol = 10.0 * h.grid.h ** (2.0 - order.alpha)
        diag["k_alpha_profile"] = profile
        diag["k_alpha_max"] = float(np.max(profile))
        diag["k_alpha_tol"] = tol
        ok = ok and diag["k_alpha_max"] <= tol
    return ok, diag


def sample_variation(grid: TimeGrid, order: FracOrder, rng) -> Trajectory:
    """Random smooth variation with vanishing boundary data on both sides.

    The sample vanishes at both endpoints and is corrected by a parabolic
    bump so that its left fractional integral of complementary order also
    vanishes at b (to rounding).  These are exactly the conditions under
    which the boundary terms of the discrete integration-by-parts identity
    drop out, making the pairing with the general Euler-Lagrange residual
    equal the directional derivative of the action.
    """
    comp = FracOrder(1.0 - order.alpha)
    s = (grid.nodes() - grid.a) / (grid.b - grid.a)
    window = s * (1.0 - s)
    coeffs = rng.uniform(-1.0, 1.0, 4)
    wave = sum(
        c * np.sin((k + 1) * np.pi * s) for k, c in enumerate(coeffs)
    ) + rng.uniform(-1.0, 1.0)
    h0 = window * wave
    phi = window
    i_h0 = rl_integral_left(Trajectory(grid, h0), comp).values[-1, 0]
    i_phi = rl_integral_left(Trajectory(grid, phi), comp).values[-1, 0]
    return Trajectory(grid, h0 - (i_h0 / i_phi) * phi)
