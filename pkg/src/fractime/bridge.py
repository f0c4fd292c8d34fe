"""Subordinated Hamiltonian flow and its fractional-dynamics counterparts.

The mean trajectory x_a(t) = E[x(S(t))], p_a(t) = E[p(S(t))] of a classical
flow evaluated at the internal time S is compared against the solution of
the Caputo canonical system on the same grid (two independent computational
routes), and against the identities tying natural Lagrangians to their
subordinated means: p_a = m D^a x_a and a vanishing causal Euler-Lagrange
residual.  The
commutation hypothesis E[dH(x(S), p(S))] = dH(x_a, p_a) holds for linear
gradients and is probed for failure on a quartic potential.

Error budgets combine Monte Carlo noise (3 stderr) with a flat scheme
bound added linearly; stderr for derived quantities (anything passed
through a fractional operator) comes from batch means over path groups.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .dynamics import legendre_transform, solve_classical, solve_fde
from .errors import ConfigError, CoverageError, OutOfRangeError
from .fracops import FracOrder, caputo_left
from .grids import TimeGrid, Trajectory, write_csv
from .reports import interior_window
from .stochastic_time import inverse_subordinator_paths
from .systems import HamiltonianSystem, LagrangianSystem
from .variational import causal_el_residual

__all__ = [
    "SubordinatedObservable",
    "CommutationReport",
    "ComparisonReport",
    "CompatibilityReport",
    "subordinate_flow",
    "grad_along_paths",
    "commutation_gap",
    "verify_stanislavsky",
    "verify_compatibility",
]

_SCHEME_TOL = 5e-3
_PASS_FRACTION = 0.95


@dataclass(frozen=True)
class SubordinatedObservable:
    """Ensemble means of a classical flow evaluated at internal times.

    Node 0 is pinned to the initial data with zero stderr (S(0) = 0 on
    every path).  Group means support batch-means error bars for
    quantities derived from the mean curves; raw path values are kept
    only on request.
    """

    t_grid: TimeGrid
    alpha: FracOrder
    mean_x: np.ndarray
    mean_p: np.ndarray
    stderr_x: np.ndarray
    stderr_p: np.ndarray
    m_paths: int
    seed: int
    tau_step: float
    group_means_x: np.ndarray | None = None
    group_means_p: np.ndarray | None = None
    path_x: np.ndarray | None = None
    path_p: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return int(self.mean_x.shape[1])

    def phase_mean(self) -> np.ndarray:
        return np.hstack([self.mean_x, self.mean_p])

    def phase_stderr(self) -> np.ndarray:
        return np.hstack([self.stderr_x, self.stderr_p])


def subordinate_flow(
    H: HamiltonianSystem,
    y0,
    t_grid: TimeGrid,
    order: FracOrder,
    M: int,
    seed: int = 0,
    tau_step: float | None = None,
    keep_paths: bool = False,
    n_groups: int = 0,
) -> SubordinatedObservable:
    """Average the classical flow over M internal-time paths.

    The classical system is solved once on [0, tau_max], where tau_max is
    the 99.9th percentile of the sampled S(b), extended once by 2x if any
    path lands beyond it; the solution is evaluated at random times by
    linear interpolation with a classical step of at most 1e-3, so the
    interpolation error stays well below Monte Carlo noise.

    Raises:
        CoverageError: a sampled S exceeds the extended horizon.
        OutOfRangeError: y0 does not stack x and p for H.dim.
    """
    y0 = np.asarray(y0, dtype=float).ravel()
    if y0.size != 2 * H.dim:
        raise OutOfRangeError(
            f"y0 must stack x and p ({2 * H.dim} values), got {y0.size}"
        )
    d = H.dim
    ens = inverse_subordinator_paths(order, t_grid, M, tau_step=tau_step, seed=seed)
    s_last = ens.paths[:, -1]
    s_max = float(s_last.max())
    tau_max = float(np.quantile(s_last, 0.999))
    if s_max > tau_max:
        tau_max *= 2.0
    if s_max > tau_max:
        raise CoverageError(
            f"sampled internal time {s_max:.6g} exceeds the extended horizon {tau_max:.6g}"
        )
    tau_max = max(tau_max, ens.tau_step)
    n_classical = max(2048, int(math.ceil(tau_max / 1e-3)))
    classical = solve_classical(H, y0, TimeGrid(0.0, tau_max, n_classical))
    tau_nodes = classical.grid.nodes()
    cols = classical.values

    n_nodes = len(t_grid)
    sums = np.zeros((n_nodes, 2 * d))
    sumsq = np.zeros((n_nodes, 2 * d))
    groups = min(n_groups, M) if n_groups > 0 else 0
    group_sums = np.zeros((groups, n_nodes, 2 * d)) if groups else None
    group_counts = np.zeros(groups, dtype=int) if groups else None
    group_size = M // groups if groups else 0
    stored = np.empty((M, n_nodes, 2 * d)) if keep_paths else None

    for m in range(M):
        s = ens.paths[m]
        vals = np.empty((n_nodes, 2 * d))
        for c in range(2 * d):
            vals[:, c] = np.interp(s, tau_nodes, cols[:, c])
        sums += vals
        sumsq += vals * vals
        if groups:
            g = min(m // group_size, groups - 1)
            group_sums[g] += vals
            group_counts[g] += 1
        if keep_paths:
            stored[m] = vals

    mean = sums / M
    var = np.maximum(sumsq - M * mean * mean, 0.0) / (M - 1) if M > 1 else np.zeros_like(mean)
    stderr = np.sqrt(var) / math.sqrt(M)
    # node 0 is y0 on every path; remove the summation rounding artifact
    mean[0] = y0
    stderr[0] = 0.0
    gm = None
    if groups:
        gm = group_sums / group_counts[:, None, None]
        gm[:, 0, :] = y0
    return SubordinatedObservable(
        t_grid=t_grid,
        alpha=order,
        mean_x=mean[:, :d],
        mean_p=mean[:, d:],
        stderr_x=stderr[:, :d],
        stderr_p=stderr[:, d:],
        m_paths=M,
        seed=seed,
        tau_step=ens.tau_step,
        group_means_x=gm[:, :, :d] if gm is not None else None,
        group_means_p=gm[:, :, d:] if gm is not None else None,
        path_x=stored[:, :, :d] if keep_paths else None,
        path_p=stored[:, :, d:] if keep_paths else None,
    )


@dataclass(frozen=True)
class CommutationReport:
    """Gap between the gradient at the means and the mean of the gradient."""

    t_grid: TimeGrid
    gap_x: np.ndarray
    gap_p: np.ndarray
    stderr_x: np.ndarray
    stderr_p: np.ndarray

    @property
    def max_gap(self) -> float:
        return float(max(self.gap_x.max(), self.gap_p.max()))

    @property
    def significance(self) -> float:
        """Largest gap in stderr units over nodes with positive stderr."""
        out = 0.0
        for gap, err in ((self.gap_x, self.stderr_x), (self.gap_p, self.stderr_p)):
            mask = err > 0.0
            if np.any(mask):
                out = max(out, float((gap[mask] / err[mask]).max()))
        return out

    def within(self, sigma: float = 3.0, atol: float = 1e-12) -> bool:
        return bool(
            np.all(self.gap_x <= sigma * self.stderr_x + atol)
            and np.all(self.gap_p <= sigma * self.stderr_p + atol)
        )


def _eval_grad(fn, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Evaluate a gradient callable over stacked points, broadcasting if it can."""
    try:
        out = np.asarray(fn(x, p), dtype=float)
        if out.shape == x.shape:
            return out
    except Exception:
        pass
    flat_x = x.reshape(-1, x.shape[-1])
    flat_p = p.reshape(-1, p.shape[-1])
    out = np.empty_like(flat_x)
    for i in range(flat_x.shape[0]):
        out[i] = np.asarray(fn(flat_x[i], flat_p[i]), dtype=float)
    return out.reshape(x.shape)


def grad_along_paths(
    H: HamiltonianSystem, obs: SubordinatedObservable
) -> tuple[np.ndarray, np.ndarray]:
    """Raw-path values of (dH/dx, dH/dp), shape (M, nodes, d) each.

    Raises:
        ConfigError: the observable was built without keep_paths.
    """
    if obs.path_x is None or obs.path_p is None:
        raise ConfigError("commutation checks need subordinate_flow(keep_paths=True)")
    return (
        _eval_grad(H.dHdx, obs.path_x, obs.path_p),
        _eval_grad(H.dHdp, obs.path_x, obs.path_p),
    )


def commutation_gap(
    H: HamiltonianSystem,
    obs: SubordinatedObservable,
    dh_paths: tuple[np.ndarray, np.ndarray] | None = None,
) -> CommutationReport:
    """Per-node |dH(mean) - mean(dH)| for both gradient components."""
    if dh_paths is None:
        dh_paths = grad_along_paths(H, obs)
    dhx, dhp = dh_paths
    m = dhx.shape[0]
    at_mean_x = _eval_grad(H.dHdx, obs.mean_x, obs.mean_p)
    at_mean_p = _eval_grad(H.dHdp, obs.mean_x, obs.mean_p)
    scale = math.sqrt(m) if m > 1 else 1.0
    err_x = dhx.std(axis=0, ddof=1) / scale if m > 1 else np.zeros_like(at_mean_x)
    err_p = dhp.std(axis=0, ddof=1) / scale if m > 1 else np.zeros_like(at_mean_p)
    return CommutationReport(
        t_grid=obs.t_grid,
        gap_x=np.abs(at_mean_x - dhx.mean(axis=0)),
        gap_p=np.abs(at_mean_p - dhp.mean(axis=0)),
        stderr_x=err_x,
        stderr_p=err_p,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Node-by-node comparison of the Monte Carlo and FDE routes."""

    t_grid: TimeGrid
    alpha: FracOrder
    labels: tuple
    mc_mean: np.ndarray
    mc_stderr: np.ndarray
    fde_values: np.ndarray
    gap: np.ndarray
    budget: np.ndarray
    window: int
    fraction_within: float
    passed: bool

    def save(self, out_dir: str, stem: str) -> list:
        """One CSV per phase component plus a verdict summary; returns paths."""
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        t = self.t_grid.nodes()
        for k, label in enumerate(self.labels):
            csv_path = os.path.join(out_dir, f"{stem}_{label}.csv")
            write_csv(
                csv_path,
                ["t", "mc_mean", "mc_stderr", "fde_value", "gap"],
                [t, self.mc_mean[:, k], self.mc_stderr[:, k], self.fde_values[:, k], self.gap[:, k]],
            )
            paths.append(csv_path)
        summary = os.path.join(out_dir, f"{stem}_summary.txt")
        lines = [
            f"check: MC subordination vs fractional solve (alpha={self.alpha.alpha})",
            f"interior nodes within 3*stderr + scheme budget: {self.fraction_within:.4f}",
            f"required fraction: {_PASS_FRACTION}",
            f"max gap: {float(self.gap.max()):.6e}",
            f"verdict: {'PASS' if self.passed else 'FAIL'}",
        ]
        with open(summary, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        paths.append(summary)
        return paths


def _phase_labels(d: int) -> tuple:
    return tuple([f"x{k}" for k in range(d)] + [f"p{k}" for k in range(d)])


def verify_stanislavsky(
    H: HamiltonianSystem,
    y0,
    t_grid: TimeGrid,
    order: FracOrder,
    M: int = 10_000,
    seed: int = 42,
    tau_step: float | None = None,
    scheme_tol: float = _SCHEME_TOL,
) -> ComparisonReport:
    """Compare subordinated means against the Caputo canonical solution.

    A node agrees when every phase component is within 3*stderr +
    scheme_tol; the check passes when at least 95% of interior nodes
    agree.
    """
    obs = subordinate_flow(H, y0, t_grid, order, M, seed=seed, tau_step=tau_step)
    fde = solve_fde(H, np.asarray(y0, dtype=float).ravel(), t_grid, order)
    mc = obs.phase_mean()
    se = obs.phase_stderr()
    gap = np.abs(mc - fde.y.values)
    budget = 3.0 * se + scheme_tol
    w = interior_window(t_grid.n)
    ok = np.all(gap <= budget, axis=1)[w : len(t_grid) - w]
    fraction = float(np.mean(ok))
    return ComparisonReport(
        t_grid=t_grid,
        alpha=order,
        labels=_phase_labels(H.dim),
        mc_mean=mc,
        mc_stderr=se,
        fde_values=fde.y.values,
        gap=gap,
        budget=budget,
        window=w,
        fraction_within=fraction,
        passed=fraction >= _PASS_FRACTION,
    )


@dataclass(frozen=True)
class CheckBand:
    """One budgeted per-node check: |values| <= 3*stderr + scheme_tol."""

    name: str
    values: np.ndarray
    stderr: np.ndarray
    budget: np.ndarray
    window: int
    fraction_within: float
    passed: bool


def _band_check(name: str, values, stderr, scheme_tol: float, n: int) -> CheckBand:
    values = np.abs(values)
    budget = 3.0 * stderr + scheme_tol
    w = interior_window(n)
    ok = np.all(values <= budget, axis=1)[w : n + 1 - w]
    fraction = float(np.mean(ok))
    return CheckBand(
        name=name,
        values=values,
        stderr=stderr,
        budget=budget,
        window=w,
        fraction_within=fraction,
        passed=fraction >= _PASS_FRACTION,
    )


@dataclass(frozen=True)
class CompatibilityReport:
    """Momentum identity, causal residual, and commutation gap in one verdict."""

    t_grid: TimeGrid
    alpha: FracOrder
    momentum: CheckBand
    causal_el: CheckBand
    commutation: CommutationReport
    commutation_passed: bool
    derivative_route: np.ndarray
    momentum_route: np.ndarray

    @property
    def passed(self) -> bool:
        return self.momentum.passed and self.causal_el.passed and self.commutation_passed

    def save(self, out_dir: str, stem: str) -> list:
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        t = self.t_grid.nodes()
        d = self.momentum_route.shape[1]
        for k in range(d):
            csv_path = os.path.join(out_dir, f"{stem}_momentum_x{k}.csv")
            write_csv(
                csv_path,
                ["t", "mc_mean", "mc_stderr", "fde_value", "gap"],
                [
                    t,
                    self.momentum_route[:, k],
                    self.momentum.stderr[:, k],
                    self.derivative_route[:, k],
                    self.momentum.values[:, k],
                ],
            )
            paths.append(csv_path)
            csv_path = os.path.join(out_dir, f"{stem}_causal_el_x{k}.csv")
            write_csv(
                csv_path,
                ["t", "mc_mean", "mc_stderr", "fde_value", "gap"],
                [
                    t,
                    self.causal_el.values[:, k],
                    self.causal_el.stderr[:, k],
                    np.zeros_like(t),
                    self.causal_el.values[:, k],
                ],
            )
            paths.append(csv_path)
        summary = os.path.join(out_dir, f"{stem}_summary.txt")
        lines = [
            f"check: compatibility of subordinated means (alpha={self.alpha.alpha})",
            f"momentum identity interior fraction: {self.momentum.fraction_within:.4f}"
            f" -> {'PASS' if self.momentum.passed else 'FAIL'}",
            f"causal EL residual interior fraction: {self.causal_el.fraction_within:.4f}"
            f" -> {'PASS' if self.causal_el.passed else 'FAIL'}",
            f"commutation gap within 3*stderr: {'PASS' if self.commutation_passed else 'FAIL'}"
            f" (max significance {self.commutation.significance:.2f})",
            f"verdict: {'PASS' if self.passed else 'FAIL'}",
        ]
        with open(summary, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        paths.append(summary)
        return paths


def verify_compatibility(
    L: LagrangianSystem,
    y0,
    t_grid: TimeGrid,
    order: FracOrder,
    M: int = 10_000,
    seed: int = 42,
    tau_step: float | None = None,
    scheme_tol: float = _SCHEME_TOL,
    n_groups: int = 16,
    gap_grid_nodes: int = 64,
) -> CompatibilityReport:
    """Check the natural-Lagrangian compatibility identities on MC means.

    (i) p_a = m D^a x_a, (ii) causal EL residual of x_a vanishes, (iii)
    the commutation gap of the induced Hamiltonian stays within noise.
    Batch means over n_groups path groups provide the stderr for the two
    derived identities, since fractional operators amplify node-to-node
    Monte Carlo noise in a correlated way that per-path stderr cannot
    describe.

    Raises:
        ConfigError: L is not in natural form.
    """
    if L.natural is None:
        raise ConfigError("compatibility checks need a natural Lagrangian")
    H = legendre_transform(L)
    obs = subordinate_flow(
        H, y0, t_grid, order, M, seed=seed, tau_step=tau_step, n_groups=n_groups
    )
    mass = L.natural.mass
    n = t_grid.n

    def momentum_profile(x_mean, p_mean):
        dx = caputo_left(Trajectory(t_grid, x_mean.copy()), order).values
        return p_mean - mass * dx, mass * dx

    gap_full, deriv_route = momentum_profile(obs.mean_x, obs.mean_p)
    group_gaps = np.stack(
        [
            momentum_profile(obs.group_means_x[g], obs.group_means_p[g])[0]
            for g in range(obs.group_means_x.shape[0])
        ]
    )
    g_count = group_gaps.shape[0]
    stderr_m = group_gaps.std(axis=0, ddof=1) / math.sqrt(g_count)
    momentum = _band_check("momentum identity", gap_full, stderr_m, scheme_tol, n)

    def causal_profile(x_mean):
        rep = causal_el_residual(L, Trajectory(t_grid, x_mean.copy()), order)
        return rep.residual.values

    el_full = causal_profile(obs.mean_x)
    group_el = np.stack(
        [causal_profile(obs.group_means_x[g]) for g in range(g_count)]
    )
    stderr_e = group_el.std(axis=0, ddof=1) / math.sqrt(g_count)
    causal = _band_check("causal EL residual", el_full, stderr_e, scheme_tol, n)

    gap_grid = TimeGrid(0.0, t_grid.b, gap_grid_nodes)
    obs_gap = subordinate_flow(
        H, y0, gap_grid, order, M, seed=seed, tau_step=tau_step, keep_paths=True
    )
    comm = commutation_gap(H, obs_gap)
    return CompatibilityReport(
        t_grid=t_grid,
        alpha=order,
        momentum=momentum,
        causal_el=causal,
        commutation=comm,
        commutation_passed=comm.within(),
        derivative_route=deriv_route,
        momentum_route=obs.mean_p,
    )
