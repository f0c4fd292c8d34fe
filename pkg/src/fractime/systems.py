"""Lagrangian and Hamiltonian systems with evaluatable gradients.

Callables are vectorized: x, v, p have shape (..., d), t broadcasts against
the leading axes, and scalar-valued maps return shape (...).  Built-in
factories cover the natural family L = 1/2 m v^2 - U(x), whose Legendre
partner is H = p^2/(2m) + U(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "NaturalForm",
    "LagrangianSystem",
    "SeparableForm",
    "HamiltonianSystem",
    "free_particle",
    "harmonic",
    "quartic",
]

Array = np.ndarray


@dataclass(frozen=True)
class NaturalForm:
    """Data of a natural Lagrangian: mass and potential with its gradient."""

    mass: float
    potential: Callable[[Array], Array]
    potential_grad: Callable[[Array], Array]


@dataclass(frozen=True)
class LagrangianSystem:
    """L(x, v, t) with partial derivatives; natural carries closed-form data."""

    dim: int
    lagrangian: Callable[[Array, Array, Array], Array]
    dLdx: Callable[[Array, Array, Array], Array]
    dLdv: Callable[[Array, Array, Array], Array]
    natural: NaturalForm | None = None
    label: str = "custom"

    def check_gradients(self, seed: int = 0, probes: int = 100) -> float:
        """Max relative deviation of the gradients from central differences."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(probes):
            x = rng.uniform(-2.0, 2.0, self.dim)
            v = rng.uniform(-2.0, 2.0, self.dim)
            t = float(rng.uniform(0.0, 2.0))
            gx = np.asarray(self.dLdx(x, v, t), dtype=float)
            gv = np.asarray(self.dLdv(x, v, t), dtype=float)
            worst = max(
                worst,
                _fd_gap(lambda u: self.lagrangian(u, v, t), x, gx),
                _fd_gap(lambda u: self.lagrangian(x, u, t), v, gv),
            )
        return worst


@dataclass(frozen=True)
class SeparableForm:
    """H = p^2/(2m) + U(x): the shape symplectic splitting relies on."""

    mass: float
    potential: Callable[[Array], Array]
    potential_grad: Callable[[Array], Array]


@dataclass(frozen=True)
class HamiltonianSystem:
    """H(x, p) with partial derivatives; separable carries splitting data."""

    dim: int
    hamiltonian: Callable[[Array, Array], Array]
    dHdx: Callable[[Array, Array], Array]
    dHdp: Callable[[Array, Array], Array]
    separable: SeparableForm | None = None
    label: str = "custom"

    def check_gradients(self, seed: int = 0, probes: int = 100) -> float:
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(probes):
            x = rng.uniform(-2.0, 2.0, self.dim)
            p = rng.uniform(-2.0, 2.0, self.dim)
            gx = np.asarray(self.dHdx(x, p), dtype=float)
            gp = np.asarray(self.dHdp(x, p), dtype=float)
            worst = max(
                worst,
                _fd_gap(lambda u: self.hamiltonian(u, p), x, gx),
                _fd_gap(lambda u: self.hamiltonian(x, u), p, gp),
            )
        return worst


def _fd_gap(f: Callable[[Array], Array], at: Array, grad: Array) -> float:
    worst = 0.0
    for k in range(at.size):
        step = 1e-6 * (1.0 + abs(at[k]))
        hi = at.copy()
        lo = at.copy()
        hi[k] += step
        lo[k] -= step
        fd = (float(f(hi)) - float(f(lo))) / (2.0 * step)
        worst = max(worst, abs(fd - grad[k]) / (1.0 + abs(grad[k])))
    return worst


def _natural_pair(m: float, u, du, label: str, dim: int = 1) -> LagrangianSystem:
    def lag(x, v, t):
        return 0.5 * m * np.sum(np.square(v), axis=-1) - u(x)

    def dldx(x, v, t):
        return -du(x)

    def dldv(x, v, t):
        return m * np.asarray(v, dtype=float)

    return LagrangianSystem(
        dim=dim,
        lagrangian=lag,
        dLdx=dldx,
        dLdv=dldv,
        natural=NaturalForm(mass=m, potential=u, potential_grad=du),
        label=label,
    )


def free_particle(m: float = 1.0) -> LagrangianSystem:
    """L = 1/2 m v^2."""
    return _natural_pair(
        m,
        lambda x: np.zeros(np.shape(x)[:-1]),
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        f"free-particle(m={m:g})",
    )


def harmonic(m: float = 1.0, omega: float = 1.0) -> LagrangianSystem:
    """L = 1/2 m v^2 - 1/2 m omega^2 x^2."""
    mw2 = m * omega * omega
    return _natural_pair(
        m,
        lambda x: 0.5 * mw2 * np.sum(np.square(x), axis=-1),
        lambda x: mw2 * np.asarray(x, dtype=float),
        f"harmonic(m={m:g},omega={omega:g})",
    )


def quartic(lam: float = 1.0) -> LagrangianSystem:
    """L = 1/2 v^2 - 1/4 lambda x^4."""
    return _natural_pair(
        1.0,
        lambda x: 0.25 * lam * np.sum(np.asarray(x, dtype=float) ** 4, axis=-1),
        lambda x: lam * np.asarray(x, dtype=float) ** 3,
        f"quartic(lambda={lam:g})",
    )
