"""Polytropic gas thermodynamics for self-similar potential flow.

The pressure law is p(rho) = rho**gamma.  pi denotes the integral of
c^2/rho, normalized so that pi(0) = 0 for gamma > 1 and pi(1) = 0 for the
isothermal case gamma = 1; the two branches are exact and do not join
continuously in gamma.
"""

from dataclasses import dataclass

import numpy as np

from .errors import VacuumError
from ._vec import vec2

__all__ = [
    "GasModel",
    "PointState",
    "pressure",
    "sound_speed",
    "pi_map",
    "pi_inv",
    "density_from_bernoulli",
    "pde_matrix",
]


@dataclass(frozen=True)
class GasModel:
    """Polytropic gas with adiabatic exponent gamma in [1, 4]."""

    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not np.isfinite(g) or not (1.0 <= g <= 4.0):
            raise ValueError(f"gamma must lie in [1, 4], got {self.gamma!r}")
        object.__setattr__(self, "gamma", g)

    @property
    def isothermal(self) -> bool:
        return self.gamma == 1.0


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not np.isfinite(rho) or rho <= 0.0:
        raise ValueError(f"density must be positive, got {rho!r}")
    return rho


def pressure(gas: GasModel, rho: float) -> float:
    """p(rho) = rho**gamma."""
    rho = _check_rho(rho)
    return rho ** gas.gamma


def sound_speed(gas: GasModel, rho: float) -> float:
    """c = sqrt(dp/drho) = sqrt(gamma * rho**(gamma-1))."""
    rho = _check_rho(rho)
    return float(np.sqrt(gas.gamma * rho ** (gas.gamma - 1.0)))


def pi_map(gas: GasModel, rho: float) -> float:
    """Integral of c^2/rho.

    gamma > 1:  pi(rho) = gamma/(gamma-1) * rho**(gamma-1)   (pi(0) = 0)
    gamma = 1:  pi(rho) = log(rho)                            (pi(1) = 0)
    """
    rho = _check_rho(rho)
    if gas.isothermal:
        return float(np.log(rho))
    return gas.gamma / (gas.gamma - 1.0) * rho ** (gas.gamma - 1.0)


def pi_inv(gas: GasModel, q: float) -> float:
    """Exact inverse of pi_map.

    For gamma > 1 the range of pi is (0, inf); arguments q <= 0 lie beyond
    vacuum and raise VacuumError.  For gamma = 1 any real q is valid.
    """
    q = float(q)
    if gas.isothermal:
        return float(np.exp(q))
    if q <= 0.0:
        raise VacuumError(f"pi_inv argument {q!r} is out of range (vacuum)")
    g = gas.gamma
    return ((g - 1.0) * q / g) ** (1.0 / (g - 1.0))


def density_from_bernoulli(gas: GasModel, chi_value: float, grad_chi) -> float:
    """rho = pi_inv(-chi - |grad chi|^2 / 2).

    grad_chi may be a 2-vector or a scalar magnitude.
    """
    g = np.asarray(grad_chi, dtype=float)
    if g.ndim == 0:
        gsq = float(g) ** 2
    else:
        g = vec2(g)
        gsq = float(np.dot(g, g))
    return pi_inv(gas, -float(chi_value) - 0.5 * gsq)


@dataclass(frozen=True)
class PointState:
    """Local state (rho, v) at a similarity point xi.

    Derived quantities: pseudo-velocity z = v - xi, sound speed c and
    pseudo-Mach number L = |z|/c.  The flow equation is elliptic at the
    point iff L < 1, hyperbolic iff L > 1.
    """

    gas: GasModel
    rho: float
    v: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", _check_rho(self.rho))
        object.__setattr__(self, "v", vec2(self.v))
        object.__setattr__(self, "xi", vec2(self.xi))

    @property
    def z(self) -> np.ndarray:
        return self.v - self.xi

    @property
    def c(self) -> float:
        return sound_speed(self.gas, self.rho)

    @property
    def L(self) -> float:
        return float(np.hypot(*self.z)) / self.c


def pde_matrix(gas: GasModel, state: PointState):
    """Coefficient matrix c^2 I - z z^T of the second-order flow equation.

    Returns (matrix, elliptic) where elliptic is True iff L < 1 strictly.
    The eigenvalues are {c^2 - |z|^2, c^2}.
    """
    c2 = gas.gamma * state.rho ** (gas.gamma - 1.0)
    z = state.z
    mat = c2 * np.eye(2) - np.outer(z, z)
    return mat, bool(state.L < 1.0)
