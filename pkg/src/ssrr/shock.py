"""Rankine-Hugoniot jump relations and the shock-condition residual.

Conventions: the unit shock normal n points downstream (z_u . n > 0), the
unit tangent t is 90 degrees counterclockwise from n, and the tangential
pseudo-velocity z^t is continuous across the shock.  Admissible shocks are
compressive: z^n_u >= z^n_d, equivalently rho_d >= rho_u.

The upstream side carries an affine potential

    psi_I(xi) = psi0 + v_I . xi,     psi0 = -pi(rho_I) - |v_I|^2 / 2,

where the offset is forced by the global Bernoulli normalization; with this
choice the potential of any jump-consistent downstream state agrees with
psi_I on the shock automatically.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateShockError, NoShockError
from .gas import GasModel, pi_inv, pi_map, sound_speed
from ._vec import perp, unit, vec2

__all__ = [
    "UpstreamData",
    "ShockPoint",
    "normal_jump",
    "normal_jump_batch",
    "oblique_jump",
    "shock_normal_from_velocities",
    "downstream_density",
    "g_eval",
    "g_grad_v",
    "admissible",
]


@dataclass(frozen=True)
class UpstreamData:
    """Constant hyperbolic-side state with affine potential.

    psi0 is derived from (rho, v); callers never set it directly.
    """

    gas: GasModel
    rho: float
    v: np.ndarray

    def __post_init__(self):
        rho = float(self.rho)
        if rho <= 0.0 or not np.isfinite(rho):
            raise ValueError(f"upstream density must be positive, got {rho!r}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "v", vec2(self.v))

    @property
    def psi0(self) -> float:
        return -pi_map(self.gas, self.rho) - 0.5 * float(np.dot(self.v, self.v))

    @property
    def c(self) -> float:
        return sound_speed(self.gas, self.rho)

    def psi(self, xi) -> float:
        return self.psi0 + float(np.dot(self.v, vec2(xi)))

    def z(self, xi) -> np.ndarray:
        return self.v - vec2(xi)

    def pseudo_mach(self, xi) -> float:
        return float(np.hypot(*self.z(xi))) / self.c

    def shifted(self, w) -> "UpstreamData":
        """Same state seen by an observer moving with velocity w."""
        return UpstreamData(self.gas, self.rho, self.v - vec2(w))


@dataclass(frozen=True)
class ShockPoint:
    """One discontinuity at a point xi: upstream data, downstream state, normal."""

    upstream: UpstreamData
    xi: np.ndarray
    n: np.ndarray
    rho_d: float
    v_d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", vec2(self.xi))
        object.__setattr__(self, "n", vec2(self.n))
        object.__setattr__(self, "v_d", vec2(self.v_d))
        object.__setattr__(self, "rho_d", float(self.rho_d))

    @property
    def t(self) -> np.ndarray:
        return perp(self.n)

    @property
    def z_u(self) -> np.ndarray:
        return self.upstream.v - self.xi

    @property
    def z_d(self) -> np.ndarray:
        return self.v_d - self.xi

    @property
    def zn_u(self) -> float:
        return float(np.dot(self.z_u, self.n))

    @property
    def zn_d(self) -> float:
        return float(np.dot(self.z_d, self.n))

    @property
    def zt(self) -> float:
        return float(np.dot(self.z_u, self.t))

    @property
    def c_d(self) -> float:
        return sound_speed(self.upstream.gas, self.rho_d)

    @property
    def L_d(self) -> float:
        return float(np.hypot(*self.z_d)) / self.c_d

    @property
    def strength(self) -> float:
        return self.zn_u - self.zn_d


def normal_jump(gas: GasModel, rho_u: float, zn_u: float):
    """Compressive solution of the 1-d jump system.

    Solves rho_u*zn_u = rho_d*zn_d together with Bernoulli continuity
    pi(rho_d) + zn_d^2/2 = pi(rho_u) + zn_u^2/2 for the unique root with
    rho_d > rho_u.  Requires strictly supersonic normal inflow.
    """
    rho_u = float(rho_u)
    zn_u = float(zn_u)
    if rho_u <= 0.0:
        raise ValueError(f"upstream density must be positive, got {rho_u!r}")
    c_u = sound_speed(gas, rho_u)
    if not zn_u > c_u:
        raise NoShockError(
            f"upstream normal pseudo-velocity {zn_u:g} is not supersonic (c={c_u:g})"
        )
    rho_d = _kernels.jump_density(gas.gamma, rho_u, zn_u)
    return rho_d, rho_u * zn_u / rho_d


def normal_jump_batch(gas: GasModel, rho_u: float, zn_u):
    """Vectorized normal_jump over an array of upstream normal speeds."""
    zn = np.asarray(zn_u, dtype=float)
    c_u = sound_speed(gas, rho_u)
    if not np.all(zn > c_u):
        raise NoShockError("all upstream normal pseudo-velocities must exceed c")
    rho_d = _kernels.jump_density_batch(gas.gamma, rho_u, zn)
    return rho_d, rho_u * zn / rho_d


def oblique_jump(upstream: UpstreamData, xi, n) -> ShockPoint:
    """Jump across a shock with unit downstream normal n at the point xi."""
    xi = vec2(xi)
    n = unit(n)
    t = perp(n)
    z_u = upstream.z(xi)
    zn_u = float(np.dot(z_u, n))
    zt = float(np.dot(z_u, t))
    rho_d, zn_d = normal_jump(upstream.gas, upstream.rho, zn_u)
    v_d = xi + zn_d * n + zt * t
    return ShockPoint(upstream, xi, n, rho_d, v_d)


def shock_normal_from_velocities(v_u, v_d) -> np.ndarray:
    """n = (v_u - v_d)/|v_u - v_d|; the velocity jump is purely normal."""
    v_u = vec2(v_u)
    v_d = vec2(v_d)
    d = v_u - v_d
    nrm = float(np.hypot(*d))
    if nrm == 0.0:
        raise DegenerateShockError("velocity jump vanishes; shock normal undefined")
    return d / nrm


def downstream_density(upstream: UpstreamData, v, xi) -> float:
    """Density of the state (v, xi) sharing the upstream potential value at xi.

    This is pi_inv(-psi_I(xi) + v.xi - |v|^2/2), i.e. the Bernoulli density
    of a downstream state whose potential is continuous across a shock
    through xi.
    """
    v = vec2(v)
    xi = vec2(xi)
    q = -upstream.psi(xi) + float(np.dot(v, xi)) - 0.5 * float(np.dot(v, v))
    return pi_inv(upstream.gas, q)


def _strength_guard(upstream: UpstreamData, v) -> None:
    dv = float(np.hypot(*(vec2(v) - upstream.v)))
    if dv < 1e-9 * (1.0 + float(np.hypot(*upstream.v))):
        raise DegenerateShockError("v coincides with the upstream velocity")


def g_eval(upstream: UpstreamData, v, xi) -> float:
    """Shock-condition residual; g = 0 exactly on the shock polar through xi.

    g(v, xi) = (rho(v,xi) (v - xi) - rho_I (v_I - xi)) . n,
    n = (v_I - v)/|v_I - v|,

    the mass-flux mismatch along the normal implied by the velocity jump.
    """
    _strength_guard(upstream, v)
    v = vec2(v)
    xi = vec2(xi)
    rho = downstream_density(upstream, v, xi)
    n = shock_normal_from_velocities(upstream.v, v)
    flux = rho * (v - xi) - upstream.rho * (upstream.v - xi)
    return float(np.dot(flux, n))


def g_grad_v(upstream: UpstreamData, v, xi) -> np.ndarray:
    """Gradient of g in v, in closed form.

    g_v = rho (I - (z/c)^2) n - (rho - rho_I) z^t / |v_I - v| * t,

    valid where the shock conditions hold (g = 0).  In the (n, t) frame the
    components are rho (1 - (z^n/c)^2) > 0 and -z^t (rho z^n/c^2 +
    (rho - rho_I)/|v_I - v|), so the tangential sign is opposite to z^t.
    """
    _strength_guard(upstream, v)
    v = vec2(v)
    xi = vec2(xi)
    rho = downstream_density(upstream, v, xi)
    c2 = upstream.gas.gamma * rho ** (upstream.gas.gamma - 1.0)
    n = shock_normal_from_velocities(upstream.v, v)
    t = perp(n)
    z = v - xi
    zt = float(np.dot(z, t))
    dv = float(np.hypot(*(upstream.v - v)))
    return rho * (n - (float(np.dot(z, n)) / c2) * z) - ((rho - upstream.rho) * zt / dv) * t


def admissible(sp: ShockPoint) -> bool:
    """True iff the shock is compressive: z^n_u >= z^n_d (rho_d >= rho_u)."""
    slack = 1e-12 * max(1.0, abs(sp.zn_u))
    return sp.zn_u - sp.zn_d >= -slack
