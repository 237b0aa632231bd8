"""Shock polar tracing, distinguished points and weak/strong typing.

The polar through a point xi with fixed upstream data is the curve of
downstream velocities v solving g(v, xi) = 0 over all shock normals.  It
is parametrized here by the upstream normal pseudo-Mach number
Mn = z^n_u / c_I in (1, |z_I|/c_I], with a side tag resolving the two
normals per Mn; the two sides are mirror images across the z_I axis.
Mn = |z_I|/c_I is the pseudo-normal point N (z^t = 0).

A shock is weak-type where g_v . z_d < 0, strong-type where > 0 and
critical-type at the sign change; normal shocks are strong-type, the
vanishing-strength end is weak-type.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateShockError, NoPolarError
from .shock import (
    ShockPoint,
    UpstreamData,
    admissible,
    g_eval,
    g_grad_v,
    normal_jump_batch,
    oblique_jump,
)
from ._vec import perp, rotate, signed_angle, unit, vec2

__all__ = [
    "ShockType",
    "PolarSample",
    "Polar",
    "polar_trace",
    "classify_type",
    "convexity_report",
    "ConvexityReport",
    "max_deflection",
    "solve_deflection",
    "polar_to_csv",
    "polar_rows_from_csv",
]

_F17 = "{:.17g}"


@dataclass(frozen=True)
class ShockType:
    """Type label with the raw classification indicator g_v . z_d."""

    label: str
    indicator: float


@dataclass(frozen=True)
class PolarSample:
    Mn: float
    side: int
    shock: ShockPoint


@dataclass(frozen=True)
class Polar:
    upstream: UpstreamData
    xi: np.ndarray
    samples: tuple
    normal_point: ShockPoint
    sonic_Mn: float
    Mn_max: float
    tau_star: float
    Mn_peak: float


def _normal_for(z_hat, Mn, Mn_max, side):
    # angle between n and z_I; side +1 rotates clockwise, giving z^t >= 0
    cphi = min(1.0, max(-1.0, Mn / Mn_max))
    phi = np.arccos(cphi)
    return rotate(z_hat, -side * phi)


def _shock_at(upstream: UpstreamData, xi, Mn: float, side: int, Mn_max: float) -> ShockPoint:
    z_hat = unit(upstream.z(xi))
    return oblique_jump(upstream, xi, _normal_for(z_hat, Mn, Mn_max, side))


def _deflection_at(upstream, xi, Mn, side, Mn_max) -> float:
    sp = _shock_at(upstream, xi, Mn, side, Mn_max)
    return signed_angle(sp.z_u, sp.z_d)


def polar_trace(upstream: UpstreamData, xi, n_samples: int = 96) -> Polar:
    """Trace the polar with n_samples points per side.

    Samples sit on a cosine-clustered Mn grid, denser near the
    vanishing-strength endpoint and near N.  Raises NoPolarError when the
    upstream state is pseudo-subsonic at xi.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    xi = vec2(xi)
    z_I = upstream.z(xi)
    c_I = upstream.c
    mag = float(np.hypot(*z_I))
    if not mag > c_I:
        raise NoPolarError("upstream pseudo-subsonic at xi")
    Mn_max = mag / c_I
    z_hat = z_I / mag

    k = np.arange(1, n_samples + 1, dtype=float)
    Mn = 1.0 + (Mn_max - 1.0) * 0.5 * (1.0 - np.cos(np.pi * k / n_samples))
    Mn[-1] = Mn_max
    rho_d, zn_d = normal_jump_batch(upstream.gas, upstream.rho, Mn * c_I)

    samples = []
    for side in (1, -1):
        for j in range(n_samples):
            n = _normal_for(z_hat, Mn[j], Mn_max, side)
            t = perp(n)
            zt = float(np.dot(z_I, t))
            v_d = xi + zn_d[j] * n + zt * t
            samples.append(PolarSample(float(Mn[j]), side, ShockPoint(upstream, xi, n, float(rho_d[j]), v_d)))
    normal_point = samples[n_samples - 1].shock

    # downstream sonic point: L_d crosses 1 between vanishing strength and N
    sonic = float("nan")
    plus = samples[:n_samples]
    for j in range(n_samples - 1):
        f0 = plus[j].shock.L_d - 1.0
        f1 = plus[j + 1].shock.L_d - 1.0
        if f0 == 0.0:
            sonic = plus[j].Mn
            break
        if f0 * f1 < 0.0:
            a, b = plus[j].Mn, plus[j + 1].Mn
            for _ in range(100):
                mid = 0.5 * (a + b)
                if (_shock_at(upstream, xi, mid, 1, Mn_max).L_d - 1.0) * f0 > 0.0:
                    a = mid
                else:
                    b = mid
                if b - a <= 1e-12:
                    break
            sonic = 0.5 * (a + b)
            break

    tau_star, Mn_peak = _find_peak(upstream, xi, Mn, plus, Mn_max)
    return Polar(upstream, xi, tuple(samples), normal_point, sonic, Mn_max, tau_star, Mn_peak)


def _find_peak(upstream, xi, Mn_grid, plus_samples, Mn_max):
    """Maximum turning angle on the + side (golden-section around the best sample)."""
    defl = [signed_angle(s.shock.z_u, s.shock.z_d) for s in plus_samples]
    j = int(np.argmax(defl))
    lo = Mn_grid[j - 1] if j > 0 else 1.0 + 1e-14 * (Mn_max - 1.0)
    hi = Mn_grid[j + 1] if j + 1 < len(Mn_grid) else Mn_max
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = _deflection_at(upstream, xi, x1, 1, Mn_max)
    f2 = _deflection_at(upstream, xi, x2, 1, Mn_max)
    for _ in range(120):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = _deflection_at(upstream, xi, x2, 1, Mn_max)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = _deflection_at(upstream, xi, x1, 1, Mn_max)
        if b - a <= 1e-13 * max(1.0, b):
            break
    peak = 0.5 * (a + b)
    # The deflection is flat at its maximum, so golden section localizes the
    # peak only to ~sqrt(eps).  The peak coincides with the critical point
    # (g_v perpendicular to z_d), whose indicator crosses zero transversally;
    # polish with a bisection on it.
    def indicator(m):
        sp = _shock_at(upstream, xi, m, 1, Mn_max)
        return float(np.dot(g_grad_v(upstream, sp.v_d, xi), sp.z_d))

    w = 1e-7 * (Mn_max - 1.0)
    a = max(peak - w, 1.0 + 1e-14 * (Mn_max - 1.0))
    b = min(peak + w, Mn_max)
    fa, fb = indicator(a), indicator(b)
    for _ in range(60):
        if fa < 0.0 < fb:
            break
        w *= 4.0
        a = max(peak - w, 1.0 + 1e-14 * (Mn_max - 1.0))
        b = min(peak + w, Mn_max)
        fa, fb = indicator(a), indicator(b)
    if fa < 0.0 < fb:
        for _ in range(100):
            mid = 0.5 * (a + b)
            if indicator(mid) < 0.0:
                a = mid
            else:
                b = mid
            if b - a <= 1e-15 * max(1.0, b):
                break
        peak = 0.5 * (a + b)
    return _deflection_at(upstream, xi, peak, 1, Mn_max), peak


def classify_type(upstream: UpstreamData, sp: ShockPoint) -> ShockType:
    """Weak/strong/critical label from the sign of g_v . z_d.

    The critical band is relative: |indicator| <= 1e-9 |g_v| |z_d|.
    """
    if sp.strength <= 1e-12 * max(1.0, abs(sp.zn_u)):
        raise DegenerateShockError("cannot classify a zero-strength shock")
    gv = g_grad_v(upstream, sp.v_d, sp.xi)
    z_d = sp.z_d
    indicator = float(np.dot(gv, z_d))
    tol = 1e-9 * float(np.hypot(*gv)) * float(np.hypot(*z_d))
    if indicator < -tol:
        label = "weak"
    elif indicator > tol:
        label = "strong"
    else:
        label = "critical"
    return ShockType(label, indicator)


@dataclass(frozen=True)
class ConvexityReport:
    curvature: np.ndarray
    single_signed: bool


def convexity_report(polar: Polar) -> ConvexityReport:
    """Discrete signed curvature along the admissible branch.

    Uses the three-point circumcircle formula on the ordered branch
    (side + ascending, then side - descending through N).  Requires at
    least 16 samples per side.
    """
    n = len(polar.samples) // 2
    if n < 16:
        raise ValueError("convexity check needs at least 16 samples per side")
    plus = polar.samples[:n]
    minus = polar.samples[n:]
    pts = [s.shock.v_d for s in plus] + [s.shock.v_d for s in reversed(minus[:-1])]
    pts = np.asarray(pts)
    curv = np.empty(len(pts) - 2)
    for i in range(1, len(pts) - 1):
        u = pts[i] - pts[i - 1]
        w = pts[i + 1] - pts[i]
        num = 2.0 * (u[0] * w[1] - u[1] * w[0])
        den = float(np.hypot(*u) * np.hypot(*w) * np.hypot(*(pts[i + 1] - pts[i - 1])))
        curv[i - 1] = num / den
    single = bool(np.all(curv > 0.0) or np.all(curv < 0.0))
    return ConvexityReport(curv, single)


def max_deflection(polar: Polar):
    """Largest turning angle tau_* (radians) and the Mn where it is attained."""
    return polar.tau_star, polar.Mn_peak


def _bisect_deflection(upstream, xi, target, a, b, fa_sign, side, Mn_max):
    """Root of deflection(Mn) - target on [a, b]; fa_sign is the sign at a."""
    for _ in range(100):
        mid = 0.5 * (a + b)
        f = side * _deflection_at(upstream, xi, mid, side, Mn_max) - target
        if f == 0.0:
            return mid
        if (f > 0.0) == (fa_sign > 0.0):
            a = mid
        else:
            b = mid
        if b - a <= 1e-12:
            break
    # secant refinement inside the bracket
    x0, x1 = a, b
    f0 = side * _deflection_at(upstream, xi, x0, side, Mn_max) - target
    f1 = side * _deflection_at(upstream, xi, x1, side, Mn_max) - target
    for _ in range(3):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (a <= x2 <= b):
            break
        x0, f0, x1 = x1, f1, x2
        f1 = side * _deflection_at(upstream, xi, x1, side, Mn_max) - target
    return x1


def solve_deflection(polar: Polar, tau: float):
    """Admissible polar points whose z_d makes the signed angle tau with z_I.

    tau is in radians.  Returns a list of (ShockPoint, ShockType) sorted by
    Mn; empty means detachment.  For tau = 0 the single nonzero-strength
    root is the pseudo-normal point N; the vanishing-strength root is
    excluded.
    """
    up, xi, Mn_max = polar.upstream, polar.xi, polar.Mn_max
    if abs(tau) <= 1e-13:
        return [(polar.normal_point, classify_type(up, polar.normal_point))]
    side = 1 if tau > 0.0 else -1
    atau = abs(tau)
    tau_star, Mn_peak = polar.tau_star, polar.Mn_peak
    if atau > tau_star:
        return []
    roots = []
    if tau_star - atau <= 1e-12:
        roots = [Mn_peak]
    else:
        lo = 1.0 + 1e-14 * (Mn_max - 1.0)
        roots.append(_bisect_deflection(up, xi, atau, lo, Mn_peak, -1.0, side, Mn_max))
        roots.append(_bisect_deflection(up, xi, atau, Mn_peak, Mn_max, +1.0, side, Mn_max))
    # defensive sweep for further brackets (none for convex polars)
    n = len(polar.samples) // 2
    branch = polar.samples[:n] if side == 1 else polar.samples[n:]
    vals = [side * signed_angle(s.shock.z_u, s.shock.z_d) - atau for s in branch]
    for j in range(len(branch) - 1):
        if vals[j] * vals[j + 1] < 0.0:
            a, b = branch[j].Mn, branch[j + 1].Mn
            if any(a - 1e-9 <= r <= b + 1e-9 for r in roots):
                continue
            roots.append(_bisect_deflection(up, xi, atau, a, b, vals[j], side, Mn_max))
    roots = sorted(set(round(r, 15) for r in roots))[:3]
    out = []
    for r in roots:
        sp = _shock_at(up, xi, r, side, Mn_max)
        if admissible(sp):
            out.append((sp, classify_type(up, sp)))
    return out


def polar_to_csv(polar: Polar) -> str:
    """CSV serialization, one row per sample, 17-significant-digit floats."""
    lines = ["Mn,side,nx,ny,vx,vy,rho_d,zt,zn_d,indicator,type"]
    for s in polar.samples:
        sp = s.shock
        st = classify_type(polar.upstream, sp)
        nums = [s.Mn, sp.n[0], sp.n[1], sp.v_d[0], sp.v_d[1], sp.rho_d, sp.zt, sp.zn_d, st.indicator]
        f = [_F17.format(x) for x in nums]
        lines.append(
            f"{f[0]},{'+' if s.side == 1 else '-'},{f[1]},{f[2]},{f[3]},{f[4]},{f[5]},{f[6]},{f[7]},{f[8]},{st.label}"
        )
    return "\n".join(lines) + "\n"


def polar_rows_from_csv(text: str):
    """Parse the CSV produced by polar_to_csv into a list of dicts."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        row = {}
        for key, val in zip(header, parts):
            if key == "side":
                row[key] = 1 if val == "+" else -1
            elif key == "type":
                row[key] = val
            else:
                row[key] = float(val)
        rows.append(row)
    return rows
