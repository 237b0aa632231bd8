"""Local regular-reflection configurations and their reflected shocks.

The local problem is: given a constant upstream state (the hyperbolic side
of the reflected shock), a reflection point xi_r on a wall through the
similarity origin, find the admissible polar roots whose downstream
velocity is parallel to the wall and points downstream along it.  The
classical-reflection front end (state behind a straight incident shock)
and the supersonic wedge both reduce to this form.

Every solution carries corner-frame data computed once: the frame is
shifted so the downstream velocity vanishes, rotated so the wall is the
positive x axis and mirrored so the shock tangent enters the first
quadrant.  In that frame theta is the wall/shock-tangent angle and alpha
the counterclockwise angle from the shock tangent to -g_v(0, xi_r); the
classification trichotomy reads off alpha + theta versus 90 degrees.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FlowError
from .gas import GasModel, sound_speed
from .polar import ShockType, polar_trace, solve_deflection
from .shock import ShockPoint, UpstreamData, g_grad_v, oblique_jump
from ._vec import perp, rotate, signed_angle, unit, vec2

__all__ = [
    "ReflectionConfig",
    "ReflectionSolution",
    "CornerData",
    "state_behind_incident",
    "solve_reflection",
    "reflection_angles",
    "classify_by_angles",
    "shift_observer",
    "rotate_frame",
    "sweep_transitions",
    "SweepRow",
    "LocusPoint",
    "SweepResult",
    "sweep_rows_to_csv",
    "loci_to_csv",
]

SCENARIOS = ("classical_rr", "supersonic_wedge")

_F17 = "{:.17g}"


@dataclass(frozen=True)
class ReflectionConfig:
    """Local reflection data: upstream state, reflection point, wall.

    The wall passes through the similarity origin (xi_r . n_wall = 0, the
    slip-compatible normalization) and wall_dir points downstream.
    """

    upstream: UpstreamData
    xi_r: np.ndarray
    wall_dir: np.ndarray
    scenario: str = "classical_rr"

    def __post_init__(self):
        object.__setattr__(self, "xi_r", vec2(self.xi_r))
        object.__setattr__(self, "wall_dir", unit(self.wall_dir))
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        n_wall = perp(self.wall_dir)
        if abs(float(np.dot(self.xi_r, n_wall))) > 1e-10 * (1.0 + float(np.hypot(*self.xi_r))):
            raise ConfigError("xi_r does not lie on the wall through the origin")
        if not self.upstream.pseudo_mach(self.xi_r) > 1.0:
            raise ConfigError("upstream state is pseudo-subsonic at xi_r")

    @property
    def n_wall(self) -> np.ndarray:
        return perp(self.wall_dir)


@dataclass(frozen=True)
class CornerData:
    """Solution data in the normalized corner frame (wall = +x from xi_r)."""

    upstream: UpstreamData
    xi_r: np.ndarray
    n_r: np.ndarray
    t_r: np.ndarray
    z_d: np.ndarray
    gv: np.ndarray
    theta: float
    alpha: float
    psi_ref: float
    rho_d: float
    L3: float
    degenerate: bool


@dataclass(frozen=True)
class ReflectionSolution:
    shock: ShockPoint
    type: ShockType
    theta: float
    alpha: float
    L3: float
    sonic_character: str
    degenerate_theta: bool
    corner: CornerData


def state_behind_incident(upstream1: UpstreamData, xi, n_incident) -> UpstreamData:
    """Constant state behind a straight incident shock through xi.

    The returned UpstreamData is renormalized, which reproduces potential
    continuity across the incident shock exactly.
    """
    sp = oblique_jump(upstream1, xi, n_incident)
    return UpstreamData(upstream1.gas, sp.rho_d, sp.v_d)


def _corner_normalize(config: ReflectionConfig, sp: ShockPoint) -> CornerData:
    w = sp.v_d
    n_wall = config.n_wall
    if abs(float(np.dot(w, n_wall))) > 1e-10 * (1.0 + float(np.hypot(*w))):
        raise FlowError("downstream velocity is not wall-parallel; cannot normalize")
    up0 = config.upstream.shifted(w)
    xi0 = config.xi_r - w
    ang = float(np.arctan2(config.wall_dir[1], config.wall_dir[0]))
    v1 = rotate(up0.v, -ang)
    xi1 = rotate(xi0, -ang)
    n1 = rotate(sp.n, -ang)
    zd1 = rotate(sp.z_d, -ang)
    if float(np.dot(v1 - xi1, perp(n1))) < 0.0:
        flip = np.array([1.0, -1.0])
        v1 = v1 * flip
        xi1 = xi1 * flip
        n1 = n1 * flip
        zd1 = zd1 * flip
    up2 = UpstreamData(config.upstream.gas, config.upstream.rho, v1)
    t_r = perp(n1)
    zn_d = float(np.dot(zd1, n1))
    zt_d = float(np.dot(zd1, t_r))
    mag = float(np.hypot(*zd1))
    degenerate = zt_d <= 1e-9 * mag
    theta = float(np.degrees(np.arctan2(zn_d, zt_d)))
    gv = -g_grad_v(up2, np.zeros(2), xi1)
    gmag = float(np.hypot(*gv))
    if float(np.dot(gv, n1)) >= 1e-9 * gmag:
        raise FlowError("sign fact violated: -g_v . n_r must be negative")
    if float(np.dot(gv, t_r)) < -1e-9 * gmag:
        raise FlowError("sign fact violated: -g_v . t_r must be nonnegative")
    alpha = float(np.degrees(signed_angle(t_r, gv)))
    rho_d = sp.rho_d
    L3 = mag / sound_speed(config.upstream.gas, rho_d)
    return CornerData(up2, xi1, n1, t_r, zd1, gv, theta, alpha, up2.psi(xi1), rho_d, L3, degenerate)


def solve_reflection(config: ReflectionConfig, n_samples: int = 96):
    """All reflected-shock roots with wall-parallel downstream velocity.

    Returns 0, 1 or 2 ReflectionSolution entries sorted weak-first; an
    empty list is the detachment regime, not an error.  Zero-strength
    roots are excluded.
    """
    z_I = config.upstream.z(config.xi_r)
    tau_wall = signed_angle(z_I, config.wall_dir)
    if abs(tau_wall) >= np.pi / 2.0:
        return []
    polar = polar_trace(config.upstream, config.xi_r, n_samples)
    out = []
    for sp, st in solve_deflection(polar, tau_wall):
        if float(np.dot(sp.z_d, config.wall_dir)) <= 0.0:
            continue
        corner = _corner_normalize(config, sp)
        if corner.L3 < 1.0 - 1e-9:
            character = "transonic"
        elif corner.L3 > 1.0 + 1e-9:
            character = "supersonic"
        else:
            character = "sonic"
        out.append(
            ReflectionSolution(
                sp, st, corner.theta, corner.alpha, corner.L3, character, corner.degenerate, corner
            )
        )
    out.sort(key=lambda s: s.type.indicator)
    return out


def reflection_angles(solution: ReflectionSolution, config: ReflectionConfig):
    """(theta, alpha) in degrees, from the cached corner normalization.

    The sign facts -g_v.t_r > 0 and -g_v.n_r < 0 were asserted when the
    frame was built; recompute here so stale caches cannot slip through.
    """
    corner = _corner_normalize(config, solution.shock)
    return corner.theta, corner.alpha


def classify_by_angles(theta: float, alpha: float) -> str:
    """Trichotomy on alpha + theta versus 90 degrees (tolerance 1e-7 deg)."""
    if not (0.0 < theta < 90.0):
        raise ValueError(f"theta must lie in (0, 90) degrees, got {theta!r}")
    s = alpha + theta
    if s < 90.0 - 1e-7:
        return "weak"
    if s > 90.0 + 1e-7:
        return "strong"
    return "critical"


def shift_observer(config: ReflectionConfig, w) -> ReflectionConfig:
    """Change of inertial frame by observer velocity w (must be wall-parallel)."""
    w = vec2(w)
    if abs(float(np.dot(w, config.n_wall))) > 1e-12 * (1.0 + float(np.hypot(*w))):
        raise ConfigError("observer shift must be parallel to the wall")
    return ReflectionConfig(
        config.upstream.shifted(w), config.xi_r - w, config.wall_dir, config.scenario
    )


def rotate_frame(config: ReflectionConfig, angle: float) -> ReflectionConfig:
    """Rigid rotation of all vectors by angle (radians)."""
    up = UpstreamData(config.upstream.gas, config.upstream.rho, rotate(config.upstream.v, angle))
    return ReflectionConfig(
        up, rotate(config.xi_r, angle), rotate(config.wall_dir, angle), config.scenario
    )


@dataclass(frozen=True)
class SweepRow:
    tau_deg: float
    mach: float
    roots: int
    weak_L3: float
    weak_rho: float
    strong_rho: float
    weak_indicator: float
    strong_indicator: float


@dataclass(frozen=True)
class LocusPoint:
    gamma: float
    locus: str
    tau_deg: float
    mach: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    loci: tuple


def local_config(gamma: float, tau_deg: float, mach: float, scenario: str = "classical_rr") -> ReflectionConfig:
    """Canonical local configuration: unit density, wall along +x, xi_r = 0.

    The upstream pseudo-velocity has magnitude mach * c and makes the angle
    tau_deg with the wall.
    """
    gas = GasModel(gamma)
    c = sound_speed(gas, 1.0)
    tau = np.radians(tau_deg)
    v = mach * c * np.array([np.cos(tau), np.sin(tau)])
    return ReflectionConfig(UpstreamData(gas, 1.0, v), np.zeros(2), np.array([1.0, 0.0]), scenario)


def _row_for(gamma, tau_deg, mach, scenario, n_samples):
    sols = solve_reflection(local_config(gamma, tau_deg, mach, scenario), n_samples)
    weak = next((s for s in sols if s.type.label == "weak"), None)
    strong = next((s for s in sols if s.type.label == "strong"), None)
    nan = float("nan")
    return SweepRow(
        tau_deg,
        mach,
        len(sols),
        weak.L3 if weak else nan,
        weak.shock.rho_d if weak else nan,
        strong.shock.rho_d if strong else nan,
        weak.type.indicator if weak else nan,
        strong.type.indicator if strong else nan,
    )


def _root_count(gamma, tau_deg, mach, scenario, n_samples):
    return len(solve_reflection(local_config(gamma, tau_deg, mach, scenario), n_samples))


def _weak_L3(gamma, tau_deg, mach, scenario, n_samples):
    sols = solve_reflection(local_config(gamma, tau_deg, mach, scenario), n_samples)
    weak = next((s for s in sols if s.type.label == "weak"), None)
    return weak.L3 if weak else float("nan")


def sweep_transitions(scenario, gamma, tau_deg_values, mach_values, n_samples: int = 64, jobs: int = 1) -> SweepResult:
    """Root structure over a (tau, Mach) grid plus transition loci.

    Per grid point: root count, types and the weak root's downstream
    pseudo-Mach.  Per Mach column: the detachment locus (root count drops
    to zero) and the sonic locus (weak root crosses L3 = 1), both located
    by bisection between grid points.  Output ordering is deterministic.
    """
    taus = [float(t) for t in tau_deg_values]
    machs = [float(m) for m in mach_values]

    def column(mach):
        rows = [_row_for(gamma, t, mach, scenario, n_samples) for t in taus]
        loci = []
        for j in range(len(taus) - 1):
            c0, c1 = rows[j].roots, rows[j + 1].roots
            if c0 > 0 and c1 == 0:
                a, b = taus[j], taus[j + 1]
                for _ in range(60):
                    mid = 0.5 * (a + b)
                    if _root_count(gamma, mid, mach, scenario, n_samples) > 0:
                        a = mid
                    else:
                        b = mid
                    if b - a <= 1e-9:
                        break
                loci.append(LocusPoint(gamma, "detachment", 0.5 * (a + b), mach))
                break
        for j in range(len(taus) - 1):
            f0 = rows[j].weak_L3 - 1.0
            f1 = rows[j + 1].weak_L3 - 1.0
            if np.isfinite(f0) and np.isfinite(f1) and f0 * f1 < 0.0:
                a, b = taus[j], taus[j + 1]
                for _ in range(60):
                    mid = 0.5 * (a + b)
                    if (_weak_L3(gamma, mid, mach, scenario, n_samples) - 1.0) * f0 > 0.0:
                        a = mid
                    else:
                        b = mid
                    if b - a <= 1e-9:
                        break
                loci.append(LocusPoint(gamma, "sonic", 0.5 * (a + b), mach))
                break
        return rows, loci

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(column, machs))
    else:
        results = [column(m) for m in machs]

    rows = []
    loci = []
    for r, l in results:
        rows.extend(r)
        loci.extend(l)
    return SweepResult(tuple(rows), tuple(loci))


def sweep_rows_to_csv(result: SweepResult) -> str:
    lines = ["tau_deg,mach,roots,weak_L3,weak_rho,strong_rho,weak_indicator,strong_indicator"]
    for r in result.rows:
        floats = [r.weak_L3, r.weak_rho, r.strong_rho, r.weak_indicator, r.strong_indicator]
        lines.append(
            ",".join(
                [_F17.format(r.tau_deg), _F17.format(r.mach), str(r.roots)]
                + [_F17.format(v) for v in floats]
            )
        )
    return "\n".join(lines) + "\n"


def loci_to_csv(result: SweepResult) -> str:
    lines = ["gamma,locus,tau_deg,mach"]
    for p in result.loci:
        lines.append(f"{_F17.format(p.gamma)},{p.locus},{_F17.format(p.tau_deg)},{_F17.format(p.mach)}")
    return "\n".join(lines) + "\n"
