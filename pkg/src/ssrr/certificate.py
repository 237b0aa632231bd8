"""Numerical certificate that a strong-type reflection admits no minimum
at the reflection corner.

Pipeline: take the strong reflected-shock root in the corner frame (wall
along +x, downstream velocity zero, shock tangent in the first quadrant),
dilate horizontally by 1/a with a = sqrt(1 - L3^2) so the flow equation at
the corner becomes the Laplace equation, then build the comparison
function

    Psi(r, phi) = psi_ref + eps * r * cos(beta * phi),   beta in (0, 1),

in polar coordinates about the corner.  For strong-type data the dilated
angles satisfy 90 < alpha~ + theta~ < 180, so beta close to 1 makes Psi
superharmonic with margin delta_interior * eps / r, strictly decreasing
along -g_v on the shock-tangent ray with margin delta_shock * eps, exactly
slip-compatible on the wall, and descending at the corner at rate eps.
Together these margins exclude a corner minimum.  All margins are minima
over sample grids, reported explicitly.

Angle transformation under the dilation: tangent-type vectors (the shock
tangent and -g_v) are mapped by diag(1/a, 1) and angles recomputed.  This
is an implementation choice (it reproduces the Laplace reduction and
preserves the strong-type window exactly, since positive diagonal scaling
preserves component signs); it is covered by the trichotomy-preservation
property test.
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateThetaError, NotEllipticError, NotStrongTypeError
from .reflection import ReflectionConfig, ReflectionSolution, solve_reflection

__all__ = [
    "CornerFrame",
    "Subsolution",
    "Certificate",
    "dilate_angles",
    "build_corner_frame",
    "choose_beta",
    "subsolution_eval",
    "shock_ray_margin",
    "check_certificate",
    "certify_nonexistence",
    "certificate_to_json",
    "certificate_from_json",
]


@dataclass(frozen=True)
class CornerFrame:
    """Corner-frame data with its anisotropic dilation.

    Angles are degrees.  gv is -g_v(0, xi_r) in corner coordinates and
    gv_t its image under the dilation map diag(1/a, 1).
    """

    xi_r: np.ndarray
    theta: float
    alpha: float
    a: float
    theta_t: float
    alpha_t: float
    gv: np.ndarray
    gv_t: np.ndarray
    psi_ref: float
    rho_d: float
    L3: float


@dataclass(frozen=True)
class Subsolution:
    """Comparison function Psi = psi_ref + eps r cos(beta phi)."""

    psi_ref: float
    epsilon: float
    beta: float
    frame: CornerFrame

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if not (0.0 < self.beta < 1.0):
            raise ValueError("beta must lie in (0, 1)")


@dataclass(frozen=True)
class Certificate:
    status: str
    beta: Optional[float] = None
    epsilon: Optional[float] = None
    delta_interior: Optional[float] = None
    delta_shock: Optional[float] = None
    wall_residual: Optional[float] = None
    corner_descent: Optional[float] = None
    frame: Optional[CornerFrame] = None
    reason: Optional[str] = None
    delta_interior_undilated: Optional[float] = None
    delta_shock_undilated: Optional[float] = None


def dilate_angles(theta: float, alpha: float, a: float):
    """Dilated angles (theta~, alpha~) for the map diag(1/a, 1), degrees in/out."""
    if not (0.0 < a <= 1.0):
        raise ValueError("dilation factor a must lie in (0, 1]")
    th = np.radians(theta)
    t_t = np.array([np.cos(th) / a, np.sin(th)])
    theta_t = float(np.degrees(np.arctan2(t_t[1], t_t[0])))
    g = np.radians(alpha + theta)
    g_t = np.array([np.cos(g) / a, np.sin(g)])
    ang_g = float(np.degrees(np.arctan2(g_t[1], g_t[0])))
    return theta_t, ang_g - theta_t


def build_corner_frame(config: ReflectionConfig, solution: ReflectionSolution,
                       require_strong: bool = True) -> CornerFrame:
    """Corner frame with dilation for a solved reflection.

    Raises DegenerateThetaError for theta = 90 deg (pseudo-normal root),
    NotEllipticError when the downstream state is not pseudo-subsonic, and
    NotStrongTypeError for weak/critical input unless require_strong is
    False (the bypass used to probe the failure mode of weak frames).
    """
    corner = solution.corner
    if solution.degenerate_theta:
        raise DegenerateThetaError("theta = 90 deg: corner construction undefined")
    if require_strong and solution.type.label != "strong":
        raise NotStrongTypeError(f"reflected shock is {solution.type.label}-type")
    if corner.L3 >= 1.0:
        raise NotEllipticError(f"downstream pseudo-Mach {corner.L3:g} >= 1 at the corner")
    a = float(np.sqrt(1.0 - corner.L3 ** 2))
    theta_t, alpha_t = dilate_angles(corner.theta, corner.alpha, a)
    gv_t = corner.gv / np.array([a, 1.0])
    return CornerFrame(
        corner.xi_r, corner.theta, corner.alpha, a, theta_t, alpha_t,
        corner.gv, gv_t, corner.psi_ref, corner.rho_d, corner.L3,
    )


def choose_beta(frame: CornerFrame) -> float:
    """Deterministic beta search over the family 1 - 2**-k, k = 1..40.

    Feasibility is twofold: alpha~ + beta theta~ must clear 90 degrees by
    half the available window (capped at 1 degree), and the closed-form
    shock-ray margin must be positive -- the window condition alone does
    not control the (1-beta) cos(alpha~) cos(beta theta~) term when beta
    is far from 1.  The smallest feasible k keeps the interior margin
    (1 - beta^2) cos(beta theta~) healthy; for any strong-type frame some
    k succeeds because the margin tends to -cos(alpha~ + theta~) > 0."""
    window = frame.alpha_t + frame.theta_t - 90.0
    if window <= 0.0:
        raise NotStrongTypeError("dilated frame is not strong-type")
    margin = min(1.0, 0.5 * window)
    for k in range(1, 41):
        beta = 1.0 - 2.0 ** (-k)
        if frame.alpha_t + beta * frame.theta_t <= 90.0 + margin:
            continue
        if shock_ray_margin(frame.alpha_t, frame.theta_t, beta) > 0.0:
            return beta
    raise NotStrongTypeError("no feasible beta in the search family")


def subsolution_eval(sub: Subsolution, r, phi):
    """Closed-form Psi, polar gradient and Laplacian.

    Returns (Psi, (dPsi_dr, dPsi_dphi / r), laplacian); accepts scalars or
    broadcastable arrays.  Requires r > 0 and phi in [0, theta~].
    """
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("r must be positive")
    th_t = np.radians(sub.frame.theta_t)
    if np.any(phi < -1e-12) or np.any(phi > th_t + 1e-9):
        raise ValueError("phi must lie in [0, theta~]")
    eps, beta = sub.epsilon, sub.beta
    cosb = np.cos(beta * phi)
    psi = sub.psi_ref + eps * r * cosb
    d_r = eps * cosb * np.ones_like(r * phi)
    d_phi_over_r = -eps * beta * np.sin(beta * phi) * np.ones_like(r * phi)
    # Lap(Psi) = Psi_rr + Psi_r/r + Psi_phiphi/r^2; positive for beta < 1,
    # so -Lap(Psi) carries the required negative interior sign
    lap = eps * (1.0 - beta ** 2) * cosb / r
    return psi, (d_r, d_phi_over_r), lap


def shock_ray_margin(alpha_t_deg: float, theta_t_deg: float, beta: float) -> float:
    """Closed form of delta_shock:

    -[(1 - beta) cos(alpha~) cos(beta theta~) + beta cos(alpha~ + beta theta~)],

    the descent rate of Psi along the unit -g_v~ direction on the ray
    phi = theta~, divided by eps.  Positive for beta close enough to 1 on
    strong-type frames; tends to -cos(alpha~ + theta~) as beta -> 1.
    """
    al = np.radians(alpha_t_deg)
    th = np.radians(theta_t_deg)
    return float(-((1.0 - beta) * np.cos(al) * np.cos(beta * th) + beta * np.cos(al + beta * th)))


def check_certificate(frame: CornerFrame, beta: float, epsilon: float,
                      n_r: int = 64, n_phi: int = 64) -> Certificate:
    """Evaluate every sign condition of the construction on a sample grid.

    Grid: r log-spaced in [1e-6, 1], phi uniform in [0, theta~], sizes at
    least 64.  Margins are minima over the grid:

      delta_interior  min of (1 - beta^2) cos(beta phi), so that
                      -Lap(Psi) <= -delta_interior * eps / r holds,
      delta_shock     descent rate along -g_v~ on the shock-tangent ray,
      wall_residual   max |dPsi/dphi| on the wall (exactly zero in closed form),
      corner_descent  d/dr (psi - Psi) at the corner = -eps.

    Undilated constants: the interior margin transfers with a factor a and
    the shock margin with the factor |g_v~| (for the unnormalized gradient).
    """
    if not (0.0 < beta < 1.0):
        raise ValueError("infeasible beta: must lie in (0, 1)")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    if n_r < 64 or n_phi < 64:
        raise ValueError("grid too coarse: need at least 64 x 64 samples")
    sub = Subsolution(frame.psi_ref, epsilon, beta, frame)
    th_t = np.radians(frame.theta_t)
    al_t = np.radians(frame.alpha_t)
    r = np.logspace(-6.0, 0.0, n_r)
    phi = np.linspace(0.0, th_t, n_phi)
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    _, _, lap = subsolution_eval(sub, rr, pp)
    delta_interior = float(np.min(lap * rr / epsilon))

    _, (d_r, d_phi_over_r), _ = subsolution_eval(sub, r, np.full_like(r, th_t))
    ray_vals = -(np.cos(al_t) * d_r + np.sin(al_t) * d_phi_over_r) / epsilon
    delta_shock = float(np.min(ray_vals))

    _, (_, d_phi0_over_r), _ = subsolution_eval(sub, r, np.zeros_like(r))
    wall_residual = float(np.max(np.abs(d_phi0_over_r * r)))

    corner_descent = -epsilon

    checks = [
        ("delta_interior", delta_interior > 0.0),
        ("delta_shock", delta_shock > 0.0),
        ("wall_residual", wall_residual < 1e-14),
        ("corner_descent", corner_descent < 0.0),
    ]
    failed = [name for name, ok in checks if not ok]
    status = "certified" if not failed else "failed"
    reason = None if not failed else "checks failed: " + ", ".join(failed)
    gmag_t = float(np.hypot(*frame.gv_t))
    return Certificate(
        status=status,
        beta=beta,
        epsilon=epsilon,
        delta_interior=delta_interior,
        delta_shock=delta_shock,
        wall_residual=wall_residual,
        corner_descent=corner_descent,
        frame=frame,
        reason=reason,
        delta_interior_undilated=frame.a * delta_interior,
        delta_shock_undilated=gmag_t * delta_shock,
    )


def certify_nonexistence(config: ReflectionConfig, epsilon: float = 1e-3,
                         beta: Optional[float] = None,
                         n_r: int = 64, n_phi: int = 64,
                         n_samples: int = 96) -> Certificate:
    """End-to-end certificate for the strong root of a reflection config.

    Statuses: "certified" when every margin check passes; "not_strong_type"
    when no strong root exists (detachment, weak/critical only) or no
    feasible beta; "degenerate_theta" for the pseudo-normal root;
    "failed" with a reason otherwise.
    """
    solutions = solve_reflection(config, n_samples)
    strong = [s for s in solutions if s.type.label == "strong"]
    if not strong:
        labels = sorted({s.type.label for s in solutions})
        reason = "no reflected shock (detachment)" if not solutions else (
            "only " + "/".join(labels) + "-type roots"
        )
        return Certificate(status="not_strong_type", epsilon=epsilon, reason=reason)
    pick = max(strong, key=lambda s: s.type.indicator)
    try:
        frame = build_corner_frame(config, pick)
    except DegenerateThetaError as exc:
        return Certificate(status="degenerate_theta", epsilon=epsilon, reason=str(exc))
    except NotEllipticError as exc:
        return Certificate(status="failed", epsilon=epsilon, reason=str(exc))
    try:
        b = beta if beta is not None else choose_beta(frame)
    except NotStrongTypeError as exc:
        return Certificate(status="not_strong_type", epsilon=epsilon, frame=frame, reason=str(exc))
    return check_certificate(frame, b, epsilon, n_r, n_phi)


def _frame_dict(frame: Optional[CornerFrame]):
    if frame is None:
        return None
    return {
        "theta": frame.theta,
        "alpha": frame.alpha,
        "a": frame.a,
        "theta_t": frame.theta_t,
        "alpha_t": frame.alpha_t,
    }


def certificate_to_json(cert: Certificate) -> str:
    doc = {
        "status": cert.status,
        "beta": cert.beta,
        "epsilon": cert.epsilon,
        "delta_interior": cert.delta_interior,
        "delta_shock": cert.delta_shock,
        "wall_residual": cert.wall_residual,
        "corner_descent": cert.corner_descent,
        "frame": _frame_dict(cert.frame),
        "reason": cert.reason,
        "undilated": {
            "delta_interior": cert.delta_interior_undilated,
            "delta_shock": cert.delta_shock_undilated,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def certificate_from_json(text: str) -> Certificate:
    doc = json.loads(text)
    frame = None
    if doc.get("frame") is not None:
        f = doc["frame"]
        frame = CornerFrame(
            xi_r=np.zeros(2), theta=f["theta"], alpha=f["alpha"], a=f["a"],
            theta_t=f["theta_t"], alpha_t=f["alpha_t"],
            gv=np.zeros(2), gv_t=np.zeros(2), psi_ref=0.0, rho_d=0.0, L3=0.0,
        )
    und = doc.get("undilated") or {}
    return Certificate(
        status=doc["status"],
        beta=doc.get("beta"),
        epsilon=doc.get("epsilon"),
        delta_interior=doc.get("delta_interior"),
        delta_shock=doc.get("delta_shock"),
        wall_residual=doc.get("wall_residual"),
        corner_descent=doc.get("corner_descent"),
        frame=frame,
        reason=doc.get("reason"),
        delta_interior_undilated=und.get("delta_interior"),
        delta_shock_undilated=und.get("delta_shock"),
    )
