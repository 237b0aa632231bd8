"""Minimum-principle diagnostics on labeled grid fields.

This module does not solve anything: it consumes a sampled candidate
potential on a labeled rectangular grid and verifies the boundary and
extremum sign conditions that any valid transonic reflection field must
satisfy: positive outward normal derivative on the opposite wall and on
the parabolic arc, slip (zero normal derivative) on the reflection wall,
upstream-potential continuity on shock nodes, no interior extrema, and a
unique global minimum at the reflection corner.  Shock nodes that are
discrete minima are tested against the normal-shock monotonicity
comparison (a shock point farther upstream is stronger, so the implied
normal derivative contradicts the minimum condition) and flagged
"excluded" when the contradiction holds.

Node mask labels: I interior, O outside, A reflection wall, B opposite
wall, S shock, P parabolic arc, R reflection corner (exactly one).

File format (text, bit-exact parse), values row-major with the y index
fastest (line k = i*ny + j for node i, j):

    SSRR-FIELD 1
    nx ny x0 y0 dx dy
    gamma rho_I vIx vIy xirx xiry
    psi label          (nx*ny lines)

Geometry caveat: the normal-derivative checks assume axis-aligned walls;
slanted walls rasterize to staircases whose estimated normals are O(1)
wrong.  Arcs (P) use the outward-neighbor direction estimate, which is
adequate for sign checks away from axis-tangent points.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import FieldFormatError
from .gas import GasModel
from .shock import UpstreamData, normal_jump
from ._vec import perp, unit, vec2

__all__ = [
    "LABELS",
    "GridField",
    "read_field",
    "write_field",
    "field_to_text",
    "Extremum",
    "find_extrema",
    "WallEntry",
    "WallReport",
    "check_wall_signs",
    "ShockEntry",
    "ShockReport",
    "check_shock_nodes",
    "Offense",
    "MinimumReport",
    "minimum_report",
    "synthesize_weak_field",
    "synthesize_arc_field",
]

LABELS = {
    "I": "interior",
    "O": "outside",
    "A": "wall_A",
    "B": "wall_B",
    "S": "shock_S",
    "P": "arc_P",
    "R": "corner_r",
}

_F17 = "{:.17g}"


@dataclass(frozen=True)
class GridField:
    """Sampled potential on a labeled rectangular grid.

    psi_offset shifts the upstream potential in memory only (the file
    format pins the offset to the Bernoulli normalization); it exists so
    that the gauge invariance psi -> psi + C, psi_I -> psi_I + C can be
    exercised.
    """

    origin: np.ndarray
    spacing: tuple
    values: np.ndarray
    mask: np.ndarray
    upstream: UpstreamData
    xi_r: np.ndarray
    psi_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "origin", vec2(self.origin))
        object.__setattr__(self, "xi_r", vec2(self.xi_r))
        vals = np.asarray(self.values, dtype=float)
        mask = np.asarray(self.mask, dtype="<U1")
        if vals.ndim != 2 or vals.shape != mask.shape:
            raise FieldFormatError("values and mask must be 2-d arrays of equal shape")
        dx, dy = float(self.spacing[0]), float(self.spacing[1])
        if dx <= 0.0 or dy <= 0.0:
            raise FieldFormatError("grid spacing must be positive")
        object.__setattr__(self, "spacing", (dx, dy))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "mask", mask)
        bad = set(np.unique(mask)) - set(LABELS)
        if bad:
            raise FieldFormatError(f"unknown mask labels: {sorted(bad)}")
        if int(np.count_nonzero(mask == "R")) != 1:
            raise FieldFormatError("exactly one corner_r node is required")
        self._validate_geometry()

    def _validate_geometry(self):
        nx, ny = self.mask.shape
        ii, jj = np.nonzero(self.mask == "I")
        for i, j in zip(ii, jj):
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if not (0 <= a < nx and 0 <= b < ny) or self.mask[a, b] == "O":
                    raise FieldFormatError(
                        f"interior node ({i},{j}) touches an unlabeled boundary"
                    )
        if len(ii) > 1:
            seen = np.zeros(self.mask.shape, dtype=bool)
            stack = [(int(ii[0]), int(jj[0]))]
            seen[ii[0], jj[0]] = True
            while stack:
                i, j = stack.pop()
                for di in (-1, 0, 1):
                    for dj in (-1, 0, 1):
                        a, b = i + di, j + dj
                        if 0 <= a < nx and 0 <= b < ny and not seen[a, b] and self.mask[a, b] == "I":
                            seen[a, b] = True
                            stack.append((a, b))
            if not np.all(seen[self.mask == "I"]):
                raise FieldFormatError("interior nodes do not form a connected region")

    @property
    def shape(self):
        return self.values.shape

    def node_xy(self, i: int, j: int) -> np.ndarray:
        return self.origin + np.array([i * self.spacing[0], j * self.spacing[1]])

    def psi_upstream(self, xy) -> float:
        return self.upstream.psi(xy) + self.psi_offset

    def corner_node(self):
        i, j = np.argwhere(self.mask == "R")[0]
        return int(i), int(j)

    def in_domain(self, i: int, j: int) -> bool:
        nx, ny = self.mask.shape
        return 0 <= i < nx and 0 <= j < ny and self.mask[i, j] != "O"

    def neighbors8(self, i: int, j: int):
        out = []
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                if self.in_domain(i + di, j + dj):
                    out.append((i + di, j + dj))
        return out


def field_to_text(field: GridField) -> str:
    nx, ny = field.shape
    lines = ["SSRR-FIELD 1"]
    lines.append(
        " ".join(
            _F17.format(v)
            for v in (nx, ny, field.origin[0], field.origin[1], field.spacing[0], field.spacing[1])
        )
    )
    up = field.upstream
    lines.append(
        " ".join(
            _F17.format(v)
            for v in (up.gas.gamma, up.rho, up.v[0], up.v[1], field.xi_r[0], field.xi_r[1])
        )
    )
    for i in range(nx):
        for j in range(ny):
            lines.append(f"{_F17.format(field.values[i, j])} {field.mask[i, j]}")
    return "\n".join(lines) + "\n"


def write_field(field: GridField, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(field_to_text(field))


def read_field(path) -> GridField:
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines or lines[0].strip() != "SSRR-FIELD 1":
        raise FieldFormatError("missing SSRR-FIELD 1 header")
    try:
        nx_f, ny_f, x0, y0, dx, dy = (float(v) for v in lines[1].split())
        gamma, rho, vx, vy, xirx, xiry = (float(v) for v in lines[2].split())
    except (IndexError, ValueError) as exc:
        raise FieldFormatError(f"malformed header: {exc}") from exc
    nx, ny = int(nx_f), int(ny_f)
    if len(lines) < 3 + nx * ny:
        raise FieldFormatError(f"expected {nx * ny} node lines, found {len(lines) - 3}")
    values = np.empty((nx, ny))
    mask = np.empty((nx, ny), dtype="<U1")
    k = 3
    for i in range(nx):
        for j in range(ny):
            parts = lines[k].split()
            if len(parts) != 2:
                raise FieldFormatError(f"line {k + 1}: expected 'psi label'")
            values[i, j] = float(parts[0])
            mask[i, j] = parts[1]
            k += 1
    upstream = UpstreamData(GasModel(gamma), rho, np.array([vx, vy]))
    return GridField(np.array([x0, y0]), (dx, dy), values, mask, upstream, np.array([xirx, xiry]))


@dataclass(frozen=True)
class Extremum:
    node: tuple
    kind: str
    strict: bool
    is_global: bool


def find_extrema(field: GridField):
    """Discrete local extrema over 8-neighborhoods of all non-outside nodes.

    An extremum is strict when every neighbor is strictly larger/smaller;
    plateau candidates (ties, none beyond) are reported with strict=False.
    Nodes attaining the global extremum are flagged.
    """
    vals = field.values
    domain = field.mask != "O"
    gmin = float(np.min(vals[domain]))
    gmax = float(np.max(vals[domain]))
    out = []
    for i, j in np.argwhere(domain):
        nb = field.neighbors8(i, j)
        if not nb:
            continue
        v = vals[i, j]
        nbvals = np.array([vals[a, b] for a, b in nb])
        if np.all(nbvals >= v):
            out.append(Extremum((int(i), int(j)), "min", bool(np.all(nbvals > v)), v == gmin))
        elif np.all(nbvals <= v):
            out.append(Extremum((int(i), int(j)), "max", bool(np.all(nbvals < v)), v == gmax))
    return out


def _axis_derivative(field: GridField, i: int, j: int, axis: int) -> float:
    h = field.spacing[axis]
    d = (1, 0) if axis == 0 else (0, 1)

    def val(s):
        return field.values[i + s * d[0], j + s * d[1]]

    def has(s):
        return field.in_domain(i + s * d[0], j + s * d[1])

    if has(1) and has(-1):
        return (val(1) - val(-1)) / (2.0 * h)
    if has(1) and has(2):
        return (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h)
    if has(-1) and has(-2):
        return (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / (2.0 * h)
    if has(1):
        return (val(1) - val(0)) / h
    if has(-1):
        return (val(0) - val(-1)) / h
    return 0.0


def _gradient_estimate(field: GridField, i: int, j: int) -> np.ndarray:
    return np.array([_axis_derivative(field, i, j, 0), _axis_derivative(field, i, j, 1)])


def _second_difference_bound(field: GridField, i: int, j: int) -> float:
    best = 0.0
    for axis, d in ((0, (1, 0)), (1, (0, 1))):
        h = field.spacing[axis]

        def val(s):
            return field.values[i + s * d[0], j + s * d[1]]

        def has(s):
            return field.in_domain(i + s * d[0], j + s * d[1])

        if has(1) and has(2):
            best = max(best, abs(val(0) - 2.0 * val(1) + val(2)) / h ** 2)
        if has(-1) and has(-2):
            best = max(best, abs(val(0) - 2.0 * val(-1) + val(-2)) / h ** 2)
        if has(1) and has(-1):
            best = max(best, abs(val(1) - 2.0 * val(0) + val(-1)) / h ** 2)
    return best


def _outward_estimate(field: GridField, i: int, j: int) -> Optional[np.ndarray]:
    nx, ny = field.shape
    acc = np.zeros(2)
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        a, b = i + di, j + dj
        if not (0 <= a < nx and 0 <= b < ny) or field.mask[a, b] == "O":
            acc += np.array([di * field.spacing[0], dj * field.spacing[1]])
    if np.hypot(*acc) == 0.0:
        for di in (-1, 1):
            for dj in (-1, 1):
                a, b = i + di, j + dj
                if not (0 <= a < nx and 0 <= b < ny) or field.mask[a, b] == "O":
                    acc += np.array([di * field.spacing[0], dj * field.spacing[1]])
    if np.hypot(*acc) == 0.0:
        return None
    return unit(acc)


@dataclass(frozen=True)
class WallEntry:
    node: tuple
    label: str
    n_out: np.ndarray
    derivative: float
    tol: float
    ok: bool


@dataclass(frozen=True)
class WallReport:
    entries: tuple
    violations: tuple
    skipped: tuple


def check_wall_signs(field: GridField) -> WallReport:
    """Normal-derivative sign conditions on wall and arc nodes.

    Wall A (reflection wall): slip, |d psi/dn| within a tolerance scaled
    by the local second difference (one-sided stencils are second order;
    the tolerance absorbs the first-order remainder).  Wall B and arc P:
    outward derivative strictly positive.
    """
    entries = []
    skipped = []
    hmax = max(field.spacing)
    for i, j in np.argwhere(np.isin(field.mask, ("A", "B", "P"))):
        i, j = int(i), int(j)
        label = str(field.mask[i, j])
        n_out = _outward_estimate(field, i, j)
        if n_out is None:
            skipped.append((i, j))
            continue
        grad = _gradient_estimate(field, i, j)
        deriv = float(np.dot(grad, n_out))
        if label == "A":
            tol = 10.0 * hmax * _second_difference_bound(field, i, j)
            tol += 1e-12 * (1.0 + abs(field.values[i, j]))
            ok = abs(deriv) <= tol
        else:
            tol = 0.0
            ok = deriv > 0.0
        entries.append(WallEntry((i, j), label, n_out, deriv, tol, ok))
    violations = tuple(e for e in entries if not e.ok)
    return WallReport(tuple(entries), violations, tuple(skipped))


@dataclass(frozen=True)
class ShockEntry:
    node: tuple
    residual: float
    residual_ok: bool
    is_minimum: bool
    tangential_derivative: Optional[float] = None
    normal_derivative: Optional[float] = None
    monotone_gap: Optional[float] = None
    excluded: bool = False


@dataclass(frozen=True)
class ShockReport:
    entries: tuple
    max_residual: float
    minima: tuple
    excluded: tuple


def check_shock_nodes(field: GridField, tol_s: Optional[float] = None) -> ShockReport:
    """Upstream-potential residuals plus minimum-exclusion data on shock nodes.

    At a shock node that is a strict discrete minimum the reported data is
    the pair of reasons the minimum is impossible: the (approximately
    vanishing) tangential derivative with the minimum's normal-derivative
    sign, and the normal-shock monotonicity comparison between the node
    and the reflection point.  The node is flagged excluded when it lies
    upstream of the corner (in the upstream-flow projection) and the
    monotone gap is positive.  Derivative estimates mix on-shock and
    interior values and are reported for inspection only; the exclusion is
    keyed on the monotonicity comparison.
    """
    up = field.upstream
    v_hat = unit(up.v) if np.hypot(*up.v) > 0 else np.array([0.0, -1.0])
    t_hat = perp(v_hat)
    c_I = up.c
    speed = float(np.hypot(*up.v))
    h_r = -float(np.dot(field.xi_r, v_hat))
    entries = []
    for i, j in np.argwhere(field.mask == "S"):
        i, j = int(i), int(j)
        xy = field.node_xy(i, j)
        resid = abs(field.values[i, j] - field.psi_upstream(xy))
        tol = tol_s if tol_s is not None else 1e-9 * (1.0 + abs(field.psi_upstream(xy)))
        nb = field.neighbors8(i, j)
        v = field.values[i, j]
        is_min = bool(nb) and all(field.values[a, b] > v for a, b in nb)
        if not is_min:
            entries.append(ShockEntry((i, j), resid, resid <= tol, False))
            continue
        grad = _gradient_estimate(field, i, j)
        tang = float(np.dot(grad, t_hat))
        norm = float(np.dot(grad, v_hat))
        h_s = -float(np.dot(xy, v_hat))
        zn_s = speed + h_s
        zn_r = speed + h_r
        gap = None
        excluded = False
        if zn_s > c_I and zn_r > c_I:
            _, znd_s = normal_jump(up.gas, up.rho, zn_s)
            _, znd_r = normal_jump(up.gas, up.rho, zn_r)
            gap = (h_s - h_r) - (znd_s - znd_r)
            excluded = h_s > h_r and gap > 0.0
        entries.append(ShockEntry((i, j), resid, resid <= tol, True, tang, norm, gap, excluded))
    minima = tuple(e.node for e in entries if e.is_minimum)
    excluded = tuple(e.node for e in entries if e.excluded)
    max_resid = max((e.residual for e in entries), default=0.0)
    return ShockReport(tuple(entries), max_resid, minima, excluded)


@dataclass(frozen=True)
class Offense:
    node: tuple
    reason: str


@dataclass(frozen=True)
class MinimumReport:
    verdict: str
    offenders: tuple
    notes: tuple = ()


def minimum_report(field: GridField) -> MinimumReport:
    """Verdict of the minimum-principle case analysis.

    consistent_weak requires: non-constant field, the unique global
    minimum at the corner node, no descent direction at the corner, all
    wall/arc sign checks passing, zero shock residuals, and no strict
    local minimum anywhere else (shock-node minima carry their exclusion
    data).  Anything else is violates_minimum_principle with the
    offending nodes.
    """
    offenders = []
    notes = []
    vals = field.values
    domain = field.mask != "O"
    corner = field.corner_node()
    dvals = vals[domain]
    scale = 1.0 + float(np.mean(np.abs(dvals)))
    if float(np.ptp(dvals)) < 1e-12 * scale:
        offenders.append(Offense(corner, "constant_field"))

    gmin = float(np.min(dvals))
    argmins = [tuple(int(x) for x in n) for n in np.argwhere(domain & (vals == gmin))]
    for node in argmins:
        if node != corner:
            offenders.append(Offense(node, "global_min_off_corner"))

    cv = vals[corner]
    for a, b in field.neighbors8(*corner):
        if vals[a, b] < cv:
            offenders.append(Offense(corner, "corner_descent"))
            break

    wall = check_wall_signs(field)
    for e in wall.violations:
        offenders.append(Offense(e.node, f"wall_sign:{e.label}"))

    shock = check_shock_nodes(field)
    for e in shock.entries:
        if not e.residual_ok:
            offenders.append(Offense(e.node, "shock_residual"))
        if e.is_minimum:
            tag = "shock_minimum_excluded" if e.excluded else "shock_minimum"
            offenders.append(Offense(e.node, tag))

    for ex in find_extrema(field):
        node = ex.node
        if ex.kind != "min" or not ex.strict or node == corner:
            continue
        label = field.mask[node]
        if label == "I":
            offenders.append(Offense(node, "interior_minimum"))
        elif label in ("A", "B", "P"):
            offenders.append(Offense(node, f"boundary_minimum:{label}"))

    bents = [e for e in wall.entries if e.label == "B"]
    if bents:
        v_hat = unit(field.upstream.v) if np.hypot(*field.upstream.v) > 0 else None
        if v_hat is not None and all(abs(float(np.dot(v_hat, e.n_out))) < 1e-9 for e in bents):
            notes.append("wall B is orthogonal to the upstream flow; outside the proposition's scope")

    seen = set()
    uniq = []
    for o in offenders:
        key = (o.node, o.reason)
        if key not in seen:
            seen.add(key)
            uniq.append(o)
    verdict = "consistent_weak" if not uniq else "violates_minimum_principle"
    return MinimumReport(verdict, tuple(uniq), tuple(notes))


def synthesize_weak_field(nx: int = 25, ny: int = 21, spacing: float = 0.05,
                          gamma: float = 1.4, variant: str = "weak") -> GridField:
    """Reference fields for the corner-sector geometry (axis-aligned).

    The corner sits at the origin, the reflection wall A runs down the
    left edge, the shock S along the top edge y = 0, the opposite wall B
    along the bottom and right edges.  The interior carries the radial
    comparison-type profile eps * r * cos(beta * chi) (chi measured from
    the wall), shock nodes carry the exact upstream potential.

    variant: "weak" (consistent), "shock_min" (a raised shock notch makes
    one shock node a discrete minimum), "b_dip" (one bottom-wall value
    lowered), "corner_descent" (profile negated, corner is a maximum).
    """
    if variant not in ("weak", "shock_min", "b_dip", "corner_descent"):
        raise ValueError(f"unknown variant {variant!r}")
    h = spacing
    gas = GasModel(gamma)
    upstream = UpstreamData(gas, 1.0, np.array([0.1, -2.0]))
    xi_r = np.zeros(2)
    # grid rows j = 0..ny-1 span y in [-(ny-1)h, 0]; one extra row above for the notch
    origin = np.array([0.0, -(ny - 1) * h])
    NX, NY = nx, ny + 1
    values = np.zeros((NX, NY))
    mask = np.full((NX, NY), "O", dtype="<U1")
    j_top = ny - 1
    psi0 = upstream.psi(xi_r)
    eps = -0.3 if variant == "corner_descent" else 0.3
    beta = 0.9

    def radial(x, y):
        r = np.hypot(x, y)
        chi = np.arctan2(y, x) + 0.5 * np.pi
        return psi0 + eps * r * np.cos(beta * chi)

    for i in range(nx):
        for j in range(ny):
            x, y = i * h, -(ny - 1 - j) * h
            if i == 0 and j == j_top:
                mask[i, j] = "R"
                values[i, j] = psi0
            elif j == j_top:
                mask[i, j] = "S"
                values[i, j] = upstream.psi((x, y))
            elif j == 0 or i == nx - 1:
                mask[i, j] = "B"
                values[i, j] = radial(x, y)
            elif i == 0:
                mask[i, j] = "A"
                values[i, j] = radial(x, y)
            else:
                mask[i, j] = "I"
                values[i, j] = radial(x, y)

    if variant == "shock_min":
        i_n = max(2, int(round(0.5 / h)))
        for i in (i_n, i_n + 1, i_n + 2):
            if i < nx - 1:
                x, y = i * h, h
                mask[i, ny] = "S"
                values[i, ny] = upstream.psi((x, y))
                mask[i, j_top] = "I"
                values[i, j_top] = radial(i * h, 0.0)
    elif variant == "b_dip":
        values[nx // 2, 0] -= 0.2

    return GridField(origin, (h, h), values, mask, upstream, xi_r)


def synthesize_arc_field(n: int = 41, spacing: float = 0.025) -> GridField:
    """Quarter-annulus field with a parabolic-arc rim.

    The region spans radii [0.5, 1.0] and directions (-75, -15) degrees;
    the outer rim is labeled P, every other boundary B, with the constant
    velocity (1, -1)/sqrt(2) defining an affine potential whose outward
    arc derivative is positive.
    """
    h = spacing
    gas = GasModel(1.4)
    v_h = np.array([1.0, -1.0]) / np.sqrt(2.0)
    upstream = UpstreamData(gas, 1.0, v_h)
    r0, r1 = 0.5, 1.0
    lo, hi = np.radians(-75.0), np.radians(-15.0)
    origin = np.array([0.0, -1.0])
    values = np.zeros((n, n))
    mask = np.full((n, n), "O", dtype="<U1")

    def inside(x, y):
        r = np.hypot(x, y)
        if not (r0 <= r <= r1):
            return False
        phi = np.arctan2(y, x)
        return lo <= phi <= hi

    for i in range(n):
        for j in range(n):
            x, y = origin[0] + i * h, origin[1] + j * h
            if inside(x, y):
                mask[i, j] = "I"
                values[i, j] = float(np.dot(v_h, (x, y)))
    for i in range(n):
        for j in range(n):
            if mask[i, j] != "I":
                continue
            edge = False
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if not (0 <= a < n and 0 <= b < n) or mask[a, b] == "O":
                    edge = True
            if edge:
                x, y = origin[0] + i * h, origin[1] + j * h
                phi = np.arctan2(y, x)
                on_arc = np.hypot(x, y) >= r1 - 1.5 * h and lo + 4 * h <= phi <= hi - 4 * h
                mask[i, j] = "P" if on_arc else "B"
    ii, jj = np.nonzero(mask == "B")
    mask[ii[0], jj[0]] = "R"
    xi_r = origin + np.array([ii[0] * h, jj[0] * h])
    return GridField(origin, (h, h), values, mask, upstream, xi_r)
