"""Minimal SVG line-art emitter for polar plots (no plotting dependency)."""

import numpy as np

__all__ = ["polar_svg"]

_SIZE = 640
_PAD = 40


def _mapper(pts):
    pts = np.asarray(pts)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    scale = (_SIZE - 2 * _PAD) / float(span.max())

    def to_px(p):
        x = _PAD + (p[0] - lo[0]) * scale
        y = _SIZE - _PAD - (p[1] - lo[1]) * scale
        return f"{x:.2f},{y:.2f}"

    return to_px


def polar_svg(polar, roots=(), classify=None) -> str:
    """Plot of the polar in the v plane with N, the sonic point and any
    wall-parallel roots marked."""
    n = len(polar.samples) // 2
    plus = [s.shock.v_d for s in polar.samples[:n]]
    minus = [s.shock.v_d for s in polar.samples[n:]]
    marks = [("N", polar.normal_point.v_d)]
    if np.isfinite(polar.sonic_Mn):
        from .polar import _shock_at

        sp = _shock_at(polar.upstream, polar.xi, polar.sonic_Mn, 1, polar.Mn_max)
        marks.append(("sonic", sp.v_d))
        sp = _shock_at(polar.upstream, polar.xi, polar.sonic_Mn, -1, polar.Mn_max)
        marks.append(("sonic", sp.v_d))
    for sp, st in roots:
        marks.append((st.label[0].upper(), sp.v_d))
    every = plus + minus + [m[1] for m in marks] + [polar.upstream.v]
    to_px = _mapper(every)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
    ]
    for branch, color in ((plus, "#1f77b4"), (minus, "#d62728")):
        path = " ".join(to_px(p) for p in branch)
        parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    vi = to_px(polar.upstream.v).split(",")
    parts.append(f'<circle cx="{vi[0]}" cy="{vi[1]}" r="3" fill="black"/>')
    parts.append(f'<text x="{float(vi[0]) + 6:.2f}" y="{vi[1]}" font-size="12">vI</text>')
    for label, p in marks:
        px = to_px(p).split(",")
        parts.append(f'<circle cx="{px[0]}" cy="{px[1]}" r="4" fill="none" stroke="black"/>')
        parts.append(f'<text x="{float(px[0]) + 6:.2f}" y="{px[1]}" font-size="12">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
