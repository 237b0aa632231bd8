"""Root-solver kernels for the normal jump relations.

The compressive branch of

    pi(rho_d) + m^2 / (2 rho_d^2) = B,    m = rho_u * zn_u,
                                          B = pi(rho_u) + zn_u^2 / 2,

has a unique root above the sonic density (where the mass flux m makes the
downstream normal speed equal the sound speed).  The residual is strictly
increasing there, so the root is bracketed by the sonic density and a
geometrically grown upper bound, bisected, then polished with safeguarded
Newton steps.

Two interchangeable backends:

  * "numba"  - @njit element loop over the batch (default when importable),
  * "numpy"  - vectorized lock-step bisection + Newton, no compilation.

Select with the SSRR_BACKEND environment variable before import.
"""

import os

import numpy as np

__all__ = ["BACKEND", "jump_density", "jump_density_batch"]


def _pick_backend() -> str:
    choice = os.environ.get("SSRR_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"unrecognized SSRR_BACKEND={choice!r} (use 'numba' or 'numpy')")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _pick_backend()


def _jump_scalar_py(gamma, rho_u, zn_u):
    m = rho_u * zn_u
    isothermal = gamma == 1.0
    if isothermal:
        kpi = 0.0
        bern = np.log(rho_u) + 0.5 * zn_u * zn_u
        lo = m
        flo = np.log(lo) + 0.5 * (m / lo) ** 2 - bern
    else:
        kpi = gamma / (gamma - 1.0)
        bern = kpi * rho_u ** (gamma - 1.0) + 0.5 * zn_u * zn_u
        lo = (m / gamma ** 0.5) ** (2.0 / (gamma + 1.0))
        flo = kpi * lo ** (gamma - 1.0) + 0.5 * (m / lo) ** 2 - bern
    if flo >= 0.0:
        # vanishing strength: the sonic bracket end already solves the system
        return lo
    hi = lo
    for _ in range(200):
        hi *= 2.0
        if isothermal:
            fhi = np.log(hi) + 0.5 * (m / hi) ** 2 - bern
        else:
            fhi = kpi * hi ** (gamma - 1.0) + 0.5 * (m / hi) ** 2 - bern
        if fhi >= 0.0:
            break
    a = lo
    b = hi
    # coarse bisection only; the safeguarded Newton polish below converges
    # quadratically from a 1e-2 relative bracket
    for _ in range(64):
        mid = 0.5 * (a + b)
        if isothermal:
            fm = np.log(mid) + 0.5 * (m / mid) ** 2 - bern
        else:
            fm = kpi * mid ** (gamma - 1.0) + 0.5 * (m / mid) ** 2 - bern
        if fm < 0.0:
            a = mid
        else:
            b = mid
        if b - a <= 1e-2 * b:
            break
    rho = 0.5 * (a + b)
    for _ in range(60):
        if isothermal:
            f = np.log(rho) + 0.5 * (m / rho) ** 2 - bern
            df = (1.0 - (m / rho) ** 2) / rho
        else:
            f = kpi * rho ** (gamma - 1.0) + 0.5 * (m / rho) ** 2 - bern
            df = (gamma * rho ** (gamma - 1.0) - (m / rho) ** 2) / rho
        if abs(f) <= 1e-16 * (1.0 + abs(bern)):
            break
        if f < 0.0:
            a = rho
        else:
            b = rho
        if df > 0.0:
            step = rho - f / df
            if a < step < b:
                rho = step
            else:
                rho = 0.5 * (a + b)
        else:
            rho = 0.5 * (a + b)
    return rho


def _jump_batch_np(gamma, rho_u, zn):
    zn = np.asarray(zn, dtype=float)
    m = rho_u * zn
    if gamma == 1.0:
        bern = np.log(rho_u) + 0.5 * zn * zn
        lo = m.copy()

        def f(rho):
            return np.log(rho) + 0.5 * (m / rho) ** 2 - bern

        def df(rho):
            return (1.0 - (m / rho) ** 2) / rho

    else:
        kpi = gamma / (gamma - 1.0)
        bern = kpi * rho_u ** (gamma - 1.0) + 0.5 * zn * zn
        lo = (m / np.sqrt(gamma)) ** (2.0 / (gamma + 1.0))

        def f(rho):
            return kpi * rho ** (gamma - 1.0) + 0.5 * (m / rho) ** 2 - bern

        def df(rho):
            return (gamma * rho ** (gamma - 1.0) - (m / rho) ** 2) / rho

    sonic = f(lo) >= 0.0
    hi = lo.copy()
    pend = ~sonic
    for _ in range(200):
        if not np.any(pend):
            break
        hi[pend] *= 2.0
        pend &= f(hi) < 0.0
    a = lo.copy()
    b = hi
    for _ in range(64):
        mid = 0.5 * (a + b)
        neg = f(mid) < 0.0
        a = np.where(neg, mid, a)
        b = np.where(neg, b, mid)
        if np.all(b - a <= 1e-2 * b):
            break
    rho = 0.5 * (a + b)
    tol = 1e-16 * (1.0 + np.abs(bern))
    for _ in range(20):
        fv = f(rho)
        done = np.abs(fv) <= tol
        if np.all(done):
            break
        neg = fv < 0.0
        a = np.where(neg, rho, a)
        b = np.where(neg, b, rho)
        dfv = df(rho)
        step = rho - fv / np.where(dfv > 0.0, dfv, np.inf)
        inside = (step >= a) & (step <= b)
        rho = np.where(done, rho, np.where(inside, step, 0.5 * (a + b)))
    return np.where(sonic, lo, rho)


if BACKEND == "numba":
    from numba import njit

    # nogil so sweep workers can overlap kernel calls across threads;
    # the kernels themselves stay serial (thread-safe under any layer)
    _jump_scalar = njit(cache=True, nogil=True)(_jump_scalar_py)

    def _batch_src(gamma, rho_u, zn, out):
        for i in range(zn.shape[0]):
            out[i] = _jump_scalar(gamma, rho_u, zn[i])
        return out

    _jump_batch = njit(cache=True, nogil=True)(_batch_src)

    def jump_density(gamma: float, rho_u: float, zn_u: float) -> float:
        return float(_jump_scalar(float(gamma), float(rho_u), float(zn_u)))

    def jump_density_batch(gamma: float, rho_u: float, zn_u) -> np.ndarray:
        zn = np.ascontiguousarray(zn_u, dtype=np.float64)
        out = np.empty_like(zn)
        return _jump_batch(float(gamma), float(rho_u), zn, out)

else:

    def jump_density(gamma: float, rho_u: float, zn_u: float) -> float:
        return float(_jump_scalar_py(float(gamma), float(rho_u), float(zn_u)))

    def jump_density_batch(gamma: float, rho_u: float, zn_u) -> np.ndarray:
        return _jump_batch_np(float(gamma), float(rho_u), zn_u)
