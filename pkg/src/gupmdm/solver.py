"""Eigensolvers for Sturm-Liouville problems.

Two independent routes: a conservative finite-difference discretization
solved as a symmetric tridiagonal generalized eigenproblem, and a two-sided
shooting method with node-count bracketing. Richardson extrapolation and
residual diagnostics round out the toolbox.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eigh_tridiagonal

from .core import (
    SampledFunction,
    Spectrum,
    SturmLiouvilleProblem,
    inner_slice,
    require_same_grid,
)
from .models import RawOdeCoefficients, raw_residual_values


class SolverError(RuntimeError):
    pass


class BracketError(SolverError):
    """Eigenvalue bracketing by node count failed."""


@dataclass(frozen=True)
class DiscretizedPair:
    """Symmetric tridiagonal A and positive diagonal B on interior points."""

    diag: np.ndarray        # main diagonal of A, length n-2
    offdiag: np.ndarray     # sub/super diagonal of A, length n-3
    b_diag: np.ndarray      # diagonal of B, length n-2
    problem: SturmLiouvilleProblem


def discretize(slp: SturmLiouvilleProblem) -> DiscretizedPair:
    """Conservative 3-point stencil with midpoint-averaged c; Dirichlet rows dropped."""
    c = slp.c.values
    q = slp.q.values
    w = slp.w.values
    h = slp.grid.h
    c_half = 0.5 * (c[:-1] + c[1:])          # c at i+1/2, length n-1
    diag = (c_half[:-1] + c_half[1:]) / h**2 + q[1:-1]
    offdiag = -c_half[1:-1] / h**2
    return DiscretizedPair(diag=diag, offdiag=offdiag, b_diag=w[1:-1].copy(),
                           problem=slp)


def eigen_solve(pair: DiscretizedPair, k: int) -> Spectrum:
    """Lowest k generalized eigenpairs of A phi = lam B phi.

    Symmetrized with B^(-1/2) and handed to a symmetric tridiagonal
    eigensolver; eigenfunctions are normalized to integral phi^2 w dp = 1
    (trapezoid rule) with the largest-magnitude component made positive
    after fixing the ground state's overall sign.
    """
    m = pair.diag.size
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= {m}, got {k}")
    s = 1.0 / np.sqrt(pair.b_diag)
    diag_t = pair.diag * s * s
    off_t = pair.offdiag * s[:-1] * s[1:]
    try:
        vals, vecs = eigh_tridiagonal(
            diag_t, off_t, select="i", select_range=(0, k - 1)
        )
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SolverError(f"tridiagonal eigensolver failed: {exc}") from exc

    slp = pair.problem
    h = slp.grid.h
    funcs = []
    for j in range(k):
        phi = np.zeros(slp.grid.n)
        phi[1:-1] = s * vecs[:, j]
        # vecs columns are unit vectors, so trapz(phi^2 w) = h exactly.
        phi /= math.sqrt(h)
        i_max = 1 + int(np.argmax(np.abs(phi[1:-1])))
        if phi[i_max] < 0:
            phi = -phi
        funcs.append(SampledFunction(slp.grid, phi))
    return Spectrum(eigenvalues=vals, eigenfunctions=tuple(funcs))


def solve_sl(slp: SturmLiouvilleProblem, k: int) -> Spectrum:
    """Convenience wrapper: discretize then eigensolve."""
    return eigen_solve(discretize(slp), k)


def richardson(e_h: float, e_h2: float) -> float:
    """Second-order Richardson extrapolation from spacings h and h/2."""
    return (4.0 * e_h2 - e_h) / 3.0


def residual(coeffs: RawOdeCoefficients, phi: SampledFunction, lam: float) -> float:
    """Max-norm of the raw ODE defect on the inner 80% of the grid."""
    r = raw_residual_values(coeffs, phi, lam)
    return float(np.max(np.abs(r.values[inner_slice(phi.grid.n)])))


@dataclass(frozen=True)
class ShootingReport:
    eigenvalue: float
    node_count: int
    mismatch: float
    iterations: int


class _ShootingIntegrator:
    """Fixed-step RK4 for the first-order system (u, v) = (phi, c phi').

    Coefficients are cubic-spline interpolated to step midpoints; all inner
    loops run on Python floats for speed.
    """

    _CAP = 1e100

    def __init__(self, slp: SturmLiouvilleProblem):
        grid = slp.grid
        pts = grid.points
        mids = 0.5 * (pts[:-1] + pts[1:])
        c_spl = CubicSpline(pts, slp.c.values)
        q_spl = CubicSpline(pts, slp.q.values)
        w_spl = CubicSpline(pts, slp.w.values)
        self.h = grid.h
        self.n = grid.n
        self.ic_n = (1.0 / slp.c.values).tolist()
        self.ic_m = (1.0 / c_spl(mids)).tolist()
        self.q_n = slp.q.values.tolist()
        self.q_m = q_spl(mids).tolist()
        self.w_n = slp.w.values.tolist()
        self.w_m = w_spl(mids).tolist()
        self.qw_min = float(np.min(slp.q.values / slp.w.values))
        # Matching index: near the potential minimum, clamped to the middle half.
        i_min = int(np.argmin(slp.q.values / slp.w.values))
        self.match = min(max(i_min, self.n // 4), 3 * self.n // 4)

    def _g_n(self, i: int, lam: float) -> float:
        return self.q_n[i] - lam * self.w_n[i]

    def _g_m(self, i: int, lam: float) -> float:
        return self.q_m[i] - lam * self.w_m[i]

    def _sweep(self, lam: float, start: int, stop: int):
        """Integrate from node `start` to node `stop` (either direction).

        Returns (u, v, nodes): the final scaled state and the number of
        sign changes of u along the way.
        """
        step = 1 if stop > start else -1
        h = self.h * step
        h2 = 0.5 * h
        h6 = h / 6.0
        u, v = 0.0, 1.0 if step > 0 else -1.0
        nodes = 0
        last_sign = 0
        cap = self._CAP
        ic_n, ic_m = self.ic_n, self.ic_m
        q_n, q_m, w_n, w_m = self.q_n, self.q_m, self.w_n, self.w_m
        i = start
        while i != stop:
            im = i if step > 0 else i - 1   # midpoint index between i and i+step
            j = i + step
            g0 = q_n[i] - lam * w_n[i]
            gm = q_m[im] - lam * w_m[im]
            g1 = q_n[j] - lam * w_n[j]
            ic0 = ic_n[i]
            icm = ic_m[im]
            ic1 = ic_n[j]
            k1u = v * ic0
            k1v = g0 * u
            k2u = (v + h2 * k1v) * icm
            k2v = gm * (u + h2 * k1u)
            k3u = (v + h2 * k2v) * icm
            k3v = gm * (u + h2 * k2u)
            k4u = (v + h * k3v) * ic1
            k4v = g1 * (u + h * k3u)
            u = u + h6 * (k1u + 2.0 * (k2u + k3u) + k4u)
            v = v + h6 * (k1v + 2.0 * (k2v + k3v) + k4v)
            sign = 1 if u > 0.0 else (-1 if u < 0.0 else 0)
            if sign != 0:
                if last_sign != 0 and sign != last_sign:
                    nodes += 1
                last_sign = sign
            mag = abs(u) + abs(v)
            if mag > cap:
                u /= mag
                v /= mag
            i = j
        return u, v, nodes

    def node_count(self, lam: float) -> int:
        """Interior sign changes of the solution shot from the left end."""
        _, _, nodes = self._sweep(lam, 0, self.n - 1)
        return nodes

    def wronskian_mismatch(self, lam: float) -> float:
        """Scaled Wronskian defect u_L v_R - u_R v_L at the matching node."""
        u_l, v_l, _ = self._sweep(lam, 0, self.match)
        u_r, v_r, _ = self._sweep(lam, self.n - 1, self.match)
        s_l = max(abs(u_l), abs(v_l))
        s_r = max(abs(u_r), abs(v_r))
        return (u_l * v_r - u_r * v_l) / (s_l * s_r)


def shooting_eigenvalue(
    slp: SturmLiouvilleProblem,
    n: int,
    rel_tol: float = 1e-10,
    max_doublings: int = 60,
) -> ShootingReport:
    """n-th eigenvalue by two-sided shooting with node-count bracketing.

    The n-th eigenvalue is bracketed by the interior node count of the
    left-shot solution, narrowed by bisection, then polished by bisection
    on the sign of the Wronskian mismatch at the matching node.
    """
    if n < 0:
        raise ValueError(f"eigenvalue index must be >= 0, got {n}")
    integ = _ShootingIntegrator(slp)
    evals = 0

    # The ground eigenvalue lies above min(q/w); expand upward geometrically.
    lo = integ.qw_min
    gap = max(1.0, abs(lo) * 0.5)
    hi = lo + gap
    for _ in range(max_doublings):
        evals += 1
        if integ.node_count(hi) >= n + 1:
            break
        gap *= 2.0
        hi = lo + gap
    else:
        raise BracketError(
            f"no bracket with > {n} nodes found in [{lo:g}, {hi:g}] "
            f"after {max_doublings} doublings"
        )

    # Bisect on node count until [lo, hi] isolates exactly eigenvalue n.
    while True:
        evals += 1
        mid = 0.5 * (lo + hi)
        if integ.node_count(mid) <= n:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-2 * max(1.0, abs(mid)):
            evals += 2
            if integ.node_count(lo) == n and integ.node_count(hi) == n + 1:
                break
        if hi - lo <= rel_tol * max(1.0, abs(mid)):
            break

    # Polish on the sign of the Wronskian mismatch inside the bracket.
    f_lo = integ.wronskian_mismatch(lo)
    f_hi = integ.wronskian_mismatch(hi)
    evals += 2
    if f_lo == 0.0:
        lam = lo
    elif f_hi == 0.0:
        lam = hi
    elif f_lo * f_hi < 0.0:
        while hi - lo > rel_tol * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            f_mid = integ.wronskian_mismatch(mid)
            evals += 1
            if f_mid == 0.0:
                lo = hi = mid
                break
            if f_lo * f_mid < 0.0:
                hi, f_hi = mid, f_mid
            else:
                lo, f_lo = mid, f_mid
        lam = 0.5 * (lo + hi)
    else:
        # No sign change (matching node unluckily placed); fall back to
        # pure node-count bisection, which also converges to eigenvalue n.
        while hi - lo > rel_tol * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            evals += 1
            if integ.node_count(mid) <= n:
                lo = mid
            else:
                hi = mid
        lam = 0.5 * (lo + hi)

    mismatch = abs(integ.wronskian_mismatch(lam))
    evals += 1
    return ShootingReport(
        eigenvalue=lam, node_count=n, mismatch=mismatch, iterations=evals
    )
