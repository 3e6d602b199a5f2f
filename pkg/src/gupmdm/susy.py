"""Factorization / intertwining machinery for the deformed problems.

First-derivative intertwiner A = xi(p) d/dp + theta(p) with
xi = sqrt(1+tau p^2), the superpotential theta extracted from a nodeless
ground state, the factorized effective potential, its partner, and the
zero-mode profile.

This module works on unweighted operators H = -D xi^2 D + V (w = 1); the
deformation enters only through xi. The demonstration potential used by
the verification pipeline is V(p) = p^2/(1+tau p^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Grid,
    SampledFunction,
    SturmLiouvilleProblem,
    constant,
    derivative,
    inner_slice,
    require_same_grid,
    sample,
)
from .solver import richardson, solve_sl


@dataclass(frozen=True)
class FactorizationData:
    xi: SampledFunction
    theta: SampledFunction
    c0: float

    def __post_init__(self):
        require_same_grid(self.xi, self.theta)
        if np.any(self.xi.values <= 0):
            raise ValueError("xi must be positive everywhere")


def xi_gup(tau: float, grid: Grid) -> SampledFunction:
    """xi(p) = sqrt(1+tau p^2), the intertwiner's leading coefficient."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    return sample(grid, lambda p: np.sqrt(1.0 + tau * p * p))


def superpotential_from_ground_state(
    xi: SampledFunction, phi0: SampledFunction
) -> SampledFunction:
    """theta = -xi phi0'/phi0, the unique choice with A phi0 = 0.

    The quotient is evaluated on the inner 80% of the grid, where the
    ground state has support, and extended linearly to the ends (phi0
    underflows near the Dirichlet boundaries).
    """
    grid = require_same_grid(xi, phi0)
    sl = inner_slice(grid.n)
    core_vals = phi0.values[sl]
    signs = np.sign(core_vals[np.abs(core_vals) > 0])
    if signs.size == 0 or np.any(signs != signs[0]):
        raise ValueError("phi0 changes sign on the inner region; not a ground state")
    d1 = derivative(phi0, 1)
    theta = np.empty(grid.n)
    theta[sl] = -xi.values[sl] * d1.values[sl] / phi0.values[sl]
    lo, hi = sl.start, sl.stop
    h = grid.h
    slope_l = (theta[lo + 1] - theta[lo]) / h
    slope_r = (theta[hi - 1] - theta[hi - 2]) / h
    for i in range(lo - 1, -1, -1):
        theta[i] = theta[lo] - slope_l * h * (lo - i)
    for i in range(hi, grid.n):
        theta[i] = theta[hi - 1] + slope_r * h * (i - hi + 1)
    return SampledFunction(grid, theta)


def veff_from_factorization(fd: FactorizationData) -> SampledFunction:
    """V_eff = c0 + theta^2 - (xi theta)'."""
    return fd.c0 + fd.theta * fd.theta - derivative(fd.xi * fd.theta, 1)


def partner_potential(
    fd: FactorizationData, veff: SampledFunction
) -> SampledFunction:
    """Partner V_1 = V_eff + 2 xi theta' - xi xi''.

    The last term comes out of the operator algebra A A-dagger =
    -D xi^2 D + theta^2 - (xi theta)' + 2 xi theta' - xi xi''.
    """
    require_same_grid(fd.xi, veff)
    d_theta = derivative(fd.theta, 1)
    d2_xi = derivative(xi_sq(fd.xi), 2)
    # xi*xi'' = ((xi^2)'' - 2 xi'^2)/2; using xi^2 keeps polynomial xi^2 exact.
    d_xi = derivative(fd.xi, 1)
    xi_xipp = 0.5 * d2_xi - d_xi * d_xi
    return veff + 2.0 * fd.xi * d_theta - xi_xipp


def xi_sq(xi: SampledFunction) -> SampledFunction:
    return xi * xi


def apply_intertwiner(fd: FactorizationData, phi: SampledFunction) -> SampledFunction:
    """A phi = xi phi' + theta phi."""
    require_same_grid(fd.xi, phi)
    return fd.xi * derivative(phi, 1) + fd.theta * phi


def kappa_zero_mode(
    eta_const: float, tau: float, grid: Grid, c0: float = 0.0
) -> tuple[SampledFunction, float]:
    """Zero-mode profile kappa = eta p / sqrt(1+tau p^2) and Lambda = c0 - eta."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    kappa = sample(grid, lambda p: eta_const * p / np.sqrt(1.0 + tau * p * p))
    return kappa, c0 - eta_const


def demo_potential(tau: float, grid: Grid) -> SampledFunction:
    """V(p) = p^2/(1+tau p^2), the demonstration potential of the pipeline."""
    return sample(grid, lambda p: p * p / (1.0 + tau * p * p))


def build_unweighted_problem(
    tau: float, grid: Grid, potential: SampledFunction | None = None
) -> SturmLiouvilleProblem:
    """H = -D (1+tau p^2) D + V with unit weight."""
    xi = xi_gup(tau, grid)
    V = demo_potential(tau, grid) if potential is None else potential
    return SturmLiouvilleProblem(c=xi * xi, q=V, w=constant(grid, 1.0))


@dataclass(frozen=True)
class PartnerCheck:
    """Isospectrality diagnostics for one deformation value."""

    tau: float
    lam: np.ndarray          # Lambda_0 .. Lambda_{k}   (extrapolated)
    lam_partner: np.ndarray  # Lambda_{1,0} .. Lambda_{1,k-1} (extrapolated)
    shift_defects: np.ndarray      # |Lambda_{1,n} - Lambda_{n+1}|
    mapped_residuals: np.ndarray   # relative H1 residuals of A phi_{n+1}


def _partner_spectrum_on_grid(tau: float, grid: Grid, k: int):
    slp = build_unweighted_problem(tau, grid)
    spec = solve_sl(slp, k + 1)
    xi = xi_gup(tau, grid)
    theta = superpotential_from_ground_state(xi, spec.eigenfunctions[0])
    fd = FactorizationData(xi=xi, theta=theta, c0=float(spec.eigenvalues[0]))
    v1 = partner_potential(fd, slp.q)
    slp1 = SturmLiouvilleProblem(c=slp.c, q=v1, w=slp.w)
    spec1 = solve_sl(slp1, k)
    return slp, spec, fd, slp1, spec1


def partner_check(tau: float, p_max: float, n: int, k: int = 5) -> PartnerCheck:
    """Run the factorization pipeline on grids n and 2n-1 and extrapolate.

    Verifies that the partner problem built from the numerically extracted
    superpotential is isospectral with the original problem shifted by one
    level, and that the mapped functions A phi_{n+1} are near-eigenfunctions
    of the partner.
    """
    g1 = make_grid_sym(p_max, n)
    g2 = g1.refined()
    _, spec_c, _, _, spec1_c = _partner_spectrum_on_grid(tau, g1, k)
    slp_f, spec_f, fd_f, slp1_f, spec1_f = _partner_spectrum_on_grid(tau, g2, k)

    lam = np.array(
        [richardson(a, b) for a, b in zip(spec_c.eigenvalues, spec_f.eigenvalues)]
    )
    lam1 = np.array(
        [richardson(a, b) for a, b in zip(spec1_c.eigenvalues, spec1_f.eigenvalues)]
    )
    defects = np.abs(lam1 - lam[1:])

    # Mapped-eigenfunction residual on the fine grid, inner 80%.
    tau_term = sample(g2, lambda p: 2.0 * tau * p)   # (xi^2)' analytically
    sl = inner_slice(g2.n)
    residuals = []
    for m in range(k):
        psi = apply_intertwiner(fd_f, spec_f.eigenfunctions[m + 1])
        h1_psi = (
            -slp1_f.c * derivative(psi, 2)
            - tau_term * derivative(psi, 1)
            + slp1_f.q * psi
        )
        defect = h1_psi - float(spec_f.eigenvalues[m + 1]) * psi
        num = float(np.linalg.norm(defect.values[sl]))
        den = float(np.linalg.norm(psi.values[sl]))
        residuals.append(num / den)
    return PartnerCheck(
        tau=tau,
        lam=lam,
        lam_partner=lam1,
        shift_defects=defects,
        mapped_residuals=np.array(residuals),
    )


def make_grid_sym(p_max: float, n: int) -> Grid:
    from .core import make_grid

    return make_grid(-p_max, p_max, n)
