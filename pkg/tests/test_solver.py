import math

import numpy as np
import pytest

from gupmdm.core import (
    SturmLiouvilleProblem,
    constant,
    count_interior_sign_changes,
    make_grid,
    sample,
    weighted_inner_product,
)
from gupmdm.models import (
    GupOscillatorParams,
    SwansonParams,
    gup_oscillator_raw,
    gup_oscillator_sl,
    swanson_sl,
)
from gupmdm.solver import (
    discretize,
    eigen_solve,
    residual,
    richardson,
    shooting_eigenvalue,
    solve_sl,
)


def laplace_problem(n=201):
    g = make_grid(0, math.pi, n)
    return SturmLiouvilleProblem(
        c=constant(g, 1.0), q=constant(g, 0.0), w=constant(g, 1.0)
    )


class TestDiscretize:
    def test_laplacian_lowest_eigenvalue(self):
        pair = discretize(laplace_problem())
        spec = eigen_solve(pair, 1)
        assert spec.eigenvalues[0] == pytest.approx(1.0, abs=1e-4)

    def test_constant_c_scales_spectrum(self):
        slp1 = laplace_problem()
        g = slp1.grid
        slp2 = SturmLiouvilleProblem(
            c=constant(g, 2.0), q=constant(g, 0.0), w=constant(g, 1.0)
        )
        e1 = eigen_solve(discretize(slp1), 4).eigenvalues
        e2 = eigen_solve(discretize(slp2), 4).eigenvalues
        assert np.allclose(e2, 2 * e1, rtol=1e-13)

    def test_symmetry_by_construction(self):
        # One off-diagonal array serves as both sub- and super-diagonal.
        slp = gup_oscillator_sl(GupOscillatorParams(1.0, 0.3), make_grid(-8, 8, 201))
        pair = discretize(slp)
        assert pair.offdiag.shape == (pair.diag.size - 1,)
        assert np.all(pair.b_diag > 0)


class TestEigenSolve:
    def test_harmonic_spectrum(self):
        g = make_grid(-12, 12, 2401)
        params = GupOscillatorParams(omega=1.0, tau=0.0)
        spec = solve_sl(gup_oscillator_sl(params, g), 8)
        energies = [params.energy_from_eigenvalue(v) for v in spec.eigenvalues]
        # The O(h^2) discretization error grows roughly like lambda^2, so the
        # tolerance scales with the level index; extrapolated accuracy is
        # exercised in test_richardson_oscillator instead.
        for n, e in enumerate(energies):
            assert e == pytest.approx(n + 0.5, abs=2e-5 * (n + 1) ** 2)

    def test_swanson_tau_zero_spectrum(self):
        params = SwansonParams(omega=2.0, alpha=0.3, beta=0.1, tau=0.0)
        g = make_grid(-10, 10, 2401)
        spec = solve_sl(swanson_sl(params, g), 6)
        omega_bar = math.sqrt(3.88)
        assert omega_bar == pytest.approx(1.9697716, abs=1e-7)
        for n in range(6):
            e = params.energy_from_eigenvalue(spec.eigenvalues[n])
            assert e == pytest.approx((n + 0.5) * omega_bar, abs=2e-4)

    def test_orthonormal_under_weight(self):
        g = make_grid(-12, 12, 801)
        slp = gup_oscillator_sl(GupOscillatorParams(1.0, 0.05), g)
        spec = solve_sl(slp, 5)
        for i in range(5):
            for j in range(i, 5):
                ip = weighted_inner_product(
                    spec.eigenfunctions[i], spec.eigenfunctions[j], slp.w
                )
                assert ip == pytest.approx(1.0 if i == j else 0.0, abs=1e-10)

    def test_oscillation_theorem(self):
        g = make_grid(-12, 12, 801)
        spec = solve_sl(gup_oscillator_sl(GupOscillatorParams(1.0, 0.05), g), 6)
        for n, phi in enumerate(spec.eigenfunctions):
            sig = phi.values.copy()
            sig[np.abs(sig) < 1e-9 * np.max(np.abs(sig))] = 0.0
            assert count_interior_sign_changes(sig) == n

    def test_k_out_of_range(self):
        pair = discretize(laplace_problem(51))
        with pytest.raises(ValueError):
            eigen_solve(pair, 1000)

    def test_domain_truncation_stability(self):
        params = GupOscillatorParams(omega=1.0, tau=0.02)
        e = []
        for pmax in (12.0, 24.0):
            g = make_grid(-pmax, pmax, int(200 * pmax) + 1)
            e.append(solve_sl(gup_oscillator_sl(params, g), 6).eigenvalues)
        assert np.max(np.abs(e[1] - e[0])) < 1e-8


class TestShooting:
    def test_ground_state(self):
        g = make_grid(-12, 12, 1201)
        slp = gup_oscillator_sl(GupOscillatorParams(1.0, 0.0), g)
        rep = shooting_eigenvalue(slp, 0)
        assert rep.eigenvalue == pytest.approx(1.0, abs=1e-7)
        assert rep.node_count == 0

    def test_third_excited(self):
        g = make_grid(-12, 12, 1201)
        slp = gup_oscillator_sl(GupOscillatorParams(1.0, 0.0), g)
        rep = shooting_eigenvalue(slp, 3)
        assert rep.eigenvalue == pytest.approx(7.0, abs=1e-6)
        assert rep.node_count == 3

    def test_cross_method_deformed(self):
        params = GupOscillatorParams(omega=1.0, tau=0.05)
        g1 = make_grid(-12, 12, 1201)
        g2 = g1.refined()
        s1 = solve_sl(gup_oscillator_sl(params, g1), 6)
        slp2 = gup_oscillator_sl(params, g2)
        s2 = solve_sl(slp2, 6)
        for n in range(6):
            lam = richardson(s1.eigenvalues[n], s2.eigenvalues[n])
            rep = shooting_eigenvalue(slp2, n)
            assert abs(lam - rep.eigenvalue) <= 1e-6 * max(1.0, abs(lam))

    def test_rejects_negative_index(self):
        slp = laplace_problem(51)
        with pytest.raises(ValueError):
            shooting_eigenvalue(slp, -1)


class TestRichardson:
    def test_fixed_point(self):
        assert richardson(2.5, 2.5) == 2.5

    def test_cancels_h_squared_model(self):
        lam, k, h = 3.7, 0.9, 0.125
        assert richardson(lam + k * h * h, lam + k * (h / 2) ** 2) == pytest.approx(
            lam, abs=1e-14
        )

    def test_oscillator_ground_state(self):
        params = GupOscillatorParams(omega=1.0, tau=0.0)
        g1 = make_grid(-12, 12, 1201)
        e1 = solve_sl(gup_oscillator_sl(params, g1), 1).eigenvalues[0]
        e2 = solve_sl(gup_oscillator_sl(params, g1.refined()), 1).eigenvalues[0]
        e = params.energy_from_eigenvalue(richardson(e1, e2))
        assert e == pytest.approx(0.5, abs=1e-8)


class TestResidual:
    def test_zero_function(self):
        g = make_grid(-6, 6, 201)
        raw = gup_oscillator_raw(GupOscillatorParams(1.0, 0.1), g)
        phi = constant(g, 0.0)
        assert residual(raw, phi, 1.0) == 0.0

    def test_exact_eigenpair_converges(self):
        params = GupOscillatorParams(omega=1.0, tau=0.0)
        res = []
        for n in (401, 801):
            g = make_grid(-10, 10, n)
            raw = gup_oscillator_raw(params, g)
            phi = sample(g, lambda p: np.exp(-0.5 * p * p))
            res.append(residual(raw, phi, 1.0))
        assert res[0] / res[1] == pytest.approx(4.0, rel=0.1)

    def test_random_pair_positive(self):
        g = make_grid(-6, 6, 201)
        raw = gup_oscillator_raw(GupOscillatorParams(1.0, 0.1), g)
        rng = np.random.default_rng(7)
        phi = sample(g, lambda p: 0 * p) + rng.standard_normal(g.n)
        assert residual(phi=phi, coeffs=raw, lam=0.37) > 1e-2


def test_order_of_accuracy_slope():
    # Eigenvalue error vs a converged reference scales as h^2.
    params = GupOscillatorParams(omega=1.0, tau=0.05)
    ref_g = make_grid(-12, 12, 9601)
    ref = solve_sl(gup_oscillator_sl(params, ref_g), 1).eigenvalues[0]
    hs, errs = [], []
    for n in (601, 1201, 2401):
        g = make_grid(-12, 12, n)
        e = solve_sl(gup_oscillator_sl(params, g), 1).eigenvalues[0]
        hs.append(g.h)
        errs.append(abs(e - ref))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.1)
