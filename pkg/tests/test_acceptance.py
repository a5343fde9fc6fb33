"""Acceptance suite: one pass/fail line per criterion, stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print. Criterion 1b (linear gamma = 0.3 J at t J = pi/2) is a known honest
failure: the realized fidelity at that exact time is 0.9298, while the
reference value 0.935 is only attained at the delayed swap time
pi / (2 - gamma^2 / J^2); see the assertion message.
"""

import math

import numpy as np
import pytest

from polsim.figures import reproduce, swap_fidelity
from polsim.gate import optimal_swap_time
from polsim.integrate import (
    IntegratorConfig,
    convergence_order,
    integrate,
    simulate_full,
    simulate_reduced,
)
from polsim.linear import evolve, min_transfer_deficit
from polsim.model import (
    FieldState,
    ModelParams,
    ReservoirParams,
    ReservoirState,
    reduced_rhs,
    steady_reservoir_population,
)
from polsim.stability import jacobian_numeric, stability_eigenvalues_analytic, trivial_fixed_point

HALF = math.pi / 2


def check(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


def matched_distance(a, b):
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    worst = 0.0
    for z in a:
        j = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(j)))
    return worst


@pytest.mark.parametrize("gamma,ref,tol", [(0.1, 0.992, 0.003), (0.3, 0.935, 0.005)])
def test_criterion_01_linear_swap_fidelity(gamma, ref, tol):
    F = swap_fidelity(0.0, 0.0, gamma, t=HALF)
    detail = (f"linear gamma={gamma}: F(tJ=pi/2)={F:.6f}, expected {ref}+-{tol}")
    if gamma == 0.3 and abs(F - ref) > tol:
        F_delayed = swap_fidelity(0.0, 0.0, gamma, t=optimal_swap_time(1.0, gamma))
        detail += (f"; the reference 0.935 matches the delayed-time value "
                   f"F(tJ=pi/(2-g^2))={F_delayed:.6f}, not the half-period one")
    check("01", abs(F - ref) <= tol, detail)


@pytest.mark.parametrize("gamma,ref,tol", [(0.1, 0.991, 0.003), (0.3, 0.922, 0.005),
                                           (0.5, 0.799, 0.008)])
def test_criterion_02_equal_interaction_fidelity(gamma, ref, tol):
    F = swap_fidelity(1.0, 1.0, gamma, t=HALF)
    check("02", abs(F - ref) <= tol,
          f"u_s=u_c=1, gamma={gamma}: F={F:.6f}, expected {ref}+-{tol}")


@pytest.mark.parametrize("u_c,gamma,ref,tol", [(0.5, 0.1, 0.982, 0.004),
                                               (0.1, 0.1, 0.963, 0.004),
                                               (0.1, 0.3, 0.867, 0.008)])
def test_criterion_03_unequal_interaction_fidelity(u_c, gamma, ref, tol):
    F = swap_fidelity(1.0, u_c, gamma, t=HALF)
    check("03", abs(F - ref) <= tol,
          f"u_s=1, u_c={u_c}, gamma={gamma}: F={F:.6f}, expected {ref}+-{tol}")


def test_criterion_04_bifurcation_threshold():
    grid = np.linspace(0.0, 0.999, 200)
    max_re = max(np.max(np.abs(stability_eigenvalues_analytic(1.0, g, 1.0, 0.9).real))
                 for g in grid)
    above = np.max(stability_eigenvalues_analytic(1.0, 1.001, 1.0, 0.9).real)
    check("04", max_re < 1e-6 and above > 0,
          f"u_s=1, u_c=0.9: max|Re| below threshold={max_re:.2e}, "
          f"Re at gamma=1.001: {above:.4f}")


def test_criterion_05_eigenvalue_oracle():
    rng = np.random.default_rng(20260809)
    worst = 0.0
    for _ in range(200):
        g = rng.uniform(0.0, 0.95)
        u_s, u_c = rng.uniform(0.0, 2.0, size=2)
        lam = stability_eigenvalues_analytic(1.0, g, u_s, u_c)
        mp = ModelParams.pt_balanced(u_s=u_s, u_c=u_c, gamma=g)
        w = np.linalg.eigvals(jacobian_numeric(trivial_fixed_point(1.0, g), mp))
        worst = max(worst, matched_distance(lam, w))
    check("05", worst < 1e-6,
          f"200 draws analytic vs numeric Jacobian: max multiset distance={worst:.2e}")


def test_criterion_06_propagator_oracle():
    rng = np.random.default_rng(1905)
    worst = 0.0
    for _ in range(50):
        g = rng.uniform(0.0, 0.9)
        t = rng.uniform(0.05, 10.0)
        psi0 = rng.normal(size=2) + 1j * rng.normal(size=2)
        mp = ModelParams.pt_balanced(gamma=g)
        traj = integrate(reduced_rhs(mp), np.array([psi0[0], 0, psi0[1], 0]),
                         IntegratorConfig(t_end=t, sample_dt=t))
        dev = np.max(np.abs(traj.final_state[[0, 2]] - evolve(1.0, g, t, psi0)))
        worst = max(worst, dev)
    check("06", worst < 1e-7, f"50 random linear evolutions: max amplitude error={worst:.2e}")


def test_criterion_07_envelope_rate(tmp_path):
    rate = reproduce("fig3b", tmp_path)["checks"]["envelope_rate"]
    check("07", abs(rate + 0.1) <= 0.002,
          f"unbalanced decay: fitted rate={rate:.5f}, expected -0.1 +- 2%")


def test_criterion_07_modulation_period(tmp_path):
    period = reproduce("fig3d", tmp_path)["checks"]["modulation_period_tau"]
    expected = 40 * math.pi
    check("07", abs(period - expected) <= 0.05 * expected,
          f"equal-interaction beat: period={period:.2f}, expected 40*pi={expected:.2f} +- 5%")


def test_criterion_08_norm_conservation():
    rng = np.random.default_rng(88)
    cfg = IntegratorConfig(t_end=20.0, sample_dt=0.1, rtol=1e-12, atol=1e-14)
    worst = 0.0
    for _ in range(3):
        mp = ModelParams(u_s=rng.uniform(0, 2), u_c=rng.uniform(0, 2))
        st = FieldState(psi_L_plus=2 ** -0.5, psi_R_minus=2 ** -0.5)
        traj = simulate_reduced(st, mp, cfg)
        for tag, iL, iR in (("plus", 0, 2), ("minus", 1, 3)):
            tot = np.abs(traj.states[:, iL]) ** 2 + np.abs(traj.states[:, iR]) ** 2
            worst = max(worst, float(np.max(np.abs(tot - tot[0])) / tot[0]))
    check("08", worst < 1e-9,
          f"lossless per-species totals over tau=20: worst relative drift={worst:.2e}")


def test_criterion_08_rk4_order():
    mp = ModelParams.pt_balanced(u_s=1.0, u_c=0.5, gamma=0.1)
    order = convergence_order(reduced_rhs(mp), np.array([0.7 + 0j, 0.1, 0.2j, 0.3]))
    check("08", 3.8 <= order <= 4.2, f"RK4 self-convergence order={order:.3f}")


def test_criterion_09_optimal_time_improvement():
    details = []
    ok = True
    for g in (0.1, 0.3):
        F_half = swap_fidelity(0.0, 0.0, g, t=HALF)
        F_opt = swap_fidelity(0.0, 0.0, g, t=optimal_swap_time(1.0, g))
        ok = ok and F_opt >= F_half
        details.append(f"gamma={g}: F_opt={F_opt:.6f} >= F_half={F_half:.6f}")
    check("09", ok, "; ".join(details))


def test_criterion_10_incomplete_transfer_law():
    worst = 0.0
    for g in (0.1, 0.2, 0.3):
        measured = min_transfer_deficit(1.0, g)
        worst = max(worst, abs(measured - g * g / (1 - g * g)))
    check("10", worst < 1e-6,
          f"transfer deficit vs gamma^2/(J^2-gamma^2): max deviation={worst:.2e}")


def test_criterion_11_full_model_consistency():
    gamma = 0.1
    rp = ReservoirParams.for_target_gains([gamma, gamma, -gamma, -gamma],
                                          Gamma=100.0, q=0.1, kappa=0.5)
    mp_full = ModelParams(u_s=1.0, u_c=1.0)
    mp_red = ModelParams.pt_balanced(u_s=1.0, u_c=1.0, gamma=gamma)
    st = FieldState(psi_L_plus=2 ** -0.5, psi_R_minus=2 ** -0.5)
    n0 = ReservoirState(*[steady_reservoir_population(s, N)
                          for s, N in zip(rp.sites(), st.populations())])
    cfg = IntegratorConfig(t_end=20.0, sample_dt=0.05)
    full = simulate_full(st, n0, mp_full, rp, cfg)
    red = simulate_reduced(st, mp_red, cfg)
    dev = float(np.max(np.abs(np.abs(full.states[:, :4]) ** 2 - np.abs(red.states) ** 2)))
    check("11", dev < 0.02,
          f"reservoir tier vs fixed-rate tier over tau=20: max |dN|={dev:.4f} < 0.02")
