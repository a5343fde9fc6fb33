"""Closed-form solutions of the linear (non-interacting) gain/loss dimer.

With u_s = u_c = 0 the two species decouple and each obeys a two-mode
problem with tunnel coupling J, gain +gamma on the left site and loss
-gamma on the right. The dynamics is governed by eigenvalues
Lambda_pm = +-sqrt(J^2 - gamma^2): real (bounded, pseudo-Hermitian
oscillation) for gamma <= J, degenerate at the exceptional point
gamma = J, and pure imaginary (exponential growth) for gamma > J, which is
reached here by analytic continuation rather than an error so that the
broken phase can be plotted.

These closed forms serve as the oracle for the numerical integrator and
for the two-qubit gate layer.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar


def _omega(J, gamma) -> complex:
    """Effective Rabi frequency sqrt(J^2 - gamma^2), continued to complex."""
    return np.sqrt(complex(J * J - gamma * gamma))


def linear_eigenvalues(J, gamma):
    """Eigenvalue pair (Lambda_plus, Lambda_minus) of the two-mode problem."""
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    lam = _omega(J, gamma)
    return lam, -lam


def propagator(J, gamma, t) -> np.ndarray:
    """2x2 propagator acting on (psi_L, psi_R) of one species.

    Entries are cos(Om t) +- (gamma/Om) sin(Om t) on the diagonal and
    i (J/Om) sin(Om t) off the diagonal, Om = sqrt(J^2 - gamma^2). At the
    exceptional point gamma = J the limiting form (sin(Om t)/Om -> t) is
    taken; for gamma > J the trigonometric functions continue to their
    hyperbolic counterparts automatically through complex Om.
    """
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    Om = _omega(J, gamma)
    c = np.cos(Om * t)
    # sin(Om t)/Om via the cardinal sine, finite at Om = 0
    s_over = t * np.sinc(Om * t / np.pi)
    return np.array([
        [c + gamma * s_over, 1j * J * s_over],
        [1j * J * s_over, c - gamma * s_over],
    ])


def evolve(J, gamma, t, psi0) -> np.ndarray:
    """Apply the propagator to an initial (psi_L, psi_R) pair."""
    return propagator(J, gamma, t) @ np.asarray(psi0, dtype=complex)


def min_transfer_deficit(J, gamma) -> float:
    """Magnitude of the worst transfer shortfall for the state (1, 0).

    For population starting entirely in the gain well, 1 - N_R(t) is
    minimized over one oscillation period and the magnitude of that
    minimum returned. The pseudo-Hermitian transfer overshoots unity by
    gamma^2 / (J^2 - gamma^2), which this measures numerically.
    """
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    if abs(gamma) >= J:
        raise ValueError("transfer deficit defined only in the bounded phase |gamma| < J")
    Om = float(_omega(J, gamma).real)

    def deficit(t):
        psi = evolve(J, gamma, t, (1.0, 0.0))
        return 1.0 - abs(psi[1]) ** 2

    res = minimize_scalar(deficit, bounds=(0.0, np.pi / Om), method="bounded",
                          options={"xatol": 1e-12})
    return float(abs(res.fun))
