"""Fixed points of the imbalance/phase dynamics and their stability.

The balanced gain/loss system has a spatially symmetric fixed point at
z^pm = 0, Phi^pm = arcsin(gamma/J). Linearizing the imbalance/phase
equations there gives four eigenvalues

    lambda = +- sqrt(-4 w^2 - 2 (u_s +- u_c) w),   w = sqrt(1 - (gamma/J)^2),

in units of J. All four are imaginary (elliptic fixed point, bounded
oscillation) until a threshold gamma*; past it a real part appears and
small deviations grow. For u_s >= u_c the threshold sits at gamma = J, for
sufficiently larger cross-interaction it moves down to
gamma* = J sqrt(1 - (u_c - u_s)^2 / 4).

Numeric Jacobians by central finite differences provide the independent
check on the analytic eigenvalues, and a gamma sweep tabulates the phase
diagram.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import model
from .model import ModelParams, ZPhiState

log = logging.getLogger(__name__)

CLASSIFY_TOL = 1e-9

_NEWTON_MAX_ITER = 100
_NEWTON_TOL = 1e-12
_DEDUP_TOL = 1e-8


class NoFixedPointError(ValueError):
    """No symmetric fixed point exists (|gamma| > J makes arcsin unsolvable)."""


@dataclass(frozen=True)
class StabilityReport:
    fixed_point: ZPhiState
    eigenvalues: np.ndarray  # 4 complex, units of J
    classification: str      # stable | unstable | elliptic
    source: str              # analytic | numeric


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    analytic: StabilityReport
    numeric: Optional[StabilityReport]


@dataclass(frozen=True)
class GammaSweep:
    rows: list
    gamma_star: float  # first grid gamma with a nonzero real part, NaN if none


def trivial_fixed_point(J, gamma) -> ZPhiState:
    """Symmetric fixed point z = 0, Phi^pm = arcsin(gamma/J) for both species."""
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    if abs(gamma) > J:
        raise NoFixedPointError(
            f"sin(Phi) = gamma/J = {gamma / J:.6g} has no solution; no fixed point")
    Phi = math.asin(gamma / J)
    return ZPhiState(0.0, 0.0, Phi, Phi)


def jacobian_numeric(point: ZPhiState, mp: ModelParams, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the imbalance/phase flow, 4x4 real."""
    f = model.zphi_rhs(mp)
    x0 = point.to_array()
    jac = np.empty((4, 4))
    for j in range(4):
        dx = np.zeros(4)
        dx[j] = h
        jac[:, j] = (f(0.0, x0 + dx) - f(0.0, x0 - dx)) / (2.0 * h)
    return jac


def find_fixed_points(mp: ModelParams, seeds,
                      require_stationary_totals: bool = True) -> list:
    """Newton iteration on the imbalance/phase flow from each seed.

    Damped Newton (step halving when the residual grows) with a numeric
    Jacobian; converged roots are deduplicated, comparing phases modulo
    2 pi. Seeds that fail to converge are logged and skipped.

    The imbalance/phase equations presume constant per-species totals, yet
    their z != 0 roots sit where the underlying amplitudes grow or decay at
    rate 2 gamma z; such roots are not stationary states of the mixture and
    are discarded unless require_stationary_totals is False.
    """
    f = model.zphi_rhs(mp)
    gamma = mp.single_gamma() / mp.J
    z_cap = 0.9999  # keep finite-difference stencils away from the |z| = 1 singularity
    roots = []
    for seed in seeds:
        x = np.array(seed.to_array() if isinstance(seed, ZPhiState) else seed, dtype=float)
        if np.max(np.abs(x[:2])) >= 1.0:
            raise ValueError(f"seed must satisfy |z| < 1, got z={x[:2]}")
        res = f(0.0, x)
        for _ in range(_NEWTON_MAX_ITER):
            if np.max(np.abs(res)) < _NEWTON_TOL:
                break
            jac_point = x.copy()
            jac_point[:2] = np.clip(jac_point[:2], -z_cap, z_cap)
            jac = jacobian_numeric(ZPhiState.from_array(jac_point), mp)
            try:
                step = np.linalg.solve(jac, -res)
            except np.linalg.LinAlgError:
                break
            # damped update: halve until the residual does not increase
            lam = 1.0
            norm0 = np.max(np.abs(res))
            while True:
                x_new = x + lam * step
                x_new[:2] = np.clip(x_new[:2], -z_cap, z_cap)
                res_new = f(0.0, x_new)
                if np.max(np.abs(res_new)) <= norm0 or lam < 1e-6:
                    break
                lam *= 0.5
            x, res = x_new, res_new
        if not np.max(np.abs(res)) < _NEWTON_TOL:
            log.debug("fixed-point search did not converge from seed %s", seed)
            continue
        drift = 2.0 * abs(gamma) * float(np.max(np.abs(x[:2])))
        if require_stationary_totals and drift > 1e-9:
            log.debug("discarding representation artifact at z=%s (total drift %g)",
                      x[:2], drift)
            continue
        root = ZPhiState(x[0], x[1], float(model.wrap_phase(x[2])), float(model.wrap_phase(x[3])))
        if not any(_same_root(root, r) for r in roots):
            roots.append(root)
    return roots


def _same_root(a: ZPhiState, b: ZPhiState) -> bool:
    dz = max(abs(a.z_plus - b.z_plus), abs(a.z_minus - b.z_minus))
    dPhi = max(_angle_dist(a.Phi_plus, b.Phi_plus), _angle_dist(a.Phi_minus, b.Phi_minus))
    return dz < _DEDUP_TOL and dPhi < _DEDUP_TOL


def _angle_dist(a, b) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def stability_eigenvalues_analytic(J, gamma, u_s, u_c) -> np.ndarray:
    """Four linearization eigenvalues at the symmetric fixed point, units of J.

    lambda = +- sqrt(-4 w^2 - 2 (u_s +- u_c) w) with w = sqrt(1 - (gamma/J)^2).
    For gamma > J the square roots continue analytically to complex w, which
    is how the swept phase diagram extends past the threshold.
    """
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    w = np.sqrt(complex(1.0 - (gamma / J) ** 2))
    lam_sym = np.sqrt(-4.0 * w * w - 2.0 * (u_s + u_c) * w)
    lam_asym = np.sqrt(-4.0 * w * w - 2.0 * (u_s - u_c) * w)
    return np.array([lam_sym, -lam_sym, lam_asym, -lam_asym])


def classify(eigs, tol: float = CLASSIFY_TOL) -> str:
    """stable (all Re < -tol), unstable (any Re > tol), else elliptic."""
    re = np.real(np.asarray(eigs))
    if np.any(re > tol):
        return "unstable"
    if np.all(re < -tol):
        return "stable"
    return "elliptic"


def bifurcation_gamma(J, u_s, u_c) -> float:
    """Threshold gamma* above which the symmetric fixed point destabilizes.

    gamma* = J for u_c <= u_s; otherwise J sqrt(1 - (u_c - u_s)^2 / 4),
    reaching zero when the interaction mismatch (u_c - u_s) grows to 2.
    """
    if u_c <= u_s:
        return float(J)
    half = 0.5 * (u_c - u_s)
    if half >= 1.0:
        return 0.0
    return float(J * math.sqrt(1.0 - half * half))


def report_analytic(mp: ModelParams, gamma) -> StabilityReport:
    lam = stability_eigenvalues_analytic(mp.J, gamma, mp.u_s, mp.u_c)
    # past gamma = J the fixed point ceases to exist; the report carries the
    # boundary point and the analytically continued eigenvalues
    point = (trivial_fixed_point(mp.J, gamma) if abs(gamma) <= mp.J
             else ZPhiState(0.0, 0.0, math.pi / 2, math.pi / 2))
    return StabilityReport(point, lam, classify(lam), "analytic")


def report_numeric(mp: ModelParams, gamma) -> StabilityReport:
    point = trivial_fixed_point(mp.J, gamma)
    mp_g = ModelParams.pt_balanced(u_s=mp.u_s, u_c=mp.u_c, gamma=gamma, J=mp.J)
    lam = np.linalg.eigvals(jacobian_numeric(point, mp_g))
    return StabilityReport(point, lam, classify(lam, tol=1e-5), "numeric")


def sweep_gamma(mp: ModelParams, gamma_grid) -> GammaSweep:
    """Stability reports along a gamma grid plus the detected threshold.

    mp supplies J, u_s and u_c; its own gain/loss rates are ignored and each
    grid value is applied as the balanced rate. Every grid point gets an
    analytic report; points with |gamma| <= J also get the finite-difference
    cross-check (past the threshold the fixed point disappears and only the
    analytic continuation remains). gamma_star is the first grid value whose
    analytic eigenvalues acquire a real part.
    """
    rows = []
    gamma_star = math.nan
    for g in np.asarray(gamma_grid, dtype=float):
        analytic = report_analytic(mp, g)
        numeric = report_numeric(mp, g) if abs(g) <= mp.J else None
        rows.append(SweepRow(float(g), analytic, numeric))
        if math.isnan(gamma_star) and np.max(np.abs(analytic.eigenvalues.real)) > CLASSIFY_TOL:
            gamma_star = float(g)
    return GammaSweep(rows=rows, gamma_star=gamma_star)
