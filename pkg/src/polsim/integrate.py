"""Deterministic ODE integration with dense output and divergence detection.

Two methods are provided: a fixed-step classic Runge-Kutta of order 4 and
an adaptive Dormand-Prince 4(5) pair with PI step-size control. Output is
sampled on a uniform grid via a cubic Hermite interpolant between accepted
steps. Integration halts early, recording the time, when any population
exceeds a blow-up threshold; exponential divergence in the broken phase is
physical and is reported as data, not as a solver failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import model

# Dormand-Prince 4(5) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9
_PI_ALPHA = 0.7 / 5.0
_PI_BETA = 0.4 / 5.0


class StepUnderflowError(RuntimeError):
    """Raised when the adaptive step size collapses below resolution."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration settings.

    method is "rk45" (adaptive, controlled by rtol/atol) or "rk4"
    (fixed step dt). t_end is the final dimensionless time, sample_dt the
    approximate output spacing (the grid is made exactly uniform), and
    blowup_threshold the population |y|^2 cap that triggers early halt.
    """

    t_end: float
    method: str = "rk45"
    dt: Optional[float] = None
    rtol: float = 1e-10
    atol: float = 1e-12
    sample_dt: Optional[float] = None
    blowup_threshold: float = 1e6

    def __post_init__(self):
        if self.method not in ("rk45", "rk4"):
            raise ValueError(f"unknown method {self.method!r}; use 'rk45' or 'rk4'")
        if not (np.isfinite(self.t_end) and self.t_end > 0):
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.method == "rk4":
            if self.dt is None or not (0 < self.dt <= self.t_end):
                raise ValueError(f"rk4 needs 0 < dt <= t_end, got dt={self.dt}")
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError(f"tolerances must be positive: rtol={self.rtol}, atol={self.atol}")
        if self.sample_dt is not None and not (0 < self.sample_dt <= self.t_end):
            raise ValueError(f"sample_dt must lie in (0, t_end], got {self.sample_dt}")
        if not self.blowup_threshold > 0:
            raise ValueError("blowup_threshold must be positive")

    def sample_times(self) -> np.ndarray:
        dt = self.sample_dt if self.sample_dt is not None else self.t_end / 1000.0
        n = max(1, int(round(self.t_end / dt)))
        return np.linspace(0.0, self.t_end, n + 1)


@dataclass
class Trajectory:
    """Sampled solution: times, raw states and optional derived observables."""

    times: np.ndarray
    states: np.ndarray
    observables: Optional[dict] = None
    diverged_at: Optional[float] = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must be strictly increasing")

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _population_measure(y: np.ndarray) -> float:
    if np.iscomplexobj(y):
        return float(np.max(np.abs(y) ** 2))
    return float(np.max(np.abs(y)))


def _blown_up(y: np.ndarray, threshold: float) -> bool:
    if not np.all(np.isfinite(y)):
        return True
    return _population_measure(y) > threshold


def _hermite(t0, y0, f0, t1, y1, f1, t):
    """Cubic Hermite interpolation on [t0, t1]."""
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _error_norm(err, y0, y1, rtol, atol) -> float:
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    with np.errstate(invalid="ignore"):
        ratio = np.abs(err) / scale
    if not np.all(np.isfinite(ratio)):
        return math.inf
    return float(np.sqrt(np.mean(ratio ** 2)))


def _integrate_rk45(f, y0, cfg: IntegratorConfig):
    t_end = cfg.t_end
    samples = cfg.sample_times()
    slack = 1e-12 * max(1.0, t_end)
    out = [y0.copy()]
    next_idx = 1

    t = 0.0
    y = y0.copy()
    k1 = np.asarray(f(t, y))
    h = min(0.01, t_end, samples[1] - samples[0])
    err_prev = 1e-4
    diverged_at = None

    while next_idx < len(samples):
        h = min(h, t_end - t)
        if h < 1e-14 * max(1.0, abs(t)):
            raise StepUnderflowError(f"step size underflow at tau={t:.6g}")

        k = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * ki for a, ki in zip(_A[i], k))
            k.append(np.asarray(f(t + _C[i] * h, yi)))
        # stage 7 was evaluated at y + h*sum(_A[6]*k), which is y_new (FSAL)
        y_new = y + h * sum(b * ki for b, ki in zip(_B5[:6], k[:6]))
        err_vec = h * sum(e * ki for e, ki in zip(_E, k))
        err = _error_norm(err_vec, y, y_new, cfg.rtol, cfg.atol)

        if err > 1.0:
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-_PI_ALPHA))
            continue

        t_new = t + h
        f_new = k[6]

        while next_idx < len(samples) and samples[next_idx] <= t_new + slack:
            ts = min(samples[next_idx], t_new)
            out.append(_hermite(t, y, k1, t_new, y_new, f_new, ts))
            next_idx += 1

        if _blown_up(y_new, cfg.blowup_threshold):
            diverged_at = t_new
            times = list(samples[: len(out)])
            if t_new > times[-1] + slack:
                times.append(t_new)
                out.append(y_new)
            return np.array(times), np.array(out), diverged_at

        factor = _SAFETY * err ** (-_PI_ALPHA) * err_prev ** _PI_BETA if err > 0 else _MAX_FACTOR
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        err_prev = max(err, 1e-10)
        t, y, k1 = t_new, y_new, f_new

    return samples[: len(out)], np.array(out), diverged_at


def _integrate_rk4(f, y0, cfg: IntegratorConfig):
    samples = cfg.sample_times()
    out = [y0.copy()]
    y = y0.copy()
    diverged_at = None

    for i in range(1, len(samples)):
        t0, t1 = samples[i - 1], samples[i]
        span = t1 - t0
        n_sub = max(1, math.ceil(span / cfg.dt - 1e-12))
        h = span / n_sub
        t = t0
        for _ in range(n_sub):
            k1 = np.asarray(f(t, y))
            k2 = np.asarray(f(t + h / 2, y + h / 2 * k1))
            k3 = np.asarray(f(t + h / 2, y + h / 2 * k2))
            k4 = np.asarray(f(t + h, y + h * k3))
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        out.append(y.copy())
        if _blown_up(y, cfg.blowup_threshold):
            diverged_at = t1
            break

    samples = samples[: len(out)]
    return samples, np.array(out), diverged_at


def integrate(rhs: Callable, state0, cfg: IntegratorConfig) -> Trajectory:
    """Integrate d y / d tau = rhs(tau, y) from y(0) = state0 to cfg.t_end.

    state0 may be a flat numpy array (complex or real). The returned
    trajectory is sampled on the uniform grid of cfg.sample_times(); when a
    population exceeds cfg.blowup_threshold the integration stops and
    diverged_at is set to the step time at which the threshold was crossed.
    """
    y0 = np.atleast_1d(np.asarray(state0))
    f0 = np.asarray(rhs(0.0, y0))
    if not np.all(np.isfinite(f0.view(float) if np.iscomplexobj(f0) else f0)):
        raise ValueError("rhs is not finite at the initial state")

    if cfg.method == "rk4":
        times, states, diverged_at = _integrate_rk4(rhs, y0, cfg)
    else:
        times, states, diverged_at = _integrate_rk45(rhs, y0, cfg)
    return Trajectory(times=times, states=states, diverged_at=diverged_at)


def convergence_order(rhs: Callable, state0, t_end: float = 5.0,
                      dt0: float = 0.05) -> float:
    """Measured self-convergence order of the fixed-step RK4 method.

    End states at steps dt0, dt0/2 and dt0/4 are compared against a
    reference at dt0/16 and the order fitted from the error decay. Returns
    NaN when the errors sit at machine floor (e.g. an identically zero rhs).
    """
    y0 = np.atleast_1d(np.asarray(state0))

    def end_state(dt):
        cfg = IntegratorConfig(t_end=t_end, method="rk4", dt=dt, sample_dt=t_end)
        return integrate(rhs, y0, cfg).final_state

    ref = end_state(dt0 / 16)
    dts = np.array([dt0, dt0 / 2, dt0 / 4])
    errs = np.array([np.max(np.abs(end_state(dt) - ref)) for dt in dts])
    if np.max(errs) < 1e-14:
        return math.nan
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# model-aware drivers
# ---------------------------------------------------------------------------

def simulate_reduced(state0: model.FieldState, mp: model.ModelParams,
                     cfg: IntegratorConfig) -> Trajectory:
    """Reduced-tier trajectory with populations/imbalances attached."""
    traj = integrate(model.reduced_rhs(mp), state0.to_array(), cfg)
    traj.observables = model.trajectory_observables(traj.states)
    return traj


def simulate_full(fields0: model.FieldState, res0: model.ReservoirState,
                  mp: model.ModelParams, rp: model.ReservoirParams,
                  cfg: IntegratorConfig) -> Trajectory:
    """Full-tier trajectory; reservoir populations join the observables."""
    y0 = np.concatenate([fields0.to_array(), res0.to_array().astype(complex)])
    traj = integrate(model.full_rhs(mp, rp), y0, cfg)
    traj.observables = model.trajectory_observables(traj.states[:, :4])
    for i, c in enumerate(model.COMPONENTS):
        traj.observables[f"n_{c}"] = traj.states[:, 4 + i].real
    return traj


def simulate_zphi(state0: model.ZPhiState, mp: model.ModelParams,
                  cfg: IntegratorConfig) -> Trajectory:
    """Imbalance/phase-tier trajectory; the state itself is the observable set."""
    traj = integrate(model.zphi_rhs(mp), state0.to_array(), cfg)
    traj.observables = {
        "z_plus": traj.states[:, 0],
        "z_minus": traj.states[:, 1],
        "Phi_plus": traj.states[:, 2],
        "Phi_minus": traj.states[:, 3],
    }
    return traj
