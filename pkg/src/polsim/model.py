"""Coupled-mode model of a two-species polariton mixture in a double well.

Two polariton species, labelled (+) and (-), occupy the left (L) and right
(R) wells of a double-well potential. The complex amplitudes psi_s^pm are
stored in units of sqrt(N), where N is the population normalization unit,
so |psi|^2 counts population as a fraction of N. Time is dimensionless,
tau = t*J, with hbar = 1; interactions enter through the dimensionless
ratios u_s = g_s*N/J (self) and u_c = g_c*N/J (cross), and all rates
(gain/loss gamma, reservoir P, Gamma, q, kappa) are stored in units of J.

Three model tiers are provided:

* full      - four condensate amplitudes coupled to four incoherently
              pumped exciton reservoirs (stimulated scattering Q = q*n),
* reduced   - four amplitudes with fixed net gain/loss rates gamma,
* zphi      - per-species population imbalance z and phase difference Phi,
              valid for PT-balanced gain/loss near the z = 0 manifold.

Component order for flat arrays is always [L+, L-, R+, R-].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

COMPONENTS = ("L_plus", "L_minus", "R_plus", "R_minus")

# index maps for the [L+, L-, R+, R-] component order
_OTHER_WELL = np.array([2, 3, 0, 1])
_OTHER_SPECIES = np.array([1, 0, 3, 2])

_PT_TOL = 1e-12


class SingularStateError(ValueError):
    """The z-Phi representation breaks down when a well empties (|z| >= 1)."""


def wrap_phase(phi):
    """Wrap an angle (or array of angles) to the interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(phi), 2.0 * np.pi)


def _require_finite(name, *values):
    for v in values:
        if not np.all(np.isfinite(np.asarray(v))):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class FieldState:
    """Four complex polariton amplitudes in units of sqrt(N)."""

    psi_L_plus: complex = 0j
    psi_L_minus: complex = 0j
    psi_R_plus: complex = 0j
    psi_R_minus: complex = 0j

    def __post_init__(self):
        _require_finite("FieldState amplitudes", self.to_array())

    def to_array(self) -> np.ndarray:
        return np.array(
            [self.psi_L_plus, self.psi_L_minus, self.psi_R_plus, self.psi_R_minus],
            dtype=complex,
        )

    @classmethod
    def from_array(cls, a) -> "FieldState":
        a = np.asarray(a, dtype=complex)
        return cls(a[0], a[1], a[2], a[3])

    def populations(self) -> np.ndarray:
        """|psi|^2 for each component, order [L+, L-, R+, R-]."""
        return np.abs(self.to_array()) ** 2


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters of the coupled-mode equations.

    J sets the frequency unit (default 1); u_s, u_c are the self and cross
    interaction strengths g_s*N/J and g_c*N/J; gamma_* are net gain (+) or
    loss (-) rates and eps_* zero-point energies, both in units of J.
    """

    J: float = 1.0
    u_s: float = 0.0
    u_c: float = 0.0
    gamma_L_plus: float = 0.0
    gamma_L_minus: float = 0.0
    gamma_R_plus: float = 0.0
    gamma_R_minus: float = 0.0
    eps_L_plus: float = 0.0
    eps_L_minus: float = 0.0
    eps_R_plus: float = 0.0
    eps_R_minus: float = 0.0

    def __post_init__(self):
        _require_finite("ModelParams", self.J, self.u_s, self.u_c,
                        *self.gammas(), *self.epsilons())
        if not self.J > 0:
            raise ValueError(f"tunnel coupling J must be positive, got {self.J}")

    @classmethod
    def pt_balanced(cls, u_s=0.0, u_c=0.0, gamma=0.0, J=1.0, eps=0.0) -> "ModelParams":
        """Params with gain +gamma on the left well and loss -gamma on the right."""
        return cls(J=J, u_s=u_s, u_c=u_c,
                   gamma_L_plus=gamma, gamma_L_minus=gamma,
                   gamma_R_plus=-gamma, gamma_R_minus=-gamma,
                   eps_L_plus=eps, eps_L_minus=eps,
                   eps_R_plus=eps, eps_R_minus=eps)

    def gammas(self) -> np.ndarray:
        return np.array([self.gamma_L_plus, self.gamma_L_minus,
                         self.gamma_R_plus, self.gamma_R_minus])

    def epsilons(self) -> np.ndarray:
        return np.array([self.eps_L_plus, self.eps_L_minus,
                         self.eps_R_plus, self.eps_R_minus])

    @property
    def pt_symmetric(self) -> bool:
        """True iff energies mirror-match and gain/loss anti-match per species."""
        return (
            abs(self.eps_L_plus - self.eps_R_plus) <= _PT_TOL
            and abs(self.eps_L_minus - self.eps_R_minus) <= _PT_TOL
            and abs(self.gamma_L_plus + self.gamma_R_plus) <= _PT_TOL
            and abs(self.gamma_L_minus + self.gamma_R_minus) <= _PT_TOL
        )

    def single_gamma(self) -> float:
        """The common balanced rate gamma, requiring PT symmetry and
        species-independent gain/loss."""
        if not self.pt_symmetric:
            raise ValueError("params are not PT symmetric (gamma_L != -gamma_R or eps mismatch)")
        if abs(self.gamma_L_plus - self.gamma_L_minus) > _PT_TOL:
            raise ValueError("species have different gain/loss rates; no single gamma")
        return self.gamma_L_plus


@dataclass(frozen=True)
class ReservoirSite:
    """Exciton reservoir feeding one polariton component.

    P is the pump rate, Gamma the exciton decay rate, q the stimulated
    scattering coefficient and kappa the polariton decay rate, all in
    units of J (populations in units of N).
    """

    P: float
    Gamma: float
    q: float
    kappa: float

    def __post_init__(self):
        _require_finite("ReservoirSite", self.P, self.Gamma, self.q, self.kappa)
        if self.P < 0 or self.Gamma <= 0 or self.q < 0 or self.kappa < 0:
            raise ValueError(
                f"reservoir rates must satisfy P,q,kappa >= 0 and Gamma > 0, "
                f"got P={self.P}, Gamma={self.Gamma}, q={self.q}, kappa={self.kappa}"
            )


@dataclass(frozen=True)
class ReservoirParams:
    """One reservoir per component, order [L+, L-, R+, R-]."""

    L_plus: ReservoirSite
    L_minus: ReservoirSite
    R_plus: ReservoirSite
    R_minus: ReservoirSite

    def sites(self) -> tuple:
        return (self.L_plus, self.L_minus, self.R_plus, self.R_minus)

    @classmethod
    def for_target_gains(cls, gammas, Gamma=100.0, q=0.1, kappa=0.5) -> "ReservoirParams":
        """Choose pump rates so each site's net gain/loss equals the target.

        gammas is a sequence of four rates, order [L+, L-, R+, R-]. Raises
        if a target would require a negative pump (loss stronger than kappa).
        """
        sites = []
        for g in gammas:
            P = pump_rate_for_gain(g, Gamma=Gamma, q=q, kappa=kappa)
            sites.append(ReservoirSite(P=P, Gamma=Gamma, q=q, kappa=kappa))
        return cls(*sites)


@dataclass(frozen=True)
class ReservoirState:
    """Exciton populations in the four reservoirs, units of N."""

    n_L_plus: float = 0.0
    n_L_minus: float = 0.0
    n_R_plus: float = 0.0
    n_R_minus: float = 0.0

    def __post_init__(self):
        _require_finite("ReservoirState", *self.to_array())
        if np.any(self.to_array() < 0):
            raise ValueError(f"exciton populations must be non-negative: {self.to_array()}")

    def to_array(self) -> np.ndarray:
        return np.array([self.n_L_plus, self.n_L_minus, self.n_R_plus, self.n_R_minus])

    @classmethod
    def from_array(cls, a) -> "ReservoirState":
        a = np.asarray(a, dtype=float)
        return cls(a[0], a[1], a[2], a[3])


@dataclass(frozen=True)
class ZPhiState:
    """Per-species population imbalance z and phase difference Phi.

    z^pm = (N_L^pm - N_R^pm) / (N_L^pm + N_R^pm) lies in [-1, 1];
    Phi^pm = arg psi_R^pm - arg psi_L^pm in radians.
    """

    z_plus: float = 0.0
    z_minus: float = 0.0
    Phi_plus: float = 0.0
    Phi_minus: float = 0.0

    def __post_init__(self):
        _require_finite("ZPhiState", *self.to_array())
        if abs(self.z_plus) > 1.0 or abs(self.z_minus) > 1.0:
            raise ValueError(f"imbalance must satisfy |z| <= 1: z=({self.z_plus}, {self.z_minus})")

    def to_array(self) -> np.ndarray:
        return np.array([self.z_plus, self.z_minus, self.Phi_plus, self.Phi_minus])

    @classmethod
    def from_array(cls, a) -> "ZPhiState":
        a = np.asarray(a, dtype=float)
        return cls(a[0], a[1], a[2], a[3])


class Observables(NamedTuple):
    N_L_plus: float
    N_L_minus: float
    N_R_plus: float
    N_R_minus: float
    z_plus: float
    z_minus: float
    Phi_plus: float
    Phi_minus: float


def gain_loss_coefficient(site: ReservoirSite) -> float:
    """Net polariton gain/loss rate for an adiabatically eliminated reservoir.

    With the reservoir pinned at its undepleted steady value n = P/Gamma,
    the condensate sees the rate (q*P/Gamma - kappa)/2; positive means net
    gain, negative net loss.
    """
    return 0.5 * (site.q * site.P / site.Gamma - site.kappa)


def pump_rate_for_gain(gamma, Gamma, q, kappa) -> float:
    """Pump rate P that produces the net rate gamma; inverse of
    gain_loss_coefficient in the undepleted limit."""
    _require_finite("pump_rate_for_gain", gamma, Gamma, q, kappa)
    if q <= 0:
        raise ValueError("stimulated scattering q must be positive to tune the pump")
    P = Gamma * (2.0 * gamma + kappa) / q
    if P < 0:
        raise ValueError(
            f"target gamma={gamma} needs negative pump (kappa={kappa} too small)")
    return P


def steady_reservoir_population(site: ReservoirSite, N) -> float:
    """Stationary exciton population P/(Gamma + q*N) under condensate load N."""
    _require_finite("steady_reservoir_population", N)
    denom = site.Gamma + site.q * N
    if denom <= 0:
        raise ValueError(f"steady reservoir population undefined: Gamma + q*N = {denom}")
    return site.P / denom


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------

def reduced_rhs(mp: ModelParams) -> Callable[[float, np.ndarray], np.ndarray]:
    """Array-valued RHS of the reduced tier, d psi / d tau for y = [L+, L-, R+, R-].

    i d psi_s / d tau = (eps_s + u_s |psi_s|^2 + u_c |psi_s'|^2) psi_s
                        - psi_other + i gamma_s psi_s
    where s' is the opposite species in the same well and "other" the same
    species in the opposite well. Works for arbitrary, not only PT-balanced,
    gamma.
    """
    u_s, u_c = mp.u_s, mp.u_c
    gam = mp.gammas()
    eps = mp.epsilons()

    def f(tau, y):
        n = (y * y.conjugate()).real
        phase = eps + u_s * n + u_c * n[_OTHER_SPECIES]
        return (-1j * phase + gam) * y + 1j * y[_OTHER_WELL]

    return f


def rhs_reduced(fields: FieldState, mp: ModelParams) -> FieldState:
    """Instantaneous derivative of the reduced tier at the given state."""
    dy = reduced_rhs(mp)(0.0, fields.to_array())
    return FieldState.from_array(dy)


def full_rhs(mp: ModelParams, rp: ReservoirParams) -> Callable[[float, np.ndarray], np.ndarray]:
    """Array-valued RHS of the full tier on y = [psi (4 complex), n (4 real)].

    The condensate gain term is (q*n - kappa)/2 per component and each
    reservoir obeys dn/dtau = P - Gamma*n - q*n*|psi|^2. Reservoir entries
    are stored in the complex state vector with zero imaginary part.
    """
    u_s, u_c = mp.u_s, mp.u_c
    eps = mp.epsilons()
    P = np.array([s.P for s in rp.sites()])
    Gam = np.array([s.Gamma for s in rp.sites()])
    q = np.array([s.q for s in rp.sites()])
    kap = np.array([s.kappa for s in rp.sites()])

    def f(tau, y):
        psi = y[:4]
        n = y[4:].real
        N = (psi * psi.conjugate()).real
        phase = eps + u_s * N + u_c * N[_OTHER_SPECIES]
        gain = 0.5 * (q * n - kap)
        dpsi = (-1j * phase + gain) * psi + 1j * psi[_OTHER_WELL]
        dn = P - Gam * n - q * n * N
        return np.concatenate([dpsi, dn.astype(complex)])

    return f


def rhs_full(fields: FieldState, res: ReservoirState, mp: ModelParams,
             rp: ReservoirParams) -> tuple:
    """Instantaneous derivatives (d fields, d reservoirs) of the full tier."""
    y = np.concatenate([fields.to_array(), res.to_array().astype(complex)])
    dy = full_rhs(mp, rp)(0.0, y)
    # the reservoir derivative may be negative, so bypass the state check
    dn = object.__new__(ReservoirState)
    for name, v in zip(("n_L_plus", "n_L_minus", "n_R_plus", "n_R_minus"), dy[4:].real):
        object.__setattr__(dn, name, float(v))
    return FieldState.from_array(dy[:4]), dn


def zphi_rhs(mp: ModelParams) -> Callable[[float, np.ndarray], np.ndarray]:
    """Array-valued RHS of the imbalance/phase tier on y = [z+, z-, Phi+, Phi-].

    dz/dtau  = -2 sqrt(1 - z^2) sin(Phi) + 2 gamma
    dPhi/dtau = u_s z + u_c z' + 2 z cos(Phi) / sqrt(1 - z^2)

    Requires PT-balanced params with a single gamma. The representation
    presumes constant per-species totals; it is exact on the z = 0 manifold
    and raises SingularStateError when a well empties (|z| >= 1).
    """
    u_s, u_c = mp.u_s, mp.u_c
    gamma = mp.single_gamma() / mp.J

    def f(tau, y):
        z = y[:2]
        Phi = y[2:]
        if np.max(np.abs(z)) >= 1.0:
            raise SingularStateError(
                f"imbalance representation singular at z={z} (a well emptied)")
        root = np.sqrt(1.0 - z * z)
        dz = -2.0 * root * np.sin(Phi) + 2.0 * gamma
        dPhi = u_s * z + u_c * z[::-1] + 2.0 * z / root * np.cos(Phi)
        return np.concatenate([dz, dPhi])

    return f


def rhs_zphi(state: ZPhiState, mp: ModelParams) -> ZPhiState:
    """Instantaneous derivative in the z-Phi representation."""
    dy = zphi_rhs(mp)(0.0, state.to_array())
    # a derivative is not itself a state, so bypass the |z| <= 1 check
    obj = object.__new__(ZPhiState)
    object.__setattr__(obj, "z_plus", float(dy[0]))
    object.__setattr__(obj, "z_minus", float(dy[1]))
    object.__setattr__(obj, "Phi_plus", float(dy[2]))
    object.__setattr__(obj, "Phi_minus", float(dy[3]))
    return obj


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

def observables(fields: FieldState) -> Observables:
    """Populations, imbalances and phase differences of a field state.

    z^pm is normalized by the instantaneous per-species total; if that total
    is zero the imbalance and phase are undefined and returned as NaN rather
    than raised, so trajectory writers can emit a sentinel.
    """
    psi = fields.to_array()
    N = (psi * psi.conjugate()).real
    out = []
    for i_L, i_R in ((0, 2), (1, 3)):
        tot = N[i_L] + N[i_R]
        if tot > 0.0:
            z = (N[i_L] - N[i_R]) / tot
            Phi = float(wrap_phase(cmath.phase(psi[i_R]) - cmath.phase(psi[i_L])))
        else:
            z, Phi = math.nan, math.nan
        out.append((z, Phi))
    return Observables(N[0], N[1], N[2], N[3],
                       out[0][0], out[1][0], out[0][1], out[1][1])


def trajectory_observables(states: np.ndarray) -> dict:
    """Vectorized observables for an (n_samples, 4) complex state array."""
    psi = np.asarray(states)
    N = np.abs(psi) ** 2
    obs = {f"N_{c}": N[:, i] for i, c in enumerate(COMPONENTS)}
    with np.errstate(invalid="ignore", divide="ignore"):
        for tag, i_L, i_R in (("plus", 0, 2), ("minus", 1, 3)):
            tot = N[:, i_L] + N[:, i_R]
            z = np.where(tot > 0, (N[:, i_L] - N[:, i_R]) / np.where(tot > 0, tot, 1.0), np.nan)
            Phi = np.where(tot > 0,
                           wrap_phase(np.angle(psi[:, i_R]) - np.angle(psi[:, i_L])),
                           np.nan)
            obs[f"z_{tag}"] = z
            obs[f"Phi_{tag}"] = Phi
    return obs
