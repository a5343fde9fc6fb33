"""Scenario configs: a versioned JSON schema mapped onto model runs.

All physical quantities are entered in units of J, and every key that
carries such a rate has the explicit suffix "_over_J" to prevent unit
mistakes. u_s and u_c are already dimensionless. A scenario selects one
model tier, parameters, an initial condition (named preset or explicit
values), integrator settings and the requested outputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import model
from .csvio import complex_columns, polar_columns, split_complex, split_polar, write_csv
from .integrate import IntegratorConfig, Trajectory, simulate_full, simulate_reduced, simulate_zphi
from .model import FieldState, ModelParams, ReservoirParams, ReservoirSite, ReservoirState, ZPhiState

SCHEMA_VERSION = 1

TIERS = ("full", "reduced", "zphi")

PRESETS = {
    # all (+) population in the left well, all (-) in the right, with one
    # normalization unit N in total (amplitude 1/sqrt(2) per occupied well)
    "plus-left-minus-right": {"psi_L_plus": 2 ** -0.5, "psi_R_minus": 2 ** -0.5},
}

_GAMMA_KEYS = ("gamma_L_plus_over_J", "gamma_L_minus_over_J",
               "gamma_R_plus_over_J", "gamma_R_minus_over_J")
_EPS_KEYS = ("eps_L_plus_over_J", "eps_L_minus_over_J",
             "eps_R_plus_over_J", "eps_R_minus_over_J")
_SITE_KEYS = ("L_plus", "L_minus", "R_plus", "R_minus")
_AMPLITUDE_KEYS = ("psi_L_plus", "psi_L_minus", "psi_R_plus", "psi_R_minus")


class ScenarioError(ValueError):
    """Config validation failure carrying the offending field path."""

    def __init__(self, field_path: str, message: str):
        self.field = field_path
        super().__init__(f"{field_path}: {message}")


def _require_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ScenarioError(where, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise ScenarioError(f"{where}.{key}", f"unknown key (allowed: {sorted(allowed)})")


def _number(obj, key, where, default=None, required=False):
    if key not in obj:
        if required:
            raise ScenarioError(f"{where}.{key}", "missing required value")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{where}.{key}", f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ScenarioError(f"{where}.{key}", f"must be finite, got {v!r}")
    return float(v)


@dataclass(frozen=True)
class Scenario:
    tier: str
    params: ModelParams
    integrator: IntegratorConfig
    initial: dict
    outputs: dict
    reservoir: Optional[ReservoirParams] = None

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "tier": self.tier,
            "params": _params_to_dict(self.params),
            "initial": json.loads(json.dumps(self.initial)),
            "integrator": _integrator_to_dict(self.integrator),
            "outputs": json.loads(json.dumps(self.outputs)),
        }
        if self.reservoir is not None:
            d["reservoir"] = {
                name: {"P_over_J": s.P, "Gamma_over_J": s.Gamma,
                       "q_over_J": s.q, "kappa_over_J": s.kappa}
                for name, s in zip(_SITE_KEYS, self.reservoir.sites())
            }
        return d


def _params_to_dict(mp: ModelParams) -> dict:
    d = {"J": mp.J, "u_s": mp.u_s, "u_c": mp.u_c}
    for key, value in zip(_GAMMA_KEYS, mp.gammas()):
        d[key] = float(value)
    for key, value in zip(_EPS_KEYS, mp.epsilons()):
        d[key] = float(value)
    return d


def _integrator_to_dict(cfg: IntegratorConfig) -> dict:
    d = {"method": cfg.method, "t_end": cfg.t_end, "rtol": cfg.rtol, "atol": cfg.atol,
         "blowup_threshold": cfg.blowup_threshold}
    if cfg.dt is not None:
        d["dt"] = cfg.dt
    if cfg.sample_dt is not None:
        d["sample_dt"] = cfg.sample_dt
    return d


def _parse_params(obj) -> ModelParams:
    where = "params"
    allowed = {"J", "u_s", "u_c", "gamma_over_J", *_GAMMA_KEYS, *_EPS_KEYS}
    _require_keys(obj, allowed, where)
    if "gamma_over_J" in obj and any(k in obj for k in _GAMMA_KEYS):
        raise ScenarioError(f"{where}.gamma_over_J",
                            "give either the balanced shorthand or per-site rates, not both")
    kwargs = {
        "J": _number(obj, "J", where, default=1.0),
        "u_s": _number(obj, "u_s", where, default=0.0),
        "u_c": _number(obj, "u_c", where, default=0.0),
    }
    if "gamma_over_J" in obj:
        g = _number(obj, "gamma_over_J", where)
        gammas = (g, g, -g, -g)
    else:
        gammas = tuple(_number(obj, k, where, default=0.0) for k in _GAMMA_KEYS)
    for name, value in zip(("gamma_L_plus", "gamma_L_minus", "gamma_R_plus", "gamma_R_minus"),
                           gammas):
        kwargs[name] = value
    for key, name in zip(_EPS_KEYS, ("eps_L_plus", "eps_L_minus", "eps_R_plus", "eps_R_minus")):
        kwargs[name] = _number(obj, key, where, default=0.0)
    try:
        return ModelParams(**kwargs)
    except ValueError as exc:
        raise ScenarioError(where, str(exc)) from exc


def _parse_reservoir(obj) -> ReservoirParams:
    where = "reservoir"
    _require_keys(obj, set(_SITE_KEYS), where)
    sites = []
    for name in _SITE_KEYS:
        if name not in obj:
            raise ScenarioError(f"{where}.{name}", "missing reservoir site")
        site_obj = obj[name]
        site_where = f"{where}.{name}"
        _require_keys(site_obj, {"P_over_J", "Gamma_over_J", "q_over_J", "kappa_over_J"},
                      site_where)
        try:
            sites.append(ReservoirSite(
                P=_number(site_obj, "P_over_J", site_where, required=True),
                Gamma=_number(site_obj, "Gamma_over_J", site_where, required=True),
                q=_number(site_obj, "q_over_J", site_where, required=True),
                kappa=_number(site_obj, "kappa_over_J", site_where, required=True),
            ))
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(site_where, str(exc)) from exc
    return ReservoirParams(*sites)


def _parse_integrator(obj) -> IntegratorConfig:
    where = "integrator"
    allowed = {"method", "dt", "rtol", "atol", "t_end", "sample_dt", "blowup_threshold"}
    _require_keys(obj, allowed, where)
    method = obj.get("method", "rk45")
    if method not in ("rk45", "rk4"):
        raise ScenarioError(f"{where}.method", f"unknown method {method!r}")
    kwargs = dict(
        method=method,
        t_end=_number(obj, "t_end", where, required=True),
        dt=_number(obj, "dt", where),
        rtol=_number(obj, "rtol", where, default=1e-10),
        atol=_number(obj, "atol", where, default=1e-12),
        sample_dt=_number(obj, "sample_dt", where),
        blowup_threshold=_number(obj, "blowup_threshold", where, default=1e6),
    )
    try:
        return IntegratorConfig(**kwargs)
    except ValueError as exc:
        raise ScenarioError(where, str(exc)) from exc


def _parse_initial(obj, tier) -> dict:
    where = "initial"
    allowed = {"preset", "amplitudes", "zphi", "reservoir_populations"}
    _require_keys(obj, allowed, where)
    chosen = [k for k in ("preset", "amplitudes", "zphi") if k in obj]
    if len(chosen) != 1:
        raise ScenarioError(where, "give exactly one of preset | amplitudes | zphi")
    kind = chosen[0]

    if kind == "zphi":
        if tier != "zphi":
            raise ScenarioError(f"{where}.zphi", f"z-Phi initial state requires tier 'zphi', not {tier!r}")
        sub = obj["zphi"]
        _require_keys(sub, {"z_plus", "z_minus", "Phi_plus", "Phi_minus"}, f"{where}.zphi")
        vals = {k: _number(sub, k, f"{where}.zphi", default=0.0) for k in
                ("z_plus", "z_minus", "Phi_plus", "Phi_minus")}
        for k in ("z_plus", "z_minus"):
            if abs(vals[k]) >= 1.0:
                raise ScenarioError(f"{where}.zphi.{k}",
                                    f"representation is singular at |z| >= 1, got {vals[k]}")
        return {"zphi": vals}
    if tier == "zphi":
        raise ScenarioError(where, "tier 'zphi' needs a zphi initial state")

    if kind == "preset":
        name = obj["preset"]
        if name not in PRESETS:
            raise ScenarioError(f"{where}.preset",
                                f"unknown preset {name!r} (available: {sorted(PRESETS)})")
        out = {"preset": name}
    else:
        sub = obj["amplitudes"]
        _require_keys(sub, set(_AMPLITUDE_KEYS), f"{where}.amplitudes")
        amps = {}
        for key in _AMPLITUDE_KEYS:
            if key not in sub:
                continue
            pair = sub[key]
            if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                    or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)):
                raise ScenarioError(f"{where}.amplitudes.{key}",
                                    f"expected [re, im], got {pair!r}")
            amps[key] = [float(pair[0]), float(pair[1])]
        out = {"amplitudes": amps}

    if "reservoir_populations" in obj:
        if tier != "full":
            raise ScenarioError(f"{where}.reservoir_populations", "only valid for the full tier")
        sub = obj["reservoir_populations"]
        _require_keys(sub, {"n_L_plus", "n_L_minus", "n_R_plus", "n_R_minus"},
                      f"{where}.reservoir_populations")
        out["reservoir_populations"] = {
            k: _number(sub, k, f"{where}.reservoir_populations", required=True)
            for k in ("n_L_plus", "n_L_minus", "n_R_plus", "n_R_minus")}
    return out


def _parse_outputs(obj, tier, params: ModelParams) -> dict:
    where = "outputs"
    _require_keys(obj, {"trajectory", "gate", "stability"}, where)
    out = {}
    if "trajectory" in obj:
        if not isinstance(obj["trajectory"], bool):
            raise ScenarioError(f"{where}.trajectory", "expected true/false")
        out["trajectory"] = obj["trajectory"]
    else:
        out["trajectory"] = True

    if "gate" in obj:
        if tier != "reduced":
            raise ScenarioError(f"{where}.gate", "gate runs use the reduced tier")
        sub = obj["gate"]
        _require_keys(sub, {"t_J", "target"}, f"{where}.gate")
        target = sub.get("target", "swap")
        if target not in ("swap", "iswap"):
            raise ScenarioError(f"{where}.gate.target", f"unknown target {target!r}")
        t_J = _number(sub, "t_J", f"{where}.gate", default=math.pi / 2)
        if t_J < 0:
            raise ScenarioError(f"{where}.gate.t_J", "gate time must be non-negative")
        out["gate"] = {"t_J": t_J, "target": target}

    if "stability" in obj:
        if not params.pt_symmetric:
            raise ScenarioError(f"{where}.stability",
                                "stability analysis requires PT-symmetric params")
        sub = obj["stability"]
        _require_keys(sub, {"gamma_over_J"}, f"{where}.stability")
        grid = _parse_grid(sub.get("gamma_over_J"), f"{where}.stability.gamma_over_J")
        out["stability"] = {"gamma_over_J": grid}
    return out


def _parse_grid(spec, where) -> list:
    if isinstance(spec, list):
        vals = []
        for i, v in enumerate(spec):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ScenarioError(f"{where}[{i}]", f"expected a finite number, got {v!r}")
            vals.append(float(v))
        return vals
    if isinstance(spec, dict):
        _require_keys(spec, {"start", "stop", "num"}, where)
        start = _number(spec, "start", where, required=True)
        stop = _number(spec, "stop", where, required=True)
        num = spec.get("num")
        if not isinstance(num, int) or isinstance(num, bool) or num < 0:
            raise ScenarioError(f"{where}.num", f"expected a non-negative integer, got {num!r}")
        return [float(x) for x in np.linspace(start, stop, num)]
    raise ScenarioError(where, "expected a list of values or {start, stop, num}")


def from_dict(cfg: dict) -> Scenario:
    _require_keys(cfg, {"schema_version", "tier", "params", "reservoir",
                        "initial", "integrator", "outputs"}, "config")
    version = cfg.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError("config.schema_version",
                            f"expected {SCHEMA_VERSION}, got {version!r}")
    tier = cfg.get("tier")
    if tier not in TIERS:
        raise ScenarioError("config.tier", f"expected one of {TIERS}, got {tier!r}")

    params = _parse_params(cfg.get("params", {}))
    if tier == "full":
        if "reservoir" not in cfg:
            raise ScenarioError("config.reservoir", "full tier requires a reservoir block")
        reservoir = _parse_reservoir(cfg["reservoir"])
    else:
        if "reservoir" in cfg:
            raise ScenarioError("config.reservoir",
                                f"reservoir block is only valid for the full tier, not {tier!r}")
        reservoir = None

    if tier == "zphi":
        try:
            params.single_gamma()
        except ValueError as exc:
            raise ScenarioError("params", f"zphi tier requires balanced gain/loss: {exc}") from exc

    if "integrator" not in cfg:
        raise ScenarioError("config.integrator", "missing integrator block")
    integrator = _parse_integrator(cfg["integrator"])
    if "initial" not in cfg:
        raise ScenarioError("config.initial", "missing initial block")
    initial = _parse_initial(cfg["initial"], tier)
    outputs = _parse_outputs(cfg.get("outputs", {}), tier, params)
    return Scenario(tier=tier, params=params, reservoir=reservoir,
                    initial=initial, integrator=integrator, outputs=outputs)


def load(path) -> Scenario:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError("config", f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ScenarioError("config", f"invalid JSON: {exc}")
    return from_dict(cfg)


def initial_field_state(scenario: Scenario) -> FieldState:
    init = scenario.initial
    if "preset" in init:
        return FieldState(**{k: complex(v) for k, v in PRESETS[init["preset"]].items()})
    amps = init["amplitudes"]
    return FieldState(**{k: complex(re, im) for k, (re, im) in amps.items()})


def initial_reservoir_state(scenario: Scenario, fields: FieldState) -> ReservoirState:
    init = scenario.initial
    if "reservoir_populations" in init:
        vals = init["reservoir_populations"]
        return ReservoirState(vals["n_L_plus"], vals["n_L_minus"],
                              vals["n_R_plus"], vals["n_R_minus"])
    # default: adiabatic steady populations under the initial condensate load
    N = fields.populations()
    n = [model.steady_reservoir_population(site, N_i)
         for site, N_i in zip(scenario.reservoir.sites(), N)]
    return ReservoirState(*n)


# ---------------------------------------------------------------------------
# running and file emission
# ---------------------------------------------------------------------------

FIELD_TRAJECTORY_COLUMNS = (
    ["tau"]
    + [c for name in _AMPLITUDE_KEYS for c in complex_columns(name)]
    + ["N_L_plus", "N_L_minus", "N_R_plus", "N_R_minus",
       "z_plus", "z_minus", "Phi_plus", "Phi_minus"]
)
RESERVOIR_COLUMNS = ["n_L_plus", "n_L_minus", "n_R_plus", "n_R_minus"]
ZPHI_TRAJECTORY_COLUMNS = ["tau", "z_plus", "z_minus", "Phi_plus", "Phi_minus"]
STABILITY_COLUMNS = ["gamma", "re_l1", "re_l2", "re_l3", "re_l4",
                     "im_l1", "im_l2", "im_l3", "im_l4", "class"]


def gate_csv_columns():
    cols = ["tau"]
    for j in ("dd", "du", "ud", "uu"):          # input column
        for o in ("dd", "du", "ud", "uu"):      # output row
            cols.extend(polar_columns(f"U_{o}_{j}"))
    return cols


def write_field_trajectory(path, traj: Trajectory, with_reservoirs=False):
    header = list(FIELD_TRAJECTORY_COLUMNS)
    if with_reservoirs:
        header += RESERVOIR_COLUMNS
    obs = traj.observables

    def rows():
        for i, tau in enumerate(traj.times):
            row = [tau]
            for k in range(4):
                row.extend(split_complex(traj.states[i, k]))
            row.extend([obs["N_L_plus"][i], obs["N_L_minus"][i],
                        obs["N_R_plus"][i], obs["N_R_minus"][i],
                        obs["z_plus"][i], obs["z_minus"][i],
                        obs["Phi_plus"][i], obs["Phi_minus"][i]])
            if with_reservoirs:
                row.extend(obs[f"n_{c}"][i] for c in model.COMPONENTS)
            yield row

    return write_csv(path, header, rows())


def write_zphi_trajectory(path, traj: Trajectory):
    def rows():
        for i, tau in enumerate(traj.times):
            yield [tau, *traj.states[i]]

    return write_csv(path, ZPHI_TRAJECTORY_COLUMNS, rows())


def write_stability_csv(path, sweep):
    def rows():
        for row in sweep.rows:
            lam = row.analytic.eigenvalues
            yield ([row.gamma] + [v.real for v in lam] + [v.imag for v in lam]
                   + [row.analytic.classification])

    return write_csv(path, STABILITY_COLUMNS, rows())


def write_gate_csv(path, times, U):
    def rows():
        for i, tau in enumerate(times):
            row = [tau]
            for j in range(4):
                for o in range(4):
                    row.extend(split_polar(complex(U[i, o, j])))
            yield row

    return write_csv(path, gate_csv_columns(), rows())


def run_scenario(scenario: Scenario, outdir) -> dict:
    """Execute a validated scenario, writing its outputs under outdir.

    Returns the run summary (also written to run_summary.json). Divergence
    is data: a trajectory that hits the blow-up threshold still exits
    normally, with diverged_at recorded in the summary.
    """
    from . import gate as _gate
    from . import stability as _stability

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = {}
    summary = {"schema_version": SCHEMA_VERSION, "tier": scenario.tier,
               "diverged_at": None, "checks": {}}

    if scenario.tier == "zphi":
        z0 = scenario.initial["zphi"]
        state0 = ZPhiState(z0["z_plus"], z0["z_minus"], z0["Phi_plus"], z0["Phi_minus"])
        traj = simulate_zphi(state0, scenario.params, scenario.integrator)
        if scenario.outputs.get("trajectory", True):
            files["trajectory"] = str(write_zphi_trajectory(outdir / "trajectory.csv", traj))
    else:
        fields0 = initial_field_state(scenario)
        if scenario.tier == "full":
            res0 = initial_reservoir_state(scenario, fields0)
            traj = simulate_full(fields0, res0, scenario.params, scenario.reservoir,
                                 scenario.integrator)
            if scenario.outputs.get("trajectory", True):
                files["trajectory"] = str(write_field_trajectory(
                    outdir / "trajectory.csv", traj, with_reservoirs=True))
        else:
            traj = simulate_reduced(fields0, scenario.params, scenario.integrator)
            if scenario.outputs.get("trajectory", True):
                files["trajectory"] = str(write_field_trajectory(
                    outdir / "trajectory.csv", traj))

    summary["diverged_at"] = traj.diverged_at

    if "gate" in scenario.outputs:
        spec = scenario.outputs["gate"]
        t = spec["t_J"] / scenario.params.J
        times, U = _gate.gate_trajectory(scenario.params, t)
        files["gate"] = str(write_gate_csv(outdir / "gate.csv", times, U))
        target = _gate.target_swap() if spec["target"] == "swap" else _gate.target_iswap()
        summary["checks"]["gate_fidelity"] = _gate.gate_fidelity(U[-1], target)
        summary["checks"]["gate_t_J"] = spec["t_J"]
        summary["checks"]["gate_target"] = spec["target"]

    if "stability" in scenario.outputs:
        grid = scenario.outputs["stability"]["gamma_over_J"]
        sweep = _stability.sweep_gamma(scenario.params, np.asarray(grid) * scenario.params.J)
        files["stability"] = str(write_stability_csv(outdir / "stability.csv", sweep))
        summary["checks"]["gamma_star"] = sweep.gamma_star

    summary["files"] = files
    with open(outdir / "run_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
