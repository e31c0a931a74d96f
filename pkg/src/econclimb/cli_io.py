"""Command-line surface: config parsing, plan/profile/sweep/calibrate.

The scenario configuration is a YAML document with three blocks (aircraft,
scenario, cost_index). Every numeric key carries its unit in its name,
unknown keys are rejected, and each key can be overridden through an
environment variable named ECONCLIMB_<BLOCK>__<KEY> (nested blocks join
with double underscores; values are parsed as YAML scalars).

Exit codes: 0 success, 2 configuration problem, 3 solver failure,
4 output I/O failure. A feasible-but-depleting battery is not an error;
it is reported in the summary.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np
import yaml

from .atmosphere import TROPOSPHERE
from .climb_optimizer import (
    calibrate_ci_max,
    calibrate_ci_max_to_speed,
    fms_initial_speed,
    segment_between,
)
from .cost_index import CiEvent, CostIndexSchedule
from .errors import (
    ConfigError,
    DegenerateSegmentError,
    DomainError,
    EnvelopeError,
    NoInteriorOptimumError,
    SaddlePointError,
)
from .scenario_sim import Scenario, run_scenario, sweep_cost
from .vehicle import STANDARD_GRAVITY, AircraftParams

ENV_PREFIX = "ECONCLIMB_"

_AIRCRAFT_KEYS = {
    "wing_area_m2", "mass_kg", "cd0", "cd2", "vmax_kmh", "voltage_v",
    "efficiency", "gravity_ms2",
}
_SCENARIO_KEYS = {
    "waypoints_km", "q0_coulombs", "h_dot_bar_ms", "sim_step_s",
    "atmosphere_step_m",
}
_COST_INDEX_KEYS = {"ci0_fraction", "ci0_value_Cs", "ci_max", "tau", "events"}
_CI_MAX_KEYS = {"mode", "reference_v_kmh", "value_Cs"}
_TAU_KEYS = {"mode", "factor", "seconds"}
_EVENT_KEYS = {"ci_in_fraction", "ci_in_value_Cs", "at_waypoint_km", "at_time_s"}


# ---------------------------------------------------------------------------
# configuration loading and validation

def _require_mapping(obj, path):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(obj).__name__}")
    return obj


def _reject_unknown(mapping, allowed, path):
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {', '.join(unknown)}")


def _get_number(mapping, key, path, required=True, default=None,
                minimum=None, maximum=None, exclusive_min=False):
    if key not in mapping:
        if required:
            raise ConfigError(f"{path}: missing required key {key}")
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    value = float(value)
    if minimum is not None:
        if exclusive_min and not value > minimum:
            raise ConfigError(f"{path}.{key}: must be > {minimum:g}, got {value:g}")
        if not exclusive_min and value < minimum:
            raise ConfigError(f"{path}.{key}: must be >= {minimum:g}, got {value:g}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}.{key}: must be <= {maximum:g}, got {value:g}")
    return value


def _get_pair(value, path):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or any(isinstance(u, bool) or not isinstance(u, (int, float))
                   for u in value)):
        raise ConfigError(f"{path}: expected [x, h] numbers, got {value!r}")
    return [float(value[0]), float(value[1])]


def validate_config(raw):
    """Validate a parsed config mapping and return its canonical form.

    The canonical form has every optional key filled with its default, so
    serializing and re-parsing it is idempotent.
    """
    raw = _require_mapping(raw, "config")
    _reject_unknown(raw, {"aircraft", "scenario", "cost_index"}, "config")
    for block in ("aircraft", "scenario", "cost_index"):
        if block not in raw:
            raise ConfigError(f"config: missing required block {block}")

    ac = _require_mapping(raw["aircraft"], "aircraft")
    _reject_unknown(ac, _AIRCRAFT_KEYS, "aircraft")
    aircraft = {
        "wing_area_m2": _get_number(ac, "wing_area_m2", "aircraft",
                                    minimum=0.0, exclusive_min=True),
        "mass_kg": _get_number(ac, "mass_kg", "aircraft",
                               minimum=0.0, exclusive_min=True),
        "cd0": _get_number(ac, "cd0", "aircraft", minimum=0.0,
                           exclusive_min=True),
        "cd2": _get_number(ac, "cd2", "aircraft", minimum=0.0,
                           exclusive_min=True),
        "vmax_kmh": _get_number(ac, "vmax_kmh", "aircraft", minimum=0.0,
                                exclusive_min=True),
        "voltage_v": _get_number(ac, "voltage_v", "aircraft", minimum=0.0,
                                 exclusive_min=True),
        "efficiency": _get_number(ac, "efficiency", "aircraft",
                                  minimum=0.0, maximum=1.0, exclusive_min=True),
        "gravity_ms2": _get_number(ac, "gravity_ms2", "aircraft",
                                   required=False, default=STANDARD_GRAVITY,
                                   minimum=0.0, exclusive_min=True),
    }

    sc = _require_mapping(raw["scenario"], "scenario")
    _reject_unknown(sc, _SCENARIO_KEYS, "scenario")
    if "waypoints_km" not in sc:
        raise ConfigError("scenario: missing required key waypoints_km")
    wps_raw = sc["waypoints_km"]
    if not isinstance(wps_raw, (list, tuple)) or len(wps_raw) < 2:
        raise ConfigError(
            "scenario.waypoints_km: expected a list of at least two [x, h] pairs"
        )
    waypoints = [_get_pair(wp, f"scenario.waypoints_km[{i}]")
                 for i, wp in enumerate(wps_raw)]
    scenario = {
        "waypoints_km": waypoints,
        "q0_coulombs": _get_number(sc, "q0_coulombs", "scenario", minimum=0.0),
        "h_dot_bar_ms": _get_number(sc, "h_dot_bar_ms", "scenario",
                                    minimum=0.0, exclusive_min=True),
        "sim_step_s": _get_number(sc, "sim_step_s", "scenario", required=False,
                                  default=0.1, minimum=0.0, exclusive_min=True),
        "atmosphere_step_m": _get_number(sc, "atmosphere_step_m", "scenario",
                                         required=False, default=1.0,
                                         minimum=0.0, exclusive_min=True),
    }

    cx = _require_mapping(raw["cost_index"], "cost_index")
    _reject_unknown(cx, _COST_INDEX_KEYS, "cost_index")
    has_fraction = "ci0_fraction" in cx
    has_value = "ci0_value_Cs" in cx
    if has_fraction == has_value:
        raise ConfigError(
            "cost_index: exactly one of ci0_fraction or ci0_value_Cs is required"
        )
    cost_index = {}
    if has_fraction:
        cost_index["ci0_fraction"] = _get_number(
            cx, "ci0_fraction", "cost_index", minimum=0.0, maximum=1.0)
    else:
        cost_index["ci0_value_Cs"] = _get_number(
            cx, "ci0_value_Cs", "cost_index", minimum=0.0)

    cm = _require_mapping(cx.get("ci_max", None) or {}, "cost_index.ci_max")
    _reject_unknown(cm, _CI_MAX_KEYS, "cost_index.ci_max")
    mode = cm.get("mode")
    if mode not in ("vmax", "calibrated", "value"):
        raise ConfigError(
            "cost_index.ci_max.mode: expected one of vmax, calibrated, value, "
            f"got {mode!r}"
        )
    ci_max = {"mode": mode}
    ref_v = _get_number(cm, "reference_v_kmh", "cost_index.ci_max",
                        required=(mode == "calibrated"), default=None,
                        minimum=0.0, exclusive_min=True)
    if ref_v is not None:
        ci_max["reference_v_kmh"] = ref_v
    if mode == "value":
        ci_max["value_Cs"] = _get_number(cm, "value_Cs", "cost_index.ci_max",
                                         minimum=0.0, exclusive_min=True)
    elif "value_Cs" in cm:
        raise ConfigError(
            "cost_index.ci_max.value_Cs: only allowed with mode value"
        )
    if mode == "calibrated" and "ci0_fraction" not in cost_index:
        raise ConfigError(
            "cost_index.ci_max: mode calibrated needs ci0_fraction "
            "(the anchor uses it)"
        )
    cost_index["ci_max"] = ci_max

    tau_raw = _require_mapping(cx.get("tau", None) or {}, "cost_index.tau")
    _reject_unknown(tau_raw, _TAU_KEYS, "cost_index.tau")
    tau_mode = tau_raw.get("mode")
    if tau_mode not in ("fraction_of_tc0", "seconds", "infinite"):
        raise ConfigError(
            "cost_index.tau.mode: expected one of fraction_of_tc0, seconds, "
            f"infinite, got {tau_mode!r}"
        )
    tau = {"mode": tau_mode}
    if tau_mode == "fraction_of_tc0":
        tau["factor"] = _get_number(tau_raw, "factor", "cost_index.tau",
                                    minimum=0.0, exclusive_min=True)
    elif tau_mode == "seconds":
        tau["seconds"] = _get_number(tau_raw, "seconds", "cost_index.tau",
                                     minimum=0.0, exclusive_min=True)
    for key in ("factor", "seconds"):
        if key in tau_raw and key not in tau:
            raise ConfigError(
                f"cost_index.tau.{key}: only allowed with its matching mode"
            )
    cost_index["tau"] = tau

    events_raw = cx.get("events", [])
    if events_raw is None:
        events_raw = []
    if not isinstance(events_raw, (list, tuple)):
        raise ConfigError("cost_index.events: expected a list")
    events = []
    for i, ev_raw in enumerate(events_raw):
        path = f"cost_index.events[{i}]"
        ev_raw = _require_mapping(ev_raw, path)
        _reject_unknown(ev_raw, _EVENT_KEYS, path)
        ev = {}
        has_f = "ci_in_fraction" in ev_raw
        has_v = "ci_in_value_Cs" in ev_raw
        if has_f == has_v:
            raise ConfigError(
                f"{path}: exactly one of ci_in_fraction or ci_in_value_Cs "
                "is required"
            )
        if has_f:
            ev["ci_in_fraction"] = _get_number(ev_raw, "ci_in_fraction", path,
                                               minimum=0.0, maximum=1.0)
        else:
            ev["ci_in_value_Cs"] = _get_number(ev_raw, "ci_in_value_Cs", path,
                                               minimum=0.0)
        has_wp = "at_waypoint_km" in ev_raw
        has_t = "at_time_s" in ev_raw
        if has_wp == has_t:
            raise ConfigError(
                f"{path}: exactly one of at_waypoint_km or at_time_s is required"
            )
        if has_wp:
            ev["at_waypoint_km"] = _get_pair(ev_raw["at_waypoint_km"],
                                             f"{path}.at_waypoint_km")
        else:
            ev["at_time_s"] = _get_number(ev_raw, "at_time_s", path, minimum=0.0)
        events.append(ev)
    cost_index["events"] = events

    return {"aircraft": aircraft, "scenario": scenario,
            "cost_index": cost_index}


def _apply_env_overrides(raw, env):
    """Fold ECONCLIMB_* environment variables into the raw config mapping."""
    for name, text in sorted(env.items()):
        if not name.startswith(ENV_PREFIX):
            continue
        path = name[len(ENV_PREFIX):].lower().split("__")
        if not all(path):
            raise ConfigError(f"malformed override variable {name}")
        try:
            value = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"override {name}: unparseable value: {exc}")
        node = raw
        for part in path[:-1]:
            nxt = node.get(part)
            if nxt is None:
                nxt = {}
                node[part] = nxt
            if not isinstance(nxt, dict):
                raise ConfigError(
                    f"override {name}: {part} is not a mapping in the config"
                )
            node = nxt
        node[path[-1]] = value
    return raw


def load_config(path, env=None, sim_step=None, atmo_step=None):
    """Read, override, and validate a scenario config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}")
    if raw is None:
        raise ConfigError(f"config {path} is empty")
    raw = _require_mapping(raw, "config")
    raw = _apply_env_overrides(raw, env if env is not None else os.environ)
    if sim_step is not None:
        raw.setdefault("scenario", {})["sim_step_s"] = sim_step
    if atmo_step is not None:
        raw.setdefault("scenario", {})["atmosphere_step_m"] = atmo_step
    return validate_config(raw)


def serialize_config(cfg):
    """Canonical YAML text for a validated config mapping."""
    return yaml.safe_dump(cfg, sort_keys=True, default_flow_style=None)


# ---------------------------------------------------------------------------
# scenario assembly

def build_scenario(cfg, no_event=False):
    """Resolve config modes into a concrete Scenario.

    Returns (scenario, meta) where meta records the resolved calibration:
    ci_max mode and value, ci0, tau mode and value.
    """
    ac = cfg["aircraft"]
    params = AircraftParams(
        wing_area=ac["wing_area_m2"],
        mass=ac["mass_kg"],
        cd0=ac["cd0"],
        cd2=ac["cd2"],
        v_max=ac["vmax_kmh"] / 3.6,
        voltage=ac["voltage_v"],
        efficiency=ac["efficiency"],
        gravity=ac["gravity_ms2"],
    )
    sc = cfg["scenario"]
    waypoints = tuple((x * 1000.0, h * 1000.0) for x, h in sc["waypoints_km"])
    h_dot_bar = sc["h_dot_bar_ms"]
    atmo_step = sc["atmosphere_step_m"]

    full_seg = segment_between(waypoints[0], waypoints[-1], h_dot_bar,
                               TROPOSPHERE, atmo_step)

    cx = cfg["cost_index"]
    cm = cx["ci_max"]
    mode = cm["mode"]
    if mode == "vmax":
        ci_max = calibrate_ci_max(params, full_seg)
    elif mode == "calibrated":
        ci_max = calibrate_ci_max_to_speed(
            params, full_seg, cm["reference_v_kmh"] / 3.6, cx["ci0_fraction"])
    else:
        ci_max = cm["value_Cs"]

    if "ci0_fraction" in cx:
        ci0 = cx["ci0_fraction"] * ci_max
    else:
        ci0 = cx["ci0_value_Cs"]

    tau_cfg = cx["tau"]
    if tau_cfg["mode"] == "infinite":
        tau = math.inf
    elif tau_cfg["mode"] == "seconds":
        tau = tau_cfg["seconds"]
    else:
        v0 = fms_initial_speed(full_seg, ci0, params).v_star
        tau = tau_cfg["factor"] * full_seg.d / v0

    events = []
    if not no_event:
        for ev in cx["events"]:
            if "ci_in_fraction" in ev:
                ci_in = ev["ci_in_fraction"] * ci_max
            else:
                ci_in = ev["ci_in_value_Cs"]
            if "at_waypoint_km" in ev:
                wp = ev["at_waypoint_km"]
                events.append(CiEvent(
                    ci_in=ci_in,
                    at_waypoint=(wp[0] * 1000.0, wp[1] * 1000.0),
                ))
            else:
                events.append(CiEvent(ci_in=ci_in, at_time=ev["at_time_s"]))

    schedule = CostIndexSchedule(ci0=ci0, tau=tau, ci_max=ci_max,
                                 events=tuple(events))
    scenario = Scenario(
        waypoints=waypoints,
        aircraft=params,
        schedule=schedule,
        q0=sc["q0_coulombs"],
        h_dot_bar=h_dot_bar,
        sim_step=sc["sim_step_s"],
        atmo=TROPOSPHERE,
        atmo_step=atmo_step,
        ci_max_mode=mode,
    )
    meta = {
        "ci_max_mode": mode,
        "ci_max_Cs": ci_max,
        "ci0_Cs": ci0,
        "tau_mode": tau_cfg["mode"],
        "tau_s": tau,
    }
    return scenario, meta


# ---------------------------------------------------------------------------
# output helpers

def fmt(value):
    """Fixed 6-significant-digit rendering used for all numeric output."""
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return f"{value:.6g}"


def _jsonable(value):
    """Round floats to output precision; keep JSON strictly standard."""
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf"
        if math.isnan(value):
            return "nan"
        return float(f"{float(value):.6g}")
    return value


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _OutputError(f"cannot write {path}: {exc}")


class _OutputError(Exception):
    pass


# ---------------------------------------------------------------------------
# subcommands

def cmd_plan(config_path, out_path=None, no_event=False, sim_step=None,
             atmo_step=None, env=None, stream=None):
    stream = stream if stream is not None else sys.stdout
    cfg = load_config(config_path, env=env, sim_step=sim_step,
                      atmo_step=atmo_step)
    scenario, meta = build_scenario(cfg, no_event=no_event)
    result = run_scenario(scenario)
    s = result.summary

    lines = [
        f"ci_max: {fmt(s['ci_max_Cs'])} C/s (mode: {s['ci_max_mode']})",
        f"ci0: {fmt(s['ci0_Cs'])} C/s  tau: {fmt(s['tau_s'])} s",
    ]
    for i, seg in enumerate(s["segments"]):
        lines.append(
            f"segment {i}: v* = {fmt(seg['v_star_kmh'])} km/h "
            f"({fmt(seg['v_star_ms'])} m/s)  t_c* = {fmt(seg['planned_time_s'])} s  "
            f"J* = {fmt(seg['j_star_C'])} C  Q_f = {fmt(seg['q_f_C'])} C"
            + ("  [envelope limit]" if seg["at_envelope_limit"] else "")
        )
    for i, ev in enumerate(s["events"]):
        state = "applied" if ev["applied"] else "skipped (after arrival)"
        lines.append(
            f"event {i}: t = {fmt(ev['t_s'])} s  ci_in = {fmt(ev['ci_in_Cs'])} C/s"
            f"  ({state})"
        )
    lines.append(
        f"total time: {fmt(s['total_time_s'])} s  "
        f"baseline: {fmt(s['baseline_time_s'])} s  "
        f"delta: {fmt(s['time_delta_s'])} s"
    )
    lines.append(
        f"energy used: {fmt(s['energy_used_J'])} J  "
        f"final charge: {fmt(s['final_q_C'])} C  "
        f"final energy: {fmt(s['final_e_J'])} J"
    )
    lines.append(f"battery depleted: {fmt(s['battery_depleted'])}")
    stream.write("\n".join(lines) + "\n")

    if out_path is not None:
        record = _jsonable(s)
        _write_text(out_path, json.dumps(record, indent=2, sort_keys=True,
                                         allow_nan=False) + "\n")
    return 0


def _profile_csv(samples):
    has_track = samples and samples[0].v_track is not None
    header = "t_s,x_m,h_m,v_ms,ci_Cs,q_C,e_J"
    if has_track:
        header += ",v_track_ms"
    rows = [header]
    for smp in samples:
        row = (f"{fmt(smp.t)},{fmt(smp.x)},{fmt(smp.h)},{fmt(smp.v)},"
               f"{fmt(smp.ci)},{fmt(smp.q)},{fmt(smp.e)}")
        if has_track:
            row += f",{fmt(smp.v_track)}"
        rows.append(row)
    return "\n".join(rows) + "\n"


def cmd_profile(config_path, out_path, no_event=False, sim_step=None,
                atmo_step=None, env=None, stream=None):
    stream = stream if stream is not None else sys.stdout
    cfg = load_config(config_path, env=env, sim_step=sim_step,
                      atmo_step=atmo_step)
    scenario, _meta = build_scenario(cfg, no_event=no_event)
    result = run_scenario(scenario)
    _write_text(out_path, _profile_csv(result.samples))
    meta_path = f"{out_path}.meta.json"
    _write_text(meta_path, json.dumps(_jsonable(result.summary), indent=2,
                                      sort_keys=True, allow_nan=False) + "\n")
    stream.write(
        f"wrote {len(result.samples)} samples to {out_path} "
        f"(summary: {meta_path})\n"
    )
    return 0


def cmd_sweep(config_path, out_path, v_min_kmh, v_max_kmh, v_step_kmh,
              tau_list_s, no_event=False, sim_step=None, atmo_step=None,
              env=None, stream=None):
    stream = stream if stream is not None else sys.stdout
    cfg = load_config(config_path, env=env, sim_step=sim_step,
                      atmo_step=atmo_step)
    scenario, meta = build_scenario(cfg, no_event=no_event)
    if v_max_kmh is None:
        v_max_kmh = cfg["aircraft"]["vmax_kmh"]
    if not v_step_kmh > 0.0 or v_min_kmh >= v_max_kmh:
        raise ConfigError(
            f"empty sweep grid: v from {v_min_kmh:g} to {v_max_kmh:g} km/h "
            f"step {v_step_kmh:g}"
        )
    grid_kmh = np.arange(v_min_kmh, v_max_kmh + 0.5 * v_step_kmh, v_step_kmh)
    grid_kmh = grid_kmh[grid_kmh <= v_max_kmh + 1e-12]
    if grid_kmh.size == 0:
        raise ConfigError("empty sweep grid")
    v_grid = grid_kmh / 3.6

    if tau_list_s is None:
        taus = [] if math.isinf(meta["tau_s"]) else [meta["tau_s"]]
    else:
        taus = []
        for item in tau_list_s.split(","):
            item = item.strip()
            if not item:
                continue
            if item.lower() in ("inf", "infinite"):
                taus.append(math.inf)
                continue
            try:
                value = float(item)
            except ValueError:
                raise ConfigError(f"bad tau entry {item!r}")
            if not value > 0.0:
                raise ConfigError(f"tau entries must be positive, got {item!r}")
            taus.append(value)

    origin = scenario.waypoints[0]
    cruise = scenario.waypoints[-1]
    full_seg = segment_between(origin, cruise, scenario.h_dot_bar,
                               scenario.atmo, scenario.atmo_step)
    curves = sweep_cost(full_seg, scenario.schedule, scenario.aircraft,
                        v_grid, taus, q0=scenario.q0)

    rows = ["tau_s,v_ms,v_kmh,j_C,is_argmin"]
    for curve in curves:
        for i, (v, j) in enumerate(zip(curve.v, curve.j)):
            rows.append(
                f"{fmt(curve.tau)},{fmt(v)},{fmt(v * 3.6)},{fmt(j)},"
                f"{1 if i == curve.argmin_index else 0}"
            )
    _write_text(out_path, "\n".join(rows) + "\n")
    stream.write(f"wrote {len(curves)} curves to {out_path}\n")
    return 0


def cmd_calibrate(config_path, out_path=None, sim_step=None, atmo_step=None,
                  env=None, stream=None):
    stream = stream if stream is not None else sys.stdout
    cfg = load_config(config_path, env=env, sim_step=sim_step,
                      atmo_step=atmo_step)
    ac = cfg["aircraft"]
    params = AircraftParams(
        wing_area=ac["wing_area_m2"], mass=ac["mass_kg"], cd0=ac["cd0"],
        cd2=ac["cd2"], v_max=ac["vmax_kmh"] / 3.6, voltage=ac["voltage_v"],
        efficiency=ac["efficiency"], gravity=ac["gravity_ms2"],
    )
    sc = cfg["scenario"]
    waypoints = [(x * 1000.0, h * 1000.0) for x, h in sc["waypoints_km"]]
    full_seg = segment_between(waypoints[0], waypoints[-1], sc["h_dot_bar_ms"],
                               TROPOSPHERE, sc["atmosphere_step_m"])
    cx = cfg["cost_index"]
    if "ci0_fraction" not in cx:
        raise ConfigError(
            "cost_index.ci0_fraction is required to compare calibration modes"
        )
    fraction = cx["ci0_fraction"]
    ref_v_kmh = cx["ci_max"].get("reference_v_kmh")
    chosen = cx["ci_max"]["mode"]

    report = {"chosen_mode": chosen, "ci0_fraction": fraction, "modes": {}}
    ci_vmax = calibrate_ci_max(params, full_seg)
    v0_vmax = fms_initial_speed(full_seg, fraction * ci_vmax, params).v_star
    entry = {"ci_max_Cs": ci_vmax, "v0_kmh": v0_vmax * 3.6}
    if ref_v_kmh is not None:
        entry["deviation_pct"] = 100.0 * (v0_vmax * 3.6 - ref_v_kmh) / ref_v_kmh
    report["modes"]["vmax"] = entry

    if ref_v_kmh is not None:
        ci_cal = calibrate_ci_max_to_speed(params, full_seg, ref_v_kmh / 3.6,
                                           fraction)
        v0_cal = fms_initial_speed(full_seg, fraction * ci_cal, params).v_star
        report["modes"]["calibrated"] = {
            "ci_max_Cs": ci_cal,
            "v0_kmh": v0_cal * 3.6,
            "reference_v_kmh": ref_v_kmh,
            "deviation_pct": 100.0 * (v0_cal * 3.6 - ref_v_kmh) / ref_v_kmh,
        }

    lines = [f"chosen mode: {chosen}  (ci0 fraction: {fmt(fraction)})"]
    for mode_name, data in report["modes"].items():
        line = (f"mode {mode_name}: ci_max = {fmt(data['ci_max_Cs'])} C/s  "
                f"v0* = {fmt(data['v0_kmh'])} km/h")
        if "deviation_pct" in data:
            line += f"  (off reference by {fmt(data['deviation_pct'])}%)"
        lines.append(line)
    if ref_v_kmh is None:
        lines.append(
            "calibrated mode not shown: set cost_index.ci_max.reference_v_kmh"
        )
    stream.write("\n".join(lines) + "\n")

    if out_path is not None:
        _write_text(out_path, json.dumps(_jsonable(report), indent=2,
                                         sort_keys=True, allow_nan=False) + "\n")
    return 0


# ---------------------------------------------------------------------------
# entry point

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="econclimb",
        description="Minimum-DOC climb planning for battery-electric aircraft",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out):
        p.add_argument("--config", required=True, help="scenario config file")
        if needs_out == "required":
            p.add_argument("--out", required=True, help="output file path")
        else:
            p.add_argument("--out", default=None, help="optional output file path")
        p.add_argument("--no-event", action="store_true",
                       help="drop all ATC events (baseline run)")
        p.add_argument("--sim-step", type=float, default=None, metavar="S",
                       help="override scenario.sim_step_s")
        p.add_argument("--atmo-step", type=float, default=None, metavar="M",
                       help="override scenario.atmosphere_step_m")

    p_plan = sub.add_parser("plan", help="solve the climb plan and print it")
    common(p_plan, "optional")

    p_profile = sub.add_parser("profile", help="simulate and write the profile")
    common(p_profile, "required")

    p_sweep = sub.add_parser("sweep", help="tabulate cost vs airspeed")
    common(p_sweep, "required")
    p_sweep.add_argument("--v-min-kmh", type=float, default=80.0)
    p_sweep.add_argument("--v-max-kmh", type=float, default=None,
                         help="default: aircraft vmax_kmh")
    p_sweep.add_argument("--v-step-kmh", type=float, default=0.5)
    p_sweep.add_argument("--tau-s", default=None,
                         help="comma-separated time constants; 'inf' allowed; "
                              "default: the configured tau")

    p_cal = sub.add_parser("calibrate", help="report ci_max calibration modes")
    p_cal.add_argument("--config", required=True)
    p_cal.add_argument("--out", default=None)
    p_cal.add_argument("--sim-step", type=float, default=None)
    p_cal.add_argument("--atmo-step", type=float, default=None)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "plan":
            return cmd_plan(args.config, out_path=args.out,
                            no_event=args.no_event, sim_step=args.sim_step,
                            atmo_step=args.atmo_step)
        if args.command == "profile":
            return cmd_profile(args.config, args.out, no_event=args.no_event,
                               sim_step=args.sim_step, atmo_step=args.atmo_step)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out, args.v_min_kmh,
                             args.v_max_kmh, args.v_step_kmh, args.tau_s,
                             no_event=args.no_event, sim_step=args.sim_step,
                             atmo_step=args.atmo_step)
        if args.command == "calibrate":
            return cmd_calibrate(args.config, out_path=args.out,
                                 sim_step=args.sim_step,
                                 atmo_step=args.atmo_step)
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, DomainError, DegenerateSegmentError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NoInteriorOptimumError, SaddlePointError, EnvelopeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except _OutputError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
