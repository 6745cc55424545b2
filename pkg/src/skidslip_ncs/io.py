"""Scenario files (JSON) and simulation traces (CSV)."""

import csv
import io
import json
from importlib import resources

import jsonschema
import numpy as np

from .discretization import DelayBounds
from .frame import TrackingError, TrajectorySegment
from .robot import Pose, RobotGeometry
from .simulator import (
    TRACE_COLUMNS,
    ConstantDelay,
    ConstantSlip,
    OpenLoop,
    RandomWalkSlip,
    Scenario,
    SinusoidSlip,
    StaticGain,
    TriangleWaveDelay,
    UniformRandomDelay,
)


class ScenarioError(ValueError):
    """Scenario document is unreadable, schema-invalid or physically inconsistent."""


def load_schema():
    text = resources.files("skidslip_ncs").joinpath("data/scenario.schema.json").read_text()
    return json.loads(text)


def _describe(err):
    path = "/".join(str(p) for p in err.absolute_path) or "<root>"
    if err.validator == "oneOf" and err.context:
        err = jsonschema.exceptions.best_match(err.context)
        inner = "/".join(str(p) for p in err.absolute_path)
        path = inner or path
    return f"{path}: {err.message}"


def scenario_from_dict(doc):
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        raise ScenarioError("; ".join(_describe(e) for e in errors))
    try:
        g, s, b, e = doc["geometry"], doc["segment"], doc["delay_bounds"], doc["initial_error"]
        slip = doc["slip_profile"]
        slip_profile = {
            "constant": lambda: ConstantSlip(slip["d_mu_r"], slip["d_mu_l"]),
            "sinusoid": lambda: SinusoidSlip(slip["amplitude"], slip["period"]),
            "random_walk": lambda: RandomWalkSlip(slip["step_size"]),
        }[slip["kind"]]()
        dp = doc["delay_profile"]
        delay_profile = {
            "constant": lambda: ConstantDelay(dp["tau"]),
            "uniform_random": UniformRandomDelay,
            "triangle_wave": lambda: TriangleWaveDelay(dp["period"]),
        }[dp["kind"]]()
        ctrl = doc["controller"]
        if ctrl["kind"] == "open_loop":
            controller = OpenLoop()
        else:
            k = ctrl.get("K")
            controller = StaticGain(None if k is None else np.array(k, dtype=float))
        o = s["origin"]
        return Scenario(
            geometry=RobotGeometry(g["gear_radius"], g["track_distance"]),
            segment=TrajectorySegment(Pose(o["x"], o["y"], o["theta"]), s["v_desired"]),
            bounds=DelayBounds(b["tau_min"], b["tau_max"], b["sample_time"]),
            initial_error=TrackingError(e["e_x"], e["e_y"], e["e_theta"]),
            delta_mu_max=doc["delta_mu_max"],
            horizon_steps=doc["horizon_steps"],
            seed=doc["seed"],
            slip_profile=slip_profile,
            delay_profile=delay_profile,
            controller=controller,
            sim_substeps=doc["sim_substeps"],
            margin=doc.get("margin", 1e-6),
        )
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from exc


def _profile_dict(p):
    out = {"kind": p.kind}
    for name in getattr(p, "__dataclass_fields__", {}):
        out[name] = getattr(p, name)
    return out


def scenario_to_dict(sc):
    """Inverse of :func:`scenario_from_dict`, with a fixed key order."""
    ctrl = {"kind": sc.controller.kind}
    if isinstance(sc.controller, StaticGain) and sc.controller.K is not None:
        ctrl["K"] = np.asarray(sc.controller.K, dtype=float).tolist()
    o = sc.segment.origin
    e = sc.initial_error
    return {
        "geometry": {
            "gear_radius": sc.geometry.gear_radius,
            "track_distance": sc.geometry.track_distance,
        },
        "segment": {
            "origin": {"x": o.x, "y": o.y, "theta": o.theta},
            "v_desired": sc.segment.v_desired,
        },
        "delay_bounds": {
            "tau_min": sc.bounds.tau_min,
            "tau_max": sc.bounds.tau_max,
            "sample_time": sc.bounds.sample_time,
        },
        "initial_error": {"e_x": e.e_x, "e_y": e.e_y, "e_theta": e.e_theta},
        "delta_mu_max": sc.delta_mu_max,
        "horizon_steps": sc.horizon_steps,
        "seed": sc.seed,
        "slip_profile": _profile_dict(sc.slip_profile),
        "delay_profile": _profile_dict(sc.delay_profile),
        "controller": ctrl,
        "sim_substeps": sc.sim_substeps,
        "margin": sc.margin,
    }


def load_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(doc)


def dump_scenario(sc):
    return json.dumps(scenario_to_dict(sc), indent=2) + "\n"


def fmt(x):
    """17 significant digits, with negative zero printed as ``0``."""
    return f"{float(x) + 0.0:.17g}"


def trace_to_csv(trace):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for row in trace.rows():
        cells = [fmt(v) for v in row]
        cells[0] = str(int(row[0]))
        writer.writerow(cells)
    return buf.getvalue()


def write_trace(trace, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trace_to_csv(trace))


def read_trace(path):
    """Parse a trace file into a dict of column name to float array."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
