"""Scenario files: a flat key-value text format for game configurations.

Grammar (one `key = value` per line, `#` starts a comment):

    pursuers      = 10,90 -60,80 -90,-90 90,-10 -90,30
    evader        = 0,0
    u_p_max       = 1.1
    u_e_max       = 1.0
    r_c           = 5
    M             = 4
    K             = 10
    Q             = 1.0          # scalar s means s * I; or four numbers a b c d
    R             = 0.0
    P             = 3.0
    max_steps     = 500
    seed          = 0
    policy        = tmpc         # tmpc | voronoi | direct_charge
    evader_policy = static       # static | random | flee_nearest |
                                 # boundary_seek | worst_vertex | external
    voronoi_margin = 50.0
    egp_eps       = 1e-3

Every key is optional except `pursuers` and `evader`.  The same keys are
accepted as `--set key=value` command-line overrides (for list-valued keys
use the same syntax as the file, e.g. `--set "pursuers=1,1 -1,1 -1,-1 1,-1"`).
"""
from __future__ import annotations

import importlib.resources

import numpy as np

from .sim import ScenarioConfig


class ScenarioError(Exception):
    """Malformed scenario text; the message carries line/field context."""


_INT_KEYS = {"M", "K", "max_steps", "seed"}
_FLOAT_KEYS = {"u_p_max", "u_e_max", "r_c", "voronoi_margin", "egp_eps"}
_WEIGHT_KEYS = {"Q", "R", "P"}
_STR_KEYS = {"policy", "evader_policy"}
_POINT_KEYS = {"pursuers", "evader"}
ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _WEIGHT_KEYS | _STR_KEYS | _POINT_KEYS

# scenario key -> ScenarioConfig field
_FIELD_OF = {
    "pursuers": "pursuer_init",
    "evader": "evader_init",
    "policy": "pursuer_policy",
}


def _parse_points(value: str, where: str) -> np.ndarray:
    pts = []
    for tok in value.split():
        parts = tok.split(",")
        if len(parts) != 2:
            raise ScenarioError(f"{where}: expected x,y pairs, got {tok!r}")
        try:
            pts.append([float(parts[0]), float(parts[1])])
        except ValueError:
            raise ScenarioError(f"{where}: bad number in {tok!r}")
    if not pts:
        raise ScenarioError(f"{where}: no points given")
    return np.array(pts)


def _parse_weight(value: str, where: str):
    toks = value.split()
    try:
        nums = [float(t) for t in toks]
    except ValueError:
        raise ScenarioError(f"{where}: bad number in {value!r}")
    if len(nums) == 1:
        return nums[0]
    if len(nums) == 4:
        return np.array(nums).reshape(2, 2)
    raise ScenarioError(f"{where}: weights take 1 or 4 numbers, got {len(nums)}")


def parse_value(key: str, value: str, where: str = "override"):
    """One scenario value from its textual form; raises ScenarioError."""
    value = value.strip()
    if key in _POINT_KEYS:
        pts = _parse_points(value, where)
        if key == "evader":
            if pts.shape[0] != 1:
                raise ScenarioError(f"{where}: evader takes exactly one point")
            return pts[0]
        return pts
    if key in _INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ScenarioError(f"{where}: {key} must be an integer, got {value!r}")
    if key in _FLOAT_KEYS:
        try:
            return float(value)
        except ValueError:
            raise ScenarioError(f"{where}: {key} must be a number, got {value!r}")
    if key in _WEIGHT_KEYS:
        return _parse_weight(value, where)
    if key in _STR_KEYS:
        return value
    raise ScenarioError(f"{where}: unknown key {key!r}")


def parse_scenario_text(text: str, name: str = "<scenario>") -> dict:
    """Scenario text -> {config-field: value}; raises ScenarioError."""
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"{name}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in ALL_KEYS:
            raise ScenarioError(f"{name}:{lineno}: unknown key {key!r}")
        field = _FIELD_OF.get(key, key)
        if field in fields:
            raise ScenarioError(f"{name}:{lineno}: duplicate key {key!r}")
        fields[field] = parse_value(key, value, f"{name}:{lineno}")
    return fields


def apply_overrides(fields: dict, overrides: list[str]) -> dict:
    """Fold `key=value` strings (from --set flags) into parsed fields."""
    out = dict(fields)
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(f"override {item!r}: expected key=value")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in ALL_KEYS:
            raise ScenarioError(f"override: unknown key {key!r}")
        out[_FIELD_OF.get(key, key)] = parse_value(key, value, f"--set {key}")
    return out


def _resolve_text(path_or_name: str) -> tuple[str, str]:
    """Scenario text from a filesystem path or a bundled scenario name."""
    import os

    if os.path.exists(path_or_name):
        with open(path_or_name, "r", encoding="utf-8") as fh:
            return fh.read(), path_or_name
    base = importlib.resources.files(__package__) / "scenarios"
    for cand in (path_or_name, path_or_name + ".scenario"):
        res = base / cand
        if res.is_file():
            return res.read_text(encoding="utf-8"), f"bundled:{cand}"
    raise ScenarioError(f"scenario not found: {path_or_name!r} "
                        "(no such file or bundled scenario)")


def load_scenario(path_or_name: str,
                  overrides: list[str] | None = None) -> ScenarioConfig:
    """Build a ScenarioConfig from a file path or bundled name + overrides."""
    text, name = _resolve_text(path_or_name)
    fields = parse_scenario_text(text, name)
    if overrides:
        fields = apply_overrides(fields, overrides)
    for req in ("pursuer_init", "evader_init"):
        if req not in fields:
            raise ScenarioError(f"{name}: missing required key "
                                f"{'pursuers' if req == 'pursuer_init' else 'evader'}")
    try:
        return ScenarioConfig(**fields)
    except ValueError as err:
        raise ScenarioError(f"{name}: {err}")


def bundled_scenarios() -> list[str]:
    base = importlib.resources.files(__package__) / "scenarios"
    return sorted(p.name for p in base.iterdir() if p.name.endswith(".scenario"))
