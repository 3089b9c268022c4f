"""Run configuration: JSON schema checks with field-level messages.

Layout (all sections optional except the one the mode needs)::

    {
      "units": {"system": "natural"} | {"system": "SI", "omega_ref": 2.0e15},
      "pair": {
        "atom_A": ATOM, "atom_B": ATOM, "state_A": "excited",
        "separation": 10.0, "temperature": 0.0,
        "medium": {"atom": ATOM, "density": 1e-3, "eps_density": "ground"},
        "method": "auto", "width_floor": 1e-6
      },
      "slab": {
        "medium_A": {"atom": ATOM, "density": 1e-2},
        "medium_B": {"atom": ATOM, "density": 1e-2},
        "separation": 1e5, "temperature": 0.02,
        "force_mode": "reduced_Eq47", "mfp_density": "total",
        "symmetric_width": false, "pairwise": false
      },
      "sweep": {"target": "pair", "variable": "separation",
                "min": 1.0, "max": 100.0, "points": 20, "scale": "log"},
      "tolerances": {"abs_tol": 1e-300, "rel_tol": 1e-9},
      "output": {"stem": "result"}
    }

    ATOM = {"frequency": 1.0, "dipole_sq": 1.0, "width": 0.0,
            "natural_width": 0.0, "broadening_rate": 0.0}
         | {"transitions": [{"frequency": .., "dipole_sq": .., "width": ..}, ...], ...}

With ``"system": "SI"`` numeric inputs are read in SI (frequencies in rad/s,
lengths in m, densities in m^-3, temperature in K, dipole_sq in C^2 m^2,
broadening_rate in m^3/s) and converted to natural units before any
computation; results are reported in natural units.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DomainError
from .pairpot import DEFAULT_WIDTH_FLOOR, PairConfig
from .quad import QuadratureSpec
from .slab import FORCE_MODES, SlabConfig
from .spectra import AtomSpecies, MediumSpec, Transition
from .units import UnitSystem

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "MODES", "PAIR_METHODS"]

MODES = ("pair-potential", "slab-force", "sweep", "validate")
PAIR_METHODS = ("auto", "real_axis", "matsubara", "imag_axis")

# which unit each numeric leaf name carries
_FIELD_QUANTITY = {
    "frequency": "frequency",
    "width": "frequency",
    "natural_width": "frequency",
    "dipole_sq": "dipole_sq",
    "broadening_rate": "broadening_rate",
    "density": "density",
    "separation": "length",
    "temperature": "temperature",
}

DEFAULT_TOLERANCES = {"abs_tol": 1e-300, "rel_tol": 1e-9}


class ConfigError(ValueError):
    """Schema violation; ``field`` is the dotted path of the offending entry."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field = field_path


def _number(d, key, path, *, required=True, default=None, minimum=None, strict=False):
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required field")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}", f"must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{path}.{key}", "must be finite")
    if minimum is not None:
        if strict and not v > minimum:
            raise ConfigError(f"{path}.{key}", f"must be > {minimum:g}, got {v!r}")
        if not strict and not v >= minimum:
            raise ConfigError(f"{path}.{key}", f"must be >= {minimum:g}, got {v!r}")
    return v


def _choice(d, key, path, options, default):
    v = d.get(key, default)
    if v not in options:
        raise ConfigError(f"{path}.{key}", f"must be one of {list(options)}, got {v!r}")
    return v


def _section(d, key, path, required=True):
    if key not in d or d[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}".lstrip("."), "missing required section")
        return None
    v = d[key]
    if not isinstance(v, dict):
        raise ConfigError(f"{path}.{key}".lstrip("."), "must be an object")
    return v


def _unknown(d, allowed, path):
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"{path}.{extra[0]}".lstrip("."), f"unknown field (allowed: {sorted(allowed)})")


def _atom(d, path) -> AtomSpecies:
    _unknown(d, {"frequency", "dipole_sq", "width", "natural_width", "broadening_rate", "transitions"}, path)
    nat = _number(d, "natural_width", path, required=False, default=0.0, minimum=0.0)
    kbr = _number(d, "broadening_rate", path, required=False, default=0.0, minimum=0.0)
    if "transitions" in d:
        trs = d["transitions"]
        if not isinstance(trs, list) or not trs:
            raise ConfigError(f"{path}.transitions", "must be a non-empty list")
        out = []
        for i, t in enumerate(trs):
            p = f"{path}.transitions[{i}]"
            if not isinstance(t, dict):
                raise ConfigError(p, "must be an object")
            _unknown(t, {"frequency", "dipole_sq", "width"}, p)
            out.append(Transition(_number(t, "frequency", p, minimum=0.0, strict=True),
                                  _number(t, "dipole_sq", p, minimum=0.0),
                                  _number(t, "width", p, required=False, default=0.0, minimum=0.0)))
        return AtomSpecies(tuple(out), nat, kbr)
    return AtomSpecies.two_level(_number(d, "frequency", path, minimum=0.0, strict=True),
                                 _number(d, "dipole_sq", path, minimum=0.0),
                                 _number(d, "width", path, required=False, default=0.0, minimum=0.0),
                                 nat, kbr)


def _medium(d, path, temperature) -> MediumSpec:
    _unknown(d, {"atom", "density", "eps_density"}, path)
    atom = _atom(_section(d, "atom", path), f"{path}.atom")
    dens = _number(d, "density", path, minimum=0.0)
    eps = _choice(d, "eps_density", path, ("ground", "total"), "ground")
    return MediumSpec(atom, dens, temperature, None, eps)


def _convert_units(raw: dict, units: UnitSystem):
    """Deep copy of ``raw`` with every recognised numeric leaf converted to natural units."""

    def walk(node, parent_key=None):
        if isinstance(node, dict):
            out = {}
            for k, v in node.items():
                if k in ("units", "tolerances", "output"):
                    out[k] = copy.deepcopy(v)
                elif k == "sweep" and isinstance(v, dict):
                    out[k] = _convert_sweep(v, units)
                elif k in _FIELD_QUANTITY and isinstance(v, (int, float)) and not isinstance(v, bool):
                    out[k] = units.to_natural(_FIELD_QUANTITY[k], float(v))
                else:
                    out[k] = walk(v, k)
            return out
        if isinstance(node, list):
            return [walk(v, parent_key) for v in node]
        return node

    return walk(raw)


def _convert_sweep(sw: dict, units: UnitSystem):
    out = dict(sw)
    leaf = str(sw.get("variable", "")).split(".")[-1]
    if leaf in _FIELD_QUANTITY:
        for key in ("min", "max"):
            v = sw.get(key)
            if isinstance(v, (int, float)) and not isinstance(v, bool):
                out[key] = units.to_natural(_FIELD_QUANTITY[leaf], float(v))
    return out


@dataclass(frozen=True)
class SweepSpec:
    target: str
    variable: str
    values: tuple


@dataclass(frozen=True)
class RunConfig:
    mode: str
    raw: dict
    natural: dict
    units: Optional[UnitSystem]
    tolerances: QuadratureSpec
    pair: Optional[dict] = None
    slab: Optional[dict] = None
    sweep: Optional[SweepSpec] = None
    stem: str = "result"
    meta: dict = field(default_factory=dict)

    def points(self):
        """List of (x, section-dict) for every evaluation point, in order."""
        target = self.sweep.target if self.sweep else ("pair" if self.mode == "pair-potential" else "slab")
        base = self.natural[target]
        if self.sweep is None:
            x = base.get("separation")
            return target, [(x, base)]
        out = []
        for v in self.sweep.values:
            sec = copy.deepcopy(base)
            _set_path(sec, self.sweep.variable, v)
            out.append((v, sec))
        return target, out


def _get_path(d, dotted):
    node = d
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return None
        node = node[part]
    return node


def _set_path(d, dotted, value):
    parts = dotted.split(".")
    node = d
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value


def build_pair(sec: dict, path="pair") -> dict:
    _unknown(sec, {"atom_A", "atom_B", "state_A", "separation", "temperature", "medium", "method",
                   "width_floor"}, path)
    T = _number(sec, "temperature", path, required=False, default=0.0, minimum=0.0)
    med = None
    if sec.get("medium") is not None:
        med = _medium(_section(sec, "medium", path), f"{path}.medium", T)
    cfg = PairConfig(_atom(_section(sec, "atom_A", path), f"{path}.atom_A"),
                     _atom(_section(sec, "atom_B", path), f"{path}.atom_B"),
                     _number(sec, "separation", path, minimum=0.0, strict=True),
                     _choice(sec, "state_A", path, ("ground", "excited"), "excited"),
                     med, T)
    method = _choice(sec, "method", path, PAIR_METHODS, "auto")
    floor = _number(sec, "width_floor", path, required=False, default=DEFAULT_WIDTH_FLOOR,
                    minimum=0.0, strict=True)
    if method == "matsubara" and T == 0:
        raise ConfigError(f"{path}.method", "matsubara needs temperature > 0")
    if method == "imag_axis" and (T != 0 or cfg.excited):
        raise ConfigError(f"{path}.method", "imag_axis needs temperature 0 and state_A 'ground'")
    return {"config": cfg, "method": method, "width_floor": floor}


def build_slab(sec: dict, path="slab") -> dict:
    _unknown(sec, {"medium_A", "medium_B", "separation", "temperature", "force_mode", "mfp_density",
                   "symmetric_width", "pairwise"}, path)
    T = _number(sec, "temperature", path, minimum=0.0, strict=True)
    cfg = SlabConfig(_medium(_section(sec, "medium_A", path), f"{path}.medium_A", T),
                     _medium(_section(sec, "medium_B", path), f"{path}.medium_B", T),
                     _number(sec, "separation", path, minimum=0.0, strict=True), T,
                     _choice(sec, "mfp_density", path, ("total", "ground"), "total"),
                     bool(sec.get("symmetric_width", False)))
    for key in ("symmetric_width", "pairwise"):
        if key in sec and not isinstance(sec[key], bool):
            raise ConfigError(f"{path}.{key}", "must be true or false")
    return {"config": cfg, "force_mode": _choice(sec, "force_mode", path, FORCE_MODES, "reduced_Eq47"),
            "pairwise": bool(sec.get("pairwise", False))}


def _sweep(d, natural) -> SweepSpec:
    path = "sweep"
    _unknown(d, {"target", "variable", "min", "max", "points", "scale"}, path)
    target = _choice(d, "target", path, ("pair", "slab"), None)
    var = d.get("variable")
    if not isinstance(var, str) or not var:
        raise ConfigError(f"{path}.variable", "must be a dotted field name")
    sec = natural.get(target)
    if not isinstance(sec, dict):
        raise ConfigError(f"{path}.target", f"section {target!r} is missing")
    cur = _get_path(sec, var)
    if isinstance(cur, bool) or not isinstance(cur, (int, float)):
        raise ConfigError(f"{path}.variable", f"{target}.{var} is not an existing numeric field")
    sw = natural["sweep"]
    lo = _number(sw, "min", path)
    hi = _number(sw, "max", path)
    pts = d.get("points")
    if isinstance(pts, bool) or not isinstance(pts, int) or pts < 2:
        raise ConfigError(f"{path}.points", f"must be an integer >= 2, got {pts!r}")
    scale = _choice(d, "scale", path, ("lin", "log"), "lin")
    if scale == "log":
        if not (lo > 0 and hi > 0):
            raise ConfigError(f"{path}.min", "log sweeps need min > 0 and max > 0")
        values = np.geomspace(lo, hi, pts)
    else:
        values = np.linspace(lo, hi, pts)
    return SweepSpec(target, var, tuple(float(v) for v in values))


def parse_config(raw: dict, mode: Optional[str] = None) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    _unknown(raw, {"mode", "units", "pair", "slab", "sweep", "tolerances", "output"}, "")
    mode = mode or raw.get("mode")
    if mode not in MODES:
        raise ConfigError("mode", f"must be one of {list(MODES)}, got {mode!r}")
    units = None
    u = _section(raw, "units", "", required=False) or {"system": "natural"}
    system = _choice(u, "system", "units", ("natural", "SI"), "natural")
    if system == "SI":
        units = UnitSystem(_number(u, "omega_ref", "units", minimum=0.0, strict=True))
        natural = _convert_units(raw, units)
    else:
        natural = copy.deepcopy(raw)

    tol_raw = _section(raw, "tolerances", "", required=False) or {}
    _unknown(tol_raw, {"abs_tol", "rel_tol", "max_evals"}, "tolerances")
    tol = QuadratureSpec(
        abs_tol=_number(tol_raw, "abs_tol", "tolerances", required=False,
                        default=DEFAULT_TOLERANCES["abs_tol"], minimum=0.0, strict=True),
        rel_tol=_number(tol_raw, "rel_tol", "tolerances", required=False,
                        default=DEFAULT_TOLERANCES["rel_tol"], minimum=0.0, strict=True),
        max_evals=int(_number(tol_raw, "max_evals", "tolerances", required=False,
                              default=4_000_000, minimum=0.0, strict=True)),
    )
    out = _section(raw, "output", "", required=False) or {}
    stem = out.get("stem", "result")
    if not isinstance(stem, str) or not stem or "/" in stem or stem.startswith("."):
        raise ConfigError("output.stem", "must be a plain file name")

    pair = slab = sweep = None
    if mode != "validate":
        if "sweep" in raw:
            sweep = _sweep(_section(raw, "sweep", ""), natural)
        elif mode == "sweep":
            raise ConfigError("sweep", "missing required section")
        target = sweep.target if sweep else ("pair" if mode == "pair-potential" else "slab")
        if mode == "pair-potential" and target != "pair":
            raise ConfigError("sweep.target", "pair-potential mode sweeps the pair section")
        if mode == "slab-force" and target != "slab":
            raise ConfigError("sweep.target", "slab-force mode sweeps the slab section")
        sec = _section(natural, target, "")
        built = build_pair(sec) if target == "pair" else build_slab(sec)
        pair, slab = (built, None) if target == "pair" else (None, built)
        if sweep is not None:
            # every sweep point must validate before anything is computed
            for v in sweep.values:
                trial = copy.deepcopy(sec)
                _set_path(trial, sweep.variable, v)
                try:
                    build_pair(trial) if target == "pair" else build_slab(trial)
                except (ConfigError, DomainError) as exc:
                    raise ConfigError(f"sweep.{sweep.variable}", f"value {v!r} is invalid: {exc}") from None
    return RunConfig(mode, raw, natural, units, tol, pair, slab, sweep, stem)


def load_config(path, mode: Optional[str] = None) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {p}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(raw, mode)
