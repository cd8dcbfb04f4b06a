"""Device configuration: schema, loading and conversion to model objects.

Configs are YAML (JSON is accepted as well). Every key carries its unit in
its name where it is not SI.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import yaml

from .constants import NM, UM
from .core import Confinement, Material, Parabolic, Triangular
from .device import Device, densities_from_subbands
from .errors import ConfigError, DomainError
from .geometry import default_scene
from .schrodinger import DEFAULT_POINTS, PARABOLIC_HALF_WIDTH, TRIANGULAR_EXTENT, Grid1D, default_grid

class _Loader(yaml.SafeLoader):
    """SafeLoader that also reads exponent floats without a dot (1e14, 1.2e14)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(
        r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
        |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
        |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
        |[-+]?\.(?:inf|Inf|INF)
        |\.(?:nan|NaN|NAN))$""",
        re.X,
    ),
    list("-+0123456789."),
)

_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["material", "confinement"],
    "properties": {
        "material": {
            "type": "object",
            "additionalProperties": False,
            "required": ["effective_mass_ratio", "mobility"],
            "properties": {"effective_mass_ratio": _pos, "mobility": _pos},
        },
        "confinement": {
            "type": "object",
            "required": ["type"],
            "properties": {"type": {"enum": ["parabolic", "triangular"]}},
            "allOf": [
                {
                    "if": {"properties": {"type": {"const": "parabolic"}}},
                    "then": {
                        "additionalProperties": False,
                        "properties": {"type": {}, "z0_nm": _pos, "omega0": _pos},
                        "oneOf": [{"required": ["z0_nm"]}, {"required": ["omega0"]}],
                    },
                },
                {
                    "if": {"properties": {"type": {"const": "triangular"}}},
                    "then": {
                        "additionalProperties": False,
                        "properties": {"type": {}, "slope_field": _pos},
                        "required": ["slope_field"],
                    },
                },
            ],
        },
        "densities": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "total": _pos,
                "per_subband": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"anyOf": [_pos, {"type": "null"}]},
                },
            },
            "oneOf": [{"required": ["total"]}, {"required": ["per_subband"]}],
        },
        "drive": {
            "type": "object",
            "additionalProperties": False,
            "required": ["F"],
            "properties": {"F": _nonneg},
        },
        "scene": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "theta_design_deg": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 45},
                "divergence_deg": _nonneg,
                "distances": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "collector_um": _pos,
                        "detector_um": _pos,
                        "emitter_aperture_um": _pos,
                    },
                },
            },
        },
        "numerics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_subbands": {"type": "integer", "minimum": 1},
                "grid_points": {"type": "integer", "minimum": 3},
                "grid_half_width_z0": _pos,
                "grid_extent": _pos,
                "depopulation_tol_T": _pos,
                "switch_threshold": _nonneg,
                "workers": {"type": "integer", "minimum": 1},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _path(parts) -> str:
    return ".".join(str(p) for p in parts) or "<root>"


def validate(doc: Any) -> None:
    """Raise ConfigError naming the key path of the first schema violation."""
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if not errors:
        return
    err = jsonschema.exceptions.best_match(errors)
    path = list(err.absolute_path)
    if err.validator == "additionalProperties" and isinstance(err.instance, dict):
        allowed = set(err.schema.get("properties", {}))
        extra = sorted(k for k in err.instance if k not in allowed)
        raise ConfigError(f"unknown key (allowed: {', '.join(sorted(allowed))})", _path(path + extra[:1]))
    if err.validator == "required":
        missing = [k for k in err.validator_value if k not in err.instance]
        raise ConfigError("required key missing", _path(path + missing[:1]))
    if err.validator == "oneOf" and isinstance(err.instance, dict):
        options = [sub.get("required", []) for sub in err.validator_value]
        names = " or ".join(o[0] for o in options if o)
        raise ConfigError(f"give exactly one of {names}", _path(path))
    raise ConfigError(err.message, _path(path))


@dataclass(frozen=True)
class DeviceConfig:
    raw: dict
    material: Material
    confinement: Confinement
    source: str = "<memory>"
    numerics: dict = field(default_factory=dict)

    def _need(self, *keys):
        node = self.raw
        for i, k in enumerate(keys):
            if not isinstance(node, dict) or k not in node:
                raise ConfigError("required for this command", _path(keys[: i + 1]))
            node = node[k]
        return node

    @property
    def max_subbands(self) -> int:
        return self.numerics.get("max_subbands", 8)

    @property
    def workers(self) -> int:
        return self.numerics.get("workers", 1)

    def total_density(self) -> float:
        dens = self._need("densities")
        if "total" in dens:
            return float(dens["total"])
        try:
            return densities_from_subbands(dens["per_subband"], self.confinement, self.material)
        except DomainError as exc:
            raise ConfigError(str(exc), "densities.per_subband") from exc

    def grid(self) -> Grid1D:
        return default_grid(
            self.confinement,
            self.material,
            n_points=self.numerics.get("grid_points", DEFAULT_POINTS),
            half_width=self.numerics.get("grid_half_width_z0", PARABOLIC_HALF_WIDTH),
            extent=self.numerics.get("grid_extent", TRIANGULAR_EXTENT),
        )

    def device(self, F: float | None = None) -> Device:
        if not isinstance(self.confinement, Parabolic):
            raise ConfigError("this command needs the analytic (parabolic) model", "confinement.type")
        if F is None:
            F = float(self._need("drive", "F"))
        scene_cfg = self.raw.get("scene", {})
        theta = float(scene_cfg.get("theta_design_deg", 10.0))
        dist = scene_cfg.get("distances", {})
        scene = default_scene(
            theta,
            distance=dist.get("collector_um", 10.0) * UM,
            emitter_aperture=dist.get("emitter_aperture_um", 1.0) * UM,
            detector_distance=dist.get("detector_um", dist.get("collector_um", 10.0)) * UM,
        )
        return Device(
            material=self.material,
            confinement=self.confinement,
            N_total=self.total_density(),
            F=F,
            theta_design=theta,
            divergence=float(scene_cfg.get("divergence_deg", 0.0)),
            scene=scene,
            max_subbands=self.max_subbands,
            switch_threshold=float(self.numerics.get("switch_threshold", 1e-3)),
            depopulation_xtol=float(self.numerics.get("depopulation_tol_T", 1e-12)),
        )


def from_dict(doc: Any, source: str = "<memory>") -> DeviceConfig:
    validate(doc)
    mat = Material(**doc["material"])
    conf = doc["confinement"]
    if conf["type"] == "parabolic":
        confinement = Parabolic.from_z0(conf["z0_nm"] * NM, mat) if "z0_nm" in conf else Parabolic(conf["omega0"])
    else:
        confinement = Triangular(conf["slope_field"])
    return DeviceConfig(raw=doc, material=mat, confinement=confinement, source=source,
                        numerics=dict(doc.get("numerics", {})))


def load(path: str | Path) -> DeviceConfig:
    """Read and validate a config file. OSError propagates for unreadable files."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return from_dict(doc, source=str(path))
