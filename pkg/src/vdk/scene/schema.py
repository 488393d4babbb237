"""Scene file validation.

Scenes are strict JSON: every key must be known, every technique
parameter must exist in the registry schema and sit inside its range.
Violations raise SchemaError carrying the dotted path of the offending
entry, e.g. ``technique.params.fogFalloff``.
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from vdk.errors import SchemaError, UnknownTechnique
from vdk.mesh.io import load_mesh
from vdk.mesh.primitives import resolve_proc_uri
from vdk.scene.registry import descriptor

SCHEMA_VERSION = 1
MESH_ROLES = ("vessel", "tumor", "organ")

_TOP_KEYS = {"schemaVersion", "meshes", "camera", "lights", "tumorPositions",
             "technique", "layers", "seed", "background"}
_MESH_KEYS = {"path", "role", "transform"}
_CAMERA_KEYS = {"position", "lookAt", "up", "verticalFOV", "near", "far"}
_LIGHT_KEYS = {"direction"}
_TECH_KEYS = {"name", "params"}

_CAMERA_DEFAULTS = {
    "position": [0.0, 0.0, 120.0],
    "lookAt": [0.0, 0.0, 0.0],
    "up": [0.0, 1.0, 0.0],
    "verticalFOV": 40.0,
    "near": 1.0,
    "far": 1000.0,
}


@dataclass
class MeshRef:
    path: str
    role: str = "vessel"
    transform: np.ndarray = None


@dataclass
class Layer:
    name: str
    params: dict


@dataclass
class Scene:
    meshes: list
    camera: dict
    layers: list
    lights: list = field(default_factory=list)
    tumor_positions: np.ndarray = None
    seed: int = 0
    background: tuple = (1.0, 1.0, 1.0)
    scene_hash: str = ""


def _want(cond, path, msg):
    if not cond:
        raise SchemaError(path, msg)


def _vec3(value, path):
    _want(isinstance(value, (list, tuple)) and len(value) == 3,
          path, f"expected [x, y, z], got {value!r}")
    try:
        out = [float(v) for v in value]
    except (TypeError, ValueError):
        raise SchemaError(path, f"non-numeric entry in {value!r}")
    _want(all(np.isfinite(out)), path, "entries must be finite")
    return out


def _color(value, path):
    out = _vec3(value, path)
    _want(all(0.0 <= v <= 1.0 for v in out), path,
          f"color channels must be in [0,1], got {value!r}")
    return out


def _check_param(name, value, spec, path):
    kind = spec["type"]
    if kind == "float":
        _want(isinstance(value, (int, float)) and not isinstance(value, bool),
              path, f"expected a number, got {value!r}")
        value = float(value)
        _want(np.isfinite(value), path, "must be finite")
        if "min" in spec:
            _want(value >= spec["min"], path,
                  f"{value} below minimum {spec['min']}")
        if "max" in spec and spec["max"] is not None:
            _want(value <= spec["max"], path,
                  f"{value} above maximum {spec['max']}")
        return value
    if kind == "int":
        _want(isinstance(value, int) and not isinstance(value, bool),
              path, f"expected an integer, got {value!r}")
        if "min" in spec:
            _want(value >= spec["min"], path,
                  f"{value} below minimum {spec['min']}")
        if "max" in spec and spec["max"] is not None:
            _want(value <= spec["max"], path,
                  f"{value} above maximum {spec['max']}")
        return value
    if kind == "color":
        return _color(value, path)
    if kind == "vec3":
        return _vec3(value, path)
    if kind == "string":
        _want(isinstance(value, str), path, f"expected a string, got {value!r}")
        if "choices" in spec:
            _want(value in spec["choices"], path,
                  f"{value!r} not one of {spec['choices']}")
        return value
    raise SchemaError(path, f"unhandled parameter type {kind!r}")


def _validate_technique(block, path):
    _want(isinstance(block, dict), path, "technique must be an object")
    for k in block:
        _want(k in _TECH_KEYS, f"{path}.{k}", "unknown field")
    _want("name" in block, f"{path}.name", "missing technique name")
    try:
        desc = descriptor(block["name"])
    except UnknownTechnique:
        raise SchemaError(f"{path}.name",
                          f"unknown technique {block['name']!r}")
    params = {}
    raw = block.get("params", {})
    _want(isinstance(raw, dict), f"{path}.params", "params must be an object")
    for pname, pval in raw.items():
        ppath = f"{path}.params.{pname}"
        _want(pname in desc.param_schema, ppath, "unknown parameter")
        params[pname] = _check_param(pname, pval, desc.param_schema[pname],
                                     ppath)
    for pname, spec in desc.param_schema.items():
        params.setdefault(pname, spec["default"])
    return Layer(name=desc.name, params=params)


def validate_scene(data, strict=True):
    """Dict (parsed JSON) to a Scene; raises SchemaError on violations."""
    _want(isinstance(data, dict), "", "scene must be a JSON object")
    if strict:
        for k in data:
            _want(k in _TOP_KEYS, k, "unknown field")
    _want("schemaVersion" in data, "schemaVersion", "missing")
    _want(data["schemaVersion"] == SCHEMA_VERSION, "schemaVersion",
          f"expected {SCHEMA_VERSION}, got {data['schemaVersion']!r}")

    meshes = []
    raw_meshes = data.get("meshes", [])
    _want(isinstance(raw_meshes, list), "meshes", "must be a list")
    for i, m in enumerate(raw_meshes):
        mpath = f"meshes[{i}]"
        _want(isinstance(m, dict), mpath, "must be an object")
        if strict:
            for k in m:
                _want(k in _MESH_KEYS, f"{mpath}.{k}", "unknown field")
        _want("path" in m, f"{mpath}.path", "missing")
        role = m.get("role", "vessel")
        _want(role in MESH_ROLES, f"{mpath}.role",
              f"{role!r} not one of {MESH_ROLES}")
        transform = None
        if "transform" in m:
            t = np.asarray(m["transform"], dtype=np.float64)
            _want(t.shape in ((4, 4), (16,)), f"{mpath}.transform",
                  f"expected 4x4 matrix, got shape {t.shape}")
            transform = t.reshape(4, 4)
        meshes.append(MeshRef(path=m["path"], role=role, transform=transform))

    cam_raw = data.get("camera", {})
    _want(isinstance(cam_raw, dict), "camera", "must be an object")
    if strict:
        for k in cam_raw:
            _want(k in _CAMERA_KEYS, f"camera.{k}", "unknown field")
    camera = dict(_CAMERA_DEFAULTS)
    camera.update(cam_raw)
    _vec3(camera["position"], "camera.position")
    _vec3(camera["lookAt"], "camera.lookAt")
    _vec3(camera["up"], "camera.up")
    for key in ("verticalFOV", "near", "far"):
        _want(isinstance(camera[key], (int, float)), f"camera.{key}",
              "must be a number")

    lights = []
    for i, l in enumerate(data.get("lights", [])):
        lpath = f"lights[{i}]"
        _want(isinstance(l, dict), lpath, "must be an object")
        if strict:
            for k in l:
                _want(k in _LIGHT_KEYS, f"{lpath}.{k}", "unknown field")
        _want("direction" in l, f"{lpath}.direction", "missing")
        lights.append({"direction": _vec3(l["direction"], f"{lpath}.direction")})

    tumor = None
    if "tumorPositions" in data:
        raw = data["tumorPositions"]
        _want(isinstance(raw, list), "tumorPositions", "must be a list")
        tumor = np.asarray(
            [_vec3(p, f"tumorPositions[{i}]") for i, p in enumerate(raw)],
            dtype=np.float64,
        ).reshape(-1, 3)

    _want(not ("technique" in data and "layers" in data), "layers",
          "give either technique or layers, not both")
    layers = []
    if "layers" in data:
        _want(isinstance(data["layers"], list) and data["layers"],
              "layers", "must be a non-empty list")
        for i, block in enumerate(data["layers"]):
            layers.append(_validate_technique(block, f"layers[{i}]"))
    elif "technique" in data:
        layers.append(_validate_technique(data["technique"], "technique"))
    else:
        raise SchemaError("technique", "missing")

    seed = data.get("seed", 0)
    _want(isinstance(seed, int) and not isinstance(seed, bool), "seed",
          f"must be an integer, got {seed!r}")
    _want(-(2 ** 63) <= seed < 2 ** 64, "seed", "out of 64-bit range")

    background = tuple(_color(data.get("background", [1.0, 1.0, 1.0]),
                              "background"))

    blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
    scene_hash = hashlib.sha256(blob.encode()).hexdigest()

    return Scene(meshes=meshes, camera=camera, layers=layers, lights=lights,
                 tumor_positions=tumor, seed=seed, background=background,
                 scene_hash=scene_hash)


def load_scene(path, strict=True):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"not valid JSON: {exc}")
    return validate_scene(data, strict=strict)


def resolve_mesh(ref, base_dir=None):
    """MeshRef to a TriMesh: proc URI or mesh file, then transform."""
    if ref.path.startswith("proc:"):
        mesh = resolve_proc_uri(ref.path)
        if isinstance(mesh, tuple):
            mesh = mesh[0]
    else:
        p = Path(ref.path)
        if not p.is_absolute() and base_dir is not None:
            p = Path(base_dir) / p
        mesh = load_mesh(p)
    if ref.transform is not None:
        mesh = mesh.transformed(ref.transform)
    return mesh
