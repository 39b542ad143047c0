"""Persistence: the RIT3 binary tensor format, run-config and report JSON
schemas, and projection exports. All writers are atomic (temp file +
rename) so failures never leave partial output behind."""

import json
import os
import struct
import tempfile
from io import BytesIO
from pathlib import Path

import jsonschema
import numpy as np
from PIL import Image

from .errors import ConfigError, FormatError
from .geometry import GEOMETRY_PRESETS, RadarGeometry
from .tensor import MAX_ELEMENTS, as_tensor3

MAGIC = b"RIT3"
VERSION = 1
_HEADER = struct.Struct("<4sI3Q")  # magic, version, nx, ny, nz


def tensor_to_bytes(t) -> bytes:
    """Serialize: magic, u32 version, u64 dims, interleaved little-endian
    float64 (re, im) with the last index fastest."""
    t = as_tensor3(t)
    header = _HEADER.pack(MAGIC, VERSION, *t.shape)
    return header + t.astype("<c16", copy=False).tobytes(order="C")


def tensor_from_bytes(raw) -> np.ndarray:
    if len(raw) < _HEADER.size:
        raise FormatError("truncated header")
    magic, version, nx, ny, nz = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if min(nx, ny, nz) < 1 or nx * ny * nz > MAX_ELEMENTS:
        raise FormatError(f"bad dims ({nx}, {ny}, {nz})")
    expected = _HEADER.size + 16 * nx * ny * nz
    if len(raw) != expected:
        raise FormatError(
            f"payload length {len(raw) - _HEADER.size} does not match dims "
            f"({nx}, {ny}, {nz})")
    data = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    return data.reshape(nx, ny, nz).astype(np.complex128)


def atomic_write_bytes(path, payload: bytes):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_tensor(path, t):
    atomic_write_bytes(path, tensor_to_bytes(t))


def read_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return tensor_from_bytes(fh.read())


def write_json(path, obj):
    atomic_write_bytes(path, (json.dumps(obj, indent=2) + "\n").encode())


# ---------------------------------------------------------------------------
# Run configuration

_GEOMETRY_SCHEMA = {
    "oneOf": [
        {"type": "object",
         "properties": {"preset": {"enum": sorted(GEOMETRY_PRESETS)}},
         "required": ["preset"], "additionalProperties": False},
        {"type": "object",
         "properties": {
             "nx": {"type": "integer", "minimum": 2},
             "ny": {"type": "integer", "minimum": 2},
             "nr": {"type": "integer", "minimum": 2},
             "dx": {"type": "number", "exclusiveMinimum": 0},
             "dy": {"type": "number", "exclusiveMinimum": 0},
             "fc": {"type": "number", "exclusiveMinimum": 0},
             "bw": {"type": "number", "exclusiveMinimum": 0},
             "z0": {"type": "number", "exclusiveMinimum": 0},
             "c": {"type": "number", "exclusiveMinimum": 0},
             "dvx": {"type": "number", "exclusiveMinimum": 0},
             "dvy": {"type": "number", "exclusiveMinimum": 0},
             "dvz": {"type": "number", "exclusiveMinimum": 0},
         },
         "required": ["nx", "ny", "nr", "dx", "dy", "fc", "bw", "z0"],
         "additionalProperties": False},
    ]
}

_COGNITION_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["L1", "Lp", "L2", "TransformL1", "Nuclear"]},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "beta_rel": {"type": "number", "exclusiveMinimum": 0},
        "p": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "transform": {"type": "string"},
        "component": {"type": "integer", "minimum": 0},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "task": {"enum": [1, 2, 3]},
        "geometry": _GEOMETRY_SCHEMA,
        "seed": {"type": "integer", "minimum": 0},
        "snr_db": {"type": ["number", "null"]},
        "solver": {
            "type": "object",
            "properties": {
                "gamma": {"type": "number", "exclusiveMinimum": 0},
                "max_iters": {"type": "integer", "minimum": 1},
                "rel_tol": {"type": "number", "exclusiveMinimum": 0},
                "component_count": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "cognitions": {"type": "array", "items": _COGNITION_SCHEMA,
                       "minItems": 1},
    },
    "required": ["task"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "ree_per_scatterer": {"type": ["array", "null"],
                              "items": {"type": "number", "minimum": 0}},
        "ree_mean": {"type": ["number", "null"], "minimum": 0},
        "ssim": {"type": ["number", "null"], "minimum": -1, "maximum": 1},
        "tbr_db": {"type": ["number", "string", "null"]},
        "params": {"type": "object"},
    },
    "required": ["params"],
    "additionalProperties": False,
}

SCENE_SCHEMA = {
    "type": "object",
    "properties": {
        "scatterers": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {k: {"type": "number"}
                               for k in ("x", "y", "z", "amp_re", "amp_im")},
                "required": ["x", "y", "z", "amp_re", "amp_im"],
                "additionalProperties": False,
            },
        },
        "interference_rank": {"type": ["integer", "null"], "minimum": 1},
        "interference_energy_ratio": {"type": ["number", "null"]},
        "snr_db": {"type": ["number", "null"]},
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["scatterers", "seed"],
    "additionalProperties": False,
}


def validate_config(doc) -> dict:
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    return doc


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return validate_config(doc)


def geometry_from_config(cfg) -> RadarGeometry:
    geo = cfg.get("geometry")
    if geo is None:
        from .tasks import get_preset
        return get_preset(cfg["task"]).geometry_default
    if "preset" in geo:
        return GEOMETRY_PRESETS[geo["preset"]]
    return RadarGeometry(**geo)


def validate_report(doc) -> dict:
    try:
        jsonschema.validate(doc, REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise FormatError(f"invalid report: {exc.message}") from exc
    return doc


def validate_scene(doc) -> dict:
    try:
        jsonschema.validate(doc, SCENE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise FormatError(f"invalid scene: {exc.message}") from exc
    return doc


# ---------------------------------------------------------------------------
# Projection export

def export_projections(path_stem, img):
    """Write one 8-bit grayscale PNG and one CSV per projection axis, plus
    a sidecar JSON recording the normalization so renders are reproducible."""
    from .metrics import max_intensity_projection

    path_stem = Path(path_stem)
    global_max = float(np.max(np.abs(as_tensor3(img))))
    written = []
    for axis in ("x", "y", "z"):
        proj = max_intensity_projection(img, axis)
        scale = 255.0 / global_max if global_max > 0 else 0.0
        pixels = np.round(proj * scale).astype(np.uint8)
        buf = BytesIO()
        Image.fromarray(pixels, mode="L").save(buf, format="PNG")
        png = path_stem.with_name(path_stem.name + f"_mip_{axis}.png")
        atomic_write_bytes(png, buf.getvalue())
        csv = path_stem.with_name(path_stem.name + f"_mip_{axis}.csv")
        out = BytesIO()
        np.savetxt(out, proj, delimiter=",")
        atomic_write_bytes(csv, out.getvalue())
        written += [str(png), str(csv)]
    sidecar = path_stem.with_name(path_stem.name + "_mip.json")
    write_json(sidecar, {"global_max": global_max, "bit_depth": 8,
                         "files": written})
    return written + [str(sidecar)]
