"""Batch rendering: scenes crossed with parameter sweeps.

A manifest lists scene files (or inline scene objects) and sweeps,
each sweep being a dotted path into the scene document with the list
of values to try. Every scene is rendered once per point of the sweep
product; ``index.json`` in the output directory maps each image file
back to its scene and override set.
"""

import itertools
import json
from pathlib import Path

from vdk.errors import SchemaError, VdkError
from vdk.scene.schema import validate_scene
from vdk.scene.techniques import render_scene_to_png

INDEX_NAME = "index.json"


def set_by_path(doc, dotted, value):
    """Assign into a nested dict, creating intermediate objects."""
    parts = dotted.split(".")
    node = doc
    for p in parts[:-1]:
        nxt = node.get(p)
        if not isinstance(nxt, dict):
            nxt = {}
            node[p] = nxt
        node = nxt
    node[parts[-1]] = value


def expand_sweeps(sweeps):
    """Sweep dict to the list of override dicts, in product order.

    Keys are taken in sorted order so the expansion does not depend on
    JSON key order; values keep their listed order.
    """
    if not sweeps:
        return [{}]
    keys = sorted(sweeps)
    combos = []
    for values in itertools.product(*(sweeps[k] for k in keys)):
        combos.append(dict(zip(keys, values)))
    return combos


def _slug(text):
    out = "".join(c if c.isalnum() else "-" for c in str(text).lower())
    while "--" in out:
        out = out.replace("--", "-")
    return out.strip("-") or "scene"


def load_manifest(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"manifest is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise SchemaError("", "manifest must be a JSON object")
    if "scenes" not in doc or not isinstance(doc["scenes"], list) \
            or not doc["scenes"]:
        raise SchemaError("scenes", "manifest needs a non-empty scene list")
    sweeps = doc.get("sweeps", {})
    if not isinstance(sweeps, dict):
        raise SchemaError("sweeps", "must map dotted paths to value lists")
    for k, v in sweeps.items():
        if not isinstance(v, list) or not v:
            raise SchemaError(f"sweeps.{k}", "must be a non-empty list")
    return doc


def run_batch(manifest_path, out_dir):
    """Render every scene x sweep combination into ``out_dir``.

    Returns the index row list. Rows for failed jobs have status
    "error" and an "error" message; the images of successful jobs are
    written next to ``index.json``.
    """
    manifest_path = Path(manifest_path)
    doc = load_manifest(manifest_path)
    base_dir = manifest_path.parent
    width = doc.get("width")
    height = doc.get("height")
    combos = expand_sweeps(doc.get("sweeps", {}))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for si, entry in enumerate(doc["scenes"]):
        if isinstance(entry, str):
            scene_name = _slug(Path(entry).stem)
            scene_path = str(entry)
        else:
            scene_name = f"scene{si}"
            scene_path = None
        for ci, overrides in enumerate(combos):
            fname = f"{si:03d}_{scene_name}_{ci:04d}.png"
            row = {
                "file": fname,
                "scene": scene_path if scene_path is not None else entry,
                "overrides": overrides,
                "status": "ok",
            }
            try:
                if scene_path is not None:
                    p = Path(scene_path)
                    if not p.is_absolute():
                        p = base_dir / p
                    with open(p) as fh:
                        raw = json.load(fh)
                else:
                    raw = json.loads(json.dumps(entry))
                for dotted, value in overrides.items():
                    set_by_path(raw, dotted, value)
                scene = validate_scene(raw)
                png = render_scene_to_png(scene, base_dir=base_dir,
                                          width=width, height=height)
                (out_dir / fname).write_bytes(png)
            except (VdkError, OSError, json.JSONDecodeError) as exc:
                row["status"] = "error"
                row["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)

    with open(out_dir / INDEX_NAME, "w") as fh:
        json.dump(rows, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return rows
