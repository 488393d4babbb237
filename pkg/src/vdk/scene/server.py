"""HTTP front end over the renderer.

The server does all rendering; clients send scene documents and get
PNG bytes back. Responses for a given scene match the command line
output byte for byte because both go through the same entry point.
"""

import json
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from vdk.errors import RenderError, SchemaError, SchemaMismatch, VdkError
from vdk.mesh.io import load_mesh
from vdk.raster import pick
from vdk.scene.registry import list_techniques
from vdk.scene.schema import validate_scene
from vdk.scene.techniques import RenderContext, render_scene_to_png
from vdk.skeleton import load_endpoints

MESH_SUFFIXES = (".obj", ".ply")
MAX_VIEWPORT = 4096


def _error(status, message, field=None):
    body = {"error": message}
    if field is not None:
        body["field"] = field
    return JSONResponse(status_code=status, content=body)


def _viewport(data):
    out = []
    for key, fallback in (("width", 512), ("height", 512)):
        v = data.get(key, fallback)
        if not isinstance(v, int) or isinstance(v, bool) \
                or not (1 <= v <= MAX_VIEWPORT):
            raise SchemaError(key, f"must be an integer in [1, {MAX_VIEWPORT}]")
        out.append(v)
    return out


def find_mesh_file(mesh_dir, mesh_id):
    if mesh_dir is None:
        return None
    safe = Path(mesh_id).name
    if safe != mesh_id:
        return None
    for suffix in MESH_SUFFIXES:
        p = Path(mesh_dir) / (safe + suffix)
        if p.exists():
            return p
    return None


def create_app(mesh_dir=None):
    app = FastAPI(title="distance-encoding renderer")
    app.state.mesh_dir = None if mesh_dir is None else Path(mesh_dir)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/techniques")
    def techniques():
        return [d.as_dict() for d in list_techniques()]

    @app.post("/api/render")
    async def render(request: Request):
        try:
            data = await request.json()
        except json.JSONDecodeError as exc:
            return _error(400, f"body is not valid JSON: {exc}")
        try:
            width, height = _viewport(data)
            payload = {k: v for k, v in data.items()
                       if k not in ("width", "height")}
            scene = validate_scene(payload)
            png = render_scene_to_png(scene, base_dir=app.state.mesh_dir,
                                      width=width, height=height)
        except SchemaError as exc:
            return _error(400, exc.message, field=exc.field)
        except FileNotFoundError as exc:
            return _error(404, str(exc))
        except (RenderError, VdkError) as exc:
            return _error(500, f"{type(exc).__name__}: {exc}")
        return Response(content=png, media_type="image/png")

    @app.post("/api/pick")
    async def pick_point(request: Request):
        try:
            data = await request.json()
        except json.JSONDecodeError as exc:
            return _error(400, f"body is not valid JSON: {exc}")
        if not isinstance(data, dict) or "scene" not in data:
            return _error(400, "body must carry scene, x, y", field="scene")
        for key in ("x", "y"):
            if not isinstance(data.get(key), (int, float)) \
                    or isinstance(data.get(key), bool):
                return _error(400, "must be a number", field=key)
        try:
            width, height = _viewport(data)
            scene = validate_scene(data["scene"])
            ctx = RenderContext(scene, base_dir=app.state.mesh_dir,
                                width=width, height=height)
        except SchemaError as exc:
            return _error(400, exc.message, field=exc.field)
        except FileNotFoundError as exc:
            return _error(404, str(exc))
        except (RenderError, VdkError) as exc:
            return _error(500, f"{type(exc).__name__}: {exc}")
        hit = pick(ctx.raster_scene, float(data["x"]), float(data["y"]))
        if hit is None:
            return JSONResponse(content=None)
        return {
            "vertexIndex": int(hit.vertex),
            "worldPosition": [float(c) for c in hit.world_position],
            "objectId": int(hit.object_id),
        }

    @app.get("/api/mesh/{mesh_id}/meta")
    def mesh_meta(mesh_id: str):
        path = find_mesh_file(app.state.mesh_dir, mesh_id)
        if path is None:
            return _error(404, f"unknown mesh {mesh_id!r}")
        try:
            mesh = load_mesh(path)
        except VdkError as exc:
            return _error(500, f"{type(exc).__name__}: {exc}")
        lo, hi = mesh.bounding_box
        endpoints = None
        cache = path.with_suffix(".endpoints.json")
        if cache.exists():
            try:
                result = load_endpoints(cache, mesh=mesh)
                endpoints = {
                    "endpoints": [int(i) for i in result.endpoints],
                    "root": int(result.root),
                }
            except (SchemaMismatch, json.JSONDecodeError):
                endpoints = None
        return {
            "id": mesh_id,
            "vertexCount": int(len(mesh.vertices)),
            "faceCount": int(len(mesh.faces)),
            "boundingBox": {
                "min": [float(c) for c in np.asarray(lo)],
                "max": [float(c) for c in np.asarray(hi)],
            },
            "endpoints": endpoints,
        }

    return app
