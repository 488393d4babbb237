"""Command line front end.

Subcommands: render one scene, batch-render a manifest, detect vessel
endpoints, dump the technique registry, or start the HTTP server.
``VDK_THREADS`` pins the compute thread count for deterministic runs.
"""

import argparse
import json
import os
import sys

from vdk.errors import SchemaMismatch, VdkError
from vdk.mesh.io import load_mesh
from vdk.scene.batch import run_batch
from vdk.scene.registry import list_techniques
from vdk.scene.schema import load_scene
from vdk.scene.techniques import render_scene_to_png
from vdk.skeleton import extract_endpoints, load_endpoints, save_endpoints


def _apply_thread_limit():
    raw = os.environ.get("VDK_THREADS")
    if not raw:
        return
    try:
        n = max(1, int(raw))
    except ValueError:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    try:
        import numba
        numba.set_num_threads(n)
    except (ImportError, ValueError):
        pass


def _cmd_render(args):
    scene = load_scene(args.scene)
    from pathlib import Path
    base_dir = Path(args.scene).parent
    png = render_scene_to_png(scene, base_dir=base_dir,
                              width=args.width, height=args.height)
    with open(args.out, "wb") as fh:
        fh.write(png)
    print(f"wrote {args.out} ({len(png)} bytes)")
    return 0


def _cmd_batch(args):
    rows = run_batch(args.manifest, args.out_dir)
    failed = [r for r in rows if r["status"] != "ok"]
    print(f"{len(rows) - len(failed)} rendered, {len(failed)} failed")
    for r in failed:
        print(f"  {r['file']}: {r['error']}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_endpoints(args):
    mesh = load_mesh(args.mesh)
    if os.path.exists(args.out) and not args.force:
        try:
            cached = load_endpoints(args.out, mesh=mesh)
            print(f"cache hit: {len(cached.endpoints)} endpoints, "
                  f"root {cached.root}")
            return 0
        except (SchemaMismatch, json.JSONDecodeError, OSError):
            print("cache stale, recomputing")

    def progress(state):
        print(f"  iteration {state.iteration}: "
              f"volume ratio {state.volume_ratio:.2e}")

    result = extract_endpoints(mesh, progress=progress)
    save_endpoints(result, args.out)
    print(f"{len(result.endpoints)} endpoints, root {result.root}, "
          f"{result.iterations} iterations, {result.elapsed:.1f}s")
    return 0


def _cmd_registry(args):
    techs = list_techniques()
    if args.format == "json":
        print(json.dumps([d.as_dict() for d in techs], indent=2))
        return 0
    cue_names = ("shading", "shadow", "color", "transparency", "surface",
                 "voidSpace")
    header = f"{'technique':28s} " + " ".join(f"{c[:6]:>6s}" for c in cue_names)
    print(header)
    print("-" * len(header))
    for d in techs:
        flags = " ".join(f"{d.cues[c]:>6s}" for c in cue_names)
        print(f"{d.name:28s} {flags}")
    return 0


def _cmd_serve(args):
    import uvicorn
    from vdk.scene.server import create_app
    app = create_app(mesh_dir=args.mesh_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vdk", description="distance-encoding vessel renderer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render one scene to a PNG")
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--height", type=int, default=None)
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("batch", help="render a manifest of scenes and sweeps")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=_cmd_batch)

    p = sub.add_parser("endpoints", help="detect vessel endpoints")
    p.add_argument("--mesh", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true",
                   help="recompute even on a cache hit")
    p.set_defaults(fn=_cmd_endpoints)

    p = sub.add_parser("registry", help="list the rendering techniques")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(fn=_cmd_registry)

    p = sub.add_parser("serve", help="start the HTTP rendering server")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--mesh-dir", default=None)
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None):
    _apply_thread_limit()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except VdkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
