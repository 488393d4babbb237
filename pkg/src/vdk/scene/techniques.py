"""Technique dispatch: validated scenes to rendered frames.

Each technique renders one RGBA layer; ``render_scene`` composites the
scene's layers in order over the background color. The same entry
points back both the command line and the HTTP server so a given scene
produces identical bytes through either route.
"""

import numpy as np

from vdk.errors import RenderError, UnknownTechnique
from vdk.glyphs import (AnchorSet, CylinderProbe, GlyphStyle, arrow_glyphs,
                        concentric_circle_glyphs, place_arrow_samples,
                        stamp_arrow_glyphs, stamp_circle_glyphs,
                        supporting_anchors, supporting_lines, void_background)
from vdk.lic import LicParams, lic_pipeline
from vdk.mesh.curvature import estimate_curvature
from vdk.npr import HatchParams, hatch_pipeline, overlay_hatch_render
from vdk.raster import (Camera, Instance, RasterScene, rasterize,
                        rasterize_gbuffer, shadow_project, stamp_discs,
                        stamp_polylines)
from vdk.raster.framebuffer import NO_OBJECT
from vdk.scene.pngio import SCENE_KEYWORD, encode_png
from vdk.scene.registry import descriptor
from vdk.scene.schema import resolve_mesh
from vdk.shading import (DistanceParams, ShadingParams, get_colormap,
                         load_scalar_field, normalize_scalars)
from vdk.shading import formulas

SHADOW_STRENGTH = 0.35
SHADOW_CLEARANCE = 0.02   # floor drop as a fraction of scene height
LINE_INK = np.array([0.15, 0.15, 0.18])
DEPTH_NUDGE = 2e-3


class RenderContext:
    """Resolved scene: meshes loaded, camera built, tumors located."""

    def __init__(self, scene, base_dir=None, width=None, height=None):
        self.scene = scene
        self.background = np.asarray(scene.background, dtype=np.float64)
        cam = scene.camera
        self.camera = Camera(
            position=np.asarray(cam["position"], dtype=np.float64),
            look_at=np.asarray(cam["lookAt"], dtype=np.float64),
            up=np.asarray(cam["up"], dtype=np.float64),
            vfov_deg=float(cam["verticalFOV"]),
            near=float(cam["near"]),
            far=float(cam["far"]),
            width=int(width or 512),
            height=int(height or 512),
        )
        self.meshes = []
        self.roles = []
        for ref in scene.meshes:
            self.meshes.append(resolve_mesh(ref, base_dir=base_dir))
            self.roles.append(ref.role)
        self.raster_scene = RasterScene(self.camera, [
            Instance(m, object_id=i) for i, m in enumerate(self.meshes)
        ])
        if scene.tumor_positions is not None:
            self.tumors = scene.tumor_positions
        else:
            cents = [m.vertices.mean(axis=0)
                     for m, r in zip(self.meshes, self.roles) if r == "tumor"]
            self.tumors = (np.asarray(cents, dtype=np.float64)
                           if cents else np.zeros((0, 3)))

    @property
    def vessel(self):
        for m, r in zip(self.meshes, self.roles):
            if r == "vessel":
                return m
        return self.meshes[0] if self.meshes else None

    def scene_points(self):
        if not self.meshes:
            return np.zeros((0, 3))
        return np.concatenate([m.vertices for m in self.meshes], axis=0)

    def light(self, params):
        """Scene-level lights win over the per-technique direction."""
        if self.scene.lights:
            d = np.asarray(self.scene.lights[0]["direction"], dtype=np.float64)
        else:
            d = np.asarray(params.get("lightDirection", [0.0, 0.0, 1.0]),
                           dtype=np.float64)
        n = np.linalg.norm(d)
        if n < 1e-12:
            raise RenderError("light direction has zero length")
        return d / n

    def floor_plane(self, offset=None):
        pts = self.scene_points()
        if len(pts) == 0:
            raise RenderError("no geometry to place a floor under")
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        if offset is None:
            offset = SHADOW_CLEARANCE * max(hi[1] - lo[1], 1e-6)
        center = (lo + hi) * 0.5
        point = np.array([center[0], lo[1] - offset, center[2]])
        return point, np.array([0.0, 1.0, 0.0])


def _empty_layer(camera):
    return np.zeros((camera.height, camera.width, 4))


def _shading_params(params, light, base_key="baseColor"):
    kw = {"light_direction": light}
    if base_key in params:
        kw["base_color"] = np.asarray(params[base_key], dtype=np.float64)
    for src, dst in (("shininess", "shininess"),
                     ("specularColor", "specular_color"),
                     ("ambient", "ambient_color"),
                     ("toonBands", "toon_bands"),
                     ("rimAmount", "rim_amount"),
                     ("rimThreshold", "rim_threshold"),
                     ("fresnelExponent", "fresnel_exponent"),
                     ("rimColor", "rim_color")):
        if src in params:
            val = params[src]
            if dst.endswith("color"):
                val = np.asarray(val, dtype=np.float64)
            kw[dst] = val
    return ShadingParams(**kw)


def _dist_params(ctx, params):
    kw = {"tumor_positions": ctx.tumors}
    for src, dst in (("heatRadius", "heat_radius"),
                     ("isolineRadius", "isoline_radius"),
                     ("isolineCount", "isoline_count"),
                     ("isolineThickness", "isoline_thickness"),
                     ("fogFalloff", "fog_falloff")):
        if src in params:
            kw[dst] = params[src]
    for src, dst in (("heatColor", "heat_color"),
                     ("pcdNear", "pcd_near_color"),
                     ("pcdFar", "pcd_far_color")):
        if src in params:
            kw[dst] = np.asarray(params[src], dtype=np.float64)
    return DistanceParams(**kw)


def _pixel_ray_dirs(camera, xs, ys):
    # same corner-sample convention as the rasterizer
    ndc_x = 2.0 * (xs / camera.width) - 1.0
    ndc_y = 1.0 - 2.0 * (ys / camera.height)
    ty = camera.tan_half_fov
    tx = ty * camera.aspect
    d = (ndc_x[:, None] * tx * camera.right[None, :]
         + ndc_y[:, None] * ty * camera.true_up[None, :]
         + camera.forward[None, :])
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _stamp_ground_shadow(layer, ctx, plane_point=None, plane_normal=None,
                         strength=SHADOW_STRENGTH):
    """Darken background pixels under the dropped shadow of the scene."""
    if not ctx.meshes:
        return
    if plane_point is None:
        plane_point, plane_normal = ctx.floor_plane()
    sm = shadow_project(ctx.raster_scene, plane_point, plane_normal)
    open_px = layer[:, :, 3] < 0.999
    ys, xs = np.nonzero(open_px)
    if len(ys) == 0:
        return
    dirs = _pixel_ray_dirs(ctx.camera, xs.astype(np.float64),
                           ys.astype(np.float64))
    n = np.asarray(plane_normal, dtype=np.float64)
    denom = dirs @ n
    numer = (np.asarray(plane_point) - ctx.camera.position) @ n
    safe = np.abs(denom) > 1e-12
    t = np.where(safe, numer / np.where(safe, denom, 1.0), -1.0)
    ok = safe & (t > ctx.camera.near)
    hits = ctx.camera.position[None, :] + t[:, None] * dirs
    rel = hits - sm.origin[None, :]
    gi = np.rint(rel @ sm.u_axis / sm.pixel_size).astype(np.int64)
    gj = np.rint(rel @ sm.v_axis / sm.pixel_size).astype(np.int64)
    res = sm.mask.shape[0]
    inside = ok & (gi >= 0) & (gi < res) & (gj >= 0) & (gj < res)
    covered = np.zeros(len(ys), dtype=bool)
    covered[inside] = sm.mask[gj[inside], gi[inside]] != NO_OBJECT
    sy, sx = ys[covered], xs[covered]
    if len(sy) == 0:
        return
    shade = ctx.background * (1.0 - strength)
    a = layer[sy, sx, 3:4]
    layer[sy, sx, :3] = layer[sy, sx, :3] * a + shade[None, :] * (1.0 - a)
    layer[sy, sx, 3] = 1.0


def _to_screen(camera, world):
    """World points -> pixel coords, linear depth, in-front mask."""
    world = np.asarray(world, dtype=np.float64).reshape(-1, 3)
    view = camera.to_view(world)
    viewz = -view[:, 2]
    ok = viewz >= camera.near
    px = np.zeros((len(world), 2))
    if ok.any():
        px[ok] = camera.project_view(view[ok])[0]
    return px, camera.linear_depth(viewz), ok


def _shaded_layer(ctx, params, formula):
    sp = _shading_params(params, ctx.light(params))

    def shader(frags):
        return formula(frags.normal, frags.view_dir, sp)

    fb = rasterize(ctx.raster_scene, shader=shader,
                   light_direction=sp.light_direction)
    return fb


def _render_phong(ctx, params):
    fb = _shaded_layer(ctx, params, formulas.phong)
    layer = fb.color.copy()
    _stamp_ground_shadow(layer, ctx)
    return layer


def _render_toon(ctx, params):
    fb = _shaded_layer(ctx, params, formulas.toon)
    layer = fb.color.copy()
    _stamp_ground_shadow(layer, ctx)
    return layer


def _render_fresnel(ctx, params):
    fb = _shaded_layer(ctx, params, formulas.fresnel)
    layer = fb.color.copy()
    _stamp_ground_shadow(layer, ctx)
    return layer


def _selection_points(ctx):
    if len(ctx.tumors) == 0:
        raise RenderError(
            "technique needs tumorPositions or a tumor-role mesh")
    return ctx.tumors


def _render_supporting_lines(ctx, params):
    sel = _selection_points(ctx)
    fb = _shaded_layer(ctx, params, formulas.phong)
    layer = fb.color.copy()
    plane_point, plane_normal = ctx.floor_plane(offset=params["planeOffset"])
    _stamp_ground_shadow(layer, ctx, plane_point, plane_normal)
    segments = supporting_lines(sel, plane_point, plane_normal)
    lines, depths = [], []
    for top, foot in segments:
        px, dep, ok = _to_screen(ctx.camera, np.stack([top, foot]))
        if not ok.all():
            continue
        lines.append(px)
        depths.append(np.maximum(dep - DEPTH_NUDGE, 0.0))
    stamp_polylines(layer, lines, LINE_INK, params["lineWidth"],
                    depth_buffer=fb.depth, polyline_depths=depths)
    for line, dep in zip(lines, depths):
        stamp_discs(layer, line[:1], 3.0, LINE_INK,
                    depth_buffer=fb.depth, depths=dep[:1])
    return layer


def _nearest_vertices(mesh, points):
    idx = np.empty(len(points), dtype=np.int64)
    for i, p in enumerate(points):
        idx[i] = int(np.argmin(np.sum((mesh.vertices - p) ** 2, axis=1)))
    return idx


def _render_supporting_anchors(ctx, params):
    sel = _selection_points(ctx)
    mesh = ctx.vessel
    if mesh is None:
        raise RenderError("no mesh to anchor")
    fb = _shaded_layer(ctx, params, formulas.phong)
    layer = fb.color.copy()
    anchor_set = AnchorSet.from_mesh(mesh, _nearest_vertices(mesh, sel))
    cyl = CylinderProbe.fit(ctx.scene_points(), ctx.camera,
                            radius_scale=params["radiusScale"])
    anchors = supporting_anchors(anchor_set, cyl, ctx.camera)
    for a in anchors:
        seg, dep, ok = _to_screen(ctx.camera, np.stack([a.world, a.contact]))
        if ok.all():
            stamp_polylines(layer, [seg], LINE_INK, 1.2, alpha=0.6,
                            depth_buffer=fb.depth,
                            polyline_depths=[np.maximum(dep - DEPTH_NUDGE, 0.0)])
        arc_px, arc_dep, arc_ok = _to_screen(ctx.camera, a.arc)
        if arc_ok.all() and len(arc_px) >= 2:
            stamp_polylines(layer, [arc_px], LINE_INK, 1.6,
                            depth_buffer=fb.depth,
                            polyline_depths=[np.maximum(arc_dep - DEPTH_NUDGE,
                                                        0.0)])
        pt, ptd, pok = _to_screen(ctx.camera, a.world[None, :])
        if pok.all():
            stamp_discs(layer, pt, 3.0, LINE_INK, depth_buffer=fb.depth,
                        depths=np.maximum(ptd - DEPTH_NUDGE, 0.0))
    return layer


def _render_ccg(ctx, params):
    sel = _selection_points(ctx)
    mesh = ctx.vessel
    if mesh is None:
        raise RenderError("no mesh to attach glyphs to")
    fb = _shaded_layer(ctx, params, formulas.phong)
    layer = fb.color.copy()
    anchor_set = AnchorSet.from_mesh(mesh, _nearest_vertices(mesh, sel))
    glyphs = concentric_circle_glyphs(anchor_set, ctx.camera,
                                      _dist_params(ctx, params))
    stamp_circle_glyphs(layer, glyphs)
    return layer


def _render_void_space(ctx, params):
    fb = _shaded_layer(ctx, params, formulas.phong)
    void_rgb, _ = void_background(fb, _dist_params(ctx, params))
    layer = np.ones((ctx.camera.height, ctx.camera.width, 4))
    layer[:, :, :3] = void_rgb
    cov = fb.covered
    layer[cov, :3] = fb.color[cov, :3]
    return layer


def _render_arrows(ctx, params):
    mesh = ctx.vessel
    if mesh is None:
        raise RenderError("no mesh to sample arrows on")
    dist = _dist_params(ctx, params)
    style = GlyphStyle(max_length=params["maxLength"],
                       switching_distance=params["switchingDistance"],
                       thickness=params["thickness"],
                       tick_spacing=params["tickSpacing"])
    base = np.asarray(params["baseColor"], dtype=np.float64)

    def shader(frags):
        return np.broadcast_to(base, (len(frags.xs), 3))

    fb = rasterize(ctx.raster_scene, shader=shader)
    layer = fb.color.copy()
    layer[:, :, 3] *= 0.35   # translucent hull so arrows read through
    points, normals, dense = place_arrow_samples(mesh, dist, style,
                                                 seed=ctx.scene.seed)
    glyphs = arrow_glyphs(points, normals, dense, dist, style)
    stamp_arrow_glyphs(layer, glyphs, ctx.camera, style)
    return layer


def _render_heatmap(ctx, params):
    dist = _dist_params(ctx, params)
    if len(ctx.tumors) == 0:
        raise RenderError(
            "technique needs tumorPositions or a tumor-role mesh")
    base = np.asarray(params["baseColor"], dtype=np.float64)

    def shader(frags):
        d = formulas.tumor_distance(frags.world, dist.tumor_positions)
        under = np.broadcast_to(base, (len(d), 3))
        return formulas.heat_blend(d, under, dist)

    return rasterize(ctx.raster_scene, shader=shader).color.copy()


def _render_isolines(ctx, params):
    dist = _dist_params(ctx, params)
    if len(ctx.tumors) == 0:
        raise RenderError(
            "technique needs tumorPositions or a tumor-role mesh")
    base = np.asarray(params["baseColor"], dtype=np.float64)

    def shader(frags):
        d = formulas.tumor_distance(frags.world, dist.tumor_positions)
        rgb = np.broadcast_to(base, (len(d), 3)).copy()
        rgb[formulas.isoline_mask(d, dist)] *= 0.2
        return rgb

    return rasterize(ctx.raster_scene, shader=shader).color.copy()


def _render_pcd(ctx, params):
    dist = _dist_params(ctx, params)
    sp = _shading_params(params, ctx.light(params))
    pts = ctx.scene_points()
    if len(pts) == 0:
        return _empty_layer(ctx.camera)
    z_range = formulas.view_extent(pts, ctx.camera)

    def shader(frags):
        t = formulas.normalized_bbox_depth(frags.world, ctx.camera, z_range)
        return formulas.pcd_shaded(t, frags.normal, dist, sp)

    return rasterize(ctx.raster_scene, shader=shader,
                     light_direction=sp.light_direction).color.copy()


def _render_fog(ctx, params):
    dist = _dist_params(ctx, params)
    sp = _shading_params(params, ctx.light(params))
    pts = ctx.scene_points()
    if len(pts) == 0:
        return _empty_layer(ctx.camera)
    z_range = formulas.view_extent(pts, ctx.camera)
    bg = ctx.background

    def shader(frags):
        lit = formulas.phong(frags.normal, frags.view_dir, sp)
        t = formulas.normalized_bbox_depth(frags.world, ctx.camera, z_range)
        a = formulas.fog_alpha(t, dist.fog_falloff)[:, None]
        return lit * a + bg[None, :] * (1.0 - a)

    return rasterize(ctx.raster_scene, shader=shader,
                     light_direction=sp.light_direction).color.copy()


def _render_overlay_hatching(ctx, params, base_dir=None):
    mesh = ctx.vessel
    if mesh is None:
        raise RenderError("no mesh to hatch")
    hatch_mesh = None
    if params["hatchMesh"]:
        from vdk.scene.schema import MeshRef
        hatch_mesh = resolve_mesh(MeshRef(path=params["hatchMesh"]),
                                  base_dir=base_dir)
    base = np.asarray(params["baseColor"], dtype=np.float64)

    def shader(frags):
        return np.broadcast_to(base, (len(frags.xs), 3))

    return overlay_hatch_render(mesh, ctx.camera, hatch_mesh=hatch_mesh,
                                shader=shader,
                                stripe_period_mm=params["stripePeriod"])


def _render_hz_hatching(ctx, params):
    mesh = ctx.vessel
    if mesh is None:
        raise RenderError("no mesh to hatch")
    img, _ = hatch_pipeline(mesh, ctx.camera,
                            HatchParams(d_sep=params["dSep"],
                                        base_width=params["baseWidth"]))
    layer = img.copy()
    # strokes over white; untouched paper shows the scene background
    paper = np.all(layer[:, :, :3] >= 1.0 - 1e-12, axis=2)
    layer[paper, 3] = 0.0
    _stamp_ground_shadow(layer, ctx)
    return layer


def _axis_scalars(mesh, source, base_dir=None):
    if source.startswith("axis:"):
        axis = {"x": 0, "y": 1, "z": 2}.get(source[5:])
        if axis is None:
            raise RenderError(f"unknown scalar axis {source[5:]!r}")
        return mesh.vertices[:, axis]
    if source.startswith("file:"):
        from pathlib import Path
        p = Path(source[5:])
        if not p.is_absolute() and base_dir is not None:
            p = Path(base_dir) / p
        return load_scalar_field(p, len(mesh.vertices))
    raise RenderError(f"scalar source {source!r} is not axis: or file:")


def _render_scalar_field(ctx, params, base_dir=None):
    mesh = ctx.vessel
    if mesh is None:
        return _empty_layer(ctx.camera)
    values = normalize_scalars(
        _axis_scalars(mesh, params["scalarSource"], base_dir))
    cmap = get_colormap(params["colormap"])
    scene = RasterScene(ctx.camera, [
        Instance(mesh, object_id=0, attr=values[:, None])
    ])

    def shader(frags):
        return cmap(frags.attr[:, 0])

    return rasterize(scene, shader=shader).color.copy()


def _render_vector_field(ctx, params):
    mesh = ctx.vessel
    if mesh is None:
        return _empty_layer(ctx.camera)
    light = ctx.light(params)
    base = np.asarray(params["baseColor"], dtype=np.float64)

    attr = None
    if params["fieldSource"] == "curvature":
        attr = estimate_curvature(mesh).dir1
    scene = RasterScene(ctx.camera, [
        Instance(mesh, object_id=0, attr=attr)
    ])

    def shader(frags):
        return np.broadcast_to(base, (len(frags.xs), 3))

    fb = rasterize(scene, shader=shader, light_direction=light)
    lp = LicParams(samples=params["samples"],
                   half_length=params["halfLength"],
                   field_source=params["fieldSource"],
                   seed=ctx.scene.seed)
    layer = lic_pipeline(fb, ctx.camera, lp)
    _stamp_ground_shadow(layer, ctx)
    return layer


_DISPATCH = {
    "Phong": _render_phong,
    "Toon": _render_toon,
    "Fresnel": _render_fresnel,
    "Supporting Lines": _render_supporting_lines,
    "Supporting Anchors": _render_supporting_anchors,
    "Concentric Circle Glyphs": _render_ccg,
    "Void Space Surfaces": _render_void_space,
    "Arrow Glyphs": _render_arrows,
    "Heatmaps": _render_heatmap,
    "Isolines": _render_isolines,
    "Pseudo-Chromadepth": _render_pcd,
    "Fog": _render_fog,
    "Hatching": _render_overlay_hatching,
    "Hatching by H. and Z.": _render_hz_hatching,
    "Scalar field": _render_scalar_field,
    "Vector fields": _render_vector_field,
}

_NEEDS_BASE_DIR = {"Hatching", "Scalar field"}


def render_layer(ctx, layer, base_dir=None):
    """One technique layer of ``ctx`` as an (h, w, 4) RGBA image."""
    name = descriptor(layer.name).name
    fn = _DISPATCH.get(name)
    if fn is None:
        raise UnknownTechnique(name)
    if name in _NEEDS_BASE_DIR:
        return fn(ctx, layer.params, base_dir=base_dir)
    return fn(ctx, layer.params)


def render_scene(scene, base_dir=None, width=None, height=None):
    """Scene to a composited (h, w, 3) image in [0, 1]."""
    ctx = RenderContext(scene, base_dir=base_dir, width=width, height=height)
    canvas = np.empty((ctx.camera.height, ctx.camera.width, 3))
    canvas[:] = ctx.background
    for layer in scene.layers:
        rgba = render_layer(ctx, layer, base_dir=base_dir)
        a = np.clip(rgba[:, :, 3:4], 0.0, 1.0)
        canvas = np.clip(rgba[:, :, :3], 0.0, 1.0) * a + canvas * (1.0 - a)
    return np.clip(canvas, 0.0, 1.0)


def render_scene_to_png(scene, base_dir=None, width=None, height=None):
    """Scene to PNG bytes carrying the scene hash and seed in metadata."""
    img = render_scene(scene, base_dir=base_dir, width=width, height=height)
    return encode_png(img, text={SCENE_KEYWORD: scene.scene_hash,
                                 "seed": str(scene.seed)})
