"""Scene files, technique registry, rendering entry points, CLI, server."""

from vdk.scene.batch import expand_sweeps, run_batch, set_by_path
from vdk.scene.pngio import (SCENE_KEYWORD, encode_png, read_png_text,
                             to_uint8, write_png)
from vdk.scene.registry import (TechniqueDescriptor, descriptor,
                                list_techniques)
from vdk.scene.schema import (Layer, MeshRef, Scene, load_scene, resolve_mesh,
                              validate_scene)
from vdk.scene.techniques import (RenderContext, render_layer, render_scene,
                                  render_scene_to_png)

__all__ = [
    "SCENE_KEYWORD", "encode_png", "read_png_text", "to_uint8", "write_png",
    "TechniqueDescriptor", "descriptor", "list_techniques",
    "Layer", "MeshRef", "Scene", "load_scene", "resolve_mesh",
    "validate_scene",
    "RenderContext", "render_layer", "render_scene", "render_scene_to_png",
    "expand_sweeps", "run_batch", "set_by_path",
]
