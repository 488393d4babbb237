"""Render target with auxiliary geometry channels."""

import struct
from dataclasses import dataclass, field

import numpy as np

NO_OBJECT = -1


@dataclass
class FrameBuffer:
    """Per-pixel shading and geometry buffers.

    color is linear-light RGBA; depth is normalized linear view depth
    with empty pixels at exactly 1.0; normal holds view-space unit
    vectors; illum is the scalar diffuse term of the primary light;
    object_mask is the instance id per pixel (-1 where empty). world and
    attr are auxiliary deferred-shading inputs (world positions and
    interpolated per-vertex scalars).
    """

    width: int
    height: int
    attr_channels: int = 0
    color: np.ndarray = field(init=False)
    depth: np.ndarray = field(init=False)
    normal: np.ndarray = field(init=False)
    illum: np.ndarray = field(init=False)
    object_mask: np.ndarray = field(init=False)
    world: np.ndarray = field(init=False)
    attr: np.ndarray = field(init=False)

    def __post_init__(self):
        h, w = self.height, self.width
        self.color = np.zeros((h, w, 4))
        self.depth = np.ones((h, w))
        self.normal = np.zeros((h, w, 3))
        self.illum = np.zeros((h, w))
        self.object_mask = np.full((h, w), NO_OBJECT, dtype=np.int32)
        self.world = np.zeros((h, w, 3))
        self.attr = np.zeros((h, w, max(self.attr_channels, 0)))

    @property
    def covered(self):
        """Boolean mask of pixels hit by any geometry."""
        return self.object_mask != NO_OBJECT


def save_float_buffer(array, path):
    """Dump a float buffer as little-endian float32 with a 12-byte header.

    Header: width, height, channels as uint32. Data row-major.
    """
    a = np.asarray(array, dtype=np.float32)
    if a.ndim == 2:
        a = a[:, :, None]
    h, w, c = a.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack("<III", w, h, c))
        fh.write(a.astype("<f4").tobytes())


def load_float_buffer(path):
    """Inverse of :func:`save_float_buffer`; single-channel drops the axis."""
    with open(path, "rb") as fh:
        w, h, c = struct.unpack("<III", fh.read(12))
        data = np.frombuffer(fh.read(), dtype="<f4").reshape(h, w, c)
    return data[:, :, 0] if c == 1 else data
