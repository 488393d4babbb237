"""Minimal deterministic PNG emission.

Chunks are assembled by hand (IHDR, tEXt, IDAT, IEND) with a fixed
zlib level and filter-0 rows, so the same pixels and metadata always
produce the same bytes.  A `veSSceNe` tEXt entry carries the scene hash
and seed for drift diagnosis; standard keywords ride along unchanged.
"""

import struct
import zlib

import numpy as np

SCENE_KEYWORD = "veSSceNe"
ZLIB_LEVEL = 6


def to_uint8(image):
    """Float [0,1] image to uint8 with floor(x*255 + 0.5) rounding."""
    arr = np.asarray(image, dtype=np.float64)
    return np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def _chunk(tag, payload):
    out = struct.pack(">I", len(payload)) + tag + payload
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return out + struct.pack(">I", crc)


def encode_png(image, text=None):
    """PNG bytes from an (h,w,3) or (h,w,4) uint8 or float array."""
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        arr = to_uint8(arr)
    if arr.ndim != 3 or arr.shape[2] not in (3, 4):
        raise ValueError(f"expected (h,w,3|4) image, got {arr.shape}")
    h, w, ch = arr.shape
    color_type = 2 if ch == 3 else 6
    ihdr = struct.pack(">IIBBBBB", w, h, 8, color_type, 0, 0, 0)
    raw = bytearray()
    for y in range(h):
        raw.append(0)
        raw.extend(arr[y].tobytes())
    idat = zlib.compress(bytes(raw), ZLIB_LEVEL)
    blob = b"\x89PNG\r\n\x1a\n" + _chunk(b"IHDR", ihdr)
    for key, value in (text or {}).items():
        kb = key.encode("latin-1")
        vb = str(value).encode("latin-1")
        if not (1 <= len(kb) <= 79):
            raise ValueError(f"bad tEXt keyword {key!r}")
        blob += _chunk(b"tEXt", kb + b"\x00" + vb)
    blob += _chunk(b"IDAT", idat) + _chunk(b"IEND", b"")
    return blob


def write_png(path, image, text=None):
    data = encode_png(image, text=text)
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def read_png_text(data):
    """tEXt entries of a PNG byte string as a dict (for round-trips)."""
    if not isinstance(data, (bytes, bytearray)):
        with open(data, "rb") as fh:
            data = fh.read()
    out = {}
    pos = 8
    while pos + 8 <= len(data):
        (length,) = struct.unpack(">I", data[pos:pos + 4])
        tag = data[pos + 4:pos + 8]
        payload = data[pos + 8:pos + 8 + length]
        if tag == b"tEXt" and b"\x00" in payload:
            k, v = payload.split(b"\x00", 1)
            out[k.decode("latin-1")] = v.decode("latin-1")
        pos += 12 + length
        if tag == b"IEND":
            break
    return out
