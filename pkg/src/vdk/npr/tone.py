"""Tone-driven hatch reduction and width modulation.

Bright regions shed strokes until the local density matches (1 - tone);
the removal sweep walks a breadth-first order over the stroke proximity
graph so survivors stay mutually aligned instead of thinning at random.
"""

from collections import deque

import numpy as np

from vdk.npr.streamlines import HatchSet

BASE_WIDTH = 1.5
MIN_WIDTH = 0.5
# strokes darker than this never get removed
REMOVAL_FLOOR = 0.05


def _stroke_tone(stroke, tone_image):
    h, w = tone_image.shape
    xi = np.clip(np.rint(stroke[:, 0]).astype(np.int64), 0, w - 1)
    yi = np.clip(np.rint(stroke[:, 1]).astype(np.int64), 0, h - 1)
    return float(tone_image[yi, xi].mean())


def _proximity_graph(strokes, radius):
    """Adjacency lists: strokes whose point sets come within radius."""
    n = len(strokes)
    boxes = np.zeros((n, 4))
    for i, s in enumerate(strokes):
        boxes[i] = (s[:, 0].min(), s[:, 1].min(), s[:, 0].max(), s[:, 1].max())
    adj = [[] for _ in range(n)]
    r2 = radius * radius
    for i in range(n):
        for j in range(i + 1, n):
            # bbox gap prunes the quadratic pair scan
            gx = max(boxes[j, 0] - boxes[i, 2], boxes[i, 0] - boxes[j, 2], 0.0)
            gy = max(boxes[j, 1] - boxes[i, 3], boxes[i, 1] - boxes[j, 3], 0.0)
            if gx * gx + gy * gy > r2:
                continue
            a = strokes[i][::2]
            b = strokes[j][::2]
            d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)
            if d2.min() <= r2:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def prune_hatches_by_tone(hatches, tone_image, d_sep=6.0,
                          base_width=BASE_WIDTH):
    """Remove and thin strokes so darkness tracks (1 - tone).

    A stroke survives if the fraction of its neighborhood still present
    does not exceed the darkness its local tone asks for.  Deterministic:
    BFS roots are the lowest-index stroke of each component.
    """
    tone_image = np.asarray(tone_image, dtype=np.float64)
    strokes = hatches.strokes
    n = len(strokes)
    if n == 0:
        return HatchSet(strokes=[], widths=np.zeros(0), level=[])

    tones = np.array([_stroke_tone(s, tone_image) for s in strokes])
    adj = _proximity_graph(strokes, 2.0 * d_sep)

    keep = np.zeros(n, dtype=bool)
    visited = np.zeros(n, dtype=bool)
    for root in range(n):
        if visited[root]:
            continue
        queue = deque([root])
        visited[root] = True
        while queue:
            i = queue.popleft()
            target = 1.0 - tones[i]
            if tones[i] < REMOVAL_FLOOR:
                keep[i] = True
            else:
                nbrs = adj[i]
                total = len(nbrs) + 1
                kept = sum(1 for j in nbrs if keep[j]) + 1
                keep[i] = kept / total <= target + 1e-12
            for j in adj[i]:
                if not visited[j]:
                    visited[j] = True
                    queue.append(j)

    out_strokes = []
    out_widths = []
    out_level = []
    for i in range(n):
        if not keep[i]:
            continue
        out_strokes.append(strokes[i])
        w = base_width * (1.0 - tones[i])
        out_widths.append(float(np.clip(w, MIN_WIDTH, base_width)))
        out_level.append(hatches.level[i] if i < len(hatches.level) else "hatch")
    return HatchSet(strokes=out_strokes,
                    widths=np.asarray(out_widths, dtype=np.float64),
                    level=out_level)
