"""Small rasterisation helpers that paint filled shapes onto 8-bit RGB canvases.

A pixel is painted when its centre lies inside the shape. Coordinates are ``(row, column)`` in pixel units,
so the pixel ``(i, j)`` covers ``[i, i + 1) x [j, j + 1)`` and has its centre at ``(i + 0.5, j + 0.5)``.
"""
from typing import Sequence, Tuple

import numpy as np

from ..core import Observation, from_uint8

Color = Tuple[int, int, int]

BLACK = (0, 0, 0)  # type: Color
DARK_GREY = (48, 48, 48)  # type: Color
RED = (255, 0, 0)  # type: Color
GREEN = (0, 255, 0)  # type: Color
YELLOW = (255, 255, 0)  # type: Color
PURPLE = (160, 32, 240)  # type: Color
DISTRACTOR_COLORS = ((0, 0, 255), (0, 255, 255), (255, 0, 255))  # type: Tuple[Color, ...]


def blank(size: int, color: Color = BLACK) -> np.ndarray:
    canvas = np.empty((size, size, 3), dtype=np.uint8)
    canvas[...] = color
    return canvas


def _centres(canvas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    rows, cols = np.mgrid[0:canvas.shape[0], 0:canvas.shape[1]]
    return rows + 0.5, cols + 0.5


def _paint(canvas: np.ndarray, mask: np.ndarray, color: Color, anchor: Tuple[float, float]) -> None:
    # shapes smaller than a pixel still mark the pixel that holds their anchor point
    if not mask.any():
        row = int(np.clip(np.floor(anchor[0]), 0, canvas.shape[0] - 1))
        col = int(np.clip(np.floor(anchor[1]), 0, canvas.shape[1] - 1))
        mask = np.zeros(canvas.shape[:2], dtype=bool)
        mask[row, col] = True
    canvas[mask] = color


def fill_rect(canvas: np.ndarray, top: float, left: float, bottom: float, right: float, color: Color) -> None:
    rows, cols = _centres(canvas)
    mask = (rows >= top) & (rows < bottom) & (cols >= left) & (cols < right)
    _paint(canvas, mask, color, ((top + bottom) / 2.0, (left + right) / 2.0))


def fill_disc(canvas: np.ndarray, centre_row: float, centre_col: float, radius: float, color: Color) -> None:
    rows, cols = _centres(canvas)
    mask = (rows - centre_row) ** 2 + (cols - centre_col) ** 2 <= radius ** 2
    _paint(canvas, mask, color, (centre_row, centre_col))


def fill_convex_polygon(canvas: np.ndarray, vertices: Sequence[Tuple[float, float]], color: Color) -> None:
    """Fill a convex polygon given by its vertices in either winding order."""
    points = np.asarray(vertices, dtype=np.float64)
    rows, cols = _centres(canvas)
    signs = []
    for index in range(len(points)):
        (r0, c0), (r1, c1) = points[index], points[(index + 1) % len(points)]
        signs.append((r1 - r0) * (cols - c0) - (c1 - c0) * (rows - r0))
    stacked = np.stack(signs)
    mask = np.all(stacked >= 0, axis=0) | np.all(stacked <= 0, axis=0)
    centroid = points.mean(axis=0)
    _paint(canvas, mask, color, (float(centroid[0]), float(centroid[1])))


def to_observation(canvas: np.ndarray) -> Observation:
    return from_uint8(canvas)
