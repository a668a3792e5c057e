"""Deterministic raster (PNG) and vector (SVG) plots of a value cloud."""

from __future__ import annotations

import colorsys
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from PIL import Image, ImageDraw

from .cyclotomic import BoundarySpec
from .errors import BadParameter, ViewportDegenerate
from .evaluate import ValueCloud
from .numtheory import divisors

SATURATION = 0.85
LIGHTNESS = 0.45


@dataclass(frozen=True)
class PlotConfig:
    width: int = 1024
    height: int = 1024
    point_radius: int = 1
    color_modulus: Optional[int] = None  # None: use the cloud's labels as given
    background: tuple = (255, 255, 255)
    overlay_color: tuple = (0, 0, 0)
    boundary_overlay: Optional[BoundarySpec] = None
    viewport: Optional[tuple] = None  # (xmin, xmax, ymin, ymax)

    def __post_init__(self):
        if self.width < 64 or self.height < 64:
            raise BadParameter("width and height must be at least 64 pixels")
        if self.point_radius < 0:
            raise BadParameter("point_radius must be nonnegative")
        if self.color_modulus is not None and self.color_modulus < 1:
            raise BadParameter("color_modulus must be >= 1")


def palette(m: int) -> np.ndarray:
    """m RGB colors with evenly spaced hues j/m."""
    rgb = [colorsys.hls_to_rgb(j / m, LIGHTNESS, SATURATION) for j in range(m)]
    return np.round(np.array(rgb) * 255).astype(np.uint8)


def auto_color_modulus(n: int, omega: int, r: int = 1) -> int:
    """Default coloring modulus.

    gcd(r, n) when it is a proper divisor above 1; otherwise the rotational
    symmetry order gcd(omega - 1, n / gcd(r, n)) when that is a proper divisor
    above 1, so that rotated copies get distinct colors; otherwise the largest
    proper divisor of n not exceeding 12.
    """
    g = math.gcd(r, n)
    if 1 < g < n:
        return g
    k = math.gcd(omega - 1, n // g)
    if 1 < k < n:
        return k
    if n < 2:
        return 1
    return max(e for e in divisors(n) if e < n and e <= 12)


def _viewport(cloud: ValueCloud, config: PlotConfig):
    if config.viewport is not None:
        xmin, xmax, ymin, ymax = config.viewport
    else:
        half = 1.05 * max(cloud.d, 1)
        xmin, xmax, ymin, ymax = -half, half, -half, half
    if not (xmax > xmin and ymax > ymin) or not all(
        math.isfinite(v) for v in (xmin, xmax, ymin, ymax)
    ):
        raise ViewportDegenerate(f"empty viewport {(xmin, xmax, ymin, ymax)}")
    return xmin, xmax, ymin, ymax


def pixel_coords(z, viewport, width: int, height: int):
    """Affine map of complex values to integer pixel (col, row) plus an in-view mask."""
    xmin, xmax, ymin, ymax = viewport
    z = np.asarray(z, dtype=complex)
    col = np.rint((z.real - xmin) / (xmax - xmin) * (width - 1))
    row = np.rint((ymax - z.imag) / (ymax - ymin) * (height - 1))
    ok = (col >= 0) & (col < width) & (row >= 0) & (row < height)
    return col.astype(np.int64), row.astype(np.int64), ok


def _labels(cloud: ValueCloud, config: PlotConfig):
    if config.color_modulus is None:
        return np.asarray(cloud.labels), cloud.color_modulus
    m = config.color_modulus
    return np.arange(cloud.n) % m, m


def _stencil(radius: int):
    rng = range(-radius, radius + 1)
    return [(dx, dy) for dy in rng for dx in rng if dx * dx + dy * dy <= radius * radius]


def rasterize(cloud: ValueCloud, config: PlotConfig) -> np.ndarray:
    """RGB array with points drawn in ascending y; a later y paints over an earlier one."""
    vp = _viewport(cloud, config)
    w, h = config.width, config.height
    labels, m = _labels(cloud, config)
    colors = palette(m)
    col, row, ok = pixel_coords(cloud.points, vp, w, h)
    idx = np.flatnonzero(ok)
    col, row = col[idx], row[idx]
    owner = np.full(w * h, -1, dtype=np.int64)
    for dx, dy in _stencil(config.point_radius):
        c, r = col + dx, row + dy
        keep = (c >= 0) & (c < w) & (r >= 0) & (r < h)
        np.maximum.at(owner, r[keep] * w + c[keep], idx[keep])
    img = np.empty((w * h, 3), dtype=np.uint8)
    img[:] = config.background
    painted = owner >= 0
    img[painted] = colors[labels[owner[painted]]]
    img = img.reshape(h, w, 3)
    if config.boundary_overlay is not None:
        img = _draw_overlay(img, config.boundary_overlay, vp, config)
    return img


def _draw_overlay(img, spec: BoundarySpec, vp, config: PlotConfig):
    pil = Image.fromarray(img, "RGB")
    draw = ImageDraw.Draw(pil)
    xmin, xmax, ymin, ymax = vp
    pts = spec.outline()
    cx = (pts.real - xmin) / (xmax - xmin) * (config.width - 1)
    cy = (ymax - pts.imag) / (ymax - ymin) * (config.height - 1)
    xy = [(float(a), float(b)) for a, b in zip(cx, cy)]
    if spec.kind in ("hypocycloid", "real_segment"):
        draw.line(xy, fill=config.overlay_color, width=1)
    else:
        draw.point(xy, fill=config.overlay_color)
    return np.asarray(pil)


def render_png(cloud: ValueCloud, config: PlotConfig) -> bytes:
    buf = io.BytesIO()
    # Pillow writes no time or text chunks unless asked, so bytes are reproducible
    Image.fromarray(rasterize(cloud, config), "RGB").save(buf, format="PNG", compress_level=6)
    return buf.getvalue()


def render_svg(cloud: ValueCloud, config: PlotConfig) -> str:
    vp = _viewport(cloud, config)
    xmin, xmax, ymin, ymax = vp
    w, h = config.width, config.height
    labels, m = _labels(cloud, config)
    colors = palette(m)
    sx = (w - 1) / (xmax - xmin)
    sy = (h - 1) / (ymax - ymin)
    rad = max(config.point_radius, 0.5)
    bg = "#%02x%02x%02x" % tuple(config.background)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="{bg}"/>',
    ]
    pts = np.asarray(cloud.points)
    x = (pts.real - xmin) * sx
    y = (ymax - pts.imag) * sy
    inside = (x >= 0) & (x <= w - 1) & (y >= 0) & (y <= h - 1)
    # duplicates within a class draw to the same spot, so keep one per class
    for j in range(m):
        sel = np.flatnonzero((labels == j) & inside)
        if len(sel) == 0:
            continue
        keys = sorted({(round(float(x[i]), 2), round(float(y[i]), 2)) for i in sel})
        fill = "#%02x%02x%02x" % tuple(int(c) for c in colors[j])
        lines.append(f'<g fill="{fill}">')
        lines.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="{rad}"/>' for a, b in keys)
        lines.append("</g>")
    if config.boundary_overlay is not None:
        o = config.boundary_overlay.outline()
        ox = (o.real - xmin) * sx
        oy = (ymax - o.imag) * sy
        stroke = "#%02x%02x%02x" % tuple(config.overlay_color)
        path = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(ox, oy))
        lines.append(f'<polyline points="{path}" fill="none" stroke="{stroke}" stroke-width="1"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render(cloud: ValueCloud, config: PlotConfig, fmt: str = "png"):
    """PNG bytes or SVG markup for the cloud."""
    if fmt == "png":
        return render_png(cloud, config)
    if fmt == "svg":
        return render_svg(cloud, config)
    raise BadParameter(f"unknown image format {fmt!r}")
