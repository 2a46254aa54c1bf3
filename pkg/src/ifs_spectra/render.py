"""Attractor rasterization: chaos-game point clouds to PPM (and optionally
PNG) images."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import invariant_box
from .measure import MeasureSampler
from .triple import HadamardTriple


@dataclass
class ImageCanvas:
    width: int
    height: int
    window: tuple[tuple[float, float], tuple[float, float]]
    counts: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("canvas must have positive size")
        (x0, x1), (y0, y1) = self.window
        if not (x0 < x1 and y0 < y1):
            raise ValueError("window must be a nondegenerate rectangle")
        self.counts = np.zeros((self.height, self.width), dtype=np.int64)

    def accumulate(self, points: np.ndarray) -> None:
        """Bin (x, y) points into the raster; 1-D clouds pass y = 0."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] == 1:
            points = np.hstack([points, np.zeros((points.shape[0], 1))])
        (x0, x1), (y0, y1) = self.window
        ix = np.floor((points[:, 0] - x0) / (x1 - x0) * self.width).astype(int)
        iy = np.floor((points[:, 1] - y0) / (y1 - y0) * self.height).astype(int)
        keep = (ix >= 0) & (ix < self.width) & (iy >= 0) & (iy < self.height)
        # Row 0 is the top of the image, so flip the y axis.
        np.add.at(self.counts, (self.height - 1 - iy[keep], ix[keep]), 1)

    def to_gray(self) -> np.ndarray:
        """8-bit grayscale, white background, darker with hit density."""
        top = self.counts.max()
        if top == 0:
            return np.full(self.counts.shape, 255, dtype=np.uint8)
        scaled = np.log1p(self.counts) / np.log1p(top)
        return (255 * (1.0 - scaled)).round().astype(np.uint8)


def write_ppm(canvas: ImageCanvas, path) -> None:
    """Binary P6, 8-bit, row-major top-to-bottom, gray written as RGB."""
    gray = canvas.to_gray()
    with open(path, "wb") as fh:
        fh.write(f"P6\n{canvas.width} {canvas.height}\n255\n".encode("ascii"))
        fh.write(np.repeat(gray[:, :, None], 3, axis=2).tobytes())


def write_png(canvas: ImageCanvas, path) -> None:
    from PIL import Image

    Image.fromarray(canvas.to_gray(), mode="L").save(path)


def default_window(T: HadamardTriple, which: str):
    """Window from the exact invariant box of the requested system, padded a
    little so boundary points are not clipped."""
    if which == "XB":
        box = invariant_box(T.R, T.B)
    elif which == "XL":
        box = invariant_box(T.S, T.L)
    else:
        raise ValueError("which must be 'XB' or 'XL'")
    pads = []
    for lo, hi in box:
        margin = max(float(hi - lo), 1e-3) * 0.05
        pads.append((float(lo) - margin, float(hi) + margin))
    if len(pads) == 1:
        pads.append((-0.5, 0.5))
    return tuple(pads[:2])


def render_attractor(T: HadamardTriple, which: str, count: int,
                     width: int = 512, height: int = 512,
                     window=None, seed: int = 0) -> ImageCanvas:
    if window is None:
        window = default_window(T, which)
    sampler = (
        MeasureSampler.for_triple(T, seed=seed)
        if which == "XB"
        else MeasureSampler.for_dual(T, seed=seed)
    )
    canvas = ImageCanvas(width, height, tuple(tuple(w) for w in window))
    remaining = count
    while remaining > 0:
        batch = min(remaining, 200_000)
        canvas.accumulate(sampler.chaos_game(batch))
        remaining -= batch
    return canvas
