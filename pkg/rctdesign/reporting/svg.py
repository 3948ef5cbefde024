"""Static SVG plots of confidence regions, losses and allocations.

Every plot uses a fixed 600x600 viewport with data coordinates mapped
linearly; numbers are printed with fixed precision so outputs diff cleanly.
"""

from html import escape
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from rctdesign.regions.region import VarianceRegion

SIZE = 600
MARGIN = 60
PLOT = SIZE - 2 * MARGIN
DESIGN_ORDER = ["Equal", "Weighted", "Naive", "RegretMin"]
COLORS = ["#4c72b0", "#55a868", "#c44e52", "#8172b2", "#ccb974", "#64b5cd"]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    """Linear map from a data window onto the plot area."""

    def __init__(self, x0: float, x1: float, y0: float, y1: float):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1

    def x(self, v: float) -> float:
        return MARGIN + (v - self.x0) / (self.x1 - self.x0) * PLOT

    def y(self, v: float) -> float:
        return SIZE - MARGIN - (v - self.y0) / (self.y1 - self.y0) * PLOT

    def path(self, points: np.ndarray, close: bool = True) -> str:
        cmds = [f"{'M' if i == 0 else 'L'}{_fmt(self.x(px))},{_fmt(self.y(py))}" for i, (px, py) in enumerate(points)]
        return " ".join(cmds) + (" Z" if close else "")


def _header(title: str) -> List[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<text x="{SIZE // 2}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>',
    ]


def _window(points: np.ndarray):
    lo, hi = points.min(axis=0), points.max(axis=0)
    span = np.maximum(hi - lo, 1e-4)
    return lo - 0.08 * span, hi + 0.08 * span


def _clip_polygon(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a closed polygon to the box [lo, hi]."""
    poly = np.asarray(points, dtype=np.float64)
    for axis in (0, 1):
        for bound, keep in ((lo[axis], np.greater_equal), (hi[axis], np.less_equal)):
            if len(poly) == 0:
                return poly
            nxt = np.roll(poly, -1, axis=0)
            inside, inside_next = keep(poly[:, axis], bound), keep(nxt[:, axis], bound)
            out = []
            for p, q, p_in, q_in in zip(poly, nxt, inside, inside_next):
                if p_in:
                    out.append(p)
                if p_in != q_in:
                    cut = p + (bound - p[axis]) / (q[axis] - p[axis]) * (q - p)
                    cut[axis] = bound
                    out.append(cut)
            poly = np.array(out, dtype=np.float64).reshape(-1, 2)
    return poly


def region_outline(region: VarianceRegion, n: int = 256) -> np.ndarray:
    """Outline of ellipse ∩ box: the sampled ellipse polygon clipped to the box.

    Every vertex lies in the region; cap segments run between the ellipse crossings.
    """
    outline = _clip_polygon(region.ellipse.boundary(n), region.box_lo, region.box_hi)
    if len(outline) == 0:
        return np.atleast_2d(np.clip(region.ellipse.center, region.box_lo, region.box_hi))
    return outline


def stratum_svg(region: VarianceRegion, rectangles: Optional[np.ndarray] = None, title: Optional[str] = None) -> str:
    """Rectangles, full ellipse (dashed), clipped region and point estimate.

    Args:
        region: Confidence region of one stratum
        rectangles: (B, 4) rows of s0_lo, s0_hi, s1_lo, s1_hi, or None
        title: Plot title; defaults to the stratum id
    """
    outline = region_outline(region)
    cloud = [outline]
    if rectangles is not None and len(rectangles):
        cloud.append(rectangles[:, [0, 2]])
        cloud.append(rectangles[:, [1, 3]])
    if region.point_estimate is not None:
        cloud.append(np.atleast_2d(region.point_estimate))
    (x0, y0), (x1, y1) = _window(np.vstack(cloud))
    canvas = _Canvas(x0, x1, y0, y1)

    parts = _header(title or f"Stratum {region.stratum_id}")
    parts.append(
        f'<clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}"/></clipPath>'
    )
    parts.append('<g clip-path="url(#plot)">')
    if rectangles is not None:
        for s0_lo, s0_hi, s1_lo, s1_hi in rectangles:
            parts.append(
                f'<rect x="{_fmt(canvas.x(s0_lo))}" y="{_fmt(canvas.y(s1_hi))}" '
                f'width="{_fmt(canvas.x(s0_hi) - canvas.x(s0_lo))}" height="{_fmt(canvas.y(s1_lo) - canvas.y(s1_hi))}" '
                'fill="#8e44ad" fill-opacity="0.05" stroke="#8e44ad" stroke-opacity="0.4" stroke-width="0.5"/>'
            )
    parts.append(
        f'<path class="ellipse" d="{canvas.path(region.ellipse.boundary(256))}" fill="none" '
        'stroke="gray" stroke-dasharray="6,4"/>'
    )
    parts.append(f'<path class="region" d="{canvas.path(outline)}" fill="none" stroke="black" stroke-width="1.5"/>')
    for axis, cap in enumerate(region.box_hi):
        if axis == 0 and x0 <= cap <= x1:
            parts.append(
                f'<line class="cap" x1="{_fmt(canvas.x(cap))}" y1="{MARGIN}" x2="{_fmt(canvas.x(cap))}" '
                f'y2="{SIZE - MARGIN}" stroke="red" stroke-dasharray="2,3"/>'
            )
        if axis == 1 and y0 <= cap <= y1:
            parts.append(
                f'<line class="cap" x1="{MARGIN}" y1="{_fmt(canvas.y(cap))}" x2="{SIZE - MARGIN}" '
                f'y2="{_fmt(canvas.y(cap))}" stroke="red" stroke-dasharray="2,3"/>'
            )
    if region.point_estimate is not None:
        px, py = region.point_estimate
        parts.append(f'<circle class="estimate" cx="{_fmt(canvas.x(px))}" cy="{_fmt(canvas.y(py))}" r="5" fill="black"/>')
    parts.append("</g>")

    parts.extend([
        f'<text x="{SIZE // 2}" y="{SIZE - 15}" text-anchor="middle" font-family="sans-serif" font-size="13">sigma^2(0)</text>',
        f'<text x="18" y="{SIZE // 2}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {SIZE // 2})">sigma^2(1)</text>',
        f'<text x="{MARGIN}" y="{SIZE - MARGIN + 16}" font-family="sans-serif" font-size="11">{x0:.4f}</text>',
        f'<text x="{SIZE - MARGIN}" y="{SIZE - MARGIN + 16}" text-anchor="end" font-family="sans-serif" font-size="11">{x1:.4f}</text>',
        f'<text x="{MARGIN - 4}" y="{SIZE - MARGIN}" text-anchor="end" font-family="sans-serif" font-size="11">{y0:.4f}</text>',
        f'<text x="{MARGIN - 4}" y="{MARGIN + 10}" text-anchor="end" font-family="sans-serif" font-size="11">{y1:.4f}</text>',
        "</svg>",
    ])
    return "\n".join(parts) + "\n"


def _bars(groups: Sequence[str], series: Sequence[str], values: np.ndarray, title: str, ylabel: str) -> str:
    """Grouped bar chart; values has shape (len(groups), len(series))."""
    top = float(np.nanmax(values)) if values.size and np.nanmax(values) > 0 else 1.0
    parts = _header(title)
    group_width = PLOT / max(len(groups), 1)
    bar_width = 0.8 * group_width / max(len(series), 1)
    for g, group in enumerate(groups):
        left = MARGIN + g * group_width + 0.1 * group_width
        for s in range(len(series)):
            v = values[g, s]
            if not np.isfinite(v):
                continue
            height = v / top * (PLOT - 20)
            parts.append(
                f'<rect x="{_fmt(left + s * bar_width)}" y="{_fmt(SIZE - MARGIN - height)}" '
                f'width="{_fmt(bar_width)}" height="{_fmt(height)}" fill="{COLORS[s % len(COLORS)]}"/>'
            )
        parts.append(
            f'<text x="{_fmt(MARGIN + (g + 0.5) * group_width)}" y="{SIZE - MARGIN + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{escape(group)}</text>'
        )
    for s, name in enumerate(series):
        parts.append(
            f'<rect x="{MARGIN + 8}" y="{MARGIN + 8 + 16 * s}" width="10" height="10" fill="{COLORS[s % len(COLORS)]}"/>'
            f'<text x="{MARGIN + 22}" y="{MARGIN + 17 + 16 * s}" font-family="sans-serif" font-size="11">{escape(name)}</text>'
        )
    parts.extend([
        f'<text x="{MARGIN - 4}" y="{MARGIN + 30}" text-anchor="end" font-family="sans-serif" font-size="11">{top:.3g}</text>',
        f'<text x="18" y="{SIZE // 2}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {SIZE // 2})">{escape(ylabel)}</text>',
        "</svg>",
    ])
    return "\n".join(parts) + "\n"


def losses_svg(frame: pd.DataFrame) -> str:
    """Average loss by design, grouped by Gamma."""
    gammas = sorted(frame["gamma"].unique())
    designs = [d for d in DESIGN_ORDER if d in set(frame["design"])]
    designs += sorted(set(frame["design"]) - set(designs))
    values = np.full((len(gammas), len(designs)), np.nan)
    for _, row in frame.iterrows():
        values[gammas.index(row["gamma"]), designs.index(row["design"])] = row["avg_loss"]
    return _bars([f"Gamma={g:g}" for g in gammas], designs, values, "Average loss by design", "average L2 loss")


def allocations_svg(frame: pd.DataFrame) -> str:
    """Integer treated and control counts per stratum for each design."""
    strata = list(pd.unique(frame["stratum"].astype(str)))
    designs = list(pd.unique(frame["design"]))
    series = [f"{d} {arm}" for d in designs for arm in ("treated", "control")]
    values = np.full((len(strata), len(series)), np.nan)
    for _, row in frame.iterrows():
        g = strata.index(str(row["stratum"]))
        d = designs.index(row["design"])
        values[g, 2 * d] = row["n_treated_int"]
        values[g, 2 * d + 1] = row["n_control_int"]
    return _bars(strata, series, values, "Allocation by stratum", "units")


def index_html(files: Sequence[str]) -> str:
    items = "\n".join(f'<figure><img src="{escape(f)}" alt="{escape(f)}"/><figcaption>{escape(f)}</figcaption></figure>' for f in files)
    return f"<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>rctdesign report</title></head>\n<body>\n{items}\n</body></html>\n"
