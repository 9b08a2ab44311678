"""Deterministic SVG jitter-scatter plots of nominal attribute pairs.

Each instance becomes one circle. Base coordinates are the nominal
value indices of the x/y attributes, mapped to evenly spaced bands;
a seeded uniform jitter of at most 0.35 band-widths spreads coincident
pairs into visible clouds without crossing band boundaries. Output is
a standalone SVG 1.1 document using only generic fonts, byte-identical
for identical inputs and seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import DataError, UsageError
from .tabular.model import Dataset, format_number

JITTER_SPAN = 0.35

DEFAULT_PALETTE = (
    "#377eb8", "#e41a1c", "#4daf4a", "#984ea3",
    "#ff7f00", "#a65628", "#f781bf", "#999999",
)


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: axis attributes, the color source (a nominal
    attribute index or a per-instance cluster assignment), jitter seed,
    canvas size, marker style, and the color palette."""

    x_attr: int
    y_attr: int
    color_attr: int | None = None
    assignment: tuple[int, ...] | None = None
    jitter_seed: int = 7
    width: int = 640
    height: int = 480
    radius: float = 3.0
    opacity: float = 0.6
    palette: tuple[str, ...] = DEFAULT_PALETTE

    def __post_init__(self):
        if (self.color_attr is None) == (self.assignment is None):
            raise UsageError(
                "exactly one of color_attr and assignment must be given"
            )
        if self.width <= 0 or self.height <= 0:
            raise UsageError("canvas size must be positive")
        if self.radius <= 0:
            raise UsageError("marker radius must be positive")
        if not 0.0 <= self.opacity <= 1.0:
            raise UsageError(f"opacity must be in [0, 1], got {self.opacity!r}")


def jitter_scatter(d: Dataset, spec: PlotSpec) -> str:
    """Render the dataset as an SVG scatter of x_attr against y_attr.

    Axis tick labels are the declared nominal value names; the legend
    lists color categories in declared order. Jitter offsets are drawn
    per instance, in instance order, x then y, from
    random.Random(jitter_seed).
    """
    xa = _nominal_axis(d, spec.x_attr, "x")
    ya = _nominal_axis(d, spec.y_attr, "y")

    if spec.color_attr is not None:
        ca = d.attributes[_check_attr(d, spec.color_attr, "color")]
        if not ca.is_nominal:
            raise UsageError(f"color attribute {ca.name!r} is not nominal")
        legend_title = ca.name
        categories = ca.values
        colors = []
        for i, row in enumerate(d.instances):
            if row[spec.color_attr] is None:
                raise DataError(f"instance {i} is missing the color value")
            colors.append(row[spec.color_attr])
    else:
        if len(spec.assignment) != d.num_instances:
            raise UsageError(
                f"assignment length {len(spec.assignment)} does not match "
                f"{d.num_instances} instances"
            )
        k = max(spec.assignment, default=-1) + 1
        legend_title = "Cluster"
        categories = tuple(f"Cluster {c}" for c in range(k))
        colors = list(spec.assignment)
    if len(categories) > len(spec.palette):
        raise UsageError(
            f"palette has {len(spec.palette)} colors but "
            f"{len(categories)} categories are needed"
        )

    ml, mr, mt, mb = 80, 150, 40, 55
    pw = spec.width - ml - mr
    ph = spec.height - mt - mb
    if pw <= 0 or ph <= 0:
        raise UsageError("canvas too small for the fixed margins")
    bw = pw / len(xa.values)
    bh = ph / len(ya.values)

    rng = random.Random(spec.jitter_seed)
    circles = []
    for i, row in enumerate(d.instances):
        xv, yv = row[spec.x_attr], row[spec.y_attr]
        if xv is None or yv is None:
            raise DataError(f"instance {i} is missing an axis value")
        dx = rng.uniform(-JITTER_SPAN, JITTER_SPAN)
        dy = rng.uniform(-JITTER_SPAN, JITTER_SPAN)
        cx = ml + (xv + 0.5 + dx) * bw
        cy = mt + ph - (yv + 0.5 + dy) * bh
        circles.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" '
            f'r="{format_number(spec.radius)}" '
            f'fill="{spec.palette[colors[i]]}" '
            f'fill-opacity="{format_number(spec.opacity)}"/>'
        )

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>',
        f'<text x="{ml + pw / 2:.2f}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">'
        f'{escape(ya.name)} vs. {escape(xa.name)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw:.2f}" height="{ph:.2f}" '
        f'fill="none" stroke="#333333"/>',
    ]
    for i, name in enumerate(xa.values):
        tx = ml + (i + 0.5) * bw
        parts.append(
            f'<text x="{tx:.2f}" y="{mt + ph + 20:.2f}" '
            f'text-anchor="middle" font-family="sans-serif" '
            f'font-size="12">{escape(name)}</text>'
        )
    for i, name in enumerate(ya.values):
        ty = mt + ph - (i + 0.5) * bh
        parts.append(
            f'<text x="{ml - 8}" y="{ty + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{escape(name)}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2:.2f}" y="{spec.height - 12}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="13">'
        f'{escape(xa.name)}</text>'
    )
    parts.append(
        f'<text x="20" y="{mt + ph / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {mt + ph / 2:.2f})">'
        f'{escape(ya.name)}</text>'
    )

    lx = ml + pw + 20
    parts.append(
        f'<text x="{lx}" y="{mt + 12}" font-family="sans-serif" '
        f'font-size="13" font-weight="bold">{escape(legend_title)}</text>'
    )
    for c, name in enumerate(categories):
        ly = mt + 30 + 20 * c
        parts.append(
            f'<rect x="{lx}" y="{ly}" width="12" height="12" '
            f'fill="{spec.palette[c]}"/>'
        )
        parts.append(
            f'<text x="{lx + 18}" y="{ly + 10}" font-family="sans-serif" '
            f'font-size="12">{escape(name)}</text>'
        )

    parts.extend(circles)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _check_attr(d: Dataset, attr: int, role: str) -> int:
    if not 0 <= attr < d.num_attributes:
        raise UsageError(f"{role} attribute index {attr} out of range")
    return attr


def _nominal_axis(d: Dataset, attr: int, role: str):
    a = d.attributes[_check_attr(d, attr, role)]
    if not a.is_nominal:
        raise UsageError(f"{role} axis attribute {a.name!r} is not nominal")
    return a
