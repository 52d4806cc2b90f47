"""Concentric-square field segmentation.

A square field of side ``field_side`` is carved into ``ring_count``
concentric squares around the field center, spaced ``ring_spacing`` apart.
The innermost square is a single segment; every ring between consecutive
squares is split into four congruent rectangles arranged pinwheel-fashion
(top, right, bottom, left). Segment ids are assigned inside-out, 1 for the
inner square, then 4 per ring in pinwheel order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ConfigError, OutOfFieldError

# Relative slack when checking that field_side / 2 is a whole number of rings.
_RING_COUNT_TOL = 1e-9


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle; lo is the bottom-left corner, hi the top-right."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if not (self.lo.x < self.hi.x and self.lo.y < self.hi.y):
            raise ConfigError(f"degenerate rectangle: lo={self.lo}, hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> float:
        return self.hi.y - self.lo.y

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> Point:
        return Point((self.lo.x + self.hi.x) / 2.0, (self.lo.y + self.hi.y) / 2.0)

    def contains(self, p: Point) -> bool:
        """Closed containment: boundary points count as inside."""
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y


@dataclass(frozen=True)
class Segment:
    id: int
    ring: int
    rect: Rect
    area: float
    centroid: Point


@dataclass(frozen=True)
class SegmentLayout:
    field_side: float
    center: Point
    ring_spacing: float
    ring_count: int
    segments: tuple[Segment, ...]

    def segment(self, seg_id: int) -> Segment:
        # ids are contiguous starting at 1
        return self.segments[seg_id - 1]

    def ring_segments(self, ring: int) -> list[Segment]:
        return [s for s in self.segments if s.ring == ring]


class SquareCorners(NamedTuple):
    top_right: Point
    bottom_right: Point
    top_left: Point
    bottom_left: Point


def build_layout(field_side: float, ring_spacing: float) -> SegmentLayout:
    """Construct the segment layout for a field.

    Raises ConfigError unless field_side / 2 is an integer multiple of
    ring_spacing and the resulting ring count is at least 2.
    """
    if field_side <= 0 or ring_spacing <= 0:
        raise ConfigError(
            f"field_side and ring_spacing must be positive, got {field_side} and {ring_spacing}"
        )
    half = field_side / 2.0
    ratio = half / ring_spacing
    n = round(ratio)
    if n < 2 or abs(ratio - n) > _RING_COUNT_TOL * max(1.0, n):
        raise ConfigError(
            "field_side / 2 must be an integer multiple of ring_spacing with at "
            f"least two rings; got field_side={field_side}, ring_spacing={ring_spacing} "
            f"(ring count {ratio:g})"
        )

    c = half
    d = ring_spacing
    inner = Rect(Point(c - d, c - d), Point(c + d, c + d))
    segments = [Segment(1, 1, inner, inner.area, inner.center)]
    seg_id = 2
    for k in range(2, n + 1):
        lo, hi = c - k * d, c + k * d
        ilo, ihi = c - (k - 1) * d, c + (k - 1) * d
        # Pinwheel split of the ring between squares k-1 and k.
        rects = (
            Rect(Point(lo, ihi), Point(ihi, hi)),  # top
            Rect(Point(ihi, ilo), Point(hi, hi)),  # right
            Rect(Point(ilo, lo), Point(hi, ilo)),  # bottom
            Rect(Point(lo, lo), Point(ilo, ihi)),  # left
        )
        for rect in rects:
            segments.append(Segment(seg_id, k, rect, rect.area, rect.center))
            seg_id += 1
    return SegmentLayout(
        field_side=float(field_side),
        center=Point(c, c),
        ring_spacing=float(d),
        ring_count=n,
        segments=tuple(segments),
    )


def segment_of(layout: SegmentLayout, p: Point) -> int:
    """Return the id of the segment containing p.

    Points on shared edges resolve to the smallest containing segment id.
    Raises OutOfFieldError for points outside the field square.
    """
    side = layout.field_side
    if not (0.0 <= p.x <= side and 0.0 <= p.y <= side):
        raise OutOfFieldError(f"point ({p.x}, {p.y}) lies outside the {side} x {side} field")
    for seg in layout.segments:
        if seg.rect.contains(p):
            return seg.id
    # Unreachable when the segments tile the field; guard against fp surprises.
    raise OutOfFieldError(f"point ({p.x}, {p.y}) not covered by any segment")


def square_corners(layout: SegmentLayout, k: int) -> SquareCorners:
    """Corners of the k-th concentric square (k = 1 is the innermost)."""
    if not 1 <= k <= layout.ring_count:
        raise ConfigError(f"square index {k} outside 1..{layout.ring_count}")
    c = layout.center
    dk = k * layout.ring_spacing
    return SquareCorners(
        top_right=Point(c.x + dk, c.y + dk),
        bottom_right=Point(c.x + dk, c.y - dk),
        top_left=Point(c.x - dk, c.y + dk),
        bottom_left=Point(c.x - dk, c.y - dk),
    )


def layout_to_dict(layout: SegmentLayout) -> dict:
    """JSON-ready description of the layout (used by the CLI export)."""
    return {
        "field_side": layout.field_side,
        "ring_spacing": layout.ring_spacing,
        "ring_count": layout.ring_count,
        "center": [layout.center.x, layout.center.y],
        "segments": [
            {
                "id": s.id,
                "ring": s.ring,
                "rect": [s.rect.lo.x, s.rect.lo.y, s.rect.hi.x, s.rect.hi.y],
                "area": s.area,
                "centroid": [s.centroid.x, s.centroid.y],
            }
            for s in layout.segments
        ],
    }
