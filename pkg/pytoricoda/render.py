"""SVG figures of planar scenes."""

import logging
import math

from dataclasses import dataclass, field
from typing import Sequence

from pytoricoda.const import (
    SVG_MARGIN,
    SVG_POINT_RADIUS,
    SVG_PRECISION,
    SVG_SCALE,
    SVG_STYLE_PIECE,
    SVG_STYLE_POINT,
    SVG_STYLE_RESIDUAL,
    SVG_STYLE_TARGET,
    SVG_STYLE_WITNESS,
)
from pytoricoda.lattice import DimensionError, format_rational
from pytoricoda.polytope import RationalPolytope

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scene:
    targets: tuple[RationalPolytope, ...] = ()
    pieces: tuple[RationalPolytope, ...] = ()
    residual: tuple[RationalPolytope, ...] = ()
    points: tuple[Sequence, ...] = ()
    witness: Sequence | None = None
    title: str | None = field(default=None, compare=False)


def _num(value) -> str:
    return f"{float(value):.{SVG_PRECISION}f}"


def _cyclic(polygon: RationalPolytope) -> list:
    """Vertices in counterclockwise order around their barycenter."""
    cx, cy = (float(a) for a in polygon.barycenter)
    return sorted(polygon.vertices, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx))


def _path(polygon: RationalPolytope, style: str) -> str:
    # y is flipped so the picture has the usual orientation
    coords = [f"{_num(x)},{_num(-y)}" for x, y in _cyclic(polygon)]
    close = " Z" if polygon.dim == 2 else ""
    return f'<path d="M {" L ".join(coords)}{close}" style="{style}"/>\n'


def _circle(point: Sequence, style: str, radius: float, label: bool = False) -> str:
    x, y = point
    body = f'<circle cx="{_num(x)}" cy="{_num(-y)}" r="{_num(radius)}" style="{style}"'
    if not label:
        return body + "/>\n"
    title = f"({format_rational(x)}, {format_rational(y)})"
    return body + f"><title>{title}</title></circle>\n"


def render_svg(scene: Scene) -> str:
    """SVG 1.1 text for a planar scene; coordinates are rounded for display only."""
    shapes = scene.targets + scene.pieces + scene.residual
    for shape in shapes:
        if shape.ambient != 2:
            raise DimensionError("Only planar scenes can be drawn.", 2, shape.ambient)
    everything = [v for shape in shapes for v in shape.vertices] + [tuple(p) for p in scene.points]
    if scene.witness is not None:
        everything.append(tuple(scene.witness))
    if not everything:
        everything = [(0, 0)]
    xs, ys = [float(p[0]) for p in everything], [float(p[1]) for p in everything]
    left, top = min(xs) - SVG_MARGIN, -max(ys) - SVG_MARGIN
    width, height = max(xs) - min(xs) + 2 * SVG_MARGIN, max(ys) - min(ys) + 2 * SVG_MARGIN
    ret = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
        f'<svg width="{_num(width * SVG_SCALE)}" height="{_num(height * SVG_SCALE)}" '
        f'viewBox="{_num(left)} {_num(top)} {_num(width)} {_num(height)}" '
        'xmlns="http://www.w3.org/2000/svg" version="1.1">\n'
    )
    if scene.title:
        ret += f"<title>{scene.title}</title>\n"
    for polygon in scene.pieces:
        ret += _path(polygon, SVG_STYLE_PIECE)
    for polygon in scene.residual:
        ret += _path(polygon, SVG_STYLE_RESIDUAL)
    for polygon in scene.targets:
        ret += _path(polygon, SVG_STYLE_TARGET)
    for point in scene.points:
        ret += _circle(point, SVG_STYLE_POINT, SVG_POINT_RADIUS / 2)
    if scene.witness is not None:
        ret += _circle(scene.witness, SVG_STYLE_WITNESS, SVG_POINT_RADIUS, label=True)
    ret += "</svg>\n"
    _LOGGER.debug("Rendered %d shapes and %d points", len(shapes), len(scene.points))
    return ret


def write_svg(scene: Scene, path: str) -> None:
    with open(path, "w", encoding="utf8") as handle:
        handle.write(render_svg(scene))
