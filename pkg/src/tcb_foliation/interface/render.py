"""Deterministic SVG diagrams of streets, partitions and plane diagrams.

Geometry is computed exactly; coordinates become floats only when an
attribute is written, with a fixed number of decimals.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

from ..core.exact_field import Scalar
from ..core.genus2_glue import FivePartition
from ..core.torus_flow import StreetOrder, StreetSet
from ..errors import UnsupportedKind
from ..utils.config import RenderConfig

NS_SVG = "http://www.w3.org/2000/svg"

STREET_FILLS = {0: "#c6dbef", 1: "#fdd0a2", 2: "#c7e9c0"}
PIECE_FILLS = ("#deebf7", "#fee6ce", "#e5f5e0", "#efedf5", "#fde0dd")


class RenderKind(str, Enum):
    STREETS = "streets"
    PARTITION = "partition"
    PLANE_DIAGRAM = "plane-diagram"


def demangle(k: str) -> str:
    return k.replace("_", "-")


def rounder(x: Any, prec: int) -> Any:
    if isinstance(x, float):
        text = f"{x:.{prec}f}"
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return "0" if text in ("", "-0") else text
    return x


class Element:
    def __init__(self, tag: str, unary: bool = False, prec: int = 2, **attr: Any):
        self.tag = tag
        self.unary = unary
        self.prec = prec
        self.attr = attr

    def props(self) -> Dict[str, Any]:
        return self.attr

    def props_repr(self) -> str:
        return " ".join(
            f'{demangle(k)}="{escape(str(rounder(v, self.prec)))}"'
            for k, v in self.props().items()
        )

    def inner(self) -> str:
        return ""

    def svg(self) -> str:
        props = self.props_repr()
        pre = " " if props else ""
        if self.unary:
            return f"<{self.tag}{pre}{props} />"
        return f"<{self.tag}{pre}{props}>{self.inner()}</{self.tag}>"


class Container(Element):
    def __init__(self, children: Optional[List[Element]] = None, tag: str = "g", **attr: Any):
        super().__init__(tag=tag, **attr)
        self.children: List[Element] = list(children or [])

    def add(self, child: Element) -> "Container":
        self.children.append(child)
        return self

    def inner(self) -> str:
        inside = "\n".join(child.svg() for child in self.children)
        return f"\n{inside}\n"


class SVG(Container):
    def __init__(self, width: int, height: int, children: Optional[List[Element]] = None):
        super().__init__(children=children, tag="svg")
        self.size = (width, height)

    def props(self) -> Dict[str, Any]:
        w, h = self.size
        return {"width": w, "height": h, "viewBox": f"0 0 {w} {h}", "xmlns": NS_SVG}

    def svg(self) -> str:
        return '<?xml version="1.0" encoding="UTF-8"?>\n' + super().svg() + "\n"

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.svg(), encoding="utf-8")


class Line(Element):
    def __init__(self, x1: float, y1: float, x2: float, y2: float, prec: int = 2, **attr: Any):
        base = {"x1": x1, "y1": y1, "x2": x2, "y2": y2, "stroke": "black"}
        super().__init__(tag="line", unary=True, prec=prec, **{**base, **attr})


class Rect(Element):
    def __init__(self, x: float, y: float, w: float, h: float, prec: int = 2, **attr: Any):
        base = {"x": x, "y": y, "width": w, "height": h, "fill": "none", "stroke": "black"}
        super().__init__(tag="rect", unary=True, prec=prec, **{**base, **attr})


class Text(Element):
    def __init__(self, text: str, x: float, y: float, prec: int = 2, **attr: Any):
        base = {"x": x, "y": y, "font_family": "sans-serif", "text_anchor": "middle"}
        super().__init__(tag="text", prec=prec, **{**base, **attr})
        self.text = text

    def inner(self) -> str:
        return escape(self.text)


class Canvas:
    """Maps the segment (0, m) onto the drawable width."""

    def __init__(self, config: RenderConfig, m: Optional[Scalar] = None):
        self.config = config
        self.m = m
        self.left = float(config.margin)
        self.span = float(config.width - 2 * config.margin)

    def x(self, value: Scalar) -> float:
        # exact ratio first, one float conversion per coordinate
        return self.left + self.span * float(value / self.m)

    def title(self, text: str) -> Text:
        return self.text(text, self.config.width / 2, self.config.margin + self.config.font_size)

    def root(self) -> SVG:
        return SVG(self.config.width, self.config.height)

    def text(self, text: str, x: float, y: float, **attr: Any) -> Text:
        attr = {"font_size": self.config.font_size, **attr}
        return Text(text, x, y, prec=self.config.precision, **attr)

    def rect(self, x: float, y: float, w: float, h: float, **attr: Any) -> Rect:
        return Rect(x, y, w, h, prec=self.config.precision, **attr)

    def line(self, x1: float, y1: float, x2: float, y2: float, **attr: Any) -> Line:
        return Line(x1, y1, x2, y2, prec=self.config.precision, **attr)


def render_streets(ss: StreetSet, config: RenderConfig) -> str:
    """Three strips over the obstacle in upward order, widths to scale."""
    canvas = Canvas(config, ss.m)
    svg = canvas.root()
    top = float(config.margin + config.font_size * 2)
    height = float(config.height - 2 * config.margin - config.font_size * 4)
    svg.add(canvas.title(f"streets, m = {ss.m}"))
    domains = ss.domains(StreetOrder.UPWARD)
    for k in (2, 0, 1):
        dom = domains[k]
        x0, x1 = canvas.x(dom.lo), canvas.x(dom.hi)
        group = Container(id=f"street-{k}")
        group.add(canvas.rect(x0, top, x1 - x0, height, fill=STREET_FILLS[k]))
        group.add(canvas.text(f"p{k}", (x0 + x1) / 2, top + height / 2))
        group.add(
            canvas.text(
                ss.widths[k].format(),
                (x0 + x1) / 2,
                top + height + config.font_size * 1.5,
                font_size=max(config.font_size - 2, 6),
            )
        )
        svg.add(group)
    base = top + height
    svg.add(canvas.line(canvas.x(ss.m * 0), base, canvas.x(ss.m), base, stroke_width=2))
    return svg.svg()


def render_partition(fp: FivePartition, m: Scalar, config: RenderConfig) -> str:
    """The segment s with its five pieces and the four division points."""
    canvas = Canvas(config, m)
    svg = canvas.root()
    axis = float(config.height) / 2
    band = float(config.font_size * 2)
    svg.add(canvas.title(f"type {fp.type_id.value}  sigma = ({fp.sigma_text})"))
    for q, (dom, label) in enumerate(zip(fp.domains, fp.label_text), start=1):
        x0, x1 = canvas.x(dom.lo), canvas.x(dom.hi)
        group = Container(id=f"piece-{q}")
        group.add(canvas.rect(x0, axis - band, x1 - x0, band, fill=PIECE_FILLS[q - 1]))
        group.add(canvas.text(f"R{q}", (x0 + x1) / 2, axis - band / 3))
        group.add(canvas.text(label, (x0 + x1) / 2, axis + band))
        svg.add(group)
    zero = m * 0
    svg.add(canvas.line(canvas.x(zero), axis, canvas.x(m), axis, stroke_width=2))
    marks: List[Tuple[str, Scalar]] = [("0", zero)] + list(fp.image_points) + [("m", m)]
    for name, value in marks:
        x = canvas.x(value)
        svg.add(canvas.line(x, axis + band * 1.5, x, axis + band * 2.2))
        svg.add(canvas.text(name, x, axis + band * 3))
    return svg.svg()


def render_plane_diagram(
    genus: int, config: RenderConfig, cycles: Sequence[int] = ()
) -> str:
    """The g boundary squares with their A_j^+ and A_j^- arcs."""
    canvas = Canvas(config)
    svg = canvas.root()
    fs = config.font_size
    span = float(config.width - 2 * config.margin)
    side = min(span / (1.5 * genus), float(config.height - 2 * config.margin - 4 * fs))
    gap = (span - side * genus) / genus
    top = float(config.margin + 2 * fs)
    svg.add(canvas.title(f"plane diagram, genus {genus}"))
    for j in range(1, genus + 1):
        x = config.margin + gap / 2 + (j - 1) * (side + gap)
        middle = x + side / 2
        group = Container(id=f"square-{j}")
        group.add(canvas.rect(x, top, side, side, fill="#f0f0f0"))
        group.add(canvas.line(x, top, x + side, top, stroke="#1f77b4", stroke_width=3))
        bottom = top + side
        group.add(canvas.line(x, bottom, x + side, bottom, stroke="#d62728", stroke_width=3))
        group.add(canvas.text(f"A{j}+", middle, top - 4))
        group.add(canvas.text(f"A{j}-", middle, bottom + fs + 2))
        group.add(canvas.text(str(j), middle, top + side / 2))
        svg.add(group)
    if cycles:
        label = "cycle type (" + ",".join(str(c) for c in cycles) + ")"
        svg.add(canvas.text(label, config.width / 2, config.height - config.margin / 2))
    return svg.svg()


def render(kind: Union[str, RenderKind], payload: Dict[str, Any], config: RenderConfig) -> str:
    """Dispatch on the diagram kind."""
    try:
        kind = RenderKind(kind)
    except ValueError:
        raise UnsupportedKind(
            f"cannot render {kind!r}",
            details={"kind": str(kind), "supported": [k.value for k in RenderKind]},
        ) from None
    if kind is RenderKind.STREETS:
        return render_streets(payload["streets"], config)
    if kind is RenderKind.PARTITION:
        return render_partition(payload["partition"], payload["m"], config)
    return render_plane_diagram(payload["genus"], config, payload.get("cycles", ()))
