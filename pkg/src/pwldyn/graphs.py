"""The four invariant planar graphs and their exact invariance check.

Each parameter regime of the slice a = -1 carries a compact graph that
absorbs every planar orbit.  Vertices are affine functions of b; edge lists
are fixed data tables per regime, and `verify_invariance` re-derives
F(graph) subset-of graph exactly, which is the arbiter for the tables.

Regimes (all for a = -1):
  negb    b <= -2          topological circle with one plateau
  alpha   -1 < b <= -3/4   cycle with four whiskers, two plateaus
  beta    2/3 < b <= 5/7   dense web near the origin, six plateaus
  band48  4 < b < 8        branched graph, two plateaus
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from pwldyn.planemap import (
    Params,
    Point,
    Segment,
    apply_F,
    iterate_segment_pieces,
)

F = Fraction

REGIMES = ("negb", "alpha", "beta", "band48")


def regime_interval_contains(regime: str, b: Fraction) -> str:
    """"interior", "boundary", or "outside" for b against the regime's interval."""
    b = Fraction(b)
    if regime == "negb":
        if b < -2:
            return "interior"
        return "boundary" if b == -2 else "outside"
    if regime == "alpha":
        if F(-1) < b < F(-3, 4):
            return "interior"
        return "boundary" if b == F(-3, 4) else "outside"
    if regime == "beta":
        if F(2, 3) < b < F(5, 7):
            return "interior"
        return "boundary" if b == F(5, 7) else "outside"
    if regime == "band48":
        return "interior" if 4 < b < 8 else "outside"
    raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# Data tables: coordinates are pairs ((c0x, c1x), (c0y, c1y)) -> c0 + c1*b
# ---------------------------------------------------------------------------

_VERTICES = {
    "negb": {
        "P1": ((-2, -1), (-1, 0)),
        "P2": ((-2, -1), (-3, 0)),
        "P3": ((0, -1), (-5, 0)),
        "P4": ((4, -1), (-5, 0)),
        "P5": ((8, -1), (-1, 0)),
        "P6": ((8, -1), (7, 0)),
        "R1": ((8, -1), (0, 0)),
        "R2": ((7, -1), (8, 0)),
        "S": ((-1, -1), (0, 0)),
    },
    "alpha": {
        "P2": ((-2, -1), (-1, 0)),
        "T2": ((-1, -5), (0, -4)),
        "R2": ((0, 1), (-1, 0)),
        "P3": ((2, 1), (-3, 0)),
        "R3": ((0, -1), (-1, 2)),
        "P4": ((4, 1), (-1, 2)),
        "R4": ((0, -3), (-1, 2)),
        "P5": ((4, -1), (3, 4)),
        "R5": ((0, -5), (-1, 0)),
        "P6": ((0, -5), (7, 4)),
        "R6": ((0, -5), (-1, -4)),
    },
    "band48": {
        "P3": ((-2, -1), (-1, 0)),
        "P1": ((0, 0), (1, 1)),
        "P5": ((0, 1), (-1, 0)),
        "P8": ((0, 0), (-1, 1)),
        "P6": ((2, 1), (-3, 0)),
        "P10": ((0, 1), (-1, 2)),
        "P11": ((-2, 1), (-1, 2)),
        "P9": ((4, 1), (-1, 2)),
    },
    "beta": {
        "P1": ((-2, -1), (-1, 0)),
        "P2": ((2, 1), (-3, 0)),
        "P3": ((4, 1), (-1, 2)),
        "P4": ((4, -1), (5, 0)),
        "R2": ((0, -2), (1, -1)),
        "R3": ((-2, 3), (-1, 0)),
        "R4": ((-2, 3), (-3, 4)),
        "R5": ((0, -1), (-5, 8)),
        "R6": ((4, -7), (5, -8)),
        "X2": ((0, 0), (-1, 1)),
        "X3": ((0, -1), (-1, 2)),
        "X4": ((0, -1), (1, -2)),
        "X5": ((-2, 3), (1, -2)),
        "X6": ((-4, 5), (-1, 2)),
        "X7": ((4, -7), (-3, 4)),
        "Y2": ((-5, 7), (4, -6)),
        "Z2": ((4, -7), (-5, 8)),
        "Z3": ((0, -1), (9, -14)),
        "T2": ((-1, 1), (0, 0)),
        "V1": ((0, 1), (-1, 0)),
        "V2": ((0, 1), (-1, 2)),
        "V3": ((0, -1), (1, 0)),
        "V4": ((-2, 1), (-1, 0)),
    },
}

_EDGES = {
    "negb": [
        ("A", "P1", "P2"),
        ("B", "P2", "P3"),
        ("C", "P3", "P4"),
        ("D", "P4", "P5"),
        ("E", "P5", "R1"),
        ("feeder", "R1", "P6"),
        ("G", "P6", "R2"),
        ("plateau", "R2", "S"),
        ("H", "S", "P1"),
    ],
    "alpha": [
        ("A", "P2", "T2"),
        ("B", "P2", "R2"),
        ("C1", "R2", "R3"),
        ("C2", "R3", "P3"),
        ("E1", "R3", "R4"),
        ("E2", "R4", "P4"),
        ("F1", "R4", "R5"),
        ("F2", "R5", "P5"),
        ("G1", "R5", "R6"),
        ("G2", "R6", "P6"),
        ("H", "T2", "R6"),
    ],
    "band48": [
        ("L1", "P3", "P1"),
        ("L2", "P3", "P5"),
        ("L3A", "P8", "P5"),
        ("L3B", "P5", "P6"),
        ("L4A", "P11", "P10"),
        ("L4B", "P10", "P9"),
        ("L5", "P8", "P10"),
        ("L6", "P1", "P11"),
    ],
    "beta": [
        ("A1", "P1", "R2"),
        ("A2", "R2", "P4"),
        ("B1", "X3", "T2"),
        ("B2", "T2", "Y2"),
        ("B3", "Y2", "X2"),
        ("B4", "X2", "X5"),
        ("B5", "X5", "V1"),
        ("B6", "V1", "P2"),
        ("C1", "P1", "V4"),
        ("C2", "V4", "R3"),
        ("C3", "R3", "V1"),
        ("D1", "X3", "X6"),
        ("D2", "X6", "V2"),
        ("D3", "V2", "P3"),
        ("E", "X2", "V2"),
        ("VA", "X4", "X3"),
        ("VB", "X3", "R5"),
        ("VC", "R5", "V3"),
        ("G1", "V4", "T2"),
        ("G2", "T2", "X4"),
        ("I1", "R2", "X7"),
        ("I2", "X7", "X4"),
        ("J", "R3", "X5"),
        ("K", "X6", "R4"),
        ("L", "X7", "Z2"),
        ("M", "Z2", "R5"),
        ("N", "R6", "Z3"),
        ("O", "Z3", "Y2"),
    ],
}

# Marked points (name, coords, host edge): dynamically relevant points that
# are not graph vertices.
_MARKS = {
    "negb": [
        ("P7", ((0, -1), (1, 0)), "plateau"),
    ],
    "alpha": [
        ("P7", ((-8, -9), (-7, -8)), "A"),
        ("R1", ((-1, -1), (0, 0)), "A"),
        ("P1", ((0, 0), (1, 1)), "A"),
        ("R7", ((0, -1), (1, 0)), "A"),
        ("Q", ((0, 0), (-1, 1)), "C1"),
        ("T1", ((0, -5), (0, 0)), "G1"),
    ],
    "band48": [
        ("P2", ((-1, -1), (0, 0)), "L1"),
        ("P13", ((0, -1), (1, 0)), "L1"),
        ("P17", ((-1, F(-1, 2)), (0, F(1, 2))), "L1"),
        ("P12", ((4, -1), (5, 0)), "L1"),
        ("X6", ((F(1, 2), F(-5, 4)), (-1, 0)), "L2"),
        ("X5", ((0, -1), (-1, 0)), "L2"),
        ("X4", ((F(1, 2), -1), (-1, 0)), "L2"),
        ("X3", ((1, -1), (-1, 0)), "L2"),
        ("X2", ((0, F(-1, 2)), (-1, 0)), "L2"),
        ("X1", ((F(1, 2), F(-1, 4)), (-1, 0)), "L2"),
        ("P4", ((0, 0), (-1, 0)), "L2"),
        ("P14", ((-2, 1), (-1, 0)), "L2"),
        ("Y1", ((F(-1, 2), F(1, 4)), (F(-1, 2), F(3, 4))), "L3A"),
        ("Y2", ((0, F(1, 2)), (-1, F(1, 2))), "L3A"),
        ("P7", ((-1, 1), (0, 0)), "L3A"),
        ("Y4", ((F(-1, 2), 1), (F(-1, 2), 0)), "L3A"),
        ("Y6", ((F(-1, 2), F(5, 4)), (F(-1, 2), F(-1, 4))), "L3B"),
        ("P16", ((-1, 1), (-1, 2)), "L4A"),
        ("P18", ((-1, F(3, 2)), (-1, 2)), "L4B"),
        ("P15", ((-2, 1), (-3, 2)), "L5"),
    ],
    "beta": [
        ("S", ((0, 0), (1, 1)), "A2"),
        ("R7", ((-10, 15), (9, -14)), "B5"),
        ("X1", ((0, 0), (-1, 0)), "C2"),
        ("R1", ((0, 0), (-1, 2)), "D2"),
        ("T1", ((0, -1), (0, 0)), "VA"),
        ("W", ((1, -3), (0, 0)), "I1"),
        ("Z1", ((-5, 7), (0, 0)), "K"),
        ("Q", ((0, 0), (-5, 7)), "K"),
        ("Y1", ((4, -7), (0, 0)), "L"),
    ],
}

# Exact one-step relations among named points (documented orbit structure).
_ORBIT_RELATIONS = {
    "negb": [
        ("P1", "P2"), ("P2", "P3"), ("P3", "P4"), ("P4", "P5"), ("P5", "P6"),
        ("P6", "P7"), ("P7", "P1"), ("R1", "R2"), ("R2", "P1"), ("S", "P1"),
    ],
    "alpha": [
        ("P1", "P2"), ("P2", "P3"), ("P3", "P4"), ("P4", "P5"), ("P5", "P6"),
        ("P6", "P7"), ("R1", "R2"), ("R2", "R3"), ("R3", "R4"), ("R4", "R5"),
        ("R5", "R6"), ("R6", "R7"), ("R7", "P2"), ("T1", "T2"), ("T2", "P2"),
        ("Q", "R3"),
    ],
    "band48": [
        ("X1", "Y1"), ("Y1", "P17"), ("P17", "P4"), ("X2", "Y2"), ("Y2", "P1"),
        ("X3", "P7"), ("X4", "Y4"), ("Y4", "P16"), ("P16", "P2"), ("X5", "P5"),
        ("X6", "Y6"), ("Y6", "P18"), ("P18", "P17"), ("P1", "P3"), ("P2", "P5"),
        ("P3", "P6"), ("P4", "P8"), ("P5", "P10"), ("P6", "P9"), ("P7", "P11"),
        ("P8", "P13"), ("P9", "P12"), ("P10", "P13"), ("P11", "P3"),
        ("P13", "P14"), ("P14", "P15"), ("P15", "P13"),
    ],
    "beta": [
        ("R1", "R2"), ("R2", "R3"), ("R3", "R4"), ("R4", "R5"), ("R5", "R6"),
        ("R6", "R7"), ("X1", "X2"), ("X2", "X3"), ("X3", "X4"), ("X4", "X5"),
        ("X5", "X6"), ("X6", "X7"), ("X7", "X5"), ("P1", "P2"), ("P2", "P3"),
        ("P3", "P4"), ("P4", "P1"), ("S", "P1"), ("T1", "T2"), ("T2", "X3"),
        ("W", "X5"), ("Y1", "Y2"), ("Y2", "X3"), ("Z1", "Z2"), ("Z2", "Z3"),
        ("Z3", "R7"), ("Q", "Z2"),
    ],
}


def _eval_coords(coords, b: Fraction) -> Point:
    (c0x, c1x), (c0y, c1y) = coords
    return Point(F(c0x) + F(c1x) * b, F(c0y) + F(c1y) * b)


# ---------------------------------------------------------------------------
# Planar graph object
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphEdge:
    name: str
    a: str
    b: str


@dataclass
class PlanarGraph:
    regime: str
    b: Fraction
    vertices: dict[str, Point]
    edges: list[GraphEdge]
    marks: dict[str, tuple[Point, str]] = field(default_factory=dict)
    boundary: bool = False

    def edge_segment(self, name: str) -> Segment:
        for e in self.edges:
            if e.name == name:
                return Segment(self.vertices[e.a], self.vertices[e.b])
        raise KeyError(f"no edge named {name!r}")

    def all_segments(self) -> list[Segment]:
        return [Segment(self.vertices[e.a], self.vertices[e.b]) for e in self.edges]

    def named_point(self, name: str) -> Point:
        if name in self.vertices:
            return self.vertices[name]
        if name in self.marks:
            return self.marks[name][0]
        raise KeyError(f"no point named {name!r}")

    def contains_point(self, pt: Point) -> bool:
        return any(seg.contains_point(pt) for seg in self.all_segments())

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "b": f"{self.b.numerator}/{self.b.denominator}",
            "boundary": self.boundary,
            "vertices": {n: p.to_json() for n, p in sorted(self.vertices.items())},
            "edges": [[e.name, e.a, e.b] for e in self.edges],
            "marks": {n: [p.to_json(), host] for n, (p, host) in sorted(self.marks.items())},
        }

    def to_svg(self, size: int = 640) -> str:
        pts = list(self.vertices.values()) + [p for p, _ in self.marks.values()]
        xs = [float(p.x) for p in pts]
        ys = [float(p.y) for p in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        span = max(x1 - x0, y1 - y0) or 1.0
        pad = 0.08 * span

        def sx(v: float) -> float:
            return (v - x0 + pad) / (span + 2 * pad) * size

        def sy(v: float) -> float:
            return size - (v - y0 + pad) / (span + 2 * pad) * size

        lines = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">',
            f'<!-- regime {self.regime}, b = {self.b} -->',
        ]
        for e in self.edges:
            pa, pb = self.vertices[e.a], self.vertices[e.b]
            lines.append(
                f'<line x1="{sx(float(pa.x)):.2f}" y1="{sy(float(pa.y)):.2f}" '
                f'x2="{sx(float(pb.x)):.2f}" y2="{sy(float(pb.y)):.2f}" '
                'stroke="black" stroke-width="1.5"/>'
            )
        for name, p in sorted(self.vertices.items()):
            cx, cy = sx(float(p.x)), sy(float(p.y))
            lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="black"/>')
            lines.append(f'<text x="{cx + 4:.2f}" y="{cy - 4:.2f}" font-size="11">{name}</text>')
        for name, (p, _) in sorted(self.marks.items()):
            cx, cy = sx(float(p.x)), sy(float(p.y))
            lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2" fill="crimson"/>')
            lines.append(
                f'<text x="{cx + 3:.2f}" y="{cy + 10:.2f}" font-size="9" fill="crimson">{name}</text>'
            )
        lines.append("</svg>")
        return "\n".join(lines)


def build_gamma(regime: str, b) -> PlanarGraph:
    """Instantiate the invariant graph of the regime at parameter b.

    Vertices, edges and marks come from the per-regime tables; every mark is
    checked to sit on its host edge, which catches transcription slips at
    construction time.
    """
    b = Fraction(b)
    where = regime_interval_contains(regime, b)
    if where == "outside":
        raise ValueError(f"b = {b} outside the {regime} regime")
    vertices = {n: _eval_coords(c, b) for n, c in _VERTICES[regime].items()}
    edges = [GraphEdge(*t) for t in _EDGES[regime]]
    graph = PlanarGraph(regime, b, vertices, edges, {}, boundary=(where == "boundary"))
    for name, coords, host in _MARKS[regime]:
        pt = _eval_coords(coords, b)
        if not graph.edge_segment(host).contains_point(pt):
            raise AssertionError(f"mark {name} fell off edge {host} at b = {b}")
        graph.marks[name] = (pt, host)
    return graph


# ---------------------------------------------------------------------------
# Invariance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceReport:
    ok: bool
    uncovered_segments: tuple[Segment, ...]
    uncovered_points: tuple[Point, ...]


def _line_chart(key) -> str:
    a, bb, _ = key
    return "y" if (a, bb) == (1, 0) else "x"


def _chart_value(key, pt: Point) -> Fraction:
    return pt.y if _line_chart(key) == "y" else pt.x


def _point_on_line_at(key, t: Fraction) -> Point:
    a, bcoef, c = key
    if _line_chart(key) == "y":
        return Point(c / a, t)
    if bcoef == 0:
        raise ValueError("line has no x chart")
    return Point(t, (c - a * t) / bcoef)


def verify_invariance(graph: PlanarGraph, params: Params) -> InvarianceReport:
    """Exact check that F maps the graph into itself.

    Each edge is split at the axes, every affine piece is pushed through F,
    and the image is subtracted from the union of collinear graph edges;
    whatever remains is reported, not raised.
    """
    if params.a != -1:
        raise ValueError("invariance tables assume a = -1")
    by_line: dict[tuple, list[tuple[Fraction, Fraction]]] = {}
    for seg in graph.all_segments():
        key = seg.line_key()
        lo = _chart_value(key, seg.p)
        hi = _chart_value(key, seg.q)
        by_line.setdefault(key, []).append((min(lo, hi), max(lo, hi)))
    uncovered: list[Segment] = []
    bad_points: list[Point] = []
    for seg in graph.all_segments():
        for piece in iterate_segment_pieces(params, seg, 1):
            p0, p1 = piece.at(piece.t0), piece.at(piece.t1)
            if piece.is_collapsed:
                if not graph.contains_point(p0):
                    bad_points.append(p0)
                continue
            img = Segment(p0, p1)
            key = img.line_key()
            lo = _chart_value(key, p0)
            hi = _chart_value(key, p1)
            lo, hi = min(lo, hi), max(lo, hi)
            for glo, ghi in _subtract_union(lo, hi, by_line.get(key, [])):
                uncovered.append(Segment(_point_on_line_at(key, glo), _point_on_line_at(key, ghi)))
    return InvarianceReport(not uncovered and not bad_points, tuple(uncovered), tuple(bad_points))


def _subtract_union(lo: Fraction, hi: Fraction, cover: Iterable[tuple[Fraction, Fraction]]):
    """Parts of [lo, hi] not covered by the union of the given intervals."""
    gaps = [(lo, hi)]
    for clo, chi in sorted(cover):
        nxt = []
        for glo, ghi in gaps:
            if chi <= glo or ghi <= clo:
                nxt.append((glo, ghi))
                continue
            if glo < clo:
                nxt.append((glo, clo))
            if chi < ghi:
                nxt.append((chi, ghi))
        gaps = nxt
        if not gaps:
            break
    return [(a, b) for a, b in gaps if a < b]


# ---------------------------------------------------------------------------
# Marked-point orbit relations
# ---------------------------------------------------------------------------


def orbit_marks(regime: str, b) -> list[tuple[str, Point, str]]:
    """Documented one-step relations F(named point) = named point, verified exactly.

    A failing relation raises: it means the coordinate tables disagree with
    the map, i.e. a transcription bug.
    """
    graph = build_gamma(regime, b)
    params = Params.standard(graph.b)
    out = []
    for src, dst in _ORBIT_RELATIONS[regime]:
        p_src = graph.named_point(src)
        p_dst = graph.named_point(dst)
        image = apply_F(params, p_src)
        if image != p_dst:
            raise AssertionError(
                f"orbit relation {src} -> {dst} fails at b = {graph.b}: "
                f"F({src}) = {image}, expected {p_dst}"
            )
        out.append((src, p_src, dst))
    return out
