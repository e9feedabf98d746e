"""One-dimensional piecewise-affine maps with rational breakpoints.

Supports exact iteration, itineraries, composition, parameter-affine
families (offsets and breakpoints of the form c0 + c1*d), periodic-orbit
closing windows in the parameter, covering digraphs induced by periodic
orbits, and the exact Lebesgue measure of iterated preimages of the
constancy pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from pwldyn.polys import RootInterval
from pwldyn.rationals import rational_str


@dataclass(frozen=True)
class ParamAffine:
    """Value c0 + c1*d for a map-family parameter d."""

    c0: Fraction
    c1: Fraction

    def at(self, d: Fraction) -> Fraction:
        return self.c0 + self.c1 * d

    def __add__(self, other):
        o = _as_param(other)
        return ParamAffine(self.c0 + o.c0, self.c1 + o.c1)

    def __sub__(self, other):
        o = _as_param(other)
        return ParamAffine(self.c0 - o.c0, self.c1 - o.c1)

    def scaled(self, k: Fraction) -> "ParamAffine":
        return ParamAffine(self.c0 * k, self.c1 * k)


def _as_param(v) -> ParamAffine:
    if isinstance(v, ParamAffine):
        return v
    return ParamAffine(Fraction(v), Fraction(0))


def _concrete(v, d: Fraction | None = None) -> Fraction:
    if isinstance(v, ParamAffine):
        if d is None:
            raise ValueError("parameter-affine value needs a concrete d")
        return v.at(d)
    return Fraction(v)


@dataclass(frozen=True)
class Piece:
    slope: Fraction
    offset: Fraction | ParamAffine
    name: str | None = None

    def apply(self, x: Fraction) -> Fraction:
        return self.slope * x + self.offset

    @property
    def is_constant(self) -> bool:
        return self.slope == 0


@dataclass(frozen=True)
class Itinerary:
    symbols: tuple[str, ...]

    def __str__(self) -> str:
        return "".join(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @classmethod
    def parse(cls, text: str) -> "Itinerary":
        return cls(tuple(text))


class PiecewiseAffine1D:
    """Map of [lo, hi] given by `pieces[i]` on [breakpoints[i-1], breakpoints[i]].

    There is one more piece than breakpoints.  Offsets and breakpoints may be
    `ParamAffine`, making the object a one-parameter family; `at(d)` then
    produces the concrete map.
    """

    def __init__(self, lo, hi, breakpoints, pieces: Sequence[Piece], chart: str | None = None):
        if len(pieces) != len(breakpoints) + 1:
            raise ValueError("piece count must be breakpoint count + 1")
        self.lo = lo
        self.hi = hi
        self.breakpoints = list(breakpoints)
        self.pieces = list(pieces)
        self.chart = chart

    # -- family handling ---------------------------------------------------

    @property
    def is_family(self) -> bool:
        vals = [self.lo, self.hi, *self.breakpoints] + [p.offset for p in self.pieces]
        return any(isinstance(v, ParamAffine) for v in vals)

    def at(self, d: Fraction) -> "PiecewiseAffine1D":
        """Concrete map obtained by substituting the family parameter."""
        return PiecewiseAffine1D(
            _concrete(self.lo, d),
            _concrete(self.hi, d),
            [_concrete(b, d) for b in self.breakpoints],
            [Piece(p.slope, _concrete(p.offset, d), p.name) for p in self.pieces],
            chart=self.chart,
        )

    # -- concrete evaluation ------------------------------------------------

    def _require_concrete(self):
        if self.is_family:
            raise ValueError("operation requires concrete offsets (call .at(d))")

    def cut_points(self) -> list[Fraction]:
        self._require_concrete()
        return [self.lo, *self.breakpoints, self.hi]

    def piece_index_at(self, x: Fraction, tie_break: str = "plateau") -> int:
        """Index of the piece containing x; ties resolved per `tie_break`.

        tie_break: "left", "right", or "plateau" (prefer a constancy piece
        at its boundary; otherwise take the left piece).
        """
        self._require_concrete()
        if not self.lo <= x <= self.hi:
            raise ValueError(f"{x} outside domain [{self.lo}, {self.hi}]")
        hits = []
        cuts = self.cut_points()
        for i, piece in enumerate(self.pieces):
            if cuts[i] <= x <= cuts[i + 1]:
                hits.append(i)
        if len(hits) == 1:
            return hits[0]
        if tie_break == "left":
            return hits[0]
        if tie_break == "right":
            return hits[-1]
        for i in hits:
            if self.pieces[i].is_constant:
                return i
        return hits[0]

    def __call__(self, x: Fraction) -> Fraction:
        self._require_concrete()
        return self.pieces[self.piece_index_at(x)].apply(Fraction(x))

    def compose(self, inner: "PiecewiseAffine1D") -> "PiecewiseAffine1D":
        """Exact composition self(inner(x)) on inner's domain."""
        self._require_concrete()
        inner._require_concrete()
        cuts = set(inner.cut_points())
        # Pull back self's breakpoints through every non-constant inner piece.
        icuts = inner.cut_points()
        for i, piece in enumerate(inner.pieces):
            if piece.is_constant:
                continue
            for b in self.breakpoints:
                t = (Fraction(b) - piece.offset) / piece.slope
                if icuts[i] < t < icuts[i + 1]:
                    cuts.add(t)
        points = sorted(cuts)
        bps = points[1:-1]
        pieces = []
        for lo, hi in zip(points, points[1:]):
            mid = (lo + hi) / 2
            ip = inner.pieces[inner.piece_index_at(mid)]
            y = ip.apply(mid)
            if not self.lo <= y <= self.hi:
                raise ValueError("inner image escapes outer domain")
            op = self.pieces[self.piece_index_at(y)]
            pieces.append(Piece(op.slope * ip.slope, op.slope * ip.offset + op.offset))
        return merged(PiecewiseAffine1D(points[0], points[-1], bps, pieces, chart=inner.chart))

    def to_json(self) -> dict:
        def val(v):
            if isinstance(v, ParamAffine):
                return {"c0": rational_str(v.c0), "c1": rational_str(v.c1)}
            return rational_str(Fraction(v))

        return {
            "domain": [val(self.lo), val(self.hi)],
            "breakpoints": [val(b) for b in self.breakpoints],
            "pieces": [
                {"slope": rational_str(p.slope), "offset": val(p.offset), "name": p.name}
                for p in self.pieces
            ],
            "chart": self.chart,
        }


def _merge(pieces: list[Piece], bps: list[Fraction]) -> tuple[list[Piece], list[Fraction]]:
    """Merge adjacent pieces with identical affine data."""
    out_p = [pieces[0]]
    out_b: list[Fraction] = []
    for b, p in zip(bps, pieces[1:]):
        prev = out_p[-1]
        if p.slope == prev.slope and p.offset == prev.offset:
            continue
        out_b.append(b)
        out_p.append(p)
    return out_p, out_b


def merged(m: PiecewiseAffine1D) -> PiecewiseAffine1D:
    pieces, bps = _merge(m.pieces, list(m.breakpoints))
    return PiecewiseAffine1D(m.lo, m.hi, bps, pieces, chart=m.chart)


def conjugate_affine(m: PiecewiseAffine1D, p: Fraction, q: Fraction) -> PiecewiseAffine1D:
    """Conjugate by h(x) = p*x + q: returns h o m o h^-1 on the image chart."""
    m._require_concrete()
    if p == 0:
        raise ValueError("conjugating map must be invertible")
    cuts = [p * c + q for c in m.cut_points()]
    pieces = [Piece(pc.slope, p * Fraction(pc.offset) + q * (1 - pc.slope), pc.name) for pc in m.pieces]
    if p < 0:
        cuts.reverse()
        pieces.reverse()
    return PiecewiseAffine1D(cuts[0], cuts[-1], cuts[1:-1], pieces, chart=m.chart)


def iterate_point(m: PiecewiseAffine1D, x0, k: int) -> list[Fraction]:
    """Exact orbit [x0, f(x0), ..., f^k(x0)]; errors if an iterate escapes."""
    m._require_concrete()
    x = Fraction(x0)
    orbit = [x]
    for _ in range(k):
        if not m.lo <= x <= m.hi:
            raise ValueError(f"iterate {x} escaped domain [{m.lo}, {m.hi}]")
        x = m(x)
        orbit.append(x)
    if not m.lo <= orbit[-1] <= m.hi:
        raise ValueError(f"iterate {orbit[-1]} escaped domain [{m.lo}, {m.hi}]")
    return orbit


def itinerary_of(m: PiecewiseAffine1D, x0, k: int, tie_break: str = "plateau") -> Itinerary:
    """Symbols of x0..f^(k)(x0) by containing piece (k+1 symbols)."""
    orbit = iterate_point(m, x0, k)
    symbols = []
    for x in orbit:
        i = m.piece_index_at(x, tie_break=tie_break)
        symbols.append(m.pieces[i].name or str(i))
    return Itinerary(tuple(symbols))


# ---------------------------------------------------------------------------
# Parameter windows for patterned periodic orbits
# ---------------------------------------------------------------------------


def closing_window(
    family: PiecewiseAffine1D,
    pattern: Itinerary,
    x0,
    d_range: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1)),
) -> tuple[Fraction, Fraction] | None:
    """Admissible parameter interval for a periodic orbit with the given pattern.

    The orbit of x0 is driven through the pieces named by `pattern`
    symbolically in d (each iterate stays affine in d); requiring every
    iterate to lie in its piece's closed span yields linear inequalities in
    d whose intersection is returned, or None when empty.  The pattern must
    end at the constancy symbol, whose image closes the orbit at x0.
    """
    if not family.pieces[-1].name:
        raise ValueError("family pieces must be named")
    by_name = {p.name: i for i, p in enumerate(family.pieces)}
    if pattern.symbols[-1] != _plateau_name(family):
        raise ValueError("pattern must end at the constancy piece")
    lo_d, hi_d = d_range

    def bound(v) -> ParamAffine:
        return _as_param(v)

    cuts = [family.lo, *family.breakpoints, family.hi]
    x = _as_param(Fraction(x0))
    for sym in pattern.symbols:
        if sym not in by_name:
            raise ValueError(f"symbol {sym!r} is not a piece name")
        i = by_name[sym]
        lo_b, hi_b = bound(cuts[i]), bound(cuts[i + 1])
        # lo_b <= x and x <= hi_b, all affine in d.
        for a, b in ((lo_b, x), (x, hi_b)):
            # a <= b  <=>  (a.c1-b.c1)*d <= b.c0-a.c0
            k = a.c1 - b.c1
            c = b.c0 - a.c0
            if k == 0:
                if c < 0:
                    return None
            elif k > 0:
                hi_d = min(hi_d, c / k)
            else:
                lo_d = max(lo_d, c / k)
            if lo_d > hi_d:
                return None
        piece = family.pieces[i]
        x = _as_param(piece.offset) + ParamAffine(piece.slope * x.c0, piece.slope * x.c1)
    return lo_d, hi_d


def _plateau_name(family: PiecewiseAffine1D) -> str:
    names = [p.name for p in family.pieces if p.is_constant]
    if len(names) != 1:
        raise ValueError("family must have exactly one constancy piece")
    return names[0]


# ---------------------------------------------------------------------------
# Covering digraph induced by a periodic orbit
# ---------------------------------------------------------------------------


def markov_radius_from_orbit(m: PiecewiseAffine1D, orbit: Sequence[Fraction], digits: int = 12) -> RootInterval:
    """Spectral-radius enclosure of the covering digraph cut at an exact periodic orbit.

    The domain is partitioned at the orbit points and the map's breakpoints;
    constancy intervals are dropped (they feed no itinerary growth), every
    remaining interval is monotone, and adjacency is exact covering.
    """
    from pwldyn.markov import digraph_from_edges, spectral_radius

    m._require_concrete()
    pts = sorted(set(Fraction(x) for x in orbit))
    period = len(pts)
    full = iterate_point(m, orbit[0], period)
    if full[period] != full[0] or sorted(set(full[:period])) != pts:
        raise ValueError("orbit is not exactly periodic under the map")
    cuts = sorted(set(pts) | set(m.breakpoints) | {m.lo, m.hi})
    cut_set = set(cuts)
    intervals = []
    for a, b in zip(cuts, cuts[1:]):
        if a == b:
            continue
        mid = (a + b) / 2
        piece = m.pieces[m.piece_index_at(mid)]
        if not piece.is_constant:
            intervals.append((a, b, piece))
    labels = [f"I{i}" for i in range(len(intervals))]
    edges = []
    for i, (a, b, piece) in enumerate(intervals):
        fa, fb = piece.apply(a), piece.apply(b)
        # The orbit partition must be genuinely Markov: monotone cells map
        # onto exact unions of cells, so the 0/1 digraph radius is the truth.
        if fa not in cut_set or fb not in cut_set:
            raise ValueError("orbit points do not induce a Markov partition")
        img_lo, img_hi = min(fa, fb), max(fa, fb)
        for j, (c, d, _) in enumerate(intervals):
            if img_lo <= c and d <= img_hi:
                edges.append((labels[i], labels[j]))
    dg = digraph_from_edges(labels, edges, mode="markov")
    return spectral_radius(dg, digits)


# ---------------------------------------------------------------------------
# Measure of plateau preimages
# ---------------------------------------------------------------------------


def _interval_union(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    if not intervals:
        return []
    ivs = sorted(intervals)
    out = [ivs[0]]
    for lo, hi in ivs[1:]:
        plo, phi = out[-1]
        if lo <= phi:
            out[-1] = (plo, max(phi, hi))
        else:
            out.append((lo, hi))
    return out


def uncaptured_intervals(m: PiecewiseAffine1D, depth: int) -> list[tuple[Fraction, Fraction]]:
    """Subset of the domain that avoids every constancy piece for `depth` steps.

    U_0 is the whole domain; U_{n+1} = (non-constancy pieces) intersect
    preimage of U_n.  All preimages are exact interval unions.
    """
    m._require_concrete()
    current = [(Fraction(m.lo), Fraction(m.hi))]
    cuts = m.cut_points()
    for _ in range(depth):
        nxt: list[tuple[Fraction, Fraction]] = []
        for i, piece in enumerate(m.pieces):
            if piece.is_constant:
                continue
            a, b = cuts[i], cuts[i + 1]
            for lo, hi in current:
                # preimage of [lo, hi] under x -> slope*x+offset, inside [a, b]
                t0 = (lo - piece.offset) / piece.slope
                t1 = (hi - piece.offset) / piece.slope
                plo, phi = (t0, t1) if t0 <= t1 else (t1, t0)
                ilo, ihi = max(a, plo), min(b, phi)
                if ilo < ihi:
                    nxt.append((ilo, ihi))
        current = _interval_union(nxt)
        if not current:
            break
    return current


def plateau_preimage_measure(m: PiecewiseAffine1D, depth: int) -> Fraction:
    """Exact measure of points that reach a constancy piece within `depth` steps."""
    if not any(p.is_constant for p in m.pieces):
        raise ValueError("map has no constancy piece")
    total = Fraction(m.hi) - Fraction(m.lo)
    left = sum((hi - lo for lo, hi in uncaptured_intervals(m, depth)), Fraction(0))
    return total - left
