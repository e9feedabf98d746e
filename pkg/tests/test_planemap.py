import random
from fractions import Fraction as F

import pytest

from pwldyn.graphs import build_gamma
from pwldyn.planemap import (
    Params,
    Segment,
    apply_F,
    detect_plateaus,
    iterate_F,
    point,
    quadrant_affine,
    quadrant_of,
    restrict_iterate_to_segment,
    scale_conjugate_check,
    segment,
)

RNG = random.Random(424242)


def rand_q(lo=-10, hi=10) -> F:
    return F(RNG.randint(lo * 100, hi * 100), RNG.randint(1, 100))


def test_apply_F_examples():
    assert apply_F(Params.standard(7), point(0, 0)) == point(-1, 7)
    assert apply_F(Params.standard(-3), point(3, -1)) == point(3, -1)
    assert apply_F(Params.standard(F(-4, 5)), point(0, F(1, 5))) == point(F(-6, 5), -1)


def test_quadrant_of_examples_and_tie_break():
    assert quadrant_of(point(1, 1)) == 1
    assert quadrant_of(point(0, 0)) == 1
    assert quadrant_of(point(-3, -1)) == 3
    assert quadrant_of(point(0, -1)) == 3  # lowest containing index


def test_apply_F_equals_quadrant_affine():
    params = Params.standard(F(11, 3))
    for _ in range(300):
        pt = point(rand_q(), rand_q())
        q = quadrant_of(pt)
        assert quadrant_affine(params, q).apply(pt) == apply_F(params, pt)


def test_quadrant_affines_agree_on_boundaries():
    params = Params.standard(F(-7, 5))
    for _ in range(100):
        y = rand_q()
        a = quadrant_affine(params, 1).apply(point(0, abs(y)))
        b = quadrant_affine(params, 2).apply(point(0, abs(y)))
        assert a == b
        x = rand_q()
        c = quadrant_affine(params, 1).apply(point(abs(x), 0))
        d = quadrant_affine(params, 4).apply(point(abs(x), 0))
        assert c == d


def test_scale_conjugation():
    assert scale_conjugate_check(Params(F(-1), F(5)), F(1), point(2, 3))
    assert scale_conjugate_check(Params(F(-1), F(5)), F(2), point(3, -7))
    assert scale_conjugate_check(Params(F(-1), F(-13, 16)), F(137), point(1, 1))
    for _ in range(100):
        params = Params(rand_q(), rand_q())
        lam = abs(rand_q()) + F(1, 7)
        assert scale_conjugate_check(params, lam, point(rand_q(), rand_q()))
    with pytest.raises(ValueError):
        scale_conjugate_check(Params.standard(1), F(0), point(1, 1))


def test_restrict_f3_bottom_edge():
    # Along y = -1 between -b/2 and 0 the third iterate is a single branch.
    m = restrict_iterate_to_segment(Params.standard(5), segment((F(-5, 2), -1), (0, -1)), 3)
    assert m.chart == "x"
    assert len(m.pieces) == 1
    assert (m.pieces[0].slope, m.pieces[0].offset) == (4, 3)


def test_restrict_identity_k0():
    m = restrict_iterate_to_segment(Params.standard(5), segment((1, 2), (3, 7)), 0)
    assert len(m.pieces) == 1
    assert (m.pieces[0].slope, m.pieces[0].offset) == (1, 0)


def test_restrict_edge_A_return_map():
    m = restrict_iterate_to_segment(Params.standard(-3), segment((1, -3), (1, -1)), 7)
    assert m.chart == "y"
    assert m.breakpoints == [F(-5, 4), F(-9, 8)]
    assert [(p.slope, p.offset) for p in m.pieces] == [(0, -3), (16, 17), (0, -1)]


def test_restrict_matches_pointwise_iteration():
    params = Params.standard(F(-163, 200))
    seg = segment((F(-9) * F(-163, 200) - 8, F(-8) * F(-163, 200) - 7), (F(163, 200), 1))
    m = restrict_iterate_to_segment(params, seg, 6)
    lo, hi = seg.chart_interval()
    for _ in range(1000):
        t = lo + (hi - lo) * F(RNG.randint(0, 10**6), 10**6)
        pt = seg.point_at_chart(t)
        img = iterate_F(params, pt, 6)
        assert m(t) == img.x  # chart of the slope-one segment is x


def test_restrict_rejects_noncollinear_image():
    with pytest.raises(ValueError):
        restrict_iterate_to_segment(Params.standard(5), segment((1, -3), (1, -1)), 2)


def test_detect_plateaus_negb():
    g = build_gamma("negb", -3)
    plats = detect_plateaus(g)
    assert plats == [Segment(point(2, 0), point(10, 8))]


def test_detect_plateaus_square_in_q2_empty():
    square = [
        segment((-3, 1), (-1, 1)),
        segment((-1, 1), (-1, 3)),
        segment((-1, 3), (-3, 3)),
        segment((-3, 3), (-3, 1)),
    ]
    assert detect_plateaus(square) == []


def test_detect_plateaus_band48_brute_force_oracle():
    from pwldyn.planemap import iterate_segment_pieces

    b = F(5)
    g = build_gamma("band48", b)
    params = Params.standard(b)
    brute = []
    for seg in g.all_segments():
        for piece in iterate_segment_pieces(params, seg, 1):
            if piece.is_collapsed and piece.t0 != piece.t1:
                axis = seg.chart_axis()
                brute.append(
                    Segment(seg.point_at_chart(piece.t0), seg.point_at_chart(piece.t1))
                )

    def key(s: Segment):
        lo, hi = s.chart_interval()
        return (s.line_key(), lo, hi)

    assert sorted(map(key, detect_plateaus(g))) == sorted(map(key, brute))


def test_negb_periodic_structure():
    for b in (F(-3), F(-5, 2), F(-71, 9)):
        params = Params.standard(b)
        fixed = point(-b, -1)
        assert apply_F(params, fixed) == fixed
        start = point(-b - F(16, 15), F(-1, 15))
        orbit = [start]
        for _ in range(7):
            orbit.append(apply_F(params, orbit[-1]))
        assert orbit[7] == orbit[0]
        assert len(set(orbit[:7])) == 7


def test_fifth_iterate_lands_on_graph():
    for b in (F(9, 2), F(5), F(31, 4)):
        g = build_gamma("band48", b)
        params = Params.standard(b)
        for _ in range(40):
            pt = point(rand_q(-40, 40), rand_q(-40, 40))
            assert g.contains_point(iterate_F(params, pt, 5))


def test_segment_helpers():
    s = segment((0, 0), (4, 2))
    assert s.chart_axis() == "x"
    assert s.chart_interval() == (0, 4)
    assert s.point_at_chart(F(2)) == point(2, 1)
    assert s.contains_point(point(2, 1))
    assert not s.contains_point(point(2, 2))
    with pytest.raises(ValueError):
        Segment(point(1, 1), point(1, 1))
