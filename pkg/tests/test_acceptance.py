"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see every line.  Values
taken from the reference table are checked within one unit of the fifth
significant digit; enclosure and rational checks are exact.

Criterion 1 is expected to fail on five cells of the summary table: the
certified values (confirmed by three independent computations: exact
bisection of the class polynomials, the digraphs rebuilt from the invariant
graph, and floating-point root refinement) contradict the reference digits
of the level-2 rows by 2 to 4 units in the fifth digit.  The test states
the criterion literally and reports the discrepancy rather than repeating
the wrong digits.
"""

import random
import time
from fractions import Fraction as F

from pwldyn import band48, certify, graphs, markov, measure
from pwldyn.piecewise import iterate_point
from pwldyn.planemap import Params, detect_plateaus, restrict_iterate_to_segment, segment
from pwldyn.polys import isolate_unique_positive_root
from pwldyn.rationals import format_decimal, parse_rational


def report(num: int, ok: bool, desc: str, detail: str = ""):
    line = f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {desc}"
    if detail:
        line += f" [{detail}]"
    print(line)


def within_five_digits(bracket: tuple[F, F], listed: str) -> bool:
    target = parse_rational(listed)
    tol = F(1, 10**5)
    lo, hi = bracket
    return abs(lo - target) < tol and abs(hi - target) < tol


TABLE_TARGETS = [
    # set, interval lo, hi, entropy cells (one for exact, two for bounds)
    ("S0", "4", "14/3", ("0.14717", "0.28888")),
    ("T0", "14/3", "21/4", ("0.20844",)),
    ("U0", "21/4", "11/2", ("0.14717", "0.23031")),
    ("V0", "11/2", "20/3", ("0.18600",)),
    ("S1", "20/3", "34/5", ("0.11977", "0.21132")),
    ("T1", "34/5", "85/12", ("0.16389",)),
    ("U1", "85/12", "43/6", ("0.11977", "0.18155")),
    ("V1", "43/6", "84/11", ("0.15051",)),
    ("S2", "84/11", "682/89", ("0.10238", "0.17042")),
    ("T2", "682/89", "31/4", ("0.13698",)),
    ("U2", "31/4", "171/22", ("0.10238", "0.15186")),
    ("V2", "171/22", "340/43", ("0.12795",)),
]


def test_criterion_01_table_reproduction():
    t0 = time.perf_counter()
    rows = band48.table_rows()
    elapsed = time.perf_counter() - t0
    mismatches = []
    for (name, lo_s, hi_s, cells), row in zip(TABLE_TARGETS, rows):
        assert row["set"] == name
        lc = band48.LevelClass(int(name[1:]), name[0])
        lo, hi, _, _ = lc.interval()
        if (lo, hi) != (parse_rational(lo_s), parse_rational(hi_s)):
            mismatches.append(f"{name}: interval {lo}, {hi}")
            continue
        res = band48.entropy_or_bounds((lo + hi) / 2, 7)
        brackets = (res.ln_lo,) if len(cells) == 1 else (res.ln_lo, res.ln_hi)
        for bracket, listed in zip(brackets, cells):
            if not within_five_digits(bracket, listed):
                got = format_decimal(bracket[0], 5)
                mismatches.append(f"{name}: listed {listed}, certified {got}")
    ok = not mismatches and elapsed < 5.0
    report(1, ok, "summary table matches the 12 reference rows",
           "; ".join(mismatches) or f"{elapsed:.2f}s")
    assert elapsed < 5.0
    assert ok, (
        "reference digits contradicted by certified computation: "
        + "; ".join(mismatches)
    )


def test_criterion_02_first_level_roots():
    targets = {
        band48.poly_lower(0): "1.15855",
        band48.poly_upper_s(0): "1.33493",
        band48.poly_exact_t(0): "1.23175",
        band48.poly_upper_u(0): "1.25898",
        band48.poly_exact_v(0): "1.20443",
    }
    ok = True
    for poly, text in targets.items():
        ri = isolate_unique_positive_root(poly, 5)
        ok &= ri.width < F(1, 10**5)
        ri = ri.refined(8)
        ok &= format_decimal(ri.lo, 5) == format_decimal(ri.hi, 5) == text
    report(2, ok, "first-level root enclosures at 5-digit width")
    assert ok


ALPHA_DIGITS = "-0.817001660127394075579379106922368833240"
BETA_DIGITS = "0.68993242820457428670048891295078173870526"
BETA_DIGITS_LONG = "0.6899324282045742867004889129507817387052603507745"


def test_criterion_03_alpha_certification():
    t0 = time.perf_counter()
    ci = certify.certify("alpha", 24, 32)
    elapsed = time.perf_counter() - t0
    ok = (
        ci.hi == F(-1049417824596806956103568, 1284474531463219438945271)
        and ci.lo == F(-140850476140085945702816746162288, 172399253286857828660669132569609)
        and ci.width < F(4, 10**40)
        and certify.digits_report(ci) == ALPHA_DIGITS
        and certify.verify_certificate(ci)
        and elapsed < 60.0
    )
    report(3, ok, "alpha bracket at depths (24, 32)", f"{elapsed:.2f}s")
    assert ok


def test_criterion_04_beta_certification():
    ci = certify.certify("beta", 24, 32)
    rep = certify.digits_report(ci)
    ok = (
        ci.hi == F(945506314303393205598153, 1370433212950874384162254)
        and ci.lo
        == F(798396920638883099973166531706985228123, 1157210312199077596904301690272087447914)
        and ci.width < F(5, 10**50)
        and certify.digits_report(ci, limit=41) == BETA_DIGITS
        and rep.startswith(BETA_DIGITS)
        and rep == BETA_DIGITS_LONG
        and certify.verify_certificate(ci)
    )
    report(4, ok, "beta bracket at depths (24, 32)")
    assert ok


def test_criterion_05_intermediate_certificates():
    c34 = certify.certify("alpha", 3, 4)
    c68 = certify.certify("alpha", 6, 8)
    orbit = iterate_point(certify.phi_family().at(F(7295, 8191)), 1, 6)
    ok = (
        c34.hi == F(-888, 1087)
        and c34.lo == F(-7112, 8705)
        and c68.hi == F(-910224, 1114103)
        and c68.lo == F(-116508784, 142605321)
        and orbit == [1, 0, F(7295, 8191), F(7168, 8191), F(8184, 8191), F(56, 8191), 1]
    )
    report(5, ok, "intermediate certificates and the 6-point orbit")
    assert ok


def test_criterion_06_continuity_at_right_endpoint():
    ok = True
    for eps in (F(1, 10), F(1, 100), F(1, 1000)):
        n = band48.continuity_level_bound(eps)
        ok &= band48.upper_root_below(n, eps)
        ok &= band48.upper_root_below(n + 5, eps)
    # root ordering pins the other four families below the certified one
    ok &= band48.verify_root_ordering(8)
    report(6, ok, "entropy bound drops below ln(1+eps) beyond the computed level")
    assert ok


def test_criterion_07_rome_correctness():
    ok = True
    # the tabulated digraphs: four cases at levels 0..2 (lower and upper)
    for n in range(3):
        for letter in "STUV":
            lo, hi, _, _ = band48.LevelClass(n, letter).interval()
            lower, upper, _ = band48.cover_digraphs((lo + hi) / 2)
            for dg in (lower, upper):
                rome = markov.find_rome(dg)
                ok &= markov.rome_char_poly_full(dg, rome) == markov.direct_char_poly(dg)
    # the circle regime's seven-cycle
    labels = list("ABCDEGH")
    seven = markov.digraph_from_edges(labels, list(zip(labels, labels[1:] + labels[:1])))
    ok &= markov.rome_char_poly_full(seven, markov.find_rome(seven)) == markov.direct_char_poly(seven)
    # 100 random digraphs, and float power iteration within 1e-9
    rng = random.Random(1234)
    for _ in range(100):
        size = rng.randint(1, 8)
        labs = [f"v{i}" for i in range(size)]
        edges = [(labs[i], labs[j]) for i in range(size) for j in range(size) if rng.random() < 0.3]
        dg = markov.digraph_from_edges(labs, edges)
        ok &= markov.rome_char_poly_full(dg, markov.find_rome(dg)) == markov.direct_char_poly(dg)
        r = markov.spectral_radius(dg, 12, check=False)
        est = markov._power_iteration_radius(dg.adjacency)
        ok &= abs(est - float((r.lo + r.hi) / 2)) <= 1e-9 + float(r.hi - r.lo)
    report(7, ok, "rome characteristic polynomials and radius cross-checks")
    assert ok


def test_criterion_08_invariance():
    rng = random.Random(9999)
    ok = True
    spans = {
        "negb": lambda u: -2 - 9 * u,
        "alpha": lambda u: F(-1) + u * F(1, 4),
        "beta": lambda u: F(2, 3) + u * F(1, 21),
        "band48": lambda u: 4 + 4 * u,
    }
    for regime, gen in spans.items():
        for _ in range(25):
            b = gen(F(rng.randint(1, 99999), 100001))
            g = graphs.build_gamma(regime, b)
            ok &= graphs.verify_invariance(g, Params.standard(b)).ok
    for _ in range(10):
        b = -2 - 9 * F(rng.randint(1, 99999), 100001)
        ok &= len(detect_plateaus(graphs.build_gamma("negb", b))) == 1
    report(8, ok, "invariance at 25 random parameters per regime; one circle plateau")
    assert ok


def test_criterion_09_induced_maps():
    ok = True
    rng = random.Random(55)
    for _ in range(10):
        b = 4 + 4 * F(rng.randint(1, 9999), 10001)
        m = restrict_iterate_to_segment(Params.standard(b), segment((-b / 2, -1), (0, -1)), 3)
        ok &= len(m.pieces) == 1 and (m.pieces[0].slope, m.pieces[0].offset) == (4, b - 2)

    m = restrict_iterate_to_segment(Params.standard(-3), segment((1, -3), (1, -1)), 7)
    ok &= m.breakpoints == [F(-5, 4), F(-9, 8)]
    ok &= [(p.slope, p.offset) for p in m.pieces] == [(0, -3), (16, 17), (0, -1)]

    for b in (F(34497, 50000), F(137989, 200000)):
        k1 = certify.build_k1(b)
        via_f = certify.k1_from_return_map(b)
        ok &= [F(x) for x in via_f.breakpoints] == [F(x) for x in k1.breakpoints]
        ok &= [(p.slope, F(p.offset)) for p in via_f.pieces] == [
            (p.slope, F(p.offset)) for p in k1.pieces
        ]
        ok &= (F(via_f.lo), F(via_f.hi)) == (F(k1.lo), F(k1.hi))
    report(9, ok, "induced one-dimensional maps match their closed forms")
    assert ok


def test_criterion_10_full_measure_decay():
    prof = measure.edge_capture_profile("negb", -3, "A", 10)
    ok = all(prof.uncaptured(n) == F(2) ** (1 - 4 * n) for n in range(11))
    rep = measure.full_measure_report("negb", -3, 12)
    ok &= all(rep.uncaptured_total[i + 1] < rep.uncaptured_total[i] for i in range(12))
    ok &= rep.uncaptured_fraction(12) < F(1, 10**12)
    report(10, ok, "plateau preimages exhaust the circle graph geometrically")
    assert ok


def test_criterion_11_orderings_to_level_50():
    ok = band48.verify_root_ordering(50)
    ok &= band48.roots_strictly_decreasing(50)
    report(11, ok, "root chain ordering and monotone decrease for levels <= 50")
    assert ok
