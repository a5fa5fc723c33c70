"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that the conftest hook prints in the
terminal summary, then asserts. Thresholds here are the targets as stated;
a criterion the implementation cannot meet fails rather than being relaxed.
"""

import csv
import io
import itertools
import math
import time
from fractions import Fraction

import pytest

from conftest import record
from ic_feedback.cli import main
from ic_feedback.gaussian_ach import (achievable_by_regime, achievable_sumrate,
                                      regime_gap_bound)
from ic_feedback.gaussian_bounds import symmetric_sumrate_outer
from ic_feedback.ldic_capacity import (appendixB_region, elgamal_costa_region,
                                       symmetric_sumrate, symmetric_sumrate_branches,
                                       theorem3_region)
from ic_feedback.ldic_model import LdicParams
from ic_feedback.ldic_sim import build_scheme, run_motivating_example, simulate
from ic_feedback.region_core import (RateConstraint, RateRegion, contains,
                                     max_weighted, regions_equal, vertices)

GAINS = list(itertools.product(range(7), repeat=4))
FEEDBACK = (0, 1, 2, 4, 8)
FB_PAIRS = list(itertools.product(FEEDBACK, repeat=2))


def db(x):
    return 10 ** (x / 10)


def test_criterion_1_motivating_example():
    t = time.perf_counter()
    bad = []
    for B in (3, 10, 100):
        res = run_motivating_example(B)
        want = (Fraction(4 * (B - 2), B), Fraction(B - 2, B))
        if not res.decode_ok or res.achieved != want:
            bad.append((B, res.achieved, res.decode_ok))
    dt = time.perf_counter() - t
    ok = not bad and dt < 1.0
    record(1, ok, f"B in (3, 10, 100) exact, {dt:.3f} s" if ok else f"{bad} {dt:.3f} s")
    assert ok


def test_criterion_2_region_equivalence():
    t = time.perf_counter()
    mismatches = [(gs, c) for gs in GAINS for c in FB_PAIRS
                  if not regions_equal(theorem3_region(LdicParams(*gs, *c)),
                                       appendixB_region(LdicParams(*gs, *c)))]
    dt = time.perf_counter() - t
    n = len(GAINS) * len(FB_PAIRS)
    ok = not mismatches and dt < 60
    record(2, ok, f"{n} instances, {len(mismatches)} mismatches, {dt:.1f} s")
    assert n == 60025
    assert ok


def _sumrate_csv_rows(tmp_path, capsys):
    path = tmp_path / "sumrate.csv"
    assert main(["ldic", "sumrate-sweep", "--alpha-step", "0.01", "-o", str(path)]) == 0
    capsys.readouterr()
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_criterion_3_symmetric_sumrate(tmp_path, capsys):
    bad = []
    count = 0
    for n in range(1, 9):
        for m in range(0, 3 * n + 1):
            for c in range(0, 2 * n + 1):
                count += 1
                g = LdicParams.symmetric(n, m, c)
                if max_weighted(theorem3_region(g), 1, 1) != symmetric_sumrate(n, m, c):
                    bad.append((n, m, c))
    # the CSV curves, checked against the region computed at n = 200 so
    # that alpha = k/100 and beta = 1/8 become integer gains
    rows = _sumrate_csv_rows(tmp_path, capsys)
    worst = 0.0
    curves = set()
    for r in rows:
        alpha, beta = Fraction(r["alpha"]), Fraction(r["beta"])
        curves.add(beta)
        n = 200
        exact = max_weighted(theorem3_region(LdicParams.symmetric(n, alpha * n, beta * n)),
                             1, 1) / Fraction(n)
        assert symmetric_sumrate_branches(alpha, beta)[0] == exact
        worst = max(worst, abs(float(r["normalized_sumrate"]) - float(exact)))
    ok = not bad and len(curves) == 3 and len(rows) == 3 * 401 and worst <= 1e-8
    record(3, ok, f"{count} (n,m,c) tuples exact, {len(rows)} CSV rows, "
                  f"max CSV deviation {worst:.1e}")
    assert ok


def _supported():
    for n in range(0, 9):
        for m in range(0, n + 1):
            if 3 * m <= 2 * n:
                for c in range(0, n + 1):
                    yield n, m, c


def test_criterion_4_simulator_achievability():
    B, seeds = 50, range(100)
    bad = []
    count = 0
    for n, m, c in _supported():
        g = LdicParams.symmetric(n, m, c)
        scheme = build_scheme(g)
        want = Fraction(B - 2, B) * symmetric_sumrate(n, m, c)
        for seed in seeds:
            res = simulate(g, scheme, B, seed, trace=False)
            if not res.decode_ok or sum(res.achieved) != want:
                bad.append((n, m, c, seed))
        count += 1
    ok = not bad
    record(4, ok, f"{count} (n,m,c) tuples x {len(seeds)} seeds, {len(bad)} failures")
    assert ok


def test_criterion_5_gaussian_constant_gap():
    t = time.perf_counter()
    overall_lo, overall_hi = math.inf, -math.inf
    worst_hi = None
    per_regime = {}
    violations = {}
    for s in range(0, 81, 2):
        snr = db(s)
        for i in range(-10, 161, 2):
            inr = db(i)
            for c in (0, 1, 5, 10, 20):
                outer = symmetric_sumrate_outer(snr, inr, c, 0)
                per = achievable_by_regime(snr, inr, c)
                g = outer - achievable_sumrate(snr, inr, c, 0)
                overall_lo = min(overall_lo, g)
                if g > overall_hi:
                    overall_hi, worst_hi = g, (s, i, c)
                for case, v in per.items():
                    label = str(case)
                    if label == "c":
                        label = "c, SNR<=1" if snr <= 1 else "c, SNR>1"
                    gc = outer - v
                    limit = regime_gap_bound(case, snr)
                    if gc > per_regime.get(label, (-math.inf,))[0]:
                        per_regime[label] = (gc, s, i, c)
                    if gc > limit + 1e-6:
                        violations[label] = violations.get(label, 0) + 1
    dt = time.perf_counter() - t
    ok = overall_lo >= 0 and overall_hi <= 14.8 + 1e-6 and not violations and dt < 30
    worst = ", ".join(f"{k} {v[0]:.2f}" for k, v in sorted(per_regime.items()))
    detail = (f"gap in [{overall_lo:.3f}, {overall_hi:.2f}] (max at SNR {worst_hi[0]} dB, "
              f"INR {worst_hi[1]} dB, C {worst_hi[2]}); per-regime worst: {worst}; "
              f"{dt:.1f} s")
    if violations:
        detail += f"; over the regime constant: {violations}"
    record(5, ok, detail)
    assert ok


def test_criterion_6_optimized_gap():
    limits = {20: 5.0, 40: 6.0, 60: 6.5}
    found = {}
    negative = []
    for s, limit in limits.items():
        gaps = []
        for i in range(-10, 161, 2):
            outer = symmetric_sumrate_outer(db(s), db(i), 10, 0)
            g = outer - achievable_sumrate(db(s), db(i), 10, 0, optimize=True)
            gaps.append(g)
            if g < 0:
                negative.append((s, i, g))
        found[s] = max(gaps)
    ok = not negative and all(found[s] <= limits[s] for s in limits)
    record(6, ok, ", ".join(f"SNR {s} dB max gap {found[s]:.2f} (<= {limits[s]})"
                            for s in limits) + (f"; negative {negative}" if negative else ""))
    assert ok


def test_criterion_7_feedback_worth():
    over = []
    not_monotone = []
    for gs in GAINS:
        regions = {c: theorem3_region(LdicParams(*gs, *c)) for c in FB_PAIRS}
        base = max_weighted(regions[(0, 0)], 1, 1)
        for (c1, c2), r in regions.items():
            if max_weighted(r, 1, 1) > base + c1 + c2:
                over.append((gs, c1, c2))
        # one step up in either coordinate; containment is transitive
        for (c1, c2), r in regions.items():
            k1, k2 = FEEDBACK.index(c1), FEEDBACK.index(c2)
            for up in ((k1 + 1, k2), (k1, k2 + 1)):
                if max(up) < len(FEEDBACK):
                    big = regions[(FEEDBACK[up[0]], FEEDBACK[up[1]])]
                    if not all(contains(big, v) for v in vertices(r)):
                        not_monotone.append((gs, c1, c2, up))
    ok = not over and not not_monotone
    record(7, ok, f"{len(GAINS) * len(FB_PAIRS)} instances, {len(over)} over the "
                  f"one-bit bound, {len(not_monotone)} monotonicity failures")
    assert ok


def _unlimited_feedback_region(n11, n22, n12, n21):
    # perfect-feedback capacity region of the deterministic IC, written out
    d1, d2 = max(n11 - n12, 0), max(n22 - n21, 0)
    return RateRegion([
        RateConstraint(1, 0, min(max(n11, n21), max(n11, n12))),
        RateConstraint(0, 1, min(max(n22, n12), max(n22, n21))),
        RateConstraint(1, 1, d1 + max(n22, n12)),
        RateConstraint(1, 1, d2 + max(n11, n21)),
    ])


def test_criterion_8_recovery():
    no_fb = [gs for gs in GAINS
             if not regions_equal(theorem3_region(LdicParams(*gs)),
                                  elgamal_costa_region(LdicParams(*gs)))]
    big_fb = []
    for gs in GAINS:
        q = max(gs)
        if not regions_equal(theorem3_region(LdicParams(*gs, 4 * q, 4 * q)),
                             _unlimited_feedback_region(*gs)):
            big_fb.append(gs)
    worst = max(abs(symmetric_sumrate_outer(db(s), 0.0) - 2 * math.log2(1 + db(s)))
                for s in range(-10, 81))
    ok = not no_fb and not big_fb and worst <= 1e-9
    record(8, ok, f"no-feedback mismatches {len(no_fb)}, unlimited-feedback mismatches "
                  f"{len(big_fb)}, INR=0 bound error {worst:.1e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
