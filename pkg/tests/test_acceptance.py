"""Acceptance criteria 1-10; each test logs one PASS/FAIL line (see conftest)."""

import math
import time

import numpy as np
import pytest

from oracles import brute_force as bf
from topquandle.braid import BraidWord, act, disjoint_sum_word, parse_braid, random_word
from topquandle.families import great_circle_oracle, pair_angle, sl2_family_check
from topquandle.finite import (closed_braid_diagram, diagram_colourings, fixed_points, group_hom_count,
                               markov_trials, orientation_reversal_count, q_action)
from topquandle.geometric import geometric_quandle, sl2_op, sl2_to_matrix
from topquandle.groups import builtin_group, small_groups, symmetric_group
from topquandle.quandles import (alexander_quandle, conjugation_quandle, dihedral_quandle, is_kei,
                                 verify_axioms)

HOPF = "B2: s1^2"
TREFOIL = "B2: s1^-3"
FIGURE_EIGHT = "B3: s1 s2^-1 s1 s2^-1"


def constructed_quandles():
    out = [dihedral_quandle(n) for n in range(1, 13)]
    out += [alexander_quandle(n, t) for n in range(1, 13) for t in range(n) if math.gcd(t, n) == 1]
    for g in small_groups(24):
        out.append(conjugation_quandle(g))
        out += [conjugation_quandle(g, c) for c in g.conjugacy_classes()]
    return out


def corpus_quandles():
    return [dihedral_quandle(3), alexander_quandle(5, 2), conjugation_quandle(builtin_group("S3"))]


def corpus(count=60, seed=2024):
    """Random words with 2..4 strands and 1..8 letters."""
    rng = np.random.default_rng(seed)
    return [random_word(rng, int(rng.integers(2, 5)), int(rng.integers(1, 9))) for _ in range(count)]


def test_criterion_1_axiom_suite(acceptance_log):
    start = time.perf_counter()
    quandles = constructed_quandles()
    bad = []
    for q in quandles:
        report = verify_axioms(q)
        if not (report.passed and report.exhaustive):
            bad.append(q.name)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    acceptance_log(1, ok, f"{len(quandles)} quandles exhaustive, {len(bad)} failures, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 10


def _relation_pairs(n):
    """Both sides of every defining relation of B_n, plus s_i s_i^-1 = id."""
    pairs = []
    for i in range(1, n):
        pairs.append(((i, -i), ()))
        pairs.append(((-i, i), ()))
        if i + 1 < n:
            pairs.append(((i, i + 1, i), (i + 1, i, i + 1)))
        for j in range(i + 2, n):
            pairs.append(((i, j), (j, i)))
    return [(BraidWord(n, a), BraidWord(n, b)) for a, b in pairs]


def _scaled_gap(q, left, right):
    """Per-tuple deviation in point coordinates, relative to max(1, |point|); also the raw maximum."""
    fl, fr = q.features(left), q.features(right)
    if q.point_ndim == 0 or len(q.sign_variants()) == 1:
        d = np.linalg.norm(fl - fr, axis=-1)
    else:
        d = np.minimum(np.linalg.norm(fl - fr, axis=-1), np.linalg.norm(fl + fr, axis=-1))
    scale = np.maximum(1.0, np.linalg.norm(fr, axis=-1))
    return float((d / scale).max()), float(d.max())


def test_criterion_2_braid_relations(acceptance_log):
    start = time.perf_counter()
    finite_bad, checked = [], 0
    seen = set()
    for q in constructed_quandles():
        key = q.op.tobytes()
        if key in seen:
            continue
        seen.add(key)
        n = 2
        # |Q| = 1 satisfies the size bound for every n; 16 is where |Q| = 2 stops
        while q.size ** n <= 10**5 and n <= 16:
            x = np.stack(np.unravel_index(np.arange(q.size ** n), (q.size,) * n), axis=-1)
            for lw, rw in _relation_pairs(n):
                checked += 1
                if not np.array_equal(act(lw, x, q), act(rw, x, q)):
                    finite_bad.append((q.name, n, str(lw), str(rw)))
            n += 1
    geom = {}
    for sel in ["sphere:2", "csphere:2:q=pi/2", "csphere:2:q=2pi/3", "grass:4:2", "sl2"]:
        q = geometric_quandle(sel)
        rng = np.random.default_rng(0)
        x = q.random_points(rng, 4000).reshape((1000, 4) + q.point_shape)
        worst = [0.0, 0.0]
        for lw, rw in _relation_pairs(4):
            rel, raw = _scaled_gap(q, act(lw, x, q), act(rw, x, q))
            worst = [max(worst[0], rel), max(worst[1], raw)]
        geom[sel] = worst
    elapsed = time.perf_counter() - start
    geom_ok = all(v[0] < 1e-10 for v in geom.values())
    ok = not finite_bad and geom_ok and elapsed < 30
    detail = ", ".join(f"{k} {v[0]:.1e} (abs {v[1]:.1e})" for k, v in geom.items())
    acceptance_log(2, ok, f"{checked} finite relation checks, {len(finite_bad)} failures; {detail}; "
                          f"{elapsed:.1f}s")
    assert not finite_bad
    assert geom_ok
    assert elapsed < 30


def test_criterion_3_exact_counts(acceptance_log):
    start = time.perf_counter()
    cases = [(TREFOIL, 3, 9), (FIGURE_EIGHT, 3, 3), (FIGURE_EIGHT, 5, 25), (HOPF, 3, 3)]
    bad = []
    for text, n, expected in cases:
        w = parse_braid(text)
        got = fixed_points(w, dihedral_quandle(n)).count
        oracle = bf.fixed_count(list(w.letters), w.strands, bf.dihedral(n), n)
        if not got == oracle == expected:
            bad.append((text, n, got, oracle, expected))
    unknot = parse_braid("B1:")
    for q, fn in [(dihedral_quandle(3), bf.dihedral(3)), (dihedral_quandle(7), bf.dihedral(7)),
                  (alexander_quandle(5, 2), bf.alexander(5, 2)), (alexander_quandle(7, 3), bf.alexander(7, 3))]:
        got = fixed_points(unknot, q).count
        if not got == bf.fixed_count([], 1, fn, q.size) == q.size:
            bad.append(("B1:", q.name, got))
    s3 = conjugation_quandle(builtin_group("S3"))
    if fixed_points(unknot, s3).count != s3.size:
        bad.append(("B1:", s3.name))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    acceptance_log(3, ok, f"{len(cases) + 5} counts vs brute force, {len(bad)} mismatches, {elapsed:.2f}s")
    assert not bad
    assert elapsed < 5


def test_criterion_4_markov_invariance(acceptance_log):
    start = time.perf_counter()
    words = corpus()
    violations = []
    for qi, q in enumerate(corpus_quandles()):
        for wi, w in enumerate(words):
            doc = markov_trials(w, q, trials=5, seed=1000 * qi + wi)
            violations += [(q.name, str(w), v) for v in doc["violations"]]
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 60
    acceptance_log(4, ok, f"{len(words)} words x 3 quandles x 5 trials, {len(violations)} violations, "
                          f"{elapsed:.1f}s")
    assert not violations
    assert elapsed < 60


def test_criterion_5_structural_laws(acceptance_log):
    start = time.perf_counter()
    words = corpus()
    closure_bad, product_bad = 0, 0
    for q in corpus_quandles():
        counts = []
        for w in words:
            fps = fixed_points(w, q)
            counts.append(fps.count)
            for a in range(q.size):
                moved = q_action(fps.points, a, q)
                if not np.array_equal(act(w, moved, q), moved):
                    closure_bad += 1
        for i, w in enumerate(words):
            j = (i + 1) % len(words)
            if fixed_points(disjoint_sum_word(w, words[j]), q).count != counts[i] * counts[j]:
                product_bad += 1
    elapsed = time.perf_counter() - start
    ok = closure_bad == product_bad == 0 and elapsed < 60
    acceptance_log(5, ok, f"closure violations {closure_bad}, product violations {product_bad}, {elapsed:.1f}s")
    assert closure_bad == 0 and product_bad == 0
    assert elapsed < 60


def test_criterion_6_diagram_cross_check(acceptance_log):
    words = corpus()
    kei = [dihedral_quandle(3), dihedral_quandle(5)]
    s3 = builtin_group("S3")
    transpositions = next(c for c in s3.conjugacy_classes() if len(c) == 3)
    kei.append(conjugation_quandle(s3, transpositions))
    assert all(is_kei(q) for q in kei)
    count_bad, reverse_bad, checked = 0, 0, 0
    for q in corpus_quandles() + kei[1:]:
        for w in words:
            code = closed_braid_diagram(w)
            count, _ = diagram_colourings(code, q)
            checked += 1
            if count != fixed_points(w, q).count:
                count_bad += 1
            if is_kei(q) and orientation_reversal_count(code, q) != count:
                reverse_bad += 1
    ok = count_bad == reverse_bad == 0
    acceptance_log(6, ok, f"{checked} diagrams, {count_bad} count mismatches, {reverse_bad} reversal mismatches")
    assert count_bad == 0 and reverse_bad == 0


def test_criterion_7_group_homomorphisms(acceptance_log):
    trefoil = parse_braid(TREFOIL)
    results = {}
    for n in (3, 4):
        results[n] = (group_hom_count(trefoil, symmetric_group(n)), bf.braid_relation_pairs(n))
    ok = all(a == b for a, b in results.values())
    acceptance_log(7, ok, ", ".join(f"S{n}: {a} vs oracle {b}" for n, (a, b) in results.items()))
    assert ok


SPHERE_CASES = [(HOPF, 2, [2, 2]), (TREFOIL, 2, [2, 3]), (FIGURE_EIGHT, 3, [2, 3, 3])]


@pytest.mark.slow
def test_criterion_8_sphere_reproduction(acceptance_log, solve):
    lines, ok = [], True
    for text, comps, dims in SPHERE_CASES:
        start = time.perf_counter()
        cloud = solve(text, "sphere:2")
        elapsed = time.perf_counter() - start
        good = cloud.component_count == comps and cloud.dims == dims and elapsed < 300
        ok &= good
        lines.append(f"{text} -> {cloud.component_count} {cloud.dims} in {elapsed:.0f}s")
    acceptance_log(8, ok, "; ".join(lines))
    assert ok


@pytest.mark.slow
def test_criterion_9_great_circle_oracle(acceptance_log, solve):
    rng = np.random.default_rng(9)
    expected = {"trefoil": [-2 * math.pi / 3, 0.0, 2 * math.pi / 3],
                "figure_eight": [2 * math.pi * k / 5 for k in (-2, -1, 0, 1, 2)]}
    root_err = 0.0
    for family, roots in expected.items():
        for _ in range(20):
            a, b = rng.standard_normal((2, 3))
            got = great_circle_oracle(family, a / np.linalg.norm(a), b / np.linalg.norm(b))
            assert len(got) == len(roots)
            root_err = max(root_err, max(abs(g - e) for g, e in zip(got, roots)))
    angle_err, used = 0.0, 0
    for family, text in (("trefoil", TREFOIL), ("figure_eight", FIGURE_EIGHT)):
        cloud = solve(text, "sphere:2")
        # the oracle pair (a, b) is read off strands 1 and 2
        pick = np.random.default_rng(1).choice(len(cloud), size=min(300, len(cloud)), replace=False)
        for p in cloud.points[pick]:
            a, b = p[0], p[1]
            if abs(abs(float(np.dot(a, b))) - 1) < 1e-9:
                # equal or antipodal strands: no unique circle, angle 0 is the trivial root
                angle_err = max(angle_err, pair_angle(family, a, b) if np.dot(a, b) > 0 else math.pi)
                used += 1
                continue
            roots = great_circle_oracle(family, a, b)
            theta = pair_angle(family, a, b)
            angle_err = max(angle_err, min(abs(theta - abs(r)) for r in roots))
            used += 1
    ok = root_err < 1e-8 and angle_err < 1e-6
    acceptance_log(9, ok, f"oracle root error {root_err:.1e}; {used} solver pairs, worst angle gap {angle_err:.1e}")
    assert root_err < 1e-8
    assert angle_err < 1e-6


@pytest.mark.slow
def test_criterion_10_sl2_reproduction(acceptance_log, solve):
    rng = np.random.default_rng(10)
    x = rng.standard_normal((10_000, 2)) + 1j * rng.standard_normal((10_000, 2))
    y = rng.standard_normal((10_000, 2)) + 1j * rng.standard_normal((10_000, 2))
    mx, my = sl2_to_matrix(x), sl2_to_matrix(y)
    matrix_err = float(np.abs(sl2_to_matrix(sl2_op(x, y)) - np.linalg.inv(my) @ mx @ my).max())
    family_err = sl2_family_check(1000, seed=10)
    start = time.perf_counter()
    cloud = solve(TREFOIL, "sl2")
    elapsed = time.perf_counter() - start
    ok = matrix_err < 1e-10 and family_err < 1e-10 and cloud.component_count == 2 and cloud.dims == [4, 6]
    acceptance_log(10, ok, f"matrix oracle {matrix_err:.1e}, family {family_err:.1e}; trefoil/sl2 -> "
                           f"{cloud.component_count} {cloud.dims} sizes {cloud.component_sizes} in {elapsed:.0f}s")
    assert matrix_err < 1e-10
    assert family_err < 1e-10
    assert cloud.component_count == 2
    assert cloud.dims == [4, 6]
