import numpy as np
import pytest

from oracles import brute_force as bf
from topquandle.braid import FIGURE_EIGHT, HOPF, TREFOIL, BraidWord, act, disjoint_sum_word, random_word
from topquandle.finite import (FIGURE_EIGHT_DIAGRAM, HOPF_DIAGRAM, TREFOIL_DIAGRAM, UNKNOT_DIAGRAM,
                               BudgetExceeded, Crossing, DiagramCode, closed_braid_diagram,
                               diagram_colourings, finite_report, fixed_points, group_hom_count,
                               markov_trials, orbit_sizes, orientation_reversal_count, q_action)
from topquandle.groups import cyclic_group, symmetric_group
from topquandle.quandles import alexander_quandle, dihedral_quandle, trivial_quandle


@pytest.mark.parametrize("word,n,count", [(TREFOIL, 3, 9), (FIGURE_EIGHT, 3, 3), (FIGURE_EIGHT, 5, 25),
                                          (HOPF, 3, 3)])
def test_known_counts(word, n, count):
    fps = fixed_points(word, dihedral_quandle(n))
    assert fps.count == count
    assert fps.count == bf.fixed_count(list(word.letters), word.strands, bf.dihedral(n), n)


def test_points_sorted_and_fixed():
    q = alexander_quandle(7, 3)
    fps = fixed_points(FIGURE_EIGHT, q)
    pts = fps.points
    assert np.array_equal(act(FIGURE_EIGHT, pts, q), pts)
    assert fps.as_tuples() == sorted(set(fps.as_tuples()))
    assert fps.as_tuples() == bf.fixed_tuples(list(FIGURE_EIGHT.letters), 3, bf.alexander(7, 3), 7)


def test_empty_word_gives_everything():
    q = dihedral_quandle(4)
    assert fixed_points(BraidWord(2, ()), q).count == 16
    assert fixed_points(BraidWord(1, ()), q).count == 4


def test_workers_do_not_change_result(monkeypatch):
    import topquandle.finite as fin
    monkeypatch.setattr(fin, "CHUNK", 7)
    q = dihedral_quandle(5)
    a = fixed_points(FIGURE_EIGHT, q, workers=1).points
    b = fixed_points(FIGURE_EIGHT, q, workers=3).points
    assert np.array_equal(a, b)


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        fixed_points(BraidWord(6, (1,)), dihedral_quandle(12), budget=1000)
    assert info.value.required == 12 ** 6


def test_q_action_closure_and_orbits():
    q = dihedral_quandle(3)
    fps = fixed_points(TREFOIL, q)
    for a in range(3):
        for x in fps.points:
            assert tuple(q_action(x, a, q)) in fps
    assert sum(orbit_sizes(fps)) == fps.count
    assert orbit_sizes(fps) == [3, 6]


def test_q_action_trivial_and_diagonal():
    q = trivial_quandle(3)
    assert q_action([0, 2, 1], 1, q).tolist() == [0, 2, 1]
    d = dihedral_quandle(5)
    assert q_action([2, 2, 2], 2, d).tolist() == [2, 2, 2]


def test_disjoint_sum_multiplies():
    q = dihedral_quandle(3)
    assert fixed_points(disjoint_sum_word(TREFOIL, TREFOIL), q).count == 81
    assert fixed_points(disjoint_sum_word(HOPF, BraidWord(1, ())), q).count == 9


def test_hand_diagrams():
    d3, d5 = dihedral_quandle(3), dihedral_quandle(5)
    assert diagram_colourings(HOPF_DIAGRAM, d3)[0] == 3
    assert diagram_colourings(TREFOIL_DIAGRAM, d3)[0] == 9
    assert diagram_colourings(FIGURE_EIGHT_DIAGRAM, d5)[0] == 25
    assert diagram_colourings(UNKNOT_DIAGRAM, d5)[0] == 5
    for code, q in [(HOPF_DIAGRAM, d3), (TREFOIL_DIAGRAM, d3), (FIGURE_EIGHT_DIAGRAM, d5)]:
        brute = bf.colouring_count(code.arcs, [(c.over, c.left, c.right) for c in code.crossings],
                                   bf.dihedral(q.size), q.size)
        assert diagram_colourings(code, q)[0] == brute


def test_colourings_listed_in_order():
    count, cols = diagram_colourings(TREFOIL_DIAGRAM, dihedral_quandle(3))
    assert cols == sorted(cols) and len(cols) == count
    assert diagram_colourings(TREFOIL_DIAGRAM, dihedral_quandle(3), limit=2)[1] == cols[:2]


def test_closed_braid_diagram_matches_fixed_points():
    rng = np.random.default_rng(5)
    q = alexander_quandle(5, 2)
    for _ in range(25):
        w = random_word(rng, int(rng.integers(2, 5)), int(rng.integers(0, 7)))
        assert diagram_colourings(closed_braid_diagram(w), q)[0] == fixed_points(w, q).count


def test_orientation_reversal():
    d3, d5 = dihedral_quandle(3), dihedral_quandle(5)
    assert orientation_reversal_count(TREFOIL_DIAGRAM, d3) == 9
    assert orientation_reversal_count(FIGURE_EIGHT_DIAGRAM, d5) == 25
    # trivial quandle: colours are constant along each link component
    t = trivial_quandle(3)
    for code, components in [(FIGURE_EIGHT_DIAGRAM, 1), (HOPF_DIAGRAM, 2), (UNKNOT_DIAGRAM, 1)]:
        assert diagram_colourings(code, t)[0] == 3 ** components
        assert orientation_reversal_count(code, t) == 3 ** components


def test_signed_crossing_roles():
    assert Crossing.from_signed(0, 1, 2, 1) == Crossing(0, 2, 1)
    assert Crossing.from_signed(0, 1, 2, -1) == Crossing(0, 1, 2)
    with pytest.raises(ValueError):
        Crossing.from_signed(0, 1, 2, 0)


def test_diagram_json_roundtrip():
    assert DiagramCode.from_json(FIGURE_EIGHT_DIAGRAM.to_json()) == FIGURE_EIGHT_DIAGRAM
    with pytest.raises(ValueError):
        DiagramCode(2, ((0, 1, 5),))


def test_group_hom_counts():
    assert group_hom_count(TREFOIL, symmetric_group(3)) == bf.braid_relation_pairs(3)
    assert group_hom_count(BraidWord(1, ()), symmetric_group(3)) == 6
    assert group_hom_count(TREFOIL, cyclic_group(5)) == 5


def test_markov_trials_clean():
    doc = markov_trials(TREFOIL, dihedral_quandle(5), trials=10, seed=7)
    assert doc["violations"] == [] and doc["count"] == 5


def test_report_shape():
    fps = fixed_points(TREFOIL, dihedral_quandle(3))
    doc = finite_report(fps, "dihedral:3", include_points=True)
    assert doc["count"] == 9 and len(doc["points"]) == 9 and doc["word"] == "B2: s1^-3"
