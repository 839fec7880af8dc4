"""Exact invariants for finite quandles: braid fixed points and diagram colourings."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .braid import BraidWord, act, disjoint_sum_word  # noqa: F401  (re-exported)
from .groups import GroupTable
from .quandles import QuandleTable, conjugation_quandle

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 18
THREADS_ENV = "TOPQUANDLE_THREADS"


class BudgetExceeded(RuntimeError):
    def __init__(self, required, budget):
        super().__init__(f"search needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class FixedPointSet:
    word: BraidWord
    quandle: QuandleTable
    points: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    def __len__(self):
        return self.count

    def __contains__(self, x):
        x = np.asarray(x)
        return bool((self.points == x).all(axis=1).any())

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.points]


def _chunk_fixed_points(word, table, start, stop):
    n, size = word.strands, table.size
    flat = np.arange(start, stop, dtype=np.int64)
    x = np.stack(np.unravel_index(flat, (size,) * n), axis=-1) if n else np.zeros((stop - start, 0), np.int64)
    y = act(word, x, table)
    return x[(y == x).all(axis=1)]


def fixed_points(word: BraidWord, table: QuandleTable, budget: int = DEFAULT_BUDGET,
                 workers: int | None = None) -> FixedPointSet:
    """All x in Q^n with word(x) == x, in lexicographic order.

    Plain enumeration of Q^n; contiguous index ranges (so whole blocks of
    leading coordinates) are handed to a thread pool and merged in order.
    """
    total = table.size ** word.strands
    if total > budget:
        raise BudgetExceeded(total, budget)
    bounds = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    workers = workers or default_workers()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _chunk_fixed_points(word, table, *b), bounds))
    else:
        parts = [_chunk_fixed_points(word, table, *b) for b in bounds]
    points = np.concatenate(parts) if parts else np.zeros((0, word.strands), np.int64)
    points.setflags(write=False)
    return FixedPointSet(word, table, points)


def q_action(x, a, table: QuandleTable):
    """Componentwise (x_1 * a, ..., x_n * a)."""
    return table.apply(np.asarray(x), a)


def orbit_sizes(fps: FixedPointSet) -> list[int]:
    """Sizes of the orbits of the componentwise Q-action on the fixed set, ascending."""
    pts = fps.points
    if pts.shape[0] == 0:
        return []
    size = fps.quandle.size
    weights = size ** np.arange(pts.shape[1] - 1, -1, -1, dtype=np.int64)
    codes = pts @ weights
    index = {int(c): i for i, c in enumerate(codes)}
    parent = list(range(len(codes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(size):
        images = q_action(pts, a, fps.quandle) @ weights
        for i, c in enumerate(images):
            j = index.get(int(c))
            if j is None:
                raise AssertionError("Q-action left the fixed set")
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    roots = [find(i) for i in range(len(codes))]
    return sorted(np.unique(roots, return_counts=True)[1].tolist())


def group_hom_count(word: BraidWord, g: GroupTable, budget: int = DEFAULT_BUDGET) -> int:
    """Number of homomorphisms from the link group into G, via the conjugation quandle."""
    return fixed_points(word, conjugation_quandle(g), budget=budget).count


# -- diagrams ----------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    """Arc ids around a crossing; the colouring relation is right = left * over.

    ``left``/``right`` are the under-arcs on the left/right of the oriented
    over-arc.
    """

    over: int
    left: int
    right: int

    @classmethod
    def from_signed(cls, over: int, incoming: int, outgoing: int, sign: int) -> "Crossing":
        """Roles from a signed PD-style crossing.

        ``incoming``/``outgoing`` are the under-arcs before and after the
        crossing along the under-strand's orientation.  With the usual sign
        convention (positive when the over-strand runs bottom-left to
        top-right and both strands point up) the under-strand of a positive
        crossing passes from the right of the over-arc to its left, so
        ``right = incoming``.  In braid terms sigma_i^-1 is positive and
        sigma_i negative.
        """
        if sign == 1:
            return cls(over, outgoing, incoming)
        if sign == -1:
            return cls(over, incoming, outgoing)
        raise ValueError("crossing sign must be +1 or -1")


@dataclass(frozen=True)
class DiagramCode:
    arcs: int
    crossings: tuple[Crossing, ...] = ()

    def __post_init__(self):
        crossings = tuple(c if isinstance(c, Crossing) else Crossing(*c) for c in self.crossings)
        if self.arcs < 1:
            raise ValueError("a diagram needs at least one arc")
        for c in crossings:
            for arc in (c.over, c.left, c.right):
                if not 0 <= arc < self.arcs:
                    raise ValueError(f"arc id {arc} out of range for {self.arcs} arcs")
        object.__setattr__(self, "crossings", crossings)

    def reversed(self) -> "DiagramCode":
        """Same diagram with every crossing relation read as left = right * over."""
        return DiagramCode(self.arcs, tuple(Crossing(c.over, c.right, c.left) for c in self.crossings))

    def to_json(self) -> dict:
        return {"arcs": self.arcs,
                "crossings": [{"over": c.over, "left": c.left, "right": c.right} for c in self.crossings]}

    @classmethod
    def from_json(cls, doc: dict) -> "DiagramCode":
        try:
            crossings = tuple(Crossing(int(c["over"]), int(c["left"]), int(c["right"]))
                              for c in doc.get("crossings", []))
            return cls(int(doc["arcs"]), crossings)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed diagram document: {exc}") from None


def load_diagram(path) -> DiagramCode:
    with Path(path).open(encoding="utf-8") as fh:
        return DiagramCode.from_json(json.load(fh))


def closed_braid_diagram(word: BraidWord) -> DiagramCode:
    """Diagram of the closure of a braid, arcs broken at under-crossings.

    Arc ids are assigned in order of first appearance (bottom strands first).
    Bottom colour x_j labels the arc starting at strand j.
    """
    n = word.strands
    current = list(range(n))
    next_id = n
    raw = []
    for e in word.letters:
        i = abs(e) - 1
        a, b = current[i], current[i + 1]
        if e > 0:
            # strand i+1 passes over to position i; the under-strand emerges at i+1
            raw.append((b, a, next_id))
            current[i], current[i + 1] = b, next_id
        else:
            raw.append((a, next_id, b))
            current[i], current[i + 1] = next_id, a
        next_id += 1

    parent = list(range(next_id))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for j in range(n):
        ra, rb = find(current[j]), find(j)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    relabel = {}
    for k in range(next_id):
        relabel.setdefault(find(k), len(relabel))
    crossings = tuple(Crossing(relabel[find(o)], relabel[find(l)], relabel[find(r)]) for o, l, r in raw)
    return DiagramCode(len(relabel), crossings)


def diagram_colourings(code: DiagramCode, table: QuandleTable, budget: int = DEFAULT_BUDGET,
                       limit: int | None = None):
    """All colourings with right = left * over at every crossing.

    Backtracking over arcs; each crossing with two known under/over roles
    fixes its remaining under-arc.  ``budget`` caps the number of search
    nodes.  Returns ``(count, colourings)`` with colourings as tuples in
    lexicographic order (at most ``limit`` of them when given).
    """
    op, inv = table.op, table.inv_op
    m = code.arcs
    by_arc = [[] for _ in range(m)]
    for c in code.crossings:
        for arc in {c.over, c.left, c.right}:
            by_arc[arc].append(c)
    found = []
    nodes = 0

    def propagate(colour, queue):
        while queue:
            arc = queue.pop()
            for c in by_arc[arc]:
                o, l, r = colour[c.over], colour[c.left], colour[c.right]
                if o < 0:
                    continue
                if l >= 0 and r >= 0:
                    if op[l, o] != r:
                        return False
                elif l >= 0:
                    colour[c.right] = op[l, o]
                    queue.append(c.right)
                elif r >= 0:
                    colour[c.left] = inv[r, o]
                    queue.append(c.left)
        return True

    def search(colour):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(nodes, budget)
        try:
            arc = colour.index(-1)
        except ValueError:
            found.append(tuple(colour))
            return
        for v in range(table.size):
            trial = list(colour)
            trial[arc] = v
            if propagate(trial, [arc]):
                search(trial)

    search([-1] * m)
    found.sort()
    count = len(found)
    return count, found if limit is None else found[:limit]


def orientation_reversal_count(code: DiagramCode, table: QuandleTable, budget: int = DEFAULT_BUDGET) -> int:
    return diagram_colourings(code.reversed(), table, budget=budget)[0]


def finite_report(fps: FixedPointSet, quandle_label: str, include_points: bool = False) -> dict:
    doc = {
        "word": str(fps.word),
        "quandle": quandle_label,
        "count": fps.count,
        "orbit_sizes": orbit_sizes(fps),
    }
    if include_points:
        doc["points"] = fps.points.tolist()
    return doc


# hand-entered diagrams used in examples and tests

HOPF_DIAGRAM = DiagramCode(2, (Crossing(0, 1, 1), Crossing(1, 0, 0)))
TREFOIL_DIAGRAM = DiagramCode(3, (Crossing(0, 1, 2), Crossing(1, 2, 0), Crossing(2, 0, 1)))
# arcs 1..4 of the standard 4-crossing figure-eight picture, crossings from the top
FIGURE_EIGHT_DIAGRAM = DiagramCode(4, (
    Crossing(0, 1, 2),   # arc3 = arc2 * arc1
    Crossing(2, 3, 0),   # arc1 = arc4 * arc3
    Crossing(1, 3, 2),   # arc3 = arc4 * arc2
    Crossing(3, 1, 0),   # arc1 = arc2 * arc4
))
UNKNOT_DIAGRAM = DiagramCode(1, ())


def markov_trials(word: BraidWord, table: QuandleTable, trials: int, seed: int = 0,
                  conjugator_length: int = 8, budget: int = DEFAULT_BUDGET) -> dict:
    """Compare the fixed-point count of ``word`` with random conjugates and both stabilisations.

    Each trial conjugates by a fresh random word and stabilises with both
    signs; stabilised fixed points must satisfy x_{n+1} = x_n and truncate
    to fixed points of the original word.
    """
    from .braid import conjugate, random_word, stabilize

    rng = np.random.default_rng(seed)
    base = fixed_points(word, table, budget=budget)
    violations = []
    counts = []
    for t in range(trials):
        by = random_word(rng, word.strands, int(rng.integers(0, conjugator_length + 1)))
        c = fixed_points(conjugate(word, by), table, budget=budget).count
        row = {"conjugator": str(by), "conjugate": c}
        if c != base.count:
            violations.append({"trial": t, "move": "conjugation", "count": c})
        for sign in (1, -1):
            fps = fixed_points(stabilize(word, sign), table, budget=budget)
            row["stabilize+" if sign > 0 else "stabilize-"] = fps.count
            if fps.count != base.count:
                violations.append({"trial": t, "move": f"stabilization {sign:+d}", "count": fps.count})
            pts = fps.points
            if pts.size and not (pts[:, -1] == pts[:, -2]).all():
                violations.append({"trial": t, "move": f"stabilization {sign:+d}", "detail": "x_{n+1} != x_n"})
            elif pts.size and not all(tuple(p) in base for p in pts[:, :-1]):
                violations.append({"trial": t, "move": f"stabilization {sign:+d}", "detail": "truncation not fixed"})
        counts.append(row)
    return {"word": str(word), "quandle": table.name, "count": base.count, "trials": trials,
            "seed": seed, "results": counts, "violations": violations}
