"""Finite quandles as Cayley tables.

Elements are the indices ``0..size-1`` and ``op[a, b]`` is ``a * b``.  The
inverse right translation ``inv_op[c, b]`` is the unique ``a`` with
``a * b == c``; it is filled in whenever every right translation is a
bijection, which every quandle satisfies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .groups import GroupTable

EXHAUSTIVE_LIMIT = 256
SAMPLED_TRIPLES = 10**6


class QuandleError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    axiom: str | None = None
    witness: tuple | None = None
    exhaustive: bool = True
    checked_triples: int = 0
    warning: str | None = None

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "axiom": self.axiom,
            "witness": list(self.witness) if self.witness is not None else None,
            "exhaustive": self.exhaustive,
            "checked_triples": self.checked_triples,
            "warning": self.warning,
        }


@dataclass(frozen=True, eq=False)
class QuandleTable:
    op: np.ndarray
    name: str = ""
    elements: tuple = field(default=(), repr=False)
    inv_op: np.ndarray | None = field(default=None, init=False, repr=False)

    point_ndim = 0

    def __post_init__(self):
        op = np.array(self.op, dtype=np.int64)
        if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] == 0:
            raise QuandleError(f"operation table must be a non-empty square array, got shape {op.shape}")
        n = op.shape[0]
        if op.min() < 0 or op.max() >= n:
            raise QuandleError("operation table entries out of range")
        op.setflags(write=False)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "inv_op", _invert_right_translations(op))

    @property
    def size(self) -> int:
        return self.op.shape[0]

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, QuandleTable):
            return NotImplemented
        return np.array_equal(self.op, other.op)

    __hash__ = None

    def apply(self, a, b):
        return self.op[a, b]

    def apply_inverse(self, c, b):
        if self.inv_op is None:
            raise QuandleError("right translations are not bijective; no inverse operation")
        return self.inv_op[c, b]

    def checked(self) -> "QuandleTable":
        report = verify_axioms(self)
        if not report.passed:
            raise QuandleError(f"{self.name or 'table'} fails {report.axiom} at {report.witness}")
        return self

    def to_json(self) -> dict:
        return {"size": self.size, "op": self.op.tolist()}

    @classmethod
    def from_json(cls, doc: dict, name: str = "", check: bool = True) -> "QuandleTable":
        if "op" not in doc:
            raise QuandleError("quandle document has no 'op' table")
        op = np.asarray(doc["op"])
        size = int(doc.get("size", op.shape[0] if op.ndim else 0))
        if op.ndim != 2 or op.shape != (size, size):
            raise QuandleError(f"declared size {size} does not match table shape {op.shape}")
        table = cls(op, name=name)
        return table.checked() if check else table


def _invert_right_translations(op):
    n = op.shape[0]
    inv = np.full((n, n), -1, dtype=np.int64)
    cols = np.broadcast_to(np.arange(n), (n, n))
    inv[op, cols] = np.arange(n)[:, None]
    if (inv < 0).any():
        return None
    inv.setflags(write=False)
    return inv


def load_quandle(path, check: bool = True) -> QuandleTable:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return QuandleTable.from_json(json.load(fh), name=path.stem, check=check)


def verify_axioms(table, size: int | None = None, *, exhaustive_limit=EXHAUSTIVE_LIMIT,
                  samples=SAMPLED_TRIPLES, seed=0) -> AxiomReport:
    """Check idempotence, bijective right translations and right self-distributivity.

    ``table`` may be a QuandleTable or a raw square array.  Tables larger
    than ``exhaustive_limit`` are checked on ``samples`` random triples and
    the report carries a warning.
    """
    op = table.op if isinstance(table, QuandleTable) else np.asarray(table)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise QuandleError(f"operation table must be square, got shape {op.shape}")
    n = op.shape[0]
    if size is not None and size != n:
        raise QuandleError(f"declared size {size} does not match table size {n}")
    if op.size and (op.min() < 0 or op.max() >= n):
        raise QuandleError("operation table entries out of range")
    idx = np.arange(n)

    bad = np.flatnonzero(op[idx, idx] != idx)
    if bad.size:
        return AxiomReport(False, "idempotence", (int(bad[0]),))

    for b in range(n):
        col = op[:, b]
        order = np.argsort(col, kind="stable")
        clash = np.flatnonzero(col[order][1:] == col[order][:-1])
        if clash.size:
            a1, a2 = order[clash[0]], order[clash[0] + 1]
            return AxiomReport(False, "right translation bijective", (int(a1), int(a2), b))

    if n <= exhaustive_limit:
        # chunk over c to bound memory at n**2 per step
        checked = 0
        for c in range(n):
            lhs = op[op, c]
            rhs = op[op[:, c][:, None], op[:, c][None, :]]
            checked += n * n
            if not np.array_equal(lhs, rhs):
                a, b = np.argwhere(lhs != rhs)[0]
                return AxiomReport(False, "right self-distributivity", (int(a), int(b), c),
                                   checked_triples=checked)
        return AxiomReport(True, checked_triples=n ** 3)

    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    lhs = op[op[a, b], c]
    rhs = op[op[a, c], op[b, c]]
    warning = f"size {n} exceeds {exhaustive_limit}: self-distributivity checked on {samples} random triples"
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        k = bad[0]
        return AxiomReport(False, "right self-distributivity", (int(a[k]), int(b[k]), int(c[k])),
                           exhaustive=False, checked_triples=samples, warning=warning)
    return AxiomReport(True, exhaustive=False, checked_triples=samples, warning=warning)


def is_kei(table: QuandleTable) -> bool:
    """(b*a)*a == b for all a, b."""
    op = table.op
    n = op.shape[0]
    cols = np.broadcast_to(np.arange(n), (n, n))
    return bool(np.array_equal(op[op, cols], np.broadcast_to(np.arange(n)[:, None], (n, n))))


def trivial_quandle(n: int) -> QuandleTable:
    if n < 1:
        raise QuandleError("quandle size must be positive")
    return QuandleTable(np.broadcast_to(np.arange(n)[:, None], (n, n)), name=f"trivial:{n}").checked()


def dihedral_quandle(n: int) -> QuandleTable:
    """Z/n with a * b = 2b - a (the Fox n-colouring quandle)."""
    if n < 1:
        raise QuandleError("dihedral quandle needs n >= 1")
    idx = np.arange(n)
    return QuandleTable((2 * idx[None, :] - idx[:, None]) % n, name=f"dihedral:{n}").checked()


def alexander_quandle(n: int, t: int) -> QuandleTable:
    """Z/n with h * g = t*h + (1 - t)*g."""
    if n < 1:
        raise QuandleError("Alexander quandle needs n >= 1")
    if math.gcd(t % n, n) != 1:
        raise QuandleError(f"t = {t} is not a unit mod {n}")
    idx = np.arange(n)
    op = (t * idx[:, None] + (1 - t) * idx[None, :]) % n
    return QuandleTable(op, name=f"alexander:{n}:{t % n}").checked()


def conjugation_quandle(g: GroupTable, subset=None) -> QuandleTable:
    """h * x = x^-1 h x on G, or on a conjugation-closed subset (ascending parent indices)."""
    if subset is None:
        members = np.arange(g.size)
    else:
        members = np.array(sorted({int(s) for s in subset}), dtype=np.int64)
        if members.size == 0:
            raise QuandleError("subset is empty")
        if members.min() < 0 or members.max() >= g.size:
            raise QuandleError("subset element out of range")
    everyone = np.arange(g.size)
    conj = g.conjugate(members[:, None], everyone[None, :])
    if not np.isin(conj, members).all():
        i, j = np.argwhere(~np.isin(conj, members))[0]
        raise QuandleError(
            f"subset not closed under conjugation: element {members[i]} conjugated by {j} leaves it")
    position = np.full(g.size, -1, dtype=np.int64)
    position[members] = np.arange(members.size)
    op = position[g.conjugate(members[:, None], members[None, :])]
    label = f"conj:{g.name}" if subset is None else f"conj:{g.name}:{members.tolist()}"
    return QuandleTable(op, name=label, elements=tuple(members.tolist())).checked()


def anti_alexander_quandle(g: GroupTable, tau) -> QuandleTable:
    """h * x = tau(x) tau(h)^-1 x for an anti-automorphism tau of G."""
    tau = np.asarray(tau, dtype=np.int64)
    if tau.shape != (g.size,) or sorted(tau.tolist()) != list(range(g.size)):
        raise QuandleError("tau must be a permutation of the group elements")
    # tau(xy) == tau(y) tau(x)
    if not np.array_equal(tau[g.mul], g.mul[tau[None, :], tau[:, None]]):
        raise QuandleError("tau is not an anti-automorphism")
    h = np.arange(g.size)[:, None]
    x = np.arange(g.size)[None, :]
    op = g.mul[g.mul[tau[x], g.inverse[tau[h]]], x]
    return QuandleTable(op, name=f"anti-alexander:{g.name}").checked()
