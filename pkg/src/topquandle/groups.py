"""Finite groups as Cayley tables on the indices 0..size-1.

Permutation groups enumerate their elements in lexicographic order of the
image tuples, so the identity is always index 0.  Products compose left to
right: ``mul[a, b]`` is "apply a, then b".
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupTable:
    mul: np.ndarray
    inverse: np.ndarray
    identity: int
    name: str = ""
    labels: tuple = field(default=(), repr=False)

    def __post_init__(self):
        mul = np.array(self.mul, dtype=np.int64)
        inverse = np.array(self.inverse, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupError(f"multiplication table must be square, got shape {mul.shape}")
        n = mul.shape[0]
        if inverse.shape != (n,):
            raise GroupError(f"inverse must have length {n}, got shape {inverse.shape}")
        if not 0 <= self.identity < n:
            raise GroupError(f"identity index {self.identity} out of range")
        if mul.min() < 0 or mul.max() >= n or inverse.min() < 0 or inverse.max() >= n:
            raise GroupError("table entries out of range")
        mul.setflags(write=False)
        inverse.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inverse", inverse)
        _check_group_axioms(mul, inverse, self.identity)

    @property
    def size(self) -> int:
        return self.mul.shape[0]

    def __len__(self):
        return self.size

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def conjugate(self, h, g):
        """g^-1 h g, vectorised over array arguments."""
        return self.mul[self.mul[self.inverse[g], h], g]

    def conjugacy_classes(self) -> list[list[int]]:
        seen = np.zeros(self.size, dtype=bool)
        classes = []
        everyone = np.arange(self.size)
        for h in range(self.size):
            if seen[h]:
                continue
            cls = sorted(set(self.conjugate(h, everyone).tolist()))
            seen[cls] = True
            classes.append(cls)
        return classes

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "mul": self.mul.tolist(),
            "inverse": self.inverse.tolist(),
            "identity": int(self.identity),
        }

    @classmethod
    def from_json(cls, doc: dict, name: str = "") -> "GroupTable":
        try:
            size = int(doc["size"])
            table = cls(doc["mul"], doc["inverse"], int(doc["identity"]), name=name or doc.get("name", ""))
        except KeyError as exc:
            raise GroupError(f"group document is missing {exc}") from None
        if table.size != size:
            raise GroupError(f"declared size {size} does not match table size {table.size}")
        return table


def _check_group_axioms(mul, inverse, e):
    n = mul.shape[0]
    idx = np.arange(n)
    if not (np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx)):
        raise GroupError("identity element is not two-sided")
    if not (np.all(mul[idx, inverse] == e) and np.all(mul[inverse, idx] == e)):
        raise GroupError("inverse table is wrong")
    # (ab)c == a(bc) over all triples
    left = mul[mul[:, :, None], idx[None, None, :]]
    right = mul[idx[:, None, None], mul[None, :, :]]
    if not np.array_equal(left, right):
        a, b, c = np.argwhere(left != right)[0]
        raise GroupError(f"not associative at ({a}, {b}, {c})")


def load_group(path) -> GroupTable:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return GroupTable.from_json(json.load(fh), name=path.stem)


def permutation_group(generators, degree=None, name="") -> GroupTable:
    """Closure of a set of permutations (given as image tuples)."""
    gens = [tuple(int(i) for i in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    if any(sorted(g) != list(range(degree)) for g in gens):
        raise GroupError("generators must be permutations of 0..degree-1")
    ident = tuple(range(degree))
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(degree))
                if q not in elements:
                    elements.add(q)
                    nxt.append(q)
        frontier = nxt
    return _table_from_permutations(sorted(elements), name)


def _table_from_permutations(perms, name):
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    arr = np.array(perms, dtype=np.int64)
    n = len(perms)
    mul = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        # "a then b": i -> b[a[i]]
        composed = arr[:, arr[a]]
        mul[a] = [index[tuple(row)] for row in composed]
    inverse = np.array([index[tuple(np.argsort(arr[a]))] for a in range(n)], dtype=np.int64)
    return GroupTable(mul, inverse, index[tuple(range(arr.shape[1]))], name=name, labels=tuple(perms))


def symmetric_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    return _table_from_permutations(list(itertools.permutations(range(n))), f"S{n}")


def alternating_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("alternating group needs n >= 1")
    even = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return _table_from_permutations(even, f"A{n}")


def _parity(p) -> int:
    p = list(p)
    swaps = 0
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            swaps += 1
    return swaps % 2


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    idx = np.arange(n)
    return GroupTable((idx[:, None] + idx[None, :]) % n, (-idx) % n, 0, name=f"Z{n}")


def dihedral_group(n: int) -> GroupTable:
    """Symmetries of the regular n-gon, order 2n."""
    if n < 2:
        raise GroupError("dihedral group needs n >= 2")
    if n == 2:
        return direct_product(cyclic_group(2), cyclic_group(2), name="D2")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return permutation_group([rot, ref], n, name=f"D{n}")


def quaternion_group() -> GroupTable:
    # right multiplication by i and j on the ordering 1, -1, i, -i, j, -j, k, -k
    i = (2, 3, 1, 0, 7, 6, 4, 5)
    j = (4, 5, 6, 7, 1, 0, 3, 2)
    return permutation_group([i, j], 8, name="Q8")


def direct_product(g: GroupTable, h: GroupTable, name="") -> GroupTable:
    """Elements ordered as (x, y) -> x * |h| + y."""
    m = h.size
    mul = g.mul[:, None, :, None] * m + h.mul[None, :, None, :]
    mul = mul.reshape(g.size * m, g.size * m)
    inverse = (g.inverse[:, None] * m + h.inverse[None, :]).reshape(-1)
    return GroupTable(mul, inverse, g.identity * m + h.identity, name=name or f"{g.name}x{h.name}")


BUILTIN_GROUPS = {
    "S3": lambda: symmetric_group(3),
    "S4": lambda: symmetric_group(4),
    "A4": lambda: alternating_group(4),
    "Q8": quaternion_group,
    "D4": lambda: dihedral_group(4),
    "D5": lambda: dihedral_group(5),
    "D6": lambda: dihedral_group(6),
}


def builtin_group(name: str) -> GroupTable:
    if name in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[name]()
    kind, digits = name[:1], name[1:]
    if kind == "Z" and digits.isdigit():
        return cyclic_group(int(digits))
    if kind == "D" and digits.isdigit():
        return dihedral_group(int(digits))
    if kind == "S" and digits.isdigit():
        return symmetric_group(int(digits))
    if kind == "A" and digits.isdigit():
        return alternating_group(int(digits))
    raise GroupError(f"unknown group {name!r}")


def semidirect_product(n: GroupTable, h: GroupTable, action, name="") -> GroupTable:
    """N x| H with (a, x)(b, y) = (a . phi_x(b), xy), ordered as (a, x) -> a * |H| + x.

    ``action[x]`` is the automorphism phi_x of N as an index array; it must
    satisfy phi_{xy} = phi_x o phi_y (checked through associativity).
    """
    act = np.asarray(action, dtype=np.int64).reshape(h.size, n.size)
    m = h.size
    a = np.arange(n.size)[:, None, None, None]
    x = np.arange(m)[None, :, None, None]
    b = np.arange(n.size)[None, None, :, None]
    y = np.arange(m)[None, None, None, :]
    mul = (n.mul[a, act[x, b]] * m + h.mul[x, y]).reshape(n.size * m, n.size * m)
    e = n.identity * m + h.identity
    inverse = np.empty(n.size * m, dtype=np.int64)
    rows, cols = np.nonzero(mul == e)
    inverse[rows] = cols
    return GroupTable(mul, inverse, e, name=name or f"{n.name}:{h.name}")


def _power_action(alpha, k):
    """phi_j = alpha^j for the cyclic group Z_k."""
    alpha = np.asarray(alpha, dtype=np.int64)
    out = [np.arange(alpha.size)]
    for _ in range(k - 1):
        out.append(alpha[out[-1]])
    return out


def metacyclic_group(m: int, k: int, r: int) -> GroupTable:
    """Z_m x| Z_k, the generator of Z_k acting by x -> r x."""
    if pow(r, k, m) != 1 % m:
        raise GroupError(f"{r}^{k} is not 1 mod {m}")
    return semidirect_product(cyclic_group(m), cyclic_group(k), _power_action((r * np.arange(m)) % m, k),
                              name=f"Z{m}:{k}[{r % m}]")


def dicyclic_group(n: int) -> GroupTable:
    """<a, x | a^2n = 1, x^2 = a^n, x a x^-1 = a^-1>, order 4n; elements a^k x^j as 2k + j."""
    if n < 2:
        raise GroupError("dicyclic group needs n >= 2")
    m = 2 * n
    k = np.arange(m)[:, None, None, None]
    j = np.arange(2)[None, :, None, None]
    l = np.arange(m)[None, None, :, None]
    i = np.arange(2)[None, None, None, :]
    power = np.where(j == 0, k + l, k - l) + np.where((j == 1) & (i == 1), n, 0)
    mul = ((power % m) * 2 + (j + i) % 2).reshape(2 * m, 2 * m)
    rows, cols = np.nonzero(mul == 0)
    inverse = np.empty(2 * m, dtype=np.int64)
    inverse[rows] = cols
    return GroupTable(mul, inverse, 0, name=f"Dic{n}")


def special_linear_2_3() -> GroupTable:
    """SL(2, 3) acting on the eight non-zero vectors of F_3^2."""
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    pos = {v: t for t, v in enumerate(vecs)}

    def perm(mat):
        (p, q), (r, s_) = mat
        return tuple(pos[((p * a + q * b) % 3, (r * a + s_ * b) % 3)] for a, b in vecs)

    return permutation_group([perm(((1, 1), (0, 1))), perm(((1, 0), (1, 1)))], 8, name="SL(2,3)")


def _abelian(*orders):
    g = cyclic_group(orders[0])
    for n in orders[1:]:
        g = direct_product(g, cyclic_group(n))
    return g


def _catalogue():
    """(order, constructor) for one group of each isomorphism type of order <= 24."""
    z = cyclic_group
    d = dihedral_group
    x = direct_product
    q8 = quaternion_group
    s3 = lambda: symmetric_group(3)  # noqa: E731

    def z4z2_by_z2(twist):
        # N = Z4 x Z2 with elements 2u + v; the involution fixes one generator and twists the other
        u, v = np.divmod(np.arange(8), 2)
        alpha = 2 * ((u + 2 * v) % 4) + v if twist == "centre" else 2 * u + (v + u) % 2
        return semidirect_product(_abelian(4, 2), z(2), _power_action(alpha, 2), name=f"(Z4xZ2):Z2[{twist}]")

    def z3_by_d4():
        # D4 acts on Z3 through the parity of its permutation action (kernel a Klein four-group)
        g = d(4)
        inv = np.array([0, 2, 1])
        return semidirect_product(z(3), g, [inv if _parity(p) else np.arange(3) for p in g.labels],
                                  name="Z3:D4")

    def z3z3_by_z2():
        a, b = np.divmod(np.arange(9), 3)
        return semidirect_product(_abelian(3, 3), z(2), _power_action(3 * (-a % 3) + (-b % 3), 2),
                                  name="(Z3xZ3):Z2")

    entries = [(n, (lambda n=n: z(n))) for n in range(1, 25)]
    entries += [
        (4, lambda: _abelian(2, 2)), (6, s3),
        (8, lambda: _abelian(4, 2)), (8, lambda: _abelian(2, 2, 2)), (8, lambda: d(4)), (8, q8),
        (9, lambda: _abelian(3, 3)), (10, lambda: d(5)),
        (12, lambda: _abelian(6, 2)), (12, lambda: d(6)), (12, lambda: alternating_group(4)),
        (12, lambda: dicyclic_group(3)), (14, lambda: d(7)),
        (16, lambda: _abelian(4, 4)), (16, lambda: z4z2_by_z2("twist")), (16, lambda: metacyclic_group(4, 4, -1)),
        (16, lambda: _abelian(8, 2)), (16, lambda: metacyclic_group(8, 2, 5)), (16, lambda: d(8)),
        (16, lambda: metacyclic_group(8, 2, 3)), (16, lambda: dicyclic_group(4)), (16, lambda: _abelian(4, 2, 2)),
        (16, lambda: x(z(2), d(4))), (16, lambda: x(z(2), q8())), (16, lambda: z4z2_by_z2("centre")),
        (16, lambda: _abelian(2, 2, 2, 2)),
        (18, lambda: _abelian(6, 3)), (18, lambda: d(9)), (18, lambda: x(z(3), s3())), (18, z3z3_by_z2),
        (20, lambda: _abelian(10, 2)), (20, lambda: d(10)), (20, lambda: dicyclic_group(5)),
        (20, lambda: metacyclic_group(5, 4, 2)),
        (21, lambda: metacyclic_group(7, 3, 2)), (22, lambda: d(11)),
        (24, lambda: metacyclic_group(3, 8, -1)), (24, special_linear_2_3), (24, lambda: dicyclic_group(6)),
        (24, lambda: x(z(4), s3())), (24, lambda: d(12)), (24, lambda: x(z(2), dicyclic_group(3))),
        (24, z3_by_d4), (24, lambda: _abelian(12, 2)), (24, lambda: x(z(3), d(4))), (24, lambda: x(z(3), q8())),
        (24, lambda: symmetric_group(4)), (24, lambda: x(z(2), alternating_group(4))),
        (24, lambda: x(_abelian(2, 2), s3())), (24, lambda: _abelian(6, 2, 2)),
    ]
    return sorted(entries, key=lambda e: e[0])


def small_groups(max_order: int = 24) -> list[GroupTable]:
    """One group of each isomorphism type of order <= max_order (max_order <= 24)."""
    if max_order > 24:
        raise GroupError("the catalogue stops at order 24")
    return [make() for order, make in _catalogue() if order <= max_order]
