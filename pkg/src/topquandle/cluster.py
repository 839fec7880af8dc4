"""Neighbourhood graphs, single-linkage components and local PCA dimension."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


class UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def __len__(self):
        return self.parent.shape[0]

    def grow(self, extra: int):
        start = len(self)
        self.parent = np.concatenate([self.parent, np.arange(start, start + extra, dtype=np.int64)])
        return start

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return int(i)

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        # smaller index becomes the root, which keeps labels order-stable
        if ri < rj:
            self.parent[rj] = ri
        else:
            self.parent[ri] = rj
        return True

    def union_pairs(self, pairs):
        for i, j in pairs:
            self.union(int(i), int(j))

    def roots(self) -> np.ndarray:
        p = self.parent
        while True:
            q = p[p]
            if np.array_equal(q, p):
                return p.copy()
            p = q
            self.parent = p

    def labels(self) -> np.ndarray:
        """Component ids 0..c-1 numbered by first appearance."""
        roots = self.roots()
        _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        return order[inverse]


def eps_pairs(variants, eps: float) -> np.ndarray:
    """Pairs (i, j), i < j, whose distance is below eps.

    ``variants`` is a list of (N, F) feature arrays; entry 0 is the stored
    representative and the others are alternative representatives of the
    same points (the distance between two points is the minimum over
    variants of the first).  Returns an (m, 2) int array.
    """
    base = np.asarray(variants[0])
    tree = cKDTree(base)
    found = [tree.query_pairs(eps, output_type="ndarray")]
    for v in variants[1:]:
        other = cKDTree(np.asarray(v))
        m = tree.sparse_distance_matrix(other, eps, output_type="ndarray")
        if len(m):
            ij = np.stack([m["i"], m["j"]], axis=1)
            ij = ij[ij[:, 0] != ij[:, 1]]
            found.append(np.sort(ij, axis=1))
    pairs = np.concatenate([f.reshape(-1, 2) for f in found]).astype(np.int64)
    if len(pairs) == 0:
        return pairs.reshape(0, 2)
    return np.unique(pairs, axis=0)


def knn(variants, k: int, tree=None):
    """k nearest neighbours (self excluded) under the variant-min distance.

    Returns (dist, idx) arrays of shape (N, k'), k' = min(k, N - 1), sorted
    by distance.
    """
    base = np.asarray(variants[0])
    n = base.shape[0]
    k = min(k, n - 1)
    if k <= 0:
        return np.zeros((n, 0)), np.zeros((n, 0), dtype=np.int64)
    tree = tree or cKDTree(base)
    kk = min(k + 1, n)
    ds, js = [], []
    for v in variants:
        d, j = tree.query(np.asarray(v), k=kk)
        ds.append(d.reshape(n, kk))
        js.append(j.reshape(n, kk))
    d = np.concatenate(ds, axis=1)
    j = np.concatenate(js, axis=1)
    self_hit = j == np.arange(n)[:, None]
    d = np.where(self_hit, np.inf, d)
    out_d = np.empty((n, k))
    out_j = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        order = np.lexsort((j[i], d[i]))
        seen = set()
        c = 0
        for t in order:
            jj = int(j[i, t])
            if jj in seen or not np.isfinite(d[i, t]):
                continue
            seen.add(jj)
            out_d[i, c] = d[i, t]
            out_j[i, c] = jj
            c += 1
            if c == k:
                break
        if c < k:
            out_d[i, c:] = np.inf
            out_j[i, c:] = -1
    return out_d, out_j


def local_dimension(neighbourhood, threshold: float, floor: float):
    """PCA dimension of a point set: singular values above threshold * largest.

    Returns (dim, normalised singular values).  A spread below ``floor``
    counts as dimension 0.
    """
    pts = np.asarray(neighbourhood, dtype=float)
    if pts.shape[0] < 2:
        return 0, []
    s = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    if s[0] <= floor:
        return 0, [0.0] * len(s)
    rel = s / s[0]
    return int(np.sum(rel > threshold)), rel.tolist()
