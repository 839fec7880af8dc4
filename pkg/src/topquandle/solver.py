"""Numerical fixed-point varieties of braids acting on continuous quandles.

Pipeline of ``sample_solutions``:

1. random restarts (some on the diagonal) refined by damped Gauss-Newton in
   tangent coordinates of Q^n, central finite-difference Jacobians;
2. bridging: nearby clusters are joined only through continuation walks
   of refined solutions whose consecutive points are closer than
   ``cluster_eps``;
3. single-linkage components of the ``cluster_eps`` graph on all retained
   points;
4. local probes around a few base points per component and a PCA count of
   the significant singular values of each base's k nearest neighbours.

Every stored point is a refined solution, so bridge and probe points are
samples of the variety like any other.
"""

from __future__ import annotations

import csv
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .braid import BraidWord, act
from .cluster import UnionFind, eps_pairs, local_dimension
from .finite import default_workers
from .geometric import GeometricQuandle

SOURCE_RESTART, SOURCE_BRIDGE, SOURCE_PROBE = 0, 1, 2
log = logging.getLogger(__name__)

SOURCE_NAMES = ("restart", "bridge", "probe")
LINE_SEARCH = (1.0, 0.5, 0.25, 0.125, 0.0625)


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    restarts: int = 5000
    refine_tol: float = 1e-10
    max_iters: int = 200
    cluster_eps: float = 0.05
    dim_svd_threshold: float = 0.1
    seed: int = 0
    diagonal_starts: int = 100
    fd_step: float = 1e-6
    rcond: float = 1e-8
    max_step: float = 0.5
    probe_bases: int = 8
    probe_radius: float | None = None      # default cluster_eps / 5
    bridge: bool = True
    bridge_spacing: float = 0.5            # interpolant spacing as a fraction of cluster_eps
    bridge_neighbours: int = 24
    bridge_attempts: int = 3
    bridge_rounds: int = 64
    dim_floor: float = 1e-9
    chunk: int = 500
    workers: int | None = None

    def __post_init__(self):
        positive = ("restarts", "refine_tol", "max_iters", "cluster_eps", "dim_svd_threshold",
                    "fd_step", "rcond", "max_step", "bridge_spacing", "chunk")
        for name in positive:
            if not getattr(self, name) > 0:
                raise SolverError(f"{name} must be positive")
        if self.cluster_eps < 1e6 * self.refine_tol:
            raise SolverError("cluster_eps must exceed refine_tol by at least six orders of magnitude")
        if self.diagonal_starts < 0 or self.probe_bases < 0:
            raise SolverError("counts must be non-negative")
        if self.probe_radius is not None and not 0 < self.probe_radius < self.cluster_eps:
            raise SolverError("probe_radius must lie in (0, cluster_eps)")

    @property
    def radius(self) -> float:
        return self.probe_radius if self.probe_radius is not None else self.cluster_eps / 5

    def to_json(self) -> dict:
        doc = asdict(self)
        doc.pop("workers")
        return doc


@dataclass
class SolutionCloud:
    word: BraidWord
    quandle: GeometricQuandle
    config: SolveConfig
    points: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    sources: np.ndarray = field(repr=False)
    dims: list = field(default_factory=list)
    dim_estimates: list = field(default_factory=list)
    singular_values: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def component_count(self) -> int:
        return len(self.dims)

    @property
    def component_sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.component_count).astype(int).tolist()

    def __len__(self):
        return int(self.points.shape[0])


class ProductManifold:
    """Q^n with the braid's fixed-point residual and tangent-coordinate plumbing."""

    def __init__(self, word: BraidWord, q: GeometricQuandle):
        self.word = word
        self.q = q
        self.n = word.strands
        self.dim = self.n * q.dim
        self.signed = len(q.sign_variants()) > 1
        self.ambient_dim = self.n * int(np.prod(q.point_shape)) * (2 if q.dtype is complex else 1)

    def _lead(self, x):
        return x.shape[:x.ndim - self.q.point_ndim - 1]

    def features(self, x):
        return self.q.features(x)

    def flat_features(self, x):
        f = self.q.features(x)
        return f.reshape(f.shape[:-2] + (-1,))

    def residual_vector(self, x, signs=None):
        """act(x) - x in feature coordinates; on sign-quotient quandles the
        representative of each factor is matched to ``signs`` (picked per
        factor at x when not given)."""
        fy = self.q.features(act(self.word, x, self.q))
        fx = self.q.features(x)
        if self.signed:
            if signs is None:
                plus = np.linalg.norm(fy - fx, axis=-1)
                minus = np.linalg.norm(fy + fx, axis=-1)
                signs = np.where(minus < plus, -1.0, 1.0)
            fx = fx * signs[..., None]
        r = fy - fx
        return r.reshape(r.shape[:-2] + (-1,)), signs

    def residual(self, x):
        return np.linalg.norm(self.residual_vector(x)[0], axis=-1)

    def basis(self, x):
        return self.q.tangent_basis(x)

    def retract(self, x, basis, xi):
        xi = xi.reshape(xi.shape[:-1] + (self.n, self.q.dim))
        return self.q.retract(x, basis, xi)

    def distance(self, x, y):
        """Product metric: root sum of squared per-factor distances."""
        fx, fy = self.q.features(x), self.q.features(y)
        d = np.linalg.norm(fx - fy, axis=-1)
        if self.signed:
            d = np.minimum(d, np.linalg.norm(fx + fy, axis=-1))
        return np.sqrt(np.sum(d * d, axis=-1))

    def variants(self, x):
        """Flat feature arrays of every representative of the points in x."""
        f = self.q.features(x)
        if not self.signed:
            return [f.reshape(f.shape[:-2] + (-1,))]
        out = []
        for signs in np.ndindex(*(2,) * self.n):
            s = 1.0 - 2.0 * np.array(signs, dtype=float)
            g = f * s[:, None]
            out.append(g.reshape(g.shape[:-2] + (-1,)))
        return out

    def align(self, ref, y):
        return self.q.align(ref, y)

    def project(self, y):
        return self.q.project(y)

    def canonical(self, x):
        return self.q.canonical(x)

    def in_domain(self, x):
        return self.q.in_domain(x).all(axis=-1)

    def diagonal(self, a):
        return np.stack([a] * self.n, axis=-1 - self.q.point_ndim)


def _expand(basis):
    return None if basis is None else basis[:, None]


def _damped_step(jac, r, norm, rcond):
    """Levenberg-Marquardt step with damping equal to the residual norm.

    Plain pseudo-inverse steps blow up next to positive-dimensional
    solution sets, where off-variety singular values are small but above
    any rank cutoff; damping by ||r|| suppresses them while keeping fast
    local convergence.
    """
    u, s, vt = np.linalg.svd(jac, full_matrices=False)
    coeff = s / (s * s + norm[:, None])
    coeff = np.where(s > rcond * s[:, :1], coeff, 0.0)
    return -np.einsum("aji,aj->ai", vt, coeff * np.einsum("aij,ai->aj", u, r))


def refine_batch(word: BraidWord, x0, q: GeometricQuandle, config: SolveConfig = SolveConfig(),
                 manifold: ProductManifold | None = None):
    """Gauss-Newton refinement of a stack of tuples (N, n, *point_shape).

    Returns (points, residuals, converged, iterations).  Points that stop
    improving or run out of iterations are reported as not converged.
    """
    pm = manifold or ProductManifold(word, q)
    x = np.array(x0, dtype=q.dtype, copy=True)
    N = x.shape[0]
    iters = np.zeros(N, dtype=np.int64)
    status = np.zeros(N, dtype=np.int8)   # 0 active, 1 converged, 2 failed
    if N == 0:
        return x, np.zeros(0), np.zeros(0, dtype=bool), iters
    r, signs = pm.residual_vector(x)
    norm = np.linalg.norm(r, axis=-1)
    h = config.fd_step
    D = pm.dim
    pert = np.concatenate([np.eye(D), -np.eye(D)]) * h
    ts = np.array(LINE_SEARCH)
    for it in range(config.max_iters + 1):
        status[(status == 0) & (norm < config.refine_tol)] = 1
        active = np.flatnonzero(status == 0)
        if active.size == 0 or it == config.max_iters:
            break
        xa = x[active]
        sa = None if signs is None else signs[active]
        sb = None if sa is None else sa[:, None]
        basis = pm.basis(xa)
        xp = pm.retract(xa[:, None], _expand(basis), np.broadcast_to(pert, (active.size,) + pert.shape))
        rp, _ = pm.residual_vector(xp, sb)
        jac = np.swapaxes(rp[:, :D] - rp[:, D:], 1, 2) / (2 * h)
        step = _damped_step(jac, r[active], norm[active], config.rcond)
        length = np.linalg.norm(step, axis=-1)
        step *= np.minimum(1.0, config.max_step / np.maximum(length, 1e-300))[:, None]
        xt = pm.retract(xa[:, None], _expand(basis), ts[None, :, None] * step[:, None, :])
        rt, _ = pm.residual_vector(xt, sb)
        nt = np.linalg.norm(rt, axis=-1)
        better = nt < norm[active][:, None]
        pick = np.where(better.any(axis=1), better.argmax(axis=1), -1)
        moved = pick >= 0
        status[active[~moved]] = 2
        ok = active[moved]
        x[ok] = xt[moved, pick[moved]]
        r[ok] = rt[moved, pick[moved]]
        norm[ok] = nt[moved, pick[moved]]
        iters[ok] += 1
    converged = status == 1
    return x, norm, converged, iters


def refine(word: BraidWord, x0, q: GeometricQuandle, config: SolveConfig = SolveConfig()):
    """Refine one tuple; returns the refined tuple or None when it fails to converge."""
    x, _, ok, _ = refine_batch(word, np.asarray(x0)[None], q, config)
    return x[0] if ok[0] else None


def residual(word: BraidWord, x, q: GeometricQuandle):
    """||act(word, x) - x|| in the product metric (vectorised over leading axes)."""
    return ProductManifold(word, q).residual(np.asarray(x))


# -- sampling -----------------------------------------------------------------

def restart_points(word: BraidWord, q: GeometricQuandle, config: SolveConfig, indices):
    pm = ProductManifold(word, q)
    out = np.empty((len(indices), pm.n) + q.point_shape, dtype=q.dtype)
    for row, idx in enumerate(indices):
        rng = np.random.default_rng([config.seed, int(idx)])
        if idx < config.diagonal_starts:
            out[row] = pm.diagonal(q.random_points(rng, 1)[0])
        else:
            out[row] = q.random_points(rng, pm.n)
    return out


def _refine_chunk(word, q, config, indices):
    x0 = restart_points(word, q, config, indices)
    return refine_batch(word, x0, q, config)


def _run_restarts(word, q, config):
    bounds = [np.arange(s, min(s + config.chunk, config.restarts))
              for s in range(0, config.restarts, config.chunk)]
    workers = config.workers or default_workers()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _refine_chunk(word, q, config, b), bounds))
    else:
        parts = [_refine_chunk(word, q, config, b) for b in bounds]
    x = np.concatenate([p[0] for p in parts])
    norm = np.concatenate([p[1] for p in parts])
    ok = np.concatenate([p[2] for p in parts])
    iters = np.concatenate([p[3] for p in parts])
    return x, norm, ok, iters


def _walk(pm, starts, targets, config):
    """Continuation walks from each start towards the matching target.

    Every walk repeatedly moves a step of ``bridge_spacing * cluster_eps``
    from its current solution towards the target and refines the result, so
    each refinement starts next to the variety.  A walk succeeds once it is
    within ``cluster_eps`` of the target; it fails when a refinement does
    not converge, jumps by ``cluster_eps`` or more, or stops making
    progress.  Returns, per walk, the array of visited points or None.

    On sign-quotient quandles the target representative is taken as given:
    the lift of a component to representatives can have several sheets, and
    a walk can only reach the lift on its own sheet.
    """
    eps = config.cluster_eps
    step = eps * config.bridge_spacing
    m = starts.shape[0]
    if m == 0:
        return []

    def gap(x, t):
        if pm.signed:
            return np.sqrt(np.sum(np.abs(x - t) ** 2, axis=tuple(range(1, x.ndim))))
        return pm.distance(x, t)

    cur = starts.copy()
    if not pm.signed:
        targets = pm.align(cur, targets)
    dist = gap(cur, targets)
    budget = np.ceil(3 * dist / step).astype(int) + 10
    walks = [[] for _ in range(m)]
    state = np.zeros(m, dtype=np.int8)            # 0 walking, 1 arrived, 2 failed
    state[pm.distance(cur, targets) < eps] = 1
    taken = np.zeros(m, dtype=int)
    while (state == 0).any():
        live = np.flatnonzero(state == 0)
        c = cur[live]
        t = targets[live] if pm.signed else pm.align(c, targets[live])
        delta = t - c
        length = np.linalg.norm(delta.reshape(len(live), -1), axis=-1)
        frac = np.minimum(1.0, step / np.maximum(length, 1e-300))
        seeds = pm.project(c + frac.reshape((-1,) + (1,) * (c.ndim - 1)) * delta)
        new, _, ok, _ = refine_batch(pm.word, seeds, pm.q, config, pm)
        jump = pm.distance(new, c)
        nd = gap(new, targets[live])
        good = ok & (jump < eps) & (nd < dist[live] - 0.1 * step)
        taken[live] += 1
        for k, g, x in zip(live, good, new):
            if g:
                walks[k].append(x)
        cur[live[good]] = new[good]
        dist[live[good]] = nd[good]
        state[live[~good]] = 2
        arrived = pm.distance(new, targets[live]) < eps
        state[live[good & arrived]] = 1
        state[(state == 0) & (taken >= budget)] = 2
    return [np.array(w).reshape((-1,) + starts.shape[1:]) if s_ == 1 else None
            for w, s_ in zip(walks, state)]


def _sign_lifts(pm, x):
    """All representatives of x obtained by flipping factor signs."""
    if not pm.signed:
        return x[None]
    out = []
    for signs in np.ndindex(*(2,) * pm.n):
        s = 1.0 - 2.0 * np.array(signs, dtype=float)
        out.append(x * s.reshape((pm.n,) + (1,) * pm.q.point_ndim))
    return np.stack(out)


def _walk_bridges(pm, pts, edges, config):
    """Per edge (i, j): the points of a successful walk from i to some lift of j, or None."""
    if not edges:
        return []
    starts, targets, owner = [], [], []
    for e, (i, j) in enumerate(edges):
        lifts = _sign_lifts(pm, pts[j])
        starts.extend([pts[i]] * len(lifts))
        targets.extend(lifts)
        owner.extend([e] * len(lifts))
    walks = _walk(pm, np.array(starts), np.array(targets), config)
    out = [None] * len(edges)
    for e, w in zip(owner, walks):
        if w is not None and (out[e] is None or len(w) < len(out[e])):
            out[e] = w
    return out


def _outgoing_edges(pm, base, uf, nbr_d, nbr_j, failed_pairs, pair_failures, attempts, trees):
    """Borůvka step: for each current cluster its shortest usable edge to another cluster."""
    nb = base.shape[0]
    roots = np.array([uf.find(i) for i in range(nb)])
    best = {}

    def usable(i, j):
        ri, rj = roots[i], roots[j]
        if ri == rj or (min(i, j), max(i, j)) in failed_pairs:
            return False
        return pair_failures[(min(ri, rj), max(ri, rj))] < attempts

    order = np.argsort(nbr_d, axis=None, kind="stable")
    rows, cols = np.unravel_index(order, nbr_d.shape)
    for i, c in zip(rows, cols):
        j = nbr_j[i, c]
        if j < 0 or not np.isfinite(nbr_d[i, c]) or not usable(i, j):
            continue
        for r in (roots[i], roots[j]):
            if r not in best:
                best[r] = (float(nbr_d[i, c]), min(i, j), max(i, j))
    cluster_roots = np.unique(roots)
    if len(cluster_roots) > 1:
        # clusters whose neighbour lists are exhausted: search the complement directly
        for r in cluster_roots:
            if r in best:
                continue
            members = np.flatnonzero(roots == r)
            blocked = {ro for ro in cluster_roots
                       if ro == r or pair_failures[(min(r, ro), max(r, ro))] >= attempts}
            others = np.flatnonzero(~np.isin(roots, list(blocked)))
            if others.size == 0:
                continue
            tree = cKDTree(trees[0][others])
            kq = min(8, others.size)
            cand = []
            for v in trees:
                d, j = tree.query(v[members], k=kq)
                d = d.reshape(members.size, kq)
                j = others[j.reshape(members.size, kq)]
                for a in range(members.size):
                    for b in range(kq):
                        cand.append((float(d[a, b]), int(members[a]), int(j[a, b])))
            cand.sort()
            for d, i, j in cand:
                if usable(i, j):
                    best[r] = (d, min(i, j), max(i, j))
                    break
    edges = sorted(set(best.values()))
    seen_pairs = set()
    out = []
    for d, i, j in edges:
        key = (min(roots[i], roots[j]), max(roots[i], roots[j]))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        out.append((i, j))
    return out, roots


def _bridge(pm, base, config, diagnostics):
    """Join restart clusters through refined chains; returns (extra points, union pairs)."""
    nb = base.shape[0]
    uf = UnionFind(nb)
    variants = pm.variants(base)
    uf.union_pairs(eps_pairs(variants, config.cluster_eps))
    extra, links = [], []
    if not config.bridge or nb < 2:
        return extra, links, uf
    tree = cKDTree(variants[0])
    k = min(config.bridge_neighbours, nb - 1)
    ds, js = [], []
    for v in variants:
        d, j = tree.query(v, k=k + 1)
        ds.append(d.reshape(nb, k + 1))
        js.append(j.reshape(nb, k + 1))
    nbr_d = np.concatenate(ds, axis=1)
    nbr_j = np.concatenate(js, axis=1)
    nbr_d = np.where(nbr_j == np.arange(nb)[:, None], np.inf, nbr_d)
    failed_pairs = set()
    pair_failures = Counter()
    attempted = succeeded = 0
    for _ in range(config.bridge_rounds):
        edges, roots = _outgoing_edges(pm, base, uf, nbr_d, nbr_j, failed_pairs, pair_failures,
                                       config.bridge_attempts, variants)
        if not edges:
            break
        chains = _walk_bridges(pm, base, edges, config)
        attempted += len(edges)
        for (i, j), chain in zip(edges, chains):
            if chain is None:
                failed_pairs.add((i, j))
                ri, rj = roots[i], roots[j]
                pair_failures[(min(ri, rj), max(ri, rj))] += 1
                continue
            succeeded += 1
            uf.union(i, j)
            extra.append(chain)
            links.append((i, j))
    diagnostics["bridges_attempted"] = attempted
    diagnostics["bridges_built"] = succeeded
    return extra, links, uf


def _neighbourhood(pm, points, members, base_idx, k):
    """Aligned flat features of the base and its k - 1 nearest component members."""
    d = pm.distance(points[members], points[base_idx][None])
    order = np.lexsort((members, d))[:k]
    chosen = points[members[order]]
    f = pm.features(chosen)
    if pm.signed:
        ref = pm.features(points[base_idx])[None]
        flip = np.linalg.norm(f + ref, axis=-1) < np.linalg.norm(f - ref, axis=-1)
        f = np.where(flip[..., None], -f, f)
    return f.reshape(f.shape[0], -1)


def _components(pm, points, eps):
    uf = UnionFind(points.shape[0])
    uf.union_pairs(eps_pairs(pm.variants(points), eps))
    return uf.labels()


def sample_solutions(word: BraidWord, q: GeometricQuandle, config: SolveConfig = SolveConfig()) -> SolutionCloud:
    pm = ProductManifold(word, q)
    eps = config.cluster_eps
    x, _, ok, iters = _run_restarts(word, q, config)
    inside = pm.in_domain(x)
    keep = ok & inside
    diagnostics = {
        "restarts": int(config.restarts),
        "converged": int(ok.sum()),
        "failed": int((~ok).sum()),
        "outside_domain": int((ok & ~inside).sum()),
        "mean_iterations": float(iters[ok].mean()) if ok.any() else 0.0,
    }
    base = x[keep]
    log.info("restarts: %d converged, %d kept", diagnostics["converged"], base.shape[0])
    if base.shape[0] == 0:
        diagnostics.update(bridges_attempted=0, bridges_built=0, probes_kept=0, probes_rejected=0)
        empty = np.zeros((0, pm.n) + q.point_shape, dtype=q.dtype)
        return SolutionCloud(word, q, config, empty, np.zeros(0), np.zeros(0, dtype=np.int64),
                             np.zeros(0, dtype=np.int8), diagnostics=diagnostics)

    extra, _, _ = _bridge(pm, base, config, diagnostics)
    chains = np.concatenate(extra) if extra else np.zeros((0,) + base.shape[1:], dtype=q.dtype)
    points = np.concatenate([base, chains])
    sources = np.concatenate([np.full(base.shape[0], SOURCE_RESTART, np.int8),
                              np.full(chains.shape[0], SOURCE_BRIDGE, np.int8)])
    labels = _components(pm, points, eps)
    log.info("bridging: %d chain points, %d components", chains.shape[0], labels.max() + 1)

    # probes: refine small random displacements of a few base points per component
    k = 4 * pm.ambient_dim
    rng = np.random.default_rng([config.seed, 1 << 20])
    bases = []
    for c in range(labels.max() + 1):
        members = np.flatnonzero((labels == c) & (sources == SOURCE_RESTART))
        if members.size == 0:
            members = np.flatnonzero(labels == c)
        take = np.unique(np.linspace(0, members.size - 1, min(config.probe_bases, members.size)).round().astype(int))
        bases.extend(members[take].tolist())
    probes = []
    if bases and config.probe_bases:
        bpts = points[bases]
        basis = pm.basis(bpts)
        xi = rng.standard_normal((len(bases), k, pm.dim))
        xi *= config.radius / np.linalg.norm(xi, axis=-1, keepdims=True)
        seeds = pm.retract(bpts[:, None], _expand(basis), xi).reshape((-1,) + bpts.shape[1:])
        refined, _, pok, _ = refine_batch(word, seeds, q, config, pm)
        owner = np.repeat(np.arange(len(bases)), k)
        close = pm.distance(refined, bpts[owner]) < eps
        good = pok & close
        probes = refined[good]
        diagnostics["probes_kept"] = int(good.sum())
        diagnostics["probes_rejected"] = int((~good).sum())
    else:
        diagnostics["probes_kept"] = diagnostics["probes_rejected"] = 0
    if len(probes):
        points = np.concatenate([points, probes])
        sources = np.concatenate([sources, np.full(len(probes), SOURCE_PROBE, np.int8)])
        labels = _components(pm, points, eps)

    # canonical storage; residuals recomputed on what is stored
    points = pm.canonical(points)
    residuals = pm.residual(points)
    good = residuals < config.refine_tol
    diagnostics["dropped_after_canonical"] = int((~good).sum())
    if not good.all():
        points, sources, residuals = points[good], sources[good], residuals[good]
        base_map = np.cumsum(good) - 1
        bases = [int(base_map[b]) for b in bases if good[b]]
        labels = _components(pm, points, eps)

    count = labels.max() + 1
    estimates, profiles = [[] for _ in range(count)], [[] for _ in range(count)]
    for b in bases:
        c = labels[b]
        members = np.flatnonzero(labels == c)
        kk = min(k + 1, members.size)
        hood = _neighbourhood(pm, points, members, b, kk)
        d, prof = local_dimension(hood, config.dim_svd_threshold, config.dim_floor)
        estimates[c].append(min(d, pm.dim))
        profiles[c].append(prof)
    log.info("probes kept %d; dimension estimates %s", diagnostics["probes_kept"], estimates)
    dims = []
    for est in estimates:
        if not est:
            dims.append(0)
            continue
        tally = Counter(est)
        top = max(tally.values())
        dims.append(min(d for d, v in tally.items() if v == top))
    sizes = np.bincount(labels, minlength=count)
    first = np.full(count, len(labels))
    np.minimum.at(first, labels, np.arange(len(labels)))
    order = sorted(range(count), key=lambda c: (dims[c], -sizes[c], first[c]))
    remap = np.empty(count, dtype=np.int64)
    remap[order] = np.arange(count)
    labels = remap[labels]
    svals = []
    for c in order:
        prof = profiles[c]
        if prof:
            width = min(len(p) for p in prof)
            svals.append(np.median(np.array([p[:width] for p in prof]), axis=0).tolist())
        else:
            svals.append([])
    return SolutionCloud(word, q, config, points, residuals, labels, sources,
                         dims=[dims[c] for c in order], dim_estimates=[estimates[c] for c in order],
                         singular_values=svals, diagnostics=diagnostics)


def report(cloud: SolutionCloud) -> dict:
    doc = {"word": str(cloud.word), "quandle": cloud.quandle.selector}
    if len(cloud) == 0:
        doc.update(components=0, warning="no solutions retained")
    else:
        res = cloud.residuals
        counts = [np.bincount(cloud.sources[cloud.labels == c], minlength=3).tolist()
                  for c in range(cloud.component_count)]
        doc.update(
            components=cloud.component_count,
            dims=list(cloud.dims),
            component_sizes=cloud.component_sizes,
            component_sources=[dict(zip(SOURCE_NAMES, c)) for c in counts],
            dim_estimates=cloud.dim_estimates,
            singular_values=cloud.singular_values,
            residuals={"count": int(res.size), "max": float(res.max()),
                       "mean": float(res.mean()), "median": float(np.median(res))},
        )
    doc["diagnostics"] = cloud.diagnostics
    doc["config"] = cloud.config.to_json()
    doc["seed"] = cloud.config.seed
    return doc


def write_points_csv(cloud: SolutionCloud, path):
    """One row per point: component, source, residual, then flattened real coordinates."""
    flat = cloud.quandle.flatten_real(cloud.points)
    flat = flat.reshape(flat.shape[0], -1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["component", "source", "residual"] + [f"x{i}" for i in range(flat.shape[1])])
        for lab, src, res, row in zip(cloud.labels, cloud.sources, cloud.residuals, flat):
            w.writerow([int(lab), SOURCE_NAMES[src], repr(float(res))] + [repr(float(v)) for v in row])
