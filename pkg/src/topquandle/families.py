"""Closed-form solution families used as oracles for the numerical solver.

* On S^2 the fixed-point equations of the trefoil and figure-eight reduce,
  for non-antipodal pairs, to angle conditions on the great circle through
  the pair.  ``great_circle_oracle`` recovers those angles by scanning the
  equations on the circle, without using the solver.
* On the parabolic class of SL(2, C) every non-diagonal trefoil solution
  has the form (g, h(alpha)) given by ``sl2_solution_family``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .geometric import canonical_sl2, sl2_op, sphere_op

FAMILIES = ("trefoil", "figure_eight")


class OracleError(ValueError):
    pass


def _circle(origin, other):
    e1 = np.asarray(origin, dtype=float)
    e1 = e1 / np.linalg.norm(e1)
    other = np.asarray(other, dtype=float)
    other = other / np.linalg.norm(other)
    w = other - np.dot(other, e1) * e1
    norm = np.linalg.norm(w)
    if norm < 1e-9:
        raise OracleError("points are equal or antipodal; the great circle is not unique")
    return e1, w / norm


def _equations(family):
    """Pairs (lhs, rhs) of maps (a, b) -> point, with the angle origin."""
    op = sphere_op
    if family == "trefoil":
        # b * (a * b) = a ; (a * b) * a = b ; angles measured from b
        eqs = [(lambda a, b: op(b, op(a, b)), lambda a, b: a),
               (lambda a, b: op(op(a, b), a), lambda a, b: b)]
        return eqs, "b"
    if family == "figure_eight":
        # b * (a * (b * a)) = a ; (a * (b * a)) * b = b * a ; angles measured from a
        eqs = [(lambda a, b: op(b, op(a, op(b, a))), lambda a, b: a),
               (lambda a, b: op(op(a, op(b, a)), b), lambda a, b: op(b, a))]
        return eqs, "a"
    raise OracleError(f"unknown family {family!r}; expected one of {FAMILIES}")


def great_circle_oracle(family: str, a, b, grid: int = 4096, tol: float = 1e-13) -> list[float]:
    """Angles theta in (-pi, pi] at which the circle pair solves the family's equations.

    The circle is the great circle through ``a`` and ``b``.  The origin
    point sits at angle 0 and the free point at angle theta; each equation
    becomes ``sin(angle(lhs) - angle(rhs)) = 0`` with ``cos > 0``.  Roots of
    the first equation are bracketed on a grid and polished with Brent's
    method; the rest of the system is checked at each root.
    """
    eqs, origin = _equations(family)
    e1, e2 = _circle(a, b) if origin == "a" else _circle(b, a)

    def point(theta):
        theta = np.asarray(theta, dtype=float)[..., None]
        return np.cos(theta) * e1 + np.sin(theta) * e2

    def angle(p):
        return np.arctan2(p @ e2, p @ e1)

    def pair(theta):
        free = point(theta)
        fixed = np.broadcast_to(e1, free.shape)
        return (fixed, free) if origin == "a" else (free, fixed)

    def gap(k, theta):
        lhs, rhs = eqs[k]
        return float(angle(lhs(*pair(theta))) - angle(rhs(*pair(theta))))

    shift = math.sqrt(2) * 1e-3
    thetas = -math.pi + shift + 2 * math.pi * np.arange(grid + 1) / grid
    lhs, rhs = eqs[0]
    vals = np.sin(angle(lhs(*pair(thetas))) - angle(rhs(*pair(thetas))))
    roots = []
    for k in range(grid):
        lo, hi = thetas[k], thetas[k + 1]
        if vals[k] == 0.0:
            cand = lo
        elif vals[k] * vals[k + 1] < 0:
            cand = brentq(lambda t: math.sin(gap(0, t)), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        else:
            continue
        if math.cos(gap(0, cand)) <= 0:
            continue
        if all(abs(math.sin(gap(j, cand))) < 1e-9 and math.cos(gap(j, cand)) > 0 for j in range(1, len(eqs))):
            roots.append(math.remainder(cand, 2 * math.pi))
    out = []
    for r in sorted(math.pi if r <= -math.pi + tol else r for r in roots):
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(float(r))
    return out


def oracle_report(family: str, a=None, b=None, seed: int = 0) -> dict:
    """Oracle angles for a given pair, or for a random pair on S^2 when none is given."""
    if a is None or b is None:
        a, b = np.random.default_rng(seed).standard_normal((2, 3))
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    return {"family": family, "a": a.tolist(), "b": b.tolist(), "angles": great_circle_oracle(family, a, b)}


def pair_angle(family: str, a, b) -> float:
    """Angle of the free point seen from the origin point, as the oracle measures it."""
    _, origin = _equations(family)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    base, free = (a, b) if origin == "a" else (b, a)
    base = base / np.linalg.norm(base)
    free = free / np.linalg.norm(free)
    # atan2 keeps full precision near 0 and pi, where acos loses half the digits
    c = float(np.dot(base, free))
    return float(math.atan2(np.linalg.norm(free - c * base), c))


def _perp(g):
    g = np.asarray(g, dtype=complex)
    s = np.sum(np.abs(g) ** 2, axis=-1)
    a_t = np.conj(g[..., 0]) / s
    b_t = np.conj(g[..., 1]) / s
    return np.stack([-b_t, a_t], axis=-1)


def sl2_solution_family(g, alpha):
    """h = [alpha a - b~, alpha b + a~] for g = [a, b], where x~ = conj(x) / (|a|^2 + |b|^2).

    Every such (g, h) solves (g * h) * g = h; ``g`` and ``alpha`` broadcast.
    """
    g = np.asarray(g, dtype=complex)
    alpha = np.asarray(alpha, dtype=complex)
    return canonical_sl2(alpha[..., None] * g + _perp(g))


def sl2_family_distance(g, h):
    """Distance from h to the family {h(alpha)} over g, minimised over alpha and the sign of h.

    h(alpha) is affine in alpha, so the optimum is a one-variable least
    squares problem.
    """
    g = np.asarray(g, dtype=complex)
    h = np.asarray(h, dtype=complex)
    perp = _perp(g)
    gg = np.sum(np.abs(g) ** 2, axis=-1)
    best = None
    for s in (1, -1):
        t = s * h - perp
        alpha = np.sum(t * np.conj(g), axis=-1) / gg
        d = np.linalg.norm(t - alpha[..., None] * g, axis=-1)
        best = d if best is None else np.minimum(best, d)
    return best


def sl2_diagonal_distance(g, h):
    g = np.asarray(g, dtype=complex)
    h = np.asarray(h, dtype=complex)
    return np.minimum(np.linalg.norm(g - h, axis=-1), np.linalg.norm(g + h, axis=-1))


def sl2_family_check(trials: int, seed: int = 0) -> float:
    """Largest residual of (g * h) * g = h over random g and alpha (up to the sign of h)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((trials, 2)) + 1j * rng.standard_normal((trials, 2))
    alpha = rng.standard_normal(trials) + 1j * rng.standard_normal(trials)
    h = sl2_solution_family(g, alpha)
    lhs = sl2_op(sl2_op(g, h), g)
    err = np.minimum(np.linalg.norm(lhs - h, axis=-1), np.linalg.norm(lhs + h, axis=-1))
    return float(err.max())
