"""Continuous quandles: spheres, complex spheres, projective spaces,
Grassmannians and the SL(2, C) conjugacy class of [[1, 0], [1, 1]].

Points are plain numpy arrays (real for S^d, complex otherwise) and every
operation is vectorised over leading axes.  Each quandle class also knows
the manifold plumbing the numerical solver needs: tangent bases, a
retraction, an embedding into R^F whose Euclidean distance is the ambient
metric, and random sampling.
"""

from __future__ import annotations

import math
import re

import numpy as np

UNIT_TOL = 1e-12


class GeometryError(ValueError):
    pass


def _inner(v, a):
    """Hermitian <v, a>, linear in v."""
    return np.sum(v * np.conj(a), axis=-1)


def _normalize(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def _check_q(q):
    q = complex(q)
    if abs(abs(q) - 1.0) > UNIT_TOL:
        raise GeometryError(f"|q| must be 1, got {abs(q)}")
    return q


def _real_view(z):
    return np.concatenate([z.real, z.imag], axis=-1)


def _from_real_view(r):
    m = r.shape[-1] // 2
    return r[..., :m] + 1j * r[..., m:]


def _complement_basis(vectors):
    """Orthonormal basis of the orthogonal complement of the columns of ``vectors``.

    vectors: (..., N, r) real with orthonormal-ish independent columns.
    Returns (..., N, N - r).
    """
    r = vectors.shape[-1]
    u = np.linalg.svd(vectors, full_matrices=True)[0]
    return u[..., :, r:]


# -- raw operations -----------------------------------------------------------

def sphere_op(a, b):
    """Point reflection of a through the axis b on S^d: 2<a,b>b - a."""
    a = _normalize(np.asarray(a, dtype=float))
    b = _normalize(np.asarray(b, dtype=float))
    out = 2.0 * np.sum(a * b, axis=-1, keepdims=True) * b - a
    return _normalize(out)


def csphere_op(a, b, q):
    """i^q_b(a) = q a + (1 - q) <a, b> b on the unit sphere of C^m."""
    q = _check_q(q)
    a = _normalize(np.asarray(a, dtype=complex))
    b = _normalize(np.asarray(b, dtype=complex))
    out = q * a + (1 - q) * _inner(a, b)[..., None] * b
    return _normalize(out)


def canonical_line(x):
    """Representative with unit norm whose first non-negligible coordinate is real positive."""
    x = _normalize(np.asarray(x, dtype=complex))
    mags = np.abs(x)
    first = np.argmax(mags > 1e-8 * mags.max(axis=-1, keepdims=True), axis=-1)
    lead = np.take_along_axis(x, first[..., None], axis=-1)
    return x * (np.conj(lead) / np.abs(lead))


def proj_op(la, lb, q):
    """l_a * l_b = i^q_b(l_a), returned in canonical form."""
    return canonical_line(csphere_op(_normalize(np.asarray(la, dtype=complex)),
                                     _normalize(np.asarray(lb, dtype=complex)), q))


def orthonormalize(frames):
    return np.linalg.qr(frames)[0]


def grass_op(u, w, q):
    """j^q_W(U) = q U + (1 - q) W W^H U, columnwise; result re-orthonormalised."""
    q = _check_q(q)
    u = np.asarray(u, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = q * u + (1 - q) * (w @ (np.conj(np.swapaxes(w, -1, -2)) @ u))
    return orthonormalize(out)


def projector(frames):
    """U U^H for frames (..., m, k)."""
    frames = np.asarray(frames)
    return frames @ np.conj(np.swapaxes(frames, -1, -2))


def _sl2_op_raw(x, y):
    a, b = x[..., 0], x[..., 1]
    c, d = y[..., 0], y[..., 1]
    return np.stack([a - a * c * d + b * c * c, b - a * d * d + b * c * d], axis=-1)


def _sl2_inv_raw(z, y):
    # inverse of conjugation by M(c, d) is conjugation by M(c, d)^-1 = M(ic, id)
    a, b = z[..., 0], z[..., 1]
    c, d = y[..., 0], y[..., 1]
    return np.stack([a + a * c * d - b * c * c, b + a * d * d - b * c * d], axis=-1)


def canonical_sl2(x):
    """Representative of the +-class: the larger-modulus coordinate has Re > 0 (ties: Im > 0)."""
    x = np.asarray(x, dtype=complex)
    lead = np.where(np.abs(x[..., 0]) >= np.abs(x[..., 1]), x[..., 0], x[..., 1])
    flip = (lead.real < 0) | ((lead.real == 0) & (lead.imag < 0))
    return np.where(flip[..., None], -x, x)


def sl2_op(x, y):
    """[a,b] * [c,d] = [a - acd + bc^2, b - ad^2 + bcd] on (C^2 - 0)/+-."""
    return canonical_sl2(_sl2_op_raw(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))


def sl2_to_matrix(x):
    x = np.asarray(x, dtype=complex)
    a, b = x[..., 0], x[..., 1]
    return np.stack([np.stack([1 - a * b, -b * b], axis=-1),
                     np.stack([a * a, 1 + a * b], axis=-1)], axis=-2)


def sl2_from_matrix(m):
    """Inverse of sl2_to_matrix on the class of [[1, 0], [1, 1]]."""
    m = np.asarray(m, dtype=complex)
    a2, b2, ab = m[..., 1, 0], -m[..., 0, 1], (m[..., 1, 1] - m[..., 0, 0]) / 2
    a = np.sqrt(a2)
    safe = np.abs(a) > 1e-8
    b = np.where(safe, ab / np.where(safe, a, 1), np.sqrt(b2))
    return canonical_sl2(np.stack([a, b], axis=-1))


# -- quandle objects ----------------------------------------------------------

class GeometricQuandle:
    """Interface shared by the continuous quandles.

    ``apply``/``apply_inverse`` work on raw representatives and skip any
    canonicalisation, so they are smooth in their arguments; ``canonical``
    is applied only to stored output.
    """

    point_ndim = 1
    point_shape: tuple = ()
    dim = 0                # real manifold dimension
    feature_dim = 0        # length of ``features`` per point
    dtype = complex
    selector = ""
    compact = True

    # operation
    def apply(self, x, y):
        raise NotImplementedError

    def apply_inverse(self, z, y):
        raise NotImplementedError

    # manifold plumbing
    def random_points(self, rng, count):
        raise NotImplementedError

    def tangent_basis(self, x):
        raise NotImplementedError

    def retract(self, x, basis, xi):
        raise NotImplementedError

    def project(self, y):
        """Nearest-ish point of the manifold to an ambient representative."""
        return y

    def canonical(self, x):
        return x

    def features(self, x):
        raise NotImplementedError

    def align(self, ref, y):
        """Representative of y's class closest to ``ref``."""
        return y

    def sign_variants(self):
        """Scalars s such that s*x represents the same point (beyond what features absorb)."""
        return (1,)

    def in_domain(self, x):
        return np.ones(np.shape(x)[:np.ndim(x) - self.point_ndim], dtype=bool)

    # serialisation
    def point_to_json(self, x):
        x = np.asarray(x)
        if np.iscomplexobj(x):
            return np.stack([x.real, x.imag], axis=-1).tolist()
        return x.tolist()

    def point_from_json(self, data):
        arr = np.asarray(data, dtype=float)
        if self.dtype is complex:
            arr = arr[..., 0] + 1j * arr[..., 1]
        return arr

    def flatten_real(self, x):
        """Real coordinates of points, flattened per point (for CSV export)."""
        x = np.asarray(x)
        lead = x.shape[:x.ndim - self.point_ndim]
        flat = x.reshape(lead + (-1,))
        if np.iscomplexobj(flat):
            flat = np.stack([flat.real, flat.imag], axis=-1).reshape(lead + (-1,))
        return flat

    def __repr__(self):
        return f"<{type(self).__name__} {self.selector}>"


class Sphere(GeometricQuandle):
    """S^d in R^{d+1} with a * b = 2<a,b>b - a."""

    dtype = float

    def __init__(self, d: int):
        if d < 1:
            raise GeometryError("sphere dimension must be positive")
        self.d = d
        self.point_shape = (d + 1,)
        self.dim = d
        self.feature_dim = d + 1
        self.selector = f"sphere:{d}"

    def apply(self, x, y):
        return 2.0 * np.sum(x * y, axis=-1, keepdims=True) * y - x

    def apply_inverse(self, z, y):
        return self.apply(z, y)

    def random_points(self, rng, count):
        return _normalize(rng.standard_normal((count, self.d + 1)))

    def tangent_basis(self, x):
        return _complement_basis(x[..., :, None])

    def retract(self, x, basis, xi):
        return _normalize(x + np.einsum("...ij,...j->...i", basis, xi))

    def project(self, y):
        return _normalize(y)

    def canonical(self, x):
        return _normalize(x)

    def features(self, x):
        return x


class ComplexSphere(GeometricQuandle):
    """Unit sphere of C^m with a * b = i^q_b(a)."""

    def __init__(self, m: int, phase: float = math.pi):
        if m < 1:
            raise GeometryError("complex sphere needs m >= 1")
        self.m = m
        self.phase = float(phase)
        self.q = _check_q(np.exp(1j * self.phase))
        self.point_shape = (m,)
        self.dim = 2 * m - 1
        self.feature_dim = 2 * m
        self.selector = f"csphere:{m}:q={_format_phase(self.phase)}"

    def _i(self, x, y, q):
        return q * x + (1 - q) * _inner(x, y)[..., None] * y

    def apply(self, x, y):
        return self._i(x, y, self.q)

    def apply_inverse(self, z, y):
        return self._i(z, y, np.conj(self.q))

    def random_points(self, rng, count):
        z = rng.standard_normal((count, self.m)) + 1j * rng.standard_normal((count, self.m))
        return _normalize(z)

    def tangent_basis(self, x):
        return _complement_basis(_real_view(x)[..., :, None])

    def retract(self, x, basis, xi):
        step = _from_real_view(np.einsum("...ij,...j->...i", basis, xi))
        return _normalize(x + step)

    def project(self, y):
        return _normalize(y)

    def canonical(self, x):
        return _normalize(x)

    def features(self, x):
        return _real_view(x)


class ProjectiveSpace(ComplexSphere):
    """Lines in C^m with l_a * l_b = i^q_b(l_a); metric through projectors."""

    def __init__(self, m: int, phase: float = math.pi):
        if m < 2:
            raise GeometryError("projective space needs m >= 2")
        super().__init__(m, phase)
        self.dim = 2 * m - 2
        self.feature_dim = 2 * m * m
        self.selector = f"proj:{m}:q={_format_phase(self.phase)}"

    def random_points(self, rng, count):
        return canonical_line(super().random_points(rng, count))

    def tangent_basis(self, x):
        cols = np.stack([_real_view(x), _real_view(1j * x)], axis=-1)
        return _complement_basis(cols)

    def canonical(self, x):
        return canonical_line(x)

    def features(self, x):
        p = x[..., :, None] * np.conj(x[..., None, :])
        flat = p.reshape(p.shape[:-2] + (-1,))
        return _real_view(flat)

    def align(self, ref, y):
        c = _inner(ref, y)
        return y * (c / np.maximum(np.abs(c), 1e-300))[..., None]


class Grassmannian(GeometricQuandle):
    """k-planes in C^m with U * W = j^q_W(U); points are orthonormal frames (m, k)."""

    point_ndim = 2

    def __init__(self, m: int, k: int, phase: float = math.pi):
        if not 1 <= k <= m:
            raise GeometryError("Grassmannian needs 1 <= k <= m")
        self.m, self.k = m, k
        self.phase = float(phase)
        self.q = _check_q(np.exp(1j * self.phase))
        self.point_shape = (m, k)
        self.dim = 2 * k * (m - k)
        self.feature_dim = 2 * m * m
        self.selector = f"grass:{m}:{k}:q={_format_phase(self.phase)}"

    def _j(self, u, w, q):
        return q * u + (1 - q) * (w @ (np.conj(np.swapaxes(w, -1, -2)) @ u))

    def apply(self, x, y):
        return self._j(x, y, self.q)

    def apply_inverse(self, z, y):
        return self._j(z, y, np.conj(self.q))

    def random_points(self, rng, count):
        z = rng.standard_normal((count, self.m, self.k)) + 1j * rng.standard_normal((count, self.m, self.k))
        return orthonormalize(z)

    def tangent_basis(self, x):
        u = np.linalg.svd(x, full_matrices=True)[0]
        return u[..., :, self.k:]

    def retract(self, x, basis, xi):
        half = xi.shape[-1] // 2
        z = (xi[..., :half] + 1j * xi[..., half:]).reshape(xi.shape[:-1] + (self.m - self.k, self.k))
        return orthonormalize(x + basis @ z)

    def project(self, y):
        return orthonormalize(y)

    def canonical(self, x):
        return orthonormalize(x)

    def features(self, x):
        p = x @ np.conj(np.swapaxes(x, -1, -2))
        return _real_view(p.reshape(p.shape[:-2] + (-1,)))

    def align(self, ref, y):
        m = np.conj(np.swapaxes(y, -1, -2)) @ ref
        u, _, vh = np.linalg.svd(m)
        return y @ (u @ vh)


class SL2Quandle(GeometricQuandle):
    """Conjugacy class of [[1, 0], [1, 1]] in SL(2, C) in [a, b] coordinates.

    Points are pairs (a, b) in C^2 - 0 modulo sign.  The space is not
    compact; sampling and ``in_domain`` use the box where every real
    coordinate is bounded by ``radius``.
    """

    compact = False

    def __init__(self, radius: float = 3.0):
        self.radius = float(radius)
        self.point_shape = (2,)
        self.dim = 4
        self.feature_dim = 4
        self.selector = "sl2" if self.radius == 3.0 else f"sl2:r={self.radius!r}"

    def apply(self, x, y):
        return _sl2_op_raw(x, y)

    def apply_inverse(self, z, y):
        return _sl2_inv_raw(z, y)

    def random_points(self, rng, count):
        r = rng.uniform(-self.radius, self.radius, size=(count, 4))
        return canonical_sl2(r[:, :2] + 1j * r[:, 2:])

    def tangent_basis(self, x):
        return None

    def retract(self, x, basis, xi):
        return x + (xi[..., 0::2] + 1j * xi[..., 1::2])

    def canonical(self, x):
        return canonical_sl2(x)

    def features(self, x):
        return _real_view(x)

    def align(self, ref, y):
        plus = np.linalg.norm(ref - y, axis=-1)
        minus = np.linalg.norm(ref + y, axis=-1)
        return np.where((minus < plus)[..., None], -y, y)

    def sign_variants(self):
        return (1, -1)

    def in_domain(self, x):
        x = np.asarray(x)
        return np.maximum(np.abs(x.real), np.abs(x.imag)).max(axis=-1) <= self.radius


# -- selectors ----------------------------------------------------------------

_PHASE = re.compile(r"^([+-]?\d*\.?\d*)\s*\*?\s*pi(?:\s*/\s*(\d+(?:\.\d*)?))?$")


def parse_phase(text: str) -> float:
    """Radians from '1.5708', 'pi', '-pi/2', '2pi/3' or '2*pi/3'."""
    text = text.strip().lower()
    m = _PHASE.match(text)
    if m:
        coef = m.group(1)
        if coef in ("", "+"):
            c = 1.0
        elif coef == "-":
            c = -1.0
        else:
            c = float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        return c * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise GeometryError(f"cannot read phase {text!r}") from None


def _format_phase(phase: float) -> str:
    return repr(float(phase))


def _phase_arg(parts):
    if not parts:
        return math.pi
    if not parts[0].startswith("q="):
        raise GeometryError(f"expected q=<phase>, got {parts[0]!r}")
    return parse_phase(parts[0][2:])


def geometric_quandle(selector: str, radius: float = 3.0) -> GeometricQuandle:
    """Build a quandle from 'sphere:d', 'csphere:m:q=<phase>', 'proj:m:q=<phase>',
    'grass:m:k:q=<phase>', 'sl2' or 'sl2:r=<radius>'.  A missing q means q = -1;
    the sl2 radius bounds the sampling box (default ``radius``)."""
    parts = selector.strip().split(":")
    kind, rest = parts[0], parts[1:]
    try:
        if kind == "sphere" and len(rest) == 1:
            return Sphere(int(rest[0]))
        if kind == "csphere" and len(rest) in (1, 2):
            return ComplexSphere(int(rest[0]), _phase_arg(rest[1:]))
        if kind == "proj" and len(rest) in (1, 2):
            return ProjectiveSpace(int(rest[0]), _phase_arg(rest[1:]))
        if kind == "grass" and len(rest) in (2, 3):
            return Grassmannian(int(rest[0]), int(rest[1]), _phase_arg(rest[2:]))
        if kind == "sl2" and not rest:
            return SL2Quandle(radius)
        if kind == "sl2" and len(rest) == 1 and rest[0].startswith("r="):
            r = float(rest[0][2:])
            if not r > 0:
                raise ValueError("radius must be positive")
            return SL2Quandle(r)
    except ValueError as exc:
        raise GeometryError(f"bad quandle selector {selector!r}: {exc}") from None
    raise GeometryError(f"unknown geometric quandle selector {selector!r}")


def check_axioms(q: GeometricQuandle, samples: int = 10_000, seed: int = 0) -> dict:
    """Largest deviations from the quandle axioms on random points, measured in features.

    Deviations are relative to max(1, |target|) so unbounded quandles are
    judged on round-off scale.
    """
    rng = np.random.default_rng(seed)
    a, b, c = (q.random_points(rng, samples) for _ in range(3))
    f = q.features

    def dev(x, y):
        fx, fy = f(x), f(y)
        d = np.linalg.norm(fx - fy, axis=-1)
        if len(q.sign_variants()) > 1:
            d = np.minimum(d, np.linalg.norm(fx + fy, axis=-1))
        return float((d / np.maximum(1.0, np.linalg.norm(fy, axis=-1))).max())

    return {
        "idempotence": dev(q.apply(a, a), a),
        "right_inverse": dev(q.apply_inverse(q.apply(a, b), b), a),
        "self_distributivity": dev(q.apply(q.apply(a, b), c), q.apply(q.apply(a, c), q.apply(b, c))),
        "samples": samples,
    }
