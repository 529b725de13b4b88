"""2D convex geometry kernel.

Half-plane polyhedra (possibly unbounded), support functions, Minkowski
sums, Pontryagin differences, convex hulls and membership tests.  All sets
live in the plane; normals are kept unit-length so geometric predicates can
use a single absolute tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

TOL = 1e-9


class GeometryError(Exception):
    """Base class for geometry kernel failures."""


class DegenerateInput(GeometryError):
    """Input does not span a 2D region (collinear / too few points)."""


class EmptySetError(GeometryError):
    """Operation requires a nonempty set."""


class UnsupportedUnbounded(GeometryError):
    """Operation is not defined for this combination of unbounded sets."""


def vec(x: float, y: float) -> np.ndarray:
    """Build a finite 2-vector."""
    v = np.array([float(x), float(y)])
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector components: {v}")
    return v


def as_vec(p) -> np.ndarray:
    v = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector components: {v}")
    return v


def _rot90(v: np.ndarray) -> np.ndarray:
    """Counterclockwise quarter turn."""
    return np.array([-v[1], v[0]])


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {q : normal . q <= offset} with unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_vec(self.normal)
        nrm = np.linalg.norm(n)
        if nrm < TOL:
            raise ValueError("half-plane normal must be nonzero")
        object.__setattr__(self, "normal", n / nrm)
        object.__setattr__(self, "offset", float(self.offset) / nrm)
        if not math.isfinite(self.offset):
            raise ValueError("half-plane offset must be finite")

    def contains(self, q, tol: float = TOL) -> bool:
        return float(self.normal @ as_vec(q)) <= self.offset + tol


class HPolyhedron:
    """Convex set {q : A q <= b} with unit-norm rows of A.

    Instances are immutable by convention: no method mutates ``A``/``b``
    after construction, so they are safe to share across threads.
    """

    def __init__(self, A, b):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if A.shape[0] != b.shape[0] or A.shape[1] != 2:
            raise ValueError(f"bad H-rep shapes {A.shape}, {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("non-finite H-rep data")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms < TOL):
            raise ValueError("zero-normal row in H-rep")
        self.A = A / norms[:, None]
        self.b = b / norms
        self._vertices = None
        self._recession = None
        self._empty = None

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_halfplanes(cls, halfplanes) -> "HPolyhedron":
        hs = list(halfplanes)
        if not hs:
            raise ValueError("need at least one half-plane")
        return cls(np.array([h.normal for h in hs]),
                   np.array([h.offset for h in hs]))

    @classmethod
    def box(cls, lo, hi) -> "HPolyhedron":
        """Axis-aligned box [lo_x, hi_x] x [lo_y, hi_y]."""
        lo = as_vec(lo)
        hi = as_vec(hi)
        if np.any(hi < lo):
            raise ValueError("box upper corner below lower corner")
        A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        b = np.array([hi[0], -lo[0], hi[1], -lo[1]])
        return cls(A, b)

    @classmethod
    def centered_box(cls, radius: float) -> "HPolyhedron":
        """Box {q : ||q||_inf <= radius}; radius 0 gives the origin singleton."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        return cls.box([-radius, -radius], [radius, radius])

    @classmethod
    def singleton(cls, p) -> "HPolyhedron":
        p = as_vec(p)
        return cls.box(p, p)

    # ------------------------------------------------------------------
    # predicates

    @property
    def halfplanes(self) -> list[HalfPlane]:
        return [HalfPlane(a.copy(), float(bi)) for a, bi in zip(self.A, self.b)]

    def contains(self, q, tol: float = TOL) -> bool:
        q = as_vec(q)
        return bool(np.all(self.A @ q <= self.b + tol))

    def contains_many(self, Q: np.ndarray, tol: float = TOL) -> np.ndarray:
        """Vectorized membership for an (n, 2) array of points."""
        return np.all(Q @ self.A.T <= self.b + tol, axis=1)

    def is_empty(self) -> bool:
        if self._empty is None:
            res = linprog(np.zeros(2), A_ub=self.A, b_ub=self.b,
                          bounds=[(None, None)] * 2, method="highs")
            self._empty = res.status == 2
        return self._empty

    def recession_generators(self) -> np.ndarray:
        """Unit generators of the recession cone {d : A d <= 0}.

        Returns an (r, 2) array; r = 0 means the set is bounded.  A full
        plane (no effective constraint) is impossible here since every row
        has a nonzero normal, but opposite generators (a line or half-plane
        recession cone) are returned explicitly.
        """
        if self._recession is not None:
            return self._recession
        # The direction set is an arc on the unit circle whose endpoints lie
        # on some constraint boundary, so +-a_i and +-rot90(a_i) together
        # always hit it when it is nonempty.  The returned set may be
        # redundant but positively spans the cone, which is all the polar
        # tests downstream need.
        cands = []
        for a in self.A:
            t = _rot90(a)
            cands.extend((t, -t, a, -a))
        feas = [d for d in cands if np.all(self.A @ d <= 1e-12)]
        if not feas:
            self._recession = np.zeros((0, 2))
        else:
            self._recession = _dedupe_points(np.array(feas), 1e-9)
        return self._recession

    def is_bounded(self) -> bool:
        return self.recession_generators().shape[0] == 0

    # ------------------------------------------------------------------
    # geometry

    def support(self, direction) -> float:
        """sup{d . q : q in set}; math.inf when unbounded in that direction."""
        d = as_vec(direction)
        if self.is_empty():
            raise EmptySetError("support of empty set")
        rec = self.recession_generators()
        if rec.shape[0] and np.any(rec @ d > 1e-12):
            return math.inf
        if self.is_bounded():
            V = self.vertices()
            return float(np.max(V @ d))
        res = linprog(-d, A_ub=self.A, b_ub=self.b,
                      bounds=[(None, None)] * 2, method="highs")
        if res.status == 3:
            return math.inf
        if res.status != 0:
            raise GeometryError(f"support LP failed with status {res.status}")
        return float(-res.fun)

    def vertices(self) -> np.ndarray:
        """CCW vertices of a bounded polyhedron, cached."""
        if self._vertices is not None:
            return self._vertices
        if not self.is_bounded():
            raise UnsupportedUnbounded("vertex enumeration needs a bounded set")
        m = self.A.shape[0]
        pts = []
        for i in range(m):
            for j in range(i + 1, m):
                M = np.array([self.A[i], self.A[j]])
                det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
                if abs(det) < 1e-12:
                    continue
                p = np.linalg.solve(M, np.array([self.b[i], self.b[j]]))
                if np.all(self.A @ p <= self.b + 1e-7):
                    pts.append(p)
        if not pts:
            raise EmptySetError("no vertices: set is empty")
        pts = _dedupe_points(np.array(pts), 1e-7)
        c = pts.mean(axis=0)
        order = np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))
        self._vertices = pts[order]
        return self._vertices

    def translate(self, t) -> "HPolyhedron":
        t = as_vec(t)
        return HPolyhedron(self.A.copy(), self.b + self.A @ t)

    def negated(self) -> "HPolyhedron":
        """The reflection -P = {-q : q in P}."""
        return HPolyhedron(-self.A, self.b.copy())

    def canonicalized(self) -> "HPolyhedron":
        """Drop duplicate and redundant half-planes (LP redundancy test)."""
        A, b = self.A, self.b
        keep_rows = []
        for i in range(A.shape[0]):
            dup = False
            for j in keep_rows:
                if np.allclose(A[i], A[j], atol=1e-9) and abs(b[i] - b[j]) <= 1e-9:
                    dup = True
                    break
                if np.allclose(A[i], A[j], atol=1e-9) and b[i] > b[j]:
                    dup = True  # looser copy of an existing constraint
                    break
            if not dup:
                keep_rows.append(i)
        A, b = A[keep_rows], b[keep_rows]
        if A.shape[0] <= 1:
            return HPolyhedron(A, b)
        keep = []
        for i in range(A.shape[0]):
            others = [j for j in range(A.shape[0]) if j != i]
            # bound the LP with the constraint itself relaxed by 1
            A_ub = np.vstack([A[others], A[i][None, :]])
            b_ub = np.concatenate([b[others], [b[i] + 1.0]])
            res = linprog(-A[i], A_ub=A_ub, b_ub=b_ub,
                          bounds=[(None, None)] * 2, method="highs")
            if res.status == 0 and -res.fun <= b[i] + 1e-9:
                continue  # redundant
            keep.append(i)
        if not keep:
            keep = [0]
        return HPolyhedron(A[keep], b[keep])

    def __repr__(self):
        return f"HPolyhedron({self.A.shape[0]} halfplanes)"


def _dedupe_points(pts: np.ndarray, tol: float) -> np.ndarray:
    out = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= tol for q in out):
            out.append(p)
    return np.array(out)


# ----------------------------------------------------------------------
# convex hulls


@dataclass(frozen=True)
class ConvexHull:
    """Strictly convex CCW-ordered polygon vertices, shape (k, 2)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        object.__setattr__(self, "vertices", v)

    def edges(self):
        v = self.vertices
        return zip(v, np.roll(v, -1, axis=0))

    def to_hpolyhedron(self) -> HPolyhedron:
        A, b = [], []
        for p, q in self.edges():
            e = q - p
            n = np.array([e[1], -e[0]])  # outward for CCW polygons
            A.append(n)
            b.append(n @ p)
        return HPolyhedron(np.array(A), np.array(b))

    def contains(self, q, tol: float = TOL) -> bool:
        q = as_vec(q)
        for p, r in self.edges():
            e = r - p
            # inward signed distance of q from the edge line
            d = (e[0] * (q[1] - p[1]) - e[1] * (q[0] - p[0])) / np.linalg.norm(e)
            if d < -tol:
                return False
        return True


def convex_hull(points) -> ConvexHull:
    """Monotone-chain hull; collinear points are dropped from the boundary.

    Raises DegenerateInput when fewer than 3 distinct points remain or all
    points are collinear.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2:
        raise ValueError("points must be (n, 2)")
    pts = _dedupe_points(pts, 1e-9)
    if pts.shape[0] < 3:
        raise DegenerateInput("need at least 3 distinct points")
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    scale = max(1.0, float(np.abs(pts).max()))
    eps = 1e-12 * scale * scale

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= eps:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if hull.shape[0] < 3:
        raise DegenerateInput("points are collinear")
    return ConvexHull(hull)


def hull_contains(hull: ConvexHull, q, tol: float = TOL,
                  with_weights: bool = False):
    """Membership of q in a hull; optionally a convex-combination witness.

    Returns ``(inside, weights)``.  ``weights`` is None when outside or when
    ``with_weights`` is false; otherwise it is the minimum-norm lambda >= 0
    with sum 1 and sum(lambda_i v_i) = q, which is unique and symmetric.
    """
    q = as_vec(q)
    inside = hull.contains(q, tol)
    if not inside or not with_weights:
        return inside, None
    from . import qp as _qp

    V = hull.vertices
    k = V.shape[0]
    prog = _qp.QuadraticProgram(
        H=2.0 * np.eye(k),
        g=np.zeros(k),
        A_eq=np.vstack([V.T, np.ones(k)]),
        b_eq=np.array([q[0], q[1], 1.0]),
        A_in=-np.eye(k),
        b_in=np.zeros(k),
    )
    sol = _qp.solve(prog)
    if sol.status is not _qp.QpStatus.OPTIMAL:
        # boundary within tol but numerically outside: project q first
        return inside, None
    w = np.clip(sol.x, 0.0, None)
    return True, w / w.sum()


def hull_signed_distance(hull: ConvexHull, q) -> float:
    """Signed distance of q to the hull boundary: positive inside."""
    q = as_vec(q)
    inner = math.inf
    inside = True
    for p, r in hull.edges():
        e = r - p
        d = (e[0] * (q[1] - p[1]) - e[1] * (q[0] - p[0])) / np.linalg.norm(e)
        inner = min(inner, d)
        if d < 0:
            inside = False
    if inside:
        return inner
    dist = min(_segment_distance(q, p, r) for p, r in hull.edges())
    return -dist


def _segment_distance(q, p, r) -> float:
    e = r - p
    L2 = float(e @ e)
    t = 0.0 if L2 == 0 else float(np.clip((q - p) @ e / L2, 0.0, 1.0))
    return float(np.linalg.norm(q - (p + t * e)))


# ----------------------------------------------------------------------
# set arithmetic


def polyhedron_contains(P: HPolyhedron, q, tol: float = TOL) -> bool:
    return P.contains(q, tol)


def support(P: HPolyhedron, direction) -> float:
    return P.support(direction)


def pontryagin_diff(X: HPolyhedron, S: HPolyhedron) -> HPolyhedron:
    """X minus-Pontryagin S = {q : q + S subset of X}, computed row-wise.

    Exact for H-rep X: each offset shrinks by the support of S along the
    row normal.  The result may be empty; check ``is_empty()``.
    """
    if not S.is_bounded():
        raise UnsupportedUnbounded("Pontryagin subtrahend must be bounded")
    if S.is_empty():
        raise EmptySetError("Pontryagin subtrahend is empty")
    Sv = S.vertices()
    offsets = np.max(Sv @ X.A.T, axis=0)
    return HPolyhedron(X.A.copy(), X.b - offsets).canonicalized()


def minkowski_sum(A: HPolyhedron, B: HPolyhedron) -> HPolyhedron:
    """Minkowski sum; at least one operand must be bounded."""
    if A.is_empty() or B.is_empty():
        raise EmptySetError("Minkowski sum of an empty set")
    a_bounded, b_bounded = A.is_bounded(), B.is_bounded()
    if not a_bounded and not b_bounded:
        raise UnsupportedUnbounded("both operands unbounded")
    if not a_bounded:
        A, B = B, A  # A bounded, B possibly unbounded
    if B.is_bounded():
        pts = (A.vertices()[:, None, :] + B.vertices()[None, :, :]).reshape(-1, 2)
        return _hrep_from_points(pts)
    # bounded + unbounded: faces are either shifted cone faces or faces of
    # the vertex-sum hull whose normal lies in the polar of the recession cone
    rays = B.recession_generators()
    pts = (A.vertices()[:, None, :] + B.vertices_of_unbounded()[None, :, :]).reshape(-1, 2)
    rows_A, rows_b = [], []
    for n, off in _edge_normals(pts):
        if np.all(rays @ n <= 1e-12):
            rows_A.append(n)
            rows_b.append(off)
    for n, bo in zip(B.A, B.b):
        if np.all(rays @ n <= 1e-9):
            rows_A.append(n)
            rows_b.append(bo + float(np.max(A.vertices() @ n)))
    if not rows_A:
        raise GeometryError("could not construct Minkowski sum H-rep")
    return HPolyhedron(np.array(rows_A), np.array(rows_b)).canonicalized()


def _edge_normals(pts: np.ndarray):
    """Outward (unit-normal, offset) pairs of the hull edges of a point set."""
    try:
        hull = convex_hull(pts)
    except DegenerateInput:
        return _degenerate_normals(pts)
    out = []
    for p, q in hull.edges():
        e = q - p
        n = np.array([e[1], -e[0]])
        n = n / np.linalg.norm(n)
        out.append((n, float(n @ p)))
    return out


def _degenerate_normals(pts: np.ndarray):
    """H-rep rows for a point or segment given as a degenerate point cloud."""
    pts = _dedupe_points(pts, 1e-9)
    if pts.shape[0] == 1:
        p = pts[0]
        return [(np.array([1.0, 0.0]), p[0]), (np.array([-1.0, 0.0]), -p[0]),
                (np.array([0.0, 1.0]), p[1]), (np.array([0.0, -1.0]), -p[1])]
    # segment: take extreme points along the dominant direction
    d = pts[np.argmax(np.linalg.norm(pts - pts[0], axis=1))] - pts[0]
    d = d / np.linalg.norm(d)
    t = pts @ d
    lo, hi = pts[np.argmin(t)], pts[np.argmax(t)]
    n = _rot90(d)
    return [(d, float(d @ hi)), (-d, float(-(d @ lo))),
            (n, float(n @ lo)), (-n, float(-(n @ lo)))]


def _hrep_from_points(pts: np.ndarray) -> HPolyhedron:
    rows = _edge_normals(pts)
    A = np.array([r[0] for r in rows])
    b = np.array([r[1] for r in rows])
    return HPolyhedron(A, b).canonicalized()


def _vertices_of_unbounded(P: HPolyhedron) -> np.ndarray:
    """Bounded skeleton vertices of an unbounded polyhedron.

    Pairwise constraint intersections that satisfy all constraints; for a
    translated cone this is the apex.  Falls back to a single feasible
    point for sets without constraint intersections (e.g. one half-plane).
    """
    m = P.A.shape[0]
    pts = []
    for i in range(m):
        for j in range(i + 1, m):
            M = np.array([P.A[i], P.A[j]])
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-12:
                continue
            p = np.linalg.solve(M, np.array([P.b[i], P.b[j]]))
            if np.all(P.A @ p <= P.b + 1e-7):
                pts.append(p)
    if pts:
        return _dedupe_points(np.array(pts), 1e-7)
    res = linprog(np.zeros(2), A_ub=P.A, b_ub=P.b,
                  bounds=[(None, None)] * 2, method="highs")
    if res.status != 0:
        raise EmptySetError("unbounded set has no feasible point")
    return np.array([res.x])


# exposed as a method for convenience
HPolyhedron.vertices_of_unbounded = _vertices_of_unbounded
