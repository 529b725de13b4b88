"""Angle-based sector partitions of the plane around the evader.

A partition is a start angle plus positive sector widths summing to 2*pi.
A partition keeps the evader encircled whenever every pair of adjacent
widths sums to at most pi; such partitions need at least four sectors.
Construction from pursuer bearings is a small QP that centers one selected
pursuer strictly inside each sector while keeping sectors as even as
possible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import qp as _qp
from .geom2d import HPolyhedron, as_vec

TWO_PI = 2.0 * math.pi
_ANGLE_TOL = 1e-9


class PartitionError(Exception):
    pass


class InvalidPartition(PartitionError):
    """Angles do not define a valid partition (sum or positivity)."""


class CoincidentAgent(PartitionError):
    """A pursuer sits on top of the evader; its bearing is undefined."""


class NoEncirclingSubset(PartitionError):
    """No M-subset of pursuers surrounds the origin."""


class InfeasiblePartition(PartitionError):
    """The partition QP has an empty feasible set for this configuration."""


class NonConvexSector(PartitionError):
    """A sector spans >= pi and is not a convex cone."""


@dataclass(frozen=True)
class AnglePartition:
    """Start angle plus sector widths (radians) summing to 2*pi."""

    start_angle: float
    angles: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.angles, dtype=float))
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "start_angle", float(self.start_angle))
        if a.size < 1 or np.any(a <= 0):
            raise InvalidPartition("sector widths must be positive")
        if abs(a.sum() - TWO_PI) > _ANGLE_TOL:
            raise InvalidPartition(f"widths sum to {a.sum()}, expected 2*pi")

    @property
    def size(self) -> int:
        return int(self.angles.size)

    def boundaries(self) -> np.ndarray:
        """Ray angles of the M+1 sector boundaries (unwrapped, ascending)."""
        return self.start_angle + np.concatenate([[0.0], np.cumsum(self.angles)])

    def sector_of_angle(self, angle: float) -> int:
        """Half-open assignment: the start ray belongs to the sector."""
        rel = (angle - self.start_angle) % TWO_PI
        cum = np.cumsum(self.angles)
        idx = int(np.searchsorted(cum, rel, side="right"))
        return min(idx, self.size - 1)

    def sector_of_point(self, q) -> int:
        q = as_vec(q)
        if np.linalg.norm(q) < 1e-12:
            raise ValueError("sector of the origin is undefined")
        return self.sector_of_angle(math.atan2(q[1], q[0]))


@dataclass(frozen=True)
class RelativeAngles:
    """Pursuer bearings in [0, 2*pi), sorted ascending, with owner indices."""

    angles: np.ndarray
    owners: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.angles, dtype=float))
        o = np.atleast_1d(np.asarray(self.owners, dtype=int))
        if a.shape != o.shape:
            raise ValueError("angles/owners length mismatch")
        if np.any(np.diff(a) < 0):
            raise ValueError("angles must be sorted ascending")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "owners", o)


@dataclass(frozen=True)
class SectorSet:
    """Convex cone per sector, apexed at the origin of the relative frame."""

    partition: AnglePartition
    elements: list


def relative_angles(pursuers, evader) -> RelativeAngles:
    """Bearing of each pursuer as seen from the evader, sorted with owners."""
    e = as_vec(evader)
    angs = []
    for i, p in enumerate(pursuers):
        d = as_vec(p) - e
        if np.linalg.norm(d) < 1e-12:
            raise CoincidentAgent(f"pursuer {i} coincides with the evader")
        angs.append(math.atan2(d[1], d[0]) % TWO_PI)
    angs = np.asarray(angs)
    order = np.argsort(angs, kind="stable")
    return RelativeAngles(angles=angs[order], owners=order)


def is_egp(partition: AnglePartition) -> bool:
    """Adjacent-width criterion: every cyclically adjacent pair sums <= pi."""
    a = partition.angles
    return bool(np.all(a + np.roll(a, -1) <= math.pi + _ANGLE_TOL))


def min_partition_size() -> int:
    """Fewest sectors an encirclement-guaranteed partition can have."""
    return 4


def _origin_in_hull_samples(points: np.ndarray) -> np.ndarray:
    """Vectorized origin-in-convex-hull test for (trials, M, 2) samples.

    Sorts each trial's points by bearing and checks every cyclically
    consecutive cross product; a negative one exhibits a half-plane with all
    points strictly on one side of the origin.
    """
    norms = np.linalg.norm(points, axis=2, keepdims=True)
    unit = points / norms
    ang = np.arctan2(unit[:, :, 1], unit[:, :, 0])
    order = np.argsort(ang, axis=1)
    srt = np.take_along_axis(unit, order[:, :, None], axis=1)
    nxt = np.roll(srt, -1, axis=1)
    cross = srt[:, :, 0] * nxt[:, :, 1] - srt[:, :, 1] * nxt[:, :, 0]
    return np.all(cross >= -1e-12, axis=1)


def egp_oracle(partition: AnglePartition, trials: int = 1000,
               rng_seed: int = 0) -> bool:
    """Sampling oracle for the encirclement-guarantee property.

    Draws one point per sector per trial and tests whether the origin lies
    in their convex hull.  Besides uniform draws it always probes the
    adversarial placements suggested by the necessity argument: points
    pushed onto the two outer boundary rays of each adjacent sector pair.
    Returns False as soon as any sample hull misses the origin.
    """
    rng = np.random.default_rng(rng_seed)
    M = partition.size
    bounds = partition.boundaries()
    lo, hi = bounds[:-1], bounds[1:]

    # adversarial probes: for each adjacent pair (m, m+1), one point just
    # inside the start ray of sector m, one just inside the end ray of
    # sector m+1, remaining points mid-sector
    delta = 1e-7
    probes = []
    mids = 0.5 * (lo + hi)
    for m in range(M):
        ang = mids.copy()
        ang[m] = lo[m] + delta
        ang[(m + 1) % M] = hi[(m + 1) % M] - delta
        probes.append(ang)
    probe_ang = np.array(probes)
    probe_pts = np.stack([np.cos(probe_ang), np.sin(probe_ang)], axis=2) * 100.0
    if not np.all(_origin_in_hull_samples(probe_pts)):
        return False

    if trials > 0:
        # uniform draws, biased toward the boundary rays at mixed radii
        u = rng.random((trials, M))
        edge = rng.random((trials, M)) < 0.3
        u = np.where(edge, np.where(rng.random((trials, M)) < 0.5,
                                    1e-6 * rng.random((trials, M)),
                                    1.0 - 1e-6 * rng.random((trials, M))), u)
        ang = lo + u * (hi - lo)
        radii = np.exp(rng.uniform(math.log(0.1), math.log(100.0), (trials, M)))
        pts = np.stack([np.cos(ang), np.sin(ang)], axis=2) * radii[:, :, None]
        if not np.all(_origin_in_hull_samples(pts)):
            return False
    return True


def _circular_gaps(angles: np.ndarray) -> np.ndarray:
    srt = np.sort(angles)
    return np.diff(np.concatenate([srt, [srt[0] + TWO_PI]]))


def select_subset(ra: RelativeAngles, M: int) -> list[int]:
    """Pick M pursuers that surround the origin with well-spread bearings.

    Maximizes the minimum circular gap between consecutive selected
    bearings; exhaustive over C(N, M) for N <= 10, greedy beyond.  Ties
    break toward the lexicographically smallest owner tuple.
    """
    N = ra.angles.size
    if not 4 <= M <= N:
        raise ValueError(f"need 4 <= M <= N, got M={M}, N={N}")
    if N <= 10:
        best = None
        best_score = -1.0
        for combo in itertools.combinations(range(N), M):
            sub = ra.angles[list(combo)]
            gaps = _circular_gaps(sub)
            if gaps.max() >= math.pi:  # subset does not surround the origin
                continue
            score = gaps.min()
            if score > best_score + 1e-12:
                best_score = score
                best = combo
        if best is None:
            raise NoEncirclingSubset(f"no {M}-subset surrounds the origin")
        return sorted(int(ra.owners[i]) for i in best)
    return _select_greedy(ra, M)


def _select_greedy(ra: RelativeAngles, M: int) -> list[int]:
    N = ra.angles.size
    # seed with the pair closest to half a turn apart, extend by the angle
    # maximizing the minimum gap, then verify the surround condition
    best_pair = min(
        ((i, j) for i in range(N) for j in range(i + 1, N)),
        key=lambda ij: abs(((ra.angles[ij[1]] - ra.angles[ij[0]]) % TWO_PI) - math.pi),
    )
    chosen = list(best_pair)
    while len(chosen) < M:
        rest = [i for i in range(N) if i not in chosen]
        cand = max(rest, key=lambda i: _circular_gaps(
            ra.angles[chosen + [i]]).min())
        chosen.append(cand)
    if _circular_gaps(ra.angles[chosen]).max() >= math.pi:
        raise NoEncirclingSubset(f"greedy {M}-subset does not surround the origin")
    return sorted(int(ra.owners[i]) for i in chosen)


def construct_egp(ra: RelativeAngles, selected: list[int],
                  eps: float = 1e-3) -> AnglePartition:
    """Build the partition placing one selected pursuer inside each sector.

    Solves the evenness QP over (start, widths): cost pulls every width to
    2*pi/M and the start angle to 0; constraints interleave the sector
    boundaries strictly (margin ``eps``) between consecutive selected
    bearings and cap every adjacent width pair at pi.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    sel = set(int(s) for s in selected)
    alphas = np.sort([ra.angles[i] for i in range(ra.angles.size)
                      if int(ra.owners[i]) in sel])
    M = alphas.size
    if M != len(sel):
        raise ValueError("selected owners must be distinct")
    n = M + 1  # variables: [start, w_0 .. w_{M-1}]
    H = 2.0 * np.eye(n)
    g = np.zeros(n)
    g[1:] = -2.0 * (TWO_PI / M)
    A_eq = np.zeros((1, n))
    A_eq[0, 1:] = 1.0
    b_eq = np.array([TWO_PI])

    A_in, b_in = [], []

    def row(coeffs, rhs):
        A_in.append(coeffs)
        b_in.append(rhs)

    # start angle strictly between the last bearing (wrapped) and the first
    r = np.zeros(n); r[0] = 1.0
    row(r, alphas[0] - eps)
    r = np.zeros(n); r[0] = -1.0
    row(r, -(alphas[-1] - TWO_PI) - eps)
    # boundary j (start + w_0 + .. + w_{j-1}) strictly between bearings j-1, j
    for j in range(1, M):
        r = np.zeros(n); r[0] = 1.0; r[1:j + 1] = 1.0
        row(r, alphas[j] - eps)
        row(-r, -(alphas[j - 1] + eps))
    # positive widths
    for m in range(M):
        r = np.zeros(n); r[1 + m] = -1.0
        row(r, -eps)
    # adjacent width pairs capped at pi
    for m in range(M):
        r = np.zeros(n); r[1 + m] = 1.0; r[1 + (m + 1) % M] = 1.0
        row(r, math.pi)

    prog = _qp.QuadraticProgram(H=H, g=g, A_eq=A_eq, b_eq=b_eq,
                                A_in=np.array(A_in), b_in=np.array(b_in))
    sol = _qp.solve(prog)
    if sol.status is _qp.QpStatus.INFEASIBLE:
        raise InfeasiblePartition(
            f"no encirclement-guaranteed partition for bearings {alphas}")
    if sol.status is not _qp.QpStatus.OPTIMAL:
        raise InfeasiblePartition("partition QP did not converge")
    part = AnglePartition(start_angle=float(sol.x[0]), angles=sol.x[1:])
    if not is_egp(part):
        raise InfeasiblePartition("QP optimum violates the adjacency cap")
    return part


def partition_cost(part: AnglePartition) -> float:
    """Evenness cost: squared deviations from 2*pi/M plus squared start."""
    M = part.size
    return float(np.sum((TWO_PI / M - part.angles) ** 2) + part.start_angle ** 2)


def sectors_from_partition(part: AnglePartition) -> SectorSet:
    """Convex cone H-rep per sector; membership tests should use the
    half-open ``sector_of_angle`` assignment, the cones are closed."""
    if np.any(part.angles >= math.pi):
        raise NonConvexSector("sector width >= pi")
    bounds = part.boundaries()
    elems = []
    for m in range(part.size):
        a, b = bounds[m], bounds[m + 1]
        A = np.array([
            [math.sin(a), -math.cos(a)],   # CCW side of the start ray
            [-math.sin(b), math.cos(b)],   # CW side of the end ray
        ])
        elems.append(HPolyhedron(A, np.zeros(2)))
    return SectorSet(partition=part, elements=elems)
