"""Pursuer team policies and evader behaviors.

Team policies map a game state to one control per pursuer; evader policies
emit a single control.  All outputs respect the box input limits exactly:
pursuer controls have inf-norm at most u_p_max, evader controls are clamped
componentwise to the disturbance box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tmpc as _tmpc
from .geom2d import (HPolyhedron, as_vec, convex_hull, hull_signed_distance,
                     DegenerateInput)
from .partition import AnglePartition, SectorSet


class PolicyError(Exception):
    pass


class SectorVacated(PolicyError):
    """A sector holds no pursuer; the tube invariant was broken upstream."""


def direct_charge(p, e, u_max: float) -> np.ndarray:
    """Straight-at-the-target step, inf-norm maximal.

    Moves exactly onto the target when it is within reach, otherwise scales
    the offset so its largest component equals u_max (direction preserved,
    consistent with the box input set).
    """
    if u_max <= 0:
        raise ValueError("u_max must be positive")
    d = as_vec(e) - as_vec(p)
    m = float(np.max(np.abs(d)))
    if m <= u_max:
        return d
    return d * (u_max / m)


def clamp_to_box(u, u_max: float) -> np.ndarray:
    return np.clip(as_vec(u), -u_max, u_max)


# ----------------------------------------------------------------------
# team policies


@dataclass
class DirectChargeTeam:
    u_max: float

    def controls(self, pursuers, evader, rng=None) -> np.ndarray:
        e = as_vec(evader)
        return np.array([direct_charge(p, e, self.u_max) for p in pursuers])

    @property
    def solver_indices(self):
        return None


@dataclass
class VoronoiCentroidTeam:
    """Move each evader-neighboring pursuer toward the midpoint of the
    Voronoi edge it shares with the evader, inside a virtual box."""

    u_max: float
    virtual_margin: float = 50.0

    def controls(self, pursuers, evader, rng=None) -> np.ndarray:
        e = as_vec(evader)
        P = np.array([as_vec(p) for p in pursuers])
        targets = voronoi_edge_midpoints(P, e, self.virtual_margin)
        out = []
        for p, tgt in zip(P, targets):
            aim = e if tgt is None else tgt
            out.append(direct_charge(p, aim, self.u_max))
        return np.array(out)

    @property
    def solver_indices(self):
        return None


def voronoi_edge_midpoints(pursuers: np.ndarray, evader: np.ndarray,
                           virtual_margin: float = 50.0):
    """Midpoint of the Voronoi edge each pursuer shares with the evader.

    The evader's Voronoi cell is clipped to the bounding box of all agents
    inflated by ``virtual_margin`` so it stays bounded even when the evader
    is outside the pursuers' hull.  Returns one entry per pursuer: the
    shared-edge midpoint, or None when no edge is shared (or the pair is
    degenerate), in which case callers fall back to direct charge.
    """
    pts = np.vstack([pursuers, evader[None, :]])
    lo = pts.min(axis=0) - virtual_margin
    hi = pts.max(axis=0) + virtual_margin
    rows_A = [np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
              np.array([0.0, 1.0]), np.array([0.0, -1.0])]
    rows_b = [hi[0], -lo[0], hi[1], -lo[1]]
    bisector_row = {}
    for i, p in enumerate(pursuers):
        d = p - evader
        nrm = np.linalg.norm(d)
        if nrm < 1e-9:
            continue  # degenerate pair: caller falls back
        mid = 0.5 * (p + evader)
        bisector_row[i] = len(rows_A)
        rows_A.append(d / nrm)
        rows_b.append(float((d / nrm) @ mid))
    cell = HPolyhedron(np.array(rows_A), np.array(rows_b))
    try:
        verts = cell.vertices()
    except Exception:
        return [None] * pursuers.shape[0]
    targets = []
    for i in range(pursuers.shape[0]):
        row = bisector_row.get(i)
        if row is None:
            targets.append(None)
            continue
        on_edge = verts[np.abs(verts @ cell.A[row] - cell.b[row]) <= 1e-7]
        if on_edge.shape[0] < 2:
            targets.append(None)
            continue
        # extreme points along the edge direction bound the shared segment
        tang = np.array([-cell.A[row][1], cell.A[row][0]])
        t = on_edge @ tang
        targets.append(0.5 * (on_edge[np.argmin(t)] + on_edge[np.argmax(t)]))
    return targets


@dataclass
class TmpcEgpTeam:
    """Sector-keeping team: per sector the outermost member solves the tube
    QP, everyone else charges the evader directly."""

    u_max: float
    sectors: SectorSet
    specs: list
    initial_assignment: dict  # pursuer index -> sector, fixed at t = 0
    _warm: dict = field(default_factory=dict)
    last_solvers: dict = field(default_factory=dict)  # sector -> pursuer idx

    @property
    def partition(self) -> AnglePartition:
        return self.sectors.partition

    def controls(self, pursuers, evader, rng=None) -> np.ndarray:
        e = as_vec(evader)
        P = np.array([as_vec(p) for p in pursuers])
        X = P - e  # relative frame
        part = self.partition
        # closed-cone membership: a pursuer sitting exactly on a boundary
        # counts for both adjacent sectors (the tube only guarantees the
        # closed sector, so half-open angle binning can vacate one side)
        members: dict[int, list[int]] = {
            m: [i for i, x in enumerate(X) if cone.contains(x, tol=1e-7)]
            for m, cone in enumerate(self.sectors.elements)
        }

        controls = np.array([direct_charge(p, e, self.u_max) for p in P])
        solvers: dict[int, int] = {}
        taken: set[int] = set()
        for m in range(part.size):
            cand = [i for i in members[m] if i not in taken]
            if not cand:
                raise SectorVacated(f"sector {m} holds no pursuer")
            # previous solver first (its warm start is the shifted plan),
            # then outermost, lowest index on ties; fall back inward when
            # the tube QP is infeasible
            prev = self.last_solvers.get(m)
            order = sorted(cand, key=lambda i: (i != prev,
                                                -np.linalg.norm(X[i]), i))
            solved = False
            for i in order:
                warm = self._warm.get(m)
                try:
                    plan = _tmpc.solve_tmpc(X[i], self.specs[m], warm=warm)
                except _tmpc.TmpcInfeasible:
                    continue
                controls[i] = _tmpc.control(X[i], plan)
                self._warm[m] = _tmpc.shifted_guess(plan)
                solvers[m] = i
                taken.add(i)
                solved = True
                break
            if not solved:
                raise SectorVacated(
                    f"sector {m}: no member has a feasible tube QP")
        self.last_solvers = solvers
        return controls

    @property
    def solver_indices(self):
        return sorted(self.last_solvers.values())


# ----------------------------------------------------------------------
# evader policies


@dataclass
class StaticEvader:
    u_max: float

    def control(self, pursuers, evader, rng=None) -> np.ndarray:
        return np.zeros(2)


@dataclass
class RandomEvader:
    """Uniform draw from the disturbance box each tick, driven by the game rng."""

    u_max: float

    def control(self, pursuers, evader, rng=None) -> np.ndarray:
        if rng is None:
            rng = np.random.default_rng(0)
        return rng.uniform(-self.u_max, self.u_max, 2)


@dataclass
class FleeNearestEvader:
    u_max: float

    def control(self, pursuers, evader, rng=None) -> np.ndarray:
        e = as_vec(evader)
        P = np.array([as_vec(p) for p in pursuers])
        i = int(np.argmin(np.linalg.norm(P - e, axis=1)))
        away = e + (e - P[i])
        return clamp_to_box(direct_charge(e, away, self.u_max), self.u_max)


@dataclass
class BoundarySeekEvader:
    """Adversarial probe: commit to a run at the most reachable hull gap.

    At the first tick the evader scores every hull edge (a gap between two
    adjacent pursuers) by the Euclidean approach speed achievable toward its
    midpoint divided by the travel time, both induced by the box input limit
    -- diagonal approaches are genuinely faster under the inf-norm -- then
    locks in an inf-norm-maximal run along that direction.  Commitment
    matters: retargeting every tick lets midpoint-chasing defenses recenter,
    while a committed diagonal run outpaces their lateral blocking.
    """

    u_max: float
    _direction: np.ndarray | None = None

    def control(self, pursuers, evader, rng=None) -> np.ndarray:
        if self._direction is not None:
            return self._direction
        e = as_vec(evader)
        P = np.array([as_vec(p) for p in pursuers])
        try:
            hull = convex_hull(P)
        except DegenerateInput:
            return clamp_to_box(FleeNearestEvader(self.u_max).control(
                pursuers, evader, rng), self.u_max)
        best_d, best_score = None, -1.0
        for a, b in hull.edges():
            d = 0.5 * (a + b) - e
            ninf = float(np.max(np.abs(d)))
            if ninf < 1e-9:
                continue
            score = float(np.linalg.norm(d)) / ninf ** 2
            if score > best_score:
                best_score, best_d = score, d
        if best_d is None:
            return np.zeros(2)
        self._direction = best_d * (self.u_max / np.max(np.abs(best_d)))
        return self._direction


@dataclass
class WorstVertexEvader:
    """Greedy box-vertex adversary: each tick plays the disturbance-box
    vertex that most reduces the signed distance to the pursuer hull."""

    u_max: float

    def control(self, pursuers, evader, rng=None) -> np.ndarray:
        e = as_vec(evader)
        P = np.array([as_vec(p) for p in pursuers])
        verts = [np.array([sx * self.u_max, sy * self.u_max])
                 for sx in (1.0, -1.0) for sy in (1.0, -1.0)]
        try:
            hull = convex_hull(P)
        except DegenerateInput:
            return verts[0]
        scores = [hull_signed_distance(hull, e + v) for v in verts]
        return verts[int(np.argmin(scores))]


@dataclass
class ExternalEvader:
    """Actions fed from outside (the session service); zero when idle."""

    u_max: float
    pending: np.ndarray | None = None

    def submit(self, u) -> None:
        self.pending = clamp_to_box(u, self.u_max)

    def control(self, pursuers, evader, rng=None) -> np.ndarray:
        u = self.pending if self.pending is not None else np.zeros(2)
        self.pending = None
        return clamp_to_box(u, self.u_max)
