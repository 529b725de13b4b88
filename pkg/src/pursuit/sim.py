"""Discrete-time pursuit game engine.

Simultaneous-move semantics: every tick, pursuer controls are computed from
the state at time t (the evader's current input is unknown to them), the
evader's control is computed from the same state, and both are applied
together.  Runs are deterministic given the scenario configuration
including its seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import policies as _pol
from . import tmpc as _tmpc
from .geom2d import (ConvexHull, HPolyhedron, as_vec, convex_hull,
                     hull_contains, hull_signed_distance, DegenerateInput)
from .partition import (InfeasiblePartition, construct_egp, relative_angles,
                        sectors_from_partition, select_subset)


class SimError(Exception):
    pass


class NotEncircled(SimError):
    """Initialization violates the encirclement condition."""


class InitialTmpcInfeasible(SimError):
    """An assigned pursuer starts inside the tightening band of its sector."""


TEAM_POLICIES = ("tmpc", "voronoi", "direct_charge")
EVADER_POLICIES = ("static", "random", "flee_nearest", "boundary_seek",
                   "worst_vertex", "external")


@dataclass
class ScenarioConfig:
    pursuer_init: np.ndarray          # (N, 2)
    evader_init: np.ndarray           # (2,)
    u_p_max: float = 1.1
    u_e_max: float = 1.0
    r_c: float = 5.0
    M: int = 4
    K: int = 10
    Q: np.ndarray = field(default_factory=lambda: np.eye(2))
    R: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))
    P: np.ndarray = field(default_factory=lambda: 3.0 * np.eye(2))
    max_steps: int = 500
    seed: int = 0
    pursuer_policy: str = "tmpc"
    evader_policy: str = "static"
    voronoi_margin: float = 50.0
    egp_eps: float = 1e-3

    def __post_init__(self):
        self.pursuer_init = np.atleast_2d(np.asarray(self.pursuer_init, float))
        self.evader_init = as_vec(self.evader_init)
        self.Q = _as_weight(self.Q)
        self.R = _as_weight(self.R)
        self.P = _as_weight(self.P)
        if not self.u_p_max >= self.u_e_max > 0:
            raise ValueError("need u_p_max >= u_e_max > 0")
        if self.r_c <= 0:
            raise ValueError("capture radius must be positive")
        N = self.pursuer_init.shape[0]
        if not 4 <= self.M <= N:
            raise ValueError(f"need N >= M >= 4, got N={N}, M={self.M}")
        if self.pursuer_policy not in TEAM_POLICIES:
            raise ValueError(f"unknown pursuer policy {self.pursuer_policy!r}")
        if self.evader_policy not in EVADER_POLICIES:
            raise ValueError(f"unknown evader policy {self.evader_policy!r}")

    @property
    def n_pursuers(self) -> int:
        return self.pursuer_init.shape[0]


def _as_weight(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim == 0:
        return float(w) * np.eye(2)
    if w.shape != (2, 2):
        raise ValueError("weights must be scalars or 2x2 matrices")
    return w


@dataclass
class GameState:
    t: int
    pursuers: np.ndarray
    evader: np.ndarray
    captured: bool
    encircled: bool
    assignment: dict  # pursuer index -> sector index (tmpc policy only)


@dataclass
class StepRecord:
    t: int
    pursuers: np.ndarray
    evader: np.ndarray
    pursuer_controls: np.ndarray
    evader_control: np.ndarray
    min_pursuer_distance: float
    hull_signed_distance_all: float
    hull_signed_distance_assigned: float
    encircled: bool
    captured: bool
    solver_indices: list


@dataclass
class Outcome:
    kind: str  # "captured" | "escaped" | "timeout"
    t: int


def _metrics(pursuers: np.ndarray, evader: np.ndarray, r_c: float,
             solver_indices) -> tuple:
    dists = np.linalg.norm(pursuers - evader, axis=1)
    min_dist = float(dists.min())
    captured = min_dist <= r_c
    try:
        hull_all = convex_hull(pursuers)
        d_all = hull_signed_distance(hull_all, evader)
    except DegenerateInput:
        d_all = -math.inf
    if solver_indices:
        try:
            hull_a = convex_hull(pursuers[list(solver_indices)])
            d_assigned = hull_signed_distance(hull_a, evader)
        except DegenerateInput:
            d_assigned = -math.inf
    else:
        d_assigned = d_all
    encircled = d_all >= 0
    return min_dist, d_all, d_assigned, encircled, captured


class Game:
    """One pursuit game: policies plus mutable state and its trajectory."""

    def __init__(self, cfg: ScenarioConfig,
                 external_evader: "_pol.ExternalEvader | None" = None):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        P0 = cfg.pursuer_init.copy()
        e0 = cfg.evader_init.copy()

        try:
            hull = convex_hull(P0)
        except DegenerateInput as err:
            raise NotEncircled(f"pursuer hull is degenerate: {err}") from err
        inside, _ = hull_contains(hull, e0)
        if not inside:
            raise NotEncircled("evader starts outside the pursuer hull")

        self.assignment: dict = {}
        if cfg.pursuer_policy == "tmpc":
            self.team = self._build_tmpc_team(P0, e0)
        elif cfg.pursuer_policy == "voronoi":
            self.team = _pol.VoronoiCentroidTeam(cfg.u_p_max, cfg.voronoi_margin)
        else:
            self.team = _pol.DirectChargeTeam(cfg.u_p_max)

        self.evader_policy = self._build_evader(external_evader)
        self.state = GameState(t=0, pursuers=P0, evader=e0, captured=False,
                               encircled=True, assignment=dict(self.assignment))
        md, da, das, enc, cap = _metrics(P0, e0, cfg.r_c,
                                         sorted(self.assignment))
        self.state.captured = cap
        self.state.encircled = enc
        self.records: list[StepRecord] = [StepRecord(
            t=0, pursuers=P0.copy(), evader=e0.copy(),
            pursuer_controls=np.zeros_like(P0), evader_control=np.zeros(2),
            min_pursuer_distance=md, hull_signed_distance_all=da,
            hull_signed_distance_assigned=das, encircled=enc, captured=cap,
            solver_indices=sorted(self.assignment))]

    def _build_tmpc_team(self, P0: np.ndarray, e0: np.ndarray):
        cfg = self.cfg
        ra = relative_angles(P0, e0)
        selected = select_subset(ra, cfg.M)
        part = construct_egp(ra, selected, eps=cfg.egp_eps)
        sectors = sectors_from_partition(part)
        W = HPolyhedron.centered_box(cfg.u_e_max)
        U = HPolyhedron.centered_box(cfg.u_p_max)
        specs = [
            _tmpc.tighten(sec, W, U, horizon=cfg.K, Q=cfg.Q, R=cfg.R, P=cfg.P)
            for sec in sectors.elements
        ]
        # one selected pursuer per sector, fixed from t = 0
        self.assignment = {}
        for i in selected:
            x = P0[i] - e0
            self.assignment[i] = part.sector_of_point(x)
        if sorted(self.assignment.values()) != list(range(cfg.M)):
            raise InfeasiblePartition(
                "selected pursuers do not land one per sector")
        # every assigned pursuer must start with a feasible tube QP
        for i, m in self.assignment.items():
            try:
                _tmpc.solve_tmpc(P0[i] - e0, specs[m])
            except _tmpc.TmpcInfeasible as err:
                raise InitialTmpcInfeasible(
                    f"pursuer {i} starts inside the tightening band of "
                    f"sector {m}") from err
        return _pol.TmpcEgpTeam(u_max=cfg.u_p_max, sectors=sectors,
                                specs=specs, initial_assignment=dict(self.assignment))

    def _build_evader(self, external):
        cfg = self.cfg
        kinds = {
            "static": _pol.StaticEvader,
            "random": _pol.RandomEvader,
            "flee_nearest": _pol.FleeNearestEvader,
            "boundary_seek": _pol.BoundarySeekEvader,
            "worst_vertex": _pol.WorstVertexEvader,
        }
        if cfg.evader_policy == "external":
            return external if external is not None \
                else _pol.ExternalEvader(cfg.u_e_max)
        return kinds[cfg.evader_policy](cfg.u_e_max)

    # ------------------------------------------------------------------

    def tick(self) -> StepRecord:
        """Advance one step; both sides move from the same observed state."""
        if self.state.captured:
            raise SimError("game already ended in capture")
        if self.state.t >= self.cfg.max_steps:
            raise SimError("step limit reached")
        s = self.state
        u_team = self.team.controls(s.pursuers, s.evader, self.rng)
        u_e = _pol.clamp_to_box(
            self.evader_policy.control(s.pursuers, s.evader, self.rng),
            self.cfg.u_e_max)
        assert float(np.max(np.abs(u_team))) <= self.cfg.u_p_max + 1e-9
        new_P = s.pursuers + u_team
        new_e = s.evader + u_e
        t = s.t + 1
        solver_indices = self.team.solver_indices or sorted(self.assignment)
        md, da, das, enc, cap = _metrics(new_P, new_e, self.cfg.r_c,
                                         solver_indices)
        self.state = GameState(t=t, pursuers=new_P, evader=new_e,
                               captured=cap, encircled=enc,
                               assignment=dict(self.assignment))
        rec = StepRecord(t=t, pursuers=new_P.copy(), evader=new_e.copy(),
                         pursuer_controls=u_team, evader_control=u_e,
                         min_pursuer_distance=md,
                         hull_signed_distance_all=da,
                         hull_signed_distance_assigned=das,
                         encircled=enc, captured=cap,
                         solver_indices=list(solver_indices))
        self.records.append(rec)
        return rec

    def run(self) -> Outcome:
        """Tick until capture or the step cap; escape does not stop the run."""
        while not self.state.captured and self.state.t < self.cfg.max_steps:
            self.tick()
        return self.outcome()

    def outcome(self) -> Outcome:
        if self.state.captured:
            return Outcome("captured", self.state.t)
        first_escape = next((r.t for r in self.records
                             if r.hull_signed_distance_all < 0), None)
        if first_escape is not None:
            return Outcome("escaped", first_escape)
        return Outcome("timeout", self.state.t)


def init_game(cfg: ScenarioConfig, **kwargs) -> Game:
    return Game(cfg, **kwargs)


def run_game(cfg: ScenarioConfig) -> tuple[Outcome, list[StepRecord]]:
    game = Game(cfg)
    outcome = game.run()
    return outcome, game.records


def hull_signed_distance_state(state: GameState) -> float:
    """Signed distance from the evader to the all-pursuer hull boundary."""
    try:
        hull = convex_hull(state.pursuers)
    except DegenerateInput:
        return -math.inf
    return hull_signed_distance(hull, state.evader)
