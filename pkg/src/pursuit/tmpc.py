"""Tube MPC for the pursuer/evader relative dynamics x+ = x + u + w.

The evader's (negated) input is the disturbance, confined to a box W.  The
nominal system z+ = z + v tracks tightened constraints; the ancillary term
z - x cancels the disturbance drift, so the error set equals W itself and
the tightened sets are plain Pontryagin differences.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from . import qp as _qp
from .geom2d import HPolyhedron, as_vec, pontryagin_diff

DEFAULT_HORIZON = 10


class TmpcError(Exception):
    pass


class EmptyTightenedInput(TmpcError):
    """U shrunk by the disturbance box is empty (pursuer slower than evader)."""


class EmptyTightenedState(TmpcError):
    """Sector shrunk by the disturbance box is empty (sector too thin)."""


class TmpcInfeasible(TmpcError):
    """No nominal trajectory exists from this state."""


@dataclass(frozen=True, eq=False)
class TubeSpec:
    """Per-sector tightened sets and weights for the nominal QP."""

    sector: HPolyhedron
    tightened_state: HPolyhedron
    tightened_input: HPolyhedron
    disturbance: HPolyhedron
    invariant: HPolyhedron
    horizon: int
    Q: np.ndarray
    R: np.ndarray
    P: np.ndarray


@dataclass(frozen=True, eq=False)
class TmpcPlan:
    """Nominal trajectory: states z_0..z_K and inputs v_0..v_{K-1}."""

    nominal_states: np.ndarray
    nominal_inputs: np.ndarray
    objective: float

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.nominal_states.ravel(),
                               self.nominal_inputs.ravel()])


def tighten(sector: HPolyhedron, W: HPolyhedron, U: HPolyhedron,
            horizon: int = DEFAULT_HORIZON,
            Q: np.ndarray | None = None, R: np.ndarray | None = None,
            P: np.ndarray | None = None) -> TubeSpec:
    """Build the tube spec for one sector.

    The error invariant equals W because the error resets to the previous
    disturbance every step.  W is origin-symmetric here, so shrinking U by
    -W and by W agree; both are computed and compared as a sanity check.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    Q = np.eye(2) if Q is None else np.asarray(Q, dtype=float)
    R = np.zeros((2, 2)) if R is None else np.asarray(R, dtype=float)
    P = 3.0 * np.eye(2) if P is None else np.asarray(P, dtype=float)
    S = W
    U_bar = pontryagin_diff(U, S.negated())
    U_bar_sym = pontryagin_diff(U, S)
    if not (np.allclose(U_bar.A, U_bar_sym.A) and
            np.allclose(U_bar.b, U_bar_sym.b)):
        raise TmpcError("disturbance box is not origin-symmetric")
    if U_bar.is_empty():
        raise EmptyTightenedInput("pursuer input box minus disturbance box is empty")
    X_bar = pontryagin_diff(sector, S)
    if X_bar.is_empty():
        raise EmptyTightenedState("sector minus disturbance box is empty")
    return TubeSpec(sector=sector, tightened_state=X_bar,
                    tightened_input=U_bar, disturbance=W, invariant=S,
                    horizon=horizon, Q=Q, R=R, P=P)


def _build_template(spec: TubeSpec):
    """x-independent parts of the nominal QP, cached per spec."""
    K = spec.horizon
    nz = 2 * (K + 1)
    n = nz + 2 * K
    H = np.zeros((n, n))
    for k in range(K):
        H[2 * k:2 * k + 2, 2 * k:2 * k + 2] = 2.0 * spec.Q
        H[nz + 2 * k:nz + 2 * k + 2, nz + 2 * k:nz + 2 * k + 2] = 2.0 * spec.R
    H[2 * K:2 * K + 2, 2 * K:2 * K + 2] = 2.0 * spec.P
    g = np.zeros(n)

    A_eq = np.zeros((2 * K, n))
    for k in range(K):
        A_eq[2 * k:2 * k + 2, 2 * (k + 1):2 * (k + 1) + 2] = np.eye(2)
        A_eq[2 * k:2 * k + 2, 2 * k:2 * k + 2] = -np.eye(2)
        A_eq[2 * k:2 * k + 2, nz + 2 * k:nz + 2 * k + 2] = -np.eye(2)
    b_eq = np.zeros(2 * K)

    Xa, Xb = spec.tightened_state.A, spec.tightened_state.b
    Ua, Ub = spec.tightened_input.A, spec.tightened_input.b
    Sa, Sb = spec.invariant.A, spec.invariant.b
    rows = []
    rhs = []
    for k in range(K + 1):
        blk = np.zeros((Xa.shape[0], n))
        blk[:, 2 * k:2 * k + 2] = Xa
        rows.append(blk)
        rhs.append(Xb)
    for k in range(K):
        blk = np.zeros((Ua.shape[0], n))
        blk[:, nz + 2 * k:nz + 2 * k + 2] = Ua
        rows.append(blk)
        rhs.append(Ub)
    blk = np.zeros((Sa.shape[0], n))
    blk[:, 0:2] = -Sa
    rows.append(blk)
    rhs.append(Sb)  # placeholder: the S rows get Sb - Sa @ x per state
    A_in = np.vstack(rows)
    b_in = np.concatenate(rhs)
    # validate once through the public constructor
    _qp.QuadraticProgram(H=H, g=g, A_eq=A_eq, b_eq=b_eq, A_in=A_in, b_in=b_in)
    return H, g, A_eq, b_eq, A_in, b_in, Sa, Sb


_TEMPLATES: "weakref.WeakKeyDictionary[TubeSpec, tuple]" = weakref.WeakKeyDictionary()


def build_qp(x, spec: TubeSpec) -> _qp.QuadraticProgram:
    """Nominal-trajectory QP at relative state x.

    Variables are (z_0..z_K, v_0..v_{K-1}) stacked componentwise.  Cost is
    sum z_k'Qz_k + v_k'Rv_k plus terminal z_K'Pz_K; dynamics are equality
    rows; memberships z_k in the tightened sector, v_k in the tightened
    input box and x - z_0 in the invariant are inequality rows.
    """
    x = as_vec(x)
    tmpl = _TEMPLATES.get(spec)
    if tmpl is None:
        tmpl = _build_template(spec)
        _TEMPLATES[spec] = tmpl
    H, g, A_eq, b_eq, A_in, b_in, Sa, Sb = tmpl
    b = b_in.copy()
    b[-Sb.shape[0]:] = Sb - Sa @ x
    return _qp.QuadraticProgram.prevalidated(H, g, A_eq, b_eq, A_in, b)


def solve_tmpc(x, spec: TubeSpec,
               warm: np.ndarray | None = None) -> TmpcPlan:
    """Solve the nominal QP; raises TmpcInfeasible when no tube fits."""
    prog = build_qp(x, spec)
    sol = _qp.solve(prog, initial_guess=warm)
    if sol.status is _qp.QpStatus.INFEASIBLE:
        raise TmpcInfeasible(f"tube QP infeasible at x={as_vec(x)}")
    if sol.status is not _qp.QpStatus.OPTIMAL:
        raise TmpcError(f"tube QP did not converge ({sol.status})")
    K = spec.horizon
    nz = 2 * (K + 1)
    return TmpcPlan(nominal_states=sol.x[:nz].reshape(K + 1, 2),
                    nominal_inputs=sol.x[nz:].reshape(K, 2),
                    objective=sol.objective)


def control(x, plan: TmpcPlan) -> np.ndarray:
    """Applied input: first nominal input plus ancillary correction z_0 - x."""
    x = as_vec(x)
    return plan.nominal_inputs[0] + plan.nominal_states[0] - x


def step_relative(x, u, w) -> np.ndarray:
    """One step of the relative dynamics."""
    return as_vec(x) + as_vec(u) + as_vec(w)


def shifted_guess(plan: TmpcPlan) -> np.ndarray:
    """Warm start for the next step: drop the first stage, repeat the last.

    The repeated terminal state with zero input is feasible because the
    tightened input box always contains the origin, and the invariant
    constraint at the successor state is met by construction; this is the
    standard recursive-feasibility candidate.
    """
    z = plan.nominal_states
    v = plan.nominal_inputs
    z_next = np.vstack([z[1:], z[-1]])
    v_next = np.vstack([v[1:], np.zeros(2)])
    return np.concatenate([z_next.ravel(), v_next.ravel()])
