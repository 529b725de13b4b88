"""Dense convex quadratic programming.

Primal active-set solver for small problems (tens of variables):

    min  1/2 x' H x + g' x
    s.t. A_eq x = b_eq,  A_in x <= b_in

Equality constraints are kept in every working-set solve; a phase-1 LP
supplies the feasible start (and certifies infeasibility) unless the caller
provides a feasible initial guess.  Semidefinite Hessians are handled by a
tiny internal Tikhonov regularization.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

_REG = 1e-9
_FEAS_TOL = 1e-8
_KKT_TOL = 1e-6


class IllFormed(Exception):
    """Dimension mismatch or a Hessian that is indefinite beyond tolerance."""


class QpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    MAX_ITERATIONS = "max_iterations"


@dataclass
class QuadraticProgram:
    H: np.ndarray
    g: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_in: np.ndarray | None = None
    b_in: np.ndarray | None = None

    def __post_init__(self):
        self.H = np.atleast_2d(np.asarray(self.H, dtype=float))
        self.g = np.atleast_1d(np.asarray(self.g, dtype=float))
        n = self.g.shape[0]
        if self.H.shape != (n, n):
            raise IllFormed(f"H shape {self.H.shape} vs n={n}")
        if not np.allclose(self.H, self.H.T, atol=1e-9):
            raise IllFormed("H must be symmetric")
        if self.A_eq is None:
            self.A_eq = np.zeros((0, n))
            self.b_eq = np.zeros(0)
        else:
            self.A_eq = np.atleast_2d(np.asarray(self.A_eq, dtype=float))
            self.b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=float))
        if self.A_in is None:
            self.A_in = np.zeros((0, n))
            self.b_in = np.zeros(0)
        else:
            self.A_in = np.atleast_2d(np.asarray(self.A_in, dtype=float))
            self.b_in = np.atleast_1d(np.asarray(self.b_in, dtype=float))
        if (self.A_eq.shape[1] != n or self.A_in.shape[1] != n
                or self.A_eq.shape[0] != self.b_eq.shape[0]
                or self.A_in.shape[0] != self.b_in.shape[0]):
            raise IllFormed("constraint dimension mismatch")
        # cheap PSD check: Cholesky of the jittered Hessian
        try:
            np.linalg.cholesky(self.H + 1e-7 * np.eye(n))
        except np.linalg.LinAlgError:
            raise IllFormed("H is not positive semidefinite within tolerance")

    @classmethod
    def prevalidated(cls, H, g, A_eq, b_eq, A_in, b_in) -> "QuadraticProgram":
        """Construct without validation; for hot paths reusing a checked
        template where only right-hand sides change."""
        obj = cls.__new__(cls)
        obj.H, obj.g = H, g
        obj.A_eq, obj.b_eq = A_eq, b_eq
        obj.A_in, obj.b_in = A_in, b_in
        return obj

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * x @ self.H @ x + self.g @ x)

    def is_feasible(self, x: np.ndarray, tol: float = _FEAS_TOL) -> bool:
        if self.A_eq.shape[0] and np.max(np.abs(self.A_eq @ x - self.b_eq)) > tol:
            return False
        if self.A_in.shape[0] and np.max(self.A_in @ x - self.b_in) > tol:
            return False
        return True


@dataclass
class KktResiduals:
    stationarity: float
    primal: float
    dual: float
    complementarity: float

    def max(self) -> float:
        return max(self.stationarity, self.primal, self.dual,
                   self.complementarity)


@dataclass
class QpSolution:
    x: np.ndarray
    objective: float
    status: QpStatus
    kkt_residual: float
    eq_multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    in_multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0


def check_kkt(qp: QuadraticProgram, x: np.ndarray,
              eq_multipliers: np.ndarray | None = None,
              in_multipliers: np.ndarray | None = None) -> KktResiduals:
    """Residual norms of the KKT conditions at (x, multipliers)."""
    nu = np.zeros(qp.A_eq.shape[0]) if eq_multipliers is None else eq_multipliers
    lam = np.zeros(qp.A_in.shape[0]) if in_multipliers is None else in_multipliers
    grad = qp.H @ x + qp.g
    if qp.A_eq.shape[0]:
        grad = grad + qp.A_eq.T @ nu
    if qp.A_in.shape[0]:
        grad = grad + qp.A_in.T @ lam
    stationarity = float(np.max(np.abs(grad))) if grad.size else 0.0
    primal = 0.0
    if qp.A_eq.shape[0]:
        primal = max(primal, float(np.max(np.abs(qp.A_eq @ x - qp.b_eq))))
    slack = np.zeros(0)
    if qp.A_in.shape[0]:
        slack = qp.b_in - qp.A_in @ x
        primal = max(primal, float(np.max(-slack, initial=0.0)))
    dual = float(np.max(-lam, initial=0.0))
    comp = float(np.max(np.abs(lam * slack), initial=0.0)) if slack.size else 0.0
    return KktResiduals(stationarity, primal, dual, comp)


def _phase1(qp: QuadraticProgram) -> np.ndarray | None:
    """Feasible point via an LP, or None with a certified empty feasible set."""
    n = qp.n
    m_in = qp.A_in.shape[0]
    if m_in == 0:
        if qp.A_eq.shape[0] == 0:
            return np.zeros(n)
        sol, *_ = np.linalg.lstsq(qp.A_eq, qp.b_eq, rcond=None)
        if np.max(np.abs(qp.A_eq @ sol - qp.b_eq), initial=0.0) > 1e-7:
            return None
        return sol
    # min t  s.t.  A_in x - t <= b_in,  A_eq x = b_eq,  t >= 0
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([qp.A_in, -np.ones((m_in, 1))])
    A_eq = None
    b_eq = None
    if qp.A_eq.shape[0]:
        A_eq = np.hstack([qp.A_eq, np.zeros((qp.A_eq.shape[0], 1))])
        b_eq = qp.b_eq
    bounds = [(None, None)] * n + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=qp.b_in, A_eq=A_eq, b_eq=b_eq,
                  bounds=bounds, method="highs")
    if res.status != 0 or res.fun > 1e-7:
        return None
    return res.x[:n]


def _independent_subset(A_fixed: np.ndarray, rows: np.ndarray, n: int) -> list[int]:
    """Indices of rows that extend A_fixed's row space, via pivoted QR."""
    from scipy.linalg import qr as _sqr

    rows = np.asarray(rows, dtype=float)
    if A_fixed.size:
        # project out the fixed row space first so those rows stay in the basis
        Qeq, _ = np.linalg.qr(A_fixed.T)
        rows = rows - (rows @ Qeq) @ Qeq.T
    _, R, piv = _sqr(rows.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0:
        return []
    rank = int(np.sum(diag > 1e-8 * max(1.0, diag[0])))
    return [int(p) for p in piv[:rank]]


def solve(qp: QuadraticProgram, max_iter: int = 200, tol: float = _KKT_TOL,
          initial_guess: np.ndarray | None = None) -> QpSolution:
    """Solve a convex QP with a primal active-set iteration.

    Deterministic: ties in blocking/dropped constraints break toward the
    lowest index.  ``initial_guess`` is used only when it is feasible;
    otherwise a phase-1 LP finds the start (or certifies infeasibility).
    """
    n = qp.n
    H = qp.H + _REG * np.eye(n)
    x = None
    if initial_guess is not None:
        x0 = np.asarray(initial_guess, dtype=float).reshape(n)
        if qp.is_feasible(x0):
            x = x0.copy()
    if x is None:
        x = _phase1(qp)
        if x is None:
            return QpSolution(x=np.full(n, np.nan), objective=np.nan,
                              status=QpStatus.INFEASIBLE, kkt_residual=np.nan)

    m_in = qp.A_in.shape[0]
    working: list[int] = []
    if m_in:
        # start from the active constraints at x, kept linearly independent
        # together with the equalities so the KKT system stays regular
        resid = qp.A_in @ x - qp.b_in
        active = np.nonzero(resid >= -1e-9)[0]
        if active.size:
            working = _independent_subset(qp.A_eq, qp.A_in[active], n)
            working = sorted(int(active[i]) for i in working)

    lam_full = np.zeros(m_in)
    nu = np.zeros(qp.A_eq.shape[0])
    status = QpStatus.MAX_ITERATIONS
    it = 0
    for it in range(1, max_iter + 1):
        C = np.vstack([qp.A_eq, qp.A_in[working]]) if (qp.A_eq.shape[0] or working) \
            else np.zeros((0, n))
        d = np.concatenate([qp.b_eq, qp.b_in[working]])
        mc = C.shape[0]
        KKT = np.zeros((n + mc, n + mc))
        KKT[:n, :n] = H
        if mc:
            KKT[:n, n:] = C.T
            KKT[n:, :n] = C
        rhs = np.concatenate([-(H @ x + qp.g), d - C @ x]) if mc \
            else -(H @ x + qp.g)
        try:
            sol = np.linalg.solve(KKT, rhs)
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(KKT, rhs, rcond=None)
        p = sol[:n]
        mult = sol[n:]

        if np.max(np.abs(p), initial=0.0) <= 1e-10:
            lam_w = mult[qp.A_eq.shape[0]:]
            if lam_w.size == 0 or np.min(lam_w) >= -1e-9:
                nu = mult[:qp.A_eq.shape[0]]
                lam_full = np.zeros(m_in)
                for idx, w in enumerate(working):
                    lam_full[w] = max(0.0, lam_w[idx])
                status = QpStatus.OPTIMAL
                break
            drop_pos = int(np.argmin(lam_w))
            working.pop(drop_pos)
            continue

        alpha = 1.0
        blocking = -1
        if m_in:
            denom = qp.A_in @ p
            slack = qp.b_in - qp.A_in @ x
            ratios = np.full(m_in, np.inf)
            movable = denom > 1e-12
            if working:
                movable[working] = False
            ratios[movable] = slack[movable] / denom[movable]
            i = int(np.argmin(ratios))  # first index wins ties
            if ratios[i] < alpha - 1e-15:
                alpha = max(float(ratios[i]), 0.0)
                blocking = i
        x = x + alpha * p
        if blocking >= 0:
            working.append(blocking)
            working.sort()

    res = check_kkt(qp, x, nu, lam_full)
    return QpSolution(x=x, objective=qp.objective(x), status=status,
                      kkt_residual=res.max(), eq_multipliers=nu,
                      in_multipliers=lam_full, iterations=it)
