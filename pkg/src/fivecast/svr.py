"""Support vector regression with an epsilon-insensitive loss.

The fitter maximizes the standard dual in the net coefficients
``b_i = alpha_i - alpha_i*``:

    W(b) = y.b - eps * sum_i |b_i| - 0.5 * b' K b
    subject to  sum_i b_i = 0,  |b_i| <= c_reg.

Optimization is a sequence of exact two-coordinate moves: shifting mass
``t`` from coefficient j to coefficient i preserves the equality
constraint and reduces W to a piecewise quadratic in ``t`` (kinks where a
coefficient crosses zero), so the best move is found by evaluating a
handful of closed-form candidates.  Each move works on the current
maximal violating pair: the coefficient with the steepest feasible
ascent rate anchors the move, and its partner is chosen among
opposite-direction candidates by a curvature-aware gain estimate
(rate squared over pair curvature).  A pass is ``n`` such moves; the
loop stops when the largest pair gap, the KKT violation of the
equality-constrained problem, drops to ``tol``, or when the pass budget
runs out.  Selecting moves by value rather than by stationarity keeps
each step correct even for the tanh kernel, whose gram matrix need not
be positive semidefinite.

The bias is recovered from samples strictly inside the box, or from the
midpoint of the interval the KKT inequalities leave feasible when no
such sample exists.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .errors import ConvergenceWarning, DomainError, ShapeError
from .kernels import KernelSpec, gram, kernel_column

_PROGRESS_TOL = 1e-12


def _smo_bias(beta, y, f, eps, c):
    # Interior samples pin the bias exactly; otherwise take the midpoint
    # of the interval the inequality conditions allow.
    lo_thr = 1e-10 * c
    hi_thr = c * (1.0 - 1e-10)
    r = y - f
    interior = (np.abs(beta) > lo_thr) & (np.abs(beta) < hi_thr)
    if np.any(interior):
        return float(np.mean((r - np.sign(beta) * eps)[interior]))
    lo = -np.inf
    hi = np.inf
    for i in range(beta.shape[0]):
        if abs(beta[i]) <= lo_thr:
            if r[i] - eps > lo:
                lo = r[i] - eps
            if r[i] + eps < hi:
                hi = r[i] + eps
        elif beta[i] >= hi_thr:
            if r[i] - eps < hi:
                hi = r[i] - eps
        else:
            if r[i] + eps > lo:
                lo = r[i] + eps
    if lo > -np.inf and hi < np.inf:
        return 0.5 * (lo + hi)
    if lo > -np.inf:
        return lo
    if hi < np.inf:
        return hi
    return 0.0


def _smo_best_up(beta, y, f, eps, c):
    # Steepest one-sided ascent rate of the dual among coefficients that
    # can still increase; returns (rate, index), index -1 when none can.
    hi_thr = c * (1.0 - 1e-10)
    best = -np.inf
    best_k = -1
    for k in range(beta.shape[0]):
        if beta[k] >= hi_thr:
            continue
        r = y[k] - f[k]
        rate = r - eps if beta[k] >= 0.0 else r + eps
        if rate > best:
            best = rate
            best_k = k
    return best, best_k


def _smo_best_down(beta, y, f, eps, c):
    # Same for coefficients that can still decrease.
    hi_thr = c * (1.0 - 1e-10)
    best = -np.inf
    best_k = -1
    for k in range(beta.shape[0]):
        if beta[k] <= -hi_thr:
            continue
        r = y[k] - f[k]
        rate = eps - r if beta[k] > 0.0 else -eps - r
        if rate > best:
            best = rate
            best_k = k
    return best, best_k


def _smo_partner(kmat, beta, y, f, eps, c, i, up_i):
    # Down-partner for an up-move at i: among coefficients that can
    # decrease and give the pair a positive ascent rate, pick the one
    # with the largest single-step gain estimate rate^2 / curvature.
    hi_thr = c * (1.0 - 1e-10)
    kii = kmat[i, i]
    best_est = -np.inf
    best_j = -1
    for j in range(beta.shape[0]):
        if j == i or beta[j] <= -hi_thr:
            continue
        r = y[j] - f[j]
        dn_j = eps - r if beta[j] > 0.0 else -eps - r
        rate = up_i + dn_j
        if rate <= 0.0:
            continue
        kappa = kii + kmat[j, j] - 2.0 * kmat[i, j]
        if kappa < 1e-12:
            kappa = 1e-12
        est = rate * rate / kappa
        if est > best_est:
            best_est = est
            best_j = j
    return best_j


def _smo_gain(t, g, kappa, bi, bj, eps):
    # Exact change in the dual objective for the move (bi+t, bj-t).
    return (
        g * t
        - 0.5 * kappa * t * t
        - eps * (abs(bi + t) - abs(bi) + abs(bj - t) - abs(bj))
    )


def _smo_step(kmat, y, beta, f, i, j, eps, c):
    # Best feasible two-coordinate move; returns the objective gain
    # (0.0 when no move helps).
    bi = beta[i]
    bj = beta[j]
    lo = max(-c - bi, bj - c)
    hi = min(c - bi, bj + c)
    if hi - lo < 1e-14:
        return 0.0
    kappa = kmat[i, i] + kmat[j, j] - 2.0 * kmat[i, j]
    g = (y[i] - f[i]) - (y[j] - f[j])
    cand = np.empty(7)
    cand[0] = lo
    cand[1] = hi
    cand[2] = -bi
    cand[3] = bj
    m = 4
    if kappa > 1e-14:
        cand[4] = g / kappa
        cand[5] = (g - 2.0 * eps) / kappa
        cand[6] = (g + 2.0 * eps) / kappa
        m = 7
    best_t = 0.0
    best_gain = 0.0
    for idx in range(m):
        t = cand[idx]
        if t < lo:
            t = lo
        elif t > hi:
            t = hi
        gain = _smo_gain_c(t, g, kappa, bi, bj, eps)
        if gain > best_gain:
            best_gain = gain
            best_t = t
    if best_gain <= _PROGRESS_TOL:
        return 0.0
    new_bi = bi + best_t
    new_bj = bj - best_t
    if new_bi > c:
        new_bi = c
    elif new_bi < -c:
        new_bi = -c
    if new_bj > c:
        new_bj = c
    elif new_bj < -c:
        new_bj = -c
    dbi = new_bi - bi
    dbj = new_bj - bj
    beta[i] = new_bi
    beta[j] = new_bj
    f += dbi * kmat[:, i] + dbj * kmat[:, j]
    return best_gain


_smo_bias_c = njit(cache=True)(_smo_bias)
_smo_best_up_c = njit(cache=True)(_smo_best_up)
_smo_best_down_c = njit(cache=True)(_smo_best_down)
_smo_partner_c = njit(cache=True)(_smo_partner)
_smo_gain_c = njit(cache=True)(_smo_gain)
_smo_step_c = njit(cache=True)(_smo_step)


def _smo_gap(beta, y, f, eps, c):
    # Largest feasible pair ascent rate.  When it is positive the two
    # argmax indices are necessarily distinct (one coefficient's up and
    # down rates sum to at most zero), so this is the true pair gap.
    up, iu = _smo_best_up_c(beta, y, f, eps, c)
    dn, idn = _smo_best_down_c(beta, y, f, eps, c)
    if iu < 0 or idn < 0:
        return -np.inf
    return up + dn


_smo_gap_c = njit(cache=True)(_smo_gap)


def _smo_solve(kmat, y, eps, c, tol, max_passes):
    n = y.shape[0]
    beta = np.zeros(n)
    f = np.zeros(n)
    passes = 0
    converged = 0
    gap = _smo_gap_c(beta, y, f, eps, c)
    if gap <= tol:
        converged = 1
    else:
        for p in range(max_passes):
            stepped_any = False
            for _ in range(n):
                up, iu = _smo_best_up_c(beta, y, f, eps, c)
                dn, idn = _smo_best_down_c(beta, y, f, eps, c)
                if iu < 0 or idn < 0:
                    gap = -np.inf
                    break
                gap = up + dn
                if gap <= tol:
                    break
                j = _smo_partner_c(kmat, beta, y, f, eps, c, iu, up)
                gain = 0.0
                if j >= 0:
                    gain = _smo_step_c(kmat, y, beta, f, iu, j, eps, c)
                if gain <= 0.0 and j != idn:
                    gain = _smo_step_c(kmat, y, beta, f, iu, idn, eps, c)
                if gain <= 0.0:
                    # the best pair cannot make numeric progress
                    break
                stepped_any = True
            passes = p + 1
            gap = _smo_gap_c(beta, y, f, eps, c)
            if gap <= tol:
                converged = 1
                break
            if not stepped_any:
                break
    bias = _smo_bias_c(beta, y, f, eps, c)
    if gap < 0.0:
        gap = 0.0
    return beta, bias, passes, converged, gap


_smo_solve_c = njit(cache=True)(_smo_solve)


@dataclass(frozen=True)
class SvrModel:
    kernel: KernelSpec
    inputs: np.ndarray  # training rows the expansion sums over
    coefs: np.ndarray  # net dual coefficients, |coef| <= c_reg, sum ~ 0
    bias: float
    epsilon: float
    c_reg: float
    converged: bool
    passes: int
    max_violation: float


def dual_objective(kmat, targets, epsilon: float, coefs) -> float:
    """The maximized dual value at the given coefficients."""
    kmat = np.asarray(kmat, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    b = np.asarray(coefs, dtype=np.float64)
    return float(y @ b - epsilon * np.sum(np.abs(b)) - 0.5 * b @ kmat @ b)


def fit(
    inputs,
    targets,
    kernel: KernelSpec,
    epsilon: float = 0.01,
    c_reg: float = 10.0,
    tol: float = 1e-4,
    max_passes: int = 200,
    seed: int = 0,
) -> SvrModel:
    """Solve the dual by maximal-violating-pair coordinate moves.

    The solver is deterministic; ``seed`` is accepted so every model in
    the package shares one fitting signature, and repeat calls with any
    fixed arguments reproduce the same model bit for bit.  Emits
    ConvergenceWarning (and still returns the model) when the pass
    budget ends with a KKT violation above ``tol``.
    """
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"inputs must be 2-D, got ndim={x.ndim}")
    if y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise ShapeError(f"targets must be 1-D with {x.shape[0]} entries")
    if x.shape[0] == 0:
        raise DomainError("no training samples")
    if epsilon < 0.0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    if not c_reg > 0.0:
        raise DomainError(f"c_reg must be > 0, got {c_reg}")
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    if max_passes < 1:
        raise DomainError(f"max_passes must be >= 1, got {max_passes}")
    kmat = gram(kernel, x)
    beta, bias, passes, converged, viol = _smo_solve_c(
        np.ascontiguousarray(kmat),
        np.ascontiguousarray(y),
        float(epsilon),
        float(c_reg),
        float(tol),
        int(max_passes),
    )
    if not converged:
        warnings.warn(
            f"pairwise solver stopped after {passes} passes with KKT violation "
            f"{viol:.3g} > tol {tol:.3g}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return SvrModel(
        kernel=kernel,
        inputs=x.copy(),
        coefs=beta,
        bias=float(bias),
        epsilon=float(epsilon),
        c_reg=float(c_reg),
        converged=bool(converged),
        passes=int(passes),
        max_violation=float(viol),
    )


def predict(model: SvrModel, x) -> float:
    """Kernel expansion over the training rows plus the bias."""
    col = kernel_column(model.kernel, model.inputs, x)
    return float(model.coefs @ col + model.bias)


def predict_batch(model: SvrModel, inputs) -> np.ndarray:
    arr = np.asarray(inputs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != model.inputs.shape[1]:
        raise ShapeError(f"inputs must be (n, {model.inputs.shape[1]}), got {arr.shape}")
    return np.array([predict(model, row) for row in arr])
