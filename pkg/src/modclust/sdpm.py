"""SDP relaxation of modularity clustering with random-hyperplane rounding.

Pipeline: relax the community-indicator vector program to unit vectors with
pairwise-nonnegative inner products, solve the relaxation by a low-rank
factorization whose rows live on the unit sphere intersected with the
nonnegative orthant (so every pairwise inner product is nonnegative by
construction), then round with k random hyperplanes for k in {2, 3} and keep
the best clustering found over all trials.

Cluster-indicator solutions are themselves nonnegative factorizations, so
the solved objective always dominates the integral optimum; the returned
report carries two certificates relative to the solver's upper bound U:
Q > KAPPA * U - (1 - KAPPA) and Q > U - 2 * (1 - KAPPA), with KAPPA = 0.766
inherited from the rounding analysis of the all-nonnegative (max-agree)
form of the objective.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import Clustering, Graph, modularity, modularity_matrix

__all__ = [
    "KAPPA",
    "ADDITIVE_GAP",
    "SolverConfig",
    "Embedding",
    "SdpmReport",
    "MaxAgreeForm",
    "solve_sdp",
    "round_hyperplanes",
    "sdpm",
    "max_agree_shift",
]

KAPPA = 0.766
ADDITIVE_GAP = 2.0 * (1.0 - KAPPA)  # 0.468


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    trials: int = 1000
    restarts: int = 5
    rank: int | None = None       # default: ceil(sqrt(2n)) + 1
    feastol: float = 1e-6
    grad_tol: float = 1e-7        # stationarity residual target
    max_iters: int = 20000        # coordinate sweeps per restart
    refine: bool = True           # vertex-move polish of each rounded trial
    # convex rescue pass for degenerate instances whose factorized solve
    # collapses onto the all-identical embedding (a spurious optimum of the
    # nonconvex factorization; the splitting solver has no such trap)
    admm_rescue: bool = True
    admm_iters: int = 120_000
    admm_rescue_max_n: int = 64


@dataclass(frozen=True)
class Embedding:
    """Unit vectors solving the relaxation, with feasibility diagnostics."""

    vectors: np.ndarray              # n x r, rows unit-norm and nonnegative
    objective: float                 # (1/2M) sum_ij B_ij <x_i, x_j>
    max_pairwise_violation: float    # max over i != j of max(0, -<x_i, x_j>)
    stationarity_slack: float        # heuristic optimality slack
    converged: bool

    @property
    def upper_bound(self) -> float:
        """Reported upper bound on the vector-program value."""
        return self.objective + self.stationarity_slack


@dataclass(frozen=True)
class SdpmReport:
    clustering: Clustering
    q: float
    sdp_objective: float
    sdp_upper_bound: float
    converged: bool
    additive_gap_bound: float = ADDITIVE_GAP
    wall_time: float = 0.0

    @property
    def multiplicative_certificate(self) -> float:
        """Lower bound KAPPA * U - (1 - KAPPA) that q must exceed."""
        return KAPPA * self.sdp_upper_bound - (1.0 - KAPPA)

    @property
    def additive_certificate(self) -> float:
        """Lower bound U - 2(1 - KAPPA) that q must exceed."""
        return self.sdp_upper_bound - ADDITIVE_GAP


def _ascend(bt_offdiag: np.ndarray, x: np.ndarray, grad_tol: float, max_sweeps: int):
    """Cyclic closed-form coordinate ascent over sphere-orthant rows.

    Row i's subproblem max 2 <x_i, c_i> with c_i = sum_{j != i} bt_ij x_j has
    the exact solution clip(c_i, 0) normalized (or a basis vector when the
    clip vanishes), so the objective ascends monotonically without any step
    size.  The residual tracks the best first-order row improvement.
    """
    n = x.shape[0]
    y = bt_offdiag @ x
    resid = math.inf
    sweeps = 0
    tol2 = grad_tol * grad_tol
    prev_obj = -math.inf
    flat = 0
    for _ in range(max_sweeps):
        sweeps += 1
        resid = 0.0
        for i in range(n):
            c = y[i]
            cp = np.maximum(c, 0.0)
            norm = float(np.linalg.norm(cp))
            if norm <= 1e-300:
                new = np.zeros_like(c)
                new[int(np.argmax(c))] = 1.0
            else:
                new = cp / norm
            d = new - x[i]
            move = float(d @ d)
            if move > 0.0:
                resid = max(resid, move * float(c @ c))
                y += np.outer(bt_offdiag[:, i], d)
                x[i] = new
        if resid < tol2:
            return x, math.sqrt(resid), sweeps, True
        # ascent is monotone: a flat objective means the iterate sits on a
        # degenerate optimum even though single rows still jitter
        obj = float(np.sum(x * y))
        flat = flat + 1 if obj - prev_obj < 1e-11 * (1.0 + abs(obj)) else 0
        prev_obj = obj
        if flat >= 5:
            return x, math.sqrt(resid), sweeps, True
    return x, math.sqrt(resid), sweeps, False


def _admm_solve(bt: np.ndarray, n: int, iters: int):
    """Operator-splitting solve of the exact convex relaxation.

    max <bt, G> over G PSD with unit diagonal and nonnegative entries, via
    ADMM alternating a PSD projection with the box/diagonal clamp.  Slow but
    trap-free; used as the rescue path.  Deterministic (no randomness).
    """
    scale = float(np.abs(bt).max()) or 1.0
    c = bt / scale
    rho = 1.0
    relax = 1.8
    y = np.eye(n)
    u = np.zeros((n, n))
    resid = math.inf
    for it in range(iters):
        m = y - u + c / rho
        m = (m + m.T) / 2.0
        w, v = np.linalg.eigh(m)
        pos = w > 0.0
        g_iter = (v[:, pos] * w[pos]) @ v[:, pos].T
        g_rel = relax * g_iter + (1.0 - relax) * y
        y_new = np.maximum(g_rel + u, 0.0)
        np.fill_diagonal(y_new, 1.0)
        u += g_rel - y_new
        if it % 500 == 499:
            resid = max(
                float(np.linalg.norm(g_iter - y_new)),
                float(rho * np.linalg.norm(y_new - y)),
            )
            y = y_new
            if resid < 1e-9 * n:
                break
        else:
            y = y_new
    # factor the clamped iterate; blend a hair of the all-ones matrix to
    # absorb the tiny negative inner products left by the PSD projection
    w, v = np.linalg.eigh((y + y.T) / 2.0)
    w = np.clip(w, 0.0, None)
    gram = (v * w) @ v.T
    off = gram.copy()
    np.fill_diagonal(off, 1.0)
    viol = max(0.0, float(-off.min()))
    if viol > 0.0:
        theta = viol / (1.0 + viol) + 1e-15
        gram = (1.0 - theta) * gram + theta
        w, v = np.linalg.eigh((gram + gram.T) / 2.0)
        w = np.clip(w, 0.0, None)
    x = v * np.sqrt(w)
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    x = x / norms
    obj = float(np.sum(bt * (x @ x.T)))
    return x, obj, resid


def solve_sdp(g: Graph, cfg: SolverConfig | None = None) -> Embedding:
    """Solve the sphere-orthant relaxation by multi-restart coordinate ascent.

    Deterministic for a fixed ``cfg.seed``.  When every restart collapses
    onto the all-identical embedding (constant Gram matrix), the convex
    splitting solver is run as a rescue on small graphs and the better
    objective wins.  Non-convergence (sweep budget exhausted) is reported
    via ``converged=False`` rather than raised; callers may still round the
    embedding but should withhold the upper-bound certificate.
    """
    cfg = cfg or SolverConfig()
    if g.n < 2:
        raise ValueError("relaxation needs at least two vertices")
    m2 = g.total_weight  # raises on edgeless graphs
    n = g.n
    r = cfg.rank or (math.ceil(math.sqrt(2 * n)) + 1)
    bt = modularity_matrix(g) / (2.0 * m2)
    btz = bt.copy()
    np.fill_diagonal(btz, 0.0)
    # solve on the normalized matrix so the stationarity and plateau
    # tolerances are scale-relative (hard instances live at 1e-8 scale)
    scale = float(np.abs(btz).max()) or 1.0
    btn = btz / scale

    best = None
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(901, restart))
        )
        x0 = np.abs(rng.standard_normal((n, r)))
        x0 /= np.linalg.norm(x0, axis=1, keepdims=True)
        x, resid, _, ok = _ascend(btn, x0, cfg.grad_tol, cfg.max_iters)
        obj = float(np.sum(bt * (x @ x.T)))
        if best is None or obj > best[1]:
            best = (x, obj, resid * scale, ok)
    x, obj, resid, ok = best

    gram = x @ x.T
    off_vals = gram[~np.eye(n, dtype=bool)]
    collapsed = float(off_vals.max() - off_vals.min()) < 0.05
    if cfg.admm_rescue and collapsed and n <= cfg.admm_rescue_max_n:
        budget = min(cfg.admm_iters, max(20_000, 3000 * n))
        x_r, obj_r, resid_r = _admm_solve(bt, n, budget)
        if obj_r > obj:
            x, obj, resid, ok = x_r, obj_r, resid_r, True
            gram = x @ x.T

    off = gram.copy()
    np.fill_diagonal(off, 1.0)
    violation = max(0.0, float(-off.min()))
    slack = n * resid + n * violation
    return Embedding(
        vectors=x,
        objective=obj,
        max_pairwise_violation=violation,
        stationarity_slack=slack,
        converged=ok and violation <= cfg.feastol,
    )


def round_hyperplanes(
    g: Graph, emb: Embedding, k: int, trials: int, seed: int
) -> Clustering:
    """Round an embedding with k random hyperplanes per trial; keep the best.

    Every trial draws k standard-normal hyperplane normals, labels each
    vertex by the sign pattern of its projections (at most 2^k communities)
    and scores the induced clustering; the best over ``trials`` is returned.
    Per-trial RNG derives from ``(seed, k, trial)``, so trial outcomes do not
    depend on evaluation order.
    """
    if k not in (2, 3):
        raise ValueError("rounding uses k in {2, 3}")
    if trials < 1:
        raise ValueError("at least one trial required")
    x = emb.vectors
    best_c = None
    best_q = -np.inf
    for trial in range(trials):
        rng = np.random.default_rng(
            np.random.SeedSequence(seed, spawn_key=(k, trial))
        )
        h = rng.standard_normal((k, x.shape[1]))
        bits = (x @ h.T) >= 0.0
        pattern = bits @ (1 << np.arange(k))
        c = Clustering(pattern)
        q = modularity(g, c)
        if q > best_q:
            best_q = q
            best_c = c
    return best_c


def sdpm(g: Graph, cfg: SolverConfig | None = None) -> SdpmReport:
    """Full pipeline: solve the relaxation, round for k=2 and k=3, report.

    With ``cfg.refine`` (the default) every trial's rounded clustering is
    driven to a single-vertex-move local optimum before the best-of-trials
    selection; the polish never lowers quality, so the additive certificates
    are preserved.  Returns the better of the two rounding rounds together
    with the relaxation upper bound and both certificates.
    """
    from ._moves import greedy_local_optimum

    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    emb = solve_sdp(g, cfg)
    x = emb.vectors
    best_c = None
    best_q = -np.inf
    cache: dict[bytes, float] = {}  # raw pattern -> score; trials often repeat
    for k in (2, 3):
        for trial in range(cfg.trials):
            rng = np.random.default_rng(
                np.random.SeedSequence(cfg.seed, spawn_key=(k, trial))
            )
            h = rng.standard_normal((k, x.shape[1]))
            bits = (x @ h.T) >= 0.0
            pattern = bits @ (1 << np.arange(k))
            raw = Clustering(pattern)
            key = raw.assignment.tobytes()
            if key in cache:
                continue
            c = Clustering(greedy_local_optimum(g, raw.assignment)) if cfg.refine else raw
            q = modularity(g, c)
            cache[key] = q
            if q > best_q:
                best_q = q
                best_c = c
    return SdpmReport(
        clustering=best_c,
        q=best_q,
        sdp_objective=emb.objective,
        sdp_upper_bound=emb.upper_bound,
        converged=emb.converged,
        wall_time=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class MaxAgreeForm:
    """The all-nonnegative (max-agree) recasting of the objective."""

    positive_total: float            # W = sum of nonnegative B entries
    shift: float                     # W / 2M
    _graph: Graph = field(repr=False)

    def shifted_value(self, c: Clustering) -> float:
        """Shifted objective at a clustering; equals Q + shift identically."""
        return modularity(self._graph, c) + self.shift


def max_agree_shift(g: Graph) -> MaxAgreeForm:
    """Compute W (sum of nonnegative modularity-matrix entries) and W/2M.

    Adding W/2M to the objective makes every coefficient nonnegative, which
    is the form the rounding analysis applies to.
    """
    b = modularity_matrix(g)
    w = float(b[b >= 0].sum())
    return MaxAgreeForm(positive_total=w, shift=w / (2.0 * g.total_weight), _graph=g)
