"""Classical modularity-maximization baselines.

Three comparison methods: greedy agglomeration (CNM), recursive
leading-eigenvector bisection (EIG), and multi-level Louvain.  All of them
evaluate quality through :mod:`modclust.graph`, so their scores are directly
comparable with the SDP pipeline and the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Clustering, Graph, modularity

__all__ = ["MethodConfig", "cnm_greedy", "eig_bisect", "louvain"]


@dataclass(frozen=True)
class MethodConfig:
    method: str = "louvain"
    repeats: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


# ---------------------------------------------------------------------------
# CNM greedy agglomeration
# ---------------------------------------------------------------------------

def cnm_greedy(g: Graph) -> Clustering:
    """Greedy agglomeration from singletons while a merge strictly helps.

    Each step merges the community pair with the largest exact modularity
    delta (ties: smallest community-id pair) and stops as soon as no merge
    has strictly positive delta, so the returned clustering is the best one
    on the (monotone) merge path.  Deterministic.
    """
    n = g.n
    m2 = g.total_weight
    # cross[a][b]: inter-community weight, kept symmetric; community label =
    # smallest original vertex id it has absorbed
    cross: dict[int, dict[int, float]] = {v: {} for v in range(n)}
    eu, ev, ew = g.edge_arrays
    for u, v, w in zip(eu, ev, ew):
        u, v = int(u), int(v)
        cross[u][v] = cross[u].get(v, 0.0) + w
        cross[v][u] = cross[v].get(u, 0.0) + w
    vol = {v: float(g.degrees[v]) for v in range(n)}
    parent = np.arange(n)

    def label_of(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    alive = set(range(n))
    while len(alive) > 1:
        # best adjacent pair by exact merge delta
        best_pair = None
        best_delta = 0.0
        for a in sorted(alive):
            for b in sorted(cross[a]):
                if b <= a:
                    continue
                delta = (4.0 * m2 * cross[a][b] - 2.0 * vol[a] * vol[b]) / (4.0 * m2 * m2)
                if delta > best_delta:
                    best_delta = delta
                    best_pair = (a, b)
        if best_pair is None:  # no strictly improving merge left
            break
        a, b = best_pair
        # merge b into a
        vol[a] += vol[b]
        for c, w in cross[b].items():
            if c == a:
                continue
            del cross[c][b]
            cross[a][c] = cross[a].get(c, 0.0) + w
            cross[c][a] = cross[a][c]
        cross[a].pop(b, None)
        cross[b].clear()
        parent[b] = a
        alive.remove(b)

    return Clustering(np.array([label_of(v) for v in range(n)]))


# ---------------------------------------------------------------------------
# Leading-eigenvector bisection
# ---------------------------------------------------------------------------

def _leading_eigenvector(b_gen: np.ndarray, seed: int, tol: float = 1e-9,
                         max_iters: int = 100_000):
    """Leading eigenvector of a symmetric matrix via shifted power iteration.

    Shift = sum_i |B_ii| makes the operator positive definite for modularity
    matrices, so the dominant eigenpair of the shifted matrix is the
    algebraically largest of ``b_gen``.  Returns ``None`` on non-convergence.
    """
    k = b_gen.shape[0]
    shift = float(np.abs(np.diag(b_gen)).sum())
    if shift == 0.0:
        shift = 1.0
    op = b_gen + shift * np.eye(k)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(k)
    v /= np.linalg.norm(v)
    for _ in range(max_iters):
        w = op @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return None
        w /= norm
        if np.linalg.norm(w - v) < tol:
            lam = float(v @ (b_gen @ v))
            return lam, w
        v = w
    return None


def _restricted_modularity_matrix(b: np.ndarray, members: np.ndarray) -> np.ndarray:
    sub = b[np.ix_(members, members)]
    return sub - np.diag(sub.sum(axis=1))


def _refine_split(b_gen: np.ndarray, sides: np.ndarray) -> np.ndarray:
    """Single-vertex sign-flip sweeps until no flip improves the split score."""
    s = sides.astype(np.float64)
    while True:
        bs = b_gen @ s
        gains = -4.0 * s * (bs - np.diag(b_gen) * s)
        i = int(np.argmax(gains))
        if gains[i] <= 1e-13:
            return np.sign(s).astype(np.int8)
        s[i] = -s[i]


def eig_bisect(g: Graph) -> Clustering:
    """Recursive spectral bisection on the (generalized) modularity matrix.

    Splits by the sign of the leading eigenvector, refines by single-vertex
    flips, and accepts a split only if overall modularity strictly increases.
    Communities whose eigeniteration fails are treated as indivisible.
    """
    from .graph import modularity_matrix

    b = modularity_matrix(g)
    m2 = g.total_weight
    assign = np.zeros(g.n, dtype=np.int64)
    next_label = 1
    stack = [np.arange(g.n)]
    while stack:
        members = stack.pop()
        if len(members) < 2:
            continue
        b_gen = _restricted_modularity_matrix(b, members)
        eig = _leading_eigenvector(b_gen, seed=len(members))
        if eig is None:
            continue
        lam, vec = eig
        if lam <= 1e-12:
            continue  # indivisible: no positive direction
        sides = np.where(vec >= 0.0, 1, -1).astype(np.int8)
        sides = _refine_split(b_gen, sides)
        if np.all(sides == sides[0]):
            continue
        delta = float(sides @ (b_gen @ sides)) / (4.0 * m2)
        if delta <= 1e-12:
            continue
        left = members[sides > 0]
        right = members[sides < 0]
        assign[right] = next_label
        next_label += 1
        stack.append(left)
        stack.append(right)
    return Clustering(assign)


# ---------------------------------------------------------------------------
# Louvain
# ---------------------------------------------------------------------------

def _louvain_local_moves(g: Graph, rng: np.random.Generator):
    """Phase 1: greedy single-vertex moves until no strictly positive gain."""
    from ._moves import MoveState

    state = MoveState(g, np.arange(g.n))
    improved_any = False
    while state.run_pass(rng.permutation(g.n).tolist()):
        improved_any = True
    return Clustering(state.assignment()), improved_any


def _contract(g: Graph, c: Clustering) -> Graph:
    """Community contraction; internal weight becomes a super-vertex loop."""
    a = c.assignment
    k = c.num_communities
    eu, ev, ew = g.edge_arrays
    edges: dict[tuple[int, int], float] = {}
    loops = np.zeros(k, dtype=np.float64)
    np.add.at(loops, a, g.loop_weights)
    for u, v, w in zip(eu, ev, ew):
        cu, cv = int(a[u]), int(a[v])
        if cu == cv:
            loops[cu] += w
        else:
            key = (cu, cv) if cu < cv else (cv, cu)
            edges[key] = edges.get(key, 0.0) + w
    return Graph(k, ((u, v, w) for (u, v), w in edges.items()), loops=loops)


def _louvain_once(g: Graph, rng: np.random.Generator) -> Clustering:
    mapping = np.arange(g.n)
    level = g
    while True:
        c, improved = _louvain_local_moves(level, rng)
        if not improved and level is not g:
            break
        if not improved:
            return Clustering(c.assignment[mapping])
        mapping = c.assignment[mapping]
        if c.num_communities == level.n:
            break
        level = _contract(level, c)
    return Clustering(mapping)


def louvain(g: Graph, cfg: MethodConfig | None = None) -> Clustering:
    """Multi-level Louvain; best clustering over ``cfg.repeats`` seeded runs."""
    cfg = cfg or MethodConfig()
    best = None
    best_q = -np.inf
    for rep in range(cfg.repeats):
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(rep,)))
        c = _louvain_once(g, rng)
        q = modularity(g, c)
        if q > best_q:
            best_q = q
            best = c
    return best
