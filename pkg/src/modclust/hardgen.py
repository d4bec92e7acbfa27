"""Gap-producing hard-instance generators with verifiable certificates.

Two reductions turn decision problems into graphs whose maximum modularity
is strictly positive exactly on YES instances:

* from integer PARTITION: two looped hub vertices s, t plus one vertex per
  item, edge weights equal to the item values; an equal-sum split yields a
  two-community clustering of modularity exactly a / M where a is the tiny
  hub-loop weight.

* from Max-Cut (unweighted, multiplicities as integer weights): the
  two-layer blow-up with a large multiplicity T = n^4; a cut of size >= k
  yields a balanced two-community clustering of modularity >= 1/(2 m').

Both constructions ship with machine-checkable certificates, and
``fig3_experiment`` drives the generate / solve-exactly / reduce / test
protocol for benchmarking clustering methods on such instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .graph import Clustering, Graph, modularity
from .oracle import exact_max_cut, greedy_cut_lower_bound

__all__ = [
    "PartitionInstance",
    "PartitionReduction",
    "MaxCutReduction",
    "CertificateReport",
    "Fig3Cell",
    "reduce_partition",
    "reduce_maxcut",
    "verify_certificate",
    "random_gnp",
    "fig3_experiment",
    "PASS_THRESHOLD",
]

PASS_THRESHOLD = 1e-12  # "strictly positive" with float-dust guard
CERT_SEARCH_LIMIT = 30  # items; subset-sum search bound


@dataclass(frozen=True)
class PartitionInstance:
    """Integers to split into two equal-sum halves."""

    items: tuple[int, ...]

    def __post_init__(self):
        if len(self.items) < 1 or any(x < 1 for x in self.items):
            raise ValueError("need at least one item, all items >= 1")

    @property
    def total(self) -> int:
        return sum(self.items)

    @property
    def half_sum(self) -> float:
        return self.total / 2.0


@dataclass(frozen=True)
class PartitionReduction:
    """Reduction graph: s=0, t=1, item vertices 2..n+1; loops a on s and t."""

    instance: PartitionInstance
    graph: Graph
    loop_weight: float          # a = 1/(8K + 2)
    total_weight: float         # M = 4K + 2a
    status: str                 # "yes" | "no" | "unknown"
    certificate: tuple[tuple[int, ...], tuple[int, ...]] | None  # item index split

    def certificate_clustering(self) -> Clustering:
        """{s} + S1 versus {t} + S2, by item index."""
        if self.certificate is None:
            raise ValueError("no certificate attached")
        s1, _ = self.certificate
        assign = np.ones(self.graph.n, dtype=np.int64)
        assign[0] = 0
        for i in s1:
            assign[2 + i] = 0
        return Clustering(assign)

    @property
    def certificate_value(self) -> float:
        """Closed-form modularity a / M of the certificate clustering."""
        return self.loop_weight / self.total_weight


def _subset_sum_split(items: Sequence[int]):
    """Exact equal-sum split via bitset dynamic programming, or None."""
    total = sum(items)
    if total % 2:
        return None
    target = total // 2
    masks = [1]
    for x in items:
        masks.append(masks[-1] | (masks[-1] << x))
    if not (masks[-1] >> target) & 1:
        return None
    s1 = []
    t = target
    for i in range(len(items), 0, -1):
        if (masks[i - 1] >> t) & 1:
            continue  # item i-1 not needed
        s1.append(i - 1)
        t -= items[i - 1]
    s1 = tuple(sorted(s1))
    s2 = tuple(i for i in range(len(items)) if i not in set(s1))
    return s1, s2


def reduce_partition(
    inst: PartitionInstance, cert_limit: int = CERT_SEARCH_LIMIT
) -> PartitionReduction:
    """Build the hub-and-items reduction graph and search for a certificate.

    Instances with more than ``cert_limit`` items get status "unknown" and
    no certificate (the graph itself is still produced).
    """
    items = inst.items
    n = len(items)
    a = 1.0 / (4.0 * inst.total + 2.0)  # 1/(8K + 2)
    edges = []
    for i, x in enumerate(items):
        edges.append((0, 2 + i, float(x)))
        edges.append((1, 2 + i, float(x)))
    loops = np.zeros(n + 2)
    loops[0] = loops[1] = a
    g = Graph(n + 2, edges, loops=loops)

    if n > cert_limit:
        status, cert = "unknown", None
    else:
        split = _subset_sum_split(items)
        if split is None:
            status, cert = "no", None
        else:
            status, cert = "yes", split
    return PartitionReduction(
        instance=inst,
        graph=g,
        loop_weight=a,
        total_weight=g.total_weight,
        status=status,
        certificate=cert,
    )


@dataclass(frozen=True)
class MaxCutReduction:
    """Two-layer blow-up of a Max-Cut instance with multiplicity T = n^4.

    Vertex layout: v+ = v, v- = n + v, z+ = 2n, z- = 2n + 1.  Multiplicities
    are stored as integer-valued weights; ``m_prime`` is the total weight
    2n(n+1)T - 2m + c with c = 4k - 2m - 1.
    """

    source: Graph
    k: int
    graph: Graph
    t_mult: int
    c_mult: int
    m_prime: int
    certificate_side: frozenset[int] | None   # cut side S in the source

    def certificate_clustering(self) -> Clustering:
        """{S+ , not-S- , z+} versus {not-S+ , S- , z-}."""
        if self.certificate_side is None:
            raise ValueError("no certificate attached")
        n = self.source.n
        assign = np.empty(self.graph.n, dtype=np.int64)
        for v in range(n):
            in_s = v in self.certificate_side
            assign[v] = 0 if in_s else 1
            assign[n + v] = 1 if in_s else 0
        assign[2 * n] = 0
        assign[2 * n + 1] = 1
        return Clustering(assign)

    @property
    def certificate_floor(self) -> float:
        """The guaranteed lower bound 1/(2 m') on the certificate's Q."""
        return 1.0 / (2.0 * self.m_prime)


def reduce_maxcut(
    g: Graph,
    k: int,
    certificate_side=None,
    allow_trivial: bool = False,
) -> MaxCutReduction:
    """Reduce the instance "does g have a cut of size >= k?".

    Rejects trivial instances (k <= m/2 + 2, where a local-switching cut
    already answers YES) unless ``allow_trivial``; a test hook, since e.g.
    the single-edge illustration is trivial.  ``certificate_side`` is an
    optional vertex subset with cut size >= k.
    """
    eu, ev, ew = g.edge_arrays
    if np.any(ew != 1.0) or np.any(g.loop_weights != 0):
        raise ValueError("max-cut reduction requires an unweighted simple graph")
    n, m = g.n, len(ew)
    if k > m:
        raise ValueError(f"k={k} exceeds edge count m={m}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not allow_trivial and k <= m / 2.0 + 2.0:
        raise ValueError(
            f"trivial instance: k={k} <= m/2 + 2 = {m / 2 + 2}; a greedy cut "
            "already certifies YES (use allow_trivial to build it anyway)"
        )
    t = n ** 4
    c = 4 * k - 2 * m - 1
    if c < 0:
        raise ValueError(f"c = 4k - 2m - 1 = {c} < 0; instance out of range")

    source_pairs = {(int(u), int(v)) for u, v in zip(eu, ev)}
    edges = []
    for i in range(2 * n + 2):
        for j in range(i + 1, 2 * n + 2):
            if i < n and j < n:
                w = t - 1 if (i, j) in source_pairs else t
            elif n <= i < 2 * n and n <= j < 2 * n:
                w = t - 1 if (i - n, j - n) in source_pairs else t
            elif i < n and j == n + i:
                w = 0  # no (v+, v-) edges
            elif i == 2 * n and j == 2 * n + 1:
                w = c
            else:
                w = t
            if w > 0:
                edges.append((i, j, w))
    red = Graph(2 * n + 2, edges)
    m_prime = 2 * n * (n + 1) * t - 2 * m + c

    side = None
    if certificate_side is not None:
        side = frozenset(int(v) for v in certificate_side)
        cut = sum(1 for u, v in source_pairs if (u in side) != (v in side))
        if cut < k:
            raise ValueError(f"supplied side cuts {cut} < k={k} edges")
    return MaxCutReduction(
        source=g,
        k=k,
        graph=red,
        t_mult=t,
        c_mult=c,
        m_prime=m_prime,
        certificate_side=side,
    )


@dataclass(frozen=True)
class CertificateReport:
    kind: str                # "partition" | "maxcut"
    ok: bool
    measured_q: float
    reference: float         # closed-form value (partition) or floor (maxcut)
    exact_ok: bool | None    # integer-arithmetic check where available
    detail: str


def verify_certificate(red: PartitionReduction | MaxCutReduction) -> CertificateReport:
    """Recompute the certificate clustering's modularity and check it.

    PARTITION: measured Q must equal a / M (to 1e-12 relative) and be
    positive.  Max-Cut: measured Q must be >= 1/(2 m'); additionally checked
    in exact integer arithmetic (volumes, crossing weight).
    """
    if isinstance(red, PartitionReduction):
        if red.certificate is None:
            raise ValueError("reduction carries no certificate")
        c = red.certificate_clustering()
        q = modularity(red.graph, c)
        ref = red.certificate_value
        ok = q > 0 and abs(q - ref) <= 1e-12 * max(1.0, abs(ref))
        s1, s2 = red.certificate
        sum1 = sum(red.instance.items[i] for i in s1)
        sum2 = sum(red.instance.items[i] for i in s2)
        return CertificateReport(
            kind="partition",
            ok=ok and sum1 == sum2,
            measured_q=q,
            reference=ref,
            exact_ok=sum1 == sum2,
            detail=f"split sums {sum1}/{sum2}; Q measured {q!r} vs closed form {ref!r}",
        )
    if isinstance(red, MaxCutReduction):
        if red.certificate_side is None:
            raise ValueError("reduction carries no certificate")
        c = red.certificate_clustering()
        q = modularity(red.graph, c)
        ok = q >= red.certificate_floor - 1e-15
        exact = _verify_maxcut_exact(red)
        return CertificateReport(
            kind="maxcut",
            ok=ok and exact,
            measured_q=q,
            reference=red.certificate_floor,
            exact_ok=exact,
            detail=f"Q measured {q!r} vs floor 1/(2m') = {red.certificate_floor!r}",
        )
    raise TypeError(f"unsupported reduction type {type(red).__name__}")


def _verify_maxcut_exact(red: MaxCutReduction) -> bool:
    """Integer check: vol(C1) = vol(C2) = m' and Q >= 1/(2m') exactly."""
    g = red.graph
    c = red.certificate_clustering()
    a = c.assignment
    eu, ev, ew = g.edge_arrays
    vol = [0, 0]
    cross = 0
    deg = [0] * g.n
    for u, v, w in zip(eu, ev, ew):
        w = int(w)
        deg[u] += w
        deg[v] += w
        if a[u] != a[v]:
            cross += w
    for v in range(g.n):
        vol[a[v]] += deg[v]
    m = vol[0] + vol[1]
    if m != 2 * red.m_prime or vol[0] != vol[1] or vol[0] != red.m_prime:
        return False
    # Q >= 1/(2m')  <=>  2 vol0 vol1 - 4 m' cross >= 2 m'
    return 2 * vol[0] * vol[1] - 4 * red.m_prime * cross >= 2 * red.m_prime


def random_gnp(n: int, p: float, seed) -> Graph:
    """Erdos-Renyi G(n, p) with a seeded generator."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[mask], ju[mask]))


@dataclass(frozen=True)
class Fig3Cell:
    """One (size, repeat) cell of the hard-instance benchmark."""

    size: int
    repeat: int
    source_edges: int
    max_cut: int
    status: str                      # "ok" | "trivial"
    q: dict[str, float]
    passed: dict[str, bool]


def default_method_runners(
    trials: int = 1000, repeats: int = 20
) -> dict[str, Callable[[Graph, int], Clustering]]:
    """Name -> callable(graph, seed) for the standard method set."""
    from .baselines import MethodConfig, cnm_greedy, eig_bisect, louvain
    from .sdpm import SolverConfig, sdpm

    return {
        "cnm": lambda g, seed: cnm_greedy(g),
        "eig": lambda g, seed: eig_bisect(g),
        "louvain": lambda g, seed: louvain(g, MethodConfig(repeats=repeats, seed=seed)),
        "sdpm": lambda g, seed: sdpm(g, SolverConfig(seed=seed, trials=trials)).clustering,
    }


def fig3_experiment(
    sizes: Sequence[int],
    repeats: int,
    methods: Mapping[str, Callable[[Graph, int], Clustering]] | Sequence[str],
    seed: int = 0,
    p: float = 0.5,
) -> list[Fig3Cell]:
    """Success-rate protocol on Max-Cut-reduction hard instances.

    For every (size, repeat): draw G(size, p), solve max-cut exactly, reduce
    (skipping trivial instances), run each method on the reduced graph and
    record a pass iff it finds a clustering with strictly positive
    modularity.  Deterministic for a fixed master seed.
    """
    if not methods:
        raise ValueError("no methods given")
    if not isinstance(methods, Mapping):
        registry = default_method_runners()
        unknown = [name for name in methods if name not in registry]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")
        methods = {name: registry[name] for name in methods}

    cells = []
    for size in sizes:
        for rep in range(repeats):
            gseed = np.random.SeedSequence(seed, spawn_key=(size, rep))
            g = random_gnp(size, p, gseed)
            m = g.num_edges
            if m == 0:
                cells.append(Fig3Cell(size, rep, 0, 0, "trivial", {}, {}))
                continue
            cut = exact_max_cut(g)
            k = cut.cut_size
            if k <= m / 2.0 + 2.0:
                # a local-switching cut already certifies YES for such k
                cells.append(Fig3Cell(size, rep, m, k, "trivial", {}, {}))
                continue
            red = reduce_maxcut(g, k, certificate_side=cut.best_side)
            # methods see a seeded relabeling so that deterministic
            # tie-breaking cannot exploit the constructor's vertex layout
            rng = np.random.default_rng(gseed)
            perm = rng.permutation(red.graph.n)
            eu, ev, ew = red.graph.edge_arrays
            shuffled = Graph(red.graph.n, zip(perm[eu], perm[ev], ew))
            method_seed = int(rng.integers(0, 2**31 - 1))
            qs: dict[str, float] = {}
            passed: dict[str, bool] = {}
            for name, runner in methods.items():
                clustering = runner(shuffled, method_seed)
                q = modularity(shuffled, clustering)
                qs[name] = q
                passed[name] = bool(q > PASS_THRESHOLD)
            cells.append(Fig3Cell(size, rep, m, k, "ok", qs, passed))
    return cells
