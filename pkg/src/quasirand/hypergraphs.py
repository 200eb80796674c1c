"""k-uniform hypergraphs with loops, homomorphism densities and deviation,
plus the template generators (octahedra, squashed octahedra, I-doubling and
the complete patterns built from it) and the d-linear / s-simple classifiers.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, KernelAnomalyError
from .rng import SplitMix64

TENSOR_BUDGET = 10**6
ENUM_BUDGET = 10**9
_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class Hypergraph:
    """Edge-weighted k-graph on vertices 0..n-1, dense tensor or implicit.

    An implicit graph carries a vectorized evaluator mapping an (m, k) index
    matrix to m values.  Tuples with repeated vertices are valid (loops).
    """

    symmetric = True

    def __init__(self, k: int, n: int, *, tensor=None, batch=None,
                 indicator: bool = True, weighted: bool = False) -> None:
        if k < 1:
            raise ValueError("arity k must be >= 1")
        if n < 1:
            raise ValueError("need at least one vertex")
        if (tensor is None) == (batch is None):
            raise ValueError("exactly one of tensor/batch must be given")
        self.k = k
        self.n = n
        self._batch = batch
        self.indicator = indicator
        self.weighted = weighted
        if tensor is not None:
            tensor = np.asarray(tensor)
            if tensor.shape != (n,) * k:
                raise ValueError("tensor shape must be (n,)*k")
            self._tensor = tensor
        else:
            self._tensor = None

    @property
    def has_dense(self) -> bool:
        return self._tensor is not None

    def value(self, xs):
        xs = tuple(int(x) for x in xs)
        if len(xs) != self.k:
            raise ValueError("tuple arity mismatch")
        if self._tensor is not None:
            return self._tensor[xs]
        return self._batch(np.array([xs], dtype=np.int64))[0]

    def batch_values(self, tuples: np.ndarray) -> np.ndarray:
        tuples = np.asarray(tuples, dtype=np.int64)
        if self._tensor is not None:
            return self._tensor[tuple(tuples[:, i] for i in range(self.k))]
        return self._batch(tuples)

    def densify(self, budget: int = TENSOR_BUDGET) -> np.ndarray:
        if self._tensor is None:
            total = self.n**self.k
            if total > budget:
                raise BudgetExceededError(
                    f"dense tensor of {total} entries exceeds budget {budget}")
            parts = [self.batch_values(cols) for cols in self._tuple_chunks()]
            self._tensor = np.concatenate(parts).reshape((self.n,) * self.k)
        return self._tensor

    def _tuple_chunks(self, chunk: int = 1 << 16):
        total = self.n**self.k
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
            cols = np.empty((len(flat), self.k), dtype=np.int64)
            for i in range(self.k):
                cols[:, self.k - 1 - i] = (flat // self.n**i) % self.n
            yield cols

    def density(self, budget: int = ENUM_BUDGET) -> float:
        if self._tensor is not None:
            return float(np.mean(self._tensor))
        if self.n**self.k > budget:
            raise BudgetExceededError(
                "implicit density enumeration exceeds budget; use density_mc")
        total = 0.0
        for cols in self._tuple_chunks():
            total += float(self.batch_values(cols).sum())
        return total / self.n**self.k

    def density_exact(self, budget: int = ENUM_BUDGET) -> Fraction:
        if not self.indicator:
            raise ValueError("exact density needs an indicator backing")
        if self._tensor is not None:
            return Fraction(int(np.rint(self._tensor).sum()), self.n**self.k)
        if self.n**self.k > budget:
            raise BudgetExceededError("exact density enumeration exceeds budget")
        count = 0
        for cols in self._tuple_chunks():
            count += int(np.rint(self.batch_values(cols)).sum())
        return Fraction(count, self.n**self.k)

    def density_mc(self, samples: int, seed: int) -> tuple[float, float]:
        """Monte Carlo density estimate with standard error (opt-in)."""
        rng = SplitMix64(seed)
        tuples = rng.below_array(self.n, samples * self.k).reshape(samples, self.k)
        vals = self.batch_values(tuples).astype(np.float64)
        est = float(vals.mean())
        stderr = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
        return est, stderr

    def balanced(self, budget: int = ENUM_BUDGET) -> "Hypergraph":
        """The weighted graph H - delta(H) on the same backing."""
        delta = self.density(budget)
        cls = type(self)
        if self._tensor is not None:
            return cls(self.k, self.n, tensor=self._tensor - delta,
                       indicator=False, weighted=True)
        base = self._batch
        return cls(self.k, self.n, batch=lambda t: base(t) - delta,
                   indicator=False, weighted=True)


class PartiteHypergraph(Hypergraph):
    """k-partite variant: class i is a copy of 0..n-1, no symmetry required."""

    symmetric = False


def complete_graph(k: int, n: int) -> Hypergraph:
    return Hypergraph(k, n, tensor=np.ones((n,) * k, dtype=np.int64))


def empty_graph(k: int, n: int) -> Hypergraph:
    return Hypergraph(k, n, tensor=np.zeros((n,) * k, dtype=np.int64))


# -- templates -------------------------------------------------------------


@dataclass(frozen=True)
class TemplateGraph:
    """Loop-free template F with labeled vertices and k-sets as edges.

    ``partition`` (when present) maps each vertex to a class in 1..k and
    every edge must contain exactly one vertex per class.
    """

    k: int
    vertices: tuple
    edges: tuple[tuple, ...]
    partition: dict | None = None

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        seen = set()
        clean = []
        for e in self.edges:
            if len(set(e)) != self.k:
                raise ValueError(f"edge {e} must have exactly {self.k} distinct vertices")
            if not set(e) <= vset:
                raise ValueError(f"edge {e} uses unknown vertices")
            key = tuple(sorted(e, key=self.vertices.index))
            if key not in seen:
                seen.add(key)
                clean.append(key)
        object.__setattr__(self, "edges", tuple(clean))
        if self.partition is not None:
            for v in self.vertices:
                if v not in self.partition:
                    raise ValueError(f"vertex {v} missing from partition")
            for e in self.edges:
                if sorted(self.partition[v] for v in e) != list(range(1, self.k + 1)):
                    raise ValueError(f"edge {e} is not transversal to the partition")

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_by_class(self, e) -> tuple:
        """Edge vertices ordered by partition class (partite templates)."""
        if self.partition is None:
            return tuple(e)
        return tuple(sorted(e, key=lambda v: self.partition[v]))


def single_edge(k: int) -> TemplateGraph:
    verts = tuple((j,) for j in range(1, k + 1))
    return TemplateGraph(k, verts, (verts,), {v: v[0] for v in verts})


def make_octahedron(k: int) -> TemplateGraph:
    """Oct^(k): complete k-partite k-graph with classes of size two."""
    if k < 1:
        raise ValueError("k must be >= 1")
    verts = tuple(("x", i, b) for i in range(1, k + 1) for b in (0, 1))
    edges = tuple(tuple(("x", i + 1, w >> i & 1) for i in range(k)) for w in range(2**k))
    part = {v: v[1] for v in verts}
    return TemplateGraph(k, verts, edges, part)


def make_squashed_octahedron(k: int, d: int) -> TemplateGraph:
    """Oct^(k)_d: Oct^(d) with k-d shared extra vertices on every edge."""
    if not 1 <= d < k:
        raise ValueError("need 1 <= d < k")
    xs = tuple(("x", i, b) for i in range(1, d + 1) for b in (0, 1))
    ys = tuple(("y", j) for j in range(d + 1, k + 1))
    edges = tuple(
        tuple(("x", i + 1, w >> i & 1) for i in range(d)) + ys
        for w in range(2**d)
    )
    part = {v: v[1] for v in xs}
    part.update({v: v[1] for v in ys})
    return TemplateGraph(k, xs + ys, edges, part)


def squashed_or_full_octahedron(k: int, d: int) -> TemplateGraph:
    return make_octahedron(k) if d == k else make_squashed_octahedron(k, d)


def doubling(F: TemplateGraph, I) -> TemplateGraph:
    """I-doubling: duplicate F, identifying the vertex classes indexed by I."""
    if F.partition is None:
        raise ValueError("doubling needs a k-partitioned template")
    I = frozenset(I)
    verts = []
    for v in F.vertices:
        if F.partition[v] in I:
            verts.append(v)
        else:
            verts.extend((v + (0,), v + (1,)))
    part = {}
    for v in F.vertices:
        if F.partition[v] in I:
            part[v] = F.partition[v]
        else:
            part[v + (0,)] = F.partition[v]
            part[v + (1,)] = F.partition[v]
    edges = []
    for e in F.edges:
        for a in (0, 1):
            edges.append(tuple(
                v if F.partition[v] in I else v + (a,) for v in e))
    return TemplateGraph(F.k, tuple(verts), tuple(edges), part)


def make_complete_pattern(k: int, d: int) -> TemplateGraph:
    """M^(k)_d: iterated I-doubling of a single k-edge over all d-subsets of [k].

    Doublings are applied in lexicographic order of the d-subsets; the
    vertex/edge counts k*2^C(k-1,d) and 2^C(k,d) are order-independent.
    """
    if not 1 <= d < k:
        raise ValueError("need 1 <= d < k")
    F = single_edge(k)
    for I in itertools.combinations(range(1, k + 1), d):
        F = doubling(F, I)
    return F


def is_d_linear(F: TemplateGraph, d: int) -> bool:
    """Every two distinct edges intersect in at most d vertices."""
    edges = [set(e) for e in F.edges]
    for e1, e2 in itertools.combinations(edges, 2):
        if len(e1 & e2) > d:
            return False
    return True


def is_s_simple(F: TemplateGraph, s: int) -> bool:
    """Each edge owns an s-set of its vertices contained in no other edge."""
    edges = [set(e) for e in F.edges]
    for i, e in enumerate(edges):
        found = False
        for sub in itertools.combinations(sorted(e, key=str), s):
            subset = set(sub)
            if not any(subset <= other for j, other in enumerate(edges) if j != i):
                found = True
                break
        if not found:
            return False
    return True


def _bipartite_matching(candidates: list[list[int]]) -> bool:
    matched: dict[int, int] = {}

    def assign(i: int, seen: set[int]) -> bool:
        for c in candidates[i]:
            if c in seen:
                continue
            seen.add(c)
            if c not in matched or assign(matched[c], seen):
                matched[c] = i
                return True
        return False

    return all(assign(i, set()) for i in range(len(candidates)))


def verify_edge_selection(M: TemplateGraph, k: int, d: int) -> bool:
    """For every edge tau0 = {v_1..v_k}, find distinct edges tau_D != tau0
    with {v_i : i in D} inside tau_D, one per d-subset D of [k]."""
    if M.partition is None:
        raise ValueError("edge selection check needs a partition")
    edge_sets = [set(e) for e in M.edges]
    for e0 in M.edges:
        by_class = {M.partition[v]: v for v in e0}
        e0_set = set(e0)
        cands = []
        for D in itertools.combinations(range(1, k + 1), d):
            picked = {by_class[i] for i in D}
            cands.append([j for j, other in enumerate(edge_sets)
                          if other != e0_set and picked <= other])
        if not _bipartite_matching(cands):
            return False
    return True


# -- homomorphism densities -------------------------------------------------


def _active_vertices(F: TemplateGraph) -> list:
    active = []
    in_edges = set(itertools.chain.from_iterable(F.edges))
    for v in F.vertices:
        if v in in_edges:
            active.append(v)
    return active


def _plan(F: TemplateGraph):
    """Greedy vertex order completing edges as early as possible."""
    active = _active_vertices(F)
    degree = {v: sum(v in e for e in F.edges) for v in active}
    placed: list = []
    remaining = set(active)
    while remaining:
        def gain(v):
            done = set(placed) | {v}
            return sum(1 for e in F.edges if set(e) <= done and v in e)
        best = max(sorted(remaining, key=str), key=lambda v: (gain(v), degree[v]))
        placed.append(best)
        remaining.discard(best)
    pos = {v: i for i, v in enumerate(placed)}
    completed: list[list[tuple[int, ...]]] = [[] for _ in placed]
    for e in F.edges:
        ordered = F.edge_by_class(e)
        last = max(pos[v] for v in ordered)
        completed[last].append(tuple(pos[v] for v in ordered))
    return placed, completed


def hom_density(F: TemplateGraph, H: Hypergraph, budget: int = ENUM_BUDGET):
    """t(F, H) = E_{x in V^{V(F)}} prod_{e in E(F)} H(x_e).

    Backtracking enumeration over vertex images with zero-product pruning on
    indicator backings.  Returns an exact Fraction for indicator backings.
    """
    if F.k != H.k:
        raise ValueError("template arity does not match hypergraph arity")
    if F.edge_count == 0:
        return Fraction(1) if H.indicator else 1.0
    order, completed = _plan(F)
    v = len(order)
    n = H.n
    if n**v * F.edge_count > budget:
        raise BudgetExceededError(
            f"{n}^{v} maps x {F.edge_count} edges exceeds budget {budget}")
    tensor = H._tensor
    if tensor is None and n**H.k <= TENSOR_BUDGET:
        tensor = H.densify()
    value = H.value if tensor is None else (lambda xs: tensor[xs])
    prune = H.indicator
    img = [0] * v
    terms = []

    def rec(i: int, prod):
        if i == v:
            terms.append(prod)
            return
        for x in range(n):
            img[i] = x
            p = prod
            dead = False
            for e in completed[i]:
                p = p * value(tuple(img[j] for j in e))
                if prune and p == 0:
                    dead = True
                    break
            if dead:
                # remaining free vertices each contribute a factor n of maps
                continue
            rec(i + 1, p)

    start = 1 if H.indicator else 1.0
    rec(0, start)
    if H.indicator:
        # pruned zero-branches contribute 0; count satisfied maps exactly
        total = sum(int(t) for t in terms)
        return Fraction(total, n**v)
    return math.fsum(terms) / n**v


def hom_density_naive(F: TemplateGraph, H: Hypergraph, budget: int = 10**7):
    """Full enumeration oracle (no pruning, no ordering heuristics)."""
    active = _active_vertices(F)
    n = H.n
    if n ** len(active) * max(F.edge_count, 1) > budget:
        raise BudgetExceededError("naive enumeration exceeds budget")
    pos = {v: i for i, v in enumerate(active)}
    edges = [tuple(pos[v] for v in F.edge_by_class(e)) for e in F.edges]
    terms = []
    for img in itertools.product(range(n), repeat=len(active)):
        p = 1 if H.indicator else 1.0
        for e in edges:
            p = p * H.value(tuple(img[j] for j in e))
        terms.append(p)
    if H.indicator:
        return Fraction(sum(int(t) for t in terms), n ** len(active))
    return math.fsum(terms) / n ** len(active)


def hom_density_contract(F: TemplateGraph, H: Hypergraph,
                         budget: int = TENSOR_BUDGET) -> float:
    """Dense einsum path; used for weighted countings where speed matters."""
    tensor = np.asarray(H.densify(budget), dtype=np.float64)
    active = _active_vertices(F)
    if F.edge_count == 0:
        return 1.0
    if len(active) > len(_LETTERS):
        raise BudgetExceededError("too many template vertices for contraction")
    letter = {v: _LETTERS[i] for i, v in enumerate(active)}
    subs = ",".join("".join(letter[v] for v in F.edge_by_class(e)) for e in F.edges)
    raw = np.einsum(subs + "->", *([tensor] * F.edge_count), optimize=True)
    return float(raw) / H.n ** len(active)


def hom_density_mc(F: TemplateGraph, H: Hypergraph, samples: int,
                   seed: int) -> tuple[float, float]:
    """Seeded Monte Carlo estimate of t(F, H) with standard error."""
    active = _active_vertices(F)
    pos = {v: i for i, v in enumerate(active)}
    rng = SplitMix64(seed)
    imgs = rng.below_array(H.n, samples * len(active)).reshape(samples, len(active))
    prod = np.ones(samples)
    for e in F.edges:
        cols = imgs[:, [pos[v] for v in F.edge_by_class(e)]]
        prod = prod * H.batch_values(cols).astype(np.float64)
    est = float(prod.mean())
    stderr = float(prod.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
    return est, stderr


def labelled_copy_count(F: TemplateGraph, H: Hypergraph, budget: int = ENUM_BUDGET):
    """Center t(F,H) * n^v(F) with slack C(v(F),2) * n^(v(F)-1)."""
    t = hom_density(F, H, budget=budget)
    v = F.vertex_count
    center = t * H.n**v
    slack = math.comb(v, 2) * H.n ** (v - 1)
    return center, slack


def count_injective(F: TemplateGraph, H: Hypergraph) -> int:
    """Labelled subgraph count over injective maps (test oracle)."""
    count = 0
    verts = list(F.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    edges = [tuple(pos[v] for v in F.edge_by_class(e)) for e in F.edges]
    for img in itertools.permutations(range(H.n), len(verts)):
        if all(H.value(tuple(img[j] for j in e)) for e in edges):
            count += 1
    return count


def deviation(H: Hypergraph, d: int, budget: int = ENUM_BUDGET) -> float:
    """dev_d(H) = t(Oct^(k)_d, H - delta(H)); nonnegative for d = k."""
    if not 1 <= d <= H.k:
        raise ValueError("need 1 <= d <= k")
    F = squashed_or_full_octahedron(H.k, d)
    B = H.balanced()
    if H.n ** H.k <= TENSOR_BUDGET:
        val = hom_density_contract(F, B)
    else:
        val = float(hom_density(F, B, budget=budget))
    if d == H.k and val < -1e-10:
        raise KernelAnomalyError(f"dev_k(H) = {val} < -1e-10")
    return val


# -- serialization ----------------------------------------------------------


def template_to_json(F: TemplateGraph) -> str:
    names = {v: str(v) for v in F.vertices}
    doc = {
        "k": F.k,
        "vertices": [names[v] for v in F.vertices],
        "edges": [[names[v] for v in e] for e in F.edges],
    }
    if F.partition is not None:
        doc["partition"] = {names[v]: F.partition[v] for v in F.vertices}
    return json.dumps(doc)


def template_from_json(text: str) -> TemplateGraph:
    doc = json.loads(text)
    verts = tuple(doc["vertices"])
    edges = tuple(tuple(e) for e in doc["edges"])
    part = doc.get("partition")
    if part is not None:
        part = {v: int(c) for v, c in part.items()}
    return TemplateGraph(int(doc["k"]), verts, edges, part)


def hypergraph_to_json(H: Hypergraph, budget: int = TENSOR_BUDGET) -> str:
    tensor = H.densify(budget)
    return json.dumps({
        "backing": "dense",
        "k": H.k,
        "n": H.n,
        "values": np.asarray(tensor, dtype=float).reshape(-1).tolist(),
    })
