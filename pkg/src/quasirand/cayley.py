"""Cayley hypergraphs of additive sets and functions, general k-partite
Cayley-type hypergraphs from integer-coefficient forms, Paley constructions,
and the two counterexample families for the general-form theory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .functions import AdditiveSet, GroupFunction
from .groups import FiniteAbelianGroup, is_coprime_form, make_group, quadratic_residues
from .hypergraphs import Hypergraph, PartiteHypergraph
from .rng import SplitMix64


@dataclass(frozen=True)
class CayleySpec:
    """Recipe for a (possibly general-form) Cayley hypergraph.

    All coefficients equal to 1 gives the classical symmetric sum graph;
    anything else gives a k-partite graph keyed by the form
    x -> lambda_1 x_1 + ... + lambda_k x_k.
    """

    group: FiniteAbelianGroup
    k: int
    payload: AdditiveSet | GroupFunction
    coefficients: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.coefficients is not None and len(self.coefficients) != self.k:
            raise ValueError("need one coefficient per vertex class")

    @property
    def classical(self) -> bool:
        return self.coefficients is None or all(c == 1 for c in self.coefficients)


def _payload_values(payload) -> tuple[np.ndarray, bool]:
    if isinstance(payload, AdditiveSet):
        return payload.mask.astype(np.int64), True
    return payload.as_float(), False


def cayley_graph(G: FiniteAbelianGroup, k: int, payload) -> Hypergraph:
    """Gamma^(k): x_1..x_k form an edge iff x_1 + ... + x_k lands in the set
    (weighted variant: the value is f(x_1 + ... + x_k))."""
    if k < 2:
        raise ValueError("k must be >= 2")
    vals, indicator = _payload_values(payload)

    def batch(tuples: np.ndarray) -> np.ndarray:
        idx = G.sum_columns(tuples[:, i] for i in range(k))
        return vals[idx]

    return Hypergraph(k, G.order, batch=batch, indicator=indicator,
                      weighted=not indicator)


def general_cayley(G: FiniteAbelianGroup, lambdas, payload) -> PartiteHypergraph:
    """Gamma^phi for phi(x) = sum lambda_i x_i, as a k-partite graph."""
    lambdas = tuple(int(l) for l in lambdas)
    k = len(lambdas)
    if k < 2:
        raise ValueError("k must be >= 2")
    vals, indicator = _payload_values(payload)

    def batch(tuples: np.ndarray) -> np.ndarray:
        idx = G.sum_columns(
            G.scalar_mul_array(lam, tuples[:, i]) for i, lam in enumerate(lambdas))
        return vals[idx]

    return PartiteHypergraph(k, G.order, batch=batch, indicator=indicator,
                             weighted=not indicator)


def coprime_relabeling(G: FiniteAbelianGroup, lambdas) -> list[np.ndarray]:
    """Per-class bijections x -> lambda_i x witnessing that a coprime-form
    graph is a relabeling of the classical sum graph."""
    if not is_coprime_form(G, lambdas):
        raise ValueError("form is not coprime to |G|")
    return [G.scalar_mul_array(int(lam), np.arange(G.order)) for lam in lambdas]


def paley_graph(p: int, k: int) -> Hypergraph:
    """P^(k)(p) = Gamma^(k) of the quadratic residues Q_p."""
    G = make_group([p])
    A = AdditiveSet(G, quadratic_residues(p))
    return cayley_graph(G, k, A)


def paley_clique_graph(p: int, k: int, d: int) -> Hypergraph:
    """Edges are k-cliques of P^(d)(p): sum_{i in B} x_i in Q_p for every
    d-subset B of [k]."""
    if not 2 <= d < k:
        raise ValueError("need 2 <= d < k")
    G = make_group([p])
    qmask = np.zeros(p, dtype=bool)
    qmask[list(quadratic_residues(p))] = True
    import itertools

    subsets = list(itertools.combinations(range(k), d))

    def batch(tuples: np.ndarray) -> np.ndarray:
        ok = np.ones(len(tuples), dtype=bool)
        for B in subsets:
            idx = G.sum_columns(tuples[:, i] for i in B)
            ok &= qmask[idx]
        return ok.astype(np.int64)

    return Hypergraph(k, p, batch=batch, indicator=True)


# -- counterexample families -------------------------------------------------


@dataclass(frozen=True)
class GeneralFormExample:
    group: FiniteAbelianGroup
    a_set: AdditiveSet
    lambdas: tuple[int, ...]
    r_members: tuple[int, ...]


def build_surjective_counterexample(n: int, seed: int = 0,
                                    r_members=None) -> GeneralFormExample:
    """G = F_2^n x F_3^n, A = R + F_3^n for a random half R of F_2^n,
    form 3*x_1 + 2*x_2.  The form is surjective, A has density exactly 1/2,
    yet E[(A(3x_1+2x_2) - 1/2) A(x_1)] = 1/4 for any half-density R."""
    if not 1 <= n <= 10:
        raise ValueError("need 1 <= n <= 10")
    G = make_group([2] * n + [3] * n)
    two_part = 2**n
    if r_members is None:
        r_members = SplitMix64(seed).sample(two_part, two_part // 2)
    r_members = tuple(sorted(int(x) for x in r_members))
    if len(r_members) != two_part // 2:
        raise ValueError("R must have exactly half density in F_2^n")
    # F_2^n occupies the low mixed-radix digits, so the F_2^n part of an
    # element index is simply index mod 2^n.
    members = [x for x in range(G.order) if x % two_part in set(r_members)]
    return GeneralFormExample(G, AdditiveSet(G, members), (3, 2), r_members)


def build_nonsurjective_counterexample(N: int, d: int, seed: int = 0,
                                       r_members=None) -> GeneralFormExample:
    """G = F_2 x Z_N (N odd), A = {0} + 2R for random R in Z_N, form
    2x_1 + ... + 2x_d.  A sits inside the subgroup {0} x Z_N, so its Fourier
    coefficient at the character nontrivial only on F_2 equals delta(A)."""
    if N % 2 == 0 or not 3 <= N <= 99:
        raise ValueError("N must be odd with 3 <= N <= 99")
    if d < 2:
        raise ValueError("d must be >= 2")
    G = make_group([2, N])
    if r_members is None:
        r_members = SplitMix64(seed).sample(N, N // 2)
    r_members = tuple(sorted(int(x) for x in r_members))
    members = [G.encode((0, (2 * r) % N)) for r in r_members]
    return GeneralFormExample(G, AdditiveSet(G, members), tuple([2] * d), r_members)


def surjective_witness_value(example: GeneralFormExample) -> Fraction:
    """Exact E_{x1,x2}[(A(phi(x1,x2)) - 1/2) * A(x1)] by full enumeration."""
    G = example.group
    mask = example.a_set.mask.astype(np.int64)
    lam1, lam2 = example.lambdas
    order = G.order
    count_both = 0
    xs = np.arange(order)
    for x1 in range(order):
        phi = G.add_arrays(np.int64(G.scalar_mul(lam1, x1)), G.scalar_mul_array(lam2, xs))
        count_both += int(mask[x1]) * int(mask[phi].sum())
    count_a1 = int(mask.sum()) * order
    return Fraction(2 * count_both - count_a1, 2 * order**2)


# -- serialization -----------------------------------------------------------


def cayley_spec_to_json(spec: CayleySpec, set_ref: str) -> str:
    doc = {"group": repr(spec.group), "k": spec.k, "set": set_ref}
    if spec.coefficients is not None:
        doc["coeffs"] = list(spec.coefficients)
    return json.dumps(doc)


def cayley_spec_from_json(text: str, base_dir=".") -> CayleySpec:
    from .cli import parse_group_spec  # local import: cli owns the grammar
    from .functions import load_set_csv

    doc = json.loads(text)
    G = parse_group_spec(doc["group"])
    k = int(doc["k"])
    ref = doc["set"]
    if not isinstance(ref, str) or not ref.startswith("@"):
        raise ValueError("set reference must be '@<csv path>'")
    A = load_set_csv(G, Path(base_dir) / ref[1:])
    coeffs = doc.get("coeffs")
    return CayleySpec(G, k, A, tuple(coeffs) if coeffs is not None else None)
