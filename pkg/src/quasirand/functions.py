"""Real-valued functions on a group: balanced indicators, translation,
Fourier coefficients, Gowers uniformity norms and the dual function.

Two value modes are supported.  Floating mode stores float64 and accumulates
with compensated summation (math.fsum / numpy pairwise means).  Exact mode
stores ``fractions.Fraction`` values in an object array; all identities that
are exact on rationals stay exact there.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, KernelAnomalyError
from .groups import FiniteAbelianGroup
from .rng import SplitMix64

MAX_GOWERS_K = 5
DUAL_BUDGET = 10**9
NEGATIVE_MEAN_SLACK = 1e-12


def _as_values(group: FiniteAbelianGroup, values, exact: bool) -> np.ndarray:
    if exact:
        arr = np.empty(group.order, dtype=object)
        for i, v in enumerate(values):
            arr[i] = v if isinstance(v, Fraction) else Fraction(v)
    else:
        arr = np.asarray(values, dtype=np.float64).copy()
    if arr.shape != (group.order,):
        raise ValueError("values length must equal group order")
    return arr


class GroupFunction:
    """A function G -> R stored densely by element index."""

    __slots__ = ("group", "values", "exact")

    def __init__(self, group: FiniteAbelianGroup, values, exact: bool = False) -> None:
        self.group = group
        self.values = _as_values(group, values, exact)
        self.exact = exact

    @classmethod
    def constant(cls, group: FiniteAbelianGroup, c, exact: bool = False) -> "GroupFunction":
        return cls(group, [c] * group.order, exact=exact)

    def __call__(self, x: int):
        return self.values[x]

    def mean(self):
        if self.exact:
            return sum(self.values, Fraction(0)) / self.group.order
        return math.fsum(self.values) / self.group.order

    def as_float(self) -> np.ndarray:
        if self.exact:
            return np.array([float(v) for v in self.values])
        return self.values


class AdditiveSet:
    """A subset A of a group, with exact density |A|/|G|."""

    __slots__ = ("group", "members", "mask")

    def __init__(self, group: FiniteAbelianGroup, members) -> None:
        members = frozenset(int(x) for x in members)
        for x in members:
            if not 0 <= x < group.order:
                raise ValueError(f"member {x} out of range")
        self.group = group
        self.members = members
        mask = np.zeros(group.order, dtype=bool)
        mask[list(members)] = True
        mask.setflags(write=False)
        self.mask = mask

    def __contains__(self, x: int) -> bool:
        return int(x) in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), self.group.order)

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def indicator(self, exact: bool = False) -> GroupFunction:
        if exact:
            vals = [Fraction(1) if m else Fraction(0) for m in self.mask]
        else:
            vals = self.mask.astype(np.float64)
        return GroupFunction(self.group, vals, exact=exact)


def balanced_indicator(A: AdditiveSet, exact: bool = False) -> GroupFunction:
    """f_A = 1_A - delta; has mean exactly 0 in exact mode."""
    delta = A.density
    if exact:
        vals = [Fraction(1) - delta if m else -delta for m in A.mask]
    else:
        vals = A.mask.astype(np.float64) - float(delta)
    return GroupFunction(A.group, vals, exact=exact)


def translate(f: GroupFunction, a: int) -> GroupFunction:
    """(T^a f)(x) = f(x + a)."""
    perm = f.group.translation(a)
    return GroupFunction(f.group, f.values[perm], exact=f.exact)


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients f_hat(gamma), gamma indexed mixed-radix over the dual group."""

    group: FiniteAbelianGroup
    coefficients: np.ndarray

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coefficients)

    def power_sum(self, exponent: int) -> float:
        return math.fsum(np.abs(self.coefficients) ** exponent)


def fourier(f: GroupFunction) -> FourierSpectrum:
    """f_hat(gamma) = E_x f(x) conj(gamma(x)), computed factor by factor.

    Characters of a product group factor as gamma(x) = prod_i e(gamma_i x_i / n_i),
    so a naive DFT along each cyclic axis suffices at desk scale.
    """
    G = f.group
    vals = f.as_float().astype(np.complex128)
    # axis a of the reshaped tensor corresponds to factor m-1-a
    shape = tuple(reversed(G.moduli))
    tensor = vals.reshape(shape)
    m = len(G.moduli)
    for axis in range(m):
        n = shape[axis]
        grid = np.arange(n)
        w = np.exp(-2j * np.pi * np.outer(grid, grid) / n)
        tensor = np.moveaxis(np.tensordot(w, tensor, axes=([1], [axis])), 0, axis)
    coeffs = tensor.reshape(-1) / G.order
    coeffs.setflags(write=False)
    return FourierSpectrum(G, coeffs)


def _mean(values: np.ndarray, exact: bool):
    if exact:
        return sum(values, Fraction(0)) / len(values)
    return math.fsum(values) / len(values)


def _uk_power(values: np.ndarray, G: FiniteAbelianGroup, k: int, exact: bool):
    # ||f||_{U^k}^{2^k} = E_h ||f . T^h f||_{U^{k-1}}^{2^{k-1}};
    # the base level E_{x,h} f(x) f(x+h) collapses to (E f)^2.
    if k == 1:
        m = _mean(values, exact)
        return m * m
    terms = []
    for h in range(G.order):
        terms.append(_uk_power(values * values[G.translation(h)], G, k - 1, exact))
    if exact:
        return sum(terms, Fraction(0)) / G.order
    return math.fsum(terms) / G.order


def _clamp_power(p, exact: bool):
    if exact:
        if p < 0:
            raise KernelAnomalyError(f"exact U^k mean negative: {p}")
        return p
    if p < 0:
        if p < -NEGATIVE_MEAN_SLACK:
            raise KernelAnomalyError(f"U^k mean {p} below -{NEGATIVE_MEAN_SLACK}")
        return 0.0
    return p


def gowers_power(f: GroupFunction, k: int, max_k: int = MAX_GOWERS_K):
    """||f||_{U^k}^{2^k}, exact in exact mode."""
    if not 2 <= k <= max_k:
        raise ValueError(f"k={k} outside supported range 2..{max_k}")
    return _clamp_power(_uk_power(f.values, f.group, k, f.exact), f.exact)


def gowers_norm(f: GroupFunction, k: int, max_k: int = MAX_GOWERS_K) -> float:
    return float(gowers_power(f, k, max_k=max_k)) ** (1.0 / 2**k)


def gowers_power_naive(f: GroupFunction, k: int):
    """Direct enumeration over (x, h_1..h_k); cross-check oracle for |G| <= 16."""
    G = f.group
    n = G.order
    if n ** (k + 1) > 10**7:
        raise BudgetExceededError("naive U^k oracle is limited to tiny groups")
    vals = f.values
    terms = []
    for x in range(n):
        for hs in _tuples(n, k):
            prod = vals[x]
            for mask in range(1, 2**k):
                y = x
                for i in range(k):
                    if mask >> i & 1:
                        y = G.add(y, hs[i])
                prod = prod * vals[y]
            terms.append(prod)
    if f.exact:
        return sum(terms, Fraction(0)) / n ** (k + 1)
    return math.fsum(terms) / n ** (k + 1)


def _tuples(n: int, k: int):
    import itertools

    return itertools.product(range(n), repeat=k)


def u2_power_fourier(f: GroupFunction) -> float:
    """||f||_{U^2}^4 = sum_gamma |f_hat(gamma)|^4."""
    return fourier(f).power_sum(4)


def is_uniform(A: AdditiveSet, d: int, eps: float) -> tuple[float, bool]:
    """Measured ||A - delta||_{U^{d+1}} and the comparison against eps."""
    if d < 1:
        raise ValueError("degree d must be >= 1")
    norm = gowers_norm(balanced_indicator(A), d + 1)
    return norm, norm <= eps


def dual_function(f: GroupFunction, d: int, budget: int = DUAL_BUDGET) -> GroupFunction:
    """D_{d+1} f(y) = E_{h_1..h_{d+1}} prod_{omega != 0} f(y + sum omega_i h_i).

    Satisfies E_y f(y) D_{d+1}f(y) = ||f||_{U^{d+1}}^{2^{d+1}}.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    G = f.group
    n = G.order
    r = d + 1
    if n ** (r + 1) * (2**r - 1) > budget:
        raise BudgetExceededError("dual function enumeration exceeds budget")
    if f.exact:
        acc = np.array([Fraction(0)] * n, dtype=object)
        one = np.array([Fraction(1)] * n, dtype=object)
    else:
        acc = np.zeros(n)
        one = np.ones(n)
    for hs in _tuples(n, r):
        prod = one.copy()
        for mask in range(1, 2**r):
            shift = 0
            for i in range(r):
                if mask >> i & 1:
                    shift = G.add(shift, hs[i])
            prod = prod * f.values[G.translation(shift)]
        acc = acc + prod
    vals = acc / (n**r) if not f.exact else np.array([v / n**r for v in acc], dtype=object)
    return GroupFunction(G, vals, exact=f.exact)


# -- seeded corpora ------------------------------------------------------


def random_function(G: FiniteAbelianGroup, rng: SplitMix64, lo: float = -1.0, hi: float = 1.0) -> GroupFunction:
    vals = lo + (hi - lo) * rng.uniform_array(G.order)
    return GroupFunction(G, vals)

def random_subset(G: FiniteAbelianGroup, rng: SplitMix64, size: int) -> AdditiveSet:
    return AdditiveSet(G, rng.sample(G.order, size))


# -- file formats --------------------------------------------------------


def _parse_value(text: str, exact: bool):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        frac = Fraction(int(num), int(den))
    else:
        frac = Fraction(text)
    return frac if exact else float(frac)


def load_function_csv(G: FiniteAbelianGroup, path, exact: bool = False) -> GroupFunction:
    """CSV with header ``index,value``; decimals or ``p/q`` rationals."""
    vals = [None] * G.order
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip().lower() for h in header[:2]] != ["index", "value"]:
            raise ValueError("function CSV must start with header 'index,value'")
        for row in reader:
            if not row:
                continue
            idx = int(row[0])
            vals[idx] = _parse_value(row[1], exact)
    if any(v is None for v in vals):
        raise ValueError("function CSV does not cover every element")
    return GroupFunction(G, vals, exact=exact)


def save_function_csv(f: GroupFunction, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "value"])
        for i, v in enumerate(f.values):
            writer.writerow([i, str(v) if f.exact else format(v, ".17g")])


def load_set_csv(G: FiniteAbelianGroup, path) -> AdditiveSet:
    """One member index per line."""
    members = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                members.append(int(line))
    return AdditiveSet(G, members)


def save_set_csv(A: AdditiveSet, path) -> None:
    with open(path, "w") as fh:
        for x in A.sorted_members():
            fh.write(f"{x}\n")
