"""Finite abelian groups as explicit products of cyclic groups.

Elements are plain ints in ``range(order)`` under mixed-radix encoding:
component i has radix ``moduli[i]`` and stride ``prod(moduli[:i])`` (the
first factor is the least significant digit).
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_ORDER_CAP = 10**6


class FiniteAbelianGroup:
    """Z_{n_1} x ... x Z_{n_m} with componentwise addition mod n_i.

    Instances are immutable after construction and safe to share; the only
    internal mutation is a memo table of translation permutations.
    """

    __slots__ = ("moduli", "order", "strides", "_translations")

    def __init__(self, moduli: tuple[int, ...], order_cap: int = DEFAULT_ORDER_CAP) -> None:
        moduli = tuple(int(n) for n in moduli)
        if not moduli:
            raise ValueError("need at least one cyclic factor")
        for n in moduli:
            if n < 2:
                raise ValueError(f"modulus {n} < 2")
        order = math.prod(moduli)
        if order > order_cap:
            raise ValueError(f"group order {order} exceeds cap {order_cap}")
        strides = []
        acc = 1
        for n in moduli:
            strides.append(acc)
            acc *= n
        self.moduli = moduli
        self.order = order
        self.strides = tuple(strides)
        self._translations: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return "x".join(f"Z{n}" for n in self.moduli)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(self.moduli)

    def elements(self) -> range:
        return range(self.order)

    def encode(self, comps) -> int:
        if len(comps) != len(self.moduli):
            raise ValueError("component count mismatch")
        x = 0
        for c, n, s in zip(comps, self.moduli, self.strides):
            x += (int(c) % n) * s
        return x

    def decode(self, x: int) -> tuple[int, ...]:
        self._check(x)
        return tuple((x // s) % n for n, s in zip(self.moduli, self.strides))

    def _check(self, x: int) -> None:
        if not 0 <= x < self.order:
            raise ValueError(f"element index {x} out of range for {self!r}")

    # -- scalar arithmetic ------------------------------------------------

    def add(self, x: int, y: int) -> int:
        self._check(x)
        self._check(y)
        out = 0
        for n, s in zip(self.moduli, self.strides):
            out += (((x // s) % n + (y // s) % n) % n) * s
        return out

    def neg(self, x: int) -> int:
        self._check(x)
        out = 0
        for n, s in zip(self.moduli, self.strides):
            out += ((-((x // s) % n)) % n) * s
        return out

    def scalar_mul(self, lam: int, x: int) -> int:
        self._check(x)
        out = 0
        for n, s in zip(self.moduli, self.strides):
            out += ((lam * ((x // s) % n)) % n) * s
        return out

    def sum(self, xs) -> int:
        out = 0
        for x in xs:
            out = self.add(out, x)
        return out

    # -- vectorized arithmetic on index arrays -----------------------------

    def add_arrays(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        out = np.zeros(np.broadcast(xs, ys).shape, dtype=np.int64)
        for n, s in zip(self.moduli, self.strides):
            out += ((xs // s % n + ys // s % n) % n) * s
        return out

    def scalar_mul_array(self, lam: int, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros_like(xs)
        for n, s in zip(self.moduli, self.strides):
            out += (lam * (xs // s % n)) % n * s
        return out

    def sum_columns(self, cols) -> np.ndarray:
        """Sum a sequence of index arrays elementwise in the group."""
        it = iter(cols)
        out = np.array(next(it), dtype=np.int64, copy=True)
        for c in it:
            out = self.add_arrays(out, c)
        return out

    def translation(self, a: int) -> np.ndarray:
        """Permutation array p with p[x] = x + a."""
        perm = self._translations.get(a)
        if perm is None:
            perm = self.add_arrays(np.arange(self.order), np.int64(a))
            perm.setflags(write=False)
            self._translations[a] = perm
        return perm


def make_group(moduli, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(moduli), order_cap=order_cap)


def cyclic(n: int) -> FiniteAbelianGroup:
    return make_group([n])


def is_prime(p: int) -> bool:
    """Trial division; sufficient for desk-scale p."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def quadratic_residues(p: int, order_cap: int = DEFAULT_ORDER_CAP) -> frozenset[int]:
    """The set {y^2 mod p : y in Z_p}, of size (p+1)/2 for odd primes."""
    if p > order_cap:
        raise ValueError(f"p={p} exceeds order cap {order_cap}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return frozenset((y * y) % p for y in range(p))


def scalar_subgroup(G: FiniteAbelianGroup, lam: int) -> tuple[int, ...]:
    """The subgroup lam*G = {lam*x : x in G} as a sorted index tuple."""
    xs = G.scalar_mul_array(lam, np.arange(G.order))
    return tuple(sorted(set(int(x) for x in xs)))


def is_coprime_form(G: FiniteAbelianGroup, lambdas) -> bool:
    return all(math.gcd(int(lam), G.order) == 1 for lam in lambdas)
