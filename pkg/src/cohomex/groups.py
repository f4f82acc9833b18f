"""Small finite groups as explicit multiplication tables.

Every group is stored as a dense table over element ids ``0..order-1``
with id 0 the identity.  Constructors validate the group axioms on the
spot, so anything returned from this module is a genuine group.

Supported constructions (and their descriptor strings):

* ``cyclic:n``
* ``family:p=P,a=A,b=B,g=G,d=D`` -- the two-generator central extension
  ``<a, b, c | c central, a^(p^A) = b^(p^B) = c^(p^G) = 1, [a,b] = c^(p^D)>``
* ``product:(D1)x(D2)x...`` -- direct products
* ``wreath:p=P,n=N`` -- Sylow p-subgroup of the symmetric group on p^N points
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import ParseError, ResourceError, UnsupportedError
from .intlinalg import invariant_factors_from_cyclic

MAX_ORDER = 256
ISOMORPHISM_MAX_ORDER = 64
DEFAULT_DEPTH = 3


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


def prime_power_decomposition(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` (k >= 1), or None."""
    if n < 2:
        return None
    p = next(q for q in range(2, n + 1) if n % q == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def _check_order(order: int, max_order: int) -> None:
    if order > max_order:
        raise ResourceError(f"group order {order} exceeds the supported maximum {max_order}")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``mul[x][y]`` is the id of the product ``x*y``; ``inv[x]`` the id of
    the inverse.  ``generators`` is a tuple of ``(name, id)`` pairs.
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    generators: tuple[tuple[str, int], ...]
    descriptor: str
    _validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        if not self._validated:
            _validate(self)

    def __repr__(self):
        return f"FiniteGroup({self.descriptor!r}, order={self.order})"

    @classmethod
    def from_table(cls, mul, generators, descriptor, max_order=MAX_ORDER):
        mul = tuple(tuple(int(v) for v in row) for row in mul)
        order = len(mul)
        _check_order(order, max_order)
        inv = [0] * order
        for x in range(order):
            row = mul[x]
            for y in range(order):
                if row[y] == 0:
                    inv[x] = y
                    break
        return cls(order, mul, tuple(inv), tuple(generators), descriptor)

    @cached_property
    def table(self) -> np.ndarray:
        return np.array(self.mul, dtype=np.int32).reshape(self.order, self.order)

    @property
    def elements(self) -> range:
        return range(self.order)

    def generator(self, name: str) -> int:
        for n, g in self.generators:
            if n == name:
                return g
        raise KeyError(name)

    def power(self, x: int, m: int) -> int:
        if m < 0:
            x, m = self.inv[x], -m
        result = 0
        base = x
        while m:
            if m & 1:
                result = self.mul[result][base]
            base = self.mul[base][base]
            m >>= 1
        return result

    def commutator(self, x: int, y: int) -> int:
        """``[x, y] = x^-1 y^-1 x y``."""
        m, inv = self.mul, self.inv
        return m[m[inv[x]][inv[y]]][m[x][y]]

    def conjugate(self, x: int, g: int) -> int:
        """``x^g = g^-1 x g``."""
        return self.mul[self.mul[self.inv[g]][x]][g]

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = self.mul[y][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    def element_order(self, x: int) -> int:
        return self.element_orders[x]

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return bool(np.array_equal(t, t.T))

    def word(self, spelled: str) -> int:
        """Evaluate a product of generator names separated by ``*``; ``x^k`` allowed."""
        result = 0
        for factor in filter(None, (s.strip() for s in spelled.split("*"))):
            name, _, exp = factor.partition("^")
            result = self.mul[result][self.power(self.generator(name), int(exp or 1))]
        return result


def _validate(G: FiniteGroup) -> None:
    n = G.order
    if n < 1 or len(G.mul) != n or len(G.inv) != n:
        raise ValueError("malformed table")
    t = np.array(G.mul, dtype=np.int64)
    if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
        raise ValueError("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
        raise ValueError("id 0 is not a two-sided identity")
    inv = np.array(G.inv)
    if not (np.all(t[ar, inv] == 0) and np.all(t[inv, ar] == 0)):
        raise ValueError("inverse table is wrong")
    for row in t:
        if len(np.unique(row)) != n:
            raise ValueError("table is not a Latin square")
    if n <= MAX_ORDER:
        # (xy)z == x(yz) for all triples
        left = t[t]  # left[x, y, z] = t[t[x, y], z]
        right = t[:, t]  # right[x, y, z] = t[x, t[y, z]]
        if not np.array_equal(left, right):
            raise ValueError("multiplication is not associative")
    gens = [g for _, g in G.generators]
    if len(closure(G, gens)) != n:
        raise ValueError("generators do not generate the group")


def closure(G: FiniteGroup, elements: Iterable[int]) -> frozenset[int]:
    """Subgroup generated by ``elements`` (as a set of ids)."""
    gens = sorted(set(elements) - {0})
    seen = {0}
    queue = deque([0])
    mul = G.mul
    while queue:
        x = queue.popleft()
        row = mul[x]
        for s in gens:
            y = row[s]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def group_from_elements(elements: Sequence[Hashable], op: Callable, generators, descriptor: str,
                        max_order: int = MAX_ORDER) -> FiniteGroup:
    """Tabulate a group from a list of elements (identity first) and a product."""
    _check_order(len(elements), max_order)
    index = {e: i for i, e in enumerate(elements)}
    mul = [[index[op(x, y)] for y in elements] for x in elements]
    gens = [(name, index[g]) for name, g in generators]
    return FiniteGroup.from_table(mul, gens, descriptor, max_order)


# ---------------------------------------------------------------- family

@dataclass(frozen=True)
class FamilyParams:
    p: int
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __iter__(self):
        return iter((self.p, self.alpha, self.beta, self.gamma, self.delta))

    @property
    def is_normalized(self) -> bool:
        return (self.delta <= self.gamma
                and self.gamma - self.delta <= min(self.alpha, self.beta))

    @property
    def order(self) -> int:
        return self.p ** (self.alpha + self.beta + self.gamma)

    @property
    def descriptor(self) -> str:
        return (f"family:p={self.p},a={self.alpha},b={self.beta},"
                f"g={self.gamma},d={self.delta}")


def normalize_params(p: int, alpha: int, beta: int, gamma: int, delta: int) -> FamilyParams:
    """Rewrite a raw parameter tuple into one satisfying
    ``delta <= gamma`` and ``gamma - delta <= min(alpha, beta)``
    without changing the isomorphism type of the group."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if min(alpha, beta, gamma) < 1:
        raise ValueError("alpha, beta and gamma must be positive")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if gamma < delta:
        # c^(p^delta) = c^(p^gamma) = 1 already
        delta = gamma
    if gamma - delta > min(alpha, beta):
        gamma = min(alpha + delta, beta + delta)
    return FamilyParams(p, alpha, beta, gamma, delta)


def family_product(params: FamilyParams):
    """Multiplication of normal-form triples ``(i, j, k)`` for ``a^i b^j c^k``.

    Collection rule: ``b^j a^i = a^i b^j c^(-i*j*p^delta)``, which gives
    ``[a, b] = a^-1 b^-1 a b = c^(p^delta)``.  Needs no table, so it also
    serves groups above the tabulation limit.
    """
    if not params.is_normalized:
        raise ValueError(f"parameters {params} are not normalized")
    p, al, be, ga, de = params
    A, B, Cn = p ** al, p ** be, p ** ga
    twist = p ** de

    def mul(x, y):
        return ((x[0] + y[0]) % A, (x[1] + y[1]) % B, (x[2] + y[2] - x[1] * y[0] * twist) % Cn)

    return mul


def build_family_group(params: FamilyParams, max_order: int = MAX_ORDER) -> FiniteGroup:
    """Tabulate the family group on normal forms ``a^i b^j c^k``."""
    mul3 = family_product(params)
    p, al, be, ga, _ = params
    A, B, Cn = p ** al, p ** be, p ** ga
    order = A * B * Cn
    _check_order(order, max_order)
    forms = [(x // (B * Cn), (x // Cn) % B, x % Cn) for x in range(order)]
    mul = []
    for x in forms:
        row = []
        for y in forms:
            i, j, k = mul3(x, y)
            row.append((i * B + j) * Cn + k)
        mul.append(row)
    gens = [("a", B * Cn), ("b", Cn), ("c", 1)]
    G = FiniteGroup.from_table(mul, gens, params.descriptor, max_order)
    _check_family_relations(G, params)
    return G


def _check_family_relations(G: FiniteGroup, params: FamilyParams) -> None:
    p, al, be, ga, de = params
    a, b, c = (G.generator(n) for n in "abc")
    ok = (G.power(a, p ** al) == 0 and G.power(b, p ** be) == 0 and G.power(c, p ** ga) == 0
          and G.commutator(a, c) == 0 and G.commutator(b, c) == 0
          and G.commutator(a, b) == G.power(c, p ** de))
    if not ok:
        raise AssertionError(f"presentation relations fail for {params}")


def family_group(p, alpha, beta, gamma, delta, max_order=MAX_ORDER) -> FiniteGroup:
    return build_family_group(normalize_params(p, alpha, beta, gamma, delta), max_order)


# ---------------------------------------------------------- other groups

def cyclic_group(n: int, max_order: int = MAX_ORDER) -> FiniteGroup:
    if n < 1:
        raise ValueError("n must be positive")
    _check_order(n, max_order)
    mul = [[(x + y) % n for y in range(n)] for x in range(n)]
    gens = [("g", 1)] if n > 1 else []
    return FiniteGroup.from_table(mul, gens, f"cyclic:{n}", max_order)


def _product_parts(descriptor: str) -> list[str]:
    if not descriptor.startswith("product:"):
        return [descriptor]
    return _split_product(descriptor[len("product:"):])


def direct_product(G: FiniteGroup, H: FiniteGroup, max_order: int = MAX_ORDER) -> FiniteGroup:
    order = G.order * H.order
    _check_order(order, max_order)
    n = H.order
    gm, hm = G.mul, H.mul
    mul = [[gm[x // n][y // n] * n + hm[x % n][y % n] for y in range(order)]
           for x in range(order)]
    gens = [(f"{name}1", g * n) for name, g in G.generators]
    gens += [(f"{name}2", h) for name, h in H.generators]
    parts = _product_parts(G.descriptor) + _product_parts(H.descriptor)
    descriptor = "product:" + "x".join(f"({d})" for d in parts)
    return FiniteGroup.from_table(mul, gens, descriptor, max_order)


def elementary_abelian(p: int, k: int, max_order: int = MAX_ORDER) -> FiniteGroup:
    return reduce(lambda A, B: direct_product(A, B, max_order),
                  [cyclic_group(p, max_order) for _ in range(k)])


def wreath_sylow(p: int, n: int, max_order: int = MAX_ORDER) -> FiniteGroup:
    """Sylow p-subgroup of Sym(p^n) as the iterated wreath product of Z/p.

    Generator ``s_k`` cyclically permutes the p blocks of size p^(k-1)
    inside the first block of size p^k.
    """
    if not is_prime(p) or n < 1:
        raise ValueError("need a prime p and n >= 1")
    expected = p ** ((p ** n - 1) // (p - 1))
    _check_order(expected, max_order)
    points = p ** n
    gens = []
    for k in range(1, n + 1):
        size = p ** (k - 1)
        perm = list(range(points))
        for x in range(p ** k):
            blk, off = divmod(x, size)
            perm[x] = ((blk + 1) % p) * size + off
        gens.append((f"s{k}", tuple(perm)))
    identity = tuple(range(points))
    elements = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for _, s in gens:
            y = tuple(x[s[i]] for i in range(points))
            if y not in seen:
                seen.add(y)
                elements.append(y)
                queue.append(y)
    if len(elements) != expected:
        raise AssertionError("wreath product has the wrong order")
    elements = [identity] + sorted(elements[1:])

    def compose(x, y):  # x after y
        return tuple(x[y[i]] for i in range(points))

    return group_from_elements(elements, compose, gens, f"wreath:p={p},n={n}", max_order)


# ------------------------------------------------------------ descriptors

def _split_product(body: str) -> list[str]:
    parts, depth, start = [], 0, None
    for i, ch in enumerate(body):
        if ch == "(":
            if depth == 0:
                start = i + 1
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {body!r}")
            if depth == 0:
                parts.append(body[start:i])
        elif depth == 0 and ch != "x":
            raise ParseError(f"unexpected {ch!r} in product {body!r}")
    if depth != 0 or len(parts) < 2:
        raise ParseError(f"malformed product {body!r}")
    return parts


def _keyvals(body: str, keys: Sequence[str]) -> dict[str, int]:
    out = {}
    for item in body.split(","):
        k, sep, v = item.partition("=")
        if not sep or not re.fullmatch(r"-?\d+", v.strip()):
            raise ParseError(f"bad item {item!r}")
        out[k.strip()] = int(v)
    if sorted(out) != sorted(keys):
        raise ParseError(f"expected keys {list(keys)}, got {list(out)}")
    return out


def parse_family_params(descriptor: str) -> FamilyParams:
    """Normalized parameters of a ``family:`` descriptor."""
    d = descriptor.strip().replace(" ", "")
    kind, _, body = d.partition(":")
    if kind != "family":
        raise ParseError(f"{descriptor!r} is not a family descriptor")
    kv = _keyvals(body, "pabgd")
    try:
        return normalize_params(kv["p"], kv["a"], kv["b"], kv["g"], kv["d"])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_descriptor(descriptor: str, max_order: int = MAX_ORDER) -> FiniteGroup:
    """Build the group named by a descriptor string."""
    d = descriptor.strip().replace(" ", "")
    kind, sep, body = d.partition(":")
    if not sep:
        raise ParseError(f"descriptor {descriptor!r} has no kind prefix")
    try:
        if kind == "cyclic":
            if not body.isdigit():
                raise ParseError(f"bad cyclic order {body!r}")
            return cyclic_group(int(body), max_order)
        if kind == "family":
            kv = _keyvals(body, "pabgd")
            return family_group(kv["p"], kv["a"], kv["b"], kv["g"], kv["d"], max_order)
        if kind == "wreath":
            kv = _keyvals(body, "pn")
            return wreath_sylow(kv["p"], kv["n"], max_order)
        if kind == "product":
            factors = [parse_descriptor(s, max_order) for s in _split_product(body)]
            return reduce(lambda A, B: direct_product(A, B, max_order), factors)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown group kind {kind!r}")


# -------------------------------------------------------------- subgroups

@dataclass(frozen=True)
class Subgroup:
    parent: str
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    def __len__(self):
        return len(self.members)


def make_subgroup(G: FiniteGroup, members: Iterable[int]) -> Subgroup:
    members = frozenset(members)
    if 0 not in members:
        raise ValueError("subgroup must contain the identity")
    for x in members:
        if G.inv[x] not in members or any(G.mul[x][y] not in members for y in members):
            raise ValueError("member set is not closed")
    return Subgroup(G.descriptor, tuple(sorted(members)))


def generated_subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    return Subgroup(G.descriptor, tuple(sorted(closure(G, elements))))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G.descriptor, tuple(range(G.order)))


def trivial(G: FiniteGroup) -> Subgroup:
    return Subgroup(G.descriptor, (0,))


def subgroup_as_group(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Relabel ``H`` as a standalone group; returns it with the embedding
    (new id -> parent id)."""
    embed = H.members  # sorted, so 0 comes first
    index = {x: i for i, x in enumerate(embed)}
    mul = [[index[G.mul[x][y]] for y in embed] for x in embed]
    table = FiniteGroup.from_table(mul, [("h", i) for i in range(1, len(embed))], "tmp")
    gens = [(f"h{k + 1}", x) for k, x in enumerate(_small_generating_set(table))]
    desc = f"subgroup:({G.descriptor})[{','.join(map(str, embed))}]"
    return FiniteGroup.from_table(mul, gens, desc), embed


def center(G: FiniteGroup) -> Subgroup:
    t = G.table
    members = [x for x in range(G.order) if np.array_equal(t[x], t[:, x])]
    return Subgroup(G.descriptor, tuple(members))


def centralizer(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    elements = list(elements)
    members = [x for x in range(G.order)
               if all(G.mul[x][y] == G.mul[y][x] for y in elements)]
    return Subgroup(G.descriptor, tuple(members))


def commutator_subgroup(G: FiniteGroup) -> Subgroup:
    comms = {G.commutator(x, y) for x in range(G.order) for y in range(G.order)}
    return generated_subgroup(G, comms)


def frattini_of_p_subgroup(G: FiniteGroup, K: Subgroup, p: int) -> Subgroup:
    """Frattini subgroup K^p [K, K] of a p-subgroup K."""
    gens = {G.power(x, p) for x in K.members}
    gens |= {G.commutator(x, y) for x in K.members for y in K.members}
    return generated_subgroup(G, gens)


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    s = H.member_set
    return all(G.conjugate(x, g) in s for g in range(G.order) for x in H.members)


def is_elementary_abelian(G: FiniteGroup) -> bool:
    if G.order == 1:
        return True
    pk = prime_power_decomposition(G.order)
    if pk is None or not G.is_abelian:
        return False
    return all(o in (1, pk[0]) for o in G.element_orders)


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an abelian group (empty if trivial)."""
    if not G.is_abelian:
        raise UnsupportedError(f"{G.descriptor} is not abelian")
    return _abelian_invariants_from_orders(G.element_orders, G.order)


def _abelian_invariants_from_orders(orders: Sequence[int], n: int) -> tuple[int, ...]:
    cyclic = []
    m, q = n, 2
    primes = []
    while m > 1:
        if m % q == 0:
            primes.append(q)
            while m % q == 0:
                m //= q
        q += 1
    for p in primes:
        # counts[k] = #{x : x^(p^k) = 1} = p^(sum_i min(k, e_i))
        logs = [0]
        k = 1
        while True:
            cnt = sum(1 for o in orders if (p ** k) % o == 0 and _is_p_power(o, p))
            logs.append(round(math.log(cnt, p)))
            if logs[-1] == logs[-2]:
                break
            k += 1
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]  # #{i : e_i >= k}
        for k in range(1, len(ge) + 1):
            at_least = ge[k - 1]
            more = ge[k] if k < len(ge) else 0
            cyclic.extend([p ** k] * (at_least - more))
    return invariant_factors_from_cyclic(cyclic)


def _is_p_power(o: int, p: int) -> bool:
    while o % p == 0:
        o //= p
    return o == 1


# -------------------------------------------------------- p-group lattice

def maximal_subgroups(G: FiniteGroup, K: Subgroup, p: int) -> list[Subgroup]:
    """Index-p subgroups of a p-subgroup ``K``: preimages of hyperplanes of K/Phi(K)."""
    if K.order == 1:
        return []
    phi = frattini_of_p_subgroup(G, K, p)
    basis: list[int] = []
    span = phi.member_set
    for x in K.members:
        if x not in span:
            basis.append(x)
            span = closure(G, list(phi.members) + basis)
    d = len(basis)
    coords: dict[int, tuple[int, ...]] = {}
    for vec in itertools.product(range(p), repeat=d):
        rep = 0
        for x, e in zip(basis, vec):
            rep = G.mul[rep][G.power(x, e)]
        for f in phi.members:
            coords[G.mul[rep][f]] = vec
    result = []
    for lam in itertools.product(range(p), repeat=d):
        nz = [v for v in lam if v]
        if not nz or nz[0] != 1:
            continue
        members = tuple(sorted(x for x in K.members
                               if sum(a * b for a, b in zip(lam, coords[x])) % p == 0))
        result.append(Subgroup(G.descriptor, members))
    return result


def subgroups_of_index_at_most(G: FiniteGroup, bound: int, depth: int = DEFAULT_DEPTH) -> list[Subgroup]:
    """All subgroups of index <= bound (a power of p) in the p-group G,
    sorted by decreasing order then members."""
    pk = prime_power_decomposition(G.order)
    if G.order == 1:
        return [whole(G)]
    if pk is None:
        raise UnsupportedError(f"{G.descriptor} is not a p-group")
    p = pk[0]
    bp = prime_power_decomposition(bound) if bound > 1 else (p, 0)
    if bp is None or bp[0] != p:
        raise ValueError(f"bound {bound} is not a power of {p}")
    n = bp[1]
    if n > depth:
        raise ResourceError(f"index bound p^{n} exceeds the enumeration depth {depth}")
    levels = [[whole(G)]]
    seen = {whole(G).members}
    for _ in range(n):
        nxt = []
        for K in levels[-1]:
            for M in maximal_subgroups(G, K, p):
                if M.members not in seen:
                    seen.add(M.members)
                    nxt.append(M)
        if not nxt:
            break
        levels.append(nxt)
    out = [H for lvl in levels for H in lvl]
    out.sort(key=lambda H: (-H.order, H.members))
    return out


def all_subgroups_bruteforce(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found by growing subgroups one element at a time
    until nothing new appears (small groups only)."""
    found = {(0,)}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for H in frontier:
            for x in range(1, G.order):
                if x not in H:
                    K = closure(G, H | {x})
                    key = tuple(sorted(K))
                    if key not in found:
                        found.add(key)
                        nxt.append(K)
        frontier = nxt
    return [Subgroup(G.descriptor, m) for m in sorted(found, key=lambda m: (-len(m), m))]


def normal_core(G: FiniteGroup, H: Subgroup) -> Subgroup:
    core = set(H.members)
    for g in range(G.order):
        core &= {G.conjugate(x, g) for x in H.members}
    return Subgroup(G.descriptor, tuple(sorted(core)))


def left_cosets(G: FiniteGroup, H: Subgroup) -> tuple[list[int], list[int]]:
    """Return (coset id of each element, representative of each coset)."""
    label = [-1] * G.order
    reps = []
    for g in range(G.order):
        if label[g] < 0:
            for h in H.members:
                label[G.mul[g][h]] = len(reps)
            reps.append(g)
    return label, reps


def coset_action(G: FiniteGroup, H: Subgroup) -> tuple[tuple[int, ...], ...]:
    """Permutation of the left cosets of H induced by each element of G."""
    label, reps = left_cosets(G, H)
    return tuple(tuple(label[G.mul[x][r]] for r in reps) for x in range(G.order))


def action_kernel(action: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(x for x, perm in enumerate(action) if all(i == v for i, v in enumerate(perm)))


@dataclass(frozen=True)
class Quotient:
    group: FiniteGroup
    projection: tuple[int, ...]


def quotient_group(G: FiniteGroup, N: Subgroup) -> Quotient:
    if not is_normal(G, N):
        raise ValueError("subgroup is not normal")
    label, reps = left_cosets(G, N)
    mul = [[label[G.mul[r][s]] for s in reps] for r in reps]
    gens = []
    for name, g in G.generators:
        if label[g] != 0 and label[g] not in [i for _, i in gens]:
            gens.append((name, label[g]))
    desc = f"quotient:({G.descriptor})/[{','.join(map(str, N.members))}]"
    # never larger than G, which was already accepted
    return Quotient(FiniteGroup.from_table(mul, gens, desc, max(G.order, MAX_ORDER)), tuple(label))


def is_cyclic_subgroup(G: FiniteGroup, C: Subgroup) -> bool:
    return any(G.element_orders[x] == C.order for x in C.members)


def cyclic_generator(G: FiniteGroup, C: Subgroup) -> int:
    for x in C.members:
        if G.element_orders[x] == C.order:
            return x
    raise ValueError("subgroup is not cyclic")


def minimal_splitting_subgroup(G: FiniteGroup, C: Subgroup) -> tuple[Subgroup, int]:
    """Smallest D <= C (central cyclic) with G/D isomorphic to (C/D) x (G/C).

    Only abelian G/C is supported; the isomorphism is then decided by
    abelian invariants.
    """
    z = center(G).member_set
    if not C.member_set <= z:
        raise ValueError("C is not central")
    gen = cyclic_generator(G, C)
    Q = quotient_group(G, C).group
    if not Q.is_abelian:
        raise UnsupportedError("minimal splitting subgroup needs an abelian quotient G/C")
    q_inv = abelian_invariants(Q)
    n = C.order
    for d in range(1, n + 1):
        if n % d:
            continue
        D = generated_subgroup(G, [G.power(gen, n // d)])
        GD = quotient_group(G, D).group
        if not GD.is_abelian:
            continue
        target = invariant_factors_from_cyclic(list(q_inv) + [n // d])
        if abelian_invariants(GD) == target:
            return D, d
    raise AssertionError("unreachable: D = C always splits")


def intersection(*subgroups: Subgroup) -> Subgroup:
    members = set(subgroups[0].members)
    for H in subgroups[1:]:
        members &= H.member_set
    return Subgroup(subgroups[0].parent, tuple(sorted(members)))


# ----------------------------------------------------------- isomorphism

def _small_generating_set(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = frozenset([0])
    # prefer high-order elements so the set stays short
    for x in sorted(range(1, G.order), key=lambda x: (-G.element_orders[x], x)):
        if x not in span:
            gens.append(x)
            span = closure(G, gens)
            if len(span) == G.order:
                break
    return gens


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> tuple[int, ...] | None:
    """Brute-force isomorphism search (orders <= 64); returns the map or None."""
    if G.order != H.order:
        return None
    if G.order > ISOMORPHISM_MAX_ORDER:
        raise ResourceError("isomorphism testing is limited to order 64")
    if sorted(G.element_orders) != sorted(H.element_orders) or G.is_abelian != H.is_abelian:
        return None
    gens = _small_generating_set(G)
    candidates = [[y for y in range(H.order) if H.element_orders[y] == G.element_orders[g]]
                  for g in gens]
    for images in itertools.product(*candidates):
        f = _extend_hom(G, H, gens, images)
        if f is not None:
            return f
    return None


def _extend_hom(G, H, gens, images):
    f = [-1] * G.order
    f[0] = 0
    queue = deque([0])
    used = {0}
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y = G.mul[x][g]
            fy = H.mul[f[x]][h]
            if f[y] < 0:
                if fy in used:
                    return None
                f[y] = fy
                used.add(fy)
                queue.append(y)
            elif f[y] != fy:
                return None
    return tuple(f) if len(used) == G.order else None


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None
