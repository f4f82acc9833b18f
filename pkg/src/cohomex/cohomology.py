"""Integral and mod-m cohomology of finite groups from normalized bar cochains.

The normalized bar complex has (|G|-1)^n cells in degree n, far too many
to eliminate directly in degree 6 and up.  We therefore compute with an
algebraic Morse reduction of it: the elements of G get shortlex normal
words over a generating set, and every bar cell is either critical or
paired with a neighbour through a merge face with coefficient +-1.  The
paired cells cancel, and what is left is a chain complex on the critical
cells that is chain homotopy equivalent to the bar complex, with explicit
comparison maps in both directions (``flow`` and ``include``).  All
cohomology groups, restrictions and Bocksteins are computed on that
reduced complex; the explicit bar complex is kept for small cases and for
cross-checking.
"""

from __future__ import annotations

import itertools
import math
import threading
import weakref
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import InvariantViolation, ParseError, ResourceError
from .groups import FiniteGroup, Subgroup, closure, subgroup_as_group
from .intlinalg import (
    DEFAULT_BIT_BOUND,
    AbelianGroupInvariants,
    HomologyBasis,
    SparseIntMatrix,
    homology_basis,
)

DEFAULT_BUDGET = 20_000_000
ENUMERATION_CAP = 2 ** 16

Cell = tuple[int, ...]


@dataclass(frozen=True)
class CoefficientSpec:
    """Integral coefficients (``modulus == 0``) or Z/m."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError("modulus must be 0 (integral) or at least 2")

    @property
    def is_integral(self) -> bool:
        return self.modulus == 0

    @property
    def kind(self) -> str:
        return "integral" if self.is_integral else "modular"

    def __str__(self):
        return "int" if self.is_integral else f"mod:{self.modulus}"

    @classmethod
    def parse(cls, text: str) -> "CoefficientSpec":
        text = text.strip().lower()
        if text in ("int", "z", "integral"):
            return cls(0)
        if text.startswith("mod:") and text[4:].isdigit() and int(text[4:]) >= 2:
            return cls(int(text[4:]))
        raise ParseError(f"bad coefficient spec {text!r} (use int or mod:m)")


INTEGRAL = CoefficientSpec(0)


def modular(m: int) -> CoefficientSpec:
    return CoefficientSpec(m)


def _as_coeffs(coeffs) -> CoefficientSpec:
    if isinstance(coeffs, CoefficientSpec):
        return coeffs
    if isinstance(coeffs, int):
        return CoefficientSpec(coeffs)
    return CoefficientSpec.parse(str(coeffs))


def check_budget(G: FiniteGroup, degree: int, budget: int = DEFAULT_BUDGET) -> None:
    size = (G.order - 1) ** degree
    if size > budget:
        raise ResourceError(
            f"{G.descriptor}: degree {degree} needs {size} bar cells "
            f"(budget {budget})")


# ------------------------------------------------------------ bar complex

def bar_faces(G: FiniteGroup, cell: Cell) -> list[tuple[Cell, int]]:
    """Nondegenerate faces of a bar cell with their signs."""
    n = len(cell)
    out = [(cell[1:], 1)] if n else []
    mul = G.mul
    for i in range(n - 1):
        prod = mul[cell[i]][cell[i + 1]]
        if prod:
            out.append((cell[:i] + (prod,) + cell[i + 2:], -1 if i % 2 == 0 else 1))
    if n:
        out.append((cell[:-1], -1 if n % 2 else 1))
    return out


def bar_cells(G: FiniteGroup, n: int) -> Iterator[Cell]:
    return itertools.product(range(1, G.order), repeat=n)


def bar_index(G: FiniteGroup, cell: Cell) -> int:
    b = G.order - 1
    idx = 0
    for g in cell:
        idx = idx * b + (g - 1)
    return idx


@dataclass(frozen=True)
class CochainComplexSlice:
    """Normalized bar cochains of one group in degrees ``0..max_degree``.

    ``differentials[n]`` maps degree n to degree n+1 (rows indexed by
    (n+1)-cells); it is stored over the integers and read modulo the
    coefficient modulus.
    """

    descriptor: str
    coeffs: CoefficientSpec
    max_degree: int
    counts: tuple[int, ...]
    differentials: tuple[SparseIntMatrix, ...]

    def check_square_zero(self) -> bool:
        m = self.coeffs.modulus
        for a, b in zip(self.differentials, self.differentials[1:]):
            prod = b @ a
            if (prod.mod(m) if m else prod).nnz:
                return False
        return True


def bar_coboundary(G: FiniteGroup, n: int) -> SparseIntMatrix:
    """delta: C^n -> C^(n+1) of the normalized bar complex."""
    rows = (G.order - 1) ** (n + 1)
    cols = (G.order - 1) ** n
    data: dict[int, dict[int, int]] = {}
    for r, cell in enumerate(bar_cells(G, n + 1)):
        row: dict[int, int] = {}
        for face, sign in bar_faces(G, cell):
            c = bar_index(G, face)
            row[c] = row.get(c, 0) + sign
        row = {c: v for c, v in row.items() if v}
        if row:
            data[r] = row
    return SparseIntMatrix(rows, cols, data)


def bar_complex(G: FiniteGroup, coeffs=INTEGRAL, max_degree: int = 3,
                budget: int = DEFAULT_BUDGET) -> CochainComplexSlice:
    coeffs = _as_coeffs(coeffs)
    check_budget(G, max_degree, budget)
    counts = tuple((G.order - 1) ** n for n in range(max_degree + 1))
    diffs = tuple(bar_coboundary(G, n) for n in range(max_degree))
    sl = CochainComplexSlice(G.descriptor, coeffs, max_degree, counts, diffs)
    if not sl.check_square_zero():
        raise InvariantViolation(f"delta o delta != 0 for {G.descriptor}")
    return sl


# -------------------------------------------------------- Morse reduction

CRITICAL, UP, DOWN = 0, 1, 2


class MorseReduction:
    """Acyclic matching on the normalized bar complex of ``G``.

    Elements get shortlex-least words over ``letters``.  For a cell
    ``[g1|...|gn]`` we scan left to right keeping a chain ``[g1|...|gj]``
    in which g1 is a letter and each later gj is exactly the shortest
    prefix that makes the concatenation with its predecessor non-normal.
    The first position where that breaks decides the partner: either the
    next entry can be merged into its predecessor (this cell is the
    upper partner) or it can be split at the chain prefix (lower
    partner).  Cells that survive the scan are critical.
    """

    def __init__(self, G: FiniteGroup, letters: Sequence[int] | None = None):
        self.G = G
        if letters is None:
            letters = _minimal_letters(G)
        self.letters = tuple(letters)
        self._lock = threading.RLock()
        self._build_words()
        self._crit: dict[int, list[Cell]] = {}
        self._crit_index: dict[int, dict[Cell, int]] = {}
        self._flow: dict[Cell, dict[int, int]] = {}
        self._boundary: dict[int, SparseIntMatrix] = {}
        self._incl: dict[int, list[dict[Cell, int]]] = {}

    def _build_words(self) -> None:
        G = self.G
        words: list[tuple[int, ...] | None] = [None] * G.order
        words[0] = ()
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s in self.letters:
                y = G.mul[x][s]
                if words[y] is None:
                    words[y] = words[x] + (s,)
                    queue.append(y)
        if any(w is None for w in words):
            raise ValueError("letters do not generate the group")
        self.words = words
        n = G.order
        # prefix_elem[h][k]: element spelled by the first k letters of word(h)
        self.prefix_elem = []
        for h in range(n):
            pe, x = [0], 0
            for s in words[h]:
                x = G.mul[x][s]
                pe.append(x)
            self.prefix_elem.append(pe)
        self.word_len = [len(w) for w in words]
        # min_red[g][h]: least k with word(g)+word(h)[:k] non-normal, 0 if the
        # whole concatenation is normal
        self.min_red = [[0] * n for _ in range(n)]
        for g in range(1, n):
            wg = words[g]
            for h in range(1, n):
                k = 0
                for kk in range(1, self.word_len[h] + 1):
                    prod = G.mul[g][self.prefix_elem[h][kk]]
                    if words[prod] != wg + words[h][:kk]:
                        k = kk
                        break
                self.min_red[g][h] = k

    # -- matching --------------------------------------------------------
    def classify(self, cell: Cell) -> tuple[int, Cell | None, int]:
        """Return (kind, partner, coefficient of the lower cell in d(upper))."""
        if not cell:
            return CRITICAL, None, 0
        G = self.G
        g1 = cell[0]
        if self.word_len[g1] >= 2:
            x1 = self.prefix_elem[g1][1]
            rest = G.mul[G.inv[x1]][g1]
            return DOWN, (x1, rest) + cell[1:], -1
        prev = g1
        for j in range(1, len(cell)):  # 0-based position of the entry being tested
            h = cell[j]
            k = self.min_red[prev][h]
            if k == 0:
                merged = cell[:j - 1] + (G.mul[prev][h],) + cell[j + 1:]
                return UP, merged, (-1 if j % 2 else 1)  # face merging (j-1, j), 1-based j
            if k < self.word_len[h]:
                u = self.prefix_elem[h][k]
                v = G.mul[G.inv[u]][h]
                upper = cell[:j] + (u, v) + cell[j + 1:]
                return DOWN, upper, (-1 if j % 2 == 0 else 1)  # face merging (j+1, j+2), 1-based
            prev = h
        return CRITICAL, None, 0

    def critical_cells(self, n: int) -> list[Cell]:
        with self._lock:
            if n not in self._crit:
                if n == 0:
                    cells = [()]
                else:
                    cells = []
                    letters = sorted(self.letters)
                    stack = [(s,) for s in reversed(letters)]
                    while stack:
                        c = stack.pop()
                        if len(c) == n:
                            cells.append(c)
                            continue
                        prev = c[-1]
                        for h in range(self.G.order - 1, 0, -1):
                            if self.min_red[prev][h] == self.word_len[h]:
                                stack.append(c + (h,))
                    cells.sort()
                self._crit[n] = cells
                self._crit_index[n] = {c: i for i, c in enumerate(cells)}
            return self._crit[n]

    def critical_index(self, n: int) -> dict[Cell, int]:
        self.critical_cells(n)
        return self._crit_index[n]

    def flow(self, cell: Cell) -> dict[int, int]:
        """Projection onto the critical cells (a chain map C -> M)."""
        with self._lock:
            memo = self._flow
            if cell in memo:
                return memo[cell]
            n = len(cell)
            crit_index = self.critical_index(n)
            # iterative post-order evaluation; a revisit of an open cell means a cycle
            stack = [(cell, False)]
            open_cells = set()
            while stack:
                x, expanded = stack.pop()
                if x in memo:
                    continue
                kind, partner, eps = self.classify(x)
                if kind == CRITICAL:
                    memo[x] = {crit_index[x]: 1}
                    continue
                if kind == UP:
                    memo[x] = {}
                    continue
                faces = [(f, s) for f, s in bar_faces(self.G, partner) if f != x]
                if not expanded:
                    if x in open_cells:
                        raise InvariantViolation("Morse matching has a cycle")
                    open_cells.add(x)
                    stack.append((x, True))
                    for f, _ in faces:
                        if f not in memo:
                            stack.append((f, False))
                    continue
                acc: dict[int, int] = {}
                for f, s in faces:
                    for c, v in memo[f].items():
                        acc[c] = acc.get(c, 0) - eps * s * v
                memo[x] = {c: v for c, v in acc.items() if v}
                open_cells.discard(x)
            return memo[cell]

    def flow_chain(self, chain: dict[Cell, int]) -> dict[int, int]:
        acc: dict[int, int] = {}
        for cell, coef in chain.items():
            for c, v in self.flow(cell).items():
                acc[c] = acc.get(c, 0) + coef * v
        return {c: v for c, v in acc.items() if v}

    def include(self, n: int) -> list[dict[Cell, int]]:
        """Images of the critical n-cells under the chain map M -> C."""
        with self._lock:
            if n in self._incl:
                return self._incl[n]
            psi: dict[Cell, dict[Cell, int]] = {}

            def lift(x: Cell) -> dict[Cell, int]:
                # chain in degree n correcting a lower (n-1)-cell x
                if x in psi:
                    return psi[x]
                order, stack, seen = [], [x], set()
                while stack:
                    y = stack.pop()
                    if y in seen or y in psi:
                        continue
                    seen.add(y)
                    order.append(y)
                    kind, up, _ = self.classify(y)
                    if kind == DOWN:
                        for f, _s in bar_faces(self.G, up):
                            if f != y:
                                stack.append(f)
                for y in reversed(order):
                    self._lift_one(y, psi)
                return psi[x]

            images = []
            for c in self.critical_cells(n):
                chain = {c: 1}
                for f, s in bar_faces(self.G, c):
                    for cell, v in lift(f).items():
                        chain[cell] = chain.get(cell, 0) + s * v
                images.append({k: v for k, v in chain.items() if v})
            self._incl[n] = images
            return images

    def _lift_one(self, x: Cell, psi: dict) -> None:
        if x in psi:
            return
        kind, up, eps = self.classify(x)
        if kind != DOWN:
            psi[x] = {}
            return
        acc = {up: -eps}
        for f, s in bar_faces(self.G, up):
            if f == x:
                continue
            sub = psi.get(f)
            if sub is None:
                self._lift_one(f, psi)
                sub = psi[f]
            for cell, v in sub.items():
                acc[cell] = acc.get(cell, 0) - eps * s * v
        psi[x] = {k: v for k, v in acc.items() if v}

    def boundary(self, n: int) -> SparseIntMatrix:
        """Reduced boundary M_n -> M_(n-1) (rows: critical (n-1)-cells)."""
        with self._lock:
            if n not in self._boundary:
                if n == 0:
                    mat = SparseIntMatrix(0, 1)
                else:
                    rows = len(self.critical_cells(n - 1))
                    cols = self.critical_cells(n)
                    data: dict[int, dict[int, int]] = {}
                    for j, c in enumerate(cols):
                        img = self.flow_chain({f: s for f, s in _merge_faces(self.G, c)})
                        for i, v in img.items():
                            data.setdefault(i, {})[j] = v
                    mat = SparseIntMatrix(rows, len(cols), data)
                self._boundary[n] = mat
            return self._boundary[n]

    def coboundary(self, n: int) -> SparseIntMatrix:
        """Reduced cochain differential degree n -> n+1."""
        return self.boundary(n + 1).transpose()


def _merge_faces(G: FiniteGroup, cell: Cell) -> list[tuple[Cell, int]]:
    acc: dict[Cell, int] = {}
    for f, s in bar_faces(G, cell):
        acc[f] = acc.get(f, 0) + s
    return [(f, s) for f, s in acc.items() if s]


def _minimal_letters(G: FiniteGroup) -> list[int]:
    letters: list[int] = []
    span = frozenset([0])
    for _, g in G.generators:
        if g not in span:
            letters.append(g)
            span = closure(G, letters)
    return letters


_REDUCTIONS: "weakref.WeakKeyDictionary[FiniteGroup, MorseReduction]" = weakref.WeakKeyDictionary()
_REDUCTIONS_LOCK = threading.Lock()


def morse_reduction(G: FiniteGroup) -> MorseReduction:
    """Shared (lazily filled) reduction data for a group object."""
    with _REDUCTIONS_LOCK:
        red = _REDUCTIONS.get(G)
        if red is None:
            red = _REDUCTIONS[G] = MorseReduction(G)
        return red


# ------------------------------------------------------------- cohomology

@dataclass
class CohomologyGroup:
    """One cohomology group with an SNF-adapted basis of cocycles."""

    descriptor: str
    coeffs: CoefficientSpec
    degree: int
    basis: HomologyBasis

    @property
    def invariants(self) -> AbelianGroupInvariants:
        return self.basis.invariants

    @property
    def orders(self) -> tuple[int, ...]:
        return self.basis.orders

    def coordinates(self, cocycle: Sequence[int]) -> tuple[int, ...]:
        return self.basis.coordinates(cocycle)

    def cocycle(self, coords: Sequence[int]) -> list[int]:
        return self.basis.element(coords)

    def class_order(self, coords: Sequence[int]) -> int:
        return self.basis.class_order(coords)

    def cardinality(self) -> int | None:
        if any(o == 0 for o in self.orders):
            return None
        return math.prod(self.orders)

    def classes(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(o) for o in self.orders))


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    coords: tuple[int, ...]


_GROUP_CACHE: "weakref.WeakKeyDictionary[FiniteGroup, dict]" = weakref.WeakKeyDictionary()


def cohomology_group(G: FiniteGroup, coeffs=INTEGRAL, n: int = 0, method: str = "morse",
                     budget: int = DEFAULT_BUDGET, bit_bound: int = DEFAULT_BIT_BOUND) -> CohomologyGroup:
    """H^n(G; coeffs) with explicit cocycle basis (cached per group object).

    ``bit_bound`` caps entry size during elimination; it can only abort a
    computation, never change its result, so it is not part of the cache key.
    """
    coeffs = _as_coeffs(coeffs)
    if n < 0:
        raise ValueError("degree must be non-negative")
    key = (coeffs.modulus, n, method)
    with _REDUCTIONS_LOCK:
        cache = _GROUP_CACHE.setdefault(G, {})
        if key in cache:
            return cache[key]
    check_budget(G, n + 1, budget)
    if method == "morse":
        red = morse_reduction(G)
        d_prev = red.coboundary(n - 1) if n else SparseIntMatrix(1, 0)
        d_next = red.coboundary(n)
    elif method == "bar":
        d_prev = bar_coboundary(G, n - 1) if n else SparseIntMatrix(1, 0)
        d_next = bar_coboundary(G, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    basis = homology_basis(d_prev, d_next, coeffs.modulus, bit_bound)
    result = CohomologyGroup(G.descriptor, coeffs, n, basis)
    with _REDUCTIONS_LOCK:
        _GROUP_CACHE.setdefault(G, {})[key] = result
    return result


def cohomology(G: FiniteGroup, coeffs=INTEGRAL, n: int = 0, method: str = "morse",
               budget: int = DEFAULT_BUDGET, bit_bound: int = DEFAULT_BIT_BOUND) -> AbelianGroupInvariants:
    return cohomology_group(G, coeffs, n, method, budget, bit_bound).invariants


# ---------------------------------------------------------------- oracles

def cyclic_oracle(n: int, coeffs=INTEGRAL, degree: int = 0) -> AbelianGroupInvariants:
    """Closed-form cohomology of Z/n."""
    coeffs = _as_coeffs(coeffs)
    m = coeffs.modulus
    if degree < 0:
        raise ValueError("negative degree")
    if m == 0:
        if degree == 0:
            return AbelianGroupInvariants(1, ())
        return AbelianGroupInvariants.from_factors(0, [n] if degree % 2 == 0 else [])
    if degree == 0:
        return AbelianGroupInvariants.from_factors(0, [m])
    return AbelianGroupInvariants.from_factors(0, [math.gcd(n, m)])


def _tensor(A: AbelianGroupInvariants, B: AbelianGroupInvariants) -> list[int]:
    out = []
    for a in [0] * A.free_rank + list(A.torsion):
        for b in [0] * B.free_rank + list(B.torsion):
            out.append(math.gcd(a, b))  # gcd(0, b) = b, gcd(0, 0) = 0 (free)
    return out


def _tor(A: AbelianGroupInvariants, B: AbelianGroupInvariants) -> list[int]:
    return [math.gcd(a, b) for a in A.torsion for b in B.torsion]


def kunneth_oracle(orders: Sequence[int], degree: int, max_degree: int | None = None) -> AbelianGroupInvariants:
    """Integral cohomology of Z/n1 x ... x Z/nk from the Künneth formula."""
    if not orders:
        raise ValueError("need at least one cyclic factor")
    top = degree + 1 if max_degree is None else max_degree
    current = [cyclic_oracle(orders[0], INTEGRAL, d) for d in range(top + 1)]
    for n in orders[1:]:
        other = [cyclic_oracle(n, INTEGRAL, d) for d in range(top + 1)]
        nxt = []
        for d in range(top + 1):
            factors = []
            for i in range(d + 1):
                factors += _tensor(current[i], other[d - i])
            for i in range(d + 2):
                if d + 1 - i <= top and i <= top:
                    factors += _tor(current[i], other[d + 1 - i])
            nxt.append(AbelianGroupInvariants.from_factors(0, factors))
        current = nxt
    return current[degree]


def uct_mod(integral: Sequence[AbelianGroupInvariants], m: int, degree: int) -> AbelianGroupInvariants:
    """H^n(-; Z/m) from integral cohomology: H^n (x) Z/m + Tor(H^(n+1), Z/m)."""
    zm = AbelianGroupInvariants(0, (m,))
    factors = _tensor(integral[degree], zm) + _tor(integral[degree + 1], zm)
    return AbelianGroupInvariants.from_factors(0, [f for f in factors])


# ------------------------------------------------ restriction & Bockstein

@dataclass
class CohomologyMap:
    """A homomorphism between computed cohomology groups.

    ``matrix[i][j]`` is coordinate i of the image of source generator j.
    """

    source: CohomologyGroup
    target: CohomologyGroup
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, coords: Sequence[int]) -> tuple[int, ...]:
        out = []
        for i, o in enumerate(self.target.orders):
            v = sum(self.matrix[i][j] * c for j, c in enumerate(coords))
            out.append(v % o if o else v)
        return tuple(out)

    def image_generators(self) -> list[tuple[int, ...]]:
        return [tuple(self.matrix[i][j] for i in range(len(self.target.orders)))
                for j in range(len(self.source.orders))]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def image_order(self) -> int:
        """Order of the image subgroup (finite targets only)."""
        return len(span_of(self.image_generators(), self.target.orders))


def span_of(gens: Sequence[Sequence[int]], orders: Sequence[int]) -> set[tuple[int, ...]]:
    if any(o == 0 for o in orders):
        raise ValueError("span enumeration needs a finite group")
    zero = tuple(0 for _ in orders)
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple((a + b) % o for a, b, o in zip(x, g, orders))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _map_matrix(source: CohomologyGroup, target: CohomologyGroup, cochain_map) -> CohomologyMap:
    cols = []
    for j in range(len(source.orders)):
        coords = [0] * len(source.orders)
        coords[j] = 1
        image = cochain_map(source.cocycle(coords))
        cols.append(target.coordinates(image))
    rows = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(len(target.orders)))
    return CohomologyMap(source, target, rows)


@dataclass
class SubgroupData:
    group: FiniteGroup
    embedding: tuple[int, ...]


_SUBGROUPS: "weakref.WeakKeyDictionary[FiniteGroup, dict]" = weakref.WeakKeyDictionary()


def subgroup_data(G: FiniteGroup, H: Subgroup) -> SubgroupData:
    with _REDUCTIONS_LOCK:
        cache = _SUBGROUPS.setdefault(G, {})
        if H.members not in cache:
            if H.parent != G.descriptor:
                raise ValueError("subgroup belongs to a different group")
            if not set(H.members) <= set(range(G.order)):
                raise ValueError("subgroup members are not elements of G")
            if H.order == G.order:
                # same object, so bases (and the matching) agree exactly
                cache[H.members] = SubgroupData(G, tuple(range(G.order)))
            else:
                grp, emb = subgroup_as_group(G, H)
                cache[H.members] = SubgroupData(grp, emb)
        return cache[H.members]


def restriction_cochain_matrix(G: FiniteGroup, H: Subgroup, n: int) -> SparseIntMatrix:
    """Cochain-level restriction on reduced complexes (rows: critical n-cells of H)."""
    sub = subgroup_data(G, H)
    red_g = morse_reduction(G)
    red_h = morse_reduction(sub.group)
    emb = sub.embedding
    data: dict[int, dict[int, int]] = {}
    for i, chain in enumerate(red_h.include(n)):
        mapped = {tuple(emb[x] for x in cell): v for cell, v in chain.items()}
        row = red_g.flow_chain(mapped)
        if row:
            data[i] = row
    return SparseIntMatrix(len(red_h.critical_cells(n)), len(red_g.critical_cells(n)), data)


def restriction(G: FiniteGroup, H: Subgroup, coeffs=INTEGRAL, n: int = 0) -> CohomologyMap:
    """Restriction H^n(G) -> H^n(H) in the computed bases."""
    coeffs = _as_coeffs(coeffs)
    sub = subgroup_data(G, H)
    src = cohomology_group(G, coeffs, n)
    tgt = cohomology_group(sub.group, coeffs, n)
    R = restriction_cochain_matrix(G, H, n)
    m = coeffs.modulus

    def apply(vec):
        out = R.apply(vec)
        return [v % m for v in out] if m else out

    return _map_matrix(src, tgt, apply)


def bockstein(G: FiniteGroup, m: int, n: int) -> CohomologyMap:
    """Connecting map H^n(G; Z/m) -> H^(n+1)(G; Z) of 0 -> Z -m-> Z -> Z/m -> 0."""
    src = cohomology_group(G, modular(m), n)
    tgt = cohomology_group(G, INTEGRAL, n + 1)
    delta = morse_reduction(G).coboundary(n)

    def apply(vec):
        lifted = [v % m for v in vec]
        image = delta.apply(lifted)
        if any(v % m for v in image):
            raise InvariantViolation("coboundary of a mod-m cocycle lift is not divisible by m")
        return [v // m for v in image]

    return _map_matrix(src, tgt, apply)


def reduction_map(G: FiniteGroup, m: int, n: int) -> CohomologyMap:
    """H^n(G; Z) -> H^n(G; Z/m) induced by reducing cocycles."""
    src = cohomology_group(G, INTEGRAL, n)
    tgt = cohomology_group(G, modular(m), n)
    return _map_matrix(src, tgt, lambda vec: [v % m for v in vec])


def multiply_map(G: FiniteGroup, coeffs, n: int, k: int) -> CohomologyMap:
    grp = cohomology_group(G, coeffs, n)
    return _map_matrix(grp, grp, lambda vec: [k * v for v in vec])


# ------------------------------------------------ generator restriction

@dataclass
class RestrictingClasses:
    degree: int
    classes: list[tuple[CohomologyClass, int]]
    enumerated: int
    partial: bool


def generator_restricting_classes(G: FiniteGroup, C: Subgroup, degree: int,
                                  cap: int = ENUMERATION_CAP) -> RestrictingClasses:
    """Every class of H^degree(G) whose restriction generates H^degree(C) = Z/|C|.

    Enumerates the whole group when it has at most ``cap`` elements;
    otherwise walks the subgroup generated by small multiples of the basis
    classes up to ``cap`` elements and flags the result as partial.
    """
    if degree % 2 or degree <= 0:
        raise ValueError("degree must be positive and even")
    n = C.order
    res = restriction(G, C, INTEGRAL, degree)
    tgt = res.target
    if tgt.orders != (n,) and n > 1:
        raise InvariantViolation(f"H^{degree} of a cyclic group of order {n} is {tgt.invariants}")
    src = res.source
    card = src.cardinality()
    if card is None:
        raise InvariantViolation("free part in positive-degree cohomology of a finite group")
    partial = card > cap
    found = []
    count = 0
    for coords in src.classes():
        if count >= cap:
            break
        count += 1
        img = res(coords)
        img_order = tgt.class_order(img) if tgt.orders else 1
        if img_order == n:
            found.append((CohomologyClass(degree, tuple(coords)), src.class_order(coords)))
    return RestrictingClasses(degree, found, count, partial)
