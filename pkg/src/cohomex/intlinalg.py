"""Exact integer linear algebra: sparse matrices, Smith normal form, homology.

Entries are Python ints throughout, so nothing silently overflows; the
only guard is an explicit bit bound on intermediate entries.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvariantViolation, ParseError, PrecisionError, ResourceError

DEFAULT_BIT_BOUND = 4096


# ----------------------------------------------------------- abelian groups

def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_cyclic(orders: Iterable[int]) -> tuple[int, ...]:
    """Canonical invariant-factor chain of a direct sum of finite cyclic groups."""
    by_prime: dict[int, list[int]] = defaultdict(list)
    for n in orders:
        if n < 0:
            raise ValueError("cyclic orders must be non-negative")
        if n == 0:
            raise ValueError("use free_rank for infinite cyclic summands")
        for p, e in _factorize(n).items():
            by_prime[p].append(p ** e)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for powers in by_prime.values():
        powers.sort()
        for i, q in enumerate(powers):
            chain[length - len(powers) + i] *= q
    return tuple(chain)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """``Z^free_rank + Z/t1 + ... + Z/tk`` with t1 | t2 | ... | tk, all > 1."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = self.torsion
        if any(d <= 1 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a canonical invariant-factor chain")

    @classmethod
    def from_factors(cls, free_rank: int = 0, factors: Iterable[int] = ()) -> "AbelianGroupInvariants":
        """Canonicalize arbitrary cyclic orders (0 counts as a free summand)."""
        factors = list(factors)
        free = free_rank + sum(1 for d in factors if d == 0)
        return cls(free, invariant_factors_from_cyclic(abs(d) for d in factors if d))

    @property
    def exponent(self) -> int:
        return self.torsion[-1] if self.torsion else 1

    @property
    def has_free_part(self) -> bool:
        return self.free_rank > 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroupInvariants":
        return cls(data["free_rank"], tuple(data["torsion"]))


def exponent_of(inv: AbelianGroupInvariants) -> tuple[int, bool]:
    """(exponent of the torsion part, free-part-present flag)."""
    return inv.exponent, inv.has_free_part


# ---------------------------------------------------------- sparse matrices

class SparseIntMatrix:
    """Immutable sparse integer matrix stored row-wise as ``{row: {col: value}}``."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: dict[int, dict[int, int]] | None = None):
        self.rows = rows
        self.cols = cols
        self._data = data if data is not None else {}

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]],
                      accumulate: bool = False) -> "SparseIntMatrix":
        data: dict[int, dict[int, int]] = {}
        for r, c, v in triplets:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            row = data.setdefault(r, {})
            if c in row and not accumulate:
                raise ValueError(f"duplicate entry ({r}, {c})")
            row[c] = row.get(c, 0) + int(v)
        return cls(rows, cols, _prune(data))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        data = {}
        for i, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            nz = {j: int(v) for j, v in enumerate(row) if v}
            if nz:
                data[i] = nz
        return cls(rows, cols, data)

    @classmethod
    def from_rows(cls, rows: int, cols: int, data: dict[int, dict[int, int]]) -> "SparseIntMatrix":
        """Wrap a row dictionary (copied, zeros dropped)."""
        return cls(rows, cols, _prune({r: dict(v) for r, v in data.items()}))

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls(rows, cols, {})

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def row(self, i: int) -> dict[int, int]:
        return self._data.get(i, {})

    def row_dict(self) -> dict[int, dict[int, int]]:
        return {r: dict(v) for r, v in self._data.items()}

    def triplets(self) -> list[tuple[int, int, int]]:
        return sorted((r, c, v) for r, row in self._data.items() for c, v in row.items())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self._data.get(r, {}).get(c, 0)

    def transpose(self) -> "SparseIntMatrix":
        data: dict[int, dict[int, int]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseIntMatrix(self.cols, self.rows, data)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        data: dict[int, dict[int, int]] = {}
        for r, row in self._data.items():
            acc: dict[int, int] = defaultdict(int)
            for k, a in row.items():
                for c, b in other._data.get(k, {}).items():
                    acc[c] += a * b
            nz = {c: v for c, v in acc.items() if v}
            if nz:
                data[r] = nz
        return SparseIntMatrix(self.rows, other.cols, data)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix-vector product."""
        out = [0] * self.rows
        for r, row in self._data.items():
            out[r] = sum(v * vec[c] for c, v in row.items())
        return out

    def mod(self, m: int) -> "SparseIntMatrix":
        data = {}
        for r, row in self._data.items():
            nz = {c: v % m for c, v in row.items() if v % m}
            if nz:
                data[r] = nz
        return SparseIntMatrix(self.rows, self.cols, data)

    def is_zero(self) -> bool:
        return not self._data

    def __eq__(self, other):
        return (isinstance(other, SparseIntMatrix) and self.shape == other.shape
                and self._data == other._data)

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseIntMatrix":
        """Entry (r, c) moves to (row_perm[r], col_perm[c])."""
        return SparseIntMatrix(self.rows, self.cols, {
            row_perm[r]: {col_perm[c]: v for c, v in row.items()} for r, row in self._data.items()})


def _prune(data):
    out = {}
    for r, row in data.items():
        nz = {c: v for c, v in row.items() if v}
        if nz:
            out[r] = nz
    return out


def format_matrix(A: SparseIntMatrix) -> str:
    lines = [f"{A.rows} {A.cols}"]
    lines += [f"{r} {c} {v}" for r, c, v in A.triplets()]
    return "\n".join(lines) + "\n"


def format_complex(mats: Sequence[SparseIntMatrix]) -> str:
    return "\n".join(format_matrix(A) for A in mats)


def parse_matrices(text: str) -> list[SparseIntMatrix]:
    """Parse one or more matrices in triplet format.

    Each block is a ``rows cols`` header followed by ``r c v`` lines;
    blocks are separated by blank lines and ``#`` starts a comment.
    """
    blocks: list[list[str]] = [[]]
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        blocks[-1].append(line)
    mats = []
    for block in blocks:
        if not block:
            continue
        try:
            head = [int(t) for t in block[0].split()]
            if len(head) != 2 or min(head) < 0:
                raise ValueError
            trips = []
            for line in block[1:]:
                parts = [int(t) for t in line.split()]
                if len(parts) != 3:
                    raise ValueError
                trips.append(tuple(parts))
            mats.append(SparseIntMatrix.from_triplets(head[0], head[1], trips))
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed matrix block starting {block[0]!r}: {exc}") from exc
    return mats


# ------------------------------------------------------- Smith normal form

@dataclass
class SnfResult:
    """Invariant factors d1 | d2 | ... | dr of a matrix A.

    With transforms, ``U @ A @ V`` is the rows x cols matrix carrying the
    factors on its main diagonal, and ``U_inv``/``V_inv`` are the inverses.
    """

    factors: tuple[int, ...]
    shape: tuple[int, int]
    U: SparseIntMatrix | None = None
    V: SparseIntMatrix | None = None
    U_inv: SparseIntMatrix | None = None
    V_inv: SparseIntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    def diagonal_matrix(self) -> SparseIntMatrix:
        return SparseIntMatrix(self.shape[0], self.shape[1],
                               {i: {i: d} for i, d in enumerate(self.factors)})


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


class _Eliminator:
    """Sparse elimination state: rows/cols of the working matrix plus the
    (optional) accumulated transforms.

    Transform storage: ``U`` row-wise, ``U_inv`` column-wise, ``V``
    column-wise, ``V_inv`` row-wise, so every elementary operation touches
    one line of each.
    """

    def __init__(self, A: SparseIntMatrix, track: bool, bit_bound: int):
        self.nrows, self.ncols = A.shape
        self.rows: dict[int, dict[int, int]] = A.row_dict()
        self.cols: dict[int, set[int]] = defaultdict(set)
        for r, row in self.rows.items():
            for c in row:
                self.cols[c].add(r)
        self.track = track
        self.bit_bound = bit_bound
        if track:
            self.U = {i: {i: 1} for i in range(self.nrows)}
            self.Uinv = {i: {i: 1} for i in range(self.nrows)}
            self.V = {j: {j: 1} for j in range(self.ncols)}
            self.Vinv = {j: {j: 1} for j in range(self.ncols)}

    # -- elementary operations -------------------------------------------
    @staticmethod
    def _axpy(target: dict[int, int], q: int, src: dict[int, int]) -> None:
        for k, v in src.items():
            nv = target.get(k, 0) + q * v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)

    def _check_size(self, v: int) -> None:
        if v.bit_length() > self.bit_bound:
            raise ResourceError(
                f"SNF entry grew to {v.bit_length()} bits (bound {self.bit_bound})")

    def row_axpy(self, k: int, q: int, i: int) -> None:
        """row_k += q * row_i"""
        rk = self.rows.setdefault(k, {})
        for c, v in self.rows.get(i, {}).items():
            nv = rk.get(c, 0) + q * v
            if nv:
                if c not in rk:
                    self.cols[c].add(k)
                rk[c] = nv
                self._check_size(nv)
            else:
                del rk[c]
                self.cols[c].discard(k)
        if not rk:
            del self.rows[k]
        if self.track:
            self._axpy(self.U[k], q, self.U[i])
            self._axpy(self.Uinv[i], -q, self.Uinv[k])

    def col_axpy(self, l: int, q: int, j: int) -> None:
        """col_l += q * col_j"""
        for r in list(self.cols.get(j, ())):
            row = self.rows[r]
            nv = row.get(l, 0) + q * row[j]
            if nv:
                if l not in row:
                    self.cols[l].add(r)
                row[l] = nv
                self._check_size(nv)
            else:
                del row[l]
                self.cols[l].discard(r)
        if self.track:
            self._axpy(self.V[l], q, self.V[j])
            self._axpy(self.Vinv[j], -q, self.Vinv[l])

    def row_mix(self, i: int, k: int, a: int, b: int, c: int, d: int) -> None:
        """(row_i, row_k) <- (a row_i + b row_k, c row_i + d row_k), ad - bc = 1."""
        ri, rk = self.rows.get(i, {}), self.rows.get(k, {})
        new_i, new_k = {}, {}
        for col in set(ri) | set(rk):
            x, y = ri.get(col, 0), rk.get(col, 0)
            u, w = a * x + b * y, c * x + d * y
            if u:
                new_i[col] = u
                self._check_size(u)
            if w:
                new_k[col] = w
                self._check_size(w)
            s = self.cols[col]
            s.discard(i)
            s.discard(k)
            if u:
                s.add(i)
            if w:
                s.add(k)
        for idx, new in ((i, new_i), (k, new_k)):
            if new:
                self.rows[idx] = new
            else:
                self.rows.pop(idx, None)
        if self.track:
            self.U[i], self.U[k] = _mix(self.U[i], self.U[k], a, b, c, d)
            # inverse acts on columns i, k of U_inv by [[d, -b], [-c, a]]
            self.Uinv[i], self.Uinv[k] = _mix(self.Uinv[i], self.Uinv[k], d, -c, -b, a)

    def col_mix(self, j: int, l: int, a: int, b: int, c: int, d: int) -> None:
        """(col_j, col_l) <- (a col_j + b col_l, c col_j + d col_l), ad - bc = 1."""
        touched = set(self.cols.get(j, ())) | set(self.cols.get(l, ()))
        for r in touched:
            row = self.rows[r]
            x, y = row.get(j, 0), row.get(l, 0)
            u, w = a * x + b * y, c * x + d * y
            for col, val in ((j, u), (l, w)):
                if val:
                    row[col] = val
                    self.cols[col].add(r)
                    self._check_size(val)
                else:
                    row.pop(col, None)
                    self.cols[col].discard(r)
            if not row:
                del self.rows[r]
        if self.track:
            self.V[j], self.V[l] = _mix(self.V[j], self.V[l], a, b, c, d)
            self.Vinv[j], self.Vinv[l] = _mix(self.Vinv[j], self.Vinv[l], d, -c, -b, a)

    def negate_row(self, i: int) -> None:
        row = self.rows.get(i, {})
        for c in row:
            row[c] = -row[c]
        if self.track:
            self.U[i] = {k: -v for k, v in self.U[i].items()}
            self.Uinv[i] = {k: -v for k, v in self.Uinv[i].items()}

    # -- pivoting --------------------------------------------------------
    def choose_pivot(self, active_cols: set[int], scan: int = 12) -> tuple[int, int] | None:
        """Unit entries first, then smallest magnitude; ties by Markowitz cost.

        Columns are visited sparsest first; once a unit pivot is known only
        ``scan`` further columns are examined.
        """
        best, best_key = None, None
        order = sorted((len(self.cols[c]), c) for c in active_cols if self.cols.get(c))
        budget = None
        for count, c in order:
            if budget is not None:
                budget -= 1
                if budget < 0:
                    break
            for r in self.cols[c]:
                v = abs(self.rows[r][c])
                cost = (len(self.rows[r]) - 1) * (count - 1)
                key = (0, cost, r, c) if v == 1 else (1, v, cost, r, c)
                if best_key is None or key < best_key:
                    best_key, best = key, (r, c)
            if best_key is not None and best_key[0] == 0:
                if best_key[1] == 0:
                    break
                if budget is None:
                    budget = scan
        return best

    def eliminate_pivot(self, i: int, j: int) -> int:
        """Clear row i and column j except the pivot; return the (positive) pivot.

        Euclidean steps: reduce the whole column (then row) by nearest
        quotients and swap the smallest remainder into the pivot position.
        Extended-gcd combinations need fewer steps but let the rest of the
        matrix grow by thousands of bits even on small random inputs.
        """
        while True:
            a = self.rows[i][j]
            for k in list(self.cols[j]):
                q = _nearest_quotient(self.rows[k][j], a) if k != i else 0
                if q:
                    self.row_axpy(k, -q, i)
            left = [k for k in self.cols[j] if k != i]
            if left:
                k = min(left, key=lambda k: (abs(self.rows[k][j]), k))
                self.row_mix(i, k, 0, 1, -1, 0)
                continue
            a = self.rows[i][j]
            for l in list(self.rows[i]):
                q = _nearest_quotient(self.rows[i][l], a) if l != j else 0
                if q:
                    self.col_axpy(l, -q, j)
            left = [l for l in self.rows[i] if l != j]
            if not left:
                break
            l = min(left, key=lambda l: (abs(self.rows[i][l]), l))
            self.col_mix(j, l, 0, 1, -1, 0)
        if self.rows[i][j] < 0:
            self.negate_row(i)
        return self.rows[i][j]


def _nearest_quotient(b: int, a: int) -> int:
    """q with |b - q a| <= |a| / 2."""
    q, r = divmod(b, a)
    if 2 * abs(r) > abs(a):
        q += 1
    return q


def _mix(p: dict[int, int], q: dict[int, int], a, b, c, d):
    new_p, new_q = {}, {}
    for k in set(p) | set(q):
        x, y = p.get(k, 0), q.get(k, 0)
        u, w = a * x + b * y, c * x + d * y
        if u:
            new_p[k] = u
        if w:
            new_q[k] = w
    return new_p, new_q


def smith_normal_form(A: SparseIntMatrix, want_transforms: bool = False,
                      bit_bound: int = DEFAULT_BIT_BOUND) -> SnfResult:
    """Exact Smith normal form over the integers."""
    el = _Eliminator(A, want_transforms, bit_bound)
    active_cols = set(el.cols)
    pivots: list[tuple[int, int, int]] = []
    while True:
        piv = el.choose_pivot(active_cols)
        if piv is None:
            break
        i, j = piv
        d = el.eliminate_pivot(i, j)
        pivots.append((i, j, d))
        del el.rows[i]
        el.cols[j].discard(i)
        active_cols.discard(j)

    # diagonal now sits at the pivot positions; fix the divisibility chain
    vals = [d for _, _, d in pivots]
    nonunit = [t for t, d in enumerate(vals) if d != 1]
    for a_pos in range(len(nonunit)):
        for b_pos in range(a_pos + 1, len(nonunit)):
            s, t = nonunit[a_pos], nonunit[b_pos]
            a, b = vals[s], vals[t]
            if b % a == 0:
                continue
            x, y, g = _xgcd(a, b)
            vals[s], vals[t] = g, a * b // g
            if want_transforms:
                (i1, j1, _), (i2, j2, _) = pivots[s], pivots[t]
                # P diag(a,b) Q = diag(g, ab/g) with
                # P = [[x, y], [-b/g, a/g]], Q = [[1, -y b/g], [1, x a/g]]
                el.row_mix(i1, i2, x, y, -b // g, a // g)
                el.col_mix(j1, j2, 1, 1, -y * b // g, x * a // g)
    order = sorted(range(len(pivots)), key=lambda t: (vals[t], t))
    factors = tuple(vals[t] for t in order)
    if not want_transforms:
        return SnfResult(factors, A.shape)

    row_perm = [pivots[t][0] for t in order]
    col_perm = [pivots[t][1] for t in order]
    used_r, used_c = set(row_perm), set(col_perm)
    row_perm += [r for r in range(A.rows) if r not in used_r]
    col_perm += [c for c in range(A.cols) if c not in used_c]
    U = SparseIntMatrix(A.rows, A.rows, {n: el.U[o] for n, o in enumerate(row_perm) if el.U[o]})
    Uinv = {}
    for n, o in enumerate(row_perm):
        for r, v in el.Uinv[o].items():
            Uinv.setdefault(r, {})[n] = v
    V = {}
    for n, o in enumerate(col_perm):
        for r, v in el.V[o].items():
            V.setdefault(r, {})[n] = v
    Vinv = SparseIntMatrix(A.cols, A.cols, {n: el.Vinv[o] for n, o in enumerate(col_perm) if el.Vinv[o]})
    return SnfResult(factors, A.shape, U, SparseIntMatrix(A.cols, A.cols, V),
                     SparseIntMatrix(A.rows, A.rows, Uinv), Vinv)


def snf_local(A: SparseIntMatrix, p: int, k: int, rank: int | None = None) -> tuple[int, ...]:
    """p-power parts of the invariant factors of A, by elimination modulo p^k.

    Pivots are chosen with minimal p-adic valuation, so each step is exact
    over Z/p^k.  Factors whose p-part reaches p^k are indistinguishable
    from zero; pass the true ``rank`` to have that detected.
    """
    q = p ** k
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = defaultdict(set)
    for r, row in A.row_dict().items():
        nz = {c: v % q for c, v in row.items() if v % q}
        if nz:
            rows[r] = nz
            for c in nz:
                cols[c].add(r)

    def val(v: int) -> int:
        e = 0
        while v % p == 0:
            v //= p
            e += 1
        return e

    out = []
    while rows:
        best, best_key = None, None
        for r, row in rows.items():
            for c, v in row.items():
                key = (val(v), (len(row) - 1) * (len(cols[c]) - 1), r, c)
                if best_key is None or key < best_key:
                    best_key, best = key, (r, c)
                    if key[0] == 0 and key[1] == 0:
                        break
            if best_key is not None and best_key[:2] == (0, 0):
                break
        i, j = best
        e = best_key[0]
        pe = p ** e
        a = rows[i][j]
        unit_inv = pow(a // pe, -1, q)
        prow = rows.pop(i)
        for c in prow:
            cols[c].discard(i)
        for r in list(cols[j]):
            row = rows[r]
            t = (row[j] // pe) * unit_inv % q
            for c, v in prow.items():
                nv = (row.get(c, 0) - t * v) % q
                if nv:
                    if c not in row:
                        cols[c].add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    cols[c].discard(r)
            if not row:
                del rows[r]
        # column ops are implied: the pivot row is removed and every other
        # entry in it is a multiple of the pivot, so it contributes nothing
        out.append(pe)
    out.sort()
    if rank is not None and len(out) != rank:
        raise PrecisionError(
            f"local elimination at {p}^{k} found rank {len(out)}, expected {rank}")
    return tuple(out)


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


# ---------------------------------------------------------------- homology

@dataclass
class HomologyBasis:
    """``ker(dB) / im(dA)`` (over Z, or over Z/m when ``modulus`` > 0)
    in an SNF-adapted basis.

    ``orders[j]`` is the order of generator j (0 = infinite) and
    ``generators[j]`` a representing cycle in the ambient coordinates.
    """

    invariants: AbelianGroupInvariants
    orders: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    modulus: int
    ambient_dim: int
    _V_inv: SparseIntMatrix = field(repr=False)
    _positions: tuple[int, ...] = field(repr=False)  # ambient SNF coordinate of each L-basis vector
    _scales: tuple[int, ...] = field(repr=False)
    _P: SparseIntMatrix = field(repr=False)
    _kept: tuple[int, ...] = field(repr=False)  # rows of P giving the nontrivial generators
    _dB: SparseIntMatrix = field(repr=False)

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a cycle, reduced modulo the generator orders."""
        if len(x) != self.ambient_dim:
            raise ValueError("vector has the wrong length")
        m = self.modulus
        if any((v % m if m else v) for v in self._dB.apply(x)):
            raise InvariantViolation("vector is not a cycle")
        y = self._V_inv.apply(x)
        z = []
        for pos, t in zip(self._positions, self._scales):
            v = y[pos] % m if m else y[pos]
            if v % t:
                raise InvariantViolation("vector is not a cycle")
            z.append(v // t)
        w = self._P.apply(z)
        out = []
        for j, o in zip(self._kept, self.orders):
            out.append(w[j] % o if o else w[j])
        return tuple(out)

    def element(self, coords: Sequence[int]) -> list[int]:
        """A cycle representing the class with the given coordinates."""
        vec = [0] * self.ambient_dim
        for c, g in zip(coords, self.generators):
            if c:
                for i, v in enumerate(g):
                    if v:
                        vec[i] += c * v
        if self.modulus:
            vec = [v % self.modulus for v in vec]
        return vec

    def class_order(self, coords: Sequence[int]) -> int:
        """Order of a class (0 if infinite)."""
        order = 1
        for c, o in zip(coords, self.orders):
            if o == 0:
                if c:
                    return 0
                continue
            order = math.lcm(order, o // math.gcd(c, o))
        return order

    def is_cycle(self, x: Sequence[int]) -> bool:
        try:
            self.coordinates(x)
        except InvariantViolation:
            return False
        return True


def homology_basis(dA: SparseIntMatrix, dB: SparseIntMatrix, modulus: int = 0,
                   bit_bound: int = DEFAULT_BIT_BOUND) -> HomologyBasis:
    """Homology at the middle of ``C' --dA--> C --dB--> C''``.

    ``dB @ dA`` must vanish over the integers.  With ``modulus`` m > 0
    the homology of the complex tensored with Z/m is computed instead.
    """
    n = dB.cols
    if dA.rows != n:
        raise ValueError(f"incompatible shapes {dA.shape} and {dB.shape}")
    if not (dB @ dA).is_zero():
        raise InvariantViolation("composition of consecutive differentials is nonzero")
    m = modulus
    snf = smith_normal_form(dB, want_transforms=True, bit_bound=bit_bound)
    r = snf.rank
    positions, scales, rel_diag = [], [], []
    for i in range(n):
        if i < r:
            if not m:
                continue
            g = math.gcd(snf.factors[i], m)
            if g == 1:
                continue
            positions.append(i)
            scales.append(m // g)
            rel_diag.append(g)
        else:
            positions.append(i)
            scales.append(1)
            rel_diag.append(m)
    k = len(positions)
    img = snf.V_inv @ dA  # rows < r vanish since dB dA = 0
    index = {pos: t for t, pos in enumerate(positions)}
    rel: dict[int, dict[int, int]] = {}
    for row_idx, row in img.row_dict().items():
        if row_idx < r:
            raise InvariantViolation("image not contained in kernel")
        t = index[row_idx]
        s = scales[t]
        for c, v in row.items():
            if v % s:
                raise InvariantViolation("image not contained in kernel")
            rel.setdefault(t, {})[c] = v // s
    ncols_rel = dA.cols
    if m:
        for t, g in enumerate(rel_diag):
            rel.setdefault(t, {})[ncols_rel + t] = g
        ncols_rel += k
    R = SparseIntMatrix.from_rows(k, ncols_rel, rel)
    rs = smith_normal_form(R, want_transforms=True, bit_bound=bit_bound)
    orders_all = list(rs.factors) + [0] * (k - rs.rank)
    kept = tuple(j for j, o in enumerate(orders_all) if o != 1)
    orders = tuple(orders_all[j] for j in kept)
    Pinv = rs.U_inv.transpose().row_dict()  # column j of P^-1 as a dict
    V = snf.V.transpose().row_dict()  # column i of V
    gens = []
    for j in kept:
        vec = [0] * n
        for t, coeff in Pinv.get(j, {}).items():
            pos, s = positions[t], scales[t]
            for amb, v in V.get(pos, {}).items():
                vec[amb] += coeff * s * v
        if m:
            vec = [v % m for v in vec]
        gens.append(tuple(vec))
    inv = AbelianGroupInvariants.from_factors(0, orders)
    return HomologyBasis(inv, orders, tuple(gens), m, n, snf.V_inv, tuple(positions),
                         tuple(scales), rs.U, kept, dB)


def homology_at(dA: SparseIntMatrix, dB: SparseIntMatrix, modulus: int = 0,
                bit_bound: int = DEFAULT_BIT_BOUND) -> AbelianGroupInvariants:
    """Invariants of ``ker dB / im dA``."""
    return homology_basis(dA, dB, modulus, bit_bound).invariants
