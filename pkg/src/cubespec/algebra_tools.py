"""Exact integer linear algebra and the auxiliary group computations.

Smith Normal Form is computed over Python's arbitrary-precision integers
with both unimodular transforms, so U * M * V = D holds exactly and can
be re-multiplied in tests.  On top of it sit the abelianisation
invariants, the hyperplane-orbit growth count, and the torsion-sequence
periodicity probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence, Union

from cubespec.coeff_group import Elem, GroupParams, ParameterMismatchError, unit


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise ValueError("matrix rows must have equal length")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        return IntMatrix(
            tuple(
                tuple(
                    sum(self.entries[i][t] * other.entries[t][j] for t in range(self.cols))
                    for j in range(other.cols)
                )
                for i in range(self.rows)
            )
        )

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        n = self.rows
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for t in range(n - 1):
            if a[t][t] == 0:
                for i in range(t + 1, n):
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
                a[i][t] = 0
            prev = a[t][t]
        return sign * a[n - 1][n - 1]

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class SNFResult:
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "D": self.D.to_json(),
            "U": self.U.to_json(),
            "V": self.V.to_json(),
            "invariant_factors": list(self.invariant_factors),
        }


def smith_normal_form(M: IntMatrix) -> SNFResult:
    """Diagonalise M by unimodular row/column operations.

    Returns D = U * M * V with d1 | d2 | ... and trailing zeros; the
    nonzero diagonal entries are the invariant factors.  Pivoting is on
    the least absolute value, so the run is deterministic.
    """
    n, m = M.rows, M.cols
    a = [list(row) for row in M.entries]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        if q:
            a[i] = [x - q * y for x, y in zip(a[i], a[j])]
            u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        if q:
            for row in a:
                row[i] -= q * row[j]
            for row in v:
                row[i] -= q * row[j]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(n, m):
        pivot = None
        for i in range(t, n):
            for j in range(t, m):
                val = abs(a[i][j])
                if val and (pivot is None or val < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        while True:
            clean = True
            for i in range(n):
                if i != t and a[i][t]:
                    row_sub(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        # nonzero remainder is strictly smaller; make it the pivot
                        swap_rows(t, i)
                        clean = False
            for j in range(m):
                if j != t and a[t][j]:
                    col_sub(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        clean = False
            if not clean:
                if a[t][t] < 0:
                    negate_row(t)
                continue
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # pull the offending row up so the pivot shrinks to the gcd
            row_sub(t, offender, -1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    d = IntMatrix.from_rows(a)
    factors = tuple(a[i][i] for i in range(min(n, m)) if a[i][i] != 0)
    return SNFResult(d, IntMatrix.from_rows(u), IntMatrix.from_rows(v), factors)


def relation_vector(params: GroupParams, i: int) -> tuple[int, ...]:
    """Abelianised defining relation at height i.

    Heights divisible by k contribute the word with every generator to
    the i; other heights contribute its k-th power.  Either way the
    result is an integer multiple of (k, ..., k).
    """
    mult = i if i % params.k == 0 else i * params.k
    return (mult,) * params.m


def abelianization_invariants(params: GroupParams) -> tuple[list[int], int]:
    """Torsion invariant factors and free rank of the abelianisation.

    The abelianisation is Z^m modulo the single relation row (k, ..., k),
    see :func:`relation_vector`; its Smith form gives C_k x Z^(m-1).
    """
    row = IntMatrix.from_rows([[params.k] * params.m])
    result = smith_normal_form(row)
    torsion = [d for d in result.invariant_factors if d > 1]
    rank = params.m - len(result.invariant_factors)
    return torsion, rank


def _membership_period(params: GroupParams) -> Optional[int]:
    """Smallest n > 0 with n*e1 in the crossing-identification lattice.

    The lattice is spanned by e1+e2, e2+e3 (images of the two hyperplane
    stabilisers) and the relation vector (k, ..., k).  None means only
    n = 0 lies in the lattice.
    """
    m, k = params.m, params.k
    cols = []
    for gen in (
        [1, 1] + [0] * (m - 2),
        [0, 1, 1] + [0] * (m - 3),
        [k] * m,
    ):
        cols.append(gen)
    lattice = IntMatrix.from_rows([[cols[c][i] for c in range(3)] for i in range(m)])
    res = smith_normal_form(lattice)
    ue1 = [res.U.entries[i][0] for i in range(m)]
    rank = len(res.invariant_factors)
    if any(ue1[i] != 0 for i in range(rank, m)):
        return None
    period = 1
    for i in range(rank):
        d = res.invariant_factors[i]
        step = d // math.gcd(d, ue1[i])
        period = period * step // math.gcd(period, step)
    return period


def crossing_orbit_growth(params: GroupParams, r: int) -> int:
    """Number of stabiliser-orbit classes among powers x1^i for |i| <= r.

    Two powers are identified when their difference times e1 lies in the
    lattice of :func:`_membership_period`.  The count is computed in the
    abelianisation, so it is a lower bound on the orbit count.
    """
    if params.m < 4:
        raise ValueError("orbit growth needs m >= 4 (a coordinate off the lattice)")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    period = _membership_period(params)
    if period is None:
        return 2 * r + 1
    return min(2 * r + 1, period)


@dataclass(frozen=True)
class OrderSeq:
    start: int
    values: tuple[int, ...]

    def value_at(self, i: int) -> int:
        return self.values[i - self.start]

    def to_json(self) -> dict:
        return {"start": self.start, "values": list(self.values)}


Perm = tuple[int, ...]


def _perm_check(p: Perm, n: int) -> None:
    if len(p) != n or sorted(p) != list(range(n)):
        raise ValueError(f"not a permutation of {n} points: {p!r}")


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Composition applying q first, then p."""
    return tuple(p[x] for x in q)


def perm_order(p: Perm) -> int:
    ident = tuple(range(len(p)))
    cur, n = p, 1
    while cur != ident:
        cur = perm_mul(cur, p)
        n += 1
    return n


def perm_pow(p: Perm, n: int) -> Perm:
    result = tuple(range(len(p)))
    base = p
    n %= _perm_lcm_bound(p)
    while n:
        if n & 1:
            result = perm_mul(result, base)
        base = perm_mul(base, base)
        n >>= 1
    return result


def _perm_lcm_bound(p: Perm) -> int:
    return perm_order(p)


def order_sequence(
    images: Sequence[Union[Elem, Perm]], i_range: range
) -> OrderSeq:
    """Orders of the products image_1^i * ... * image_m^i over i_range.

    The images must live in one common finite group: either Elems with
    matching parameters or permutations of one point count.
    """
    if not images:
        raise ValueError("need at least one image")
    if i_range.step != 1:
        raise ValueError("i_range must have step 1")
    if isinstance(images[0], Elem):
        params = images[0].params
        for g in images:
            if not isinstance(g, Elem) or g.params != params:
                raise ParameterMismatchError("images come from different groups")
        values = []
        for i in i_range:
            prod = reduce(lambda x, y: x * y, (g ** i for g in images))
            values.append(prod.order())
        return OrderSeq(i_range.start, tuple(values))
    n = len(images[0])
    for p in images:
        if isinstance(p, Elem):
            raise ParameterMismatchError("images come from different groups")
        _perm_check(tuple(p), n)
    values = []
    for i in i_range:
        prod = reduce(perm_mul, (perm_pow(tuple(p), i) for p in images))
        values.append(perm_order(prod))
    return OrderSeq(i_range.start, tuple(values))


def canonical_order_sequence(params: GroupParams, i_range: range) -> OrderSeq:
    """Order sequence of the m standard generators of the coefficient group."""
    return order_sequence([unit(params, j) for j in range(1, params.m + 1)], i_range)


def is_periodic(seq: OrderSeq, max_period: int) -> Optional[int]:
    """Smallest period <= max_period valid across the whole sampled window."""
    if max_period < 1:
        raise ValueError("max_period must be positive")
    n = len(seq.values)
    if n < 3 * max_period:
        raise ValueError(
            f"window too short: {n} samples cannot witness periods up to {max_period}"
        )
    for p in range(1, max_period + 1):
        if all(seq.values[i] == seq.values[i + p] for i in range(n - p)):
            return p
    return None
