"""Smith normal form over the integers and cokernel invariants.

Python ints give arbitrary precision for free, which matters here: entries of
the transforms blow up quickly even for 6x6 inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = [[int(x) for x in row] for row in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged matrix")
        return cls(len(data), cols, tuple(x for r in data for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a, b = self.tolist(), other.tolist()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)


def as_matrix(a) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    return IntMatrix.from_rows(a)


def determinant(a) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = as_matrix(a)
    if not a.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ A @ V == S`` and S in Smith normal form.

    U and V are unimodular.  The diagonal of S is non-negative, each entry
    divides the next, and zeros come last.  The pivot is always the entry of
    smallest non-zero magnitude in the remaining block.
    """
    a = as_matrix(a)
    r, c = a.rows, a.cols
    s = a.tolist()
    u = IntMatrix.identity(r).tolist()
    v = IntMatrix.identity(c).tolist()

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        if q:
            s[dst] = [x - q * y for x, y in zip(s[dst], s[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        if q:
            for row in s:
                row[dst] -= q * row[src]
            for row in v:
                row[dst] -= q * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = s[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = s[t][t]
            done = True
            for i in range(t + 1, r):
                q = s[i][t] // p
                add_row(i, t, q)
                if s[i][t]:
                    done = False
            for j in range(t + 1, c):
                q = s[t][j] // p
                add_col(j, t, q)
                if s[t][j]:
                    done = False
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if s[i][j] % p), None)
            if bad is None:
                break
            # fold the offending row into row t; next pass reduces further
            add_row(t, bad[0], -1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]

    return (IntMatrix.from_rows(u, r), IntMatrix.from_rows(s, c), IntMatrix.from_rows(v, c))


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"torsion coefficients must be >= 2: {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"torsion must form a divisibility chain: {self.torsion}")

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other: "AbelianInvariants") -> "AbelianInvariants":
        return direct_sum([self, other])

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def invariants_from_orders(orders: Sequence[int]) -> AbelianInvariants:
    """Normalize a list of cyclic orders (0 meaning infinite) into invariant factors."""
    free = sum(1 for d in orders if d == 0)
    finite = [abs(d) for d in orders if d not in (0, 1, -1)]
    if not finite:
        return AbelianInvariants(free, ())
    _, s, _ = smith_normal_form(IntMatrix.from_rows(
        [[finite[i] if i == j else 0 for j in range(len(finite))] for i in range(len(finite))]))
    return AbelianInvariants(free, tuple(d for d in s.diagonal() if d > 1))


def direct_sum(groups: Iterable[AbelianInvariants]) -> AbelianInvariants:
    orders: list[int] = []
    for g in groups:
        orders.extend([0] * g.free_rank)
        orders.extend(g.torsion)
    return invariants_from_orders(orders)


def cokernel_invariants(a) -> AbelianInvariants:
    """Invariants of Z^n / A Z^n for a square integer matrix A."""
    a = as_matrix(a)
    if not a.is_square:
        raise ValueError(f"cokernel_invariants needs a square matrix, got {a.rows}x{a.cols}")
    _, s, _ = smith_normal_form(a)
    diag = s.diagonal()
    return AbelianInvariants(sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))
