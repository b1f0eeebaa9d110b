"""Linear algebra over Z/p^k via the Howell normal form.

Z/p^k is not a domain, so row echelon form does not describe row spans
canonically.  The Howell form does: pivots are powers of p, entries above a
pivot p^e lie in [0, p^e), and every span element whose first j entries vanish
is a combination of rows whose pivots lie after column j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .padic import valuation_int
from .trace import operation

__all__ = ["HowellForm", "LinearSolution", "howell_form", "solve_linear_zpk", "matvec", "kernel_size_bruteforce"]
__operations__ = ["solve_linear_zpk"]


@dataclass(frozen=True)
class HowellForm:
    p: int
    k: int
    rows: tuple[tuple[int, ...], ...]
    pivots: tuple[tuple[int, int], ...]  # (column, exponent e with pivot entry p^e)

    @property
    def log_size(self) -> int:
        """log_p of the cardinality of the row span."""
        return sum(self.k - e for _, e in self.pivots)


@dataclass
class LinearSolution:
    p: int
    k: int
    howell: HowellForm
    kernel: list[tuple[tuple[int, ...], int]]  # (generator, a) with generator of additive order p^a
    kernel_log_size: int
    particular: tuple[int, ...] | None = None
    consistent: bool = True
    inconsistency: str | None = None
    notes: list[str] = field(default_factory=list)


def _val(x: int, p: int, k: int) -> int:
    return valuation_int(x, p, k)


def howell_form(rows: Sequence[Sequence[int]], p: int, k: int, ncols: int | None = None) -> HowellForm:
    """Howell normal form of the row span of ``rows`` in (Z/p^k)^ncols.

    Pivot choice is deterministic: leftmost column, then minimal valuation,
    then smallest representative, then lowest row index.
    """
    N = p**k
    A = [[x % N for x in r] for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    for r in A:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, len(A)):
            x = A[i][col]
            if x:
                key = (_val(x, p, k), x, i)
                if best is None or key < best:
                    best = key
        if best is None:
            continue
        e, _, i = best
        A[r], A[i] = A[i], A[r]
        row = A[r]
        u = row[col] // p**e
        uinv = pow(u, -1, N)
        row = [(x * uinv) % N for x in row]
        A[r] = row
        pe = p**e
        for j in range(r + 1, len(A)):
            x = A[j][col]
            if x:
                q = x // pe
                A[j] = [(a - q * b) % N for a, b in zip(A[j], row)]
        for j in range(r):
            x = A[j][col]
            if x >= pe:
                q = x // pe
                A[j] = [(a - q * b) % N for a, b in zip(A[j], row)]
        if e:
            extra = [(x * p ** (k - e)) % N for x in row]
            if any(extra):
                A.append(extra)
        pivots.append((col, e))
        r += 1
    out = tuple(tuple(row) for row in A[:r])
    return HowellForm(p, k, out, tuple(pivots))


def matvec(M: Sequence[Sequence[int]], v: Sequence[int], N: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) % N for row in M]


@operation(
    anchor="Kernel and particular solutions of linear systems over Z/p^k (Howell normal form)",
    tests=(
        "test_zpk.py::test_identity_kernel_trivial",
        "test_zpk.py::test_p_over_p2",
        "test_zpk.py::test_random_system_against_bruteforce",
    ),
    precision="exact over Z/p^k",
)
def solve_linear_zpk(
    M: Sequence[Sequence[int]], p: int, k: int, rhs: Sequence[int] | None = None, ncols: int | None = None
) -> LinearSolution:
    """Solve M x = rhs over Z/p^k.

    The kernel is read off the Howell form of [M^T | I]: rows with a zero
    M^T-part span {x : M x = 0}.  A particular solution comes from reducing
    rhs against the pivot rows of the M^T-part.  Inconsistent systems are
    reported in the result, not raised.
    """
    N = p**k
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if m else 0)
    aug = []
    for j in range(n):
        aug.append([M[i][j] % N for i in range(m)] + [1 if c == j else 0 for c in range(n)])
    H = howell_form(aug, p, k, m + n)
    kernel = []
    for row, (col, e) in zip(H.rows, H.pivots):
        if col >= m:
            vec = tuple(row[m:])
            order = k - min(_val(x, p, k) for x in vec if x)
            kernel.append((vec, order))
    kernel_log = sum(k - e for col, e in H.pivots if col >= m)
    howell_m = howell_form(M, p, k, n) if m else HowellForm(p, k, (), ())
    sol = LinearSolution(p, k, howell_m, kernel, kernel_log)
    if rhs is not None:
        if len(rhs) != m:
            raise ValueError("rhs length does not match the number of rows")
        b = [x % N for x in rhs]
        x = [0] * n
        for row, (col, e) in zip(H.rows, H.pivots):
            if col >= m:
                break
            c = b[col]
            if c % p**e:
                sol.consistent = False
                sol.inconsistency = f"equation {col}: residual {c} not divisible by p^{e}"
                return sol
            q = c // p**e
            if q:
                b = [(bi - q * ri) % N for bi, ri in zip(b, row[:m])]
                x = [(xi + q * si) % N for xi, si in zip(x, row[m:])]
        if any(b):
            sol.consistent = False
            first = next(i for i, v in enumerate(b) if v)
            sol.inconsistency = f"equation {first}: residual {b[first]} outside the column span"
            return sol
        sol.particular = tuple(x)
    return sol


def kernel_size_bruteforce(M: Sequence[Sequence[int]], p: int, k: int, n: int) -> int:
    """|{x in (Z/p^k)^n : M x = 0}| by enumeration (tiny instances only)."""
    import itertools

    N = p**k
    count = 0
    for v in itertools.product(range(N), repeat=n):
        if not any(matvec(M, v, N)):
            count += 1
    return count
