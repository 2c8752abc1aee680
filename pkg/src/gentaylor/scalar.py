"""Coefficient domains and a dense linear solver.

Two domains exist: ``EXACT`` (``fractions.Fraction``, always in lowest terms)
and ``FLOAT`` (Python ``float``, IEEE double).  A computation picks one and
stays in it; plain ``int`` values are accepted in both and promoted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import MixedDomain, SingularMatrix

Scalar = Union[Fraction, float]

PIVOT_RTOL = 1e-12


class Domain(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


EXACT = Domain.EXACT
FLOAT = Domain.FLOAT


def domain_of(value) -> Domain | None:
    """Domain of a single value; ``None`` for plain ints (valid in either)."""
    if isinstance(value, bool):
        raise MixedDomain(f"boolean is not a scalar: {value!r}")
    if isinstance(value, int):
        return None
    if isinstance(value, Fraction):
        return EXACT
    if isinstance(value, float):
        return FLOAT
    raise MixedDomain(f"unsupported scalar type {type(value).__name__}")


def common_domain(values: Iterable, default: Domain = EXACT) -> Domain:
    found = None
    for v in values:
        d = domain_of(v)
        if d is None:
            continue
        if found is None:
            found = d
        elif d is not found:
            raise MixedDomain("exact and float values mixed in one computation")
    return found or default


def lift(value, domain: Domain) -> Scalar:
    """Bring ``value`` into ``domain``, refusing a cross-domain value."""
    d = domain_of(value)
    if d is not None and d is not domain:
        raise MixedDomain(f"{d.value} value {value!r} used in {domain.value} computation")
    if domain is EXACT:
        return Fraction(value)
    return float(value)


def convert(value, domain: Domain) -> Scalar:
    """Explicit conversion between domains (float -> Fraction is exact)."""
    if isinstance(value, bool):
        raise MixedDomain(f"boolean is not a scalar: {value!r}")
    if domain is EXACT:
        if isinstance(value, (Rational, float)):
            return Fraction(value)
        raise MixedDomain(f"cannot convert {value!r} to an exact rational")
    return float(value)


def parse_scalar(text: str, domain: Domain) -> Scalar:
    """Parse ``"3"``, ``"-0.25"``, ``"1e-3"`` or ``"p/q"`` into ``domain``."""
    s = text.strip()
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    return value if domain is EXACT else float(value)


def format_scalar(value) -> str:
    """``p/q`` (or ``p``) for rationals, shortest round-trip decimal for floats."""
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class DenseMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(v for r in rows for v in r))

    @classmethod
    def identity(cls, n: int, domain: Domain = EXACT) -> "DenseMatrix":
        one, zero = lift(1, domain), lift(0, domain)
        return cls.from_rows([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def domain(self) -> Domain:
        return common_domain(self.entries)

    def matvec(self, x: Sequence) -> list:
        zero = lift(0, self.domain)
        return [sum((a * b for a, b in zip(self.row(i), x)), zero) for i in range(self.rows)]


def _eliminate(A: DenseMatrix, b: Sequence):
    """Forward elimination with partial pivoting on an m x k system (m >= k).

    Returns the reduced augmented rows and the domain.
    """
    domain = common_domain(list(A.entries) + list(b))
    rows = [[lift(v, domain) for v in A.row(i)] + [lift(b[i], domain)] for i in range(A.rows)]
    m, k = A.rows, A.cols
    if domain is FLOAT:
        scale = max((abs(v) for v in A.entries), default=0.0)
        threshold = PIVOT_RTOL * scale
    for col in range(k):
        if domain is EXACT:
            piv = next((r for r in range(col, m) if rows[r][col] != 0), None)
        else:
            piv = max(range(col, m), key=lambda r: abs(rows[r][col]), default=None)
            if piv is not None and not abs(rows[piv][col]) > threshold:
                piv = None
        if piv is None:
            raise SingularMatrix(f"no usable pivot in column {col}")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        for r in range(col + 1, m):
            factor = rows[r][col] / p
            if factor:
                rr, rc = rows[r], rows[col]
                for j in range(col, k + 1):
                    rr[j] -= factor * rc[j]
    return rows, domain


def _back_substitute(rows, k: int) -> list:
    x = [None] * k
    for i in range(k - 1, -1, -1):
        acc = rows[i][k]
        for j in range(i + 1, k):
            acc -= rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    return x


def solve_linear(A: DenseMatrix, b: Sequence) -> list:
    """Solve the square system ``A x = b``.

    Exact Gaussian elimination for rationals, partial pivoting for floats.
    Raises SingularMatrix when no pivot is usable (exact zero, or below
    ``1e-12 * max|A|`` for floats).
    """
    if A.rows != A.cols:
        raise ValueError(f"solve_linear needs a square matrix, got {A.rows}x{A.cols}")
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    rows, _ = _eliminate(A, b)
    return _back_substitute(rows, A.cols)


def solve_consistent(A: DenseMatrix, b: Sequence, rtol: float = 1e-8) -> list:
    """Solve a tall system ``A x = b`` that is required to be consistent.

    ``A`` must have full column rank.  The rows left over after elimination
    must reduce to ``0 = 0`` (exactly for rationals, within
    ``rtol * (1 + max|b|)`` for floats); otherwise SingularMatrix is raised.
    """
    if A.rows < A.cols:
        raise ValueError(f"underdetermined system {A.rows}x{A.cols}")
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    rows, domain = _eliminate(A, b)
    k = A.cols
    if domain is EXACT:
        bad = any(rows[r][k] != 0 for r in range(k, A.rows))
    else:
        tol = rtol * (1.0 + max((abs(float(v)) for v in b), default=0.0))
        bad = any(abs(rows[r][k]) > tol for r in range(k, A.rows))
    if bad:
        raise SingularMatrix("overdetermined system is inconsistent")
    return _back_substitute(rows, k)
