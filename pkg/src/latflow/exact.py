"""Exact scalars over Q and real quadratic fields Q(sqrt(D)), plus small exact
matrices.

Scalars are kept exact so that span computations, certificates and residual
identities can be verified with no floating error; conversion to float happens
only at the boundary where numerics (flows, norms of float lattices) start.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Union

from .errors import InputError

RationalLike = Union[int, Fraction]


class ExactError(InputError):
    """Raised for malformed exact scalars or incompatible field mixes."""


_SCALAR_RE = re.compile(
    r"""^\s*
    (?P<a>[+-]?\d+(?:/\d+)?)?          # rational part
    (?:
        (?P<sign>[+-])?
        (?P<b>\d+(?:/\d+)?)?           # coefficient of the radical
        r(?P<d>\d+)                    # radical marker, e.g. r2 = sqrt(2)
    )?
    \s*$""",
    re.VERBOSE,
)


class ExactScalar:
    """Element a + b*sqrt(D) with a, b rational.

    D is None for plain rationals. b == 0 collapses to the rational field, so
    equality between `ExactScalar(3)` and a D-tagged zero-radical value holds.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, D: Optional[int] = None):
        a = Fraction(a)
        b = Fraction(b)
        if b != 0:
            if D is None:
                raise ExactError("radical coefficient given without a D")
            if D <= 1 or _is_square(D):
                raise ExactError(f"D must be a nonsquare integer > 1, got {D}")
        else:
            D = None
        self.a = a
        self.b = b
        self.D = D

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def parse(text: str) -> "ExactScalar":
        """Parse "3/7", "-2", "1+2r2", "r5", "1/2-3/4r2" style strings."""
        m = _SCALAR_RE.match(text)
        if not m or (m.group("a") is None and m.group("d") is None):
            raise ExactError(f"cannot parse exact scalar {text!r}")
        a = Fraction(m.group("a")) if m.group("a") is not None else Fraction(0)
        if m.group("d") is None:
            return ExactScalar(a)
        b = Fraction(m.group("b")) if m.group("b") is not None else Fraction(1)
        if m.group("sign") == "-":
            b = -b
        elif m.group("sign") is None and m.group("a") is not None:
            # "1 2r2" without an explicit sign between the parts is malformed
            raise ExactError(f"missing sign before radical part in {text!r}")
        return ExactScalar(a, b, int(m.group("d")))

    @staticmethod
    def sqrt(D: int) -> "ExactScalar":
        return ExactScalar(0, 1, D)

    @staticmethod
    def coerce(value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactScalar(value)
        if isinstance(value, str):
            return ExactScalar.parse(value)
        raise ExactError(f"cannot coerce {value!r} to an exact scalar")

    # -- serialization --------------------------------------------------------

    def serialize(self) -> str:
        if self.b == 0:
            return str(self.a)
        rad = f"r{self.D}"
        if abs(self.b) != 1:
            rad = f"{abs(self.b)}{rad}"
        sign = "-" if self.b < 0 else ("+" if self.a != 0 else "")
        if self.a == 0:
            return f"{sign}{rad}" if self.b < 0 else rad
        return f"{self.a}{sign}{rad}"

    def __repr__(self) -> str:
        return f"ExactScalar({self.serialize()!r})"

    # -- field arithmetic -----------------------------------------------------

    def _join(self, other: "ExactScalar") -> Optional[int]:
        if self.D is None:
            return other.D
        if other.D is None or other.D == self.D:
            return self.D
        raise ExactError(f"mixing radicals r{self.D} and r{other.D}")

    def __add__(self, other):
        other = ExactScalar.coerce(other)
        return ExactScalar(self.a + other.a, self.b + other.b, self._join(other))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-ExactScalar.coerce(other))

    def __rsub__(self, other):
        return ExactScalar.coerce(other) + (-self)

    def __mul__(self, other):
        other = ExactScalar.coerce(other)
        D = self._join(other)
        a = self.a * other.a
        if self.b != 0 and other.b != 0:
            a += self.b * other.b * D
        b = self.a * other.b + self.b * other.a
        return ExactScalar(a, b, D)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if self.b == 0:
            if self.a == 0:
                raise ZeroDivisionError("inverse of zero")
            return ExactScalar(1 / self.a)
        # (a + b rD)^-1 = (a - b rD) / (a^2 - b^2 D); the norm is nonzero
        # because D is not a square.
        norm = self.a * self.a - self.b * self.b * self.D
        return ExactScalar(self.a / norm, -self.b / norm, self.D)

    def __truediv__(self, other):
        return self * ExactScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        out = ExactScalar(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- order and conversion -------------------------------------------------

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 D
        lhs, rhs = a * a, b * b * self.D
        if lhs == rhs:  # impossible for nonsquare D unless both zero
            return 0
        dominant_rational = lhs > rhs
        return (1 if a > 0 else -1) if dominant_rational else (1 if b > 0 else -1)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except ExactError:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.D == other.D

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __lt__(self, other):
        return (self - ExactScalar.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - ExactScalar.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - ExactScalar.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - ExactScalar.coerce(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        value = float(self.a)
        if self.b != 0:
            value += float(self.b) * math.sqrt(self.D)
        return value

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ExactError(f"{self.serialize()} is irrational")
        return self.a

    def conjugate(self) -> "ExactScalar":
        """Galois conjugate a - b*sqrt(D)."""
        return ExactScalar(self.a, -self.b, self.D)


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


ZERO = ExactScalar(0)
ONE = ExactScalar(1)


def sup_norm(vec: Sequence) -> Union[ExactScalar, float]:
    """Max absolute entry. Exact inputs give an exact result, floats a float."""
    items = list(vec)
    if not items:
        raise ExactError("sup_norm of empty vector")
    if all(isinstance(x, (ExactScalar, int, Fraction)) for x in items):
        best = abs(ExactScalar.coerce(items[0]))
        for x in items[1:]:
            cand = abs(ExactScalar.coerce(x))
            if cand > best:
                best = cand
        return best
    return max(abs(float(x)) for x in items)


class ExactMatrix:
    """Dense matrix of ExactScalar entries with exact field operations."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows: List[List[ExactScalar]] = [
            [ExactScalar.coerce(x) for x in row] for row in rows
        ]
        self.nrows = len(self.rows)
        if self.nrows == 0:
            raise ExactError("empty matrix")
        self.ncols = len(self.rows[0])
        if any(len(r) != self.ncols for r in self.rows):
            raise ExactError("ragged matrix rows")

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(nrows: int, ncols: int) -> "ExactMatrix":
        return ExactMatrix([[0] * ncols for _ in range(nrows)])

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self):
        body = "; ".join(
            ", ".join(x.serialize() for x in row) for row in self.rows
        )
        return f"ExactMatrix[{self.nrows}x{self.ncols}]({body})"

    def row(self, i: int) -> List[ExactScalar]:
        return list(self.rows[i])

    def col(self, j: int) -> List[ExactScalar]:
        return [r[j] for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for i in range(self.nrows)]
                            for j in range(self.ncols)])

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._shape_check(other, same=True)
        return ExactMatrix([
            [self.rows[i][j] + other.rows[i][j] for j in range(self.ncols)]
            for i in range(self.nrows)
        ])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._shape_check(other, same=True)
        return ExactMatrix([
            [self.rows[i][j] - other.rows[i][j] for j in range(self.ncols)]
            for i in range(self.nrows)
        ])

    def scale(self, c) -> "ExactMatrix":
        c = ExactScalar.coerce(c)
        return ExactMatrix([[x * c for x in row] for row in self.rows])

    def _shape_check(self, other: "ExactMatrix", same: bool = False):
        if same:
            if (self.nrows, self.ncols) != (other.nrows, other.ncols):
                raise ExactError("shape mismatch")
        elif self.ncols != other.nrows:
            raise ExactError("inner dimension mismatch")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._shape_check(other)
        cols = other.transpose().rows
        out = []
        for row in self.rows:
            out.append([
                sum((row[k] * col[k] for k in range(self.ncols)), ExactScalar(0))
                for col in cols
            ])
        return ExactMatrix(out)

    def apply(self, vec: Sequence) -> List[ExactScalar]:
        """Matrix times column vector."""
        v = [ExactScalar.coerce(x) for x in vec]
        if len(v) != self.ncols:
            raise ExactError("vector length mismatch")
        return [
            sum((row[k] * v[k] for k in range(self.ncols)), ExactScalar(0))
            for row in self.rows
        ]

    def det(self) -> ExactScalar:
        if self.nrows != self.ncols:
            raise ExactError("determinant of a non-square matrix")
        work = [row[:] for row in self.rows]
        n = self.nrows
        det = ExactScalar(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col]), None)
            if pivot is None:
                return ExactScalar(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            det = det * work[col][col]
            inv = work[col][col].inverse()
            for r in range(col + 1, n):
                if work[r][col]:
                    factor = work[r][col] * inv
                    for c in range(col, n):
                        work[r][c] = work[r][c] - factor * work[col][c]
        return det

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        work = [row[:] for row in self.rows]
        pivots: List[int] = []
        r = 0
        for c in range(self.ncols):
            if r == self.nrows:
                break
            pivot = next((i for i in range(r, self.nrows) if work[i][c]), None)
            if pivot is None:
                continue
            work[r], work[pivot] = work[pivot], work[r]
            inv = work[r][c].inverse()
            work[r] = [x * inv for x in work[r]]
            for i in range(self.nrows):
                if i != r and work[i][c]:
                    f = work[i][c]
                    work[i] = [work[i][j] - f * work[r][j] for j in range(self.ncols)]
            pivots.append(c)
            r += 1
        return ExactMatrix(work), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ExactError("inverse of a non-square matrix")
        n = self.nrows
        aug = ExactMatrix([
            self.rows[i] + ExactMatrix.identity(n).rows[i] for i in range(n)
        ])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ExactError("matrix is singular")
        return ExactMatrix([red.rows[i][n:] for i in range(n)])

    def solve(self, rhs: Sequence) -> List[ExactScalar]:
        """Solve self @ x = rhs for square invertible self."""
        return self.inverse().apply(rhs)

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.rows], dtype=float)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.nrows != other.nrows:
            raise ExactError("hstack row mismatch")
        return ExactMatrix([self.rows[i] + other.rows[i] for i in range(self.nrows)])
