"""Exact scalars over Q and F_p, and the dense linear algebra built on them.

Rationals are :class:`fractions.Fraction`; residues are :class:`Residue`.
Both support the ordinary arithmetic operators, so the elimination code
below is written once for either field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Raised when inputs mix fields or are otherwise malformed."""


class DimensionError(ValueError):
    """Raised on shape mismatches."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        """Parse an exact coefficient string such as ``"3/4"`` or ``"-2"``."""
        text = str(text).strip()
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not an exact coefficient: {text!r}") from exc
        if "." in text or "e" in text.lower():
            raise ValidationError(f"decimal coefficients are not exact: {text!r}")
        return self.from_fraction(q)

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def tag(self) -> str:
        raise NotImplementedError


class Rationals(Field):
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, Residue):
                raise ValidationError(f"residue {x!r} is not a rational")
            if isinstance(x, str):
                return self.parse(x)
            raise ValidationError(f"cannot coerce {x!r} into Q")
        return Fraction(x)

    def from_fraction(self, q: Fraction) -> Fraction:
        return q

    def tag(self) -> str:
        return "Q"

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        return (_rationals, ())


def _rationals() -> Rationals:
    return QQ


QQ = Rationals()


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x) -> "Residue":
        if isinstance(x, Residue):
            if x.field is not self:
                raise ValidationError(f"residue mod {x.field.p} mixed with F_{self.p}")
            return x
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, str):
                return self.parse(x)
            raise ValidationError(f"cannot coerce {x!r} into F_{self.p}")
        return Residue(x % self.p, self)

    def from_fraction(self, q: Fraction) -> "Residue":
        den = q.denominator % self.p
        if den == 0:
            raise ValidationError(f"{q} has denominator divisible by {self.p}")
        return Residue(q.numerator * pow(den, -1, self.p) % self.p, self)

    def format(self, x) -> str:
        return str(x.value)

    def tag(self) -> str:
        return str(self.p)

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p,))


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


_TAG = re.compile(r"^(?:F_?|GF)?(\d+)$", re.IGNORECASE)


def field_from_tag(tag) -> Field:
    """``"Q"`` gives the rationals; a prime (``5``, ``"5"``, ``"F5"``) gives F_p."""
    text = str(tag).strip()
    if text.upper() in ("Q", "QQ"):
        return QQ
    m = _TAG.match(text)
    if not m:
        raise ValidationError(f"unknown field tag {tag!r}")
    p = int(m.group(1))
    if not is_prime(p):
        raise ValidationError(f"field tag {tag!r}: {p} is not prime")
    return GF(p)


class Residue:
    """An element of F_p, stored in [0, p)."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value
        self.field = field

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.field is not self.field:
                raise ValidationError("arithmetic between different prime fields")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        raise ValidationError(f"cannot combine F_{self.field.p} element with {other!r}")

    def __add__(self, other):
        return Residue((self.value + self._other(other)) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue((self.value - self._other(other)) % self.field.p, self.field)

    def __rsub__(self, other):
        return Residue((self._other(other) - self.value) % self.field.p, self.field)

    def __mul__(self, other):
        return Residue(self.value * self._other(other) % self.field.p, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other) % self.field.p
        if o == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Residue(self.value * pow(o, -1, self.field.p) % self.field.p, self.field)

    def __rtruediv__(self, other):
        if self.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Residue(self._other(other) * pow(self.value, -1, self.field.p) % self.field.p, self.field)

    def __neg__(self):
        return Residue(-self.value % self.field.p, self.field)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, Residue):
            return other.field is self.field and other.value == self.value
        if isinstance(other, int) and not isinstance(other, bool):
            return (other - self.value) % self.field.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.field.p}"


def _check_entry(field: Field, x):
    if isinstance(field, PrimeField):
        if isinstance(x, Residue):
            if x.field is not field:
                raise ValidationError(f"mixed-field entry {x!r} in F_{field.p} matrix")
            return x
        if isinstance(x, Fraction):
            raise ValidationError(f"mixed-field entry {x!r} in F_{field.p} matrix")
        return field(x)
    if isinstance(x, Residue):
        raise ValidationError(f"mixed-field entry {x!r} in rational matrix")
    return field(x)


class Matrix:
    """Immutable dense matrix over a single exact field, stored row-major."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Iterable[Sequence], ncols: int | None = None):
        rows = tuple(tuple(_check_entry(field, x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("ragged rows")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def _raw(cls, field: Field, rows, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls._raw(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        cols = [[_check_entry(field, x) for x in c] for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise DimensionError("column length mismatch")
        return cls._raw(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, [self.column(j) for j in range(self.ncols)], self.nrows)

    def _same(self, other: "Matrix"):
        if other.field is not self.field:
            raise ValidationError("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} + {other.shape}")
        return Matrix._raw(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} - {other.shape}")
        return Matrix._raw(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(self.field, [[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"{self.shape} @ {other.shape}")
        z = self.field.zero
        out = []
        ocols = other.ncols
        orows = other.rows
        for r in self.rows:
            acc = [z] * ocols
            for k, a in enumerate(r):
                if a:
                    ork = orows[k]
                    for j in range(ocols):
                        b = ork[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._raw(self.field, out, ocols)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field is other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def hstack(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.nrows != other.nrows:
            raise DimensionError("hstack row mismatch")
        return Matrix._raw(self.field, [r + s for r, s in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.ncols != other.ncols:
            raise DimensionError("vstack column mismatch")
        return Matrix._raw(self.field, self.rows + other.rows, self.ncols)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [[r[j] for j in idx] for r in self.rows], len(idx))

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols}, [{body}])"


def _rref_lists(rows: list[list], ncols: int, zero, one=None):
    """In-place reduced row echelon form of a list of row lists.

    Pivots are taken as the first nonzero entry scanning columns left to
    right, rows top to bottom.  Returns the pivot column list.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        inv = 1 / prow[c] if one is None else one / prow[c]
        if prow[c] != 1:
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the increasing list of pivot columns."""
    rows = [list(_check_entry(M.field, x) for x in r) for r in M.rows]
    piv = _rref_lists(rows, M.ncols, M.field.zero, M.field.one)
    return Matrix._raw(M.field, rows, M.ncols), piv


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def kernel_basis(M: Matrix) -> Matrix:
    """Columns of the result form a basis of the null space of ``M``.

    One basis vector per free column f, with a 1 in position f and the
    negated rref entries in the pivot positions.
    """
    R, piv = rref(M)
    n = M.ncols
    field = M.field
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    cols = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for i, p in enumerate(piv):
            x = R.rows[i][f]
            if x:
                v[p] = -x
        cols.append(v)
    return Matrix.from_columns(field, cols, n)


def solve(M: Matrix, v: Sequence):
    """Some x with ``M x = v`` (free variables set to 0), or None."""
    if len(v) != M.nrows:
        raise DimensionError(f"right-hand side of length {len(v)} for {M.shape} system")
    field = M.field
    rows = [list(r) + [_check_entry(field, b)] for r, b in zip(M.rows, v)]
    piv = _rref_lists(rows, M.ncols + 1, field.zero, field.one)
    if piv and piv[-1] == M.ncols:
        return None
    x = [field.zero] * M.ncols
    for i, p in enumerate(piv):
        x[p] = rows[i][M.ncols]
    return x


def inverse(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise DimensionError("inverse of a non-square matrix")
    n = M.nrows
    aug = M.hstack(Matrix.identity(M.field, n))
    rows = [list(r) for r in aug.rows]
    piv = _rref_lists(rows, 2 * n, M.field.zero, M.field.one)
    if piv[:n] != list(range(n)):
        raise ValidationError("matrix is singular")
    return Matrix._raw(M.field, [r[n:] for r in rows], n)


def row_space_basis(field: Field, vectors: Sequence[Sequence], n: int) -> list[list]:
    """Reduced basis (rref rows) of the span of ``vectors`` in field^n."""
    rows = [list(v) for v in vectors]
    piv = _rref_lists(rows, n, field.zero, field.one)
    return rows[: len(piv)]


def span_rank(field: Field, vectors: Sequence[Sequence], n: int) -> int:
    rows = [list(v) for v in vectors]
    return len(_rref_lists(rows, n, field.zero, field.one))


def in_span(field: Field, basis: Sequence[Sequence], v: Sequence, n: int) -> bool:
    return span_rank(field, list(basis) + [v], n) == span_rank(field, basis, n)


def complement_basis(field: Field, subspace: Sequence[Sequence], n: int) -> list[int]:
    """Standard basis positions spanning a complement of ``subspace``.

    These are the non-pivot columns of the rref of the subspace basis.
    """
    rows = [list(v) for v in subspace]
    piv = set(_rref_lists(rows, n, field.zero, field.one))
    return [j for j in range(n) if j not in piv]


def coordinates(field: Field, basis: Sequence[Sequence], v: Sequence, n: int):
    """Coefficients expressing ``v`` in the (independent) ``basis``, or None."""
    M = Matrix.from_columns(field, basis, n) if basis else Matrix.zeros(field, n, 0)
    return solve(M, v)
