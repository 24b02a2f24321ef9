"""Graded vector spaces, graded maps and the Koszul sign rule.

A map of degree ``k`` sends ``V^n`` to ``W^{n+k}``.  Moving a map ``f``
past an element ``x`` costs ``(-1)^{|f||x|}``; that is the only sign rule
used anywhere in the package, all other signs are derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .exactlin import DimensionError, Field, Matrix, ValidationError


class GradedVectorSpace:
    """Finitely supported graded space with a labelled basis in each degree."""

    __slots__ = ("_parts",)

    def __init__(self, labels: Mapping[int, Sequence[Hashable]] | None = None):
        parts = []
        for n in sorted(labels or {}):
            labs = tuple(labels[n])
            if len(set(labs)) != len(labs):
                raise ValidationError(f"repeated basis labels in degree {n}")
            if labs:
                parts.append((int(n), labs))
        self._parts = tuple(parts)

    @classmethod
    def from_dims(cls, dims: Mapping[int, int]) -> "GradedVectorSpace":
        for n, d in dims.items():
            if d < 0:
                raise ValidationError(f"negative dimension {d} in degree {n}")
        return cls({n: [(n, i) for i in range(d)] for n, d in dims.items()})

    @property
    def dims(self) -> dict[int, int]:
        return {n: len(labs) for n, labs in self._parts}

    def dim(self, n: int) -> int:
        for m, labs in self._parts:
            if m == n:
                return len(labs)
        return 0

    def labels(self, n: int) -> tuple:
        for m, labs in self._parts:
            if m == n:
                return labs
        return ()

    def degrees(self) -> list[int]:
        return [n for n, _ in self._parts]

    @property
    def total_dim(self) -> int:
        return sum(len(labs) for _, labs in self._parts)

    def interval(self) -> tuple[int, int] | None:
        """Smallest [a, b] containing the support, or None for the zero space."""
        if not self._parts:
            return None
        return (self._parts[0][0], self._parts[-1][0])

    def basis(self) -> list[tuple[int, Hashable]]:
        return [(n, lab) for n, labs in self._parts for lab in labs]

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedVectorSpace) and self._parts == other._parts

    def __hash__(self):
        return hash(self._parts)

    def __repr__(self) -> str:
        return f"GradedVectorSpace({self.dims})"


def shift(V: GradedVectorSpace, s: int) -> GradedVectorSpace:
    """``shift(V, s)^n = V^{n+s}``; ``shift(V, 1)`` is the suspension of V."""
    return GradedVectorSpace({n - s: V.labels(n) for n in V.degrees()})


def tensor(V: GradedVectorSpace, W: GradedVectorSpace) -> GradedVectorSpace:
    """Tensor product; labels are pairs ordered by (degree in V, position)."""
    out: dict[int, list] = {}
    for i in V.degrees():
        for j in W.degrees():
            out.setdefault(i + j, []).extend((a, b) for a in V.labels(i) for b in W.labels(j))
    return GradedVectorSpace(out)


def tensor_power(V: GradedVectorSpace, m: int) -> GradedVectorSpace:
    if m < 0:
        raise ValueError("negative tensor power")
    out = GradedVectorSpace({0: [()]})
    for _ in range(m):
        t = tensor(out, V)
        out = GradedVectorSpace({n: [a + (b,) for a, b in t.labels(n)] for n in t.degrees()})
    return out


class GradedLinearMap:
    """Degree-``degree`` map given by blocks ``V^n -> W^{n+degree}``."""

    __slots__ = ("field", "source", "target", "degree", "blocks")

    def __init__(self, field: Field, source: GradedVectorSpace, target: GradedVectorSpace,
                 degree: int, blocks: Mapping[int, Matrix] | None = None):
        self.field = field
        self.source = source
        self.target = target
        self.degree = degree
        clean = {}
        for n, M in (blocks or {}).items():
            shape = (target.dim(n + degree), source.dim(n))
            if M.shape != shape:
                raise DimensionError(f"block in degree {n} has shape {M.shape}, expected {shape}")
            if M.field is not field:
                raise ValidationError("block over a different field")
            if shape[0] and shape[1] and not M.is_zero():
                clean[n] = M
        self.blocks = clean

    @classmethod
    def zero(cls, field, source, target, degree=0) -> "GradedLinearMap":
        return cls(field, source, target, degree, {})

    @classmethod
    def identity(cls, field, V: GradedVectorSpace) -> "GradedLinearMap":
        return cls(field, V, V, 0, {n: Matrix.identity(field, V.dim(n)) for n in V.degrees()})

    def block(self, n: int) -> Matrix:
        M = self.blocks.get(n)
        if M is None:
            return Matrix.zeros(self.field, self.target.dim(n + self.degree), self.source.dim(n))
        return M

    def __call__(self, n: int, v: Sequence) -> list:
        return self.block(n).apply(v)

    def __matmul__(self, other: "GradedLinearMap") -> "GradedLinearMap":
        if other.target != self.source:
            raise DimensionError("composition of incompatible graded maps")
        blocks = {}
        for n in other.source.degrees():
            blocks[n] = self.block(n + other.degree) @ other.block(n)
        return GradedLinearMap(self.field, other.source, self.target, self.degree + other.degree, blocks)

    def _combine(self, other: "GradedLinearMap", sign: int) -> "GradedLinearMap":
        if (other.source, other.target, other.degree) != (self.source, self.target, self.degree):
            raise DimensionError("adding graded maps of different type")
        blocks = {}
        for n in set(self.blocks) | set(other.blocks):
            blocks[n] = self.block(n) + other.block(n) if sign > 0 else self.block(n) - other.block(n)
        return GradedLinearMap(self.field, self.source, self.target, self.degree, blocks)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "GradedLinearMap":
        return GradedLinearMap(self.field, self.source, self.target, self.degree,
                               {n: M.scale(c) for n, M in self.blocks.items()})

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedLinearMap):
            return NotImplemented
        return (self.source, self.target, self.degree) == (other.source, other.target, other.degree) and \
            self.blocks == other.blocks

    def __repr__(self) -> str:
        return f"GradedLinearMap(degree={self.degree}, blocks={sorted(self.blocks)})"


@dataclass(frozen=True)
class Element:
    """Homogeneous element: a coefficient vector in ``space`` of one degree."""

    space: GradedVectorSpace
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.space.dim(self.degree):
            raise DimensionError(f"element of length {len(self.coeffs)} in degree {self.degree}")


@dataclass(frozen=True)
class PureTensor:
    """``coefficient * (x_1 ⊗ ... ⊗ x_k)``."""

    coefficient: object
    factors: tuple[Element, ...]

    def expand(self) -> dict[tuple, object]:
        """Coordinates in the tensor basis, keyed by label tuples."""
        terms = {(): self.coefficient}
        for x in self.factors:
            new = {}
            labels = x.space.labels(x.degree)
            for key, c in terms.items():
                for lab, a in zip(labels, x.coeffs):
                    if a:
                        new[key + (lab,)] = c * a
            terms = new
        return {k: v for k, v in terms.items() if v}


def koszul_sign(map_degrees: Sequence[int], arg_degrees: Sequence[int]) -> int:
    """Sign of ``(f_1 ⊗ ... ⊗ f_k)(x_1 ⊗ ... ⊗ x_k)``: each f_j passes x_1..x_{j-1}."""
    if len(map_degrees) != len(arg_degrees):
        raise DimensionError("arity mismatch")
    e = 0
    passed = 0
    for f, x in zip(map_degrees, arg_degrees):
        e += f * passed
        passed += x
    return -1 if e % 2 else 1


def permutation_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Koszul sign of sending ``x_1 ⊗ ... ⊗ x_k`` to ``x_{perm[0]} ⊗ ...``."""
    e = 0
    k = len(perm)
    for i in range(k):
        for j in range(i + 1, k):
            if perm[i] > perm[j]:
                e += degrees[perm[i]] * degrees[perm[j]]
    return -1 if e % 2 else 1


def koszul_apply(maps: Sequence[GradedLinearMap], args: Sequence[Element]) -> PureTensor:
    """Apply ``f_1 ⊗ ... ⊗ f_k`` to a homogeneous ``x_1 ⊗ ... ⊗ x_k``."""
    if len(maps) != len(args):
        raise DimensionError(f"{len(maps)} maps applied to {len(args)} arguments")
    field = maps[0].field if maps else None
    for f, x in zip(maps, args):
        if x.space != f.source:
            raise ValidationError("argument does not lie in the source of its map")
    sign = koszul_sign([f.degree for f in maps], [x.degree for x in args])
    images = tuple(
        Element(f.target, x.degree + f.degree, tuple(f(x.degree, list(x.coeffs)))) for f, x in zip(maps, args)
    )
    coeff = field.one if field is not None else 1
    return PureTensor(coeff if sign > 0 else -coeff, images)


def graded_dims_convolution(dv: Mapping[int, int], dw: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, a in dv.items():
        for j, b in dw.items():
            if a and b:
                out[i + j] = out.get(i + j, 0) + a * b
    return out


def iter_tuples(degrees: Sequence[int], m: int, total: int) -> Iterable[tuple[int, ...]]:
    """Index m-tuples (lexicographic) whose ``degrees`` add up to ``total``."""
    if m == 0:
        if total == 0:
            yield ()
        return
    if not degrees:
        return
    lo, hi = min(degrees), max(degrees)
    for i, d in enumerate(degrees):
        rest = total - d
        if lo * (m - 1) <= rest <= hi * (m - 1):
            for tail in iter_tuples(degrees, m - 1, rest):
                yield (i,) + tail
