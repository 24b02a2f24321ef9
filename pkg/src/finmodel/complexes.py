"""Cochain complexes over an exact field.

Cohomology comes with an explicit contraction ``(iota, pi, h)`` onto a
chosen space of representatives:

    pi iota = 1,   1 - iota pi = d h + h d,   h iota = 0,   pi h = 0,   h h = 0.

Every choice is read off reduced row echelon forms, so repeated runs
produce identical bases.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .exactlin import (
    DimensionError,
    Field,
    Matrix,
    ValidationError,
    inverse,
    kernel_basis,
    rank,
    rref,
    solve,
    span_rank,
)
from .graded import GradedLinearMap, GradedVectorSpace


class ComplexError(ValidationError):
    """A differential that does not square to zero, or a non-chain map."""


class CochainComplex:
    __slots__ = ("field", "space", "d")

    def __init__(self, field: Field, space: GradedVectorSpace, d: GradedLinearMap | Mapping[int, Matrix]):
        if not isinstance(d, GradedLinearMap):
            d = GradedLinearMap(field, space, space, 1, d)
        if d.degree != 1 or d.source != space or d.target != space:
            raise ComplexError("differential must be a degree +1 endomorphism of the space")
        self.field = field
        self.space = space
        self.d = d
        for n in space.degrees():
            if not (d.block(n + 1) @ d.block(n)).is_zero():
                raise ComplexError(f"d∘d ≠ 0 starting in degree {n}")

    @classmethod
    def from_dims(cls, field: Field, dims: Mapping[int, int], d: Mapping[int, Matrix] | None = None):
        return cls(field, GradedVectorSpace.from_dims(dims), d or {})

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def diff(self, n: int) -> Matrix:
        return self.d.block(n)

    def degrees(self) -> list[int]:
        return self.space.degrees()

    def cohomology_dims(self) -> dict[int, int]:
        """Dimensions of H^n by rank-nullity, without building a contraction."""
        ranks = {n: rank(self.diff(n)) for n in self.degrees()}
        out = {}
        for n in self.degrees():
            h = self.dim(n) - ranks[n] - ranks.get(n - 1, 0)
            if h:
                out[n] = h
        return out

    def is_acyclic(self) -> bool:
        return not self.cohomology_dims()

    def __repr__(self) -> str:
        return f"CochainComplex({self.space.dims})"


@dataclass
class CohomologyData:
    complex: CochainComplex
    H: GradedVectorSpace
    iota: GradedLinearMap
    pi: GradedLinearMap
    h: GradedLinearMap

    @property
    def dims(self) -> dict[int, int]:
        return self.H.dims

    def representative(self, n: int, i: int) -> list:
        return self.iota.block(n).column(i)

    def project(self, n: int, v: Sequence) -> list:
        return self.pi(n, v)


def cohomology(C: CochainComplex, prefer: Mapping[int, Sequence[Sequence]] | None = None) -> CohomologyData:
    """Cohomology with a deterministic contraction.

    In each degree ``C^n = B^n ⊕ R^n ⊕ L^n``: boundaries, representatives
    and the span of standard vectors at the pivot columns of ``d^n``.
    Representatives are picked greedily from ``prefer[n]`` (cocycles only)
    followed by the kernel basis of ``d^n``.
    """
    F = C.field
    prefer = prefer or {}
    H_labels: dict[int, list] = {}
    iota_b: dict[int, Matrix] = {}
    pi_b: dict[int, Matrix] = {}
    h_b: dict[int, Matrix] = {}
    piv_cache = {}

    def pivots(n):
        if n not in piv_cache:
            piv_cache[n] = rref(C.diff(n))[1] if C.dim(n) and C.dim(n + 1) else []
        return piv_cache[n]

    for n in C.degrees():
        dim = C.dim(n)
        Dn = C.diff(n)
        Dprev = C.diff(n - 1)
        prev_piv = pivots(n - 1)
        boundary = [Dprev.column(p) for p in prev_piv]
        Z = kernel_basis(Dn)
        candidates = []
        for v in prefer.get(n, ()):
            v = [F(x) for x in v]
            if len(v) != dim:
                raise DimensionError("preferred representative of wrong length")
            if all(not x for x in Dn.apply(v)):
                candidates.append(v)
        candidates.extend(Z.columns())
        chosen: list[list] = []
        r = len(boundary)
        for v in candidates:
            if span_rank(F, boundary + chosen + [v], dim) > r + len(chosen):
                chosen.append(v)
        zdim = Z.ncols
        if r + len(chosen) != zdim:
            raise AssertionError("representatives do not complete the boundaries to the cocycles")
        L = []
        for p in pivots(n):
            e = [F.zero] * dim
            e[p] = F.one
            L.append(e)
        P = Matrix.from_columns(F, boundary + chosen + L, dim)
        if P.ncols != dim:
            raise AssertionError("splitting basis has the wrong size")
        Pinv = inverse(P) if dim else P
        k = len(chosen)
        H_labels[n] = [(n, i) for i in range(k)]
        iota_b[n] = Matrix.from_columns(F, chosen, dim) if k else Matrix.zeros(F, dim, 0)
        pi_b[n] = Matrix._raw(F, Pinv.rows[r:r + k], dim)
        if r:
            # h(d e_p) = e_p for the pivot columns p of d^{n-1}
            dprev = C.dim(n - 1)
            E = []
            for p in prev_piv:
                e = [F.zero] * dprev
                e[p] = F.one
                E.append(e)
            h_b[n] = Matrix.from_columns(F, E, dprev) @ Matrix._raw(F, Pinv.rows[:r], dim)
    H = GradedVectorSpace(H_labels)
    iota = GradedLinearMap(F, H, C.space, 0, {n: M for n, M in iota_b.items() if H.dim(n)})
    pi = GradedLinearMap(F, C.space, H, 0, {n: M for n, M in pi_b.items() if H.dim(n)})
    h = GradedLinearMap(F, C.space, C.space, -1, h_b)
    return CohomologyData(C, H, iota, pi, h)


def check_contraction(data: CohomologyData) -> list[str]:
    """Names of the violated side conditions (empty when all hold)."""
    C = data.complex
    F = C.field
    bad = []
    idH = GradedLinearMap.identity(F, data.H)
    idC = GradedLinearMap.identity(F, C.space)
    if data.pi @ data.iota != idH:
        bad.append("pi iota = 1")
    if idC - data.iota @ data.pi != C.d @ data.h + data.h @ C.d:
        bad.append("1 - iota pi = dh + hd")
    if not (data.h @ data.iota).is_zero():
        bad.append("h iota = 0")
    if not (data.pi @ data.h).is_zero():
        bad.append("pi h = 0")
    if not (data.h @ data.h).is_zero():
        bad.append("h h = 0")
    return bad


class ChainMap:
    """Degree-0 map of complexes commuting with the differentials."""

    __slots__ = ("source", "target", "f")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 f: GradedLinearMap | Mapping[int, Matrix], check: bool = True):
        if not isinstance(f, GradedLinearMap):
            f = GradedLinearMap(source.field, source.space, target.space, 0, f)
        if f.degree != 0:
            raise ComplexError("chain maps have degree 0")
        self.source = source
        self.target = target
        self.f = f
        if check and not self.commutes():
            raise ComplexError("map does not commute with the differentials")

    def commutes(self) -> bool:
        return self.target.d @ self.f == self.f @ self.source.d

    def block(self, n: int) -> Matrix:
        return self.f.block(n)

    @classmethod
    def identity(cls, C: CochainComplex) -> "ChainMap":
        return cls(C, C, GradedLinearMap.identity(C.field, C.space))

    @classmethod
    def zero(cls, C: CochainComplex, D: CochainComplex) -> "ChainMap":
        return cls(C, D, GradedLinearMap.zero(C.field, C.space, D.space))


@dataclass
class Cone:
    complex: CochainComplex
    incl: ChainMap        # D -> cone
    proj: GradedLinearMap  # cone -> shifted C, degree 0 on labels (c, *)


def mapping_cone(f: ChainMap) -> Cone:
    """``cone^n = C^{n+1} ⊕ D^n`` with ``d(c, x) = (-dc, f(c) + dx)``."""
    C, D = f.source, f.target
    F = C.field
    degs = sorted(set(n - 1 for n in C.degrees()) | set(D.degrees()))
    labels = {n: [("c", lab) for lab in C.space.labels(n + 1)] + [("d", lab) for lab in D.space.labels(n)]
              for n in degs}
    space = GradedVectorSpace(labels)
    blocks = {}
    for n in degs:
        c0, d0 = C.dim(n + 1), D.dim(n)
        c1, d1 = C.dim(n + 2), D.dim(n + 1)
        if not (c0 + d0) or not (c1 + d1):
            continue
        top = (-C.diff(n + 1)).hstack(Matrix.zeros(F, c1, d0))
        bot = f.block(n + 1).hstack(D.diff(n))
        blocks[n] = top.vstack(bot)
    cone = CochainComplex(F, space, blocks)
    incl = {}
    for n in D.degrees():
        c0, d0 = C.dim(n + 1), D.dim(n)
        incl[n] = Matrix.zeros(F, c0, d0).vstack(Matrix.identity(F, d0))
    sC = GradedVectorSpace({n - 1: C.space.labels(n) for n in C.degrees()})
    proj = {}
    for n in degs:
        c0, d0 = C.dim(n + 1), D.dim(n)
        if c0:
            proj[n] = Matrix.identity(F, c0).hstack(Matrix.zeros(F, c0, d0))
    return Cone(cone, ChainMap(D, cone, incl), GradedLinearMap(F, space, sC, 0, proj))


def quasi_iso_check(f: ChainMap) -> bool:
    """True iff the mapping cone of ``f`` is acyclic."""
    return mapping_cone(f).complex.is_acyclic()


def induced_map(f: ChainMap, src: CohomologyData | None = None, tgt: CohomologyData | None = None) -> GradedLinearMap:
    """``H(f) = pi_D f iota_C`` on the chosen cohomology bases."""
    src = src or cohomology(f.source)
    tgt = tgt or cohomology(f.target)
    return tgt.pi @ f.f @ src.iota


# --------------------------------------------------------------------------
# DG modules


class DGModule:
    """Right DG-module over a DG-algebra.

    ``action[b]`` is the graded map ``x ↦ x·b`` of degree ``|b|`` for each
    algebra basis index ``b``.  Checked: the unit acts as the identity,
    ``(x·a)·b = x·(ab)`` and ``d(x·a) = d(x)·a + (-1)^{|x|} x·d(a)``.
    """

    def __init__(self, algebra, complex: CochainComplex, action: Mapping[int, GradedLinearMap],
                 check: bool = True):
        self.algebra = algebra
        self.complex = complex
        self.action = dict(action)
        for b in range(algebra.dim):
            if b not in self.action:
                self.action[b] = GradedLinearMap.zero(complex.field, complex.space, complex.space,
                                                      algebra.degree(b))
            elif self.action[b].degree != algebra.degree(b):
                raise ValidationError(f"action of {algebra.names[b]} has the wrong degree")
        if check:
            problem = self.check()
            if problem:
                raise ValidationError(problem)

    @property
    def field(self) -> Field:
        return self.complex.field

    @property
    def space(self) -> GradedVectorSpace:
        return self.complex.space

    def combo(self, vec: Mapping[int, object], degree: int) -> GradedLinearMap:
        """Action of the algebra element ``Σ vec[b]·b`` (homogeneous of ``degree``)."""
        out = GradedLinearMap.zero(self.field, self.space, self.space, degree)
        for b, c in vec.items():
            if c:
                out = out + self.action[b].scale(c)
        return out

    def check(self) -> str | None:
        A = self.algebra
        F = self.field
        sp = self.space
        if A.unit is not None and self.action[A.unit] != GradedLinearMap.identity(F, sp):
            return "unit does not act as the identity"
        d = self.complex.d
        for a in range(A.dim):
            Ra = self.action[a]
            da = A.diff_basis(a)
            lhs = d @ Ra
            rhs = Ra @ d
            Rda = self.combo(da, A.degree(a) + 1)
            signed = {n: Rda.block(n).scale(-1 if n % 2 else 1) for n in sp.degrees()}
            rhs = rhs + GradedLinearMap(F, sp, sp, Rda.degree, signed)
            if lhs != rhs:
                return f"Leibniz rule fails for the action of {A.names[a]}"
        for a in range(A.dim):
            for b in range(A.dim):
                lhs = self.action[b] @ self.action[a]
                rhs = self.combo(A.mul_basis(a, b), A.degree(a) + A.degree(b))
                if lhs != rhs:
                    return f"(x·{A.names[a]})·{A.names[b]} ≠ x·({A.names[a]}{A.names[b]})"
        return None

    @classmethod
    def regular(cls, algebra) -> "DGModule":
        """The algebra as a right module over itself."""
        C = algebra.complex()
        F = algebra.field
        action = {}
        for b in range(algebra.dim):
            blocks = {}
            for n in C.degrees():
                tgt = n + algebra.degree(b)
                if not C.dim(tgt):
                    continue
                cols = []
                for x in algebra.indices_in(n):
                    vec = algebra.mul_basis(x, b)
                    cols.append(algebra.local_vector(vec, tgt))
                blocks[n] = Matrix.from_columns(F, cols, C.dim(tgt))
            action[b] = GradedLinearMap(F, C.space, C.space, algebra.degree(b), blocks)
        return cls(algebra, C, action)

    def is_linear_map_to(self, other: "DGModule", f: GradedLinearMap) -> bool:
        """Whether ``f`` commutes with the actions: f(x·b) = f(x)·b."""
        for b in range(self.algebra.dim):
            if other.action[b] @ f != f @ self.action[b]:
                return False
        return True


def restrict_to_subspace(M: GradedLinearMap, sub_src: Mapping[int, Matrix], sub_tgt: Mapping[int, Matrix],
                         degrees: Sequence[int]) -> dict[int, Matrix] | None:
    """Blocks of ``M`` restricted to subspaces given by column bases, or None if not closed."""
    F = M.field
    out = {}
    for n in degrees:
        S = sub_src.get(n)
        if S is None or S.ncols == 0:
            continue
        T = sub_tgt.get(n + M.degree)
        img = M.block(n) @ S
        if T is None or T.ncols == 0:
            if not img.is_zero():
                return None
            continue
        cols = []
        for v in img.columns():
            x = solve(T, v)
            if x is None:
                return None
            cols.append(x)
        out[n] = Matrix.from_columns(F, cols, T.ncols)
    return out


# --------------------------------------------------------------------------
# truncation


def leq0_basis(C: CochainComplex, prefer: Sequence[Sequence] = ()) -> dict[int, Matrix]:
    """Column bases of the smart truncation: ``C^n`` for n < 0 and ``Z^0``.

    ``prefer`` lists degree-0 cocycles placed first in the ``Z^0`` basis
    (used to keep the unit as a basis element).
    """
    F = C.field
    out = {}
    for n in C.degrees():
        if n < 0:
            out[n] = Matrix.identity(F, C.dim(n))
    dim0 = C.dim(0)
    if dim0:
        Z = kernel_basis(C.diff(0))
        chosen: list[list] = []
        for v in list(prefer) + Z.columns():
            v = [F(x) for x in v]
            if any(C.diff(0).apply(v)):
                continue
            if span_rank(F, chosen + [v], dim0) > len(chosen):
                chosen.append(v)
        if chosen:
            out[0] = Matrix.from_columns(F, chosen, dim0)
    return out


def smart_truncate_leq0(B, warn: bool = True):
    """Sub-DG-algebra of ``B`` with ``B^n`` for n < 0, ``Z^0(B)`` in degree 0.

    Returns ``(truncated, inclusion)`` where ``inclusion`` is the chain
    map into ``B``.  Warns when ``H^{>0}(B) ≠ 0``, since the inclusion is
    then not a quasi-isomorphism.  ``warn=False`` skips that test, for
    inputs whose top degree is a window edge rather than the real top.
    """
    from .ainf import DGAlgebra

    C = B.complex()
    F = B.field
    if warn and any(n > 0 and d for n, d in C.cohomology_dims().items()):
        warnings.warn("H^{>0}(B) ≠ 0: the truncation is not a quasi-isomorphism", stacklevel=2)
    uvec = B.unit_vector()
    prefer = [B.local_vector(uvec, 0)] if uvec else []
    bases = leq0_basis(C, prefer)
    names, degrees, embed = [], [], []
    unit = None
    for n in sorted(bases):
        M = bases[n]
        for j in range(M.ncols):
            col = M.column(j)
            glob = B.global_vector(col, n)
            if uvec and glob == uvec:
                unit = len(names)
                names.append(B.names[next(iter(glob))] if len(glob) == 1 else "1")
            elif len(glob) == 1 and next(iter(glob.values())) == 1:
                names.append(B.names[next(iter(glob))])
            else:
                names.append(f"z{n}_{j}")
            degrees.append(n)
            embed.append((n, col))
    sub = _subalgebra(B, C, degrees, embed)
    T = DGAlgebra(F, names, degrees, sub["ops"], unit)
    Tc = T.complex()
    blocks = {}
    for n in Tc.degrees():
        cols = [col for (m, col) in embed if m == n]
        blocks[n] = Matrix.from_columns(F, cols, C.dim(n))
    return T, ChainMap(Tc, C, blocks)


def _subalgebra(B, C, degrees, embed):
    """Structure constants of the subalgebra spanned by ``embed`` vectors."""
    F = B.field
    by_degree: dict[int, list[int]] = {}
    for i, (n, _) in enumerate(embed):
        by_degree.setdefault(n, []).append(i)
    basis_mats = {n: Matrix.from_columns(F, [embed[i][1] for i in idx], C.dim(n))
                  for n, idx in by_degree.items()}

    def express(vec_global, n):
        if not vec_global:
            return {}
        if n not in basis_mats:
            raise ValidationError("product leaves the truncation")
        x = solve(basis_mats[n], B.local_vector(vec_global, n))
        if x is None:
            raise ValidationError("product leaves the truncation")
        return {by_degree[n][k]: c for k, c in enumerate(x) if c}

    ops = {1: {}, 2: {}}
    glob = [B.global_vector(col, n) for (n, col) in embed]
    for i, u in enumerate(glob):
        du = B.diff(u)
        if du:
            ops[1][(i,)] = express(du, degrees[i] + 1)
        for j, v in enumerate(glob):
            p = B.mul(u, v)
            if p:
                ops[2][(i, j)] = express(p, degrees[i] + degrees[j])
    return {"ops": ops}
