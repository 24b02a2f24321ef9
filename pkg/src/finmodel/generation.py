"""Radical filtrations, generation bounds and cone-tower certificates.

For a connective algebra with ``Λ = H^0`` and ``J = rad Λ`` the cohomology
of a module ``M`` is filtered by ``H^n(M) J^k``.  Each layer is
semisimple, hence a finite sum of simple summands ``e_t Λ̄`` of
``Λ̄ = Λ / J``.  A certificate realizes this as a tower of DG-submodules

    G_0 ⊆ G_1 ⊆ ... ⊆ G_L,   G_{j} = M^{<n} ⊕ (boundaries + ι(H^n J^k)),

with ``G_0`` acyclic, ``G_L → M`` a quasi-isomorphism and, for every
step, an explicit B-linear chain map from the cone of ``G_{j-1} → G_j``
onto a sum of shifted summands ``e_t Λ̄[-n]`` that is a quasi-isomorphism.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import sympy

from .ainf import AInfinityAlgebra, DGAlgebra, algebra_from_dict, algebra_to_dict
from .complexes import ChainMap, CochainComplex, DGModule, cohomology, mapping_cone, quasi_iso_check
from .exactlin import (
    Field,
    Matrix,
    ValidationError,
    coordinates,
    field_from_tag,
    in_span,
    inverse,
    kernel_basis,
    row_space_basis,
    solve,
    span_rank,
)
from .graded import GradedLinearMap, GradedVectorSpace

BRUTE_FORCE_MAX_DIM = 8


# -- ordinary algebras -----------------------------------------------------


class OrdinaryAlgebra:
    """Finite-dimensional unital associative algebra with dense structure constants."""

    def __init__(self, field: Field, names: Sequence[str], table: Sequence[Sequence[Sequence]], unit: Sequence,
                 check: bool = True):
        self.field = field
        self.names = tuple(names)
        self.dim = len(self.names)
        self.table = [[[field(c) for c in table[i][j]] for j in range(self.dim)] for i in range(self.dim)]
        self.unit = [field(c) for c in unit]
        if check:
            problem = self.violation()
            if problem:
                raise ValidationError(problem)

    def basis_vector(self, i: int) -> list:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def mul(self, u: Sequence, v: Sequence) -> list:
        F = self.field
        out = [F.zero] * self.dim
        for i, x in enumerate(u):
            if not x:
                continue
            row = self.table[i]
            for j, y in enumerate(v):
                if not y:
                    continue
                c = x * y
                for k, s in enumerate(row[j]):
                    if s:
                        out[k] = out[k] + c * s
        return out

    def left_matrix(self, u: Sequence) -> Matrix:
        cols = [self.mul(u, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def right_matrix(self, u: Sequence) -> Matrix:
        cols = [self.mul(self.basis_vector(j), u) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def violation(self) -> str | None:
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                return f"the unit does not act as identity on {self.names[i]}"
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            a, b, c = self.basis_vector(i), self.basis_vector(j), self.basis_vector(k)
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return f"associativity fails on ({self.names[i]}, {self.names[j]}, {self.names[k]})"
        return None

    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i] for i in range(self.dim) for j in range(i))

    def __repr__(self) -> str:
        return f"OrdinaryAlgebra(dim={self.dim}, names={list(self.names)})"


def h0_algebra(A: AInfinityAlgebra) -> OrdinaryAlgebra:
    """Degree-0 part of a minimal connective algebra with its product ``m_2``."""
    if not A.is_minimal:
        raise ValidationError("h0_algebra expects a minimal algebra; use cohomology_algebra for DG input")
    iv = A.interval()
    if iv is not None and iv[1] > 0:
        raise ValidationError("h0_algebra expects a connective algebra")
    if A.unit is None:
        raise ValidationError("h0_algebra expects a unital algebra")
    idx = A.indices_in(0)
    table = [[A.local_vector(A.mul_basis(i, j), 0) for j in idx] for i in idx]
    return OrdinaryAlgebra(A.field, [A.names[i] for i in idx], table, A.local_vector({A.unit: A.field.one}, 0))


# -- ideals ------------------------------------------------------------------


def _span(F, vectors, n) -> list[list]:
    return row_space_basis(F, [list(v) for v in vectors], n) if vectors else []


def ideal_product(L: OrdinaryAlgebra, I: Sequence, K: Sequence) -> list[list]:
    return _span(L.field, [L.mul(u, v) for u in I for v in K], L.dim)


def two_sided_ideal(L: OrdinaryAlgebra, x: Sequence) -> list[list]:
    vecs = [L.mul(L.mul(L.basis_vector(i), x), L.basis_vector(j)) for i in range(L.dim) for j in range(L.dim)]
    return _span(L.field, vecs, L.dim)


def nilpotency_index(L: OrdinaryAlgebra, I: Sequence) -> int | None:
    """Least k with ``I^k = 0`` (0 for the zero ideal), or None if not nilpotent."""
    if not I:
        return 0
    power, k = list(I), 1
    while power:
        nxt = ideal_product(L, power, I)
        if len(nxt) == len(power):
            return None
        power, k = nxt, k + 1
    return k


@dataclass
class RadicalIdeal:
    algebra: OrdinaryAlgebra
    basis: list[list]
    index: int
    method: str

    @property
    def dim(self) -> int:
        return len(self.basis)


def _trace_form_kernel(L: OrdinaryAlgebra) -> list[list]:
    F = L.field
    traces = []
    for i in range(L.dim):
        row = []
        for j in range(L.dim):
            M = L.left_matrix(L.mul(L.basis_vector(i), L.basis_vector(j)))
            t = F.zero
            for k in range(L.dim):
                t = t + M[k, k]
            row.append(t)
        traces.append(row)
    T = Matrix._raw(F, traces, L.dim) if L.dim else Matrix.zeros(F, 0, 0)
    # x·T = 0 with T symmetric
    return _span(F, kernel_basis(T).columns(), L.dim)


def jacobson_radical(L: OrdinaryAlgebra, method: str | None = None) -> RadicalIdeal:
    """Largest nilpotent two-sided ideal.

    The trace-form kernel ``{x : tr(L_{xy}) = 0 for all y}`` always contains
    the radical and equals it in characteristic 0 or ``p > dim``.  Otherwise
    the radical is found inside it by enumerating elements over ``F_p``
    (dimension at most ``BRUTE_FORCE_MAX_DIM``).  ``method`` forces
    ``"trace form"`` or ``"search"``; the trace form is refused where it is
    not valid.
    """
    F = L.field
    T = _trace_form_kernel(L)
    p = F.characteristic
    trace_ok = p == 0 or p > L.dim
    if method not in (None, "trace form", "search"):
        raise ValidationError(f"unknown radical method {method!r}")
    if method == "trace form" and not trace_ok:
        raise ValidationError(f"the trace form does not detect the radical over F_{p} in dimension {L.dim}")
    if method == "search" and p == 0:
        raise ValidationError("search needs a finite field")
    if trace_ok and method != "search":
        J, method = T, "trace form"
    else:
        if L.dim > BRUTE_FORCE_MAX_DIM:
            raise ValidationError(
                f"radical over F_{p} of an algebra of dimension {L.dim} > {BRUTE_FORCE_MAX_DIM} is not supported")
        J, method = _radical_by_search(L, T), "search"
    idx = nilpotency_index(L, J)
    if idx is None:
        raise AssertionError("computed radical is not nilpotent")
    return RadicalIdeal(L, J, idx, method)


def _radical_by_search(L: OrdinaryAlgebra, T: list[list]) -> list[list]:
    F = L.field
    found: list[list] = []
    for coeffs in itertools.product(range(F.characteristic), repeat=len(T)):
        # one representative per line: first nonzero coefficient equal to 1
        nz = [c for c in coeffs if c]
        if not nz or nz[0] != 1:
            continue
        x = [F.zero] * L.dim
        for c, v in zip(coeffs, T):
            if c:
                x = [a + F(c) * b for a, b in zip(x, v)]
        if found and in_span(F, found, x, L.dim):
            continue
        if nilpotency_index(L, two_sided_ideal(L, x)) is not None:
            found = _span(F, found + [x], L.dim)
    return found


def quotient_algebra(L: OrdinaryAlgebra, J: Sequence) -> tuple[OrdinaryAlgebra, Matrix]:
    """``L / J`` on the standard vectors outside the pivots of ``J``, with the projection matrix."""
    F = L.field
    n = L.dim
    J = _span(F, J, n)
    pivots = []
    for row in J:
        pivots.append(next(i for i, c in enumerate(row) if c))
    comp = [i for i in range(n) if i not in pivots]
    basis = [L.basis_vector(i) for i in comp]
    P = Matrix.from_columns(F, J + basis, n) if n else Matrix.zeros(F, 0, 0)
    Pinv = inverse(P) if n else P
    proj = Matrix._raw(F, Pinv.rows[len(J):], n)
    table = [[proj.apply(L.mul(a, b)) for b in basis] for a in basis]
    Q = OrdinaryAlgebra(F, [L.names[i] for i in comp], table, proj.apply(L.unit))
    return Q, proj


def is_semisimple(L: OrdinaryAlgebra) -> bool:
    return jacobson_radical(L).dim == 0


# -- graded right modules over Λ ---------------------------------------------


@dataclass
class GradedRightModule:
    """Right Λ-module graded by degree; Λ acts in degree 0."""

    algebra: OrdinaryAlgebra
    dims: dict[int, int]
    action: list[dict[int, Matrix]]  # action[λ][n]: M^n -> M^n, x ↦ x·λ

    def act(self, n: int, v: Sequence, lam: Sequence) -> list:
        F = self.algebra.field
        out = [F.zero] * self.dims[n]
        for i, c in enumerate(lam):
            if c:
                w = self.action[i][n].apply(v)
                out = [a + c * b for a, b in zip(out, w)]
        return out

    def check(self) -> str | None:
        L = self.algebra
        for n, d in self.dims.items():
            for j in range(d):
                e = [L.field.one if i == j else L.field.zero for i in range(d)]
                if self.act(n, e, L.unit) != e:
                    return f"unit does not act as identity in degree {n}"
                for a in range(L.dim):
                    for b in range(L.dim):
                        lhs = self.act(n, self.act(n, e, L.basis_vector(a)), L.basis_vector(b))
                        rhs = self.act(n, e, L.mul(L.basis_vector(a), L.basis_vector(b)))
                        if lhs != rhs:
                            return f"action is not associative in degree {n}"
        return None


def module_from_minimal(A: AInfinityAlgebra) -> tuple[OrdinaryAlgebra, GradedRightModule]:
    """``A`` as a graded right module over ``H^0 = A^0`` through ``m_2``."""
    L = h0_algebra(A)
    idx0 = A.indices_in(0)
    action = []
    for lam in idx0:
        blocks = {}
        for n in A.dims():
            cols = [A.local_vector(A.mul_basis(x, lam), n) for x in A.indices_in(n)]
            blocks[n] = Matrix.from_columns(A.field, cols, len(A.indices_in(n)))
        action.append(blocks)
    return L, GradedRightModule(L, dict(A.dims()), action)


@dataclass
class H0Data:
    """``H^0(B)`` for a DG-algebra B with its cohomology contraction."""

    algebra: OrdinaryAlgebra
    lift: list[dict]          # Λ basis index -> cocycle in B^0 (sparse, global indices)
    project: Matrix           # B^0 -> Λ coordinates


def cohomology_algebra0(B: AInfinityAlgebra) -> H0Data:
    if not isinstance(B, DGAlgebra):
        B = DGAlgebra.from_algebra(B)
    F = B.field
    data = cohomology(B.complex(), {0: [B.local_vector(B.unit_vector(), 0)]} if B.unit is not None else None)
    k = data.H.dim(0)
    lifts = [B.global_vector(data.representative(0, i), 0) for i in range(k)]
    table = [[data.pi(0, B.local_vector(B.mul(u, v), 0)) for v in lifts] for u in lifts]
    unit = data.pi(0, B.local_vector(B.unit_vector(), 0))
    L = OrdinaryAlgebra(F, [f"[{i}]" for i in range(k)], table, unit)
    return H0Data(L, lifts, data.pi.block(0) if k else Matrix.zeros(F, 0, len(B.indices_in(0))))


def cohomology_module(M: DGModule, h0: H0Data) -> tuple[GradedRightModule, object]:
    """``H^*(M)`` as a graded right ``H^0``-module, with its contraction data."""
    data = cohomology(M.complex)
    action = []
    for lift in h0.lift:
        R = M.combo(lift, 0)
        blocks = {}
        for n in data.H.degrees():
            blocks[n] = data.pi.block(n) @ R.block(n) @ data.iota.block(n)
        action.append(blocks)
    return GradedRightModule(h0.algebra, dict(data.H.dims), action), data


# -- radical layers ----------------------------------------------------------


@dataclass
class RadicalLayer:
    index: int
    sub: dict[int, list[list]]       # basis of M J^{index+1} per degree
    reps: dict[int, list[list]]      # coset representatives of M J^index / M J^{index+1}
    action: list[dict[int, Matrix]]  # Λ basis -> action on the layer coordinates

    @property
    def dims(self) -> dict[int, int]:
        return {n: len(r) for n, r in self.reps.items() if r}

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def killed_by(self, L: OrdinaryAlgebra, J: Sequence) -> bool:
        F = L.field
        for j in J:
            for n, reps in self.reps.items():
                d = len(reps)
                if not d:
                    continue
                A = Matrix.zeros(F, d, d)
                for i, c in enumerate(j):
                    if c:
                        A = A + self.action[i][n].scale(c)
                if not A.is_zero():
                    return False
        return True


def _filtration(M: GradedRightModule, J: Sequence) -> list[dict[int, list[list]]]:
    """``[M, MJ, MJ^2, ..., 0]`` as per-degree bases."""
    F = M.algebra.field
    cur = {n: [[F.one if i == j else F.zero for i in range(d)] for j in range(d)] for n, d in M.dims.items() if d}
    chain = [cur]
    while any(cur.values()):
        nxt = {}
        for n, vecs in cur.items():
            imgs = [M.act(n, v, j) for v in vecs for j in J]
            nxt[n] = _span(F, imgs, M.dims[n])
        if all(len(nxt[n]) == len(cur[n]) for n in cur) and any(cur.values()):
            raise ValidationError("radical filtration does not terminate; J is not nilpotent on M")
        cur = nxt
        chain.append(cur)
    return chain


def radical_layers(M: GradedRightModule, J: RadicalIdeal | Sequence) -> list[RadicalLayer]:
    """Layers ``M J^i / M J^{i+1}`` with the induced action; empty for ``M = 0``."""
    Jb = J.basis if isinstance(J, RadicalIdeal) else list(J)
    L = M.algebra
    F = L.field
    chain = _filtration(M, Jb)
    layers = []
    for i in range(len(chain) - 1):
        top, sub = chain[i], chain[i + 1]
        reps, action = {}, [dict() for _ in range(L.dim)]
        for n, vecs in top.items():
            d = M.dims[n]
            s = sub.get(n, [])
            chosen = []
            for v in vecs:
                if span_rank(F, s + chosen + [v], d) > len(s) + len(chosen):
                    chosen.append(v)
            reps[n] = chosen
            if not chosen:
                continue
            P = Matrix.from_columns(F, s + chosen, d)
            for a in range(L.dim):
                cols = []
                for v in chosen:
                    x = solve(P, M.act(n, v, L.basis_vector(a)))
                    if x is None:
                        raise ValidationError("action does not preserve the radical filtration")
                    cols.append(x[len(s):])
                action[a][n] = Matrix.from_columns(F, cols, len(chosen))
        layer = RadicalLayer(i, sub, reps, action)
        if layer.dim:
            layers.append(layer)
    return layers


def loewy_length(M: GradedRightModule, J: RadicalIdeal | Sequence) -> int:
    return len(radical_layers(M, J))


@dataclass(frozen=True)
class GenerationBound:
    N: int
    N_prime: int
    N_double_prime: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.N, self.N_prime, self.N_double_prime)


def generation_bound(A: AInfinityAlgebra) -> GenerationBound:
    """``N`` = number of nonzero cohomology degrees, ``N′`` = Loewy length of
    ``H^*`` over ``H^0``, ``N″ = N·N′``."""
    if A.is_minimal:
        L, M = module_from_minimal(A)
    else:
        B = A if isinstance(A, DGAlgebra) else DGAlgebra.from_algebra(A)
        h0 = cohomology_algebra0(B)
        L = h0.algebra
        M, _ = cohomology_module(DGModule.regular(B), h0)
    J = jacobson_radical(L)
    N = sum(1 for d in M.dims.values() if d)
    Np = loewy_length(M, J)
    return GenerationBound(N, Np, N * Np)


# -- idempotents -------------------------------------------------------------


def _poly_domain(F: Field):
    if F.characteristic == 0:
        return {"domain": sympy.QQ}
    return {"modulus": F.characteristic}


def _to_sympy(F: Field, c):
    if F.characteristic == 0:
        return sympy.Rational(c.numerator, c.denominator)
    return int(c)


def _from_sympy(F: Field, c):
    if F.characteristic == 0:
        c = sympy.Rational(c)
        return F(int(c.p)) / F(int(c.q))
    return F(int(c) % F.characteristic)


def minimal_polynomial(L: OrdinaryAlgebra, e: Sequence, c: Sequence) -> list:
    """Monic minimal polynomial of ``c`` in the corner ring with unit ``e``
    (coefficients in increasing degree)."""
    F = L.field
    powers = [list(e)]
    while True:
        nxt = L.mul(powers[-1], c)
        coords = coordinates(F, powers, nxt, L.dim)
        if coords is not None:
            return [-x for x in coords] + [F.one]
        powers.append(nxt)


def _evaluate(L: OrdinaryAlgebra, poly, e, c) -> list:
    F = L.field
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(poly, x).all_coeffs()  # highest first
    out = [F.zero] * L.dim
    for a in coeffs:
        out = L.mul(out, c)
        a = _from_sympy(F, a)
        out = [u + a * v for u, v in zip(out, e)]
    return out


def _split(L: OrdinaryAlgebra, e, c):
    """Orthogonal idempotents ``e = e1 + e2`` from a reducible min poly of ``c``, or None."""
    F = L.field
    x = sympy.Symbol("x")
    coeffs = minimal_polynomial(L, e, c)
    poly = sympy.Poly([_to_sympy(F, a) for a in reversed(coeffs)], x, **_poly_domain(F))
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None, poly.degree(), (len(factors) == 1 and factors[0][1] == 1)
    g = factors[0][0] ** factors[0][1]
    h = sympy.Poly(1, x, **_poly_domain(F))
    for f, m in factors[1:]:
        h = h * f ** m
    s, t, one = g.gcdex(h)
    e1 = _evaluate(L, (s * g).as_expr(), e, c)
    e2 = [a - b for a, b in zip(e, e1)]
    return (e1, e2), poly.degree(), False


def primitive_idempotents(L: OrdinaryAlgebra, attempts: int = 64, seed: int = 0) -> list[list]:
    """Complete set of primitive orthogonal idempotents of a semisimple algebra.

    A corner ``eLe`` is split using an element whose minimal polynomial has
    two coprime factors; it is declared primitive when some element has an
    irreducible minimal polynomial of degree ``dim eLe`` (then ``eLe`` is a
    field).  Corners that are neither (noncommutative division algebras)
    are rejected.
    """
    F = L.field
    rng = random.Random(seed)
    todo = [list(L.unit)]
    done = []
    while todo:
        e = todo.pop()
        corner = _span(F, [L.mul(L.mul(e, L.basis_vector(i)), e) for i in range(L.dim)], L.dim)
        cands = [list(v) for v in corner]
        for _ in range(attempts):
            coeffs = [F(rng.randint(-3, 3)) for _ in corner]
            cands.append([sum((a * v[k] for a, v in zip(coeffs, corner)), F.zero) for k in range(L.dim)])
        verdict = None
        for c in cands:
            parts, deg, irreducible = _split(L, e, c)
            if parts is not None:
                verdict = parts
                break
            if irreducible and deg == len(corner):
                verdict = "primitive"
                break
        if verdict is None:
            raise ValidationError("could not split the semisimple quotient into primitive idempotents")
        if verdict == "primitive":
            done.append(e)
        else:
            todo.extend(reversed(verdict))
    done.sort(key=lambda v: [str(x) for x in v])
    return done


def right_ideal_basis(L: OrdinaryAlgebra, e: Sequence) -> list[list]:
    return _span(L.field, [L.mul(e, L.basis_vector(i)) for i in range(L.dim)], L.dim)


# -- certificates -------------------------------------------------------------


@dataclass
class GeneratorData:
    """``Λ̄ = H^0(B)/J`` with the projection ``B^0 -> Λ̄`` and its primitive idempotents."""

    h0: H0Data
    radical: RadicalIdeal
    quotient: OrdinaryAlgebra
    project: Matrix           # B^0 (local coords) -> Λ̄
    idempotents: list[list]   # in Λ̄ coordinates

    def summand_basis(self, t: int) -> list[list]:
        return right_ideal_basis(self.quotient, self.idempotents[t])


def generator_data(B: DGAlgebra) -> GeneratorData:
    h0 = cohomology_algebra0(B)
    J = jacobson_radical(h0.algebra)
    Q, proj = quotient_algebra(h0.algebra, J.basis)
    idem = primitive_idempotents(Q) if Q.dim else []
    return GeneratorData(h0, J, Q, proj @ h0.project, idem)


@dataclass
class GenerationCertificate:
    algebra: dict
    module: dict
    idempotents: list[dict]          # lifts to B^0, sparse by basis name
    window: tuple[int, int]
    bound: tuple[int, int, int]      # (N, N', N'') of the algebra
    module_bound: int
    tower: list[dict]                # G_0, ..., G_L as per-degree bases
    steps: list[dict]                # {"degree", "third": [{"summand", "shift"}], "map": [[...]]}

    @property
    def length(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "module": self.module,
            "idempotents": self.idempotents,
            "window": list(self.window),
            "bound": list(self.bound),
            "module_bound": self.module_bound,
            "tower": self.tower,
            "steps": self.steps,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "GenerationCertificate":
        try:
            return cls(d["algebra"], d["module"], list(d["idempotents"]), tuple(d["window"]),
                       tuple(d["bound"]), int(d["module_bound"]), list(d["tower"]), list(d["steps"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed certificate: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def module_to_dict(M: DGModule, names: Sequence[str] | None = None) -> dict:
    B = M.algebra
    F = M.field
    sp = M.space
    labels = names or [f"m{i}" for i in range(sp.total_dim)]
    basis, where = [], []
    for n in sp.degrees():
        for j in range(sp.dim(n)):
            basis.append([labels[len(basis)], n])
            where.append((n, j))
    offset = {}
    for i, (n, j) in enumerate(where):
        offset.setdefault(n, i)

    def vec_out(n, col):
        return {basis[offset[n] + k][0]: F.format(c) for k, c in enumerate(col) if c}

    d_entries, act_entries = [], []
    for i, (n, j) in enumerate(where):
        if sp.dim(n + 1):
            col = M.complex.diff(n).column(j)
            if any(col):
                d_entries.append({"in": basis[i][0], "out": vec_out(n + 1, col)})
        for b in range(B.dim):
            if b == B.unit:
                continue
            tgt = n + B.degree(b)
            if not sp.dim(tgt):
                continue
            col = M.action[b].block(n).column(j)
            if any(col):
                act_entries.append({"in": [basis[i][0], B.names[b]], "out": vec_out(tgt, col)})
    return {"basis": basis, "d": d_entries, "action": act_entries}


def module_from_dict(B: AInfinityAlgebra, d: Mapping) -> DGModule:
    F = B.field
    try:
        basis = [(str(nm), int(deg)) for nm, deg in d["basis"]]
    except (KeyError, TypeError, ValueError):
        raise ValidationError("module basis must be a list of [name, degree] pairs") from None
    labels: dict[int, list] = {}
    pos = {}
    for nm, deg in basis:
        if nm in pos:
            raise ValidationError(f"repeated module basis name {nm!r}")
        pos[nm] = (deg, len(labels.setdefault(deg, [])))
        labels[deg].append(nm)
    sp = GradedVectorSpace(labels)
    bidx = {nm: i for i, nm in enumerate(B.names)}

    def column(out, deg):
        col = [F.zero] * sp.dim(deg)
        for nm, c in out.items():
            if nm not in pos or pos[nm][0] != deg:
                raise ValidationError(f"module entry {nm!r} is not in degree {deg}")
            col[pos[nm][1]] = F.parse(str(c))
        return col

    dcols: dict[int, dict] = {}
    for e in d.get("d", []):
        deg, j = pos[e["in"]]
        dcols.setdefault(deg, {})[j] = column(e["out"], deg + 1)
    dblocks = {}
    for n in sp.degrees():
        if sp.dim(n + 1):
            cols = [dcols.get(n, {}).get(j, [F.zero] * sp.dim(n + 1)) for j in range(sp.dim(n))]
            dblocks[n] = Matrix.from_columns(F, cols, sp.dim(n + 1))
    C = CochainComplex(F, sp, dblocks)
    acols: dict[int, dict] = {}
    for e in d.get("action", []):
        m, b = e["in"]
        if b not in bidx:
            raise ValidationError(f"unknown algebra element {b!r} in module action")
        deg, j = pos[m]
        acols.setdefault(bidx[b], {}).setdefault(deg, {})[j] = column(e["out"], deg + B.degree(bidx[b]))
    action = {}
    for b in range(B.dim):
        if b == B.unit:
            action[b] = GradedLinearMap.identity(F, sp)
            continue
        blocks = {}
        for n in sp.degrees():
            tgt = n + B.degree(b)
            if sp.dim(tgt):
                cols = [acols.get(b, {}).get(n, {}).get(j, [F.zero] * sp.dim(tgt)) for j in range(sp.dim(n))]
                blocks[n] = Matrix.from_columns(F, cols, sp.dim(tgt))
        action[b] = GradedLinearMap(F, sp, sp, B.degree(b), blocks)
    return DGModule(B, C, action)


def _fmt_vectors(F, vecs):
    return [[F.format(c) for c in v] for v in vecs]


def _parse_vectors(F, vecs, dim):
    out = []
    for v in vecs:
        if len(v) != dim:
            raise ValidationError("vector of the wrong length in certificate")
        out.append([F.parse(str(c)) for c in v])
    return out


def _connective_dg(B: AInfinityAlgebra) -> DGAlgebra:
    if not isinstance(B, DGAlgebra):
        B = DGAlgebra.from_algebra(B)
    if any(d > 0 for d in B.degrees):
        raise ValidationError("certificates need a DG-algebra concentrated in degrees ≤ 0")
    if B.unit is None:
        raise ValidationError("certificates need a unital DG-algebra")
    return B


def cone_certificate(M: DGModule) -> GenerationCertificate:
    """Tower of submodules of ``M`` whose steps are sums of shifts of simple summands of ``Λ̄``."""
    B = _connective_dg(M.algebra)
    F = M.field
    gen = generator_data(B)
    Hmod, data = cohomology_module(M, gen.h0)
    bound = generation_bound(B)
    n_degrees = sorted(n for n, d in Hmod.dims.items() if d)
    nil = gen.radical.index if gen.radical.dim else 1
    C = M.complex
    dims = {n: C.dim(n) for n in C.degrees()}

    def std(n):
        return [[F.one if i == j else F.zero for i in range(dims[n])] for j in range(dims[n])]

    def boundaries(n):
        if not C.dim(n - 1) or not dims.get(n):
            return []
        return _span(F, C.diff(n - 1).columns(), dims[n])

    def below(n):
        return {m: std(m) for m in dims if m < n and dims[m]}

    def as_list(G):
        return {str(n): _fmt_vectors(F, v) for n, v in sorted(G.items()) if v}

    chain = _filtration(Hmod, gen.radical.basis)
    tower = []
    steps = []
    lo = n_degrees[0] if n_degrees else 0
    G0 = below(lo)
    if boundaries(lo):
        G0[lo] = boundaries(lo)
    tower.append(as_list(G0))
    for n in n_degrees:
        reps = [data.iota.block(n).column(i) for i in range(Hmod.dims[n])]
        layers = [lev.get(n, []) for lev in chain]  # H^n J^k, k = 0, 1, ...
        depth = max(k for k, lev in enumerate(layers) if lev) + 1
        bnd = boundaries(n)
        for k in range(depth - 1, -1, -1):
            def lift(vs):
                return [_combine(F, reps, v, dims[n]) for v in vs]
            W_next = _span(F, bnd + lift(layers[k]), dims[n])
            G = below(n)
            G[n] = W_next
            # layer = H^n J^k / H^n J^{k+1} with its Λ̄-summand decomposition
            sub = layers[k + 1] if k + 1 < len(layers) else []
            chosen = []
            for v in layers[k]:
                if span_rank(F, sub + chosen + [v], Hmod.dims[n]) > len(sub) + len(chosen):
                    chosen.append(v)
            third, q_rows = _decompose_layer(gen, Hmod, n, sub, chosen, data, W_next, F, dims[n])
            steps.append({"degree": n, "third": [{"summand": t, "shift": -n} for t in third],
                          "map": _fmt_vectors(F, q_rows)})
            tower.append(as_list(G))
    idem = []
    for e in gen.idempotents:
        lifted = _lift_to_b0(B, gen, e)
        idem.append({B.names[i]: F.format(c) for i, c in sorted(lifted.items())})
    window = (-n_degrees[-1], -n_degrees[0]) if n_degrees else (0, 0)
    Mdict = module_to_dict(M)
    return GenerationCertificate(algebra_to_dict(B), Mdict, idem, window, bound.as_tuple(),
                                 len(n_degrees) * nil, tower, steps)


def _combine(F, vectors, coeffs, dim):
    out = [F.zero] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            out = [a + c * b for a, b in zip(out, v)]
    return out


def _lift_to_b0(B, gen: GeneratorData, e) -> dict:
    """A preimage of ``e ∈ Λ̄`` in ``B^0`` (sparse, global indices)."""
    x = solve(gen.project, e)
    if x is None:
        raise AssertionError("projection B^0 -> Λ̄ is not surjective")
    return B.global_vector(x, 0)


def _decompose_layer(gen: GeneratorData, Hmod: GradedRightModule, n, sub, chosen, data, W_next, F, dimM):
    """Greedy decomposition of a semisimple layer into summands ``e_t Λ̄``.

    Returns the summand indices and the matrix of ``q: W_next -> ⊕ e_t Λ̄``
    in the basis ``W_next``.
    """
    dH = Hmod.dims[n]
    P = Matrix.from_columns(F, sub + chosen, dH)

    def layer_coords(h):
        x = solve(P, h)
        return x[len(sub):]

    def act_bar(h, lam_bar):
        # lift λ̄ ∈ Λ̄ to Λ through the quotient section (standard vectors)
        lam = _section(gen, lam_bar)
        return Hmod.act(n, h, lam)

    third, images = [], []
    span_vecs: list[list] = []
    d = len(chosen)
    while len(span_vecs) < d:
        progress = False
        for t, e in enumerate(gen.idempotents):
            basis_t = gen.summand_basis(t)
            for v in chosen:
                cols = [layer_coords(act_bar(v, u)) for u in basis_t]
                if not any(any(c) for c in cols):
                    continue
                if span_rank(F, span_vecs + cols, d) == len(span_vecs) + len(cols):
                    third.append(t)
                    images.extend(cols)
                    span_vecs = span_vecs + cols
                    progress = True
                    break
            if len(span_vecs) >= d:
                break
        if not progress:
            raise AssertionError("layer is not a sum of summands of Λ̄")
    # psi: ⊕ e_t Λ̄ -> layer, columns = images; q = psi^{-1} ∘ (layer coordinates of π)
    psi_inv = inverse(Matrix.from_columns(F, images, d))
    pi = data.pi.block(n)
    rows = []
    for w in W_next:
        rows.append(psi_inv.apply(layer_coords(pi.apply(w))))
    # rows[j] = q(W_next[j]); store as matrix with columns = basis of W_next
    q = Matrix.from_columns(F, rows, d)
    return third, q.rows


def _section(gen: GeneratorData, lam_bar) -> list:
    """Lift ``Λ̄ -> Λ`` along the standard-vector section of the quotient."""
    L = gen.h0.algebra
    F = L.field
    names = gen.quotient.names
    out = [F.zero] * L.dim
    for c, nm in zip(lam_bar, names):
        out[L.names.index(nm)] = c
    return out


# -- verification --------------------------------------------------------------


@dataclass
class CertificateReport:
    ok: bool
    length: int = 0
    within_algebra_bound: bool = False
    failure: str | None = None
    step: int | None = None

    def describe(self) -> str:
        if self.ok:
            return f"certificate verified: tower of length {self.length}"
        where = f" (step {self.step})" if self.step is not None else ""
        return f"certificate rejected{where}: {self.failure}"


def _submodule(M: DGModule, G: Mapping[int, list[list]]) -> tuple[CochainComplex, dict[int, Matrix]] | None:
    """Complex of the subspace ``G`` (column bases) if it is a DG-submodule, else None."""
    F = M.field
    mats = {n: Matrix.from_columns(F, v, M.complex.dim(n)) for n, v in G.items() if v}
    for n, S in mats.items():
        if span_rank(F, S.columns(), S.nrows) != S.ncols:
            return None

    def coords(n, v):
        if not any(v):
            return []
        if n not in mats:
            return None
        return solve(mats[n], v)

    labels = {n: [(n, j) for j in range(S.ncols)] for n, S in mats.items()}
    sp = GradedVectorSpace(labels)
    blocks = {}
    for n, S in mats.items():
        cols = []
        for v in S.columns():
            x = coords(n + 1, M.complex.diff(n).apply(v))
            if x is None:
                return None
            cols.append(x if x else [F.zero] * sp.dim(n + 1))
        if sp.dim(n + 1):
            blocks[n] = Matrix.from_columns(F, cols, sp.dim(n + 1))
        for b in range(M.algebra.dim):
            tgt = n + M.algebra.degree(b)
            for v in S.columns():
                img = M.action[b].block(n).apply(v) if M.complex.dim(tgt) else []
                if coords(tgt, img) is None:
                    return None
    return CochainComplex(F, sp, blocks), mats


def verify_certificate(cert: GenerationCertificate | Mapping) -> CertificateReport:
    """Re-derive every claim of a certificate from its algebra and module."""
    try:
        if not isinstance(cert, GenerationCertificate):
            cert = GenerationCertificate.from_dict(cert)
        F = field_from_tag(cert.algebra["field"])
        B = _connective_dg(algebra_from_dict(cert.algebra, dg=True))
        M = module_from_dict(B, cert.module)
    except (ValidationError, KeyError, TypeError) as exc:
        return CertificateReport(False, failure=f"malformed certificate: {exc}")
    gen = generator_data(B)
    Q = gen.quotient
    idem = []
    for t, e in enumerate(cert.idempotents):
        try:
            vec = {B.names.index(nm): F.parse(str(c)) for nm, c in e.items()}
        except ValueError:
            return CertificateReport(False, failure=f"idempotent {t} names an unknown basis element")
        if any(B.degrees[i] != 0 for i in vec):
            return CertificateReport(False, failure=f"idempotent {t} is not in degree 0")
        eb = gen.project.apply(B.local_vector(vec, 0))
        if not any(eb) or Q.mul(eb, eb) != eb:
            return CertificateReport(False, failure=f"idempotent {t} is not a nonzero idempotent of H^0/J")
        idem.append(eb)
    bound = generation_bound(B)
    if tuple(cert.bound) != bound.as_tuple():
        return CertificateReport(False, failure=f"declared bound {tuple(cert.bound)} ≠ recomputed {bound.as_tuple()}")
    lo, hi = cert.window
    dims = {n: M.complex.dim(n) for n in M.complex.degrees()}
    try:
        tower = [{int(n): _parse_vectors(F, v, dims.get(int(n), 0)) for n, v in G.items()} for G in cert.tower]
    except (ValidationError, ValueError) as exc:
        return CertificateReport(False, failure=f"malformed tower: {exc}")
    if len(tower) != len(cert.steps) + 1:
        return CertificateReport(False, failure="tower and steps have inconsistent lengths")
    subs = []
    for j, G in enumerate(tower):
        s = _submodule(M, G)
        if s is None:
            return CertificateReport(False, failure=f"G_{j} is not a DG-submodule", step=j)
        subs.append(s)
    if not subs[0][0].is_acyclic():
        return CertificateReport(False, failure="G_0 is not acyclic", step=0)
    for j, step in enumerate(cert.steps, start=1):
        problem = _verify_step(B, M, gen, idem, subs[j - 1], subs[j], step, lo, hi, F)
        if problem:
            return CertificateReport(False, failure=problem, step=j)
    # G_L -> M is a quasi-isomorphism
    CL, matsL = subs[-1]
    incl = ChainMap(CL, M.complex, {n: matsL[n] for n in CL.degrees()})
    if not quasi_iso_check(incl):
        return CertificateReport(False, failure="the last term of the tower is not quasi-isomorphic to M")
    length = len(cert.steps)
    if length > cert.module_bound:
        return CertificateReport(False, length, failure=f"length {length} exceeds the declared bound {cert.module_bound}")
    return CertificateReport(True, length, length <= bound.N_double_prime)


def _verify_step(B, M, gen, idem, prev, nxt, step, lo, hi, F) -> str | None:
    Cp, matsP = prev
    Cn, matsN = nxt
    try:
        n = int(step["degree"])
        third = [(int(s["summand"]), int(s["shift"])) for s in step["third"]]
        q_rows = step["map"]
    except (KeyError, TypeError, ValueError):
        return "malformed step"
    for t, i in third:
        if not lo <= i <= hi:
            return f"shift {i} lies outside the declared window [{lo}, {hi}]"
        if not 0 <= t < len(idem):
            return f"summand {t} is not declared"
    if any(-i != n for _, i in third):
        return f"third term is not concentrated in degree {n}"
    # inclusion G_prev -> G_next
    blocks = {}
    for m, S in matsP.items():
        T = matsN.get(m)
        if T is None:
            return f"G_prev is not contained in G_next in degree {m}"
        cols = []
        for v in S.columns():
            x = solve(T, v)
            if x is None:
                return f"G_prev is not contained in G_next in degree {m}"
            cols.append(x)
        blocks[m] = Matrix.from_columns(F, cols, T.ncols)
    incl = ChainMap(Cp, Cn, blocks)
    cone = mapping_cone(incl)
    # the third term T = ⊕ e_t Λ̄ placed in degree n
    Q = gen.quotient
    bases = [right_ideal_basis(Q, idem[t]) for t, _ in third]
    tdim = sum(len(b) for b in bases)
    Tsp = GradedVectorSpace({n: list(range(tdim))} if tdim else {})
    Tc = CochainComplex(F, Tsp, {})
    gdim = Cn.dim(n)
    try:
        q = Matrix._raw(F, [[F.parse(str(c)) for c in row] for row in q_rows], gdim) if q_rows else \
            Matrix.zeros(F, 0, gdim)
    except (ValidationError, ValueError):
        return "malformed map"
    if q.shape != (tdim, gdim):
        return f"map has shape {q.shape}, expected {(tdim, gdim)}"
    cblocks = {}
    if tdim:
        cdim = Cp.dim(n + 1)
        cblocks[n] = Matrix.zeros(F, tdim, cdim).hstack(q)
    try:
        f = ChainMap(cone.complex, Tc, cblocks)
    except Exception:
        return "map from the cone is not a chain map"
    # B-linearity on G_next^n: q(x·b) = q(x)·b; B^{<0} acts by 0 on T
    S = matsN.get(n)
    for b in B.indices_in(0):
        R = M.action[b].block(n)
        bb = gen.project.apply(B.local_vector({b: F.one}, 0))
        # action of b on T coordinates: u ↦ u·b̄ inside each summand
        rows = [[F.zero] * tdim for _ in range(tdim)]
        off = 0
        for basis_t in bases:
            P = Matrix.from_columns(F, basis_t, Q.dim)
            for jj, u in enumerate(basis_t):
                x = solve(P, Q.mul(u, bb))
                if x is None:
                    return "summand is not a right ideal"
                for ii, c in enumerate(x):
                    rows[off + ii][off + jj] = c
            off += len(basis_t)
        act_T = Matrix._raw(F, rows, tdim) if tdim else Matrix.zeros(F, 0, 0)
        if S is None:
            continue
        for jcol, v in enumerate(S.columns()):
            img = R.apply(v)
            x = solve(S, img)
            lhs = q.apply(x)
            rhs = act_T.apply(q.column(jcol))
            if lhs != rhs:
                return f"map is not B-linear for {B.names[b]}"
    if not quasi_iso_check(f):
        return "cone of the step is not quasi-isomorphic to the named third term"
    return None
