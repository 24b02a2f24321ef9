"""A-infinity and DG algebras on a finite basis.

Operations are stored sparsely: ``ops[k][(i_1, ..., i_k)] = {j: c}``
means ``m_k(e_{i_1}, ..., e_{i_k}) = Σ c e_j``.  The unshifted Stasheff
identities used throughout are

    Σ_{r+s+t=l} (-1)^{r+st} m_{r+1+t}(1^{⊗r} ⊗ m_s ⊗ 1^{⊗t}) = 0,

evaluated with the Koszul rule.  Internally most algorithms work with
the shifted operations ``b_k`` of degree +1 on the suspension, where the
identities carry no explicit signs; see :func:`to_shifted`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .complexes import CochainComplex, CohomologyData, cohomology
from .exactlin import Field, Matrix, ValidationError
from .graded import GradedVectorSpace, iter_tuples, permutation_sign

Vec = dict  # sparse vector: basis index -> nonzero coefficient
Ops = dict  # arity -> {input tuple -> Vec}


def axpy(acc: Vec, c, v: Mapping) -> Vec:
    """acc += c * v, dropping zeros."""
    if not c:
        return acc
    for j, x in v.items():
        y = acc.get(j)
        y = c * x if y is None else y + c * x
        if y:
            acc[j] = y
        else:
            acc.pop(j, None)
    return acc


class AInfinityAlgebra:
    """Finite-dimensional A∞-algebra with operations of degree ``2 - k``."""

    def __init__(self, field: Field, names: Sequence[str], degrees: Sequence[int], ops: Mapping[int, Mapping],
                 unit: int | str | None = None, fill_unit: bool = False, check_unit: bool = True):
        if len(names) != len(degrees):
            raise ValidationError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ValidationError("basis names must be unique")
        self.field = field
        self.names = tuple(str(x) for x in names)
        self.degrees = tuple(int(d) for d in degrees)
        self.dim = len(self.names)
        if isinstance(unit, str):
            if unit not in self.names:
                raise ValidationError(f"unit {unit!r} is not a basis element")
            unit = self.names.index(unit)
        if unit is not None and self.degrees[unit] != 0:
            raise ValidationError("the unit must have degree 0")
        self.unit = unit
        clean: Ops = {}
        for k, table in ops.items():
            k = int(k)
            if k < 1:
                raise ValidationError(f"operation arity {k} < 1")
            out = {}
            for inputs, vec in table.items():
                inputs = tuple(int(i) for i in inputs)
                if len(inputs) != k:
                    raise ValidationError(f"m_{k} entry with {len(inputs)} inputs")
                target = sum(self.degrees[i] for i in inputs) + 2 - k
                v = {}
                for j, c in vec.items():
                    c = field(c)
                    if not c:
                        continue
                    if self.degrees[j] != target:
                        raise ValidationError(
                            f"m_{k}({', '.join(self.names[i] for i in inputs)}) -> {self.names[j]}: "
                            f"target degree {self.degrees[j]}, expected {target}")
                    v[int(j)] = c
                if v:
                    out[inputs] = v
            if out:
                clean[k] = out
        if fill_unit and unit is not None:
            m2 = clean.setdefault(2, {})
            one = field.one
            for x in range(self.dim):
                for key in ((unit, x), (x, unit)):
                    if key not in m2:
                        m2[key] = {x: one}
        self.ops = clean
        self._index = {}
        self._local = []
        counts: dict[int, int] = {}
        for i, d in enumerate(self.degrees):
            self._local.append(counts.get(d, 0))
            counts[d] = counts.get(d, 0) + 1
            self._index.setdefault(d, []).append(i)
        self.space = GradedVectorSpace({d: [self.names[i] for i in idx] for d, idx in self._index.items()})
        self._shifted = None
        if check_unit and unit is not None:
            problem = self.unit_violation()
            if problem:
                raise ValidationError(problem)

    # -- basic access -----------------------------------------------------

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def op(self, k: int, inputs: tuple) -> Vec:
        return self.ops.get(k, {}).get(inputs, {})

    def mul_basis(self, a: int, b: int) -> Vec:
        return self.op(2, (a, b))

    def diff_basis(self, a: int) -> Vec:
        return self.op(1, (a,))

    def mul(self, u: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            for b, y in v.items():
                axpy(out, x * y, self.mul_basis(a, b))
        return out

    def diff(self, u: Mapping) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            axpy(out, x, self.diff_basis(a))
        return out

    def unit_vector(self) -> Vec:
        return {} if self.unit is None else {self.unit: self.field.one}

    def max_arity(self) -> int:
        return max(self.ops, default=0)

    def indices_in(self, n: int) -> list[int]:
        return list(self._index.get(n, []))

    def local_vector(self, vec: Mapping, n: int) -> list:
        out = [self.field.zero] * len(self._index.get(n, []))
        for i, c in vec.items():
            if self.degrees[i] != n:
                if c:
                    raise ValidationError(f"{self.names[i]} is not in degree {n}")
                continue
            out[self._local[i]] = c
        return out

    def global_vector(self, col: Sequence, n: int) -> Vec:
        return {i: c for i, c in zip(self._index.get(n, []), col) if c}

    @property
    def is_minimal(self) -> bool:
        return 1 not in self.ops

    def interval(self) -> tuple[int, int] | None:
        return self.space.interval()

    def dims(self) -> dict[int, int]:
        return self.space.dims

    def complex(self) -> CochainComplex:
        """The underlying complex ``(A, m_1)``."""
        F = self.field
        blocks = {}
        for n in self._index:
            if n + 1 not in self._index:
                continue
            cols = [self.local_vector(self.diff_basis(i), n + 1) for i in self._index[n]]
            blocks[n] = Matrix.from_columns(F, cols, len(self._index[n + 1]))
        return CochainComplex(F, self.space, blocks)

    def unit_violation(self) -> str | None:
        u = self.unit
        one = self.field.one
        for x in range(self.dim):
            if self.op(2, (u, x)) != {x: one}:
                return f"m_2({self.names[u]}, {self.names[x]}) ≠ {self.names[x]}"
            if self.op(2, (x, u)) != {x: one}:
                return f"m_2({self.names[x]}, {self.names[u]}) ≠ {self.names[x]}"
        for k, table in self.ops.items():
            if k == 2:
                continue
            for inputs in table:
                if u in inputs:
                    return f"m_{k} does not vanish on an input containing the unit"
        return None

    def with_ops(self, ops: Mapping[int, Mapping], check_unit: bool = False) -> "AInfinityAlgebra":
        return AInfinityAlgebra(self.field, self.names, self.degrees, ops, self.unit, check_unit=check_unit)

    def __repr__(self) -> str:
        return f"AInfinityAlgebra(dims={self.dims()}, arities={sorted(self.ops)})"


class DGAlgebra(AInfinityAlgebra):
    """An A∞-algebra with only ``m_1 = d`` and an associative ``m_2``."""

    def __init__(self, field, names, degrees, ops, unit=None, fill_unit=False, check=True):
        super().__init__(field, names, degrees, ops, unit, fill_unit=fill_unit, check_unit=check)
        extra = [k for k in self.ops if k not in (1, 2)]
        if extra:
            raise ValidationError(f"DG-algebra with higher operations m_{extra}")
        if check:
            problem = self.dg_violation()
            if problem:
                raise ValidationError(problem)

    def dg_violation(self) -> str | None:
        for i in range(self.dim):
            if self.diff(self.diff_basis(i)):
                return f"d²({self.names[i]}) ≠ 0"
        for a in range(self.dim):
            for b in range(self.dim):
                lhs = self.diff(self.mul_basis(a, b))
                rhs = self.mul(self.diff_basis(a), {b: self.field.one})
                s = -1 if self.degrees[a] % 2 else 1
                axpy(rhs, self.field(s), self.mul({a: self.field.one}, self.diff_basis(b)))
                if lhs != rhs:
                    return f"Leibniz rule fails on ({self.names[a]}, {self.names[b]})"
        for a in range(self.dim):
            for b in range(self.dim):
                ab = self.mul_basis(a, b)
                for c in range(self.dim):
                    lhs = self.mul(ab, {c: self.field.one})
                    rhs = self.mul({a: self.field.one}, self.mul_basis(b, c))
                    if lhs != rhs:
                        return f"associativity fails on ({self.names[a]}, {self.names[b]}, {self.names[c]})"
        return None

    @classmethod
    def from_algebra(cls, A: AInfinityAlgebra, check: bool = True) -> "DGAlgebra":
        return cls(A.field, A.names, A.degrees, A.ops, A.unit, check=check)


def from_dg(B: DGAlgebra) -> AInfinityAlgebra:
    """View a DG-algebra as an A∞-algebra (m_1 = d, m_2 = product)."""
    if not isinstance(B, DGAlgebra):
        B = DGAlgebra.from_algebra(B)
    return AInfinityAlgebra(B.field, B.names, B.degrees, B.ops, B.unit)


# -- Stasheff identities -------------------------------------------------


@dataclass
class StasheffReport:
    ok: bool
    checked_up_to: int
    arity: int | None = None
    witness: tuple[str, ...] | None = None
    value: dict | None = None

    def describe(self) -> str:
        if self.ok:
            return f"Stasheff identities hold up to arity {self.checked_up_to}"
        return f"Stasheff identity fails at arity {self.arity} on ({', '.join(self.witness)})"


def stasheff_value(A: AInfinityAlgebra, xs: tuple[int, ...]) -> Vec:
    """Left-hand side of the arity-``len(xs)`` Stasheff identity on basis elements."""
    F = A.field
    deg = A.degrees
    l = len(xs)
    out: Vec = {}
    prefix = [0]
    for x in xs:
        prefix.append(prefix[-1] + deg[x])
    for s in range(1, l + 1):
        if s not in A.ops:
            continue
        for r in range(0, l - s + 1):
            t = l - r - s
            outer = r + 1 + t
            if outer not in A.ops:
                continue
            inner = A.op(s, xs[r:r + s])
            if not inner:
                continue
            e = r + s * t + (2 - s) * prefix[r]
            sign = F(-1 if e % 2 else 1)
            for y, c in inner.items():
                axpy(out, sign * c, A.op(outer, xs[:r] + (y,) + xs[r + s:]))
    return out


def validate(A: AInfinityAlgebra, max_arity: int | None = None) -> StasheffReport:
    """Check the Stasheff identities for every arity up to ``max_arity``.

    Failures are returned as data: the first arity and basis tuple on which
    an identity is violated.
    """
    if max_arity is None:
        max_arity = default_check_arity(A)
    for l in range(1, max_arity + 1):
        for target in sorted(set(A.degrees)):
            total = target + l - 3
            for xs in iter_tuples(A.degrees, l, total):
                v = stasheff_value(A, xs)
                if v:
                    return StasheffReport(False, max_arity, l, tuple(A.names[i] for i in xs), v)
    return StasheffReport(True, max_arity)


def default_check_arity(A: AInfinityAlgebra) -> int:
    """Arity up to which identities can be nonzero-tested meaningfully.

    For a minimal algebra in [a, 0] the operations vanish above ``2 - a``,
    so identities beyond ``(2 - a) + 1`` only involve zero terms.
    """
    iv = A.interval()
    a = iv[0] if iv else 0
    return max(3, A.max_arity() + 1, 3 - a if iv and iv[1] <= 0 else 3)


# -- shifted picture -----------------------------------------------------


def shift_sign(degrees: Sequence[int]) -> int:
    """``b_k(sx_1, ..., sx_k) = shift_sign(|x|) s m_k(x_1, ..., x_k)``.

    Comes from ``m_k = s^{-1} b_k s^{⊗k}``: the j-th copy of ``s`` (degree
    -1) passes ``x_1 ... x_{j-1}``.
    """
    k = len(degrees)
    e = sum((k - 1 - j) * d for j, d in enumerate(degrees))
    return -1 if e % 2 else 1


def to_shifted(A: AInfinityAlgebra) -> Ops:
    """Operations ``b_k`` of degree +1 on the suspension (same basis labels)."""
    if A._shifted is None:
        out = {}
        for k, table in A.ops.items():
            tk = {}
            for inputs, vec in table.items():
                s = shift_sign([A.degrees[i] for i in inputs])
                tk[inputs] = vec if s > 0 else {j: -c for j, c in vec.items()}
            out[k] = tk
        A._shifted = out
    return A._shifted


def from_shifted(field: Field, names, degrees, bops: Mapping[int, Mapping], unit=None,
                 check_unit: bool = True) -> AInfinityAlgebra:
    ops = {}
    for k, table in bops.items():
        tk = {}
        for inputs, vec in table.items():
            s = shift_sign([degrees[i] for i in inputs])
            tk[inputs] = vec if s > 0 else {j: -c for j, c in vec.items()}
        ops[k] = tk
    return AInfinityAlgebra(field, names, degrees, ops, unit, check_unit=check_unit)


def shifted_identity_value(A: AInfinityAlgebra, xs: tuple[int, ...]) -> Vec:
    """``Σ b(1^{⊗r} ⊗ b ⊗ 1^{⊗t})`` on ``sx_1 ⊗ ... ⊗ sx_l``, Koszul signs only."""
    b = to_shifted(A)
    sdeg = [d - 1 for d in A.degrees]
    l = len(xs)
    out: Vec = {}
    prefix = [0]
    for x in xs:
        prefix.append(prefix[-1] + sdeg[x])
    for s in range(1, l + 1):
        if s not in b:
            continue
        for r in range(0, l - s + 1):
            outer = l - s + 1
            if outer not in b:
                continue
            inner = b[s].get(xs[r:r + s], {})
            sign = A.field(-1 if prefix[r] % 2 else 1)
            for y, c in inner.items():
                axpy(out, sign * c, b[outer].get(xs[:r] + (y,) + xs[r + s:], {}))
    return out


def opposite(A: AInfinityAlgebra) -> AInfinityAlgebra:
    """Opposite A∞-algebra: ``b^op_k = (-1)^{k+1} b_k ∘ reversal`` in shifted terms.

    On products this is the graded opposite ``m^op_2(x, y) = (-1)^{|x||y|} m_2(y, x)``
    and ``m_1`` is unchanged.
    """
    b = to_shifted(A)
    F = A.field
    sdeg = [d - 1 for d in A.degrees]
    bop = {}
    for k, table in b.items():
        tk = {}
        for inputs, vec in table.items():
            rev = inputs[::-1]
            # reversal moving sx_{rev} into the order of ``inputs``
            sgn = permutation_sign([sdeg[i] for i in rev], list(range(k))[::-1])
            sgn *= -1 if (k + 1) % 2 else 1
            tk[rev] = {j: F(sgn) * c for j, c in vec.items()}
        bop[k] = tk
    names = A.names
    return from_shifted(F, names, A.degrees, bop, A.unit)


# -- predicates ----------------------------------------------------------


@dataclass
class Predicates:
    is_connective: bool
    is_proper: bool
    is_minimal: bool
    interval: tuple[int, int] | None
    is_locally_finite: bool
    cohomology_dims: dict[int, int]


def predicates(A: AInfinityAlgebra) -> Predicates:
    """Structural predicates, computed on cohomology when ``m_1 ≠ 0``.

    Proper and locally finite are automatic for a finite basis (a single
    object whose endomorphism complex has finite total cohomology).
    """
    if A.is_minimal:
        dims = A.dims()
    else:
        dims = A.complex().cohomology_dims()
    degs = sorted(n for n, d in dims.items() if d)
    iv = (degs[0], degs[-1]) if degs else None
    return Predicates(
        is_connective=iv is None or iv[1] <= 0,
        is_proper=True,
        is_minimal=A.is_minimal,
        interval=iv,
        is_locally_finite=True,
        cohomology_dims=dims,
    )


# -- homotopy transfer ---------------------------------------------------


@dataclass
class MinimalModel:
    algebra: AInfinityAlgebra
    source: AInfinityAlgebra
    iota: list[Vec]           # H basis index -> cocycle representative in the source
    contraction: CohomologyData

    def f1(self, i: int) -> Vec:
        return self.iota[i]


def minimal_model(B: AInfinityAlgebra, max_arity: int | None = None) -> MinimalModel:
    """Minimal A∞-structure on ``H(B)`` by homotopy transfer along a contraction.

    ``B`` must be a DG-algebra.  In shifted terms the transferred
    operations are ``b'_n = pi λ_n`` with ``λ_1 = iota`` and

        λ_n = Σ_{i+j=n} b_2(Hλ_i ⊗ Hλ_j),   Hλ_1 = iota,   Hλ_k = -h λ_k  (k ≥ 2),

    a sum over planar binary trees.  Each ``Hλ_k`` has degree 0, so no
    Koszul signs arise from the tensor products.
    """
    if not isinstance(B, DGAlgebra):
        B = DGAlgebra.from_algebra(B)
    F = B.field
    C = B.complex()
    prefer = {}
    if B.unit is not None:
        prefer[0] = [B.local_vector({B.unit: F.one}, 0)]
    data = cohomology(C, prefer)
    names, degrees, iota = [], [], []
    unit = None
    used = set()
    for n in data.H.degrees():
        for i in range(data.H.dim(n)):
            rep = B.global_vector(data.representative(n, i), n)
            if len(rep) == 1 and next(iter(rep.values())) == 1 and B.names[next(iter(rep))] not in used:
                name = B.names[next(iter(rep))]
            else:
                name = f"h{n}_{i}" if n >= 0 else f"h_{-n}_{i}"
            if B.unit is not None and rep == {B.unit: F.one}:
                unit = len(names)
            used.add(name)
            names.append(name)
            degrees.append(n)
            iota.append(rep)

    def pi(vec: Vec) -> Vec:
        out: Vec = {}
        byd: dict[int, Vec] = {}
        for j, c in vec.items():
            byd.setdefault(B.degrees[j], {})[j] = c
        for n, v in byd.items():
            if not data.H.dim(n):
                continue
            coords = data.pi(n, B.local_vector(v, n))
            offset = sum(data.H.dim(m) for m in data.H.degrees() if m < n)
            for k, c in enumerate(coords):
                if c:
                    out[offset + k] = c
        return out

    def h(vec: Vec) -> Vec:
        out: Vec = {}
        byd: dict[int, Vec] = {}
        for j, c in vec.items():
            byd.setdefault(B.degrees[j], {})[j] = c
        for n, v in byd.items():
            if n not in data.h.blocks:
                continue
            img = data.h(n, B.local_vector(v, n))
            axpy(out, F.one, B.global_vector(img, n - 1))
        return out

    b = to_shifted(B)
    b2 = b.get(2, {})

    def b2_apply(u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for p, x in u.items():
            for q, y in v.items():
                axpy(out, x * y, b2.get((p, q), {}))
        return out

    lam: dict[tuple, Vec] = {}
    Hlam: dict[tuple, Vec] = {}

    def get_H(t: tuple) -> Vec:
        if len(t) == 1:
            return iota[t[0]]
        if t not in Hlam:
            v = h(get_lam(t))
            Hlam[t] = {j: -c for j, c in v.items()}
        return Hlam[t]

    def get_lam(t: tuple) -> Vec:
        if len(t) == 1:
            return iota[t[0]]
        if t not in lam:
            out: Vec = {}
            for i in range(1, len(t)):
                left = get_H(t[:i])
                if not left:
                    continue
                right = get_H(t[i:])
                if right:
                    axpy(out, F.one, b2_apply(left, right))
            lam[t] = out
        return lam[t]

    if max_arity is None:
        a = min(degrees) if degrees else 0
        top = max(degrees) if degrees else 0
        max_arity = max(2, 2 - a) if top <= 0 else 4
    bops: dict[int, dict] = {}
    hdeg = sorted(set(degrees))
    for n in range(2, max_arity + 1):
        table = {}
        for target in hdeg:
            # shifted: sum(|x|-1) + 1 = target - 1
            total = target - 2 + n
            for t in iter_tuples(degrees, n, total):
                v = pi(get_lam(t))
                if v:
                    table[t] = v
        if table:
            bops[n] = table
    A = from_shifted(F, names, degrees, bops, unit)
    return MinimalModel(A, B, iota, data)


# -- plain-data form -----------------------------------------------------


def algebra_to_dict(A: AInfinityAlgebra) -> dict:
    """Canonical JSON-ready description; unit products are left implicit."""
    F = A.field
    ops = {}
    for k in sorted(A.ops):
        entries = []
        for inputs in sorted(A.ops[k]):
            if k == 2 and A.unit is not None and A.unit in inputs:
                continue
            vec = A.ops[k][inputs]
            entries.append({
                "in": [A.names[i] for i in inputs],
                "out": {A.names[j]: F.format(vec[j]) for j in sorted(vec)},
            })
        if entries:
            ops[str(k)] = entries
    out = {
        "field": F.tag(),
        "basis": [[n, d] for n, d in zip(A.names, A.degrees)],
    }
    if A.unit is not None:
        out["unit"] = A.names[A.unit]
    out["ops"] = ops
    return out


def algebra_from_dict(data: Mapping, field: Field | None = None, dg: bool = False) -> AInfinityAlgebra:
    """Inverse of :func:`algebra_to_dict`; errors name the offending entry."""
    from .exactlin import field_from_tag

    if not isinstance(data, Mapping):
        raise ValidationError("algebra description must be an object")
    for key in ("field", "basis"):
        if key not in data:
            raise ValidationError(f"missing key {key!r}")
    F = field or field_from_tag(str(data["field"]))
    basis = data["basis"]
    if not isinstance(basis, list) or not all(isinstance(b, list) and len(b) == 2 for b in basis):
        raise ValidationError("basis must be a list of [name, degree] pairs")
    names = [str(b[0]) for b in basis]
    degrees = []
    for name, d in basis:
        if not isinstance(d, int) or isinstance(d, bool):
            raise ValidationError(f"degree of {name!r} must be an integer")
        degrees.append(d)
    index = {n: i for i, n in enumerate(names)}
    if len(index) != len(names):
        raise ValidationError("basis names must be unique")
    ops: dict[int, dict] = {}
    raw_ops = data.get("ops", {})
    if not isinstance(raw_ops, Mapping):
        raise ValidationError("ops must be an object keyed by arity")
    for key, entries in raw_ops.items():
        try:
            k = int(key)
        except ValueError:
            raise ValidationError(f"ops key {key!r} is not an arity") from None
        table = ops.setdefault(k, {})
        for pos, entry in enumerate(entries):
            where = f"ops[{key}][{pos}]"
            try:
                inputs = tuple(index[n] for n in entry["in"])
                vec = {index[n]: F.parse(str(c)) for n, c in entry["out"].items()}
            except KeyError as exc:
                raise ValidationError(f"{where}: unknown basis name or missing field {exc}") from None
            except ValidationError as exc:
                raise ValidationError(f"{where}: {exc}") from None
            if inputs in table:
                raise ValidationError(f"{where}: duplicate entry")
            table[inputs] = vec
    unit = data.get("unit")
    cls = DGAlgebra if dg else AInfinityAlgebra
    return cls(F, names, degrees, ops, unit, fill_unit=unit is not None)
