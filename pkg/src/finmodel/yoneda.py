"""Endomorphism DG-algebra of a minimal A∞-algebra over itself.

An element of degree ``n`` is a family ``φ = (φ_m)_{m ≥ 1}`` of maps
``φ_m: (sA)^{⊗m} -> sA`` of degree ``n`` on the suspension, so that the
underlying map ``A^{⊗m} -> A`` has degree ``n + 1 - m``.  With the shifted
operations ``b_k`` the differential and composition are

    (dφ)_l    = Σ_i b_{l-i+1}(1^{⊗l-i} ⊗ φ_i) - (-1)^n Σ_{r+s+t=l} φ_{r+1+t}(1^{⊗r} ⊗ b_s ⊗ 1^{⊗t})
    (ψ∘φ)_l   = Σ_i ψ_{l-i+1}(1^{⊗l-i} ⊗ φ_i)

with Koszul signs from moving ``φ`` (resp. ``b_s``) past the inputs to its
left.  These are morphisms of left A∞-modules, so the construction applied
to ``A`` yields a model of ``A^op``; :func:`finite_model` therefore starts
from the opposite algebra.

Basis elements of the window are pairs ``(inputs, output)`` of basis
indices: the map sending ``sa_{inputs}`` to ``sa_output`` and every other
basis tensor to 0.  Composition of two such elements is a single basis
element up to sign, which keeps the product sparse.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping

from .ainf import AInfinityAlgebra, DGAlgebra, axpy, opposite, to_shifted
from .complexes import ChainMap, CochainComplex, ComplexError, smart_truncate_leq0
from .exactlin import Matrix, ValidationError, in_span, rank, solve, span_rank
from .graded import GradedVectorSpace, iter_tuples

Key = tuple  # (inputs tuple, output index)


def end_degree_interval(a: int, b: int, m: int) -> tuple[int, int]:
    """Degrees occupied by the arity-``m`` factor when A lives in ``[a, b]``."""
    if m < 1:
        raise ValidationError("arity must be at least 1")
    if a > 0 or b < 0:
        raise ValidationError("interval must contain 0")
    return (a + m * (1 - b) - 1, b + m * (1 - a) - 1)


def contributing_arities(a: int, n: int) -> range:
    """Arities ``m`` with ``n`` in the arity-``m`` interval, for ``b = 0``."""
    if a > 0:
        raise ValidationError("interval must contain 0")
    lo = max(1, -(-(n + 1) // (1 - a)))
    return range(lo, n + 1 - a + 1)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


class EndomorphismWindow:
    """Degrees ``[lo, hi]`` of the endomorphism DG-algebra of ``A``."""

    def __init__(self, A: AInfinityAlgebra, lo: int, hi: int):
        if lo > hi:
            raise ValidationError(f"empty window [{lo}, {hi}]")
        if not A.is_minimal:
            raise ValidationError("endomorphism windows need a minimal algebra (m_1 = 0)")
        iv = A.interval()
        if iv is not None and iv[1] > 0:
            raise ValidationError("endomorphism windows need a connective algebra")
        self.source = A
        self.field = A.field
        self.lo, self.hi = lo, hi
        self.a = iv[0] if iv else 0
        self.sdeg = [d - 1 for d in A.degrees]
        self.b = to_shifted(A)
        # b entries indexed by last input and by output
        self._by_last: dict[int, list] = {}
        self._by_out: dict[int, list] = {}
        for k, table in self.b.items():
            for inputs, vec in table.items():
                self._by_last.setdefault(inputs[-1], []).append((inputs[:-1], vec))
                for y, c in vec.items():
                    self._by_out.setdefault(y, []).append((inputs, c))
        self.basis: dict[int, list[Key]] = {}
        self.index: dict[Key, int] = {}
        self._degree_of: dict[Key, int] = {}
        for n in range(lo, hi + 1):
            keys = []
            for m in contributing_arities(self.a, n):
                for out in range(A.dim):
                    for ins in iter_tuples(self.sdeg, m, self.sdeg[out] - n):
                        keys.append((ins, out))
            self.basis[n] = keys
            for i, k in enumerate(keys):
                self.index[k] = i
                self._degree_of[k] = n
        self.names = []
        self._offset = {}
        for n in range(lo, hi + 1):
            self._offset[n] = len(self.names)
            self.names.extend(self.key_name(k) for k in self.basis[n])
        self._global = {}
        self._dmat: dict[int, Matrix] = {}
        self._complex = None

    # -- bookkeeping ------------------------------------------------------

    def key_name(self, key: Key) -> str:
        ins, out = key
        nm = self.source.names
        return f"[{','.join(nm[i] for i in ins)}>{nm[out]}]"

    def key_degree(self, key: Key) -> int:
        ins, out = key
        return self.sdeg[out] - sum(self.sdeg[i] for i in ins)

    @property
    def dims(self) -> dict[int, int]:
        return {n: len(k) for n, k in self.basis.items()}

    def in_window(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def identity(self) -> dict:
        """The family with ``φ_1 = id`` and all other components zero."""
        one = self.field.one
        return {((y,), y): one for y in range(self.source.dim)}

    # -- differential and product on sparse elements ------------------------

    def d(self, phi: Mapping[Key, object], n: int) -> dict:
        """Differential of a homogeneous degree-``n`` element."""
        F = self.field
        out: dict = {}
        sd = self.sdeg
        eps = F(-1 if n % 2 == 0 else 1)  # -(-1)^n
        for (ins, y), c in phi.items():
            # b_{k}(c_1, ..., c_{k-1}, φ(ins)): φ passes c_1..c_{k-1}
            for pre, vec in self._by_last.get(y, ()):
                s = F(_sign(n * sum(sd[j] for j in pre)))
                for z, bc in vec.items():
                    key = (pre + ins, z)
                    v = out.get(key, F.zero) + s * c * bc
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
            # φ(c_1..c_r, b_s(...), ...): b_s passes c_1..c_r
            passed = 0
            for r, x in enumerate(ins):
                for tup, bc in self._by_out.get(x, ()):
                    key = (ins[:r] + tup + ins[r + 1:], y)
                    v = out.get(key, F.zero) + eps * F(_sign(passed)) * c * bc
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
                passed += sd[x]
        return out

    def compose(self, psi: Mapping[Key, object], p: int, phi: Mapping[Key, object], q: int) -> dict:
        """``ψ ∘ φ`` for homogeneous ψ of degree p and φ of degree q."""
        F = self.field
        sd = self.sdeg
        by_out: dict[int, list] = {}
        for (ins, y), c in phi.items():
            by_out.setdefault(y, []).append((ins, c))
        out: dict = {}
        for (ins, y), c in psi.items():
            x = ins[-1]
            if x not in by_out:
                continue
            pre = ins[:-1]
            s = F(_sign(q * sum(sd[j] for j in pre)))
            for ins2, c2 in by_out[x]:
                key = (pre + ins2, y)
                v = out.get(key, F.zero) + s * c * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    # -- matrices -----------------------------------------------------------

    def to_column(self, phi: Mapping[Key, object], n: int) -> list:
        F = self.field
        col = [F.zero] * len(self.basis.get(n, ()))
        for key, c in phi.items():
            if c:
                i = self.index.get(key)
                if i is None or self._degree_of[key] != n:
                    raise ValidationError(f"{self.key_name(key)} is not a degree-{n} basis element of the window")
                col[i] = c
        return col

    def from_column(self, col, n: int) -> dict:
        return {self.basis[n][i]: c for i, c in enumerate(col) if c}

    def d_matrix(self, n: int) -> Matrix:
        """Block ``d: End^n -> End^{n+1}``; requires both degrees in the window."""
        if not (self.in_window(n) and self.in_window(n + 1)):
            raise ValidationError(f"d^{n} leaves the window [{self.lo}, {self.hi}]")
        if n not in self._dmat:
            cols = [self.to_column(self.d({k: self.field.one}, n), n + 1) for k in self.basis[n]]
            self._dmat[n] = Matrix.from_columns(self.field, cols, len(self.basis[n + 1]))
        return self._dmat[n]

    def complex(self) -> CochainComplex:
        """The window as a complex; ``d`` out of the top degree is set to zero."""
        if self._complex is None:
            space = GradedVectorSpace({n: [self.key_name(k) for k in keys] for n, keys in self.basis.items()})
            blocks = {n: self.d_matrix(n) for n in range(self.lo, self.hi)}
            self._complex = CochainComplex(self.field, space, blocks)
        return self._complex

    def interior_cohomology_dims(self) -> dict[int, int]:
        """Cohomology in degrees whose neighbours both lie in the window."""
        out = {}
        for n in range(self.lo + 1, self.hi):
            dim = len(self.basis[n])
            r_in = rank(self.d_matrix(n - 1)) if self.basis[n - 1] and dim else 0
            r_out = rank(self.d_matrix(n)) if self.basis[n + 1] and dim else 0
            out[n] = dim - r_in - r_out
        if self.lo <= self.a:
            # nothing lives below a, so degree lo has no incoming differential
            n = self.lo
            if n < self.hi:
                dim = len(self.basis[n])
                out[n] = dim - (rank(self.d_matrix(n)) if dim and self.basis[n + 1] else 0)
        return dict(sorted(out.items()))

    # -- duck-typed algebra interface used by the truncation ----------------

    @property
    def unit(self):
        return None

    def unit_vector(self) -> dict:
        if not self.in_window(0):
            return {}
        return self.to_global(self.identity(), 0)

    def degree(self, i: int) -> int:
        for n in range(self.hi, self.lo - 1, -1):
            if i >= self._offset[n]:
                return n
        raise IndexError(i)

    def to_global(self, phi: Mapping, n: int) -> dict:
        off = self._offset[n]
        return {off + self.index[k]: c for k, c in phi.items() if c}

    def from_global(self, vec: Mapping) -> dict[int, dict]:
        parts: dict[int, dict] = {}
        for i, c in vec.items():
            n = self.degree(i)
            parts.setdefault(n, {})[self.basis[n][i - self._offset[n]]] = c
        return parts

    def local_vector(self, vec: Mapping, n: int) -> list:
        parts = self.from_global(vec)
        if any(m != n and any(p.values()) for m, p in parts.items()):
            raise ValidationError(f"vector is not homogeneous of degree {n}")
        return self.to_column(parts.get(n, {}), n)

    def global_vector(self, col, n: int) -> dict:
        off = self._offset[n]
        return {off + i: c for i, c in enumerate(col) if c}

    def diff(self, vec: Mapping) -> dict:
        out: dict = {}
        for n, phi in self.from_global(vec).items():
            if n + 1 > self.hi:
                raise ValidationError(f"d leaves the window at degree {n}")
            axpy(out, self.field.one, self.to_global(self.d(phi, n), n + 1))
        return out

    def mul(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        pu, pv = self.from_global(u), self.from_global(v)
        for p, psi in pu.items():
            for q, phi in pv.items():
                prod = self.compose(psi, p, phi, q)
                if not prod:
                    continue
                if not self.in_window(p + q):
                    raise ValidationError(f"product leaves the window at degree {p + q}")
                axpy(out, self.field.one, self.to_global(prod, p + q))
        return out

    def __repr__(self) -> str:
        return f"EndomorphismWindow([{self.lo}, {self.hi}], dims={self.dims})"


def endomorphism_dg(A: AInfinityAlgebra, window: tuple[int, int]) -> EndomorphismWindow:
    return EndomorphismWindow(A, window[0], window[1])


# -- property checks -------------------------------------------------------


@dataclass
class WindowCheck:
    ok: bool
    checked: int
    failure: str | None = None


def _elements(W: EndomorphismWindow, n: int) -> Iterable[tuple[Key, dict]]:
    for k in W.basis.get(n, ()):
        yield k, {k: W.field.one}


def _sample(items: list, limit: int | None, seed: int) -> list:
    if limit is None or len(items) <= limit:
        return items
    return random.Random(seed).sample(items, limit)


def check_d_squared(W: EndomorphismWindow) -> WindowCheck:
    count = 0
    for n in range(W.lo, W.hi - 1):
        for k, phi in _elements(W, n):
            dd = W.d(W.d(phi, n), n + 1)
            count += 1
            if dd:
                return WindowCheck(False, count, f"d²{W.key_name(k)} ≠ 0")
    return WindowCheck(True, count)


def _pairs(W, total_max, limit, seed):
    pairs = []
    for p in range(W.lo, W.hi + 1):
        for q in range(W.lo, W.hi + 1):
            if p + q <= total_max and W.in_window(p + q):
                pairs.extend(((p, k1), (q, k2)) for k1 in W.basis[p] for k2 in W.basis[q])
    return _sample(pairs, limit, seed)


def check_leibniz(W: EndomorphismWindow, limit: int | None = None, seed: int = 0) -> WindowCheck:
    """``d(ψ∘φ) = dψ∘φ + (-1)^{|ψ|} ψ∘dφ`` whenever ``|ψ|+|φ|+1`` is in the window."""
    F = W.field
    count = 0
    for (p, k1), (q, k2) in _pairs(W, W.hi - 1, limit, seed):
        psi, phi = {k1: F.one}, {k2: F.one}
        lhs = W.d(W.compose(psi, p, phi, q), p + q)
        rhs = W.compose(W.d(psi, p), p + 1, phi, q)
        axpy(rhs, F(_sign(p)), W.compose(psi, p, W.d(phi, q), q + 1))
        count += 1
        if lhs != rhs:
            return WindowCheck(False, count, f"Leibniz fails on ({W.key_name(k1)}, {W.key_name(k2)})")
    return WindowCheck(True, count)


def check_associative_unital(W: EndomorphismWindow, limit: int | None = None, seed: int = 0) -> WindowCheck:
    F = W.field
    one = W.identity()
    count = 0
    if W.in_window(0):
        for n in range(W.lo, W.hi + 1):
            for k, phi in _elements(W, n):
                count += 1
                if W.compose(one, 0, phi, n) != phi or W.compose(phi, n, one, 0) != phi:
                    return WindowCheck(False, count, f"identity family is not a unit on {W.key_name(k)}")
    # A product of basis elements is nonzero only when the last input of the
    # left factor is the output of the right one, and then both bracketings
    # of a triple are nonzero together; so composable triples suffice.
    by_out: dict[int, list] = {}
    for n in range(W.lo, W.hi + 1):
        for k in W.basis[n]:
            by_out.setdefault(k[1], []).append((n, k))
    items = []
    for p in range(W.lo, W.hi + 1):
        for k1 in W.basis[p]:
            for q, k2 in by_out.get(k1[0][-1], ()):
                if not W.in_window(p + q):
                    continue
                for r, k3 in by_out.get(k2[0][-1], ()):
                    if W.in_window(q + r) and W.in_window(p + q + r):
                        items.append(((p, q, r), (k1, k2, k3)))
    for (p, q, r), (k1, k2, k3) in _sample(items, limit, seed):
        a, b, c = {k1: F.one}, {k2: F.one}, {k3: F.one}
        lhs = W.compose(W.compose(a, p, b, q), p + q, c, r)
        rhs = W.compose(a, p, W.compose(b, q, c, r), q + r)
        count += 1
        if not lhs or lhs != rhs:
            return WindowCheck(False, count, f"associativity fails on ({W.key_name(k1)}, {W.key_name(k2)}, {W.key_name(k3)})")
    return WindowCheck(True, count)


# -- the finite model ------------------------------------------------------


@dataclass
class FiniteModel:
    algebra: DGAlgebra
    source: AInfinityAlgebra
    window: EndomorphismWindow
    inclusion: ChainMap
    provenance: dict = dc_field(default_factory=dict)


def model_window(A: AInfinityAlgebra) -> tuple[int, int]:
    iv = A.interval()
    a = iv[0] if iv else 0
    return (a, 1)


def finite_model(A: AInfinityAlgebra) -> FiniteModel:
    """Finite-dimensional DG-algebra quasi-isomorphic to ``A``.

    Builds the endomorphism window ``[a, 1]`` of ``A^op`` and keeps ``B^n``
    for ``n < 0`` and ``Z^0`` in degree 0.  Nothing lives below ``a``, and
    degree 1 is only needed to compute ``Z^0``.
    """
    if A.unit is None:
        raise ValidationError("finite models need a strictly unital algebra")
    if not A.is_minimal:
        raise ValidationError("finite models need a minimal algebra; take a minimal model first")
    iv = A.interval()
    if iv is not None and iv[1] > 0:
        raise ValidationError("finite models need a connective algebra")
    lo, hi = model_window(A)
    W = EndomorphismWindow(opposite(A), lo, hi)
    B, incl = smart_truncate_leq0(W, warn=False)
    return FiniteModel(B, A, W, incl, {"window": [lo, hi], "truncation": "B^{<0} + Z^0", "opposite": True})


def rho(W: EndomorphismWindow, x: int) -> dict:
    """Image of the basis element ``x`` of ``A`` in the window built on ``A^op``.

    ``ρ(x)_l(sa_1, ..., sa_l) = ± b^op_{l+1}(sa_1, ..., sa_l, sx)``: right
    multiplication by ``x`` in ``A^op``, i.e. left multiplication in ``A``.
    The sign is ``-(-1)^{|sx| Σ|sa_i|}``; the leading minus makes ``ρ(1)``
    the identity family, since ``b_2(sa, s1) = (-1)^{|a|} sa``.
    """
    F = W.field
    sd = W.sdeg
    out: dict = {}
    for k, table in W.b.items():
        if k < 2:
            continue
        for inputs, vec in table.items():
            if inputs[-1] != x:
                continue
            pre = inputs[:-1]
            s = F(-_sign(sd[x] * sum(sd[j] for j in pre)))
            for y, c in vec.items():
                out[(pre, y)] = out.get((pre, y), F.zero) + s * c
    return {k: c for k, c in out.items() if c}


@dataclass
class ModelReport:
    ok: bool
    dims_match: bool
    cocycles: bool
    basis_of_cohomology: bool
    products: bool
    b_dims: dict
    a_dims: dict
    failure: str | None = None

    def describe(self) -> str:
        if self.ok:
            return "model verified: H-dims agree, ρ spans H(B), products match m_2"
        return f"model check failed: {self.failure}"


def verify_model(A: AInfinityAlgebra, model: FiniteModel) -> ModelReport:
    """Check (i) H-dims of B = dims of A, (ii) ρ gives cocycles whose
    classes form a basis of H(B), (iii) ``[ρ(x)][ρ(y)] = [ρ(m_2(x, y))]``."""
    B = model.algebra
    W = model.window
    F = B.field
    a_dims = {n: d for n, d in A.dims().items() if d}
    try:
        Bc = B.complex()
    except ComplexError as exc:
        return ModelReport(False, False, False, False, False, {}, a_dims, f"B is not a complex: {exc}")
    b_dims = {n: d for n, d in Bc.cohomology_dims().items() if d}
    rep = ModelReport(True, b_dims == a_dims, True, True, True, b_dims, a_dims)
    if not rep.dims_match:
        rep.ok = False
        rep.failure = f"H-dims of B {b_dims} differ from dims of A {a_dims}"
        return rep
    incl = model.inclusion

    def in_B(phi: dict, n: int):
        """Coordinates in B of a window element, or None if outside B."""
        col = W.to_column(phi, n)
        if not B.indices_in(n):
            return None if any(col) else []
        return solve(incl.block(n), col)

    images = {}
    for x in range(A.dim):
        n = A.degrees[x]
        coords = in_B(rho(W, x), n)
        if coords is None or any(Bc.diff(n).apply(coords)):
            rep.ok = rep.cocycles = False
            rep.failure = f"ρ({A.names[x]}) is not a cocycle of B"
            return rep
        images[x] = coords
    for n in A.dims():
        bnd = Bc.diff(n - 1).columns()
        bnd_rank = span_rank(F, bnd, len(B.indices_in(n))) if bnd else 0
        vecs = [images[x] for x in A.indices_in(n)]
        if span_rank(F, bnd + vecs, len(B.indices_in(n))) != bnd_rank + len(vecs):
            rep.ok = rep.basis_of_cohomology = False
            rep.failure = f"ρ classes in degree {n} are linearly dependent in H(B)"
            return rep
    for x in range(A.dim):
        for y in range(A.dim):
            n = A.degrees[x] + A.degrees[y]
            if n < (A.interval() or (0, 0))[0]:
                continue
            lhs = B.mul(B.global_vector(images[x], A.degrees[x]), B.global_vector(images[y], A.degrees[y]))
            rhs: dict = {}
            for z, c in A.op(2, (x, y)).items():
                axpy(rhs, c, B.global_vector(images[z], n))
            diff = dict(lhs)
            axpy(diff, F(-1), rhs)
            col = B.local_vector(diff, n)
            bnd = Bc.diff(n - 1).columns()
            if any(col) and not (in_span(F, bnd, col, len(col)) if bnd else False):
                rep.ok = rep.products = False
                rep.failure = f"[ρ({A.names[x]})][ρ({A.names[y]})] ≠ [ρ(m_2({A.names[x]}, {A.names[y]}))]"
                return rep
    return rep

