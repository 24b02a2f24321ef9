import warnings

import pytest
from hypothesis import given, settings, strategies as st

from builders import corpus, massey_dga
from oracles import sympy_rank
from finmodel.ainf import DGAlgebra
from finmodel.complexes import (
    ChainMap,
    CochainComplex,
    ComplexError,
    DGModule,
    check_contraction,
    cohomology,
    induced_map,
    mapping_cone,
    quasi_iso_check,
    smart_truncate_leq0,
)
from finmodel.exactlin import GF, QQ, Matrix, ValidationError, kernel_basis, rank
from finmodel.graded import GradedLinearMap


def cx(dims, d, F=QQ):
    return CochainComplex.from_dims(F, dims, {n: Matrix(F, m) for n, m in d.items()})


def test_acyclic_two_term():
    assert cx({0: 1, 1: 1}, {0: [[1]]}).cohomology_dims() == {}


def test_zero_differential():
    C = cx({-1: 1, 0: 2}, {})
    H = cohomology(C)
    assert H.dims == {-1: 1, 0: 2}
    assert H.iota == GradedLinearMap.identity(QQ, C.space)
    assert H.pi == GradedLinearMap.identity(QQ, C.space)
    assert H.h.is_zero()


def test_d_squared_checked():
    with pytest.raises(ComplexError):
        cx({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})


@st.composite
def complexes(draw):
    """Random three-term complex; rows of d1 are drawn from the left kernel of d0."""
    p = draw(st.sampled_from([None, 3]))
    F = QQ if p is None else GF(p)
    n0, n1, n2 = (draw(st.integers(1, 3)) for _ in range(3))
    ent = st.integers(-2, 2)
    d0 = [[draw(ent) for _ in range(n0)] for _ in range(n1)]
    D0 = Matrix(F, d0)
    left = kernel_basis(D0.T).columns()
    rows = []
    for _ in range(n2):
        coeffs = [draw(ent) for _ in left]
        rows.append([sum((F(c) * v[i] for c, v in zip(coeffs, left)), F.zero) for i in range(n1)])
    return F, p, {0: n0, 1: n1, 2: n2}, D0, Matrix(F, rows, n1)


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_contraction_side_conditions_and_rank_oracle(case):
    F, p, dims, D0, D1 = case
    C = CochainComplex.from_dims(F, dims, {0: D0, 1: D1})
    H = cohomology(C)
    assert check_contraction(H) == []
    r0 = sympy_rank([[int(x) if p else x for x in row] for row in D0.rows], p)
    r1 = sympy_rank([[int(x) if p else x for x in row] for row in D1.rows], p)
    want = {0: dims[0] - r0, 1: dims[1] - r0 - r1, 2: dims[2] - r1}
    assert H.dims == {n: d for n, d in want.items() if d}


def test_cone_of_zero_map():
    C = cx({0: 1, 1: 1}, {0: [[0]]})
    D = cx({0: 2}, {})
    cone = mapping_cone(ChainMap.zero(C, D)).complex
    # ΣC ⊕ D: C^{n+1} sits in degree n
    assert cone.space.dims == {-1: 1, 0: 3}
    assert cone.cohomology_dims() == {-1: 1, 0: 3}


def test_cone_of_multiplication_by_eps():
    # ε· on k[ε]/ε² in basis (1, ε): 1 ↦ ε, ε ↦ 0
    C = cx({0: 2}, {})
    f = ChainMap(C, C, {0: Matrix(QQ, [[0, 0], [1, 0]])})
    got = mapping_cone(f).complex.cohomology_dims()
    r = sympy_rank([[0, 0], [1, 0]])
    assert got == {-1: 2 - r, 0: 2 - r} == {-1: 1, 0: 1}


def test_quasi_iso_examples():
    C = cx({-1: 1, 0: 2, 1: 1}, {-1: [[1], [0]], 0: [[0, 1]]})
    assert quasi_iso_check(ChainMap.identity(C))
    D = cx({0: 1}, {})
    assert not quasi_iso_check(ChainMap.zero(D, D))
    with pytest.raises(ComplexError):
        ChainMap(C, C, {0: Matrix(QQ, [[1, 0], [0, 0]])})


def _agrees(f):
    src, tgt = cohomology(f.source), cohomology(f.target)
    same = src.dims == tgt.dims
    Hf = induced_map(f, src, tgt)
    full = all(rank(Hf.block(n)) == d for n, d in src.dims.items())
    return quasi_iso_check(f) == (same and full)


def test_quasi_iso_matches_induced_map_criterion():
    C = cx({0: 2}, {})
    for m in ([[0, 0], [1, 0]], [[1, 0], [0, 1]], [[0, 1], [1, 0]], [[0, 0], [0, 0]]):
        assert _agrees(ChainMap(C, C, {0: Matrix(QQ, m)}))
    for name, B in corpus().items():
        C = B.complex()
        assert _agrees(ChainMap.identity(C)), name


def _u_v_dga():
    # B^0 = span{1, u}, B^1 = span{v}, d(u) = v, u·u = 0
    return DGAlgebra(QQ, ["1", "u", "v"], [0, 0, 1], {1: {(1,): {2: 1}}}, "1", fill_unit=True)


def test_truncation_keeps_cocycles_in_degree_zero():
    B = _u_v_dga()
    T, incl = smart_truncate_leq0(B)
    assert T.names == ("1",) and T.degrees == (0,)
    assert quasi_iso_check(incl)


def test_truncation_of_nonpositive_algebra_is_identity():
    B = corpus()["exterior"]
    T, incl = smart_truncate_leq0(B)
    assert dict(zip(T.names, T.degrees)) == dict(zip(B.names, B.degrees))
    assert T.dims() == B.dims() and quasi_iso_check(incl)
    x = T.names.index("x")
    assert T.mul_basis(x, x) == {}
    M = massey_dga()
    T, incl = smart_truncate_leq0(M)
    assert T.dim == M.dim and quasi_iso_check(incl)


def test_truncation_warns_on_positive_cohomology():
    B = DGAlgebra(QQ, ["1", "v"], [0, 1], {}, "1", fill_unit=True)
    with pytest.warns(UserWarning):
        smart_truncate_leq0(B)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        smart_truncate_leq0(B, warn=False)


def test_regular_module_and_action_check():
    B = massey_dga()
    M = DGModule.regular(B)
    assert M.check() is None
    bad = dict(M.action)
    x = B.names.index("x")
    bad[x] = bad[x].scale(2)
    with pytest.raises(ValidationError):
        DGModule(B, M.complex, bad)
