import copy
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from builders import corpus, massey_dga, small_algebra
from finmodel.ainf import (
    AInfinityAlgebra,
    DGAlgebra,
    algebra_from_dict,
    algebra_to_dict,
    from_dg,
    from_shifted,
    minimal_model,
    opposite,
    predicates,
    to_shifted,
    validate,
)
from finmodel.exactlin import GF, QQ, ValidationError

CORPUS = corpus()


def test_from_dg_examples():
    k = from_dg(CORPUS["k"])
    assert k.dim == 1 and k.op(2, (0, 0)) == {0: 1}
    dual = from_dg(CORPUS["dual_numbers"])
    eps = dual.names.index("eps")
    assert dual.op(2, (eps, eps)) == {}
    ext = from_dg(CORPUS["exterior"])
    x = ext.names.index("x")
    assert ext.op(2, (x, x)) == {}
    # graded commutativity forces x·x = -x·x for |x| odd
    with pytest.raises(ValidationError):
        DGAlgebra(QQ, ["1", "x"], [0, -1], {2: {(1, 1): {1: 1}}}, "1", fill_unit=True)


def test_validate_passes_on_corpus():
    for B in CORPUS.values():
        assert validate(from_dg(B)).ok


def test_validate_reports_witness():
    B = from_dg(CORPUS["truncated_poly"])
    ops = copy.deepcopy(B.ops)
    t, t2 = B.names.index("t"), B.names.index("t2")
    ops[2][(t, t2)] = {t2: 1}
    rep = validate(B.with_ops(ops))
    assert not rep.ok and rep.arity == 3 and rep.witness == ("t", "t", "t")
    assert "arity 3" in rep.describe()


def test_degree_mismatch_names_entry():
    with pytest.raises(ValidationError, match=r"m_2\(x, x\) -> x"):
        AInfinityAlgebra(QQ, ["1", "x"], [0, -1], {2: {(1, 1): {1: 1}}})


def test_strict_unit_required():
    with pytest.raises(ValidationError):
        AInfinityAlgebra(QQ, ["1", "e"], [0, 0], {2: {(0, 0): {0: 1}, (0, 1): {1: 1}}}, unit="1")


def test_formal_when_d_is_zero():
    for name in ("k", "dual_numbers", "exterior", "upper_triangular", "truncated_poly"):
        B = CORPUS[name]
        mm = minimal_model(B)
        assert sorted(mm.algebra.ops) == [2]
        assert mm.algebra.names == tuple(sorted(B.names, key=lambda n: B.degrees[B.names.index(n)]))
        for (i, j), vec in mm.algebra.ops[2].items():
            bi, bj = (B.names.index(mm.algebra.names[x]) for x in (i, j))
            want = {mm.algebra.names.index(B.names[z]): c for z, c in B.mul_basis(bi, bj).items()}
            assert vec == want


def test_minimal_model_of_contractible_part_is_k():
    # B = span{1, u, v}, |u| = -1, d(u) = v, v idempotent, u·v = v·u = u
    B = DGAlgebra(QQ, ["1", "u", "v"], [0, -1, 0],
                  {1: {(1,): {2: 1}}, 2: {(2, 2): {2: 1}, (1, 2): {1: 1}, (2, 1): {1: 1}}}, "1", fill_unit=True)
    H = minimal_model(B).algebra
    assert H.dims() == {0: 1} and H.names == ("1",)


def _cohomology_product_check(B):
    mm = minimal_model(B)
    H = mm.algebra
    pi = mm.contraction.pi
    for x in range(H.dim):
        for y in range(H.dim):
            n = H.degrees[x] + H.degrees[y]
            prod = B.mul(mm.iota[x], mm.iota[y])
            if not B.indices_in(n):
                assert not H.op(2, (x, y))
                continue
            coords = pi(n, B.local_vector(prod, n)) if H.indices_in(n) else []
            want = H.global_vector(coords, n) if coords else {}
            assert H.op(2, (x, y)) == {k: c for k, c in want.items() if c}
    return mm


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_massey_transfer_invariants(field):
    B = massey_dga(field)
    mm = _cohomology_product_check(B)
    H = mm.algebra
    a = H.interval()[0]
    assert validate(H, (2 - a) + 1).ok
    assert H.dims() == {n: d for n, d in B.complex().cohomology_dims().items() if d}
    assert H.max_arity() <= 2 - a
    x, y, z = (H.names.index(n) for n in "xyz")
    assert H.op(3, (x, y, z))


def test_predicates_examples():
    p = predicates(from_dg(CORPUS["k"]))
    assert p.is_connective and p.is_proper and p.is_minimal and p.interval == (0, 0)
    assert predicates(from_dg(CORPUS["exterior"])).interval == (-1, 0)
    top = AInfinityAlgebra(QQ, ["v"], [1], {})
    assert not predicates(top).is_connective
    pm = predicates(massey_dga())
    assert pm.is_connective and not pm.is_minimal and pm.cohomology_dims == {-1: 1, 0: 7}


def test_shifted_roundtrip_and_opposite():
    H = minimal_model(massey_dga()).algebra
    b = to_shifted(H)
    back = from_shifted(H.field, H.names, H.degrees, b, H.unit)
    assert back.ops == H.ops
    op = opposite(H)
    assert validate(op).ok
    assert opposite(op).ops == H.ops
    ext = from_dg(CORPUS["upper_triangular"])
    e11, e12 = ext.names.index("e11"), ext.names.index("e12")
    assert opposite(ext).op(2, (e12, e11)) == {e12: 1}


def test_dict_roundtrip_and_errors():
    for B in list(CORPUS.values()) + [minimal_model(massey_dga()).algebra]:
        d = algebra_to_dict(B)
        again = algebra_from_dict(d)
        assert algebra_to_dict(again) == d
    d = algebra_to_dict(CORPUS["dual_numbers"])
    bad = dict(d, ops={"2": [{"in": ["eps", "eps"], "out": {"nope": "1"}}]})
    with pytest.raises(ValidationError, match=r"ops\[2\]\[0\]"):
        algebra_from_dict(bad)
    with pytest.raises(ValidationError, match="not prime"):
        algebra_from_dict(dict(d, field="F4"))
    with pytest.raises(ValidationError, match="exact"):
        algebra_from_dict(dict(d, ops={"2": [{"in": ["eps", "eps"], "out": {"eps": "0.5"}}]}))


def _conjugate(B, seed_entries):
    """Same DGA in a new basis: each non-unit basis vector gains lower-index terms of its degree."""
    n = B.dim
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    it = iter(seed_entries)
    for j in range(n):
        if j == B.unit:
            continue
        for i in range(j):
            if i != B.unit and B.degrees[i] == B.degrees[j]:
                P[i][j] = Fraction(next(it, 0))
    # P is unitriangular; invert by back substitution
    Pinv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            Pinv[i][j] = -sum(P[i][k] * Pinv[k][j] for k in range(i + 1, j + 1))

    def new_to_old(j):
        return {i: P[i][j] for i in range(n) if P[i][j]}

    def old_to_new(vec):
        out = {}
        for i, c in vec.items():
            for r in range(n):
                if Pinv[r][i]:
                    out[r] = out.get(r, 0) + c * Pinv[r][i]
        return {k: v for k, v in out.items() if v}

    ops = {1: {}, 2: {}}
    for a in range(n):
        da = old_to_new(B.diff(new_to_old(a)))
        if da:
            ops[1][(a,)] = da
        for b in range(n):
            p = old_to_new(B.mul(new_to_old(a), new_to_old(b)))
            if p:
                ops[2][(a, b)] = p
    return DGAlgebra(QQ, B.names, B.degrees, ops, B.unit)


@settings(max_examples=8, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=40, max_size=40))
def test_transfer_invariants_under_basis_change(entries):
    B = _conjugate(massey_dga(), entries)
    mm = _cohomology_product_check(B)
    H = mm.algebra
    assert validate(H).ok
    assert H.dims() == {-1: 1, 0: 7}
    assert 3 in H.ops


def test_small_algebra_over_f5():
    A = small_algebra(["1", "t", "t2"], [0, 0, 0], {("t", "t"): {"t2": 1}}, GF(5))
    assert validate(from_dg(A)).ok
