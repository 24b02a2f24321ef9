import json

import pytest

from builders import algebra_table, corpus, massey_dga
from oracles import brute_force_radical_dim
from finmodel.ainf import from_dg, minimal_model
from finmodel.complexes import DGModule
from finmodel.exactlin import GF, QQ, ValidationError, in_span
from finmodel.generation import (
    GenerationCertificate,
    GradedRightModule,
    OrdinaryAlgebra,
    cone_certificate,
    generation_bound,
    h0_algebra,
    ideal_product,
    is_semisimple,
    jacobson_radical,
    loewy_length,
    module_from_dict,
    module_from_minimal,
    module_to_dict,
    nilpotency_index,
    primitive_idempotents,
    quotient_algebra,
    radical_layers,
    right_ideal_basis,
    verify_certificate,
)

CORPUS = corpus()


def minimal(name, field=QQ):
    B = corpus(field)[name]
    return from_dg(B) if B.is_minimal else minimal_model(B).algebra


def test_h0_examples():
    assert h0_algebra(minimal("k")).dim == 1
    assert h0_algebra(minimal("exterior")).dim == 1
    L = h0_algebra(minimal("dual_numbers"))
    eps = L.basis_vector(L.names.index("eps"))
    assert L.dim == 2 and not any(L.mul(eps, eps))
    with pytest.raises(ValidationError):
        h0_algebra(from_dg(massey_dga()))


@pytest.mark.parametrize("name, dim, index", [
    ("k_x_k", 0, 1), ("dual_numbers", 1, 2), ("upper_triangular", 1, 2), ("truncated_poly", 2, 3),
])
def test_radical_examples(name, dim, index):
    L = h0_algebra(minimal(name))
    J = jacobson_radical(L)
    assert J.dim == dim
    if dim:
        assert J.index == index
    if name == "upper_triangular":
        assert J.basis == [L.basis_vector(L.names.index("e12"))]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_radical_invariants(name):
    L = h0_algebra(minimal(name))
    J = jacobson_radical(L)
    for v in J.basis:
        for i in range(L.dim):
            e = L.basis_vector(i)
            for w in (L.mul(v, e), L.mul(e, v)):
                assert in_span(L.field, J.basis, w, L.dim)
    assert nilpotency_index(L, J.basis) == J.index
    if J.dim:
        power = J.basis
        for _ in range(J.index - 2):
            power = ideal_product(L, power, J.basis)
        assert power and not ideal_product(L, power, J.basis)
    Q, _ = quotient_algebra(L, J.basis)
    assert is_semisimple(Q)


def test_radical_over_small_prime_uses_search():
    L = h0_algebra(minimal("upper_triangular", GF(2)))
    J = jacobson_radical(L)
    assert J.method == "search" and J.dim == 1
    assert brute_force_radical_dim(algebra_table(L), L.dim, 2) == 1
    with pytest.raises(ValidationError):
        jacobson_radical(L, "trace form")
    with pytest.raises(ValidationError):
        jacobson_radical(h0_algebra(minimal("k")), "search")


def test_radical_trace_form_fails_detectably_in_small_characteristic():
    # F_2[t]/(t^2 - 1) = F_2[s]/(s^2) with s = t + 1: radical is span{1 + t}
    F = GF(2)
    L = OrdinaryAlgebra(F, ["1", "t"], [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [1, 0])
    J = jacobson_radical(L)
    assert J.method == "search" and J.basis == [[F(1), F(1)]]


def test_layers_examples():
    L, M = module_from_minimal(minimal("dual_numbers"))
    J = jacobson_radical(L)
    layers = radical_layers(M, J)
    assert [lay.dim for lay in layers] == [1, 1] and loewy_length(M, J) == 2
    for lay in layers:
        assert lay.killed_by(L, J.basis)
    L, M = module_from_minimal(minimal("k_x_k"))
    layers = radical_layers(M, jacobson_radical(L))
    assert len(layers) == 1 and layers[0].dim == 2
    zero = GradedRightModule(L, {}, [{} for _ in range(L.dim)])
    assert radical_layers(zero, jacobson_radical(L)) == [] and loewy_length(zero, []) == 0


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_layer_dims_sum_to_total(name):
    A = minimal(name)
    L, M = module_from_minimal(A)
    J = jacobson_radical(L)
    layers = radical_layers(M, J)
    assert sum(lay.dim for lay in layers) == sum(A.dims().values())
    assert all(lay.killed_by(L, J.basis) for lay in layers)


def test_generation_bound_from_dg_input_matches_minimal():
    for name in CORPUS:
        assert generation_bound(CORPUS[name]) == generation_bound(minimal(name))


def test_primitive_idempotents_matrix_algebra_and_field():
    # M_2(Q) with basis e11, e12, e21, e22
    def unit(i, j):
        return 2 * i + j
    table = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                table[unit(i, j)][unit(j, k)][unit(i, k)] = 1
    L = OrdinaryAlgebra(QQ, ["e11", "e12", "e21", "e22"], table, [1, 0, 0, 1])
    idem = primitive_idempotents(L)
    assert len(idem) == 2
    assert [a + b for a, b in zip(*idem)] == list(L.unit)
    for e in idem:
        assert L.mul(e, e) == e and len(right_ideal_basis(L, e)) == 2
    assert not any(L.mul(idem[0], idem[1]))
    # Q(i) is a field: the unit is already primitive
    Qi = OrdinaryAlgebra(QQ, ["1", "i"], [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]], [1, 0])
    assert primitive_idempotents(Qi) == [list(Qi.unit)]


def _certify(B, module=None):
    M = module if module is not None else DGModule.regular(B)
    cert = cone_certificate(M)
    return cert, verify_certificate(cert)


def test_certificate_examples():
    cert, rep = _certify(CORPUS["k_x_k"])
    assert rep.ok and cert.length == 1
    cert, rep = _certify(CORPUS["dual_numbers"])
    assert rep.ok and cert.length == 2
    assert [len(s["third"]) for s in cert.steps] == [1, 1]
    cert, rep = _certify(CORPUS["exterior"])
    assert rep.ok and cert.length <= 2
    assert sorted(t["shift"] for s in cert.steps for t in s["third"]) == [0, 1]


def _simple_dual_module():
    return {"basis": [["s", 0]], "d": [], "action": []}


def _cone_of_eps():
    # cone of left multiplication by eps on k[eps]/eps^2, as a right module
    return {
        "basis": [["p", -1], ["q", -1], ["r", 0], ["s", 0]],
        "d": [{"in": "p", "out": {"s": "1"}}],
        "action": [{"in": ["p", "eps"], "out": {"q": "1"}}, {"in": ["r", "eps"], "out": {"s": "1"}}],
    }


@pytest.mark.parametrize("field", [QQ, GF(5)])
@pytest.mark.parametrize("build", [_simple_dual_module, _cone_of_eps])
def test_certificates_for_other_modules(build, field):
    B = corpus(field)["dual_numbers"]
    M = module_from_dict(B, build())
    cert, rep = _certify(B, M)
    assert rep.ok, rep.describe()
    assert rep.length <= cert.module_bound


def test_module_dict_roundtrip():
    B = massey_dga()
    M = DGModule.regular(B)
    d = module_to_dict(M)
    again = module_to_dict(module_from_dict(B, d))
    assert again == d


def test_certificate_json_roundtrip():
    cert, _ = _certify(massey_dga())
    data = json.loads(cert.to_json())
    assert GenerationCertificate.from_dict(data).to_dict() == cert.to_dict()
    assert verify_certificate(data).ok


def test_malformed_certificates():
    cert, _ = _certify(CORPUS["dual_numbers"])
    d = cert.to_dict()
    del d["steps"]
    assert "malformed" in verify_certificate(d).failure
    d = cert.to_dict()
    d["tower"] = d["tower"][:-1]
    assert not verify_certificate(d).ok
    d = cert.to_dict()
    d["bound"] = [1, 1, 1]
    assert "bound" in verify_certificate(d).failure
    d = cert.to_dict()
    d["idempotents"] = [{"eps": "1"}]
    assert "idempotent" in verify_certificate(d).failure
    d = cert.to_dict()
    d["module_bound"] = 1
    assert "exceeds" in verify_certificate(d).failure


def test_certificate_with_wrong_map_rejected():
    cert, _ = _certify(CORPUS["dual_numbers"])
    d = cert.to_dict()
    d["steps"][0]["map"] = [["0" for _ in row] for row in d["steps"][0]["map"]]
    assert not verify_certificate(d).ok
