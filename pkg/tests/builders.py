"""Independent constructions of the fixture algebras from monomial data."""

from fractions import Fraction

from finmodel.ainf import DGAlgebra
from finmodel.exactlin import QQ, Matrix, solve


def monomial_dga(field, words, degrees, idempotents, unit_terms, diff, basis_names, basis_exprs):
    """DG algebra given by a monomial (path-style) algebra and a change of basis.

    ``words`` are tuples of letters; idempotents act as identities on the
    words that start/end at them (``idempotents[word] = (source, target)``).
    ``basis_exprs[name]`` expresses each chosen basis vector in words.
    """
    wid = {w: i for i, w in enumerate(words)}
    n = len(words)

    def wmul(a, b):
        sa, ta = idempotents[a]
        sb, tb = idempotents[b]
        if ta != sb:
            return None
        if len(a) == 1 and a[0].startswith("e"):
            return b
        if len(b) == 1 and b[0].startswith("e"):
            return a
        w = a + b
        return w if w in wid else None

    def vmul(u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                w = wmul(a, b)
                if w is not None:
                    out[w] = out.get(w, 0) + Fraction(x) * Fraction(y)
        return {k: c for k, c in out.items() if c}

    cols = [[field.from_fraction(Fraction(basis_exprs[nm].get(w, 0))) for w in words] for nm in basis_names]
    P = Matrix.from_columns(field, cols, n)

    def coords(vec):
        v = [field.from_fraction(Fraction(vec.get(w, 0))) for w in words]
        x = solve(P, v)
        assert x is not None
        return {i: c for i, c in enumerate(x) if c}

    ops = {1: {}, 2: {}}
    for i, a in enumerate(basis_names):
        dv = {}
        for w, c in basis_exprs[a].items():
            for w2, c2 in diff.get(w, {}).items():
                dv[w2] = dv.get(w2, 0) + Fraction(c) * c2
        dv = {k: c for k, c in dv.items() if c}
        if dv:
            ops[1][(i,)] = coords(dv)
        for j, b in enumerate(basis_names):
            p = vmul(basis_exprs[a], basis_exprs[b])
            if p:
                ops[2][(i, j)] = coords(p)
    degs = [degrees[nm] for nm in basis_names]
    return DGAlgebra(field, basis_names, degs, ops, basis_names.index(unit_terms))


def massey_dga(field=QQ):
    """A4 quiver x, y, z with u, w of degree -1 bounding xy and yz."""
    ends = {("e1",): (1, 1), ("e2",): (2, 2), ("e3",): (3, 3), ("e4",): (4, 4),
            ("x",): (1, 2), ("y",): (2, 3), ("z",): (3, 4), ("u",): (1, 3), ("w",): (2, 4)}
    words = [("e1",), ("e2",), ("e3",), ("e4",), ("x",), ("y",), ("z",), ("x", "y"), ("y", "z"),
             ("x", "y", "z"), ("u",), ("w",), ("u", "z"), ("x", "w")]
    for w in words:
        if w not in ends:
            ends[w] = (ends[(w[0],)][0], ends[(w[-1],)][1])
    names = ["1", "e2", "e3", "e4", "x", "y", "z", "xy", "yz", "xyz", "u", "w", "uz", "xw"]
    exprs = {nm: {w: 1} for nm, w in zip(names, words)}
    exprs["1"] = {("e1",): 1, ("e2",): 1, ("e3",): 1, ("e4",): 1}
    deg = {nm: 0 for nm in names}
    for nm in ("u", "w", "uz", "xw"):
        deg[nm] = -1
    diff = {("u",): {("x", "y"): 1}, ("w",): {("y", "z"): 1},
            ("u", "z"): {("x", "y", "z"): 1}, ("x", "w"): {("x", "y", "z"): 1}}
    return monomial_dga(field, words, deg, ends, "1", diff, names, exprs)


def small_algebra(names, degrees, m2, field=QQ):
    """DG algebra with d = 0 from a sparse product table (unit ``1`` implied)."""
    idx = {n: i for i, n in enumerate(names)}
    ops = {2: {(idx[a], idx[b]): {idx[k]: v for k, v in out.items()} for (a, b), out in m2.items()}}
    return DGAlgebra(field, names, degrees, ops, "1", fill_unit=True)


def corpus(field=QQ):
    return {
        "k": small_algebra(["1"], [0], {}, field),
        "k_x_k": small_algebra(["1", "e"], [0, 0], {("e", "e"): {"e": 1}}, field),
        "dual_numbers": small_algebra(["1", "eps"], [0, 0], {}, field),
        "exterior": small_algebra(["1", "x"], [0, -1], {}, field),
        "upper_triangular": small_algebra(["1", "e11", "e12"], [0, 0, 0],
                                          {("e11", "e11"): {"e11": 1}, ("e11", "e12"): {"e12": 1}}, field),
        "truncated_poly": small_algebra(["1", "t", "t2"], [0, 0, 0], {("t", "t"): {"t2": 1}}, field),
        "massey_dga": massey_dga(field),
    }


def three_term_dga(field=QQ):
    """``1``, ``s`` in degree -1, ``t`` in degree -2 with ``d t = s`` and only unit products."""
    return DGAlgebra(field, ["1", "s", "t"], [0, -1, -2], {1: {(2,): {1: 1}}}, "1", fill_unit=True)


def algebra_table(L):
    """Structure constants of an ordinary algebra as plain Python lists."""
    return [[[int(c) if L.field.characteristic else c for c in L.table[i][j]] for j in range(L.dim)]
            for i in range(L.dim)]
