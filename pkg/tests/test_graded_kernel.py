from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from chiralbrst.graded_kernel import (
    AuditError,
    BlockMap,
    Generator,
    GradedSpace,
    SpanReducer,
    SuperAlgebra,
    TruncatedComplex,
    check_chain_map,
    cone,
    kernel_basis,
    koszul_sign,
    nonzero,
    rank,
    tensor_complex,
)

from oracles import dense_rank

small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[Fraction(draw(small)) for _ in range(c)] for _ in range(r)]


@given(matrices())
def test_rank_matches_dense_oracle(m):
    rows = [{j: x for j, x in enumerate(row) if x} for row in m]
    assert rank(rows) == dense_rank(m)


@given(matrices())
def test_kernel_basis_is_kernel_of_full_dimension(m):
    cols = [{i: m[i][j] for i in range(len(m)) if m[i][j]} for j in range(len(m[0]))]
    ker = kernel_basis(cols, len(cols))
    assert len(ker) == len(cols) - dense_rank(m)
    for z in ker:
        img = {}
        for j, c in z.items():
            for i, x in cols[j].items():
                img[i] = img.get(i, 0) + c * x
        assert all(v == 0 for v in img.values())


@given(matrices())
def test_reduce_gives_unique_normal_form(m):
    red = SpanReducer()
    for row in m[:-1]:
        red.add({j: x for j, x in enumerate(row) if x})
    v = {j: x for j, x in enumerate(m[-1]) if x}
    r = red.reduce(v)
    assert not set(r) & set(red.pivots)
    diff = {k: v.get(k, 0) - r.get(k, 0) for k in set(v) | set(r)}
    assert red.contains({k: c for k, c in diff.items() if c})


degrees = st.integers(min_value=-2, max_value=2)


@given(degrees, degrees)
def test_koszul_sign_symmetric_and_parity_based(a, b):
    assert koszul_sign(a, b) == koszul_sign(b, a) == (-1) ** (a * b % 2)


@given(st.lists(degrees, min_size=3, max_size=3), st.data())
def test_graded_commutativity_and_associativity(degs, data):
    alg = SuperAlgebra([Generator(f"g{i}", d, 1) for i, d in enumerate(degs)])
    monos = [data.draw(st.sampled_from(alg.monomials(w, max_length=2) or [()])) for w in (1, 2, 1)]
    a, b, c = ({m: Fraction(1)} for m in monos)
    ab, ba = alg.mul(a, b), alg.mul(b, a)
    s = koszul_sign(alg.degree(monos[0]), alg.degree(monos[1]))
    assert ab == {k: s * v for k, v in ba.items()}
    assert alg.mul(alg.mul(a, b), c) == alg.mul(a, alg.mul(b, c))


def test_odd_generators_square_to_zero():
    alg = SuperAlgebra([Generator("p", 1, 1), Generator("x", 0, 1)])
    p = alg.gen("p")
    assert alg.mul(p, p) == {}
    assert alg.mul(alg.gen("x"), alg.gen("x")) == {((1, 2),): 1}


def test_odd_derivation_leibniz_sign():
    alg = SuperAlgebra([Generator("p", 1, 1), Generator("q", 1, 1)])
    # d p = 0, d q = 0 except the derivation sends p -> 1
    d = lambda i: {(): Fraction(1)} if i == 0 else {}
    pq = alg.mul(alg.gen("p"), alg.gen("q"))
    assert alg.apply_derivation(d, 1, pq) == alg.gen("q")
    qp = alg.mul(alg.gen("q"), alg.gen("p"))
    assert alg.apply_derivation(d, 1, qp) == {((1, 1),): -1}


def _two_term(n=1):
    """0 -> Q^n --id--> Q^n -> 0 in degrees 0, 1."""
    space = GradedSpace({(0, 0): [("a", i) for i in range(n)], (1, 0): [("b", i) for i in range(n)]})
    return TruncatedComplex.build(space, lambda lab: {("b", lab[1]): Fraction(1)} if lab[0] == "a" else {})


def test_acyclic_two_term_complex():
    assert nonzero(_two_term(2).cohomology()) == {}


def test_cone_of_identity_is_acyclic():
    one = TruncatedComplex.build(GradedSpace({(0, 0): ["v"]}), lambda lab: {})
    ident = BlockMap.from_function(one.space, one.space, (0, 0), lambda lab: {lab: Fraction(1)})
    assert nonzero(cone(ident, one, one).cohomology()) == {}


def test_cone_of_quasi_isomorphism_is_acyclic():
    # the acyclic complex [Q -> Q] is quasi-isomorphic to 0
    src = _two_term(1)
    zero = TruncatedComplex.build(GradedSpace({(0, 0): [], (1, 0): []}), lambda lab: {})
    f = BlockMap.from_function(src.space, zero.space, (0, 0), lambda lab: {})
    assert nonzero(cone(f, src, zero).cohomology()) == {}


def test_cone_rejects_non_chain_map():
    src = _two_term(1)
    # target with zero differential; f(a) = w, f(b) = w', so f d a = w' but d f a = 0
    tgt = TruncatedComplex.build(GradedSpace({(0, 0): ["w"], (1, 0): ["w'"]}), lambda lab: {})
    f = BlockMap.from_function(src.space, tgt.space, (0, 0), lambda lab: {"w" if lab[0] == "a" else "w'": Fraction(1)})
    try:
        check_chain_map(f, src, tgt)
    except AuditError:
        return
    raise AssertionError("expected a chain map failure")


def test_square_zero_audit_reports_block():
    space = GradedSpace({(0, 0): ["a"], (1, 0): ["b"], (2, 0): ["c"]})
    d = lambda lab: {"a": {"b": Fraction(1)}, "b": {"c": Fraction(1)}, "c": {}}[lab]
    try:
        TruncatedComplex.build(space, d)
    except AuditError as exc:
        assert exc.where == (0, 0)
        return
    raise AssertionError("d² != 0 not detected")


def test_kunneth_on_small_complexes():
    a = TruncatedComplex.build(GradedSpace({(0, 0): ["x"], (1, 1): ["y"]}), lambda lab: {})
    b = TruncatedComplex.build(GradedSpace({(0, 0): ["u"], (2, 1): ["v"]}), lambda lab: {})
    t = tensor_complex(a, b, weight_bound=2)
    assert nonzero(t.cohomology()) == {(0, 0): 1, (1, 1): 1, (2, 1): 1, (3, 2): 1}
