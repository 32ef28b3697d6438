import itertools
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralbrst.dglie_ce import abelian, sl2
from chiralbrst.graded_kernel import TruncationError, vadd, vclean
from chiralbrst.vertex_core import (
    FieldGenerator,
    ModeAlgebra,
    affine_vertex,
    borcherds_defect,
    c2_span,
    fermion_count,
    fermion_vertex,
    li_filtration,
    li_matches_pbw,
    opposite_affine,
    pbw_count,
    tensor_vertex,
    translation_defect,
    zhu_c2,
)

from oracles import fermion_subsets_count, partitions_count

ONE = Fraction(1)
G = sl2()
V1 = affine_vertex(G, 1, 4)
VC = affine_vertex(G, -4, 3)
VH = affine_vertex(G, Fraction(1, 2), 3)
F = fermion_vertex(["e", "h", "f"], 3)
VF = tensor_vertex(affine_vertex(G, -4, 3), F)
ALGEBRAS = {"V1": V1, "Vcrit": VC, "Vhalf": VH, "fermions": F, "Vcrit⊗F": VF}


def test_affine_dims_against_partitions():
    parts = [n for n in range(1, 6) for _ in range(3)]
    assert V1.weight_dims() == pbw_count(3, 4) == partitions_count(parts, 4)[:5]
    assert V1.weight_dims() == [1, 3, 9, 22, 51]


def test_dims_independent_of_level():
    assert affine_vertex(G, 0, 4).weight_dims() == affine_vertex(G, Fraction(-7, 3), 4).weight_dims()


@pytest.mark.parametrize("pairs", [1, 2])
def test_fermion_dims_against_enumeration(pairs):
    V = fermion_vertex([f"x{i}" for i in range(pairs)], 3)
    assert V.weight_dims() == fermion_count(pairs, 3) == fermion_subsets_count(pairs, 3)


def test_three_pair_fermion_dims():
    assert F.weight_dims() == [8, 48, 168, 496]


def test_even_weight_zero_generator_rejected():
    with pytest.raises(TruncationError):
        ModeAlgebra([FieldGenerator("x", 0, 0)], {}, 2)


def _mode_cases(V):
    n_gens = len(V.gens)
    return st.tuples(
        st.integers(0, n_gens - 1), st.integers(-2, 2),
        st.integers(0, n_gens - 1), st.integers(-2, 2),
        st.integers(0, 2),
    )


@pytest.mark.parametrize("name", list(ALGEBRAS))
@given(data=st.data())
def test_borcherds_commutator(name, data):
    V = ALGEBRAS[name]
    a, m, b, n, w = data.draw(_mode_cases(V))
    top = min(V.w_max, 3)
    if w - m - n > top or w + V.gens[a].weight + V.gens[b].weight - m - n - 2 > top:
        return
    target = data.draw(st.sampled_from(V.basis(w)))
    assert not borcherds_defect(V, a, m, b, n, target)


@pytest.mark.parametrize("name", list(ALGEBRAS))
@given(data=st.data())
def test_translation_covariance(name, data):
    V = ALGEBRAS[name]
    a = data.draw(st.integers(0, len(V.gens) - 1))
    n = data.draw(st.integers(-2, 2))
    w = data.draw(st.integers(0, 1))
    if w + V.gens[a].weight - n > V.w_max:
        return
    target = data.draw(st.sampled_from(V.basis(w)))
    assert not translation_defect(V, a, n, target)


@pytest.mark.parametrize("name", list(ALGEBRAS))
def test_vacuum_axioms(name):
    V = ALGEBRAS[name]
    for a in range(len(V.gens)):
        for n in range(0, 3):
            assert not V.apply((a, n), ())
    assert not V.T({(): ONE})
    for w in range(3):
        for s in V.basis(w):
            # Y(s, z)|0⟩ = s + O(z): s_(-1)|0⟩ = s, s_(n)|0⟩ = 0 for n >= 0
            assert V.state_mode_on(s, -1, ()) == {s: ONE}
            assert not V.state_mode_on(s, 0, ())
            # s_(-2)|0⟩ = T s
            assert V.state_mode_on(s, -2, ()) == V.T({s: ONE})


@pytest.mark.parametrize("name", ["V1", "Vcrit⊗F"])
@given(data=st.data())
def test_skew_symmetry(name, data):
    V = ALGEBRAS[name]
    wa = data.draw(st.integers(0, 1))
    wb = data.draw(st.integers(0, 1))
    a = data.draw(st.sampled_from(V.basis(wa)))
    b = data.draw(st.sampled_from(V.basis(wb)))
    n = data.draw(st.integers(-1, 2))
    if wa + wb - n - 1 > V.w_max:
        return
    lhs = V.state_mode_on(a, n, b)
    s = (-1) ** (V.parity(a) * V.parity(b))
    rhs = {}
    j = 0
    while wa + wb - n - j - 1 >= 0:
        x = V.state_mode_on(b, n + j, a)
        for _ in range(j):
            x = V.T(x)
        vadd(rhs, x, Fraction(-s * (1 - 2 * ((n + j) % 2)), factorial(j)))
        j += 1
    assert lhs == vclean(rhs)


def test_li_filtration_is_pbw_span():
    assert li_matches_pbw(li_filtration(affine_vertex(G, 1, 3), 3, 3)) is None
    assert li_matches_pbw(li_filtration(fermion_vertex(["x"], 3), 3, 3)) is None


def test_li_filtration_separated_and_decreasing():
    Fl = li_filtration(affine_vertex(G, 1, 3), 3, 4)
    for w in range(4):
        dims = [Fl.dim(p, w) for p in range(6)]
        assert dims == sorted(dims, reverse=True)
        # weight-1 generators: F^p_w = 0 once p > w
        assert all(Fl.dim(p, w) == 0 for p in range(w + 1, 6))


def test_c2_subspace_is_F1():
    V = affine_vertex(G, 1, 3)
    Fl = li_filtration(V, 3, 1)
    for w in range(4):
        assert c2_span(V, w).rank == Fl.dim(1, w)


@pytest.mark.parametrize("k", [0, 1, -4])
def test_c2_algebra_is_polynomial_kk(k):
    Z = zhu_c2(affine_vertex(G, k, 4))
    assert Z.dims() == [1, 3, 6, 10, 15]
    assert Z.bracket_table() == {key: dict(v) for key, v in G.brackets.items() if v}
    # product is commutative on generators
    for i, j in itertools.product(range(3), repeat=2):
        assert Z.product(((i, -1),), ((j, -1),)) == Z.product(((j, -1),), ((i, -1),))


def test_abelian_c2_is_commutative():
    Z = zhu_c2(affine_vertex(abelian(2), 1, 3, form={(0, 0): ONE, (1, 1): ONE}, dual_coxeter=1))
    assert Z.bracket_table() == {}


def test_tensor_vertex_vacuum_and_dims():
    A = affine_vertex(G, 2, 3)
    B = affine_vertex(G, -5, 3, prefix="b")
    T = tensor_vertex(A, B)
    assert T.level == -3
    conv = [sum(A.weight_dims()[i] * B.weight_dims()[w - i] for i in range(w + 1)) for w in range(4)]
    assert T.weight_dims() == conv
    for a in range(len(T.gens)):
        assert not T.apply((a, 0), ())
    # mixed modes commute
    assert T.bracket((0, 1), (3, -2)) == ({}, 0)


def test_opposite_affine_negates_bracket_keeps_level():
    k = Fraction(3)
    V = affine_vertex(G, k, 2)
    Vop = opposite_affine(G, k, 2)
    for a, b in itertools.product(range(3), repeat=2):
        for m, n in itertools.product(range(-2, 2), repeat=2):
            modes, scalar = V.bracket((a, m), (b, n))
            modes_op, scalar_op = Vop.bracket((a, m), (b, n))
            assert modes_op == {md: -c for md, c in modes.items()}
            assert scalar_op == scalar


def test_opposite_sign_twist_is_homomorphism():
    # x_(n) ↦ (-1)^{n+1} x_(n) intertwines the mode brackets of V_k(g) and V_k(g^op)
    k = Fraction(3)
    V = affine_vertex(G, k, 2)
    Vop = opposite_affine(G, k, 2)
    for a, b in itertools.product(range(3), repeat=2):
        for m, n in itertools.product(range(-2, 2), repeat=2):
            modes, scalar = V.bracket((a, m), (b, n))
            modes_op, scalar_op = Vop.bracket((a, m), (b, n))
            s = 1 - 2 * ((m + n) % 2)
            twisted = {md: -s * c * (1 - 2 * (md[1] % 2)) for md, c in modes_op.items()}
            assert twisted == modes
            # the central term sits at m + n = 0, where the twist is trivial
            assert s * scalar_op == scalar
