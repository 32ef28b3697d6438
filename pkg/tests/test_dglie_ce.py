from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralbrst.dglie_ce import (
    abelian,
    build_cone,
    ce_apply,
    ce_complex,
    cochain_degree,
    cup,
    current_truncation,
    evaluate_cochain,
    invariants_dimension,
    killing_form,
    restricted_ce,
    shuffle_cup_value,
    sl2,
    sym_module,
    underlying_complex,
)
from chiralbrst.graded_kernel import AuditError, nonzero, vclean

from oracles import ce_trivial_dims_bruteforce


def test_sl2_killing_form():
    assert killing_form(sl2()) == {(0, 2): 4, (1, 1): 8, (2, 0): 4}


def test_audits_pass_for_sl2_cone_and_currents():
    sl2().audit()
    build_cone(sl2()).audit()
    current_truncation(sl2(), 2).audit()


def test_injected_constant_breaks_jacobi():
    broken = sl2().with_constant(1, 0, 0, 3).with_constant(0, 1, 0, -3)
    with pytest.raises(AuditError, match="Jacobi"):
        broken.audit()


def test_cone_is_acyclic():
    assert nonzero(underlying_complex(build_cone(sl2())).cohomology()) == {}


def test_cone_ce_square_zero_with_even_ghosts():
    cx = ce_complex(build_cone(sl2()), max_degree=3)
    assert cx.complex.checked


def test_sl2_trivial_cohomology_matches_bruteforce():
    table = ce_complex(sl2()).cohomology()
    dims = [sum(v for k, v in table.items() if k[0] == p) for p in range(4)]
    assert dims == ce_trivial_dims_bruteforce(sl2()) == [1, 0, 0, 1]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_abelian_cohomology_is_exterior_algebra(n):
    table = ce_complex(abelian(n)).cohomology()
    dims = [sum(v for k, v in table.items() if k[0] == p) for p in range(n + 1)]
    assert dims == [comb(n, p) for p in range(n + 1)]


def test_sym_coefficients_cohomology_is_invariants_tensor_trivial():
    g = sl2()
    mod = sym_module(g, 4)[0]
    mod.audit(g)
    H = nonzero(ce_complex(g, mod).cohomology())
    inv = {w: invariants_dimension(g, mod, (0, w)) for w in range(5)}
    assert inv == {0: 1, 1: 0, 2: 1, 3: 0, 4: 1}
    expected = {}
    for w, d in inv.items():
        if d:
            expected[(0, w)] = d
            expected[(3, w)] = d
    assert H == dict(sorted(expected.items()))


def test_truncated_currents_cohomology():
    # sl2[t]/t² = sl2 ⋉ sl2^ab: H = H(sl2) ⊗ Λ(sl2*)^{sl2}, invariants in Λ-degrees 0 and 3
    H = nonzero(restricted_ce(sl2(), 1).cohomology())
    assert H == {(0, 0): 1, (3, -3): 1, (3, 0): 1, (6, -3): 1}


@st.composite
def cochains(draw, ce, degree, max_weight=None):
    labels = [lab for k, basis in ce.complex.space.blocks.items()
              if k[0] == degree and (max_weight is None or k[1] <= max_weight) for lab in basis]
    picks = draw(st.lists(st.sampled_from(labels), min_size=1, max_size=3, unique=True))
    return {lab: Fraction(draw(st.integers(1, 3)) * draw(st.sampled_from([-1, 1]))) for lab in picks}


_CE = ce_complex(sl2(), sym_module(sl2(), 2)[0])


@given(st.data(), st.integers(0, 1), st.integers(0, 1))
def test_cup_product_leibniz(data, p, q):
    # the truncated module drops products of weight > 2, so f carries weight-0 coefficients
    f = data.draw(cochains(_CE, p, max_weight=0))
    g = data.draw(cochains(_CE, q))
    lhs = ce_apply(_CE, cup(_CE, f, g))
    rhs = cup(_CE, ce_apply(_CE, f), g)
    sign = -1 if p % 2 else 1
    for lab, c in cup(_CE, f, ce_apply(_CE, g)).items():
        rhs[lab] = rhs.get(lab, 0) + sign * c
    assert vclean(lhs) == vclean(rhs)


_CE_TRIV = ce_complex(sl2())


@given(st.data(), st.integers(1, 2))
def test_cup_matches_shuffle_formula(data, p):
    f = data.draw(cochains(_CE_TRIV, p))
    g = data.draw(cochains(_CE_TRIV, 3 - p))
    fg = cup(_CE_TRIV, f, g)
    args = [0, 1, 2]
    assert evaluate_cochain(_CE_TRIV, fg, args) == shuffle_cup_value(_CE_TRIV, f, g, args)
    assert cochain_degree(_CE_TRIV, f) == p
