"""The ten acceptance criteria, each at exact equality and within its time budget.

Run directly (``python3 tests/test_acceptance.py``) for one PASS/FAIL line per
criterion; under pytest the same lines appear in the terminal summary.
"""

import itertools
import sys
import time
from fractions import Fraction
from math import factorial

import pytest

from chiralbrst.chiral_brst_glue import (
    affine_chiral_brst,
    c2_compatibility,
    chiral_glue,
    classical_glue_sym,
    coisson_glue_sym,
    gr_compatibility,
)
from chiralbrst.classical_brst import brst_complex, charge_square, brst_charge, check_hbc_chain_map, hbc_chain_maps, hbc_h0_iso
from chiralbrst.dglie_ce import build_cone, ce_complex, sl2, sym_module
from chiralbrst.graded_kernel import AuditError, Generator, SuperAlgebra, nonzero
from chiralbrst.jet_arc import arc_of_kk, free_count, jet
from chiralbrst.shifted_poisson import PolyvectorAlgebra, kirillov_kostant, kk_bivector, poisson_from_table
from chiralbrst.vertex_core import (
    affine_vertex,
    borcherds_defect,
    gr_dims,
    li_filtration,
    li_matches_pbw,
    pbw_count,
    zhu_c2,
)

from oracles import ce_trivial_dims_bruteforce


# ---------------------------------------------------------------------------

def criterion_1():
    g = sl2()
    g.audit()
    build_cone(g).audit()
    kirillov_kostant(g).audit()
    return True, "sl2, sl2†, KK(Sym sl2) audits pass"


def criterion_2():
    g = sl2()
    cx = ce_complex(g, sym_module(g, 4)[0])  # d² = 0 asserted on construction
    assert cx.complex.checked
    ours = ce_complex(g).cohomology()
    dims = [sum(v for k, v in ours.items() if k[0] == p) for p in range(4)]
    oracle = ce_trivial_dims_bruteforce(g)
    return dims == [1, 0, 0, 1] and oracle == [1, 0, 0, 1], f"H(sl2) = {dims}, oracle {oracle}"


def criterion_3():
    pol, pi = kk_bivector(sl2())
    kk_ok = not pol.schouten(pi, pi)
    gens = [Generator(n, 0, 0) for n in "xyz"]
    broken = poisson_from_table(gens, 1, {("x", "y"): {"x": 1}, ("x", "z"): {"y": 1}})
    bpol = PolyvectorAlgebra(broken.alg, 0)
    bpi = bpol.from_bracket(broken)
    broken_nonzero = bool(bpol.schouten(bpi, bpi))
    jacobi_fails = not broken.is_valid()
    literal = poisson_from_table([Generator("x", 0, 0), Generator("y", 0, 0)], 1,
                                 {("x", "y"): {"x": 1}, ("x", "x"): {"y": 1}}, complete=False)
    try:
        literal.audit()
        literal_rejected = False
    except AuditError as exc:
        literal_rejected = "antisymmetry" in str(exc)
    ok = kk_ok and broken_nonzero and jacobi_fails and literal_rejected
    return ok, f"[π_KK,π_KK]=0: {kk_ok}; broken [π,π]≠0: {broken_nonzero}; Jacobi fails: {jacobi_fails}"


def criterion_4():
    g = sl2()
    R = kirillov_kostant(g)
    mu = [R.alg.gen(i) for i in range(3)]
    sq_zero = not charge_square(brst_charge(g, R, mu))
    H = nonzero(brst_complex(g, R, mu, 4).cohomology())
    return sq_zero and H == {(0, 0): 1, (3, 0): 1}, f"{{Q,Q}}=0: {sq_zero}; H = {H}"


def criterion_5():
    g = sl2()
    R = kirillov_kostant(g)
    mu = [R.alg.gen(i) for i in range(3)]
    maps = hbc_chain_maps(g, R, mu, 3, 3)
    check_hbc_chain_map(maps)
    iso = hbc_h0_iso(maps)
    ok = all(a == b == r for a, b, r in iso.values())
    return ok, f"H⁰ (Koszul, bar, rank) per weight: {iso}"


def criterion_6():
    alg = SuperAlgebra([Generator(n, 0, 1) for n in "xyz"])
    J = jet(alg, (), None, 6)
    free_ok = J.weight_dims() == free_count([1, 1, 1], 6)
    g = sl2()
    vpa = arc_of_kk(g, 5)
    Jg = vpa.jets
    V0 = affine_vertex(g, 0, 5)
    bad = []
    for u, v, n, l in itertools.product(range(3), range(3), range(4), range(4)):
        # u_(n) (T^l v) from the level-0 structure
        got = {k: c * factorial(l) for k, c in vpa.base_mode(u, n, Jg.gen(v, l)).items()}
        # the formula l!/(l-n)! T^{l-n}{u, v}
        want = {}
        if n <= l:
            br = Jg.embed(vpa.P.gen_bracket(u, v))
            want = {k: c * Fraction(factorial(l), factorial(l - n)) for k, c in Jg.T_power(br, l - n).items()}
        # independent oracle: V_0(g), u_(n) v_(-l-1)|0⟩ with T^l v = l! v_(-l-1)|0⟩
        state = V0.apply((u, n), ((v, -l - 1),))
        oracle = {}
        for mono, c in state.items():
            (a, m), = mono
            oracle[((Jg.index[(a, -m - 1)], 1),)] = c * factorial(l)
        if not (got == want == oracle):
            bad.append((u, v, n, l))
    return free_ok and not bad, f"free counts {J.weight_dims()}; mode mismatches {bad}"


def criterion_7():
    g = sl2()
    V = affine_vertex(g, 1, 4)
    dims_ok = V.weight_dims() == [1, 3, 9, 22, 51] == pbw_count(3, 4)
    V3 = affine_vertex(g, 1, 3)
    bad, count = 0, 0
    for a, b in itertools.product(range(3), repeat=2):
        for m, n in itertools.product(range(-2, 3), repeat=2):
            for w in range(4):
                if w - m - n > 3:
                    continue
                for v in V3.basis(w):
                    count += 1
                    if borcherds_defect(V3, a, m, b, n, v):
                        bad += 1
    return dims_ok and bad == 0 and count > 0, f"dims {V.weight_dims()}; Borcherds failures {bad}/{count}"


def criterion_8():
    g = sl2()
    tables = []
    for k in (0, 1):
        V = affine_vertex(g, k, 4)
        Z = zhu_c2(V)
        tables.append((Z.dims(), Z.bracket_table()))
    expected_brackets = {key: dict(v) for key, v in g.brackets.items() if v}
    c2_ok = tables[0] == tables[1] and tables[0][0] == [1, 3, 6, 10, 15] and tables[0][1] == expected_brackets
    V = affine_vertex(g, 1, 4)
    filt_ok = li_matches_pbw(li_filtration(V, 4, 4)) is None
    J = arc_of_kk(g, 4).jets
    jet_dims = {}
    for w in range(5):
        for m in J.alg.monomials(w):
            li = sum(J.jets[i][1] * e for i, e in m)
            jet_dims[(w, li)] = jet_dims.get((w, li), 0) + 1
    gr_ok = gr_dims(V, 4) == dict(sorted(jet_dims.items()))
    return c2_ok and filt_ok and gr_ok, f"R dims {tables[0][0]} at k=0,1; Li = PBW span: {filt_ok}; gr = J∞: {gr_ok}"


def criterion_9():
    cx = affine_chiral_brst(sl2(), -4, 3)
    return cx.complex.checked, f"Q_(0)² = 0 on {len(cx.complex.space.keys())} blocks (level -4, w <= 3)"


def criterion_10():
    g = sl2()
    G2 = chiral_glue(g, -2, -2, 2)
    rep = gr_compatibility(G2.chiral, coisson_glue_sym(g, 2), 2)
    G3 = chiral_glue(g, -2, -2, 3)
    c2 = c2_compatibility(G3.chiral, classical_glue_sym(g, 3).complex)
    ok = rep.ok and c2.ok and c2.dims_chiral == c2.dims_classical
    return ok, f"gr blocks {len(rep.blocks)} equal: {rep.ok}; C2 dims/differential/H equal: {c2.ok}"


CRITERIA = [
    (1, criterion_1, 1),
    (2, criterion_2, 5),
    (3, criterion_3, 5),
    (4, criterion_4, 60),
    (5, criterion_5, 60),
    (6, criterion_6, 5),
    (7, criterion_7, 120),
    (8, criterion_8, 300),
    (9, criterion_9, 300),
    (10, criterion_10, 600),
]


def run_criterion(number, fn, budget):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except AuditError as exc:
        ok, detail = False, f"audit error: {exc}"
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < budget
    line = f"ACCEPTANCE {number:2d}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s / {budget}s) {detail}"
    return ok, line


@pytest.mark.parametrize("number,fn,budget", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance(number, fn, budget):
    from conftest import ACCEPTANCE_LINES

    ok, line = run_criterion(number, fn, budget)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(n, fn, b) for n, fn, b in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
