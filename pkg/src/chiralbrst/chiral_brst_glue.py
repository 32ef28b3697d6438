"""Chiral and coisson BRST complexes, gluing, and the gr / C2 comparisons.

Generator order is shared by every level: the generators of V (or R), then
ψ_i, then ψ*_i.  A PBW monomial of creation modes (a, n) corresponds to the
jet monomial with jets (a, -n-1) multiplied in the same order, and a Li-degree
0 monomial to the polynomial in the base generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .classical_brst import (
    BRSTData,
    ClassicalBRSTComplex,
    brst_charge,
    brst_complex,
    derivation_complex,
    poisson_glue,
)
from .dglie_ce import DgLieAlgebra
from .graded_kernel import (
    ONE,
    ZERO,
    AuditError,
    BlockMap,
    GradedSpace,
    Mono,
    TruncatedComplex,
    Vector,
    block_difference,
    vadd,
    vclean,
    vscale,
)
from .jet_arc import JetAlgebra, LevelZeroVPA, jet
from .shifted_poisson import PoissonAlgebra, kirillov_kostant
from .vertex_core import (
    PBW,
    ModeAlgebra,
    affine_vertex,
    fermion_vertex,
    opposite_affine,
    tensor_vertex,
)

BlockKey = Tuple[int, int]


# ---------------------------------------------------------------------------
# chiral momentum maps

def momentum_defects(lie: DgLieAlgebra, V: ModeAlgebra, mu: Sequence[Mapping], level: Fraction,
                     form: Mapping[Tuple[int, int], Fraction], dual_coxeter) -> List[Tuple[int, int, int]]:
    """(i, j, n) where μ(x_i)_{(n)} μ(x_j) differs from the V_level(g) value."""
    bad = []
    hv = Fraction(dual_coxeter)
    for i in range(lie.dim):
        for j in range(lie.dim):
            for n in range(0, 3):
                got = V.state_mode(mu[i], n, mu[j])
                want: Vector = {}
                if n == 0:
                    for k, c in lie.bracket_basis(i, j).items():
                        vadd(want, mu[k], c)
                elif n == 1:
                    kap = Fraction(form.get((i, j), ZERO))
                    if kap and level:
                        want = {(): level * kap / (2 * hv)}
                if vclean(got) != vclean(want):
                    bad.append((i, j, n))
    return bad


# ---------------------------------------------------------------------------
# chiral BRST complex

@dataclass
class ChiralBRSTComplex:
    lie: DgLieAlgebra
    V: ModeAlgebra
    total: ModeAlgebra
    mu: List[Vector]
    charge: Vector
    complex: TruncatedComplex
    w_max: int

    def d(self, mono: PBW) -> Vector:
        return self.total.state_mode(self.charge, 0, {mono: ONE})

    def cohomology(self) -> Dict[BlockKey, int]:
        return self.complex.cohomology()

    def psi(self, i: int) -> int:
        return len(self.V.gens) + i

    def psi_star(self, i: int) -> int:
        return len(self.V.gens) + self.lie.dim + i


def chiral_charge(lie: DgLieAlgebra, total: ModeAlgebra, mu: Sequence[Mapping], n_v: int,
                  cubic_sign: int = -1) -> Vector:
    """Q = Σ μ(x_i)_{(-1)} ψ*_i - ½ Σ c_ij^k ψ*_i ψ*_j ψ_k as a state (μ(x_i) of the form Σ a_{(-1)}|0⟩)."""
    dim = lie.dim
    Q: Vector = {}
    for i in range(dim):
        ps = (n_v + dim + i, -1)
        for mono, c in mu[i].items():
            if len(mono) != 1 or mono[0][1] != -1:
                raise ValueError("momentum images must be linear in weight-1 generators")
            vadd(Q, total.state(mono[0], ps), c)
    for i, j, k, c in lie.structure_triples():
        term = total.state((n_v + dim + i, -1), (n_v + dim + j, -1), (n_v + k, -1))
        vadd(Q, term, Fraction(cubic_sign, 2) * c)
    return vclean(Q)


def chiral_brst(lie: DgLieAlgebra, V: ModeAlgebra, mu: Sequence[Mapping], w_max: int,
                check: bool = True, cubic_sign: int = -1) -> ChiralBRSTComplex:
    """V ⊗ ∧^{∞/2}(g) with d_ch = Q_{(0)}; raises ``AuditError`` if Q_{(0)}² ≠ 0 on a block."""
    F = fermion_vertex(lie.names, w_max)
    total = tensor_vertex(V, F, w_max=w_max)
    n_v = len(V.gens)
    mu_t = [dict(m) for m in mu]
    Q = chiral_charge(lie, total, mu_t, n_v, cubic_sign)
    space = total.space(w_max)
    # strict: any image outside (charge + 1, same weight) is a grading failure
    dm = BlockMap.from_function(space, space, (1, 0), lambda m: total.state_mode(Q, 0, {m: ONE}), strict=True)
    cx = TruncatedComplex(space, dm, w_max)
    if check:
        cx.check_square_zero()
    return ChiralBRSTComplex(lie, V, total, mu_t, Q, cx, w_max)


def brst_cohomology_table(cx, charges: Optional[Sequence[int]] = None,
                          weights: Optional[Sequence[int]] = None) -> Dict[BlockKey, int]:
    """dim H per (charge or ghost degree, weight), restricted to the requested ranges."""
    table = cx.complex.cohomology() if hasattr(cx, "complex") else cx.cohomology()
    return {k: v for k, v in sorted(table.items())
            if (charges is None or k[0] in charges) and (weights is None or k[1] in weights)}


def chiral_square(cx: ChiralBRSTComplex) -> Dict[BlockKey, int]:
    """Number of basis vectors per block on which Q_{(0)}² is non-zero."""
    sq = cx.complex.differential.compose(cx.complex.differential)
    return {k: n for k, n in ((k, sum(1 for v in cols.values() if v)) for k, cols in sq.columns.items()) if n}


def affine_chiral_brst(lie: DgLieAlgebra, level, w_max: int, check: bool = True) -> ChiralBRSTComplex:
    """BRST(g_k, V_k(g), id)."""
    V = affine_vertex(lie, level, w_max)
    mu = [{((i, -1),): ONE} for i in range(lie.dim)]
    return chiral_brst(lie, V, mu, w_max, check)


# ---------------------------------------------------------------------------
# coisson BRST complex

@dataclass
class CoissonBRSTComplex:
    data: BRSTData
    vpa: LevelZeroVPA
    charge: Vector
    complex: TruncatedComplex
    w_max: int

    @property
    def jets(self) -> JetAlgebra:
        return self.vpa.jets

    def d(self, v: Mapping) -> Vector:
        return coisson_differential(self.vpa, self.charge, v)

    def cohomology(self) -> Dict[BlockKey, int]:
        return self.complex.cohomology()


def coisson_differential(vpa: LevelZeroVPA, charge: Mapping, v: Mapping,
                         cache: Optional[Dict[int, Vector]] = None) -> Vector:
    """(Q_co)_{(0)}: the odd derivation with Q_{(0)} g computed by skew-symmetry."""
    cache = {} if cache is None else cache

    def img(k: int) -> Vector:
        hit = cache.get(k)
        if hit is None:
            hit = vpa.skew_mode(charge, 0, k)
            cache[k] = hit
        return hit

    return vpa.alg.apply_derivation(img, 1, v)


def coisson_brst(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping], w_max: int,
                 check: bool = True) -> CoissonBRSTComplex:
    """J_∞(R ⊗ Cl̄(g)) with d_co = (Q_co)_{(0)}, Q_co the classical charge placed on jet 0."""
    data = brst_charge(lie, R, mu)
    J = jet(data.total.alg, (), None, w_max)
    vpa = LevelZeroVPA(data.total, J)
    Q = J.embed(data.charge)
    cache: Dict[int, Vector] = {}
    cx = derivation_complex(J.alg, lambda v: coisson_differential(vpa, Q, v, cache), w_max, check=check)
    return CoissonBRSTComplex(data, vpa, Q, cx, w_max)


# ---------------------------------------------------------------------------
# gluing

@dataclass
class GluingResult:
    lie: DgLieAlgebra
    chiral: ChiralBRSTComplex
    levels: Tuple[Fraction, Fraction]
    mu_left: List[Vector]
    mu_right: List[Vector]

    def cohomology(self) -> Dict[BlockKey, int]:
        return self.chiral.cohomology()


def chiral_glue(lie: DgLieAlgebra, k, l, w_max: int, check: bool = True) -> GluingResult:
    """V_l(g) ∘ V_k(g) := BRST(g_{k+l}, V_k(g)^op ⊗ V_l(g), -μ ⊗ 1 + 1 ⊗ μ').

    The opposite factor is V_k(g^op); μ(x) = -x¹ + x²."""
    V1 = opposite_affine(lie, k, w_max, "1")
    V2 = affine_vertex(lie, l, w_max, prefix="2")
    V = tensor_vertex(V1, V2, w_max=w_max)
    n = lie.dim
    mu = [{((i, -1),): -ONE, ((n + i, -1),): ONE} for i in range(n)]
    level = V1.level + V2.level
    bad = momentum_defects(lie, V, mu, level, lie.form, lie.dual_coxeter)
    if bad:
        raise AuditError("glued momentum map is not a vertex algebra map", bad[0])
    cx = chiral_brst(lie, V, mu, w_max, check)
    return GluingResult(lie, cx, (V1.level, V2.level), [{((i, -1),): ONE} for i in range(n)],
                        [{((n + i, -1),): ONE} for i in range(n)])


def classical_glue_sym(lie: DgLieAlgebra, w_max: int):
    """cBRST(g, Sym(g)^op ⊗ Sym(g), -id + id)."""
    R = kirillov_kostant(lie)
    ident = [{((i, 1),): ONE} for i in range(lie.dim)]
    return poisson_glue(R, ident, R, ident, lie, w_max)


def coisson_glue_sym(lie: DgLieAlgebra, w_max: int, check: bool = True) -> CoissonBRSTComplex:
    """Coisson BRST of J_∞(Sym(g)^op ⊗ Sym(g)) along -id + id."""
    from .shifted_poisson import tensor_poisson

    R = kirillov_kostant(lie)
    total = tensor_poisson(R.opposite(), R, ("1", "2"))
    n = lie.dim
    mu = [{((i, 1),): -ONE, ((n + i, 1),): ONE} for i in range(n)]
    return coisson_brst(lie, total, mu, w_max, check)


# ---------------------------------------------------------------------------
# comparisons

def pbw_to_jet(J: JetAlgebra, mono: PBW) -> Tuple[int, Optional[Mono]]:
    """Mode a_{(n)} ↦ jet (a, -n-1), product taken in PBW order."""
    return J.alg.mono_from_indices([J.index[(a, -n - 1)] for a, n in mono])


def pbw_vec_to_jet(J: JetAlgebra, vec: Mapping) -> Vector:
    out: Vector = {}
    for mono, c in vec.items():
        s, m = pbw_to_jet(J, mono)
        if m is not None:
            vadd(out, {m: c * s})
    return vclean(out)


@dataclass
class GrReport:
    """Entrywise comparison of gr^F d_ch with d_co."""

    blocks: Dict[BlockKey, Tuple[int, int]]
    mismatches: Dict[BlockKey, list]
    basis_ok: bool

    @property
    def ok(self) -> bool:
        return self.basis_ok and not self.mismatches


def _jet_space(cx: ChiralBRSTComplex, J: JetAlgebra) -> Tuple[GradedSpace, Dict[Mono, Tuple[PBW, int]]]:
    """The PBW basis of the chiral complex transported to jet monomials, keyed (charge, weight),
    with the inverse table jet monomial -> (PBW monomial, sign)."""
    table: Dict[Mono, Tuple[PBW, int]] = {}
    blocks: Dict[BlockKey, list] = {}
    for key, basis in cx.total.space(cx.w_max).blocks.items():
        for pm in basis:
            s, jm = pbw_to_jet(J, pm)
            if jm is None:
                raise AuditError("PBW monomial maps to zero", pm)
            table[jm] = (pm, s)
            blocks.setdefault(key, []).append(jm)
    return GradedSpace(blocks), table


def gr_differential(cx: ChiralBRSTComplex, J: JetAlgebra) -> BlockMap:
    """gr^F d_ch (the Li-degree preserving part) transported to the jet basis."""
    T = cx.total
    space, table = _jet_space(cx, J)

    def f(jm):
        pm, s = table[jm]
        img = T.state_mode(cx.charge, 0, {pm: ONE})
        li = T.li_degree(pm)
        part = {m: c for m, c in img.items() if T.li_degree(m) == li}
        return vscale(pbw_vec_to_jet(J, part), Fraction(s))

    return BlockMap.from_function(space, space, (1, 0), f, strict=True)


def gr_compatibility(cx: ChiralBRSTComplex, co: CoissonBRSTComplex, w_max: int) -> GrReport:
    """(a) the PBW basis of gr^F maps bijectively onto the jet basis per block;
    (b) gr^F d_ch equals d_co entrywise on every block of weight <= w_max."""
    J = co.jets
    space, _ = _jet_space(cx, J)
    co_space = co.complex.space
    basis_ok = True
    blocks = {}
    for key in space.keys():
        if key[1] > w_max:
            continue
        ours = set(space.blocks[key])
        theirs = set(co_space.blocks.get(key, []))
        blocks[key] = (len(ours), len(theirs))
        if ours != theirs:
            basis_ok = False
    for key in co_space.keys():
        if key[1] <= w_max and key not in space.blocks:
            basis_ok = False
            blocks[key] = (0, co_space.dim(key))
    gr = gr_differential(cx, J)
    mism = {}
    for key in blocks:
        if key[1] > w_max or key not in gr.columns:
            continue
        diff = block_difference(gr, co.complex.differential, key)
        if diff:
            mism[key] = diff
    return GrReport(blocks, mism, basis_ok)


@dataclass
class C2Report:
    """R of the chiral complex (Li degree 0 part with induced differential) vs a classical complex."""

    dims_chiral: Dict[BlockKey, int]
    dims_classical: Dict[BlockKey, int]
    cohomology_chiral: Dict[BlockKey, int]
    cohomology_classical: Dict[BlockKey, int]
    mismatches: Dict[BlockKey, list]

    @property
    def ok(self) -> bool:
        return (self.dims_chiral == self.dims_classical and not self.mismatches
                and self.cohomology_chiral == self.cohomology_classical)


def c2_complex(cx: ChiralBRSTComplex, alg_for_labels) -> TruncatedComplex:
    """F⁰/F¹ of the chiral complex with d induced by Q_{(0)}, labelled by base monomials."""
    T = cx.total
    blocks: Dict[BlockKey, list] = {}
    to_pbw: Dict[Mono, Tuple[PBW, int]] = {}
    for key, basis in T.space(cx.w_max).blocks.items():
        for pm in basis:
            if T.li_degree(pm) != 0:
                continue
            s, m = alg_for_labels.mono_from_indices([a for a, _ in pm])
            to_pbw[m] = (pm, s)
            blocks.setdefault(key, []).append(m)
    space = GradedSpace({k: blocks[k] for k in sorted(blocks)})

    def conv(vec):
        out: Vector = {}
        for pm, c in vec.items():
            if T.li_degree(pm) == 0:
                s, m = alg_for_labels.mono_from_indices([a for a, _ in pm])
                if m is not None:
                    vadd(out, {m: c * s})
        return vclean(out)

    def d(m):
        pm, s = to_pbw[m]
        return vscale(conv(T.state_mode(cx.charge, 0, {pm: ONE})), Fraction(s))

    return TruncatedComplex.build(space, d, cx.w_max, check=True)


def c2_compatibility(cx: ChiralBRSTComplex, classical: ClassicalBRSTComplex) -> C2Report:
    cl = classical.complex
    ours = c2_complex(cx, classical.alg)
    mism = {}
    for key in ours.space.keys():
        diff = block_difference(ours.differential, cl.differential, key)
        if diff:
            mism[key] = diff
    return C2Report(ours.space.dims(), {k: v for k, v in cl.space.dims().items() if k[1] <= cx.w_max},
                    ours.cohomology(), {k: v for k, v in cl.cohomology().items() if k[1] <= cx.w_max}, mism)
