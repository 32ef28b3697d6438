"""Classical BRST reduction and its bar-complex model.

The classical BRST complex of (l, R, μ) is Cl̄(l) ⊗ R with the differential
d_R + {Q̄, -}.  Everything is graded by (cohomological degree, w) where the
internal weight w counts R-generators (with their declared weights) plus
ψ̄-ghosts; ψ̄*-ghosts have weight 0.  Both terms of Q̄ have weight 1 and the
bracket lowers weight by 1, so d preserves w and every block is finite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Set, Tuple

from .dglie_ce import DgLieAlgebra, LieModule, ce_complex
from .graded_kernel import (
    ONE,
    ZERO,
    AuditError,
    BlockMap,
    Generator,
    GradedSpace,
    Mono,
    SpanReducer,
    SuperAlgebra,
    TruncatedComplex,
    Vector,
    check_chain_map,
    induced_map_rank,
    kernel_basis,
    vadd,
    vclean,
    vscale,
)
from .shifted_poisson import MomentumMap, PoissonAlgebra, check_momentum, tensor_poisson


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def algebra_blocks(alg: SuperAlgebra, w_bound: int, allowed: Optional[Sequence[int]] = None,
                   w_min: int = 0) -> GradedSpace:
    """Monomial basis keyed by (degree, weight) for weights in [w_min, w_bound]."""
    blocks: Dict[Tuple[int, int], List[Hashable]] = {}
    for w in range(w_min, w_bound + 1):
        for m in alg.monomials(w, allowed):
            blocks.setdefault((alg.degree(m), w), []).append(m)
    return GradedSpace({k: blocks[k] for k in sorted(blocks)})


def derivation_complex(alg: SuperAlgebra, d: Callable[[Mapping], Vector], w_bound: int,
                       check: bool = True) -> TruncatedComplex:
    """The free algebra truncated at weight w_bound with a weight-preserving differential."""
    space = algebra_blocks(alg, w_bound)
    return TruncatedComplex.build(space, lambda m: d({m: ONE}), w_bound, check=check)


# ---------------------------------------------------------------------------
# classical Clifford algebra

@dataclass
class ClassicalClifford:
    lie: DgLieAlgebra
    poisson: PoissonAlgebra

    @property
    def alg(self) -> SuperAlgebra:
        return self.poisson.alg

    def psi(self, i: int) -> Vector:
        return self.alg.gen(i)

    def psi_star(self, i: int) -> Vector:
        return self.alg.gen(self.lie.dim + i)


def clifford(lie: DgLieAlgebra, psi_weight: int = 1) -> ClassicalClifford:
    """Generators ψ̄_i ∈ l[1] (charge -1) and ψ̄*_i ∈ l*[-1] (charge +1), {ψ̄_i, ψ̄*_j} = δ_ij."""
    n = lie.dim
    gens = [Generator(f"psi_{x}", d - 1, psi_weight, -1) for x, d in zip(lie.names, lie.degrees)]
    gens += [Generator(f"psis_{x}", 1 - d, 0, 1) for x, d in zip(lie.names, lie.degrees)]
    alg = SuperAlgebra(gens)
    table: Dict[Tuple[int, int], Vector] = {}
    for i in range(n):
        a, b = alg.deg[i], alg.deg[n + i]
        table[(i, n + i)] = {(): ONE}
        table[(n + i, i)] = {(): Fraction(-_sgn(a * b))}
    return ClassicalClifford(lie, PoissonAlgebra(alg, 1, table))


# ---------------------------------------------------------------------------
# BRST charge and complex

@dataclass
class BRSTData:
    """Cl̄(l) ⊗ R as one Poisson algebra: R generators first, then ψ̄, then ψ̄*."""

    lie: DgLieAlgebra
    R: PoissonAlgebra
    mu: List[Vector]
    total: PoissonAlgebra
    charge: Vector

    @property
    def offset(self) -> int:
        return len(self.R.alg)

    def psi(self, i: int) -> int:
        return self.offset + i

    def psi_star(self, i: int) -> int:
        return self.offset + self.lie.dim + i

    def d(self, p: Mapping) -> Vector:
        out = self.total.d(p)
        vadd(out, self.total.bracket(self.charge, p))
        return out


def brst_charge(lie: DgLieAlgebra, R: PoissonAlgebra, mu, validate: bool = True,
                cubic_sign: int = -1) -> BRSTData:
    """Q̄ = Σ μ(x_i) ψ̄*_i - ½ Σ c_ij^k ψ̄*_i ψ̄*_j ψ̄_k on Cl̄(l) ⊗ R."""
    if any(lie.degrees) or lie.differential:
        raise ValueError("the classical BRST complex is built for ordinary Lie algebras")
    values = list(mu.values) if isinstance(mu, MomentumMap) else [dict(v) for v in mu]
    if validate:
        rep = check_momentum(MomentumMap(lie, R, values))
        if not rep.ok:
            raise AuditError("momentum map is not a Lie map", rep.failures[0][1])
    cl = clifford(lie)
    total = tensor_poisson(R, cl.poisson)
    data = BRSTData(lie, R, values, total, {})
    alg = total.alg
    Q: Vector = {}
    for i in range(lie.dim):
        vadd(Q, alg.mul(values[i], alg.gen(data.psi_star(i))))
    for i, j, k, c in lie.structure_triples():
        term = alg.prod([alg.gen(data.psi_star(i)), alg.gen(data.psi_star(j)), alg.gen(data.psi(k))])
        vadd(Q, term, Fraction(cubic_sign, 2) * c)
    data.charge = vclean(Q)
    return data


def charge_square(data: BRSTData) -> Vector:
    return vclean(data.total.bracket(data.charge, data.charge))


@dataclass
class ClassicalBRSTComplex:
    data: BRSTData
    complex: TruncatedComplex
    w_bound: int

    def cohomology(self) -> Dict[Tuple[int, int], int]:
        return self.complex.cohomology()

    @property
    def alg(self) -> SuperAlgebra:
        return self.data.total.alg


def brst_complex(lie: DgLieAlgebra, R: PoissonAlgebra, mu, w_bound: int, validate: bool = True,
                 data: Optional[BRSTData] = None) -> ClassicalBRSTComplex:
    data = data or brst_charge(lie, R, mu, validate)
    sq = charge_square(data)
    if sq:
        raise AuditError("{Q, Q} != 0", data.total.alg.to_str(sq))
    cx = derivation_complex(data.total.alg, data.d, w_bound)
    return ClassicalBRSTComplex(data, cx, w_bound)


def brst_cohomology(cx: ClassicalBRSTComplex) -> Dict[Tuple[int, int], int]:
    """dim H per (ghost degree, w)."""
    return cx.cohomology()


# ---------------------------------------------------------------------------
# quotients R / I per weight

@dataclass
class WeightQuotient:
    """R/I in one weight, I the ideal generated by homogeneous elements."""

    alg: SuperAlgebra
    weight: int
    reducer: SpanReducer
    basis: List[Mono]

    def normal_form(self, v: Mapping) -> Vector:
        return vclean(self.reducer.reduce(v))


def ideal_quotient(alg: SuperAlgebra, generators: Sequence[Mapping], weight: int) -> WeightQuotient:
    monos = alg.monomials(weight)
    order = {m: i for i, m in enumerate(monos)}
    # prefer pivots on the largest monomials so that small ones stay as a basis
    red = SpanReducer(order=lambda m: -order.get(m, -1))
    for g in generators:
        if not g:
            continue
        gw = alg.weight(next(iter(g)))
        if gw > weight:
            continue
        for m in alg.monomials(weight - gw):
            red.add(alg.mul(g, {m: ONE}))
    basis = [m for m in monos if m not in red.pivots]
    return WeightQuotient(alg, weight, red, basis)


def quotient_dims(alg: SuperAlgebra, generators: Sequence[Mapping], w_bound: int) -> List[int]:
    return [len(ideal_quotient(alg, generators, w).basis) for w in range(w_bound + 1)]


def quotient_module(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping], w_bound: int) -> Tuple[LieModule, Dict[int, WeightQuotient]]:
    """R̄ = R/μ(l)R as an l-module, x acting by {μ(x), -}."""
    quots = {w: ideal_quotient(R.alg, mu, w) for w in range(w_bound + 1)}
    blocks: Dict[Tuple[int, int], List[Hashable]] = {}
    for w, q in quots.items():
        for m in q.basis:
            blocks.setdefault((R.alg.degree(m), w), []).append(m)
    space = GradedSpace({k: blocks[k] for k in sorted(blocks)})

    def action(i, m):
        img = R.bracket(mu[i], {m: ONE})
        if not img:
            return {}
        w = R.alg.weight(next(iter(img)))
        return quots[w].normal_form(img) if w in quots else {}

    return LieModule(space, action), quots


def invariant_dims(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping], w_bound: int) -> List[int]:
    """dim (R/μ(l)R)^l per weight: the fiber-product oracle for H⁰."""
    module, quots = quotient_module(lie, R, mu, w_bound)
    out = []
    for w in range(w_bound + 1):
        basis = quots[w].basis
        cols = []
        for m in basis:
            col: Vector = {}
            for i in range(lie.dim):
                for t, c in module.action(i, m).items():
                    col[(i, t)] = c
            cols.append(col)
        out.append(len(kernel_basis(cols, len(basis))))
    return out


def brst_to_ce_map(cx: ClassicalBRSTComplex, w_bound: int):
    """The quotient cBRST -> CE(l, R̄) killing the ideal generated by the ψ̄_i.

    Returns (ce, map) with ``map`` a BlockMap; ψ̄*_i goes to the CE ghost c^i.
    """
    data = cx.data
    module, quots = quotient_module(data.lie, data.R, data.mu, w_bound)
    ce = ce_complex(data.lie, module)
    off = data.offset
    n = data.lie.dim
    alg = data.total.alg

    def f(m):
        if any(off <= i < off + n for i, _ in m):
            return {}
        r = tuple((i, e) for i, e in m if i < off)
        g = tuple((i - off - n, e) for i, e in m if i >= off + n)
        w = data.R.alg.weight(r)
        nf = quots[w].normal_form({r: ONE}) if w in quots else {}
        # m = r * g in the total algebra (R generators come first, R is even here)
        return {(g, t): c for t, c in nf.items()}

    # CE blocks are (ghost degree + module degree, module weight)
    target = ce.complex.space
    mp = BlockMap.from_function(cx.complex.space, target, (0, 0), f, strict=True)
    return ce, mp


# ---------------------------------------------------------------------------
# Koszul cdga

@dataclass
class KoszulComplex:
    lie: DgLieAlgebra
    R: PoissonAlgebra
    alg: SuperAlgebra
    complex: TruncatedComplex

    @property
    def offset(self) -> int:
        return len(self.R.alg)


def koszul_cdga(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping], w_bound: int) -> KoszulComplex:
    """Sym(l[1]) ⊗ R with d(y_i) = μ(x_i), d(r) = d_R r."""
    off = len(R.alg)
    ys = []
    for i, x in enumerate(lie.names):
        ws = {R.alg.weight(m) for m in mu[i]} or {1}
        if len(ws) != 1:
            raise ValueError("μ(x) must be weight-homogeneous")
        ys.append(Generator(f"y_{x}", lie.degrees[i] - 1, ws.pop(), -1))
    alg = SuperAlgebra(list(R.alg.gens) + ys)

    def images(j):
        if j < off:
            return R.differential.get(j, {})
        return mu[j - off]

    def d(p):
        return alg.apply_derivation(images, 1, p)

    cx = derivation_complex(alg, d, w_bound)
    return KoszulComplex(lie, R, alg, cx)


# ---------------------------------------------------------------------------
# two-sided bar complex

Word = Tuple[Mono, ...]


@dataclass
class BarComplex:
    """Tot of L ⊗ Ā[1]^{⊗p} ⊗ M for p <= p_max (reduced: letters of positive weight or degree).

    Labels are (l, (a_1, ..., a_p), m).  Cohomology at total degree
    <= -p_max is indeterminate because the incoming bar degree is cut off;
    this only applies when the data sit in degree 0.
    """

    A: SuperAlgebra
    L: GradedSpace
    M: GradedSpace
    p_max: int
    complex: TruncatedComplex
    window: int

    def cohomology(self) -> Dict[Tuple[int, int], int]:
        table = self.complex.cohomology()
        return {k: v for k, v in table.items() if k[0] > self.window}

    def indeterminate(self) -> List[Tuple[int, int]]:
        return [k for k in self.complex.space.keys() if k[0] <= self.window]


def _label_keys(space: GradedSpace) -> Dict[Hashable, Tuple[int, int]]:
    return {lab: k for k, bs in space.blocks.items() for lab in bs}


def bar_complex(A: SuperAlgebra, letters: Sequence[Mono], L: GradedSpace, M: GradedSpace,
                right_action: Callable[[Hashable, Mono], Mapping],
                left_action: Callable[[Mono, Hashable], Mapping],
                p_max: int, w_bound: Optional[int] = None,
                d_A: Optional[Callable[[Mapping], Vector]] = None,
                d_L: Optional[Callable[[Hashable], Mapping]] = None,
                d_M: Optional[Callable[[Hashable], Mapping]] = None,
                check: bool = True) -> BarComplex:
    """Two-sided bar complex with total differential (-1)^p d_v + d_h.

    d_h[l|a_1|..|a_p|m] = [l.a_1|..] + Σ (-1)^i [..|a_i a_{i+1}|..] + (-1)^p [..|a_p.m]
    d_v is the tensor differential on L ⊗ A[1]^{⊗p} ⊗ M (letters shifted by 1).
    """
    lk, mk = _label_keys(L), _label_keys(M)
    letters = list(letters)
    letter_set = set(letters)
    lw = {a: (A.degree(a), A.weight(a)) for a in letters}
    blocks: Dict[Tuple[int, int], List[Hashable]] = {}

    def words(p):
        return itertools.product(letters, repeat=p)

    for p in range(p_max + 1):
        for word in words(p):
            wd = sum(lw[a][0] for a in word) - p
            ww = sum(lw[a][1] for a in word)
            if w_bound is not None and ww > w_bound:
                continue
            for l, kl in lk.items():
                for m, km in mk.items():
                    w = ww + kl[1] + km[1]
                    if w_bound is not None and w > w_bound:
                        continue
                    blocks.setdefault((wd + kl[0] + km[0], w), []).append((l, tuple(word), m))
    space = GradedSpace({k: blocks[k] for k in sorted(blocks)})

    def letter_vec(v: Mapping) -> Vector:
        bad = [m for m in v if m not in letter_set]
        if bad:
            # products landing on the unit are not letters of the reduced complex
            v = {m: c for m, c in v.items() if m in letter_set}
        return v

    def d(label):
        l, word, m = label
        p = len(word)
        out: Vector = {}
        if p:
            for l2, c in right_action(l, word[0]).items():
                vadd(out, {(l2, word[1:], m): ONE}, c)
            for i in range(p - 1):
                s, prod = A.mono_mul(word[i], word[i + 1])
                if s and prod in letter_set:
                    vadd(out, {(l, word[:i] + (prod,) + word[i + 2:], m): ONE}, Fraction(_sgn(i + 1) * s))
            for m2, c in left_action(word[-1], m).items():
                vadd(out, {(l, word[:-1], m2): ONE}, _sgn(p) * c)
        # vertical part with the (-1)^p twist
        sv = _sgn(p)
        if d_L is not None:
            for l2, c in d_L(l).items():
                vadd(out, {(l2, word, m): ONE}, sv * c)
        run = lk[l][0]
        if d_A is not None:
            for i, a in enumerate(word):
                for a2, c in letter_vec(d_A({a: ONE})).items():
                    vadd(out, {(l, word[:i] + (a2,) + word[i + 1:], m): ONE}, sv * _sgn(run) * c)
                run += lw[a][0] - 1
        else:
            run += sum(lw[a][0] - 1 for a in word)
        if d_M is not None:
            for m2, c in d_M(m).items():
                vadd(out, {(l, word, m2): ONE}, sv * _sgn(run) * c)
        return out

    cx = TruncatedComplex.build(space, d, w_bound, check=check)
    window = -p_max if all(lw[a][0] == 0 for a in letters) else -10 ** 9
    return BarComplex(A, L, M, p_max, cx, window)


def sym_letters(A: SuperAlgebra, w_bound: int) -> List[Mono]:
    return [m for w in range(1, w_bound + 1) for m in A.monomials(w)]


def point_space() -> GradedSpace:
    """The ground field as a module: one label ``()`` in degree 0, weight 0."""
    return GradedSpace({(0, 0): [()]})


def reduction_bar(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping], p_max: int,
                  w_bound: int) -> BarComplex:
    """bar(k, Sym l, R): k ⊗^L_{Sym l} R with Sym l acting on R through μ."""
    A = SuperAlgebra([Generator(x, d, 1) for x, d in zip(lie.names, lie.degrees)])
    letters = sym_letters(A, w_bound)
    M = algebra_blocks(R.alg, w_bound)

    def left(a, m):
        img = A.substitute(lambda j: mu[j], {a: ONE})
        return R.alg.mul(img, {m: ONE})

    return bar_complex(A, letters, point_space(), M, lambda l, a: {}, left, p_max, w_bound,
                       d_M=(lambda m: R.d({m: ONE})) if R.differential else None)


# ---------------------------------------------------------------------------
# HBc comparison maps

@dataclass
class HBcMaps:
    koszul: KoszulComplex
    bar: BarComplex
    antisym: BlockMap


def hbc_chain_maps(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping], p_max: int,
                   w_bound: int) -> HBcMaps:
    """x_1 ∧ .. ∧ x_p ⊗ r ↦ (-1)^p Σ_σ (-1)^ε [x_σ(1)|..|x_σ(p)|r] from the Koszul cdga to the bar model.

    The extra (-1)^p reconciles the Koszul sign (-1)^{i-1} with the bar
    sign (-1)^p on [..|a_p.m]; without it the map anticommutes with d.
    The Koszul side is cut at p <= p_max to match the bar truncation.
    """
    kz = koszul_cdga(lie, R, mu, w_bound)
    bar = reduction_bar(lie, R, mu, p_max, w_bound)
    off = kz.offset
    A = bar.A
    degs = [d - 1 for d in lie.degrees]

    def f(m):
        ys = [i - off for i, e in m if i >= off for _ in range(e)]
        r = tuple((i, e) for i, e in m if i < off)
        if len(ys) > p_max:
            return {}
        out: Vector = {}
        for perm in itertools.permutations(range(len(ys))):
            e = 0
            for a in range(len(perm)):
                for b in range(a + 1, len(perm)):
                    if perm[a] > perm[b]:
                        e += degs[ys[perm[a]]] * degs[ys[perm[b]]]
            word = tuple(((ys[k], 1),) for k in perm)
            vadd(out, {((), word, r): ONE}, Fraction(_sgn(e + len(ys))))
        return out

    mp = BlockMap.from_function(kz.complex.space, bar.complex.space, (0, 0), f, strict=False)
    return HBcMaps(kz, bar, mp)


def check_hbc_chain_map(maps: HBcMaps) -> None:
    """d∘Φ = Φ∘d on every Koszul block whose image and boundary stay inside p <= p_max."""
    p_max = maps.bar.p_max
    src = maps.koszul.complex
    off = maps.koszul.offset
    for key in src.space.keys():
        for lab in src.space.blocks[key]:
            p = sum(e for i, e in lab if i >= off)
            if p > p_max:
                continue
            left = maps.bar.complex.differential.apply(key, maps.antisym.apply(key, {lab: ONE}))
            tkey = (key[0] + 1, key[1])
            right = maps.antisym.apply(tkey, src.differential.apply(key, {lab: ONE})) if tkey in src.space.blocks else {}
            if vclean(left) != vclean(right):
                raise AuditError(f"antisymmetrization is not a chain map on {lab!r}", key)


def hbc_h0_iso(maps: HBcMaps) -> Dict[int, Tuple[int, int, int]]:
    """Per weight: (dim H⁰ Koszul, dim H⁰ bar, rank of the induced map)."""
    src, tgt = maps.koszul.complex, maps.bar.complex
    hs, ht = src.cohomology(), tgt.cohomology()
    out = {}
    for key in src.space.keys():
        if key[0] != 0:
            continue
        out[key[1]] = (hs.get(key, 0), ht.get(key, 0), induced_map_rank(maps.antisym, src, tgt, key))
    return out


@dataclass
class SplittingCheck:
    bar: BarComplex
    split: BlockMap
    mult: BlockMap


def exterior_splitting(lie: DgLieAlgebra, p_max: int) -> SplittingCheck:
    """W' = Sym(l*[-1]) and the maps W' -> W' ⊗ T(W') ⊗ W' -> W', x ↦ [x||1] and multiplication.

    Grading is (degree, 0): the exterior algebra is finite, so no weight is needed.
    """
    W = SuperAlgebra([Generator(f"c_{x}", 1 - d, 0) for x, d in zip(lie.names, lie.degrees)])
    monos = [m for m in W.monomials(0) if True]
    blocks: Dict[Tuple[int, int], List[Hashable]] = {}
    for m in monos:
        blocks.setdefault((W.degree(m), 0), []).append(m)
    Wsp = GradedSpace({k: blocks[k] for k in sorted(blocks)})
    letters = [m for m in monos if m]

    def act_r(l, a):
        s, m = W.mono_mul(l, a)
        return {m: Fraction(s)} if s else {}

    def act_l(a, m):
        s, r = W.mono_mul(a, m)
        return {r: Fraction(s)} if s else {}

    bar = bar_complex(W, letters, Wsp, Wsp, act_r, act_l, p_max)
    split = BlockMap.from_function(Wsp, bar.complex.space, (0, 0), lambda x: {(x, (), ()): ONE})

    def mult(label):
        l, word, m = label
        if word:
            return {}
        s, r = W.mono_mul(l, m)
        return {r: Fraction(s)} if s else {}

    mul = BlockMap.from_function(bar.complex.space, Wsp, (0, 0), mult)
    return SplittingCheck(bar, split, mul)


# ---------------------------------------------------------------------------
# P_n bialgebra T(A[1])

BarElement = Dict[Word, Fraction]


@dataclass
class BarBialgebra:
    """T(A[1]) for a P_{n+1} algebra A: bar differential, shuffle product,
    deconcatenation and the bracket induced from A's bracket."""

    P: PoissonAlgebra
    n: int

    @property
    def A(self) -> SuperAlgebra:
        return self.P.alg

    def letter_degree(self, a: Mono) -> int:
        return self.A.degree(a)

    def degree(self, word: Word) -> int:
        return sum(self.letter_degree(a) - 1 for a in word)

    def word(self, *letters: Mapping) -> BarElement:
        """Multilinear expansion of [v_1|...|v_p] for elements v_i of A."""
        out: BarElement = {(): ONE}
        for v in letters:
            nxt: BarElement = {}
            for w, c in out.items():
                for m, cm in v.items():
                    vadd(nxt, {w + (m,): ONE}, c * cm)
            out = nxt
        return vclean(out)

    def d(self, x: Mapping) -> BarElement:
        out: BarElement = {}
        for word, c in x.items():
            run = 0
            for i, a in enumerate(word):
                da = self.P.d({a: ONE})
                for a2, ca in da.items():
                    vadd(out, {word[:i] + (a2,) + word[i + 1:]: ONE}, c * ca * _sgn(run + i))
                run += self.letter_degree(a)
            run = 0
            for i in range(len(word) - 1):
                run += self.letter_degree(word[i])
                s, prod = self.A.mono_mul(word[i], word[i + 1])
                if s:
                    vadd(out, {word[:i] + (prod,) + word[i + 2:]: ONE}, c * s * _sgn(run + i + 1))
        return vclean(out)

    def shuffle(self, x: Mapping, y: Mapping) -> BarElement:
        out: BarElement = {}
        for u, cu in x.items():
            for v, cv in y.items():
                p, q = len(u), len(v)
                letters = u + v
                degs = [self.letter_degree(a) - 1 for a in letters]
                for first in itertools.combinations(range(p + q), p):
                    perm = [None] * (p + q)
                    fi = iter(range(p))
                    si = iter(range(p, p + q))
                    for pos in range(p + q):
                        perm[pos] = next(fi) if pos in first else next(si)
                    e = 0
                    for a in range(p + q):
                        for b in range(a + 1, p + q):
                            if perm[a] > perm[b]:
                                e += degs[perm[a]] * degs[perm[b]]
                    vadd(out, {tuple(letters[k] for k in perm): ONE}, cu * cv * _sgn(e))
        return vclean(out)

    def coproduct(self, x: Mapping) -> Dict[Tuple[Word, Word], Fraction]:
        out: Dict[Tuple[Word, Word], Fraction] = {}
        for word, c in x.items():
            for i in range(len(word) + 1):
                vadd(out, {(word[:i], word[i:]): ONE}, c)
        return vclean(out)

    def concat(self, *parts: Mapping) -> BarElement:
        out: BarElement = {(): ONE}
        for part in parts:
            nxt: BarElement = {}
            for w, c in out.items():
                for w2, c2 in part.items():
                    vadd(nxt, {w + w2: ONE}, c * c2)
            out = nxt
        return vclean(out)

    def bracket(self, x: Mapping, y: Mapping) -> BarElement:
        """Σ_{i,j} (-1)^{ε₁ + |a_i| + n + 1} ([a_<i]·[b_<j]) ∧ [{a_i, b_j}] ∧ ([a_>i]·[b_>j]).

        ε₁ is read as the Koszul sign (in A[1]-degrees) of moving a_{i+1}..a_p
        past b_1..b_{j-1}; this reading makes the bracket antisymmetric and Jacobi.
        """
        out: BarElement = {}
        for u, cu in x.items():
            for v, cv in y.items():
                for i, a in enumerate(u):
                    for j, b in enumerate(v):
                        br = self.P.bracket({a: ONE}, {b: ONE})
                        if not br:
                            continue
                        moved = sum(self.letter_degree(t) - 1 for t in u[i + 1:])
                        past = sum(self.letter_degree(t) - 1 for t in v[:j])
                        e1 = moved * past
                        s = _sgn(e1 + self.letter_degree(a) + self.n + 1)
                        left = self.shuffle({u[:i]: ONE}, {v[:j]: ONE})
                        right = self.shuffle({u[i + 1:]: ONE}, {v[j + 1:]: ONE})
                        mid = {(m,): c for m, c in br.items()}
                        vadd(out, self.concat(left, mid, right), cu * cv * s)
        return vclean(out)


def bar_bialgebra_ops(P: PoissonAlgebra) -> BarBialgebra:
    """T(A[1]) as a P_n bialgebra for the P_{n+1} algebra P."""
    return BarBialgebra(P, P.shift - 1)


# ---------------------------------------------------------------------------
# comodule operations

@dataclass
class ComoduleOps:
    """l₂ on T(A[1]) ⊗ M for a coisotropic A -> M with first lifting component f₁."""

    M: PoissonAlgebra
    n: int
    f1: Callable[[Mono], Vector]
    letter_degree: Callable[[Mono], int]

    def l2_words(self, word: Word, m: Mapping) -> Dict[Tuple[Word, Mono], Fraction]:
        """l₂([a_1|..|a_q|1], [m]) = (-1)^{(Σ|a_i| + q)(1 - n)} [a_1|..|a_{q-1}| {f₁(a_q), m}]."""
        if not word:
            return {}
        q = len(word)
        s = _sgn((sum(self.letter_degree(a) for a in word) + q) * (1 - self.n))
        val = self.M.bracket(self.f1(word[-1]), m)
        return {(word[:-1], mono): s * c for mono, c in vclean(val).items()}

    def l2_values(self, m1: Mapping, m2: Mapping) -> Dict[Tuple[Word, Mono], Fraction]:
        return {((), mono): c for mono, c in vclean(self.M.bracket(m1, m2)).items()}


def comodule_l_ops(lie: DgLieAlgebra, R: PoissonAlgebra, mu: Sequence[Mapping]) -> ComoduleOps:
    """For the momentum map Sym l -> R: f₁(x) = μ(x) - x, whose x part brackets
    trivially with functions of R, so the letter x contributes {μ(x), -}."""
    def f1(a: Mono) -> Vector:
        if len(a) != 1 or a[0][1] != 1:
            raise ValueError("f₁ is given on linear letters")
        return dict(mu[a[0][0]])

    return ComoduleOps(R, 1, f1, lambda a: sum(lie.degrees[i] * e for i, e in a))


def l2_brst_compatibility(data: BRSTData, ops: ComoduleOps, i: int, r: Mapping) -> bool:
    """l₂([x_i|1], [r]) against {{Q̄, ψ̄_i}, r} computed inside the BRST algebra."""
    lhs = ops.l2_words((((i, 1),),), r)
    qpsi = data.total.bracket(data.charge, data.total.alg.gen(data.psi(i)))
    rhs = data.total.bracket(qpsi, r)
    return {mono: c for (_, mono), c in lhs.items()} == vclean(rhs)


# ---------------------------------------------------------------------------
# gluing

@dataclass
class GluedPoisson:
    complex: ClassicalBRSTComplex
    algebra: PoissonAlgebra
    mu: List[Vector]


def poisson_glue(R: PoissonAlgebra, mu_R: Sequence[Mapping], R2: PoissonAlgebra, mu_R2: Sequence[Mapping],
                 g: DgLieAlgebra, w_bound: int) -> GluedPoisson:
    """cBRST(g, R^op ⊗ R', -μ_R ⊗ 1 + 1 ⊗ μ_{R'}); the opposite negates the bracket."""
    total = tensor_poisson(R.opposite(), R2, ("1", "2"))
    off = len(R.alg)
    mu = []
    for i in range(g.dim):
        v = vscale(mu_R[i], -ONE)
        vadd(v, {tuple((j + off, e) for j, e in m): c for m, c in mu_R2[i].items()})
        mu.append(vclean(v))
    cx = brst_complex(g, total, mu, w_bound)
    return GluedPoisson(cx, total, mu)
