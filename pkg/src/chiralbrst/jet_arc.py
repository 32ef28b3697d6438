"""Jet and arc algebras, the derivation T and level-0 vertex Poisson structures.

Jet generator (i, j) stands for x^i_{(-j-1)}; its weight is wt(x^i) + j and
T x^i_{(-j-1)} = (j+1) x^i_{(-j-2)}, so T^j x^i = j! x^i_{(-j-1)}.  Arc
algebras are truncated at a weight bound; asking for a jet beyond the bound
raises ``TruncationError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .dglie_ce import DgLieAlgebra
from .graded_kernel import (
    ONE,
    ZERO,
    Generator,
    Mono,
    SpanReducer,
    SuperAlgebra,
    TruncationError,
    Vector,
    vadd,
    vclean,
    vscale,
)
from .shifted_poisson import PoissonAlgebra, kirillov_kostant


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass
class JetAlgebra:
    """J_n(R) (n = None for the arc algebra) of R = k[x^1..x^N]/(f_1..f_M), weight <= w_max."""

    base: SuperAlgebra
    relations: List[Vector]
    order: Optional[int]
    w_max: int
    alg: SuperAlgebra = field(init=False)
    index: Dict[Tuple[int, int], int] = field(init=False)
    jets: List[Tuple[int, int]] = field(init=False)

    def __post_init__(self):
        gens, jets = [], []
        for i, g in enumerate(self.base.gens):
            w0 = g.weight
            j = 0
            while w0 + j <= self.w_max and (self.order is None or j <= self.order):
                if w0 + j <= 0 and not g.parity:
                    raise TruncationError(f"even generator {g.name} has a weight-0 jet")
                gens.append(Generator(f"{g.name}_({-j - 1})", g.degree, w0 + j, g.charge))
                jets.append((i, j))
                j += 1
        self.alg = SuperAlgebra(gens)
        self.jets = jets
        self.index = {ij: k for k, ij in enumerate(jets)}

    def gen(self, i: int, j: int = 0) -> Vector:
        k = self.index.get((i, j))
        if k is None:
            raise TruncationError(f"jet ({i}, {j}) is beyond the truncation")
        return {((k, 1),): ONE}

    def embed(self, v: Mapping) -> Vector:
        """Base polynomial -> jet-0 polynomial."""
        return self.alg.substitute(lambda i: self.gen(i, 0), v) if v else {}

    def T(self, v: Mapping) -> Vector:
        def img(k):
            i, j = self.jets[k]
            top = self.index.get((i, j + 1))
            if top is None:
                raise TruncationError(f"T leaves the truncation at jet ({i}, {j})")
            return {((top, 1),): Fraction(j + 1)}

        return self.alg.apply_derivation(img, 0, v)

    def T_power(self, v: Mapping, k: int) -> Vector:
        for _ in range(k):
            if not v:
                break
            v = self.T(v)
        return v

    def lie_element(self, i: int, j: int) -> Vector:
        """x ⊗ t^j read as T^j x = j! x_{(-j-1)}."""
        return vscale(self.gen(i, j), Fraction(factorial(j)))

    # relations ---------------------------------------------------------------
    def relation_span(self, weight: int) -> SpanReducer:
        """Span of (T^k f_l) · monomials in the given weight (k <= order for J_n)."""
        red = SpanReducer()
        for f in self.relations:
            cur = self.embed(f)
            k = 0
            while cur:
                ws = {self.alg.weight(m) for m in cur}
                w = min(ws)
                if w > weight or (self.order is not None and k > self.order):
                    break
                for m in self.alg.monomials(weight - w):
                    red.add(self.alg.mul(cur, {m: ONE}))
                if w == weight:
                    break
                try:
                    cur = self.T(cur)
                except TruncationError:
                    break
                k += 1
        return red

    def dims(self) -> Dict[Tuple[int, int], int]:
        """dim of the quotient per (weight, degree)."""
        out: Dict[Tuple[int, int], int] = {}
        for w in range(self.w_max + 1):
            monos = self.alg.monomials(w)
            red = self.relation_span(w)
            per: Dict[int, int] = {}
            for m in monos:
                per[self.alg.degree(m)] = per.get(self.alg.degree(m), 0) + 1
            # relations are homogeneous in degree, so subtract ranks per degree
            by_deg: Dict[int, int] = {}
            for lead in red.pivots:
                by_deg[self.alg.degree(lead)] = by_deg.get(self.alg.degree(lead), 0) + 1
            for d, c in per.items():
                out[(w, d)] = c - by_deg.get(d, 0)
        return {k: v for k, v in sorted(out.items())}

    def weight_dims(self) -> List[int]:
        tot = [0] * (self.w_max + 1)
        for (w, _), c in self.dims().items():
            tot[w] += c
        return tot


def jet(base: SuperAlgebra, relations: Sequence[Mapping] = (), order: Optional[int] = None,
        w_max: int = 4) -> JetAlgebra:
    return JetAlgebra(base, [dict(r) for r in relations], order, w_max)


def free_count(gen_weights: Sequence[int], w_max: int, odd: Sequence[bool] = ()) -> List[int]:
    """Partition oracle: weight-graded dims of the free algebra on the jets of the
    given generators (a generator of weight w0 has jets of weight w0, w0+1, ...)."""
    odd = list(odd) or [False] * len(gen_weights)
    series = [0] * (w_max + 1)
    series[0] = 1
    for w0, o in zip(gen_weights, odd):
        for w in range(w0, w_max + 1):
            if w <= 0:
                continue
            if o:
                for t in range(w_max, w - 1, -1):
                    series[t] += series[t - w]
            else:
                for t in range(w, w_max + 1):
                    series[t] += series[t - w]
    return series


# ---------------------------------------------------------------------------
# level-0 vertex Poisson structure

@dataclass
class LevelZeroVPA:
    """J_∞(R) of a Poisson algebra R with u_{(n)}(T^l v) = l!/(l-n)! T^{l-n}{u, v}."""

    P: PoissonAlgebra
    jets: JetAlgebra

    def __post_init__(self):
        self._gen_cache: Dict[Tuple[int, int, int], Vector] = {}

    @property
    def alg(self) -> SuperAlgebra:
        return self.jets.alg

    def base_mode_on_jet(self, i: int, m: int, k: int) -> Vector:
        """(x^i)_{(m)} applied to the jet generator with index k."""
        key = (i, m, k)
        hit = self._gen_cache.get(key)
        if hit is None:
            b, l = self.jets.jets[k]
            if l < m:
                hit = {}
            else:
                br = self.jets.embed(self.P.gen_bracket(i, b))
                hit = vscale(self.jets.T_power(br, l - m), Fraction(1, factorial(l - m)))
            self._gen_cache[key] = hit
        return hit

    def base_mode(self, i: int, m: int, v: Mapping) -> Vector:
        """(x^i)_{(m)} for m >= 0, a derivation of parity |x^i|."""
        if m < 0:
            raise ValueError("only non-negative modes act as derivations")
        par = self.P.alg.par[i]
        return self.alg.apply_derivation(lambda k: self.base_mode_on_jet(i, m, k), par, v)

    def gen_mode(self, k: int, n: int, v: Mapping) -> Vector:
        """Mode n >= 0 of the jet generator k = (i, j): (T^{(j)} x)_{(n)} = (-1)^j C(n, j) x_{(n-j)}."""
        i, j = self.jets.jets[k]
        if n < j:
            return {}
        return vscale(self.base_mode(i, n - j, v), Fraction(_sgn(j) * comb(n, j)))

    def mode(self, u: Mapping, n: int, v: Mapping) -> Vector:
        """u_{(n)} v for u linear in jet generators."""
        out: Vector = {}
        for mono, c in u.items():
            if len(mono) != 1 or mono[0][1] != 1:
                raise ValueError("modes are defined here for linear combinations of jet generators")
            vadd(out, self.gen_mode(mono[0][0], n, v), c)
        return vclean(out)

    def skew_mode(self, v: Mapping, n: int, g: int) -> Vector:
        """v_{(n)} g for an arbitrary element v and a jet generator g, by skew-symmetry:
        v_{(n)} g = -(-1)^{|v||g|} Σ_j (-1)^{n+j} T^{(j)} (g_{(n+j)} v)."""
        pg = self.alg.par[g]
        out: Vector = {}
        for mono, c in v.items():
            pv = self.alg.parity(mono)
            j = 0
            while True:
                x = self.gen_mode(g, n + j, {mono: ONE})
                if not x and n + j > self.jets.w_max + 1:
                    break
                if x:
                    t = vscale(self.jets.T_power(x, j), Fraction(1, factorial(j)))
                    vadd(out, t, -c * _sgn(pv * pg + n + j))
                j += 1
        return vclean(out)


def level0_bracket(vpa: LevelZeroVPA, u: Mapping, n: int, v: Mapping) -> Vector:
    return vpa.mode(u, n, v)


def arc_of_poisson(P: PoissonAlgebra, w_max: int) -> LevelZeroVPA:
    return LevelZeroVPA(P, jet(P.alg, (), None, w_max))


def arc_of_kk(lie: DgLieAlgebra, w_max: int) -> LevelZeroVPA:
    return arc_of_poisson(kirillov_kostant(lie), w_max)


def clifford_vpa(lie: DgLieAlgebra, w_max: int) -> LevelZeroVPA:
    """J_∞ of the classical Clifford algebra: ψ̄_i t^m (m < 0) is the jet (ψ̄_i, -m-1),
    ψ̄*_i t^{n-1}dt (n <= 0) is the jet (ψ̄*_i, -n)."""
    from .classical_brst import clifford

    return arc_of_poisson(clifford(lie).poisson, w_max)


# ---------------------------------------------------------------------------
# associated Poisson algebra

@dataclass
class AssociatedPoisson:
    """P / (ideal generated by Img T) per weight, with {ā, b̄} = a_{(0)} b."""

    vpa: LevelZeroVPA
    reducers: Dict[int, SpanReducer]
    basis: Dict[int, List[Mono]]

    def dims(self) -> List[int]:
        return [len(self.basis[w]) for w in sorted(self.basis)]

    def normal_form(self, v: Mapping) -> Vector:
        out: Vector = {}
        by_w: Dict[int, Vector] = {}
        for m, c in v.items():
            by_w.setdefault(self.vpa.alg.weight(m), {})[m] = c
        for w, part in by_w.items():
            vadd(out, self.reducers[w].reduce(part))
        return vclean(out)

    def bracket(self, a: Mapping, b: Mapping) -> Vector:
        return self.normal_form(self.vpa.mode(a, 0, b))


def associated_poisson(vpa: LevelZeroVPA, w_max: Optional[int] = None) -> AssociatedPoisson:
    """The ideal generated by T(P) is generated by the T-images of the jet generators."""
    J = vpa.jets
    w_max = J.w_max if w_max is None else w_max
    t_images = []
    for k, (i, j) in enumerate(J.jets):
        if (i, j + 1) in J.index:
            t_images.append(J.T({((k, 1),): ONE}))
    reducers, basis = {}, {}
    for w in range(w_max + 1):
        monos = J.alg.monomials(w)
        order = {m: t for t, m in enumerate(monos)}
        red = SpanReducer(order=lambda m: -order.get(m, -1))
        for g in t_images:
            gw = J.alg.weight(next(iter(g)))
            if gw > w:
                continue
            for m in J.alg.monomials(w - gw):
                red.add(J.alg.mul(g, {m: ONE}))
        for f in J.relations:
            e = J.embed(f)
            if not e:
                continue
            fw = J.alg.weight(next(iter(e)))
            if fw <= w:
                for m in J.alg.monomials(w - fw):
                    red.add(J.alg.mul(e, {m: ONE}))
        reducers[w] = red
        basis[w] = [m for m in monos if m not in red.pivots]
    return AssociatedPoisson(vpa, reducers, basis)


def image_of_T(J: JetAlgebra, weight: int) -> SpanReducer:
    """Linear span of T(weight - 1 slice) inside the weight slice."""
    red = SpanReducer()
    for m in J.alg.monomials(weight - 1):
        red.add(J.T({m: ONE}))
    return red
