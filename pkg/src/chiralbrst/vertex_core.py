"""Weight-truncated vertex algebras generated by free fields and currents.

A ``ModeAlgebra`` is given by generators a (parity, conformal weight Δ,
charge) and the non-negative products a_{(j)} b of generators, each a
combination of generators and the vacuum.  Modes satisfy

    [a_{(m)}, b_{(n)}] = Σ_j C(m, j) (a_{(j)} b)_{(m+n-j)}

and the vacuum module has the PBW basis of ordered creation modes.  A mode
is a pair (generator index, n); a_{(n)} has weight Δ_a - n - 1 and Li degree
-n-1, and creates when n < 0.  PBW monomials list modes by (n ascending,
generator index), so the leftmost operator has the most negative n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .dglie_ce import DgLieAlgebra
from .graded_kernel import (
    ONE,
    ZERO,
    AuditError,
    BlockMap,
    GradedSpace,
    SpanReducer,
    TruncationError,
    Vector,
    vadd,
    vclean,
    vscale,
)

Mode = Tuple[int, int]
PBW = Tuple[Mode, ...]
VACUUM: PBW = ()


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def binom(m: int, j: int) -> Fraction:
    """Generalised binomial coefficient C(m, j) for any integer m and j >= 0."""
    if j < 0:
        return ZERO
    num = 1
    for t in range(j):
        num *= m - t
    return Fraction(num, factorial(j))


@dataclass(frozen=True)
class FieldGenerator:
    name: str
    parity: int
    weight: int
    charge: int = 0


@dataclass
class ModeAlgebra:
    """Vacuum module of a Lie-type mode algebra, truncated at weight ``w_max``.

    ``ope[(a, b)]`` maps j >= 0 to {c: coeff} where c is a generator index or
    ``None`` for the vacuum.
    """

    gens: List[FieldGenerator]
    ope: Dict[Tuple[int, int], Dict[int, Dict[Optional[int], Fraction]]]
    w_max: int
    level: Optional[Fraction] = None
    label: str = ""

    def __post_init__(self):
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self._apply_cache: Dict[Tuple[Mode, PBW], Vector] = {}
        self._state_cache: Dict[Tuple[PBW, int, PBW], Vector] = {}
        self._basis_cache: Dict[int, List[PBW]] = {}
        for g in self.gens:
            if g.weight <= 0 and not g.parity and g.weight == 0:
                # an even weight-0 creation mode a_{(-1)} would make slices infinite
                raise TruncationError(f"even generator {g.name} of weight 0")

    # gradings ----------------------------------------------------------------
    def mode_weight(self, mode: Mode) -> int:
        a, n = mode
        return self.gens[a].weight - n - 1

    def weight(self, mono: PBW) -> int:
        return sum(self.mode_weight(m) for m in mono)

    def charge(self, mono: PBW) -> int:
        return sum(self.gens[a].charge for a, _ in mono)

    def parity(self, mono: PBW) -> int:
        return sum(self.gens[a].parity for a, _ in mono) % 2

    def li_degree(self, mono: PBW) -> int:
        return sum(-n - 1 for _, n in mono)

    @staticmethod
    def key(mode: Mode):
        return (mode[1], mode[0])

    def is_creation(self, mode: Mode) -> bool:
        return mode[1] < 0

    # mode brackets -----------------------------------------------------------
    def bracket(self, x: Mode, y: Mode) -> Tuple[Dict[Mode, Fraction], Fraction]:
        """[x, y] as (combination of modes, scalar multiple of the identity)."""
        (a, m), (b, n) = x, y
        modes: Dict[Mode, Fraction] = {}
        scalar = ZERO
        for j, prod in self.ope.get((a, b), {}).items():
            c = binom(m, j)
            if not c:
                continue
            k = m + n - j
            for gen, coeff in prod.items():
                if gen is None:
                    if k == -1:
                        scalar += c * coeff
                else:
                    modes[(gen, k)] = modes.get((gen, k), ZERO) + c * coeff
        return {md: c for md, c in modes.items() if c}, scalar

    # action on PBW monomials ---------------------------------------------------
    def apply(self, mode: Mode, mono: PBW) -> Vector:
        """mode · mono, straightened into the PBW basis."""
        key = (mode, mono)
        hit = self._apply_cache.get(key)
        if hit is not None:
            return hit
        a, n = mode
        if not mono:
            out = {(mode,): ONE} if n < 0 else {}
        else:
            first = mono[0]
            if n < 0 and self.key(mode) < self.key(first):
                out = {(mode,) + mono: ONE}
            elif mode == first:
                if self.gens[a].parity:
                    # x x = ½[x, x] for odd x
                    modes, scalar = self.bracket(mode, mode)
                    out = {}
                    for md, c in modes.items():
                        vadd(out, self.apply(md, mono[1:]), c / 2)
                    if scalar:
                        vadd(out, {mono[1:]: ONE}, scalar / 2)
                elif n < 0:
                    out = {(mode,) + mono: ONE}
                else:
                    out = self._commute_past(mode, mono)
            else:
                out = self._commute_past(mode, mono)
        out = vclean(out)
        self._apply_cache[key] = out
        return out

    def _commute_past(self, mode: Mode, mono: PBW) -> Vector:
        first, rest = mono[0], mono[1:]
        s = _sgn(self.gens[mode[0]].parity * self.gens[first[0]].parity)
        out: Vector = {}
        inner = self.apply(mode, rest)
        for m2, c in inner.items():
            vadd(out, self.apply(first, m2), s * c)
        modes, scalar = self.bracket(mode, first)
        for md, c in modes.items():
            vadd(out, self.apply(md, rest), c)
        if scalar:
            vadd(out, {rest: ONE}, scalar)
        return out

    def act(self, mode: Mode, vec: Mapping) -> Vector:
        out: Vector = {}
        for mono, c in vec.items():
            vadd(out, self.apply(mode, mono), c)
        return vclean(out)

    def state(self, *modes: Mode) -> Vector:
        """a1_{(n1)} a2_{(n2)} ... |0⟩ in any order, straightened."""
        vec: Vector = {VACUUM: ONE}
        for md in reversed(modes):
            vec = self.act(md, vec)
        return vec

    def gen_state(self, name_or_index) -> Vector:
        a = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return {((a, -1),): ONE}

    # state space ----------------------------------------------------------------
    def creation_modes(self, w: int) -> List[Mode]:
        out = []
        for a, g in enumerate(self.gens):
            n = -1
            while g.weight - n - 1 <= w:
                out.append((a, n))
                n -= 1
        return sorted(out, key=self.key)

    def basis(self, w: int) -> List[PBW]:
        """PBW monomials of weight w in canonical order."""
        hit = self._basis_cache.get(w)
        if hit is not None:
            return hit
        modes = self.creation_modes(w)
        out: List[PBW] = []

        def rec(pos: int, remaining: int, acc: List[Mode]):
            if pos == len(modes):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            md = modes[pos]
            mw = self.mode_weight(md)
            top = 1 if self.gens[md[0]].parity else (remaining // mw if mw else 0)
            for e in range(top + 1):
                if e * mw > remaining:
                    break
                acc.extend([md] * e)
                rec(pos + 1, remaining - e * mw, acc)
                if e:
                    del acc[-e:]

        rec(0, w, [])
        self._basis_cache[w] = out
        return out

    def weight_dims(self, w_max: Optional[int] = None) -> List[int]:
        w_max = self.w_max if w_max is None else w_max
        return [len(self.basis(w)) for w in range(w_max + 1)]

    def space(self, w_max: Optional[int] = None) -> GradedSpace:
        """Blocks keyed (charge, weight)."""
        w_max = self.w_max if w_max is None else w_max
        blocks: Dict[Tuple[int, int], List[Hashable]] = {}
        for w in range(w_max + 1):
            for mono in self.basis(w):
                blocks.setdefault((self.charge(mono), w), []).append(mono)
        return GradedSpace({k: blocks[k] for k in sorted(blocks)})

    # translation -------------------------------------------------------------
    def T(self, vec: Mapping) -> Vector:
        out: Vector = {}
        for mono, c in vec.items():
            vadd(out, self._T_mono(mono), c)
        return vclean(out)

    def _T_mono(self, mono: PBW) -> Vector:
        if not mono:
            return {}
        (a, n), rest = mono[0], mono[1:]
        out: Vector = {}
        vadd(out, self.apply((a, n - 1), rest), Fraction(-n))
        for m2, c in self._T_mono(rest).items():
            vadd(out, self.apply((a, n), m2), c)
        return out

    # modes of arbitrary states ---------------------------------------------
    def state_mode_on(self, state: PBW, n: int, target: PBW) -> Vector:
        """(state)_{(n)} target via the Borcherds formula for a_{(m)} b:

        (a_{(m)} b)_{(n)} = Σ_i (-1)^i C(m, i) [a_{(m-i)} b_{(n+i)} - (-1)^m (-1)^{|a||b|} b_{(m+n-i)} a_{(i)}].
        """
        key = (state, n, target)
        hit = self._state_cache.get(key)
        if hit is not None:
            return hit
        if not state:
            out = {target: ONE} if n == -1 else {}
        else:
            (a, m), b = state[0], state[1:]
            pa, pb = self.gens[a].parity, self.parity(b)
            wb = self.weight(b)
            wv = self.weight(target)
            s2 = -_sgn(m) * _sgn(pa * pb)
            out = {}
            i = 0
            top1 = wv + wb - n - 1
            top2 = wv + self.gens[a].weight - 1
            while i <= max(top1, top2):
                c = binom(m, i) * _sgn(i)
                if c:
                    if i <= top1:
                        inner = self.state_mode_on(b, n + i, target)
                        for t, ct in inner.items():
                            vadd(out, self.apply((a, m - i), t), c * ct)
                    if i <= top2:
                        inner = self.apply((a, i), target)
                        for t, ct in inner.items():
                            vadd(out, self.state_mode_on(b, m + n - i, t), s2 * c * ct)
                i += 1
            out = vclean(out)
        self._state_cache[key] = out
        return out

    def state_mode(self, state: Mapping, n: int, vec: Mapping) -> Vector:
        out: Vector = {}
        for s, cs in state.items():
            for t, ct in vec.items():
                vadd(out, self.state_mode_on(s, n, t), cs * ct)
        return vclean(out)

    def operator(self, fn: Callable[[PBW], Mapping], shift: Tuple[int, int], w_max: Optional[int] = None) -> BlockMap:
        sp = self.space(w_max)
        return BlockMap.from_function(sp, sp, shift, fn, strict=True)

    def mode_map(self, mode: Mode, w_max: Optional[int] = None) -> BlockMap:
        sh = (self.gens[mode[0]].charge, self.mode_weight(mode))
        sp = self.space(w_max)
        return BlockMap.from_function(sp, sp, sh, lambda m: self.apply(mode, (m)), strict=False)


# ---------------------------------------------------------------------------
# constructors

def affine_vertex(lie: DgLieAlgebra, level, w_max: int, form: Optional[Mapping[Tuple[int, int], Fraction]] = None,
                  dual_coxeter: Optional[Fraction] = None, prefix: str = "") -> ModeAlgebra:
    """V_k(g): x_{(0)} y = [x, y], x_{(1)} y = k κ(x, y)/(2h∨) |0⟩."""
    from .graded_kernel import rational

    k = rational(level)
    form = form if form is not None else lie.form
    hv = rational(dual_coxeter if dual_coxeter is not None else lie.dual_coxeter)
    if form is None or not hv:
        raise ValueError("an invariant form and the dual Coxeter number are required")
    gens = [FieldGenerator(prefix + x, 0, 1, 0) for x in lie.names]
    ope: Dict[Tuple[int, int], Dict[int, Dict[Optional[int], Fraction]]] = {}
    for i in range(lie.dim):
        for j in range(lie.dim):
            entry: Dict[int, Dict[Optional[int], Fraction]] = {}
            br = lie.bracket_basis(i, j)
            if br:
                entry[0] = dict(br)
            kap = form.get((i, j), ZERO)
            if kap and k:
                entry[1] = {None: k * Fraction(kap) / (2 * hv)}
            if entry:
                ope[(i, j)] = entry
    return ModeAlgebra(gens, ope, w_max, k, f"V_{k}")


def fermion_vertex(names: Sequence[str], w_max: int) -> ModeAlgebra:
    """bc system: ψ_i (weight 1, charge -1), ψ*_i (weight 0, charge +1), {ψ_{i(m)}, ψ*_{j(n)}} = δ_ij δ_{m+n,-1}.

    ψ_{(m)} = ψ t^m and ψ*_{(n)} = ψ* t^n dt, so ψ*_{(-1)}|0⟩ has weight 0.
    """
    n = len(names)
    gens = [FieldGenerator(f"psi_{x}", 1, 1, -1) for x in names]
    gens += [FieldGenerator(f"psis_{x}", 1, 0, 1) for x in names]
    ope: Dict[Tuple[int, int], Dict[int, Dict[Optional[int], Fraction]]] = {}
    for i in range(n):
        ope[(i, n + i)] = {0: {None: ONE}}
        ope[(n + i, i)] = {0: {None: ONE}}
    return ModeAlgebra(gens, ope, w_max, None, "fermions")


def tensor_vertex(*algs: ModeAlgebra, w_max: Optional[int] = None) -> ModeAlgebra:
    """Tensor product: generators concatenated, mixed products zero (Koszul signs from parity)."""
    gens: List[FieldGenerator] = []
    ope: Dict[Tuple[int, int], Dict[int, Dict[Optional[int], Fraction]]] = {}
    off = 0
    for A in algs:
        gens.extend(A.gens)
        for (a, b), entry in A.ope.items():
            ope[(a + off, b + off)] = {j: {(None if c is None else c + off): v for c, v in prod.items()}
                                       for j, prod in entry.items()}
        off += len(A.gens)
    w = min(A.w_max for A in algs) if w_max is None else w_max
    levels = [A.level for A in algs if A.level is not None]
    return ModeAlgebra(gens, ope, w, sum(levels) if levels else None, "⊗".join(A.label for A in algs))


def opposite_affine(lie: DgLieAlgebra, level, w_max: int, prefix: str = "") -> ModeAlgebra:
    """V_k(g)^op realised as V_k(g^op): bracket negated, same level."""
    return affine_vertex(lie.opposite(), level, w_max, lie.form, lie.dual_coxeter, prefix)


def pbw_count(dim: int, w_max: int) -> List[int]:
    """Coefficients of Π_{n>=1} (1 - q^n)^{-dim}."""
    series = [0] * (w_max + 1)
    series[0] = 1
    for n in range(1, w_max + 1):
        for _ in range(dim):
            for t in range(n, w_max + 1):
                series[t] += series[t - n]
    return series


def fermion_count(n_pairs: int, w_max: int) -> List[int]:
    """Π_{n>=1} (1 + q^n)^{n_pairs} (1 + q^{n-1})^{n_pairs}: ψ modes of weight >= 1, ψ* modes of weight >= 0."""
    series = [0] * (w_max + 1)
    series[0] = 1
    for w in range(0, w_max + 1):
        reps = n_pairs * ((1 if w >= 1 else 0) + 1)
        for _ in range(reps):
            for t in range(w_max, w - 1, -1):
                if w == 0:
                    continue
                series[t] += series[t - w]
        if w == 0:
            series = [c * 2 ** n_pairs for c in series]
    return series


# ---------------------------------------------------------------------------
# commutator and translation audits

def borcherds_defect(V: ModeAlgebra, a: int, m: int, b: int, n: int, target: PBW) -> Vector:
    """[a_{(m)}, b_{(n)}] v - Σ_j C(m, j) (a_{(j)} b)_{(m+n-j)} v, with a_{(j)} b computed as a state."""
    s = _sgn(V.gens[a].parity * V.gens[b].parity)
    lhs = V.act((a, m), V.apply((b, n), target))
    vadd(lhs, V.act((b, n), V.apply((a, m), target)), -s)
    bstate = V.gen_state(b)
    j = 0
    wt = V.weight(target)
    while j <= V.gens[a].weight + V.gens[b].weight:
        c = binom(m, j)
        if c:
            ab = V.act((a, j), bstate)
            if ab:
                vadd(lhs, V.state_mode(ab, m + n - j, {target: ONE}), -c)
        j += 1
    return vclean(lhs)


def translation_defect(V: ModeAlgebra, a: int, n: int, target: PBW) -> Vector:
    """[T, a_{(n)}] v + n a_{(n-1)} v."""
    v = {target: ONE}
    out = V.T(V.apply((a, n), target))
    vadd(out, V.act((a, n), V.T(v)), -ONE)
    vadd(out, V.apply((a, n - 1), target), Fraction(n))
    return vclean(out)


# ---------------------------------------------------------------------------
# Li filtration

@dataclass
class LiFiltration:
    """F^p per weight as explicit spans (p = 0 .. p_max)."""

    V: ModeAlgebra
    w_max: int
    p_max: int
    spans: Dict[Tuple[int, int], SpanReducer]

    def dim(self, p: int, w: int) -> int:
        if p <= 0:
            return len(self.V.basis(w))
        return self.spans[(min(p, self.p_max + 1), w)].rank if (min(p, self.p_max + 1), w) in self.spans else 0

    def contains(self, p: int, vec: Mapping) -> bool:
        if p <= 0 or not vec:
            return True
        w = self.V.weight(next(iter(vec)))
        return self.spans[(p, w)].contains(vec)


def li_filtration(V: ModeAlgebra, w_max: int, p_max: int) -> LiFiltration:
    """F^p = span{a_{(-n-1)} v : v ∈ F^{p-n}, n >= 0}, iterated to a fixed point
    (weight-0 creation modes map a weight slice to itself)."""
    spans: Dict[Tuple[int, int], SpanReducer] = {}

    def vectors(p: int, w: int) -> List[Vector]:
        if p <= 0:
            return [{m: ONE} for m in V.basis(w)]
        return list(spans[(p, w)].pivots.values())

    for p in range(1, p_max + 2):
        for w in range(w_max + 1):
            red = SpanReducer()
            spans[(p, w)] = red
            changed = True
            while changed:
                changed = False
                for a, g in enumerate(V.gens):
                    n = 0
                    while True:
                        src_w = w - (g.weight + n)
                        if src_w < 0:
                            break
                        for v in vectors(p - n, src_w) if (p - n, src_w) in spans or p - n <= 0 else []:
                            if red.add(V.act((a, -n - 1), v)):
                                changed = True
                        n += 1
    return LiFiltration(V, w_max, p_max, spans)


def pbw_li_span(V: ModeAlgebra, p: int, w: int) -> List[PBW]:
    return [m for m in V.basis(w) if V.li_degree(m) >= p]


def li_matches_pbw(F: LiFiltration) -> Optional[Tuple[int, int]]:
    """None if every F^p_w equals the span of PBW monomials of Li degree >= p."""
    for (p, w), red in F.spans.items():
        monos = pbw_li_span(F.V, p, w)
        if red.rank != len(monos) or not all(red.contains({m: ONE}) for m in monos):
            return (p, w)
    return None


def c2_span(V: ModeAlgebra, w: int) -> SpanReducer:
    """span{a_{(-2)} b} in weight w, a and b running over PBW bases."""
    red = SpanReducer()
    for wa in range(0, w + 1):
        for a in V.basis(wa):
            wb = w - wa - 1
            if wb < 0:
                continue
            for b in V.basis(wb):
                red.add(V.state_mode_on(a, -2, b))
    return red


# ---------------------------------------------------------------------------
# gr and Zhu's C2 algebra

def gr_dims(V: ModeAlgebra, w_max: int) -> Dict[Tuple[int, int], int]:
    """dim gr^F per (weight, Li degree); valid once F^p is the PBW Li span."""
    out: Dict[Tuple[int, int], int] = {}
    for w in range(w_max + 1):
        for m in V.basis(w):
            k = (w, V.li_degree(m))
            out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


def gr_component(V: ModeAlgebra, vec: Mapping, li: int) -> Vector:
    return {m: c for m, c in vec.items() if V.li_degree(m) == li}


@dataclass
class ZhuC2:
    """R_V = V/F¹V with product a_{(-1)} b and bracket a_{(0)} b."""

    V: ModeAlgebra
    w_max: int

    def basis(self, w: int) -> List[PBW]:
        return [m for m in self.V.basis(w) if self.V.li_degree(m) == 0]

    def dims(self) -> List[int]:
        return [len(self.basis(w)) for w in range(self.w_max + 1)]

    def reduce(self, vec: Mapping) -> Vector:
        return vclean({m: c for m, c in vec.items() if self.V.li_degree(m) == 0})

    def product(self, a: PBW, b: PBW) -> Vector:
        return self.reduce(self.V.state_mode_on(a, -1, b))

    def bracket(self, a: PBW, b: PBW) -> Vector:
        return self.reduce(self.V.state_mode_on(a, 0, b))

    def bracket_table(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        """{x_i, x_j} on weight-1 generator classes, as coefficients on generators."""
        out = {}
        gens1 = [a for a, g in enumerate(self.V.gens) if g.weight == 1]
        for i in gens1:
            for j in gens1:
                val = self.bracket(((i, -1),), ((j, -1),))
                coeffs = {}
                for m, c in val.items():
                    if len(m) != 1 or m[0][1] != -1:
                        raise AuditError("bracket of generators left the generator span", (i, j))
                    coeffs[m[0][0]] = c
                if coeffs:
                    out[(i, j)] = coeffs
        return out


def zhu_c2(V: ModeAlgebra, w_max: Optional[int] = None) -> ZhuC2:
    return ZhuC2(V, V.w_max if w_max is None else w_max)
