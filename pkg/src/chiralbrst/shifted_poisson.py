"""Shifted Poisson structures on free graded-commutative algebras.

A ``PoissonAlgebra`` is a free algebra plus the values of an n-shifted
bracket on pairs of generators.  The bracket has degree 1 - n and is
extended by the Leibniz rule in both slots.

Polyvectors on A live in the "superfield" algebra A[ξ_1..ξ_N] with
|ξ_i| = (m+1) - |x_i| for Pol(A, m); the Schouten bracket is the
(m+2)-shifted bracket with {ξ_i, x_j} = δ_ij.  Evaluation v(a_1..a_p) is an
iterated bracket with arguments, normalised so that the swap rule
v(a1, a2, ...) = (-1)^{|a1||a2| + m + 1} v(a2, a1, ...) holds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .dglie_ce import DgLieAlgebra
from .graded_kernel import (
    ONE,
    ZERO,
    AuditError,
    Generator,
    Mono,
    SuperAlgebra,
    Vector,
    rational,
    vadd,
    vclean,
    vscale,
)


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass
class PoissonAlgebra:
    """Free algebra with an n-shifted bracket given on generators."""

    alg: SuperAlgebra
    shift: int
    table: Dict[Tuple[int, int], Vector] = field(default_factory=dict)
    differential: Dict[int, Vector] = field(default_factory=dict)

    def __post_init__(self):
        self._gen_cache: Dict[Tuple[int, Mono], Vector] = {}

    @property
    def n(self) -> int:
        return self.shift

    def gen_bracket(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), {})

    def _derivation_parity(self, deg: int) -> int:
        return (deg + 1 - self.shift) % 2

    def bracket_gen_mono(self, i: int, m: Mono) -> Vector:
        key = (i, m)
        hit = self._gen_cache.get(key)
        if hit is None:
            par = self._derivation_parity(self.alg.deg[i])
            hit = self.alg.apply_derivation(lambda j: self.gen_bracket(i, j), par, {m: ONE})
            self._gen_cache[key] = hit
        return hit

    def bracket(self, p: Mapping, q: Mapping) -> Vector:
        """{p, q} by left Leibniz in the first slot, generator derivations in the second.

        {g a', c} = g {a', c} + (-1)^{|a'|(|c|+1-n)} {g, c} a'
        """
        out: Vector = {}
        for a, ca in p.items():
            for c_mono, cc in q.items():
                vadd(out, self._bracket_mono(a, c_mono), ca * cc)
        return out

    def _bracket_mono(self, a: Mono, c: Mono) -> Vector:
        alg = self.alg
        if not a:
            return {}
        # split off the first generator factor of a
        i, e = a[0]
        rest = ((i, e - 1),) + a[1:] if e > 1 else a[1:]
        g = ((i, 1),)
        s, check = alg.mono_mul(g, rest)
        if check != a:
            raise RuntimeError("monomial split failed")
        # a = s * g * rest with s = +1 because g has the smallest index
        out: Vector = {}
        if rest:
            inner = self._bracket_mono(rest, c)
            vadd(out, alg.mul({g: ONE}, inner))
        gc = self.bracket_gen_mono(i, c)
        if gc:
            sign = _sgn(alg.degree(rest) * (alg.degree(c) + 1 - self.shift))
            vadd(out, alg.mul(gc, {rest: ONE}), sign)
        return out

    def d(self, p: Mapping) -> Vector:
        return self.alg.apply_derivation(lambda j: self.differential.get(j, {}), 1, p)

    # audits -----------------------------------------------------------------
    def antisymmetry_defect(self, p: Mapping, q: Mapping) -> Vector:
        """{p,q} + (-1)^{(|p|+1-n)(|q|+1-n)} {q,p}; zero for a valid bracket."""
        dp, dq = self.alg.element_degree(p), self.alg.element_degree(q)
        out = self.bracket(p, q)
        vadd(out, self.bracket(q, p), _sgn((dp + 1 - self.shift) * (dq + 1 - self.shift)))
        return out

    def jacobi_defect(self, a: Mapping, b: Mapping, c: Mapping) -> Vector:
        """{a,{b,c}} - {{a,b},c} - (-1)^{(|a|+1-n)(|b|+1-n)} {b,{a,c}}."""
        da, db = self.alg.element_degree(a), self.alg.element_degree(b)
        out = self.bracket(a, self.bracket(b, c))
        vadd(out, self.bracket(self.bracket(a, b), c), -ONE)
        vadd(out, self.bracket(b, self.bracket(a, c)), -_sgn((da + 1 - self.shift) * (db + 1 - self.shift)))
        return out

    def leibniz_defect(self, a: Mapping, b: Mapping, c: Mapping) -> Vector:
        """{a, bc} - {a,b}c - (-1)^{(|a|+1-n)|b|} b{a,c}."""
        da, db = self.alg.element_degree(a), self.alg.element_degree(b)
        out = self.bracket(a, self.alg.mul(b, c))
        vadd(out, self.alg.mul(self.bracket(a, b), c), -ONE)
        vadd(out, self.alg.mul(b, self.bracket(a, c)), -_sgn((da + 1 - self.shift) * db))
        return out

    def audit(self) -> None:
        gens = [self.alg.gen(i) for i in range(len(self.alg))]
        names = [g.name for g in self.alg.gens]
        for i, j in itertools.product(range(len(gens)), repeat=2):
            if self.antisymmetry_defect(gens[i], gens[j]):
                raise AuditError("bracket antisymmetry fails", (names[i], names[j]))
            bij = self.gen_bracket(i, j)
            for m in bij:
                if self.alg.degree(m) != self.alg.deg[i] + self.alg.deg[j] + 1 - self.shift:
                    raise AuditError("bracket has the wrong degree", (names[i], names[j]))
        for i, j, k in itertools.product(range(len(gens)), repeat=3):
            if self.jacobi_defect(gens[i], gens[j], gens[k]):
                raise AuditError("bracket Jacobi identity fails", (names[i], names[j], names[k]))
        for i in range(len(gens)):
            for j in range(len(gens)):
                lhs = self.d(self.gen_bracket(i, j))
                rhs = self.bracket(self.d(gens[i]), gens[j])
                vadd(rhs, self.bracket(gens[i], self.d(gens[j])), _sgn(self.alg.deg[i] + 1 - self.shift))
                if vclean(lhs) != vclean(rhs):
                    raise AuditError("differential is not a derivation of the bracket", (names[i], names[j]))

    def is_valid(self) -> bool:
        try:
            self.audit()
        except AuditError:
            return False
        return True

    def opposite(self) -> "PoissonAlgebra":
        """Same cdga with the bracket negated."""
        return PoissonAlgebra(self.alg, self.shift, {k: vscale(v, -ONE) for k, v in self.table.items()},
                              dict(self.differential))


def poisson_from_table(gens: Sequence[Generator], shift: int, values: Mapping[Tuple[str, str], Mapping],
                       complete: bool = True) -> PoissonAlgebra:
    """Bracket values on named generator pairs; with ``complete`` the reversed
    pairs are filled in by shifted antisymmetry."""
    alg = SuperAlgebra(gens)
    table: Dict[Tuple[int, int], Vector] = {}
    for (a, b), val in values.items():
        i, j = alg.index[a], alg.index[b]
        v = _as_element(alg, val)
        table[(i, j)] = v
        if complete and (j, i) not in table:
            s = -_sgn((alg.deg[i] + 1 - shift) * (alg.deg[j] + 1 - shift))
            table[(j, i)] = vscale(v, Fraction(s))
    return PoissonAlgebra(alg, shift, {k: vclean(v) for k, v in table.items() if vclean(v)})


def _as_element(alg: SuperAlgebra, val) -> Vector:
    """Accept a dict {monomial-as-names-tuple: coeff} or an element already."""
    if isinstance(val, dict) and all(isinstance(k, tuple) and (not k or isinstance(k[0], tuple)) for k in val):
        return {k: rational(c) for k, c in val.items()}
    out: Vector = {}
    for names, c in val.items():
        if isinstance(names, str):
            names = (names,)
        s, m = alg.mono_from_indices(alg.index[n] for n in names)
        if s:
            vadd(out, {m: Fraction(s)}, rational(c))
    return out


def kirillov_kostant(lie: DgLieAlgebra, weight: int = 1) -> PoissonAlgebra:
    """Sym(l) with {x_i, x_j} = [x_i, x_j] (shift 1)."""
    alg = SuperAlgebra([Generator(n, d, weight) for n, d in zip(lie.names, lie.degrees)])
    table = {}
    for (i, j), v in lie.brackets.items():
        if v:
            table[(i, j)] = {((k, 1),): c for k, c in v.items()}
    diff = {i: {((k, 1),): c for k, c in v.items()} for i, v in lie.differential.items()}
    return PoissonAlgebra(alg, 1, table, diff)


def tensor_poisson(p: PoissonAlgebra, q: PoissonAlgebra, prefixes: Tuple[str, str] = ("", "")) -> PoissonAlgebra:
    """P ⊗ Q: generators of P then Q, mixed brackets zero."""
    if p.shift != q.shift:
        raise ValueError("shifts differ")
    gens = [Generator(prefixes[0] + g.name, g.degree, g.weight, g.charge) for g in p.alg.gens]
    gens += [Generator(prefixes[1] + g.name, g.degree, g.weight, g.charge) for g in q.alg.gens]
    alg = SuperAlgebra(gens)
    off = len(p.alg)

    def move(v: Mapping, o: int) -> Vector:
        return {tuple((i + o, e) for i, e in m): c for m, c in v.items()}

    table = dict(((i, j), move(v, 0)) for (i, j), v in p.table.items())
    table.update(((i + off, j + off), move(v, off)) for (i, j), v in q.table.items())
    diff = {i: move(v, 0) for i, v in p.differential.items()}
    diff.update({i + off: move(v, off) for i, v in q.differential.items()})
    return PoissonAlgebra(alg, p.shift, table, diff)


def embed_left(v: Mapping) -> Vector:
    return dict(v)


def embed_right(v: Mapping, offset: int) -> Vector:
    return {tuple((i + offset, e) for i, e in m): c for m, c in v.items()}


# ---------------------------------------------------------------------------
# polyvectors

@dataclass
class PolyvectorAlgebra:
    """Pol(A, m) in superfield form over a free algebra A."""

    base: SuperAlgebra
    m: int
    alg: SuperAlgebra = field(init=False)
    schouten_bracket: PoissonAlgebra = field(init=False)

    def __post_init__(self):
        N = len(self.base)
        gens = [Generator(g.name, g.degree, 0) for g in self.base.gens]
        gens += [Generator(f"xi_{g.name}", self.m + 1 - g.degree, 1) for g in self.base.gens]
        self.alg = SuperAlgebra(gens)
        table: Dict[Tuple[int, int], Vector] = {}
        shift = self.m + 2
        for i in range(N):
            # {ξ_i, x_i} = 1 and the reverse by shifted antisymmetry
            table[(N + i, i)] = {(): ONE}
            s = -_sgn((self.alg.deg[N + i] + 1 - shift) * (self.alg.deg[i] + 1 - shift))
            table[(i, N + i)] = {(): Fraction(s)}
        self.schouten_bracket = PoissonAlgebra(self.alg, shift, table)

    @property
    def N(self) -> int:
        return len(self.base)

    def function(self, a: Mapping) -> Vector:
        """Embed an element of A (same generator indices)."""
        return dict(a)

    def xi(self, i: int) -> Vector:
        return {((self.N + i, 1),): ONE}

    def weight(self, v: Mapping) -> int:
        ws = {sum(e for i, e in mono if i >= self.N) for mono in v}
        if len(ws) > 1:
            raise ValueError("inhomogeneous polyvector")
        return ws.pop() if ws else 0

    def degree(self, v: Mapping) -> int:
        return self.alg.element_degree(v)

    def schouten(self, v: Mapping, w: Mapping) -> Vector:
        return self.schouten_bracket.bracket(v, w)

    def product(self, v: Mapping, w: Mapping) -> Vector:
        return self.alg.mul(v, w)

    def evaluate(self, v: Mapping, args: Sequence[Mapping]) -> Vector:
        """v(a_1, ..., a_p) for functions a_i (p = weight of v)."""
        p = len(args)
        if v and self.weight(v) != p:
            raise ValueError("number of arguments must equal the polyvector weight")
        cur: Vector = dict(v)
        sign_exp = 0
        for k, a in enumerate(args):
            cur = self.schouten(cur, a)
            sign_exp += (self.m + 1) * (p - 1 - k) * self.base.element_degree(a)
        return vscale(cur, Fraction(_sgn(sign_exp)))

    def from_bracket(self, P: PoissonAlgebra) -> Vector:
        """The bivector π with π(x_i, x_j) = {x_i, x_j} (requires m = n - 1)."""
        if P.shift != self.m + 1:
            raise ValueError("bivectors in Pol(A, n-1) encode n-shifted brackets")
        N = self.N
        pi: Vector = {}
        for i in range(N):
            for j in range(i, N):
                xi_prod = self.alg.mul(self.xi(i), self.xi(j))
                if not xi_prod:
                    continue
                probe = self.evaluate(xi_prod, [self.base.gen(i), self.base.gen(j)])
                c = probe.get((), ZERO)
                if not c or set(probe) != {()}:
                    raise RuntimeError("unexpected normalisation of ξ_i ξ_j")
                val = P.gen_bracket(i, j)
                vadd(pi, self.alg.mul(val, xi_prod), ONE / c)
        return pi

    def to_bracket(self, pi: Mapping, shift: Optional[int] = None) -> PoissonAlgebra:
        N = self.N
        table = {}
        for i in range(N):
            for j in range(N):
                val = self.evaluate(pi, [self.base.gen(i), self.base.gen(j)])
                if val:
                    table[(i, j)] = val
        return PoissonAlgebra(self.base, self.m + 1 if shift is None else shift, table)


def bivector_to_bracket(pol: PolyvectorAlgebra, pi: Mapping) -> Tuple[PoissonAlgebra, bool]:
    """The bracket π(a, b) and whether [π, π]_S = 0."""
    return pol.to_bracket(pi), not pol.schouten(pi, pi)


def kk_bivector(lie: DgLieAlgebra) -> Tuple[PolyvectorAlgebra, Vector]:
    P = kirillov_kostant(lie, weight=0)
    pol = PolyvectorAlgebra(P.alg, 0)
    return pol, pol.from_bracket(P)


# shuffle formulas ----------------------------------------------------------

def shuffles(p: int, q: int) -> Iterable[Tuple[int, ...]]:
    """(p, q)-shuffles as the permutation list σ(1..p+q) (0-based)."""
    for first in itertools.combinations(range(p + q), p):
        rest = tuple(k for k in range(p + q) if k not in first)
        yield tuple(first) + rest


def permutation_sign(perm: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return _sgn(inv)


def braiding_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of reordering items of the given degrees into ``perm`` order."""
    e = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                e += degrees[perm[a]] * degrees[perm[b]]
    return _sgn(e)


def product_by_shuffles(pol: PolyvectorAlgebra, v: Mapping, w: Mapping, args: Sequence[Mapping]) -> Vector:
    """(v·w)(a_1..a_{p+q}) by the shuffle formula.

    With the evaluation normalisation used here the permutation sign enters
    as sgn(σ)^{n+1}; ε is the Koszul sign of the a_i and ε̄ the sign below.
    """
    n = pol.m
    p, q = pol.weight(v), pol.weight(w)
    degs = [pol.base.element_degree(a) for a in args]
    dw = pol.degree(w)
    out: Vector = {}
    for perm in shuffles(p, q):
        s = permutation_sign(perm) if (n + 1) % 2 else 1
        s *= braiding_sign(perm, degs)
        ebar = dw * (n + 1) * p + sum(degs[perm[i]] for i in range(p)) * ((n + 1) * q + dw)
        s *= _sgn(ebar)
        left = pol.evaluate(v, [args[k] for k in perm[:p]])
        right = pol.evaluate(w, [args[k] for k in perm[p:]])
        vadd(out, pol.base.mul(left, right), Fraction(s))
    return out


# ---------------------------------------------------------------------------
# momentum maps

@dataclass
class MomentumMap:
    """μ: l -> R on basis vectors, plus the declared action on generators of R."""

    lie: DgLieAlgebra
    target: PoissonAlgebra
    values: List[Vector]

    def image(self, u: Mapping[int, Fraction]) -> Vector:
        out: Vector = {}
        for i, c in u.items():
            vadd(out, self.values[i], c)
        return out


@dataclass
class MomentumReport:
    ok: bool
    failures: List[Tuple[str, object]]


def check_momentum(mu: MomentumMap, action: Optional[Callable[[int, int], Mapping]] = None) -> MomentumReport:
    """Check μ([x,y]) = {μx, μy} and, if an action is declared, {μ(x), r} = a(x)(r)."""
    R = mu.target
    fails: List[Tuple[str, object]] = []
    for i in range(mu.lie.dim):
        for j in range(mu.lie.dim):
            lhs = mu.image(mu.lie.bracket_basis(i, j))
            rhs = R.bracket(mu.values[i], mu.values[j])
            if vclean(lhs) != vclean(rhs):
                fails.append(("lie-map", (mu.lie.names[i], mu.lie.names[j])))
    if action is not None:
        for i in range(mu.lie.dim):
            for r in range(len(R.alg)):
                lhs = R.bracket(mu.values[i], R.alg.gen(r))
                if vclean(lhs) != vclean(action(i, r)):
                    fails.append(("momentum-equation", (mu.lie.names[i], R.alg.gens[r].name)))
    return MomentumReport(not fails, fails)


def identity_momentum(lie: DgLieAlgebra, weight: int = 1) -> MomentumMap:
    P = kirillov_kostant(lie, weight)
    return MomentumMap(lie, P, [P.alg.gen(i) for i in range(lie.dim)])


def coadjoint_action(lie: DgLieAlgebra) -> Callable[[int, int], Vector]:
    return lambda i, r: {((k, 1),): c for k, c in lie.bracket_basis(i, r).items()}
