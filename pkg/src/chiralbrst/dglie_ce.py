"""Finite-dimensional dg Lie algebras, their cones, and Chevalley-Eilenberg complexes.

Cochains are realised as Sym(l*[-1]) ⊗ M: a ghost c^i of degree 1 - |x_i|
for every basis vector x_i, tensored with the module.  The differential is

    d(c^k) = -1/2 Σ c_{ij}^k c^i c^j  +  (dual of d_l)
    d(m)   = Σ_i c^i ⊗ ρ(x_i) m  +  d_M m

and extended by the Leibniz rule.  With this normalisation d² = 0 exactly,
which is checked whenever a complex is built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graded_kernel import (
    ONE,
    ZERO,
    AuditError,
    Generator,
    GradedSpace,
    Mono,
    SuperAlgebra,
    TruncatedComplex,
    Vector,
    rational,
    vadd,
    vclean,
)

Structure = Dict[Tuple[int, int], Dict[int, Fraction]]


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass
class DgLieAlgebra:
    """Basis names with degrees (and weights), brackets and a differential.

    ``brackets[(i, j)]`` is the expansion of [x_i, x_j]; ``differential[i]``
    the expansion of d x_i.  Missing entries are zero.
    """

    names: List[str]
    degrees: List[int]
    brackets: Structure = field(default_factory=dict)
    differential: Dict[int, Dict[int, Fraction]] = field(default_factory=dict)
    weights: Optional[List[int]] = None
    form: Optional[Dict[Tuple[int, int], Fraction]] = None
    dual_coxeter: Optional[int] = None

    def __post_init__(self):
        if self.weights is None:
            self.weights = [0] * len(self.names)
        self.brackets = {k: vclean({a: rational(c) for a, c in v.items()}) for k, v in self.brackets.items()}
        self.differential = {k: vclean({a: rational(c) for a, c in v.items()}) for k, v in self.differential.items()}
        self.index = {n: i for i, n in enumerate(self.names)}

    @property
    def dim(self) -> int:
        return len(self.names)

    def bracket_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.brackets.get((i, j), {})

    def bracket(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                vadd(out, self.bracket_basis(i, j), a * b)
        return out

    def d(self, u: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for i, a in u.items():
            vadd(out, self.differential.get(i, {}), a)
        return out

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self.bracket_basis(i, j).get(k, ZERO)

    def with_constant(self, i: int, j: int, k: int, value) -> "DgLieAlgebra":
        """Copy with one structure constant overwritten (used for negative controls)."""
        br = {key: dict(v) for key, v in self.brackets.items()}
        br.setdefault((i, j), {})[k] = rational(value)
        return DgLieAlgebra(list(self.names), list(self.degrees), br, dict(self.differential),
                            list(self.weights), self.form, self.dual_coxeter)

    def opposite(self) -> "DgLieAlgebra":
        """Same space with the bracket negated."""
        br = {k: {a: -c for a, c in v.items()} for k, v in self.brackets.items()}
        return DgLieAlgebra(list(self.names), list(self.degrees), br, dict(self.differential),
                            list(self.weights), self.form, self.dual_coxeter)

    def structure_triples(self) -> List[Tuple[int, int, int, Fraction]]:
        return [(i, j, k, c) for (i, j), v in sorted(self.brackets.items()) for k, c in sorted(v.items())]

    # audits -----------------------------------------------------------------
    def audit(self) -> None:
        """Exhaustive antisymmetry, Jacobi, derivation and d² = 0 checks."""
        audit_antisymmetry(self)
        audit_jacobi(self)
        audit_derivation(self)
        audit_d_squared(self)
        audit_degrees(self)


def audit_antisymmetry(lie: DgLieAlgebra) -> None:
    for i in range(lie.dim):
        for j in range(lie.dim):
            s = _sgn(1 + lie.degrees[i] * lie.degrees[j])
            lhs = lie.bracket_basis(i, j)
            rhs = {k: s * c for k, c in lie.bracket_basis(j, i).items()}
            if vclean(lhs) != vclean(rhs):
                raise AuditError("graded antisymmetry fails", (lie.names[i], lie.names[j]))


def audit_jacobi(lie: DgLieAlgebra) -> None:
    deg = lie.degrees
    for i, j, k in itertools.product(range(lie.dim), repeat=3):
        x, y, z = {i: ONE}, {j: ONE}, {k: ONE}
        total: Dict[int, Fraction] = {}
        vadd(total, lie.bracket(x, lie.bracket(y, z)), _sgn(deg[k] * deg[i]))
        vadd(total, lie.bracket(y, lie.bracket(z, x)), _sgn(deg[i] * deg[j]))
        vadd(total, lie.bracket(z, lie.bracket(x, y)), _sgn(deg[j] * deg[k]))
        if total:
            raise AuditError("graded Jacobi identity fails", (lie.names[i], lie.names[j], lie.names[k]))


def audit_derivation(lie: DgLieAlgebra) -> None:
    for i in range(lie.dim):
        for j in range(lie.dim):
            x, y = {i: ONE}, {j: ONE}
            lhs = lie.d(lie.bracket(x, y))
            rhs = lie.bracket(lie.d(x), y)
            vadd(rhs, lie.bracket(x, lie.d(y)), _sgn(lie.degrees[i]))
            if vclean(lhs) != vclean(rhs):
                raise AuditError("d is not a derivation of the bracket", (lie.names[i], lie.names[j]))


def audit_d_squared(lie: DgLieAlgebra) -> None:
    for i in range(lie.dim):
        if lie.d(lie.d({i: ONE})):
            raise AuditError("d^2 != 0 on the Lie algebra", lie.names[i])


def audit_degrees(lie: DgLieAlgebra) -> None:
    for (i, j), v in lie.brackets.items():
        for k in v:
            if lie.degrees[k] != lie.degrees[i] + lie.degrees[j]:
                raise AuditError("bracket is not of degree 0", (lie.names[i], lie.names[j]))
            if lie.weights[k] != lie.weights[i] + lie.weights[j]:
                raise AuditError("bracket does not preserve weight", (lie.names[i], lie.names[j]))
    for i, v in lie.differential.items():
        for k in v:
            if lie.degrees[k] != lie.degrees[i] + 1:
                raise AuditError("differential is not of degree 1", lie.names[i])


# ---------------------------------------------------------------------------
# standard examples

def lie_from_triples(names: Sequence[str], triples: Iterable[Tuple[int, int, int, object]],
                     degrees: Optional[Sequence[int]] = None, antisymmetrize: bool = True, **kw) -> DgLieAlgebra:
    """Build from triples (i, j, k, c) meaning [x_i, x_j] has c on x_k.

    With ``antisymmetrize`` the (j, i) entries are filled in for degree-0 data.
    """
    degs = list(degrees) if degrees is not None else [0] * len(names)
    br: Structure = {}
    for i, j, k, c in triples:
        c = rational(c)
        br.setdefault((i, j), {})[k] = c
        if antisymmetrize and i != j:
            s = _sgn(1 + degs[i] * degs[j])
            br.setdefault((j, i), {})[k] = s * c
    return DgLieAlgebra(list(names), degs, br, **kw)


def sl2() -> DgLieAlgebra:
    """Basis (e, h, f); Killing form κ(e,f)=4, κ(h,h)=8; h∨ = 2."""
    triples = [(0, 2, 1, 1), (1, 0, 0, 2), (1, 2, 2, -2)]
    form = {(0, 2): Fraction(4), (2, 0): Fraction(4), (1, 1): Fraction(8)}
    return lie_from_triples(["e", "h", "f"], triples, form=form, dual_coxeter=2)


def abelian(n: int, prefix: str = "a") -> DgLieAlgebra:
    return DgLieAlgebra([f"{prefix}{i}" for i in range(n)], [0] * n, form={(i, i): Fraction(1) for i in range(n)},
                        dual_coxeter=0)


def killing_form(lie: DgLieAlgebra) -> Dict[Tuple[int, int], Fraction]:
    """tr(ad x ad y) for an ordinary (degree-0) Lie algebra."""
    out = {}
    n = lie.dim
    for a in range(n):
        for b in range(n):
            tr = ZERO
            for k in range(n):
                # (ad x_a ad x_b)(x_k) coefficient on x_k
                inner = lie.bracket_basis(b, k)
                for m, c in inner.items():
                    tr += c * lie.bracket_basis(a, m).get(k, ZERO)
            if tr:
                out[(a, b)] = tr
    return out


def build_cone(lie: DgLieAlgebra) -> DgLieAlgebra:
    """l† = l[1] ⊕ l with d(x, y) = (-dx, x + dy) and
    [(x,y),(x',y')] = ([x,y'] + [y,x'], [y,y']).

    Basis: ``s<name>`` for the l[1] copy (degree shifted down by one), then l.
    """
    n = lie.dim
    names = [f"s{a}" for a in lie.names] + list(lie.names)
    degrees = [d - 1 for d in lie.degrees] + list(lie.degrees)
    weights = list(lie.weights) * 2
    br: Structure = {}
    for (i, j), v in lie.brackets.items():
        br[(n + i, n + j)] = {n + k: c for k, c in v.items()}
        br[(i, n + j)] = {k: c for k, c in v.items()}
        br[(n + i, j)] = {k: c for k, c in v.items()}
    diff: Dict[int, Dict[int, Fraction]] = {}
    for i in range(n):
        img = {k: -c for k, c in lie.differential.get(i, {}).items()}
        img[n + i] = img.get(n + i, ZERO) + ONE
        diff[i] = vclean(img)
        diff[n + i] = {n + k: c for k, c in lie.differential.get(i, {}).items()}
    return DgLieAlgebra(names, degrees, br, diff, weights)


def underlying_complex(lie: DgLieAlgebra) -> TruncatedComplex:
    """(l, d_l) as a cochain complex with blocks keyed (degree, weight)."""
    blocks: Dict[Tuple[int, int], List[Hashable]] = {}
    for i in range(lie.dim):
        blocks.setdefault((lie.degrees[i], lie.weights[i]), []).append(i)
    space = GradedSpace({k: blocks[k] for k in sorted(blocks)})
    return TruncatedComplex.build(space, lambda i: lie.differential.get(i, {}))


def current_truncation(lie: DgLieAlgebra, n_max: int) -> DgLieAlgebra:
    """g[t]/t^{n_max+1}: basis x⊗t^n (0 <= n <= n_max) with weight n."""
    names, degrees, weights = [], [], []
    idx = {}
    for n in range(n_max + 1):
        for i, a in enumerate(lie.names):
            idx[(i, n)] = len(names)
            names.append(f"{a}t{n}")
            degrees.append(lie.degrees[i])
            weights.append(n)
    br: Structure = {}
    for (i, j), v in lie.brackets.items():
        for a in range(n_max + 1):
            for b in range(n_max + 1 - a):
                br[(idx[(i, a)], idx[(j, b)])] = {idx[(k, a + b)]: c for k, c in v.items()}
    return DgLieAlgebra(names, degrees, br, {}, weights)


# ---------------------------------------------------------------------------
# modules

@dataclass
class LieModule:
    """A weight-truncated dg module: basis per block and action maps.

    ``action(i, label)`` returns ρ(x_i)(label) as a dict over labels;
    ``diff(label)`` the module differential.  ``product`` (optional) makes
    M a commutative algebra object, used by the cup product.
    """

    space: GradedSpace
    action: Callable[[int, Hashable], Mapping]
    diff: Callable[[Hashable], Mapping] = lambda lab: {}
    product: Optional[Callable[[Hashable, Hashable], Mapping]] = None
    unit: Optional[Hashable] = None

    def label_key(self) -> Dict[Hashable, Tuple[int, ...]]:
        return {lab: k for k, basis in self.space.blocks.items() for lab in basis}

    def audit(self, lie: DgLieAlgebra) -> None:
        """ρ([x,y]) = ρ(x)ρ(y) - (-1)^{|x||y|} ρ(y)ρ(x) on every basis vector."""
        labels = [lab for k in self.space.keys() for lab in self.space.blocks[k]]
        known = set(labels)
        for i in range(lie.dim):
            for j in range(lie.dim):
                s = _sgn(lie.degrees[i] * lie.degrees[j])
                for lab in labels:
                    lhs: Vector = {}
                    for k, c in lie.bracket_basis(i, j).items():
                        vadd(lhs, self.action(k, lab), c)
                    rhs: Vector = {}
                    for t, c in self.action(j, lab).items():
                        if t in known:
                            vadd(rhs, self.action(i, t), c)
                    for t, c in self.action(i, lab).items():
                        if t in known:
                            vadd(rhs, self.action(j, t), -s * c)
                    lhs = {t: c for t, c in lhs.items() if t in known}
                    if vclean(lhs) != vclean(rhs):
                        raise AuditError("module action is not a Lie map", (lie.names[i], lie.names[j], lab))


def trivial_module() -> LieModule:
    return LieModule(GradedSpace({(0, 0): [()]}), lambda i, lab: {}, product=lambda a, b: {(): ONE}, unit=())


def sym_module(lie: DgLieAlgebra, max_degree: int, gen_weight: int = 1) -> Tuple[LieModule, SuperAlgebra]:
    """Sym(l) truncated to polynomial degree <= max_degree with the adjoint
    action extended as derivations (the coadjoint picture of functions on l*).

    Weight = polynomial degree (when ``gen_weight`` is 1).
    """
    alg = SuperAlgebra([Generator(n, d, gen_weight) for n, d in zip(lie.names, lie.degrees)])
    blocks: Dict[Tuple[int, int], List[Hashable]] = {}
    for w in range(max_degree * gen_weight + 1):
        for m in alg.monomials(w):
            blocks.setdefault((alg.degree(m), w), []).append(m)
    space = GradedSpace(blocks)

    def gen_image(i):
        return lambda j: {((k, 1),): c for k, c in lie.bracket_basis(i, j).items()}

    images = [gen_image(i) for i in range(lie.dim)]

    def action(i, m):
        return alg.apply_derivation(images[i], lie.degrees[i] % 2, {m: ONE})

    def product(a, b):
        return alg.mul({a: ONE}, {b: ONE})

    return LieModule(space, action, product=product, unit=()), alg


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg complex

@dataclass
class CEComplex:
    lie: DgLieAlgebra
    module: LieModule
    ghosts: SuperAlgebra
    complex: TruncatedComplex

    max_degree: Optional[int] = None
    truncated: bool = False

    def cohomology(self) -> Dict[Tuple[int, ...], int]:
        """Exact dims; when the ghost degree was truncated the top degree is
        dropped because its outgoing differential is not stored."""
        table = self.complex.cohomology()
        if self.truncated:
            table = {k: v for k, v in table.items() if k[0] < self.max_degree}
        return table

    def element_degree(self, label) -> int:
        g, m = label
        return self.ghosts.degree(g) + self._mkey[m][0]

    @property
    def _mkey(self):
        return self.module.label_key()


def ghost_algebra(lie: DgLieAlgebra) -> SuperAlgebra:
    degs = [1 - d for d in lie.degrees]
    if any(d < 1 for d in degs):
        raise ValueError("CE complexes here need l concentrated in non-positive degrees")
    return SuperAlgebra([Generator(f"c_{n}", dd, -w) for n, dd, w in zip(lie.names, degs, lie.weights)])


def ghost_monomials(ghosts: SuperAlgebra, max_degree: int) -> List[Mono]:
    """All ghost monomials of degree <= max_degree (ghost degrees are >= 1)."""
    counter = SuperAlgebra([Generator(g.name, g.degree, g.degree) for g in ghosts.gens])
    out: List[Mono] = []
    for d in range(max_degree + 1):
        out.extend(counter.monomials(d))
    return out


def ce_differential_on_ghosts(lie: DgLieAlgebra, ghosts: SuperAlgebra) -> Callable[[int], Vector]:
    """d(c^k) = -1/2 Σ (-1)^{|x_i|(|x_j|+1)} c_{ij}^k c^i c^j - Σ_i (-1)^{|c^i|} d_i^k c^i.

    The sign on the quadratic term only matters for graded l; for the cone
    l† it is what makes d² = 0 (the audit in ``ce_complex`` checks this).
    """
    half = Fraction(1, 2)
    table: Dict[int, Vector] = {k: {} for k in range(lie.dim)}
    for (i, j), v in lie.brackets.items():
        prod = ghosts.mul(ghosts.gen(i), ghosts.gen(j))
        for k, c in v.items():
            vadd(table[k], prod, -half * c * _sgn(lie.degrees[i] * (lie.degrees[j] + 1)))
    for i, v in lie.differential.items():
        for k, c in v.items():
            sign = _sgn(ghosts.deg[i])
            vadd(table[k], ghosts.gen(i), -sign * c)
    return lambda k: table[k]


def ce_complex(lie: DgLieAlgebra, module: Optional[LieModule] = None, max_degree: Optional[int] = None,
               check: bool = True) -> CEComplex:
    """Sym(l*[-1]) ⊗ M with the Chevalley-Eilenberg differential.

    ``max_degree`` bounds the ghost degree; for an ordinary Lie algebra the
    default (dim l) is the full exterior algebra.
    """
    module = module or trivial_module()
    ghosts = ghost_algebra(lie)
    full = sum(ghosts.deg) if all(g.parity for g in ghosts.gens) else None
    if max_degree is None:
        if full is None:
            raise ValueError("even ghosts present: give max_degree")
        max_degree = full
    truncated = full is None or max_degree < full
    gmonos = ghost_monomials(ghosts, max_degree)
    mkey = module.label_key()
    blocks: Dict[Tuple[int, ...], List[Hashable]] = {}
    for g in gmonos:
        for k in module.space.keys():
            for m in module.space.blocks[k]:
                key = (ghosts.degree(g) + k[0], ghosts.weight(g) + k[1])
                blocks.setdefault(key, []).append((g, m))
    space = GradedSpace({k: blocks[k] for k in sorted(blocks)})
    dghost = ce_differential_on_ghosts(lie, ghosts)
    par = ghosts.par

    def d(label):
        g, m = label
        out: Vector = {}
        # ghost part
        for g2, c in ghosts.apply_derivation(dghost, 1, {g: ONE}).items():
            out[(g2, m)] = out.get((g2, m), ZERO) + c
        sign = _sgn(ghosts.degree(g))
        # action part: (-1)^{|g|} g c^i ⊗ ρ(x_i) m
        for i in range(lie.dim):
            img = module.action(i, m)
            if not img:
                continue
            s, g2 = ghosts.mono_mul(g, ((i, 1),))
            if not s:
                continue
            for t, c in img.items():
                out[(g2, t)] = out.get((g2, t), ZERO) + sign * s * c
        for t, c in module.diff(m).items():
            out[(g, t)] = out.get((g, t), ZERO) + sign * c
        return vclean(out)

    cx = TruncatedComplex.build(space, d, check=False)
    if check:
        # the top ghost degree block may be incomplete when max_degree truncates
        cx.check_square_zero()
    return CEComplex(lie, module, ghosts, cx, max_degree, truncated)


def restricted_ce(lie: DgLieAlgebra, n_max: int, module: Optional[LieModule] = None) -> CEComplex:
    """CE complex of g[t]/t^{n_max+1} built on the restricted dual ⊕ (g⊗t^n)*."""
    if lie.weights and any(lie.weights):
        raise ValueError("expected an unweighted base Lie algebra; the t-grading is added here")
    return ce_complex(current_truncation(lie, n_max), module)


def cup(ce: CEComplex, f: Mapping, g: Mapping) -> Vector:
    """Product of cochains in Sym(l*[-1]) ⊗ M:
    (ω⊗m)(ω'⊗m') = (-1)^{|m||ω'|} ωω' ⊗ mm'."""
    mod = ce.module
    if mod.product is None:
        raise ValueError("coefficients are not an algebra")
    mkey = mod.label_key()
    ghosts = ce.ghosts
    out: Vector = {}
    for (w1, m1), a in f.items():
        for (w2, m2), b in g.items():
            s, w = ghosts.mono_mul(w1, w2)
            if not s:
                continue
            s *= _sgn(mkey[m1][0] * ghosts.degree(w2))
            for m, c in mod.product(m1, m2).items():
                if m in mkey:
                    out[(w, m)] = out.get((w, m), ZERO) + s * a * b * c
    return vclean(out)


def ce_apply(ce: CEComplex, vec: Mapping) -> Vector:
    """Apply d_CE to an arbitrary cochain."""
    dmap = ce.complex.differential
    key = {lab: k for k, basis in ce.complex.space.blocks.items() for lab in basis}
    out: Vector = {}
    for lab, c in vec.items():
        vadd(out, dmap.columns[key[lab]][lab], c)
    return out


def cochain_degree(ce: CEComplex, vec: Mapping) -> int:
    key = {lab: k for k, basis in ce.complex.space.blocks.items() for lab in basis}
    degs = {key[lab][0] for lab in vec}
    if len(degs) > 1:
        raise ValueError("inhomogeneous cochain")
    return degs.pop() if degs else 0


def evaluate_cochain(ce: CEComplex, vec: Mapping, args: Sequence[int]) -> Dict[Hashable, Fraction]:
    """Value of a cochain of an ordinary Lie algebra on basis vectors x_args,
    normalised so that c^{i1}...c^{ip} (i1 < ... < ip) gives 1 on (x_i1, ..., x_ip)."""
    out: Dict[Hashable, Fraction] = {}
    p = len(args)
    for (w, m), c in vec.items():
        idx = [i for i, e in w for _ in range(e)]
        if len(idx) != p:
            continue
        for perm in itertools.permutations(range(p)):
            if [args[k] for k in perm] == idx:
                inv = sum(1 for a in range(p) for b in range(a + 1, p) if perm[a] > perm[b])
                out[m] = out.get(m, ZERO) + _sgn(inv) * c
    return vclean(out)


def shuffle_cup_value(ce: CEComplex, f: Mapping, g: Mapping, args: Sequence[int]) -> Dict[Hashable, Fraction]:
    """(f ∪ g)(x_1..x_{p+q}) by the shuffle formula, for degree-0 Lie algebras."""
    mod = ce.module
    mkey = mod.label_key()
    p = cochain_degree(ce, f) - _module_degree(ce, f)
    q = len(args) - p
    out: Dict[Hashable, Fraction] = {}
    for first in itertools.combinations(range(p + q), p):
        rest = [k for k in range(p + q) if k not in first]
        perm = list(first) + rest
        inv = sum(1 for a in range(p + q) for b in range(a + 1, p + q) if perm[a] > perm[b])
        fv = evaluate_cochain(ce, f, [args[k] for k in first])
        gv = evaluate_cochain(ce, g, [args[k] for k in rest])
        for m1, a in fv.items():
            for m2, b in gv.items():
                s = _sgn(inv) * _sgn(mkey[m2][0] * p)
                for m, c in mod.product(m1, m2).items():
                    out[m] = out.get(m, ZERO) + s * a * b * c
    return vclean(out)


def _module_degree(ce: CEComplex, vec: Mapping) -> int:
    mkey = ce.module.label_key()
    degs = {mkey[m][0] for (_, m) in vec}
    return degs.pop() if degs else 0


def induced_ce_map(ce_src: CEComplex, ce_tgt: CEComplex, phi: Callable[[Hashable], Mapping]):
    """The map id ⊗ φ on cochains induced by a module morphism φ."""
    from .graded_kernel import BlockMap

    def f(label):
        g, m = label
        return {(g, t): c for t, c in phi(m).items()}

    return BlockMap.from_function(ce_src.complex.space, ce_tgt.complex.space, (0, 0), f, strict=False)


def invariants_dimension(lie: DgLieAlgebra, module: LieModule, key: Tuple[int, ...]) -> int:
    """Brute-force dim of {m : ρ(x_i) m = 0 for all i} in one module block."""
    from .graded_kernel import kernel_basis

    basis = module.space.blocks.get(key, [])
    cols = []
    for lab in basis:
        stacked = {}
        for i in range(lie.dim):
            for t, c in module.action(i, lab).items():
                stacked[(i, t)] = c
        cols.append(stacked)
    return len(kernel_basis(cols, len(basis)))
