"""Exact graded linear algebra over the rationals.

Everything downstream is built from four pieces defined here:

* ``SuperAlgebra``: free graded-commutative algebras on homogeneous generators,
  with the Koszul sign rule applied in one place (``mono_mul``).
* ``SpanReducer``: incremental sparse Gaussian elimination over ``Fraction``.
* ``GradedSpace`` / ``BlockMap``: basis bookkeeping per block and sparse maps.
* ``TruncatedComplex``: a graded space with a degree +1 differential, whose
  square is checked exactly before any cohomology is reported.

Block keys are tuples whose first entry is the cohomological degree and
whose second entry is the weight; further entries (e.g. a charge) are allowed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Rational = Fraction
Vector = Dict[Hashable, Fraction]
BlockKey = Tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class AuditError(AssertionError):
    """A structural identity failed; ``where`` names the first offending block."""

    def __init__(self, message: str, where: object = None):
        super().__init__(message if where is None else f"{message} at {where!r}")
        self.where = where


class TruncationError(ValueError):
    """A computation needed data beyond the configured truncation bound."""


def rational(value: object) -> Fraction:
    """Parse ints, Fractions and strings such as ``"-3/4"`` exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


# ---------------------------------------------------------------------------
# sparse vectors

def vadd(target: Vector, vec: Mapping, scale: Fraction = ONE) -> Vector:
    """In place ``target += scale * vec``; zero entries are removed."""
    if not scale:
        return target
    for k, c in vec.items():
        v = target.get(k, ZERO) + scale * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)
    return target


def vscale(vec: Mapping, scale: Fraction) -> Vector:
    if not scale:
        return {}
    return {k: scale * c for k, c in vec.items()}


def vsum(vectors: Iterable[Tuple[Fraction, Mapping]]) -> Vector:
    out: Vector = {}
    for s, v in vectors:
        vadd(out, v, s)
    return out


def vclean(vec: Mapping) -> Vector:
    return {k: c for k, c in vec.items() if c}


# ---------------------------------------------------------------------------
# generators, signs, free graded-commutative algebras

@dataclass(frozen=True)
class Generator:
    """A homogeneous generator; parity is the degree mod 2."""

    name: str
    degree: int = 0
    weight: int = 0
    charge: int = 0

    @property
    def parity(self) -> int:
        return self.degree % 2


def _deg(x) -> int:
    if isinstance(x, int):
        return x
    return x.degree


def koszul_sign(left, right) -> int:
    """Sign picked up when ``left`` is moved past ``right``.

    Arguments are integers (degrees) or objects with a ``degree`` attribute,
    or sequences of those, in which case the total degree is used.
    """
    a = sum(_deg(v) for v in left) if isinstance(left, (list, tuple)) else _deg(left)
    b = sum(_deg(v) for v in right) if isinstance(right, (list, tuple)) else _deg(right)
    return -1 if (a * b) % 2 else 1


# A monomial is a tuple of (generator index, exponent) pairs sorted by index.
Mono = Tuple[Tuple[int, int], ...]
UNIT: Mono = ()


class SuperAlgebra:
    """Free graded-commutative algebra on an ordered list of generators.

    The canonical order of factors inside a monomial is the order of
    ``gens``; odd generators square to zero.
    """

    def __init__(self, gens: Sequence[Generator]):
        self.gens: List[Generator] = list(gens)
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self.par = [g.parity for g in self.gens]
        self.deg = [g.degree for g in self.gens]
        self.wt = [g.weight for g in self.gens]
        self.chg = [g.charge for g in self.gens]
        self._mul_cache: Dict[Tuple[Mono, Mono], Tuple[int, Optional[Mono]]] = {}

    def __len__(self) -> int:
        return len(self.gens)

    # gradings
    def degree(self, m: Mono) -> int:
        return sum(self.deg[i] * e for i, e in m)

    def weight(self, m: Mono) -> int:
        return sum(self.wt[i] * e for i, e in m)

    def charge(self, m: Mono) -> int:
        return sum(self.chg[i] * e for i, e in m)

    def parity(self, m: Mono) -> int:
        return sum(self.par[i] * e for i, e in m) % 2

    def length(self, m: Mono) -> int:
        return sum(e for _, e in m)

    # construction
    def gen(self, name_or_index, coeff=ONE) -> Vector:
        i = name_or_index if isinstance(name_or_index, int) else self.index[name_or_index]
        return {((i, 1),): Fraction(coeff)}

    def one(self, coeff=ONE) -> Vector:
        return {UNIT: Fraction(coeff)}

    def mono_from_indices(self, idx: Iterable[int]) -> Tuple[int, Optional[Mono]]:
        """Product of generators in the given order, as (sign, monomial)."""
        sign, m = 1, UNIT
        for i in idx:
            s, m = self.mono_mul(m, ((i, 1),))
            if m is None:
                return 0, None
            sign *= s
        return sign, m

    def mono_mul(self, a: Mono, b: Mono) -> Tuple[int, Optional[Mono]]:
        """Product of monomials: (Koszul sign, monomial) or (0, None)."""
        if not a:
            return 1, b
        if not b:
            return 1, a
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        par = self.par
        exps = dict(a)
        sign = 0
        for j, e in b:
            if par[j] and e:
                if j in exps:
                    self._mul_cache[key] = (0, None)
                    return 0, None
                # j passes every odd factor of ``a`` with a larger index
                for i, f in a:
                    if i > j and par[i]:
                        sign += f
            exps[j] = exps.get(j, 0) + e
        res = (-1 if sign % 2 else 1, tuple(sorted(exps.items())))
        self._mul_cache[key] = res
        return res

    def mul(self, p: Mapping, q: Mapping) -> Vector:
        out: Vector = {}
        for a, ca in p.items():
            for b, cb in q.items():
                s, m = self.mono_mul(a, b)
                if s:
                    v = out.get(m, ZERO) + s * ca * cb
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        return out

    def prod(self, factors: Iterable[Mapping]) -> Vector:
        out = self.one()
        for f in factors:
            out = self.mul(out, f)
        return out

    def power(self, p: Mapping, n: int) -> Vector:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, p)
        return out

    def element_parity(self, p: Mapping) -> int:
        pars = {self.parity(m) for m in p}
        if len(pars) > 1:
            raise ValueError("inhomogeneous element")
        return pars.pop() if pars else 0

    def element_degree(self, p: Mapping) -> int:
        degs = {self.degree(m) for m in p}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop() if degs else 0

    # derivations
    def apply_derivation(self, images: Callable[[int], Mapping], parity: int, p: Mapping) -> Vector:
        """Extend ``x_i -> images(i)`` to a derivation of the given parity.

        D(ab) = D(a) b + (-1)^{parity |a|} a D(b).
        """
        out: Vector = {}
        for m, c in p.items():
            prefix_par = 0
            for pos, (i, e) in enumerate(m):
                img = images(i)
                if img:
                    sign = -1 if (parity * prefix_par) % 2 else 1
                    before = m[:pos]
                    tail = (((i, e - 1),) if e > 1 else ()) + m[pos + 1:]
                    left = {before: Fraction(sign * e) * c}
                    vadd(out, self.mul(self.mul(left, img), {tail: ONE}))
                prefix_par += self.par[i] * e
        return out

    def substitute(self, images: Callable[[int], Mapping], p: Mapping) -> Vector:
        """Algebra map sending generator i to ``images(i)`` (order-preserving)."""
        out: Vector = {}
        cache: Dict[Tuple[int, int], Vector] = {}
        for m, c in p.items():
            acc = self.one(c)
            for i, e in m:
                key = (i, e)
                if key not in cache:
                    cache[key] = self.power(images(i), e)
                acc = self.mul(acc, cache[key])
            vadd(out, acc)
        return out

    # enumeration
    def monomials(self, weight: int, allowed: Optional[Sequence[int]] = None,
                  max_length: Optional[int] = None) -> List[Mono]:
        """All monomials of the given total weight.

        Even generators of weight <= 0 would give infinitely many monomials,
        so they are rejected; odd weight-0 generators are fine.
        """
        idx = list(range(len(self.gens))) if allowed is None else list(allowed)
        for i in idx:
            if self.wt[i] <= 0 and not self.par[i] and self.wt[i] == 0 and max_length is None:
                raise TruncationError(f"even weight-0 generator {self.gens[i].name} makes blocks infinite")
            if self.wt[i] < 0:
                raise TruncationError("negative weights are not supported")
        out: List[Mono] = []

        def rec(pos: int, remaining: int, acc: List[Tuple[int, int]], length: int):
            if pos == len(idx):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            i = idx[pos]
            w = self.wt[i]
            if self.par[i]:
                top = 1
            elif w == 0:
                top = (max_length - length) if max_length is not None else 0
            else:
                top = remaining // w
            if max_length is not None:
                top = min(top, max_length - length)
            for e in range(0, top + 1):
                if e * w > remaining:
                    break
                if e:
                    acc.append((i, e))
                rec(pos + 1, remaining - e * w, acc, length + e)
                if e:
                    acc.pop()

        rec(0, weight, [], 0)
        out.sort(key=lambda m: self.sort_key(m))
        return out

    def sort_key(self, m: Mono):
        # degree-reverse-lexicographic flavour: total length first, then exponents
        return (self.length(m), tuple(-e for _, e in m), tuple(i for i, _ in m))

    # printing
    def mono_str(self, m: Mono) -> str:
        if not m:
            return "1"
        parts = []
        for i, e in m:
            parts.append(self.gens[i].name + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def to_str(self, p: Mapping) -> str:
        if not p:
            return "0"
        terms = []
        for m in sorted(p, key=self.sort_key):
            c = p[m]
            terms.append(f"{c}*{self.mono_str(m)}" if m else f"{c}")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# sparse exact elimination

class SpanReducer:
    """Incremental row echelon form over Q.

    Vectors are dicts keyed by hashable labels; ``order`` fixes the pivot
    preference (smaller key = earlier pivot) so results are deterministic.
    Each stored pivot row is normalised to have leading coefficient 1.
    """

    def __init__(self, order: Optional[Callable[[Hashable], object]] = None):
        self.order = order
        self.pivots: Dict[Hashable, Vector] = {}

    def _lead(self, vec: Mapping) -> Hashable:
        if self.order is None:
            try:
                return min(vec)
            except TypeError:
                return min(vec, key=repr)
        return min(vec, key=self.order)

    def reduce(self, vec: Mapping) -> Vector:
        """Remainder of ``vec`` modulo the current span (not fully reduced)."""
        v = dict(vec)
        while v:
            hit = None
            for k in v:
                if k in self.pivots:
                    hit = k
                    break
            if hit is None:
                return v
            vadd(v, self.pivots[hit], -v[hit])
        return v

    def add(self, vec: Mapping) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        lead = self._lead(v)
        c = v[lead]
        # rows are only reduced against earlier pivots; elimination still
        # terminates because a row never contains an earlier row's pivot
        self.pivots[lead] = {k: x / c for k, x in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def coordinates_free(self, vec: Mapping) -> Vector:
        """Fully reduced remainder: coordinates on the non-pivot labels."""
        return self.reduce(vec)


def rank(vectors: Iterable[Mapping]) -> int:
    red = SpanReducer()
    for v in vectors:
        red.add(v)
    return red.rank


def kernel_basis(columns: Sequence[Mapping], n: int) -> List[Vector]:
    """Kernel of the map e_j -> columns[j] (j < n), as vectors on range(n)."""
    # augment each column with a tag recording which source it came from
    red = SpanReducer(order=lambda k: k[0])
    kernel: List[Vector] = []
    for j in range(n):
        vec = {(0, k): c for k, c in columns[j].items()}
        vec[(1, j)] = ONE
        r = red.reduce(vec)
        if all(k[0] == 1 for k in r):
            kernel.append({k[1]: c for k, c in r.items()})
        else:
            red.add(r)
    return kernel


# ---------------------------------------------------------------------------
# graded spaces and block maps

def _shift(key: BlockKey, shift: BlockKey) -> BlockKey:
    return tuple(a + b for a, b in itertools.zip_longest(key, shift, fillvalue=0))[: len(key)]


@dataclass
class GradedSpace:
    """Basis labels per block; labels within a block are unique."""

    blocks: Dict[BlockKey, List[Hashable]] = field(default_factory=dict)

    def __post_init__(self):
        self._index: Dict[BlockKey, Dict[Hashable, int]] = {}
        for k, basis in self.blocks.items():
            idx = {b: i for i, b in enumerate(basis)}
            if len(idx) != len(basis):
                raise ValueError(f"duplicate basis labels in block {k}")
            self._index[k] = idx

    def dim(self, key: BlockKey) -> int:
        return len(self.blocks.get(key, ()))

    def index(self, key: BlockKey) -> Dict[Hashable, int]:
        return self._index.get(key, {})

    def keys(self) -> List[BlockKey]:
        return sorted(self.blocks)

    def dims(self) -> Dict[BlockKey, int]:
        return {k: len(v) for k, v in sorted(self.blocks.items())}

    def block_of(self, label: Hashable) -> Optional[BlockKey]:
        for k, idx in self._index.items():
            if label in idx:
                return k
        return None

    def permuted(self, perm_for: Callable[[BlockKey, int], Sequence[int]]) -> "GradedSpace":
        return GradedSpace({k: [b[i] for i in perm_for(k, len(b))] for k, b in self.blocks.items()})


@dataclass
class BlockMap:
    """A homogeneous sparse linear map, stored column by column per block.

    ``columns[key][label]`` is the image (a dict over target labels) of the
    source basis vector ``label`` in block ``key``.
    """

    source: GradedSpace
    target: GradedSpace
    shift: BlockKey
    columns: Dict[BlockKey, Dict[Hashable, Vector]] = field(default_factory=dict)

    @classmethod
    def from_function(cls, source: GradedSpace, target: GradedSpace, shift: BlockKey,
                      f: Callable[[Hashable], Mapping], strict: bool = True) -> "BlockMap":
        cols: Dict[BlockKey, Dict[Hashable, Vector]] = {}
        for key, basis in source.blocks.items():
            tkey = _shift(key, shift)
            tindex = target.index(tkey)
            out: Dict[Hashable, Vector] = {}
            for b in basis:
                img = vclean(f(b))
                for lab in img:
                    if lab not in tindex:
                        if strict:
                            raise AuditError(f"image of {b!r} has component {lab!r} outside target block {tkey}", key)
                img = {lab: c for lab, c in img.items() if lab in tindex}
                out[b] = img
            cols[key] = out
        return cls(source, target, tuple(shift), cols)

    def apply(self, key: BlockKey, vec: Mapping) -> Vector:
        col = self.columns.get(key, {})
        out: Vector = {}
        for lab, c in vec.items():
            vadd(out, col.get(lab, {}), c)
        return out

    def compose(self, other: "BlockMap") -> "BlockMap":
        """self ∘ other."""
        cols: Dict[BlockKey, Dict[Hashable, Vector]] = {}
        for key, colmap in other.columns.items():
            mid = _shift(key, other.shift)
            cols[key] = {lab: self.apply(mid, img) for lab, img in colmap.items()}
        return BlockMap(other.source, self.target, _shift(other.shift, self.shift), cols)

    def nonzero_blocks(self) -> List[BlockKey]:
        return [k for k, cols in sorted(self.columns.items()) if any(cols.values())]

    def rank(self, key: BlockKey) -> int:
        return rank(self.columns.get(key, {}).values())

    def matrix(self, key: BlockKey) -> List[List[Fraction]]:
        """Dense matrix of one block (rows: target basis, cols: source basis)."""
        src = self.source.blocks.get(key, [])
        tkey = _shift(key, self.shift)
        tgt = self.target.blocks.get(tkey, [])
        tindex = self.target.index(tkey)
        mat = [[ZERO] * len(src) for _ in tgt]
        for j, lab in enumerate(src):
            for t, c in self.columns.get(key, {}).get(lab, {}).items():
                mat[tindex[t]][j] = c
        return mat


def maps_equal(f: BlockMap, g: BlockMap) -> Optional[Tuple[BlockKey, Hashable]]:
    """None if equal on every block, else the first (block, label) that differs."""
    for key in sorted(set(f.columns) | set(g.columns)):
        a, b = f.columns.get(key, {}), g.columns.get(key, {})
        for lab in list(a) + [x for x in b if x not in a]:
            if vclean(a.get(lab, {})) != vclean(b.get(lab, {})):
                return key, lab
    return None


def block_difference(f: BlockMap, g: BlockMap, key: BlockKey) -> List[Tuple[Hashable, Hashable, Fraction, Fraction]]:
    """Entrywise mismatches (source, target, f-entry, g-entry) in one block."""
    out = []
    a, b = f.columns.get(key, {}), g.columns.get(key, {})
    for lab in sorted(set(a) | set(b), key=repr):
        ca, cb = a.get(lab, {}), b.get(lab, {})
        for t in sorted(set(ca) | set(cb), key=repr):
            if ca.get(t, ZERO) != cb.get(t, ZERO):
                out.append((lab, t, ca.get(t, ZERO), cb.get(t, ZERO)))
    return out


# ---------------------------------------------------------------------------
# complexes

@dataclass
class TruncatedComplex:
    """A graded space with a differential of shift (+1, 0, ...)."""

    space: GradedSpace
    differential: BlockMap
    weight_bound: Optional[int] = None
    checked: bool = False
    _ranks: Dict[BlockKey, int] = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, space: GradedSpace, d: Callable[[Hashable], Mapping], weight_bound: Optional[int] = None,
              check: bool = True, shift: Optional[BlockKey] = None) -> "TruncatedComplex":
        width = len(next(iter(space.blocks))) if space.blocks else 2
        sh = shift if shift is not None else (1,) + (0,) * (width - 1)
        dm = BlockMap.from_function(space, space, sh, d, strict=False)
        cx = cls(space, dm, weight_bound)
        if check:
            cx.check_square_zero()
        return cx

    def check_square_zero(self) -> None:
        sq = self.differential.compose(self.differential)
        for key in sorted(sq.columns):
            for lab, img in sq.columns[key].items():
                if img:
                    raise AuditError(f"d^2 != 0 on basis vector {lab!r}", key)
        self.checked = True

    def d_rank(self, key: BlockKey) -> int:
        if key not in self._ranks:
            self._ranks[key] = self.differential.rank(key)
        return self._ranks[key]

    def cohomology(self, allow_unchecked: bool = False) -> Dict[BlockKey, int]:
        """Dimension of H at every stored block, by exact ranks."""
        if not self.checked and not allow_unchecked:
            self.check_square_zero()
        out: Dict[BlockKey, int] = {}
        sh = self.differential.shift
        for key in self.space.keys():
            prev = tuple(a - b for a, b in zip(key, sh))
            out[key] = self.space.dim(key) - self.d_rank(key) - (self.d_rank(prev) if prev in self.space.blocks else 0)
        return out

    def rank_nullity_report(self) -> Dict[BlockKey, Tuple[int, int, int, int]]:
        """(dim, rank d_out, dim ker, dim img_in) per block."""
        sh = self.differential.shift
        rep = {}
        for key in self.space.keys():
            prev = tuple(a - b for a, b in zip(key, sh))
            r_out = self.d_rank(key)
            r_in = self.d_rank(prev) if prev in self.space.blocks else 0
            rep[key] = (self.space.dim(key), r_out, self.space.dim(key) - r_out, r_in)
        return rep


def cohomology(cx: TruncatedComplex, allow_unchecked: bool = False) -> Dict[BlockKey, int]:
    return cx.cohomology(allow_unchecked=allow_unchecked)


def nonzero(table: Mapping[BlockKey, int]) -> Dict[BlockKey, int]:
    return {k: v for k, v in sorted(table.items()) if v}


def tensor(a: GradedSpace, b: GradedSpace, weight_bound: Optional[int] = None) -> GradedSpace:
    """Tensor product of graded spaces; keys add componentwise.

    Blocks above ``weight_bound`` are not stored; asking for them later raises.
    """
    blocks: Dict[BlockKey, List[Hashable]] = {}
    for ka in a.keys():
        for kb in b.keys():
            key = tuple(x + y for x, y in zip(ka, kb))
            if weight_bound is not None and key[1] > weight_bound:
                continue
            blocks.setdefault(key, []).extend((x, y) for x in a.blocks[ka] for y in b.blocks[kb])
    return GradedSpace({k: blocks[k] for k in sorted(blocks)})


def tensor_complex(a: TruncatedComplex, b: TruncatedComplex, weight_bound: Optional[int] = None) -> TruncatedComplex:
    """d(v⊗w) = dv⊗w + (-1)^{|v|} v⊗dw."""
    space = tensor(a.space, b.space, weight_bound)
    a_key = {lab: k for k, bs in a.space.blocks.items() for lab in bs}
    b_key = {lab: k for k, bs in b.space.blocks.items() for lab in bs}

    def d(lab):
        v, w = lab
        kv, kw = a_key[v], b_key[w]
        out: Vector = {}
        for t, c in a.differential.columns.get(kv, {}).get(v, {}).items():
            out[(t, w)] = out.get((t, w), ZERO) + c
        sign = -1 if kv[0] % 2 else 1
        for t, c in b.differential.columns.get(kw, {}).get(w, {}).items():
            out[(v, t)] = out.get((v, t), ZERO) + sign * c
        return out

    return TruncatedComplex.build(space, d, weight_bound)


def check_chain_map(f: BlockMap, src: TruncatedComplex, tgt: TruncatedComplex) -> None:
    """Raise with the first block where d∘f != f∘d."""
    left = tgt.differential.compose(f)
    right = f.compose(src.differential)
    bad = maps_equal(left, right)
    if bad is not None:
        raise AuditError(f"not a chain map on basis vector {bad[1]!r}", bad[0])


def cone(f: BlockMap, src: TruncatedComplex, tgt: TruncatedComplex) -> TruncatedComplex:
    """Cone(f) = V[1] ⊕ W with d(v, w) = (-dv, f(v) + dw)."""
    check_chain_map(f, src, tgt)
    blocks: Dict[BlockKey, List[Hashable]] = {}
    for k, basis in src.space.blocks.items():
        key = (k[0] - 1,) + tuple(k[1:])
        blocks.setdefault(key, []).extend(("V", b) for b in basis)
    for k, basis in tgt.space.blocks.items():
        blocks.setdefault(k, []).extend(("W", b) for b in basis)
    space = GradedSpace({k: blocks[k] for k in sorted(blocks)})
    src_key = {lab: k for k, bs in src.space.blocks.items() for lab in bs}
    tgt_key = {lab: k for k, bs in tgt.space.blocks.items() for lab in bs}

    def d(lab):
        side, b = lab
        out: Vector = {}
        if side == "V":
            k = src_key[b]
            for t, c in src.differential.columns.get(k, {}).get(b, {}).items():
                out[("V", t)] = -c
            for t, c in f.columns.get(k, {}).get(b, {}).items():
                out[("W", t)] = out.get(("W", t), ZERO) + c
        else:
            k = tgt_key[b]
            for t, c in tgt.differential.columns.get(k, {}).get(b, {}).items():
                out[("W", t)] = c
        return out

    return TruncatedComplex.build(space, d, tgt.weight_bound)


def induced_map_rank(f: BlockMap, src: TruncatedComplex, tgt: TruncatedComplex, key: BlockKey) -> int:
    """Rank of the map induced by the chain map f on H at block ``key``."""
    sh = src.differential.shift
    basis = src.space.blocks.get(key, [])
    cols = [src.differential.columns.get(key, {}).get(b, {}) for b in basis]
    ker = kernel_basis(cols, len(basis))
    prev = tuple(a - b for a, b in zip(key, sh))
    tkey = _shift(key, f.shift)
    red = SpanReducer()
    for img in tgt.differential.columns.get(tuple(a - b for a, b in zip(tkey, sh)), {}).values():
        red.add(img)
    base = red.rank
    for z in ker:
        vec = {basis[i]: c for i, c in z.items()}
        red.add(f.apply(key, vec))
    return red.rank - base


def sparse_to_dense(vec: Mapping, labels: Sequence[Hashable]) -> List[Fraction]:
    return [vec.get(b, ZERO) for b in labels]
