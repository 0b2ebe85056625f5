"""Gröbner bases of homogeneous submodules of graded free modules.

Everything here is graded-only.  Vectors are stored as dicts keyed by module
monomials ``(exponents, component)``; a free module ``S(-a_1) + ... + S(-a_r)``
is described by its shift vector ``(a_1, ..., a_r)``, and the term
``m * e_i`` has degree ``deg(m) + a_i``.

The engine is a degree-by-degree Buchberger algorithm with the
Gebauer–Möller pair criteria.  Pairs of equal degree are treated in
lexicographic order of their index pair so runs are reproducible.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush
from typing import Dict, List, Optional, Sequence, Tuple

from .ring import (
    GREVLEX,
    Monomial,
    NonHomogeneousError,
    Polynomial,
    RingMismatchError,
    RingSpec,
    TermOrder,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
)

Term = Tuple[Monomial, int]


class ModuleMismatchError(ValueError):
    pass


class DegreeCapError(RuntimeError):
    """A computation needed a degree above the configured cap."""


# --------------------------------------------------------------------------
# free modules and their elements


@dataclass(frozen=True)
class FreeModuleSpec:
    """``S(-shifts[0]) + ... + S(-shifts[r-1])``."""

    ring: RingSpec
    shifts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))

    @classmethod
    def free(cls, ring: RingSpec, rank: int, shift: int = 0) -> "FreeModuleSpec":
        return cls(ring, (shift,) * rank)

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def twist(self, a: int) -> "FreeModuleSpec":
        """Shift every summand by ``a`` (``F(-a)``)."""
        return FreeModuleSpec(self.ring, tuple(s + a for s in self.shifts))

    def basis(self, i: int) -> "ModuleElement":
        return ModuleElement(self, {(self.ring.zero_mono(), i): self.ring.field(1)})

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, {})


class ModuleElement:
    """An element of a graded free module, stored as ``{(mono, slot): coef}``."""

    __slots__ = ("module", "terms", "_hash")

    def __init__(self, module: FreeModuleSpec, terms: Dict[Term, object] | None = None):
        self.module = module
        self.terms = {t: c for t, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def from_components(cls, module: FreeModuleSpec, components: Sequence[Polynomial]) -> "ModuleElement":
        if len(components) != module.rank:
            raise ValueError(f"expected {module.rank} components, got {len(components)}")
        terms = {}
        for i, poly in enumerate(components):
            if poly.ring != module.ring:
                raise RingMismatchError("component ring differs from module ring")
            for m, c in poly.terms.items():
                terms[(m, i)] = c
        return cls(module, terms)

    @classmethod
    def from_poly(cls, poly: Polynomial, shift: int = 0) -> "ModuleElement":
        """A polynomial as an element of the rank-1 module ``S(-shift)``."""
        return cls.from_components(FreeModuleSpec(poly.ring, (shift,)), [poly])

    @property
    def ring(self) -> RingSpec:
        return self.module.ring

    @property
    def components(self) -> Tuple[Polynomial, ...]:
        parts: List[dict] = [{} for _ in range(self.module.rank)]
        for (m, i), c in self.terms.items():
            parts[i][m] = c
        return tuple(Polynomial(self.ring, d, _clean=True) for d in parts)

    def __getitem__(self, i: int) -> Polynomial:
        return Polynomial(self.ring, {m: c for (m, j), c in self.terms.items() if j == i}, _clean=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> Optional[int]:
        """Graded degree, or None when zero or not homogeneous."""
        shifts = self.module.shifts
        degs = {sum(m) + shifts[i] for (m, i) in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self.terms or self.degree() is not None

    def _check(self, other: "ModuleElement"):
        if self.module != other.module:
            raise ModuleMismatchError("elements live in different free modules")

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(self.module, _axpy(dict(self.terms), other.terms, 1, self.ring.field.p))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        p = self.ring.field.p
        return ModuleElement(self.module, _axpy(dict(self.terms), other.terms, p - 1 if p else -1, p))

    def __neg__(self) -> "ModuleElement":
        return self.scale(-1)

    def scale(self, c) -> "ModuleElement":
        fld = self.ring.field
        c = fld(c)
        p = fld.p
        return ModuleElement(self.module, {t: (v * c % p if p else v * c) for t, v in self.terms.items()})

    def mul_poly(self, poly: Polynomial) -> "ModuleElement":
        if poly.ring != self.ring:
            raise RingMismatchError("multiplier ring differs from module ring")
        p = self.ring.field.p
        out: dict = {}
        for m1, c1 in poly.terms.items():
            for (m2, i), c2 in self.terms.items():
                t = (mono_mul(m1, m2), i)
                v = out.get(t, 0) + c1 * c2
                out[t] = v % p if p else v
        return ModuleElement(self.module, out)

    def dot(self, polys: Sequence[Polynomial]) -> Polynomial:
        """sum_i self[i] * polys[i]."""
        ring = self.ring
        total = ring.zero()
        for i, comp in enumerate(self.components):
            if comp:
                total = total + comp * polys[i]
        return total

    def retwist(self, module: FreeModuleSpec) -> "ModuleElement":
        """The same components viewed in another free module of equal rank."""
        if module.rank != self.module.rank or module.ring != self.ring:
            raise ModuleMismatchError("target module has a different rank or ring")
        return ModuleElement(module, self.terms)

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.module == other.module and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.module, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def _axpy(acc: dict, other: dict, c, p: int) -> dict:
    """acc += c * other, in place."""
    for t, v in other.items():
        w = acc.get(t, 0) + c * v
        if p:
            w %= p
        if w:
            acc[t] = w
        elif t in acc:
            del acc[t]
    return acc


# --------------------------------------------------------------------------
# module orders


@dataclass(frozen=True)
class ModuleOrder:
    """Order on module monomials ``m * e_i``.

    strategy:
      ``top``      compare monomials, then slot (lower slot is larger)
      ``pot``      compare slots first
      ``schreyer`` ``m e_i > m' e_j`` iff ``m*LT_i > m'*LT_j`` in ``lower``,
                   ties broken by ``i < j``; ``induced`` holds the ``LT_i``
      ``elim``     slots ``< split`` dominate all others, ``top`` within blocks

    As with :class:`TermOrder`, ``rank`` is smaller for larger terms.
    """

    base: TermOrder = GREVLEX
    strategy: str = "top"
    induced: Tuple[Term, ...] = ()
    lower: Optional["ModuleOrder"] = None
    split: int = 0
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.strategy not in ("top", "pot", "schreyer", "elim"):
            raise ValueError(f"unknown module order strategy {self.strategy!r}")
        if self.strategy == "schreyer" and self.lower is None:
            raise ValueError("a Schreyer order needs the lower module order")

    @classmethod
    def schreyer(cls, lower: "ModuleOrder", leading: Sequence[Term]) -> "ModuleOrder":
        return cls(lower.base, "schreyer", tuple(leading), lower)

    def rank(self, t: Term) -> tuple:
        r = self._cache.get(t)
        if r is None:
            m, i = t
            s = self.strategy
            if s == "top":
                r = self.base.rank(m) + (i,)
            elif s == "pot":
                r = (i,) + self.base.rank(m)
            elif s == "elim":
                r = (0 if i < self.split else 1,) + self.base.rank(m) + (i,)
            else:
                u, c = self.induced[i]
                r = self.lower.rank((mono_mul(m, u), c)) + (i,)
            self._cache[t] = r
        return r

    def leading(self, terms) -> Term:
        return min(terms, key=self.rank)


# --------------------------------------------------------------------------
# reduction engine


class _Elem:
    __slots__ = ("lt", "tail", "deg", "idx")

    def __init__(self, lt: Term, tail: list, deg: int, idx: int):
        self.lt = lt
        self.tail = tail
        self.deg = deg
        self.idx = idx

    def vector(self, one) -> dict:
        v = dict(self.tail)
        v[self.lt] = one
        return v


def _reduce(vec: dict, index: dict, rank, p: int, quotients: Optional[dict] = None) -> dict:
    """Full remainder of ``vec`` (consumed) modulo monic elements in ``index``.

    ``index`` maps a slot to the list of elements whose leading term sits in
    that slot.  When ``quotients`` is given, ``{(mono, elem idx): coef}`` is
    accumulated so that ``vec = sum q * elem + remainder``.
    """
    heap = [(rank(t), t) for t in vec]
    heapify(heap)
    rem = {}
    while heap:
        t = heappop(heap)[1]
        c = vec.pop(t, None)
        if c is None:
            continue
        m, slot = t
        red = None
        for el in index.get(slot, ()):
            if mono_divides(el.lt[0], m):
                red = el
                break
        if red is None:
            rem[t] = c
            continue
        q = mono_div(m, red.lt[0])
        if quotients is not None:
            key = (q, red.idx)
            w = quotients.get(key, 0) + c
            quotients[key] = w % p if p else w
        for (m2, s2), a in red.tail:
            t2 = (tuple([x + y for x, y in zip(m2, q)]), s2)
            old = vec.get(t2)
            if old is None:
                v = -c * a
                vec[t2] = v % p if p else v
                heappush(heap, (rank(t2), t2))
            else:
                v = old - c * a
                if p:
                    v %= p
                if v:
                    vec[t2] = v
                else:
                    del vec[t2]
    return rem


class _Engine:
    """Homogeneous Buchberger with Gebauer–Möller pair management."""

    def __init__(self, module: FreeModuleSpec, order: ModuleOrder, degree_cap: Optional[int] = None):
        self.module = module
        self.order = order
        self.rank = order.rank
        self.shifts = module.shifts
        self.field = module.ring.field
        self.p = self.field.p
        self.ideal = module.rank == 1
        self.cap = degree_cap
        self.elems: List[_Elem] = []
        self.index: Dict[int, List[_Elem]] = defaultdict(list)
        self.pairs: Dict[Tuple[int, int], Tuple[int, Monomial, int]] = {}

    def tdeg(self, t: Term) -> int:
        return sum(t[0]) + self.shifts[t[1]]

    def reduce(self, vec: dict, quotients=None) -> dict:
        return _reduce(vec, self.index, self.rank, self.p, quotients)

    def insert(self, vec: dict) -> _Elem:
        lt = min(vec, key=self.rank)
        inv = self.field.inv(vec[lt])
        p = self.p
        tail = [(t, (c * inv % p if p else c * inv)) for t, c in vec.items() if t != lt]
        el = _Elem(lt, tail, self.tdeg(lt), len(self.elems))
        self._update(el)
        self.elems.append(el)
        self.index[lt[1]].append(el)
        return el

    def _update(self, h: _Elem):
        th, slot = h.lt
        ideal = self.ideal
        cands = [g for g in self.index.get(slot, ())]
        lcms = {g.idx: mono_lcm(th, g.lt[0]) for g in cands}
        kept: List[_Elem] = []
        for pos, g in enumerate(cands):
            L = lcms[g.idx]
            if ideal and mono_coprime(th, g.lt[0]):
                kept.append(g)
                continue
            if any(mono_divides(lcms[g2.idx], L) for g2 in cands[pos + 1:]):
                continue
            if any(mono_divides(lcms[g2.idx], L) for g2 in kept):
                continue
            kept.append(g)
        for key, (deg, L, s) in list(self.pairs.items()):
            if s != slot or not mono_divides(th, L):
                continue
            i, j = key
            if mono_lcm(self.elems[i].lt[0], th) != L and mono_lcm(self.elems[j].lt[0], th) != L:
                del self.pairs[key]
        shift = self.shifts[slot]
        for g in kept:
            if ideal and mono_coprime(th, g.lt[0]):
                continue
            L = lcms[g.idx]
            self.pairs[(g.idx, h.idx)] = (sum(L) + shift, L, slot)

    def spoly(self, i: int, j: int) -> dict:
        a, b = self.elems[i], self.elems[j]
        L = mono_lcm(a.lt[0], b.lt[0])
        qa = mono_div(L, a.lt[0])
        qb = mono_div(L, b.lt[0])
        vec = {(mono_mul(m, qa), s): c for (m, s), c in a.tail}
        p = self.p
        for (m, s), c in b.tail:
            t = (mono_mul(m, qb), s)
            v = vec.get(t, 0) - c
            if p:
                v %= p
            if v:
                vec[t] = v
            else:
                vec.pop(t, None)
        return vec

    def run(self, inputs: Sequence[dict]) -> List[bool]:
        """Complete the basis; return which inputs were needed as generators."""
        degs = []
        for vec in inputs:
            degs.append(self.tdeg(next(iter(vec))) if vec else None)
        queue = sorted((d, k) for k, d in enumerate(degs) if d is not None)
        minimal = [False] * len(inputs)
        pos = 0
        while True:
            pdeg = min((v[0] for v in self.pairs.values()), default=None)
            ideg = queue[pos][0] if pos < len(queue) else None
            if pdeg is None and ideg is None:
                break
            d = min(x for x in (pdeg, ideg) if x is not None)
            if self.cap is not None and d > self.cap:
                raise DegreeCapError(f"Gröbner basis computation needs degree {d} > cap {self.cap}")
            for key in sorted(k for k, v in self.pairs.items() if v[0] == d):
                if key not in self.pairs:
                    continue
                del self.pairs[key]
                r = self.reduce(self.spoly(*key))
                if r:
                    self.insert(r)
            while pos < len(queue) and queue[pos][0] == d:
                k = queue[pos][1]
                pos += 1
                r = self.reduce(dict(inputs[k]))
                if r:
                    self.insert(r)
                    minimal[k] = True
        return minimal

    def reduced_vectors(self) -> List[dict]:
        """Tail-reduce every element; returns monic vectors in creation order."""
        one = self.field(1)
        out = []
        for el in self.elems:
            v = self.reduce(dict(el.tail))
            v[el.lt] = one
            out.append(v)
        return out


# --------------------------------------------------------------------------
# Gröbner bases


@dataclass
class GroebnerBasis:
    generators: List[ModuleElement]
    order: ModuleOrder
    reduced: bool = True
    module: Optional[FreeModuleSpec] = None

    def __post_init__(self):
        if self.module is None:
            if not self.generators:
                raise ValueError("an empty basis needs an explicit module")
            self.module = self.generators[0].module
        self._index = None

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def leading_terms(self) -> List[Term]:
        return [self.order.leading(g.terms) for g in self.generators]

    def index(self) -> Dict[int, List[_Elem]]:
        if self._index is None:
            fld = self.module.ring.field
            p = fld.p
            idx: Dict[int, List[_Elem]] = defaultdict(list)
            for k, g in enumerate(self.generators):
                lt = self.order.leading(g.terms)
                inv = fld.inv(g.terms[lt])
                tail = [(t, (c * inv % p if p else c * inv)) for t, c in g.terms.items() if t != lt]
                idx[lt[1]].append(_Elem(lt, tail, 0, k))
            self._index = idx
        return self._index


def _common_module(gens: Sequence[ModuleElement]) -> FreeModuleSpec:
    if not gens:
        raise ValueError("need at least one generator")
    mod = gens[0].module
    for g in gens[1:]:
        if g.module != mod:
            if g.module.ring != mod.ring:
                raise RingMismatchError("generators come from different rings")
            raise ModuleMismatchError("generators live in different free modules")
    return mod


def _check_homogeneous(gens: Sequence[ModuleElement]):
    for k, g in enumerate(gens):
        if not g.is_homogeneous():
            raise NonHomogeneousError(f"generator {k} is not homogeneous")


def default_order(base: TermOrder = GREVLEX) -> ModuleOrder:
    return ModuleOrder(base, "top")


def buchberger(gens: Sequence[ModuleElement], order: Optional[ModuleOrder] = None,
               degree_cap: Optional[int] = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``."""
    module = _common_module(gens)
    _check_homogeneous(gens)
    order = order or default_order()
    eng = _Engine(module, order, degree_cap)
    eng.run([g.terms for g in gens])
    gb = [ModuleElement(module, v) for v in eng.reduced_vectors()]
    return GroebnerBasis(gb, order, True, module)


def ideal_groebner(polys: Sequence[Polynomial], order: Optional[ModuleOrder] = None) -> GroebnerBasis:
    return buchberger([ModuleElement.from_poly(f) for f in polys], order)


def normal_form(v: ModuleElement, gb: GroebnerBasis) -> ModuleElement:
    if v.module != gb.module:
        raise ModuleMismatchError("element and basis live in different free modules")
    rem = _reduce(dict(v.terms), gb.index(), gb.order.rank, v.ring.field.p)
    return ModuleElement(v.module, rem)


def membership(v: ModuleElement, gb: GroebnerBasis) -> bool:
    return normal_form(v, gb).is_zero()


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    """Whether the ideal's only common zero is the origin.

    Decided by looking for a pure power of every variable among the
    leading monomials.
    """
    if gb.module.rank != 1:
        raise ModuleMismatchError("zero-dimensionality is defined here for ideals only")
    nv = gb.module.ring.nvars
    found = [False] * nv
    for m, _ in gb.leading_terms:
        support = [i for i, k in enumerate(m) if k]
        if not support:
            return True
        if len(support) == 1:
            found[support[0]] = True
    return all(found)


def graded_dimension(gb: GroebnerBasis, t: int) -> int:
    """dim_k of the submodule spanned by ``gb`` in degree ``t``.

    Counts degree-``t`` module monomials that lie in the leading-term module.
    """
    mod = gb.module
    by_slot = defaultdict(list)
    for m, i in gb.leading_terms:
        by_slot[i].append(m)
    total = 0
    for i, s in enumerate(mod.shifts):
        lts = by_slot.get(i)
        if not lts:
            continue
        for m in monomials_of_degree(mod.ring.nvars, t - s):
            if any(mono_divides(u, m) for u in lts):
                total += 1
    return total


def syzygy_module(gens: Sequence[ModuleElement], base: TermOrder = GREVLEX,
                  shifts: Optional[Sequence[int]] = None, degree_cap: Optional[int] = None) -> GroebnerBasis:
    """Gröbner basis of ``{(A_1..A_r) : sum A_i gens_i = 0}``.

    Runs Buchberger on the vectors ``(gens_i, e_i)`` in ``F + S^r`` under an
    order in which ``F`` dominates; basis elements with no ``F`` part
    form a Gröbner basis of the syzygies.  Slot ``i`` of the result has
    shift ``deg(gens_i)`` unless ``shifts`` is given.
    """
    module = _common_module(gens)
    _check_homogeneous(gens)
    if shifts is None:
        shifts = [g.degree() if g else 0 for g in gens]
    shifts = tuple(shifts)
    for k, g in enumerate(gens):
        if g and g.degree() != shifts[k]:
            raise ValueError(f"shift {shifts[k]} for slot {k} does not match generator degree {g.degree()}")
    big = FreeModuleSpec(module.ring, module.shifts + shifts)
    syz_mod = FreeModuleSpec(module.ring, shifts)
    R = module.rank
    one = module.ring.field(1)
    zero = module.ring.zero_mono()
    inputs = []
    for k, g in enumerate(gens):
        vec = dict(g.terms)
        vec[(zero, R + k)] = one
        inputs.append(vec)
    order = ModuleOrder(base, "elim", split=R)
    eng = _Engine(big, order, degree_cap)
    eng.run(inputs)
    out = []
    for v in eng.reduced_vectors():
        lt = min(v, key=order.rank)
        if lt[1] >= R:
            out.append(ModuleElement(syz_mod, {(m, i - R): c for (m, i), c in v.items()}))
    return GroebnerBasis(out, ModuleOrder(base, "top"), True, syz_mod)


def syzygies(gens: Sequence[ModuleElement], base: TermOrder = GREVLEX,
             shifts: Optional[Sequence[int]] = None, degree_cap: Optional[int] = None) -> List[ModuleElement]:
    """Generators (not necessarily minimal) of the syzygy module of ``gens``."""
    return syzygy_module(gens, base, shifts, degree_cap).generators


# --------------------------------------------------------------------------
# Schreyer step


def schreyer_step(vectors: Sequence[dict], order: ModuleOrder, p: int, one, lex_order: TermOrder):
    """Syzygies of a monic Gröbner basis, Schreyer style.

    ``vectors`` must be a Gröbner basis under ``order`` with leading
    coefficient 1.  Returns ``(perm, induced, syz, syz_lts)`` where ``perm``
    is the order in which the basis was re-indexed (the new slot ``k`` is
    the old vector ``perm[k]``), ``induced`` the Schreyer order on that
    indexing, ``syz`` the syzygy vectors (dicts over the new slots) and
    ``syz_lts`` their leading terms under ``induced``.  The result is again a
    Gröbner basis, so the step can be iterated.
    """
    lts = [min(v, key=order.rank) for v in vectors]
    lexrank = lex_order.rank
    perm = sorted(range(len(vectors)), key=lambda k: (lts[k][1], lexrank(lts[k][0]), k))
    vecs = [vectors[k] for k in perm]
    lts = [lts[k] for k in perm]
    induced = ModuleOrder.schreyer(order, lts)
    index: Dict[int, List[_Elem]] = defaultdict(list)
    for k, (v, lt) in enumerate(zip(vecs, lts)):
        index[lt[1]].append(_Elem(lt, [(t, c) for t, c in v.items() if t != lt], 0, k))
    syz, syz_lts = [], []
    neg1 = p - 1 if p else -one
    for i in range(len(vecs)):
        ui, si = lts[i]
        cand = {}
        for j in range(i + 1, len(vecs)):
            uj, sj = lts[j]
            if sj != si:
                continue
            mij = mono_div(mono_lcm(ui, uj), ui)
            if mij not in cand:
                cand[mij] = j
        mins = [m for m in cand if not any(m2 != m and mono_divides(m2, m) for m2 in cand)]
        for mij in sorted(mins, key=lambda m: cand[m]):
            j = cand[mij]
            uj = lts[j][0]
            mji = mono_div(mono_mul(mij, ui), uj)
            vec = {(mono_mul(m, mij), s): c for (m, s), c in vecs[i].items()}
            _axpy(vec, {(mono_mul(m, mji), s): c for (m, s), c in vecs[j].items()}, neg1, p)
            quot: dict = {}
            rem = _reduce(vec, index, order.rank, p, quot)
            if rem:
                raise ArithmeticError("Schreyer step: input is not a Gröbner basis")
            tau = {(mij, i): one, (mji, j): neg1}
            for (q, l), c in quot.items():
                w = tau.get((q, l), 0) - c
                if p:
                    w %= p
                if w:
                    tau[(q, l)] = w
                else:
                    tau.pop((q, l), None)
            syz.append(tau)
            syz_lts.append((mij, i))
    return perm, induced, syz, syz_lts
