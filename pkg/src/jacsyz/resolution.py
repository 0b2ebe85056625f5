"""Graded free resolutions, minimization, Betti tables and a linear-algebra oracle."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import reduce
from math import comb, gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .groebner import (
    DegreeCapError,
    FreeModuleSpec,
    ModuleElement,
    ModuleOrder,
    _Engine,
    _check_homogeneous,
    _common_module,
    buchberger,
    default_order,
    schreyer_step,
)
from .ring import GREVLEX, Polynomial, RingSpec, TermOrder, mono_mul, monomials_of_degree

DEFAULT_ORACLE_CAP = 40


# --------------------------------------------------------------------------
# Betti tables


@dataclass(frozen=True)
class BettiTable:
    """Ranks ``c`` of the summands ``S(-e)^c`` at homological step ``k``."""

    entries: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (k, e), c in dict(self.entries).items():
            if c < 0:
                raise ValueError("Betti numbers are nonnegative")
            if c:
                clean[(int(k), int(e))] = int(c)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_triples(cls, triples: Iterable[Tuple[int, int, int]]) -> "BettiTable":
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for k, e, c in triples:
            acc[(k, e)] += c
        return cls(acc)

    @classmethod
    def from_shifts(cls, shifts_by_step: Sequence[Sequence[int]]) -> "BettiTable":
        return cls.from_triples((k, e, 1) for k, sh in enumerate(shifts_by_step) for e in sh)

    def triples(self) -> List[Tuple[int, int, int]]:
        return [(k, e, c) for (k, e), c in self.entries.items()]

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    @property
    def length(self) -> int:
        return max((k for k, _ in self.entries), default=-1)

    def ranks(self) -> List[int]:
        out = [0] * (self.length + 1)
        for (k, _), c in self.entries.items():
            out[k] += c
        return out

    def twists(self, k: int) -> List[int]:
        """Multiset of twists at step ``k``, sorted."""
        return sorted(e for (kk, e), c in self.entries.items() if kk == k for _ in range(c))

    def hilbert_numerator(self) -> Dict[int, int]:
        """Coefficients of sum_k (-1)^k sum_e c_{k,e} t^e."""
        num: Dict[int, int] = defaultdict(int)
        for (k, e), c in self.entries.items():
            num[e] += (-1) ** k * c
        return dict(num)

    # -- serialization
    def to_dict(self) -> dict:
        steps = []
        for k in sorted({k for k, _ in self.entries}):
            twists = [{"e": e, "c": c} for (kk, e), c in self.entries.items() if kk == k]
            steps.append({"k": k, "twists": twists})
        return {"steps": steps}

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "BettiTable":
        return cls.from_triples((s["k"], t["e"], t["c"]) for s in data["steps"] for t in s["twists"])

    @classmethod
    def from_json(cls, text: str) -> "BettiTable":
        return cls.from_dict(json.loads(text))

    def text(self) -> str:
        """Macaulay2-style grid: column k, row e - k."""
        if not self.entries:
            return "(zero)"
        L = self.length
        rows = sorted({e - k for k, e in self.entries})
        lo, hi = rows[0], rows[-1]
        cells = [[str(k) for k in range(L + 1)], [str(c) for c in self.ranks()]]
        labels = ["", "total:"]
        for r in range(lo, hi + 1):
            labels.append(f"{r}:")
            cells.append([str(self.entries.get((k, k + r), ".")) for k in range(L + 1)])
        width = max(len(x) for row in cells for x in row)
        lw = max(len(x) for x in labels)
        lines = []
        for lab, row in zip(labels, cells):
            lines.append(lab.rjust(lw) + " " + " ".join(x.rjust(width) for x in row))
        return "\n".join(line.rstrip() for line in lines)

    def __str__(self):
        return self.text()


# --------------------------------------------------------------------------
# resolutions


@dataclass
class GradedResolution:
    """``F_0 <- F_1 <- ... <- F_L``; ``differentials[k]`` lists the images of
    the basis of ``F_{k+1}`` in ``F_k``."""

    ring: RingSpec
    modules: List[FreeModuleSpec]
    differentials: List[List[ModuleElement]]
    minimal: bool = False
    complete: bool = True

    @property
    def length(self) -> int:
        return len(self.differentials)

    def ranks(self) -> List[int]:
        return [F.rank for F in self.modules]

    def matrix(self, k: int) -> List[List[Polynomial]]:
        """Rows indexed by ``F_k``, columns by ``F_{k+1}``."""
        cols = [c.components for c in self.differentials[k]]
        return [[col[r] for col in cols] for r in range(self.modules[k].rank)]

    def is_complex(self) -> bool:
        """d_k o d_{k+1} == 0 for all k, checked exactly."""
        for k in range(1, self.length):
            lower = self.differentials[k - 1]
            for col in self.differentials[k]:
                total = self.modules[k - 1].zero()
                for r, poly in enumerate(col.components):
                    if poly:
                        total = total + lower[r].mul_poly(poly)
                if total:
                    return False
        return True

    def is_homogeneous(self) -> bool:
        """Every column sits in the degree of its source summand."""
        for k, cols in enumerate(self.differentials):
            src = self.modules[k + 1].shifts
            for j, col in enumerate(cols):
                if col and col.degree() != src[j]:
                    return False
        return True

    def unit_entries(self) -> List[Tuple[int, int, int]]:
        """(k, row, col) of every entry with a nonzero constant term."""
        out = []
        zero = self.ring.zero_mono()
        for k, cols in enumerate(self.differentials):
            for j, col in enumerate(cols):
                for (m, r), _ in col.terms.items():
                    if m == zero:
                        out.append((k, r, j))
        return sorted(out)


def resolve(gens: Sequence[ModuleElement], max_length: int, order: Optional[ModuleOrder] = None,
            degree_cap: Optional[int] = None) -> GradedResolution:
    """A graded free resolution of ``coker(gens)`` by Schreyer iteration.

    The first differential is a reduced Gröbner basis of the image; later
    ones are Schreyer syzygies, which stay Gröbner bases for the induced
    orders.  The result is usually far from minimal.
    ``degree_cap`` bounds every twist and Gröbner degree.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    F0 = _common_module(gens)
    _check_homogeneous(gens)
    ring = F0.ring
    p = ring.field.p
    one = ring.field(1)
    order = order or default_order()
    gb = buchberger(gens, order, degree_cap)
    vectors = [dict(g.terms) for g in gb.generators]
    modules = [F0]
    diffs: List[List[ModuleElement]] = []
    cur = gb.order
    lex = TermOrder("lex", order.base.precedence)
    while vectors and len(diffs) < max_length:
        perm, induced, syz, _ = schreyer_step(vectors, cur, p, one, lex)
        vecs = [vectors[k] for k in perm]
        target = modules[-1]
        cols = [ModuleElement(target, v) for v in vecs]
        shifts = tuple(c.degree() for c in cols)
        if degree_cap is not None and shifts and max(shifts) > degree_cap:
            raise DegreeCapError(f"resolution needs twist {max(shifts)} > cap {degree_cap}")
        modules.append(FreeModuleSpec(ring, shifts))
        diffs.append(cols)
        vectors, cur = syz, induced
    return GradedResolution(ring, modules, diffs, minimal=False, complete=not vectors)


def _by_rows(col: ModuleElement) -> Dict[int, Dict]:
    rows: Dict[int, Dict] = defaultdict(dict)
    for (m, r), c in col.terms.items():
        rows[r][m] = c
    return dict(rows)


def minimize(res: GradedResolution) -> GradedResolution:
    """Cancel unit entries until none remain.

    Scan order is lowest step, then lowest row, then lowest column.  A unit
    at (row r, column c) of ``d_k`` is cleared from its row by column
    operations, after which generator ``c`` of ``F_{k+1}`` and ``r`` of
    ``F_k`` split off as a trivial summand.
    """
    ring = res.ring
    fld = ring.field
    p = fld.p
    zero = ring.zero_mono()
    L = res.length
    shifts = [list(F.shifts) for F in res.modules]
    mats = [[_by_rows(col) for col in d] for d in res.differentials]
    dead = [set() for _ in res.modules]

    for k in range(L):
        cols = mats[k]
        while True:
            best = None
            for c, col in enumerate(cols):
                if c in dead[k + 1]:
                    continue
                sc = shifts[k + 1][c]
                for r, poly in col.items():
                    if shifts[k][r] == sc and zero in poly and (best is None or (r, c) < best):
                        best = (r, c)
            if best is None:
                break
            r, c = best
            pivot = cols[c]
            ainv = fld.inv(pivot[r][zero])
            for j, col in enumerate(cols):
                if j == c or j in dead[k + 1] or r not in col:
                    continue
                b = col[r]
                if p:
                    factor = {m: (-v * ainv) % p for m, v in b.items()}
                else:
                    factor = {m: -v * ainv for m, v in b.items()}
                for s, entry in pivot.items():
                    acc = col.get(s)
                    if acc is None:
                        acc = {}
                        col[s] = acc
                    for m1, v1 in factor.items():
                        for m2, v2 in entry.items():
                            mm = tuple([x + y for x, y in zip(m1, m2)])
                            w = acc.get(mm, 0) + v1 * v2
                            if p:
                                w %= p
                            if w:
                                acc[mm] = w
                            else:
                                acc.pop(mm, None)
                    if not acc:
                        del col[s]
                if r in col:
                    raise ArithmeticError("minimization failed to clear a pivot row")
            dead[k + 1].add(c)
            dead[k].add(r)
            cols[c] = {}
            if k + 1 < L:
                for col in mats[k + 1]:
                    col.pop(c, None)
            if k > 0:
                mats[k - 1][r] = {}

    keep = [[i for i in range(len(sh)) if i not in dead[k]] for k, sh in enumerate(shifts)]
    renum = [{old: new for new, old in enumerate(kp)} for kp in keep]
    modules = [FreeModuleSpec(ring, tuple(shifts[k][i] for i in kp)) for k, kp in enumerate(keep)]
    diffs = []
    for k in range(L):
        cols = []
        for c in keep[k + 1]:
            terms = {}
            for r, poly in mats[k][c].items():
                nr = renum[k][r]
                for m, v in poly.items():
                    terms[(m, nr)] = v
            cols.append(ModuleElement(modules[k], terms))
        diffs.append(cols)
    while len(modules) > 1 and modules[-1].rank == 0:
        modules.pop()
        diffs.pop()
    return GradedResolution(ring, modules, diffs, minimal=True, complete=res.complete)


def betti_table(res: GradedResolution) -> BettiTable:
    if not res.minimal:
        raise ValueError("Betti numbers are read off a minimal resolution; call minimize() first")
    return BettiTable.from_shifts([F.shifts for F in res.modules])


def min_generators(gens: Sequence[ModuleElement], order: Optional[ModuleOrder] = None) -> List[ModuleElement]:
    """A minimal homogeneous generating subset of ``gens``, sorted by degree.

    An input of degree t is kept iff it is not in the span of the kept
    inputs of lower degree (and earlier ones of degree t), decided against
    a Gröbner basis truncated at degree t.
    """
    module = _common_module(gens)
    _check_homogeneous(gens)
    eng = _Engine(module, order or default_order())
    keep = eng.run([g.terms for g in gens])
    chosen = [k for k in range(len(gens)) if keep[k]]
    chosen.sort(key=lambda k: (gens[k].degree(), k))
    return [gens[k] for k in chosen]


# --------------------------------------------------------------------------
# linear-algebra oracle (no Gröbner machinery)


def _rank(vectors: Iterable[Dict], p: int) -> int:
    """Rank of sparse vectors by elimination.

    Over Q rows are kept integral and primitive (fraction-free updates);
    over GF(p) pivots are monic.
    """
    pivots: Dict[object, Dict] = {}
    for vec in vectors:
        if p:
            row = {t: c % p for t, c in vec.items() if c % p}
        else:
            den = reduce(lambda a, b: a * b // gcd(a, b), (int(c.denominator) for c in vec.values()), 1)
            row = {t: int(c * den) for t, c in vec.items() if c}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                if p:
                    inv = pow(row[lead], -1, p)
                    row = {t: c * inv % p for t, c in row.items()}
                else:
                    g = reduce(gcd, row.values())
                    if row[lead] < 0:
                        g = -g
                    row = {t: c // g for t, c in row.items()}
                pivots[lead] = row
                break
            c = row[lead]
            if p:
                for t, v in piv.items():
                    w = (row.get(t, 0) - c * v) % p
                    if w:
                        row[t] = w
                    else:
                        row.pop(t, None)
            else:
                a = piv[lead]
                new = {t: a * v for t, v in row.items()}
                for t, v in piv.items():
                    w = new.get(t, 0) - c * v
                    if w:
                        new[t] = w
                    else:
                        new.pop(t, None)
                if new:
                    g = reduce(gcd, new.values())
                    if g != 1:
                        new = {t: v // g for t, v in new.items()}
                row = new
    return len(pivots)


def _column_key(order: TermOrder):
    def key(t):
        m, i = t
        return order.rank(m) + (i,)
    return key


def _multiples(gens: Sequence[ModuleElement], degrees: Sequence[int], nvars: int):
    """For each i, the vectors u * gens_i with deg(u) == degrees[i]."""
    key = _column_key(GREVLEX)
    for g, a in zip(gens, degrees):
        if a < 0:
            continue
        items = list(g.terms.items())
        for u in monomials_of_degree(nvars, a):
            yield u, {key((mono_mul(m, u), i)): c for (m, i), c in items}


def graded_kernel_dimension(gens: Sequence[ModuleElement], t: int, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """dim of ``{(A_i) : sum A_i gens_i = 0}`` in degree ``t``, by dense linear algebra.

    ``t`` is the degree of the coefficient attached to a generator of
    smallest degree: ``A_i`` has degree ``t + min_deg - deg(gens_i)``.  With
    equal-degree generators this is simply ``deg(A_i) == t``.
    """
    if t > cap:
        raise DegreeCapError(f"oracle degree {t} exceeds cap {cap}")
    module = _common_module(gens)
    _check_homogeneous(gens)
    nv = module.ring.nvars
    degs = [g.degree() for g in gens]
    base = min((d for d in degs if d is not None), default=0)
    # zero generators keep relative degree 0
    sizes = [t + base - (d if d is not None else base) for d in degs]
    vecs = [v for _, v in _multiples(gens, sizes, nv)]
    ncols = sum(comb(a + nv - 1, nv - 1) for a in sizes if a >= 0)
    return ncols - _rank(vecs, module.ring.field.p)


def hilbert_function(gens: Sequence[ModuleElement], t: int, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """dim_k (F / <gens>)_t by linear algebra."""
    if t > cap:
        raise DegreeCapError(f"oracle degree {t} exceeds cap {cap}")
    module = _common_module(gens)
    _check_homogeneous(gens)
    nv = module.ring.nvars
    dim_f = sum(comb(t - s + nv - 1, nv - 1) for s in module.shifts if t - s >= 0)
    live = [g for g in gens if g]
    sizes = [t - g.degree() for g in live]
    vecs = [v for _, v in _multiples(live, sizes, nv)]
    return dim_f - _rank(vecs, module.ring.field.p)


def hilbert_consistency(res: GradedResolution, table: BettiTable, cap: int) -> bool:
    """Alternating Betti sum vs (1-t)^nvars * Hilbert series, through degree ``cap``."""
    F0 = res.modules[0]
    gens = res.differentials[0] if res.differentials else []
    nv = res.ring.nvars
    if gens:
        hf = [hilbert_function(gens, t, cap) for t in range(cap + 1)]
    else:
        hf = [sum(comb(t - s + nv - 1, nv - 1) for s in F0.shifts if t >= s) for t in range(cap + 1)]
    lhs = [0] * (cap + 1)
    for e, c in table.hilbert_numerator().items():
        if e <= cap:
            lhs[e] += c
    rhs = [0] * (cap + 1)
    for t, h in enumerate(hf):
        for j in range(nv + 1):
            if t + j <= cap:
                rhs[t + j] += (-1) ** j * comb(nv, j) * h
    return lhs == rhs


def predicted_cap(table: BettiTable) -> int:
    """Default oracle cap: largest twist of the table plus 2."""
    return max((e for _, e in table.entries), default=0) + 2
