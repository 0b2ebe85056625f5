"""Generic toric models f = g * x0*...*xn: predictions, genericity checks, verification.

The coordinate hyperplanes are H_i: x_i = 0; a model with other independent
hyperplanes is brought to this form by a linear change of coordinates
(:meth:`ToricModel.from_hyperplanes`).
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import ModuleElement, ModuleOrder, buchberger, ideal_groebner, is_zero_dimensional, membership
from .jacobian import Hypersurface, d0, derivation_module, milnor_resolution
from .resolution import BettiTable
from .ring import (
    GREVLEX,
    QQ,
    Field,
    Polynomial,
    RingSpec,
    TermOrder,
    fermat,
    monomials_of_degree,
    product,
    require_characteristic,
)

Edge = Tuple[int, ...]


class GenericityNotFound(RuntimeError):
    pass


class DependentHyperplanesError(ValueError):
    """The hyperplane equations are linearly dependent."""


# --------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class ToricModel:
    """W: g = 0 together with the n+1 coordinate hyperplanes."""

    g: Polynomial

    def __post_init__(self):
        e = self.g.degree()
        if e is None or e < 1:
            raise ValueError("g must be a nonzero homogeneous polynomial of degree >= 1")

    @property
    def ring(self) -> RingSpec:
        return self.g.ring

    @property
    def n(self) -> int:
        return self.ring.nvars - 1

    @property
    def e(self) -> int:
        return self.g.degree()

    @property
    def d(self) -> int:
        return self.e + self.n + 1

    @property
    def h(self) -> Polynomial:
        return product(self.ring.gens(), self.ring)

    @property
    def f(self) -> Polynomial:
        return self.g * self.h

    @property
    def N(self) -> int:
        return comb(self.n + 1, 2)

    def hypersurface(self) -> Hypersurface:
        return Hypersurface(self.f)

    @classmethod
    def fermat(cls, n: int, e: int, fld: Field = QQ) -> "ToricModel":
        return cls(fermat(RingSpec(n + 1, fld), e))

    @classmethod
    def from_hyperplanes(cls, g: Polynomial, hyperplanes: Sequence[Polynomial]) -> "ToricModel":
        """Normalize V = W + {l_0 ... l_n = 0} to coordinate hyperplanes.

        With y = L x (rows of L are the coefficients of the l_j) the model
        becomes g(L^{-1} y) * y_0 ... y_n.
        """
        ring = g.ring
        nv = ring.nvars
        if len(hyperplanes) != nv:
            raise ValueError(f"need exactly {nv} hyperplanes")
        L = []
        for ell in hyperplanes:
            if ell.degree() != 1:
                raise ValueError(f"{ell} is not a linear form")
            L.append([ell.coefficient(ring.var_mono(i)) for i in range(nv)])
        Linv = _inverse(L, ring.field)
        if Linv is None:
            raise DependentHyperplanesError("the hyperplane equations are linearly dependent")
        ys = ring.gens()
        images = [sum((ys[j].scale(Linv[i][j]) for j in range(nv)), ring.zero()) for i in range(nv)]
        return cls(g.substitute(images))


def _inverse(M: List[List], fld: Field) -> Optional[List[List]]:
    """Inverse by Gauss–Jordan over the field, or None if singular."""
    n = len(M)
    A = [[fld(x) for x in row] + [fld(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = fld.inv(A[col][col])
        A[col] = [fld(x * inv) for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                c = A[r][col]
                A[r] = [fld(x - c * y) for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def gprime(m: ToricModel, i: int) -> Polynomial:
    """g'_i = x_i * dg/dx_i + g."""
    if not 0 <= i <= m.n:
        raise IndexError(f"index {i} out of range 0..{m.n}")
    return m.ring.var(i) * m.g.derivative(i) + m.g


def rho_prime(m: ToricModel, i: int, j: int) -> ModuleElement:
    """Slot i holds x_i g'_j, slot j holds -x_j g'_i."""
    if not (0 <= i < j <= m.n):
        raise IndexError(f"need 0 <= i < j <= {m.n}, got ({i}, {j})")
    ring = m.ring
    comps = [ring.zero()] * ring.nvars
    comps[i] = ring.var(i) * gprime(m, j)
    comps[j] = -(ring.var(j) * gprime(m, i))
    return ModuleElement.from_components(derivation_module(m.hypersurface()), comps)


def all_rho_primes(m: ToricModel) -> List[ModuleElement]:
    return [rho_prime(m, i, j) for i, j in combinations(range(m.n + 1), 2)]


# --------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class Prediction:
    table: BettiTable
    exponents: Tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.exponents)

    def to_dict(self) -> dict:
        return {"table": self.table.to_dict(), "exponents": list(self.exponents), "N": self.N}


def predict_smooth(n: int, d: int) -> Prediction:
    """Smooth degree-d hypersurface in P^n: Koszul complex on the partials."""
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    table = BettiTable.from_triples((k, k * (d - 1), comb(n + 1, k)) for k in range(n + 2))
    return Prediction(table, (d - 1,) * comb(n + 1, 2))


def predict_nc_arrangement(n: int, d: int) -> Prediction:
    """Normal crossing arrangement of d > n+1 hyperplanes in P^n."""
    if d <= n + 1:
        raise ValueError("the arrangement formula needs d > n + 1")
    triples = [(0, 0, 1), (1, d - 1, n + 1)]
    for k in range(2, n + 2):
        triples.append((k, 2 * d + k - n - 3, comb(d + k - n - 4, k - 2) * comb(d - 1, n + 1 - k)))
    table = BettiTable.from_triples(triples)
    # D_0 generators sit one step up, shifted back by e_1 = d - 1
    exps = tuple(e - (d - 1) for e in table.twists(2))
    return Prediction(table, exps)


def predict_toric(m, e: Optional[int] = None) -> Prediction:
    """Expected Betti table of M(f) for a generic toric model.

    Accepts a :class:`ToricModel` or the pair ``(n, e)``.
    """
    if isinstance(m, ToricModel):
        n, e = m.n, m.e
    else:
        n = m
        if e is None:
            raise TypeError("predict_toric(n, e) needs e")
    triples = [(0, 0, 1), (1, e + n, n + 1)]
    triples += [(k, k * e + n + 1, comb(n + 1, k)) for k in range(2, n + 2)]
    return Prediction(BettiTable.from_triples(triples), (e + 1,) * comb(n + 1, 2))


# --------------------------------------------------------------------------
# genericity checks


def check_regular_sequence(m: ToricModel) -> bool:
    """Whether g'_0..g'_n have only the trivial common zero."""
    require_characteristic(m.ring.field, m.d)
    gb = ideal_groebner([gprime(m, i) for i in range(m.n + 1)])
    return is_zero_dimensional(gb)


def proper_edges(n: int) -> List[Edge]:
    """All proper subsets of {0..n}, by size then lexicographically."""
    return [I for k in range(n + 1) for I in combinations(range(n + 1), k)]


def _edge_transversal(g: Polynomial, I: Edge) -> bool:
    ring = g.ring
    gens = [ring.var(i) for i in I] + [g] + [g.derivative(j) for j in range(ring.nvars) if j not in I]
    gens = [q for q in gens if q]
    return is_zero_dimensional(ideal_groebner(gens))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("JACSYZ_THREADS", "1")))
    except ValueError:
        return 1


def check_normal_crossing(m: ToricModel) -> Tuple[bool, List[Edge]]:
    """Whether no edge E_I (I a proper subset, the empty set included) is tangent to W.

    Edge E_I is transversal iff <x_i : i in I> + <g> + <dg/dx_j : j not in I>
    has only the trivial zero.  I = () tests smoothness of W itself.
    """
    require_characteristic(m.ring.field, m.d)
    edges = proper_edges(m.n)
    workers = _workers()
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_edge_transversal, [m.g] * len(edges), edges))
    else:
        verdicts = [_edge_transversal(m.g, I) for I in edges]
    failing = [I for I, ok in zip(edges, verdicts) if not ok]
    return not failing, failing


def random_model(n: int, e: int, rng: random.Random, bound: int, fld: Field = QQ,
                 density: float = 1.0) -> Optional[ToricModel]:
    """g with integer coefficients uniform in [-bound, bound] (None if g == 0).

    With ``density < 1`` each monomial is kept only with that probability.
    """
    ring = RingSpec(n + 1, fld)
    terms = {}
    for mono in monomials_of_degree(n + 1, e):
        c = rng.randint(-bound, bound)
        if density < 1.0 and rng.random() >= density:
            c = 0
        terms[mono] = c
    g = Polynomial(ring, terms)
    if g.is_zero():
        return None
    return ToricModel(g)


def random_generic(n: int, e: int, seed: int, bound: int, max_attempts: int = 32,
                   fld: Field = QQ) -> Tuple[ToricModel, int]:
    """Rejection-sample a dense g until V is a normal crossing divisor.

    Returns the accepted model and the number of attempts used.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        m = random_model(n, e, rng, bound, fld)
        if m is not None and check_normal_crossing(m)[0]:
            return m, attempt
    raise GenericityNotFound(
        f"no normal-crossing model found in {max_attempts} attempts (n={n}, e={e}, seed={seed}, bound={bound})")


# --------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    hypotheses: Dict[str, object]
    computed: Optional[BettiTable]
    predicted: BettiTable
    match: bool
    exponents: List[int]
    checks: Optional[Dict[str, bool]] = None

    @property
    def hypotheses_hold(self) -> bool:
        h = self.hypotheses
        return bool(h.get("independent_hyperplanes", True) and h["normal_crossing"] and h["regular_sequence"])

    def to_dict(self) -> dict:
        out = {
            "hypotheses": {
                "normal_crossing": bool(self.hypotheses["normal_crossing"]),
                "regular_sequence": bool(self.hypotheses["regular_sequence"]),
                "failing_edges": [list(I) for I in self.hypotheses["failing_edges"]],
                "independent_hyperplanes": bool(self.hypotheses.get("independent_hyperplanes", True)),
            },
            "computed": self.computed.to_dict() if self.computed is not None else None,
            "predicted": self.predicted.to_dict(),
            "match": self.match,
            "exponents": list(self.exponents),
        }
        if self.checks is not None:
            out["checks"] = dict(self.checks)
        return out

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        hyp = dict(data["hypotheses"])
        hyp["failing_edges"] = [tuple(I) for I in hyp["failing_edges"]]
        computed = BettiTable.from_dict(data["computed"]) if data["computed"] is not None else None
        return cls(hyp, computed, BettiTable.from_dict(data["predicted"]), data["match"],
                   list(data["exponents"]), data.get("checks"))


def hypotheses(m: ToricModel) -> Dict[str, object]:
    nc, failing = check_normal_crossing(m)
    return {
        "normal_crossing": nc,
        "regular_sequence": check_regular_sequence(m),
        "failing_edges": failing,
        "independent_hyperplanes": True,
    }


def verify_theorem1(m: ToricModel, order: Optional[ModuleOrder] = None,
                    degree_cap: Optional[int] = None) -> VerificationReport:
    """Compute M(f)'s minimal Betti table and exponents and compare with the prediction.

    A failed hypothesis is recorded in the report; ``match`` is then just
    the outcome of the comparison, not a claim about the theorem.
    """
    hyp = hypotheses(m)
    h = m.hypersurface()
    _, table = milnor_resolution(h, order, degree_cap)
    base = order.base if order is not None else GREVLEX
    exps = d0(h, base, degree_cap).exponents
    pred = predict_toric(m)
    match = table == pred.table and tuple(exps) == pred.exponents
    return VerificationReport(hyp, table, pred.table, match, exps)


def verify_corollary1(m: ToricModel, base: TermOrder = GREVLEX,
                      degree_cap: Optional[int] = None) -> VerificationReport:
    """Check that {rho'_ij} minimally generates D_0(f), in both directions."""
    hyp = hypotheses(m)
    h = m.hypersurface()
    rhos = all_rho_primes(m)
    report = d0(h, base, degree_cap)
    order = ModuleOrder(base, "top")
    rho_gb = buchberger(rhos, order)
    computed_gb = buchberger(report.generators, order)
    checks = {
        "annihilates": all(r.dot(h.partials).is_zero() for r in rhos),
        "computed_in_rho_span": all(membership(g, rho_gb) for g in report.generators),
        "rho_in_computed_span": all(membership(r, computed_gb) for r in rhos),
        "degrees": all(r.degree() == m.e + 1 for r in rhos) and all(x == m.e + 1 for x in report.exponents),
        "count": len(rhos) == m.N == report.m,
    }
    pred = predict_toric(m)
    return VerificationReport(hyp, None, pred.table, all(checks.values()), report.exponents, checks)


# --------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True)
class Builtin:
    """A named fixture: g, the hyperplanes (None for coordinate ones) and f."""

    name: str
    g: Polynomial
    hyperplanes: Optional[Tuple[Polynomial, ...]] = None

    @property
    def f(self) -> Polynomial:
        if self.hyperplanes is None:
            return ToricModel(self.g).f
        return self.g * product(self.hyperplanes, self.g.ring)

    def model(self) -> ToricModel:
        if self.hyperplanes is None:
            return ToricModel(self.g)
        return ToricModel.from_hyperplanes(self.g, self.hyperplanes)


TANGENT_CONIC = "x0^2+x1^2+x2^2-2*x0*x1-2*x1*x2-2*x0*x2"


def builtin(name: str, n: int = 2, e: int = 2, fld: Field = QQ) -> Builtin:
    """``fermat`` (uses n, e), ``example1-main``, ``example1-tangent``, ``example1-degenerate``."""
    R3 = RingSpec(3, fld)
    if name == "fermat":
        return Builtin(f"fermat({n},{e})", fermat(RingSpec(n + 1, fld), e))
    if name == "example1-main":
        return Builtin(name, R3.parse("x0^2+x1^2+x2^2"))
    if name == "example1-tangent":
        return Builtin(name, R3.parse(TANGENT_CONIC))
    if name == "example1-degenerate":
        lines = tuple(R3.parse(s) for s in ("x0-x1", "x1-x2", "x0-x2"))
        return Builtin(name, R3.parse("x0^2+x1^2+x2^2"), lines)
    raise KeyError(f"unknown builtin {name!r}")


BUILTIN_NAMES = ("fermat", "example1-main", "example1-tangent", "example1-degenerate")


def verify_builtin(b: Builtin, force: bool = False, order: Optional[ModuleOrder] = None,
                   degree_cap: Optional[int] = None) -> VerificationReport:
    """verify_theorem1 for a fixture, guarding the hyperplane independence.

    Dependent hyperplanes cannot be normalized, so V is not of toric type;
    the report then flags every hypothesis as failed and, with ``force``,
    still carries the computed table of f.
    """
    try:
        m = b.model()
    except DependentHyperplanesError:
        ring = b.g.ring
        hyp = {"normal_crossing": False, "regular_sequence": False, "failing_edges": [],
               "independent_hyperplanes": False}
        pred = predict_toric(ring.nvars - 1, b.g.degree())
        if not force:
            return VerificationReport(hyp, None, pred.table, False, [])
        h = Hypersurface(b.f)
        _, table = milnor_resolution(h, order, degree_cap)
        exps = d0(h, order.base if order is not None else GREVLEX, degree_cap).exponents
        return VerificationReport(hyp, table, pred.table, table == pred.table and tuple(exps) == pred.exponents, exps)
    return verify_theorem1(m, order, degree_cap)
