"""Jacobian ideal, Milnor algebra resolution and the syzygy module D_0(f)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .groebner import FreeModuleSpec, ModuleElement, ModuleOrder, syzygies
from .resolution import BettiTable, GradedResolution, betti_table, min_generators, minimize, resolve
from .ring import GREVLEX, NonHomogeneousError, Polynomial, TermOrder


@dataclass(frozen=True)
class Hypersurface:
    """V: f = 0 for a nonzero homogeneous f.  Reducedness is not checked."""

    f: Polynomial
    partials: Tuple[Polynomial, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = self.f.degree()
        if d is None:
            raise NonHomogeneousError("a hypersurface needs a nonzero homogeneous polynomial")
        if d < 1:
            raise ValueError("a hypersurface needs degree >= 1")
        object.__setattr__(self, "partials", tuple(self.f.derivative(i) for i in range(self.f.ring.nvars)))

    @property
    def ring(self):
        return self.f.ring

    @property
    def d(self) -> int:
        return self.f.degree()

    @property
    def n(self) -> int:
        return self.ring.nvars - 1

    def partials_consistent(self) -> bool:
        return all(p == self.f.derivative(i) for i, p in enumerate(self.partials))


@dataclass
class SyzygyModuleReport:
    generators: List[ModuleElement]
    exponents: List[int]

    @property
    def m(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "exponents": list(self.exponents),
            "generators": [[str(c) for c in g.components] for g in self.generators],
        }


def jacobian_ideal(h: Hypersurface) -> List[ModuleElement]:
    """The partials f_0..f_n as elements of the rank-one module S."""
    if all(p.is_zero() for p in h.partials):
        raise ValueError("all partial derivatives vanish; the Jacobian ideal is zero")
    S = FreeModuleSpec(h.ring, (0,))
    return [ModuleElement.from_components(S, [p]) for p in h.partials]


def derivation_module(h: Hypersurface) -> FreeModuleSpec:
    """S^{n+1} with all shifts 0: a syzygy's degree is its component degree."""
    return FreeModuleSpec.free(h.ring, h.ring.nvars, 0)


def annihilates(sigma: ModuleElement, h: Hypersurface) -> bool:
    return sigma.dot(h.partials).is_zero()


def d0(h: Hypersurface, base: TermOrder = GREVLEX, degree_cap: Optional[int] = None) -> SyzygyModuleReport:
    """Minimal generators and exponents of D_0(f) = {a : sum a_i f_i = 0}."""
    J = jacobian_ideal(h)
    nv = h.ring.nvars
    cap = None if degree_cap is None else degree_cap + h.d - 1
    syz = syzygies(J, base, shifts=(h.d - 1,) * nv, degree_cap=cap)
    gens = min_generators(syz, ModuleOrder(base, "top"))
    target = derivation_module(h)
    gens = [g.retwist(target) for g in gens]
    for g in gens:
        if not annihilates(g, h):
            raise ArithmeticError("computed syzygy does not annihilate the partials")
    return SyzygyModuleReport(gens, [g.degree() for g in gens])


def koszul_syzygy(h: Hypersurface, i: int, j: int) -> ModuleElement:
    """Slot i holds f_j, slot j holds -f_i."""
    comps = [h.ring.zero()] * h.ring.nvars
    comps[i] = h.partials[j]
    comps[j] = -h.partials[i]
    return ModuleElement.from_components(derivation_module(h), comps)


def milnor_resolution(h: Hypersurface, order: Optional[ModuleOrder] = None,
                      degree_cap: Optional[int] = None) -> Tuple[GradedResolution, BettiTable]:
    """Minimal graded free resolution of M(f) = S/J_f and its Betti table."""
    res = resolve(jacobian_ideal(h), h.ring.nvars, order, degree_cap)
    if not res.complete:
        raise ArithmeticError("Schreyer iteration did not terminate within nvars steps")
    res = minimize(res)
    return res, betti_table(res)


def exponents_consistent(h: Hypersurface, report: SyzygyModuleReport, table: BettiTable) -> Optional[bool]:
    """Step-2 twists equal {d_j + e_1} when J_f is minimally generated by
    all n+1 partials in the single degree e_1.

    Returns None when that precondition fails (no claim is made then).
    """
    step1 = table.twists(1)
    if len(step1) != h.ring.nvars or len(set(step1)) != 1:
        return None
    e1 = step1[0]
    return table.twists(2) == sorted(d + e1 for d in report.exponents)
