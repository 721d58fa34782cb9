"""Submonoid descriptors, membership, the type-I/type-II classification
dichotomy, Borel-type construction, and constructive saturation witnesses.

Descriptors are finite: a half-plane direction gamma (with the boundary
line's primitive generator cached), a basis cone, or an explicit
generator list whose classification is box-relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .exactnum import QuadScalar
from .lattice import (
    GramLattice,
    HVec,
    LatVec,
    MINUS,
    PLUS,
    ZERO,
    DependentGenerators,
    cone_member,
    halfplane_basis,
    inner,
    is_basis_pair,
    is_primitive,
    line_intersection,
    side,
)

__all__ = [
    "MonoidDescriptor",
    "ClassificationReport",
    "Inconclusive",
    "SearchBudgetExceeded",
    "PreconditionViolated",
    "member",
    "classify",
    "borel_in",
    "saturate_witnesses",
    "closure_box",
]

TYPE_I = "TYPE_I"
TYPE_II = "TYPE_II"
CONIC = "CONIC"
OTHER = "OTHER"


class Inconclusive(RuntimeError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class MonoidDescriptor:
    kind: str  # "type1" | "type2" | "cone" | "generators"
    gamma: Optional[HVec] = None
    cone: Optional[tuple[LatVec, LatVec]] = None
    generators: tuple[LatVec, ...] = ()

    def boundary_alpha(self, L: GramLattice) -> Optional[LatVec]:
        """Primitive generator of P(gamma) meeting L, with the fixed orientation."""
        if self.gamma is None:
            return None
        return line_intersection(L, self.gamma)

    def validate(self, L: GramLattice):
        if self.kind in ("type1", "type2"):
            if self.gamma is None:
                raise PreconditionViolated(f"{self.kind} descriptor needs gamma")
            if self.kind == "type2" and self.boundary_alpha(L) is None:
                raise PreconditionViolated(
                    "type-II requires the hyperplane to meet the lattice in a line"
                )
        elif self.kind == "cone":
            a1, a2 = self.cone
            if a1[0] * a2[1] - a1[1] * a2[0] == 0:
                raise DependentGenerators("cone generators must be independent")
        elif self.kind == "generators":
            if not self.generators:
                raise PreconditionViolated("empty generator list")
        else:
            raise PreconditionViolated(f"unknown descriptor kind {self.kind!r}")

    def to_json(self) -> dict:
        obj: dict = {"kind": self.kind}
        if self.gamma is not None:
            obj["gamma"] = [self.gamma[0].to_json(), self.gamma[1].to_json()]
        if self.cone is not None:
            obj["cone"] = [list(self.cone[0]), list(self.cone[1])]
        if self.generators:
            obj["generators"] = [list(v) for v in self.generators]
        return obj

    @classmethod
    def from_json(cls, obj: dict, L: GramLattice) -> "MonoidDescriptor":
        kind = obj["kind"]
        gamma = None
        if "gamma" in obj:
            gamma = (
                QuadScalar.from_json(obj["gamma"][0], L.D),
                QuadScalar.from_json(obj["gamma"][1], L.D),
            )
        cone = None
        if "cone" in obj:
            cone = (tuple(obj["cone"][0]), tuple(obj["cone"][1]))
        gens = tuple(tuple(v) for v in obj.get("generators", ()))
        return cls(kind=kind, gamma=gamma, cone=cone, generators=gens)


@dataclass(frozen=True)
class ClassificationReport:
    is_parabolic: bool
    type: str
    alpha: Optional[LatVec] = None
    gamma: Optional[HVec] = None
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        obj = {"parabolic": self.is_parabolic, "type": self.type}
        if self.alpha is not None:
            obj["alpha"] = list(self.alpha)
        if self.gamma is not None:
            obj["gamma"] = [self.gamma[0].to_json(), self.gamma[1].to_json()]
        if self.witnesses:
            obj["witnesses"] = self.witnesses
        return obj


def _on_ray(v: LatVec, alpha: Optional[LatVec]) -> bool:
    """v in Z_{>=0} * alpha (alpha None means only the origin)."""
    if v == (0, 0):
        return True
    if alpha is None:
        return False
    if alpha[0] != 0:
        k, r = divmod(v[0], alpha[0])
        return r == 0 and k > 0 and (k * alpha[1] == v[1])
    if v[0] != 0 or alpha[1] == 0:
        return False
    k, r = divmod(v[1], alpha[1])
    return r == 0 and k > 0


def member(
    L: GramLattice, P: MonoidDescriptor, v: LatVec, budget: int = 32
) -> bool:
    P.validate(L)
    if P.kind == "type1":
        if _on_ray(v, P.boundary_alpha(L)):
            return True
        return side(L, P.gamma, v) == PLUS
    if P.kind == "type2":
        return side(L, P.gamma, v) in (PLUS, ZERO)
    if P.kind == "cone":
        return cone_member(P.cone[0], P.cone[1], v) is not None
    # generators: bounded saturation search
    r = max(abs(v[0]), abs(v[1]), 1)
    if r > budget:
        raise SearchBudgetExceeded(f"|v| exceeds search budget {budget}")
    return v in closure_box(L, list(P.generators), r)


def closure_box(L: GramLattice, gens: list[LatVec], R: int) -> set[LatVec]:
    """Points of the generated submonoid inside [-R, R]^2, saturating
    nonnegative combinations with intermediates confined to a 3R box."""
    if R < 1:
        raise ValueError("R must be >= 1")
    bound = 3 * R
    reached = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = (p[0] + g[0], p[1] + g[1])
                if abs(q[0]) <= bound and abs(q[1]) <= bound and q not in reached:
                    reached.add(q)
                    new.append(q)
        frontier = new
    return {p for p in reached if abs(p[0]) <= R and abs(p[1]) <= R}


def borel_in(L: GramLattice, gamma: HVec) -> MonoidDescriptor:
    """The unique Borel-type submonoid inside the closed positive half-plane
    of gamma, as a type-I descriptor (boundary ray fixed by orientation)."""
    d = MonoidDescriptor(kind="type1", gamma=gamma)
    d.validate(L)
    return d


def classify(
    L: GramLattice, P: MonoidDescriptor, box_radius: int = 8
) -> ClassificationReport:
    P.validate(L)
    if P.kind == "type1":
        return ClassificationReport(
            is_parabolic=True, type=TYPE_I, alpha=P.boundary_alpha(L), gamma=P.gamma
        )
    if P.kind == "type2":
        return ClassificationReport(
            is_parabolic=True, type=TYPE_II, alpha=P.boundary_alpha(L), gamma=P.gamma
        )
    if P.kind == "cone":
        # a basis cone never contains a Borel-type submonoid
        return ClassificationReport(is_parabolic=False, type=CONIC)
    return _classify_generators(L, P, box_radius)


def _classify_generators(
    L: GramLattice, P: MonoidDescriptor, R: int
) -> ClassificationReport:
    """Match the generated monoid, inside the box, against the two closed
    forms of the dichotomy.  Box-relative: may raise Inconclusive."""
    pts = closure_box(L, list(P.generators), R)
    box = set(L.box(R))
    if pts == box:
        # the whole lattice (at box scale): not a proper submonoid
        return ClassificationReport(is_parabolic=False, type=OTHER,
                                    witnesses={"note": "closure fills the box"})
    # candidate boundary directions: primitive points of the closure
    candidates: list[LatVec] = []
    for p in sorted(pts):
        if p != (0, 0) and math.gcd(abs(p[0]), abs(p[1])) == 1 and p not in candidates:
            candidates.append(p)
    g = L.gram
    for a0 in candidates:
        # gamma orthogonal to a0: gamma perp under G, both orientations
        w = (a0[0] * g[0][0] + a0[1] * g[1][0], a0[0] * g[0][1] + a0[1] * g[1][1])
        for s in (1, -1):
            gamma = L.hvec(-s * w[1], s * w[0])
            d2 = MonoidDescriptor(kind="type2", gamma=gamma)
            if all((v in pts) == member(L, d2, v) for v in box):
                return ClassificationReport(
                    is_parabolic=True, type=TYPE_II, alpha=line_intersection(L, gamma),
                    gamma=gamma,
                )
            d1 = MonoidDescriptor(kind="type1", gamma=gamma)
            if all((v in pts) == member(L, d1, v) for v in box):
                return ClassificationReport(
                    is_parabolic=True, type=TYPE_I, alpha=line_intersection(L, gamma),
                    gamma=gamma,
                )
    raise Inconclusive(
        f"generated monoid matches neither closed form inside radius {R}"
    )


def saturate_witnesses(
    L: GramLattice, gamma: HVec, alpha: LatVec
) -> tuple[LatVec, LatVec]:
    """Witness pair (beta, beta') for the saturation argument: both strictly
    on the positive side of gamma, each forming a basis with alpha, and on
    opposite sides of the line R*alpha (encoded by det[alpha, .] = +/-1)."""
    if alpha == (0, 0) or not is_primitive(alpha):
        raise PreconditionViolated("alpha must be primitive")
    if side(L, gamma, alpha) != MINUS:
        raise PreconditionViolated("alpha must lie strictly on the negative side")
    a1, a2 = halfplane_basis(L, gamma)
    # alpha = m*a1 + n*a2 in the half-plane basis
    det = a1[0] * a2[1] - a1[1] * a2[0]
    m = (alpha[0] * a2[1] - alpha[1] * a2[0]) // det
    n = (a1[0] * alpha[1] - a1[1] * alpha[0]) // det

    ga1 = inner(L, gamma, L.lift(a1))
    ga2 = inner(L, gamma, L.lift(a2))
    galpha = ga1 * m + ga2 * n  # < 0

    def pick(rhs: int) -> LatVec:
        # solve m*y - n*x = rhs; shift along (m, n) to make (beta|gamma) > 0
        g0, x0, y0 = _ext_gcd(-n, m)
        assert g0 == 1 or g0 == -1
        if g0 == -1:
            x0, y0 = -x0, -y0
        x0, y0 = x0 * rhs, y0 * rhs
        # (beta|gamma)(t) = c0 + t * galpha, galpha < 0: allowed t < c0 / (-galpha)
        c0 = ga1 * x0 + ga2 * y0
        t = 0
        if (c0 + galpha * t).sign() <= 0:
            while (c0 + galpha * t).sign() <= 0:
                t -= 1
        else:
            # already positive at t=0; smallest |t| is 0
            pass
        x, y = x0 + t * m, y0 + t * n
        bx = x * a1[0] + y * a2[0]
        by = x * a1[1] + y * a2[1]
        return (bx, by)

    beta = pick(1)
    beta_p = pick(-1)
    return beta, beta_p


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g."""
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y
