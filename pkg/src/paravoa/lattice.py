"""Rank-two even lattices: exact inner products, hyperplane side tests,
cones, primitivity, half-plane bases, and discriminant-group data.

Lattice points are integer coordinate pairs in a fixed basis; vectors of
the ambient plane carry QuadScalar coordinates in the same basis, so a
single squarefree D per session covers both rational- and
irrational-slope hyperplanes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import QuadScalar, quad_sign

__all__ = [
    "GramLattice",
    "LatVec",
    "HVec",
    "DiscriminantData",
    "Side",
    "PLUS",
    "ZERO",
    "MINUS",
    "ZeroGamma",
    "ZeroVector",
    "DependentGenerators",
    "inner",
    "side",
    "line_intersection",
    "is_primitive",
    "is_basis_pair",
    "cone_member",
    "halfplane_basis",
    "discriminant",
    "perp_primitive",
]

LatVec = tuple[int, int]
HVec = tuple[QuadScalar, QuadScalar]

PLUS, ZERO, MINUS = 1, 0, -1
Side = int


class ZeroGamma(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class DependentGenerators(ValueError):
    pass


@dataclass(frozen=True)
class GramLattice:
    """Rank-two even lattice given by its integer Gram matrix."""

    gram: tuple[tuple[int, int], tuple[int, int]]
    D: int = 1
    names: tuple[str, str] = ("a1", "a2")

    def __post_init__(self):
        g = self.gram
        if g[0][1] != g[1][0]:
            raise ValueError("Gram matrix must be symmetric")
        if g[0][0] % 2 != 0 or g[1][1] % 2 != 0:
            raise ValueError("diagonal Gram entries must be even (even lattice)")
        if not self.positive_definite:
            raise ValueError("Gram matrix must be positive-definite")

    @property
    def positive_definite(self) -> bool:
        g = self.gram
        return g[0][0] > 0 and self.det > 0

    @property
    def det(self) -> int:
        g = self.gram
        return g[0][0] * g[1][1] - g[0][1] * g[1][0]

    def scalar(self, x, y=0) -> QuadScalar:
        return QuadScalar(x, y, self.D)

    def hvec(self, x, y) -> HVec:
        """Build an ambient vector from (rational, sqrt-part) coordinate specs."""
        return (
            x if isinstance(x, QuadScalar) else QuadScalar(x, 0, self.D),
            y if isinstance(y, QuadScalar) else QuadScalar(y, 0, self.D),
        )

    def lift(self, v: LatVec) -> HVec:
        return self.hvec(v[0], v[1])

    def inner_int(self, u: LatVec, v: LatVec) -> int:
        g = self.gram
        return (
            u[0] * g[0][0] * v[0]
            + u[0] * g[0][1] * v[1]
            + u[1] * g[1][0] * v[0]
            + u[1] * g[1][1] * v[1]
        )

    def norm(self, v: LatVec) -> int:
        return self.inner_int(v, v)

    def box(self, radius: int):
        for m in range(-radius, radius + 1):
            for n in range(-radius, radius + 1):
                yield (m, n)

    def to_json(self) -> dict:
        return {"gram": [list(r) for r in self.gram], "D": self.D, "names": list(self.names)}

    @classmethod
    def from_json(cls, obj: dict) -> "GramLattice":
        g = obj["gram"]
        return cls(
            gram=((int(g[0][0]), int(g[0][1])), (int(g[1][0]), int(g[1][1]))),
            D=int(obj.get("D", 1)),
            names=tuple(obj.get("names", ("a1", "a2"))),
        )


@dataclass(frozen=True)
class DiscriminantData:
    invariant_factors: tuple[int, ...]
    coset_reps: tuple[tuple[Fraction, Fraction], ...]


def inner(L: GramLattice, u: HVec, v: HVec) -> QuadScalar:
    """u^T G v, exactly."""
    g = L.gram
    return (
        u[0] * v[0] * g[0][0]
        + u[0] * v[1] * g[0][1]
        + u[1] * v[0] * g[1][0]
        + u[1] * v[1] * g[1][1]
    )


def _check_gamma(L: GramLattice, gamma: HVec):
    if not gamma[0] and not gamma[1]:
        raise ZeroGamma("gamma must be nonzero")


def side(L: GramLattice, gamma: HVec, v) -> Side:
    """Which side of the hyperplane orthogonal to gamma the point v lies on."""
    _check_gamma(L, gamma)
    hv = L.lift(v) if isinstance(v[0], int) else v
    return quad_sign(inner(L, gamma, hv))


def is_primitive(v: LatVec) -> bool:
    if v == (0, 0):
        raise ZeroVector("the zero vector is neither primitive nor imprimitive")
    return math.gcd(abs(v[0]), abs(v[1])) == 1


def _primitivize(v: LatVec) -> LatVec:
    g = math.gcd(abs(v[0]), abs(v[1]))
    v = (v[0] // g, v[1] // g)
    # orientation: first nonzero coordinate positive
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    return v


def line_intersection(L: GramLattice, gamma: HVec) -> Optional[LatVec]:
    """Primitive generator of the lattice points on the hyperplane P(gamma),
    or None when the hyperplane meets the lattice only at the origin."""
    _check_gamma(L, gamma)
    # (gamma|v) = w . v with w = G gamma; split into rational and sqrt parts
    g = L.gram
    w = (
        gamma[0] * g[0][0] + gamma[1] * g[1][0],
        gamma[0] * g[0][1] + gamma[1] * g[1][1],
    )
    constraints = []
    for part in ("a", "b"):
        row = (getattr(w[0], part), getattr(w[1], part))
        if row != (0, 0):
            constraints.append(row)
    if not constraints:
        raise ZeroGamma("gamma is in the radical of the form")
    if len(constraints) == 2:
        # two independent rational constraints force v = 0 unless proportional
        (p, q), (r, s) = constraints
        if p * s - q * r != 0:
            return None
        constraints = [(p, q)]
    p, q = constraints[0]
    # integer kernel of p*x + q*y = 0
    den = math.lcm(p.denominator if isinstance(p, Fraction) else 1,
                   q.denominator if isinstance(q, Fraction) else 1)
    pi, qi = int(p * den), int(q * den)
    v = (-qi, pi)
    return _primitivize(v)


def is_basis_pair(u: LatVec, v: LatVec) -> bool:
    return abs(u[0] * v[1] - u[1] * v[0]) == 1


def cone_member(a1: LatVec, a2: LatVec, v: LatVec) -> Optional[tuple[int, int]]:
    """The unique nonnegative-integer combination v = m1*a1 + m2*a2, if any."""
    det = a1[0] * a2[1] - a1[1] * a2[0]
    if det == 0:
        raise DependentGenerators("cone generators must be linearly independent")
    # Cramer over Q, then integrality and nonnegativity checks
    m1 = Fraction(v[0] * a2[1] - v[1] * a2[0], det)
    m2 = Fraction(a1[0] * v[1] - a1[1] * v[0], det)
    if m1.denominator != 1 or m2.denominator != 1:
        return None
    if m1 < 0 or m2 < 0:
        return None
    return (int(m1), int(m2))


def halfplane_basis(L: GramLattice, gamma: HVec) -> tuple[LatVec, LatVec]:
    """A basis of L lying strictly on the positive side of P(gamma)."""
    _check_gamma(L, gamma)
    e1, e2 = (1, 0), (0, 1)
    s1, s2 = side(L, gamma, e1), side(L, gamma, e2)
    if s1 != ZERO:
        b1 = e1 if s1 == PLUS else (-1, 0)
        other, s_other = e2, s2
    else:
        if s2 == ZERO:
            raise ZeroGamma("gamma orthogonal to the whole lattice")
        b1 = e2 if s2 == PLUS else (0, -1)
        other, s_other = e1, s1
    if s_other == PLUS:
        return (b1, other)
    # other is on the line or on the wrong side: b1 - other is strictly positive
    b2 = (b1[0] - other[0], b1[1] - other[1])
    return (b1, b2)


def _smith_2x2(g) -> tuple[int, ...]:
    """Invariant factors of a nonsingular 2x2 integer matrix."""
    a, b = g[0]
    c, d = g[1]
    det = abs(a * d - b * c)
    entries = [abs(x) for x in (a, b, c, d) if x != 0]
    d1 = entries[0]
    for x in entries[1:]:
        d1 = math.gcd(d1, x)
    d2 = det // d1
    return (d1, d2)


def discriminant(L: GramLattice) -> DiscriminantData:
    """Smith normal form of the Gram matrix and dual-coset representatives.

    Coset representatives are rational coordinate pairs lambda with
    G*lambda integral, pairwise distinct modulo Z^2; there are det(G) of
    them, enumerated canonically with coordinates in [0, 1).
    """
    g = L.gram
    det = L.det
    inv = _smith_2x2(g)
    # lambda = G^{-1} k for k in Z^2; reduce mod Z^2 and dedupe
    seen = []
    reps: list[tuple[Fraction, Fraction]] = []
    for k1 in range(det):
        for k2 in range(det):
            x = Fraction(g[1][1] * k1 - g[0][1] * k2, det) % 1
            y = Fraction(-g[1][0] * k1 + g[0][0] * k2, det) % 1
            if (x, y) not in seen:
                seen.append((x, y))
                reps.append((x, y))
        if len(reps) == det:
            break
    reps.sort()
    return DiscriminantData(invariant_factors=inv, coset_reps=tuple(reps))


def perp_primitive(L: GramLattice, alpha: LatVec) -> LatVec:
    """Primitive integer vector spanning the rational orthogonal complement
    of alpha, oriented with first nonzero coordinate positive."""
    if alpha == (0, 0):
        raise ZeroVector("alpha must be nonzero")
    g = L.gram
    w = (
        alpha[0] * g[0][0] + alpha[1] * g[1][0],
        alpha[0] * g[0][1] + alpha[1] * g[1][1],
    )
    return _primitivize((-w[1], w[0]))
