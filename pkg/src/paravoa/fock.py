"""Graded Fock bases and exact sparse states.

Basis words are b_{i1}(-n1)...b_{ik}(-nk) e^label with modes in a fixed
h-basis and the label a lattice point (or a fixed ambient vector for a
single Heisenberg module).  Mode directions are the lattice basis itself,
so all structure constants stay rational; orthonormalization shows up
only inside the conformal vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exactnum import QuadScalar
from .lattice import GramLattice, HVec, LatVec, inner
from .monoid import MonoidDescriptor, member

__all__ = [
    "BasisWord",
    "FockState",
    "FockSpace",
    "FULL_L",
    "MONOID",
    "SINGLE",
    "enumerate_basis",
    "weight",
    "state_arith",
    "make_word",
]

FULL_L = "FULL_L"


@dataclass(frozen=True)
class MONOID:
    P: MonoidDescriptor
    budget: int = 64


@dataclass(frozen=True)
class SINGLE:
    lam: HVec


@dataclass(frozen=True)
class BasisWord:
    """Canonical word: modes sorted descending in n (ties by direction)."""

    modes: tuple[tuple[int, int], ...]  # (n, direction), n >= 1
    label: tuple

    def mode_degree(self) -> int:
        return sum(n for n, _ in self.modes)

    def to_str(self, names=("a1", "a2")) -> str:
        parts = [f"{names[d]}(-{n})" for n, d in self.modes]
        lab = ",".join(str(x) for x in self.label)
        parts.append(f"e[{lab}]")
        return "".join(parts)


def make_word(modes, label) -> BasisWord:
    ms = tuple(sorted(((int(n), int(d)) for n, d in modes), key=lambda p: (-p[0], p[1])))
    for n, _ in ms:
        if n < 1:
            raise ValueError("word modes must be creation modes b(-n), n >= 1")
    return BasisWord(modes=ms, label=tuple(label))


class FockState:
    """Finite linear combination of basis words with QuadScalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        t = {}
        if terms:
            for w, c in terms.items():
                c = c if isinstance(c, QuadScalar) else QuadScalar(c)
                if c:
                    t[w] = c
        self.terms = t

    @classmethod
    def of(cls, word: BasisWord, coeff=1) -> "FockState":
        return cls({word: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, w: BasisWord) -> QuadScalar:
        return self.terms.get(w, QuadScalar(0))

    def __add__(self, other: "FockState") -> "FockState":
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w)
            s = c if s is None else s + c
            if s:
                t[w] = s
            elif w in t:
                del t[w]
        out = FockState.__new__(FockState)
        out.terms = t
        return out

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scale(-1)

    def scale(self, c) -> "FockState":
        c = c if isinstance(c, QuadScalar) else QuadScalar(c)
        if not c:
            return FockState()
        out = FockState.__new__(FockState)
        out.terms = {w: x * c for w, x in self.terms.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, FockState) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "FockState(0)"
        bits = [f"({c})*{w.to_str()}" for w, c in sorted(
            self.terms.items(), key=lambda p: (p[0].label, p[0].modes))]
        return " + ".join(bits)


def state_arith(x: FockState, y: FockState, c) -> FockState:
    """x + c*y with zero pruning."""
    return x + y.scale(c)


def _mode_words(rank: int, m: int):
    """All canonical mode tuples of total degree m in `rank` directions."""

    def rec(remaining, max_n, min_dir):
        if remaining == 0:
            yield ()
            return
        for n in range(min(remaining, max_n), 0, -1):
            start = min_dir if n == max_n else 0
            for d in range(start, rank):
                for rest in rec(remaining - n, n, d):
                    yield ((n, d),) + rest

    yield from rec(m, m, 0)


def _labels_up_to(L: GramLattice, maxnorm: int) -> list[LatVec]:
    """All lattice points with (v|v) <= maxnorm, sorted."""
    R = 1
    while True:
        ring = [
            (m, n)
            for m in range(-R, R + 1)
            for n in range(-R, R + 1)
            if max(abs(m), abs(n)) == R
        ]
        # positive-definite: the form's minimum on the sup-norm ring scales
        # like R^2, so once a ring clears maxnorm every larger one does
        if min(L.norm(v) for v in ring) > maxnorm:
            break
        R += 1
    return sorted(v for v in L.box(R) if L.norm(v) <= maxnorm)


def enumerate_basis(L: GramLattice, ambient, degree: int) -> list[BasisWord]:
    """All basis words of exact (integer) degree, in a deterministic order.

    FULL_L and MONOID(P) grade by total weight; SINGLE(lam) grades by the
    Heisenberg degree above the bottom level of M(1, lam).
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if isinstance(ambient, SINGLE):
        lam = tuple(ambient.lam)
        return [BasisWord(modes=w, label=lam) for w in _mode_words(2, degree)]
    out: list[BasisWord] = []
    for v in _labels_up_to(L, 2 * degree):
        if isinstance(ambient, MONOID):
            if not member(L, ambient.P, v, budget=ambient.budget):
                continue
        elif ambient != FULL_L:
            raise ValueError(f"unknown ambient {ambient!r}")
        half = L.norm(v) // 2
        for w in _mode_words(2, degree - half):
            out.append(BasisWord(modes=w, label=v))
    return out


def weight(L: GramLattice, w: BasisWord) -> QuadScalar:
    """Sum of mode depths plus (label|label)/2."""
    lab = w.label
    if lab and isinstance(lab[0], QuadScalar):
        nn = inner(L, lab, lab)
    else:
        nn = QuadScalar(L.inner_int(lab, lab))
    return QuadScalar(w.mode_degree()) + nn * Fraction(1, 2)


class FockSpace:
    """A Fock module presentation the operator engine can run on.

    Modes live in an r-element h-basis with rational pairwise products
    `mode_gram`; labels are integer combinations of s generator vectors
    whose mode-basis coordinates are `gen_coords`.  The cocycle is the
    bilinear sign (-1)^(sum a_i b_j eps_table[i][j]) on labels.
    """

    def __init__(self, mode_gram, gen_coords=(), eps_table=(), names=None):
        self.rank = len(mode_gram)
        self.mode_gram = tuple(
            tuple(Fraction(x) for x in row) for row in mode_gram
        )
        self.gen_coords = tuple(
            tuple(Fraction(x) for x in row) for row in gen_coords
        )
        self.label_rank = len(self.gen_coords)
        self.eps_table = tuple(tuple(int(x) for x in row) for row in eps_table)
        if names is None:
            names = tuple(f"b{i + 1}" for i in range(self.rank))
        self.names = tuple(names)
        self.zero_label = (0,) * self.label_rank

    # -- constructors -------------------------------------------------

    @classmethod
    def full_lattice(cls, L: GramLattice) -> "FockSpace":
        g = L.gram
        eps = ((0, 0), (g[1][0], 0))  # eps(a_i, a_j) nontrivial only for i > j
        return cls(mode_gram=g, gen_coords=((1, 0), (0, 1)), eps_table=eps,
                   names=L.names)

    @classmethod
    def hyperplane_adapted(cls, L: GramLattice, alpha: LatVec,
                           beta: LatVec) -> "FockSpace":
        """Modes (beta, alpha) with (beta|alpha) = 0; labels Z*alpha."""
        if L.inner_int(alpha, beta) != 0:
            raise ValueError("beta must be orthogonal to alpha")
        mg = ((L.norm(beta), 0), (0, L.norm(alpha)))
        t = alpha[0] * alpha[1] * L.gram[1][0]  # restriction of the ambient sign
        return cls(mode_gram=mg, gen_coords=((0, 1),), eps_table=((t,),),
                   names=("b", "a"))

    @classmethod
    def rank_one_heisenberg(cls, norm, name="b") -> "FockSpace":
        return cls(mode_gram=((norm,),), names=(name,))

    @classmethod
    def rank_one_lattice(cls, norm, eps_exp=0, name="a") -> "FockSpace":
        return cls(mode_gram=((norm,),), gen_coords=((1,),),
                   eps_table=((eps_exp,),), names=(name,))

    # -- pairings -----------------------------------------------------

    def mode_inner(self, i: int, j: int) -> Fraction:
        return self.mode_gram[i][j]

    def label_coords(self, label) -> tuple[Fraction, ...]:
        """Mode-basis coordinates of the label vector."""
        out = [Fraction(0)] * self.rank
        for lj, row in zip(label, self.gen_coords):
            for r in range(self.rank):
                out[r] += lj * row[r]
        return tuple(out)

    def pair_coords(self, x, y) -> Fraction:
        s = Fraction(0)
        for i in range(self.rank):
            if not x[i]:
                continue
            for j in range(self.rank):
                s += x[i] * y[j] * self.mode_gram[i][j]
        return s

    def label_inner(self, l1, l2) -> Fraction:
        return self.pair_coords(self.label_coords(l1), self.label_coords(l2))

    def pair_label_mode(self, label, i: int) -> Fraction:
        c = self.label_coords(label)
        return sum((c[j] * self.mode_gram[j][i] for j in range(self.rank)),
                   Fraction(0))

    def eps(self, l1, l2) -> int:
        e = 0
        for i, a in enumerate(l1):
            for j, b in enumerate(l2):
                e += a * b * self.eps_table[i][j]
        return -1 if e % 2 else 1

    # -- words and states ---------------------------------------------

    def word(self, modes=(), label=None) -> BasisWord:
        if label is None:
            label = self.zero_label
        return make_word(modes, label)

    def degree(self, w: BasisWord) -> Fraction:
        return Fraction(w.mode_degree()) + self.label_inner(w.label, w.label) / 2

    def state_degree(self, s: FockState) -> Optional[Fraction]:
        """Common degree of a homogeneous state, None if empty."""
        degs = {self.degree(w) for w in s.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("state is not homogeneous")
        return degs.pop()

    def vacuum(self) -> FockState:
        return FockState.of(self.word())

    def exp_state(self, label) -> FockState:
        return FockState.of(self.word((), label))

    def virasoro(self) -> FockState:
        """omega = 1/2 sum_ij (Q^-1)[i][j] b_i(-1) b_j(-1) vac."""
        inv = _invert(self.mode_gram)
        out = FockState()
        for i in range(self.rank):
            for j in range(self.rank):
                c = inv[i][j] * Fraction(1, 2)
                if c:
                    w = self.word(((1, i), (1, j)))
                    out = out + FockState.of(w, c)
        return out

    def basis(self, degree: int, labels=((),)) -> list[BasisWord]:
        """Words of exact degree with labels drawn from the given tuples."""
        out = []
        for lab in labels:
            half = self.label_inner(lab, lab) / 2
            m = Fraction(degree) - half
            if m.denominator != 1 or m < 0:
                continue
            for w in _mode_words(self.rank, int(m)):
                out.append(BasisWord(modes=w, label=tuple(lab)))
        return out


def _invert(q):
    r = len(q)
    if r == 1:
        if not q[0][0]:
            raise ZeroDivisionError("degenerate mode form")
        return ((1 / Fraction(q[0][0]),),)
    if r == 2:
        det = q[0][0] * q[1][1] - q[0][1] * q[1][0]
        if not det:
            raise ZeroDivisionError("degenerate mode form")
        return (
            (q[1][1] / det, -q[0][1] / det),
            (-q[1][0] / det, q[0][0] / det),
        )
    raise NotImplementedError("rank > 2 not needed")
