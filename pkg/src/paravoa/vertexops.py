"""Exact vertex-operator mode actions on lattice Fock modules.

Everything here is exact rational/quadratic arithmetic; no coefficient is
ever silently dropped.  The truncation context only guards the degree of
a requested result: asking for a mode whose target degree exceeds the
ceiling raises instead of truncating, so identity checks can never be
fooled by an over-eager cutoff.

Modes of exponential vectors come from the product form
E^-(-a,z) E^+(-a,z) e_a z^a, with both exponentials expanded exactly
(the annihilation side terminates on its own, the creation side is cut
at the single z-power being extracted).  Modes of dressed words
h(-n_1)...h(-n_k) e^a are reduced to those by the associativity
(iterate) recursion for h(-n)-prefixed vectors, which is a finite sum
here because every state in a positive-definite lattice module has
degree >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import QuadScalar
from .fock import BasisWord, FockSpace, FockState, make_word
from .lattice import (
    GramLattice,
    LatVec,
    PLUS,
    perp_primitive,
    side,
)
from .monoid import MonoidDescriptor, PreconditionViolated, classify, member

__all__ = [
    "Cocycle",
    "TruncationCtx",
    "TruncationOverflow",
    "BadLabel",
    "TensorState",
    "cocycle_for",
    "cocycle_eval",
    "heis_mode",
    "exp_mode",
    "general_mode",
    "word_mode",
    "state_mode",
    "check_commutator",
    "check_lemma35",
    "check_ideal",
    "phi_map",
    "tensor_mode",
    "check_phi_hom",
    "to_adapted",
    "from_adapted",
]


class TruncationOverflow(RuntimeError):
    pass


class BadLabel(ValueError):
    pass


@dataclass(frozen=True)
class TruncationCtx:
    max_degree: int

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")


@dataclass(frozen=True)
class Cocycle:
    """Bilinear sign on the lattice: eps(a,b) = (-1)^(sum a_i b_j T[i][j])."""

    exponent_table: tuple[tuple[int, int], tuple[int, int]]


def cocycle_for(L: GramLattice) -> Cocycle:
    # nontrivial only below the diagonal; diagonal entries are even anyway
    return Cocycle(exponent_table=((0, 0), (L.gram[1][0], 0)))


def cocycle_eval(eps: Cocycle, a: LatVec, b: LatVec) -> int:
    t = eps.exponent_table
    e = sum(a[i] * b[j] * t[i][j] for i in range(2) for j in range(2))
    return -1 if e % 2 else 1


def _binom(m: int, j: int) -> int:
    """Binomial coefficient with arbitrary integer top."""
    if j < 0:
        return 0
    num = 1
    for i in range(j):
        num *= m - i
    return num // math.factorial(j)


def _max_depth(v) -> int:
    md = 0
    for w, _ in v:
        for n, _ in w.modes:
            md = max(md, n)
    return md


def heis_mode(sp: FockSpace, h, m: int, v: FockState, ctx=None) -> FockState:
    """Action of h(m), with h given by coordinates in sp's mode basis."""
    out = FockState()
    if m < 0:
        n = -m
        for w, c in v:
            for d in range(sp.rank):
                if h[d]:
                    nw = make_word(w.modes + ((n, d),), w.label)
                    out = out + FockState.of(nw, c * h[d])
        return out
    if m == 0:
        for w, c in v:
            s = QuadScalar(0)
            for d in range(sp.rank):
                if h[d]:
                    s = s + h[d] * sp.pair_label_mode(w.label, d)
            if s:
                out = out + FockState.of(w, c * s)
        return out
    for w, c in v:
        for idx, (n, d) in enumerate(w.modes):
            if n != m:
                continue
            pairing = QuadScalar(0)
            for e in range(sp.rank):
                if h[e]:
                    pairing = pairing + h[e] * sp.mode_gram[e][d]
            if pairing:
                rest = BasisWord(w.modes[:idx] + w.modes[idx + 1:], w.label)
                out = out + FockState.of(rest, c * pairing * m)
    return out


def _acc(d: dict, p: int, st: FockState):
    cur = d.get(p)
    d[p] = st if cur is None else cur + st


def exp_mode(sp: FockSpace, a, n: int, v: FockState, ctx=None) -> FockState:
    """Coefficient of z^(-n-1) in Y(e^a, z) v."""
    a = tuple(int(x) for x in a)
    if ctx is not None and v:
        half = sp.label_inner(a, a) / 2
        top = max(sp.degree(w) for w, _ in v) + half - n - 1
        if top > ctx.max_degree:
            raise TruncationOverflow(
                f"result degree {top} exceeds ceiling {ctx.max_degree}"
            )
    target = -n - 1
    acoords = sp.label_coords(a)
    out = FockState()
    for w, c in v:
        # E^+(-a, z) = exp(sum_{k>0} (-a(k)/k) z^-k): terminates by itself
        series = {0: FockState.of(w, c)}
        cur = dict(series)
        i = 1
        while cur:
            nxt: dict = {}
            for p, st in cur.items():
                for k in range(1, _max_depth(st) + 1):
                    t = heis_mode(sp, acoords, k, st).scale(Fraction(-1, k))
                    if t:
                        _acc(nxt, p - k, t)
            cur = {p: st.scale(Fraction(1, i)) for p, st in nxt.items() if st}
            for p, st in cur.items():
                _acc(series, p, st)
            i += 1
        # e_a z^a: sign and label shift, z-power shift by (a|label)
        t0 = sp.label_inner(a, w.label)
        if t0.denominator != 1:
            raise BadLabel(f"(a|label) = {t0} is not an integer")
        sgn = sp.eps(a, w.label)
        newlab = tuple(x + y for x, y in zip(a, w.label))
        shifted: dict = {}
        for p, st in series.items():
            moved = FockState(
                {BasisWord(wd.modes, newlab): cc for wd, cc in st}
            ).scale(sgn)
            if moved:
                _acc(shifted, p + int(t0), moved)
        # E^-(-a, z) = exp(sum_{m>0} (a(-m)/m) z^m): only the powers that
        # land exactly on the target matter, and they only grow
        for p, st in shifted.items():
            need = target - p
            if need < 0:
                continue
            if need == 0:
                out = out + st
                continue
            cur = {0: st}
            i = 1
            while cur:
                nxt = {}
                for q, s2 in cur.items():
                    for mm in range(1, need - q + 1):
                        t = heis_mode(sp, acoords, -mm, s2).scale(Fraction(1, mm))
                        if t:
                            _acc(nxt, q + mm, t)
                cur = {q: s3.scale(Fraction(1, i)) for q, s3 in nxt.items() if s3}
                got = cur.get(need)
                if got:
                    out = out + got
                i += 1
    return out


def _unit(sp: FockSpace, d: int):
    return tuple(Fraction(1) if e == d else Fraction(0) for e in range(sp.rank))


def _word_mode_w(sp: FockSpace, u: BasisWord, k: int, w: BasisWord) -> FockState:
    cache = sp.__dict__.setdefault("_mode_cache", {})
    key = (u, k, w)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not u.modes:
        if not any(u.label):
            res = FockState.of(w) if k == -1 else FockState()
        else:
            res = exp_mode(sp, u.label, k, FockState.of(w))
        cache[key] = res
        return res
    n, d = u.modes[0]
    rest = BasisWord(u.modes[1:], u.label)
    hd = _unit(sp, d)
    du = sp.degree(rest)
    dw = sp.degree(w)
    res = FockState()
    # (h(-n)u')_k = sum_j C(n+j-1,j) [ h(-n-j) u'_{k+j}
    #                                  - (-1)^n u'_{-n+k-j} h(j) ]
    jmax = du + dw - k - 1
    j = 0
    while j <= jmax:
        inner = _word_mode_w(sp, rest, k + j, w)
        if inner:
            res = res + heis_mode(sp, hd, -(n + j), inner).scale(_binom(n + j - 1, j))
        j += 1
    sgn = -1 if n % 2 else 1
    for j in range(0, _max_depth(FockState.of(w)) + 1):
        hv = heis_mode(sp, hd, j, FockState.of(w))
        if hv:
            t = word_mode(sp, rest, -n + k - j, hv)
            res = res - t.scale(sgn * _binom(n + j - 1, j))
    cache[key] = res
    return res


def word_mode(sp: FockSpace, u: BasisWord, k: int, v: FockState) -> FockState:
    out = FockState()
    for w, c in v:
        out = out + _word_mode_w(sp, u, k, w).scale(c)
    return out


def state_mode(sp: FockSpace, a: FockState, k: int, v: FockState) -> FockState:
    out = FockState()
    for u, c in a:
        out = out + word_mode(sp, u, k, v).scale(c)
    return out


def general_mode(sp: FockSpace, u: BasisWord, n: int, v: FockState,
                 ctx: Optional[TruncationCtx] = None) -> FockState:
    """Coefficient of z^(-n-1) in Y(u, z) v for an arbitrary basis word u."""
    if ctx is not None and v:
        top = sp.degree(u) + max(sp.degree(w) for w, _ in v) - n - 1
        if top > ctx.max_degree:
            raise TruncationOverflow(
                f"result degree {top} exceeds ceiling {ctx.max_degree}"
            )
    return word_mode(sp, u, n, v)


def check_commutator(sp: FockSpace, a: FockState, b: FockState, m: int, n: int,
                     v: FockState, ctx: Optional[TruncationCtx] = None) -> FockState:
    """a_m b_n v - b_n a_m v - sum_j C(m,j) (a_j b)_{m+n-j} v; zero iff the
    commutator identity holds on this instance."""
    lhs = state_mode(sp, a, m, state_mode(sp, b, n, v)) - state_mode(
        sp, b, n, state_mode(sp, a, m, v)
    )
    da = max((sp.degree(w) for w, _ in a), default=Fraction(0))
    db = max((sp.degree(w) for w, _ in b), default=Fraction(0))
    rhs = FockState()
    j = 0
    while j <= da + db - 1:
        ajb = state_mode(sp, a, j, b)
        if ajb:
            rhs = rhs + state_mode(sp, ajb, m + n - j, v).scale(_binom(m, j))
        j += 1
    return lhs - rhs


def check_lemma35(sp: FockSpace, beta, m: int, u: BasisWord, v: FockState,
                  ctx: Optional[TruncationCtx] = None) -> dict:
    """Residuals beta(m) u_n v - u_n beta(m) v over every n giving a result
    of degree in [0, ctx.max_degree]; requires beta orthogonal to u's modes
    and label."""
    for _, d in u.modes:
        p = sum((beta[e] * sp.mode_gram[e][d] for e in range(sp.rank)),
                QuadScalar(0))
        if p:
            raise PreconditionViolated("beta must be orthogonal to u's mode directions")
    lp = sum((beta[d] * sp.pair_label_mode(u.label, d) for d in range(sp.rank)),
             QuadScalar(0))
    if lp:
        raise PreconditionViolated("beta must be orthogonal to u's label")
    cap = ctx.max_degree if ctx is not None else 6
    du = sp.degree(u)
    dv = max((sp.degree(w) for w, _ in v), default=Fraction(0))
    out = {}
    # n ranges so that deg(u_n v) and deg(u_n beta(m) v) stay within the cap
    nmin = math.ceil(du + dv - 1 - cap)
    nmax = math.floor(du + dv - 1 + max(-m, 0))
    for n in range(nmin, nmax + 1):
        r = heis_mode(sp, beta, m, word_mode(sp, u, n, v)) - word_mode(
            sp, u, n, heis_mode(sp, beta, m, v)
        )
        out[n] = r
    return out


def check_ideal(L: GramLattice, P: MonoidDescriptor,
                ctx: TruncationCtx, sample_degree: int = 2) -> dict:
    """Spot check that modes of V_P elements keep ideal elements inside the
    ideal: labels of a_n b stay in S (= P minus 0 for type I, the open
    positive side for type II)."""
    rep = classify(L, P)
    if not rep.is_parabolic:
        raise PreconditionViolated("P must be parabolic")
    gamma = rep.gamma

    def in_S(lab) -> bool:
        if rep.type == "TYPE_I":
            return lab != (0, 0) and member(L, P, lab)
        return side(L, gamma, lab) == PLUS

    sp = FockSpace.full_lattice(L)
    from .fock import MONOID, enumerate_basis

    a_words = []
    b_words = []
    for d in range(sample_degree + 1):
        for w in enumerate_basis(L, MONOID(P), d):
            a_words.append(w)
            if in_S(w.label):
                b_words.append(w)
    instances = 0
    failures = []
    for a in a_words:
        for b in b_words:
            da, db = sp.degree(a), sp.degree(b)
            nmin = math.ceil(da + db - 1 - ctx.max_degree)
            for n in range(nmin, int(da + db)):
                res = general_mode(sp, a, n, FockState.of(b), ctx)
                instances += 1
                for w, _ in res:
                    if not in_S(w.label):
                        failures.append(
                            {"a": a.to_str(), "b": b.to_str(), "n": n,
                             "label": list(w.label)}
                        )
    return {"check": "ideal", "instances": instances, "failures": failures}


# -- tensor factorization ---------------------------------------------------


class TensorState:
    """Sparse element of a two-factor tensor product of Fock modules."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        t = {}
        if terms:
            for k, c in terms.items():
                c = c if isinstance(c, QuadScalar) else QuadScalar(c)
                if c:
                    t[k] = c
        self.terms = t

    @classmethod
    def of(cls, w1: BasisWord, w2: BasisWord, coeff=1) -> "TensorState":
        return cls({(w1, w2): coeff})

    def __iter__(self):
        return iter(self.terms.items())

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k)
            s = c if s is None else s + c
            if s:
                t[k] = s
            elif k in t:
                del t[k]
        out = TensorState.__new__(TensorState)
        out.terms = t
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = c if isinstance(c, QuadScalar) else QuadScalar(c)
        if not c:
            return TensorState()
        out = TensorState.__new__(TensorState)
        out.terms = {k: x * c for k, x in self.terms.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, TensorState) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "TensorState(0)"
        return " + ".join(
            f"({c})*{w1.to_str(('b',))}(x){w2.to_str(('a',))}"
            for (w1, w2), c in self.terms.items()
        )


def phi_map(v: FockState) -> TensorState:
    """Split adapted-basis words: direction-0 modes to the left Heisenberg
    factor, direction-1 modes plus the label to the right lattice factor."""
    out = TensorState()
    for w, c in v:
        left = tuple((n, 0) for n, d in w.modes if d == 0)
        right = tuple((n, 0) for n, d in w.modes if d == 1)
        if len(w.label) != 1:
            raise BadLabel("adapted words carry a single integer label coordinate")
        out = out + TensorState.of(
            BasisWord(left, ()), BasisWord(right, (w.label[0],)), c
        )
    return out


def tensor_mode(sp1: FockSpace, sp2: FockSpace, A: TensorState, n: int,
                B: TensorState) -> TensorState:
    """(x (x) y)_n (v (x) w) = sum_i x_i v (x) y_{n-i-1} w."""
    out = TensorState()
    for (x, y), ca in A:
        for (v, w), cb in B:
            c = ca * cb
            dxv = sp1.degree(x) + sp1.degree(v)
            dyw = sp2.degree(y) + sp2.degree(w)
            i = math.ceil(n - dyw)
            while i <= dxv - 1:
                left = _word_mode_w(sp1, x, i, v)
                if left:
                    rightv = _word_mode_w(sp2, y, n - i - 1, w)
                    if rightv:
                        for wl, cl in left:
                            for wr, cr in rightv:
                                out = out + TensorState.of(wl, wr, c * cl * cr)
                i += 1
    return out


def _solve2(col1, col2, rhs) -> tuple[Fraction, Fraction]:
    det = col1[0] * col2[1] - col2[0] * col1[1]
    if det == 0:
        raise ValueError("degenerate basis")
    x = Fraction(rhs[0] * col2[1] - col2[0] * rhs[1], det)
    y = Fraction(col1[0] * rhs[1] - rhs[0] * col1[1], det)
    return x, y


def from_adapted(L: GramLattice, alpha: LatVec, beta: LatVec,
                 v: FockState) -> FockState:
    """Rewrite adapted-basis states (modes beta, alpha; labels p) as full
    lattice-basis states (modes a1, a2; labels p*alpha)."""
    dirs = (beta, alpha)
    out = FockState()
    for w, c in v:
        expanded = [((), c)]
        for nn, d in w.modes:
            vec = dirs[d]
            nxt = []
            for modes, coeff in expanded:
                for i in (0, 1):
                    if vec[i]:
                        nxt.append((modes + ((nn, i),), coeff * vec[i]))
            expanded = nxt
        p = w.label[0]
        lab = (p * alpha[0], p * alpha[1])
        for modes, coeff in expanded:
            out = out + FockState.of(make_word(modes, lab), coeff)
    return out


def to_adapted(L: GramLattice, alpha: LatVec, beta: LatVec,
               v: FockState) -> FockState:
    """Inverse of from_adapted; BadLabel if some label is not in Z*alpha."""
    coeffs = [_solve2(beta, alpha, e) for e in ((1, 0), (0, 1))]
    out = FockState()
    for w, c in v:
        lab = w.label
        if alpha[0]:
            p = Fraction(lab[0], alpha[0])
        else:
            p = Fraction(lab[1], alpha[1])
        if p.denominator != 1 or (p * alpha[0], p * alpha[1]) != lab:
            raise BadLabel(f"label {lab} is not an integer multiple of {alpha}")
        expanded = [((), c)]
        for nn, d in w.modes:
            xy = coeffs[d]
            nxt = []
            for modes, coeff in expanded:
                for i in (0, 1):
                    if xy[i]:
                        nxt.append((modes + ((nn, i),), coeff * xy[i]))
            expanded = nxt
        for modes, coeff in expanded:
            out = out + FockState.of(make_word(modes, (int(p),)), coeff)
    return out


def check_phi_hom(L: GramLattice, alpha: LatVec, degree_cap: int,
                  ctx: TruncationCtx) -> dict:
    """Verify the tensor-factorization map on the half-lattice subalgebra.

    Left route: modes computed with the full rank-two engine in the lattice
    basis, converted to the adapted basis, then split.  Right route: the
    split inputs convolved with two independent rank-one engines.  Also
    checks the conformal vector image and per-degree dimension match.
    """
    beta = perp_primitive(L, alpha)
    if L.inner_int(alpha, beta) != 0:
        raise PreconditionViolated("no rational orthogonal direction")
    adapted = FockSpace.hyperplane_adapted(L, alpha, beta)
    full = FockSpace.full_lattice(L)
    sp1 = FockSpace.rank_one_heisenberg(L.norm(beta))
    sp2 = FockSpace.rank_one_lattice(
        L.norm(alpha), eps_exp=alpha[0] * alpha[1] * L.gram[1][0]
    )
    twoN = L.norm(alpha)
    pmax = 0
    while (pmax + 1) ** 2 * twoN <= 2 * degree_cap:
        pmax += 1
    labels = [(p,) for p in range(-pmax, pmax + 1)]

    basis = []
    for d in range(degree_cap + 1):
        basis.extend(adapted.basis(d, labels=labels))

    instances = 0
    failures = []
    for u in basis:
        fu = from_adapted(L, alpha, beta, FockState.of(u))
        pu = phi_map(FockState.of(u))
        for v in basis:
            fv = from_adapted(L, alpha, beta, FockState.of(v))
            pv = phi_map(FockState.of(v))
            du, dv = adapted.degree(u), adapted.degree(v)
            nmin = math.ceil(du + dv - 1 - ctx.max_degree)
            for n in range(nmin, int(du + dv)):
                res = FockState()
                for w, c in fv:
                    res = res + state_mode(full, fu, n, FockState.of(w)).scale(c)
                lhs = phi_map(to_adapted(L, alpha, beta, res))
                rhs = tensor_mode(sp1, sp2, pu, n, pv)
                instances += 1
                if lhs != rhs:
                    failures.append({"u": u.to_str(), "v": v.to_str(), "n": n})

    omega_img = phi_map(adapted.virasoro())
    expect = TensorState()
    vac2 = sp2.word((), (0,))
    for w, c in sp1.virasoro():
        expect = expect + TensorState.of(w, vac2, c)
    vac1 = sp1.word(())
    for w, c in sp2.virasoro():
        expect = expect + TensorState.of(vac1, w, c)
    omega_ok = omega_img == expect

    dims_ok = True
    for d in range(degree_cap + 1):
        left = len(adapted.basis(d, labels=labels))
        # right side: products of factor dimensions at complementary degrees
        right = sum(
            len(sp1.basis(d1)) * len(sp2.basis(d - d1, labels=labels))
            for d1 in range(d + 1)
        )
        if left != right:
            dims_ok = False
    return {
        "check": "phi_hom",
        "instances": instances,
        "failures": failures,
        "omega_ok": omega_ok,
        "dims_ok": dims_ok,
    }
