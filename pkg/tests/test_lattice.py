from fractions import Fraction

import pytest

from paravoa.exactnum import QuadScalar
from paravoa.lattice import (
    GramLattice,
    MINUS,
    PLUS,
    ZERO,
    ZeroGamma,
    ZeroVector,
    cone_member,
    discriminant,
    halfplane_basis,
    inner,
    is_basis_pair,
    is_primitive,
    line_intersection,
    perp_primitive,
    side,
)

A2 = GramLattice(gram=((2, -1), (-1, 2)), D=2)
DIAG22 = GramLattice(gram=((2, 0), (0, 2)), D=2)


def test_gram_validation():
    with pytest.raises(ValueError):
        GramLattice(gram=((1, 0), (0, 2)))  # odd diagonal
    with pytest.raises(ValueError):
        GramLattice(gram=((2, 0), (1, 2)))  # asymmetric
    with pytest.raises(ValueError):
        GramLattice(gram=((2, 3), (3, 2)))  # indefinite


def test_inner_a2():
    assert inner(A2, A2.lift((1, 0)), A2.lift((0, 1))) == QuadScalar(-1)


def test_inner_zero():
    assert inner(A2, A2.lift((0, 0)), A2.lift((3, -7))) == QuadScalar(0)


def test_inner_diag24():
    L = GramLattice(gram=((2, 0), (0, 4)))
    # hand oracle: (1,1).G.(1,1) = 2 + 4
    assert inner(L, L.lift((1, 1)), L.lift((1, 1))) == QuadScalar(6)


def test_side_orthogonal():
    g = DIAG22.hvec(0, 1)
    assert side(DIAG22, g, (5, 0)) == ZERO
    assert side(DIAG22, g, (-3, 2)) == PLUS


def test_side_irrational():
    # gamma = (1, sqrt2): (gamma|(-3,2)) = -6 + 4 sqrt2; 32 < 36
    g = (QuadScalar(1, 0, 2), QuadScalar(0, 1, 2))
    assert side(DIAG22, g, (-3, 2)) == MINUS


def test_side_antisymmetry():
    g = DIAG22.hvec(1, 2)
    for v in DIAG22.box(4):
        s = side(DIAG22, g, v)
        assert side(DIAG22, g, (-v[0], -v[1])) == -s
    assert side(DIAG22, g, (0, 0)) == ZERO


def test_line_intersection_axis():
    assert line_intersection(DIAG22, DIAG22.hvec(0, 1)) == (1, 0)


def test_line_intersection_slope():
    # oracle: 2m + 4n = 0 over Z, primitive, first-nonzero positive
    alpha = line_intersection(DIAG22, DIAG22.hvec(1, 2))
    assert alpha == (2, -1)
    assert side(DIAG22, DIAG22.hvec(1, 2), alpha) == ZERO


def test_line_intersection_irrational():
    g = (QuadScalar(1, 0, 2), QuadScalar(0, 1, 2))
    assert line_intersection(DIAG22, g) is None


def test_line_intersection_completeness():
    # every box point on the line is an integer multiple of alpha
    g = DIAG22.hvec(1, 2)
    alpha = line_intersection(DIAG22, g)
    for v in DIAG22.box(10):
        if side(DIAG22, g, v) == ZERO and v != (0, 0):
            assert v[0] % alpha[0] == 0 or v[1] % alpha[1] == 0
            k = v[0] // alpha[0] if alpha[0] else v[1] // alpha[1]
            assert (k * alpha[0], k * alpha[1]) == v


def test_is_primitive():
    assert is_primitive((1, 2))
    assert not is_primitive((2, 4))
    assert is_primitive((-3, 5))
    with pytest.raises(ZeroVector):
        is_primitive((0, 0))


def test_is_basis_pair():
    assert is_basis_pair((1, 0), (0, 1))
    assert not is_basis_pair((1, 0), (1, 2))
    assert is_basis_pair((2, 1), (1, 1))


def test_cone_member():
    assert cone_member((1, 0), (0, 1), (3, 4)) == (3, 4)
    assert cone_member((1, 0), (0, 1), (-1, 0)) is None
    assert cone_member((2, 1), (1, 1), (5, 3)) == (2, 1)


def test_cone_member_brute_force():
    a1, a2 = (2, 1), (1, 1)
    for v in DIAG22.box(6):
        got = cone_member(a1, a2, v)
        found = None
        for m1 in range(0, 20):
            for m2 in range(0, 20):
                if (m1 * a1[0] + m2 * a2[0], m1 * a1[1] + m2 * a2[1]) == v:
                    found = (m1, m2)
        assert got == found


@pytest.mark.parametrize(
    "L,gamma",
    [
        (DIAG22, (Fraction(1), Fraction(0))),
        (DIAG22, (Fraction(1), Fraction(1))),
        (DIAG22, (Fraction(-2), Fraction(3))),
        (A2, (Fraction(1), Fraction(-3))),
    ],
)
def test_halfplane_basis_rational(L, gamma):
    g = L.hvec(*gamma)
    b1, b2 = halfplane_basis(L, g)
    assert side(L, g, b1) == PLUS
    assert side(L, g, b2) == PLUS
    assert is_basis_pair(b1, b2)


def test_halfplane_basis_irrational():
    g = (QuadScalar(1, 0, 2), QuadScalar(0, 1, 2))
    b1, b2 = halfplane_basis(A2, g)
    assert side(A2, g, b1) == PLUS
    assert side(A2, g, b2) == PLUS
    assert is_basis_pair(b1, b2)


def test_halfplane_basis_rejects_zero():
    with pytest.raises(ZeroGamma):
        halfplane_basis(A2, A2.hvec(0, 0))


def test_discriminant_diag22():
    d = discriminant(DIAG22)
    assert d.invariant_factors == (2, 2)
    assert len(d.coset_reps) == 4


def test_discriminant_a2():
    d = discriminant(A2)
    assert d.invariant_factors == (1, 3)
    assert len(d.coset_reps) == 3


def test_discriminant_rank_one_style():
    # Z-alpha with (alpha|alpha) = 2N inside diag(2N, 2): 2N cosets along alpha
    N = 3
    L = GramLattice(gram=((2 * N, 0), (0, 2)))
    d = discriminant(L)
    xs = {r[0] for r in d.coset_reps if r[1] == 0}
    assert xs == {Fraction(i, 2 * N) for i in range(2 * N)}


def test_coset_reps_are_dual_vectors():
    for L in (A2, DIAG22):
        d = discriminant(L)
        g = L.gram
        for (x, y) in d.coset_reps:
            gx = g[0][0] * x + g[0][1] * y
            gy = g[1][0] * x + g[1][1] * y
            assert gx.denominator == 1 and gy.denominator == 1


def test_perp_primitive():
    assert perp_primitive(DIAG22, (1, 0)) == (0, 1)
    b = perp_primitive(A2, (1, 0))
    assert inner(A2, A2.lift((1, 0)), A2.lift(b)) == QuadScalar(0)
    assert is_primitive(b)
