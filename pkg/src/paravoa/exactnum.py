"""Exact scalars over Q and the real quadratic field Q(sqrt(D)).

A QuadScalar is a + b*sqrt(D) with rational a, b and a fixed squarefree
positive integer D.  D = 1 encodes pure rationals (b is forced to 0).
Sign determination is exact: compare a^2 against b^2*D with case analysis
on the signs of a and b, so no floating point ever enters a side test.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]

__all__ = ["QuadScalar", "quad_sign", "DivisionByZero"]


class DivisionByZero(ZeroDivisionError):
    pass


def _squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadScalar:
    """Immutable element a + b*sqrt(D) of Q(sqrt(D))."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a: RationalLike, b: RationalLike = 0, D: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if D == 1:
            a, b = a + b, Fraction(0)
        elif not _squarefree(D):
            raise ValueError(f"D must be 1 or a squarefree integer > 1, got {D}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", D)

    def __setattr__(self, *_):
        raise AttributeError("QuadScalar is immutable")

    # -- helpers -----------------------------------------------------------

    @staticmethod
    def _coerce(x, D: int) -> "QuadScalar":
        if isinstance(x, QuadScalar):
            if x.D != D and x.b != 0 and D != 1:
                raise ValueError(f"mixed quadratic fields: sqrt({x.D}) vs sqrt({D})")
            return x
        return QuadScalar(x, 0, D)

    def _pair(self, other):
        if isinstance(other, QuadScalar):
            if self.b != 0 and other.b != 0 and self.D != other.D:
                raise ValueError(
                    f"mixed quadratic fields: sqrt({self.D}) vs sqrt({other.D})"
                )
            D = self.D if self.b != 0 else (other.D if other.b != 0 else self.D)
            return other, D
        if isinstance(other, (int, Fraction)):
            return QuadScalar(other, 0, self.D), self.D
        return None, None

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a + o.a, self.b + o.b, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a - o.a, self.b - o.b, D)

    def __rsub__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return QuadScalar(o.a - self.a, o.b - self.b, D)

    def __mul__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return QuadScalar(
            self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        # (a + b sqrt D)^-1 = (a - b sqrt D) / (a^2 - b^2 D)
        n = self.a * self.a - self.b * self.b * self.D
        if n == 0:
            raise DivisionByZero("division by zero in Q(sqrt(D))")
        return QuadScalar(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return self * QuadScalar._coerce(o, D).inverse()

    def __rtruediv__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        o, _ = self._pair(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(D)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 vs b^2 D; the larger magnitude wins
        lhs, rhs = a * a, b * b * self.D
        if lhs == rhs:
            return 0  # impossible for squarefree D > 1, possible only via 0
        if a > 0:  # b < 0
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    def __lt__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o, D = self._pair(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        return not self.__le__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- serialization -----------------------------------------------------

    def __repr__(self):
        if self.b == 0:
            return f"QuadScalar({self.a})"
        return f"QuadScalar({self.a}, {self.b}, D={self.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else ''}{self.b}*sqrt({self.D})"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, obj, D: int) -> "QuadScalar":
        if isinstance(obj, dict):
            return cls(Fraction(obj["a"]), Fraction(obj.get("b", "0")), D)
        if isinstance(obj, (list, tuple)):
            return cls(Fraction(str(obj[0])), Fraction(str(obj[1])), D)
        return cls(Fraction(str(obj)), 0, D)


def quad_sign(x: QuadScalar) -> int:
    return x.sign()
