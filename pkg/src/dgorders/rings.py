"""Coefficient rings for exact linear algebra.

Every computation in this package is exact: elements of the rationals, the
integers and the localized integers are `fractions.Fraction` (or `int` for the
integers), elements of prime fields and residue rings are `int` in
`range(modulus)`.  A ring object only provides the arithmetic; values stay
plain Python objects so that matrices are cheap lists of lists.
"""

from __future__ import annotations

from fractions import Fraction


class RingError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class CoefficientRing:
    """Base class.  Subclasses fix the element representation."""

    is_field = False
    characteristic = 0

    def coerce(self, value):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return a == b

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))


class Rationals(CoefficientRing):
    is_field = True
    characteristic = 0

    def coerce(self, value):
        return Fraction(value)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_unit(self, a) -> bool:
        return a != 0

    def inv(self, a):
        if a == 0:
            raise RingError("division by zero in Q")
        return 1 / Fraction(a)

    def __repr__(self):
        return "Q"


class Integers(CoefficientRing):
    is_field = False
    characteristic = 0

    def coerce(self, value):
        f = Fraction(value)
        if f.denominator != 1:
            raise RingError(f"{value!r} is not an integer")
        return int(f)

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise RingError(f"{a} is not a unit of Z")
        return a

    def __repr__(self):
        return "Z"


class LocalizedIntegers(CoefficientRing):
    """Z localized at an odd prime p: rationals with p-coprime denominator."""

    is_field = False
    characteristic = 0

    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise RingError(f"localization prime must be odd, got {p}")
        self.p = p

    def coerce(self, value):
        f = Fraction(value)
        if f.denominator % self.p == 0:
            raise RingError(f"{value!r} has denominator divisible by {self.p}")
        return f

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_unit(self, a) -> bool:
        return a != 0 and Fraction(a).numerator % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not a unit of Z_({self.p})")
        return 1 / Fraction(a)

    def __repr__(self):
        return f"Z_({self.p})"


class ResidueRing(CoefficientRing):
    """Z/mZ with elements in range(m)."""

    is_field = False

    def __init__(self, m: int):
        if m < 2:
            raise RingError(f"modulus must be >= 2, got {m}")
        self.m = m
        self.characteristic = m

    def coerce(self, value):
        f = Fraction(value)
        den = f.denominator % self.m
        num = f.numerator % self.m
        if den == 1:
            return num
        return (num * self.inv(den)) % self.m

    def zero(self):
        return 0

    def one(self):
        return 1 % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def is_unit(self, a) -> bool:
        from math import gcd

        return gcd(a, self.m) == 1

    def inv(self, a):
        if not self.is_unit(a % self.m):
            raise RingError(f"{a} is not a unit of Z/{self.m}")
        return pow(a, -1, self.m)

    def elements(self):
        return range(self.m)

    def __repr__(self):
        return f"Z/{self.m}"


class PrimeField(ResidueRing):
    """F_p for an odd prime p (characteristic 2 is out of scope)."""

    is_field = True

    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise RingError(f"prime field characteristic must be odd, got {p}")
        super().__init__(p)
        self.p = p

    def __repr__(self):
        return f"F_{self.p}"


QQ = Rationals()
ZZ = Integers()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def Zloc(p: int) -> LocalizedIntegers:
    return LocalizedIntegers(p)
