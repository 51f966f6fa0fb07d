"""Fixed-precision p-adic scalars over an odd prime p.

A scalar is either an exact zero, or p^val * u with u a p-adic unit.  The
valuation is an integer for unramified values; scalars arising from totally
ramified (Eisenstein) quotients may carry a rational valuation whose
denominator divides a declared ramification degree.  ``precision`` counts
known unit digits beyond the valuation; ``None`` means the value is exact
(constructed from a rational number, so all digits are determined).

Arithmetic never reports digits beyond what propagation allows.  A sum
whose leading digits cancel below the precision floor degrades to a
"zero within precision" marker rather than silently claiming exactness.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .exceptions import InvalidArgument, PrecisionError

DEFAULT_PRECISION = 30


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp(x, p):
    """p-adic valuation of an int or Fraction; None for 0."""
    if x == 0:
        return None
    if isinstance(x, Fraction):
        v = 0
        n = x.numerator
        while n % p == 0:
            n //= p
            v += 1
        d = x.denominator
        while d % p == 0:
            d //= p
            v -= 1
        return v
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def unit_denominator_inverse(den, p, digits):
    """Inverse of a p-unit denominator modulo p^digits."""
    return pow(den, -1, p ** digits)


class PadicScalar:
    """Immutable p-adic scalar with tracked precision.

    Internally the unit part is kept as a pair of integers (num, den)
    coprime to p, so that exact rational inputs stay exact through ring
    operations; ``unit_part(digits)`` gives the canonical integer residue.
    """

    __slots__ = ("p", "val", "num", "den", "precision", "ram", "_zero")

    def __init__(self, p, value=None, precision=None, *, _raw=None):
        if not is_prime(p) or p == 2:
            raise InvalidArgument("p must be an odd prime, got %r" % (p,))
        self.p = p
        if _raw is not None:
            self.val, self.num, self.den, self.precision, self.ram, self._zero = _raw
            return
        if value is None:
            raise InvalidArgument("missing value")
        value = Fraction(value)
        if value == 0:
            self.val, self.num, self.den = 0, 0, 1
            self.precision = precision
            self.ram = 1
            self._zero = True
            return
        v = vp(value, p)
        u = value / Fraction(p) ** v
        self.val = v
        self.num = u.numerator
        self.den = u.denominator
        self.precision = precision
        self.ram = 1
        self._zero = False
        if precision is not None and precision < 1:
            raise InvalidArgument("precision must be >= 1 for a nonzero scalar")

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, p, value):
        return cls(p, value)

    @classmethod
    def zero(cls, p, known_to=None):
        """Exact zero (known_to=None) or zero-within-precision marker."""
        return cls(p, 0, precision=known_to)

    @classmethod
    def from_unit(cls, p, val, num, den=1, precision=None, ram=1):
        if num % p == 0 or den % p == 0:
            raise InvalidArgument("unit part must be prime to p")
        val = Fraction(val)
        if ram == 1 and val.denominator != 1:
            raise InvalidArgument("fractional valuation needs a ramification degree")
        if val.denominator > 1 and ram % val.denominator != 0:
            raise InvalidArgument("valuation denominator must divide ramification degree")
        if val.denominator == 1:
            val = int(val)
        return cls(p, _raw=(val, num, den, precision, ram, False))

    # -- predicates ---------------------------------------------------

    def is_exact_zero(self):
        return self._zero and self.precision is None

    def is_zero_within_precision(self):
        return self._zero

    def is_exact(self):
        return self.precision is None

    def is_unit(self):
        return (not self._zero) and self.val == 0

    # -- views --------------------------------------------------------

    def valuation(self):
        """Valuation, or None for an exact zero.

        For a zero-within-precision marker this is only a lower bound and
        PrecisionError is raised instead of guessing.
        """
        if self._zero:
            if self.precision is None:
                return None
            raise PrecisionError("valuation unknown: zero to precision %s" % self.precision)
        return self.val

    def valuation_lower_bound(self):
        if not self._zero:
            return self.val
        return self.precision if self.precision is not None else None

    def unit_part(self, digits=DEFAULT_PRECISION):
        if self._zero:
            raise PrecisionError("zero scalar has no unit part")
        if self.precision is not None:
            digits = min(digits, self.precision)
        m = self.p ** digits
        return self.num * pow(self.den, -1, m) % m

    def as_fraction(self):
        if self._zero:
            return Fraction(0)
        if self.val != int(self.val):
            raise InvalidArgument("ramified scalar has no rational value")
        return Fraction(self.num, self.den) * Fraction(self.p) ** int(self.val)

    def lift(self, digits=None):
        """Integer lift modulo p^digits (nonnegative valuation required)."""
        if self._zero:
            return 0
        if self.val < 0:
            raise InvalidArgument("negative valuation has no integral lift")
        digits = digits or (self.precision if self.precision is not None else DEFAULT_PRECISION)
        m = self.p ** digits
        return int(self.p ** int(self.val)) * self.unit_part(digits) % m

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise InvalidArgument("mixed primes")
            return other
        return PadicScalar(self.p, other)

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.p
        if self._zero or other._zero:
            floors = []
            for s in (self, other):
                if s._zero:
                    if s.precision is None:
                        return PadicScalar.zero(p)
                    floors.append(Fraction(s.precision))
                else:
                    floors.append(Fraction(s.val) + (Fraction(s.precision) if s.precision is not None else Fraction(10 ** 9)))
            bound = floors[0] + floors[1] if len(floors) == 2 else None
            # zero * nonzero: floor is zero-floor + other valuation
            if not self._zero:
                bound = Fraction(other.precision) + Fraction(self.val)
            elif not other._zero:
                bound = Fraction(self.precision) + Fraction(other.val)
            elif self.precision is not None and other.precision is not None:
                bound = min(Fraction(self.precision), Fraction(other.precision))
            if bound is None:
                return PadicScalar.zero(p)
            return PadicScalar.zero(p, known_to=_floor_int(bound))
        prec = _min_prec(self.precision, other.precision)
        ram = _lcm(self.ram, other.ram)
        val = Fraction(self.val) + Fraction(other.val)
        num = self.num * other.num
        den = self.den * other.den
        if prec is not None:
            m = self.p ** (prec + 2)
            num = num % m or num
            den = den % m or den
        return PadicScalar.from_unit(p, val, num, den, precision=prec, ram=ram)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other._zero:
            raise InvalidArgument("division by zero scalar")
        inv = PadicScalar.from_unit(other.p, -Fraction(other.val), other.den, other.num,
                                    precision=other.precision, ram=other.ram)
        return self * inv

    def __neg__(self):
        if self._zero:
            return self
        return PadicScalar.from_unit(self.p, self.val, -self.num, self.den,
                                     precision=self.precision, ram=self.ram)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.p
        # absolute precision floors
        fa = self._abs_floor()
        fb = other._abs_floor()
        floor = None
        if fa is not None or fb is not None:
            floor = min(x for x in (fa, fb) if x is not None)
        if self._zero and other._zero:
            if floor is None:
                return PadicScalar.zero(p)
            return PadicScalar.zero(p, known_to=_floor_int(floor))
        if self._zero:
            return other._truncate_abs(floor)
        if other._zero:
            return self._truncate_abs(floor)
        if self.ram != 1 or other.ram != 1:
            raise InvalidArgument("addition of ramified scalars is not supported here")
        s = Fraction(self.num, self.den) * Fraction(p) ** int(self.val) + \
            Fraction(other.num, other.den) * Fraction(p) ** int(other.val)
        if s == 0:
            if floor is None:
                return PadicScalar.zero(p)
            return PadicScalar.zero(p, known_to=_floor_int(floor))
        out = PadicScalar(p, s)
        return out._truncate_abs(floor)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __radd__(self, other):
        return self._coerce(other) + self

    def _abs_floor(self):
        if self.precision is None:
            return None
        if self._zero:
            return Fraction(self.precision)
        return Fraction(self.val) + self.precision

    def _truncate_abs(self, floor):
        """Re-express with absolute precision capped at floor."""
        if floor is None or self._zero:
            return self
        if Fraction(self.val) >= floor:
            return PadicScalar.zero(self.p, known_to=_floor_int(floor))
        rel = floor - Fraction(self.val)
        rel = int(rel) if rel == int(rel) else _floor_int(rel)
        cur = self.precision
        if cur is not None and cur <= rel:
            return self
        return PadicScalar.from_unit(self.p, self.val, self.num, self.den,
                                     precision=rel, ram=self.ram)

    # -- misc ---------------------------------------------------------

    def __eq__(self, other):
        """Equality of exact scalars; finite-precision comparison is by digits."""
        try:
            other = self._coerce(other)
        except InvalidArgument:
            return NotImplemented
        if self._zero and other._zero:
            return True
        if self._zero != other._zero:
            return False
        if self.is_exact() and other.is_exact() and self.ram == other.ram == 1:
            return self.as_fraction() == other.as_fraction()
        if Fraction(self.val) != Fraction(other.val):
            return False
        d = _min_prec(self.precision, other.precision) or DEFAULT_PRECISION
        return self.unit_part(d) == other.unit_part(d)

    def __hash__(self):
        return hash((self.p, self._zero, Fraction(self.val) if not self._zero else 0))

    def __repr__(self):
        if self._zero:
            if self.precision is None:
                return "0 (exact)"
            return "O(%d^%s)" % (self.p, self.precision)
        prec = "exact" if self.precision is None else "prec %d" % self.precision
        return "%d^%s * (%d/%d) [%s]" % (self.p, self.val, self.num, self.den, prec)


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _lcm(a, b):
    return a * b // gcd(a, b)


def _floor_int(fr):
    fr = Fraction(fr)
    return fr.numerator // fr.denominator
