"""Truncated Iwasawa-algebra elements, Newton polygons, Weierstrass theory.

One-variable elements model Z_p[[X]] under gamma -> 1 + X; two-variable
elements model Z_p[[S, T]].  Coefficients are PadicScalar values, so exact
polynomials (tail known to vanish) and precision-truncated series coexist;
an operation never claims digits or degrees beyond what its inputs carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exceptions import (InvalidArgument, PrecisionError, TruncationError)
from .padics import PadicScalar, vp
from .cyclotomic import (CyclotomicInt, cyclotomic_poly_shifted,
                         x_poly_at_zeta_minus_one)

DEFAULT_TRUNC = 200
DEFAULT_PRECISION = 30


@dataclass(frozen=True)
class InvariantProfile:
    """(mu, lambda, slope runs) of a one-variable element.

    ``slopes`` is a tuple of (count, slope) runs, steepest first; counts sum
    to ``lam``.  ``stabilized`` is False when unknown digits could still
    hide lattice points below the computed polygon.
    """
    mu: int
    lam: int
    slopes: tuple
    stabilized: bool = True

    def key(self):
        return (self.mu, self.lam, self.slopes)

    def is_unit(self):
        return self.mu == 0 and self.lam == 0

    def slope_values(self):
        return set(s for _, s in self.slopes if s is not None)

    def has_zero_roots(self):
        return any(s is None for _, s in self.slopes)

    def as_dict(self):
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "slopes": [[c, "inf" if s is None else str(s)] for c, s in self.slopes],
            "stabilized": self.stabilized,
        }


class IwasawaElement1:
    """Element of Z_p[[X]] truncated at degree D.

    ``exact_tail`` marks honest polynomials: coefficients beyond the stored
    degree are exactly zero rather than unknown.
    """

    __slots__ = ("p", "coeffs", "trunc_degree", "exact_tail")

    def __init__(self, p, coeffs, exact_tail=False):
        self.p = p
        self.coeffs = [c if isinstance(c, PadicScalar) else PadicScalar(p, c)
                       for c in coeffs]
        self.trunc_degree = len(self.coeffs) - 1
        self.exact_tail = exact_tail

    @classmethod
    def from_rationals(cls, p, values, precision=None, exact_tail=True):
        return cls(p, [PadicScalar(p, v, precision=precision) for v in values],
                   exact_tail=exact_tail)

    @classmethod
    def zero(cls, p, D=0):
        return cls.from_rationals(p, [0] * (D + 1))

    @classmethod
    def one(cls, p):
        return cls.from_rationals(p, [1])

    def coeff_precision(self):
        precs = [c.precision for c in self.coeffs]
        if any(x is None for x in precs):
            return None if all(x is None for x in precs) else min(x for x in precs if x is not None)
        return min(precs) if precs else None

    def degree_observed(self):
        """Largest index with a coefficient not zero-within-precision."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero_within_precision():
                return i
        return None

    def is_unit_flagged(self):
        return (not self.coeffs[0].is_zero_within_precision()
                and self.coeffs[0].valuation() == 0)

    def rationals(self):
        return [c.as_fraction() for c in self.coeffs]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        za = PadicScalar.zero(self.p)
        a = self.coeffs + [za] * (n - len(self.coeffs))
        b = other.coeffs + [za] * (n - len(other.coeffs))
        out = [x + y for x, y in zip(a, b)]
        tail = self.exact_tail and other.exact_tail
        if not tail:
            n = min(self._known_degree(), other._known_degree()) + 1
            out = out[:n]
        return IwasawaElement1(self.p, out, exact_tail=tail)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + other.scale(-1)

    def scale(self, c):
        return IwasawaElement1(self.p, [x * c for x in self.coeffs],
                               exact_tail=self.exact_tail)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self.scale(other)
        other = self._coerce(other)
        tail = self.exact_tail and other.exact_tail
        cap = (len(self.coeffs) + len(other.coeffs) - 1 if tail
               else min(self._known_degree(), other._known_degree()) + 1)
        out = [PadicScalar.zero(self.p) for _ in range(cap)]
        for i, x in enumerate(self.coeffs):
            if x.is_exact_zero():
                continue
            for j, y in enumerate(other.coeffs):
                if i + j >= cap:
                    break
                if y.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + x * y
        return IwasawaElement1(self.p, out, exact_tail=tail)

    def truncate(self, D):
        out = self.coeffs[:D + 1]
        out += [PadicScalar.zero(self.p)] * (D + 1 - len(out))
        return IwasawaElement1(self.p, out,
                               exact_tail=self.exact_tail and D >= self.trunc_degree)

    def _known_degree(self):
        return 10 ** 9 if self.exact_tail else self.trunc_degree

    def _coerce(self, other):
        if not isinstance(other, IwasawaElement1):
            raise InvalidArgument("expected a one-variable element")
        if other.p != self.p:
            raise InvalidArgument("mixed primes")
        return other

    def evaluate_at_unity_root(self, k):
        """Exact value at X = zeta_{p^k} - 1 (requires exact coefficients)."""
        return x_poly_at_zeta_minus_one([c.as_fraction() for c in self.coeffs],
                                        self.p, k)

    def __repr__(self):
        return "IwasawaElement1(p=%d, deg<=%d, %s)" % (
            self.p, self.trunc_degree, "poly" if self.exact_tail else "series")


# ---------------------------------------------------------------------------
# Newton polygons


def lower_hull(points):
    """Vertices of the lower convex hull of (x, y) points sorted by x."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def hull_value(hull, x):
    """Height of the piecewise-linear hull at abscissa x (inside range)."""
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
    if hull and x == hull[0][0]:
        return Fraction(hull[0][1])
    raise InvalidArgument("abscissa outside hull range")


def newton_invariants(f):
    """Invariant profile (mu, lambda, slope runs) of a one-variable element.

    mu is the minimal coefficient valuation, lambda the least index where it
    is attained, and the slopes are the lower-hull slopes on [0, lambda]
    after removing mu, steepest run first.  Exact X-divisibility (leading
    coefficients exactly zero) shows up as a leading run with slope None, so
    run lengths always sum to lambda.  Raises PrecisionError when every
    coefficient is zero within precision, or when unknown digits could
    undercut mu.
    """
    known = []
    unknown = []
    for i, c in enumerate(f.coeffs):
        if c.is_zero_within_precision():
            if c.precision is not None:
                unknown.append((i, Fraction(c.precision)))
            continue
        known.append((i, Fraction(c.valuation())))
    if not known:
        raise PrecisionError("all coefficients are zero within precision")
    mu = min(v for _, v in known)
    for i, bound in unknown:
        if bound <= mu:
            raise PrecisionError(
                "coefficient %d known only to O(p^%s); mu = %s not certified"
                % (i, bound, mu))
    lam = min(i for i, v in known if v == mu)
    pts = [(i, v) for i, v in known if i <= lam]
    hull = lower_hull(pts)
    slopes = []
    if hull[0][0] > 0:
        slopes.append((hull[0][0], None))     # exact zeros: roots at X = 0
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((x2 - x1, Fraction(y1 - y2, x2 - x1)))
    stabilized = True
    for i, bound in unknown:
        if i <= lam and (i < hull[0][0] or bound < hull_value(hull, i)):
            stabilized = False
    if mu != int(mu):
        raise InvalidArgument("fractional mu: element is not over Z_p")
    return InvariantProfile(int(mu), lam, tuple(slopes), stabilized)


def newton_invariants_exact(coeffs, p):
    """Profile of an exact rational coefficient list (None when zero)."""
    f = IwasawaElement1.from_rationals(p, coeffs)
    try:
        return newton_invariants(f)
    except PrecisionError:
        return None


# ---------------------------------------------------------------------------
# Weierstrass preparation


def _fp_poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _fp_poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_poly_trim(out)


def _fp_poly_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _fp_poly_trim(q), _fp_poly_trim(a)


def _fp_poly_bezout(a, b, p):
    """(s, t) with s*a + t*b = 1 in F_p[X] for coprime a, b."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while r1 != [0]:
        q, r = _fp_poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _fp_poly_sub(s0, _fp_poly_mul(q, s1, p), p)
        t0, t1 = t1, _fp_poly_sub(t0, _fp_poly_mul(q, t1, p), p)
    if len(r0) != 1 or r0[0] == 0:
        raise InvalidArgument("polynomials are not coprime mod p")
    inv = pow(r0[0], -1, p)
    return ([x * inv % p for x in s0], [x * inv % p for x in t0])


def _fp_poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _fp_poly_trim([(x - y) % p for x, y in zip(a, b)])


def weierstrass_prepare(f, digits=None):
    """Factor f = p^mu * unit * distinguished over the truncation window.

    The distinguished part is monic of degree lambda with non-leading
    coefficients in pZ_p; the factorization is a Hensel lift of
    f/p^mu = X^lambda * (unit series) mod p and matches f coefficientwise
    to the propagated precision.
    """
    p = f.p
    prof = newton_invariants(f)
    lam, mu = prof.lam, prof.mu
    D = f.trunc_degree
    if lam >= D and not f.exact_tail:
        raise TruncationError("lambda = %d exceeds truncation %d" % (lam, D))
    precs = [c.precision for c in f.coeffs]
    finite = [x for x in precs if x is not None]
    base = min(finite) if finite else DEFAULT_PRECISION
    if finite and mu >= base:
        raise TruncationError("mu = %d exhausts coefficient precision %d" % (mu, base))
    digits = digits or max(base - mu, 1)
    mod = p ** digits
    fb = []
    for c in f.coeffs:
        if c.is_zero_within_precision():
            fb.append(0)
        else:
            if Fraction(c.val) < mu:
                raise InvalidArgument("inconsistent mu")
            shifted = PadicScalar.from_unit(p, Fraction(c.val) - mu, c.num, c.den,
                                            precision=c.precision, ram=c.ram)
            fb.append(shifted.lift(digits))
    fbar = [x % p for x in fb]
    A = [0] * lam + [1]                      # X^lambda
    B = _fp_poly_trim([fbar[i] for i in range(lam, len(fb))]) or [0]
    if B == [0] or B[0] % p == 0:
        raise InvalidArgument("leading unit coefficient missing")
    s, t = _fp_poly_bezout(A, B, p)
    P = list(A)                              # lifted monic factor
    U = list(B)                              # lifted unit cofactor, a series mod X^(D+1)
    for m in range(1, digits):
        pm = p ** m
        prod = _int_poly_mul(P, U)
        E = [((fb[i] if i < len(fb) else 0) - (prod[i] if i < len(prod) else 0)) // pm % p
             for i in range(len(fb))]
        E = _fp_poly_trim(E)
        if E == [0]:
            continue
        tE = _fp_poly_mul(t, E, p)
        q, dP = _fp_poly_divmod(tE, A, p)     # t*E = q*A + dP, deg dP < lambda
        sE = _fp_poly_mul(s, E, p)
        dU = _fp_poly_sub(sE, [(-x) % p for x in _fp_poly_mul(B, q, p)], p)
        P = _int_poly_add(P, [x * pm for x in dP])
        U = _int_poly_add(U, [x * pm for x in dU])
        P = [x % (mod * p) for x in P][:lam + 1]
        U = [x % (mod * p) for x in U][:D + 1 - lam] or [1]
    P = [x % mod for x in P[:lam]] + [1]
    U = [x % mod for x in U]

    def wrap(x):
        # x is determined modulo p^digits absolutely; relative precision is
        # what remains beyond its valuation
        if x % mod == 0:
            return PadicScalar.zero(p, known_to=digits)
        v = vp(x, p)
        return PadicScalar.from_unit(p, v, x // p ** v, precision=digits - v)
    unit = IwasawaElement1(p, [wrap(x) for x in U], exact_tail=False)
    dist = IwasawaElement1(p, [wrap(x) for x in P], exact_tail=True)
    dist.coeffs[-1] = PadicScalar(p, 1)      # monic exactly
    return unit, dist, mu


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _int_poly_add(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [x + y for x, y in zip(a, b)]


# ---------------------------------------------------------------------------
# Pollack logarithm truncations


def half_log_product(p, parity, n):
    """Product of Phi_{p^k}(1+X) over k <= n of the given parity, exact.

    These are the finite modulus polynomials the signed reconstruction works
    against; degree is the sum of phi(p^k) over the selected k.
    """
    if parity not in ("even", "odd"):
        raise InvalidArgument("parity must be 'even' or 'odd'")
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    start = 2 if parity == "even" else 1
    co = [1]
    for k in range(start, n + 1, 2):
        co = _int_poly_mul(co, cyclotomic_poly_shifted(p, k))
    return IwasawaElement1.from_rationals(p, co)


def pollack_log_truncated(p, sign, n_max, D=DEFAULT_TRUNC, N=DEFAULT_PRECISION):
    """Truncated signed logarithm (1/p) * prod Phi_{p^k}(1+X)/p.

    The plus log uses even k <= n_max, the minus log odd k; coefficients are
    exact rationals with negative valuations tracked, wrapped at precision N.
    """
    if sign not in ("+", "-"):
        raise InvalidArgument("sign must be '+' or '-'")
    if n_max < 1:
        raise InvalidArgument("n_max must be >= 1")
    parity = "even" if sign == "+" else "odd"
    prod = half_log_product(p, parity, n_max)
    nfac = len(range(2 if parity == "even" else 1, n_max + 1, 2))
    if prod.trunc_degree > D:
        raise TruncationError("degree %d exceeds truncation %d"
                              % (prod.trunc_degree, D))
    scale = Fraction(1, p ** (nfac + 1))
    co = [c.as_fraction() * scale for c in prod.coeffs]
    return IwasawaElement1.from_rationals(p, co, precision=N)


# ---------------------------------------------------------------------------
# Two-variable elements


class IwasawaElement2:
    """Element of Z_p[[S, T]] truncated at total bidegree (D, D).

    Coefficients are stored as a dict (i, j) -> PadicScalar with zero
    entries omitted; S and T play symmetric roles.
    """

    __slots__ = ("p", "coeffs", "trunc_degree", "exact_tail")

    def __init__(self, p, coeffs, trunc_degree=DEFAULT_TRUNC, exact_tail=False):
        self.p = p
        self.coeffs = {k: (v if isinstance(v, PadicScalar) else PadicScalar(p, v))
                       for k, v in coeffs.items()
                       if not (isinstance(v, (int, Fraction)) and v == 0)}
        self.trunc_degree = trunc_degree
        self.exact_tail = exact_tail

    @classmethod
    def from_dict(cls, p, d, trunc_degree=DEFAULT_TRUNC, exact_tail=True):
        return cls(p, d, trunc_degree, exact_tail)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return IwasawaElement2(self.p, out, min(self.trunc_degree, other.trunc_degree),
                               self.exact_tail and other.exact_tail)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return IwasawaElement2(self.p, {k: v * other for k, v in self.coeffs.items()},
                                   self.trunc_degree, self.exact_tail)
        D = min(self.trunc_degree, other.trunc_degree)
        out = {}
        for (i1, j1), v1 in self.coeffs.items():
            for (i2, j2), v2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if not (self.exact_tail and other.exact_tail) and (i > D or j > D):
                    continue
                k = (i, j)
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return IwasawaElement2(self.p, out, D, self.exact_tail and other.exact_tail)

    def __sub__(self, other):
        return self + other * -1

    def t_polynomial(self):
        """Present as a T-polynomial: list of S-coefficient lists, exact."""
        dt = max((j for (_, j) in self.coeffs), default=0)
        ds = max((i for (i, _) in self.coeffs), default=0)
        out = [[Fraction(0)] * (ds + 1) for _ in range(dt + 1)]
        for (i, j), v in self.coeffs.items():
            out[j][i] = v.as_fraction()
        return out

    def mod_p(self):
        """Coefficient dict over F_p."""
        out = {}
        for k, v in self.coeffs.items():
            if v.is_zero_within_precision():
                continue
            if v.valuation() >= 1:
                continue
            r = v.lift(1) % self.p
            if r:
                out[k] = r
        return out

    def __repr__(self):
        return "IwasawaElement2(p=%d, %d terms)" % (self.p, len(self.coeffs))


def pi_cyc(f):
    """Cyclotomic specialization S -> X, T -> X of a two-variable element."""
    D = f.trunc_degree
    n = min(max((i + j for (i, j) in f.coeffs), default=0), D)
    out = [PadicScalar.zero(f.p) for _ in range(n + 1)]
    for (i, j), v in f.coeffs.items():
        if i + j <= n:
            out[i + j] = out[i + j] + v
    return IwasawaElement1(f.p, out, exact_tail=f.exact_tail)


# ---------------------------------------------------------------------------
# Resultants of T-polynomial presentations


def _q_poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _q_poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _q_poly_trim(out)


def _q_poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _q_poly_trim([x - y for x, y in zip(a, b)])


def _q_poly_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    inv = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        if a[i]:
            c = a[i] / inv
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return _q_poly_trim(q), _q_poly_trim(a)


def resultant_in_T(f, g):
    """Sylvester resultant in T of two T-polynomial presentations.

    Inputs are IwasawaElement2 values monic in T (after preparation) or raw
    T-polynomial coefficient lists over Q[S]; output is the one-variable
    resultant as an exact IwasawaElement1 in the surviving variable.
    """
    fp_ = f.t_polynomial() if isinstance(f, IwasawaElement2) else [list(map(Fraction, r)) for r in f]
    gp_ = g.t_polynomial() if isinstance(g, IwasawaElement2) else [list(map(Fraction, r)) for r in g]
    p = f.p if isinstance(f, IwasawaElement2) else g.p
    m = len(fp_) - 1
    n = len(gp_) - 1
    if m < 0 or n < 0:
        raise InvalidArgument("empty polynomial")
    lead_f, lead_g = fp_[-1], gp_[-1]
    for lead in (lead_f, lead_g):
        if _q_poly_trim(list(lead)) == [0]:
            raise PrecisionError("leading T-coefficient vanishes; prepare first")
    if m == 0 and n == 0:
        return IwasawaElement1.from_rationals(p, [Fraction(1)])
    if m == 0:
        out = [Fraction(1)]
        for _ in range(n):
            out = _q_poly_mul(out, fp_[0])
        return IwasawaElement1.from_rationals(p, out)
    if n == 0:
        out = [Fraction(1)]
        for _ in range(m):
            out = _q_poly_mul(out, gp_[0])
        return IwasawaElement1.from_rationals(p, out)
    size = m + n
    M = [[[Fraction(0)] for _ in range(size)] for _ in range(size)]
    for r in range(n):
        for c in range(m + 1):
            M[r][r + c] = list(fp_[m - c])
    for r in range(m):
        for c in range(n + 1):
            M[n + r][r + c] = list(gp_[n - c])
    det = _bareiss_det(M)
    # normalized so that a monic g gives the product of f over its roots
    sign = (-1) ** (m * n)
    return IwasawaElement1.from_rationals(p, [sign * c for c in det])


def _bareiss_det(M):
    """Fraction-free determinant over Q[S] (entries as coefficient lists)."""
    n = len(M)
    M = [[_q_poly_trim([Fraction(c) for c in e]) for e in row] for row in M]
    sign = 1
    prev = [Fraction(1)]
    for k in range(n - 1):
        if _q_poly_trim(list(M[k][k])) == [0]:
            piv = None
            for r in range(k + 1, n):
                if _q_poly_trim(list(M[r][k])) != [0]:
                    piv = r
                    break
            if piv is None:
                return [Fraction(0)]
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _q_poly_sub(_q_poly_mul(M[i][j], M[k][k]),
                                  _q_poly_mul(M[i][k], M[k][j]))
                q, r = _q_poly_divmod(num, prev)
                if r != [Fraction(0)]:
                    raise InvalidArgument("exact division failed in Bareiss step")
                M[i][j] = q
            M[i][k] = [Fraction(0)]
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return [c * sign for c in det]
