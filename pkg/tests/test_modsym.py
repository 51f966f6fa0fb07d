import random
from fractions import Fraction
from math import gcd

import pytest

from thetapm import (CurveData, InvalidArgument, IsolationFailure,
                     ResourceLimit, build_space, bundled_curve, eval_path,
                     extract_eigensymbol, make_twisted_evaluator,
                     twist_symbol_value)
from thetapm.modsym import P1Table


# -- P1 and the quotient space -----------------------------------------------

def test_p1_sizes():
    assert len(P1Table(32)) == 48
    assert len(P1Table(11)) == 12
    assert len(P1Table(1)) == 1
    assert len(P1Table(40)) == 72
    assert len(P1Table(56)) == 96


def test_p1_normalize_agrees_with_brute_force():
    for N in (12, 24, 32, 36, 49, 45):
        t = P1Table(N)
        for c in range(N):
            for d in range(N):
                if gcd(gcd(c, d), N) != 1:
                    assert t.table[c * N + d] == -1
                    continue
                r = t.normalize(c, d)
                assert t.reps[t.table[c * N + d]] == r


def test_level_bound():
    with pytest.raises(ResourceLimit):
        P1Table(10 ** 4 + 1)


def test_space_dimensions():
    assert build_space(32).dim == 9
    assert build_space(11).dim == 3


def test_manin_relations_hold_in_quotient():
    sp = build_space(32)
    N = sp.level
    look = sp.p1.lookup
    dim = sp.dim
    for i, (c, d) in enumerate(sp.generators):
        v = sp.gen_vector(i)
        vs = sp.gen_vector(look(d, -c))
        assert all(a + b == 0 for a, b in zip(v, vs)), "S relation fails"
        vt = sp.gen_vector(look(d, -c - d))
        vt2 = sp.gen_vector(look(-c - d, c))
        assert all(a + b + e == 0 for a, b, e in zip(v, vt, vt2)), "T relation fails"


def test_hecke_commutativity_up_to_20():
    sp = build_space(32)
    mats = {}
    for ell in (3, 5, 7, 11, 13, 17, 19):
        mats[ell] = sp.hecke_matrix(ell)

    def mul(A, B):
        n = len(A)
        return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]
    for l1 in (3, 5, 7):
        for l2 in (11, 13, 17, 19):
            assert mul(mats[l1], mats[l2]) == mul(mats[l2], mats[l1])


# -- eigensymbols ----------------------------------------------------------------

def test_extract_eigensymbol_hecke_residuals_exact():
    sp = build_space(32)
    c = bundled_curve("32a")
    for sign in (1, -1):
        sym = extract_eigensymbol(sp, c, sign)
        assert all(isinstance(v, int) for v in sym.values_on_generators)
        from functools import reduce
        assert reduce(gcd, sym.values_on_generators) == 1
        w = [Fraction(sym.values_on_generators[g]) for g in sp.basis]
        # residuals (T_ell - a_ell) w = 0 exactly for all good ell <= 50
        for ell in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            a = c.ap(ell)
            T = sp.hecke_matrix(ell)
            for i in range(sp.dim):
                assert sum(T[i][j] * w[j] for j in range(sp.dim)) == a * w[i]


def test_eigensymbol_star_action():
    sp = build_space(32)
    c = bundled_curve("32a")
    sym = extract_eigensymbol(sp, c, -1)
    J = sp.star_matrix()
    w = [Fraction(sym.values_on_generators[g]) for g in sp.basis]
    for i in range(sp.dim):
        assert sum(J[i][j] * w[j] for j in range(sp.dim)) == -w[i]


def test_eigensymbol_level_11():
    sp = build_space(11)
    c = CurveData("11a1", (0, -1, 1, -10, -20), 11)
    plus = extract_eigensymbol(sp, c, +1)
    minus = extract_eigensymbol(sp, c, -1)
    assert plus.values_on_generators != minus.values_on_generators


def test_isolation_failure_is_loud():
    sp = build_space(32)
    fake = CurveData("fake32", (0, 0, 0, -1, 0), 32)
    fake.ap_cache = {ell: 99 for ell in range(2, 100)}
    with pytest.raises((IsolationFailure, InvalidArgument)):
        extract_eigensymbol(sp, fake, +1, ell_bound=20)


# -- path evaluation ---------------------------------------------------------------

@pytest.fixture(scope="module")
def sym32():
    sp = build_space(32)
    c = bundled_curve("32a")
    return (extract_eigensymbol(sp, c, +1), extract_eigensymbol(sp, c, -1), c, sp)


def test_parity_of_path_values(sym32):
    plus, minus, _, _ = sym32
    evp = plus.evaluator()
    evm = minus.evaluator()
    for (a, m) in [(1, 5), (2, 7), (4, 9), (3, 25), (11, 49)]:
        assert evm(a, m) + evm(m - a, m) == 0
        assert evp(a, m) == evp(m - a, m)


def test_hecke_consistency_on_paths(sym32):
    plus, minus, c, _ = sym32
    for sym in (plus, minus):
        ev = sym.evaluator()
        for (a, m, ell) in [(1, 5, 3), (2, 7, 5), (3, 11, 7), (1, 25, 3),
                            (4, 13, 3)]:
            ae = c.ap(ell)
            s = sum(ev(a + b * m, ell * m) for b in range(ell)) + ev(ell * a, m)
            assert s == ae * ev(a, m)


def test_route_independence_negative_cf(sym32):
    """Same path value from the plus and minus continued-fraction chains."""
    plus, _, _, sp = sym32
    vals = plus.values_on_generators
    N = sp.level
    table = sp.p1.table

    def negative_cf_value(a, m):
        # chain of convergents with ceiling quotients: consecutive dets -1
        g = gcd(a, m)
        a, m = a // g, m // g
        a %= m
        total = 0
        pm1, qm1 = 1, 0
        pj = qj = None
        x, y = a, m
        first = True
        while y:
            q0 = -((-x) // y)            # ceil
            r = q0 * y - x
            x, y = y, r
            if first:
                pj, qj = q0, 1
                first = False
            else:
                pj, qj, pm1, qm1 = q0 * pj - pm1, q0 * qj - qm1, pj, qj
            # segment {prev, cur} with det -1: equals -symbol(q_{j-1}: q_j)
            total -= vals[table[(qm1 % N) * N + qj % N]]
        return total

    ev = plus.evaluator()
    rng = random.Random(99)
    for _ in range(100):
        m = rng.randint(2, 4000)
        a = rng.randint(0, m - 1)
        assert ev(a, m) == negative_cf_value(a, m), (a, m)


def test_eval_path_requires_positive_denominator(sym32):
    plus, _, _, _ = sym32
    with pytest.raises(InvalidArgument):
        eval_path(plus, 1, 0)


def test_birch_coherence_between_normalizations(sym32):
    # scaling the symbol scales every character sum by exactly that ratio
    plus, _, _, sp = sym32
    scaled = [7 * v for v in plus.values_on_generators]
    ev1 = plus.evaluator()
    N = sp.level
    table = sp.p1.table

    class Dummy:
        level = N
        values_on_generators = scaled
        _space = sp
    ev2 = type(plus).evaluator(Dummy)
    q = 27
    for t in range(1, 4):
        s1 = sum(ev1(a, q) for a in range(1, q, t + 1))
        s2 = sum(ev2(a, q) for a in range(1, q, t + 1))
        assert s2 == 7 * s1


# -- twisting ---------------------------------------------------------------------

def test_twist_identity_discriminant(sym32):
    plus, minus, _, _ = sym32
    vp_, vm_ = twist_symbol_value((plus, minus), 1, 3, 7)
    assert vp_ == plus.evaluator()(3, 7)
    assert vm_ == minus.evaluator()(3, 7)


def test_twist_rejects_bad_inputs(sym32):
    plus, minus, _, _ = sym32
    with pytest.raises(InvalidArgument):
        twist_symbol_value((plus, minus), -6, 1, 5)     # not fundamental
    with pytest.raises(InvalidArgument):
        twist_symbol_value((plus, minus), -43, 1, 86)   # gcd(D, m) != 1


def test_twist_agrees_with_direct_twisted_space(sym32):
    """Birch sums versus the directly-built eigensymbol of the twisted curve.

    The two value families must agree up to a single global rational scalar
    per sign (D = -3: twisted conductor 288 is small enough to build).
    """
    plus, minus, c, _ = sym32
    tw = c.quadratic_twist(-3)
    sp2 = build_space(tw.conductor)
    direct_plus = extract_eigensymbol(sp2, tw, +1)
    dev = direct_plus.evaluator()
    tev = make_twisted_evaluator(minus, -3)    # twisted plus from base minus
    paths = [(a, m) for m in (5, 7, 11, 13, 35) for a in range(1, m)
             if gcd(a, m) == 1]
    ratios = set()
    pairs = []
    for a, m in paths:
        x, y = tev(a, m), dev(a, m)
        pairs.append((x, y))
        if y != 0:
            ratios.add(Fraction(x, y))
    assert len(ratios) == 1, "global scalar is not constant: %s" % ratios
    r = ratios.pop()
    assert r != 0
    for x, y in pairs:
        assert Fraction(x) == r * y


def test_twist_twice_composition_law(sym32):
    """Double Birch sum folds back onto the base symbol.

    Composing the twist sum with itself telescopes, after the Jacobi-sum
    evaluation for a quadratic character, to
        chi(-1) * (q * [a/m] - a_q * [aq/m] + [a q^2 / m]),
    the base family hit by the q-Euler factor.  Up to that Euler factor the
    double twist is the base family again; the raw double sum itself is
    compared here against the closed form, exactly.
    """
    plus, minus, c, _ = sym32
    D = -43
    q = -D
    from thetapm import kronecker_symbol
    chi = [kronecker_symbol(D, u) for u in range(q)]
    ev = minus.evaluator()

    def double_twist(a, m):
        total = 0
        for u2 in range(1, q):
            if not chi[u2]:
                continue
            x = a * q + u2 * m       # inner argument over denominator m q
            for u1 in range(1, q):
                if chi[u1]:
                    total += chi[u1] * chi[u2] * ev(x * q + u1 * m * q,
                                                    m * q * q)
        return total

    aq = c.ap(q)
    chi_m1 = chi[q - 1]
    for (a, m) in [(1, 5), (2, 7), (3, 8)]:
        got = double_twist(a, m)
        want = chi_m1 * (q * ev(a, m) - aq * ev(a * q, m) + ev(a * q * q, m))
        assert got == want, (a, m, got, want)


def test_twisted_hecke_consistency(sym32):
    plus, minus, c, _ = sym32
    D = -43
    tev = make_twisted_evaluator(minus, D)
    from thetapm import kronecker_symbol
    tw_ap = lambda ell: kronecker_symbol(D, ell) * c.ap(ell)
    for (a, m, ell) in [(1, 5, 3), (2, 7, 3), (1, 9, 5)]:
        s = sum(tev(a + b * m, ell * m) for b in range(ell)) + tev(ell * a, m)
        assert s == tw_ap(ell) * tev(a, m)


def test_trivial_sum_l_value_coherence(sym32):
    """Full sums over (Z/m)* fold to a fixed multiple of the value at 0.

    The degree-m correspondence gives sum_{b mod m} [b/m] = (a_m - 1)[0/1]
    for prime m, so the unit-restricted sum is (a_m - 2)[0/1]; consistency
    across several m pins the value at 0 (nonzero here: rank zero curve)
    against the L-value normalization without ever computing a period.
    """
    plus, _, c, _ = sym32
    ev = plus.evaluator()
    base = ev(0, 1)
    assert base != 0
    for m in (5, 7, 13, 17):
        s = sum(ev(a, m) for a in range(1, m))
        assert s == (c.ap(m) - 2) * base, m
