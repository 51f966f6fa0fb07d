"""Coprimality certificates and the pseudo-nullity deduction report.

Two signed series with stabilized profiles are certified coprime either by
slope disjointness (no common root valuation, no shared p-factor, no shared
roots at the origin) or by a nonvanishing resultant of their distinguished
parts.  Failure modes are kept apart: ``not-certified`` means a structural
obstruction was found, ``inconclusive`` means the data could not decide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import InvalidArgument, PrecisionError
from .iwasawa import (InvariantProfile, IwasawaElement1, newton_invariants,
                      weierstrass_prepare)
from .mazurtate import SignedLSeries
from .padics import vp


@dataclass
class CoprimalityCertificate:
    method: str                   # slope-disjoint | resultant | inconclusive
    f_profile: InvariantProfile
    g_profile: InvariantProfile
    verdict: str                  # coprime | not-certified | inconclusive
    resultant_valuation: Fraction = None
    detail: str = ""

    def as_dict(self):
        return {
            "method": self.method,
            "verdict": self.verdict,
            "f_profile": self.f_profile.as_dict() if self.f_profile else None,
            "g_profile": self.g_profile.as_dict() if self.g_profile else None,
            "resultant_valuation": None if self.resultant_valuation is None
            else str(self.resultant_valuation),
            "detail": self.detail,
        }


def _profile_of(x):
    if isinstance(x, SignedLSeries):
        if x.profile is None:
            raise PrecisionError("series has no usable profile")
        return x.profile
    if isinstance(x, IwasawaElement1):
        return newton_invariants(x)
    if isinstance(x, InvariantProfile):
        return x
    raise InvalidArgument("expected a signed series or a one-variable element")


def _element_of(x):
    if isinstance(x, SignedLSeries):
        return x.representative
    if isinstance(x, IwasawaElement1):
        return x
    return None


def is_unit(f):
    """Unit test: stabilized profile with mu = lambda = 0."""
    prof = _profile_of(f)
    if not prof.stabilized:
        raise PrecisionError("profile not stabilized; unit test inconclusive")
    return prof.is_unit()


def coprime_certificate(f, g):
    """Certify that f and g share no irreducible factor.

    Order of checks: a common p-factor (both mu > 0) or common roots at the
    origin block immediately; disjoint root-valuation multisets certify
    coprimality; otherwise the resultant of the distinguished parts decides
    when it has a determined nonzero valuation.
    """
    pf = _profile_of(f)
    pg = _profile_of(g)
    if not (pf.stabilized and pg.stabilized):
        return CoprimalityCertificate("inconclusive", pf, pg, "inconclusive",
                                      detail="profiles not stabilized")
    if pf.mu > 0 and pg.mu > 0:
        return CoprimalityCertificate("slope-disjoint", pf, pg, "not-certified",
                                      detail="shared factor p (both mu positive)")
    if pf.has_zero_roots() and pg.has_zero_roots():
        return CoprimalityCertificate("slope-disjoint", pf, pg, "not-certified",
                                      detail="shared roots at the origin")
    if pf.lam == 0 or pg.lam == 0:
        return CoprimalityCertificate("slope-disjoint", pf, pg, "coprime",
                                      detail="one side is a unit")
    common = pf.slope_values() & pg.slope_values()
    if not common:
        return CoprimalityCertificate("slope-disjoint", pf, pg, "coprime",
                                      detail="root valuations are disjoint")
    ef, eg = _element_of(f), _element_of(g)
    if ef is None or eg is None:
        return CoprimalityCertificate("inconclusive", pf, pg, "inconclusive",
                                      detail="shared slope and no elements to resolve")
    if _obviously_equal(ef, eg):
        return CoprimalityCertificate("resultant", pf, pg, "not-certified",
                                      detail="equal inputs share every factor")
    try:
        _, df, _ = weierstrass_prepare(ef)
        _, dg, _ = weierstrass_prepare(eg)
        res = _resultant_1var(df, dg)
    except PrecisionError as exc:
        return CoprimalityCertificate("inconclusive", pf, pg, "inconclusive",
                                      detail="resultant: %s" % exc)
    floor = _abs_floor_bound(df, dg)
    if res.is_zero_within_precision() or \
            (floor is not None and Fraction(res.valuation()) >= floor):
        # a valuation at or beyond the coefficient floor is indistinguishable
        # from an exact zero, so no certificate is issued
        return CoprimalityCertificate("inconclusive", pf, pg, "inconclusive",
                                      detail="resultant vanishes within precision")
    return CoprimalityCertificate("resultant", pf, pg, "coprime",
                                  resultant_valuation=Fraction(res.valuation()),
                                  detail="resultant has determined nonzero valuation")


def _obviously_equal(f, g):
    if len(f.coeffs) != len(g.coeffs):
        return False
    return all(a == b for a, b in zip(f.coeffs, g.coeffs))


def _abs_floor_bound(df, dg):
    floors = []
    for el in (df, dg):
        for c in el.coeffs:
            fl = c._abs_floor()
            if fl is not None:
                floors.append(fl)
    return min(floors) if floors else None


def _resultant_1var(f, g):
    """Resultant of two monic one-variable polynomials over Z_p (scalars)."""
    from .padics import PadicScalar
    p = f.p
    a = list(f.coeffs)
    b = list(g.coeffs)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for r in range(n):
        row = [PadicScalar.zero(p)] * size
        for c in range(m + 1):
            row[r + c] = a[m - c]
        rows.append(row)
    for r in range(m):
        row = [PadicScalar.zero(p)] * size
        for c in range(n + 1):
            row[r + c] = b[n - c]
        rows.append(row)
    # fraction-free elimination is overkill at these sizes; use division
    det = PadicScalar(p, 1)
    for k in range(size):
        piv = next((i for i in range(k, size)
                    if not rows[i][k].is_zero_within_precision()), None)
        if piv is None:
            return PadicScalar.zero(p, known_to=1)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = det * -1
        det = det * rows[k][k]
        inv_row = rows[k]
        for i in range(k + 1, size):
            c = rows[i][k]
            if c.is_exact_zero():
                continue
            factor = c / inv_row[k]
            rows[i] = [x - factor * y for x, y in zip(rows[i], inv_row)]
    return det


def shadow_products(theta_E_pair, theta_EK_pair):
    """Cyclotomic shadows of the two-variable products.

    The equal-sign specializations are honest products; the mixed one is
    only known up to a unit multiple between its two summands, so what is
    returned for it is the pair of summands plus the unit-robust reduction:
    when both base series are units, coprimality questions against the
    equal-sign product collapse to the twisted series alone.
    """
    tp, tm = theta_E_pair
    Tp, Tm = theta_EK_pair
    out = {"pp": _product_profile(tp, Tp), "mm": _product_profile(tm, Tm)}
    mixed = {"summands": ("theta_E^+ * theta_EK^-", "theta_E^- * theta_EK^+"),
             "unit_ambiguity": True}
    base_units = (tp.profile and tp.profile.is_unit()
                  and tm.profile and tm.profile.is_unit())
    if base_units:
        mixed["reduction"] = {
            "valid": True,
            "statement": "base series are units: mixed-product coprimality "
                         "against the equal-sign product reduces to the "
                         "twisted pair",
            "plus_profile": Tp.profile.as_dict() if Tp.profile else None,
            "minus_profile": Tm.profile.as_dict() if Tm.profile else None,
        }
    else:
        mixed["reduction"] = {"valid": False,
                              "statement": "base series not certified units; "
                                           "no unit-robust reduction emitted"}
    out["mixed"] = mixed
    return out


def _product_profile(a, b):
    if a.profile is None or b.profile is None:
        return {"degenerate": True,
                "note": "a factor is zero within precision; no certificate"}
    merged = sorted(list(a.profile.slopes) + list(b.profile.slopes),
                    key=_slope_sort_key)
    prof = InvariantProfile(a.profile.mu + b.profile.mu,
                            a.profile.lam + b.profile.lam,
                            tuple(_merge_runs(merged)),
                            a.profile.stabilized and b.profile.stabilized)
    return {"profile": prof.as_dict(), "degenerate": False}


def _slope_sort_key(cs):
    _, s = cs
    return (0, 0) if s is None else (1, -s)   # infinite runs steepest


def _merge_runs(runs):
    out = []
    for c, s in runs:
        if out and out[-1][1] == s:
            out[-1] = (out[-1][0] + c, s)
        else:
            out.append((c, s))
    return out


def conjecture_b_report(curve_label, field_discriminant, p, theta_E_pair,
                        theta_EK_pair, surjectivity_known=False, cm_curve=False,
                        p_splits=None):
    """Structured pseudo-nullity verdict from the one-variable data.

    Inputs beyond the signed series are accepted as flags: the mod-p image
    surjectivity and CM facts are not computed here.  The verdict spells
    out which route (known one-variable main conjecture for CM curves, or
    the unconditional divisor inequality under surjectivity) supports the
    deduction, and flags every standing hypothesis that fails.
    """
    tp, tm = theta_E_pair
    Tp, Tm = theta_EK_pair
    report = {
        "curve": curve_label,
        "field_discriminant": field_discriminant,
        "p": p,
        "hypotheses": {},
        "conditions": {},
    }
    report["hypotheses"]["p_splits_in_K"] = p_splits
    if p_splits is False:
        report["hypotheses"]["warning"] = (
            "p is not split in K; the two-variable setup behind the deduction "
            "assumes split p, so the verdict is reported relative to that "
            "hypothesis")
    # (a): base plus series a unit
    try:
        cond_a = is_unit(tp)
        report["conditions"]["a"] = {"status": "holds" if cond_a else "fails",
                                     "statement": "theta_E^+ is a unit"}
    except PrecisionError as exc:
        cond_a = None
        report["conditions"]["a"] = {"status": "inconclusive", "detail": str(exc)}
    # (b): twisted pair coprime
    cert = coprime_certificate(Tp, Tm)
    report["conditions"]["b"] = {
        "status": {"coprime": "holds", "not-certified": "fails"}.get(
            cert.verdict, "inconclusive"),
        "statement": "theta_EK^+ and theta_EK^- share no irreducible factor",
        "certificate": cert.as_dict(),
    }
    # (c): twisted series are not units
    try:
        pTp, pTm = _profile_of(Tp), _profile_of(Tm)
        cond_c = pTp.lam != 0 and pTm.lam != 0
        report["conditions"]["c"] = {
            "status": "holds" if cond_c else "fails",
            "statement": "lambda(theta_EK^+) != 0 and lambda(theta_EK^-) != 0",
            "lambdas": [pTp.lam, pTm.lam],
        }
    except (PrecisionError, InvalidArgument):
        report["conditions"]["c"] = {"status": "inconclusive"}
        cond_c = None
    route = None
    if cm_curve:
        route = "one-variable main conjecture known for CM curves"
    elif surjectivity_known:
        route = ("mod-p^2 image surjectivity supplied as input: unconditional "
                 "divisor inequality route")
    ok = cond_a is True and cert.verdict == "coprime"
    if ok and route:
        verdict = "pseudo-null (verified under the stated route)"
    elif ok:
        verdict = ("pseudo-null conditionally (no surjectivity or CM input "
                   "flag supplied)")
    else:
        verdict = "inconclusive"
    report["route"] = route or "none supplied"
    report["verdict"] = verdict
    report["nontriviality"] = {
        "statement": "the codimension-two class of the two-variable quotient "
                     "is nonzero when condition (c) holds",
        "status": {True: "holds", False: "fails", None: "inconclusive"}[cond_c],
    }
    return report
