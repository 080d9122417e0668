"""Feasibility battery for parameter sets.

Six implemented checks (handshake parity, integral multiplicities, nonnegative
Krein parameters, the absolute bound, quotient integrality, conference-graph
order) plus registered placeholders for conditions this library does not
compute, so a report honestly distinguishes "passes this battery" from "passes
every known condition".
"""

from dataclasses import dataclass, field as dfield

import sympy

from . import imprim
from .exactalg import xsign
from .params import (
    InfeasibleArrayError,
    NotQuotientPolynomialError,
    compute_eigendata,
    krein_xval,
    recover_from_parameter_array,
)

CHECK_ORDER = (
    "handshake",
    "multiplicities",
    "krein",
    "absolute_bound",
    "quotient_integrality",
    "conference",
)

NOT_IMPLEMENTED_CHECKS = (
    "triple_intersection",
    "forbidden_quadruple",
)

NOT_IMPLEMENTED = "not-implemented"


class UnknownCheckError(ValueError):
    pass


@dataclass(frozen=True)
class Reason:
    check: str
    indices: tuple
    text: str


@dataclass
class FeasibilityReport:
    array: object
    verdict: str  # "feasible-so-far" | "infeasible"
    reasons: list = dfield(default_factory=list)
    skipped: tuple = NOT_IMPLEMENTED_CHECKS

    @property
    def infeasible(self):
        return bool(self.reasons)

    def machine_line(self):
        body = "; ".join(dict.fromkeys(r.text for r in self.reasons))
        return "\t".join(
            (str(self.array.order), self.array.render(), self.verdict, body)
        )

    def text_lines(self):
        out = [f"array: {self.array.render()}",
               f"order: {self.array.order}",
               f"verdict: {self.verdict}"]
        for r in self.reasons:
            out.append(f"  fail {r.check}: {r.text}")
        for c in self.skipped:
            out.append(f"  skip {c}: {NOT_IMPLEMENTED}")
        return out


def _set_str(s):
    return "{" + ", ".join(str(i) for i in sorted(s)) + "}"


def check_handshake(t, e=None):
    out = []
    for i in range(1, t.d + 1):
        for j in range(1, t.d + 1):
            if (t.k[i] * t.p[i][i][j]) % 2:
                out.append(Reason("handshake", (i, j), "handshake"))
    return out


def check_multiplicities(t, e):
    bad = tuple(j for j, v in enumerate(e.m_int) if v is None)
    if bad:
        return [Reason("multiplicities", bad, "multiplicities")]
    return []


def krein_signs(e):
    """Exact sign of every q^h_ij, cached on the eigendata object."""
    cached = getattr(e, "_krein_signs", None)
    if cached is not None:
        return cached
    d = e.tensor.d
    signs = {}
    for h in range(d + 1):
        for i in range(d + 1):
            for j in range(i, d + 1):
                s = xsign(krein_xval(e, h, i, j))
                signs[(h, i, j)] = signs[(h, j, i)] = s
    e._krein_signs = signs
    return signs


def check_krein(t, e):
    signs = krein_signs(e)
    out = []
    for h in range(t.d + 1):
        for i in range(t.d + 1):
            for j in range(i, t.d + 1):
                if signs[(h, i, j)] < 0:
                    out.append(
                        Reason("krein", (h, i, j), f"q^{h}_{{{i}{j}}} < 0")
                    )
    return out


def check_absolute_bound(t, e):
    if not e.multiplicities_integral:
        return []  # reported by the multiplicities check instead
    signs = krein_signs(e)
    out = []
    for i in range(1, t.d + 1):
        for j in range(i, t.d + 1):
            total = sum(
                e.m_int[h] for h in range(t.d + 1) if signs[(h, i, j)] != 0
            )
            bound = (
                e.m_int[i] * (e.m_int[i] + 1) // 2
                if i == j
                else e.m_int[i] * e.m_int[j]
            )
            if total > bound:
                out.append(Reason("absolute_bound", (i, j), "absolute bound"))
    return out


def _nontrivial_closed_sets(t):
    return [
        s for s in imprim.closed_subsets(t) if 1 < len(s) < t.d + 1
    ]


def check_quotient_integrality(t, e=None):
    out = []
    for s in _nontrivial_closed_sets(t):
        name = _set_str(s)
        try:
            st = imprim.ImprimitivityStructure(
                t, s, imprim.tilde_classes(t, s)
            )
        except imprim.ImprimitivityError:
            out.append(Reason(
                "quotient_integrality", (tuple(sorted(s)),),
                f"n~ not integral in A/{name}",
            ))
            continue
        try:
            imprim.quotient_parameters(t, st)
        except imprim.QuotientInfeasibleError as err:
            detail = err.detail or ()
            if detail and detail[0] == "k":
                text = f"k~_{detail[1]} not integral in A/{name}"
            elif len(detail) == 4:
                _, h, i, j = detail
                text = f"p~^{h}_{{{i}{j}}} not integral in A/{name}"
            else:
                text = f"quotient parameters not integral in A/{name}"
            out.append(Reason(
                "quotient_integrality", (tuple(sorted(s)),) + tuple(detail),
                text,
            ))
    return out


def _is_sum_of_two_squares(n):
    if n == 0:
        return True
    return all(
        p % 4 != 3 or k % 2 == 0 for p, k in sympy.factorint(n).items()
    )


def _conference_order_infeasible(q):
    """q is a 2-class tensor; True iff it carries conference-graph parameters
    and its order is not a sum of two squares."""
    n = q.n
    if n % 4 != 1:
        return False
    for cls in (1, 2):
        if (
            2 * q.k[cls] == n - 1
            and 4 * q.p[cls][cls][cls] == n - 5
            and 4 * q.p[3 - cls][cls][cls] == n - 1
        ):
            return not _is_sum_of_two_squares(n)
    return False


def check_conference(t, e=None):
    out = []
    candidates = [frozenset({0})] + _nontrivial_closed_sets(t)
    for s in candidates:
        if s == frozenset({0}):
            if t.d != 2:
                continue
            q = t
        else:
            try:
                st = imprim.ImprimitivityStructure(
                    t, s, imprim.tilde_classes(t, s)
                )
                q = imprim.quotient_parameters(t, st)
            except (imprim.ImprimitivityError, imprim.QuotientInfeasibleError):
                continue
            if q.d != 2:
                continue
        if _conference_order_infeasible(q):
            out.append(Reason(
                "conference", (tuple(sorted(s)),),
                f"conference for A/{_set_str(s)}",
            ))
    return out


_CHECKS = {
    "handshake": check_handshake,
    "multiplicities": check_multiplicities,
    "krein": check_krein,
    "absolute_bound": check_absolute_bound,
    "quotient_integrality": check_quotient_integrality,
    "conference": check_conference,
}


def run_check(t, check, eigendata=None):
    """Reasons produced by one check (empty list = pass); the registered
    unimplemented checks return the NOT_IMPLEMENTED sentinel."""
    if check in NOT_IMPLEMENTED_CHECKS:
        return NOT_IMPLEMENTED
    if check not in _CHECKS:
        raise UnknownCheckError(check)
    fn = _CHECKS[check]
    if check in ("multiplicities", "krein", "absolute_bound"):
        e = eigendata if eigendata is not None else compute_eigendata(t)
        return fn(t, e)
    return fn(t, eigendata)


def run_all(a):
    """Full battery over a parameter array; every check runs even after the
    first failure."""
    try:
        t = recover_from_parameter_array(a)
    except (InfeasibleArrayError, NotQuotientPolynomialError, ValueError) as err:
        return FeasibilityReport(
            array=a,
            verdict="infeasible",
            reasons=[Reason("recovery", (), f"parameter recovery failed: {err}")],
        )
    e = compute_eigendata(t)
    reasons = []
    for check in CHECK_ORDER:
        reasons.extend(run_check(t, check, eigendata=e))
    verdict = "infeasible" if reasons else "feasible-so-far"
    return FeasibilityReport(array=a, verdict=verdict, reasons=reasons)


def machine_report(reports):
    """Line-oriented report: order, array, verdict, semicolon-joined reasons."""
    return "\n".join(r.machine_line() for r in reports)
