"""Theorem-level verification harness over computed diameter tables.

Everything here is an exact finite proxy: the two-sided diameter estimate
is scanned for its threshold index, the unstable-tail ratio law is checked
as a rational identity, and the membership probes are restricted to the
geometric family where a sign analysis decides boundedness exactly.
Absence of a threshold within the certified horizon is reported as
"inconclusive", never as "false".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .diameters import DiameterTable
from .exact import Rational, fraction_to_float
from .kothe import KotheFamily, c_pq
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport
from .sequences import UNSTABLE


@dataclass
class SandwichReport:
    """Two-sided estimate c_pq*alpha_4n <= log d_n <= c_pq*alpha_n.

    The upper bound must hold at every certified index; the lower bound
    from some threshold on.  ``n_found`` is the least such threshold seen,
    None when violations persist to the end of the certified range.
    """

    p: int
    q: int
    horizon: int
    n_found: int | None
    upper_violations: list[int] = field(default_factory=list)
    lower_violations: list[int] = field(default_factory=list)

    @property
    def conclusive(self) -> bool:
        return self.n_found is not None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "horizon": self.horizon,
            "upper_bound_violations": self.upper_violations,
            "lower_bound_violations_before_threshold": self.lower_violations,
            "N_found": self.n_found,
            "conclusive": self.conclusive,
        }


def verify_sandwich(
    family: KotheFamily, p: int, q: int, table: DiameterTable
) -> SandwichReport:
    """Exact scan of both bounds over the certified range (n >= 1)."""
    seq = family.seq
    c = c_pq(p, q)
    horizon = table.certified_horizon
    upper_violations: list[int] = []
    lower_violations: list[int] = []
    for n in range(1, horizon + 1):
        value = table.entry(n).log_value(seq)
        if value > c * seq.value(n):
            upper_violations.append(n)
        if value < c * seq.value(4 * n):
            lower_violations.append(n)
    if lower_violations and lower_violations[-1] >= horizon:
        n_found = None
    else:
        n_found = lower_violations[-1] + 1 if lower_violations else 1
    return SandwichReport(
        p=p,
        q=q,
        horizon=horizon,
        n_found=n_found,
        upper_violations=upper_violations,
        lower_violations=lower_violations,
    )


def eadd_ratio(
    family: KotheFamily, p: int, q: int, table: DiameterTable
) -> list[dict]:
    """Exact ratios -log(d_{n_a - 1}) / alpha_{n_a} over the tail band terms.

    Only asserted for unstable parameter sequences (the law the tail proves);
    each returned ratio is an exact rational and equals 1 - c_pq.
    """
    if family.seq.declared_class != UNSTABLE:
        raise ValueError(
            "the tail ratio law is only asserted for unstable alpha; "
            f"{family.seq.name} is declared {family.seq.declared_class}"
        )
    if table.method != "closed" or table.plan is None:
        raise ValueError("eadd_ratio needs a closed-form table with a plan")
    if table.a0 is None:
        raise ValueError(
            "table never enters the tail regime within its range; "
            "increase the count"
        )
    seq = family.seq
    out = []
    for row in table.plan:
        if row.a < table.a0 or row.j_a > table.certified_horizon:
            continue
        entry = table.entry(row.n_a - 1)
        ratio = (-entry.coeff * seq.value(entry.alpha_index)) / seq.value(row.n_a)
        out.append({"a": row.a, "n_a": row.n_a, "ratio": ratio})
    return out


@dataclass
class AAStatistic:
    """Window statistics for the ratios -log(d_n)/alpha_{n+1}."""

    tail_window: int
    per_pair: list[dict] = field(default_factory=list)
    proxy_inf_sup: Rational | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "tail_window": self.tail_window,
            "per_pair": self.per_pair,
            "proxy_inf_sup": self.proxy_inf_sup,
            "note": self.note,
        }


def aa_statistic(
    family: KotheFamily,
    tables: dict[tuple[int, int], DiameterTable],
    tail_window: int,
) -> AAStatistic:
    """Per-pair sup of -log(d_n)/alpha_{n+1} over the last ``tail_window``
    certified indices, plus the inf over p of the sup over q as a finite
    proxy.  One-sided by construction: it can refute a decay claim (the
    sup along the band subsequence never drops below 1 - c_pq for unstable
    alpha) but can only support one for stable alpha.
    """
    if tail_window < 0:
        raise ValueError("tail window must be >= 0")
    stat = AAStatistic(tail_window=tail_window)
    if tail_window == 0 or not tables:
        stat.note = "empty window: no statistics"
        return stat
    seq = family.seq
    by_p: dict[int, Rational] = {}
    for (p, q), table in sorted(tables.items()):
        horizon = table.certified_horizon
        lo = max(0, horizon - tail_window + 1)
        sup: Rational | None = None
        red_sup: Rational | None = None
        red_points = 0
        red_positions = set()
        if table.plan is not None and table.a0 is not None:
            red_positions = {
                row.n_a - 1
                for row in table.plan
                if row.a >= table.a0 and 0 <= row.n_a - 1 <= horizon
            }
        for n in range(lo, horizon + 1):
            entry = table.entry(n)
            ratio = (-entry.coeff * seq.value(entry.alpha_index)) / seq.value(n + 1)
            if sup is None or ratio > sup:
                sup = ratio
            if n in red_positions:
                red_points += 1
                if red_sup is None or ratio > red_sup:
                    red_sup = ratio
        record = {
            "p": p,
            "q": q,
            "window": [lo, horizon],
            "sup_ratio": sup,
            "sup_ratio_approx": fraction_to_float(sup)[0] if sup is not None else None,
            "band_subsequence_sup": red_sup,
            "band_points_in_window": red_points,
        }
        stat.per_pair.append(record)
        if sup is not None:
            cur = by_p.get(p)
            by_p[p] = sup if cur is None or sup > cur else cur
    if by_p:
        stat.proxy_inf_sup = min(by_p.values())
    if seq.declared_class == UNSTABLE:
        stat.note = (
            "unstable alpha: the sup along the band subsequence equals "
            "1 - c_pq per pair and never decays; the proxy stays above 1"
        )
    else:
        stat.note = (
            "finite-window sups reported; no law is asserted for this "
            "sequence class"
        )
    return stat


def edd_tail_check(
    family: KotheFamily,
    p: int,
    q: int,
    table: DiameterTable,
    upto: int | None = None,
) -> CheckReport:
    """Past the tail threshold the ratio sequence itself is descending and
    d_n is literally its (n+1)-th term; both facts checked exactly.

    ``upto`` restricts the scanned index range (defaults to the whole
    certified table).
    """
    params = {"p": p, "q": q, "alpha": family.seq.name}
    if table.tail_start is None:
        return CheckReport(
            criterion="edd-tail",
            params=params,
            verdict=INCONCLUSIVE,
            details={
                "note": "threshold not found within the table range "
                "(expected for stable alpha)"
            },
        )
    seq = family.seq
    horizon = table.certified_horizon
    if upto is not None:
        horizon = min(horizon, upto)
    threshold = table.tail_start
    witnesses = []
    for m in range(threshold + 1, horizon + 1):
        cur = family.ratio_coeff(p, q, m) * seq.value(m)
        nxt = family.ratio_coeff(p, q, m + 1) * seq.value(m + 1)
        if cur < nxt:
            witnesses.append({"type": "ratio-order", "m": m})
            break
    for n in range(threshold, horizon + 1):
        entry = table.entry(n)
        want = family.ratio_coeff(p, q, n + 1) * seq.value(n + 1)
        if entry.log_value(seq) != want:
            witnesses.append({"type": "value", "n": n})
            break
    return CheckReport(
        criterion="edd-tail",
        params=params,
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        details={"threshold": threshold, "horizon": horizon},
    )


@dataclass
class DeltaProbeReport:
    """Membership probe of t_n = e^(theta*alpha_{n+1}) in both dimension sets."""

    theta: Rational
    per_pair: list[dict] = field(default_factory=list)
    kothe_member: bool = False
    kothe_witness_p: int | None = None
    lambda1_member: bool = False
    lambda1_witness_k: int | None = None

    @property
    def verdicts_coincide(self) -> bool:
        return self.kothe_member == self.lambda1_member

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "per_pair": self.per_pair,
            "kothe_member": self.kothe_member,
            "kothe_witness_p": self.kothe_witness_p,
            "lambda1_member": self.lambda1_member,
            "lambda1_witness_k": self.lambda1_witness_k,
            "verdicts_coincide": self.verdicts_coincide,
        }


def delta_membership_probe(
    family: KotheFamily,
    theta: Rational,
    tables: dict[tuple[int, int], DiameterTable],
) -> DeltaProbeReport:
    """Exact sign analysis of sup_n (theta*alpha_{n+1} + log d_n).

    Tail-regime tables admit an exact per-pair verdict: off-band positions
    contribute (theta + c_pq)*alpha_{n+1} and tail band positions
    (theta + c_pq - 1)*alpha_{n_a}, so the sup is finite iff
    theta <= -c_pq.  Both family verdicts reduce to the sign of theta:
    membership on the Köthe side means for every p some q works, and
    sup_q(-c_pq) = 1/p; on the power-series side the k-th norm of the probe
    is e^((theta - 1/k)*alpha_{n+1}).
    """
    theta = Fraction(theta)
    report = DeltaProbeReport(theta=theta)
    for (p, q), table in sorted(tables.items()):
        c = c_pq(p, q)
        record: dict = {"p": p, "q": q, "neg_c_pq": -c}
        if table.a0 is not None and family.seq.declared_class == UNSTABLE:
            record["bounded"] = theta <= -c
            record["off_band_exponent_coeff"] = theta + c
            record["band_exponent_coeff"] = theta + c - 1
            record["mode"] = "tail-sign-analysis"
        else:
            seq = family.seq
            sup: Rational | None = None
            for n in range(table.certified_horizon + 1):
                e = table.entry(n)
                v = theta * seq.value(n + 1) + e.log_value(seq)
                if sup is None or v > sup:
                    sup = v
            record["bounded"] = None
            record["prefix_sup_exponent"] = sup
            record["prefix_sup_exponent_approx"] = (
                fraction_to_float(sup)[0] if sup is not None else None
            )
            record["mode"] = "empirical-prefix"
        report.per_pair.append(record)

    if theta <= 0:
        report.kothe_member = True
        report.lambda1_member = True
    else:
        report.kothe_member = False
        report.kothe_witness_p = math.ceil(1 / theta)
        report.lambda1_member = False
        report.lambda1_witness_k = math.ceil(1 / theta)
    return report
