"""Kolmogorov diameter sequences by two independent routes.

Route one (the oracle) literally sorts the exact ratio terms
``a_{p,n}/a_{q,n}`` in descending order and reads the (n+1)-th term.  Route
two never sorts: it places each on-band term by an index formula (how many
off-band terms beat it) and fills the remaining positions with the off-band
terms in increasing order, attributing every position to one of the segment
families head/J/K/L/M or to the eventually-decreasing tail that takes over
when the placement search stops finding qualifying off-band terms.  The two
routes agreeing exactly, value by value, is the central invariant of the
package.

Throughout, "red" refers to a term e^((c-1) alpha_{n_a}) coming from a band
element n_a, and "blue" to a term e^(c alpha_m) with m off the band.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exact import LogExponent, LogTerm, Rational, exp_to_float
from .grid import BandIndexing
from .kothe import KotheFamily, a_pq, c_pq
from .sequences import PrefixExhaustedError

HEAD = "head"
SEG_J = "J"
SEG_K = "K"
SEG_L = "L"
SEG_M = "M"
TAIL = "tail"
ORACLE = "oracle"


class CoverageError(RuntimeError):
    """The closed-form segment families failed to tile the index range."""


@dataclass(frozen=True)
class DiameterEntry:
    """One diameter d_n = e^(coeff * alpha_{alpha_index})."""

    n: int
    coeff: Rational
    alpha_index: int
    segment: str
    source_ratio_index: int
    certified: bool

    def term(self) -> LogTerm:
        return LogTerm(self.coeff, self.alpha_index)

    def log_value(self, seq) -> Rational:
        return self.coeff * seq.value(self.alpha_index)


@dataclass(frozen=True)
class PlanRow:
    """Placement record for the a-th band term.

    ``i_a`` is the largest off-band m with alpha_m <= A_pq * alpha_{n_a}
    beyond n_a, or None when no such m exists (the tail trigger); ``k_a``
    locates i_a between consecutive column-p markers; ``j_a`` is the
    diameter index where the band term lands.
    """

    a: int
    n_a: int
    i_a: int | None
    k_a: int | None
    j_a: int


@dataclass
class DiameterTable:
    p: int
    q: int
    method: str
    seq_name: str
    entries: list[DiameterEntry]
    certified_horizon: int
    plan: list[PlanRow] | None = None
    a0: int | None = None
    tail_start: int | None = None
    oracle_prefix: int | None = None
    diagnostic: str | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, n: int) -> DiameterEntry:
        return self.entries[n]

    def certified_entries(self) -> list[DiameterEntry]:
        return self.entries[: self.certified_horizon + 1]


def epsilon_n(table: DiameterTable, n: int) -> LogExponent:
    """The exact exponent -log d_n, defined only on the certified range."""
    if n < 0 or n > table.certified_horizon:
        raise ValueError(
            f"diameter index {n} is not certified "
            f"(horizon {table.certified_horizon})"
        )
    e = table.entries[n]
    return LogExponent(-e.coeff, e.alpha_index)


# -- route one: the sorting oracle -------------------------------------------


def oracle_diameters(
    family: KotheFamily, p: int, q: int, prefix_len: int
) -> DiameterTable:
    """Sort the first ``prefix_len`` exact ratio terms in descending order.

    d_n is the (n+1)-th sorted term.  An entry is certified final when it is
    strictly greater than e^(c_pq alpha_{prefix_len+1}), which dominates
    every unseen term; ties with that bound stay uncertified because an
    unseen term could equal them.
    """
    if prefix_len < 2:
        raise ValueError("oracle prefix must have at least 2 terms")
    seq = family.seq
    terms = []
    for m in range(1, prefix_len + 1):
        coeff = family.ratio_coeff(p, q, m)
        terms.append((coeff * seq.value(m), coeff, m))
    # descending by exact value; ties broken by smaller ratio index
    terms.sort(key=lambda t: (-t[0], t[2]))

    bound = c_pq(p, q) * seq.value(prefix_len + 1)
    horizon = -1
    for idx, (value, _, _) in enumerate(terms):
        if value > bound:
            horizon = idx
        else:
            break
    if horizon < 0:
        return DiameterTable(
            p=p,
            q=q,
            method="oracle",
            seq_name=seq.name,
            entries=[],
            certified_horizon=-1,
            oracle_prefix=prefix_len,
            diagnostic=(
                f"prefix of {prefix_len} ratio terms certifies no diameter; "
                "increase the prefix length"
            ),
        )
    entries = [
        DiameterEntry(
            n=idx,
            coeff=coeff,
            alpha_index=m,
            segment=ORACLE,
            source_ratio_index=m,
            certified=idx <= horizon,
        )
        for idx, (_, coeff, m) in enumerate(terms)
    ]
    return DiameterTable(
        p=p,
        q=q,
        method="oracle",
        seq_name=seq.name,
        entries=entries,
        certified_horizon=horizon,
        oracle_prefix=prefix_len,
    )


def oracle_diameters_certified(
    family: KotheFamily, p: int, q: int, count: int, max_doublings: int = 24
) -> DiameterTable:
    """Grow the sorted prefix until the first ``count`` entries are certified."""
    prefix = count + 16
    for _ in range(max_doublings):
        table = oracle_diameters(family, p, q, prefix)
        if table.certified_horizon >= count - 1:
            return table
        prefix *= 2
    raise PrefixExhaustedError(
        f"could not certify {count} oracle diameters within "
        f"{prefix} ratio terms"
    )


# -- route two: index formulas ------------------------------------------------


def _find_i(seq, bnd: BandIndexing, threshold_mult: Rational, n_a: int) -> int | None:
    """Greatest off-band m with alpha_m <= A_pq alpha_{n_a}, None if none > n_a.

    alpha is strictly increasing, so the qualifying set is a prefix: scan up
    to its last element, then step down over the (at most q-p wide) band
    block to the nearest off-band index.
    """
    threshold = threshold_mult * seq.value(n_a)
    m = n_a
    while seq.value(m + 1) <= threshold:
        m += 1
    while m > n_a and bnd.contains(m):
        m -= 1
    return m if m > n_a else None


def _build_plan(
    family: KotheFamily, bnd: BandIndexing, count: int
) -> list[PlanRow]:
    """Placement rows until the band terms leave the requested range."""
    seq = family.seq
    mult = a_pq(bnd.p, bnd.q)
    rows: list[PlanRow] = []
    a = 0
    while True:
        a += 1
        n_a = bnd.element(a)
        i_a = _find_i(seq, bnd, mult, n_a)
        if i_a is None:
            k_a = None
            j_a = n_a - 1
        else:
            k_a = bnd.locate_k(i_a)
            j_a = i_a - bnd.count_below(i_a) + a - 1
            # the count form above must coincide with the marker form
            if j_a != i_a - bnd.s_k(k_a + 1) + a:
                raise CoverageError(
                    f"marker index s_({k_a + 1}) disagrees with the off-band "
                    f"count at a={a}"
                )
        if rows and j_a <= rows[-1].j_a:
            raise CoverageError(
                f"band term placements not strictly increasing at a={a}"
            )
        rows.append(PlanRow(a=a, n_a=n_a, i_a=i_a, k_a=k_a, j_a=j_a))
        if j_a > count - 1:
            return rows


def _persistent_tail_start(rows: list[PlanRow]) -> int | None:
    """First a of the maximal suffix of rows with no qualifying i_a."""
    if not rows or rows[-1].i_a is not None:
        return None
    a0 = rows[-1].a
    for row in reversed(rows[:-1]):
        if row.i_a is not None:
            break
        a0 = row.a
    return a0


def closedform_diameters(
    family: KotheFamily, p: int, q: int, count: int
) -> DiameterTable:
    """Diameters d_0..d_{count-1} from the segment index formulas.

    Band terms are placed by the plan; off-band terms fill the remaining
    positions in increasing order of their ratio index.  Segment labels
    head/J/K/L/M are then derived from the interval formulas and every
    labelled interval is checked against the filled values; a gap, an
    overlap, or a value mismatch raises CoverageError.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    seq = family.seq
    c = c_pq(p, q)
    bnd = BandIndexing(p=p, q=q)
    rows = _build_plan(family, bnd, count)
    n_1 = bnd.element(1)

    # values: reds by plan position, blues in increasing index order
    slot_coeff: list[Rational | None] = [None] * count
    slot_index: list[int] = [0] * count
    red_at: dict[int, PlanRow] = {}
    for row in rows:
        if 0 <= row.j_a < count:
            red_at[row.j_a] = row
            slot_coeff[row.j_a] = c - 1
            slot_index[row.j_a] = row.n_a
    m = 0
    for n in range(count):
        if slot_coeff[n] is not None:
            continue
        m += 1
        while bnd.contains(m):
            m += 1
        slot_coeff[n] = c
        slot_index[n] = m

    # segment labels from the interval formulas
    labels: list[str | None] = [None] * count
    a0 = _persistent_tail_start(rows)
    if a0 is None:
        tail_start: int | None = None
    elif a0 == 1:
        tail_start = 0
    else:
        tail_start = rows[a0 - 2].j_a + 1

    def mark(start: int, end: int, label: str, shift: int | None) -> None:
        """Label [start, end] and check the formula against the fill."""
        for n in range(max(start, 0), min(end, count - 1) + 1):
            if labels[n] is not None:
                raise CoverageError(
                    f"segment overlap at diameter index {n} "
                    f"({labels[n]} vs {label})"
                )
            labels[n] = label
            if shift is not None and slot_index[n] != n + shift:
                raise CoverageError(
                    f"segment {label} expects alpha index {n + shift} at "
                    f"diameter index {n}, fill has {slot_index[n]}"
                )

    mark(0, min(n_1 - 2, count - 1), HEAD, 1)
    limit = count - 1 if tail_start is None else tail_start - 1
    prev: PlanRow | None = None
    for row in rows:
        if a0 is not None and row.a >= a0:
            break
        if row.j_a <= limit:
            mark(row.j_a, row.j_a, SEG_J, None)
        if row.i_a is None:
            # transient miss: the band term sits right after the off-band
            # terms below n_a; the stretch before it follows the generic
            # fill and is attributed to M
            start = (prev.j_a + 1 if prev else n_1 - 1)
            mark(start, min(row.j_a - 1, limit), SEG_M, None)
        else:
            s_next = bnd.s_k(row.k_a + 1)
            if row.a == 1:
                # strict paper tiling: head, then one K interval per
                # diagonal marker crossed below i_1, then M of this row
                for k in range(bnd.k_min, row.k_a):
                    mark(
                        bnd.marker(k) - bnd.s_k(k),
                        min(bnd.marker(k + 1) - bnd.s_k(k + 1) - 1, limit),
                        SEG_K,
                        bnd.s_k(k + 1),
                    )
                mark(
                    bnd.marker(row.k_a) - bnd.s_k(row.k_a),
                    min(row.j_a - 1, limit),
                    SEG_M,
                    s_next,
                )
            elif prev.i_a is None:
                # the previous band term had no qualifying i: the paper
                # intervals do not apply between the two; generic fill
                mark(prev.j_a + 1, min(row.j_a - 1, limit), SEG_M, None)
            elif row.k_a == prev.k_a:
                # both i's sit between the same pair of markers, so the
                # whole stretch is this row's M interval (the published
                # left endpoint goes stale when band terms stack)
                mark(
                    prev.j_a + 1,
                    min(row.j_a - 1, limit),
                    SEG_M,
                    s_next - (row.a - 1),
                )
            else:
                # strict paper tiling: L of the previous row, K per marker
                # crossed between the two i's, then M of this row
                s_prev_next = bnd.s_k(prev.k_a + 1)
                mark(
                    prev.j_a + 1,
                    min(
                        bnd.marker(prev.k_a + 1) - s_prev_next + prev.a - 1,
                        limit,
                    ),
                    SEG_L,
                    s_prev_next - prev.a,
                )
                for k in range(prev.k_a + 1, row.k_a):
                    mark(
                        bnd.marker(k) - bnd.s_k(k) + prev.a,
                        min(
                            bnd.marker(k + 1) - bnd.s_k(k + 1) + prev.a - 1,
                            limit,
                        ),
                        SEG_K,
                        bnd.s_k(k + 1) - prev.a,
                    )
                mark(
                    bnd.marker(row.k_a) - bnd.s_k(row.k_a) + row.a - 1,
                    min(row.j_a - 1, limit),
                    SEG_M,
                    s_next - (row.a - 1),
                )
        prev = row

    if tail_start is not None:
        if a0 > 1:
            last = rows[a0 - 2]
            s_last = bnd.s_k(last.k_a + 1)
            if s_last != a0:
                raise CoverageError(
                    f"tail handover expects marker index {a0}, got {s_last}"
                )
            mark(
                last.j_a + 1,
                min(bnd.marker(last.k_a + 1) - s_last + last.a - 1, count - 1),
                SEG_L,
                s_last - last.a,
            )
        for n in range(tail_start, count):
            if labels[n] is not None:
                continue
            labels[n] = TAIL
            if n in red_at:
                if red_at[n].n_a != n + 1:
                    raise CoverageError(
                        f"tail band term at {n} should come from alpha "
                        f"index {n + 1}"
                    )
            elif slot_index[n] != n + 1:
                raise CoverageError(
                    f"tail expects alpha index {n + 1} at diameter index {n}, "
                    f"fill has {slot_index[n]}"
                )

    gaps = [n for n in range(count) if labels[n] is None]
    if gaps:
        raise CoverageError(f"segment families leave a gap at index {gaps[0]}")

    entries = [
        DiameterEntry(
            n=n,
            coeff=slot_coeff[n],
            alpha_index=slot_index[n],
            segment=labels[n],
            source_ratio_index=slot_index[n],
            certified=True,
        )
        for n in range(count)
    ]
    # monotonicity of the assembled table (exact)
    for a_entry, b_entry in zip(entries, entries[1:]):
        if a_entry.log_value(seq) < b_entry.log_value(seq):
            raise CoverageError(
                f"diameters not non-increasing at index {b_entry.n}"
            )
    return DiameterTable(
        p=p,
        q=q,
        method="closed",
        seq_name=seq.name,
        entries=entries,
        certified_horizon=count - 1,
        plan=rows,
        a0=a0,
        tail_start=tail_start,
    )


def entry_to_json(entry: DiameterEntry, seq) -> dict:
    value, clamped = exp_to_float(entry.log_value(seq))
    payload = {
        "n": entry.n,
        "coeff": entry.coeff,
        "alpha_index": entry.alpha_index,
        "segment": entry.segment,
        "source_ratio_index": entry.source_ratio_index,
        "certified": entry.certified,
        "approx_value": value,
    }
    if clamped:
        payload["approx_clamped"] = True
    return payload
