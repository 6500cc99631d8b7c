"""Command-line front end: deterministic CSV/JSON export of every operation.

Identical configurations produce byte-identical output (there are no
timestamps); every exact value is emitted as a "p/q" rational string and
floats only ever appear next to their exact counterpart, marked
display-only.

Exit codes: 0 success, 2 invalid usage or alpha spec, 3 uncertifiable
horizon or exhausted sequence prefix, 4 file I/O failure, 5 internal
segment-coverage failure.
"""
from __future__ import annotations

import io
import json
import math
import os
import sys
from fractions import Fraction

import click

from . import diameters as dm
from . import kothe as km
from . import sequences as sq
from . import verify as vf
from .exact import exp_to_float, format_rational, fraction_to_float, parse_rational
from .grid import band, column_of, unpair
from .report import SCHEMA_VERSION, jsonable

EXIT_BAD_CONFIG = 2
EXIT_UNCERTIFIABLE = 3
EXIT_IO = 4
EXIT_INTERNAL = 5

OUT_DIR_ENV = "KOTHEDIM_OUT"

_CSV_HEADER = f"# kothedim schema={SCHEMA_VERSION}"


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _alpha(spec: str) -> sq.ExponentSequence:
    try:
        return sq.ExponentSequence.from_spec(spec)
    except sq.SequenceError as exc:
        _fail(EXIT_BAD_CONFIG, str(exc))


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            p_str, q_str = chunk.split(":")
            p, q = int(p_str), int(q_str)
        except ValueError:
            _fail(EXIT_BAD_CONFIG, f"bad pair {chunk!r}; expected like 1:2")
        if not q > p >= 1:
            _fail(EXIT_BAD_CONFIG, f"pair {chunk!r} must satisfy q > p >= 1")
        pairs.append((p, q))
    if not pairs:
        _fail(EXIT_BAD_CONFIG, "no pairs given")
    return pairs


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    base = os.environ.get(OUT_DIR_ENV)
    path = os.path.join(base, out) if base and not os.path.isabs(out) else out
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {path}: {exc}")
    click.echo(f"wrote {path}", err=True)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    buf.write(_CSV_HEADER + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(cell) for cell in row) + "\n")
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    payload = {"schema": SCHEMA_VERSION, **payload}
    return json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n"


def _float_str(x: float) -> str:
    return repr(x)


@click.group()
def main() -> None:
    """Exact Kolmogorov diameters of a two-regime Köthe space family."""


# -- grid ---------------------------------------------------------------------


@main.command("grid")
@click.option("--max-n", type=int, default=21, show_default=True)
@click.option("--p", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--count", type=int, default=20, show_default=True)
@click.option("--out", type=str, default=None)
def grid_cmd(max_n: int, p: int | None, q: int | None, count: int, out: str | None):
    """Print the pairing table, or a band enumeration when --p/--q are given."""
    if (p is None) != (q is None):
        _fail(EXIT_BAD_CONFIG, "give both --p and --q or neither")
    if p is not None:
        if not q > p >= 1:
            _fail(EXIT_BAD_CONFIG, "need q > p >= 1")
        b = band(p, q, count)
        markers = {}
        k = b.k_min
        while True:
            s = b.s_k(k)
            if s > count:
                break
            markers[s] = k
            k += 1
        rows = []
        for i in range(1, count + 1):
            n = b.element(i)
            x, y = unpair(n)
            rows.append([i, n, x, y, markers.get(i, "")])
        _emit(_csv(rows, ["i", "n", "x", "y", "marker_k"]), out)
        return
    rows = []
    for n in range(1, max_n + 1):
        x, y = unpair(n)
        rows.append([n, x, y, column_of(n)])
    _emit(_csv(rows, ["n", "x", "y", "column"]), out)


# -- gen-matrix ----------------------------------------------------------------


@main.command("gen-matrix")
@click.option("--alpha", "alpha_spec", required=True)
@click.option("--k-max", type=int, default=6, show_default=True)
@click.option("--n-max", type=int, default=15, show_default=True)
@click.option("--out", type=str, default=None)
def gen_matrix_cmd(alpha_spec: str, k_max: int, n_max: int, out: str | None):
    """Export the log-domain matrix entries e^(coeff * alpha_n)."""
    family = km.KotheFamily(_alpha(alpha_spec))
    rows = []
    try:
        for k in range(1, k_max + 1):
            for n in range(1, n_max + 1):
                term = family.log_entry(k, n)
                approx, _ = exp_to_float(term.log_value(family.seq))
                rows.append(
                    [k, n, column_of(n), format_rational(term.coeff), _float_str(approx)]
                )
    except sq.PrefixExhaustedError as exc:
        _fail(EXIT_UNCERTIFIABLE, str(exc))
    _emit(_csv(rows, ["k", "n", "column", "coeff", "approx"]), out)


# -- diameters -----------------------------------------------------------------


def _tables_for(
    family: km.KotheFamily,
    p: int,
    q: int,
    count: int,
    method: str,
    horizon: int | None = None,
) -> tuple[dm.DiameterTable | None, dm.DiameterTable | None]:
    oracle = closed = None
    try:
        if method in ("oracle", "both"):
            if horizon is None:
                oracle = dm.oracle_diameters_certified(family, p, q, count)
            else:
                oracle = dm.oracle_diameters(family, p, q, horizon)
                if not oracle.entries:
                    _fail(EXIT_UNCERTIFIABLE, oracle.diagnostic)
        if method in ("closed", "both"):
            closed = dm.closedform_diameters(family, p, q, count)
    except sq.PrefixExhaustedError as exc:
        _fail(EXIT_UNCERTIFIABLE, str(exc))
    except dm.CoverageError as exc:
        _fail(EXIT_INTERNAL, f"segment coverage failure: {exc}")
    return oracle, closed


@main.command("diameters")
@click.option("--alpha", "alpha_spec", required=True)
@click.option("--p", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--count", type=int, default=50, show_default=True)
@click.option(
    "--horizon",
    type=int,
    default=None,
    help="Fixed ratio-prefix length for the oracle (default: grown until "
    "the first count entries certify); must be >= count.",
)
@click.option(
    "--method",
    type=click.Choice(["oracle", "closed", "both"]),
    default="both",
    show_default=True,
)
@click.option(
    "--output",
    type=click.Choice(["csv", "json", "table"]),
    default="csv",
    show_default=True,
)
@click.option("--out", type=str, default=None)
def diameters_cmd(alpha_spec, p, q, count, horizon, method, output, out):
    """Compute d_n(U_q, U_p) for n < count."""
    if not q > p >= 1:
        _fail(EXIT_BAD_CONFIG, "need q > p >= 1")
    if horizon is not None and horizon < count:
        _fail(EXIT_BAD_CONFIG, "--horizon must be at least --count")
    family = km.KotheFamily(_alpha(alpha_spec))
    seq = family.seq
    oracle, closed = _tables_for(family, p, q, count, method, horizon)
    primary = closed if closed is not None else oracle

    rows = []
    for n in range(min(count, len(primary.entries))):
        e = primary.entry(n)
        approx, _ = exp_to_float(e.log_value(seq))
        certified = e.certified
        if method == "both" and n < len(oracle.entries):
            certified = certified and oracle.entry(n).certified
        row = [
            n,
            format_rational(e.coeff),
            e.alpha_index,
            e.segment,
            _float_str(approx),
            certified,
        ]
        if method == "both":
            o = oracle.entry(n)
            # agreement is only meaningful where the oracle entry is final
            row += [
                format_rational(o.coeff),
                o.alpha_index,
                o.log_value(seq) == e.log_value(seq) if o.certified else "",
            ]
        rows.append(row)
    header = ["n", "coeff", "alpha_index", "segment", "approx_value", "certified"]
    if method == "both":
        header += ["oracle_coeff", "oracle_alpha_index", "values_equal"]

    if output == "json":
        payload = {
            "p": p,
            "q": q,
            "alpha": seq.name,
            "method": method,
            "floats_display_only": True,
            "entries": [
                dm.entry_to_json(primary.entry(n), seq)
                for n in range(min(count, len(primary.entries)))
            ],
        }
        if method == "both":
            payload["oracle_agrees"] = all(r[-1] for r in rows if r[-1] != "")
        _emit(_json_text(payload), out)
    elif output == "csv":
        _emit(_csv(rows, header), out)
    else:
        widths = [max(len(str(h)), max((len(str(r[i])) for r in rows), default=0)) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        for r in rows:
            lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
        _emit("\n".join(lines) + "\n", out)


# -- check ---------------------------------------------------------------------


@main.command("check")
@click.option(
    "--criterion",
    type=click.Choice(["nuclearity", "dn", "omega", "d2", "regularity"]),
    required=True,
)
@click.option("--alpha", "alpha_spec", required=True)
@click.option("--p", type=int, default=1, show_default=True)
@click.option("--k", type=int, default=None)
@click.option("--j", "j_value", type=str, default=None)
@click.option("--lambda", "lambda_value", type=str, default=None)
@click.option("--n", "--N", "horizon", type=int, default=1000, show_default=True)
@click.option("--b", "--B", "bound", type=str, default="1000000")
@click.option("--search-cap", type=int, default=100_000, show_default=True)
@click.option("--out", type=str, default=None)
def check_cmd(criterion, alpha_spec, p, k, j_value, lambda_value, horizon, bound, search_cap, out):
    """Run one matrix criterion check and emit its JSON report."""
    family = km.KotheFamily(_alpha(alpha_spec))
    try:
        if criterion == "nuclearity":
            report = km.check_nuclearity(family, k or 1, horizon)
        elif criterion == "dn":
            lam = parse_rational(lambda_value) if lambda_value else km.dn_lambda_bound(p) / 2
            report = km.check_dn(family, p, lam, horizon)
        elif criterion == "omega":
            kk = k if k is not None else p + 1
            j = parse_rational(j_value) if j_value else Fraction(math.ceil(km.omega_j_bound(p, kk)))
            report = km.check_omega(family, p, kk, j, horizon)
        elif criterion == "d2":
            jj = int(j_value) if j_value else 1
            report = km.check_d2_failure(family, jj, parse_rational(bound), search_cap)
        else:
            report = km.check_regularity(family, horizon)
    except km.SearchCapExceeded as exc:
        _fail(EXIT_UNCERTIFIABLE, str(exc))
    except (ValueError, sq.SequenceError) as exc:
        _fail(EXIT_BAD_CONFIG, str(exc))
    _emit(_json_text(report.to_json()), out)


# -- verify --------------------------------------------------------------------


@main.command("verify")
@click.option(
    "--what",
    type=click.Choice(["sandwich", "eadd", "aa", "edd-tail", "delta-probe"]),
    required=True,
)
@click.option("--alpha", "alpha_spec", required=True)
@click.option("--pairs", type=str, default="1:2", show_default=True)
@click.option("--count", type=int, default=200, show_default=True)
@click.option("--theta", type=str, default="0")
@click.option("--tail-window", type=int, default=50, show_default=True)
@click.option("--out", type=str, default=None)
def verify_cmd(what, alpha_spec, pairs, count, theta, tail_window, out):
    """Theorem-level verifications over closed-form diameter tables."""
    family = km.KotheFamily(_alpha(alpha_spec))
    pair_list = _parse_pairs(pairs)
    tables: dict[tuple[int, int], dm.DiameterTable] = {}
    try:
        for p, q in pair_list:
            tables[(p, q)] = dm.closedform_diameters(family, p, q, count)
    except sq.PrefixExhaustedError as exc:
        _fail(EXIT_UNCERTIFIABLE, str(exc))
    except dm.CoverageError as exc:
        _fail(EXIT_INTERNAL, f"segment coverage failure: {exc}")

    try:
        if what == "sandwich":
            payload = {
                "what": "sandwich",
                "alpha": family.seq.name,
                "reports": [
                    vf.verify_sandwich(family, p, q, tables[(p, q)]).to_json()
                    for p, q in pair_list
                ],
            }
        elif what == "eadd":
            payload = {
                "what": "eadd",
                "alpha": family.seq.name,
                "reports": [
                    {
                        "p": p,
                        "q": q,
                        "expected": 1 - km.c_pq(p, q),
                        "ratios": vf.eadd_ratio(family, p, q, tables[(p, q)]),
                    }
                    for p, q in pair_list
                ],
            }
        elif what == "aa":
            payload = {
                "what": "aa",
                "alpha": family.seq.name,
                "statistic": vf.aa_statistic(family, tables, tail_window).to_json(),
            }
        elif what == "edd-tail":
            payload = {
                "what": "edd-tail",
                "alpha": family.seq.name,
                "reports": [
                    vf.edd_tail_check(family, p, q, tables[(p, q)]).to_json()
                    for p, q in pair_list
                ],
            }
        else:
            probe = vf.delta_membership_probe(family, parse_rational(theta), tables)
            payload = {
                "what": "delta-probe",
                "alpha": family.seq.name,
                "report": probe.to_json(),
            }
    except ValueError as exc:
        _fail(EXIT_BAD_CONFIG, str(exc))
    _emit(_json_text(payload), out)


# -- plot-data -----------------------------------------------------------------


@main.command("plot-data")
@click.option("--alpha", "alpha_spec", required=True)
@click.option("--p", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--count", type=int, default=200, show_default=True)
@click.option("--out", type=str, default=None)
def plot_data_cmd(alpha_spec, p, q, count, out):
    """CSV companion for plots: n, -log d_n, alpha_{n+1} and their ratio."""
    if not q > p >= 1:
        _fail(EXIT_BAD_CONFIG, "need q > p >= 1")
    family = km.KotheFamily(_alpha(alpha_spec))
    seq = family.seq
    _, closed = _tables_for(family, p, q, count, "closed")
    rows = []
    for n in range(closed.certified_horizon + 1):
        eps = dm.epsilon_n(closed, n)
        eps_value = eps.value(seq)
        alpha_next = seq.value(n + 1)
        ratio = eps_value / alpha_next
        f_eps, _ = fraction_to_float(eps_value)
        f_alpha, _ = fraction_to_float(alpha_next)
        f_ratio, _ = fraction_to_float(ratio)
        rows.append(
            [
                n,
                _float_str(f_eps),
                _float_str(f_alpha),
                _float_str(f_ratio),
                format_rational(eps_value),
                format_rational(alpha_next),
                format_rational(ratio),
            ]
        )
    _emit(
        _csv(
            rows,
            [
                "n",
                "neg_log_dn",
                "alpha_next",
                "ratio",
                "neg_log_dn_exact",
                "alpha_next_exact",
                "ratio_exact",
            ],
        ),
        out,
    )


if __name__ == "__main__":
    main()
