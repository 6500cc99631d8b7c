"""Exponent sequences: generators, memoization, finite-prefix classification.

A finite prefix can never decide a ``sup`` or a ``lim``, so each sequence
carries a *declared* analytic class (stable / unstable / unspecified) and the
classification routines only verify necessary conditions, reporting
"consistent" or "inconsistent" with the declaration -- never "proved".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exact import Rational, format_rational, fraction_to_float, parse_rational

STABLE = "stable"
UNSTABLE = "unstable"
UNSPECIFIED = "unspecified"

_BUILTIN_CLASSES = {
    "linear": STABLE,
    "factorial": UNSTABLE,
    "superproduct": UNSTABLE,
    "polynomial": STABLE,
    "file": UNSPECIFIED,
}


class SequenceError(ValueError):
    """Invalid sequence definition or violated monotonicity invariant."""


class PrefixExhaustedError(SequenceError):
    """A file-backed sequence was asked beyond its stored prefix."""


@dataclass
class ExponentSequence:
    """The parameter sequence alpha: exact, positive, strictly increasing.

    ``memo`` holds alpha_1..alpha_len as exact rationals and grows on demand
    for the generated kinds.  Mutation is append-only; the intended pattern
    is "prefill, then share read-only".
    """

    name: str
    kind: str
    declared_class: str
    degree: int | None = None
    path: str | None = None
    memo: list[Rational] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.declared_class not in (STABLE, UNSTABLE, UNSPECIFIED):
            raise SequenceError(f"unknown declared class {self.declared_class!r}")
        for i, v in enumerate(self.memo):
            prev = self.memo[i - 1] if i else Fraction(0)
            if v <= prev:
                raise SequenceError(
                    f"{self.name}: alpha_{i + 1}={format_rational(v)} breaks "
                    "strict positive increase"
                )

    # -- construction ----------------------------------------------------

    @classmethod
    def linear(cls) -> "ExponentSequence":
        return cls(name="linear", kind="linear", declared_class=STABLE)

    @classmethod
    def factorial(cls) -> "ExponentSequence":
        return cls(name="factorial", kind="factorial", declared_class=UNSTABLE)

    @classmethod
    def superproduct(cls) -> "ExponentSequence":
        """alpha_n = prod_{i=0}^{n-1} (1 + i*(i+1)); this is the regular kind."""
        return cls(name="superproduct", kind="superproduct", declared_class=UNSTABLE)

    @classmethod
    def polynomial(cls, degree: int) -> "ExponentSequence":
        if degree < 1:
            raise SequenceError("polynomial degree must be >= 1")
        return cls(
            name=f"poly:{degree}",
            kind="polynomial",
            declared_class=STABLE,
            degree=degree,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ExponentSequence":
        """Load one rational per line ("p/q" or integer); '#' starts a comment."""
        values: list[Rational] = []
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise SequenceError(f"cannot read alpha file {path}: {exc}") from exc
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                v = parse_rational(line)
            except (ValueError, ZeroDivisionError) as exc:
                raise SequenceError(f"{path}:{lineno}: bad rational {line!r}") from exc
            values.append(v)
        if not values:
            raise SequenceError(f"{path}: empty sequence")
        return cls(
            name=f"file:{path}",
            kind="file",
            declared_class=UNSPECIFIED,
            path=str(path),
            memo=values,
        )

    @classmethod
    def from_spec(cls, spec: str) -> "ExponentSequence":
        """Parse the CLI grammar linear|factorial|superproduct|poly:<d>|file:<path>."""
        spec = spec.strip()
        if spec == "linear":
            return cls.linear()
        if spec == "factorial":
            return cls.factorial()
        if spec == "superproduct":
            return cls.superproduct()
        if spec.startswith("poly:"):
            try:
                degree = int(spec.split(":", 1)[1])
            except ValueError as exc:
                raise SequenceError(f"bad polynomial degree in {spec!r}") from exc
            return cls.polynomial(degree)
        if spec.startswith("file:"):
            return cls.from_file(spec.split(":", 1)[1])
        raise SequenceError(f"unknown alpha spec {spec!r}")

    # -- evaluation -------------------------------------------------------

    def _next_value(self, n: int) -> Rational:
        """alpha_n for the generated kinds, assuming alpha_{n-1} is memoized."""
        if self.kind == "linear":
            return Fraction(n)
        if self.kind == "polynomial":
            return Fraction(n**self.degree)
        if self.kind == "factorial":
            prev = self.memo[-1] if self.memo else Fraction(1)
            return prev * n if n > 1 else Fraction(1)
        if self.kind == "superproduct":
            prev = self.memo[-1] if self.memo else Fraction(1)
            i = n - 1
            return prev * (1 + i * (i + 1)) if n > 1 else Fraction(1)
        raise PrefixExhaustedError(
            f"{self.name}: prefix of length {len(self.memo)} exhausted at n={n}"
        )

    def value(self, n: int) -> Rational:
        """Exact alpha_n (1-based); extends the memo as needed."""
        if n < 1:
            raise SequenceError(f"alpha index must be >= 1, got {n}")
        while len(self.memo) < n:
            m = len(self.memo) + 1
            v = self._next_value(m)
            prev = self.memo[-1] if self.memo else Fraction(0)
            if v <= prev:
                raise SequenceError(
                    f"{self.name}: alpha_{m}={format_rational(v)} breaks "
                    "strict positive increase"
                )
            self.memo.append(v)
        return self.memo[n - 1]

    def prefill(self, n: int) -> None:
        self.value(n)

    def __len__(self) -> int:
        return len(self.memo)


@dataclass(frozen=True)
class ClassifyReport:
    """Exact prefix extrema plus a consistency verdict against the declaration."""

    name: str
    declared_class: str
    horizon: int
    max_doubling_ratio: Rational       # max alpha_{2n}/alpha_n, n <= N/2
    max_successive_ratio: Rational     # max alpha_{n+1}/alpha_n, n < N
    min_successive_ratio_tail: Rational  # min over the last decade of the prefix
    consistent_with_declared: bool
    note: str

    def to_json(self) -> dict:
        return {
            "alpha": self.name,
            "declared_class": self.declared_class,
            "horizon": self.horizon,
            "max_doubling_ratio": format_rational(self.max_doubling_ratio),
            "max_successive_ratio": format_rational(self.max_successive_ratio),
            "min_successive_ratio_tail": format_rational(self.min_successive_ratio_tail),
            "consistent_with_declared": self.consistent_with_declared,
            "note": self.note,
        }


def _decade_blocks(limit: int) -> list[tuple[int, int]]:
    """[1,10], (10,100], (100,1000], ... intersected with [1, limit]."""
    blocks = []
    lo, hi = 1, 10
    while lo <= limit:
        blocks.append((lo, min(hi, limit)))
        lo, hi = hi + 1, hi * 10
    return blocks


def classify_prefix(seq: ExponentSequence, horizon: int) -> ClassifyReport:
    """Exact stability statistics over alpha_1..alpha_horizon.

    Consistency is a necessary-condition check: a declared-stable sequence
    must not show exploding doubling ratios across prefix decades, a
    declared-unstable one must show strictly increasing successive ratios
    beyond some reported index.
    """
    if horizon < 4:
        raise SequenceError("classification horizon must be >= 4")
    seq.prefill(horizon)

    doubling = [seq.value(2 * n) / seq.value(n) for n in range(1, horizon // 2 + 1)]
    successive = [seq.value(n + 1) / seq.value(n) for n in range(1, horizon)]
    max_doubling = max(doubling)
    max_successive = max(successive)
    tail_lo = max(1, (9 * horizon) // 10)
    tail = successive[tail_lo - 1 :]
    min_tail = min(tail)

    if seq.declared_class == STABLE:
        blocks = _decade_blocks(horizon // 2)
        per_block = [
            max(doubling[lo - 1 : hi]) for lo, hi in blocks if lo <= len(doubling)
        ]
        if len(per_block) < 2:
            consistent, note = True, "prefix too short for a decade trend; accepted"
        else:
            consistent = per_block[-1] <= max(per_block[:-1])
            note = (
                "doubling ratio non-exploding across decades"
                if consistent
                else "doubling ratio grows into the last decade"
            )
    elif seq.declared_class == UNSTABLE:
        rise_from = len(successive) - 1
        while rise_from > 0 and successive[rise_from] > successive[rise_from - 1]:
            rise_from -= 1
        # successive is strictly increasing on [rise_from, end)
        consistent = rise_from <= max(1, horizon // 2)
        note = (
            f"successive ratio strictly increasing from n={rise_from + 1}"
            if consistent
            else "no strictly increasing tail of successive ratios found"
        )
    else:
        consistent, note = True, "no declared class; statistics only"

    return ClassifyReport(
        name=seq.name,
        declared_class=seq.declared_class,
        horizon=horizon,
        max_doubling_ratio=max_doubling,
        max_successive_ratio=max_successive,
        min_successive_ratio_tail=min_tail,
        consistent_with_declared=consistent,
        note=note,
    )


@dataclass(frozen=True)
class NuclearityProbe:
    """Float samples of ln(n)/alpha_n; display-only, never authoritative."""

    name: str
    horizon: int
    samples: list[tuple[int, float]]
    verdict: str  # "consistent" | "inconsistent"

    def to_json(self) -> dict:
        return {
            "alpha": self.name,
            "horizon": self.horizon,
            "samples": [{"n": n, "ln_n_over_alpha_n": v} for n, v in self.samples],
            "verdict": self.verdict,
            "floats_display_only": True,
        }


def finitely_nuclear_probe(seq: ExponentSequence, horizon: int) -> NuclearityProbe:
    """Necessary-condition probe for ln(n)/alpha_n -> 0 on a finite prefix.

    Samples ten points n = horizon/10, 2*horizon/10, ..., horizon and checks
    the sampled trend is non-increasing.  Uses floats by design; the verdict
    is explicitly marked non-authoritative.
    """
    if horizon < 10:
        raise SequenceError("probe horizon must be >= 10")
    points = sorted({max(1, (k * horizon) // 10) for k in range(1, 11)})
    samples: list[tuple[int, float]] = []
    for n in points:
        alpha, _ = fraction_to_float(seq.value(n))
        ratio = math.log(n) / alpha if math.isfinite(alpha) else 0.0
        samples.append((n, ratio))
    trend_ok = all(b[1] <= a[1] * (1 + 1e-12) for a, b in zip(samples, samples[1:]))
    return NuclearityProbe(
        name=seq.name,
        horizon=horizon,
        samples=samples,
        verdict="consistent" if trend_ok else "inconsistent",
    )
