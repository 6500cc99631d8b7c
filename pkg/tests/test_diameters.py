import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kothedim.diameters import (
    closedform_diameters,
    epsilon_n,
    oracle_diameters,
    oracle_diameters_certified,
)
from kothedim.kothe import KotheFamily, c_pq
from kothedim.sequences import UNSPECIFIED, ExponentSequence


def family(spec: str) -> KotheFamily:
    return KotheFamily(ExponentSequence.from_spec(spec))


def log_values(table, seq, count=None):
    entries = table.entries if count is None else table.entries[:count]
    return [e.log_value(seq) for e in entries]


# frozen by an independent brute-force sort of the exact ratio terms
FROZEN = {
    ("linear", 1, 2): ["-3/2", "-3/2", "-5/2", "-3", "-3", "-4", "-9/2", "-5", "-6", "-6", "-13/2", "-7", "-15/2"],
    ("linear", 2, 5): ["-3/10", "-3/5", "-6/5", "-21/10", "-33/10", "-39/10", "-9/2", "-24/5", "-6", "-63/10", "-13/2", "-33/5"],
    ("factorial", 2, 3): ["-1/6", "-1/3", "-4", "-7", "-120", "-140", "-840", "-47040", "-60480"],
    ("factorial", 1, 2): ["-3/2", "-3", "-3", "-36", "-60", "-360", "-7560", "-20160"],
    ("superproduct", 1, 2): ["-3/2", "-9/2", "-21/2", "-819/2", "-5733/2", "-177723/2", "-22926267/2", "-435599073/2"],
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_oracle_matches_frozen_values(key):
    spec, p, q = key
    fam = family(spec)
    expected = [Fraction(v) for v in FROZEN[key]]
    table = oracle_diameters_certified(fam, p, q, len(expected))
    assert log_values(table, fam.seq, len(expected)) == expected


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_closedform_matches_frozen_values(key):
    spec, p, q = key
    fam = family(spec)
    expected = [Fraction(v) for v in FROZEN[key]]
    table = closedform_diameters(fam, p, q, len(expected))
    assert log_values(table, fam.seq) == expected


def test_oracle_tie_at_the_top_linear_1_2():
    fam = family("linear")
    table = oracle_diameters(fam, 1, 2, 50)
    # two distinct source terms share the top value e^(-3/2)
    first, second = table.entries[0], table.entries[1]
    assert first.log_value(fam.seq) == second.log_value(fam.seq) == Fraction(-3, 2)
    assert {first.source_ratio_index, second.source_ratio_index} == {1, 3}
    # ties are broken by the smaller ratio index
    assert first.source_ratio_index == 1


def test_closedform_plan_linear_1_2():
    fam = family("linear")
    table = closedform_diameters(fam, 1, 2, 40)
    rows = [(r.a, r.n_a, r.i_a, r.k_a, r.j_a) for r in table.plan[:5]]
    assert rows == [
        (1, 1, 3, 1, 1),
        (2, 2, 6, 2, 4),
        (3, 4, 12, 4, 9),
        (4, 7, 21, 5, 18),
        (5, 11, 33, 7, 29),
    ]
    # the first entry is the M segment value e^(c * a_3)
    assert table.entries[0].segment == "M"
    assert table.entries[0].alpha_index == 3
    assert table.entries[1].segment == "J"


def test_closedform_plan_linear_2_5():
    fam = family("linear")
    table = closedform_diameters(fam, 2, 5, 30)
    a1 = table.plan[0]
    assert (a1.n_a, a1.i_a, a1.k_a, a1.j_a) == (3, 11, 0, 5)


def test_closedform_factorial_2_3_mixed_regime():
    fam = family("factorial")
    table = closedform_diameters(fam, 2, 3, 30)
    assert table.a0 == 3
    assert table.tail_start == 6
    by_a = {r.a: r for r in table.plan}
    assert by_a[1].i_a == 4 and by_a[1].j_a == 3
    assert by_a[2].i_a == 6 and by_a[2].j_a == 5
    assert by_a[3].i_a is None and by_a[3].j_a == 7


def test_unstable_tail_values_factorial_1_2():
    fam = family("factorial")
    seq = fam.seq
    table = closedform_diameters(fam, 1, 2, 60)
    assert table.a0 is not None
    c = c_pq(1, 2)
    for row in table.plan:
        if row.a >= table.a0 and row.n_a - 1 < 60:
            entry = table.entry(row.n_a - 1)
            assert entry.coeff == c - 1
            assert entry.alpha_index == row.n_a


def test_monotone_non_increasing():
    for spec in ("linear", "factorial", "superproduct"):
        fam = family(spec)
        table = closedform_diameters(fam, 2, 3, 150)
        values = log_values(table, fam.seq)
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_regular_case_diameters_are_shifted_ratios():
    # superproduct is regular: d_n is the ratio term at index n+1
    fam = family("superproduct")
    seq = fam.seq
    for p, q in [(1, 2), (2, 5)]:
        table = closedform_diameters(fam, p, q, 120)
        for n in range(120):
            want = fam.ratio_coeff(p, q, n + 1) * seq.value(n + 1)
            assert table.entry(n).log_value(seq) == want


def test_oracle_certification_bound_is_strict():
    fam = family("linear")
    # with only two terms nothing beats the bound e^(c*a_3) = e^(-3/2)
    table = oracle_diameters(fam, 1, 2, 2)
    assert table.certified_horizon == -1
    assert table.entries == []
    assert "certifies no diameter" in table.diagnostic


def test_oracle_refuses_tiny_prefix():
    with pytest.raises(ValueError):
        oracle_diameters(family("linear"), 1, 2, 1)


def test_epsilon_values():
    fam = family("linear")
    table = closedform_diameters(fam, 1, 2, 10)
    eps = epsilon_n(table, 1)
    assert (eps.coeff, eps.alpha_index) == (Fraction(3, 2), 1)
    with pytest.raises(ValueError):
        epsilon_n(table, 10)


def test_epsilon_on_factorial_tail():
    fam = family("factorial")
    seq = fam.seq
    table = closedform_diameters(fam, 1, 2, 40)
    for row in table.plan:
        if row.a >= table.a0 and row.n_a - 1 < 40:
            eps = epsilon_n(table, row.n_a - 1)
            assert eps.value(seq) == Fraction(3, 2) * seq.value(row.n_a)


PAIRS = [(1, 2), (1, 3), (2, 3), (2, 5), (3, 7), (3, 4), (4, 9)]


@pytest.mark.parametrize("spec", ["linear", "factorial", "superproduct", "poly:2"])
@pytest.mark.parametrize("pq", PAIRS)
def test_oracle_equals_closedform(spec, pq):
    p, q = pq
    fam = family(spec)
    seq = fam.seq
    count = 130
    closed = closedform_diameters(fam, p, q, count)
    oracle = oracle_diameters_certified(fam, p, q, count)
    assert log_values(oracle, seq, count) == log_values(closed, seq)


@settings(max_examples=25, deadline=None)
@given(
    p=st.integers(min_value=1, max_value=6),
    gap=st.integers(min_value=1, max_value=5),
    seed=st.integers(min_value=0, max_value=10**6),
)
def test_oracle_equals_closedform_random_alpha(p, gap, seed):
    q = p + gap
    rng = random.Random(seed)
    values = []
    cur = Fraction(rng.randint(1, 4))
    for _ in range(400):
        values.append(cur)
        roll = rng.random()
        if roll < 0.5:
            cur = cur + rng.randint(1, 5)
        elif roll < 0.8:
            cur = cur * Fraction(rng.randint(5, 9), 4)
        else:
            cur = cur * rng.randint(2, 7)
    seq = ExponentSequence(
        name="random", kind="file", declared_class=UNSPECIFIED, memo=values
    )
    fam = KotheFamily(seq)
    count = 40
    closed = closedform_diameters(fam, p, q, count)
    oracle = oracle_diameters_certified(fam, p, q, count)
    assert log_values(oracle, seq, count) == log_values(closed, seq)


@settings(max_examples=30, deadline=None)
@given(
    spec=st.sampled_from(["linear", "factorial", "superproduct", "poly:2", "poly:4"]),
    p=st.integers(min_value=1, max_value=5),
    gap=st.integers(min_value=1, max_value=4),
    count=st.integers(min_value=1, max_value=90),
)
def test_oracle_equals_closedform_hypothesis(spec, p, gap, count):
    q = p + gap
    fam = family(spec)
    seq = fam.seq
    closed = closedform_diameters(fam, p, q, count)
    oracle = oracle_diameters_certified(fam, p, q, count)
    assert log_values(oracle, seq, count) == log_values(closed, seq)


def test_epsilon_respects_oracle_horizon():
    fam = family("linear")
    table = oracle_diameters(fam, 1, 2, 30)
    assert 0 <= table.certified_horizon < len(table.entries) - 1
    epsilon_n(table, table.certified_horizon)  # fine
    with pytest.raises(ValueError):
        epsilon_n(table, table.certified_horizon + 1)


def test_segment_coverage_partition():
    fam = family("linear")
    table = closedform_diameters(fam, 2, 5, 200)
    segments = {e.segment for e in table.entries}
    assert segments <= {"head", "J", "K", "L", "M", "tail"}
    # one J entry per plan row that landed in range
    reds = [r.j_a for r in table.plan if r.j_a < 200]
    assert [n for n, e in enumerate(table.entries) if e.segment == "J"] == reds


def test_terzioglu_bracket():
    # inf over any (n+1)-subset of ratios <= d_n <= sup over any n-exclusion
    fam = family("linear")
    seq = fam.seq
    table = oracle_diameters_certified(fam, 2, 3, 60)
    prefix = table.oracle_prefix
    ratios = {
        m: fam.ratio_coeff(2, 3, m) * seq.value(m) for m in range(1, prefix + 1)
    }
    rng = random.Random(11)
    for n in range(0, 40):
        d_n = table.entry(n).log_value(seq)
        subset = rng.sample(range(1, prefix + 1), n + 1)
        assert min(ratios[m] for m in subset) <= d_n
        excluded = set(rng.sample(range(1, prefix + 1), n))
        sup = max(v for m, v in ratios.items() if m not in excluded)
        assert d_n <= sup
