"""The diagonal enumeration of N^2 and the column/band index machinery.

``n = (x+1)(x+2)/2 + y(x+1) + y(y-1)/2`` walks the grid anti-diagonal by
anti-diagonal (each diagonal x+y = t is the contiguous block of t+1
integers ending at the triangular number T_{t+1}).  Column s holds the
points with x = s-1; the band of a pair (p, q) is the union of columns
p..q-1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


def pair_index(x: int, y: int) -> int:
    """Position (1-based) of (x, y) in the diagonal enumeration."""
    if x < 0 or y < 0:
        raise ValueError("grid coordinates must be non-negative")
    return (x + 1) * (x + 2) // 2 + y * (x + 1) + y * (y - 1) // 2


def unpair(n: int) -> tuple[int, int]:
    """Inverse of pair_index: the (x, y) with pair_index(x, y) = n."""
    if n < 1:
        raise ValueError("grid positions are 1-based")
    # diagonal t is the block (T_t, T_{t+1}] of triangular numbers
    t = (math.isqrt(8 * n - 7) - 1) // 2
    while t * (t + 1) // 2 >= n:
        t -= 1
    while (t + 1) * (t + 2) // 2 < n:
        t += 1
    x = n - 1 - t * (t + 1) // 2
    return x, t - x


def column_of(n: int) -> int:
    """The s with n in column I_s (columns are 1-based: I_s is x = s-1)."""
    return unpair(n)[0] + 1


def column_start(s: int) -> int:
    """min I_s = s(s+1)/2 ... the first element of column s is (s-1, 0)."""
    return pair_index(s - 1, 0)


def in_band(p: int, q: int, n: int) -> bool:
    """Whether n lies in a column s with p <= s < q."""
    return p <= column_of(n) < q


def band_count_below(p: int, q: int, m: int) -> int:
    """Number of band elements strictly below m, in closed form.

    Diagonal t contributes min(t-p+2, q-p) band elements once t >= p-1;
    on m's own diagonal only the columns left of m count.
    """
    x, y = unpair(m)
    t = x + y
    width = q - p
    u = t - (p - 1)  # completed diagonals carrying band elements
    if u <= 0:
        full = 0
    elif u <= width - 1:
        full = u * (u + 1) // 2
    else:
        full = (width - 1) * width // 2 + (u - (width - 1)) * width
    partial = min(x - 1, q - 2) - (p - 1) + 1
    return full + max(0, partial)


@dataclass
class BandIndexing:
    """The band I = union of columns p..q-1 with its diagonal markers.

    ``n_list[i-1]`` is n_i, the i-th smallest band element.  ``s_k`` is the
    1-based position within n_list of the column-p element on the diagonal
    x+y = q+k-2; markers exist from k_min = p-q+1 (truncated diagonals) and
    satisfy s_{k+1} - s_k = q-p for k >= 0.
    """

    p: int
    q: int
    n_list: list[int] = field(default_factory=list)
    _diagonal_next: int = 0  # next diagonal t to expand

    def __post_init__(self) -> None:
        if not (self.q > self.p >= 1):
            raise ValueError("band requires q > p >= 1")
        if self.n_list:
            raise ValueError("construct via band(); n_list is derived state")
        self._diagonal_next = self.p - 1

    @property
    def k_min(self) -> int:
        return self.p - self.q + 1

    def _expand_one_diagonal(self) -> None:
        t = self._diagonal_next
        first = pair_index(self.p - 1, t - (self.p - 1))
        count = min(t - self.p + 2, self.q - self.p)
        self.n_list.extend(range(first, first + count))
        self._diagonal_next = t + 1

    def extend_to_count(self, count: int) -> None:
        while len(self.n_list) < count:
            self._expand_one_diagonal()

    def extend_past(self, n: int) -> None:
        """Grow n_list until its last element is > n."""
        while not self.n_list or self.n_list[-1] <= n:
            self._expand_one_diagonal()

    def element(self, i: int) -> int:
        """n_i (1-based)."""
        if i < 1:
            raise ValueError("band elements are 1-based")
        self.extend_to_count(i)
        return self.n_list[i - 1]

    def contains(self, n: int) -> bool:
        return in_band(self.p, self.q, n)

    def marker(self, k: int) -> int:
        """The element of column p on the diagonal x+y = q+k-2."""
        if k < self.k_min:
            raise ValueError(f"diagonal marker k={k} below k_min={self.k_min}")
        return pair_index(self.p - 1, self.q - self.p - 1 + k)

    def s_k(self, k: int) -> int:
        """1-based index of marker(k) within n_list (closed form, no scan)."""
        return band_count_below(self.p, self.q, self.marker(k)) + 1

    def s_list(self, k_count: int) -> list[int]:
        """s_0, s_1, ..., s_{k_count-1} (the k >= 0 markers)."""
        return [self.s_k(k) for k in range(k_count)]

    def count_below(self, m: int) -> int:
        return band_count_below(self.p, self.q, m)

    def locate_k(self, m: int) -> int:
        """The k with n_{s_k} < m < n_{s_(k+1)} for a non-band m > n_1."""
        if self.contains(m):
            raise ValueError(f"{m} is a band element")
        if m <= self.marker(self.k_min):
            raise ValueError(f"{m} precedes the first column-{self.p} marker")
        lo, hi = self.k_min, self.k_min + 1
        while self.marker(hi) < m:
            lo, hi = hi, hi + max(1, hi - lo)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.marker(mid) < m:
                lo = mid
            else:
                hi = mid
        return lo


def band(p: int, q: int, count: int) -> BandIndexing:
    """BandIndexing for (p, q) with at least ``count`` elements enumerated."""
    b = BandIndexing(p=p, q=q)
    b.extend_to_count(count)
    return b
