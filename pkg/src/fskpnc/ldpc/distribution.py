"""Check-regular degree distributions with the eIRA (accumulator) constraint.

A distribution ``V = {d_1: o_1, ..., d_D: o_D, d_c}`` counts variable nodes
per degree. Edge balance requires ``sum_i o_i d_i == d_c (N - K)``; the
accumulator part supplies N - K degree-2 columns.
"""

from dataclasses import dataclass
from fractions import Fraction


class InfeasibleDistribution(ValueError):
    """No nonnegative integer node counts satisfy the edge constraint."""


@dataclass(frozen=True)
class DegreeDistribution:
    entries: tuple  # ((degree, count), ...) ascending by degree
    d_c: int
    N: int
    K: int

    def __post_init__(self):
        entries = tuple(sorted((int(d), int(o)) for d, o in self.entries if int(o) > 0))
        object.__setattr__(self, "entries", entries)
        if self.N <= self.K or self.K <= 0:
            raise ValueError("need 0 < K < N")
        if sum(o for _, o in entries) != self.N:
            raise ValueError(f"node counts sum to {sum(o for _, o in entries)}, expected N={self.N}")
        if self.edges != self.d_c * (self.N - self.K):
            raise ValueError(
                f"edge mismatch: variable side {self.edges}, "
                f"check side {self.d_c * (self.N - self.K)}"
            )
        if dict(entries).get(2, 0) < self.N - self.K:
            raise ValueError("eIRA needs at least N-K degree-2 nodes")

    @property
    def edges(self):
        return sum(d * o for d, o in self.entries)

    @property
    def rate(self):
        return self.K / self.N

    @property
    def degrees(self):
        return [d for d, _ in self.entries]

    def node_fractions(self):
        return {d: o / self.N for d, o in self.entries}

    def edge_fractions(self):
        e = self.edges
        return {d: d * o / e for d, o in self.entries}

    def info_column_degrees(self):
        """Degrees of the K columns of H1 (the accumulator takes N-K twos)."""
        cols = []
        for d, o in self.entries:
            if d == 2:
                o -= self.N - self.K
            cols.extend([d] * o)
        return cols

    def as_dict(self):
        return {"entries": [list(e) for e in self.entries], "d_c": self.d_c,
                "N": self.N, "K": self.K}

    def label(self):
        return ", ".join(f"{d}:{o}" for d, o in self.entries) + f", {self.d_c}"


def edge_identity_holds(entries, d_c, N, K):
    """Exact integer check of sum o_i d_i == d_c (N - K)."""
    return sum(int(d) * int(o) for d, o in entries) == int(d_c) * (int(N) - int(K))


def solve_node_counts(degrees, N, K, d_c):
    """Node counts for a three-degree eIRA distribution ``(2, d2, d3)``.

    With o_1 = N - K pinned to the accumulator, the remaining counts solve
    ``o_2 + o_3 = K`` and ``2(N-K) + d2 o_2 + d3 o_3 = d_c (N-K)``. Raises
    :class:`InfeasibleDistribution` unless both are nonnegative integers.
    """
    d1, d2, d3 = (int(d) for d in degrees)
    if d1 != 2:
        raise ValueError("first degree is fixed to 2 by the accumulator")
    if not d2 < d3:
        raise ValueError("need d2 < d3")
    m = N - K
    rhs = (d_c - 2) * m - d2 * K
    o3 = Fraction(rhs, d3 - d2)
    o2 = K - o3
    if o3.denominator != 1 or o3 < 0 or o2 < 0:
        raise InfeasibleDistribution(
            f"no valid distribution for degrees {(d1, d2, d3)} (o_3 = {o3})"
        )
    o2, o3 = int(o2), int(o3)
    if d2 == 2:
        entries = ((2, m + o2), (d3, o3))
    else:
        entries = ((2, m), (d2, o2), (d3, o3))
    return DegreeDistribution(entries=entries, d_c=d_c, N=N, K=K)


def from_counts(entries, d_c, N=None, K=None):
    """Build a distribution from explicit (degree, count) pairs.

    If N/K are omitted they are inferred: N = total nodes, and N - K is the
    count of degree-2 nodes.
    """
    entries = [(int(d), int(o)) for d, o in entries]
    if N is None:
        N = sum(o for _, o in entries)
    if K is None:
        K = N - dict(entries).get(2, 0)
    return DegreeDistribution(entries=tuple(entries), d_c=int(d_c), N=int(N), K=int(K))
