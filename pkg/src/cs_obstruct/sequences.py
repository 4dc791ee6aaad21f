"""Torus-knot families satisfying the growth inequality pq(2pq-1) > p'q'(4p'q'-1)."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence


@dataclass(frozen=True, order=True)
class KnotPair:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2 or self.q < 2:
            raise ValueError(f"({self.p},{self.q}): need p, q >= 2")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p},{self.q}) is not coprime")

    @property
    def energy_denominator(self) -> int:
        """pq(2pq-1), the reciprocal of -e^2 for the Whitehead block."""
        n = self.p * self.q
        return n * (2 * n - 1)

    @property
    def tau_denominator(self) -> int:
        """pq(4pq-1), the reciprocal of the tau lower bound."""
        n = self.p * self.q
        return n * (4 * n - 1)

    def as_tuple(self):
        return (self.p, self.q)


def _kp(x) -> KnotPair:
    return x if isinstance(x, KnotPair) else KnotPair(*x)


@dataclass(frozen=True)
class Step:
    prev: KnotPair
    next: KnotPair
    lhs: int
    rhs: int
    ok: bool


def admissible_step(prev, nxt) -> Step:
    prev, nxt = _kp(prev), _kp(nxt)
    lhs, rhs = nxt.energy_denominator, prev.tau_denominator
    return Step(prev, nxt, lhs, rhs, lhs > rhs)


class FamilyError(RuntimeError):
    pass


@dataclass(frozen=True)
class Family:
    pairs: tuple
    steps: tuple
    ok: bool = True
    failed_index: Optional[int] = None
    reason: str = ""


def power_family(n_max: int) -> Family:
    """(2, 2^n - 1) for n = 2..n_max, every consecutive step verified."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    pairs = tuple(KnotPair(2, 2 ** n - 1) for n in range(2, n_max + 1))
    steps = tuple(admissible_step(a, b) for a, b in zip(pairs, pairs[1:]))
    bad = [i for i, s in enumerate(steps) if not s.ok]
    if bad:
        raise FamilyError(f"power family step {bad[0] + 1} fails: "
                          f"{steps[bad[0]].lhs} <= {steps[bad[0]].rhs}")
    return Family(pairs, steps)


def kn_family(k_values: Sequence[int], n_start: int = 2) -> Family:
    """
    Pairs (n, n k_n - 1) for n = n_start, n_start + 1, ...; the growth
    condition k_n > sqrt(2) k_{n-1} is checked as 2 k_{n-1}^2 < k_n^2.
    """
    ks = [int(k) for k in k_values]
    if any(k < 1 for k in ks):
        raise ValueError("k values must be positive")
    pairs, steps = [], []
    for idx, k in enumerate(ks):
        n = n_start + idx
        if idx and not 2 * ks[idx - 1] ** 2 < k * k:
            return Family(tuple(pairs), tuple(steps), False, idx,
                          f"2*{ks[idx - 1]}^2 < {k}^2 fails")
        try:
            kp = KnotPair(n, n * k - 1)
        except ValueError as exc:
            return Family(tuple(pairs), tuple(steps), False, idx, str(exc))
        if pairs:
            s = admissible_step(pairs[-1], kp)
            steps.append(s)
            if not s.ok:
                pairs.append(kp)
                return Family(tuple(pairs), tuple(steps), False, idx,
                              f"{s.lhs} <= {s.rhs}")
        pairs.append(kp)
    return Family(tuple(pairs), tuple(steps))


@dataclass(frozen=True)
class ChainReport:
    pairs: tuple
    consecutive: tuple
    pairwise: tuple
    ok: bool
    failed: Optional[tuple] = None


def verify_chain(pairs: Sequence) -> ChainReport:
    """
    Sort by pq(2pq-1), then check every consecutive step and every pair
    j < i.  ``failed`` is the earliest failing (i, j) in sorted order.
    """
    kps = sorted((_kp(x) for x in pairs), key=lambda k: (k.energy_denominator, k))
    consecutive = tuple(admissible_step(a, b) for a, b in zip(kps, kps[1:]))
    pairwise = []
    failed = None
    for i in range(len(kps)):
        for j in range(i):
            s = admissible_step(kps[j], kps[i])
            pairwise.append((i, j, s.lhs, s.rhs, s.ok))
            if not s.ok and failed is None:
                failed = (i, j)
    ok = failed is None and all(s.ok for s in consecutive)
    return ChainReport(tuple(kps), consecutive, tuple(pairwise), ok, failed)
