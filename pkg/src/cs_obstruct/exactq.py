"""
Exact rational and modular arithmetic: residue-class normalization of
Chern-Simons values, Smith normal form of integer matrices, presented
abelian groups, and a general (non-coprime) Chinese remainder solver.

Rationals are ``fractions.Fraction``; nothing here touches floating point.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence


class Mod(enum.Enum):
    MOD1 = 1
    MOD4 = 4


@dataclass(frozen=True)
class CsValue:
    value: Fraction
    modulus: Mod

    def __post_init__(self):
        m = self.modulus.value
        v = self.value
        if self.modulus is Mod.MOD1 and not (0 <= v < 1):
            raise ValueError(f"Mod1 representative {v} not in [0,1)")
        if self.modulus is Mod.MOD4 and not (0 < v <= m):
            raise ValueError(f"Mod4 representative {v} not in (0,4]")

    def __str__(self):
        return format_rational(self.value)


def format_rational(r) -> str:
    """'num/den' in lowest terms, bare integer when den == 1."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def normalize_mod(r, m: Mod) -> CsValue:
    """
    Canonical representative of ``r`` modulo 1 or 4.

    Mod1 lands in [0,1).  Mod4 lands in the half-open interval (0,4], so
    that the trivial connection reads 4 rather than 0.
    """
    r = Fraction(r)
    n = m.value
    v = r - n * (r // n)
    if m is Mod.MOD4 and v == 0:
        v = Fraction(n)
    return CsValue(v, m)


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols])
                for i in range(self.rows)]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i))


def _pivot(a, start):
    # minimal |entry| over the trailing block, ties -> lowest (row, col)
    best = None
    for i in range(start, len(a)):
        for j in range(start, len(a[i])):
            v = a[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


def smith_normal_form(M: IntMatrix):
    """
    Invariant factors and rank of ``M``.

    Returns ``(factors, rank)`` where ``factors`` lists the nonzero diagonal
    entries d1 | d2 | ... of the Smith normal form, all positive.
    """
    a = M.to_rows()
    nr, nc = M.rows, M.cols
    t = 0
    while t < min(nr, nc):
        piv = _pivot(a, t)
        if piv is None:
            break
        _, i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # pivot must divide the whole trailing block
                bad = next(((i, j) for i in range(t + 1, nr)
                            for j in range(t + 1, nc) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # remainders are smaller than the pivot: re-pivot inside the block
            _, i, j = _pivot(a, t)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        t += 1
    factors = [abs(a[k][k]) for k in range(t)]
    return factors, t


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + sum Z/torsion[i]."""
    torsion: tuple
    free_rank: int

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return not self.torsion and not self.free_rank

    def is_cyclic(self) -> bool:
        return len(self.torsion) + self.free_rank <= 1

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def h1_presented(M: IntMatrix) -> AbelianGroup:
    """Abelian group with generators indexed by columns and relations by rows."""
    factors, rank = smith_normal_form(M)
    return AbelianGroup(tuple(d for d in factors if d != 1), M.cols - rank)


def crt_solve(congruences: Iterable) -> Optional[tuple]:
    """
    Solve x = r_i (mod m_i) for arbitrary positive moduli.

    Returns ``(x, lcm)`` with 0 <= x < lcm, or ``None`` when the system is
    inconsistent.  The empty system gives ``(0, 1)``.
    """
    x, m = 0, 1
    for r, n in congruences:
        if n <= 0:
            raise ValueError(f"modulus must be positive, got {n}")
        r %= n
        g = gcd(m, n)
        if (r - x) % g:
            return None
        # x + m*t = r (mod n)  =>  t = (r-x)/g * (m/g)^-1  (mod n/g)
        ng = n // g
        t = ((r - x) // g) * pow(m // g, -1, ng) % ng if ng > 1 else 0
        x += m * t
        m = m * ng
        x %= m
    return x, m
