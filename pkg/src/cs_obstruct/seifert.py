"""
Brieskorn homology spheres: surgery dictionary for torus knots, flat SU(2)
connections labelled by rotation numbers, and lower bounds for the minimal
relative Chern-Simons value.

Conventions
-----------
pi_1 Sigma(a1,a2,a3) = < x1, x2, x3, h | h central, x_i^{a_i} h^{b_i}, x1 x2 x3 >
with Seifert invariants normalised by  sum_i b_i * (a / a_i) = 1,  a = a1 a2 a3.

An irreducible representation sends h to (-1)^eps and x_i to a conjugate
of exp(pi i l_i / a_i) with 0 < l_i < a_i.  The rotation numbers obey
l_i = eps * b_i (mod 2), and three such conjugacy classes multiply to 1
with non-abelian image iff the angles t_i = l_i / a_i (in units of pi)
satisfy the strict spherical triangle inequalities.

The Chern-Simons invariant of such a class on +Sigma is
    cs = -e^2 / (4a)  (mod 1),   e = sum_i l_i * (a / a_i),
and reversing orientation negates it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

from .exactq import CsValue, Mod, normalize_mod


class InvalidSeifertData(ValueError):
    pass


def _check_coprime_pair(p, q, strict=True):
    if gcd(p, q) != 1:
        raise InvalidSeifertData(f"gcd({p},{q}) != 1")
    if p <= 0 or q <= 0:
        raise InvalidSeifertData(f"torus knot parameters must be positive: ({p},{q})")
    if strict and (p < 2 or q < 2):
        raise InvalidSeifertData(
            f"T({p},{q}) is the unknot; pass strict=False to evaluate anyway")


@dataclass(frozen=True)
class BrieskornSphere:
    a: tuple
    orientation: int = 1
    allow_degenerate: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        a = tuple(sorted(int(x) for x in self.a))
        if len(a) != 3:
            raise InvalidSeifertData("exactly three exceptional fibres expected")
        if self.orientation not in (1, -1):
            raise InvalidSeifertData("orientation must be +1 or -1")
        if min(a) < 1:
            raise InvalidSeifertData(f"Seifert multiplicities must be positive: {a}")
        if min(a) < 2 and not self.allow_degenerate:
            raise InvalidSeifertData(f"degenerate multiplicity 1 in {a}")
        for i in range(3):
            for j in range(i + 1, 3):
                if gcd(a[i], a[j]) != 1:
                    raise InvalidSeifertData(f"{a} is not pairwise coprime")
        object.__setattr__(self, "a", a)

    @property
    def order(self) -> int:
        return prod(self.a)

    def __neg__(self):
        return BrieskornSphere(self.a, -self.orientation, self.allow_degenerate)

    def __str__(self):
        sign = "" if self.orientation > 0 else "-"
        return f"{sign}Sigma({self.a[0]},{self.a[1]},{self.a[2]})"


def seifert_invariants(a) -> tuple:
    """Integers (b1, b2, b3) with sum b_i * (prod(a) / a_i) == 1."""
    n = prod(a)
    cof = [n // x for x in a]
    b1 = pow(cof[0], -1, a[0]) if a[0] > 1 else 0
    b2 = pow(cof[1], -1, a[1]) if a[1] > 1 else 0
    rest = 1 - b1 * cof[0] - b2 * cof[1]
    assert rest % cof[2] == 0
    return b1, b2, rest // cof[2]


@dataclass(frozen=True)
class FlatConnectionClass:
    rotation_numbers: tuple
    cs_su2: CsValue
    central_sign: int = -1

    @property
    def cs_so3(self) -> CsValue:
        # SO(3) normalisation is -4 times the SU(2) one
        return normalize_mod(-4 * self.cs_su2.value, Mod.MOD4)


class TauKind(enum.Enum):
    FROM_DENOMINATOR = "FromDenominator"
    FROM_FINITE_GROUP = "FromFiniteGroup"
    WHITEHEAD_COVER = "WhiteheadCover"
    LENS_INPUT = "LensInput"


@dataclass(frozen=True)
class TauBound:
    value: Fraction
    kind: TauKind

    def __post_init__(self):
        v = Fraction(self.value)
        if not (0 < v <= 4):
            raise ValueError(f"tau bound {v} outside (0,4]")
        object.__setattr__(self, "value", v)


def surgery_to_brieskorn(p: int, q: int, k: int, q_sign: int = 1,
                         strict: bool = True) -> BrieskornSphere:
    """
    1/k surgery on T(p,q): -Sigma(p, q, pqk - 1) for ``q_sign=+1`` and
    -Sigma(p, q, pqk + 1) for ``q_sign=-1``.
    """
    _check_coprime_pair(p, q, strict)
    if k <= 0:
        raise InvalidSeifertData(f"k must be positive, got {k}")
    if q_sign not in (1, -1):
        raise InvalidSeifertData("q_sign must be +1 or -1")
    return BrieskornSphere((p, q, p * q * k - q_sign), orientation=-1)


def _triangle_sorted(t1, t2, t3) -> bool:
    return abs(t1 - t2) < t3 < min(t1 + t2, 2 - t1 - t2)


def _triangle_symmetric(t1, t2, t3) -> bool:
    return (t1 < t2 + t3 and t2 < t1 + t3 and t3 < t1 + t2
            and t1 + t2 + t3 < 2)


def _cs_from_e(e: int, n: int, orientation: int) -> CsValue:
    return normalize_mod(Fraction(-orientation * e * e, 4 * n), Mod.MOD1)


def _classes_by_congruence(Y: BrieskornSphere) -> list:
    # loop over rotation triples, canonical Seifert invariants
    a = Y.a
    n = Y.order
    cof = [n // x for x in a]
    b = seifert_invariants(a)
    out = []
    for eps in (0, 1):
        parity = [(eps * bi) % 2 for bi in b]
        # first admissible l has the required parity: 1 if odd, 2 if even
        ranges = [range(2 - parity[i], a[i], 2) for i in range(3)]
        for l1 in ranges[0]:
            for l2 in ranges[1]:
                for l3 in ranges[2]:
                    t = [Fraction(l, x) for l, x in zip((l1, l2, l3), a)]
                    if not _triangle_sorted(*t):
                        continue
                    e = l1 * cof[0] + l2 * cof[1] + l3 * cof[2]
                    out.append(FlatConnectionClass(
                        (l1, l2, l3), _cs_from_e(e, n, Y.orientation),
                        -1 if eps else 1))
    return out


def _values_by_search(Y: BrieskornSphere) -> list:
    # loop over the candidate values -e^2/4a, e mod 2a, with a shifted
    # normalisation of the Seifert invariants (b1 + a1, b2 - a2, b3)
    a = Y.a
    n = Y.order
    cof = [n // x for x in a]
    b0 = seifert_invariants(a)
    b = (b0[0] + a[0], b0[1] - a[1], b0[2])
    assert sum(bi * c for bi, c in zip(b, cof)) == 1
    inv = [pow(c, -1, x) for c, x in zip(cof, a)]
    out = []
    for e in range(2 * n):
        ls = [e * inv[i] % a[i] for i in range(3)]
        if 0 in ls:
            continue
        par = [l % 2 for l in ls]
        if par == [0, 0, 0]:
            pass
        elif par != [bi % 2 for bi in b]:
            continue
        if (e - sum(l * c for l, c in zip(ls, cof))) % (2 * n):
            continue
        if not _triangle_symmetric(*(Fraction(l, x) for l, x in zip(ls, a))):
            continue
        out.append(_cs_from_e(e, n, Y.orientation))
    return out


class ConventionMismatch(RuntimeError):
    pass


def enumerate_flat_connections(Y: BrieskornSphere, cross_check: bool = True) -> list:
    """
    Conjugacy classes of irreducible SU(2) representations of pi_1(Y) with
    their SU(2) Chern-Simons invariants (mod 1).

    The result is sorted by rotation numbers.  With ``cross_check`` the value
    multiset is recomputed by a second, independently normalised search and
    any disagreement raises ``ConventionMismatch``.
    """
    if min(Y.a) < 2:
        raise InvalidSeifertData(f"{Y} has a degenerate fibre; no Brieskorn sphere")
    classes = sorted(_classes_by_congruence(Y), key=lambda c: c.rotation_numbers)
    if cross_check:
        lhs = sorted(c.cs_su2.value for c in classes)
        rhs = sorted(v.value for v in _values_by_search(Y))
        if lhs != rhs:
            raise ConventionMismatch(
                f"{Y}: rotation-number enumeration gives {lhs}, value search gives {rhs}")
    return classes


def cs_denominators_whitehead(p: int, q: int, strict: bool = True) -> tuple:
    """Denominator bounds (4pq(2pq-1), 4pq(4pq-1)) for the two non-trivial strata."""
    _check_coprime_pair(p, q, strict)
    n = p * q
    return 4 * n * (2 * n - 1), 4 * n * (4 * n - 1)


def tau_lower_from_denominator(d: int) -> TauBound:
    if d <= 0:
        raise ValueError(f"denominator must be positive, got {d}")
    return TauBound(Fraction(1, d), TauKind.FROM_DENOMINATOR)


def tau_lower_finite_group(order: int) -> TauBound:
    if order <= 0:
        raise ValueError(f"group order must be positive, got {order}")
    return TauBound(Fraction(1, order), TauKind.FROM_FINITE_GROUP)


def tau_lower_lens(value) -> TauBound:
    return TauBound(Fraction(value), TauKind.LENS_INPUT)


def tau_lower_whitehead_cover(p: int, q: int, orientation: int = 1,
                              strict: bool = True) -> TauBound:
    """
    Lower bound 1/(pq(4pq-1)) for tau of the branched double cover of the
    Whitehead double of T(p,q).  Orientation does not change the bound.
    """
    _check_coprime_pair(p, q, strict)
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    n = p * q
    return TauBound(Fraction(1, n * (4 * n - 1)), TauKind.WHITEHEAD_COVER)
