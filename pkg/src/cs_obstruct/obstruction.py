"""
Symbolic cobordism blocks and the independence certifier.

A ``Block`` stands for a 4-manifold together with a cohomology class e: we
record only its oriented boundary components, the rational square e.e, and
the hypotheses that the gluing and compactness arguments consume (negative
definite, H_1(-; Z/2) = 0, Property I).  The constructors for the Brieskorn
and doubling pieces are axioms: they assert the topological input, and
everything downstream is exact bookkeeping on top of it.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping, Optional, Sequence, Union

from .exactq import IntMatrix, format_rational
from .seifert import (
    TauBound, surgery_to_brieskorn, tau_lower_lens, tau_lower_whitehead_cover,
)


class BlockError(ValueError):
    pass


class Kind(enum.Enum):
    INTEGRAL_HOMOLOGY_SPHERE = "IntegralHomologySphere"
    RATIONAL_HOMOLOGY_SPHERE = "RationalHomologySphere"


@dataclass(frozen=True)
class BoundaryComponent:
    name: str
    orientation: int = 1
    kind: Kind = Kind.INTEGRAL_HOMOLOGY_SPHERE
    tau_lower: Optional[TauBound] = None
    e_restriction_trivial: bool = True

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise BlockError("orientation must be +1 or -1")

    @property
    def label(self) -> str:
        return ("" if self.orientation > 0 else "-") + self.name

    def reversed(self) -> "BoundaryComponent":
        return replace(self, orientation=-self.orientation)


@dataclass(frozen=True)
class Partition:
    bound: Fraction
    gl: tuple
    cs: tuple


@dataclass(frozen=True)
class PartitionFailure:
    bound: Fraction
    offender: BoundaryComponent
    reason: str

    def __bool__(self):
        return False


def check_cs_partition(block: "Block", bound) -> Union[Partition, PartitionFailure]:
    """
    Greedy cs-partition at energy level ``bound``: a component with
    tau_lower strictly above the bound goes to the cs side, every other
    component must be an integral homology sphere and goes to the glue side.
    """
    bound = Fraction(bound)
    gl, cs = [], []
    for c in block.boundary:
        if c.tau_lower is not None and c.tau_lower.value > bound:
            cs.append(c)
        elif c.kind is Kind.INTEGRAL_HOMOLOGY_SPHERE:
            gl.append(c)
        else:
            why = ("no tau lower bound" if c.tau_lower is None else
                   f"tau >= {format_rational(c.tau_lower.value)} is not > "
                   f"{format_rational(bound)}")
            return PartitionFailure(bound, c, f"{c.label}: {why}, and not an "
                                              "integral homology sphere")
    return Partition(bound, tuple(gl), tuple(cs))


def is_valid_partition(block: "Block", part: Partition) -> bool:
    if sorted(map(repr, part.gl + part.cs)) != sorted(map(repr, block.boundary)):
        return False
    return (all(c.kind is Kind.INTEGRAL_HOMOLOGY_SPHERE for c in part.gl)
            and all(c.tau_lower is not None and c.tau_lower.value > part.bound
                    for c in part.cs))


@dataclass(frozen=True)
class Block:
    boundary: tuple
    e_square: Fraction
    negative_definite: bool = True
    h1_mod2_zero: bool = True
    property_I: bool = False
    partition: Optional[Partition] = None
    zero_class_partition: Optional[Partition] = None
    provenance: tuple = field(default=(), compare=False)

    def __post_init__(self):
        e2 = Fraction(self.e_square)
        object.__setattr__(self, "e_square", e2)
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if e2 > 0 and self.negative_definite:
            raise BlockError(f"e.e = {e2} > 0 on a negative definite block")
        if self.property_I and not -e2 < 2:
            raise BlockError(f"Property I needs -e.e < 2, got {-e2}")
        if self.property_I and not (self.negative_definite and self.h1_mod2_zero):
            raise BlockError("Property I needs a negative definite block with H1(;Z/2)=0")
        if self.partition is not None:
            if not is_valid_partition(self, self.partition):
                raise BlockError("recorded partition is not a valid cs-partition")

    @property
    def energy(self) -> Fraction:
        """-e.e, which is also p_1 of the associated SO(3) bundle."""
        return -self.e_square

    def component(self, name: str) -> BoundaryComponent:
        hits = [c for c in self.boundary if c.name == name]
        if not hits:
            raise BlockError(f"no boundary component named {name!r}")
        if len(hits) > 1:
            raise BlockError(f"boundary component {name!r} is ambiguous")
        return hits[0]

    def summary(self) -> dict:
        part = self.partition or check_cs_partition(self, self.energy)
        d = {
            "boundary": [c.label for c in self.boundary],
            "e_square": format_rational(self.e_square),
            "negative_definite": self.negative_definite,
            "h1_mod2_zero": self.h1_mod2_zero,
            "property_I": self.property_I,
            "provenance": list(self.provenance),
        }
        if part:
            d["partition"] = {
                "bound": format_rational(part.bound),
                "gl": [c.label for c in part.gl],
                "cs": [{"component": c.label,
                        "tau_lower": format_rational(c.tau_lower.value)}
                       for c in part.cs],
            }
        else:
            d["partition"] = {"bound": format_rational(part.bound),
                              "failure": part.reason}
        return d


def _pair(p, q):
    if gcd(p, q) != 1:
        raise BlockError(f"gcd({p},{q}) != 1")
    if p < 2 or q < 2:
        raise BlockError(f"T({p},{q}) is not a non-trivial torus knot")


def _partitions(boundary, e_square, **flags):
    # partitions at bound -e.e for both e and the zero class; lens bounds
    # hold for every class, so one computation serves both
    tmp = Block(boundary, e_square, **flags)
    if e_square >= 0:
        return None, None
    part = check_cs_partition(tmp, -e_square)
    if not part:
        raise BlockError(part.reason)
    return part, part


def brieskorn_block(p: int, q: int, k: int) -> Block:
    """
    Property I piece bounded by Sigma(p, q, pqk-1) and three lens spaces
    with tau >= 1/p, 1/q, 1/(pqk-1); e.e = -1/(pq(pqk-1)).
    """
    _pair(p, q)
    p, q = sorted((p, q))
    if k < 1:
        raise BlockError(f"k must be positive, got {k}")
    r = p * q * k - 1
    sigma = "Sigma(%d,%d,%d)" % tuple(sorted((p, q, r)))
    boundary = (
        BoundaryComponent(sigma, 1, Kind.INTEGRAL_HOMOLOGY_SPHERE),
        BoundaryComponent(f"L1[{sigma}]", 1, Kind.RATIONAL_HOMOLOGY_SPHERE,
                          tau_lower_lens(Fraction(1, p)), False),
        BoundaryComponent(f"L2[{sigma}]", 1, Kind.RATIONAL_HOMOLOGY_SPHERE,
                          tau_lower_lens(Fraction(1, q)), False),
        BoundaryComponent(f"L3[{sigma}]", 1, Kind.RATIONAL_HOMOLOGY_SPHERE,
                          tau_lower_lens(Fraction(1, r)), False),
    )
    e2 = Fraction(-1, p * q * r)
    flags = dict(negative_definite=True, h1_mod2_zero=True, property_I=True)
    part, zpart = _partitions(boundary, e2, **flags)
    return Block(boundary, e2, partition=part, zero_class_partition=zpart,
                 provenance=(f"brieskorn_block({p},{q},{k})",), **flags)


def whitehead_cover_name(p: int, q: int) -> str:
    p, q = sorted((p, q))
    return f"Sigma(D(T({p},{q})))"


def doubling_cobordism_block(p: int, q: int, positively_unknottable: bool = True) -> Block:
    """
    Negative definite cobordism N(T(p,q)) with H_1 = 0 and boundary
    -Sigma(D(T(p,q))) + S^3_{1/2}(T(p,q)) = -Sigma(D(T(p,q))) - Sigma(p,q,2pq-1).

    Positive torus knots unknot through positive-to-negative crossing
    changes; pass ``positively_unknottable=False`` to model a knot without
    that property, which is rejected.
    """
    if not positively_unknottable:
        raise BlockError("doubling cobordism needs a knot unknotted by "
                         "positive-to-negative crossing changes")
    _pair(p, q)
    surg = surgery_to_brieskorn(p, q, 2, 1)
    a = surg.a
    boundary = (
        BoundaryComponent(whitehead_cover_name(p, q), -1,
                          Kind.INTEGRAL_HOMOLOGY_SPHERE,
                          tau_lower_whitehead_cover(p, q, -1)),
        BoundaryComponent(f"Sigma({a[0]},{a[1]},{a[2]})", surg.orientation,
                          Kind.INTEGRAL_HOMOLOGY_SPHERE),
    )
    return Block(boundary, Fraction(0), negative_definite=True, h1_mod2_zero=True,
                 property_I=False, provenance=(f"doubling_cobordism_block({p},{q})",))


def homology_ball_block(components: Sequence[BoundaryComponent],
                        name: str = "Q") -> Block:
    """A Z/2-homology punctured 4-ball with the given boundary and e = 0."""
    return Block(tuple(components), Fraction(0), negative_definite=True,
                 h1_mod2_zero=True, property_I=False,
                 provenance=(f"homology_ball_block({name})",))


def _with_glue_side(part, y):
    # y may clear the bound as well; it is a homology sphere, so moving it
    # to the glue side keeps the partition valid
    if part and y in part.cs:
        return Partition(part.bound, part.gl + (y,), tuple(c for c in part.cs if c != y))
    return part


def glue(w: Block, q: Block, y: Union[str, BoundaryComponent]) -> Block:
    """
    Glue ``q`` to ``w`` along the integral homology sphere ``y`` (present in
    ``w`` and, with reversed orientation, in ``q``), extending e by zero
    over ``q``.
    """
    name = y.name if isinstance(y, BoundaryComponent) else y
    yw = w.component(name)
    yq = q.component(name)
    if yw.orientation != -yq.orientation:
        raise BlockError(f"{name}: orientations must be opposite to glue")
    if yw.kind is not Kind.INTEGRAL_HOMOLOGY_SPHERE or yq.kind is not Kind.INTEGRAL_HOMOLOGY_SPHERE:
        raise BlockError(f"{name} is not an integral homology sphere")
    if not q.negative_definite:
        raise BlockError("glued-on block must be negative definite")
    if not q.h1_mod2_zero:
        raise BlockError("glued-on block must have H1(;Z/2) = 0")

    boundary = tuple(c for c in w.boundary if c is not yw) + \
        tuple(c for c in q.boundary if c is not yq)
    part = zpart = None
    prop = w.property_I
    bound = w.energy
    if bound > 0:
        pw = _with_glue_side(w.partition or check_cs_partition(w, bound), yw)
        pq_ = _with_glue_side(check_cs_partition(q, bound), yq)
        if not pw or yw not in pw.gl:
            if prop:
                raise BlockError(f"{name} is not on the glue side of the first block")
        elif not pq_ or yq not in pq_.gl:
            raise BlockError(f"{name} is not on the glue side of the second block")
        else:
            part = Partition(bound,
                             tuple(c for c in pq_.gl + pw.gl if c not in (yw, yq)),
                             pq_.cs + pw.cs)
            if w.zero_class_partition is not None:
                zpart = part
    return Block(boundary, w.e_square,
                 negative_definite=w.negative_definite and q.negative_definite,
                 h1_mod2_zero=w.h1_mod2_zero and q.h1_mod2_zero,
                 property_I=prop, partition=part, zero_class_partition=zpart,
                 provenance=w.provenance + q.provenance + (f"glue along {name}",))


def whitehead_block(p: int, q: int) -> Block:
    """
    W(p,q): the Brieskorn piece for Sigma(p,q,2pq-1) with the doubling
    cobordism attached, leaving -Sigma(D(T(p,q))) and three lens spaces.
    -e.e = 1/(pq(2pq-1)).
    """
    x = brieskorn_block(p, q, 2)
    n = doubling_cobordism_block(p, q)
    return glue(x, n, "Sigma(%d,%d,%d)" % tuple(sorted((p, q, 2 * p * q - 1))))


def contradiction_check(b: Block) -> bool:
    """
    True when ``b`` has Property I yet admits a cs-partition at its own
    energy with nothing left to glue, which forces an even singular count
    and so cannot exist.
    """
    if not (b.property_I and b.negative_definite):
        return False
    if not 0 < b.energy < 4:
        return False
    part = check_cs_partition(b, b.energy)
    return bool(part) and not part.gl


# --------------------------------------------------------- certificates

VERDICT_CERTIFIED = "Certified"
VERDICT_REJECTED = "Rejected"


@dataclass(frozen=True)
class Check:
    i: int
    j: int
    lhs: int
    rhs: int
    passed: bool


@dataclass(frozen=True)
class Certificate:
    knots: tuple
    checks: tuple
    verdict: str
    failing_pair: Optional[tuple] = None
    toolkit_version: str = ""

    def to_dict(self) -> dict:
        return {
            "toolkit_version": self.toolkit_version,
            "knots": [list(k) for k in self.knots],
            "checks": [{"i": c.i, "j": c.j, "lhs": str(c.lhs), "rhs": str(c.rhs),
                        "pass": c.passed} for c in self.checks],
            "verdict": self.verdict,
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Certificate":
        checks = tuple(Check(c["i"], c["j"], int(c["lhs"]), int(c["rhs"]), c["pass"])
                       for c in d["checks"])
        fp = d.get("failing_pair")
        return cls(tuple(tuple(k) for k in d["knots"]), checks, d["verdict"],
                   tuple(fp) if fp else None, d.get("toolkit_version", ""))

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def certify_independence(knots: Sequence) -> Certificate:
    """
    Check  -e_i^2 < tau(+-Sigma(D(T_j)))  for every j < i, with the knots
    sorted by pq(2pq-1).  Each comparison is the integer inequality
    p_i q_i (2 p_i q_i - 1) > p_j q_j (4 p_j q_j - 1).
    """
    from . import __version__

    pairs = [tuple(int(v) for v in k) for k in knots]
    for p, q in pairs:
        _pair(p, q)
    if len({tuple(sorted(k)) for k in pairs}) != len(pairs):
        raise BlockError("duplicate knots in family")
    pairs.sort(key=lambda k: (k[0] * k[1] * (2 * k[0] * k[1] - 1), k))

    energies = [whitehead_block(p, q).energy for p, q in pairs]
    taus = [tau_lower_whitehead_cover(p, q).value for p, q in pairs]
    checks = []
    failing = None
    for i, (pi, qi) in enumerate(pairs):
        ni = pi * qi
        for j in range(i):
            pj, qj = pairs[j]
            nj = pj * qj
            lhs = ni * (2 * ni - 1)
            rhs = nj * (4 * nj - 1)
            ok = lhs > rhs
            # integer form must agree with the rational comparison
            assert ok == (energies[i] < taus[j])
            checks.append(Check(i, j, lhs, rhs, ok))
            if not ok and failing is None:
                failing = (i, j)
    verdict = VERDICT_CERTIFIED if failing is None else VERDICT_REJECTED
    return Certificate(tuple(pairs), tuple(checks), verdict, failing, __version__)


# ---------------------------------------------------- characteristic classes

class NotNegativeDefinite(ValueError):
    pass


def _ldl(G):
    """Exact G = sum_i d_i (x_i + sum_{j>i} m[i][j] x_j)^2 for positive definite G."""
    n = len(G)
    A = [[Fraction(v) for v in row] for row in G]
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if A[i][i] <= 0:
            raise NotNegativeDefinite("form is not negative definite")
        d[i] = A[i][i]
        for j in range(i + 1, n):
            m[i][j] = A[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                A[j][k] -= d[i] * m[i][j] * m[i][k]
    return d, m


def leading_minors(M: IntMatrix) -> list:
    """Leading principal minors, by exact fraction-free elimination."""
    n = M.rows
    a = M.to_rows()
    out = []
    prev = 1
    # Bareiss; a zero pivot means that minor vanishes and later ones are
    # not needed to reject definiteness
    for k in range(n):
        piv = a[k][k]
        out.append(piv)
        if piv == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return out


def is_negative_definite(M: IntMatrix) -> bool:
    if not M.is_symmetric():
        return False
    minors = leading_minors(M)
    return len(minors) == M.rows and all(
        (-1) ** (k + 1) * d > 0 for k, d in enumerate(minors))


def _canonical(v):
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def quad(M: IntMatrix, v) -> int:
    n = M.rows
    return sum(v[i] * M[i, j] * v[j] for i in range(n) for j in range(n))


@dataclass(frozen=True)
class CharClassSet:
    form: IntMatrix
    base_e: tuple
    classes: tuple

    @property
    def square(self) -> int:
        return quad(self.form, self.base_e)


def enumerate_char_classes(form: IntMatrix, e: Sequence[int]) -> CharClassSet:
    """
    All e' with e'.e' = e.e and e' = e (mod 2), up to overall sign, for a
    negative definite integral form.

    Fincke-Pohst enumeration over the exact LDL^T decomposition of -form,
    so the search region is exactly the ellipsoid and nothing is missed.
    """
    e = tuple(int(x) for x in e)
    if len(e) != form.rows:
        raise ValueError("class vector length does not match the form")
    if not is_negative_definite(form):
        raise NotNegativeDefinite("form is not negative definite")
    n = form.rows
    G = [[-form[i, j] for j in range(n)] for i in range(n)]
    target = -quad(form, e)
    d, m = _ldl(G)
    par = [x % 2 for x in e]
    found = set()
    x = [0] * n

    def rec(i, budget):
        if i < 0:
            if budget == 0:
                found.add(_canonical(tuple(x)))
            return
        c = -sum(m[i][j] * x[j] for j in range(i + 1, n))
        t = budget / d[i]
        s = isqrt(t.numerator // t.denominator) + 1
        lo = int(c - s) - 1
        hi = int(c + s) + 1
        lo += (par[i] - lo) % 2
        for xi in range(lo, hi + 1, 2):
            r = budget - d[i] * (xi - c) ** 2
            if r >= 0:
                x[i] = xi
                rec(i - 1, r)
        x[i] = 0

    rec(n - 1, Fraction(target))
    return CharClassSet(form, e, tuple(sorted(found)))


# ---------------------------------------------------------------- index

class MissingCorrection(ValueError):
    pass


def index_leading(e_square, corrections=(), boundary: Optional[Sequence[BoundaryComponent]] = None):
    """
    -2 e.e - 3 + 1/2 sum (3 - h - rho) over boundary components where e
    restricts non-trivially.  ``h`` and ``rho`` are opaque inputs.

    ``corrections`` is a list of (h, rho) pairs, or a mapping from component
    name to (h, rho) when ``boundary`` is given.  With ``boundary`` every
    component whose e-restriction is non-trivial must be covered.
    """
    if boundary is not None:
        need = [c.name for c in boundary if not c.e_restriction_trivial]
        if isinstance(corrections, Mapping):
            missing = [nm for nm in need if nm not in corrections]
            if missing:
                raise MissingCorrection(f"no (h, rho) for {', '.join(missing)}")
            corrections = [corrections[nm] for nm in need]
        elif len(corrections) != len(need):
            raise MissingCorrection(
                f"{len(need)} components restrict non-trivially, "
                f"{len(corrections)} corrections supplied")
    total = Fraction(0)
    for h, rho in corrections:
        total += 3 - Fraction(h) - Fraction(rho)
    return -2 * Fraction(e_square) - 3 + total / 2
