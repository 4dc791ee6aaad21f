"""
SU(2) as unit quaternions, evaluation of words in the two meridians of the
(2,4) torus link complement, and a Gauss-Newton search for representations
killing its relator

    [a^-1, b] [a, b^-1],     [x, y] = x y x^-1 y^-1,

where ``a`` and ``b`` stand for the meridians of the two link components.

Quaternion components may be ints or Fractions (exact) or floats (numeric);
the arithmetic is the same code path for both.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

EPS_NORM = 1e-12
EPS_REP = 1e-9
EPS_ABELIAN = 1e-6
MAX_ITERS = 500


@dataclass(frozen=True)
class Quaternion:
    w: object = 1
    x: object = 0
    y: object = 0
    z: object = 0

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            return Quaternion(self.w * o, self.x * o, self.y * o, self.z * o)
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = o.w, o.x, o.y, o.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def __add__(self, o):
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o):
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conj(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self):
        n2 = self.norm2()
        c = self.conj()
        if n2 == 1:
            return c
        if isinstance(n2, int):
            n2 = Fraction(n2)
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def normalized(self):
        n = self.norm()
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.as_tuple())

    def as_tuple(self):
        return (self.w, self.x, self.y, self.z)

    def dist(self, o) -> float:
        return (self - o).norm()

    @classmethod
    def exp_i(cls, theta: float):
        """exp(i theta), a point of the standard maximal torus."""
        return cls(math.cos(theta), math.sin(theta), 0.0, 0.0)

    def __str__(self):
        return "(" + ", ".join(_fmt(c) for c in self.as_tuple()) + ")"


def _fmt(c):
    if isinstance(c, (int, Fraction)):
        return str(c)
    return f"{c:.12g}"


ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def is_unit(q: Quaternion, eps: float = EPS_NORM) -> bool:
    if q.is_exact():
        return q.norm2() == 1
    return abs(q.norm2() - 1) <= eps


@dataclass(frozen=True)
class GroupWord:
    """Word in named generators; letters are (generator, +1 or -1)."""
    letters: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Space separated generators; a trailing ``'`` marks an inverse."""
        letters = []
        for tok in text.split():
            if tok.endswith("'"):
                letters.append((tok[:-1], -1))
            else:
                letters.append((tok, 1))
        return cls(tuple(letters))

    def __mul__(self, o):
        return GroupWord(self.letters + o.letters)

    def inverse(self):
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        return GroupWord(base.letters * abs(n))

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def __str__(self):
        return " ".join(g if e > 0 else g + "'" for g, e in self.letters) or "1"


class UnassignedGenerator(KeyError):
    pass


def eval_word(word: GroupWord, assignment: Mapping[str, Quaternion]) -> Quaternion:
    out = ONE
    for g, e in word.letters:
        try:
            q = assignment[g]
        except KeyError:
            raise UnassignedGenerator(g) from None
        out = out * (q if e > 0 else q.inverse())
    return out


def commutator(x: GroupWord, y: GroupWord) -> GroupWord:
    return x * y * x.inverse() * y.inverse()


MU1 = GroupWord.parse("a")
MU2 = GroupWord.parse("b")
RELATOR = commutator(MU1.inverse(), MU2) * commutator(MU1, MU2.inverse())
LONGITUDE1 = GroupWord.parse("a b a' b")
LONGITUDE2 = GroupWord.parse("b a b' a")
# (mu1 mu2^-1)^2, central in the link group
CENTRAL = GroupWord.parse("a b'") ** 2
# knot meridians after gluing: mu_K = mu_A^-2 lambda_A
KNOT_MERIDIAN1 = MU1 ** -2 * LONGITUDE1
KNOT_MERIDIAN2 = MU2 ** -2 * LONGITUDE2


class InvalidRep(ValueError):
    pass


@dataclass(frozen=True)
class LinkRep:
    mu1: Quaternion
    mu2: Quaternion
    residual: float

    @classmethod
    def from_pair(cls, mu1: Quaternion, mu2: Quaternion) -> "LinkRep":
        r = eval_word(RELATOR, {"a": mu1, "b": mu2}) - ONE
        res = 0 if r.is_exact() and r.norm2() == 0 else r.norm()
        return cls(mu1, mu2, res)

    @property
    def assignment(self):
        return {"a": self.mu1, "b": self.mu2}

    def commutator_norm(self) -> float:
        c = eval_word(commutator(MU1, MU2), self.assignment) - ONE
        return c.norm()


class Label(enum.Enum):
    A = "A"
    N = "N"


def classify_abelian(rep: LinkRep, eps: float = EPS_ABELIAN):
    """(label, witness): N iff ||[mu1, mu2] - 1|| > eps."""
    w = rep.commutator_norm()
    return (Label.N if w > eps else Label.A), w


# ---------------------------------------------------------------- solver

def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def _qinv(p):
    # inverse of a not-necessarily-unit quaternion
    n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]
    return (p[0] / n2, -p[1] / n2, -p[2] / n2, -p[3] / n2)


def _relator_minus_one(v):
    a, b = tuple(v[:4]), tuple(v[4:])
    ai, bi = _qinv(a), _qinv(b)
    r = ai
    for q in (b, a, bi, a, bi, ai, b):
        r = _qmul(r, q)
    return np.array([r[0] - 1.0, r[1], r[2], r[3]])


def _commutator_minus_one(v):
    a, b = tuple(v[:4]), tuple(v[4:])
    r = _qmul(_qmul(_qmul(a, b), _qinv(a)), _qinv(b))
    return math.sqrt((r[0] - 1) ** 2 + r[1] ** 2 + r[2] ** 2 + r[3] ** 2)


def _renormalize(v):
    v = v.copy()
    v[:4] /= np.linalg.norm(v[:4])
    v[4:] /= np.linalg.norm(v[4:])
    return v


def _residuals(v, barrier):
    r = _relator_minus_one(v)
    if barrier:
        c = max(_commutator_minus_one(v), 1e-300)
        r = np.append(r, barrier / c)
    return r


def _jacobian(v, barrier, h=1e-7):
    cols = []
    for k in range(8):
        d = np.zeros(8)
        d[k] = h
        cols.append((_residuals(v + d, barrier) - _residuals(v - d, barrier)) / (2 * h))
    return np.column_stack(cols)


class InvalidSeed(ValueError):
    pass


def _gauss_newton(v, beta, tol, max_iters):
    for _ in range(max_iters):
        if beta == 0 and np.linalg.norm(_relator_minus_one(v)) < tol * 1e-3:
            break
        F = _residuals(v, beta)
        step = np.linalg.lstsq(_jacobian(v, beta), -F, rcond=None)[0]
        f0 = np.linalg.norm(F)
        t = 1.0
        while True:
            cand = _renormalize(v + t * step)
            if np.linalg.norm(_residuals(cand, beta)) < f0 or t < 1e-6:
                break
            t *= 0.5
        v = cand
        beta = beta * 0.1 if beta > 1e-20 else 0.0
    return v


def solve_relator(seed, want_nonabelian: bool = True, tol: float = EPS_REP,
                  max_iters: int = MAX_ITERS, eps_abelian: float = EPS_ABELIAN,
                  barrier: float = 1e-2) -> Optional[LinkRep]:
    """
    Damped Gauss-Newton on the 8 quaternion coordinates of (mu1, mu2), each
    pair renormalised to the unit sphere after every step.

    With ``want_nonabelian``, a run that lands on the abelian locus is
    restarted from the seed with a barrier term ``barrier / ||[mu1,mu2] - 1||``
    appended to the residual; the barrier weight shrinks tenfold per step so
    the limit still solves the relator alone.

    Returns ``None`` when no solution is reached within ``max_iters`` or
    when a non-abelian one was wanted and none was found.
    """
    s1, s2 = seed
    if not (is_unit(s1) and is_unit(s2)):
        raise InvalidSeed("seed quaternions must be unit")
    v0 = _renormalize(np.array([float(c) for c in s1.as_tuple() + s2.as_tuple()]))
    betas = (0.0, barrier) if want_nonabelian else (0.0,)
    for beta in betas:
        v = _gauss_newton(v0, beta, tol, max_iters)
        rep = LinkRep.from_pair(Quaternion(*map(float, v[:4])),
                                Quaternion(*map(float, v[4:])))
        if not rep.residual < tol:
            continue
        if want_nonabelian and classify_abelian(rep, eps_abelian)[0] is Label.A:
            continue
        return rep
    return None


def random_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    """Uniform on S^3: a normalised standard Gaussian 4-vector."""
    g = rng.standard_normal(4)
    g /= np.linalg.norm(g)
    return Quaternion(*map(float, g))


def seed_pair(seed: int, index: int = 0):
    rng = np.random.default_rng([seed & (2**64 - 1), index])
    return random_unit_quaternion(rng), random_unit_quaternion(rng)


@dataclass(frozen=True)
class MechanismReport:
    longitude1: Quaternion
    longitude2: Quaternion
    knot_meridian1: Quaternion
    knot_meridian2: Quaternion
    central: Quaternion
    label: Label
    central_defect: float
    meridian_defects: tuple
    ok: bool


def _sign_defect(q: Quaternion) -> float:
    """Distance from q to the nearer of +1 and -1."""
    if q.is_exact():
        if q == ONE or q == -ONE:
            return 0
    return min(q.dist(ONE), q.dist(-ONE))


def verify_forced_meridians(rep: LinkRep, tol: float = EPS_REP,
                            eps_abelian: float = EPS_ABELIAN,
                            center_tol: float = 1e-7) -> MechanismReport:
    """
    Evaluate the longitudes, the knot meridians mu_A^-2 lambda_A and the
    central word (mu1 mu2^-1)^2 at ``rep``.

    For a non-abelian rep the central word and both knot meridians must be
    within ``center_tol`` of +-1.  For an abelian rep the substitution
    identities lambda_1 = mu2^2 and mu_K1 = mu1^-2 mu2^2 (and symmetrically)
    are checked instead.
    """
    if not rep.residual < tol:
        raise InvalidRep(f"relator residual {rep.residual} >= {tol}")
    asg = rep.assignment
    lam1 = eval_word(LONGITUDE1, asg)
    lam2 = eval_word(LONGITUDE2, asg)
    mk1 = eval_word(KNOT_MERIDIAN1, asg)
    mk2 = eval_word(KNOT_MERIDIAN2, asg)
    cen = eval_word(CENTRAL, asg)
    label, _ = classify_abelian(rep, eps_abelian)
    cd = _sign_defect(cen)
    md = (_sign_defect(mk1), _sign_defect(mk2))
    if label is Label.N:
        ok = cd < center_tol and max(md) < center_tol
    else:
        m1, m2 = rep.mu1, rep.mu2
        expect = [
            (lam1, m2 * m2), (lam2, m1 * m1),
            (mk1, m1.inverse() * m1.inverse() * m2 * m2),
            (mk2, m2.inverse() * m2.inverse() * m1 * m1),
        ]
        ok = all(got.dist(want) < center_tol for got, want in expect)
    return MechanismReport(lam1, lam2, mk1, mk2, cen, label, cd, md, ok)


def torus_knot_irreps(p: int, q: int) -> list:
    """
    Arcs of irreducible SU(2) characters of <x, y | x^p = y^q>.

    x goes to a conjugate of exp(pi i k/p), y to one of exp(pi i l/q), and
    the common value x^p = y^q = +-1 forces k = l (mod 2).
    """
    if math.gcd(p, q) != 1:
        raise ValueError(f"gcd({p},{q}) != 1")
    if p < 2 or q < 2:
        raise ValueError("torus knot needs p, q >= 2")
    out = []
    for center in (1, -1):
        par = 0 if center == 1 else 1
        for k in range(1, p):
            if k % 2 != par:
                continue
            for l in range(1, q):
                if l % 2 == par:
                    out.append((k, l))
    return sorted(out)


class Stratum(enum.Enum):
    """Status of a label stratum of the branched-cover character variety."""
    POSSIBLE = "possible"
    TRIVIAL_ONLY = "trivial-only"
    EMPTY = "empty"

    def __bool__(self):
        return self is Stratum.POSSIBLE


def label_triple_allowed(x1, y, x2) -> Stratum:
    """
    Which (x1, y, x2) abelian/non-abelian strata can hold a representation.

    The middle piece is always abelian; AAA carries the trivial
    representation only; AAN, NAA and NAN are the possible strata.
    """
    x1, y, x2 = (Label(v) if not isinstance(v, Label) else v for v in (x1, y, x2))
    if y is Label.N:
        return Stratum.EMPTY
    if x1 is Label.A and x2 is Label.A:
        return Stratum.TRIVIAL_ONLY
    return Stratum.POSSIBLE
