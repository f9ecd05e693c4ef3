"""Root systems, Weyl groups and extended affine Weyl groups.

Vectors are integer or Fraction tuples in the basis of fundamental weights
(omega-coordinates): the i-th coordinate of v is (v, alpha_i^v).  The form
is normalized so that short roots have (alpha, alpha) = 2; then the maximal
coroot theta is the highest short root and (theta, theta) = 2.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .errors import DomainError, InternalError, UnsupportedType

Vector = tuple
WEYL_ENUMERATION_CAP = 60_000

# Dynkin data: (squared lengths of simple roots, bonds (i, j)) in Bourbaki numbering
_EXCEPTIONAL_RANK = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


def _dynkin(type_letter: str, rank: int):
    n = rank
    if type_letter == "A" and n >= 1:
        return [2] * n, [(i, i + 1) for i in range(n - 1)]
    if type_letter == "B" and n >= 2:
        return [4] * (n - 1) + [2], [(i, i + 1) for i in range(n - 1)]
    if type_letter == "C" and n >= 2:
        return [2] * (n - 1) + [4], [(i, i + 1) for i in range(n - 1)]
    if type_letter == "D" and n >= 4:
        return [2] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if type_letter == "E" and n in (6, 7, 8):
        return [2] * n, [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
    if type_letter == "F" and n == 4:
        return [4, 4, 2, 2], [(0, 1), (1, 2), (2, 3)]
    if type_letter == "G" and n == 2:
        return [2, 6], [(0, 1)]
    raise UnsupportedType(f"no root system of type {type_letter}{rank}")


def _inverse(mat):
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _vec(v) -> Vector:
    return tuple(int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in v)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _scale(c, a):
    return tuple(c * x for x in a)


@dataclass(frozen=True)
class WeylElement:
    """A finite Weyl group element as an integer matrix on omega-coordinates."""

    matrix: tuple

    def apply(self, v) -> Vector:
        return tuple(sum(r[j] * v[j] for j in range(len(v))) for r in self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        n = len(self.matrix)
        m = tuple(
            tuple(sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        return WeylElement(m)

    def inverse(self) -> "WeylElement":
        inv = _inverse(self.matrix)
        return WeylElement(tuple(tuple(int(x) for x in row) for row in inv))

    @property
    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == int(i == j) for i in range(len(self.matrix)) for j in range(len(self.matrix)))

    @staticmethod
    def identity(n: int) -> "WeylElement":
        return WeylElement(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


class RootSystemData:
    """Exact root datum of a reduced irreducible root system."""

    def __init__(self, type_letter: str, rank: int):
        type_letter = str(type_letter).upper()
        norms, bonds = _dynkin(type_letter, rank)
        self.type_letter = type_letter
        self.rank = n = rank
        gram = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            gram[i][i] = Fraction(norms[i])
        for i, j in bonds:
            v = -Fraction(max(norms[i], norms[j]), 2)
            gram[i][j] = gram[j][i] = v
        self.simple_norms = tuple(norms)
        # cartan[i][j] = (alpha_i, alpha_j^v)
        self.cartan = tuple(tuple(int(2 * gram[i][j] / gram[j][j]) for j in range(n)) for i in range(n))
        inv = _inverse(self.cartan)
        self.form = tuple(tuple(inv[i][j] * norms[j] / 2 for j in range(n)) for i in range(n))
        self.simple_roots = tuple(tuple(self.cartan[i]) for i in range(n))
        self.fundamental_weights = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self._cartan_inv = inv
        self._check_invariants()

    # basic geometry ----------------------------------------------------
    def inner(self, a, b):
        """(a, b) for vectors in omega-coordinates (works for any scalars)."""
        f = self.form
        return sum(a[i] * f[i][j] * b[j] for i in range(self.rank) for j in range(self.rank) if a[i] and b[j])

    def norm2(self, a):
        return self.inner(a, a)

    def coroot(self, alpha) -> Vector:
        return _vec(_scale(Fraction(2) / self.norm2(alpha), alpha))

    def pair_coroot(self, v, alpha):
        """(v, alpha^v)."""
        return 2 * self.inner(v, alpha) / self.norm2(alpha)

    def nu(self, alpha) -> int:
        """nu_alpha = (alpha, alpha)/2, the exponent in q_alpha = q^nu_alpha."""
        return int(self.norm2(alpha) / 2)

    def orbit_of(self, alpha) -> int:
        """Label of the W-orbit of a root: its squared length (2, 4 or 6)."""
        return int(self.norm2(alpha))

    def orbit_nu(self, orbit: int) -> int:
        return orbit // 2

    def simple_coords(self, v) -> Vector:
        """Coordinates of v in the basis of simple roots."""
        n = self.rank
        return tuple(sum(Fraction(v[i]) * self._cartan_inv[i][j] for i in range(n)) for j in range(n))

    def is_positive_root(self, alpha) -> bool:
        c = self.simple_coords(alpha)
        return all(x >= 0 for x in c) and any(x > 0 for x in c)

    def in_root_lattice(self, v) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.simple_coords(v))

    def reflect(self, i: int, v) -> Vector:
        """s_i(v) = v - (v, alpha_i^v) alpha_i."""
        c = v[i]
        if not c:
            return tuple(v)
        return tuple(x - c * a for x, a in zip(v, self.simple_roots[i]))

    def reflect_by(self, alpha, v) -> Vector:
        c = self.pair_coroot(v, alpha)
        return _vec(_sub(v, _scale(c, alpha)))

    # roots --------------------------------------------------------------
    @cached_property
    def roots(self) -> tuple:
        seen = set(self.simple_roots)
        queue = deque(self.simple_roots)
        while queue:
            r = queue.popleft()
            for i in range(self.rank):
                s = self.reflect(i, r)
                if s not in seen:
                    seen.add(s)
                    queue.append(s)
        return tuple(sorted(seen))

    @cached_property
    def positive_roots(self) -> tuple:
        pos = [r for r in self.roots if self.is_positive_root(r)]
        return tuple(sorted(pos, key=lambda r: (sum(self.simple_coords(r)), r)))

    @cached_property
    def orbits(self) -> tuple:
        return tuple(sorted({self.orbit_of(a) for a in self.roots}))

    @cached_property
    def theta(self) -> Vector:
        short = [r for r in self.positive_roots if self.norm2(r) == 2]
        return max(short, key=lambda r: (sum(self.simple_coords(r)), r))

    @cached_property
    def rho_check(self) -> Vector:
        acc = (Fraction(0),) * self.rank
        for a in self.positive_roots:
            acc = _add(acc, self.coroot(a))
        return _vec(_scale(Fraction(1, 2), acc))

    def height(self, v):
        """(v, rho^v): positive on positive roots, 1 on simple roots."""
        return sum(Fraction(v[i]) * self._rho_check_coeffs[i] for i in range(self.rank))

    @cached_property
    def _rho_check_coeffs(self):
        # (v, rho^v) = sum_i v_i * c_i with rho^v = sum c_i alpha_i^v
        # alpha_i = (|alpha_i|^2/2) alpha_i^v converts simple-root to coroot coefficients
        sc = self.simple_coords(self.rho_check)
        return tuple(sc[i] * Fraction(self.simple_norms[i], 2) for i in range(self.rank))

    @cached_property
    def p(self) -> int:
        entries = [Fraction(x) for row in self.form for x in row if x]
        den = 1
        for e in entries:
            den = den * e.denominator // gcd(den, e.denominator)
        g = 0
        for e in entries:
            g = gcd(g, int(e * den))
        value = Fraction(g, den)
        if value.numerator != 1:
            raise InternalError(f"(P,P) generated by {value}, not 1/p")
        return value.denominator

    @cached_property
    def minuscule(self) -> tuple:
        out = []
        for r in range(self.rank):
            w = self.fundamental_weights[r]
            if all(self.pair_coroot(w, a) <= 1 for a in self.positive_roots):
                out.append(r)
        return tuple(out)

    @cached_property
    def coxeter(self) -> tuple:
        table = {0: 2, 1: 3, 2: 4, 3: 6}
        n = self.rank
        return tuple(
            tuple(1 if i == j else table[self.cartan[i][j] * self.cartan[j][i]] for j in range(n))
            for i in range(n)
        )

    # Weyl group ----------------------------------------------------------
    def simple_reflection(self, i: int) -> WeylElement:
        n = self.rank
        a = self.simple_roots[i]
        return WeylElement(tuple(tuple(int(r == c) - (a[r] if c == i else 0) for c in range(n)) for r in range(n)))

    def reflection(self, alpha) -> WeylElement:
        n = self.rank
        cols = [self.reflect_by(alpha, self.fundamental_weights[c]) for c in range(n)]
        return WeylElement(tuple(tuple(int(cols[c][r]) for c in range(n)) for r in range(n)))

    @cached_property
    def _weyl_table(self):
        """BFS over W: list of (element, reduced word) sorted by length."""
        rho = (1,) * self.rank
        ident = WeylElement.identity(self.rank)
        seen = {rho: (ident, ())}
        order = [rho]
        queue = deque([rho])
        gens = [self.simple_reflection(i) for i in range(self.rank)]
        while queue:
            key = queue.popleft()
            w, word = seen[key]
            for i, s in enumerate(gens):
                u = w * s
                k = u.apply(rho)
                if k not in seen:
                    if len(seen) >= WEYL_ENUMERATION_CAP:
                        raise DomainError(f"Weyl group of {self.type_letter}{self.rank} exceeds the enumeration cap")
                    seen[k] = (u, word + (i + 1,))
                    order.append(k)
                    queue.append(k)
        return [seen[k] for k in order]

    @property
    def weyl_group(self) -> list:
        return [w for w, _ in self._weyl_table]

    def weyl_word(self, w: WeylElement) -> tuple:
        key = w.apply((1,) * self.rank)
        for u, word in self._weyl_table:
            if u.apply((1,) * self.rank) == key:
                return word
        raise InternalError("element not in W")

    def weyl_length(self, w: WeylElement) -> int:
        return sum(1 for a in self.positive_roots if not self.is_positive_root(w.apply(a)))

    def dominant(self, v) -> tuple:
        """(v_+, u) with v_+ dominant and u(v_+) = v, u of minimal length."""
        cur = tuple(v)
        word = []
        while True:
            i = next((i for i in range(self.rank) if cur[i] < 0), None)
            if i is None:
                break
            cur = self.reflect(i, cur)
            word.append(i)
        u = WeylElement.identity(self.rank)
        for i in word:
            u = u * self.simple_reflection(i)
        return cur, u

    # affine group ---------------------------------------------------------
    def affine(self, b=None, w: WeylElement | None = None) -> "AffineElement":
        b = tuple(b) if b is not None else (0,) * self.rank
        return AffineElement(self, tuple(int(x) for x in b), w or WeylElement.identity(self.rank))

    def translation(self, b) -> "AffineElement":
        return self.affine(b)

    def s(self, j: int) -> "AffineElement":
        """Simple reflection s_j of the affine Weyl group, 0 <= j <= n."""
        if j == 0:
            return self.affine(self.theta, self.reflection(self.theta))
        return self.affine(None, self.simple_reflection(j - 1))

    def affine_simple_root(self, j: int) -> tuple:
        if j == 0:
            return (tuple(-x for x in self.theta), 1)
        return (self.simple_roots[j - 1], 0)

    @cached_property
    def pi_group(self) -> tuple:
        """The length-zero elements Pi, the identity first, then pi_r for minuscule r."""
        out = [self.affine()]
        for r in self.minuscule:
            out.append(self.translation(self.fundamental_weights[r]).reduced_word()[0])
        return tuple(out)

    def is_negative_affine_root(self, root) -> bool:
        beta, c = root
        return c < 0 or (c == 0 and not self.is_positive_root(beta))

    # serialization ---------------------------------------------------------
    def to_json(self) -> str:
        data = {
            "type": self.type_letter,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "simple_root_norms": list(self.simple_norms),
            "form": [[str(x) for x in r] for r in self.form],
            "theta": [str(x) for x in self.theta],
            "p": self.p,
        }
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RootSystemData":
        data = json.loads(text)
        R = cls(data["type"], data["rank"])
        if [list(r) for r in R.cartan] != data["cartan"]:
            raise DomainError("serialized Cartan matrix does not match the type")
        return R

    def __eq__(self, other):
        return isinstance(other, RootSystemData) and (self.type_letter, self.rank) == (other.type_letter, other.rank)

    def __hash__(self):
        return hash((self.type_letter, self.rank))

    def __repr__(self):
        return f"RootSystemData({self.type_letter}{self.rank})"

    def _check_invariants(self):
        n = self.rank
        for i in range(n):
            for j in range(n):
                if self.pair_coroot(self.fundamental_weights[i], self.simple_roots[j]) != int(i == j):
                    raise InternalError("(omega_i, alpha_j^v) != delta_ij")
        if self.norm2(self.theta) != 2:
            raise InternalError("(theta, theta) != 2")
        for a in self.roots:
            for b in self.simple_roots:
                if Fraction(self.pair_coroot(a, b)).denominator != 1:
                    raise InternalError("non-integral Cartan pairing")


def build_root_system(type_letter: str, rank: int) -> RootSystemData:
    return RootSystemData(type_letter, rank)


@dataclass(frozen=True)
class AffineElement:
    """The element t_b w of the extended affine Weyl group W x| P."""

    R: RootSystemData = field(repr=False, compare=False, hash=False)
    b: tuple
    w: WeylElement

    @property
    def key(self):
        return (self.b, self.w.matrix)

    def __eq__(self, other):
        return isinstance(other, AffineElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        b = _add(self.b, self.w.apply(other.b))
        return AffineElement(self.R, tuple(int(x) for x in b), self.w * other.w)

    def inverse(self) -> "AffineElement":
        wi = self.w.inverse()
        return AffineElement(self.R, tuple(-int(x) for x in wi.apply(self.b)), wi)

    def act(self, z, zeta=0):
        """Action on [z, zeta]: [w z, zeta - (w z, b)]."""
        wz = self.w.apply(z)
        return (wz, zeta - self.R.inner(wz, self.b))

    def act_point(self, z) -> tuple:
        """The point w(z) + b, i.e. the image of z under the affine action."""
        return _add(self.w.apply(z), self.b)

    def length(self) -> int:
        R = self.R
        total = 0
        for alpha in R.roots:
            beta = self.w.apply(alpha)
            m = Fraction(R.pair_coroot(self.b, beta))
            if m.denominator != 1:
                raise InternalError("non-integral pairing in length")
            m = int(m)
            j_lo = 0 if R.is_positive_root(alpha) else 1
            j_hi = m if not R.is_positive_root(beta) else m - 1
            total += max(0, j_hi - j_lo + 1)
        return total

    def image_of_simple_root(self, j: int) -> tuple:
        beta, c = self.R.affine_simple_root(j)
        return self.act(beta, c)

    def has_descent(self, j: int) -> bool:
        """True when l(self * s_j) < l(self)."""
        return self.R.is_negative_affine_root(self.image_of_simple_root(j))

    def reduced_word(self) -> tuple:
        """(pi, word) with self = pi s_{word[0]} ... s_{word[-1]}, pi of length 0."""
        cur = self
        tail = []
        guard = 0
        while True:
            j = next((j for j in range(self.R.rank + 1) if cur.has_descent(j)), None)
            if j is None:
                break
            cur = cur * self.R.s(j)
            tail.append(j)
            guard += 1
            if guard > 10_000:
                raise InternalError("reduced word search did not terminate")
        return cur, tuple(reversed(tail))

    @property
    def is_translation(self) -> bool:
        return self.w.is_identity

    def __repr__(self):
        return f"AffineElement(b={self.b}, w={self.w.matrix})"


def enumerate_affine(R: RootSystemData, max_length: int) -> dict:
    """Breadth-first lengths of all elements of length <= max_length."""
    out = {}
    queue = deque()
    for pi in R.pi_group:
        out[pi] = 0
        queue.append(pi)
    gens = [R.s(j) for j in range(R.rank + 1)]
    while queue:
        x = queue.popleft()
        if out[x] == max_length:
            continue
        for s in gens:
            y = x * s
            if y not in out:
                out[y] = out[x] + 1
                queue.append(y)
    return out


def pi_b_decomposition(R: RootSystemData, b) -> tuple:
    """(pi_b, w_b) with t_b = pi_b w_b, l(t_b) = l(pi_b) + l(w_b), l(w_b) maximal.

    pi_b is the minimal-length representative of the coset t_b W, found by
    peeling right descents among s_1..s_n.
    """
    u = R.translation(b)
    w = WeylElement.identity(R.rank)
    while True:
        j = next((j for j in range(1, R.rank + 1) if u.has_descent(j)), None)
        if j is None:
            break
        s = R.simple_reflection(j - 1)
        u = u * R.s(j)
        w = s * w
    return u, w


@dataclass(frozen=True)
class MultiplicityFunction:
    """Values k_o indexed by root-length orbit (squared length 2, 4 or 6)."""

    values: tuple  # sorted (orbit, value) pairs

    @classmethod
    def uniform(cls, R: RootSystemData, k) -> "MultiplicityFunction":
        return cls(tuple((o, k) for o in R.orbits))

    @classmethod
    def from_dict(cls, data: dict) -> "MultiplicityFunction":
        return cls(tuple(sorted(data.items())))

    def __getitem__(self, orbit):
        for o, v in self.values:
            if o == orbit:
                return v
        raise KeyError(orbit)

    def of_root(self, R: RootSystemData, alpha):
        return self[R.orbit_of(alpha)]

    def as_dict(self) -> dict:
        return dict(self.values)


@dataclass(frozen=True)
class SpectralVector:
    """z = base + sum_o k_o * parts[o], linear in the multiplicities."""

    base: tuple
    parts: tuple  # sorted (orbit, vector) pairs

    def evaluate(self, k: MultiplicityFunction):
        out = list(self.base)
        for o, v in self.parts:
            ko = k[o]
            out = [x + ko * y for x, y in zip(out, v)]
        return tuple(out)

    def part(self, orbit):
        for o, v in self.parts:
            if o == orbit:
                return v
        return (0,) * len(self.base)

    def __neg__(self):
        return SpectralVector(tuple(-x for x in self.base), tuple((o, tuple(-x for x in v)) for o, v in self.parts))

    def apply(self, w: WeylElement) -> "SpectralVector":
        return SpectralVector(w.apply(self.base), tuple((o, w.apply(v)) for o, v in self.parts))

    def __add__(self, other: "SpectralVector") -> "SpectralVector":
        orbits = sorted({o for o, _ in self.parts} | {o for o, _ in other.parts})
        return SpectralVector(
            _add(self.base, other.base),
            tuple((o, _vec(_add(self.part(o), other.part(o)))) for o in orbits),
        )

    @classmethod
    def constant(cls, v) -> "SpectralVector":
        return cls(tuple(v), ())

    def to_strings(self) -> dict:
        return {
            "base": [str(x) for x in self.base],
            "k": {str(o): [str(x) for x in v] for o, v in self.parts},
        }


def rho_parts(R: RootSystemData) -> SpectralVector:
    """rho_k as a spectral vector: sum over orbits of k_o * (half the positive roots in o)."""
    parts = []
    for o in R.orbits:
        acc = (Fraction(0),) * R.rank
        for a in R.positive_roots:
            if R.orbit_of(a) == o:
                acc = _add(acc, a)
        parts.append((o, _vec(_scale(Fraction(1, 2), acc))))
    return SpectralVector((0,) * R.rank, tuple(parts))


def rho_k(R: RootSystemData, k: MultiplicityFunction) -> tuple:
    return rho_parts(R).evaluate(k)


def b_sharp_parts(R: RootSystemData, b) -> SpectralVector:
    """b_sharp = b - w_b^{-1}(rho_k) with the k-dependence kept symbolic."""
    _, w = pi_b_decomposition(R, b)
    return SpectralVector.constant(tuple(b)) + (-(rho_parts(R).apply(w.inverse())))


def b_sharp(R: RootSystemData, b, k: MultiplicityFunction) -> tuple:
    return b_sharp_parts(R, b).evaluate(k)
