"""Exact computations at q a root of unity, in the A_1 case.

q = exp(2 pi i/N) lives in Q(zeta) with zeta = exp(2 pi i/(4N)), so that
q = zeta^4 and q^(1/4) = zeta.  Functions on the grid X = q^(m/2),
m in (-N, N], are vectors indexed by m.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .coefficients import CyclotomicDomain
from .cyclotomic import CyclotomicValue, cyclotomic_field
from .daha import PolynomialRepresentation, macdonald_e
from .errors import (
    DivisionError,
    DomainError,
    EmptyModule,
    GridDegeneracyError,
    ResonanceError,
    SingularBasisError,
)
from .qseries import LaurentPolynomial
from .rootdata import MultiplicityFunction, build_root_system, rho_parts

A1 = build_root_system("A", 1)


def _check_nk(N: int, k: int):
    if N < 2:
        raise DomainError("N must be at least 2")
    if k < 1 or 2 * k > N:
        raise DomainError(f"need 1 <= k <= N/2, got N={N}, k={k}")


class _Q:
    """Powers of q = zeta_{4N}^4 and of q^(1/4) = zeta_{4N}."""

    def __init__(self, N: int):
        self.N = N
        self.F = cyclotomic_field(4 * N)

    def q4(self, e: int) -> CyclotomicValue:
        """q^(e/4)."""
        return self.F.zeta_power(e)

    def q(self, e) -> CyclotomicValue:
        e4 = Fraction(e) * 4
        if e4.denominator != 1:
            raise DomainError(f"q^{e} is not a power of q^(1/4)")
        return self.F.zeta_power(int(e4))


# ---------------------------------------------------------------------------
# Gauss sums


def gauss_sum(N: int) -> CyclotomicValue:
    """sum_{m=0}^{2N-1} q^(m^2/4)."""
    Q = _Q(N)
    acc = Q.F.zero()
    for m in range(2 * N):
        acc = acc + Q.q4(m * m)
    return acc


@dataclass
class GaussSelbergResult:
    N: int
    k: int
    lhs: CyclotomicValue
    rhs: CyclotomicValue

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def residual(self, dps=30):
        return abs(self.lhs.to_complex(dps) - self.rhs.to_complex(dps))


def gauss_selberg(N: int, k: int) -> GaussSelbergResult:
    """Both sides of the Gauss-Selberg sum identity in Q(zeta_{4N}).

    lhs = sum_{j=0}^{N-2k} q^((k-j)^2/4) (1-q^(j+k))/(1-q^k) prod_{l=1}^j (1-q^(l+2k-1))/(1-q^l)
    rhs = prod_{j=1}^k (1-q^j)^(-1) sum_{m=0}^{2N-1} q^(m^2/4)
    """
    _check_nk(N, k)
    Q = _Q(N)
    one = Q.F.one()
    lhs = Q.F.zero()
    prod = one
    base = (one - Q.q(k)).inverse()
    for j in range(N - 2 * k + 1):
        if j:
            prod = prod * (one - Q.q(j + 2 * k - 1)) / (one - Q.q(j))
        lhs = lhs + Q.q4((k - j) ** 2) * (one - Q.q(j + k)) * base * prod
    den = one
    for j in range(1, k + 1):
        den = den * (one - Q.q(j))
    rhs = gauss_sum(N) / den
    return GaussSelbergResult(N, k, lhs, rhs)


def gauss_selberg_csv(cases: Sequence[tuple], dps: int = 30) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "k", "exact_equal", "numeric_residual"])
    for N, k in cases:
        r = gauss_selberg(N, k)
        w.writerow([N, k, str(r.equal).lower(), _fmt_residual(r.residual(dps))])
    return buf.getvalue()


def _fmt_residual(x) -> str:
    import mpmath

    return mpmath.nstr(mpmath.mpf(x), 5) if x else "0"


# ---------------------------------------------------------------------------
# matrices over Q(zeta)


class CMatrix:
    """Dense square or rectangular matrix with cyclotomic entries."""

    def __init__(self, F, rows):
        self.F = F
        self.rows = [list(r) for r in rows]

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, F, n):
        return cls(F, [[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, F, entries):
        n = len(entries)
        return cls(F, [[entries[i] if i == j else F.zero() for j in range(n)] for i in range(n)])

    def __mul__(self, other):
        if isinstance(other, CMatrix):
            n, m = self.shape
            m2, p = other.shape
            if m != m2:
                raise ValueError("shape mismatch")
            out = []
            cols = list(zip(*other.rows))
            for r in self.rows:
                row = []
                for c in cols:
                    acc = self.F.zero()
                    for x, y in zip(r, c):
                        if not x.is_zero() and not y.is_zero():
                            acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return CMatrix(self.F, out)
        return CMatrix(self.F, [[x * other for x in r] for r in self.rows])

    __rmul__ = lambda self, other: self * other

    def __add__(self, other):
        return CMatrix(self.F, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return CMatrix(self.F, [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __eq__(self, other):
        return isinstance(other, CMatrix) and all(x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def apply(self, v):
        return [sum((x * y for x, y in zip(r, v)), self.F.zero()) for r in self.rows]

    def transpose(self):
        return CMatrix(self.F, [list(c) for c in zip(*self.rows)])

    def _echelon(self, aug=None):
        A = [list(r) + (list(a) if aug else []) for r, a in zip(self.rows, aug or self.rows)]
        n, m = self.shape
        pivots = []
        r = 0
        for c in range(m):
            p = next((i for i in range(r, n) if not A[i][c].is_zero()), None)
            if p is None:
                continue
            A[r], A[p] = A[p], A[r]
            inv = A[r][c].inverse()
            A[r] = [x * inv for x in A[r]]
            for i in range(n):
                if i != r and not A[i][c].is_zero():
                    f = A[i][c]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
            if r == n:
                break
        return A, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def inverse(self) -> "CMatrix":
        n, m = self.shape
        if n != m:
            raise ValueError("only square matrices are invertible")
        eye = CMatrix.identity(self.F, n).rows
        A, piv = self._echelon(eye)
        if len(piv) < n:
            raise DivisionError("singular matrix")
        return CMatrix(self.F, [r[n:] for r in A])

    def nullspace(self) -> list:
        A, piv = self._echelon()
        n, m = self.shape
        free = [c for c in range(m) if c not in piv]
        basis = []
        for f in free:
            v = [self.F.zero() for _ in range(m)]
            v[f] = self.F.one()
            for i, c in enumerate(piv):
                v[c] = -A[i][f]
            basis.append(v)
        return basis

    def solve(self, b) -> list:
        """x with A x = b for square invertible A."""
        n, _ = self.shape
        A, piv = self._echelon([[x] for x in b])
        if len(piv) < n:
            raise SingularBasisError("singular system")
        return [r[n] for r in A]

    def is_scalar_multiple_of(self, other):
        """The scalar c with self = c * other, or None."""
        c = None
        for r, s in zip(self.rows, other.rows):
            for x, y in zip(r, s):
                if y.is_zero():
                    if not x.is_zero():
                        return None
                    continue
                ratio = x / y
                if c is None:
                    c = ratio
                elif ratio != c:
                    return None
        return c


# ---------------------------------------------------------------------------
# the finite modules V_k


def bowtie(N: int, k: int) -> list:
    """{-N+k+1, ..., -k} u {k+1, ..., N-k}: the m with mu(q^(m/2)) != 0."""
    if 2 * k > N or k < 1:
        raise DomainError(f"need 1 <= k <= N/2, got N={N}, k={k}")
    if 2 * k == N:
        raise EmptyModule(f"2k = N = {N}: the index set is empty")
    return list(range(-N + k + 1, -k + 1)) + list(range(k + 1, N - k + 1))


def _grid_rep(m: int, N: int) -> int:
    """Representative of m modulo 2N in (-N, N]."""
    r = m % (2 * N)
    return r - 2 * N if r > N else r


@dataclass
class VkModule:
    N: int
    k: int
    labels: list
    X: CMatrix
    T: CMatrix
    pi: CMatrix
    Y: CMatrix
    F: object = field(repr=False)
    plus: list = field(default_factory=list)
    minus: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.labels)

    def q(self, e):
        return _Q(self.N).q(e)

    def evaluate(self, f: LaurentPolynomial) -> list:
        """Values of f at q^(m/2), m in the index set."""
        Q = _Q(self.N)
        return [f.evaluate(lambda a: Q.q(Fraction(a[0] * m, 2)), Q.F.zero()) for m in self.labels]

    def relations(self) -> dict:
        """All A_1 relations as matrix identities."""
        Q = _Q(self.N)
        I = CMatrix.identity(self.F, self.dim)
        th = Q.q(Fraction(self.k, 2))
        Xi, Ti, Yi = self.X.inverse(), self.T.inverse(), self.Y.inverse()
        return {
            "TXT=X^-1": self.T * self.X * self.T == Xi,
            "T^-1YT^-1=Y^-1": Ti * self.Y * Ti == Yi,
            "Y^-1X^-1YXT^2=q^-1/2": Yi * Xi * self.Y * self.X * self.T * self.T == I * Q.q(Fraction(-1, 2)),
            "quadratic": (self.T - I * th) * (self.T + I * (1 / th)) == CMatrix(self.F, [[self.F.zero()] * self.dim for _ in range(self.dim)]),
            "pi^2=1": self.pi * self.pi == I,
            "Y=piT": self.Y == self.pi * self.T,
        }


def build_Vk(N: int, k: int) -> VkModule:
    """Matrices of X, T, pi, Y on functions on the index set."""
    labels = bowtie(N, k)
    Q = _Q(N)
    F = Q.F
    index = {m: i for i, m in enumerate(labels)}
    n = len(labels)
    zero = F.zero()
    th = Q.q(Fraction(k, 2))
    g = th - 1 / th
    X = CMatrix.diagonal(F, [Q.q(Fraction(m, 2)) for m in labels])
    T = [[zero] * n for _ in range(n)]
    P = [[zero] * n for _ in range(n)]
    for m, i in index.items():
        qm = Q.q(m)
        den = qm - 1
        if den.is_zero():
            raise GridDegeneracyError(f"X^2 = 1 at grid point m={m}")
        c_reflect = (th * qm - 1 / th) / den
        c_same = -g / den
        T[i][i] = T[i][i] + c_same
        j = index.get(_grid_rep(-m, N))
        if j is None:
            if not c_reflect.is_zero():
                raise GridDegeneracyError(f"T needs the value at m={-m}, outside the index set")
        else:
            T[i][j] = T[i][j] + c_reflect
        j = index.get(_grid_rep(1 - m, N))
        if j is None:
            raise GridDegeneracyError(f"pi maps m={m} outside the index set")
        P[i][j] = F.one()
    T = CMatrix(F, T)
    pi = CMatrix(F, P)
    V = VkModule(N, k, labels, X, T, pi, pi * T, F)
    I = CMatrix.identity(F, n)
    V.plus = (T - I * th).nullspace()
    V.minus = (T + I * (1 / th)).nullspace()
    return V


def is_irreducible(V: VkModule) -> bool:
    """True when no proper subspace is stable under X, T and pi.

    X is diagonal with distinct entries on the grid, so a stable subspace is
    spanned by coordinate vectors; it is stable iff the set of labels is closed
    under the nonzero entries of T and pi.  Irreducible means that graph is
    strongly connected.
    """
    diag = [V.X.rows[i][i] for i in range(V.dim)]
    if len(set(diag)) != V.dim:
        raise GridDegeneracyError("X has a repeated eigenvalue on the grid")
    edges = {i: set() for i in range(V.dim)}
    for M in (V.T, V.pi):
        for r in range(V.dim):
            for c in range(V.dim):
                if r != c and not M.rows[r][c].is_zero():
                    edges[c].add(r)

    def reach(start, graph):
        seen, todo = {start}, [start]
        while todo:
            for j in graph[todo.pop()] - seen:
                seen.add(j)
                todo.append(j)
        return seen

    back = {i: {j for j in edges if i in edges[j]} for i in edges}
    return len(reach(0, edges)) == V.dim and len(reach(0, back)) == V.dim


def _y_eigenbasis(V: VkModule):
    """(eigenvalue exponents e with Y v = zeta^e v, eigenvectors) over all 4N candidates."""
    F = V.F
    I = CMatrix.identity(F, V.dim)
    vals, vecs = [], []
    for e in range(4 * V.N):
        ns = (V.Y - I * F.zeta_power(e)).nullspace()
        for v in ns:
            vals.append(e)
            vecs.append(v)
    if len(vecs) != V.dim:
        raise GridDegeneracyError("Y is not diagonalizable over Q(zeta) on this module")
    return vals, vecs


@dataclass
class PSL2Report:
    tau_plus: CMatrix
    tau_minus: CMatrix
    scalar: object
    relations: dict


def psl2z_action(V: VkModule) -> PSL2Report:
    """tau_+ as multiplication by q^(x^2) on the grid and tau_- as a function of Y.

    tau_+ is G = diag(q^(m^2/4)); tau_- is H, diagonal in the Y-eigenbasis
    and fixed (up to a scalar) by H X H^-1 = q^(1/4) Y X.  The report
    contains the scalar c with G^-1 H G^-1 = c H G^-1 H, or None.
    """
    Q = _Q(V.N)
    F = V.F
    G = CMatrix.diagonal(F, [Q.q4(m * m) for m in V.labels])
    vals, vecs = _y_eigenbasis(V)
    S = CMatrix(F, [list(r) for r in zip(*vecs)])  # columns are eigenvectors
    Si = S.inverse()
    Xe = Si * V.X * S
    # c_i X_ij = q^(1/4) y_i X_ij c_j  ->  c_j = c_i / (q^(1/4) y_i)
    n = V.dim
    coef = [None] * n
    coef[0] = F.one()
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if coef[i] is None:
                continue
            for j in range(n):
                if not Xe.rows[i][j].is_zero():
                    want = coef[i] / (Q.q4(1) * F.zeta_power(vals[i]))
                    if coef[j] is None:
                        coef[j] = want
                        changed = True
                    elif coef[j] != want:
                        raise GridDegeneracyError("tau_- is not realized by a function of Y")
    if any(c is None for c in coef):
        raise GridDegeneracyError("X does not connect the Y-eigenspaces")
    H = S * CMatrix.diagonal(F, coef) * Si
    Gi, Hi = G.inverse(), H.inverse()
    left = Gi * H * Gi
    right = H * Gi * H
    scalar = left.is_scalar_multiple_of(right)
    rel = {
        "tau+(X)=X": G * V.X * Gi == V.X,
        "tau+(T)=T": G * V.T * Gi == V.T,
        "tau+(Y)=q^-1/4XY": G * V.Y * Gi == V.X * V.Y * Q.q4(-1),
        "tau-(X)=q^1/4YX": H * V.X * Hi == V.Y * V.X * Q.q4(1),
        "tau-(T)=T": H * V.T * Hi == V.T,
        "tau-(Y)=Y": H * V.Y * Hi == V.Y,
        "projective": scalar is not None,
        "preserves V+": _preserves(G, V.plus) and _preserves(H, V.plus),
        "preserves V-": _preserves(G, V.minus) and _preserves(H, V.minus),
    }
    return PSL2Report(G, H, scalar, rel)


def _preserves(A: CMatrix, basis: list) -> bool:
    if not basis:
        return True
    B = CMatrix(A.F, [list(r) for r in zip(*basis)])
    images = [A.apply(v) for v in basis]
    rank = B.rank()
    for w in images:
        aug = CMatrix(A.F, [list(r) + [x] for r, x in zip(B.rows, w)])
        if aug.rank() != rank:
            return False
    return True


# ---------------------------------------------------------------------------
# symmetric polynomials and the Verlinde algebra


def symmetric_macdonald(n: int, domain) -> LaurentPolynomial:
    """Monic symmetric P_n = (X^n + X^-n) + lower, eigenfunction of Y + Y^-1 (A_1)."""
    rep = PolynomialRepresentation(domain)
    one = domain.one
    orbit = lambda j: LaurentPolynomial({(j,): one, (-j,): one}, rank=1) if j else LaurentPolynomial({(0,): one}, rank=1)
    L = lambda f: rep.Y((1,), f) + rep.Y((-1,), f)
    images = {j: L(orbit(j)) for j in range(n + 1)}
    diag = {j: images[j].coefficient((j,), domain.zero) for j in range(n + 1)}
    coeffs = {n: one}
    for d in range(n - 1, -1, -1):
        gap = diag[d] - diag[n]
        acc = domain.zero
        for c, x in coeffs.items():
            acc = acc + images[c].coefficient((d,), domain.zero) * x
        if domain.is_zero(gap):
            if domain.is_zero(acc):
                continue
            raise ResonanceError(f"P_{n}: eigenvalues of X^{d} and X^{n} collide")
        v = -acc / gap
        if not domain.is_zero(v):
            coeffs[d] = v
    out = LaurentPolynomial.zero(1)
    for j, c in coeffs.items():
        out = out + orbit(j) * c
    return out


@dataclass
class VerlindeAlgebra:
    N: int
    k: int
    points: list  # grid labels m of the representatives
    basis: list  # symmetric polynomials P_0..P_{N-2k}
    values: CMatrix  # values[n][j] = P_n(q^(m_j/2))
    constants: dict  # (i, j) -> list of structure constants

    def product(self, i, j) -> list:
        return self.constants[(i, j)]

    def to_json(self) -> str:
        data = {
            "N": self.N,
            "k": self.k,
            "basis": [f"P{n}" for n in range(len(self.basis))],
            "points": self.points,
            "structure_constants": {
                f"{i},{j}": [c.as_strings() for c in row] for (i, j), row in sorted(self.constants.items())
            },
        }
        return json.dumps(data, indent=2, sort_keys=True)


def verlinde_algebra(N: int, k: int) -> VerlindeAlgebra:
    """Pointwise products of P_0..P_{N-2k} on the symmetric grid, expanded in the same basis.

    The grid points are m = -k - j for j = 0..N-2k (values of symmetric
    functions on the plus part), starting at q^(-rho_k).
    """
    bowtie(N, k)
    domain = CyclotomicDomain(A1, N, MultiplicityFunction.uniform(A1, k))
    F = domain.F
    size = N - 2 * k + 1
    points = [-k - j for j in range(size)]
    basis = [symmetric_macdonald(n, domain) for n in range(size)]
    Q = _Q(N)
    values = CMatrix(F, [[P.evaluate(lambda a: Q.q(Fraction(a[0] * m, 2)), F.zero()) for m in points] for P in basis])
    if values.rank() < size:
        raise SingularBasisError(f"P_n evaluations are dependent for N={N}, k={k}")
    Vt = values.transpose()
    constants = {}
    for i in range(size):
        for j in range(size):
            prod = [x * y for x, y in zip(values.rows[i], values.rows[j])]
            constants[(i, j)] = Vt.solve(prod)
    return VerlindeAlgebra(N, k, points, basis, values, constants)


def verlinde_product(V: VerlindeAlgebra, i: int, j: int) -> list:
    return V.product(i, j)


# ---------------------------------------------------------------------------
# the discrete pairing


def gauss_selberg_scale(N: int, k: int) -> CyclotomicValue:
    """(-1)^k q^(-k(3k+1)/2) prod_{j=1}^{2k} (1 - q^j).

    Both sides of :func:`discrete_master` at b = c = 0 equal this constant
    times the corresponding sides of :func:`gauss_selberg`.
    """
    Q = _Q(N)
    out = Q.q(Fraction(-k * (3 * k + 1), 2)) * (-1) ** k
    for j in range(1, 2 * k + 1):
        out = out * (1 - Q.q(j))
    return out


def discrete_pairing_N(f, N: int) -> CyclotomicValue:
    """sum over b in P/(P cap N Q^v) of f(q^b); for A_1 this is m = 0..2N-1 with X = q^(m/2).

    ``f`` is a Laurent polynomial with cyclotomic coefficients or a function of m.
    """
    Q = _Q(N)
    acc = Q.F.zero()
    for m in range(2 * N):
        if callable(f):
            acc = acc + f(m)
        else:
            acc = acc + f.evaluate(lambda a: Q.q(Fraction(a[0] * m, 2)), Q.F.zero())
    return acc


def _mu_values(N, k, Q, invert_t=False):
    """mu(q^(m/2)) for integer k (finite product), or mu(X, t^-1)^-1 when invert_t."""
    out = {}
    for m in range(2 * N):
        v = Q.F.one()
        for i in range(k):
            if invert_t:
                v = v * (1 - Q.q(m + i - k)) * (1 - Q.q(-m + i + 1 - k))
            else:
                v = v * (1 - Q.q(m + i)) * (1 - Q.q(-m + i + 1))
        out[m] = v
    return out


def discrete_master(b: int, c: int, N: int, k: int):
    """Both sides of the Jackson master identity with <.>_N in place of <.>_xi (A_1).

    lhs = <eps_b eps_c* gamma mu-circ>_N and
    rhs = q^{-(b#,b#)/2-(c#,c#)/2+(rho_k,rho_k)} eps_c(q^{b#}) |W|^-1 <gamma>_N
          * 2 prod_{j<k} (1 - q^(-2k+j)).
    For k in Z_+ mu-circ is the finite product prod_{i<k} (1-X^2 q^(i-k))(1-X^-2 q^(i+1-k)).
    """
    _check_nk(N, k)
    Q = _Q(N)
    kf = MultiplicityFunction.uniform(A1, k)
    D = CyclotomicDomain(A1, N, kf)
    eb, ec = macdonald_e((b,), D), macdonald_e((c,), D)
    if eb.epsilon is None or ec.epsilon is None:
        raise DivisionError("e_b vanishes at q^(-rho_k)")
    ecs = ec.epsilon.map_coefficients(lambda x: x.conjugate()).reflect()
    mu_c = _mu_values(N, k, Q, invert_t=True)

    def summand(m):
        ev = lambda a: Q.q(Fraction(a[0] * m, 2))
        return eb.epsilon.evaluate(ev, Q.F.zero()) * ecs.evaluate(ev, Q.F.zero()) * Q.q4(m * m) * mu_c[m]

    lhs = discrete_pairing_N(summand, N)
    bs = eb.b_sharp.evaluate(kf)[0]
    cs = ec.b_sharp.evaluate(kf)[0]
    rho = rho_parts(A1).evaluate(kf)[0]
    # (x, x) = x^2/2 in omega-coordinates
    expo = -Fraction(bs) ** 2 / 4 - Fraction(cs) ** 2 / 4 + Fraction(rho) ** 2 / 2
    value = ec.epsilon.evaluate(lambda a: Q.q(Fraction(a[0]) * Fraction(bs) / 2), Q.F.zero())
    prod = Q.F.rational(2)
    for j in range(k):
        prod = prod * (1 - Q.q(-2 * k + j))
    rhs = Q.q(expo) * value * gauss_sum(N) * Fraction(1, 2) * prod
    return lhs, rhs


def pairing_radical_rank(N: int, k: int) -> tuple:
    """(rank of the Gram matrix of <mu f g*>_N on X^a, a in [-N, N), number of m with mu(q^(m/2)) != 0)."""
    _check_nk(N, k)
    Q = _Q(N)
    mu = _mu_values(N, k, Q)
    exps = list(range(-N, N))
    rows = []
    for a in exps:
        row = []
        for b in exps:
            row.append(discrete_pairing_N(lambda m, a=a, b=b: mu[m] * Q.q(Fraction((a - b) * m, 2)), N))
        rows.append(row)
    rank = CMatrix(Q.F, rows).rank()
    nonzero = sum(1 for v in mu.values() if not v.is_zero())
    return rank, nonzero
