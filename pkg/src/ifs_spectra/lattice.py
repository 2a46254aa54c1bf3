"""Exact integer/rational linear algebra for lattice dynamics.

Everything in this module is computed with :class:`fractions.Fraction`; no
floating point enters here.  Vectors are plain tuples, matrices are tuples of
row tuples wrapped in the thin :class:`IntMatrix` / :class:`RationalMatrix`
classes.  Dimensions are tiny (d <= 2 in practice), so clarity wins over
asymptotics throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateDigitSpanError,
    SingularMatrixError,
    UndecidedExpansivenessError,
    UnsupportedDimensionError,
)

Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


def vec(coords: Iterable) -> Vec:
    return tuple(Fraction(c) for c in coords)


def vec_add(u: Sequence, v: Sequence) -> Vec:
    return tuple(Fraction(a) + Fraction(b) for a, b in zip(u, v, strict=True))


def vec_sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(u, v, strict=True))


def vec_dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v, strict=True)), Fraction(0))


def is_integral(u: Sequence) -> bool:
    return all(Fraction(c).denominator == 1 for c in u)


def _rows(entries) -> tuple[tuple, ...]:
    rows = tuple(tuple(row) for row in entries)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square and nonempty")
    return rows


@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix with exact rational entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, entries):
        rows = _rows(entries)
        object.__setattr__(
            self, "entries", tuple(tuple(Fraction(e) for e in row) for row in rows)
        )

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, d: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)))

    def row(self, i: int) -> Vec:
        return self.entries[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        d = self.dim
        return RationalMatrix(
            tuple(
                tuple(vec_dot(self.entries[i], other.col(j)) for j in range(d))
                for i in range(d)
            )
        )

    def apply(self, v: Sequence) -> Vec:
        return tuple(vec_dot(row, v) for row in self.entries)

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(tuple(tuple(c * e for e in row) for row in self.entries))

    def add(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def det(self) -> Fraction:
        # Fraction-valued Gaussian elimination; d is tiny.
        d = self.dim
        m = [list(row) for row in self.entries]
        det = Fraction(1)
        for c in range(d):
            pivot = next((r for r in range(c, d) if m[r][c] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != c:
                m[c], m[pivot] = m[pivot], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for r in range(c + 1, d):
                f = m[r][c] * inv
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return det

    def inverse(self) -> "RationalMatrix":
        d = self.dim
        m = [list(row) + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(self.entries)]
        for c in range(d):
            pivot = next((r for r in range(c, d) if m[r][c] != 0), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            m[c], m[pivot] = m[pivot], m[c]
            inv = 1 / m[c][c]
            m[c] = [a * inv for a in m[c]]
            for r in range(d):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return RationalMatrix(tuple(tuple(row[d:]) for row in m))

    def solve(self, rhs: Sequence) -> Vec:
        return self.inverse().apply(rhs)

    def pow(self, k: int) -> "RationalMatrix":
        if k < 0:
            return self.inverse().pow(-k)
        result = RationalMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def inf_norm(self) -> Fraction:
        """Row-sum operator norm, exact."""
        return max(sum(abs(e) for e in row) for row in self.entries)

    def to_float(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.entries], dtype=float)


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix with arbitrary-precision integer entries."""

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries):
        rows = _rows(entries)
        for row in rows:
            for e in row:
                if int(e) != e:
                    raise ValueError(f"non-integer entry {e!r}")
        object.__setattr__(self, "entries", tuple(tuple(int(e) for e in row) for row in rows))

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, d: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)))

    def rational(self) -> RationalMatrix:
        return RationalMatrix(self.entries)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        d = self.dim
        return IntMatrix(
            tuple(
                tuple(sum(self.entries[i][k] * other.entries[k][j] for k in range(d)) for j in range(d))
                for i in range(d)
            )
        )

    def apply(self, v: Sequence) -> Vec:
        return self.rational().apply(v)

    def det(self) -> int:
        det = self.rational().det()
        assert det.denominator == 1
        return det.numerator

    def inverse(self) -> RationalMatrix:
        return self.rational().inverse()

    def pow(self, k: int) -> "IntMatrix":
        if k < 0:
            raise ValueError("use .inverse() for negative powers")
        result = IntMatrix.identity(self.dim)
        for _ in range(k):
            result = result @ self
        return result

    def to_float(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)


# ---------------------------------------------------------------------------
# Expansiveness certification


@dataclass(frozen=True)
class ExpansivenessResult:
    expansive: bool
    certificate_k: int | None = None
    norm_bound: Fraction | None = None
    witness_eigenvalue: complex | None = None

    def __bool__(self) -> bool:
        return self.expansive


def is_expansive(M: IntMatrix, k_max: int = 64) -> ExpansivenessResult:
    """Certify that all eigenvalues of ``M`` have modulus > 1.

    The certificate is the smallest k <= k_max with the exact row-sum bound
    ||M^-k||_inf < 1, which forces spectral_radius(M^-1) < 1.  When no
    certificate exists and floating-point eigenvalues show a modulus <= 1
    (plus margin), the answer is False with that eigenvalue as witness.
    Anything else raises :class:`UndecidedExpansivenessError`.
    """
    if M.rational().det() == 0:
        raise SingularMatrixError("expansiveness is undefined for singular matrices")
    inv = M.inverse()
    power = inv
    for k in range(1, k_max + 1):
        bound = power.inf_norm()
        if bound < 1:
            return ExpansivenessResult(True, certificate_k=k, norm_bound=bound)
        power = power @ inv
    eigvals = np.linalg.eigvals(M.to_float())
    margin = 1e-9
    small = [ev for ev in eigvals if abs(ev) <= 1 + margin]
    if small:
        witness = min(small, key=abs)
        return ExpansivenessResult(False, witness_eigenvalue=complex(witness))
    raise UndecidedExpansivenessError(
        f"no norm certificate within k_max={k_max} and eigenvalues {eigvals} all exceed 1"
    )


def congruent_mod(M: IntMatrix, u: Sequence, v: Sequence) -> bool:
    """True iff u - v lies in M Z^d (exact rational solve + integrality)."""
    diff = vec_sub(u, v)
    try:
        k = M.inverse().apply(diff)
    except SingularMatrixError:
        raise SingularMatrixError("congruence modulo a singular matrix is undefined")
    return is_integral(k)


def cycle_resolvent_apply(S: IntMatrix, m: int, w: Sequence) -> Vec:
    """Exact fixed point x0 = (S^m - I)^-1 w of an m-step digit word.

    Unrolling tau_l(x) = S^-1 (x + l) over a word l_1 ... l_m gives
    (S^m - I) x0 = sum_j S^(j-1) l_j =: w.
    """
    if m < 1:
        raise ValueError("cycle length must be >= 1")
    d = S.dim
    A = S.pow(m).rational().add(RationalMatrix.identity(d).scale(-1))
    if A.det() == 0:
        raise SingularMatrixError(f"S^{m} - I is singular")
    return A.solve(w)


# ---------------------------------------------------------------------------
# Dual-lattice enumeration


Box = tuple[tuple[Fraction, Fraction], ...]


def _box(box) -> Box:
    out = []
    for lo, hi in box:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty box interval")
        out.append((lo, hi))
    return tuple(out)


def hermite_row_basis(vectors: Sequence[IntVec]) -> list[list[int]]:
    """Row-style Hermite basis of the Z-span of integer ``vectors``.

    Returns the nonzero rows of an upper-echelon basis; full rank iff the
    input spans.  Plain Euclidean row reduction, fine for tiny dimensions.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return []
    d = len(rows[0])
    basis: list[list[int]] = []
    col = 0
    while col < d and rows:
        work = [r for r in rows if r[col] != 0]
        if not work:
            col += 1
            continue
        # Reduce all rows with a nonzero entry in this column to a single pivot.
        while len(work) > 1:
            work.sort(key=lambda r: abs(r[col]))
            p = work[0]
            rest = []
            for r in work[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    rest.append(r)
                elif any(r):
                    rows.append(r)
            work = [p] + rest
        pivot = work[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
        for i, r in enumerate(rows):
            if r[col] != 0:
                q = r[col] // pivot[col]
                rows[i] = [a - q * b for a, b in zip(r, pivot)]
        rows = [r for r in rows if any(r)]
        col += 1
    return basis


@dataclass(frozen=True)
class DualLatticePointSet:
    generators: tuple[IntVec, ...]
    box: Box
    points: tuple[Vec, ...]


def dual_lattice_points(G: Sequence[Sequence[int]], box) -> DualLatticePointSet:
    """All x with g.x in Z for every g in G, intersected with ``box``.

    The point set is H^-1 Z^d for a Hermite basis H of the row span of G;
    enumeration walks the integer coordinates over the (exact) image of the
    box and filters.  Raises DegenerateDigitSpanError when G is rank
    deficient, since the solution set would then be unbounded.
    """
    box = _box(box)
    d = len(box)
    gens = tuple(tuple(int(c) for c in g) for g in G)
    basis = hermite_row_basis(gens)
    if len(basis) < d:
        raise DegenerateDigitSpanError(
            f"digit set spans rank {len(basis)} < {d}; candidate set unbounded"
        )
    H = RationalMatrix(basis)
    Hinv = H.inverse()
    # n = H x ranges over the image of the box; bound each coordinate exactly.
    ranges = []
    for i in range(d):
        lo = sum(min(H.entries[i][j] * box[j][0], H.entries[i][j] * box[j][1]) for j in range(d))
        hi = sum(max(H.entries[i][j] * box[j][0], H.entries[i][j] * box[j][1]) for j in range(d))
        ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
    points = []
    for n in itertools.product(*ranges):
        x = Hinv.apply(n)
        if all(box[i][0] <= x[i] <= box[i][1] for i in range(d)):
            points.append(x)
    points.sort()
    return DualLatticePointSet(generators=gens, box=box, points=tuple(points))


# ---------------------------------------------------------------------------
# Rational eigen-lines (d <= 2)


def _primitive(v: Sequence[int]) -> IntVec:
    g = math.gcd(*(abs(int(c)) for c in v))
    v = tuple(int(c) // g for c in v)
    lead = next(c for c in v if c != 0)
    return v if lead > 0 else tuple(-c for c in v)


def rational_eigen_lines(S: IntMatrix) -> list[tuple[IntVec, int]]:
    """All S-invariant lines with rational direction, as (primitive integer
    direction, eigenvalue) pairs.

    Exact only for d <= 2 (quadratic characteristic polynomial).  A scalar
    matrix leaves every line invariant; the coordinate axes are returned in
    that case, which is what downstream coordinate factorization can use.
    """
    d = S.dim
    if d == 1:
        return []
    if d > 2:
        raise UnsupportedDimensionError("exact eigen-line search is limited to d <= 2")
    (a, b), (c, e) = S.entries
    tr, det = a + e, a * e - b * c
    # Integer roots of x^2 - tr x + det (monic, so rational roots are integers).
    disc = tr * tr - 4 * det
    if disc < 0:
        return []
    sq = math.isqrt(disc)
    if sq * sq != disc or (tr - sq) % 2 != 0:
        return []
    roots = sorted({(tr - sq) // 2, (tr + sq) // 2})
    lines: list[tuple[IntVec, int]] = []
    for lam in roots:
        E = ((a - lam, b), (c, e - lam))
        if all(x == 0 for row in E for x in row):
            # Scalar matrix: every direction is invariant.
            lines.extend([((1, 0), lam), ((0, 1), lam)])
            continue
        if E[0] != (0, 0):
            direction = (E[0][1], -E[0][0])
        else:
            direction = (E[1][1], -E[1][0])
        # Row 0 may be nonzero yet not annihilate anything if rank 2 (no eigenvector).
        img = tuple(E[i][0] * direction[0] + E[i][1] * direction[1] for i in range(2))
        if img != (0, 0):
            continue
        lines.append((_primitive(direction), lam))
    lines.sort()
    return lines


def completing_unimodular(v: Sequence[int]) -> IntMatrix:
    """A matrix in GL_2(Z) whose first row is the primitive vector v."""
    v = _primitive(v)
    v1, v2 = v
    g, p, q = _xgcd(v1, v2)
    assert g == 1
    # v1*q - v2*p' style completion: det [[v1, v2], [-q, p]] = v1*p + v2*q = 1.
    return IntMatrix(((v1, v2), (-q, p)))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
