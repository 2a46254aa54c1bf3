"""Hadamard triples: validation, conjugation, and coordinate factorization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    FiberCountMismatchError,
    NonIntegerDigitsError,
    NotInvariantError,
    NotUnimodularError,
    SizeMismatchError,
    SubTripleNotHadamardError,
)
from .lattice import IntMatrix, IntVec, congruent_mod, is_integral

UNITARITY_TOL = 1e-10


def _digit_tuple(digits) -> tuple[IntVec, ...]:
    out = []
    for v in digits:
        if isinstance(v, (int, np.integer)):
            v = (int(v),)
        out.append(tuple(int(c) for c in v))
    return tuple(out)


@dataclass(frozen=True)
class HadamardValidation:
    ok: bool
    unitarity_residual: float
    witness_pair: tuple[IntVec, IntVec] | None
    b_congruence_violations: tuple[tuple[IntVec, IntVec], ...]
    l_congruence_violations: tuple[tuple[IntVec, IntVec], ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_hadamard(R: IntMatrix, B, L) -> HadamardValidation:
    """Check that (1/sqrt(N)) (e^{2 pi i R^-1 b . l}) is unitary.

    Rows are indexed by B.  The residual is the max modulus of the
    off-diagonal normalized row inner products (and diagonal deviation from
    1); the witness is the worst row pair.  Also reports pairs of B elements
    congruent mod R Z^d and L elements congruent mod R^T Z^d, which unitarity
    forbids.
    """
    B, L = _digit_tuple(B), _digit_tuple(L)
    if len(B) != len(L):
        raise SizeMismatchError(f"|B| = {len(B)} != {len(L)} = |L|")
    N = len(B)
    Rinv = np.array([[float(e) for e in row] for row in R.inverse().entries])
    b_arr = np.array(B, dtype=float)
    l_arr = np.array(L, dtype=float)
    U = np.exp(2j * np.pi * (b_arr @ Rinv.T) @ l_arr.T) / np.sqrt(N)
    gram = U @ U.conj().T
    dev = np.abs(gram - np.eye(N))
    residual = float(dev.max())
    witness = None
    if residual >= UNITARITY_TOL:
        i, j = np.unravel_index(int(dev.argmax()), dev.shape)
        witness = (B[i], B[j])
    S = R.transpose()
    b_viol = tuple(
        (B[i], B[j])
        for i in range(N)
        for j in range(i + 1, N)
        if congruent_mod(R, B[i], B[j])
    )
    l_viol = tuple(
        (L[i], L[j])
        for i in range(N)
        for j in range(i + 1, N)
        if congruent_mod(S, L[i], L[j])
    )
    ok = residual < UNITARITY_TOL and not b_viol and not l_viol
    return HadamardValidation(ok, residual, witness, b_viol, l_viol)


@dataclass(frozen=True)
class HadamardTriple:
    """An expansive integer matrix R with digit sets B, L (0 in both)."""

    R: IntMatrix
    B: tuple[IntVec, ...]
    L: tuple[IntVec, ...]

    def __init__(self, R, B, L):
        if not isinstance(R, IntMatrix):
            R = IntMatrix(R)
        B, L = _digit_tuple(B), _digit_tuple(L)
        if len(B) != len(L):
            raise SizeMismatchError(f"|B| = {len(B)} != {len(L)} = |L|")
        zero = (0,) * R.dim
        if zero not in B or zero not in L:
            raise ValueError("both digit sets must contain 0")
        if any(len(v) != R.dim for v in B + L):
            raise SizeMismatchError("digit dimension does not match the matrix")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "L", L)

    @property
    def N(self) -> int:
        return len(self.B)

    @property
    def dim(self) -> int:
        return self.R.dim

    @property
    def S(self) -> IntMatrix:
        return self.R.transpose()

    def validate(self) -> HadamardValidation:
        return validate_hadamard(self.R, self.B, self.L)


def conjugate(T: HadamardTriple, M: IntMatrix) -> HadamardTriple:
    """Conjugated triple (M R M^-1, M B, (M^T)^-1 L)."""
    det = M.det()
    if det not in (1, -1):
        raise NotUnimodularError(f"det M = {det}, not a unit")
    Minv = M.inverse()
    R2 = M.rational() @ T.R.rational() @ Minv
    MTinv = M.transpose().inverse()
    B2 = tuple(M.apply(b) for b in T.B)
    L2 = tuple(MTinv.apply(l) for l in T.L)
    if not all(is_integral(l) for l in L2):
        raise NonIntegerDigitsError("(M^T)^-1 L is not integral")
    return HadamardTriple(
        IntMatrix(tuple(tuple(int(e) for e in row) for row in R2.entries)),
        tuple(tuple(int(c) for c in b) for b in B2),
        tuple(tuple(int(c) for c in l) for l in L2),
    )


@dataclass(frozen=True)
class FactoredTriple:
    """Block data of a triple reduced along the coordinate subspace R^r x {0}.

    B = {(r_i, eta[i][j])} and L = {(gamma[j][i], s_j)}; the first-component
    sub-triples (A1, {r_i}, gamma[j]) and second-component sub-triples
    (A2, eta[i], {s_j}) are all Hadamard.  Whether the first-component
    invariant measure is spectral without overlap is *not* decided here; the
    pipeline establishes it recursively and records the overlap part as an
    assumption.
    """

    r: int
    S1: IntMatrix
    S2: IntMatrix
    C: tuple[tuple[int, ...], ...]
    A1: IntMatrix
    A2: IntMatrix
    Cstar: tuple[tuple[int, ...], ...]
    r_digits: tuple[IntVec, ...]
    eta: tuple[tuple[IntVec, ...], ...]
    s_digits: tuple[IntVec, ...]
    gamma: tuple[tuple[IntVec, ...], ...]

    @property
    def N1(self) -> int:
        return len(self.r_digits)

    @property
    def N2(self) -> int:
        return len(self.s_digits)

    @property
    def eta_constant(self) -> bool:
        """True when the second-component fiber digits do not depend on i."""
        return all(row == self.eta[0] for row in self.eta)

    def first_triple(self) -> HadamardTriple:
        """(A1, {r_i}, gamma[j]) for the j with s_j = 0."""
        j0 = self.s_digits.index((0,) * len(self.s_digits[0]))
        return HadamardTriple(self.A1, self.r_digits, self.gamma[j0])

    def second_triple(self) -> HadamardTriple:
        """(A2, eta[i], {s_j}) for the i with r_i = 0."""
        i0 = self.r_digits.index((0,) * self.r)
        return HadamardTriple(self.A2, self.eta[i0], self.s_digits)

    def reassembled_digits(self) -> tuple[tuple[IntVec, ...], tuple[IntVec, ...]]:
        B = tuple(
            ri + e for ri, row in zip(self.r_digits, self.eta) for e in row
        )
        L = tuple(
            g + sj for sj, row in zip(self.s_digits, self.gamma) for g in row
        )
        return B, L


def factor_along(T: HadamardTriple, r: int) -> FactoredTriple:
    """Split ``T`` along R^r x {0} per the fiber-counting construction.

    Requires the subspace to be invariant for S = R^T (zero lower-left
    block), every first-component digit to have the same number of
    completions in B, every second-component digit the same number in L, and
    all sub-triples to be Hadamard.
    """
    d = T.dim
    if not 1 <= r < d:
        raise ValueError(f"split dimension must satisfy 1 <= r < {d}")
    S = T.S.entries
    lower_left = [S[i][j] for i in range(r, d) for j in range(r)]
    if any(lower_left):
        raise NotInvariantError("R^r x {0} is not invariant for R^T (lower-left block nonzero)")
    S1 = IntMatrix(tuple(row[:r] for row in S[:r]))
    S2 = IntMatrix(tuple(row[r:] for row in S[r:]))
    C = tuple(tuple(row[r:]) for row in S[:r])
    Rm = T.R.entries
    A1 = IntMatrix(tuple(row[:r] for row in Rm[:r]))
    A2 = IntMatrix(tuple(row[r:] for row in Rm[r:]))
    Cstar = tuple(tuple(row[:r]) for row in Rm[r:])

    by_first: dict[IntVec, list[IntVec]] = {}
    for b in T.B:
        by_first.setdefault(b[:r], []).append(b[r:])
    r_digits = tuple(sorted(by_first))
    fiber_sizes = {len(v) for v in by_first.values()}
    if len(fiber_sizes) != 1:
        raise FiberCountMismatchError(f"unequal B fiber sizes {sorted(fiber_sizes)}")
    N2 = fiber_sizes.pop()
    eta = tuple(tuple(sorted(by_first[ri])) for ri in r_digits)

    by_second: dict[IntVec, list[IntVec]] = {}
    for l in T.L:
        by_second.setdefault(l[r:], []).append(l[:r])
    s_digits = tuple(sorted(by_second))
    fiber_sizes = {len(v) for v in by_second.values()}
    if len(fiber_sizes) != 1:
        raise FiberCountMismatchError(f"unequal L fiber sizes {sorted(fiber_sizes)}")
    N1 = fiber_sizes.pop()
    gamma = tuple(tuple(sorted(by_second[sj])) for sj in s_digits)

    if N1 * N2 != T.N or len(r_digits) != N1 or len(s_digits) != N2:
        raise FiberCountMismatchError(
            f"fiber counts N1={N1}, N2={N2} incompatible with N={T.N}"
        )

    for j, g in enumerate(gamma):
        res = validate_hadamard(A1, r_digits, g)
        if res.unitarity_residual >= UNITARITY_TOL:
            raise SubTripleNotHadamardError(
                f"first-component sub-triple for s index {j} is not Hadamard", index=("s", j)
            )
    for i, e in enumerate(eta):
        res = validate_hadamard(A2, e, s_digits)
        if res.unitarity_residual >= UNITARITY_TOL:
            raise SubTripleNotHadamardError(
                f"second-component sub-triple for r index {i} is not Hadamard", index=("r", i)
            )

    return FactoredTriple(
        r=r, S1=S1, S2=S2, C=C, A1=A1, A2=A2, Cstar=Cstar,
        r_digits=r_digits, eta=eta, s_digits=s_digits, gamma=gamma,
    )


def is_complete_residue_system(R: IntMatrix, B) -> bool:
    """True iff B is a complete set of representatives of Z^d / R Z^d."""
    B = _digit_tuple(B)
    if len(B) != abs(R.det()):
        return False
    return not any(
        congruent_mod(R, B[i], B[j]) for i in range(len(B)) for j in range(i + 1, len(B))
    )
