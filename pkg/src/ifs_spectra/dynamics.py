"""Dynamics of the dual system: invariant boxes, extreme cycles, and
invariant line-set catalogs, all in exact rational arithmetic."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoxConstructionError, TooManyPointsError
from .lattice import (
    Box,
    IntMatrix,
    IntVec,
    RationalMatrix,
    Vec,
    completing_unimodular,
    cycle_resolvent_apply,
    dual_lattice_points,
    is_integral,
    rational_eigen_lines,
    vec,
    vec_add,
    vec_dot,
    vec_sub,
)
from .measure import weight_of_triple
from .triple import FactoredTriple, HadamardTriple, conjugate, factor_along


@dataclass(frozen=True)
class Cycle:
    """A periodic orbit of x -> S^-1 (x + l): points[k+1] = S^-1(points[k] + word[k]).

    Stored in canonical rotation (lexicographically least point first), so
    equal cycles compare equal.
    """

    points: tuple[Vec, ...]
    word: tuple[IntVec, ...]

    @property
    def length(self) -> int:
        return len(self.points)

    def is_extreme(self, lattice_gens) -> bool:
        """True iff g.x is an integer for every point x and generator g."""
        return all(
            vec_dot(g, x).denominator == 1 for x in self.points for g in lattice_gens
        )


def canonical_cycle(points, word) -> Cycle:
    points = tuple(vec(p) for p in points)
    word = tuple(tuple(int(c) for c in w) for w in word)
    if len(points) != len(word) or not points:
        raise ValueError("cycle needs matching nonempty points and word")
    k = min(range(len(points)), key=lambda i: points[i])
    return Cycle(points[k:] + points[:k], word[k:] + word[:k])


def check_cycle(S: IntMatrix, cycle: Cycle) -> bool:
    """Exact consistency check of the point/word pairing."""
    Sinv = S.inverse()
    m = cycle.length
    return all(
        Sinv.apply(vec_add(cycle.points[k], cycle.word[k])) == cycle.points[(k + 1) % m]
        for k in range(m)
    )


# ---------------------------------------------------------------------------
# Invariant box


def _box_map(Sinv: RationalMatrix, shifts: list[Vec], box: Box) -> Box:
    """Coordinate-wise bounding box of union_l S^-1 (box + l), exact."""
    d = Sinv.dim
    out = []
    for i in range(d):
        lo = sum(
            min(Sinv.entries[i][j] * box[j][0], Sinv.entries[i][j] * box[j][1])
            for j in range(d)
        )
        hi = sum(
            max(Sinv.entries[i][j] * box[j][0], Sinv.entries[i][j] * box[j][1])
            for j in range(d)
        )
        out.append((lo + min(t[i] for t in shifts), hi + max(t[i] for t in shifts)))
    return tuple(out)


def _box_contains(outer: Box, inner: Box) -> bool:
    return all(o[0] <= i[0] and i[1] <= o[1] for o, i in zip(outer, inner))


def invariant_box(S: IntMatrix, digits) -> Box:
    """Smallest box with union_l S^-1 (box + l) inside it, solved exactly.

    The bounding-box map is affine in the stacked vector (lo, hi), so its
    fixed point comes from one rational linear solve.  The result contains
    the attractor of the maps x -> S^-1(x + l) and is verified invariant
    before being returned.
    """
    d = S.dim
    Sinv = S.inverse()
    shifts = [Sinv.apply(l) for l in digits]
    if not shifts:
        raise BoxConstructionError("digit set is empty")

    # Affine form: new_lo_i = sum_j a+_ij lo_j + a-_ij hi_j + min_t, likewise hi.
    # Stack z = (lo, hi) and solve (I - A) z = c.
    A = [[Fraction(0)] * (2 * d) for _ in range(2 * d)]
    c = [Fraction(0)] * (2 * d)
    for i in range(d):
        for j in range(d):
            e = Sinv.entries[i][j]
            if e >= 0:
                A[i][j] += e
                A[d + i][d + j] += e
            else:
                A[i][d + j] += e
                A[d + i][j] += e
        c[i] = min(t[i] for t in shifts)
        c[d + i] = max(t[i] for t in shifts)
    I_minus_A = RationalMatrix(
        tuple(
            tuple(Fraction(int(r == s)) - A[r][s] for s in range(2 * d))
            for r in range(2 * d)
        )
    )
    try:
        if I_minus_A.det() != 0:
            z = I_minus_A.solve(c)
            box = tuple((z[i], z[d + i]) for i in range(d))
            if all(lo <= hi for lo, hi in box) and _box_contains(box, _box_map(Sinv, shifts, box)):
                return box
    except Exception:
        pass

    # Fallback: start from a certified norm bound and iterate the hull map.
    from .lattice import is_expansive

    cert = is_expansive(S)
    if not cert:
        raise BoxConstructionError("matrix is not expansive")
    k0 = cert.certificate_k
    partial = Fraction(0)
    power = RationalMatrix.identity(d)
    for _ in range(k0):
        power = power @ Sinv
        partial += power.inf_norm()
    q = power.inf_norm()
    max_digit = max(max(abs(Fraction(comp)) for comp in l) for l in digits)
    rho = partial / (1 - q) * max_digit
    box: Box = tuple((-rho, rho) for _ in range(d))
    for _ in range(500):
        img = _box_map(Sinv, shifts, box)
        if _box_contains(box, img):
            return box
        box = tuple(
            (min(b[0], m[0]), max(b[1], m[1])) for b, m in zip(box, img)
        )
    raise BoxConstructionError("hull iteration did not stabilize")


# ---------------------------------------------------------------------------
# Cycle search in a functional graph


def _successor_map(S: IntMatrix, digits, candidates) -> dict[Vec, tuple[Vec, IntVec]]:
    """For each candidate the unique digit mapping it to another candidate.

    Uniqueness is forced by the quadrature identity (the weights at the N
    images of a weight-1 point sum to 1), so more than one hit is a logic
    error, not a data condition.
    """
    Sinv = S.inverse()
    cand = set(candidates)
    succ: dict[Vec, tuple[Vec, IntVec]] = {}
    for x in candidates:
        hits = []
        for l in digits:
            y = Sinv.apply(vec_add(x, l))
            if y in cand:
                hits.append((y, tuple(int(c) for c in l)))
        assert len(hits) <= 1, f"multiple unit-weight successors at {x}"
        if hits:
            succ[x] = hits[0]
    return succ


def _functional_cycles(candidates, succ) -> list[Cycle]:
    state: dict[Vec, tuple[str, int]] = {}
    cycles = []
    for start in candidates:
        path = []
        x = start
        while x is not None and x not in state:
            state[x] = ("path", len(path))
            path.append(x)
            nxt = succ.get(x)
            x = nxt[0] if nxt else None
        if x is not None and state[x][0] == "path":
            i = state[x][1]
            pts = path[i:]
            cycles.append(canonical_cycle(pts, tuple(succ[p][1] for p in pts)))
        for p in path:
            state[p] = ("done", -1)
    uniq = {}
    for cyc in cycles:
        uniq.setdefault(cyc.points, cyc)
    return sorted(uniq.values(), key=lambda c: c.points)


def extreme_cycles(T: HadamardTriple) -> list[Cycle]:
    """All cycles of the dual maps on which W_B is identically 1.

    W_B(x) = 1 iff b.x is an integer for every b (0 is a digit, so the N
    unit-modulus phases must all align at 1).  Candidates are the points of
    that dual lattice inside the invariant box; the weight-1 successor
    structure is a functional graph, whose cycles are returned.
    """
    box = invariant_box(T.S, T.L)
    gens = [b for b in T.B if any(b)]
    candidates = dual_lattice_points(gens, box).points
    succ = _successor_map(T.S, T.L, candidates)
    return _functional_cycles(candidates, succ)


def wtilde_cycles(F: FactoredTriple) -> list[Cycle]:
    """Cycles of the quotient dual maps y -> S2^-1 (y + s) where the averaged
    fiber weight equals 1.

    The average of the W_i hits 1 exactly when every within-row digit
    difference pairs integrally with y, so the candidate set is again a dual
    lattice intersected with the quotient invariant box.
    """
    gens = [
        vec_sub(row[j], row[0])
        for row in F.eta
        for j in range(1, len(row))
    ]
    gens = [tuple(int(c) for c in g) for g in gens if any(g)]
    box = invariant_box(F.S2, F.s_digits)
    candidates = dual_lattice_points(gens, box).points
    succ = _successor_map(F.S2, F.s_digits, candidates)
    return _functional_cycles(candidates, succ)


# ---------------------------------------------------------------------------
# Invariant line sets and the catalog


@dataclass(frozen=True)
class InvariantLineSet:
    """A finite union of parallel rational lines invariant for the dual maps.

    ``direction`` and ``offsets`` live in the original coordinates; the
    quotient cycle lives in the coordinates conjugated by ``conjugation``
    (chosen so the line direction becomes the first axis).
    """

    direction: IntVec
    conjugation: IntMatrix
    quotient_cycle: Cycle
    offsets: tuple[Vec, ...]

    @property
    def count(self) -> int:
        return len(self.offsets)

    def contains_point(self, p) -> bool:
        """Exact membership of a rational point in the union of lines."""
        MTinv = self.conjugation.transpose().inverse()
        r = len(self.direction) - len(self.quotient_cycle.points[0])
        coords = MTinv.apply(p)
        return coords[r:] in set(self.quotient_cycle.points)


@dataclass(frozen=True)
class RejectedQuotientCycle:
    direction: IntVec
    quotient_cycle: Cycle
    covering_cycle: Cycle
    reason: str


@dataclass(frozen=True)
class Catalog:
    cycles: tuple[Cycle, ...]
    line_sets: tuple[InvariantLineSet, ...]
    rejected: tuple[RejectedQuotientCycle, ...]
    disjoint: bool
    separation: float
    notes: tuple[str, ...]


def invariant_line_sets(T: HadamardTriple):
    """Line sets from every rational eigen-direction of S = R^T.

    For each direction the triple is conjugated so the line becomes the
    first coordinate axis, factored, and the quotient weight-1 cycles are
    computed.  A quotient cycle whose points are exactly the second
    components of a full extreme cycle does not produce new lines (those
    lines collapse onto the point cycle already in the catalog) and is
    reported as rejected instead.
    """
    S = T.S
    line_sets: list[InvariantLineSet] = []
    rejected: list[RejectedQuotientCycle] = []
    notes: list[str] = []
    for direction, eigenvalue in rational_eigen_lines(S):
        M = completing_unimodular(direction)
        try:
            Tc = conjugate(T, M)
            F = factor_along(Tc, 1)
        except Exception as exc:
            notes.append(
                f"direction {direction} (eigenvalue {eigenvalue}): factorization failed ({exc})"
            )
            continue
        full_cycles = extreme_cycles(Tc)
        MT = M.transpose().rational()
        for qc in wtilde_cycles(F):
            qpoints = set(qc.points)
            cover = next(
                (fc for fc in full_cycles if {x[1:] for x in fc.points} == qpoints),
                None,
            )
            if cover is not None:
                rejected.append(
                    RejectedQuotientCycle(
                        direction=direction,
                        quotient_cycle=qc,
                        covering_cycle=cover,
                        reason="quotient cycle is the projection of a full extreme cycle",
                    )
                )
                continue
            offsets = tuple(MT.apply((Fraction(0),) + y) for y in qc.points)
            line_sets.append(
                InvariantLineSet(
                    direction=direction,
                    conjugation=M,
                    quotient_cycle=qc,
                    offsets=offsets,
                )
            )
    return line_sets, rejected, notes


def _point_line_distance(p: np.ndarray, o: np.ndarray, v: np.ndarray) -> float:
    w = p - o
    t = float(w @ v) / float(v @ v)
    return float(np.linalg.norm(w - t * v))


def _component_distances(cycles, line_sets) -> float:
    """Minimal Euclidean distance between distinct catalog components."""
    best = math.inf
    pts = [np.array([[float(c) for c in x] for x in cyc.points]) for cyc in cycles]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            diffs = pts[i][:, None, :] - pts[j][None, :, :]
            best = min(best, float(np.sqrt((diffs**2).sum(-1)).min()))
    for cyc_arr in pts:
        for ls in line_sets:
            v = np.array(ls.direction, dtype=float)
            for o in ls.offsets:
                o_arr = np.array([float(c) for c in o])
                for p in cyc_arr:
                    best = min(best, _point_line_distance(p, o_arr, v))
    for a in range(len(line_sets)):
        for b in range(a + 1, len(line_sets)):
            la, lb = line_sets[a], line_sets[b]
            if la.direction == lb.direction:
                v = np.array(la.direction, dtype=float)
                for oa in la.offsets:
                    for ob in lb.offsets:
                        best = min(
                            best,
                            _point_line_distance(
                                np.array([float(c) for c in oa]),
                                np.array([float(c) for c in ob]),
                                v,
                            ),
                        )
            else:
                best = 0.0
    return best


def build_catalog(T: HadamardTriple) -> Catalog:
    """Extreme cycles plus invariant line sets, with exact disjointness."""
    cycles = tuple(extreme_cycles(T))
    line_sets, rejected, notes = invariant_line_sets(T)
    disjoint = True
    for i, ca in enumerate(cycles):
        for cb in cycles[i + 1 :]:
            if set(ca.points) & set(cb.points):
                disjoint = False
                notes.append(f"cycles {ca.points} and {cb.points} share points")
    for cyc in cycles:
        for ls in line_sets:
            if any(ls.contains_point(p) for p in cyc.points):
                disjoint = False
                notes.append(f"cycle {cyc.points} lies on a line set {ls.direction}")
    for a in range(len(line_sets)):
        for b in range(a + 1, len(line_sets)):
            la, lb = line_sets[a], line_sets[b]
            if la.direction == lb.direction:
                MTinv = la.conjugation.transpose().inverse()
                qa = set(la.quotient_cycle.points)
                qb = {tuple(MTinv.apply(o)[1:]) for o in lb.offsets}
                if qa & qb:
                    disjoint = False
                    notes.append("parallel line sets share a line")
            else:
                disjoint = False
                notes.append(
                    f"line sets along {la.direction} and {lb.direction} are not parallel"
                )
    separation = _component_distances(cycles, line_sets) if disjoint else 0.0
    return Catalog(
        cycles=cycles,
        line_sets=tuple(line_sets),
        rejected=tuple(rejected),
        disjoint=disjoint,
        separation=separation,
        notes=tuple(notes),
    )


def _frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def catalog_to_dict(catalog: Catalog) -> dict:
    """JSON-ready catalog with exact rational point strings."""
    return {
        "cycles": [
            {
                "points": [[_frac_str(c) for c in p] for p in cyc.points],
                "word": [list(w) for w in cyc.word],
                "length": cyc.length,
            }
            for cyc in catalog.cycles
        ],
        "line_sets": [
            {
                "direction": list(ls.direction),
                "conjugation": [list(r) for r in ls.conjugation.entries],
                "quotient_cycle": {
                    "points": [[_frac_str(c) for c in p] for p in ls.quotient_cycle.points],
                    "word": [list(w) for w in ls.quotient_cycle.word],
                },
                "offsets": [[_frac_str(c) for c in o] for o in ls.offsets],
            }
            for ls in catalog.line_sets
        ],
        "rejected": [
            {
                "direction": list(r.direction),
                "quotient_cycle_points": [
                    [_frac_str(c) for c in p] for p in r.quotient_cycle.points
                ],
                "covering_cycle_points": [
                    [_frac_str(c) for c in p] for p in r.covering_cycle.points
                ],
                "reason": r.reason,
            }
            for r in catalog.rejected
        ],
        "disjoint": catalog.disjoint,
        "separation": catalog.separation,
        "notes": list(catalog.notes),
    }


def line_set_invariance_residual(
    T: HadamardTriple, ls: InvariantLineSet, samples: int = 20, seed: int = 0,
    weight_floor: float = 1e-12,
) -> float:
    """Numeric invariance check of a line set under the weighted dual maps.

    Draws points on the union of lines and verifies that every image with
    non-negligible weight lands back on the union; returns the worst
    distance (should be at floating-point roundoff).
    """
    rng = np.random.default_rng(seed)
    W = weight_of_triple(T)
    s_inv = T.S.inverse().to_float()
    l_arr = np.array(T.L, dtype=float)
    v = np.array(ls.direction, dtype=float)
    offs = [np.array([float(c) for c in o]) for o in ls.offsets]
    worst = 0.0
    for _ in range(samples):
        o = offs[rng.integers(len(offs))]
        x = o + rng.uniform(-3.0, 3.0) * v
        for l in l_arr:
            y = s_inv @ (x + l)
            if W(y) > weight_floor:
                dist = min(_point_line_distance(y, o2, v) for o2 in offs)
                worst = max(worst, dist)
    return worst


# ---------------------------------------------------------------------------
# Orbits and an independent brute-force cycle search


def orbit(T: HadamardTriple, x, depth: int, weight_floor: float = 1e-12,
          max_nodes: int = 10**6) -> set[Vec]:
    """Rational points reachable from x in <= depth weighted dual steps.

    Only images whose weight exceeds ``weight_floor`` are followed (weight-0
    branches carry no transition probability).
    """
    Sinv = T.S.inverse()
    W = weight_of_triple(T)
    frontier = {vec(x)}
    seen = set(frontier)
    for _ in range(depth):
        nxt = set()
        for p in frontier:
            for l in T.L:
                y = Sinv.apply(vec_add(p, l))
                if y in seen:
                    continue
                if W([float(c) for c in y]) > weight_floor:
                    nxt.add(y)
        seen |= nxt
        if len(seen) > max_nodes:
            raise TooManyPointsError("orbit exceeded the node cap")
        frontier = nxt
        if not frontier:
            break
    return seen


def cycles_by_word_search(S: IntMatrix, digits, lattice_gens, max_len: int = 3) -> list[Cycle]:
    """Brute-force cycle search over all digit words up to ``max_len``.

    Independent of the lattice-candidate construction: each word determines
    its periodic point by a resolvent solve, and the cycle is kept when
    every point pairs integrally with all ``lattice_gens``.  Quadratic in
    the word count, intended as a cross-check on small systems.
    """
    digits = [tuple(int(c) for c in d) for d in digits]
    found: dict[tuple, Cycle] = {}
    for m in range(1, max_len + 1):
        for word in itertools.product(digits, repeat=m):
            w = vec([0] * S.dim)
            for j, l in enumerate(word):
                w = vec_add(w, S.pow(j).apply(l))
            try:
                x0 = cycle_resolvent_apply(S, m, w)
            except Exception:
                continue
            pts = [x0]
            Sinv = S.inverse()
            for k in range(m - 1):
                pts.append(Sinv.apply(vec_add(pts[-1], word[k])))
            if not all(
                vec_dot(g, p).denominator == 1 for p in pts for g in lattice_gens
            ):
                continue
            cyc = canonical_cycle(pts, word)
            if len(set(cyc.points)) != m:
                continue
            found.setdefault(cyc.points, cyc)
    return sorted(found.values(), key=lambda c: c.points)
