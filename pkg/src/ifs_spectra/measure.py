"""Weight functions, the truncated-product Fourier transform, the transfer
operator, and invariant-measure sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import kernels
from .errors import BadWeightsError, EmptyGridError, TooManyPointsError
from .lattice import IntMatrix, RationalMatrix, Vec, is_expansive, vec
from .triple import FactoredTriple, HadamardTriple


@dataclass(frozen=True)
class WeightFunction:
    """W(x) = |(1/N) sum_b e^{2 pi i b.x}|^2 for an integer digit list."""

    digits: tuple[tuple[int, ...], ...]

    @property
    def N(self) -> int:
        return len(self.digits)

    @property
    def _arr(self) -> np.ndarray:
        return np.array(self.digits, dtype=float)

    def __call__(self, x) -> float:
        return float(kernels.weight_values(np.atleast_2d(np.asarray(x, dtype=float)), self._arr)[0])

    def batch(self, points: np.ndarray) -> np.ndarray:
        return kernels.weight_values(points, self._arr)

    def mask(self, x) -> complex:
        return complex(kernels.mask_values(np.atleast_2d(np.asarray(x, dtype=float)), self._arr)[0])


def weight_of_triple(T: HadamardTriple) -> WeightFunction:
    return WeightFunction(T.B)


def eval_weight(W: WeightFunction, x) -> float:
    return W(x)


def w_i(F: FactoredTriple, i: int) -> WeightFunction:
    """Fiber weight W_i built from the second-component digits of row i."""
    return WeightFunction(F.eta[i])


def wtilde(F: FactoredTriple, y) -> float:
    """Marginal weight: average of the W_i over the first-component rows."""
    return sum(w_i(F, i)(y) for i in range(F.N1)) / F.N1


def wtilde_batch(F: FactoredTriple, points: np.ndarray) -> np.ndarray:
    acc = np.zeros(np.atleast_2d(points).shape[0])
    for i in range(F.N1):
        acc += w_i(F, i).batch(points)
    return acc / F.N1


def fiber_mask(F: FactoredTriple, y, i: int) -> complex:
    """m(y, i) = (1/N2) sum_j e^{2 pi i eta[i][j].y} (un-squared)."""
    return WeightFunction(F.eta[i]).mask(y)


def dual_maps(T: HadamardTriple) -> tuple[np.ndarray, np.ndarray]:
    """(S^-1 as float matrix, L digits as float array) for the dual IFS."""
    return T.S.inverse().to_float(), np.array(T.L, dtype=float)


def quadrature_check(T: HadamardTriple, samples: int = 1000, seed: int = 0,
                     box_halfwidth: float = 2.0) -> float:
    """Max over random x of |sum_l W_B(tau_l x) - 1|.

    The unitarity of the Hadamard matrix makes the sum identically 1, so
    valid triples stay below 1e-12 while broken ones deviate grossly.
    """
    rng = np.random.default_rng(seed)
    d = T.dim
    xs = rng.uniform(-box_halfwidth, box_halfwidth, size=(samples, d))
    s_inv, l_arr = dual_maps(T)
    W = weight_of_triple(T)
    total = np.zeros(samples)
    for l in l_arr:
        total += W.batch((xs + l) @ s_inv.T)
    return float(np.abs(total - 1.0).max())


def unequal_weights_probe(T: HadamardTriple, p, samples: int = 1000, seed: int = 0,
                          box_halfwidth: float = 2.0) -> float:
    """Max deviation of sum_l W_{p,B}(tau_l x) from 1.

    Vanishes only for the uniform weights p_b = 1/N; any other probability
    vector fails by at least the constant term N sum p_b^2 - 1 > 0.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (T.N,) or np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-12:
        raise BadWeightsError("weights must be positive and sum to 1")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-box_halfwidth, box_halfwidth, size=(samples, T.dim))
    s_inv, l_arr = dual_maps(T)
    b_arr = np.array(T.B, dtype=float)
    total = np.zeros(samples)
    for l in l_arr:
        z = (xs + l) @ s_inv.T
        m = (np.exp(2j * np.pi * (z @ b_arr.T)) * p).sum(axis=1)
        total += (m * m.conj()).real
    return float(np.abs(total - 1.0).max())


# ---------------------------------------------------------------------------
# Fourier transform of the invariant measure


@dataclass(frozen=True)
class ContractionData:
    """Exact-norm contraction envelope ||S^-k x||_inf <= C c^k ||x||_inf."""

    c: float
    C: float

    @classmethod
    def for_matrix(cls, S: IntMatrix) -> "ContractionData":
        cert = is_expansive(S)
        if not cert:
            raise ValueError("matrix is not expansive")
        k0 = cert.certificate_k
        inv = S.inverse()
        norms = []
        power = RationalMatrix.identity(S.dim)
        for _ in range(k0 + 1):
            norms.append(power.inf_norm())
            power = power @ inv
        c = float(norms[k0]) ** (1.0 / k0)
        C = max(float(norms[j]) / c**j for j in range(k0))
        return cls(c=c, C=C)


@dataclass(frozen=True)
class FourierEvaluator:
    """Truncated-product evaluator of mu_hat with a certified tail bound.

    mu_hat(x) = prod_{k>=1} m_B(S^-k x); the truncation depth is chosen so
    that the absolute tail bound 2 pi max_b ||b||_1 * C ||x||_inf c^(K+1)/(1-c)
    stays below ``eps``.
    """

    R: IntMatrix
    B: tuple[tuple[int, ...], ...]
    eps: float = 1e-10
    contraction: ContractionData = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "contraction", ContractionData.for_matrix(self.R.transpose()))

    @classmethod
    def for_triple(cls, T: HadamardTriple, eps: float = 1e-10) -> "FourierEvaluator":
        return cls(T.R, T.B, eps)

    @property
    def _digit_arr(self) -> np.ndarray:
        return np.array(self.B, dtype=float)

    @property
    def _s_inv(self) -> np.ndarray:
        return self.R.transpose().inverse().to_float()

    def depth_for(self, x_norm: float) -> int:
        if x_norm == 0:
            return 0
        c, C = self.contraction.c, self.contraction.C
        maxb1 = max(sum(abs(c_) for c_ in b) for b in self.B)
        lead = 2.0 * math.pi * maxb1 * C * x_norm / (1.0 - c)
        K = 1
        while lead * c ** (K + 1) >= self.eps:
            K += 1
            if K > 10_000:
                raise RuntimeError("truncation depth runaway; check contraction data")
        return K

    def tail_bound(self, x_norm: float, depth: int) -> float:
        if x_norm == 0:
            return 0.0
        c, C = self.contraction.c, self.contraction.C
        maxb1 = max(sum(abs(c_) for c_ in b) for b in self.B)
        return 2.0 * math.pi * maxb1 * C * x_norm * c ** (depth + 1) / (1.0 - c)

    def mu_hat(self, x) -> tuple[complex, float]:
        x = np.asarray(x, dtype=float).reshape(1, -1)
        norm = float(np.abs(x).max())
        depth = self.depth_for(norm)
        val = kernels.mask_products(x, self._digit_arr, self._s_inv, depth)[0]
        return complex(val), self.tail_bound(norm, depth)

    def mu_hat_batch(self, points: np.ndarray) -> tuple[np.ndarray, float]:
        """Values at many points with one shared depth from the largest norm."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        norm = float(np.abs(points).max()) if points.size else 0.0
        depth = self.depth_for(norm)
        vals = kernels.mask_products(points, self._digit_arr, self._s_inv, depth)
        return vals, self.tail_bound(norm, depth)


# ---------------------------------------------------------------------------
# Sampling the invariant measure / attractor


@dataclass
class MeasureSampler:
    """Uniform-digit sampler of the invariant measure of (M, digits).

    Each emitted point is a truncated random digit expansion
    sum_{k=1..burn_in} M^-k d_k, i.e. a chaos-game orbit restarted at 0 and
    iterated ``burn_in`` times per sample; residual bias is below
    c^burn_in * diam.  Carries private RNG state; clone with a distinct seed
    for parallel use.
    """

    matrix: IntMatrix
    digits: tuple[tuple[int, ...], ...]
    seed: int = 0
    burn_in: int = 50

    def __post_init__(self):
        self._rng = np.random.default_rng(self.seed)
        self._inv = self.matrix.inverse().to_float()
        self._digit_arr = np.array(self.digits, dtype=float)

    @classmethod
    def for_triple(cls, T: HadamardTriple, seed: int = 0, burn_in: int = 50) -> "MeasureSampler":
        return cls(T.R, T.B, seed=seed, burn_in=burn_in)

    @classmethod
    def for_dual(cls, T: HadamardTriple, seed: int = 0, burn_in: int = 50) -> "MeasureSampler":
        return cls(T.S, T.L, seed=seed, burn_in=burn_in)

    def chaos_game(self, count: int) -> np.ndarray:
        if count < 1:
            raise ValueError("count must be >= 1")
        d = self.matrix.dim
        idx = self._rng.integers(0, len(self.digits), size=(self.burn_in, count))
        x = np.zeros((count, d))
        for k in range(self.burn_in):
            x = (x + self._digit_arr[idx[k]]) @ self._inv.T
        return x

    def digit_expansion(self, n: int) -> np.ndarray:
        """All points sum_{k=1..n} M^-k d_k over words of length n."""
        N = len(self.digits)
        if N**n > 10**7:
            raise TooManyPointsError(f"{N}**{n} points exceed the 1e7 guard")
        d = self.matrix.dim
        pts = np.zeros((1, d))
        for _ in range(n):
            pts = ((pts[:, None, :] + self._digit_arr[None, :, :]).reshape(-1, d)) @ self._inv.T
        return pts


def sample_attractor(sampler: MeasureSampler, count: int | None = None,
                     mode: str = "chaos", depth: int | None = None) -> np.ndarray:
    if mode == "chaos":
        if count is None:
            raise ValueError("chaos mode needs a count")
        return sampler.chaos_game(count)
    if mode == "digits":
        if depth is None:
            raise ValueError("digit mode needs a depth")
        return sampler.digit_expansion(depth)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Transfer operator on a grid


def transfer_apply(T: HadamardTriple, f: np.ndarray, grid_axes) -> np.ndarray:
    """(R_W f)(x) = sum_l W_B(tau_l x) f(tau_l x) on a rectangular grid.

    Off-grid arguments are handled by multilinear interpolation with constant
    extension outside the grid, which keeps values inside the hull of f.
    """
    axes = [np.asarray(a, dtype=float) for a in grid_axes]
    if any(a.size == 0 for a in axes) or np.asarray(f).size == 0:
        raise EmptyGridError("transfer operator needs a nonempty grid")
    f = np.asarray(f, dtype=float)
    interp = RegularGridInterpolator(axes, f, method="linear", bounds_error=False)
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    s_inv, l_arr = dual_maps(T)
    W = weight_of_triple(T)
    lows = np.array([a[0] for a in axes])
    highs = np.array([a[-1] for a in axes])
    out = np.zeros(pts.shape[0])
    for l in l_arr:
        img = (pts + l) @ s_inv.T
        clipped = np.clip(img, lows, highs)
        out += W.batch(img) * interp(clipped)
    return out.reshape(f.shape)


# ---------------------------------------------------------------------------
# Factored-system helpers


def fiber_transform(F: FactoredTriple, prefix, y, depth: int) -> complex:
    """Truncated fiber transform prod_{k=1..depth} m(S2^-k y, i_k)."""
    if len(prefix) < depth:
        raise ValueError("prefix must be at least as long as the depth")
    s2_inv = F.S2.inverse().to_float()
    z = np.atleast_1d(np.asarray(y, dtype=float))
    acc = complex(1.0)
    for k in range(depth):
        z = s2_inv @ z
        acc *= fiber_mask(F, z, prefix[k])
    return acc


def d_matrix(F: FactoredTriple, k: int) -> RationalMatrix:
    """Exact block D_k = -sum_{l=0}^{k-1} A2^-(l+1) C* A1^-(k-l)."""
    a1_inv = F.A1.inverse()
    a2_inv = F.A2.inverse()
    cstar = RationalMatrix(F.Cstar)
    total = None
    for l in range(k):
        term = a2_inv.pow(l + 1) @ cstar @ a1_inv.pow(k - l)
        total = term if total is None else total.add(term)
    return total.scale(-1)


def g_function(F: FactoredTriple, word) -> Vec:
    """Exact partial sum g = sum_{k=1..n} D_k r_{i_k} for first-digit indices.

    ``word`` holds indices into F.r_digits (first digit applied first).
    """
    if not len(word):
        raise ValueError("word must be nonempty")
    acc = vec([0] * (F.A2.dim))
    for k, i in enumerate(word, start=1):
        Dk = d_matrix(F, k)
        term = Dk.apply([Fraction(c) for c in F.r_digits[i]])
        acc = tuple(a + t for a, t in zip(acc, term))
    return acc
