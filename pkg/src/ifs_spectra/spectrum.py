"""Assembly of candidate Fourier spectra from the invariant-set catalog."""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import Catalog, Cycle, InvariantLineSet, build_catalog
from .errors import DistinctnessViolationError, ReducibilityConditionUnmetError
from .lattice import IntMatrix, Vec, vec, vec_add
from .triple import FactoredTriple, HadamardTriple, conjugate, factor_along


@dataclass(frozen=True)
class SpectrumElement:
    value: Vec
    source: str            # "cycle" or "line"
    component: int         # index within the catalog
    word: tuple            # generating digit word (line elements: (first-part word, offset word))


@dataclass(frozen=True)
class Spectrum:
    elements: tuple[SpectrumElement, ...]
    max_word_len: int

    def values(self) -> tuple[Vec, ...]:
        return tuple(e.value for e in self.elements)

    def to_float(self) -> np.ndarray:
        return np.array([[float(c) for c in e.value] for e in self.elements])

    def __len__(self) -> int:
        return len(self.elements)


def k_offset(S: IntMatrix, cycle: Cycle, word) -> Vec:
    """Offset w_0 + S w_1 + ... + S^{n-1} w_{n-1} - S^n x0 of a digit word
    relative to a cycle; the word length must be a multiple of the cycle
    length (length 0 gives -x0)."""
    word = [
        (int(w),) if isinstance(w, (int, float, Fraction)) else tuple(int(c) for c in w)
        for w in word
    ]
    n = len(word)
    if n % cycle.length != 0:
        raise ValueError("word length must be a multiple of the cycle length")
    val = vec(S.pow(n).rational().scale(-1).apply(cycle.points[0]))
    for j, w in enumerate(word):
        val = vec_add(val, S.pow(j).apply(w))
    return val


def lambda_of_cycle(S: IntMatrix, digits, cycle: Cycle, max_len: int):
    """Truncated spectrum contribution of one weight-1 cycle.

    Values are sum_j S^j w_j - S^n x0 over words w of length n = k*m whose
    final m-block differs from the cycle word (appending the cycle word does
    not change the value, so these words enumerate the set without
    repetition; a collision is a hard error).
    """
    digits = [tuple(int(c) for c in d) for d in digits]
    m = cycle.length
    x0 = cycle.points[0]
    out: dict[Vec, tuple] = {}
    for n in range(0, max_len + 1, m):
        shift = vec(S.pow(n).rational().scale(-1).apply(x0))
        powers = [S.pow(j) for j in range(n)]
        for word in itertools.product(digits, repeat=n):
            if n >= m and word[-m:] == cycle.word:
                continue
            val = shift
            for j, w in enumerate(word):
                val = vec_add(val, powers[j].apply(w))
            if val in out:
                raise DistinctnessViolationError(
                    f"words {out[val]} and {word} give the same element {val}"
                )
            out[val] = word
    return [(v, w) for v, w in sorted(out.items())]


def lambda_of_line_set(T: HadamardTriple, ls: InvariantLineSet, max_len: int):
    """Truncated spectrum contribution of one invariant line set.

    In the conjugated coordinates the contribution is the product of a
    spectrum of the first-component measure with the offset set of the
    quotient cycle; elements map back through M^T.
    """
    M = ls.conjugation
    Tc = conjugate(T, M)
    F = factor_along(Tc, 1)
    sub = spectrum_of_triple(F.first_triple(), max_len)
    offsets = lambda_of_cycle(F.S2, F.s_digits, ls.quotient_cycle, max_len)
    MT = M.transpose().rational()
    out = []
    for e1 in sub.elements:
        for kappa, kword in offsets:
            value = vec(MT.apply(e1.value + kappa))
            out.append((value, (e1.word, kword)))
    out.sort(key=lambda p: p[0])
    return out


def assemble_spectrum(T: HadamardTriple, max_len: int, catalog: Catalog | None = None) -> Spectrum:
    """Union of the contributions of every catalog component.

    Requires the catalog components to be pairwise disjoint; elements
    produced twice (within or across components) raise
    DistinctnessViolationError rather than being silently merged.
    """
    if catalog is None:
        catalog = build_catalog(T)
    if not catalog.disjoint:
        raise ReducibilityConditionUnmetError(
            "catalog components are not pairwise disjoint: " + "; ".join(catalog.notes)
        )
    seen: dict[Vec, SpectrumElement] = {}
    elements = []
    for idx, cyc in enumerate(catalog.cycles):
        for value, word in lambda_of_cycle(T.S, T.L, cyc, max_len):
            if value in seen:
                prev = seen[value]
                raise DistinctnessViolationError(
                    f"element {value} produced by {prev.source} {prev.component} and cycle {idx}"
                )
            el = SpectrumElement(value, "cycle", idx, word)
            seen[value] = el
            elements.append(el)
    for idx, ls in enumerate(catalog.line_sets):
        for value, word in lambda_of_line_set(T, ls, max_len):
            if value in seen:
                prev = seen[value]
                raise DistinctnessViolationError(
                    f"element {value} produced by {prev.source} {prev.component} and line {idx}"
                )
            el = SpectrumElement(value, "line", idx, word)
            seen[value] = el
            elements.append(el)
    elements.sort(key=lambda e: e.value)
    return Spectrum(tuple(elements), max_len)


def spectrum_of_triple(T: HadamardTriple, max_len: int) -> Spectrum:
    """Recursive spectrum pipeline; line sets recurse into a strictly
    lower-dimensional first-component triple, so this terminates."""
    return assemble_spectrum(T, max_len)


def product_spectrum(F: FactoredTriple, max_len: int) -> Spectrum:
    """Product-form spectrum (conjugated coordinates) when the fiber digits
    do not depend on the first component.

    Then the measure splits as mu_1 x mu_2 and any pair of sub-spectra
    multiplies; this is generally a different spectrum than the catalog one.
    """
    if not F.eta_constant:
        raise ReducibilityConditionUnmetError(
            "fiber digits vary with the first component; no product structure"
        )
    s1 = spectrum_of_triple(F.first_triple(), max_len)
    s2 = spectrum_of_triple(F.second_triple(), max_len)
    elements = []
    for a in s1.elements:
        for b in s2.elements:
            elements.append(
                SpectrumElement(a.value + b.value, "product", 0, (a.word, b.word))
            )
    elements.sort(key=lambda e: e.value)
    return Spectrum(tuple(elements), max_len)


# ---------------------------------------------------------------------------
# Exports


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def spectrum_to_dict(spec: Spectrum) -> dict:
    return {
        "max_word_len": spec.max_word_len,
        "count": len(spec.elements),
        "elements": [
            {
                "value": [_frac_str(c) for c in e.value],
                "value_float": [float(c) for c in e.value],
                "source": e.source,
                "component": e.component,
                "word": _jsonable(e.word),
            }
            for e in spec.elements
        ],
    }


def _jsonable(obj):
    if isinstance(obj, tuple):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, Fraction):
        return _frac_str(obj)
    return obj


def write_spectrum_json(spec: Spectrum, path) -> None:
    with open(path, "w") as fh:
        json.dump(spectrum_to_dict(spec), fh, indent=2)
        fh.write("\n")


def write_spectrum_csv(spec: Spectrum, path) -> None:
    dim = len(spec.elements[0].value) if spec.elements else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"value_{i}" for i in range(dim)] + ["source", "component"])
        for e in spec.elements:
            writer.writerow([_frac_str(c) for c in e.value] + [e.source, e.component])
