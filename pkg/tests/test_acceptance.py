"""End-to-end acceptance suite for the 2-D reference system.

Each test covers one acceptance criterion, prints a single pass/fail line,
and asserts at the stated tolerance.  The reference system is

    R = [[4, 0], [1, 4]],  B = {(0,0), (0,3), (1,0), (1,3)},
    L = {(0,0), (2,0), (0,2), (2,2)},

whose catalog is one extreme cycle {(0,0)} plus the invariant line set
{(x, 2/3)}, giving two genuinely different spectra (direct and product).
"""

import itertools
import json
import time
from fractions import Fraction

import numpy as np
import pytest

from ifs_spectra.cli import main as cli_main
from ifs_spectra.dynamics import build_catalog, cycles_by_word_search, extreme_cycles
from ifs_spectra.measure import (
    FourierEvaluator,
    quadrature_check,
    unequal_weights_probe,
)
from ifs_spectra.spectrum import Spectrum, product_spectrum, spectrum_of_triple
from ifs_spectra.triple import HadamardTriple, factor_along
from ifs_spectra.verify import (
    harmonic_cross_check,
    orthogonality_check,
    parseval_sweep,
    simulate_paths,
)

F23 = Fraction(2, 3)


def report(n, name, ok):
    print(f"[criterion {n:2d}] {name}: {'PASS' if ok else 'FAIL'}")
    assert ok


def closed_form(h):
    """Hand-derived direct spectrum up to word length h: the integer grid
    branch with its triangular cross term plus the -2/3 shifted branch."""
    out = set()
    for n in range(h + 1):
        for a in itertools.product((0, 2), repeat=n):
            for b in itertools.product((0, 2), repeat=n):
                x = sum(ak * 4**k for k, ak in enumerate(a))
                g = sum(k * 4 ** (k - 1) * bk for k, bk in enumerate(b))
                y = sum(bk * 4**k for k, bk in enumerate(b))
                out.add((Fraction(x + g), Fraction(y)))
                out.add((Fraction(x), -F23 - y))
    return out


def test_criterion_01_hadamard_validation(T2):
    t0 = time.monotonic()
    res = T2.validate()
    elapsed = time.monotonic() - t0
    ok = res.ok and res.unitarity_residual < 1e-10 and elapsed < 1.0
    report(1, "Hadamard validation, residual < 1e-10, < 1 s", ok)


def test_criterion_02_extreme_cycles(T2, T1, T1b):
    ok = True
    for T, expected in (
        (T2, {((Fraction(0), Fraction(0)),)}),
        (T1, {((Fraction(0),),)}),
        (T1b, {((Fraction(0),),), ((F23,),)}),
    ):
        t0 = time.monotonic()
        got = {c.points for c in extreme_cycles(T)}
        ok = ok and got == expected and time.monotonic() - t0 < 5.0
    report(2, "extreme cycles exact for all three systems, < 5 s each", ok)


def test_criterion_03_catalog(T2):
    t0 = time.monotonic()
    cat = build_catalog(T2)
    elapsed = time.monotonic() - t0
    ok = (
        len(cat.cycles) == 1
        and cat.cycles[0].points == ((Fraction(0), Fraction(0)),)
        and len(cat.line_sets) == 1
        and cat.line_sets[0].direction == (1, 0)
        and cat.line_sets[0].offsets == ((Fraction(0), F23),)
        and len(cat.rejected) == 1
        and cat.rejected[0].quotient_cycle.points == ((Fraction(0),),)
        and cat.rejected[0].covering_cycle.points == ((Fraction(0), Fraction(0)),)
        and cat.disjoint
        and elapsed < 5.0
    )
    report(3, "catalog = [cycle {(0,0)}, lines y=2/3], y=0 rejected, < 5 s", ok)


def test_criterion_04_spectrum_closed_forms(T2):
    t0 = time.monotonic()
    ok = True
    for h in range(5):
        got = set(spectrum_of_triple(T2, h).values())
        ok = ok and got == closed_form(h)
    ok = ok and time.monotonic() - t0 < 10.0
    report(4, "spectrum matches closed forms exactly up to word length 4, < 10 s", ok)


def test_criterion_05_orthogonality(T2):
    t0 = time.monotonic()
    E = FourierEvaluator.for_triple(T2)
    direct = spectrum_of_triple(T2, 4)
    prod = product_spectrum(factor_along(T2, 1), 4)
    ok = True
    for spec in (direct, prod):
        worst, tail = orthogonality_check(spec, E)
        ok = ok and worst < 1e-7 and tail < 1e-7
    ok = ok and time.monotonic() - t0 < 60.0
    report(5, "max |mu_hat(diff)| < 1e-7 over both horizon-4 spectra, < 60 s", ok)


def test_criterion_06_parseval_sweep(T2):
    t0 = time.monotonic()
    E = FourierEvaluator.for_triple(T2)
    side = np.linspace(-1.0, 1.0, 5)
    grid = np.stack(np.meshgrid(side, side, indexing="ij"), axis=-1).reshape(-1, 2)
    rng = np.random.default_rng(0)
    points = np.vstack([grid, rng.uniform(-1, 1, size=(20, 2))])
    ok = True
    for spec in (
        spectrum_of_triple(T2, 5),
        product_spectrum(factor_along(T2, 1), 5),
    ):
        passed, worst, best, _ = parseval_sweep(spec, E, points)
        ok = ok and passed and worst >= 0.99 and best <= 1 + 1e-6
    ok = ok and time.monotonic() - t0 < 300.0
    report(6, "Parseval partial sums in [0.99, 1 + 1e-6] at 45 points, < 5 min", ok)


def test_criterion_07_quadrature_identity(T2, T1, T1b):
    t0 = time.monotonic()
    ok = all(
        quadrature_check(T, samples=1000, seed=0) < 1e-12 for T in (T2, T1, T1b)
    )
    control = HadamardTriple([[3]], [(0,), (2,)], [(0,), (1,)])
    ok = ok and quadrature_check(control, samples=1000, seed=0) > 0.1
    ok = ok and time.monotonic() - t0 < 1.0
    report(7, "quadrature identity < 1e-12, non-Hadamard control > 0.1, < 1 s", ok)


def test_criterion_08_equal_weights(T2):
    t0 = time.monotonic()
    ok = unequal_weights_probe(T2, [0.25] * 4) < 1e-12
    ok = ok and unequal_weights_probe(T2, [0.4, 0.1, 0.4, 0.1]) > 0.01
    ok = ok and time.monotonic() - t0 < 1.0
    report(8, "uniform weights pass, skewed weights fail, < 1 s", ok)


def test_criterion_09_random_walk_partition(T2):
    t0 = time.monotonic()
    cat = build_catalog(T2)
    starts = [(0.0, 0.0), (0.3, 0.4), (-0.2, 0.5), (0.5, 0.1), (0.25, -0.25)]
    ok = True
    for k, x in enumerate(starts):
        table = simulate_paths(T2, cat, x, n_paths=100_000, seed=100 + k)
        mass = sum(table.h)
        sig = float(np.sqrt(sum(s * s for s in table.sigma)))
        u = table.unclassified
        u_sig = float(np.sqrt(max(u * (1 - u), 1e-12) / table.n_paths))
        ok = ok and abs(mass + u - 1.0) < 1e-12
        ok = ok and mass >= 1.0 - 3 * sig - 3 * u_sig - 0.01
        ok = ok and u <= 3 * u_sig + 0.01
    ok = ok and time.monotonic() - t0 < 120.0
    report(9, "10^5-path partition sums to 1 within 3 sigma at 5 starts, < 2 min", ok)


def test_criterion_10_harmonic_cross_check(T2):
    t0 = time.monotonic()
    cat = build_catalog(T2)
    E = FourierEvaluator.for_triple(T2)
    spec = spectrum_of_triple(T2, 4)
    cycle_part = Spectrum(
        tuple(e for e in spec.elements if e.source == "cycle"), 4
    )
    rng = np.random.default_rng(1)
    points = rng.uniform(-0.5, 0.5, size=(10, 2))
    ok, rows = harmonic_cross_check(
        T2, cat, 0, cycle_part, E, points, n_paths=20_000, seed=10,
    )
    ok = ok and time.monotonic() - t0 < 300.0
    report(10, "Monte Carlo absorption matches truncated series at 10 points, < 5 min", ok)


def test_criterion_11_cycle_search_oracle():
    t0 = time.monotonic()
    rng = np.random.default_rng(42)
    instances = []
    while len(instances) < 10:
        R = int(rng.choice([2, 4, 6]))
        b = int(rng.integers(1, 10))
        l = int(rng.integers(1, 10))
        # two-digit Hadamard pair: the off-diagonal phase must be -1
        if (2 * b * l - R) % (2 * R) == 0 and (R, b, l) not in instances:
            instances.append((R, b, l))
    ok = True
    for R, b, l in instances:
        T = HadamardTriple([[R]], [(0,), (b,)], [(0,), (l,)])
        graph = extreme_cycles(T)
        brute = cycles_by_word_search(T.S, T.L, [(b,)], max_len=3)
        graph_short = {c.points for c in graph if c.length <= 3}
        ok = ok and {c.points for c in brute} == graph_short
    ok = ok and time.monotonic() - t0 < 120.0
    report(11, "brute-force word search agrees with graph cycles on 10 instances, < 2 min", ok)


def test_criterion_12_determinism(tmp_path):
    cfg = {
        "R": [[4, 0], [1, 4]],
        "B": [[0, 0], [0, 3], [1, 0], [1, 3]],
        "L": [[0, 0], [2, 0], [0, 2], [2, 2]],
        "horizon": 5,
        "paths": 1000,
        "seed": 7,
        "image_width": 64,
        "image_height": 64,
        "image_points": 50000,
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    artifacts = ["verify.json", "catalog.json", "spectrum.json",
                 "simulate.json", "attractor_xb.ppm"]
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        for command in ("cycles", "spectrum", "verify", "render", "simulate"):
            assert cli_main([command, "--config", str(cfg_path), "--out", str(out)]) == 0
        outs.append(out)
    ok = all(
        (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
        for name in artifacts
    )
    report(12, "same seed and config give bit-identical JSON and PPM outputs", ok)
