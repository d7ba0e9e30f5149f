"""Acceptance suite: one test per release criterion, each printing a single
PASS/FAIL line.  Run with `pytest -s tests/test_acceptance.py` to see the
lines as they complete."""
import json
import math
import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from cubeqmc import gf2, measures, nets
from cubeqmc.bounds import BoundContext, lemma_E_bound, thm1_bound
from cubeqmc.cbc import (
    B_dual,
    B_fast,
    Cube,
    GeneralWeights,
    PODWeights,
    ProductWeights,
    average_B,
    cbc_construct,
    cbc_guarantee_rhs,
    markov_fraction,
    subsets,
)
from cubeqmc.cli import main as cli_main
from cubeqmc.dyadic import DyadicPoint, DyadicPointSet
from cubeqmc.lattice import E_dual, E_walsh, PolyLatticeRule, character_sum, dual_contains, plps
from cubeqmc.measures import builtin_measure, lambda_jm
from cubeqmc.nets import NetDefinition, exact_t, generate_net, sequence_prefix, sobol_matrices
from cubeqmc.walsh import (
    HaarIndex,
    bit_reverse,
    dyadic_sub,
    fwht_inplace,
    haar,
    mu,
    phi_table,
    wal,
)

IRREDUCIBLE = {2: 0b111, 3: 0b1011, 4: 0b10011}


def report(number: int, ok: bool, text: str) -> None:
    print(f"ACCEPTANCE {number:2d}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"acceptance criterion {number} failed: {text}"


def test_01_exact_combinatorial_identities():
    ok = True
    # mu-sum identity, exact rationals
    for m in range(1, 21):
        total = sum(Fraction(1, 1 << mu(k)) for k in range(1, 1 << m))
        ok = ok and total == Fraction(m, 2)
    # phi table vs the Walsh double sum, exact integers: scale by 2^(m-1) and
    # evaluate the double sum for all points at once by an integer transform
    for m in range(1, 11):
        n = 1 << m
        weighted = np.zeros(n, dtype=np.int64)
        for k in range(1, n):
            weighted[bit_reverse(k, m)] = 1 << (m - mu(k))
        fwht_inplace(weighted, 0)  # entry x: sum_k 2^(m-mu(k)) wal_k(x/2^m)
        ok = ok and np.array_equal(weighted, phi_table(m).astype(np.int64) << (m - 1))
    report(1, ok, "mu-sum = m/2 for m <= 20 and phi table = Walsh double sum for m <= 10")


def test_02_haar_walsh_identity():
    ok = True
    for j in range(0, 8):
        prec = j + 1
        tol = 2 * math.ulp(2.0 ** (j / 2))
        for m in range(1 << j):
            shift = DyadicPoint(m << 1 if j else 0, prec)
            for n in range(1 << prec):
                x = DyadicPoint(n, prec)
                t = dyadic_sub(x, shift)
                total = sum(wal(k + (1 << j), t) for k in range(1 << j))
                lhs = haar(HaarIndex(j, m), n / (1 << prec))
                ok = ok and abs(lhs - 2.0 ** (-j / 2) * total) <= tol
    report(2, ok, "Haar-from-Walsh identity on all dyadic grid points, j <= 7")


def test_03_dual_net_consistency():
    rng = random.Random(2024)
    ok = True
    for m, f in IRREDUCIBLE.items():
        n = 1 << m
        # E_walsh vs E_dual: every (g, u) pair reduces to the projected
        # generator tuple with u = full set, so enumerate tuples per arity
        for d in (1, 2, 3):
            if d == 3 and m >= 3:
                tuples = [tuple(rng.randrange(n) for _ in range(3)) for _ in range(60)]
            else:
                tuples = list(product(range(n), repeat=d))
            u = tuple(range(1, d + 1))
            for g in tuples:
                rule = PolyLatticeRule(f, g)
                ok = ok and E_walsh(plps(rule), m, u) == E_dual(rule, u)
        # character_sum vs dual_contains
        if m == 2:
            gs = list(product(range(n), repeat=2))
            ks = list(product(range(n), repeat=2))
        else:
            gs = [tuple(rng.randrange(n) for _ in range(2)) for _ in range(20)]
            ks = [tuple(rng.randrange(n) for _ in range(2)) for _ in range(20)]
        for g in gs:
            rule = PolyLatticeRule(f, g)
            for k in ks:
                ok = ok and character_sum(rule, k, (1, 2)) == int(
                    dual_contains(k, rule, (1, 2))
                )
    report(3, ok, "E_walsh = E_dual and character_sum = dual_contains over G_m^s, deg f in {2,3,4}")


def test_04_worked_lattice_instance():
    rule = PolyLatticeRule(0b111, (1, 2))
    pts = plps(rule)
    ok = sorted(map(tuple, pts.numerators.tolist())) == [(0, 0), (1, 3), (2, 1), (3, 2)]
    ok = ok and E_dual(rule, (1,)) == 0 and E_dual(rule, (2,)) == 0
    ok = ok and E_dual(rule, (1, 2)) == Fraction(5, 16)
    ok = ok and B_fast(pts, 2, ProductWeights((1, 1)), Cube.unit(2)) == 0.3125
    ok = ok and B_dual(rule, ProductWeights((1, 1)), Cube.unit(2), exact=True) == Fraction(5, 16)
    report(4, ok, "worked instance f=x^2+x+1, g=(1,x): points, E = 5/16, B = 5/16 bit-exact")


def test_05_averaging_theorem_and_markov():
    rng = random.Random(99)
    ok = True
    for m, s in ((2, 2), (3, 2), (2, 3)):
        f = IRREDUCIBLE[m]
        weight_sets = [ProductWeights((1,) * s)]
        dyadic = tuple(Fraction(rng.randrange(1, 17), 16) for _ in range(s))
        weight_sets.append(ProductWeights(dyadic))
        for w in weight_sets:
            avg = average_B(f, s, w, Cube.unit(s))
            closed = sum(
                Fraction(w.gamma(u)) * Fraction(m, 2) ** len(u) for u in subsets(s)
            ) / (1 << m)
            ok = ok and avg == closed
    for c in (1.5, 2):
        count, threshold = markov_fraction(
            IRREDUCIBLE[2], 2, ProductWeights((1, 1)), Cube.unit(2), c
        )
        ok = ok and count > threshold
    report(5, ok, "enumeration average matches the closed form exactly; Markov counts exceed the threshold")


def test_06_cbc_guarantee():
    rng = random.Random(7)
    ok = True
    for _ in range(50):
        m = rng.randint(2, 8)
        s = rng.randint(1, 6)
        f = gf2.smallest_irreducible(m)
        w = ProductWeights(tuple(rng.uniform(1e-6, 1.0) for _ in range(s)))
        a = tuple(rng.uniform(-2.0, 2.0) for _ in range(s))
        cube = Cube(a, tuple(ai + rng.uniform(1e-3, 4.0) for ai in a))
        g_star, b = cbc_construct(f, s, w, cube)
        ok = ok and b <= cbc_guarantee_rhs(m, s, w, cube) * (1 + 1e-12) + 1e-15
        if m * max(s - 1, 1) <= 14:
            slow = B_dual(PolyLatticeRule(f, g_star), w, cube)
            ok = ok and abs(b - slow) <= 1e-12 * max(abs(slow), 1.0)
    report(6, ok, "50 random CBC instances satisfy the guarantee; B_fast matches B_dual where feasible")


def test_07_fast_path_equivalence():
    rng = random.Random(31)
    ok = True
    for _ in range(100):
        m = rng.randint(1, 6)
        s = rng.randint(1, 6)
        n = 1 << m
        pts = DyadicPointSet(
            np.array([[rng.randrange(n) for _ in range(s)] for _ in range(n)], dtype=np.uint64),
            m,
        )
        gammas = tuple(rng.uniform(0.05, 1.5) for _ in range(s))
        cube = Cube(
            tuple(rng.uniform(-1.0, 0.5) for _ in range(s)),
            tuple(rng.uniform(0.75, 2.5) for _ in range(s)),
        )
        prod = ProductWeights(gammas)
        pod = PODWeights((1,) * (s + 1), gammas)
        gen = GeneralWeights({u: prod.gamma(u) for u in subsets(s)})
        b = B_fast(pts, m, prod, cube)
        scale = max(abs(b), 1.0)  # absolute floor for values cancelling to ~0
        ok = ok and abs(B_fast(pts, m, pod, cube) - b) <= 1e-12 * scale
        ok = ok and abs(B_fast(pts, m, gen, cube) - b) <= 1e-12 * scale
    report(7, ok, "Product, POD (Gamma = 1), and General paths agree to 1e-12 on 100 random point sets")


def test_08_net_bounds():
    ok = True
    for m in range(1, 7):
        for s in (1, 2, 3):
            definition = NetDefinition(m, s, sobol_matrices(s, m))
            pts = generate_net(definition)
            for u in subsets(s):
                t_u = exact_t(definition, u)
                ok = ok and float(E_walsh(pts, m, u)) <= lemma_E_bound(t_u, m, len(u))
    report(8, ok, "exact E of Sobol' nets (m <= 6, s <= 3) respects the 2^(|u|+t+1) m^|u| / 2^m bound")


def test_09_sequence_prefix_decomposition():
    ok = True
    for s in (1, 2, 3, 4):
        definition = NetDefinition(53, s, sobol_matrices(s, 53))
        direct_all, _ = sequence_prefix(definition, 256)
        for n_points in range(1, 257):
            pts, dec = sequence_prefix(definition, n_points)
            ok = ok and np.array_equal(pts.numerators, direct_all.numerators[:n_points])
            regen = np.zeros_like(pts.numerators)
            for block in dec.blocks:
                regen[block.start : block.start + (1 << block.m)] = nets.regenerate_block(
                    block, s, dec.prec
                )
            ok = ok and np.array_equal(regen, pts.numerators)
            if not ok:
                break
    report(9, ok, "shifted-net block regeneration reproduces all Sobol' prefixes N <= 256 bit-exactly")


def test_10_end_to_end_weighted_integration():
    lin = builtin_measure("linear")
    w = ProductWeights((1.0, 1.0))
    cube = Cube.unit(2)
    F = measures.builtin_integrand("product", cube)
    reference = 4.0 / 9.0
    ok = True
    errs = {}
    for m in range(4, 13):
        f = gf2.smallest_irreducible(m)
        g_star, _b = cbc_construct(f, 2, w, cube)
        rule = PolyLatticeRule(f, g_star)
        pts = plps(rule)
        err = measures.integration_error(F, [lin, lin], pts, reference)
        e_map = {u: E_dual(rule, u) for u in subsets(2)}
        ctx = BoundContext(s=2, weights=w, cube=cube, q=1, m=m)
        bound = thm1_bound(ctx, e_map)
        ok = ok and abs(err) <= bound
        errs[m] = abs(err)
    xs = np.array([m for m in range(6, 13)], dtype=float)  # log2 N = m
    ys = np.array([math.log2(max(errs[m], 1e-300)) for m in range(6, 13)])
    slope = np.polyfit(xs, ys, 1)[0]
    ok = ok and slope <= -0.85
    report(10, ok, f"|err| <= thm1 bound for CBC rules m = 4..12; slope {slope:.3f} <= -0.85")


def test_11_measure_layer(tmp_path):
    table = tmp_path / "cdf.txt"
    xs = np.linspace(0.0, 2.0, 401)
    table.write_text("\n".join(f"{x} {(x / 2.0) ** 2}" for x in xs))
    builtins = [
        builtin_measure("uniform", a=0, b=1),
        builtin_measure("uniform", a=-2, b=5),
        builtin_measure("linear"),
        builtin_measure("trunc_exp", rate=1, a=0, b=1),
        builtin_measure("trunc_exp", rate=3, a=-1, b=4),
        builtin_measure("table", path=table),
    ]
    ok = True
    for mes in builtins:
        for j in range(0, 11):
            total = math.fsum(lambda_jm(mes, j, k) for k in range(1 << j))
            ok = ok and abs(total - (mes.b - mes.a) / 2) <= 1e-10
    # Haar coefficients of F = prod x_i respect the decay bound
    lin = builtin_measure("linear")
    unif = builtin_measure("uniform", a=0, b=1)
    for mes_pair in ([unif, unif], [lin, lin]):
        F = measures.builtin_integrand("product", Cube.unit(2))
        for j1 in range(0, 5):
            for j2 in (-1, 2):
                if j2 == -1:
                    coeff = measures.haar_coeff(F, mes_pair, [j1], [0], [1], 9)
                    bound = measures.lemma1_bound(F, mes_pair, [j1], [0], [1])
                else:
                    coeff = measures.haar_coeff(F, mes_pair, [j1, j2], [0, 1], [1, 2], 9)
                    bound = measures.lemma1_bound(F, mes_pair, [j1, j2], [0, 1], [1, 2])
                ok = ok and abs(coeff) <= bound + 2e-3
    report(11, ok, "lambda row sums = (b-a)/2 for all builtins; Haar coefficients respect the decay bound")


def test_12_cli_determinism(tmp_path):
    ok = True
    for command in ("cbc", "points"):
        outputs = []
        for k in ("1", "4", "8"):
            path = tmp_path / f"{command}-{k}"
            if command == "cbc":
                argv = [
                    "cbc", "--f", "0x13", "--s", "3", "--weights", "prod:0.9,0.5,0.1",
                    "--no-timestamp", "--threads", k, "--out", str(path),
                ]
            else:
                argv = [
                    "points", "--plps", "--f", "0x13", "--g", "0x1,0x7,0x9",
                    "--format", "bin", "--threads", k, "--out", str(path),
                ]
            ok = ok and cli_main(argv) == 0
            outputs.append(path.read_bytes())
        ok = ok and outputs[0] == outputs[1] == outputs[2]
    report(12, ok, "cbc and points outputs byte-identical across --threads {1,4,8}")
