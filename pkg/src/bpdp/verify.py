"""Property suites behind the `verify` CLI subcommand.

Each suite returns a list of (name, passed, details) triples; the CLI
renders them as a pass/fail report.  Sample sizes default to quick values
so the command stays interactive; the acceptance tests run the same
checks at their full specified sizes.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from .chain import (ChainParams, FROBOSE_STATES, TWO_NEIGHBOUR_STATES,
                    brute_force_hit_prob, compute_pi, frobose_transitions,
                    two_neighbour_transitions)
from .lattice_sim import (Rectangle, closure_frobose, closure_two_neighbour,
                          crossing, internally_filled,
                          rectangles_process_closure)
from .matrix_analysis import (char_poly_coeffs, closed_form_entry,
                              expected_char_poly_coeffs, lagrange_norm_bound,
                              matrix_power_entry, operator_norm,
                              perturbed_matrix)
from .special_functions import ModelParams, f, g
from .variational import (MonotonePath, W, W_f, holroyd_lower, optimal_path,
                          path_form_integral)

Check = Tuple[str, bool, str]

__all__ = ["SUITES", "run_suite"]


def suite_stochasticity(samples: int = 100, seed: int = 20240801) -> List[Check]:
    rng = np.random.default_rng(np.random.Philox(seed))
    out: List[Check] = []
    worst = 0.0
    for _ in range(samples):
        w = int(rng.integers(1, 50))
        h = int(rng.integers(1, 50))
        p = float(rng.uniform(0.01, 0.99))
        params = ModelParams(p)
        for s in FROBOSE_STATES:
            total = math.fsum(r.linear_prob(w, h, params)
                              for r in frobose_transitions(s))
            worst = max(worst, abs(total - 1.0))
    out.append(("frobose rows sum to 1 (1e-12)", worst <= 1e-12,
                f"max |sum-1| = {worst:.3e}"))
    ok = True
    lo = 1.0
    for _ in range(samples):
        w = int(rng.integers(1, 50))
        h = int(rng.integers(1, 50))
        p = float(rng.uniform(0.01, 0.5))
        params = ModelParams(p)
        for s in TWO_NEIGHBOUR_STATES:
            rules = two_neighbour_transitions(s)
            if not rules:
                continue
            total = math.fsum(r.linear_prob(w, h, params) for r in rules)
            ok = ok and 0.0 < total <= 1.0 + 1e-12
            lo = min(lo, total)
    out.append(("two-neighbour rows sub-stochastic", ok,
                f"smallest out-of-state sum = {lo:.6f}"))
    return out


def suite_oracle(thresholds=range(2, 9), ps=(0.1, 0.3, 0.5, 0.7)) -> List[Check]:
    worst = 0.0
    for p in ps:
        for L in thresholds:
            for conv in ("exact", "at-least"):
                cp = ChainParams.from_p(p, threshold=L, convention=conv)
                d = compute_pi(cp).log_hit_prob
                b = brute_force_hit_prob(cp)
                worst = max(worst, abs(d - b))
    return [("DP equals brute force (1e-12, log domain)", worst <= 1e-12,
             f"max |diff| = {worst:.3e}")]


def suite_lattice(configs: int = 200, seed: int = 7) -> List[Check]:
    rng = np.random.default_rng(np.random.Philox(seed))
    out: List[Check] = []
    ok = True
    for _ in range(configs):
        n = int(rng.integers(4, 14))
        box = Rectangle(0, 0, 9, 9)
        A = {(int(x), int(y))
             for x, y in zip(rng.integers(0, 9, n), rng.integers(0, 9, n))}
        big = box.expand(3)
        ok = ok and (rectangles_process_closure(A, "two-neighbour")
                     == closure_two_neighbour(A, big))
        ok = ok and (rectangles_process_closure(A, "frobose")
                     == closure_frobose(A, big))
    out.append(("rectangles process == fixpoint closure", ok, f"{configs} configs"))

    # extremal bound on positive samples
    ok = True
    found = 0
    for _ in range(configs * 5):
        w = int(rng.integers(2, 5))
        h = int(rng.integers(2, 5))
        rect = Rectangle(0, 0, w, h)
        k = int(rng.integers(1, w * h + 1))
        A = {(int(x), int(y))
             for x, y in zip(rng.integers(0, w, k), rng.integers(0, h, k))}
        if internally_filled(rect, A, "two-neighbour"):
            found += 1
            ok = ok and len(A) >= math.ceil((w + h) / 2)
        if internally_filled(rect, A, "frobose"):
            ok = ok and len(A) >= w + h - 1
    out.append(("extremal bound on filled samples", ok, f"{found} positive samples"))

    # stacking crossings on nested pairs
    ok = True
    for _ in range(configs):
        S = Rectangle(0, 0, 2, 2)
        R = Rectangle(0, 0, int(rng.integers(3, 6)), int(rng.integers(3, 6)))
        A = {(int(x), int(y)) for x, y in
             zip(rng.integers(0, R.c, 10), rng.integers(0, R.d, 10))}
        for model in ("two-neighbour", "frobose"):
            sfill = internally_filled(S, A, model)
            if sfill and crossing(S, R, A, model):
                ok = ok and internally_filled(R, A | S.cells(), model)
    out.append(("stacking: filled small + crossing => filled big", ok, ""))
    return out


def suite_matrix(seed: int = 11, random_matrices: int = 25) -> List[Check]:
    out: List[Check] = []
    worst = 0.0
    for K in range(26):
        a = matrix_power_entry(K)
        b = closed_form_entry(K)
        worst = max(worst, abs(a - b) / max(b, 1.0))
    out.append(("matrix power (0,3) == closed form, K<=25", worst <= 1e-6,
                f"max rel diff = {worst:.3e}"))
    worst = 0.0
    for P in (1e-2, 1e-4):
        got = char_poly_coeffs(perturbed_matrix(P) / math.sqrt(P))
        worst = max(worst, float(np.max(np.abs(got - expected_char_poly_coeffs(P)))))
    out.append(("characteristic polynomial factorisation", worst <= 1e-10,
                f"max coeff diff = {worst:.3e}"))
    rng = np.random.default_rng(np.random.Philox(seed))
    ok = True
    for _ in range(random_matrices):
        M = rng.normal(size=(6, 6))
        for n in (1, 5, 20):
            try:
                bound = lagrange_norm_bound(M, n)
            except ValueError:
                continue
            direct = operator_norm(np.linalg.matrix_power(M, n))
            ok = ok and bound >= direct * (1.0 - 1e-12)
    out.append(("Lagrange interpolation bound dominates |||M^n|||", ok,
                f"{random_matrices} random matrices"))
    return out


def suite_variational(seed: int = 23) -> List[Check]:
    rng = np.random.default_rng(np.random.Philox(seed))
    out: List[Check] = []
    worst = 0.0
    for _ in range(20):
        a = float(rng.uniform(0.5, 3.0))
        b = a + float(rng.uniform(0.5, 4.0))
        xs = np.sort(rng.uniform(a, b, 3))
        ys = np.sort(rng.uniform(a, b, 3))
        pts = [(a, a)] + list(zip(xs, ys)) + [(b, b)]
        path = MonotonePath(tuple(dict.fromkeys(pts)))
        val = path_form_integral(lambda x, y: (-(x - y), (x - y)), path)
        worst = max(worst, abs(val))
    out.append(("exact differential integrates to zero", worst <= 1e-10,
                f"max |integral| = {worst:.3e}"))

    ok = True
    base = MonotonePath(((1.0, 1.0), (2.0, 3.0), (5.0, 6.0)))
    refined = MonotonePath(((1.0, 1.0), (1.5, 2.0), (2.0, 3.0), (3.5, 4.5), (5.0, 6.0)))
    ok = ok and abs(W(base) - W(refined)) < 1e-10
    mirrored = MonotonePath(tuple((y, x) for x, y in base.vertices))
    ok = ok and abs(W(base) - W(mirrored)) < 1e-10
    out.append(("reparameterisation and symmetry invariance", ok, ""))

    params = ModelParams(0.3)
    worstname = ""
    ok = True
    wopt = W_f(optimal_path((1.0, 1.0), (4.0, 5.0)))
    for _ in range(50):
        xs = np.concatenate([[1.0], np.sort(rng.uniform(1.0, 4.0, 2)), [4.0]])
        ys = np.concatenate([[1.0], np.sort(rng.uniform(1.0, 5.0, 2)), [5.0]])
        path = MonotonePath(tuple(dict.fromkeys(zip(xs, ys))))
        if W_f(path) < wopt - 1e-9:
            ok = False
            worstname = f"{path.vertices}"
    out.append(("optimal path minimises W^F (sampled)", ok, worstname))

    lower = holroyd_lower((2, 2), params)
    from .lattice_sim import exact_event_prob, locally_internally_filled
    rect = Rectangle(0, 0, 2, 2)
    exact = exact_event_prob(
        lambda A: locally_internally_filled(rect, A, "frobose"),
        rect.cells(), params)
    ok = lower <= math.log(exact) + 1e-12
    out.append(("a-priori lower bound below exact filling probability", ok,
                f"bound {lower:.4f} vs log prob {math.log(exact):.4f}"))
    return out


SUITES = {
    "stochasticity": suite_stochasticity,
    "oracle": suite_oracle,
    "lattice": suite_lattice,
    "matrix": suite_matrix,
    "variational": suite_variational,
}


def run_suite(name: str) -> List[Check]:
    if name == "all":
        out: List[Check] = []
        for key in ("stochasticity", "oracle", "lattice", "matrix", "variational"):
            out.extend(SUITES[key]())
        return out
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
    return fn()
