"""Acceptance gate: one test per shipped criterion, exact equality, timed.

Each test prints a single [PASS]/[FAIL] line (visible under -s; pytest -v
also reports one line per criterion) and enforces the stated time budget.
All comparisons are exact rational arithmetic; there are no tolerances.
"""

from __future__ import annotations

import time

from cak.cend import CendElement, bracket, locality, nproduct
from cak.envelope import (
    AMBIENT_N,
    axioms_suite,
    closure_check,
    enumerate_s1_words,
    enumerate_s2_words,
    eval_poly,
    eval_word,
    independence,
    predicted_s2_image,
    proof_compositions,
    s2_order,
    u2_relations,
    verify_k_suite,
    virasoro_suite,
)
from cak.freeconf import composition_intersection
from cak.grassmann import bit, mask_from
from cak.wk import (
    EmbeddingId,
    V,
    defining_relations,
    pd,
    g_element,
    is_symmetric,
    k_locality_table,
    locality_table,
    phi,
    phi1,
    phi2,
    predicted_k_table,
    predicted_w_table,
    subsets,
)


def _gate(num: int, label: str, ok: bool, t0: float, budget: float):
    elapsed = time.perf_counter() - t0
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"[{status}] criterion {num}: {label} ({elapsed:.2f}s / {budget:.0f}s)")
    assert ok, f"criterion {num} failed: {label}"
    assert elapsed < budget, f"criterion {num} over budget: {elapsed:.2f}s"


def test_criterion_01_defining_relations_vanish():
    t0 = time.perf_counter()
    ok = True
    for n in (1, 2, 3):
        for which in ("phi1", "phi2"):
            e = EmbeddingId(which, n)
            for _, fn in defining_relations(n):
                ok = ok and fn(e).is_zero()
    _gate(1, "defining relations vanish under both embeddings, ranks 1..3", ok, t0, 10.0)


def test_criterion_02_w_locality_tables_rank3():
    t0 = time.perf_counter()
    ok = True
    tables = {}
    for which in ("phi1", "phi2"):
        e = EmbeddingId(which, 3)
        table = locality_table(e)
        ok = ok and table == predicted_w_table(e)
        ok = ok and not is_symmetric(table)
        tables[which] = table
    for i in (1, 2, 3):
        ok = ok and tables["phi1"][(V, pd(i))] == 2 and tables["phi1"][(pd(i), V)] == 1
        ok = ok and tables["phi2"][(V, pd(i))] == 1 and tables["phi2"][(pd(i), V)] == 2
    _gate(2, "generator locality tables at rank 3, asymmetric entries included", ok, t0, 5.0)


def test_criterion_03_second_basis_images_match_and_are_independent():
    t0 = time.perf_counter()
    ok = True
    for n in (1, 2):
        e = phi2(n)
        words = enumerate_s2_words(n, 2, 5)
        images = []
        for w in words:
            img = eval_word(w, e)
            ok = ok and img == predicted_s2_image(w)
            images.append(img)
        rank, witness = independence(images)
        ok = ok and witness is None and rank == len(words)
    _gate(3, "second-basis words (t<=2, len<=5): stated images, independent", ok, t0, 30.0)


def test_criterion_04_first_basis_images_are_independent():
    t0 = time.perf_counter()
    ok = True
    for n in (1, 2):
        e = phi1(n)
        images = [eval_word(w, e) for w in enumerate_s1_words(n, 2, 4)]
        rank, witness = independence(images)
        ok = ok and witness is None and rank == len(images)
    _gate(4, "first-basis words (t<=2, len<=4) have independent images", ok, t0, 60.0)


def test_criterion_05_relation_catalog_and_compositions():
    t0 = time.perf_counter()
    ok = True
    families = set()
    for n in (2, 3):
        e = phi2(n)
        for name, poly in u2_relations(n):
            families.add(name.split("[", 1)[0])
            ok = ok and eval_poly(poly, e).is_zero()
    ok = ok and len(families) >= 14
    for n in (2, 3):
        order = s2_order(n)
        e = phi2(n)
        for _, f, g, w in proof_compositions(n):
            comp = composition_intersection(f, g, w, AMBIENT_N, order)
            ok = ok and eval_poly(comp, e).is_zero()
    _gate(5, "relation catalog vanishes at ranks 2,3; compositions have zero image", ok, t0, 10.0)


def test_criterion_06_quadratic_family_rank3():
    t0 = time.perf_counter()
    ok = verify_k_suite(3).passed
    e = phi1(3)
    full = (1, 2, 3)
    for i in full:
        lhs = nproduct(g_element(e, ()), 2, g_element(e, tuple(x for x in full if x != i)))
        want = CendElement.monomial((-1) ** (3 - i) * -2, 0, mask_from(full), bit(i), 0)
        ok = ok and lhs == want
    for n in range(1, 5):
        for I in subsets(n):
            dif = g_element(phi2(n), I) - g_element(phi1(n), I)
            ok = ok and dif == CendElement.monomial(2 - n, 1, mask_from(I), 0, 0)
    ok = ok and all(g_element(phi1(2), I) == g_element(phi2(2), I) for I in subsets(2))
    _gate(6, "quadratic family at rank 3; embedding difference and rank-2 agreement", ok, t0, 30.0)


def test_criterion_07_quadratic_locality_tables():
    t0 = time.perf_counter()
    ok = True
    for n in (3, 4):
        table = k_locality_table(n)
        ok = ok and table == predicted_k_table(n)
        ok = ok and is_symmetric(table)
    for which in ("phi1", "phi2"):
        ok = ok and not is_symmetric(locality_table(EmbeddingId(which, 3)))
    _gate(7, "quadratic locality equals the case formula at ranks 3,4", ok, t0, 60.0)


def test_criterion_08_rank_zero_collapse():
    t0 = time.perf_counter()
    x = phi(phi1(0), V)
    ok = bracket(x, 1, x) == x.scale(2)
    ok = ok and locality(x, x) == 2
    rep = virasoro_suite()
    ok = ok and rep.passed
    ok = ok and any(c.name == "independence" and "rank=16" in c.detail for c in rep.checks)
    ok = ok and is_symmetric(k_locality_table(1))
    _gate(8, "rank-0 generator: bracket, locality, 16 independent descendants", ok, t0, 10.0)


def test_criterion_09_axiom_property_suite():
    t0 = time.perf_counter()
    rep = axioms_suite(samples=200, seed=1, coeff_samples=50)
    _gate(9, "200 random-element axiom checks plus 50 coefficient-algebra checks", rep.passed, t0, 120.0)


def test_criterion_10_reduction_closure():
    t0 = time.perf_counter()
    r1 = closure_check(1, samples=60, seed=3)
    r2 = closure_check(2, samples=60, seed=4)
    _gate(10, "reduction is idempotent and image-preserving on 120 random products", r1.passed and r2.passed, t0, 120.0)
