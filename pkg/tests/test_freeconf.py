"""Tests for the free conformal machinery on a generic string alphabet."""

from __future__ import annotations

import random
from fractions import Fraction

from cak.freeconf import (
    ConformalPolynomial,
    FreeElement,
    GeneratorOrder,
    NormalWord,
    RewriteRule,
    compare,
    composition_intersection,
    embed,
    find_occurrences,
    free_apply_D,
    free_letter,
    free_nproduct,
    is_reduced,
    poly_apply_D,
    poly_nproduct,
    reduce,
    single,
    to_normal,
)

ORDER = GeneratorOrder(["a", "b", "c"])


def W(dpow, letters, indices):
    return NormalWord(dpow, tuple(letters), tuple(indices))


def P(*pairs):
    out = ConformalPolynomial.zero()
    for w, c in pairs:
        out = out + ConformalPolynomial.word(w, c)
    return out


def test_embed_frozen_values():
    assert embed(single("a"), 2) == FreeElement.term(0, ((1, "a"),))
    assert embed(single("a"), 1) == FreeElement.term(0, ((0, "a"),))
    # a o_1 b at ambient 2: v a * d/dv (v b) = v a b
    assert embed(W(0, "ab", (1,)), 2) == FreeElement.term(0, ((1, "a"), (0, "b")))
    # a o_0 b at ambient 2: v a * v b
    assert embed(W(0, "ab", (0,)), 2) == FreeElement.term(0, ((1, "a"), (1, "b")))
    assert embed(W(2, "ab", (1,)), 2) == FreeElement.term(2, ((1, "a"), (0, "b")))
    try:
        embed(W(0, "ab", (2,)), 2)
    except ValueError:
        pass
    else:
        raise AssertionError("index >= ambient bound must be rejected")


def test_free_nproduct_base_and_derivations():
    rng = random.Random(21)

    def rand_elem():
        out = FreeElement.zero()
        for _ in range(3):
            word = tuple(
                (rng.randrange(3), rng.choice("abc")) for _ in range(rng.randrange(1, 3))
            )
            out = out + FreeElement.term(rng.randrange(2), word, rng.randrange(-3, 4) or 1)
        return out

    for _ in range(40):
        x, y = rand_elem(), rand_elem()
        n = rng.randrange(0, 4)
        # left derivation: (Dx) o_n y = -n x o_{n-1} y
        lhs = free_nproduct(free_apply_D(x), n, y)
        rhs = free_nproduct(x, n - 1, y).scale(-n) if n > 0 else FreeElement.zero()
        assert lhs == rhs
        # right derivation: x o_n (Dy) = D(x o_n y) + n x o_{n-1} y
        lhs = free_nproduct(x, n, free_apply_D(y))
        rhs = free_apply_D(free_nproduct(x, n, y))
        if n > 0:
            rhs = rhs + free_nproduct(x, n - 1, y).scale(n)
        assert lhs == rhs


def test_free_nproduct_left_associativity_expansion():
    from math import comb

    rng = random.Random(22)

    def rand_elem():
        out = FreeElement.zero()
        for _ in range(2):
            word = tuple(
                (rng.randrange(2), rng.choice("ab")) for _ in range(rng.randrange(1, 3))
            )
            out = out + FreeElement.term(rng.randrange(2), word, rng.randrange(1, 4))
        return out

    for _ in range(25):
        x, y, z = rand_elem(), rand_elem(), rand_elem()
        n, m = rng.randrange(0, 3), rng.randrange(0, 3)
        lhs = free_nproduct(free_nproduct(x, n, y), m, z)
        rhs = FreeElement.zero()
        for s in range(n + 1):
            term = free_nproduct(x, n - s, free_nproduct(y, m + s, z))
            rhs = rhs + term.scale(comb(n, s) * (-1) ** s)
        assert lhs == rhs

    try:
        free_nproduct(FreeElement.term(0, ((0, "a"),)), -1, FreeElement.term(0, ((0, "a"),)))
    except ValueError:
        pass
    else:
        raise AssertionError("negative product index must be rejected")


def test_compare_weight_order():
    # two-letter words with higher first index dominate, D-power breaks ties last
    w_low = W(0, "vv".replace("v", "a"), (0,))
    w_high = W(1, "aa", (1,))
    assert compare(w_low, w_high, ORDER) == -1
    assert compare(w_high, w_low, ORDER) == 1
    assert compare(w_low, w_low, ORDER) == 0
    # length dominates everything
    assert compare(W(5, "bb", (1,)), W(0, "aaa", (0, 0)), ORDER) == -1
    # same indices: letters decide left to right
    assert compare(W(0, "ab", (1,)), W(0, "ba", (1,)), ORDER) == -1
    # same everything but trailing D
    assert compare(W(0, "ab", (1,)), W(2, "ab", (1,)), ORDER) == -1


def test_to_normal_round_trip():
    words = [
        single("a"),
        W(1, "b", ()),
        W(0, "ab", (0,)),
        W(0, "ab", (1,)),
        W(2, "ba", (1,)),
        W(0, "abc", (1, 0)),
        W(1, "aab", (0, 1)),
    ]
    for N in (1, 2, 3):
        for w in words:
            if any(n >= N for n in w.indices):
                continue
            got = to_normal(embed(w, N), N)
            assert got == ConformalPolynomial.word(w), (N, w, got)
    combo = (
        embed(W(0, "ab", (0,)), 2).scale(3)
        + embed(W(1, "ab", (1,)), 2).scale(Fraction(-1, 2))
        + embed(single("c"), 2)
    )
    got = to_normal(combo, 2)
    assert got == P((W(0, "ab", (0,)), 3), (W(1, "ab", (1,)), Fraction(-1, 2)), (single("c"), 1))


def test_to_normal_rejects_outside_span():
    # bare letter with no v-power is below every candidate at ambient 2
    try:
        to_normal(FreeElement.term(0, ((0, "a"),)), 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected not-in-span failure")
    # excess v-power at ambient 1 cannot be matched by D-powers
    try:
        to_normal(FreeElement.term(0, ((1, "a"),)), 1)
    except ValueError:
        pass
    else:
        raise AssertionError("expected not-in-span failure")
    # letter-free terms are never in the subalgebra
    try:
        to_normal(FreeElement.term(0, ()), 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected letter-free rejection")


def test_poly_nproduct_frozen_and_associativity():
    a, b, c = (ConformalPolynomial.word(single(x)) for x in "abc")
    assert poly_nproduct(a, 0, b, 2) == ConformalPolynomial.word(W(0, "ab", (0,)))
    assert poly_nproduct(a, 1, b, 2) == ConformalPolynomial.word(W(0, "ab", (1,)))
    from math import comb

    for n in range(2):
        for m in range(2):
            lhs = poly_nproduct(poly_nproduct(a, n, b, 2), m, c, 2)
            rhs = ConformalPolynomial.zero()
            for s in range(n + 1):
                rhs = rhs + poly_nproduct(
                    a, n - s, poly_nproduct(b, m + s, c, 2), 2
                ).scale(comb(n, s) * (-1) ** s)
            assert lhs == rhs, (n, m)


VORDER = GeneratorOrder(["v"])
VRULE = RewriteRule.make(
    "idempotent-top",
    P((NormalWord(0, ("v", "v"), (1,)), 2), (NormalWord(0, ("v",), ()), -2)),
    VORDER,
)


def test_rule_make_normalizes_and_rejects_dpow():
    assert VRULE.leading == NormalWord(0, ("v", "v"), (1,))
    assert VRULE.poly == P(
        (NormalWord(0, ("v", "v"), (1,)), 1), (NormalWord(0, ("v",), ()), -1)
    )
    try:
        RewriteRule.make("bad", ConformalPolynomial.word(W(1, "v", ())), VORDER)
    except ValueError:
        pass
    else:
        raise AssertionError("D-bearing rule must be rejected")


def test_find_occurrences_and_is_reduced():
    w = NormalWord(0, ("v", "v", "v"), (1, 1))
    assert find_occurrences(w, VRULE) == [0, 1]
    assert not is_reduced(w, [VRULE])
    assert is_reduced(NormalWord(0, ("v", "v"), (0,)), [VRULE])
    assert is_reduced(single("v"), [VRULE])


def test_reduce_frozen_and_idempotent():
    w = NormalWord(0, ("v", "v", "v"), (1, 1))
    got = reduce(ConformalPolynomial.word(w), [VRULE], 2, VORDER)
    assert got == ConformalPolynomial.word(single("v"))
    again = reduce(got, [VRULE], 2, VORDER)
    assert again == got
    # D-lifted input reduces under the same rules
    got = reduce(ConformalPolynomial.word(NormalWord(3, ("v", "v"), (1,))), [VRULE], 2, VORDER)
    assert got == ConformalPolynomial.word(NormalWord(3, ("v",), ()))


def test_composition_intersection_self_overlap():
    w = NormalWord(0, ("v", "v", "v"), (1, 1))
    comp = composition_intersection(VRULE, VRULE, w, 2, VORDER)
    assert comp.is_zero()
    # occurrence at position 1 alone cannot cover the first letter
    try:
        composition_intersection(
            VRULE, VRULE, NormalWord(0, ("v", "v", "v"), (0, 1)), 2, VORDER
        )
    except ValueError:
        pass
    else:
        raise AssertionError("occurrences must jointly cover the whole word")


def test_poly_apply_D_and_leading():
    p = P((W(0, "ab", (1,)), 2), (W(0, "ab", (0,)), 1))
    lead, c = p.leading(ORDER)
    assert lead == W(0, "ab", (1,)) and c == 2
    q = poly_apply_D(p, 2)
    assert q == P((W(2, "ab", (1,)), 2), (W(2, "ab", (0,)), 1))
