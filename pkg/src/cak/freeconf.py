"""Free associative conformal algebra over a finite alphabet.

Normal words D^s(a1 o_{n1} (a2 o_{n2} (... a_{k+1}))) are right-normed by
convention.  Products are computed through the differential model
k[D] (x) k<v, B>: the generator a maps to v^(N-1) a, D-free elements multiply
by  (1 (x) f) o_n (1 (x) g) = 1 (x) f * d^n g / dv^n,  and D-bearing factors
are handled by the usual two derivation rules.  Conversion back to the
normal-word basis is an exact linear solve against candidate embeddings.

The reduction engine rewrites occurrences of D-free rule leading words and is
used both for normal-form computation and for intersection compositions.
Letters can be any hashable, totally comparable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Hashable, Iterable, Sequence

Letter = Hashable


class GeneratorOrder:
    """Total order on the alphabet, given as an ascending list."""

    def __init__(self, letters: Sequence[Letter]):
        self.letters = tuple(letters)
        self._rank = {a: i for i, a in enumerate(self.letters)}
        assert len(self._rank) == len(self.letters), "duplicate letters"

    def rank(self, a: Letter) -> int:
        return self._rank[a]

    def __contains__(self, a: Letter) -> bool:
        return a in self._rank

    def __repr__(self) -> str:
        return f"GeneratorOrder({list(self.letters)!r})"


@dataclass(frozen=True)
class NormalWord:
    dpow: int
    letters: tuple
    indices: tuple

    def __post_init__(self):
        assert self.dpow >= 0
        assert len(self.letters) >= 1
        assert len(self.indices) == len(self.letters) - 1
        assert all(n >= 0 for n in self.indices)

    @property
    def length(self) -> int:
        return len(self.letters)


def single(letter: Letter) -> NormalWord:
    return NormalWord(0, (letter,), ())


def weight_key(w: NormalWord, order: GeneratorOrder) -> tuple:
    """Comparison key: letter count first, then indices and letters
    interleaved left to right, then the trailing D-exponent."""
    parts: list[int] = [len(w.letters)]
    for n, a in zip(w.indices, w.letters):
        parts.append(n)
        parts.append(order.rank(a))
    parts.append(order.rank(w.letters[-1]))
    parts.append(w.dpow)
    return tuple(parts)


def compare(w1: NormalWord, w2: NormalWord, order: GeneratorOrder) -> int:
    k1, k2 = weight_key(w1, order), weight_key(w2, order)
    return (k1 > k2) - (k1 < k2)


class ConformalPolynomial:
    """Sparse rational combination of normal words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[NormalWord, Fraction] | None = None):
        self.terms = {w: Fraction(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "ConformalPolynomial":
        return cls()

    @classmethod
    def word(cls, w: NormalWord, coeff: Fraction | int = 1) -> "ConformalPolynomial":
        return cls({w: Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConformalPolynomial) and self.terms == other.terms

    def __hash__(self):  # pragma: no cover
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "ConformalPolynomial") -> "ConformalPolynomial":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return ConformalPolynomial(out)

    def __sub__(self, other: "ConformalPolynomial") -> "ConformalPolynomial":
        return self + (-other)

    def __neg__(self) -> "ConformalPolynomial":
        return ConformalPolynomial({w: -c for w, c in self.terms.items()})

    def scale(self, c: Fraction | int) -> "ConformalPolynomial":
        c = Fraction(c)
        return ConformalPolynomial({w: c * x for w, x in self.terms.items()})

    def leading(self, order: GeneratorOrder) -> tuple[NormalWord, Fraction]:
        assert self.terms, "zero polynomial has no leading word"
        w = max(self.terms, key=lambda u: weight_key(u, order))
        return w, self.terms[w]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{w}" for w, c in self.terms.items())


# word in the differential model: tuple of (v-power, letter) pairs
FreeWord = tuple


class FreeElement:
    """Sparse element of the model k[D] (x) k<v, B>."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, FreeWord], Fraction] | None = None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "FreeElement":
        return cls()

    @classmethod
    def term(cls, dpow: int, word: FreeWord, coeff: Fraction | int = 1) -> "FreeElement":
        return cls({(dpow, tuple(word)): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeElement) and self.terms == other.terms

    def __add__(self, other: "FreeElement") -> "FreeElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return FreeElement(out)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def __neg__(self) -> "FreeElement":
        return FreeElement({k: -c for k, c in self.terms.items()})

    def scale(self, c: Fraction | int) -> "FreeElement":
        c = Fraction(c)
        return FreeElement({k: c * x for k, x in self.terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*D^{d}{list(w)}" for (d, w), c in self.terms.items())


def free_apply_D(x: FreeElement, times: int = 1) -> FreeElement:
    assert times >= 0
    return FreeElement({(d + times, w): c for (d, w), c in x.terms.items()})


def free_letter(a: Letter, N: int) -> FreeElement:
    assert N >= 1
    return FreeElement.term(0, ((N - 1, a),))


def _word_derivative(word: FreeWord) -> list[tuple[FreeWord, int]]:
    out = []
    for i, (m, a) in enumerate(word):
        if m > 0:
            out.append((word[:i] + ((m - 1, a),) + word[i + 1 :], m))
    return out


def _word_derivative_pow(word: FreeWord, n: int) -> list[tuple[FreeWord, int]]:
    acc = {word: 1}
    for _ in range(n):
        nxt: dict[FreeWord, int] = {}
        for w, c in acc.items():
            for w2, m in _word_derivative(w):
                nxt[w2] = nxt.get(w2, 0) + c * m
        acc = nxt
        if not acc:
            break
    return list(acc.items())


def _right_factor_prod(d2: int, w2: FreeWord, n: int) -> dict[tuple[int, FreeWord], int]:
    """Suffix pieces of (1 (x) w1) o_n (D^d2 w2), without the w1 prefix."""
    if d2 > 0:
        # x o_n (D y) = D(x o_n y) + n (x o_{n-1} y)
        res = {(d + 1, w): c for (d, w), c in _right_factor_prod(d2 - 1, w2, n).items()}
        if n > 0:
            for (d, w), c in _right_factor_prod(d2 - 1, w2, n - 1).items():
                key = (d, w)
                res[key] = res.get(key, 0) + n * c
        return res
    return {(0, w3): m for w3, m in _word_derivative_pow(w2, n)}


def free_nproduct(x: FreeElement, n: int, y: FreeElement) -> FreeElement:
    """n-th product in the differential model (derivation rules + base rule)."""
    if n < 0:
        raise ValueError("n-th products are only defined for n >= 0")
    out: dict[tuple[int, FreeWord], Fraction] = {}
    for (d1, w1), c1 in x.terms.items():
        for (d2, w2), c2 in y.terms.items():
            # peel D-powers off the left factor: (Dx) o_n y = -n x o_{n-1} y
            c = c1 * c2
            m = n
            for _ in range(d1):
                if m == 0:
                    c = Fraction(0)
                    break
                c *= -m
                m -= 1
            if not c:
                continue
            for (d, w3), mult in _right_factor_prod(d2, w2, m).items():
                if mult:
                    key = (d, w1 + w3)
                    out[key] = out.get(key, Fraction(0)) + c * mult
    return FreeElement(out)


_EMBED_CACHE: dict[tuple[NormalWord, int], FreeElement] = {}


def embed(w: NormalWord, N: int) -> FreeElement:
    """Image of a normal word under the generator map a -> v^(N-1) a."""
    key = (w, N)
    hit = _EMBED_CACHE.get(key)
    if hit is not None:
        return hit
    if any(n >= N for n in w.indices):
        raise ValueError("word index exceeds the ambient locality bound")
    acc = free_letter(w.letters[-1], N)
    for a, n in zip(reversed(w.letters[:-1]), reversed(w.indices)):
        acc = free_nproduct(free_letter(a, N), n, acc)
    acc = free_apply_D(acc, w.dpow)
    _EMBED_CACHE[key] = acc
    return acc


def _solve_exact(cols: list[FreeElement], target: FreeElement) -> list[Fraction] | None:
    """Solve sum_j lambda_j cols[j] = target exactly; None if inconsistent."""
    keys = set(target.terms)
    for c in cols:
        keys.update(c.terms)
    keys = sorted(keys)
    ncols = len(cols)
    rows = [
        [c.terms.get(k, Fraction(0)) for c in cols] + [target.terms.get(k, Fraction(0))]
        for k in keys
    ]
    pivot_rows: dict[int, int] = {}
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivot_rows[col] = r
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncols]:
            return None
    sol = [Fraction(0)] * ncols
    for col, pr in pivot_rows.items():
        sol[col] = rows[pr][ncols]
    return sol


def to_normal(x: FreeElement, N: int, order: GeneratorOrder | None = None) -> ConformalPolynomial:
    """Expand a subalgebra element in the normal-word basis.

    Terms are grouped by letter sequence and by the conserved grade
    d + sum of v-powers; candidates within a group are the normal words
    whose embeddings can contribute, and the expansion is an exact solve.
    Raises ValueError when x is not a combination of normal-word images.
    """
    groups: dict[tuple[tuple, int], FreeElement] = {}
    for (d, w), c in x.terms.items():
        letters = tuple(a for (_, a) in w)
        grade = d + sum(m for (m, _) in w)
        key = (letters, grade)
        groups[key] = groups.get(key, FreeElement.zero()) + FreeElement.term(d, w, c)
    out: dict[NormalWord, Fraction] = {}
    for (letters, grade), part in groups.items():
        if not letters:
            raise ValueError("element has a letter-free term; not in the subalgebra")
        k = len(letters) - 1
        base = (k + 1) * (N - 1)
        candidates: list[NormalWord] = []
        for idx in iter_product(range(N), repeat=k):
            t = grade - base + sum(idx)
            if t >= 0:
                candidates.append(NormalWord(t, letters, idx))
        cols = [embed(w, N) for w in candidates]
        sol = _solve_exact(cols, part)
        if sol is None:
            raise ValueError("element is not in the span of normal-word images")
        for w, lam in zip(candidates, sol):
            if lam:
                out[w] = out.get(w, Fraction(0)) + lam
    return ConformalPolynomial(out)


def poly_apply_D(p: ConformalPolynomial, times: int = 1) -> ConformalPolynomial:
    return ConformalPolynomial(
        {NormalWord(w.dpow + times, w.letters, w.indices): c for w, c in p.terms.items()}
    )


def poly_embed(p: ConformalPolynomial, N: int) -> FreeElement:
    out = FreeElement.zero()
    for w, c in p.terms.items():
        out = out + embed(w, N).scale(c)
    return out


def poly_nproduct(
    p: ConformalPolynomial, n: int, q: ConformalPolynomial, N: int
) -> ConformalPolynomial:
    return to_normal(free_nproduct(poly_embed(p, N), n, poly_embed(q, N)), N)


@dataclass
class RewriteRule:
    name: str
    poly: ConformalPolynomial
    leading: NormalWord

    @classmethod
    def make(cls, name: str, poly: ConformalPolynomial, order: GeneratorOrder) -> "RewriteRule":
        assert not poly.is_zero(), "empty rule"
        for w in poly.terms:
            if w.dpow != 0:
                raise ValueError(f"rule {name!r} contains a D-bearing word")
        lead, c = poly.leading(order)
        return cls(name, poly.scale(Fraction(1) / c), lead)


def find_occurrences(w: NormalWord, rule: RewriteRule) -> list[int]:
    """Positions where the rule's leading word occurs as a contiguous
    right-segment pattern: either the tail of w or an inner segment followed
    by a further junction index."""
    lead = rule.leading
    p = len(lead.indices)
    out = []
    for i in range(0, len(w.letters) - p):
        if (
            w.letters[i : i + p + 1] == lead.letters
            and w.indices[i : i + p] == lead.indices
        ):
            out.append(i)
    return out


def is_reduced(w: NormalWord, rules: Iterable[RewriteRule]) -> bool:
    return not any(find_occurrences(w, r) for r in rules)


def splice(
    w: NormalWord, rule: RewriteRule, pos: int, N: int, order: GeneratorOrder
) -> ConformalPolynomial:
    """The rule polynomial substituted for its leading word inside w.

    Returns D^s(u o (f o_m tail)) expanded in normal words; its principal
    word is w with coefficient 1 (asserted), so subtracting the right multiple
    performs one rewriting step.
    """
    p = len(rule.leading.indices)
    end = pos + p + 1
    core = rule.poly
    if end < len(w.letters):
        tail = NormalWord(0, w.letters[end:], w.indices[end:])
        core = poly_nproduct(core, w.indices[end - 1], ConformalPolynomial.word(tail), N)
    for j in range(pos - 1, -1, -1):
        head = ConformalPolynomial.word(single(w.letters[j]))
        core = poly_nproduct(head, w.indices[j], core, N)
    core = poly_apply_D(core, w.dpow)
    lead, c = core.leading(order)
    assert lead == w and c == 1, ("splice principal word mismatch", w, lead, c)
    return core


def reduce(
    p: ConformalPolynomial,
    rules: Sequence[RewriteRule],
    N: int,
    order: GeneratorOrder,
) -> ConformalPolynomial:
    """Rewrite until every word is reduced; terminates by the well-founded
    length-first order, strictly decreasing the maximal rewritten word."""
    while True:
        best: NormalWord | None = None
        best_rule = None
        best_pos = 0
        for w in p.terms:
            for rule in rules:
                occ = find_occurrences(w, rule)
                if occ:
                    if best is None or compare(w, best, order) > 0:
                        best, best_rule, best_pos = w, rule, occ[0]
                    break
        if best is None:
            return p
        phi = splice(best, best_rule, best_pos, N, order)
        p = p - phi.scale(p.terms[best])
        assert best not in p.terms


def composition_intersection(
    f: RewriteRule,
    g: RewriteRule,
    w: NormalWord,
    N: int,
    order: GeneratorOrder,
) -> ConformalPolynomial:
    """Intersection composition (f,g)_w: splice f and g at their overlapping
    occurrences in the common multiple w and subtract."""
    for pf in find_occurrences(w, f):
        for pg in find_occurrences(w, g):
            lo = min(pf, pg)
            hi = max(pf + len(f.leading.letters), pg + len(g.leading.letters))
            touches = max(pf, pg) < min(pf + len(f.leading.letters), pg + len(g.leading.letters))
            if lo == 0 and hi == len(w.letters) and touches:
                return splice(w, f, pf, N, order) - splice(w, g, pg, N, order)
    raise ValueError("w is not a common multiple built on overlapping occurrences")
