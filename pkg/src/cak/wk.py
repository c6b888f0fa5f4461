"""Generator symbols, the two standard embeddings, and structure data.

The even generator v and the odd pairs xi_i / del_i are mapped into the model
algebra by two embeddings:

    phi1: v -> v - D,   xi_i -> (v - D) xi_i,  del_i -> del_i
    phi2: v -> v,       xi_i -> v xi_i,        del_i -> del_i

All Lie-level products below are commutator brackets of model elements.
The module also builds the distinguished quadratic elements g_I indexed by
subsets, their closed forms, and the locality tables of both generator
families.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, NamedTuple

from .cend import CendElement, apply_D, bracket, locality, locality_bound
from .grassmann import AnElement, alpha, an_mul, bit, contract, indices_of, mask_from


class GeneratorSymbol(NamedTuple):
    kind: str  # "v" | "xi" | "del"
    index: int = 0

    @property
    def parity(self) -> int:
        return 0 if self.kind == "v" else 1

    def pretty(self) -> str:
        return "v" if self.kind == "v" else f"{self.kind}{self.index}"


V = GeneratorSymbol("v", 0)


def xi(i: int) -> GeneratorSymbol:
    assert i >= 1
    return GeneratorSymbol("xi", i)


def pd(i: int) -> GeneratorSymbol:
    assert i >= 1
    return GeneratorSymbol("del", i)


class EmbeddingId(NamedTuple):
    which: str  # "phi1" | "phi2"
    n: int

    def __str__(self) -> str:
        return self.which


def phi1(n: int) -> EmbeddingId:
    return EmbeddingId("phi1", n)


def phi2(n: int) -> EmbeddingId:
    return EmbeddingId("phi2", n)


def generators(n: int) -> tuple[GeneratorSymbol, ...]:
    assert n >= 0
    return (V,) + tuple(xi(i) for i in range(1, n + 1)) + tuple(pd(i) for i in range(1, n + 1))


def phi(e: EmbeddingId, g: GeneratorSymbol) -> CendElement:
    if g.kind != "v" and not (1 <= g.index <= e.n):
        raise ValueError(f"generator {g.pretty()} out of range for rank {e.n}")
    if e.which == "phi1":
        if g.kind == "v":
            return CendElement.monomial(1, 0, 0, 0, 1) - CendElement.monomial(1, 1, 0, 0, 0)
        if g.kind == "xi":
            b = bit(g.index)
            return CendElement.monomial(1, 0, b, 0, 1) - CendElement.monomial(1, 1, b, 0, 0)
        return CendElement.monomial(1, 0, 0, bit(g.index), 0)
    if e.which == "phi2":
        if g.kind == "v":
            return CendElement.monomial(1, 0, 0, 0, 1)
        if g.kind == "xi":
            return CendElement.monomial(1, 0, bit(g.index), 0, 1)
        return CendElement.monomial(1, 0, 0, bit(g.index), 0)
    raise ValueError(f"unknown embedding {e.which!r}")


def lie(e: EmbeddingId, a: GeneratorSymbol, k: int, b: GeneratorSymbol) -> CendElement:
    """Lie-level product of two generators, evaluated through the embedding."""
    return bracket(phi(e, a), k, phi(e, b))


RelationFn = Callable[[EmbeddingId], CendElement]


def defining_relations(n: int) -> list[tuple[str, RelationFn]]:
    """The presentation relations, as evaluatable defect expressions.

    Each entry maps an embedding to (left side) - (right side); the relation
    holds in an embedding exactly when the defect is the zero element.  The
    vanishing families with unbounded index are truncated at the analytic
    locality bound of the evaluated pair, beyond which products are zero
    identically.
    """
    assert n >= 0
    rng = range(1, n + 1)
    rels: list[tuple[str, RelationFn]] = []

    def high_family(name: str, a: GeneratorSymbol, b: GeneratorSymbol, start: int):
        def fn(e: EmbeddingId, a=a, b=b) -> CendElement:
            out = CendElement.zero()
            top = locality_bound(phi(e, a), phi(e, b)) + 1
            for k in range(start, top):
                out = out + lie(e, a, k, b)
            return out

        rels.append((name, fn))

    for i in rng:
        for j in rng:
            rels.append(
                (
                    f"xi{i}(0)xi{j}+xi{j}(0)xi{i}",
                    lambda e, i=i, j=j: lie(e, xi(i), 0, xi(j)) + lie(e, xi(j), 0, xi(i)),
                )
            )
    for i in rng:
        for j in rng:
            high_family(f"del{i}(m)del{j}, m>=0", pd(i), pd(j), 0)
    for i in rng:
        for j in rng:
            rels.append(
                (
                    f"del{j}(0)xi{i}-delta*v",
                    lambda e, i=i, j=j: lie(e, pd(j), 0, xi(i))
                    - (phi(e, V) if i == j else CendElement.zero()),
                )
            )
    for i in rng:
        rels.append((f"v(0)xi{i}-D.xi{i}", lambda e, i=i: lie(e, V, 0, xi(i)) - apply_D(phi(e, xi(i)))))
        rels.append((f"xi{i}(0)v-D.xi{i}", lambda e, i=i: lie(e, xi(i), 0, V) - apply_D(phi(e, xi(i)))))
        rels.append((f"xi{i}(1)v-2xi{i}", lambda e, i=i: lie(e, xi(i), 1, V) - phi(e, xi(i)).scale(2)))
    for j in rng:
        rels.append((f"del{j}(0)v", lambda e, j=j: lie(e, pd(j), 0, V)))
        rels.append((f"del{j}(1)v-del{j}", lambda e, j=j: lie(e, pd(j), 1, V) - phi(e, pd(j))))
    for i in rng:
        for j in rng:
            rels.append(
                (
                    f"xi{i}(0)xi{j}-(1/2)D.xi{i}(1)xi{j}",
                    lambda e, i=i, j=j: lie(e, xi(i), 0, xi(j))
                    - apply_D(lie(e, xi(i), 1, xi(j))).scale(Fraction(1, 2)),
                )
            )
    rels.append(("v(0)v-D.v", lambda e: lie(e, V, 0, V) - apply_D(phi(e, V))))
    rels.append(("v(1)v-2v", lambda e: lie(e, V, 1, V) - phi(e, V).scale(2)))
    high_family("v(m)v, m>=2", V, V, 2)
    for i in rng:
        for j in rng:
            high_family(f"xi{i}(m)xi{j}, m>=2", xi(i), xi(j), 2)
            high_family(f"xi{i}(m)del{j}, m>=2", xi(i), pd(j), 2)
        high_family(f"v(m)xi{i}, m>=2", V, xi(i), 2)
        high_family(f"v(m)del{i}, m>=2", V, pd(i), 2)
    return rels


def named_element(e: EmbeddingId, I, j: int | None = None) -> CendElement:
    """Image of the basis symbol xi_I (j absent) or xi_I del_j under e.

    Nested right-justified Lie products of the xi chain at index 1, optionally
    closed by a product with del_j, scaled by 2^(1-|I|).
    """
    idx = sorted(set(I))
    if not idx:
        if j is None:
            raise ValueError("empty subset needs an accompanying del index")
        return phi(e, pd(j))
    acc = phi(e, xi(idx[-1]))
    for i in reversed(idx[:-1]):
        acc = bracket(phi(e, xi(i)), 1, acc)
    if j is not None:
        acc = bracket(acc, 1, phi(e, pd(j)))
    return acc.scale(Fraction(1, 2 ** (len(idx) - 1)))


def g_element(e: EmbeddingId, I) -> CendElement:
    """The quadratic element for subset I, built from named basis images."""
    mask = mask_from(I)
    r = mask.bit_count()
    head = phi(e, V) if r == 0 else named_element(e, indices_of(mask))
    out = head.scale(2 - r)
    sign = -1 if r & 1 else 1
    for i in range(1, e.n + 1):
        a = alpha(i, mask)
        if a:  # xi_i xi_I = alpha(i, I) xi_{I + i}
            out = out + apply_D(named_element(e, indices_of(mask | bit(i)), i)).scale(sign * a)
        if mask & bit(i):  # contraction removes i with the same insertion sign
            a2 = alpha(i, mask & ~bit(i))
            out = out + named_element(e, indices_of(mask & ~bit(i)), i).scale(sign * a2)
    return out


def g_closed_form(e: EmbeddingId, I) -> CendElement:
    mask = mask_from(I)
    r = mask.bit_count()
    xiI = AnElement.monomial(mask, 0)
    if e.which == "phi1":
        out = (
            CendElement.from_an(xiI, 0, 1) - CendElement.from_an(xiI, 1, 0)
        ).scale(2 - r)
        sign = -1 if r & 1 else 1
        for i in range(1, e.n + 1):
            di = AnElement.monomial(0, bit(i))
            wedge = an_mul(an_mul(AnElement.monomial(bit(i), 0), xiI), di)
            out = out + CendElement.from_an(wedge, 1, 0).scale(sign)
            out = out + CendElement.from_an(an_mul(contract(i, xiI), di), 0, 0).scale(sign)
        return out
    if e.which == "phi2":
        out = CendElement.from_an(xiI, 0, 1).scale(2 - r)
        for i in range(1, e.n + 1):
            di = AnElement.monomial(0, bit(i))
            word = an_mul(an_mul(di, AnElement.monomial(bit(i), 0)), xiI)
            out = out - CendElement.from_an(word, 1, 0)
            out = out - CendElement.from_an(an_mul(di, contract(i, xiI)), 0, 0)
        return out
    raise ValueError(f"unknown embedding {e.which!r}")


LocalityTable = dict


def locality_table(e: EmbeddingId) -> LocalityTable:
    syms = generators(e.n)
    return {(a, b): locality(phi(e, a), phi(e, b)) for a in syms for b in syms}


def predicted_w_locality(e: EmbeddingId, a: GeneratorSymbol, b: GeneratorSymbol) -> int:
    """Row/column patterns of the two printed generator locality tables."""
    if e.which == "phi1":
        if a.kind == "v":
            return 2
        if a.kind == "xi":
            if b.kind == "xi":
                return 0 if a.index == b.index else 2
            return 2
        # a.kind == "del"
        if b.kind == "del":
            return 0 if a.index == b.index else 1
        return 1
    if e.which == "phi2":
        if a.kind == "v":
            return 1 if b.kind == "del" else 2
        if a.kind == "xi":
            if b.kind == "xi":
                return 0 if a.index == b.index else 2
            return 1 if b.kind == "del" else 2
        # a.kind == "del"
        if b.kind == "del":
            return 0 if a.index == b.index else 1
        return 2
    raise ValueError(f"unknown embedding {e.which!r}")


def predicted_w_table(e: EmbeddingId) -> LocalityTable:
    syms = generators(e.n)
    return {(a, b): predicted_w_locality(e, a, b) for a in syms for b in syms}


def subsets(n: int):
    return [indices_of(m) for m in range(1 << n)]


def k_locality_table(n: int, which: str = "phi1") -> LocalityTable:
    assert n >= 1
    e = EmbeddingId(which, n)
    images = {m: g_element(e, indices_of(m)) for m in range(1 << n)}
    return {
        (indices_of(a), indices_of(b)): locality(images[a], images[b])
        for a in range(1 << n)
        for b in range(1 << n)
    }


def predicted_k_locality(I, J, n: int) -> int:
    """Case formula for the locality of two quadratic elements."""
    mi, mj = mask_from(I), mask_from(J)
    inter = (mi & mj).bit_count()
    union = (mi | mj).bit_count()
    if inter >= 3:
        return 0
    if inter == 2:
        return 1
    if inter == 1:
        return 2
    return 2 if union == n else 3


def predicted_k_table(n: int) -> LocalityTable:
    return {
        (I, J): predicted_k_locality(I, J, n)
        for I in subsets(n)
        for J in subsets(n)
    }


def is_symmetric(table: LocalityTable) -> bool:
    return all(table[(a, b)] == table[(b, a)] for (a, b) in table)
