"""Exact arithmetic in the algebra generated by n wedge/contraction pairs.

Generators are xi_1..xi_n (odd, square zero) and del_1..del_n (odd, square
zero) subject to the mixed relation  del_i xi_j + xi_j del_i = delta_ij.
Every element is a rational combination of normally ordered monomials
xi_I del_J with both index sets strictly ascending; monomials are stored as
a pair of bitmasks (bit i-1 <-> index i).  Acting on the exterior algebra
with basis {xi_K} this realises the full matrix algebra of size 2^n.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

Scalar = Fraction


def bit(i: int) -> int:
    assert i >= 1
    return 1 << (i - 1)


def mask_from(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        assert i >= 1
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def alpha(i: int, mask: int) -> int:
    """Sign picked up when xi_i is inserted into the ascending product xi_I.

    Zero when i already occurs in I, otherwise (-1)^(number of j in I with j < i).
    """
    b = bit(i)
    if mask & b:
        return 0
    below = (mask & (b - 1)).bit_count()
    return -1 if below & 1 else 1


class GrassmannMonomial(NamedTuple):
    xi_mask: int
    del_mask: int

    @property
    def degree(self) -> int:
        return self.xi_mask.bit_count() + self.del_mask.bit_count()

    @property
    def parity(self) -> int:
        return self.degree & 1

    def pretty(self) -> str:
        parts = [f"xi{i}" for i in indices_of(self.xi_mask)]
        parts += [f"del{i}" for i in indices_of(self.del_mask)]
        return " ".join(parts) if parts else "1"


MONOMIAL_ONE = GrassmannMonomial(0, 0)


class AnElement:
    """Sparse rational combination of normally ordered monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[GrassmannMonomial, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "AnElement":
        return cls()

    @classmethod
    def unit(cls) -> "AnElement":
        return cls({MONOMIAL_ONE: Fraction(1)})

    @classmethod
    def monomial(cls, xi_mask: int, del_mask: int, coeff: Fraction | int = 1) -> "AnElement":
        return cls({GrassmannMonomial(xi_mask, del_mask): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AnElement) and self.terms == other.terms

    def __hash__(self):  # pragma: no cover - dict use only via terms
        return hash(frozenset(self.terms.items()))

    def items(self) -> Iterator[tuple[GrassmannMonomial, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __add__(self, other: "AnElement") -> "AnElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return AnElement(out)

    def __sub__(self, other: "AnElement") -> "AnElement":
        return self + (-other)

    def __neg__(self) -> "AnElement":
        return AnElement({m: -c for m, c in self.terms.items()})

    def scale(self, c: Fraction | int) -> "AnElement":
        c = Fraction(c)
        return AnElement({m: c * x for m, x in self.terms.items()})

    def __mul__(self, other: "AnElement") -> "AnElement":
        return an_mul(self, other)

    def parity(self) -> int | None:
        """0 or 1 when homogeneous, None for mixed or zero."""
        ps = {m.parity for m in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m, c in self.items():
            bits.append(f"{c}*{m.pretty()}")
        return " + ".join(bits)


def _mul_del(a: AnElement, i: int) -> AnElement:
    # (xi_A del_B) del_i : zero if i in B, else insert with the sign of moving
    # del_i left past the del_j with j > i.
    b = bit(i)
    out: dict[GrassmannMonomial, Fraction] = {}
    for (xm, dm), c in a.terms.items():
        if dm & b:
            continue
        above = (dm >> i).bit_count()
        s = -c if above & 1 else c
        key = GrassmannMonomial(xm, dm | b)
        out[key] = out.get(key, Fraction(0)) + s
    return AnElement(out)


def _mul_xi(a: AnElement, i: int) -> AnElement:
    # (xi_A del_B) xi_i: the xi crosses the whole del block (sign (-1)^|B|,
    # then insertion into xi_A) plus the contraction term when i lies in B.
    b = bit(i)
    out: dict[GrassmannMonomial, Fraction] = {}
    for (xm, dm), c in a.terms.items():
        if not (xm & b):
            crossings = (xm >> i).bit_count() + dm.bit_count()
            s_cross = -1 if crossings & 1 else 1
            key = GrassmannMonomial(xm | b, dm)
            out[key] = out.get(key, Fraction(0)) + s_cross * c
        if dm & b:
            above = (dm >> i).bit_count()
            s = -c if above & 1 else c
            key = GrassmannMonomial(xm, dm & ~b)
            out[key] = out.get(key, Fraction(0)) + s
    return AnElement(out)


def mul_generator(a: AnElement, kind: str, index: int) -> AnElement:
    if kind == "xi":
        return _mul_xi(a, index)
    if kind == "del":
        return _mul_del(a, index)
    raise ValueError(f"unknown generator kind {kind!r}")


def normal_order(word: Sequence[tuple[str, int]]) -> AnElement:
    """Rewrite an arbitrary product of xi/del generators in the canonical basis."""
    acc = AnElement.unit()
    for kind, index in word:
        acc = mul_generator(acc, kind, index)
    return acc


def an_mul(a: AnElement, b: AnElement) -> AnElement:
    out = AnElement.zero()
    for (xm, dm), c in b.terms.items():
        word = [("xi", i) for i in indices_of(xm)] + [("del", i) for i in indices_of(dm)]
        part = a
        for kind, index in word:
            part = mul_generator(part, kind, index)
        out = out + part.scale(c)
    return out


def contract(i: int, a: AnElement) -> AnElement:
    """Apply the contraction operator del_i to a pure wedge element."""
    out: dict[GrassmannMonomial, Fraction] = {}
    for (xm, dm), c in a.terms.items():
        assert dm == 0, "contract expects an element of the exterior algebra"
        b = bit(i)
        if not (xm & b):
            continue
        s = alpha(i, xm & ~b)
        key = GrassmannMonomial(xm & ~b, 0)
        out[key] = out.get(key, Fraction(0)) + s * c
    return AnElement(out)


def wedge_action(a: AnElement, xm: int) -> AnElement:
    """Apply an operator element to the basis wedge xi_K (K given as a mask)."""
    res = an_mul(a, AnElement.monomial(xm, 0))
    # On the exterior module every del annihilates the vacuum on the right,
    # so only the del-free part of the product survives.
    return AnElement({m: c for m, c in res.terms.items() if m.del_mask == 0})


def lambda_matrix(a: AnElement, n: int) -> list[list[Fraction]]:
    """Matrix of a on the exterior algebra, basis ordered by subset bitmask."""
    dim = 1 << n
    mat = [[Fraction(0)] * dim for _ in range(dim)]
    for col in range(dim):
        img = wedge_action(a, col)
        for m, c in img.terms.items():
            assert m.xi_mask < dim, "element uses generators beyond rank n"
            mat[m.xi_mask][col] = c
    return mat
