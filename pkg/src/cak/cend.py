"""The model algebra k[D] (x) A_n[v] with its family of n-th products.

Elements are rational combinations of  D^d (x) m v^p  where m is a canonical
Grassmann-operator monomial; keys are (d, xi_mask, del_mask, vpow).  The n-th
product is defined on D-free terms by

    (1 (x) a v^p) o_n (1 (x) b v^q) = 1 (x) a b * d^n/dv^n(v^q) * v^p

and extended to all terms by the two derivation rules

    (D x) o_n y = -n * (x o_{n-1} y),
    x o_n (D y) = D(x o_n y) + n * (x o_{n-1} y).

All coefficient arithmetic is exact (Fraction).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .grassmann import AnElement, GrassmannMonomial, an_mul

TermKey = tuple[int, int, int, int]  # (dpow, xi_mask, del_mask, vpow)


def falling(x: int, k: int) -> int:
    assert k >= 0
    out = 1
    for j in range(k):
        out *= x - j
    return out


class CendElement:
    """Sparse element of the model algebra."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[TermKey, Fraction] | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "CendElement":
        return cls()

    @classmethod
    def monomial(
        cls,
        coeff: Fraction | int = 1,
        dpow: int = 0,
        xi_mask: int = 0,
        del_mask: int = 0,
        vpow: int = 0,
    ) -> "CendElement":
        assert dpow >= 0 and vpow >= 0
        return cls({(dpow, xi_mask, del_mask, vpow): Fraction(coeff)})

    @classmethod
    def one(cls) -> "CendElement":
        return cls.monomial()

    @classmethod
    def from_an(cls, a: AnElement, dpow: int = 0, vpow: int = 0) -> "CendElement":
        return cls({(dpow, m.xi_mask, m.del_mask, vpow): c for m, c in a.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CendElement) and self.terms == other.terms

    def __hash__(self):  # pragma: no cover
        return hash(frozenset(self.terms.items()))

    def items(self) -> Iterator[tuple[TermKey, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __add__(self, other: "CendElement") -> "CendElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return CendElement(out)

    def __sub__(self, other: "CendElement") -> "CendElement":
        return self + (-other)

    def __neg__(self) -> "CendElement":
        return CendElement({k: -c for k, c in self.terms.items()})

    def scale(self, c: Fraction | int) -> "CendElement":
        c = Fraction(c)
        return CendElement({k: c * x for k, x in self.terms.items()})

    def mul_v(self, times: int = 1) -> "CendElement":
        return CendElement({(d, xm, dm, v + times): c for (d, xm, dm, v), c in self.terms.items()})

    def parity(self) -> int | None:
        ps = {(xm.bit_count() + dm.bit_count()) & 1 for (_, xm, dm, _) in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def parity_split(self) -> tuple["CendElement", "CendElement"]:
        even, odd = {}, {}
        for key, c in self.terms.items():
            (_, xm, dm, _) = key
            (odd if (xm.bit_count() + dm.bit_count()) & 1 else even)[key] = c
        return CendElement(even), CendElement(odd)

    def max_dpow(self) -> int:
        return max((d for (d, _, _, _) in self.terms), default=0)

    def max_vpow(self) -> int:
        return max((v for (_, _, _, v) in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (d, xm, dm, v), c in self.items():
            mono = GrassmannMonomial(xm, dm).pretty()
            head = f"D^{d} " if d else ""
            tail = f" v^{v}" if v else ""
            bits.append(f"{c}*{head}{mono}{tail}")
        return " + ".join(bits)


def apply_D(x: CendElement, times: int = 1) -> CendElement:
    assert times >= 0
    return CendElement({(d + times, xm, dm, v): c for (d, xm, dm, v), c in x.terms.items()})


def _term_nproduct(left: TermKey, right: TermKey, n: int) -> CendElement:
    d1, xm1, dm1, v1 = left
    d2, xm2, dm2, v2 = right
    if d1 > 0:
        if n == 0:
            return CendElement.zero()
        return _term_nproduct((d1 - 1, xm1, dm1, v1), right, n - 1).scale(-n)
    if d2 > 0:
        peeled = (d2 - 1, xm2, dm2, v2)
        out = apply_D(_term_nproduct(left, peeled, n))
        if n > 0:
            out = out + _term_nproduct(left, peeled, n - 1).scale(n)
        return out
    coeff = falling(v2, n)
    if coeff == 0:
        return CendElement.zero()
    prod = an_mul(AnElement.monomial(xm1, dm1), AnElement.monomial(xm2, dm2))
    return CendElement.from_an(prod, 0, v1 + v2 - n).scale(coeff)


def nproduct(x: CendElement, n: int, y: CendElement) -> CendElement:
    """The n-th conformal product; only n >= 0 is defined here."""
    if n < 0:
        raise ValueError("n-th products are only defined for n >= 0")
    out = CendElement.zero()
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            out = out + _term_nproduct(k1, k2, n).scale(c1 * c2)
    return out


def locality_bound(x: CendElement, y: CendElement) -> int:
    """An a-priori index past which every product of x and y vanishes."""
    if x.is_zero() or y.is_zero():
        return 0
    return x.max_dpow() + y.max_dpow() + x.max_vpow() + y.max_vpow() + 1


def locality(x: CendElement, y: CendElement) -> int:
    """Least N with x o_n y = 0 for every n >= N."""
    bound = locality_bound(x, y)
    out = 0
    for n in range(bound):
        if not nproduct(x, n, y).is_zero():
            out = n + 1
    return out


def brace(x: CendElement, n: int, y: CendElement) -> CendElement:
    """The auxiliary series sum_s ((-1)^(n+s)/s!) D^s (x o_{n+s} y)."""
    bound = locality_bound(x, y)
    out = CendElement.zero()
    s = 0
    while n + s < bound:
        sign = -1 if (n + s) & 1 else 1
        term = nproduct(x, n + s, y)
        if not term.is_zero():
            out = out + apply_D(term, s).scale(Fraction(sign, math.factorial(s)))
        s += 1
    return out


def _sign_pair(x: CendElement, y: CendElement) -> int:
    px, py = x.parity(), y.parity()
    assert px is not None and py is not None, "parity-homogeneous arguments required"
    return -1 if (px and py) else 1


def bracket(x: CendElement, n: int, y: CendElement) -> CendElement:
    """Conformal commutator x o_n y -+ {y o_n x}; bilinear over parity parts."""
    out = CendElement.zero()
    for xp in x.parity_split():
        if xp.is_zero():
            continue
        for yp in y.parity_split():
            if yp.is_zero():
                continue
            out = out + nproduct(xp, n, yp) - brace(yp, n, xp).scale(_sign_pair(xp, yp))
    return out


class IndexedSum:
    """Finite family of elements indexed by integers (a coefficient operator)."""

    __slots__ = ("components",)

    def __init__(self, components: dict[int, CendElement] | None = None):
        self.components = {m: e for m, e in (components or {}).items() if not e.is_zero()}

    def __add__(self, other: "IndexedSum") -> "IndexedSum":
        out = dict(self.components)
        for m, e in other.components.items():
            out[m] = out.get(m, CendElement.zero()) + e
        return IndexedSum(out)

    def __sub__(self, other: "IndexedSum") -> "IndexedSum":
        return self + other.scale(-1)

    def scale(self, c: Fraction | int) -> "IndexedSum":
        return IndexedSum({m: e.scale(c) for m, e in self.components.items()})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IndexedSum) and self.components == other.components

    def __repr__(self) -> str:
        if not self.components:
            return "0"
        return " + ".join(f"[{m}] {e!r}" for m, e in sorted(self.components.items()))


def coeff_product(x: CendElement, n: int, y: CendElement, m: int) -> IndexedSum:
    """Coefficient-algebra product a(n) b(m) expanded over shifted indices."""
    if n < 0:
        raise ValueError("coefficient products are only supported for n >= 0")
    out: dict[int, CendElement] = {}
    for s in range(n + 1):
        e = nproduct(x, n - s, y).scale(math.comb(n, s))
        if not e.is_zero():
            out[m + s] = out.get(m + s, CendElement.zero()) + e
    return IndexedSum(out)


def coeff_product_sum_left(xs: IndexedSum, y: CendElement, m: int) -> IndexedSum:
    """Product (sum_k e_k(k)) . y(m) in the coefficient algebra."""
    out = IndexedSum()
    for k, e in xs.components.items():
        if k < 0:
            raise ValueError("coefficient products are only supported for n >= 0")
        out = out + coeff_product(e, k, y, m)
    return out


def coeff_product_sum_right(x: CendElement, n: int, ys: IndexedSum) -> IndexedSum:
    """Product x(n) . (sum_k e_k(k)) in the coefficient algebra."""
    out = IndexedSum()
    for k, e in ys.components.items():
        out = out + coeff_product(x, n, e, k)
    return out


def _bracket_series(x: CendElement, n: int, y: CendElement) -> CendElement:
    bound = locality_bound(x, y)
    out = CendElement.zero()
    s = 0
    while n + s < bound:
        sign = -1 if (n + s) & 1 else 1
        term = bracket(x, n + s, y)
        if not term.is_zero():
            out = out + apply_D(term, s).scale(Fraction(sign, math.factorial(s)))
        s += 1
    return out


def identity_defect(
    name: str,
    x: CendElement,
    y: CendElement,
    z: CendElement | None = None,
    n: int = 0,
    m: int = 0,
) -> CendElement:
    """Left side minus right side of a named structural identity.

    Returns the zero element exactly when the identity holds for the given
    arguments.  Supported names: c2, c3, assoc-l, assoc-r, anticomm, jacobi.
    """
    if name == "c2":
        out = nproduct(apply_D(x), n, y)
        if n > 0:
            out = out + nproduct(x, n - 1, y).scale(n)
        return out
    if name == "c3":
        out = nproduct(x, n, apply_D(y)) - apply_D(nproduct(x, n, y))
        if n > 0:
            out = out - nproduct(x, n - 1, y).scale(n)
        return out
    if name == "assoc-l":
        assert z is not None
        out = nproduct(nproduct(x, n, y), m, z)
        for s in range(n + 1):
            sign = -1 if s & 1 else 1
            out = out - nproduct(x, n - s, nproduct(y, m + s, z)).scale(sign * math.comb(n, s))
        return out
    if name == "assoc-r":
        assert z is not None
        out = nproduct(x, n, nproduct(y, m, z))
        for s in range(n + 1):
            out = out - nproduct(nproduct(x, n - s, y), m + s, z).scale(math.comb(n, s))
        return out
    if name == "anticomm":
        sign = _sign_pair(x, y)
        return bracket(x, n, y) + _bracket_series(y, n, x).scale(sign)
    if name == "jacobi":
        assert z is not None
        sign = _sign_pair(x, y)
        out = bracket(x, n, bracket(y, m, z)) - bracket(y, m, bracket(x, n, z)).scale(sign)
        for s in range(n + 1):
            out = out - bracket(bracket(x, n - s, y), m + s, z).scale(math.comb(n, s))
        return out
    raise ValueError(f"unknown identity {name!r}")


def verify_identity(
    name: str,
    x: CendElement,
    y: CendElement,
    z: CendElement | None = None,
    n: int = 0,
    m: int = 0,
) -> bool:
    return identity_defect(name, x, y, z, n, m).is_zero()
