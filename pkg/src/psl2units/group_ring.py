"""Sparse arithmetic in the integral group ring Z[PSL(2,q)].

Elements are coefficient maps from canonical group elements to nonzero
Python integers, so the (1 - k^m)/n coefficients of Bass units never
overflow.  Construction of Bass units, of the two bicyclic-unit shapes,
and conjugation are provided; nothing representation-theoretic lives
here.
"""

from __future__ import annotations

from .errors import InvalidSpec
from .projective import Element, PSL2


class GroupRingElement:
    """Finitely supported integer combination of group elements."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: PSL2, coeffs: dict[Element, int] | None = None):
        self.group = group
        self.coeffs = {s: c for s, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def zero(cls, group: PSL2) -> "GroupRingElement":
        return cls(group)

    @classmethod
    def one(cls, group: PSL2) -> "GroupRingElement":
        return cls(group, {group.normalize(group.identity): 1})

    @classmethod
    def from_element(cls, group: PSL2, s: Element, c: int = 1) -> "GroupRingElement":
        return cls(group, {group.normalize(s): c})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == (GroupRingElement.one(self.group) * other)
        return isinstance(other, GroupRingElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = GroupRingElement.one(self.group) * other
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0) + c
        return GroupRingElement(self.group, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return GroupRingElement(self.group, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GroupRingElement.one(self.group) * other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, {s: c * other for s, c in self.coeffs.items()})
        compose = self.group.compose
        out: dict[Element, int] = {}
        for s, cs in self.coeffs.items():
            for t, ct in other.coeffs.items():
                st = compose(s, t)
                out[st] = out.get(st, 0) + cs * ct
        return GroupRingElement(self.group, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in ZG")
        result = GroupRingElement.one(self.group)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def support(self):
        return set(self.coeffs)

    def items_sorted(self):
        """Debug rendering order: sorted (matrix tuple, coefficient) pairs."""
        return sorted(self.coeffs.items())

    def __repr__(self):
        terms = ", ".join(f"{m}: {c}" for m, c in self.items_sorted())
        return f"GroupRingElement({{{terms}}})"


def hat(group: PSL2, g: Element) -> GroupRingElement:
    """1 + g + ... + g^(n-1) for n the order of g."""
    n = group.element_order(g)
    coeffs: dict[Element, int] = {}
    cur = group.normalize(group.identity)
    for _ in range(n):
        coeffs[cur] = coeffs.get(cur, 0) + 1
        cur = group.compose(cur, g)
    return GroupRingElement(group, coeffs)


def bass_unit(group: PSL2, base: Element, k: int, m: int) -> GroupRingElement:
    """The Bass unit (1 + g + ... + g^(k-1))^m + ((1 - k^m)/n) ghat."""
    n = group.element_order(base)
    if pow(k, m, n) != 1:
        raise InvalidSpec(f"k^m = {k}^{m} is not 1 mod {n}")
    partial: dict[Element, int] = {}
    cur = group.normalize(group.identity)
    for _ in range(k):
        partial[cur] = partial.get(cur, 0) + 1
        cur = group.compose(cur, base)
    geometric = GroupRingElement(group, partial) ** m
    correction = (1 - k ** m) // n
    return geometric + hat(group, base) * correction


def bicyclic_right(group: PSL2, g: Element, h: Element) -> GroupRingElement:
    """1 + (1 - g) h ghat; trivial exactly when h normalizes <g>."""
    one = GroupRingElement.one(group)
    g_el = GroupRingElement.from_element(group, g)
    h_el = GroupRingElement.from_element(group, h)
    return one + (one - g_el) * h_el * hat(group, g)


def bicyclic_left(group: PSL2, g: Element, h: Element) -> GroupRingElement:
    """1 + ghat h (1 - g); mirror of bicyclic_right."""
    one = GroupRingElement.one(group)
    g_el = GroupRingElement.from_element(group, g)
    h_el = GroupRingElement.from_element(group, h)
    return one + hat(group, g) * h_el * (one - g_el)


def conjugate_unit(u: GroupRingElement, h: Element) -> GroupRingElement:
    """h u h^-1, support-wise."""
    group = u.group
    out: dict[Element, int] = {}
    for s, c in u.coeffs.items():
        out[group.conj_unit(s, h)] = c
    return GroupRingElement(group, out)
