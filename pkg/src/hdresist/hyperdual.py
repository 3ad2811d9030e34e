"""Hyper-dual scalars ``a + a1*e + a2*e* + a3*e*e*`` with ``e**2 = e*(**2) = 0``.

Evaluating ``f(x + d*(e + e*))`` gives ``f(x)`` in the real slot, the
directional derivative ``f'(x) d`` in both the ``e`` and ``e*`` slots and the
second directional derivative ``d^T f''(x) d`` in the ``e*e*`` slot.

Components are stored as given, so ``fractions.Fraction`` inputs give exact
rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

from .errors import NonInvertible

INV_TOL = 1e-12

SLOTS = ("re", "eps", "eps_star", "eps_eps_star")


@dataclass(frozen=True)
class HyperDual:
    re: Real = 0.0
    eps: Real = 0.0
    eps_star: Real = 0.0
    eps_eps_star: Real = 0.0

    @classmethod
    def variable(cls, value, direction=1.0):
        """Seed ``value + direction*(e + e*)``."""
        return cls(value, direction, direction, 0 * direction)

    @classmethod
    def coerce(cls, other):
        if isinstance(other, HyperDual):
            return other
        if isinstance(other, Real):
            return cls(other, 0 * other, 0 * other, 0 * other)
        return NotImplemented

    def as_tuple(self):
        return (self.re, self.eps, self.eps_star, self.eps_eps_star)

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other):
        other = HyperDual.coerce(other)
        if other is NotImplemented:
            return other
        return hd_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual(-self.re, -self.eps, -self.eps_star, -self.eps_eps_star)

    def __sub__(self, other):
        other = HyperDual.coerce(other)
        if other is NotImplemented:
            return other
        return hd_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = HyperDual.coerce(other)
        if other is NotImplemented:
            return other
        return hd_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = HyperDual.coerce(other)
        if other is NotImplemented:
            return other
        return hd_mul(self, hd_inv(other))

    def __rtruediv__(self, other):
        return hd_mul(HyperDual.coerce(other), hd_inv(self))

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return hd_inv(self) ** (-k)
        out = HyperDual.coerce(1 + 0 * self.re)
        base = self
        while k:
            if k & 1:
                out = hd_mul(out, base)
            base = hd_mul(base, base)
            k >>= 1
        return out


def hd_add(x: HyperDual, y: HyperDual) -> HyperDual:
    return HyperDual(
        x.re + y.re,
        x.eps + y.eps,
        x.eps_star + y.eps_star,
        x.eps_eps_star + y.eps_eps_star,
    )


def hd_mul(x: HyperDual, y: HyperDual) -> HyperDual:
    a, a1, a2, a3 = x.as_tuple()
    b, b1, b2, b3 = y.as_tuple()
    return HyperDual(
        a * b,
        a * b1 + a1 * b,
        a * b2 + a2 * b,
        a * b3 + a1 * b2 + a2 * b1 + a3 * b,
    )


def hd_inv(x: HyperDual) -> HyperDual:
    """Multiplicative inverse; requires ``|x.re| > INV_TOL``."""
    a, a1, a2, a3 = x.as_tuple()
    if abs(a) <= INV_TOL:
        raise NonInvertible(f"hyper-dual number with real part {a!r} has no inverse")
    inv = 1 / a
    inv2 = inv * inv
    return HyperDual(inv, -a1 * inv2, -a2 * inv2, 2 * a1 * a2 * inv2 * inv - a3 * inv2)


def hd_coeff(x: HyperDual, slot: str) -> Real:
    if slot not in SLOTS:
        raise KeyError(f"unknown slot {slot!r}; expected one of {SLOTS}")
    return getattr(x, slot)
