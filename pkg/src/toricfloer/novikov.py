"""Exact arithmetic in a universal Novikov ring.

Elements are finite formal sums  sum_i a_i * T^{t_i} * q^{m_i}  with
rational coefficients a_i, rational T-exponents t_i and integer
q-exponents m_i.  The T-exponent records symplectic area of a
holomorphic disc, the q-exponent half its Maslov index.  Everything is
kept exact (fractions.Fraction) so that zero tests, which downstream
decide whether a fiber is balanced, never depend on floating point.

Inverses are geometric series truncated at a caller-supplied T-exponent
cutoff; the remainder a * invert(a) - 1 has valuation strictly above the
cutoff.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]

#: default truncation level used when the library inverts internally
DEFAULT_CUTOFF = Fraction(10)


def _frac(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _fmt_exp(x) -> str:
    s = str(x)
    if len(s) == 1 and s.isdigit():
        return s
    return "{" + s + "}"


class NovikovElement:
    """A finite sum of terms (coeff, t_exp, q_exp), kept normalized.

    Terms are stored sorted by (t_exp, q_exp) with like terms combined
    and zero coefficients dropped, so equality is plain tuple equality.
    Instances are immutable and hashable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Rational, Rational, int]] = ()):
        combined: dict[tuple[Fraction, int], Fraction] = {}
        for coeff, t_exp, q_exp in terms:
            if not isinstance(q_exp, int):
                raise TypeError("q-exponent must be an integer")
            key = (_frac(t_exp), q_exp)
            combined[key] = combined.get(key, Fraction(0)) + _frac(coeff)
        self._terms = tuple(
            (c, t, q) for (t, q), c in sorted(combined.items()) if c != 0
        )

    @property
    def terms(self) -> tuple[tuple[Fraction, Fraction, int], ...]:
        """Normalized terms as (coeff, t_exp, q_exp), sorted by (t_exp, q_exp)."""
        return self._terms

    # -- ring structure ------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, NovikovElement):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == NovikovElement([(other, 0, 0)])
        return NotImplemented

    def __hash__(self):
        return hash(self._terms)

    def __add__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return NovikovElement(self._terms + other._terms)

    __radd__ = __add__

    def __sub__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "NovikovElement":
        out = NovikovElement()
        out._terms = tuple((-c, t, q) for c, t, q in self._terms)
        return out

    def __mul__(self, other) -> "NovikovElement":
        if isinstance(other, (int, Fraction)):
            s = _frac(other)
            if s == 0:
                return ZERO
            out = NovikovElement()
            out._terms = tuple((c * s, t, q) for c, t, q in self._terms)
            return out
        if not isinstance(other, NovikovElement):
            return NotImplemented
        prods = []
        for c1, t1, q1 in self._terms:
            for c2, t2, q2 in other._terms:
                prods.append((c1 * c2, t1 + t2, q1 + q2))
        return NovikovElement(prods)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "NovikovElement":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are defined")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    @staticmethod
    def _coerce(other):
        if isinstance(other, NovikovElement):
            return other
        if isinstance(other, (int, Fraction)):
            return NovikovElement([(other, 0, 0)])
        return NotImplemented

    # -- valuation and truncation ---------------------------------------

    def valuation(self):
        """Least T-exponent of a nonzero term; +infinity for the zero element."""
        if not self._terms:
            return math.inf
        return self._terms[0][1]

    def truncate(self, cutoff: Rational) -> "NovikovElement":
        """Drop every term whose T-exponent exceeds cutoff."""
        cutoff = _frac(cutoff)
        out = NovikovElement()
        out._terms = tuple(term for term in self._terms if term[1] <= cutoff)
        return out

    def invert(self, cutoff: Rational = DEFAULT_CUTOFF) -> "NovikovElement":
        """Inverse modulo terms of T-exponent above cutoff.

        Writes a = c*T^t*q^m * (1 + u) with val(u) > 0 and sums the
        geometric series in u until every omitted term has T-exponent
        beyond the cutoff, so a * invert(a) - 1 has valuation > cutoff.

        Raises ZeroDivisionError on the zero element and ArithmeticError
        when several terms share the minimal T-exponent (the series then
        never leaves valuation zero and no T-finite inverse exists).
        """
        if not self._terms:
            raise ZeroDivisionError("inverse of zero in the Novikov ring")
        cutoff = _frac(cutoff)
        c0, t0, q0 = self._terms[0]
        if len(self._terms) > 1 and self._terms[1][1] == t0:
            raise ArithmeticError(
                "inverse needs a unique term of least T-exponent; "
                f"got several at T^{t0}"
            )
        lead_inv = NovikovElement([(Fraction(1) / c0, -t0, -q0)])
        u = lead_inv * NovikovElement(self._terms[1:])
        acc = ONE
        power = ONE
        while True:
            power = (power * -u).truncate(cutoff)
            if not power:
                break
            acc = acc + power
        return lead_inv * acc

    # -- numeric substitution -------------------------------------------

    def numeric(self) -> float:
        """Evaluate with T^e -> exp(-e) and q -> 1."""
        return sum(float(c) * math.exp(-float(t)) for c, t, q in self._terms)

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for coeff, t, q in self._terms:
            tpart = "" if t == 0 else ("T" if t == 1 else f"T^{_fmt_exp(t)}")
            qpart = "" if q == 0 else ("q" if q == 1 else f"q^{_fmt_exp(q)}")
            core = "*".join(p for p in (tpart, qpart) if p)
            mag = abs(coeff)
            if core and mag == 1:
                body = core
            elif core:
                body = f"{mag}*{core}"
            else:
                body = str(mag)
            pieces.append((coeff < 0, body))
        first_neg, first = pieces[0]
        out = ("-" if first_neg else "") + first
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"NovikovElement[{self}]"


def monomial(coeff: Rational = 1, t: Rational = 0, q: int = 0) -> NovikovElement:
    """Single term coeff * T^t * q^q."""
    return NovikovElement([(coeff, t, q)])


ZERO = NovikovElement()
ONE = monomial(1)
