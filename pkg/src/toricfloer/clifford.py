"""Clifford algebra of a quadratic form over the Novikov ring.

Generators C_1, ..., C_n (0-based in code, 1-based in print) multiply by

    C_j C_i = -C_i C_j + Q_ij * 1   (i < j),      C_i C_i = (1/2) Q_ii * 1,

so the anticommutator convention C_i C_j + C_j C_i = Q_ij holds for all
pairs, including the diagonal.  Basis words C_S are indexed by sorted
index subsets S, with the empty subset playing the unit [L].  Setting
every Q entry to zero degenerates the product to the exterior algebra.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import DimensionMismatch
from .novikov import ONE, ZERO, NovikovElement, monomial
from .potential import QuadraticForm

Subset = tuple[int, ...]
Scalar = Union[int, Fraction, NovikovElement]


def _as_novikov(x: Scalar) -> NovikovElement:
    if isinstance(x, NovikovElement):
        return x
    return monomial(x)


class CliffordElement:
    """Linear combination of basis words C_S with Novikov coefficients."""

    __slots__ = ("n", "_coeffs")

    def __init__(self, n: int, coeffs: Mapping[Subset, Scalar] = ()):
        self.n = n
        clean: dict[Subset, NovikovElement] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for subset, c in items:
            key = tuple(subset)
            if any(not 0 <= i < n for i in key):
                raise DimensionMismatch(f"index subset {key} out of range for n={n}")
            if list(key) != sorted(set(key)):
                raise ValueError(f"index subset {key} must be strictly increasing")
            c = _as_novikov(c)
            if not c:
                continue
            acc = clean.get(key, ZERO) + c
            if acc:
                clean[key] = acc
            else:
                clean.pop(key, None)
        self._coeffs = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "CliffordElement":
        return cls(n)

    @classmethod
    def unit(cls, n: int) -> "CliffordElement":
        """The unit [L], the class of the fiber itself."""
        return cls(n, {(): ONE})

    @classmethod
    def generator(cls, n: int, i: int) -> "CliffordElement":
        return cls(n, {(i,): ONE})

    @classmethod
    def basis_element(cls, n: int, subset: Iterable[int]) -> "CliffordElement":
        return cls(n, {tuple(subset): ONE})

    # -- inspection --------------------------------------------------------

    def coefficient(self, subset: Iterable[int]) -> NovikovElement:
        return self._coeffs.get(tuple(subset), ZERO)

    def items(self):
        return sorted(self._coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def grade(self, d: int) -> "CliffordElement":
        """The part supported on subsets of size d."""
        return CliffordElement(
            self.n, {s: c for s, c in self._coeffs.items() if len(s) == d}
        )

    def grades(self) -> set[int]:
        return {len(s) for s in self._coeffs}

    # -- linear structure ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CliffordElement)
            and self.n == other.n
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.n, tuple(self.items())))

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        if not isinstance(other, CliffordElement):
            return NotImplemented
        if self.n != other.n:
            raise DimensionMismatch(f"cannot add over n={self.n} and n={other.n}")
        out = dict(self._coeffs)
        for s, c in other._coeffs.items():
            out[s] = out.get(s, ZERO) + c
        return CliffordElement(self.n, out)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.n, {s: -c for s, c in self._coeffs.items()})

    def __mul__(self, scalar: Scalar) -> "CliffordElement":
        if isinstance(scalar, CliffordElement):
            raise TypeError(
                "use cl_mul(Q, x, y): the product needs the quadratic form"
            )
        c = _as_novikov(scalar)
        return CliffordElement(
            self.n, {s: v * c for s, v in self._coeffs.items()}
        )

    __rmul__ = __mul__

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        pieces = []
        for subset, coeff in self.items():
            basis = "[L]" if not subset else "C_{" + ",".join(
                str(i + 1) for i in subset
            ) + "}"
            cs = str(coeff)
            if cs == "1":
                pieces.append(basis)
            elif cs == "-1":
                pieces.append(f"-{basis}")
            elif len(coeff.terms) > 1:
                pieces.append(f"({cs})*{basis}")
            else:
                pieces.append(f"{cs}*{basis}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CliffordElement[{self}]"


@lru_cache(maxsize=None)
def _word_normal_form(
    Q: QuadraticForm, word: tuple[int, ...]
) -> tuple[tuple[Subset, NovikovElement], ...]:
    """Rewrite a generator word into the sorted-subset basis."""
    out: dict[Subset, NovikovElement] = {}
    stack: list[tuple[list[int], NovikovElement]] = [(list(word), ONE)]
    while stack:
        w, c = stack.pop()
        pos = next((p for p in range(len(w) - 1) if w[p] >= w[p + 1]), None)
        if pos is None:
            key = tuple(w)
            acc = out.get(key, ZERO) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
            continue
        a, b = w[pos], w[pos + 1]
        rest = w[:pos] + w[pos + 2 :]
        if a == b:
            stack.append((rest, c * Q.entry(a, a) * Fraction(1, 2)))
        else:
            stack.append((w[:pos] + [b, a] + w[pos + 2 :], -c))
            stack.append((rest, c * Q.entry(a, b)))
    return tuple(sorted(out.items()))


def cl_mul(Q: QuadraticForm, x: CliffordElement, y: CliffordElement) -> CliffordElement:
    """Product in Cl(Q); with Q = 0 this is the exterior (wedge) product."""
    if not (Q.n == x.n == y.n):
        raise DimensionMismatch(
            f"dimension mismatch: Q has n={Q.n}, factors n={x.n}, n={y.n}"
        )
    out: dict[Subset, NovikovElement] = {}
    for sx, cx in x._coeffs.items():
        for sy, cy in y._coeffs.items():
            c = cx * cy
            for subset, unit_coeff in _word_normal_form(Q, sx + sy):
                out[subset] = out.get(subset, ZERO) + c * unit_coeff
    return CliffordElement(x.n, out)


def cl_grade(x: CliffordElement, d: int) -> CliffordElement:
    return x.grade(d)
