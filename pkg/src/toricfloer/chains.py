"""Chain-level correction of classical cycles to Floer cycles.

The model is the free graded-commutative algebra over the Novikov ring
on three families of symbols attached to a fiber:

* l_1 .. l_n   the coordinate one-cycles of the fiber torus (odd),
* d_1 .. d_N   the basic disc boundaries (odd),
* Q_1 .. Q_l   one correction two-chain per class of equal-area facets
               (even), one class per distinct disc area.

The only relation carried by the differential is boundary(Q_t) =
-(sum of d_j over the facets j in class t), which exists exactly when
the fiber is balanced.  Everything else is free, so an identity that
normalizes to zero here holds for every admissible choice of the
correction chains.

corrected_cycle adds to a classical cycle P the tower of correction
terms (prod_{t in S} Q_t) * P * T^{area(S)} q^{|S|} over all subsets S
of the classes.  The deformed differential applied to it telescopes
down to terms that each contain a factor (sum_{j in class t} d_j) * Q_t.
Such a factor is minus half the boundary of the degenerate square
Q_t * Q_t, a chain whose image in the torus has lower dimension than the
chain itself, so it vanishes as a current together with its boundary.
The verifier therefore reduces the difference modulo these degenerate
pairs and reports how many residual terms needed the rule, separating
the ones whose symbolic dimension already exceeds the torus dimension n
(those die as currents for dimension reasons alone).  Over-dimensional
correction terms are kept in every expression, never dropped, and the
counts are surfaced so a report can flag them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import DimensionMismatch, NotBalanced
from .novikov import ONE, ZERO, NovikovElement, monomial
from .toric import Fiber, ToricFano, area_partition, disc_areas, is_balanced

OddGen = tuple[str, int]  # ("d", j) or ("l", i); "d" sorts before "l"
Monomial = tuple[tuple[int, ...], tuple[OddGen, ...]]  # (even Q multiset, odds)
Scalar = Union[int, Fraction, NovikovElement]

Dims = tuple[int, int, int]  # (n, N, number of area classes)


def _as_novikov(x: Scalar) -> NovikovElement:
    if isinstance(x, NovikovElement):
        return x
    return monomial(x)


def _merge_odds(a: tuple[OddGen, ...], b: tuple[OddGen, ...]):
    """Sorted merge with the sign of the shuffle; None on a repeated odd."""
    i = j = inversions = 0
    out: list[OddGen] = []
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            inversions += len(a) - i
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions % 2 else 1), tuple(out)


def _insert_odd(odds: tuple[OddGen, ...], g: OddGen):
    """Left-multiply by one odd generator: sign and the new tuple."""
    if g in odds:
        return None
    before = sum(1 for o in odds if o < g)
    merged = tuple(sorted(odds + (g,)))
    return (-1 if before % 2 else 1), merged


def _degree(mono: Monomial) -> int:
    evens, odds = mono
    return len(odds) + 2 * len(evens)


class ChainExpression:
    """A Novikov-linear combination of monomials in the chain symbols."""

    __slots__ = ("dims", "_coeffs")

    def __init__(self, dims: Dims, coeffs: Mapping[Monomial, Scalar] = ()):
        self.dims = dims
        n, N, l = dims
        clean: dict[Monomial, NovikovElement] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for mono, c in items:
            evens, odds = mono
            evens = tuple(sorted(evens))
            if any(not 0 <= t < l for t in evens):
                raise DimensionMismatch(f"correction index out of range in {mono}")
            for kind, i in odds:
                limit = N if kind == "d" else n
                if kind not in ("d", "l") or not 0 <= i < limit:
                    raise DimensionMismatch(f"bad odd generator {(kind, i)}")
            if list(odds) != sorted(set(odds)):
                raise ValueError(f"odd generators must be strictly sorted in {mono}")
            c = _as_novikov(c)
            if not c:
                continue
            key = (evens, odds)
            acc = clean.get(key, ZERO) + c
            if acc:
                clean[key] = acc
            else:
                clean.pop(key, None)
        self._coeffs = clean

    # -- linear structure --------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainExpression)
            and self.dims == other.dims
            and self._coeffs == other._coeffs
        )

    def __add__(self, other: "ChainExpression") -> "ChainExpression":
        if not isinstance(other, ChainExpression):
            return NotImplemented
        if self.dims != other.dims:
            raise DimensionMismatch("expressions live over different fibers")
        out = dict(self._coeffs)
        for m, c in other._coeffs.items():
            out[m] = out.get(m, ZERO) + c
        return ChainExpression(self.dims, out)

    def __sub__(self, other: "ChainExpression") -> "ChainExpression":
        return self + (-other)

    def __neg__(self) -> "ChainExpression":
        return ChainExpression(self.dims, {m: -c for m, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, ChainExpression):
            if self.dims != other.dims:
                raise DimensionMismatch("expressions live over different fibers")
            out: dict[Monomial, NovikovElement] = {}
            for (e1, o1), c1 in self._coeffs.items():
                for (e2, o2), c2 in other._coeffs.items():
                    merged = _merge_odds(o1, o2)
                    if merged is None:
                        continue
                    sign, odds = merged
                    key = (tuple(sorted(e1 + e2)), odds)
                    out[key] = out.get(key, ZERO) + c1 * c2 * sign
            return ChainExpression(self.dims, out)
        c = _as_novikov(other)
        return ChainExpression(
            self.dims, {m: v * c for m, v in self._coeffs.items()}
        )

    __rmul__ = __mul__

    # -- inspection ----------------------------------------------------------

    def items(self):
        return sorted(self._coeffs.items(), key=lambda kv: (_degree(kv[0]), kv[0]))

    def coefficient(self, mono: Monomial) -> NovikovElement:
        evens, odds = mono
        return self._coeffs.get((tuple(sorted(evens)), tuple(odds)), ZERO)

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.items()]

    def max_degree(self) -> int:
        return max((_degree(m) for m in self._coeffs), default=0)

    def part_above_degree(self, n: int) -> "ChainExpression":
        """Terms whose symbolic chain dimension exceeds n (kept, flaggable)."""
        return ChainExpression(
            self.dims, {m: c for m, c in self._coeffs.items() if _degree(m) > n}
        )

    def is_classical(self) -> bool:
        """True when only l-generators occur (no discs, no corrections)."""
        return all(
            not evens and all(kind == "l" for kind, _ in odds)
            for evens, odds in self._coeffs
        )

    # -- rendering -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        pieces = []
        for (evens, odds), coeff in self.items():
            gens = [f"Q_{t + 1}" for t in evens]
            gens += [f"{kind}_{i + 1}" for kind, i in odds]
            body = "*".join(gens) if gens else "1"
            cs = str(coeff)
            if cs == "1":
                pieces.append(body)
            elif cs == "-1":
                pieces.append(f"-{body}")
            elif len(coeff.terms) > 1:
                pieces.append(f"({cs})*{body}")
            else:
                pieces.append(f"{cs}*{body}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"ChainExpression[{self}]"


@dataclass(frozen=True)
class ChainMapCertificate:
    """Outcome of checking that correction makes a cycle closed.

    residual_terms counts the monomials left after exact cancellation;
    every one of them must carry a degenerate pair (a correction chain
    next to its own class disc sum) for the check to succeed.  The split
    into overdimension_terms (symbolic dimension > n, zero as currents
    for dimension reasons) and square_rule_terms (dimension <= n, zero
    because they assemble into boundaries of degenerate squares) is
    informational and is surfaced by reports.
    """

    holds: bool
    residual_terms: int
    overdimension_terms: int
    square_rule_terms: int
    reduced_to_zero: bool
    filtration_ok: bool
    correction_terms_above_n: int


@dataclass(frozen=True)
class ChainAlgebra:
    """Chain symbols and operations attached to one interior fiber."""

    n: int
    N: int
    facet_areas: tuple[Fraction, ...]
    class_areas: tuple[Fraction, ...]
    class_members: tuple[tuple[int, ...], ...]
    balanced: bool

    @classmethod
    def for_fiber(cls, X: ToricFano, f: Fiber) -> "ChainAlgebra":
        classes = disc_areas(X, f)
        partition = area_partition(classes)
        return cls(
            n=X.n,
            N=X.num_facets,
            facet_areas=tuple(d.area for d in classes),
            class_areas=tuple(a for a, _ in partition),
            class_members=tuple(idxs for _, idxs in partition),
            balanced=is_balanced(X, f).balanced,
        )

    @property
    def dims(self) -> Dims:
        return (self.n, self.N, len(self.class_areas))

    # -- element factories ---------------------------------------------------

    def zero(self) -> ChainExpression:
        return ChainExpression(self.dims)

    def one(self) -> ChainExpression:
        """The point class, the empty product."""
        return ChainExpression(self.dims, {((), ()): ONE})

    def l(self, i: int) -> ChainExpression:
        return ChainExpression(self.dims, {((), (("l", i),)): ONE})

    def d(self, j: int) -> ChainExpression:
        return ChainExpression(self.dims, {((), (("d", j),)): ONE})

    def Q(self, t: int) -> ChainExpression:
        return ChainExpression(self.dims, {((t,), ()): ONE})

    def l_monomial(self, indices: Iterable[int]) -> ChainExpression:
        out = self.one()
        for i in indices:
            out = out * self.l(i)
        return out

    # -- operations -------------------------------------------------------------

    def boundary(self, e: ChainExpression) -> ChainExpression:
        """The derivation with boundary(l) = boundary(d) = 0 and
        boundary(Q_t) = -(sum of d_j over class t)."""
        self._check(e)
        out: dict[Monomial, NovikovElement] = {}
        for (evens, odds), c in e._coeffs.items():
            for p, t in enumerate(evens):
                rest = evens[:p] + evens[p + 1 :]
                for j in self.class_members[t]:
                    ins = _insert_odd(odds, ("d", j))
                    if ins is None:
                        continue
                    sign, new_odds = ins
                    key = (rest, new_odds)
                    out[key] = out.get(key, ZERO) + c * (-sign)
        return ChainExpression(self.dims, out)

    def floer_differential(self, e: ChainExpression) -> ChainExpression:
        """(-1)^n boundary(e) + (-1)^n sum_j T^{e_j} q * d_j * e."""
        self._check(e)
        sign_n = (-1) ** self.n
        out: dict[Monomial, NovikovElement] = {}
        for (evens, odds), c in self.boundary(e)._coeffs.items():
            out[(evens, odds)] = out.get((evens, odds), ZERO) + c * sign_n
        for j, area in enumerate(self.facet_areas):
            weight = monomial(sign_n, area, 1)
            for (evens, odds), c in e._coeffs.items():
                ins = _insert_odd(odds, ("d", j))
                if ins is None:
                    continue
                sign, new_odds = ins
                key = (evens, new_odds)
                out[key] = out.get(key, ZERO) + c * weight * sign
        return ChainExpression(self.dims, out)

    def corrected_cycle(self, P: ChainExpression) -> ChainExpression:
        """P plus its tower of correction terms over all class subsets.

        Defined for classical expressions (l-generators only) over a
        balanced fiber; correction terms of symbolic dimension above n
        are kept (callers may flag them via part_above_degree).
        """
        self._check(P)
        if not P.is_classical():
            raise ValueError("corrected_cycle expects an expression in l-generators")
        if not self.balanced:
            raise NotBalanced(
                "correction chains only exist over a balanced fiber "
                "(each class disc-boundary sum must be null-homologous)"
            )
        num_classes = len(self.class_areas)
        out: dict[Monomial, NovikovElement] = {}
        for (_, odds), c in P._coeffs.items():
            for mask in range(2**num_classes):
                S = tuple(t for t in range(num_classes) if mask >> t & 1)
                area = sum((self.class_areas[t] for t in S), Fraction(0))
                key = (S, odds)
                out[key] = out.get(key, ZERO) + c * monomial(1, area, len(S))
        return ChainExpression(self.dims, out)

    def reduce_degenerate_pairs(self, e: ChainExpression) -> ChainExpression:
        """Normal form modulo the ideal of degenerate pairs
        (sum_{j in class t} d_j) * Q_t.

        In a monomial containing Q_t together with the largest disc
        symbol d_{j*} of class t, that symbol is rewritten to minus the
        sum of the remaining class members.  Leading symbols of distinct
        classes are disjoint, so the rewriting is confluent, and each
        step shrinks the multiset of disc indices: it terminates.
        """
        self._check(e)
        leaders = {
            members[-1]: t for t, members in enumerate(self.class_members)
        }
        coeffs = dict(e._coeffs)
        while True:
            redex = None
            for mono in sorted(coeffs):
                evens, odds = mono
                for kind, j in odds:
                    if kind == "d" and j in leaders and leaders[j] in evens:
                        redex = (mono, j, leaders[j])
                        break
                if redex:
                    break
            if redex is None:
                break
            (evens, odds), jstar, t = redex[0], redex[1], redex[2]
            c = coeffs.pop((evens, odds))
            p = odds.index(("d", jstar))
            sign_out = -1 if p % 2 else 1
            stripped = odds[:p] + odds[p + 1 :]
            for j in self.class_members[t]:
                if j == jstar:
                    continue
                ins = _insert_odd(stripped, ("d", j))
                if ins is None:
                    continue
                sign_in, new_odds = ins
                key = (evens, new_odds)
                acc = coeffs.get(key, ZERO) + c * (-sign_out * sign_in)
                if acc:
                    coeffs[key] = acc
                else:
                    coeffs.pop(key, None)
        return ChainExpression(self.dims, coeffs)

    def chain_map_certificate(self, P: ChainExpression) -> ChainMapCertificate:
        """Check that the corrected cycle is closed for the deformed
        differential, in the strongest sense available symbolically."""
        corrected = self.corrected_cycle(P)
        lhs = self.floer_differential(corrected)
        rhs = self.corrected_cycle(self.boundary(P) * ((-1) ** self.n))
        diff = lhs - rhs

        residual = len(diff._coeffs)
        overdim = sum(1 for m in diff._coeffs if _degree(m) > self.n)
        reduced = self.reduce_degenerate_pairs(diff)
        reduced_to_zero = not reduced

        filtration_ok = True
        num_classes = len(self.class_areas)
        for (_, odds), c in P._coeffs.items():
            base_val = c.valuation()
            for mask in range(2**num_classes):
                S = tuple(t for t in range(num_classes) if mask >> t & 1)
                if corrected.coefficient((S, odds)).valuation() < base_val:
                    filtration_ok = False

        return ChainMapCertificate(
            holds=reduced_to_zero and filtration_ok,
            residual_terms=residual,
            overdimension_terms=overdim,
            square_rule_terms=residual - overdim,
            reduced_to_zero=reduced_to_zero,
            filtration_ok=filtration_ok,
            correction_terms_above_n=len(
                corrected.part_above_degree(self.n)._coeffs
            ),
        )

    def verify_chain_map(self, P: ChainExpression) -> bool:
        return self.chain_map_certificate(P).holds

    def _check(self, e: ChainExpression):
        if e.dims != self.dims:
            raise DimensionMismatch(
                f"expression dims {e.dims} do not match fiber dims {self.dims}"
            )


@lru_cache(maxsize=256)
def _algebra(X: ToricFano, f: Fiber) -> ChainAlgebra:
    return ChainAlgebra.for_fiber(X, f)


def boundary(X: ToricFano, f: Fiber, e: ChainExpression) -> ChainExpression:
    return _algebra(X, f).boundary(e)


def floer_differential(X: ToricFano, f: Fiber, e: ChainExpression) -> ChainExpression:
    return _algebra(X, f).floer_differential(e)


def corrected_cycle(X: ToricFano, f: Fiber, P: ChainExpression) -> ChainExpression:
    return _algebra(X, f).corrected_cycle(P)


def chain_map_certificate(X: ToricFano, f: Fiber, P: ChainExpression) -> ChainMapCertificate:
    return _algebra(X, f).chain_map_certificate(P)


def verify_chain_map(X: ToricFano, f: Fiber, P: ChainExpression) -> bool:
    return _algebra(X, f).verify_chain_map(P)
