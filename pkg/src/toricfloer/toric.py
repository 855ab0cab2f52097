"""Moment polytopes of toric Fano manifolds and their torus fibers.

A polytope is stored by its facet data {u : <u, v_k> >= lambda_k} with
primitive integer normals v_k and rational offsets lambda_k.  The key
derived quantities are the affine distances e_k(u) = <u, v_k> - lambda_k
to the facets (the disc areas, in affine units), the partition of facets
into classes of equal distance, and the balancedness test: every class
of equidistant facets has normals summing to zero.

Validation and interior-point witnesses use exact Fourier-Motzkin
elimination over Fraction, so no tolerance enters any decision.
"""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import InvalidPolytope, NotInterior, ParseError

Rational = Union[int, Fraction]

# A linear row  sum_i a_i x_i >= b  (strict when the flag is set).
_Row = tuple[tuple[Fraction, ...], Fraction, bool]


# ---------------------------------------------------------------------------
# exact Fourier-Motzkin elimination


def _eliminate_last(rows: list[_Row], nvars: int) -> list[_Row]:
    pos, neg, rest = [], [], []
    for a, b, s in rows:
        c = a[nvars - 1]
        if c > 0:
            pos.append((a, b, s))
        elif c < 0:
            neg.append((a, b, s))
        else:
            rest.append((a[: nvars - 1], b, s))
    for ap, bp, sp in pos:
        cp = ap[nvars - 1]
        for an, bn, sn in neg:
            cn = an[nvars - 1]
            # cp*x + ap'.u >= bp  and  cn*x + an'.u >= bn  with cp>0>cn
            coeffs = tuple(
                cp * an[i] - cn * ap[i] for i in range(nvars - 1)
            )
            rhs = cp * bn - cn * bp
            rest.append((coeffs, rhs, sp or sn))
    return rest


def _stages(rows: list[_Row], nvars: int) -> list[list[_Row]]:
    """systems[k] constrains variables x_0..x_{k-1}; systems[nvars] = input."""
    systems = [rows]
    for k in range(nvars, 0, -1):
        systems.append(_eliminate_last(systems[-1], k))
    systems.reverse()
    return systems


def _consistent(constants: list[_Row]) -> bool:
    for _a, b, strict in constants:
        if (b > 0) or (strict and b == 0):
            return False
    return True


def _pick_inside(lowers, uppers) -> Optional[Fraction]:
    lo = max((v for v, _ in lowers), default=None)
    hi = min((v for v, _ in uppers), default=None)
    if lo is not None and hi is not None:
        if lo < hi:
            return (lo + hi) / 2
        lo_strict = any(s for v, s in lowers if v == lo)
        hi_strict = any(s for v, s in uppers if v == hi)
        if lo == hi and not lo_strict and not hi_strict:
            return lo
        return None
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return Fraction(0)


def _solve_strict(rows: list[_Row], nvars: int) -> Optional[tuple[Fraction, ...]]:
    """A point satisfying all rows, or None; exact back substitution."""
    systems = _stages(rows, nvars)
    if not _consistent(systems[0]):
        return None
    values: list[Fraction] = []
    for k in range(1, nvars + 1):
        lowers, uppers = [], []
        for a, b, strict in systems[k]:
            c = a[k - 1]
            if c == 0:
                continue
            r = b - sum(a[i] * values[i] for i in range(k - 1))
            if c > 0:
                lowers.append((r / c, strict))
            else:
                uppers.append((r / c, strict))
        v = _pick_inside(lowers, uppers)
        if v is None:
            return None
        values.append(v)
    return tuple(values)


def _feasible(rows: list[_Row], nvars: int) -> bool:
    return _solve_strict(rows, nvars) is not None


# ---------------------------------------------------------------------------
# polytope data


@dataclass(frozen=True)
class ToricFano:
    """Facet presentation {u : <u, v_k> >= lambda_k} of a moment polytope."""

    name: str
    n: int
    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[Fraction, ...]
    interior_point: tuple[Fraction, ...] = field(compare=False)

    @property
    def num_facets(self) -> int:
        return len(self.normals)

    def facet_rows(self, strict: bool) -> list[_Row]:
        return [
            (tuple(Fraction(c) for c in v), lam, strict)
            for v, lam in zip(self.normals, self.offsets)
        ]

    def coordinate_bounds(self) -> list[tuple[Fraction, Fraction]]:
        """Exact [min, max] of each coordinate over the closed polytope."""
        bounds = []
        for i in range(self.n):
            perm = [i] + [j for j in range(self.n) if j != i]
            rows = [
                (tuple(a[p] for p in perm), b, False)
                for a, b, _ in self.facet_rows(strict=False)
            ]
            single = _stages(rows, self.n)[1]
            lo, hi = None, None
            for a, b, _s in single:
                c = a[0]
                if c > 0:
                    val = b / c
                    lo = val if lo is None else max(lo, val)
                elif c < 0:
                    val = b / c
                    hi = val if hi is None else min(hi, val)
            if lo is None or hi is None:
                raise InvalidPolytope("polytope is unbounded")
            bounds.append((lo, hi))
        return bounds

    def __str__(self) -> str:
        return f"{self.name}: {self.num_facets} facets in dim {self.n}"


@dataclass(frozen=True)
class Fiber:
    """A torus fiber over an interior point of the polytope.

    u is always exact rational.  Solver output that could not be rounded
    to an exactly balanced point carries the binary expansion of the
    float iterate and exact=False.  Holonomy angles are in turns and are
    only consumed by the numeric side of the potential module.
    """

    u: tuple[Fraction, ...]
    holonomy: Optional[tuple[Fraction, ...]] = None
    exact: bool = True

    def has_trivial_holonomy(self) -> bool:
        return self.holonomy is None or all(h == 0 for h in self.holonomy)


@dataclass(frozen=True)
class DiscClass:
    """Basic holomorphic disc class meeting facet `index` once."""

    index: int
    normal: tuple[int, ...]
    area: Fraction
    maslov: int = 2


class AreaClass(NamedTuple):
    area: Fraction
    indices: tuple[int, ...]


class BalanceResult(NamedTuple):
    balanced: bool
    class_sums: tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# construction and validation


def _primitive(v: Sequence[int]) -> bool:
    g = 0
    for c in v:
        g = math.gcd(g, abs(c))
    return g == 1


def make_toric(
    name: str,
    n: int,
    normals: Iterable[Sequence[int]],
    offsets: Iterable[Rational],
) -> ToricFano:
    """Validate facet data and attach an exact interior witness."""
    vs = tuple(tuple(int(c) for c in v) for v in normals)
    lams = tuple(Fraction(x) for x in offsets)
    if n < 1:
        raise InvalidPolytope("dimension must be at least 1")
    if len(vs) != len(lams):
        raise InvalidPolytope("normals and offsets differ in length")
    if len(vs) < n + 1:
        raise InvalidPolytope("need at least n+1 facets to bound a polytope")
    for v in vs:
        if len(v) != n:
            raise InvalidPolytope(f"normal {v} does not have dimension {n}")
        if not _primitive(v):
            raise InvalidPolytope(f"facet normal {v} is not primitive")

    # bounded iff the recession cone {d : <d, v_k> >= 0 for all k} is {0}
    cone = [(tuple(Fraction(c) for c in v), Fraction(0), False) for v in vs]
    for i in range(n):
        for sign in (1, -1):
            axis = tuple(
                Fraction(sign if j == i else 0) for j in range(n)
            )
            if _feasible(cone + [(axis, Fraction(0), True)], n):
                raise InvalidPolytope(
                    "normals do not positively span, polytope is unbounded"
                )

    witness = _solve_strict(
        [(tuple(Fraction(c) for c in v), lam, True) for v, lam in zip(vs, lams)],
        n,
    )
    if witness is None:
        raise InvalidPolytope("polytope has empty interior")
    return ToricFano(name, n, vs, lams, witness)


def _builtin(name: str) -> Optional[ToricFano]:
    if name == "CP1":
        return make_toric("CP1", 1, [(1,), (-1,)], [0, -1])
    if name == "CP2":
        return make_toric("CP2", 2, [(1, 0), (0, 1), (-1, -1)], [0, 0, -1])
    if name == "CP1xCP1":
        return make_toric(
            "CP1xCP1",
            2,
            [(1, 0), (-1, 0), (0, 1), (0, -1)],
            [0, -1, 0, -1],
        )
    m = re.fullmatch(r"CPn\((\d+)\)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ParseError("CPn(n) needs n >= 1")
        normals = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        normals.append(tuple(-1 for _ in range(n)))
        return make_toric(name, n, normals, [0] * n + [-1])
    return None


def _from_json_dict(doc: dict) -> ToricFano:
    if not isinstance(doc, dict):
        raise ParseError("polytope document must be a JSON object")
    for key in ("name", "dim", "facets"):
        if key not in doc:
            raise ParseError(f"polytope document lacks '{key}'")
    name = doc["name"]
    dim = doc["dim"]
    if not isinstance(name, str):
        raise ParseError("'name' must be a string")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ParseError("'dim' must be an integer")
    facets = doc["facets"]
    if not isinstance(facets, list) or not facets:
        raise ParseError("'facets' must be a non-empty list")
    normals, offsets = [], []
    for fct in facets:
        if not isinstance(fct, dict) or "normal" not in fct or "offset" not in fct:
            raise ParseError("each facet needs 'normal' and 'offset'")
        normal = fct["normal"]
        if not isinstance(normal, list):
            raise ParseError("'normal' must be a list of integers")
        for c in normal:
            if not isinstance(c, int) or isinstance(c, bool):
                raise ParseError(
                    "normals must be exact integers, floats are rejected"
                )
        offset = fct["offset"]
        if isinstance(offset, float):
            raise ParseError(
                "offsets must be rational strings like '-1/3', floats are rejected"
            )
        if isinstance(offset, str):
            try:
                offset = Fraction(offset)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"cannot parse offset {offset!r}") from exc
        elif not isinstance(offset, int) or isinstance(offset, bool):
            raise ParseError("offsets must be rational strings or integers")
        normals.append(tuple(normal))
        offsets.append(Fraction(offset))
    return make_toric(name, dim, normals, offsets)


def load_toric(source: Union[str, dict]) -> ToricFano:
    """Load a polytope from a built-in name, JSON text, file path or dict.

    Built-ins: CP1, CP2, CPn(n), CP1xCP1.
    """
    if isinstance(source, dict):
        return _from_json_dict(source)
    if not isinstance(source, str):
        raise ParseError(f"cannot load a polytope from {type(source).__name__}")
    builtin = _builtin(source.strip())
    if builtin is not None:
        return builtin
    text = source
    if os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        raise ParseError(
            f"unknown polytope {source!r}: not a built-in name, file or JSON object"
        )
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return _from_json_dict(doc)


# ---------------------------------------------------------------------------
# fibers, disc areas, balancedness


def _as_fiber(f: Union[Fiber, Sequence[Rational]]) -> Fiber:
    if isinstance(f, Fiber):
        return f
    return Fiber(tuple(Fraction(x) for x in f))


def disc_areas(X: ToricFano, f: Union[Fiber, Sequence[Rational]]) -> tuple[DiscClass, ...]:
    """Areas e_k(u) = <u, v_k> - lambda_k of the basic disc classes.

    Raises NotInterior unless every distance is strictly positive.
    """
    fiber = _as_fiber(f)
    if len(fiber.u) != X.n:
        raise NotInterior(f"fiber point has dimension {len(fiber.u)}, expected {X.n}")
    out = []
    for k, (v, lam) in enumerate(zip(X.normals, X.offsets)):
        e = sum(ui * vi for ui, vi in zip(fiber.u, v)) - lam
        if e <= 0:
            raise NotInterior(
                f"point {tuple(map(str, fiber.u))} is not strictly inside: "
                f"facet {k + 1} has distance {e}"
            )
        out.append(DiscClass(k, v, e))
    return tuple(out)


def area_partition(classes: Sequence[DiscClass]) -> tuple[AreaClass, ...]:
    """Group facet indices by exactly equal area, sorted by area."""
    groups: dict[Fraction, list[int]] = {}
    for d in classes:
        groups.setdefault(d.area, []).append(d.index)
    return tuple(
        AreaClass(area, tuple(sorted(idxs))) for area, idxs in sorted(groups.items())
    )


def is_balanced(X: ToricFano, f: Union[Fiber, Sequence[Rational]]) -> BalanceResult:
    """Whether every class of equidistant facets has normals summing to zero.

    Requires trivial holonomy; the holonomy-weighted variant lives in the
    potential module and is numeric.
    """
    fiber = _as_fiber(f)
    if not fiber.has_trivial_holonomy():
        raise ValueError(
            "is_balanced assumes trivial holonomy; "
            "use potential.twisted_class_sums for the weighted test"
        )
    partition = area_partition(disc_areas(X, fiber))
    sums = []
    for _area, idxs in partition:
        total = [0] * X.n
        for k in idxs:
            for i, c in enumerate(X.normals[k]):
                total[i] += c
        sums.append(tuple(total))
    return BalanceResult(all(all(c == 0 for c in s) for s in sums), tuple(sums))


def interior_grid(X: ToricFano, step: Fraction) -> Iterable[tuple[Fraction, ...]]:
    """Rational grid points with spacing `step` strictly inside the polytope."""
    ranges = []
    for lo, hi in X.coordinate_bounds():
        start = math.floor(lo / step)
        stop = math.ceil(hi / step)
        ranges.append([step * k for k in range(start, stop + 1)])
    for point in iter_product(*ranges):
        inside = True
        for v, lam in zip(X.normals, X.offsets):
            if sum(ui * vi for ui, vi in zip(point, v)) - lam <= 0:
                inside = False
                break
        if inside:
            yield point
