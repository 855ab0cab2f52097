"""The Landau-Ginzburg superpotential of a moment polytope.

W(theta) = sum_k exp(-ell_k(theta)) where ell_k(theta) = <theta, v_k> -
lambda_k is the affine distance to facet k.  Real theta ranges over the
polytope interior; an imaginary part encodes the holonomy of a flat line
bundle and is confined to this numeric module.

The module has two halves that the test suite plays against each other:
a numeric one (derivatives of W, a damped Newton search for the critical
fiber) and an exact one (the formal Hessian, a Novikov-coefficient
quadratic form whose (i, j) entry is sum_k v_ki * v_kj * T^{e_k} q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import pi
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotInterior
from .novikov import ZERO, NovikovElement, monomial
from .toric import Fiber, ToricFano, area_partition, disc_areas, is_balanced

Rational = Union[int, Fraction]

_MAX_HALVINGS = 40
_ROUND_DENOMINATOR = 10**6


# ---------------------------------------------------------------------------
# numeric side


def superpotential_derivative(
    X: ToricFano,
    theta: Sequence[complex],
    idx: Sequence[int] = (),
) -> complex:
    """Partial derivative of W along the axes in idx, evaluated at theta.

    idx = () gives W itself; idx = (i,) the i-th first partial, and so
    on.  Axis indices are 0-based.  theta may be complex; its imaginary
    part is the holonomy angle vector (radians).
    """
    if len(theta) != X.n:
        raise DimensionMismatch(f"theta has length {len(theta)}, expected {X.n}")
    for i in idx:
        if not 0 <= i < X.n:
            raise IndexError(f"axis {i} out of range for dimension {X.n}")
    total = 0j
    for v, lam in zip(X.normals, X.offsets):
        ell = sum(t * c for t, c in zip(theta, v)) - complex(lam)
        w = np.exp(-ell)
        for i in idx:
            w *= v[i]
        total += w
    return (-1) ** len(idx) * complex(total)


def theta_of_fiber(X: ToricFano, f: Fiber) -> tuple[complex, ...]:
    """Embed a fiber as a complex point, holonomy turns -> imaginary part."""
    hol = f.holonomy or tuple(Fraction(0) for _ in range(X.n))
    return tuple(float(u) + 2j * pi * float(h) for u, h in zip(f.u, hol))


def twisted_class_sums(X: ToricFano, f: Fiber) -> list[np.ndarray]:
    """Holonomy-weighted normal sums, one complex vector per area class.

    The fiber is critical for the holonomy-twisted potential exactly when
    every one of these vanishes; with trivial holonomy they reduce to the
    integer class sums of the balancedness test.
    """
    classes = disc_areas(X, f)
    hol = f.holonomy or tuple(Fraction(0) for _ in range(X.n))
    sums = []
    for _area, idxs in area_partition(classes):
        acc = np.zeros(X.n, dtype=complex)
        for k in idxs:
            v = X.normals[k]
            phase = np.exp(-2j * pi * float(sum(h * c for h, c in zip(hol, v))))
            acc += phase * np.array(v, dtype=float)
        sums.append(acc)
    return sums


def _norms_offsets(X: ToricFano):
    return (
        np.array(X.normals, dtype=float),
        np.array([float(l) for l in X.offsets]),
    )


def _w_grad_hess(X: ToricFano, u: np.ndarray):
    V, lam = _norms_offsets(X)
    weights = np.exp(-(V @ u - lam))
    w = float(weights.sum())
    grad = -V.T @ weights
    hess = (V.T * weights) @ V
    return w, grad, hess


def _strictly_inside(X: ToricFano, u: np.ndarray) -> bool:
    V, lam = _norms_offsets(X)
    return bool(np.all(V @ u - lam > 0))


def find_critical_fiber(
    X: ToricFano,
    init: Optional[Sequence[Rational]] = None,
    tol: float = 1e-12,
    max_iters: int = 50,
) -> Fiber:
    """Newton search for the critical point of W over the interior.

    Steps are halved (at most 40 times each) until the iterate stays
    strictly interior and W does not increase; W is strictly convex on
    the interior so the critical point is unique.  The result is rounded
    by continued fractions with denominators up to 10**6 and returned as
    an exact Fiber when the rounding is exactly balanced; otherwise the
    float iterate is wrapped with exact=False.

    Raises NotInterior for a bad starting point and NoConvergence when
    the gradient is still above tol after max_iters Newton steps.
    """
    start = X.interior_point if init is None else tuple(init)
    if len(start) != X.n:
        raise NotInterior(f"initial point has dimension {len(start)}, expected {X.n}")
    u = np.array([float(x) for x in start], dtype=float)
    if not _strictly_inside(X, u):
        raise NotInterior(f"initial point {start} is not strictly interior")

    for _ in range(max_iters):
        w, grad, hess = _w_grad_hess(X, u)
        if np.max(np.abs(grad)) < tol:
            return _round_fiber(X, u)
        step = np.linalg.solve(hess, -grad)
        t = 1.0
        for _ in range(_MAX_HALVINGS):
            cand = u + t * step
            if _strictly_inside(X, cand):
                w_cand, _, _ = _w_grad_hess(X, cand)
                if w_cand <= w * (1 + 1e-12):
                    u = cand
                    break
            t /= 2
        else:
            raise NoConvergence(
                "step damping failed to find an interior descent point"
            )
    _, grad, _ = _w_grad_hess(X, u)
    if np.max(np.abs(grad)) < tol:
        return _round_fiber(X, u)
    raise NoConvergence(
        f"gradient norm {np.max(np.abs(grad)):.3e} above tol={tol} "
        f"after {max_iters} iterations"
    )


def _round_fiber(X: ToricFano, u: np.ndarray) -> Fiber:
    rounded = tuple(
        Fraction(float(x)).limit_denominator(_ROUND_DENOMINATOR) for x in u
    )
    candidate = Fiber(rounded)
    try:
        if is_balanced(X, candidate).balanced:
            return candidate
    except NotInterior:
        pass
    return Fiber(tuple(Fraction(float(x)) for x in u), exact=False)


# ---------------------------------------------------------------------------
# exact side


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric n x n form with Novikov entries, homogeneous of q-degree 1."""

    n: int
    entries: tuple[tuple[NovikovElement, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n or any(
            len(row) != self.n for row in self.entries
        ):
            raise ValueError(f"entries must form an {self.n} x {self.n} matrix")
        for i in range(self.n):
            for j in range(self.n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("quadratic form must be symmetric")
                for _c, _t, q in self.entries[i][j].terms:
                    if q != 1:
                        raise ValueError(
                            "every term of a disc-area form carries exactly one q"
                        )

    @classmethod
    def zero(cls, n: int) -> "QuadraticForm":
        return cls(n, tuple(tuple(ZERO for _ in range(n)) for _ in range(n)))

    def entry(self, i: int, j: int) -> NovikovElement:
        return self.entries[i][j]


def formal_hessian(X: ToricFano, f: Fiber) -> QuadraticForm:
    """Q_ij = sum_k v_ki * v_kj * T^{e_k(u)} q, exact in the fiber point."""
    classes = disc_areas(X, f)
    rows = []
    for i in range(X.n):
        row = []
        for j in range(X.n):
            row.append(
                sum(
                    (
                        monomial(d.normal[i] * d.normal[j], d.area, 1)
                        for d in classes
                    ),
                    ZERO,
                )
            )
        rows.append(tuple(row))
    return QuadraticForm(X.n, tuple(rows))
