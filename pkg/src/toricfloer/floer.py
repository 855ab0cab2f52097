"""The Floer complex of a torus fiber and its cohomology rank.

The complex is modelled on the exterior algebra of the fiber torus with
Novikov coefficients.  The differential is wedging with the obstruction
one-form alpha = sum_k T^{e_k} q * (sum_i v_ki l_i), carrying a global
sign (-1)^n so printed chains match the expected formulas; alpha wedge
alpha = 0 makes it square to zero for every interior fiber.

The homology rank over the Novikov field is computed by Gaussian
elimination with least-valuation pivoting.  Row operations divide by the
pivot through truncated geometric-series inverses, and all arithmetic is
performed modulo terms of T-exponent above a cutoff, so eliminated
entries are exactly zero there; the cutoff doubles until the rank agrees
across two successive levels.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .clifford import CliffordElement, cl_mul
from .errors import NotBalanced
from .novikov import DEFAULT_CUTOFF, ZERO, NovikovElement, monomial
from .potential import QuadraticForm, formal_hessian
from .toric import Fiber, ToricFano, disc_areas, is_balanced

#: cohomology classes of the fiber torus, wedge products of the degree-1
#: generators; the same container as CliffordElement, multiplied with Q = 0
ExteriorClass = CliffordElement

Rational = Union[int, Fraction]


def subsets_graded(n: int) -> list[tuple[int, ...]]:
    """All index subsets of {0..n-1}, sorted by size then lexicographically."""
    out = [()]
    for s in range(1, 2**n):
        out.append(tuple(i for i in range(n) if s >> i & 1))
    out.sort(key=lambda t: (len(t), t))
    return out


def wedge(x: ExteriorClass, y: ExteriorClass) -> ExteriorClass:
    return cl_mul(QuadraticForm.zero(x.n), x, y)


# ---------------------------------------------------------------------------
# the differential


def obstruction_form(X: ToricFano, f: Fiber) -> list[NovikovElement]:
    """Coefficients alpha_i = sum_k v_ki * T^{e_k} q of the one-form alpha."""
    classes = disc_areas(X, f)
    return [
        sum((monomial(d.normal[i], d.area, 1) for d in classes), ZERO)
        for i in range(X.n)
    ]


def differential_matrix(
    X: ToricFano, f: Fiber
) -> tuple[list[tuple[int, ...]], list[list[NovikovElement]]]:
    """Matrix of x -> (-1)^n alpha wedge x in the graded subset basis.

    Returns (basis, matrix) with matrix[row][col] the coefficient of
    basis[row] in the image of basis[col].
    """
    basis = subsets_graded(X.n)
    index = {s: r for r, s in enumerate(basis)}
    alpha = obstruction_form(X, f)
    sign = (-1) ** X.n
    size = len(basis)
    matrix = [[ZERO for _ in range(size)] for _ in range(size)]
    for col, subset in enumerate(basis):
        image = apply_differential(X, alpha, subset, sign)
        for target, coeff in image.items():
            matrix[index[target]][col] = coeff
    return basis, matrix


def apply_differential(X, alpha, subset, sign) -> CliffordElement:
    src = CliffordElement.basis_element(X.n, subset)
    out = CliffordElement.zero(X.n)
    for i, a_i in enumerate(alpha):
        if not a_i:
            continue
        out = out + wedge(CliffordElement.generator(X.n, i), src) * a_i
    return out * sign


def m1_apply(X: ToricFano, f: Fiber, x: ExteriorClass) -> ExteriorClass:
    """The differential applied to an arbitrary exterior class."""
    alpha = obstruction_form(X, f)
    sign = (-1) ** X.n
    out = CliffordElement.zero(X.n)
    for subset, c in x.items():
        out = out + apply_differential(X, alpha, subset, sign) * c
    return out


# ---------------------------------------------------------------------------
# rank over the Novikov field


def elimination_rank(matrix: Sequence[Sequence[NovikovElement]], cutoff) -> int:
    """Rank by least-valuation-pivot elimination, truncated at cutoff."""
    cutoff = Fraction(cutoff)
    rows = [[e.truncate(cutoff) for e in row] for row in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    act_rows = list(range(nrows))
    act_cols = list(range(ncols))
    rank = 0
    while True:
        pivot = None
        best = None
        for r in act_rows:
            for c in act_cols:
                e = rows[r][c]
                if e:
                    v = e.valuation()
                    if best is None or v < best:
                        best, pivot = v, (r, c)
        if pivot is None:
            return rank
        rank += 1
        pr, pc = pivot
        inv = rows[pr][pc].invert(cutoff)
        for r in act_rows:
            if r == pr or not rows[r][pc]:
                continue
            factor = (rows[r][pc] * inv).truncate(cutoff)
            for c in act_cols:
                if c == pc:
                    continue
                rows[r][c] = (rows[r][c] - factor * rows[pr][c]).truncate(cutoff)
            # exact in untruncated arithmetic, and every truncation error
            # lives above the cutoff, so the entry is zero at this level
            rows[r][pc] = ZERO
        act_rows.remove(pr)
        act_cols.remove(pc)


def novikov_rank(
    matrix: Sequence[Sequence[NovikovElement]],
    initial_cutoff=DEFAULT_CUTOFF,
    max_refinements: int = 8,
) -> int:
    """Elimination rank, with the cutoff doubled until the answer repeats."""
    cutoff = Fraction(initial_cutoff)
    prev = elimination_rank(matrix, cutoff)
    for _ in range(max_refinements):
        cutoff *= 2
        cur = elimination_rank(matrix, cutoff)
        if cur == prev:
            return cur
        prev = cur
    raise ArithmeticError("rank did not stabilize while doubling the cutoff")


def hf_rank(X: ToricFano, f: Fiber) -> int:
    """Rank of ker(m1)/im(m1) over the Novikov field: 2^n at balanced
    fibers and 0 everywhere else."""
    _, matrix = differential_matrix(X, f)
    r = novikov_rank(matrix)
    return 2**X.n - 2 * r


# ---------------------------------------------------------------------------
# products


def disc_l_term(
    n: int, normal: Sequence[int], area, idx: Sequence[int]
) -> NovikovElement:
    """Contribution (-1)^{n*m} v_{i_1} ... v_{i_m} T^{area} q of one disc."""
    coeff = (-1) ** (n * len(idx))
    for i in idx:
        coeff *= normal[i]
    return monomial(coeff, Fraction(area), 1)


def boundary_pairing(n: int, normal: Sequence[int], i: int) -> int:
    """Intersection number of the generator C_i with the disc boundary."""
    return (-1) ** n * normal[i]


def l_product(X: ToricFano, f: Fiber, idx: Sequence[int] = ()) -> NovikovElement:
    """The symmetrized m-ary product on degree-1 generators:

    l(i_1, ..., i_m) = (-1)^{n*m} sum_k v_{k i_1} ... v_{k i_m} T^{e_k} q.

    idx = () gives the obstruction term sum_k T^{e_k} q.  Axis indices
    are 0-based.  Numerically (T^e -> exp(-e), q -> 1) this equals
    (-1)^{(n-1)m} times the m-th derivative of the superpotential.
    """
    for i in idx:
        if not 0 <= i < X.n:
            raise IndexError(f"axis {i} out of range for dimension {X.n}")
    classes = disc_areas(X, f)
    return sum(
        (disc_l_term(X.n, d.normal, d.area, idx) for d in classes), ZERO
    )


def m2_product(
    X: ToricFano, f: Fiber, x: ExteriorClass, y: ExteriorClass
) -> CliffordElement:
    """The associative product on the Floer cohomology of a balanced fiber.

    Identifies exterior classes with Clifford elements basis-by-basis and
    multiplies in the Clifford algebra of the formal Hessian.  Raises
    NotBalanced when the fiber is not balanced (the cohomology is zero
    there and carries no ring).
    """
    ok, sums = is_balanced(X, f)
    if not ok:
        raise NotBalanced(
            f"fiber {tuple(map(str, f.u if isinstance(f, Fiber) else f))} is not "
            f"balanced: class normal sums {sums}"
        )
    return cl_mul(formal_hessian(X, f), x, y)
