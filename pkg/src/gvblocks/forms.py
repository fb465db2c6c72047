"""Finite abelian groups and Q/Z-valued quadratic forms.

Values in Q/Z are exact ``fractions.Fraction`` objects reduced into ``[0, 1)``;
only :func:`gauss_sum` leaves exact arithmetic.  Group elements are plain
integer tuples with the i-th coordinate reduced modulo the i-th invariant
factor.  Invariant factors are kept in the shape the caller supplied (no
forced divisibility chain); only :func:`smith_normal_form` output follows the
chain.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, InvalidQForm, ValidationError

Element = tuple[int, ...]

#: Largest group order enumerated by radical / subgroup computations.
ENUMERATION_CAP = 2**16


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise ValidationError("forms.bad_rational", f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class FinAbGroup:
    """Product of cyclic groups Z/n_1 x ... x Z/n_k."""

    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def reduce(self, vec: Sequence[int]) -> Element:
        if len(vec) != self.rank:
            raise ValidationError(
                "forms.bad_element",
                f"element has {len(vec)} coordinates, group has rank {self.rank}",
            )
        return tuple(int(v) % n for v, n in zip(vec, self.invariant_factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.invariant_factors))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % n for a, n in zip(x, self.invariant_factors))

    def generator(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def generators(self) -> list[Element]:
        return [self.generator(i) for i in range(self.rank)]

    def elements(self) -> Iterator[Element]:
        return itertools.product(*(range(n) for n in self.invariant_factors))

    @cached_property
    def sorted_elements(self) -> tuple[Element, ...]:
        return tuple(self.elements())


def make_group(invariant_factors: Iterable[int]) -> FinAbGroup:
    """Build the group with the given cyclic factors (each n_i >= 1)."""
    factors = tuple(int(n) for n in invariant_factors)
    for n in factors:
        if n <= 0:
            raise ValidationError("forms.invalid_factor", f"invariant factor {n} is not >= 1")
    return FinAbGroup(factors)


def _integerize(matrix: tuple[tuple[Fraction, ...], ...]) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Common denominator M and the integer matrix M * A."""
    den = 1
    for row in matrix:
        for a in row:
            den = den * a.denominator // math.gcd(den, a.denominator)
    return den, tuple(
        tuple(a.numerator * (den // a.denominator) for a in row) for row in matrix
    )


@lru_cache(maxsize=128)
def _element_array(group: FinAbGroup) -> np.ndarray:
    """All group elements as an (order, rank) int64 array, sorted."""
    return np.array(group.sorted_elements, dtype=np.int64).reshape(group.order, group.rank)


def _np_safe(den: int, max_coord: int, rank: int) -> bool:
    # keep x^T A x within int64 for the vectorized paths
    return den * max_coord * max_coord * max(rank, 1) ** 2 < 2**62


def _quadratic_values(int_matrix, den: int, X: np.ndarray) -> np.ndarray:
    """Numerators of q on the rows of X: (x^T (den*A) x) mod den."""
    k = len(int_matrix)
    A = np.array(int_matrix, dtype=np.int64).reshape(k, k)
    return np.einsum("ij,jk,ik->i", X, A, X) % den


@dataclass(frozen=True)
class QForm:
    """Quadratic form q(x) = x^T A x mod 1 on a finite abelian group.

    ``matrix`` is symmetric with exact rational entries; construct through
    :func:`make_qform`, which checks well-definedness on the group.
    Evaluation goes through the integerized matrix M*A, which keeps the
    arithmetic exact and cheap.
    """

    group: FinAbGroup
    matrix: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def int_form(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        return _integerize(self.matrix)

    def eval_raw(self, vec: Sequence[int]) -> Fraction:
        """Evaluate on an arbitrary (unreduced) integer vector."""
        den, rows = self.int_form
        total = 0
        for i, row in enumerate(rows):
            vi = vec[i]
            if vi:
                total += vi * sum(a * vj for a, vj in zip(row, vec) if a)
        return Fraction(total % den, den)

    def __call__(self, x: Sequence[int]) -> Fraction:
        return self.eval_raw(self.group.reduce(x))


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric biadditive form b(x, y) = x^T B y mod 1."""

    group: FinAbGroup
    matrix: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def int_form(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        return _integerize(self.matrix)

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        x = self.group.reduce(x)
        y = self.group.reduce(y)
        den, rows = self.int_form
        total = 0
        for i, row in enumerate(rows):
            if x[i]:
                total += x[i] * sum(a * yj for a, yj in zip(row, y) if a)
        return Fraction(total % den, den)


def _check_matrix_shape(group: FinAbGroup, matrix) -> tuple[tuple[Fraction, ...], ...]:
    rows = [tuple(_as_fraction(a) for a in row) for row in matrix]
    k = group.rank
    if len(rows) != k or any(len(row) != k for row in rows):
        raise ValidationError(
            "forms.bad_matrix", f"matrix must be {k}x{k} to match the group rank"
        )
    for i in range(k):
        for j in range(k):
            if rows[i][j] != rows[j][i]:
                raise ValidationError(
                    "forms.bad_matrix", f"matrix not symmetric at ({i},{j})"
                )
    return tuple(rows)


def make_qform(group: FinAbGroup, matrix) -> QForm:
    """Validate and build a quadratic form from a symmetric rational matrix.

    Well-definedness on the group requires, for each factor n_i, that
    n_i * 2*A e_i is integral componentwise and n_i^2 * A_ii is integral.
    For groups of order <= 256 the translation invariance q(x + n_i e_i) =
    q(x) is additionally checked by brute force.
    """
    rows = _check_matrix_shape(group, matrix)
    q = QForm(group, rows)
    k = group.rank
    for i, n in enumerate(group.invariant_factors):
        ok = (n * n * rows[i][i]).denominator == 1 and all(
            (n * 2 * rows[j][i]).denominator == 1 for j in range(k)
        )
        if not ok:
            witness = _qform_witness(q, i)
            raise InvalidQForm(
                "forms.invalid_qform",
                f"q(x + {n}*e_{i}) != q(x); witness vector {witness}",
                witness=witness,
            )
    if group.order <= 256:
        den, int_rows = q.int_form
        max_coord = 2 * max(group.invariant_factors, default=1)
        if _np_safe(den, max_coord, k):
            X = _element_array(group)
            base = _quadratic_values(int_rows, den, X)
            for i, n in enumerate(group.invariant_factors):
                shift = np.zeros(k, dtype=np.int64)
                shift[i] = n
                moved = _quadratic_values(int_rows, den, X + shift)
                bad = np.nonzero(moved != base)[0]
                if bad.size:
                    witness = tuple(int(c) for c in (X[bad[0]] + shift))
                    raise InvalidQForm(
                        "forms.invalid_qform",
                        f"q not invariant under x -> x + {n}*e_{i} at x={tuple(int(c) for c in X[bad[0]])}",
                        witness=witness,
                    )
        else:
            for i, n in enumerate(group.invariant_factors):
                shift = tuple(n if j == i else 0 for j in range(k))
                for x in group.elements():
                    moved = tuple(a + s for a, s in zip(x, shift))
                    if q.eval_raw(moved) != q.eval_raw(x):
                        raise InvalidQForm(
                            "forms.invalid_qform",
                            f"q not invariant under x -> x + {n}*e_{i} at x={x}",
                            witness=moved,
                        )
    return q


def _qform_witness(q: QForm, i: int) -> tuple[int, ...]:
    # A violation of the factor-i rule shows up against x = 0 or x = e_j.
    group = q.group
    n = group.invariant_factors[i]
    shift = tuple(n if j == i else 0 for j in range(group.rank))
    if q.eval_raw(shift) != 0:
        return shift
    for j in range(group.rank):
        x = group.generator(j)
        moved = tuple(a + s for a, s in zip(x, shift))
        if q.eval_raw(moved) != q.eval_raw(x):
            return moved
    return shift


def bilinear(q: QForm) -> BilinearForm:
    """Polarization b(x, y) = q(x+y) - q(x) - q(y) = 2 x^T A y mod 1."""
    return BilinearForm(
        q.group, tuple(tuple(2 * a for a in row) for row in q.matrix)
    )


def make_bilinear(group: FinAbGroup, matrix) -> BilinearForm:
    """Validate and build a symmetric bilinear form from its matrix."""
    rows = _check_matrix_shape(group, matrix)
    for i, n in enumerate(group.invariant_factors):
        for j in range(group.rank):
            if (n * rows[j][i]).denominator != 1:
                raise ValidationError(
                    "forms.bad_bilinear",
                    f"b(e_{j}, {n}*e_{i}) = {n * rows[j][i]} is not 0 mod 1",
                )
    return BilinearForm(group, rows)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its full element list plus abstract invariants."""

    ambient: FinAbGroup
    elements: tuple[Element, ...]
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1


def radical(b: BilinearForm) -> Subgroup:
    """All x with b(x, -) = 0, found by enumeration.

    Biadditivity makes it enough to test x against the generators.
    """
    group = b.group
    if group.order > ENUMERATION_CAP:
        raise CapacityError(
            "forms.capacity", f"group order {group.order} exceeds {ENUMERATION_CAP}"
        )
    den, int_rows = b.int_form
    max_coord = max(group.invariant_factors, default=1)
    if _np_safe(den, max_coord, group.rank):
        X = _element_array(group)
        B = np.array(int_rows, dtype=np.int64).reshape(group.rank, group.rank)
        pairings = (X @ B) % den
        mask = ~pairings.any(axis=1)
        elems = tuple(tuple(int(c) for c in row) for row in X[mask])
    else:
        gens = group.generators()
        elems = tuple(
            x for x in group.elements() if all(b(x, g) == 0 for g in gens)
        )
    return Subgroup(group, elems, subgroup_invariants(group, elems))


def subgroup_invariants(group: FinAbGroup, elements: Sequence[Element]) -> tuple[int, ...]:
    """Invariant factors (ascending divisibility chain) of a subgroup.

    Works from the element-order statistics: for each prime p the count of
    elements killed by p^j determines the partition of the p-part.
    """
    order = len(elements)
    if order <= 1:
        return ()
    powers_by_prime: list[list[int]] = []
    for p in _prime_factors(order):
        p_part = 1
        o = order
        while o % p == 0:
            p_part *= p
            o //= p
        # e_j = number of cyclic p-factors of order >= p^j
        exps = []
        prev = 0
        j = 1
        while True:
            killed = sum(1 for x in elements if group.scale(p**j, x) == group.zero)
            cur = round(math.log(killed, p))
            exps.append(cur - prev)
            if killed == p_part:
                break
            prev = cur
            j += 1
        # conjugate partition: sizes of the cyclic factors, descending
        sizes = [sum(1 for e in exps if e >= k) for k in range(1, max(exps) + 1)]
        powers_by_prime.append(sorted((p**a for a in sizes), reverse=True))
    n_factors = max(len(ps) for ps in powers_by_prime)
    chain = []
    for i in range(n_factors):
        d = 1
        for ps in powers_by_prime:
            if i < len(ps):
                d *= ps[i]
        chain.append(d)
    return tuple(reversed(chain))


def _prime_factors(n: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    return primes


def gauss_sum(q: QForm) -> complex:
    """gamma(q) = |G|^(-1/2) * sum over x of exp(2 pi i q(x))."""
    group = q.group
    den, int_rows = q.int_form
    max_coord = max(group.invariant_factors, default=1)
    if _np_safe(den, max_coord, group.rank):
        vals = _quadratic_values(int_rows, den, _element_array(group))
        total = complex(np.exp(2j * math.pi * vals / den).sum())
    else:
        total = sum(
            cmath.exp(2j * math.pi * float(q.eval_raw(x))) for x in group.elements()
        )
    return total / math.sqrt(group.order)


def enumerate_qforms(group: FinAbGroup) -> Iterator[QForm]:
    """All well-defined quadratic forms on the group, without repetition.

    A form is determined by q(e_i) together with the pairings b(e_i, e_j),
    and the grids below are exactly the admissible values, so the forms are
    built directly (``make_qform`` would accept every one of them).
    """
    factors = group.invariant_factors
    k = group.rank
    diag_choices = []
    for n in factors:
        # q(e_i) = A_ii with 2n*A_ii and n^2*A_ii integral
        choices = [
            Fraction(t, 2 * n) for t in range(2 * n) if (n * t) % 2 == 0
        ]
        diag_choices.append(choices)
    off_pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    off_choices = []
    for i, j in off_pairs:
        g = math.gcd(factors[i], factors[j])
        off_choices.append([Fraction(t, 2 * g) for t in range(g)])
    for diag in itertools.product(*diag_choices):
        for off in itertools.product(*off_choices) if off_pairs else [()]:
            mat = [[Fraction(0)] * k for _ in range(k)]
            for i in range(k):
                mat[i][i] = diag[i]
            for (i, j), a in zip(off_pairs, off):
                mat[i][j] = a
                mat[j][i] = a
            yield QForm(group, tuple(tuple(row) for row in mat))


# --- exact integer matrices -------------------------------------------------


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix, exactly (Bareiss elimination)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in mat]
    if any(len(row) != n for row in a):
        raise ValidationError("forms.bad_matrix", "determinant needs a square matrix")
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    a[t], a[i] = a[i], a[t]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul_int(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    return [
        [sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Smith normal form with transforms: returns (U, D, V) with U*A*V = D.

    U and V are unimodular, D is diagonal with nonnegative entries and
    d_1 | d_2 | ... .  Works for arbitrary (also rectangular) integer
    matrices.
    """
    a = [[int(x) for x in row] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ValidationError("forms.bad_matrix", "ragged matrix")
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def add_row(i, j, c):
        # row_i += c * row_j
        for t in range(n):
            a[i][t] += c * a[j][t]
        for t in range(m):
            u[i][t] += c * u[j][t]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(i, j, c):
        # col_i += c * col_j
        for row in a:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    for t in range(min(m, n)):
        while True:
            # move the entry of smallest nonzero magnitude to (t, t)
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            if a[t][t] < 0:
                negate_row(t)
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block for the chain to hold
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if t < min(m, n) and a[t][t] < 0:
            negate_row(t)
    d = [[a[i][j] if i == j else 0 for j in range(n)] for i in range(m)]
    return u, d, v
