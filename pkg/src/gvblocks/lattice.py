"""Even lattices and their discriminant groups and forms.

A lattice is given by its Gram matrix on a basis (symmetric, even diagonal,
nonzero determinant) plus a distinguished dual vector xi in basis
coordinates.  The discriminant group is the quotient of the dual lattice by
the lattice, presented through the Smith normal form of the Gram matrix;
the discriminant form is q(x) = <x, x>/2 mod 1 evaluated on rational lifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import ValidationError
from .forms import (
    Element,
    FinAbGroup,
    QForm,
    det_int,
    make_group,
    make_qform,
    smith_normal_form,
)
from .pointed import PointedGVCategory, make_category


@dataclass(frozen=True)
class LatticeData:
    """Even Gram matrix plus xi in the dual lattice (basis coordinates)."""

    gram: tuple[tuple[int, ...], ...]
    xi: tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return det_int(self.gram)


def make_lattice(gram, xi) -> LatticeData:
    """Validate bosonic lattice input.

    Rejects odd diagonal entries (NotEven), zero determinant (Degenerate),
    and xi with gram @ xi not integral (XiNotDual).
    """
    rows = tuple(tuple(int(x) for x in row) for row in gram)
    k = len(rows)
    if any(len(row) != k for row in rows):
        raise ValidationError("lattice.bad_matrix", "Gram matrix must be square")
    for i in range(k):
        for j in range(k):
            if rows[i][j] != rows[j][i]:
                raise ValidationError(
                    "lattice.bad_matrix", f"Gram matrix not symmetric at ({i},{j})"
                )
    for i in range(k):
        if rows[i][i] % 2 != 0:
            raise ValidationError(
                "lattice.not_even", f"diagonal entry gram[{i}][{i}] = {rows[i][i]} is odd"
            )
    if det_int(rows) == 0:
        raise ValidationError("lattice.degenerate", "Gram matrix has determinant 0")
    xi_vec = tuple(Fraction(x) for x in xi)
    if len(xi_vec) != k:
        raise ValidationError(
            "lattice.bad_xi", f"xi has {len(xi_vec)} coordinates, lattice has rank {k}"
        )
    pairing = [sum(Fraction(rows[i][j]) * xi_vec[j] for j in range(k)) for i in range(k)]
    for i, p in enumerate(pairing):
        if p.denominator != 1:
            raise ValidationError(
                "lattice.xi_not_dual", f"<e_{i}, xi> = {p} is not an integer"
            )
    return LatticeData(rows, xi_vec)


@dataclass(frozen=True)
class DiscriminantData:
    """Discriminant group with generator lifts and the projection map.

    ``lifts[i]`` is a rational vector in the lattice basis representing the
    i-th generator; a dual vector y maps to coordinates U @ (gram @ y)
    reduced modulo the invariant factors (rows of U restricted to the
    nontrivial Smith factors).
    """

    group: FinAbGroup
    lifts: tuple[tuple[Fraction, ...], ...]
    proj_rows: tuple[tuple[int, ...], ...]

    def element_of(self, lattice: LatticeData, y: Sequence[Fraction]) -> Element:
        """Class in the discriminant group of a dual vector y (basis coords)."""
        k = lattice.rank
        y = [Fraction(c) for c in y]
        x = [sum(Fraction(lattice.gram[i][j]) * y[j] for j in range(k)) for i in range(k)]
        for i, c in enumerate(x):
            if c.denominator != 1:
                raise ValidationError(
                    "lattice.xi_not_dual", f"vector is not in the dual lattice (<e_{i}, y> = {c})"
                )
        coords = [sum(row[j] * int(x[j]) for j in range(k)) for row in self.proj_rows]
        return self.group.reduce(coords)


def discriminant_data(lattice: LatticeData) -> DiscriminantData:
    u, d, v = smith_normal_form(lattice.gram)
    k = lattice.rank
    nontrivial = [i for i in range(k) if d[i][i] != 1]
    factors = [d[i][i] for i in nontrivial]
    lifts = tuple(
        tuple(Fraction(v[r][i], d[i][i]) for r in range(k)) for i in nontrivial
    )
    proj_rows = tuple(tuple(u[i]) for i in nontrivial)
    return DiscriminantData(make_group(factors), lifts, proj_rows)


def discriminant_group(lattice: LatticeData) -> tuple[FinAbGroup, tuple[tuple[Fraction, ...], ...]]:
    """The finite abelian group dual/lattice with rational generator lifts."""
    data = discriminant_data(lattice)
    return data.group, data.lifts


def discriminant_form(lattice: LatticeData) -> QForm:
    """q(x) = <lift(x), lift(x)>/2 mod 1 on the discriminant group.

    Evenness of the lattice makes this independent of the choice of lifts;
    the result passes full quadratic-form validation.
    """
    data = discriminant_data(lattice)
    k = lattice.rank
    r = data.group.rank
    mat = [[Fraction(0)] * r for _ in range(r)]
    for a in range(r):
        for b in range(r):
            pair = sum(
                data.lifts[a][i] * lattice.gram[i][j] * data.lifts[b][j]
                for i in range(k)
                for j in range(k)
            )
            mat[a][b] = pair / 2
    return make_qform(data.group, mat)


def to_pointed_gv(lattice: LatticeData) -> PointedGVCategory:
    """The pointed category of the lattice data, with h0 the class of xi."""
    data = discriminant_data(lattice)
    q = discriminant_form(lattice)
    h0 = data.element_of(lattice, lattice.xi)
    return make_category(data.group, q, h0)
