"""Conformal-block dimensions: direct formula, gluing count, Verlinde.

For a pointed category every simple object x pairs with D(x) to g0, so the
canonical coend collapses to |G| copies of g0 and the dimension for genus g
with boundary labels X_1..X_n is |G|^g when X_1 + ... + X_n + (g-1)*g0 = 0
and zero otherwise.  The gluing count sums over group labelings of the
internal edges of a pants decomposition, one side of each edge carrying e
and the other D(e), with a three-point multiplicity at every vertex.
"""

from __future__ import annotations

import cmath
import math
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapacityError, DegenerateDataError, ValidationError
from .forms import Element
from .pointed import PointedGVCategory
from .surfaces import PantsDecomposition, SurfaceSpec


@dataclass(frozen=True)
class ModularData:
    """Labels with distinguished unit 0, S-matrix, diagonal T-matrix.

    ``conjugation`` is the charge-conjugation permutation as an index tuple;
    for pointed data it realizes x -> -x.  ``elements`` carries the group
    elements when the data comes from a pointed category.
    """

    labels: tuple[str, ...]
    S: np.ndarray
    T: np.ndarray
    conjugation: tuple[int, ...]
    elements: tuple[Element, ...] | None = None
    nondegenerate: bool = True

    @property
    def rank(self) -> int:
        return len(self.labels)


def make_modular_data(
    labels: Sequence[str],
    S,
    T,
    conjugation: Sequence[int],
    elements=None,
    nondegenerate: bool = True,
    tol: float = 1e-9,
) -> ModularData:
    """Validate shape, symmetry of S, unitary diagonal T, and S·S̄ᵀ = 1."""
    S = np.asarray(S, dtype=complex)
    T = np.asarray(T, dtype=complex)
    n = len(labels)
    if S.shape != (n, n) or T.shape != (n, n):
        raise ValidationError("blocks.bad_modular_data", "S and T must be square of label size")
    if np.abs(S - S.T).max() > tol:
        raise ValidationError("blocks.bad_modular_data", "S is not symmetric")
    if np.abs(T - np.diag(np.diag(T))).max() > tol:
        raise ValidationError("blocks.bad_modular_data", "T is not diagonal")
    if np.abs(np.abs(np.diag(T)) - 1).max() > tol:
        raise ValidationError("blocks.bad_modular_data", "T diagonal is not unitary")
    if sorted(conjugation) != list(range(n)):
        raise ValidationError("blocks.bad_modular_data", "conjugation is not a permutation")
    if nondegenerate and np.abs(S @ S.conj().T - np.eye(n)).max() > tol:
        raise ValidationError(
            "blocks.bad_modular_data", "S is not unitary but data is declared non-degenerate"
        )
    return ModularData(
        tuple(str(lab) for lab in labels),
        S,
        T,
        tuple(int(i) for i in conjugation),
        elements=tuple(elements) if elements is not None else None,
        nondegenerate=nondegenerate,
    )


def block_dim_direct(C: PointedGVCategory, spec: SurfaceSpec) -> int:
    """|G|^g when the total boundary degree plus (g-1)*g0 vanishes, else 0."""
    group = C.group
    total = group.zero
    for lab in spec.boundary_labels:
        total = group.add(total, group.reduce(lab))
    total = group.add(total, group.scale(spec.genus - 1, C.g0))
    return group.order**spec.genus if total == group.zero else 0


def pants_multiplicity(C: PointedGVCategory, x, y, z) -> int:
    """Dimension of the three-point space: 1 iff x + y + z = g0."""
    g = C.group
    s = g.add(g.add(g.reduce(x), g.reduce(y)), g.reduce(z))
    return 1 if s == C.g0 else 0


@lru_cache(maxsize=64)
def _group_tables(group):
    elements = group.sorted_elements
    index_of = {x: i for i, x in enumerate(elements)}
    add_table = np.array(
        [[index_of[group.add(x, y)] for y in elements] for x in elements],
        dtype=np.int64,
    )
    return elements, index_of, add_table


def block_dim_glued(
    C: PointedGVCategory, pd: PantsDecomposition, labels: Sequence[Sequence[int]]
) -> int:
    """Factorization count over group labelings of the internal edges.

    Each internal edge carries e on its lexicographically first half and
    D(e) on the other; each vertex contributes the three-point multiplicity
    of its incident values, with legs reading the boundary labels.  A loop
    contributes e + D(e) = g0 for every e and therefore scales the count by
    the group order.
    """
    group = C.group
    if len(labels) != pd.n:
        raise ValidationError(
            "blocks.label_mismatch",
            f"decomposition has {pd.n} boundary legs, got {len(labels)} labels",
        )
    label_of_leg = {h: group.reduce(labels[i]) for h, i in pd.leg_map.items()}
    elements, index_of, add_table = _group_tables(group)
    m = len(elements)
    side_vals = (
        np.arange(m, dtype=np.int64),
        np.array([index_of[C.dual(x)] for x in elements], dtype=np.int64),
    )
    g = pd.dual
    attach = g.attach_map
    loop_count = 0
    real_edges = []
    for a, b in g.pairing:
        if attach[a] == attach[b]:
            loop_count += 1
        else:
            real_edges.append((a, b))
    if len(real_edges) > len(string.ascii_letters):
        raise CapacityError(
            "blocks.capacity", f"{len(real_edges)} internal edges exceed the contraction cap"
        )
    side_of = {}
    for k, (a, b) in enumerate(real_edges):
        side_of[a] = (k, 0)
        side_of[b] = (k, 1)
    g0_idx = index_of[C.g0]
    zero_idx = index_of[group.zero]
    tensors = []
    subscripts = []
    scalar = 1
    loops_at = {v: 0 for v in g.vertices}
    for a, b in g.pairing:
        if attach[a] == attach[b]:
            loops_at[attach[a]] += 1
    for v in g.vertices:
        const_idx = zero_idx
        axes = []
        for h in g.vertex_half_edges[v]:
            if h in label_of_leg:
                const_idx = add_table[const_idx, index_of[label_of_leg[h]]]
            elif h in side_of:
                axes.append(side_of[h])
        for _ in range(loops_at[v]):
            const_idx = add_table[const_idx, g0_idx]
        if not axes:
            if const_idx != g0_idx:
                scalar = 0
            continue
        running = np.asarray(const_idx, dtype=np.int64)
        for k, side in axes:
            running = add_table[running[..., None], side_vals[side][(None,) * running.ndim]]
        tensors.append((running == g0_idx).astype(np.int64))
        subscripts.append("".join(string.ascii_letters[k] for k, _ in axes))
    if scalar == 0:
        return 0
    if tensors:
        total = int(np.einsum(",".join(subscripts) + "->", *tensors))
    else:
        total = 1
    return total * m**loop_count


@dataclass(frozen=True)
class VerlindeReport:
    """Raw Verlinde number with its integer rounding and residual."""

    value: complex
    rounded: int
    residual: float


def verlinde_dim(
    md: ModularData, genus: int, boundary_indices: Sequence[int] = (), tol: float = 1e-9
) -> VerlindeReport:
    """Sum over j of S_0j^(2-2g-n) * prod_k S_{i_k j}."""
    if not md.nondegenerate:
        raise DegenerateDataError("blocks.degenerate", "Verlinde sum needs non-degenerate data")
    s0 = md.S[0]
    if np.abs(s0).min() < tol:
        raise DegenerateDataError("blocks.degenerate", "a vacuum S-matrix entry vanishes")
    n = len(boundary_indices)
    exponent = 2 - 2 * genus - n
    total = np.sum(
        s0**exponent * np.prod([md.S[int(i)] for i in boundary_indices], axis=0)
        if n
        else s0**exponent
    )
    value = complex(total)
    rounded = int(round(value.real))
    return VerlindeReport(value, rounded, abs(value - rounded))


_GOLDEN = (1 + math.sqrt(5)) / 2


def _fibonacci_data() -> ModularData:
    norm = math.sqrt(2 + _GOLDEN)
    S = np.array([[1, _GOLDEN], [_GOLDEN, -1]], dtype=complex) / norm
    T = np.diag([1, cmath.exp(4j * math.pi / 5)])
    return make_modular_data(("1", "tau"), S, T, (0, 1))


def _ising_data() -> ModularData:
    r = math.sqrt(2)
    S = np.array([[1, r, 1], [r, 0, -r], [1, -r, 1]], dtype=complex) / 2
    T = np.diag([1, cmath.exp(1j * math.pi / 8), -1])
    return make_modular_data(("1", "sigma", "psi"), S, T, (0, 1, 2))


def builtin_modular_data(name: str, category: PointedGVCategory | None = None) -> ModularData:
    """Built-in (S, T) tables, relation-checked at load.

    ``"pointed"`` requires the category argument and delegates to the torus
    representation (h0 must vanish and the double braiding must be
    non-degenerate); ``"fibonacci"`` and ``"ising"`` are embedded tables.
    """
    from .torus import check_relations, st_matrices

    name = name.lower()
    if name == "pointed":
        if category is None:
            raise ValidationError(
                "blocks.bad_builtin", "builtin 'pointed' needs a pointed category"
            )
        return st_matrices(category)
    if name == "fibonacci":
        md = _fibonacci_data()
    elif name == "ising":
        md = _ising_data()
    else:
        raise ValidationError("blocks.bad_builtin", f"unknown modular data {name!r}")
    report = check_relations(md, tol=1e-9)
    if not report.passed:
        raise RuntimeError(f"embedded table {name} fails relations: {report}")
    return md
