"""Surfaces, pants decompositions as trivalent dual graphs, and moves.

A pants decomposition of a genus-g surface with n boundary components is a
connected dual graph in which every vertex has total degree three; legs are
matched with boundary indices.  Only maximal cut systems are modeled; the
moves are the trivalent edge flip and the genus-one S-exchange (which fixes
the dual graph and is only recorded in the move log).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .errors import CapacityError, MoveNotApplicable, ValidationError
from .forms import Element
from .graphs import Graph, canonical_form, genus, make_graph

#: Decomposition enumeration handles complexities 2g - 2 + n in this range.
COMPLEXITY_RANGE = (1, 4)


@dataclass(frozen=True)
class SurfaceSpec:
    """Genus plus ordered boundary labels (group elements; may be empty)."""

    genus: int
    boundary_labels: tuple[Element, ...] = ()

    @property
    def n(self) -> int:
        return len(self.boundary_labels)

    @property
    def complexity(self) -> int:
        return 2 * self.genus - 2 + self.n


def make_surface(genus: int, labels: Sequence[Sequence[int]] = ()) -> SurfaceSpec:
    if genus < 0:
        raise ValidationError("surfaces.bad_genus", f"genus {genus} is negative")
    return SurfaceSpec(int(genus), tuple(tuple(int(c) for c in lab) for lab in labels))


@dataclass(frozen=True)
class PantsDecomposition:
    """Connected trivalent dual graph plus a legs -> boundary-index bijection."""

    dual: Graph
    leg_order: tuple[tuple[str, int], ...]
    moves: tuple[str, ...] = ()

    @cached_property
    def leg_map(self) -> dict[str, int]:
        return dict(self.leg_order)

    @property
    def genus(self) -> int:
        return len(self.dual.pairing) - len(self.dual.vertices) + 1

    @property
    def n(self) -> int:
        return len(self.leg_order)

    @cached_property
    def canonical_key(self):
        return canonical_form(self.dual, leg_marks=self.leg_map)


def make_pants_decomposition(
    dual: Graph, leg_order: Mapping[str, int], moves: Sequence[str] = ()
) -> PantsDecomposition:
    """Validate trivalence, connectedness, and the boundary matching."""
    for v in dual.vertices:
        if dual.degree(v) != 3:
            raise ValidationError(
                "surfaces.not_trivalent", f"vertex {v!r} has degree {dual.degree(v)}, not 3"
            )
    if len(dual.components) != 1:
        raise ValidationError(
            "surfaces.disconnected", f"dual graph has {len(dual.components)} components"
        )
    legs = set(dual.legs)
    order = {str(h): int(i) for h, i in leg_order.items()}
    if set(order) != legs or sorted(order.values()) != list(range(len(legs))):
        raise ValidationError(
            "surfaces.bad_leg_order",
            f"leg order must match the {len(legs)} legs bijectively onto 0..{len(legs) - 1}",
        )
    nv, ne, nl = len(dual.vertices), len(dual.pairing), len(legs)
    if 3 * nv != 2 * ne + nl:
        raise ValidationError(
            "surfaces.count_mismatch", f"3V = {3 * nv} but 2E + L = {2 * ne + nl}"
        )
    g = ne - nv + 1
    if 2 * g - 2 + nl < 1:
        raise ValidationError(
            "surfaces.count_mismatch",
            f"(g, n) = ({g}, {nl}) admits no pants decomposition",
        )
    return PantsDecomposition(dual, tuple(sorted(order.items())), tuple(moves))


def _edge_multisets(n_vertices: int, n_edges: int):
    """Multisets of internal edges over vertex pairs with degree <= 3."""
    pairs = [
        (i, j) for i in range(n_vertices) for j in range(i, n_vertices)
    ]
    degree = [0] * n_vertices

    def rec(idx: int, remaining: int, counts: list[int]):
        if remaining == 0:
            yield counts + [0] * (len(pairs) - idx)
            return
        if idx == len(pairs):
            return
        i, j = pairs[idx]
        step = 2 if i == j else 1
        max_here = remaining
        for m in range(max_here + 1):
            degree[i] += step * m if i == j else m
            if i != j:
                degree[j] += m
            if degree[i] <= 3 and degree[j] <= 3:
                yield from rec(idx + 1, remaining - m, counts + [m])
            degree[i] -= step * m if i == j else m
            if i != j:
                degree[j] -= m

    for counts in rec(0, n_edges, []):
        yield pairs, counts


def enumerate_decompositions(
    spec: SurfaceSpec, cap: int | None = None
) -> list[PantsDecomposition]:
    """All isomorphism classes of pants decompositions of the surface.

    Classes are distinguished up to dual-graph isomorphism preserving the
    boundary marking, sorted by canonical form, truncated at ``cap``.
    """
    out = list(_enumerate_classes(spec.genus, spec.n))
    if cap is not None:
        out = out[:cap]
    return out


def _connected(nv: int, pairs, counts) -> bool:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j), m in zip(pairs, counts):
        if m and i != j:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(nv)}) == 1


@lru_cache(maxsize=64)
def _enumerate_classes(genus: int, n: int) -> tuple[PantsDecomposition, ...]:
    c = 2 * genus - 2 + n
    lo, hi = COMPLEXITY_RANGE
    if not lo <= c <= hi:
        raise CapacityError(
            "surfaces.complexity",
            f"complexity 2g-2+n = {c} outside supported range [{lo}, {hi}]",
        )
    nv = c
    ne = 3 * genus - 3 + n
    perms = list(itertools.permutations(range(nv)))
    seen: set = set()
    reps: list[tuple] = []
    for pairs, counts in _edge_multisets(nv, ne):
        int_degree = [0] * nv
        for (i, j), m in zip(pairs, counts):
            int_degree[i] += m * (2 if i == j else 1)
            if i != j:
                int_degree[j] += m
        leg_capacity = [3 - d for d in int_degree]
        if sum(leg_capacity) != n:
            continue
        if not _connected(nv, pairs, counts):
            continue
        edge_list = [
            (i, j) for (i, j), m in zip(pairs, counts) for _ in range(m)
        ]
        for assignment in _leg_assignments(leg_capacity, n):
            key = min(
                (
                    tuple(
                        sorted(
                            (min(p[i], p[j]), max(p[i], p[j])) for i, j in edge_list
                        )
                    ),
                    tuple(sorted((p[v], idx) for idx, v in enumerate(assignment))),
                )
                for p in perms
            )
            if key not in seen:
                seen.add(key)
                reps.append((edge_list, assignment))
    found = {}
    for edge_list, assignment in reps:
        vhe: dict[str, list[str]] = {f"v{i}": [] for i in range(nv)}
        edges = []
        for t, (i, j) in enumerate(edge_list):
            a, b = f"e{t}a", f"e{t}b"
            vhe[f"v{i}"].append(a)
            vhe[f"v{j}"].append(b)
            edges.append((a, b))
        leg_order = {}
        for idx, v in enumerate(assignment):
            h = f"b{idx}"
            vhe[f"v{v}"].append(h)
            leg_order[h] = idx
        pd = make_pants_decomposition(make_graph(vhe, edges), leg_order)
        assert pd.genus == genus
        found.setdefault(pd.canonical_key, pd)
    return tuple(found[key] for key in sorted(found))


def _leg_assignments(capacity: list[int], n: int):
    """Functions {0..n-1} -> vertices respecting per-vertex leg capacities."""
    nv = len(capacity)
    used = [0] * nv

    def rec(idx: int):
        if idx == n:
            yield tuple()
            return
        for v in range(nv):
            if used[v] < capacity[v]:
                used[v] += 1
                for rest in rec(idx + 1):
                    yield (v,) + rest
                used[v] -= 1

    yield from rec(0)


def _find_edge(pd: PantsDecomposition, half_edge: str) -> tuple[str, str]:
    for a, b in pd.dual.pairing:
        if half_edge in (a, b):
            return a, b
    raise ValidationError(
        "surfaces.unknown_edge", f"{half_edge!r} is not a half-edge of an internal edge"
    )


def whitehead_move(pd: PantsDecomposition, half_edge: str) -> PantsDecomposition:
    """Flip the decomposition at an internal edge joining distinct vertices.

    At the edge (u, v), the remaining half-edges (a, b) at u and (c, d) at v
    (each sorted by label) are re-associated to (a, d) at u and (b, c) at v;
    this convention keeps the three-edge theta configuration self-paired.
    Preserves genus and boundary count.
    """
    a_he, b_he = _find_edge(pd, half_edge)
    g = pd.dual
    u, v = g.attach_map[a_he], g.attach_map[b_he]
    if u == v:
        raise MoveNotApplicable(
            "surfaces.move_not_applicable", f"edge {a_he}-{b_he} is a loop at {u!r}"
        )
    rest_u = sorted(h for h in g.vertex_half_edges[u] if h != a_he)
    rest_v = sorted(h for h in g.vertex_half_edges[v] if h != b_he)
    moved = {rest_u[1]: v, rest_v[1]: u}
    attach = tuple(
        sorted((h, moved.get(h, w)) for h, w in g.attach)
    )
    flipped = Graph(vertices=g.vertices, attach=attach, pairing=g.pairing)
    return make_pants_decomposition(
        flipped, pd.leg_map, moves=pd.moves + (f"F:{a_he}-{b_he}",)
    )


def s_move(pd: PantsDecomposition, half_edge: str) -> PantsDecomposition:
    """Exchange the cut of a genus-one piece with a transversal one.

    Applies to loop edges only.  The dual graph is unchanged up to
    isomorphism; the move is recorded in the log.
    """
    a_he, b_he = _find_edge(pd, half_edge)
    g = pd.dual
    if g.attach_map[a_he] != g.attach_map[b_he]:
        raise MoveNotApplicable(
            "surfaces.move_not_applicable", f"edge {a_he}-{b_he} is not a loop"
        )
    return make_pants_decomposition(
        g, pd.leg_map, moves=pd.moves + (f"S:{a_he}-{b_he}",)
    )
