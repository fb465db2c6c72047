"""Shared fixtures and generators for the test suite."""

from fractions import Fraction

import pytest

import gvblocks as gv


def make_pointed(factors, matrix, h0):
    group = gv.make_group(factors)
    q = gv.make_qform(group, matrix)
    return gv.make_category(group, q, h0)


@pytest.fixture
def semion():
    return make_pointed([2], [[Fraction(1, 4)]], (0,))


@pytest.fixture
def z3():
    return make_pointed([3], [[Fraction(1, 3)]], (0,))


@pytest.fixture
def z8_ff():
    # Feigin-Fuchs style: q(k) = k^2/16 with h0 = 1, so g0 = 2
    return make_pointed([8], [[Fraction(1, 16)]], (1,))


@pytest.fixture
def klein():
    return make_pointed([2, 2], [[0, Fraction(1, 4)], [Fraction(1, 4), 0]], (0, 0))


@pytest.fixture
def trivial_cat():
    return make_pointed([1], [[0]], (0,))


@pytest.fixture
def z2_flat():
    # q = 0: fully transparent category
    return make_pointed([2], [[0]], (0,))


def random_qform(rng, group):
    """A uniformly random well-defined quadratic form on the group."""
    factors = group.invariant_factors
    k = group.rank
    mat = [[Fraction(0)] * k for _ in range(k)]
    for i, n in enumerate(factors):
        choices = [Fraction(t, 2 * n) for t in range(2 * n) if (n * t) % 2 == 0]
        mat[i][i] = rng.choice(choices)
    for i in range(k):
        for j in range(i + 1, k):
            import math

            g = math.gcd(factors[i], factors[j])
            mat[i][j] = mat[j][i] = Fraction(rng.randrange(g), 2 * g)
    return gv.make_qform(group, mat)


def group_shapes(max_order):
    """All invariant-factor chains d1 | d2 | ... with product <= max_order."""
    out = []

    def rec(chain, prod):
        if chain:
            out.append(tuple(chain))
        d = chain[-1] if chain else 2
        while prod * d <= max_order:
            if d % (chain[-1] if chain else 1) == 0:
                rec(chain + [d], prod * d)
            d += 1

    rec([], 1)
    return out


def random_graph(rng, max_vertices=8, max_degree=4):
    """Random half-edge graph: random degrees, random partial pairing."""
    nv = rng.randint(1, max_vertices)
    vhe = {}
    counter = 0
    halves = []
    for i in range(nv):
        deg = rng.randint(0, max_degree)
        hs = [f"h{counter + t}" for t in range(deg)]
        counter += deg
        vhe[f"v{i}"] = hs
        halves.extend(hs)
    rng.shuffle(halves)
    n_edges = rng.randint(0, len(halves) // 2)
    edges = [(halves[2 * i], halves[2 * i + 1]) for i in range(n_edges)]
    return gv.make_graph(vhe, edges)


def attach_morphism(corollas, leg_pairs):
    """Morphism out of the given corollas that glues the listed leg pairs.

    ``leg_pairs`` is a list of ((cid, leg), (cid, leg)) pairs; legs not
    mentioned stay free.
    """
    vhe = {c.id: [f"{c.id}|{leg}" for leg in c.legs] for c in corollas}
    edges = [
        (f"{c1}|{l1}", f"{c2}|{l2}") for (c1, l1), (c2, l2) in leg_pairs
    ]
    g = gv.make_graph(vhe, edges)
    src = {(c.id, leg): f"{c.id}|{leg}" for c in corollas for leg in c.legs}
    target = gv.contract_edges(g)
    tgt = {(c.id, leg): leg for c in target for leg in c.legs}
    return gv.make_morphism(corollas, target, g, src, tgt)


def random_leg_pairing(rng, corollas, max_pairs=None):
    """A random set of disjoint leg pairs across the given corollas."""
    keys = [(c.id, leg) for c in corollas for leg in c.legs]
    rng.shuffle(keys)
    limit = len(keys) // 2 if max_pairs is None else min(max_pairs, len(keys) // 2)
    n = rng.randint(0, limit)
    return [(keys[2 * i], keys[2 * i + 1]) for i in range(n)]


def glued_dim_oracle(C, pd, labels):
    """Brute-force gluing count, independent of the library contraction."""
    import itertools

    group = C.group
    label_of_leg = {h: group.reduce(labels[i]) for h, i in pd.leg_map.items()}
    edges = list(pd.dual.pairing)
    total = 0
    for assign in itertools.product(group.sorted_elements, repeat=len(edges)):
        val = {}
        for (a, b), e in zip(edges, assign):
            val[a] = e
            val[b] = C.dual(e)
        ok = True
        for v in pd.dual.vertices:
            s = group.zero
            for h in pd.dual.vertex_half_edges[v]:
                s = group.add(s, label_of_leg[h] if h in label_of_leg else val[h])
            if s != C.g0:
                ok = False
                break
        if ok:
            total += 1
    return total
