"""Shared oracles and generators for the test suite.

The oracles here deliberately avoid the library's own reduction paths:
minor gcds come from fraction-free determinants, section existence from
element enumeration, so they can cross-check the Smith-normal-form
machinery independently.
"""

from __future__ import annotations

import itertools
from math import gcd

import pytest

from kobstruct import FgAbGroup, GroupHom, IntMatrix, determinant
from kobstruct.catalog import catalog_entries


def random_matrix(rng, max_dim=6, lo=-20, hi=20):
    rows = rng.randrange(0, max_dim + 1)
    cols = rng.randrange(0, max_dim + 1)
    data = [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
    return IntMatrix(data, cols=cols)


def minors_gcd_diagonal(m: IntMatrix):
    """Expected Smith diagonal via determinantal divisors: the k-th
    entry is g_k / g_(k-1) with g_k the gcd of all k x k minors."""
    n = min(m.rows, m.cols)
    diag = []
    prev = 1
    for k in range(1, n + 1):
        g = 0
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                sub = IntMatrix(
                    [[m[i, j] for j in cols] for i in rows], cols=k
                )
                g = gcd(g, determinant(sub))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            diag.extend([0] * (n - len(diag)))
            break
        diag.append(g // prev)
        prev = g
    return diag


def is_unimodular(m: IntMatrix) -> bool:
    return m.rows == m.cols and abs(determinant(m)) == 1


def random_unimodular(rng, n, steps=12):
    """A random product of elementary integer row operations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n else 0):
        op = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if op == 0 and i != j:
            q = rng.randint(-3, 3)
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
        elif op == 1 and i != j:
            rows[i], rows[j] = rows[j], rows[i]
        elif op == 2:
            rows[i] = [-a for a in rows[i]]
    return IntMatrix(rows, cols=n)


def random_finite_group(rng, max_order=24, max_factors=2):
    """A random finite abelian group of order at most max_order."""
    factors = []
    order = 1
    for _ in range(rng.randrange(0, max_factors + 1)):
        d = rng.randint(2, max_order)
        if order * d > max_order:
            continue
        factors.append(d)
        order *= d
    return FgAbGroup(0, factors)


def random_element(rng, group):
    coords = [rng.randint(-5, 5) for _ in range(group.rank)]
    coords += [rng.randrange(d) for d in group.torsion]
    return group.element(coords)


def random_hom(rng, source: FgAbGroup, target: FgAbGroup) -> GroupHom:
    """A uniformly scattered well-defined hom between canonical groups.

    Free generators map anywhere; a torsion generator of order d maps
    to an element of the d-torsion subgroup of the target.
    """
    cols = []
    for k in range(source.ngens):
        d = 0 if k < source.rank else source.torsion[k - source.rank]
        col = []
        for r in range(target.ngens):
            if r < target.rank:
                col.append(rng.randint(-4, 4) if d == 0 else 0)
            else:
                e = target.torsion[r - target.rank]
                if d == 0:
                    col.append(rng.randrange(e))
                else:
                    step = e // gcd(d, e)
                    col.append(step * rng.randrange(e // step))
        cols.append(col)
    return GroupHom(source, target, IntMatrix.from_columns(cols, target.ngens))


def exhaustive_section_exists(f: GroupHom) -> bool:
    """Element-enumeration oracle for right-inverse existence.

    Valid whenever the source of the candidate section's images (the
    source group of f) is finite.  A hom out of the target is freely
    determined by generator images subject to per-generator conditions,
    so column-wise search is exhaustive.
    """
    g, h = f.source, f.target
    if not g.is_finite:
        raise ValueError("oracle needs a finite source group")
    for k in range(h.ngens):
        d = 0 if k < h.rank else h.torsion[k - h.rank]
        gen = h.generator(k)
        for cand in g.elements():
            if f(cand) == gen and (d == 0 or (d * cand).is_zero):
                break
        else:
            return False
    return True


@pytest.fixture(scope="session")
def catalog():
    return catalog_entries()
