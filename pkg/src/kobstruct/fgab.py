"""Exact arithmetic for finitely generated abelian groups.

The engine underneath everything here is the Smith normal form of an
integer matrix, computed exactly with Python's unbounded integers.  On
top of it sit canonical invariant-factor forms, group elements with
reduced coordinates, integer-matrix homomorphisms, tensor and Tor,
quotients, and solvers for divisibility and section (right inverse)
problems.

Conventions
-----------
* A group is stored as ``Z^rank  (+)  Z/d1 (+) ... (+) Z/dk`` with the
  invariant factors forming a divisibility chain d1 | d2 | ... | dk.
  Two groups are isomorphic exactly when they are field-equal.
* Element coordinates list the free coordinates first, then one
  coordinate per invariant factor, always reduced into [0, d).
* A homomorphism is a matrix against canonical generators; column j is
  the image of the j-th generator of the source, written in target
  coordinates.
* A presentation's relation matrix has one row per generator and one
  column per relation (the matrix of the map Z^relations -> Z^generators).

All values are immutable and every operation is a pure function, so
everything can be shared freely across threads.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, inf, lcm

__all__ = [
    "GroupMismatchError",
    "IntMatrix",
    "FgAbGroup",
    "GroupElement",
    "GroupHom",
    "smith_normal_form",
    "determinant",
    "canonicalize",
    "direct_sum",
    "direct_sum_many",
    "quotient_by",
    "tensor",
    "tor",
    "tensor_elem",
    "compose",
    "cokernel",
    "is_surjective",
    "is_injective",
    "right_inverse_exists",
    "constrained_section_exists",
    "solve_divisibility",
    "element_order",
]


class GroupMismatchError(ValueError):
    """An element, constraint, or hom was used with the wrong group."""


# ---------------------------------------------------------------------------
# Integer matrices


class IntMatrix:
    """An immutable integer matrix with unbounded entries, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols=None):
        data = tuple(tuple(int(e) for e in row) for row in data)
        rows = len(data)
        if rows:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows in matrix")
            if cols is not None and cols != width:
                raise ValueError("cols does not match row width")
            cols = width
        elif cols is None:
            cols = 0
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", int(cols))
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns, rows):
        """Build a matrix of shape (rows, len(columns)) from column vectors."""
        columns = [tuple(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("column of wrong length")
        return cls([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return IntMatrix(
            [self.data[i] + other.data[i] for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in matrix product")
            ot = list(zip(*other.data)) if other.data else [()] * other.cols
            out = []
            for row in self.data:
                out.append(
                    [sum(a * b for a, b in zip(row, col)) for col in ot]
                    if other.cols
                    else []
                )
            return IntMatrix(out or [[] for _ in range(self.rows)], cols=other.cols)
        # matrix @ vector
        vec = tuple(other)
        if self.cols != len(vec):
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.data)

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch in matrix sum")
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            cols=self.cols,
        )

    def __neg__(self):
        return IntMatrix([[-e for e in row] for row in self.data], cols=self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]!r})"

    def to_json(self):
        return [list(row) for row in self.data]


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(row) for row in m.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def _snf_engine(m: IntMatrix):
    """Diagonalize m, returning (u, uinv, d, v) with d = u m v.

    u and v are unimodular; d is diagonal, nonnegative, and its entries
    form a divisibility chain.  The pivot strategy is deterministic:
    smallest nonzero absolute value, ties broken row-major, moved into
    place by cyclic rotation so untouched generators keep their relative
    order.
    """
    nrows, ncols = m.rows, m.cols
    a = [list(row) for row in m.data]
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    uinv = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def row_add(i, t, q):
        # row_i += q * row_t; keep uinv = u^{-1} via the inverse column op
        ai, at = a[i], a[t]
        for c in range(ncols):
            ai[c] += q * at[c]
        ui, ut = u[i], u[t]
        for c in range(nrows):
            ui[c] += q * ut[c]
        for r in range(nrows):
            uinv[r][t] -= q * uinv[r][i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in range(nrows):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def row_negate(t):
        a[t] = [-e for e in a[t]]
        u[t] = [-e for e in u[t]]
        for r in range(nrows):
            uinv[r][t] = -uinv[r][t]

    def col_add(j, k, q):
        # col_j += q * col_k
        for r in range(nrows):
            a[r][j] += q * a[r][k]
        for r in range(ncols):
            v[r][j] += q * v[r][k]

    def col_swap(j, k):
        for r in range(nrows):
            a[r][j], a[r][k] = a[r][k], a[r][j]
        for r in range(ncols):
            v[r][j], v[r][k] = v[r][k], v[r][j]

    def rotate_row_to(t, i):
        for k in range(i, t, -1):
            row_swap(k, k - 1)

    def rotate_col_to(t, j):
        for k in range(j, t, -1):
            col_swap(k, k - 1)

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        best = None
        best_abs = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                e = a[i][j]
                if e and (best is None or abs(e) < best_abs):
                    best = (i, j)
                    best_abs = abs(e)
        if best is None:
            break
        rotate_row_to(t, best[0])
        rotate_col_to(t, best[1])
        while True:
            dirty = False
            for i in range(nrows):
                if i != t and a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_add(i, t, -q)
                    if a[i][t]:
                        # remainder is a strictly smaller pivot candidate
                        row_swap(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(ncols):
                if j != t and a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_add(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # pivot must divide the whole remaining submatrix
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if a[t][t] < 0:
            row_negate(t)
        t += 1
    return u, uinv, a, v


def smith_normal_form(m: IntMatrix):
    """Return (u, d, v) with d = u @ m @ v in Smith normal form.

    u and v are unimodular and the diagonal of d is nonnegative with
    d1 | d2 | ... .  Empty and zero matrices are fine.

    >>> u, d, v = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> [d[0, 0], d[1, 1]]
    [2, 4]
    """
    u, _, d, v = _snf_engine(m)
    return (
        IntMatrix(u, cols=m.rows),
        IntMatrix(d, cols=m.cols),
        IntMatrix(v, cols=m.cols),
    )


def _solve_linear(rows: list[list[int]], rhs: list[int], unknowns: int):
    """One integer solution x of (rows) @ x = rhs, or None.

    ``rows`` is a dense list of equation rows, each of length
    ``unknowns``; solved exactly through the Smith normal form.
    """
    m = IntMatrix(rows, cols=unknowns)
    u, d, v = smith_normal_form(m)
    c = u @ tuple(rhs) if m.rows else ()
    y = [0] * unknowns
    for i in range(m.rows):
        di = d[i, i] if i < unknowns else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            y[i] = c[i] // di
    if unknowns == 0:
        return []
    return list(v @ tuple(y))


# ---------------------------------------------------------------------------
# Groups, elements, homomorphisms


class FgAbGroup:
    """A finitely generated abelian group in invariant-factor form.

    ``FgAbGroup(rank, torsion)`` normalizes its input: zero factors are
    absorbed into the rank, units +-1 are dropped, signs are forgotten,
    and an arbitrary factor list is merged into a divisibility chain.
    As a result two groups are isomorphic iff they compare equal.

    >>> FgAbGroup(0, (2, 3)) == FgAbGroup(0, (6,))
    True
    >>> FgAbGroup(1, (4, 0, 1))
    FgAbGroup(2, (4,))
    """

    __slots__ = ("rank", "torsion")

    def __init__(self, rank=0, torsion=()):
        rank = int(rank)
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        factors = [abs(int(d)) for d in torsion]
        rank += factors.count(0)
        factors = [d for d in factors if d > 1]
        while True:
            factors.sort()
            changed = False
            for i in range(len(factors) - 1):
                x, y = factors[i], factors[i + 1]
                if y % x:
                    factors[i], factors[i + 1] = gcd(x, y), lcm(x, y)
                    changed = True
            factors = [d for d in factors if d > 1]
            if not changed:
                break
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "torsion", tuple(factors))

    def __setattr__(self, name, value):
        raise AttributeError("FgAbGroup is immutable")

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def is_finite(self):
        return self.rank == 0

    def torsion_order(self):
        """Order of the torsion subgroup (1 when torsion-free)."""
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def torsion_part(self):
        return FgAbGroup(0, self.torsion)

    def free_part(self):
        return FgAbGroup(self.rank)

    def relation_matrix(self):
        """One column d_i * e_(rank+i) per invariant factor."""
        cols = []
        for i, d in enumerate(self.torsion):
            col = [0] * self.ngens
            col[self.rank + i] = d
            cols.append(col)
        return IntMatrix.from_columns(cols, self.ngens)

    def reduce(self, coords):
        coords = [int(c) for c in coords]
        if len(coords) != self.ngens:
            raise GroupMismatchError(
                f"expected {self.ngens} coordinates, got {len(coords)}"
            )
        for i, d in enumerate(self.torsion):
            coords[self.rank + i] %= d
        return tuple(coords)

    def element(self, coords):
        return GroupElement(self, coords)

    def zero(self):
        return GroupElement(self, (0,) * self.ngens)

    def generator(self, k):
        coords = [0] * self.ngens
        coords[k] = 1
        return GroupElement(self, coords)

    def generators(self):
        return [self.generator(k) for k in range(self.ngens)]

    def elements(self):
        """Iterate over all elements; the group must be finite."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")

        def rec(prefix, factors):
            if not factors:
                yield self.element(prefix)
                return
            for c in range(factors[0]):
                yield from rec(prefix + [c], factors[1:])

        yield from rec([], list(self.torsion))

    def __eq__(self, other):
        return (
            isinstance(other, FgAbGroup)
            and self.rank == other.rank
            and self.torsion == other.torsion
        )

    def __hash__(self):
        return hash((self.rank, self.torsion))

    def __repr__(self):
        return f"FgAbGroup({self.rank}, {self.torsion})"

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["rank"], obj.get("torsion", ()))


class GroupElement:
    """An element of an FgAbGroup, coordinates always reduced."""

    __slots__ = ("group", "coords")

    def __init__(self, group, coords):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coords", group.reduce(coords))

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise GroupMismatchError("elements belong to different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(
            self.group, [a + b for a, b in zip(self.coords, other.coords)]
        )

    def __sub__(self, other):
        self._check(other)
        return GroupElement(
            self.group, [a - b for a, b in zip(self.coords, other.coords)]
        )

    def __neg__(self):
        return GroupElement(self.group, [-a for a in self.coords])

    def __mul__(self, n):
        return GroupElement(self.group, [int(n) * a for a in self.coords])

    __rmul__ = __mul__

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def order(self):
        """Exact order of the element; math.inf when infinite."""
        g = self.group
        if any(self.coords[: g.rank]):
            return inf
        n = 1
        for d, c in zip(g.torsion, self.coords[g.rank :]):
            if c:
                n = lcm(n, d // gcd(d, c))
        return n

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.group == other.group
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.group, self.coords))

    def __repr__(self):
        return f"GroupElement({self.group!r}, {self.coords})"

    def __str__(self):
        return str(list(self.coords))

    def to_json(self):
        return {"coords": list(self.coords)}


def element_order(x: GroupElement):
    """Order of x in its group: a positive integer, or math.inf.

    >>> element_order(FgAbGroup(1).element((1,)))
    inf
    >>> element_order(FgAbGroup(1, (4,)).element((0, 1)))
    4
    """
    return x.order()


class GroupHom:
    """A homomorphism between canonical groups, as an integer matrix.

    Column j holds the image of the j-th source generator in target
    coordinates.  Construction verifies well-definedness: each torsion
    generator of order d must map to an element killed by d.  Columns
    are stored reduced, so hom equality is plain field equality.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix):
        if matrix.rows != target.ngens or matrix.cols != source.ngens:
            raise ValueError(
                f"hom matrix must be {target.ngens} x {source.ngens}, "
                f"got {matrix.rows} x {matrix.cols}"
            )
        reduced = IntMatrix.from_columns(
            [target.reduce(matrix.column(j)) for j in range(matrix.cols)],
            target.ngens,
        )
        for i, d in enumerate(source.torsion):
            col = reduced.column(source.rank + i)
            if any(target.reduce([d * c for c in col])):
                raise ValueError(
                    f"not a well-defined hom: generator of order {d} maps to "
                    f"an element not killed by {d}"
                )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", reduced)

    def __setattr__(self, name, value):
        raise AttributeError("GroupHom is immutable")

    @classmethod
    def identity(cls, g):
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    @classmethod
    def from_images(cls, source, target, images):
        for img in images:
            if img.group != target:
                raise GroupMismatchError("image element lies in the wrong group")
        return cls(
            source,
            target,
            IntMatrix.from_columns([img.coords for img in images], target.ngens),
        )

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise GroupMismatchError("element is not in the source group")
        return GroupElement(self.target, self.matrix @ x.coords)

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise GroupMismatchError("hom sum needs matching source and target")
        return GroupHom(self.source, self.target, self.matrix + other.matrix)

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r}, {self.matrix!r})"

    def to_json(self):
        return {"matrix": self.matrix.to_json()}


def compose(f: GroupHom, g: GroupHom) -> GroupHom:
    """The composite g after f, i.e. (g . f)(x) = g(f(x)).

    >>> two = GroupHom(FgAbGroup(1), FgAbGroup(1), IntMatrix([[2]]))
    >>> three = GroupHom(FgAbGroup(1), FgAbGroup(1), IntMatrix([[3]]))
    >>> compose(two, three).matrix[0, 0]
    6
    """
    if f.target != g.source:
        raise GroupMismatchError("compose: target of f must be source of g")
    return GroupHom(f.source, g.target, g.matrix @ f.matrix)


# ---------------------------------------------------------------------------
# Presentations and canonical forms


@lru_cache(maxsize=None)
def _canonicalize_full(generators: int, relations: IntMatrix):
    """Canonical form of Z^generators / columnspan(relations).

    Returns (group, to_canon, lift): ``to_canon`` maps old generator
    coordinates to canonical coordinates, ``lift`` picks an old-
    coordinate representative for each canonical generator, and
    to_canon @ lift is the identity.
    """
    if relations.rows != generators:
        raise ValueError(
            "relation matrix must have one row per generator "
            f"({generators}), got {relations.rows}"
        )
    u, uinv, d, _ = _snf_engine(relations)
    diag = [d[i][i] for i in range(min(generators, relations.cols))]
    free_pos = [i for i in range(generators) if i >= len(diag) or diag[i] == 0]
    tors_pos = [i for i in range(len(diag)) if diag[i] > 1]
    # orient free generators: first nonzero coefficient positive (the
    # corresponding rows of d are zero, so d = u m v is preserved)
    for p in free_pos:
        lead = next((e for e in u[p] if e), 0)
        if lead < 0:
            u[p] = [-e for e in u[p]]
            for r in range(generators):
                uinv[r][p] = -uinv[r][p]
    group = FgAbGroup(len(free_pos), tuple(diag[i] for i in tors_pos))
    order = free_pos + tors_pos
    to_canon = IntMatrix([u[p] for p in order] or [], cols=generators)
    lift = IntMatrix.from_columns([[uinv[r][p] for r in range(generators)] for p in order], generators)
    return group, to_canon, lift


def canonicalize(generators: int, relations: IntMatrix):
    """Canonical form of Z^generators modulo the columns of ``relations``.

    Returns (group, basis_change) where basis_change is the hom from
    Z^generators onto the canonical group, sending old coordinates to
    canonical coordinates.

    >>> g, _ = canonicalize(2, IntMatrix([[2], [-3]]))
    >>> g
    FgAbGroup(1, ())
    >>> g, _ = canonicalize(2, IntMatrix([[2], [-2]]))
    >>> g
    FgAbGroup(1, (2,))
    """
    group, to_canon, _ = _canonicalize_full(generators, relations)
    free = FgAbGroup(generators)
    return group, GroupHom(free, group, to_canon)


@lru_cache(maxsize=None)
def _direct_sum_structure(groups: tuple):
    """Canonical direct sum with injection and projection homs."""
    total = sum(g.ngens for g in groups)
    cols = []
    offset = 0
    for g in groups:
        rel = g.relation_matrix()
        for j in range(rel.cols):
            col = [0] * total
            for r, e in enumerate(rel.column(j)):
                col[offset + r] = e
            cols.append(col)
        offset += g.ngens
    sum_group, to_canon, lift = _canonicalize_full(
        total, IntMatrix.from_columns(cols, total)
    )
    injections = []
    projections = []
    offset = 0
    for g in groups:
        inj_cols = [to_canon.column(offset + j) for j in range(g.ngens)]
        injections.append(
            GroupHom(g, sum_group, IntMatrix.from_columns(inj_cols, sum_group.ngens))
        )
        proj_rows = [lift.row(offset + r) for r in range(g.ngens)]
        projections.append(
            GroupHom(sum_group, g, IntMatrix(proj_rows or [], cols=sum_group.ngens))
        )
        offset += g.ngens
    return sum_group, tuple(injections), tuple(projections)


def direct_sum_many(groups):
    """Canonical form of g1 (+) ... (+) gn with injections/projections."""
    return _direct_sum_structure(tuple(groups))


def direct_sum(g: FgAbGroup, h: FgAbGroup):
    """Canonical g (+) h together with its four structure maps.

    Returns (sum, inj_g, inj_h, proj_g, proj_h) with proj . inj = id.

    >>> s, *_ = direct_sum(FgAbGroup(0, (2,)), FgAbGroup(0, (3,)))
    >>> s
    FgAbGroup(0, (6,))
    """
    s, (inj_g, inj_h), (proj_g, proj_h) = _direct_sum_structure((g, h))
    return s, inj_g, inj_h, proj_g, proj_h


def _quotient_full(g: FgAbGroup, x: GroupElement):
    if x.group != g:
        raise GroupMismatchError("quotient element is not in the group")
    rel = g.relation_matrix().hstack(IntMatrix.from_columns([x.coords], g.ngens))
    q, to_canon, lift = _canonicalize_full(g.ngens, rel)
    return q, GroupHom(g, q, to_canon), lift


def quotient_by(g: FgAbGroup, x: GroupElement):
    """Canonical form of g / <x> and the projection hom.

    >>> z4 = FgAbGroup(4)
    >>> q, proj = quotient_by(z4, z4.element((1, 1, -1, -1)))
    >>> q
    FgAbGroup(3, ())
    """
    q, proj, _ = _quotient_full(g, x)
    return q, proj


# ---------------------------------------------------------------------------
# Tensor and Tor


def tensor(g: FgAbGroup, h: FgAbGroup) -> FgAbGroup:
    """Canonical form of the tensor product over Z.

    Distributes over the cyclic decomposition: Z (x) G = G and
    Z/d (x) Z/e = Z/gcd(d, e).

    >>> tensor(FgAbGroup(0, (2,)), FgAbGroup(0, (3,)))
    FgAbGroup(0, ())
    """
    factors = [gcd(d, e) for d in g.torsion for e in h.torsion]
    factors += list(g.torsion) * h.rank
    factors += list(h.torsion) * g.rank
    return FgAbGroup(g.rank * h.rank, factors)


def tor(g: FgAbGroup, h: FgAbGroup) -> FgAbGroup:
    """Canonical form of Tor_1(g, h): free parts vanish, cyclic parts
    contribute Z/gcd(d, e).

    >>> tor(FgAbGroup(0, (2,)), FgAbGroup(0, (4,)))
    FgAbGroup(0, (2,))
    """
    return FgAbGroup(0, [gcd(d, e) for d in g.torsion for e in h.torsion])


@lru_cache(maxsize=None)
def _tensor_structure(g: FgAbGroup, h: FgAbGroup):
    """Canonicalized Kronecker presentation of g (x) h.

    Generator (i, j) of the presentation is u_i (x) v_j at flat index
    i * h.ngens + j; the returned matrix maps those Kronecker
    coordinates onto canonical coordinates of tensor(g, h).
    """
    n = g.ngens * h.ngens
    cols = []
    for i, d in enumerate(g.torsion):
        p = g.rank + i
        for j in range(h.ngens):
            col = [0] * n
            col[p * h.ngens + j] = d
            cols.append(col)
    for j, e in enumerate(h.torsion):
        q = h.rank + j
        for i in range(g.ngens):
            col = [0] * n
            col[i * h.ngens + q] = e
            cols.append(col)
    group, to_canon, _ = _canonicalize_full(n, IntMatrix.from_columns(cols, n))
    return group, to_canon


def tensor_elem(x: GroupElement, y: GroupElement) -> GroupElement:
    """The image of x (x) y in tensor(x.group, y.group).

    Computed through the Kronecker presentation, so it is bilinear and
    consistent across calls for the same pair of groups.

    >>> z = FgAbGroup(1)
    >>> tensor_elem(z.element((2,)), z.element((3,))).coords
    (6,)
    """
    g, h = x.group, y.group
    tg, to_canon = _tensor_structure(g, h)
    kron = [a * b for a in x.coords for b in y.coords]
    return GroupElement(tg, to_canon @ tuple(kron))


# ---------------------------------------------------------------------------
# Exact questions about homs


def cokernel(f: GroupHom) -> FgAbGroup:
    """Canonical form of target / image."""
    stacked = f.matrix.hstack(f.target.relation_matrix())
    group, _, _ = _canonicalize_full(f.target.ngens, stacked)
    return group


def is_surjective(f: GroupHom) -> bool:
    """Exact surjectivity test: trivial cokernel.

    >>> z = FgAbGroup(1)
    >>> is_surjective(GroupHom(z, z, IntMatrix([[2]])))
    False
    """
    return cokernel(f).is_trivial


def is_injective(f: GroupHom) -> bool:
    """Exact injectivity test: trivial kernel modulo source relations."""
    stacked = f.matrix.hstack(f.target.relation_matrix())
    _, d, v = smith_normal_form(stacked)
    rank = sum(
        1
        for i in range(min(stacked.rows, stacked.cols))
        if d[i, i] != 0
    )
    sg = f.source.ngens
    for j in range(rank, stacked.cols):
        col = v.column(j)
        if any(f.source.reduce(col[:sg])):
            return False
    return True


def _section_column(f: GroupHom, j: int):
    """An admissible image for the j-th target generator under a section
    of f, or None.  Solves f(x) = e_j together with the torsion
    condition d_j * x = 0 when generator j has finite order d_j."""
    g, h = f.source, f.target
    sg = g.ngens
    rel_g, rel_h = g.relation_matrix(), h.relation_matrix()
    kg, kh = rel_g.cols, rel_h.cols
    d = 0 if j < h.rank else h.torsion[j - h.rank]
    total = sg + kh + (kg if d else 0)
    rows = []
    rhs = []
    for p in range(h.ngens):
        row = [0] * total
        for r in range(sg):
            row[r] = f.matrix[p, r]
        for c in range(kh):
            row[sg + c] = rel_h[p, c]
        rows.append(row)
        rhs.append(1 if p == j else 0)
    if d:
        for r in range(sg):
            row = [0] * total
            row[r] = d
            for c in range(kg):
                row[sg + kh + c] = rel_g[r, c]
            rows.append(row)
            rhs.append(0)
    sol = _solve_linear(rows, rhs, total)
    return None if sol is None else sol[:sg]


def constrained_section_exists(f: GroupHom, constraints=()):
    """A right inverse s of f with prescribed extra images, if one exists.

    Each constraint is a pair (t, w) with t in f.target and w in
    f.source; the returned hom satisfies f . s = id and s(t) = w for
    every constraint.  Decided exactly over the integers: without
    constraints the section conditions decouple and are solved one
    target generator at a time; constraints tie the columns together
    into one joint linear system in the unknown matrix entries of s.
    """
    g, h = f.source, f.target
    pairs = []
    for t, w in constraints:
        if not isinstance(t, GroupElement) or t.group != h:
            raise GroupMismatchError("constraint target lies outside f.target")
        if not isinstance(w, GroupElement) or w.group != g:
            raise GroupMismatchError("constraint image lies outside f.source")
        pairs.append((t, w))

    if not pairs:
        cols = []
        for j in range(h.ngens):
            col = _section_column(f, j)
            if col is None:
                return None
            cols.append(col)
        return GroupHom(h, g, IntMatrix.from_columns(cols, g.ngens))

    sg, hg = g.ngens, h.ngens
    rel_g = g.relation_matrix()
    rel_h = h.relation_matrix()
    kg, kh = rel_g.cols, rel_h.cols

    # unknowns: s entries column-major, then one relation-multiplier block
    # per section equation, torsion condition, and constraint
    off_y = sg * hg
    off_z = off_y + hg * kh
    off_w = off_z + len(h.torsion) * kg
    total = off_w + len(pairs) * kg

    rows = []
    rhs = []

    def s_index(row, col):
        return col * sg + row

    # f(s(e_j)) = e_j in h, for every target generator j
    for j in range(hg):
        for p in range(hg):
            row = [0] * total
            for r in range(sg):
                row[s_index(r, j)] = f.matrix[p, r]
            for c in range(kh):
                row[off_y + j * kh + c] = rel_h[p, c]
            rows.append(row)
            rhs.append(1 if p == j else 0)

    # d_j * s(e_j) = 0 in g, for every torsion generator j of h
    for tix, d in enumerate(h.torsion):
        j = h.rank + tix
        for r in range(sg):
            row = [0] * total
            row[s_index(r, j)] = d
            for c in range(kg):
                row[off_z + tix * kg + c] = rel_g[r, c]
            rows.append(row)
            rhs.append(0)

    # s(t) = w for every constraint
    for cix, (t, w) in enumerate(pairs):
        for r in range(sg):
            row = [0] * total
            for j in range(hg):
                row[s_index(r, j)] = t.coords[j]
            for c in range(kg):
                row[off_w + cix * kg + c] = rel_g[r, c]
            rows.append(row)
            rhs.append(w.coords[r])

    sol = _solve_linear(rows, rhs, total)
    if sol is None:
        return None
    cols = [[sol[s_index(r, j)] for r in range(sg)] for j in range(hg)]
    return GroupHom(h, g, IntMatrix.from_columns(cols, sg))


def right_inverse_exists(f: GroupHom):
    """A hom s with f . s = id on f.target, or None if none exists.

    >>> z = FgAbGroup(1)
    >>> right_inverse_exists(GroupHom(z, FgAbGroup(0, (2,)), IntMatrix([[1]]))) is None
    True
    """
    return constrained_section_exists(f, ())


def solve_divisibility(g: FgAbGroup, target: GroupElement, n: int):
    """An element x of g with n*x = target, or None.

    >>> z = FgAbGroup(1)
    >>> solve_divisibility(z, z.element((6,)), 2).coords
    (3,)
    >>> solve_divisibility(z, z.element((1,)), 2) is None
    True
    """
    if target.group != g:
        raise GroupMismatchError("target element is not in the group")
    if n < 1:
        raise ValueError("n must be a positive integer")
    rel = g.relation_matrix()
    sg, kg = g.ngens, rel.cols
    rows = []
    for r in range(sg):
        row = [0] * (sg + kg)
        row[r] = n
        for c in range(kg):
            row[sg + c] = rel[r, c]
        rows.append(row)
    sol = _solve_linear(rows, list(target.coords), sg + kg)
    if sol is None:
        return None
    return GroupElement(g, sol[:sg])
