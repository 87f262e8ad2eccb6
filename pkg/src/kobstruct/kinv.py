"""K-theory invariant triples and the K-groups of composite algebras.

A unital algebra enters as the triple L(A) = (K0, K1, [1_A]).  From two
triples this module computes the K-theory of the tensor product (the
Kunneth formula), of the free product (plain direct sums), and of the
unital free product (a quotient in degree 0 and, when both unit classes
are torsion, an extra indeterminate Z summand in degree 1).  It also
constructs the maps induced on K-theory by the quotient onto the tensor
product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import inf

from .fgab import (
    FgAbGroup,
    GroupElement,
    GroupHom,
    GroupMismatchError,
    IntMatrix,
    compose,
    direct_sum_many,
    tensor,
    tensor_elem,
    tor,
    _quotient_full,
)

__all__ = [
    "KInvariant",
    "KPair",
    "kunneth",
    "free_product_k",
    "unital_free_product_k",
    "pi_star",
    "pi_star_full",
    "K0A_K0B",
    "K1A_K1B",
    "TOR_K0A_K1B",
    "TOR_K1A_K0B",
    "K0A_K1B",
    "K1A_K0B",
    "TOR_K0A_K0B",
    "TOR_K1A_K1B",
    "K0A",
    "K0B",
    "K1A",
    "K1B",
    "EXTRA_Z",
]

# Labels for the summand decompositions of composite K-groups.
K0A_K0B = "K0A(x)K0B"
K1A_K1B = "K1A(x)K1B"
TOR_K0A_K1B = "Tor(K0A,K1B)"
TOR_K1A_K0B = "Tor(K1A,K0B)"
K0A_K1B = "K0A(x)K1B"
K1A_K0B = "K1A(x)K0B"
TOR_K0A_K0B = "Tor(K0A,K0B)"
TOR_K1A_K1B = "Tor(K1A,K1B)"
K0A = "K0A"
K0B = "K0B"
K1A = "K1A"
K1B = "K1B"
EXTRA_Z = "ExtraZ"


@dataclass(frozen=True)
class KInvariant:
    """The triple (K0, K1, unit class) of a unital algebra.

    ``finitely_generated`` is an extension hook: every invariant built
    here is finitely generated by construction, but callers may flag an
    input so the decision layer refuses it cleanly.
    """

    k0: FgAbGroup
    k1: FgAbGroup
    unit: GroupElement
    finitely_generated: bool = True

    def __post_init__(self):
        if self.unit.group != self.k0:
            raise GroupMismatchError("unit class must lie in k0")

    @property
    def unit_order(self):
        return self.unit.order()

    def is_torsion_invariant(self):
        """True when both K-groups are finite."""
        return self.k0.is_finite and self.k1.is_finite

    def __str__(self):
        return f"({self.k0}, {self.k1}, {list(self.unit.coords)})"

    def to_json(self):
        obj = {
            "k0": self.k0.to_json(),
            "k1": self.k1.to_json(),
            "unit": list(self.unit.coords),
        }
        if not self.finitely_generated:
            obj["finitely_generated"] = False
        return obj

    @classmethod
    def from_json(cls, obj):
        k0 = FgAbGroup.from_json(obj["k0"])
        k1 = FgAbGroup.from_json(obj["k1"])
        return cls(
            k0,
            k1,
            k0.element(obj["unit"]),
            finitely_generated=obj.get("finitely_generated", True),
        )


@dataclass(eq=True)
class KPair:
    """K0/K1 of a composite algebra with labeled summand injections.

    ``summands`` maps a label to the injection of that summand into k0
    or k1.  ``extra_z`` marks the indeterminate Z summand of K1 of a
    unital free product of two algebras with torsion unit classes; its
    injection is recorded like the others, but no induced map is ever
    attached to it because none is determined.
    """

    k0: FgAbGroup
    k1: FgAbGroup
    summands: dict[str, GroupHom] = field(default_factory=dict)
    unit: GroupElement | None = None
    extra_z: bool = False

    def to_json(self):
        return {
            "k0": self.k0.to_json(),
            "k1": self.k1.to_json(),
            "unit": list(self.unit.coords) if self.unit is not None else None,
            "summands": {
                name: hom.matrix.to_json() for name, hom in self.summands.items()
            },
            "extra_z": self.extra_z,
        }


def kunneth(a: KInvariant, b: KInvariant) -> KPair:
    """K-theory of the (maximal) tensor product, with unit class.

    Degree 0 is (K0A (x) K0B) + (K1A (x) K1B) + Tor(K0A, K1B)
    + Tor(K1A, K0B); degree 1 swaps the tensor pairings and collects
    Tor(K0A, K0B) + Tor(K1A, K1B).  The unit is [1_A] (x) [1_B] inside
    the first summand.

    >>> from .fgab import FgAbGroup
    >>> z2 = FgAbGroup(0, (2,))
    >>> o3 = KInvariant(z2, FgAbGroup(), z2.element((1,)))
    >>> kp = kunneth(o3, o3)
    >>> (kp.k0, kp.k1)
    (FgAbGroup(0, (2,)), FgAbGroup(0, (2,)))
    """
    parts0 = (
        tensor(a.k0, b.k0),
        tensor(a.k1, b.k1),
        tor(a.k0, b.k1),
        tor(a.k1, b.k0),
    )
    k0, injs0, _ = direct_sum_many(parts0)
    parts1 = (
        tensor(a.k0, b.k1),
        tensor(a.k1, b.k0),
        tor(a.k0, b.k0),
        tor(a.k1, b.k1),
    )
    k1, injs1, _ = direct_sum_many(parts1)
    unit = injs0[0](tensor_elem(a.unit, b.unit))
    summands = {
        K0A_K0B: injs0[0],
        K1A_K1B: injs0[1],
        TOR_K0A_K1B: injs0[2],
        TOR_K1A_K0B: injs0[3],
        K0A_K1B: injs1[0],
        K1A_K0B: injs1[1],
        TOR_K0A_K0B: injs1[2],
        TOR_K1A_K1B: injs1[3],
    }
    return KPair(k0=k0, k1=k1, summands=summands, unit=unit, extra_z=False)


def kunneth_invariant(a: KInvariant, b: KInvariant) -> KInvariant:
    """The tensor product as a plain invariant triple (for nesting)."""
    kp = kunneth(a, b)
    return KInvariant(kp.k0, kp.k1, kp.unit)


def free_product_k(a: KInvariant, b: KInvariant) -> KPair:
    """K-theory of the full free product: plain direct sums, no unit.

    >>> from .fgab import FgAbGroup
    >>> z2g = FgAbGroup(2)
    >>> c2 = KInvariant(z2g, FgAbGroup(), z2g.element((1, 1)))
    >>> free_product_k(c2, c2).k0
    FgAbGroup(4, ())
    """
    k0, injs0, _ = direct_sum_many((a.k0, b.k0))
    k1, injs1, _ = direct_sum_many((a.k1, b.k1))
    summands = {K0A: injs0[0], K0B: injs0[1], K1A: injs1[0], K1B: injs1[1]}
    return KPair(k0=k0, k1=k1, summands=summands, unit=None, extra_z=False)


def _unital_k0_data(a: KInvariant, b: KInvariant):
    """Shared quotient structure of K0 of the unital free product."""
    s0, (inj_a, inj_b), (proj_a, proj_b) = direct_sum_many((a.k0, b.k0))
    rel = inj_a(a.unit) - inj_b(b.unit)
    q, proj_q, lift = _quotient_full(s0, rel)
    return s0, inj_a, inj_b, proj_a, proj_b, rel, q, proj_q, lift


def unital_free_product_k(a: KInvariant, b: KInvariant) -> KPair:
    """K-theory of the unital free product.

    Degree 0 is (K0A + K0B) / <([1_A], -[1_B])> with unit the common
    class of ([1_A], 0) and (0, [1_B]).  Degree 1 is K1A + K1B, gaining
    an extra Z summand exactly when both unit classes have finite
    order; that summand is flagged indeterminate.
    """
    _, inj_a, _, _, _, _, q, proj_q, _ = _unital_k0_data(a, b)
    unit = proj_q(inj_a(a.unit))
    extra = a.unit.order() != inf and b.unit.order() != inf
    if extra:
        k1, injs1, _ = direct_sum_many((a.k1, b.k1, FgAbGroup(1)))
        summands = {K1A: injs1[0], K1B: injs1[1], EXTRA_Z: injs1[2]}
    else:
        k1, injs1, _ = direct_sum_many((a.k1, b.k1))
        summands = {K1A: injs1[0], K1B: injs1[1]}
    return KPair(k0=q, k1=k1, summands=summands, unit=unit, extra_z=extra)


def _lifted_pi0(a, b, kun, proj_a, proj_b):
    """The degree-0 induced map before the quotient: on K0A + K0B it is
    (x, y) |-> x (x) [1_B] + [1_A] (x) y, landing in the K0A (x) K0B
    summand of the tensor K0."""
    inj00 = kun.summands[K0A_K0B]
    fa = GroupHom.from_images(
        a.k0, kun.k0, [inj00(tensor_elem(g, b.unit)) for g in a.k0.generators()]
    )
    fb = GroupHom.from_images(
        b.k0, kun.k0, [inj00(tensor_elem(a.unit, g)) for g in b.k0.generators()]
    )
    return compose(proj_a, fa) + compose(proj_b, fb)


def _pi1(a, b, kun):
    """Degree-1 induced map on the well-defined part K1A + K1B:
    (x, y) |-> ([1_A] (x) y) + (x (x) [1_B])."""
    _, _, (proj_a1, proj_b1) = direct_sum_many((a.k1, b.k1))
    ga = GroupHom.from_images(
        a.k1,
        kun.k1,
        [kun.summands[K1A_K0B](tensor_elem(g, b.unit)) for g in a.k1.generators()],
    )
    gb = GroupHom.from_images(
        b.k1,
        kun.k1,
        [kun.summands[K0A_K1B](tensor_elem(a.unit, g)) for g in b.k1.generators()],
    )
    return compose(proj_a1, ga) + compose(proj_b1, gb)


def pi_star(a: KInvariant, b: KInvariant):
    """Maps induced by the quotient of the unital free product onto the
    tensor product.

    Returns (pi0, pi1, extra_z_target).  pi0 goes from the quotient K0
    of the unital free product to the tensor K0; pi1 goes from the
    K1A + K1B part of K1.  The extra Z summand, when present, carries
    no matrix: only its receiving group Tor(K0A, K0B) is returned.
    """
    kun = kunneth(a, b)
    s0, _, _, proj_a, proj_b, rel, q, _, lift = _unital_k0_data(a, b)
    lifted = _lifted_pi0(a, b, kun, proj_a, proj_b)
    if not lifted(rel).is_zero:
        raise AssertionError("induced map does not kill the unit relation")
    cols = [lifted(GroupElement(s0, lift.column(k))).coords for k in range(q.ngens)]
    pi0 = GroupHom(q, kun.k0, IntMatrix.from_columns(cols, kun.k0.ngens))
    pi1 = _pi1(a, b, kun)
    return pi0, pi1, tor(a.k0, b.k0)


def pi_star_full(a: KInvariant, b: KInvariant):
    """Maps induced by the quotient of the full free product onto the
    tensor product: same formulas, but degree 0 acts on the un-quotiented
    sum K0A + K0B."""
    kun = kunneth(a, b)
    _, _, _, proj_a, proj_b, _, _, _, _ = _unital_k0_data(a, b)
    pi0 = _lifted_pi0(a, b, kun, proj_a, proj_b)
    pi1 = _pi1(a, b, kun)
    return pi0, pi1
