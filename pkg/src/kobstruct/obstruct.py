"""Decision layer: splitting obstructions and the case classifier.

Given L(A) and L(B), this module decides whether the quotient map from
the (unital) free product onto the tensor product can split at the
K-theory level.  A positive verdict names the matching case of the
classification; a negative verdict carries a concrete witness, always
re-checkable: a nonzero K1 tensor or Tor group, a failed rank count, a
non-surjective induced map, or a missing section.

Case vocabulary (PossibleCaseI..IV):
  I    one side is (Z, 0, 1): tensoring with it changes nothing.
  II   torsion-dominated: both sides have finite K-theory with coprime
       orders (then the tensor K-theory vanishes); this bucket also
       collects the degenerate pairs where one side has wholly finite
       K-theory, including (0, 0, 0), and every map-level check passes.
  III  both K0 of rank one with units of infinite order u and w,
       u and w coprime to each other and to the opposite torsion orders.
  IV   (Z, 0, u) against rank(K0) > 1, with the coprimality pattern of
       III; candidates are verified against the actual induced maps
       before the verdict is issued.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, inf

from .fgab import (
    FgAbGroup,
    GroupElement,
    GroupMismatchError,
    cokernel,
    constrained_section_exists,
    direct_sum_many,
    is_injective,
    is_surjective,
    quotient_by,
    right_inverse_exists,
    solve_divisibility,
    tensor,
    tor,
)
from .kinv import KInvariant, pi_star, pi_star_full, unital_free_product_k

__all__ = [
    "ObstructionWitness",
    "Verdict",
    "SectionReport",
    "basic_obstructions",
    "classify",
    "section_exists_k",
    "iso_remark_check",
    "case_ii_k_check",
    "ex4_no_scaled_section",
    "m_oo_unit_divisibility",
    "POSSIBLE_CASE_I",
    "POSSIBLE_CASE_II",
    "POSSIBLE_CASE_III",
    "POSSIBLE_CASE_IV",
    "OBSTRUCTED",
    "NOT_APPLICABLE",
    "K1_TENSOR_NONZERO",
    "RANK_INEQUALITY",
    "TOR_NONZERO",
    "PI0_NOT_SURJECTIVE",
    "PI1_NOT_SURJECTIVE",
    "NO_SECTION_0",
    "NO_SECTION_1",
    "EXTRA_Z_BLOCKED",
]

POSSIBLE_CASE_I = "PossibleCaseI"
POSSIBLE_CASE_II = "PossibleCaseII"
POSSIBLE_CASE_III = "PossibleCaseIII"
POSSIBLE_CASE_IV = "PossibleCaseIV"
OBSTRUCTED = "Obstructed"
NOT_APPLICABLE = "NotApplicable"

K1_TENSOR_NONZERO = "K1TensorNonzero"
RANK_INEQUALITY = "RankInequality"
TOR_NONZERO = "TorNonzero"
PI0_NOT_SURJECTIVE = "Pi0NotSurjective"
PI1_NOT_SURJECTIVE = "Pi1NotSurjective"
NO_SECTION_0 = "NoSection0"
NO_SECTION_1 = "NoSection1"
EXTRA_Z_BLOCKED = "ExtraZBlocked"

_POSSIBLE = frozenset(
    {POSSIBLE_CASE_I, POSSIBLE_CASE_II, POSSIBLE_CASE_III, POSSIBLE_CASE_IV}
)


@dataclass(frozen=True)
class ObstructionWitness:
    """A verifiable reason no K-level splitting exists."""

    clause: str
    detail: tuple
    explanation: str

    def detail_dict(self):
        return dict(self.detail)

    def to_json(self):
        return {
            "clause": self.clause,
            "detail": dict(self.detail),
            "explanation": self.explanation,
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of the classifier.

    Exactly one of ``parameters`` (for a Possible* outcome) and
    ``witness`` (for Obstructed) is populated; NotApplicable carries
    only ``reason``.
    """

    outcome: str
    parameters: tuple | None = None
    witness: ObstructionWitness | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.outcome in _POSSIBLE:
            ok = self.parameters is not None and self.witness is None
        elif self.outcome == OBSTRUCTED:
            ok = self.witness is not None and self.parameters is None
        elif self.outcome == NOT_APPLICABLE:
            ok = (
                self.parameters is None
                and self.witness is None
                and self.reason is not None
            )
        else:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if not ok:
            raise ValueError("verdict fields inconsistent with outcome")

    @property
    def possible(self):
        return self.outcome in _POSSIBLE

    def parameters_dict(self):
        return dict(self.parameters) if self.parameters is not None else None

    def to_json(self):
        case = None
        if self.outcome in _POSSIBLE:
            case = self.outcome.removeprefix("PossibleCase")
        return {
            "outcome": self.outcome,
            "case": case,
            "parameters": self.parameters_dict(),
            "witness": self.witness.to_json() if self.witness else None,
            "reason": self.reason,
        }


class SectionReport(tuple):
    """Named triple (deg0, deg1, extra_z_ok) from section_exists_k."""

    __slots__ = ()

    def __new__(cls, deg0, deg1, extra_z_ok):
        return super().__new__(cls, (deg0, deg1, extra_z_ok))

    deg0 = property(lambda self: self[0])
    deg1 = property(lambda self: self[1])
    extra_z_ok = property(lambda self: self[2])

    @property
    def all_clear(self):
        return self.deg0 is not None and self.deg1 is not None and self.extra_z_ok


def _finite_order(inv: KInvariant):
    """(|K0 torsion| * |K1 torsion|) of a wholly finite invariant."""
    return inv.k0.torsion_order() * inv.k1.torsion_order()


def basic_obstructions(a: KInvariant, b: KInvariant):
    """Structural splitting obstructions, cheapest first.

    Checks, in reporting order: the K1 tensor clause, the four Tor
    pairings of K_*(A) against K_*(B), and the rank inequality (whose
    bound drops by one when either unit class has infinite order).
    """
    found = []

    t11 = tensor(a.k1, b.k1)
    if not t11.is_trivial:
        found.append(
            ObstructionWitness(
                K1_TENSOR_NONZERO,
                (("k1a", str(a.k1)), ("k1b", str(b.k1)), ("tensor", str(t11))),
                f"K1(A) (x) K1(B) = {t11} is nonzero, and the induced maps "
                "never reach that summand of K0 of the tensor product.",
            )
        )

    groups = {0: (a.k0, b.k0), 1: (a.k1, b.k1)}
    tor_hits = []
    for da in (0, 1):
        for db in (0, 1):
            t = tor(groups[da][0], groups[db][1])
            if not t.is_trivial:
                tor_hits.append((da, db, t))
    if tor_hits:
        da, db, t = tor_hits[0]
        found.append(
            ObstructionWitness(
                TOR_NONZERO,
                (
                    ("degree_a", da),
                    ("degree_b", db),
                    ("tor", str(t)),
                    ("count", len(tor_hits)),
                ),
                f"Tor(K{da}(A), K{db}(B)) = {t} is nonzero, and the induced "
                "maps never reach the Tor summands of the tensor K-theory.",
            )
        )

    ra, rb = a.k0.rank, b.k0.rank
    bound = ra + rb
    if a.unit.order() == inf or b.unit.order() == inf:
        bound -= 1
    if ra * rb > bound:
        found.append(
            ObstructionWitness(
                RANK_INEQUALITY,
                (("rank_a", ra), ("rank_b", rb), ("bound", bound)),
                f"rank K0(A) * rank K0(B) = {ra * rb} exceeds {bound}, so the "
                "free part of K0 of the tensor product cannot be covered.",
            )
        )
    return found


def _map_level_witness(a: KInvariant, b: KInvariant):
    """Surjectivity and section failures of the induced maps, or None."""
    pi0, pi1, tor00 = pi_star(a, b)
    if not is_surjective(pi0):
        return ObstructionWitness(
            PI0_NOT_SURJECTIVE,
            (("cokernel", str(cokernel(pi0))), ("matrix", pi0.matrix.to_json())),
            f"the induced map on K0 has cokernel {cokernel(pi0)}, so it is "
            "not surjective and admits no section.",
        )
    if not is_surjective(pi1):
        return ObstructionWitness(
            PI1_NOT_SURJECTIVE,
            (("cokernel", str(cokernel(pi1))), ("matrix", pi1.matrix.to_json())),
            f"the induced map on K1 has cokernel {cokernel(pi1)}, so it is "
            "not surjective and admits no section.",
        )
    if right_inverse_exists(pi0) is None:
        return ObstructionWitness(
            NO_SECTION_0,
            (("matrix", pi0.matrix.to_json()),),
            "the induced map on K0 is surjective but has no group-theoretic "
            "right inverse.",
        )
    if right_inverse_exists(pi1) is None:
        return ObstructionWitness(
            NO_SECTION_1,
            (("matrix", pi1.matrix.to_json()),),
            "the induced map on K1 is surjective but has no group-theoretic "
            "right inverse.",
        )
    extra = a.unit.order() != inf and b.unit.order() != inf
    if extra and not tor00.is_trivial:
        # unreachable after the Tor clause above; kept as a safety net
        return ObstructionWitness(
            EXTRA_Z_BLOCKED,
            (("tor_k0a_k0b", str(tor00)),),
            "the extra Z summand of K1 of the unital free product maps into "
            f"the nonzero torsion group {tor00} and can only split if that "
            "restriction vanishes.",
        )
    return None


def first_witness(a: KInvariant, b: KInvariant):
    """The first obstruction in reporting order, or None if all checks pass."""
    ws = basic_obstructions(a, b)
    if ws:
        return ws[0]
    return _map_level_witness(a, b)


def _group_params(a: KInvariant, b: KInvariant):
    return (
        ("g0", str(a.k0.torsion_part())),
        ("g1", str(a.k1.torsion_part())),
        ("h0", str(b.k0.torsion_part())),
        ("h1", str(b.k1.torsion_part())),
    )


def _is_z_one(inv: KInvariant):
    """L = (Z, 0, 1) up to the sign of the generator."""
    return (
        inv.k0 == FgAbGroup(1)
        and inv.k1.is_trivial
        and abs(inv.unit.coords[0]) == 1
    )


def _free_unit_part(inv: KInvariant):
    return inv.unit.coords[: inv.k0.rank]


def _match_case_iii(x: KInvariant, y: KInvariant):
    """Both K0 of rank one, torsion K1, units of infinite order, and the
    coprimality pattern; returns parameter pairs or None."""
    if x.k0.rank != 1 or y.k0.rank != 1:
        return None
    if not (x.k1.is_finite and y.k1.is_finite):
        return None
    u = abs(x.unit.coords[0])
    w = abs(y.unit.coords[0])
    if u == 0 or w == 0:
        return None
    g0o, g1o = x.k0.torsion_order(), x.k1.torsion_order()
    h0o, h1o = y.k0.torsion_order(), y.k1.torsion_order()
    if gcd(g0o * g1o, h0o * h1o) != 1:
        return None
    if gcd(u, w) != 1:
        return None
    if gcd(u, h0o) != 1 or gcd(u, h1o) != 1:
        return None
    if gcd(w, g0o) != 1 or gcd(w, g1o) != 1:
        return None
    return (("u", u), ("w", w))


def _match_case_iv(x: KInvariant, y: KInvariant):
    """L(x) = (Z, 0, u) against rank(K0(y)) > 1 with the coprimality
    pattern; candidates still need map-level validation by the caller."""
    if x.k0 != FgAbGroup(1) or not x.k1.is_trivial:
        return None
    u = abs(x.unit.coords[0])
    if u == 0:
        return None
    bee = y.k0.rank
    if bee <= 1 or not y.k1.is_finite:
        return None
    v = _free_unit_part(y)
    if not any(v):
        return None
    w = 0
    for c in v:
        w = gcd(w, c)
    h0o, h1o = y.k0.torsion_order(), y.k1.torsion_order()
    if gcd(u, w) != 1 or gcd(u, h0o) != 1 or gcd(u, h1o) != 1:
        return None
    return (("u", u), ("w", w), ("b", bee))


def classify(a: KInvariant, b: KInvariant) -> Verdict:
    """Decide K-level splittability of the quotient onto the tensor product.

    Tries the case patterns (II first, so that pairs of wholly finite
    invariants such as two Cuntz algebras report the torsion case, then
    I, III, IV); anything else is Obstructed with the first discovered
    witness, structural clauses before map-level ones.

    >>> from .fgab import FgAbGroup
    >>> z = FgAbGroup(1)
    >>> m2 = KInvariant(z, FgAbGroup(), z.element((2,)))
    >>> m3 = KInvariant(z, FgAbGroup(), z.element((3,)))
    >>> classify(m2, m3).outcome
    'PossibleCaseIII'
    """
    if not (a.finitely_generated and b.finitely_generated):
        return Verdict(
            NOT_APPLICABLE,
            reason="K-theory is not finitely generated; the case analysis "
            "and the exact solvers only cover finitely generated inputs.",
        )

    a_fin = a.is_torsion_invariant()
    b_fin = b.is_torsion_invariant()

    if a_fin and b_fin:
        if gcd(_finite_order(a), _finite_order(b)) == 1:
            params = _group_params(a, b) + (
                ("r", list(a.unit.coords)),
                ("s", list(b.unit.coords)),
                ("role_a", "left"),
                ("variant", "both_finite"),
            )
            return Verdict(POSSIBLE_CASE_II, parameters=params)
        w = first_witness(a, b)
        if w is None:
            raise AssertionError("finite non-coprime pair without a witness")
        return Verdict(OBSTRUCTED, witness=w)

    for x, _y, role in ((a, b, "left"), (b, a, "right")):
        if _is_z_one(x):
            return Verdict(
                POSSIBLE_CASE_I,
                parameters=(("role_a", role), ("u", 1), ("shape", "(Z,0,1)")),
            )

    if a_fin or b_fin:
        # One side has wholly finite K-theory (possibly trivial) while
        # the other does not.  The coarse case patterns do not separate
        # these, so the verdict follows the full obstruction battery.
        w = first_witness(a, b)
        if w is not None:
            return Verdict(OBSTRUCTED, witness=w)
        params = _group_params(a, b) + (
            ("r", list(a.unit.coords)),
            ("s", list(b.unit.coords)),
            ("role_a", "left" if a_fin else "right"),
            ("variant", "torsion_side"),
        )
        return Verdict(POSSIBLE_CASE_II, parameters=params)

    for x, y, role in ((a, b, "left"), (b, a, "right")):
        m = _match_case_iii(x, y)
        if m is not None:
            params = m + _group_params(x, y) + (("role_a", role),)
            return Verdict(POSSIBLE_CASE_III, parameters=params)

    iv_params = None
    for x, y, role in ((a, b, "left"), (b, a, "right")):
        m = _match_case_iv(x, y)
        if m is not None:
            iv_params = m + _group_params(x, y) + (("role_a", role),)
            break

    w = first_witness(a, b)
    if w is not None:
        return Verdict(OBSTRUCTED, witness=w)
    if iv_params is not None:
        return Verdict(POSSIBLE_CASE_IV, parameters=iv_params)
    raise AssertionError(
        "no case pattern matched and no obstruction witness was found"
    )


def section_exists_k(a: KInvariant, b: KInvariant, mode: str = "unital"):
    """Right inverses of the induced maps, degree by degree.

    mode="unital" uses the quotient of the unital free product,
    mode="full" the un-quotiented free product.  ``extra_z_ok`` is true
    when there is no indeterminate Z summand or when its receiving
    group Tor(K0A, K0B) vanishes, which forces the restriction to be
    zero.
    """
    if mode == "unital":
        pi0, pi1, tor00 = pi_star(a, b)
        extra = a.unit.order() != inf and b.unit.order() != inf
        extra_ok = (not extra) or tor00.is_trivial
    elif mode == "full":
        pi0, pi1 = pi_star_full(a, b)
        extra_ok = True
    else:
        raise ValueError(f"mode must be 'unital' or 'full', got {mode!r}")
    return SectionReport(
        right_inverse_exists(pi0), right_inverse_exists(pi1), extra_ok
    )


def iso_remark_check(a: KInvariant, b: KInvariant) -> bool:
    """For a pair classified PossibleCaseI/III/IV: are both induced maps
    bijective?  Raises if the precondition fails."""
    v = classify(a, b)
    if v.outcome not in (POSSIBLE_CASE_I, POSSIBLE_CASE_III, POSSIBLE_CASE_IV):
        raise ValueError(
            f"isomorphism check applies to case I/III/IV verdicts, got {v.outcome}"
        )
    pi0, pi1, _ = pi_star(a, b)
    return (
        is_surjective(pi0)
        and is_injective(pi0)
        and is_surjective(pi1)
        and is_injective(pi1)
    )


def case_ii_k_check(g0, g1, h0, h1, r: GroupElement, s: GroupElement) -> bool:
    """The displayed degree-0 identity of the torsion case:
    (G0 + H0) / <(r, -s)>  equals  G0/<r> + H0/<s>, exactly.

    Preconditions: all four groups finite, orders coprime degreewise,
    r in G0 and s in H0.
    """
    for grp in (g0, g1, h0, h1):
        if not grp.is_finite:
            raise ValueError("all groups must be finite")
    if gcd(g0.torsion_order(), h0.torsion_order()) != 1:
        raise ValueError("degree-0 orders must be coprime")
    if gcd(g1.torsion_order(), h1.torsion_order()) != 1:
        raise ValueError("degree-1 orders must be coprime")
    if r.group != g0 or s.group != h0:
        raise GroupMismatchError("r must lie in G0 and s in H0")
    sum0, (inj_g, inj_h), _ = direct_sum_many((g0, h0))
    lhs, _ = quotient_by(sum0, inj_g(r) - inj_h(s))
    qg, _ = quotient_by(g0, r)
    qh, _ = quotient_by(h0, s)
    rhs, _, _ = direct_sum_many((qg, qh))
    return lhs == rhs


def ex4_no_scaled_section() -> ObstructionWitness:
    """The two-projection example: no section of Z^4 -> Z^4/<(1,1,-1,-1)>
    can fix all four coordinate classes.

    The scale data forces a candidate section to send the class of each
    standard generator e_i back to e_i; those constraints contradict the
    relation, because the class of (1, 1, -1, -1) is zero while the
    vector itself is not.  The constrained solver confirms exactly.
    """
    z4 = FgAbGroup(4)
    relation = z4.element((1, 1, -1, -1))
    _, proj = quotient_by(z4, relation)
    constraints = [(proj(e), e) for e in z4.generators()]
    if constrained_section_exists(proj, constraints) is not None:
        raise AssertionError("constrained solver found a section that cannot exist")
    return ObstructionWitness(
        NO_SECTION_0,
        (
            ("relation", [1, 1, -1, -1]),
            ("forced_images", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        ),
        "a section fixing all four coordinate classes would send the zero "
        "class of (1, 1, -1, -1) to the nonzero vector (1, 1, -1, -1); no "
        "such homomorphism exists.",
    )


def m_oo_unit_divisibility(m: int, n: int):
    """In K0 of the unital free product of (Z, 0, m) and (Z, 0, n): an
    element x with (m*n) x = [1], if one exists.

    Exists iff gcd(m, n) = 1 (trivially for m = 1 or n = 1); the witness
    is the K0 shadow of m*n equivalent orthogonal projections summing
    to the identity.

    >>> m_oo_unit_divisibility(2, 3).coords
    (1,)
    >>> m_oo_unit_divisibility(2, 4) is None
    True
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    z = FgAbGroup(1)
    a = KInvariant(z, FgAbGroup(), z.element((m,)))
    b = KInvariant(z, FgAbGroup(), z.element((n,)))
    kp = unital_free_product_k(a, b)
    return solve_divisibility(kp.k0, kp.unit, m * n)
