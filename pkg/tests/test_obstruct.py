"""Tests for the obstruction battery and the case classifier."""

import random
from math import gcd

import pytest

from kobstruct import (
    FgAbGroup,
    GroupHom,
    KInvariant,
    basic_obstructions,
    case_ii_k_check,
    classify,
    compose,
    ex4_no_scaled_section,
    iso_remark_check,
    m_oo_unit_divisibility,
    pi_star,
    section_exists_k,
    unital_free_product_k,
)
from kobstruct.catalog import evaluate
from kobstruct.obstruct import (
    K1_TENSOR_NONZERO,
    NO_SECTION_0,
    NO_SECTION_1,
    NOT_APPLICABLE,
    OBSTRUCTED,
    PI0_NOT_SURJECTIVE,
    PI1_NOT_SURJECTIVE,
    POSSIBLE_CASE_I,
    POSSIBLE_CASE_II,
    POSSIBLE_CASE_III,
    RANK_INEQUALITY,
    TOR_NONZERO,
    Verdict,
    ObstructionWitness,
)
from conftest import random_element, random_finite_group

Z = FgAbGroup(1)
TRIVIAL = FgAbGroup()

_MAP_CLAUSES_0 = (PI0_NOT_SURJECTIVE, NO_SECTION_0)
_MAP_CLAUSES_1 = (PI1_NOT_SURJECTIVE, NO_SECTION_1)


def _inv(k0_rank, k0_tors, unit, k1_rank=0, k1_tors=()):
    k0 = FgAbGroup(k0_rank, k0_tors)
    return KInvariant(k0, FgAbGroup(k1_rank, k1_tors), k0.element(unit))


# ---------------------------------------------------------------------------
# basic_obstructions


def test_basic_obstructions_torus_pair():
    ct = evaluate("CT")
    ws = basic_obstructions(ct, ct)
    assert [w.clause for w in ws] == [K1_TENSOR_NONZERO]


def test_basic_obstructions_c2_pair():
    c2 = evaluate("C^2")
    ws = basic_obstructions(c2, c2)
    assert [w.clause for w in ws] == [RANK_INEQUALITY]


def test_basic_obstructions_o3_o5():
    ws = basic_obstructions(evaluate("O_3"), evaluate("O_5"))
    assert [w.clause for w in ws] == [TOR_NONZERO]
    detail = ws[0].detail_dict()
    assert detail["tor"] == "Z/2"


def test_basic_obstructions_report_order():
    # an invariant pair violating all three clauses at once
    a = _inv(2, (2,), (1, 0, 1), k1_rank=1, k1_tors=(2,))
    ws = basic_obstructions(a, a)
    assert [w.clause for w in ws] == [
        K1_TENSOR_NONZERO,
        TOR_NONZERO,
        RANK_INEQUALITY,
    ]


def test_rank_threshold_depends_on_unit_order():
    # rank 1 x rank 1 = 1 > 1 only with the lowered bound; both units
    # of infinite order lower the bound to 1, torsion units keep 2
    inf_unit = _inv(1, (), (1,))
    assert basic_obstructions(inf_unit, inf_unit) == []
    c2 = evaluate("C^2")
    assert [w.clause for w in basic_obstructions(c2, c2)] == [RANK_INEQUALITY]
    # with a torsion unit on one side the bound for 2x2 is 4 > 4: passes
    tors_unit = _inv(2, (3,), (0, 0, 1))
    ws = basic_obstructions(tors_unit, tors_unit)
    assert RANK_INEQUALITY not in [w.clause for w in ws]


# ---------------------------------------------------------------------------
# classify: pinned verdicts


def test_classify_m2_m3_case_iii():
    v = classify(evaluate("M_2"), evaluate("M_3"))
    assert v.outcome == POSSIBLE_CASE_III
    params = v.parameters_dict()
    assert params["u"] == 2 and params["w"] == 3


def test_classify_cuntz_gcd_boundary():
    for m in range(2, 13):
        for n in range(2, 13):
            v = classify(evaluate(f"O_{m}"), evaluate(f"O_{n}"))
            if gcd(m - 1, n - 1) == 1:
                assert v.outcome == POSSIBLE_CASE_II, (m, n)
            else:
                assert v.outcome == OBSTRUCTED and v.witness.clause == TOR_NONZERO


def test_classify_o2_o5_case_ii():
    v = classify(evaluate("O_2"), evaluate("O_5"))
    assert v.outcome == POSSIBLE_CASE_II


def test_classify_mn_pair_pi0():
    for n in (2, 3, 4, 6):
        v = classify(evaluate(f"M_{n}"), evaluate(f"M_{n}"))
        assert v.outcome == OBSTRUCTED
        assert v.witness.clause == PI0_NOT_SURJECTIVE


def test_classify_torus_pair():
    v = classify(evaluate("CT"), evaluate("CT"))
    assert v.outcome == OBSTRUCTED and v.witness.clause == K1_TENSOR_NONZERO


def test_classify_oinf_never_obstructed(catalog):
    oinf = evaluate("Oinf")
    for _, x in catalog:
        v = classify(oinf, x)
        assert v.possible
        assert v.outcome == POSSIBLE_CASE_I


def test_classify_swap_symmetry(catalog):
    for _, a in catalog:
        for _, b in catalog:
            va, vb = classify(a, b), classify(b, a)
            assert va.outcome == vb.outcome
            if va.witness is not None:
                assert va.witness.clause == vb.witness.clause


def test_classify_not_applicable_hook():
    flagged = KInvariant(Z, TRIVIAL, Z.element((1,)), finitely_generated=False)
    v = classify(flagged, evaluate("O_2"))
    assert v.outcome == NOT_APPLICABLE and v.reason


def test_verdict_field_consistency():
    with pytest.raises(ValueError):
        Verdict(OBSTRUCTED)
    with pytest.raises(ValueError):
        Verdict(POSSIBLE_CASE_I)
    with pytest.raises(ValueError):
        Verdict("PossibleCaseV", parameters=())
    w = ObstructionWitness(TOR_NONZERO, (("tor", "Z/2"),), "nonzero Tor")
    v = Verdict(OBSTRUCTED, witness=w)
    assert v.to_json()["witness"]["clause"] == TOR_NONZERO


def test_classify_case_iv_shape_is_validated():
    # (Z, 0, 2) against rank-2 free K0 matches the coarse case-IV shape,
    # but the induced degree-0 map misses every second coordinate, so
    # the honest verdict is an obstruction
    v = classify(evaluate("M_2"), evaluate("C^2"))
    assert v.outcome == OBSTRUCTED and v.witness.clause == PI0_NOT_SURJECTIVE


def test_classify_torsion_side_pairs():
    # wholly finite K-theory on one side only: the battery decides
    v = classify(evaluate("O_3"), evaluate("M_3"))
    assert v.outcome == POSSIBLE_CASE_II
    assert v.parameters_dict()["variant"] == "torsion_side"
    v = classify(evaluate("O_3"), evaluate("M_2"))
    assert v.outcome == OBSTRUCTED and v.witness.clause == NO_SECTION_0


def test_classify_total_and_concordant_on_random_invariants():
    # random mixed invariants (kept small: the tensor K-groups grow
    # multiplicatively): classify must always return a verdict and stay
    # concordant with the section solver
    rng = random.Random(31337)

    def rand_group():
        return FgAbGroup(
            rng.randrange(0, 2),
            [rng.choice((2, 3, 4, 5, 6, 9)) for _ in range(rng.randrange(0, 2))],
        )

    for _ in range(120):
        k0a, k1a = rand_group(), rand_group()
        k0b, k1b = rand_group(), rand_group()
        a = KInvariant(k0a, k1a, random_element(rng, k0a))
        b = KInvariant(k0b, k1b, random_element(rng, k0b))
        v = classify(a, b)
        rep = section_exists_k(a, b, "unital")
        if v.possible:
            assert rep.deg0 is not None and rep.deg1 is not None
            assert rep.extra_z_ok
        elif v.witness.clause in _MAP_CLAUSES_0:
            assert rep.deg0 is None
        elif v.witness.clause in _MAP_CLAUSES_1:
            assert rep.deg1 is None


def test_witness_details_reverify(catalog):
    from kobstruct import tensor, tor

    for _, a in catalog:
        for _, b in catalog:
            v = classify(a, b)
            if v.witness is None:
                continue
            detail = v.witness.detail_dict()
            if v.witness.clause == TOR_NONZERO:
                sides = {0: (a.k0, b.k0), 1: (a.k1, b.k1)}
                ga = sides[detail["degree_a"]][0]
                hb = sides[detail["degree_b"]][1]
                recomputed = tor(ga, hb)
                assert not recomputed.is_trivial
                assert str(recomputed) == detail["tor"]
            elif v.witness.clause == K1_TENSOR_NONZERO:
                assert not tensor(a.k1, b.k1).is_trivial
            elif v.witness.clause == RANK_INEQUALITY:
                assert a.k0.rank * b.k0.rank > detail["bound"]
            elif v.witness.clause in (PI0_NOT_SURJECTIVE, NO_SECTION_0):
                rep = section_exists_k(a, b, "unital")
                assert rep.deg0 is None
            elif v.witness.clause in (PI1_NOT_SURJECTIVE, NO_SECTION_1):
                rep = section_exists_k(a, b, "unital")
                assert rep.deg1 is None


def test_prop_iii_necessity_randomized():
    rng = random.Random(2024)
    checked = 0
    for _ in range(120):
        g0, g1 = random_finite_group(rng), random_finite_group(rng)
        h0, h1 = random_finite_group(rng), random_finite_group(rng)
        a = KInvariant(g0, g1, random_element(rng, g0))
        b = KInvariant(h0, h1, random_element(rng, h0))
        tor_hit = any(
            w.clause == TOR_NONZERO for w in basic_obstructions(a, b)
        )
        if tor_hit:
            checked += 1
            assert classify(a, b).outcome == OBSTRUCTED
    assert checked > 10


# ---------------------------------------------------------------------------
# section_exists_k


def test_sections_m2_m3():
    a, b = evaluate("M_2"), evaluate("M_3")
    rep = section_exists_k(a, b, "unital")
    pi0, _, _ = pi_star(a, b)
    assert rep.deg0 is not None
    assert compose(rep.deg0, pi0) == GroupHom.identity(pi0.target)
    assert rep.deg1 is not None and rep.extra_z_ok
    z2 = FgAbGroup(2)
    from kobstruct import quotient_by

    _, proj = quotient_by(z2, z2.element((2, -3)))
    assert rep.deg0(pi0.target.element((1,))) == proj(z2.element((1, -1)))


def test_sections_mn_pair_none():
    for n in (2, 3, 6):
        rep = section_exists_k(evaluate(f"M_{n}"), evaluate(f"M_{n}"), "unital")
        assert rep.deg0 is None


def test_sections_o2_pair_trivial():
    rep = section_exists_k(evaluate("O_2"), evaluate("O_2"), "unital")
    assert rep.deg0 is not None and rep.deg1 is not None
    assert rep.extra_z_ok
    assert rep.all_clear


def test_sections_bad_mode():
    with pytest.raises(ValueError):
        section_exists_k(evaluate("O_2"), evaluate("O_2"), "sideways")


def test_concordance_over_catalog(catalog):
    for _, a in catalog:
        for _, b in catalog:
            v = classify(a, b)
            for mode in ("unital", "full"):
                rep = section_exists_k(a, b, mode)
                if v.possible:
                    assert rep.all_clear, (a, b, mode)
                elif v.witness.clause in _MAP_CLAUSES_0:
                    assert rep.deg0 is None, (a, b, mode)
                elif v.witness.clause in _MAP_CLAUSES_1:
                    assert rep.deg1 is None, (a, b, mode)


# ---------------------------------------------------------------------------
# iso remark and the torsion-case identity


def test_iso_remark_examples():
    assert iso_remark_check(evaluate("M_2"), evaluate("M_3"))
    assert iso_remark_check(evaluate("C"), evaluate("CT"))
    assert iso_remark_check(evaluate("Oinf"), evaluate("O_12"))
    with pytest.raises(ValueError):
        iso_remark_check(evaluate("O_2"), evaluate("O_5"))  # case II verdict


def test_iso_remark_across_catalog(catalog):
    for _, a in catalog:
        for _, b in catalog:
            v = classify(a, b)
            if v.outcome in (POSSIBLE_CASE_I, POSSIBLE_CASE_III):
                assert iso_remark_check(a, b)


def test_case_ii_identity_examples():
    z4, z9 = FgAbGroup(0, (4,)), FgAbGroup(0, (9,))
    assert case_ii_k_check(z4, TRIVIAL, z9, TRIVIAL, z4.element((2,)), z9.element((3,)))
    z2, z3 = FgAbGroup(0, (2,)), FgAbGroup(0, (3,))
    assert case_ii_k_check(z2, TRIVIAL, z3, TRIVIAL, z2.zero(), z3.zero())
    z8 = FgAbGroup(0, (8,))
    assert case_ii_k_check(z8, TRIVIAL, z3, TRIVIAL, z8.element((1,)), z3.element((1,)))


def test_case_ii_preconditions():
    z2, z4 = FgAbGroup(0, (2,)), FgAbGroup(0, (4,))
    with pytest.raises(ValueError):
        case_ii_k_check(z2, TRIVIAL, z4, TRIVIAL, z2.zero(), z4.zero())
    with pytest.raises(ValueError):
        case_ii_k_check(Z, TRIVIAL, z4, TRIVIAL, Z.zero(), z4.zero())


def test_ex4_witness():
    w = ex4_no_scaled_section()
    assert w.clause == NO_SECTION_0
    assert "(1, 1, -1, -1)" in w.explanation
    assert w.detail_dict()["relation"] == [1, 1, -1, -1]


def test_m_oo_unit_divisibility():
    x = m_oo_unit_divisibility(2, 3)
    kp = unital_free_product_k(
        evaluate("M_2(Oinf)"), evaluate("M_3(Oinf)")
    )
    assert x is not None and 6 * x == kp.unit
    assert m_oo_unit_divisibility(1, 7) is not None
    assert m_oo_unit_divisibility(2, 4) is None
    with pytest.raises(ValueError):
        m_oo_unit_divisibility(0, 3)


def test_m_oo_unit_divisibility_coprimality_sweep():
    # a witness exists exactly when the unit sizes are coprime
    for m in range(1, 7):
        for n in range(1, 7):
            got = m_oo_unit_divisibility(m, n)
            if gcd(m, n) == 1:
                assert got is not None, (m, n)
                kp = unital_free_product_k(
                    evaluate(f"M_{m}(Oinf)"), evaluate(f"M_{n}(Oinf)")
                )
                assert m * n * got == kp.unit
            else:
                assert got is None, (m, n)
