from fractions import Fraction

import numpy as np
import pytest

from quivercm.group import (
    DegreeCapExceeded,
    GeneratorG,
    apply_generator,
    apply_word,
    canonicalize,
    free_algebra_check,
    parse_word,
)
from quivercm.points import (
    QuiverSetting,
    base_point_n1,
    block_form,
    moment_residual,
    points_equal,
    solve_point,
)


def lam_generic(m):
    return tuple(complex(1.0 + 0.1 * k, 0.6 + 0.23 * k) for k in range(m))


def cm_setting(m, n):
    return QuiverSetting(m, lam_generic(m), (n,) * m)


# ------------------------------------------------------------- canonical form


def test_canonicalize_merges_psi_block():
    w = canonicalize([GeneratorG("psi", 1, 2.0), GeneratorG("psi", 1, 3.0)])
    assert w.blocks == (("psi", ((1, 5.0),)),)


def test_canonicalize_inverse_pair_is_identity():
    w = canonicalize([GeneratorG("psi", 2, 1.5), GeneratorG("psi", 2, -1.5)])
    assert w.is_identity()


def test_canonicalize_keeps_reduced_word():
    gens = [
        GeneratorG("phi", 2, 1.0),
        GeneratorG("psi", 1, 1.0),
        GeneratorG("phi", 2, -1.0),
    ]
    w = canonicalize(gens)
    assert len(w.blocks) == 3


def test_canonicalize_cascading_merge():
    gens = [
        GeneratorG("psi", 1, 1.0),
        GeneratorG("phi", 1, 1.0),
        GeneratorG("phi", 1, -1.0),
        GeneratorG("psi", 1, 1.0),
    ]
    w = canonicalize(gens)
    assert w.blocks == (("psi", ((1, 2.0),)),)


def test_generator_validation():
    with pytest.raises(ValueError):
        GeneratorG("psi", 0, 1.0)
    with pytest.raises(ValueError):
        GeneratorG("rho", 1, 1.0)


# ------------------------------------------------------------------- action


def test_psi_on_base_point_m2():
    s = cm_setting(2, 1)
    p = base_point_n1(s)
    mu = 0.37 + 0.21j
    q = apply_generator(GeneratorG("psi", 1, mu), p)
    assert q.X[0][0, 0] == pytest.approx(mu)  # 0 -> mu
    assert q.X[1][0, 0] == pytest.approx(s.lam[1] + mu)
    assert moment_residual(q) <= 1e-12


def test_zero_coefficient_is_identity():
    p = base_point_n1(cm_setting(3, 1))
    q = apply_generator(GeneratorG("phi", 2, 0.0), p)
    assert q is p


def test_block_form_cross_check():
    rng = np.random.default_rng(0)
    for m, n, kind, k in [(2, 2, "psi", 1), (2, 2, "psi", 2), (3, 2, "phi", 1), (3, 1, "phi", 2)]:
        s = cm_setting(m, n)
        p = solve_point(s, seed=8)
        c = complex(rng.standard_normal(), rng.standard_normal()) * 0.5
        q = apply_generator(GeneratorG(kind, k, c), p)
        bp, bq = block_form(p), block_form(q)
        d = k * m - 1
        if kind == "psi":
            expect = bp.X_big + c * np.linalg.matrix_power(bp.Y_big, d)
            assert np.allclose(bq.X_big, expect, atol=1e-12)
            assert np.allclose(bq.Y_big, bp.Y_big)
        else:
            expect = bp.Y_big + c * np.linalg.matrix_power(bp.X_big, d)
            assert np.allclose(bq.Y_big, expect, atol=1e-12)
            assert np.allclose(bq.X_big, bp.X_big)


def test_apply_word_identity_and_inverse():
    s = cm_setting(2, 1)
    p = base_point_n1(s)
    gens = [
        GeneratorG("psi", 1, 0.4),
        GeneratorG("phi", 2, 0.3 - 0.2j),
        GeneratorG("psi", 2, -0.7),
    ]
    q = apply_word(gens, p)
    back = apply_word([g.inverse() for g in reversed(gens)], q)
    assert points_equal(p, back, 1e-10)


def test_apply_word_merging_consistent():
    s = cm_setting(3, 1)
    p = base_point_n1(s)
    two_step = apply_word(
        [GeneratorG("psi", 1, 0.3), GeneratorG("psi", 1, 0.4)], p
    )
    merged = apply_word([GeneratorG("psi", 1, 0.7)], p)
    assert points_equal(two_step, merged, 1e-10)


def test_apply_word_canonical_matches_raw():
    s = cm_setting(3, 1)
    p = base_point_n1(s)
    gens = [
        GeneratorG("phi", 1, 0.2),
        GeneratorG("phi", 2, 0.1),
        GeneratorG("psi", 1, -0.5),
    ]
    assert points_equal(
        apply_word(gens, p), apply_word(canonicalize(gens), p), 1e-10
    )


def test_homomorphism_order_convention():
    s = cm_setting(2, 1)
    p = base_point_n1(s)
    w1 = [GeneratorG("psi", 1, 0.3)]
    w2 = [GeneratorG("phi", 1, 0.4)]
    lhs = apply_word(w1 + w2, p)
    rhs = apply_word(w2, apply_word(w1, p))
    assert points_equal(lhs, rhs, 1e-10)


def test_moment_preserved_under_random_words():
    rng = np.random.default_rng(5)
    s = cm_setting(2, 2)
    p = solve_point(s, seed=5)
    for _ in range(20):
        gens = [
            GeneratorG(
                rng.choice(["psi", "phi"]),
                int(rng.integers(1, 3)),
                complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            )
            for _ in range(int(rng.integers(1, 7)))
        ]
        q = apply_word(gens, p)
        assert moment_residual(q) <= 1e-6


# ------------------------------------------------------------- free algebra


def test_omega_fixed_psi_k1_m2():
    assert free_algebra_check(GeneratorG("psi", 1, Fraction(3, 7)), 2, 4)


def test_omega_fixed_phi_k1_m3():
    assert free_algebra_check(GeneratorG("phi", 1, Fraction(1)), 3, 6)


def test_omega_all_generators_km_up_to_12():
    for m in range(1, 13):
        for k in range(1, 13):
            if k * m <= 12 and k * m >= 1:
                for kind in ("psi", "phi"):
                    g = GeneratorG(kind, k, Fraction(2, 3))
                    assert free_algebra_check(g, m, 13)


def test_nontrivial_word_m3():
    gens = [
        GeneratorG("phi", 1, Fraction(1)),
        GeneratorG("psi", 1, Fraction(1)),
        GeneratorG("phi", 1, Fraction(-1)),
    ]
    assert free_algebra_check(gens, 3, 30)


def test_cap_too_small_reported():
    with pytest.raises(DegreeCapExceeded):
        free_algebra_check(GeneratorG("psi", 3, 1), 4, 6)


def test_identity_word_reported_trivial():
    gens = [GeneratorG("psi", 1, Fraction(1)), GeneratorG("psi", 1, Fraction(-1))]
    assert not free_algebra_check(gens, 2, 8)


# ------------------------------------------------------------- word parsing


def test_parse_word_round_trip():
    gens = parse_word("psi(1,0.5,0); phi(2,-1,0.25)")
    assert gens == [
        GeneratorG("psi", 1, 0.5),
        GeneratorG("phi", 2, complex(-1, 0.25)),
    ]


def test_parse_word_rejects_garbage():
    with pytest.raises(ValueError):
        parse_word("tau(1,0,0)")
