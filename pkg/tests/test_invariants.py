import numpy as np
import pytest

from quivercm.invariants import (
    InvariantIndex,
    admissible_indices,
    block_consistency,
    cycle_matrices,
    invariant,
    invariant_vector,
    invariants_from_text,
    invariants_to_text,
)
from quivercm.points import QuiverSetting, base_point_n1, gauge_apply, solve_point


def lam_generic(m):
    return tuple(complex(1.0 + 0.1 * k, 0.6 + 0.23 * k) for k in range(m))


def cm_setting(m, n):
    return QuiverSetting(m, lam_generic(m), (n,) * m)


def test_cycle_matrices_m2_base():
    s = cm_setting(2, 1)
    p = base_point_n1(s)
    A, B, C = cycle_matrices(p)
    assert A[0, 0] == 1  # Y_1 Y_0 = 1
    assert B[0, 0] == 0  # X_0 X_1 = 0
    assert np.allclose(C[0], np.eye(1))
    assert C[1][0, 0] == s.lam[1]  # Y_1 X_1


def test_cycle_matrices_m1():
    s = cm_setting(1, 2)
    p = solve_point(s, seed=0)
    A, B, C = cycle_matrices(p)
    assert np.allclose(A, p.Y[0]) and np.allclose(B, p.X[0])
    assert len(C) == 1


def test_invariant_values_m2_base():
    s = cm_setting(2, 1)
    p = base_point_n1(s)
    assert invariant(p, "H", InvariantIndex(0, 0, 0)) == pytest.approx(
        s.lam[0] + s.lam[1]
    )
    assert invariant(p, "G", InvariantIndex(0, 0, 1)) == pytest.approx(s.lam[1])
    assert invariant(p, "G", InvariantIndex(0, 0, 0)) == pytest.approx(1)


def test_invariant_m1_base():
    s = cm_setting(1, 1)
    p = base_point_n1(s)
    assert invariant(p, "H", InvariantIndex(0, 0, 0)) == pytest.approx(s.lam[0])
    assert invariant(p, "G", InvariantIndex(1, 0, 0)) == pytest.approx(0.0)


def test_invariant_box_enforced():
    p = base_point_n1(cm_setting(2, 1))
    with pytest.raises(ValueError):
        invariant(p, "G", InvariantIndex(5, 0, 0))
    with pytest.raises(ValueError):
        invariant(p, "G", InvariantIndex(0, 0, 2))


def test_vector_length_counts():
    for m, n in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        s = cm_setting(m, n)
        N = s.total_dim
        count = sum(
            1
            for k in range(m)
            for i in range(N + 1)
            for j in range(N + 1)
            if max(m * i + k, m * j + k) <= N
        )
        p = base_point_n1(s) if n == 1 else solve_point(s, seed=0)
        assert len(invariant_vector(p).entries) == 2 * count


def test_gauge_invariance_of_vector():
    rng = np.random.default_rng(3)
    s = cm_setting(2, 2)
    p = solve_point(s, seed=1)
    for _ in range(10):
        g = [
            rng.standard_normal((a, a))
            + 1j * rng.standard_normal((a, a))
            + 2.0 * np.eye(a)
            for a in s.alpha
        ]
        q = gauge_apply(g, p)
        vp, vq = invariant_vector(p).entries, invariant_vector(q).entries
        for key in vp:
            a, b = vp[key], vq[key]
            assert abs(a - b) <= 1e-10 * (1 + max(abs(a), abs(b)))


def test_trace_cyclic_smoke():
    s = cm_setting(3, 2)
    p = solve_point(s, seed=2)
    A, B, C = cycle_matrices(p)
    for k in range(3):
        assert np.trace(A @ C[k]) == pytest.approx(np.trace(C[k] @ A))


@pytest.mark.parametrize("m,n", [(1, 2), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_block_consistency(m, n):
    s = cm_setting(m, n)
    p = base_point_n1(s) if n == 1 else solve_point(s, seed=4)
    assert block_consistency(p) <= 1e-10


def test_block_trace_normalization_m2_base():
    # with N = 2 the block trace of Y^2 sums both cyclic rotations of Tr(A)
    from quivercm.points import block_form

    s = cm_setting(2, 1)
    p = base_point_n1(s)
    b = block_form(p)
    A, _, _ = cycle_matrices(p)
    assert np.trace(np.linalg.matrix_power(b.Y_big, 2)) == pytest.approx(
        2 * np.trace(A)
    )
    # and the zero-power pattern: Tr(Id_N) = N while G[0,0,0] = alpha_0
    assert np.trace(np.eye(s.total_dim)) == s.total_dim


def test_serialization_round_trip():
    s = cm_setting(2, 1)
    p = base_point_n1(s)
    vec = invariant_vector(p)
    text = invariants_to_text(vec)
    back = invariants_from_text(text)
    assert set(back) == set(vec.entries)
    for key in back:
        assert back[key] == pytest.approx(vec.entries[key])


def test_admissible_indices_match_box():
    s = cm_setting(3, 2)
    N = s.total_dim
    for (i, j, k) in admissible_indices(s):
        assert max(3 * i + k, 3 * j + k) <= N
