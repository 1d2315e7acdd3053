from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsod.presets import gl_adjoint_config, parallelogram_config, toy_config
from qsod.ratlin import pair, vec
from qsod.root_datum import generate_weyl, gl_datum, torus_datum
from qsod.sod import (
    ConfigError,
    QuadraticNorm,
    SODConfig,
    box_points,
    central_blocks,
    check_full_faithfulness,
    check_semiorthogonality,
    config_problems,
    convex_minimizer,
    enumerate_summands,
    lambda_data,
    locate,
    locate_all,
    locate_label,
    validate,
    window,
)
from qsod.weights import SignedWeightMultiset

from randcfg import random_torus_config

PAR = parallelogram_config()
TOY = toy_config(2)


def pts(*xs):
    return tuple((x,) if isinstance(x, int) else x for x in xs)


# --- configuration checks -------------------------------------------------------


def test_quadratic_norm_checks():
    assert QuadraticNorm.of([[2, 1], [1, 2]]).is_positive_definite()
    assert not QuadraticNorm.of([[1, 2], [2, 1]]).is_positive_definite()
    rd = gl_datum(2)
    assert QuadraticNorm.of([[2, 1], [1, 2]]).is_w_invariant(rd)
    assert not QuadraticNorm.of([[1, 0], [0, 2]]).is_w_invariant(rd)
    assert QuadraticNorm.standard(3).norm_sq((1, -2, 2)) == 9


def test_config_problems_name_the_invariant():
    rd = gl_datum(2)
    V = SignedWeightMultiset(2, {})
    ok = SODConfig(rd, V, QuadraticNorm.standard(2), (F(1, 2), F(1, 2)))
    assert config_problems(ok) == []
    bad_delta = SODConfig(rd, V, QuadraticNorm.standard(2), (F(1), F(0)))
    assert any(p.startswith("delta") for p in config_problems(bad_delta))
    bad_q = SODConfig(rd, V, QuadraticNorm.of([[1, 2], [2, 1]]), (F(0), F(0)))
    assert any("positive-definite" in p for p in config_problems(bad_q))
    lopsided = SODConfig(torus_datum(1), SignedWeightMultiset(1, {(1,): 1}), QuadraticNorm.standard(1), (F(0),))
    with pytest.raises(ConfigError, match="quasi-symmetry"):
        validate(lopsided)


# --- per-cocharacter data ---------------------------------------------------------


def test_lambda_zero_is_the_centre():
    d = lambda_data(PAR, (0, 0))
    assert d.delta_lambda == PAR.delta
    assert d.fixed_V == PAR.VG
    assert d.norm_sq == 0


def test_parallelogram_lambda_data():
    d = lambda_data(PAR, (0, 1))
    assert d.v_lambda == (F(1, 2), F(1))
    assert d.delta_lambda == (F(-1, 2), F(-2))
    assert d.fixed_V.mult((2, 0)) == 1 and d.fixed_V.mult((-2, 0)) == 1
    assert d.norm_sq == 1


@pytest.mark.parametrize("delta", [F(0), F(1, 2)])
def test_toy_lambda_data(delta):
    assert lambda_data(toy_config(2, delta), (1,)).delta_lambda == (delta - 2,)


def test_lambda_data_normalizes_to_antidominant():
    cfg = gl_adjoint_config(2, 2)
    d = lambda_data(cfg, (1, -1))
    assert d.lam == (F(-1), F(1)) and d.raw == (F(1), F(-1))


def test_windows_from_examples():
    assert window(PAR, (0, 0)).dominant_points == ((-1, -1), (-1, 0), (0, -1), (0, 0), (0, 1), (1, 0), (1, 1))
    assert window(PAR, (0, 1)).cell_points == ((-1, -2), (0, -2))
    assert window(TOY, (3,)).cell_points == pts(-4)


# --- locate ---------------------------------------------------------------------


def test_locate_examples():
    assert locate(PAR, (0, 0)).lam == (0, 0)
    d = locate(PAR, (3, 0))
    assert d.lam == (F(-8, 5), F(4, 5)) and d.norm_sq == F(16, 5)
    assert locate(TOY, (-3,)).lam == (2,)


def test_locate_rejects_wrong_rank():
    with pytest.raises(ConfigError):
        locate_all(PAR, (1,))


def test_toy_enumeration():
    W = enumerate_summands(TOY, 3)
    assert [w.lam.lam for w in W] == [(-2,), (2,), (-1,), (1,), (0,)]
    cells = {w.lam.lam[0]: w.cell_points for w in W}
    assert cells == {0: pts(-1, 0, 1), 1: pts(-2), 2: pts(-3), -1: pts(2), -2: pts(3)}


def test_pure_torus_has_one_summand_per_weight():
    cfg = SODConfig(torus_datum(2), SignedWeightMultiset(2, {}), QuadraticNorm.of([[2, 1], [1, 2]]), (F(1, 3), F(0)))
    W = enumerate_summands(cfg, 2)
    assert sorted(w.cell_points for w in W) == [(p,) for p in box_points(2, 2)]
    for w in W:
        assert w.lam.delta_lambda == w.cell_points[0]


# --- properties -----------------------------------------------------------------


def _enumerated(cfg, radius):
    return enumerate_summands(cfg, radius)


@pytest.mark.parametrize("cfg", [PAR, TOY, toy_config(3, F(1, 2)), gl_adjoint_config(2, 2), gl_adjoint_config(3, 1)])
def test_level_set_and_containment(cfg):
    for W in _enumerated(cfg, 2):
        level = pair(W.lam.lam, W.lam.delta_lambda)
        assert set(W.dominant_points) <= set(W.cell_points)
        for p in W.cell_points:
            assert pair(W.lam.lam, vec(p)) == level


@pytest.mark.parametrize("cfg", [gl_adjoint_config(2, 2), gl_adjoint_config(3, 1), gl_adjoint_config(2, 3, F(1, 2))])
def test_levi_weyl_invariance_of_centre(cfg):
    for W in _enumerated(cfg, 2):
        for i in W.lam.levi_roots:
            assert pair(cfg.rd.coroots[i], W.lam.delta_lambda) == 0


@pytest.mark.parametrize("d,m", [(2, 2), (3, 1)])
def test_locate_is_weyl_equivariant(d, m):
    cfg = gl_adjoint_config(d, m)
    group = generate_weyl(cfg.rd)
    for w in box_points(d, 2):
        base = locate_all(cfg, w)
        for pi in group:
            moved = tuple(int(x) for x in pi.act(vec(w)))
            assert locate_all(cfg, moved) == sorted(pi.act_co(lam) for lam in base)


@pytest.mark.parametrize("lam", [(0, 1), (-2, 1), (1, 1), (-8, 4)])
def test_scale_coherence(lam):
    base = lambda_data(PAR, lam)
    cells = []
    for t in (F(1, 3), F(1, 2), F(1), F(2), F(3)):
        d = lambda_data(PAR, tuple(t * x for x in lam))
        assert d.fixed_V == base.fixed_V and d.v_lambda == base.v_lambda
        assert d.norm_sq == t * t * base.norm_sq
        cells.append(set(window(PAR, d.lam).cell_points))
    for i in range(len(cells)):
        for j in range(i):
            assert not cells[i] & cells[j]


def test_enumeration_grows_monotonically():
    small = {W.lam.lam for W in _enumerated(PAR, 2)}
    large = {W.lam.lam for W in _enumerated(PAR, 3)}
    assert small <= large


@pytest.mark.parametrize("cfg", [PAR, gl_adjoint_config(2, 2), gl_adjoint_config(3, 2)])
def test_equal_norm_and_central_weight_cells_are_disjoint(cfg):
    windows = _enumerated(cfg, 2)
    for i, A in enumerate(windows):
        for B in windows[:i]:
            if A.lam.norm_sq == B.lam.norm_sq and A.central_weight == B.central_weight:
                assert not set(A.cell_points) & set(B.cell_points)


def test_central_blocks_group_by_weight():
    cfg = gl_adjoint_config(2, 1)
    blocks = central_blocks(_enumerated(cfg, 2))
    for key, group in blocks.items():
        assert all(W.central_weight == key for W in group)
    assert sum(len(g) for g in blocks.values()) == len(_enumerated(cfg, 2))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_random_torus_partition_and_oracle(seed, rank):
    cfg = random_torus_config(seed, rank)
    for w in box_points(rank, 2 if rank < 3 else 1):
        lam = locate_label(cfg, w)
        assert convex_minimizer(cfg, w) == lam
        assert w in window(cfg, lam).cell_points


# --- inequality suites ------------------------------------------------------------


def test_toy_semiorthogonality_margins():
    r = check_semiorthogonality(TOY, (1,), (2,))
    assert r.ok and r.margins == (2, 4, 6)


def test_toy_opposite_pair_meets_chain_bound():
    r = check_semiorthogonality(TOY, (1,), (-1,))
    bound = TOY.q.norm_sq((-1,)) - 1
    assert r.ok and r.min_margin > bound


def test_semiorthogonality_preconditions():
    with pytest.raises(ValueError):
        check_semiorthogonality(TOY, (1,), (1,))
    with pytest.raises(ValueError):
        check_semiorthogonality(TOY, (2,), (1,))


def test_toy_full_faithfulness():
    r = check_full_faithfulness(TOY, (1,))
    assert r.ok and r.margins == (1, 2)


def test_parallelogram_full_faithfulness():
    r = check_full_faithfulness(PAR, (0, 1))
    assert r.ok and r.min_margin > 0


def test_empty_J_keeps_the_level():
    W = window(TOY, (1,))
    level = pair(W.lam.lam, W.lam.delta_lambda)
    assert {pair(W.lam.lam, vec(p)) for p in W.dominant_points} == {level}


def test_gl2_walls_are_skipped():
    # J whose shifted weight sits on a wall contributes no induced term
    cfg = gl_adjoint_config(2, 2)
    r = check_full_faithfulness(cfg, (-1, 1))
    assert r.ok


def test_shifted_centres_break_the_inequalities():
    # the offset only moves windows with lam != 0, so the centre now touches lam = 1
    r = check_semiorthogonality(TOY, (0,), (1,), offset=(1,))
    assert not r.ok
    v = r.violations[0]
    assert (v.w, v.w_prime, v.margin) == ((-1,), (-1,), 0)
