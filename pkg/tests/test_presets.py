from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest

from qsod.presets import (
    LabelRejected,
    PartitionLabel,
    QuiverRejected,
    QuiverSpec,
    block_cocharacter,
    block_coordinates,
    curve_labels,
    enumerate_partitions,
    kappa_for,
    quiver_config,
    quiver_delta_labels,
    quiver_sort_key,
)
from qsod.root_datum import gl_datum, levi
from qsod.sod import central_weight, enumerate_summands, lambda_data, validate
from qsod.weights import is_symmetric


def test_one_loop_dimension_one():
    cfg = quiver_config(QuiverSpec.loops(1, 1))
    assert dict(cfg.V.items()) == {(0,): 1}
    validate(cfg)


def test_two_loop_adjoint_bookkeeping():
    cfg = quiver_config(QuiverSpec.loops(2, 2))
    assert cfg.VG.mult((1, -1)) == 1 and cfg.VG.mult((-1, 1)) == 1
    validate(cfg)


def test_a2_quiver_is_rejected_with_its_line():
    spec = QuiverSpec(("a", "b"), (("a", "b"),), (1, 1))
    with pytest.raises(QuiverRejected, match=r"\(1,-1\)|\(-1,1\)"):
        quiver_config(spec)


@pytest.mark.parametrize("m,d", [(1, 2), (2, 2), (1, 3)])
def test_preprojective_weights_are_symmetric(m, d):
    cfg = quiver_config(QuiverSpec.loops(m, d, preprojective=True))
    assert is_symmetric(cfg.VG)


def test_partition_label_validation():
    with pytest.raises(ValueError, match="strictly increasing"):
        PartitionLabel.of(((1,), 1), ((1,), -1))
    with pytest.raises(ValueError):
        PartitionLabel.of(((0,), 1))
    with pytest.raises(ValueError, match="add up"):
        quiver_delta_labels(QuiverSpec.loops(2, 2), PartitionLabel.of(((1,), 0)))


def test_sort_key_examples():
    assert quiver_sort_key(PartitionLabel.of(((2,), 0))) == 0
    assert quiver_sort_key(PartitionLabel.of(((1,), -1), ((1,), 1))) == 2
    assert quiver_sort_key(PartitionLabel.of(((1,), -2), ((2,), 2))) == 6


def test_single_block_label():
    spec = QuiverSpec.loops(3, 2, F(1, 3))
    assert quiver_delta_labels(spec, PartitionLabel.of(((2,), 1))) == [(F(1, 3) + F(1, 2),) * 2]


def test_two_loop_one_plus_one():
    spec = QuiverSpec.loops(2, 2)
    labels = quiver_delta_labels(spec, PartitionLabel.of(((1,), -1), ((1,), 1)))
    assert labels == [(F(-3, 2),), (F(3, 2),)]


def _closed_form(m, part):
    out = []
    for i, (di, wi) in enumerate(part.blocks):
        before = sum(sum(d) for d, _ in part.blocks[:i])
        after = sum(sum(d) for d, _ in part.blocks[i + 1:])
        out.append((wi / sum(di) + F(m - 1, 2) * (before - after),) * sum(di))
    return out


def _all_partitions(d, bound):
    """Every composition of d with integral weights |w_i| <= bound and increasing slopes."""
    def comps(n):
        if n == 0:
            yield ()
            return
        for first in range(1, n + 1):
            for rest in comps(n - first):
                yield (first,) + rest

    for comp in comps(d):
        for ws in itertools.product(range(-bound, bound + 1), repeat=len(comp)):
            slopes = [F(w, c) for w, c in zip(ws, comp)]
            if all(a < b for a, b in zip(slopes, slopes[1:])):
                yield PartitionLabel.of(*(((c,), w) for c, w in zip(comp, ws)))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_loop_quiver_closed_form_and_pipeline(m):
    for d in range(1, 4):
        spec = QuiverSpec.loops(m, d)
        cfg = quiver_config(spec)
        for part in _all_partitions(d, 2):
            labels = quiver_delta_labels(spec, part)
            assert labels == _closed_form(m, part)
            lam = block_cocharacter(spec, part)
            data = lambda_data(cfg, lam, normalize=False)
            assert data.norm_sq == quiver_sort_key(part)
            for label, coords in zip(labels, block_coordinates(spec, part)):
                assert tuple(data.delta_lambda[i] for i in coords) == label


def test_preprojective_pipeline():
    spec = QuiverSpec.loops(1, 3, preprojective=True)
    cfg = quiver_config(spec)
    for part in _all_partitions(3, 2):
        data = lambda_data(cfg, block_cocharacter(spec, part), normalize=False)
        for label, coords in zip(quiver_delta_labels(spec, part), block_coordinates(spec, part)):
            assert tuple(data.delta_lambda[i] for i in coords) == label


def test_two_vertex_symmetric_quiver_pipeline():
    spec = QuiverSpec(("a", "b"), (("a", "b"), ("b", "a")), (1, 2), (F(0), F(0)))
    cfg = quiver_config(spec)
    for part in enumerate_partitions(spec, 4):
        data = lambda_data(cfg, block_cocharacter(spec, part), normalize=False)
        assert data.norm_sq == quiver_sort_key(part)
        for label, coords in zip(quiver_delta_labels(spec, part), block_coordinates(spec, part)):
            assert tuple(data.delta_lambda[i] for i in coords) == label


def test_enumerate_partitions_order_and_range():
    spec = QuiverSpec.loops(2, 2)
    parts = enumerate_partitions(spec, 4)
    keys = [quiver_sort_key(p) for p in parts]
    assert keys == sorted(keys, reverse=True) and max(keys) <= 4
    assert PartitionLabel.of(((2,), 0)) in parts
    assert PartitionLabel.of(((1,), -1), ((1,), 1)) in parts
    assert len(parts) == len(set(parts))


def test_partition_order_matches_summand_order():
    spec = QuiverSpec.loops(2, 2)
    cfg = quiver_config(spec)
    windows = enumerate_summands(cfg, 3)
    position = {W.lam.lam: k for k, W in enumerate(windows)}
    for cw in {W.central_weight for W in windows}:
        shared = []
        for part in enumerate_partitions(spec, 20):
            lam = lambda_data(cfg, block_cocharacter(spec, part)).lam
            if lam in position and central_weight(cfg, lam) == cw:
                shared.append(position[lam])
        assert shared == sorted(shared)


def test_curve_labels():
    rd = gl_datum(2)
    G, T = levi(rd, (0,)), levi(rd, ())
    assert curve_labels(rd, 5, G, (1, 1)) == (F(-1), F(-1))
    assert curve_labels(rd, kappa_for("higgs", genus=2), T, (1, -1)) == (F(-2), F(2))
    assert curve_labels(rd, kappa_for("bundles", genus=1), T, (3, -1)) == (F(-3), F(1))
    with pytest.raises(LabelRejected, match="root"):
        curve_labels(rd, 1, T, (-1, 1))


def test_kappa_families():
    assert kappa_for("bundles", genus=3) == 2
    assert kappa_for("twisted-higgs", degree=5) == 5
    assert kappa_for("local-systems", genus=2) == 2
    with pytest.raises(ValueError):
        kappa_for("sheaves")
