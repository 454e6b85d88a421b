import numpy as np
import pytest

from qgk.generators import build_generator_set
from qgk.grouping import (
    GroupScaling,
    GroupingConfig,
    assignment_matrix,
    build_vgg_set,
    build_vgg_set_streaming,
    export_summary,
    frobenius_weights,
    generators_per_group,
    group_count,
    grouping_rank,
    stride_permutation,
)


@pytest.mark.parametrize(
    "eta,expected_g,expected_gamma",
    [(2, 15, 1), (3, 21, 3), (4, 51, 5), (5, 93, 11)],
)
def test_group_count_table(eta, expected_g, expected_gamma):
    assert group_count(eta, GroupScaling.EXPONENTIAL) == expected_g
    assert generators_per_group(eta) == expected_gamma


@pytest.mark.parametrize("eta", range(2, 9))
def test_group_count_times_gamma_covers_basis(eta):
    g = group_count(eta, GroupScaling.EXPONENTIAL)
    assert g * generators_per_group(eta) == 4**eta - 1


def test_scaling_rules():
    assert group_count(3, GroupScaling.LINEAR) == 3
    assert group_count(3, GroupScaling.QUADRATIC) == 9
    assert group_count(3, GroupScaling.ALL) == 63
    assert group_count(3, GroupScaling.EXPLICIT, explicit=7) == 7


def test_eta2_exponential_groups_of_one(vgg_sets):
    for width in (0.0, 1.0, 2.0):
        vgg = vgg_sets(2, "exponential", width)
        assert vgg.groups == 15
        assert all(len(m) == 1 for m in vgg.assignment)
        assert sorted(vgg.permutation.tolist()) == list(range(15))


def test_eta3_wide_stride_is_16k_mod_63(vgg_sets):
    vgg = vgg_sets(3, "exponential", 3.0)
    expected = (np.arange(63) * 16) % 63
    assert np.array_equal(vgg.permutation, expected)
    assert all(len(m) == 3 for m in vgg.assignment)


def test_eta3_zero_width_identity_permutation(vgg_sets):
    vgg = vgg_sets(3, "exponential", 0.0)
    assert np.array_equal(vgg.permutation, np.arange(63))
    # groups are consecutive blocks of the family-interleaved ordering
    base = vgg.base_order
    assert vgg.assignment[0] == tuple(base[:3].tolist())
    assert vgg.assignment[1] == tuple(base[3:6].tolist())


def test_candidate_stride_used_when_bijective(vgg_sets):
    # linear scaling at w=1: (w/eta)*g = 1 -> identity candidate is kept
    vgg = vgg_sets(3, "linear", 1.0)
    assert np.array_equal(vgg.permutation, np.arange(63))


def test_stride_permutation_always_bijective():
    for eta in (2, 3, 4, 5):
        total = 4**eta - 1
        for scaling in GroupScaling:
            if scaling is GroupScaling.EXPLICIT:
                continue
            g = group_count(eta, scaling)
            for width in (0.0, 0.5, 1.0, float(eta)):
                perm = stride_permutation(total, g, width, eta)
                assert sorted(perm.tolist()) == list(range(total))


@pytest.mark.parametrize("scaling", ["linear", "quadratic", "exponential", "all"])
@pytest.mark.parametrize("width", [0.0, 1.0, None])
def test_partition_rank_frobenius(scaling, width, vgg_sets):
    for eta in (2, 3):
        vgg = vgg_sets(eta, scaling, width)
        total = 4**eta - 1
        seen = sorted(idx for members in vgg.assignment for idx in members)
        assert seen == list(range(total))
        sizes = vgg.group_sizes()
        assert sizes.max() - sizes.min() <= 1
        assert grouping_rank(vgg) == vgg.groups
        report = frobenius_weights(vgg)
        assert np.allclose(report.fro_norms_sq, 2.0 * sizes, atol=1e-9)
        for op in vgg.operators:
            assert np.max(np.abs(op - op.conj().T)) < 1e-12
            assert abs(np.trace(op)) < 1e-11


def test_leftover_distribution_first_groups(vgg_sets):
    # 15 generators into 2 linear groups -> sizes 8 and 7
    vgg = vgg_sets(2, "linear")
    assert vgg.group_sizes().tolist() == [8, 7]
    # 15 into 4 quadratic groups -> 4,4,4,3
    vgg = vgg_sets(2, "quadratic")
    assert vgg.group_sizes().tolist() == [4, 4, 4, 3]


def test_explicit_group_count_must_divide():
    gs = build_generator_set(2)
    with pytest.raises(ValueError):
        build_vgg_set(gs, GroupingConfig(eta=2, scaling=GroupScaling.EXPLICIT, explicit_groups=4))
    vgg = build_vgg_set(gs, GroupingConfig(eta=2, scaling=GroupScaling.EXPLICIT, explicit_groups=5))
    assert vgg.group_sizes().tolist() == [3, 3, 3, 3, 3]


def test_width_validation():
    with pytest.raises(ValueError):
        GroupingConfig(eta=2, width=3.0)
    with pytest.raises(ValueError):
        GroupingConfig(eta=2, width=-0.5)


def test_eta_mismatch():
    gs = build_generator_set(2)
    with pytest.raises(ValueError):
        build_vgg_set(gs, GroupingConfig(eta=3))


def test_rank_of_duplicated_column(vgg_sets):
    vgg = vgg_sets(2, "exponential")
    m = assignment_matrix(vgg)
    assert np.linalg.matrix_rank(m) == 15
    duplicated = m.copy()
    duplicated[:, 1] = duplicated[:, 0]
    assert np.linalg.matrix_rank(duplicated) == 14


def test_rank_matches_gaussian_elimination_oracle(vgg_sets):
    vgg = vgg_sets(2, "all")
    m = assignment_matrix(vgg).copy()
    # plain Gaussian elimination with partial pivoting
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = None
        for row in range(rank, rows):
            if abs(m[row, col]) > 1e-9:
                pivot = row
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] /= m[rank, col]
        for row in range(rows):
            if row != rank and abs(m[row, col]) > 1e-9:
                m[row] -= m[row, col] * m[rank]
        rank += 1
    assert grouping_rank(vgg) == rank == 15


def test_frobenius_structural_sums(vgg_sets):
    report = frobenius_weights(vgg_sets(2, "exponential"))
    assert np.allclose(report.fro_norms_sq, 2.0)
    assert report.size_sum == 15
    assert report.balance_sq == pytest.approx(225.0)
    assert report.size_sq_sum == 15


def test_balanced_grouping_identity(vgg_sets):
    # equal sizes: (sum sqrt)^2 = g^2 * Gamma
    vgg = vgg_sets(3, "exponential")
    report = frobenius_weights(vgg)
    g, gamma = vgg.groups, generators_per_group(3)
    assert report.balance_sq == pytest.approx(g * g * gamma, rel=1e-12)
    assert report.size_sq_sum == g * gamma * gamma


def test_eta5_group_sizes(vgg_sets):
    vgg = vgg_sets(5, "exponential")
    sizes = vgg.group_sizes()
    assert vgg.groups == 93
    assert set(sizes.tolist()) == {11}
    assert frobenius_weights(vgg).size_sum == 1023


@pytest.mark.parametrize("scaling,width", [("exponential", None), ("quadratic", 1.0), ("all", 0.0)])
def test_streaming_builder_matches_dense(scaling, width, generator_sets, vgg_sets):
    dense = vgg_sets(4, scaling, width)
    streamed = build_vgg_set_streaming(4, dense.config)
    assert streamed.assignment == dense.assignment
    assert np.array_equal(streamed.permutation, dense.permutation)
    for a, b in zip(streamed.operators, dense.operators):
        assert np.array_equal(a, b)


def test_summary_export(vgg_sets):
    text = export_summary(vgg_sets(2, "exponential"))
    lines = text.strip().splitlines()
    assert lines[0] == "index,size,members,fro_norm_sq"
    assert len(lines) == 16
    assert lines[1].startswith("0,1,")
