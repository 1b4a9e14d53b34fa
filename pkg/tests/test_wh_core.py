import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.covmodel import (
    SpectralGrid,
    conjugate_transfer_on_grid,
    default_grid_size,
    exp_on_grid,
    transfer_on_grid,
)
from src.errors import NumericalConsistencyError
from src.toeplitz import ToeplitzSpec, toeplitz_solve_truncated
from src.wh_core import (
    BiSeq,
    CausalSeq,
    TwoSidedSeq,
    anticausal_part,
    build_rhs,
    causal_part,
    concurrent_from_twosided,
    g_minus,
    m_step_filter,
    multistep_coeffs,
    phi_tail,
    rhs_cross_cov_shift,
    solve_wh_classical,
    solve_wh_prediction,
    twosided_from_cross_covariance,
    verify_normal_equations,
)

RHS_KINDS = ["unit", "shift", "sparse"]


def grid_for(wold, extra: int = 0) -> SpectralGrid:
    return SpectralGrid.bare(default_grid_size(wold.truncation_length + extra))


def make_rhs(kind: str, cov) -> CausalSeq:
    if kind == "unit":
        return build_rhs("unit", k=0)
    if kind == "shift":
        return rhs_cross_cov_shift(cov, 1)
    rng = np.random.default_rng(7)
    values = np.zeros(30)
    values[[0, 3, 11, 29]] = rng.normal(size=4)
    return CausalSeq(values)


def test_causal_part_splits_indices() -> None:
    seq = BiSeq(neg=np.array([2.0]), pos=CausalSeq.of([1.0, 3.0]))
    assert_allclose(causal_part(seq).values, [1.0, 3.0])
    assert_allclose(anticausal_part(seq), [2.0])


def test_causal_part_of_zero_sequence() -> None:
    seq = BiSeq(neg=np.zeros(3), pos=CausalSeq(np.zeros(4)))
    assert not np.any(causal_part(seq).values)
    assert not np.any(anticausal_part(seq))


def test_biseq_reassembly_is_exact() -> None:
    values = np.random.default_rng(3).normal(size=11)
    seq = BiSeq.from_full(values, zero_index=4)
    assert seq.neg[0] == values[3]
    assert np.array_equal(seq.to_full(), values)


def test_two_sided_sequence_indexing() -> None:
    a = TwoSidedSeq.delta(-2, half_width=3)
    assert a.half_width == 3
    assert a.at(-2) == 1.0 and a.at(2) == 0.0 and a.at(9) == 0.0
    with pytest.raises(ValueError):
        TwoSidedSeq(np.zeros(4))


def test_multistep_coeffs_ar1(ar1) -> None:
    coeffs = multistep_coeffs(ar1.wold, 3, 10).values
    assert coeffs[0] == pytest.approx(0.125, abs=1e-12)
    assert np.max(np.abs(coeffs[1:])) < 1e-12


def test_multistep_coeffs_white_noise(white) -> None:
    assert not np.any(multistep_coeffs(white.wold, 4, 10).values)


def test_multistep_coeffs_ma1(ma1) -> None:
    coeffs = multistep_coeffs(ma1.wold, 1, 20).values
    expected = -((-0.4) ** (np.arange(20) + 1))
    assert_allclose(coeffs, expected, atol=1e-10)


def test_phi_tail_examples(ar1, ma1) -> None:
    grid = grid_for(ar1.wold)
    expected = 0.5 * exp_on_grid(1, grid.n_grid)
    assert_allclose(phi_tail(ar1.wold, 0, grid), expected, atol=1e-12)
    assert np.max(np.abs(phi_tail(ar1.wold, 1, grid))) < 1e-12

    grid = grid_for(ma1.wold)
    at_zero = phi_tail(ma1.wold, 1, grid)[0]
    assert at_zero.real == pytest.approx(-0.16 / 1.4, abs=1e-10)


def test_classical_white_noise(white) -> None:
    g = CausalSeq.of([3.0, 1.0, -2.0])
    solution = solve_wh_classical(g, white.wold, grid_for(white.wold, 3), cov=white.cov)
    assert_allclose(solution.h.values[:3], g.values / 2.0, atol=1e-15)
    assert np.max(np.abs(solution.h.values[3:])) < 1e-15
    assert solution.residual == pytest.approx(0.0, abs=1e-15)


def test_classical_ar1_one_step_predictor(ar1) -> None:
    g = rhs_cross_cov_shift(ar1.cov, 1)
    solution = solve_wh_classical(g, ar1.wold, grid_for(ar1.wold, g.length), cov=ar1.cov)
    assert solution.h.values[0] == pytest.approx(0.5, abs=1e-10)
    assert np.max(np.abs(solution.h.values[1:])) < 1e-10
    assert solution.residual <= 1e-10


def test_classical_ar1_unit_rhs(ar1) -> None:
    solution = solve_wh_classical([1.0], ar1.wold, grid_for(ar1.wold, 1), cov=ar1.cov)
    assert_allclose(solution.h.values[:3], [1.0, -0.5, 0.0], atol=1e-10)


def test_prediction_matches_examples(white, ar1) -> None:
    g = CausalSeq.of([3.0, 1.0])
    solution = solve_wh_prediction(g, white.wold, grid_for(white.wold, 2), cov=white.cov)
    assert_allclose(solution.h.values[:2], [1.5, 0.5], atol=1e-15)

    g = rhs_cross_cov_shift(ar1.cov, 1)
    solution = solve_wh_prediction(g, ar1.wold, grid_for(ar1.wold, g.length), cov=ar1.cov)
    assert solution.h.values[0] == pytest.approx(0.5, abs=1e-10)
    assert solution.method_tag == "prediction"


def test_prediction_ma1_matches_dense_oracle(ma1) -> None:
    solution = solve_wh_prediction([1.0], ma1.wold, grid_for(ma1.wold, 1), cov=ma1.cov)
    dense = toeplitz_solve_truncated(ToeplitzSpec(ma1.cov, 400), [1.0])
    assert_allclose(solution.h.values[:200], dense.h.values[:200], atol=1e-8)


def test_prediction_grid_route(ar2) -> None:
    g = make_rhs("sparse", ar2.cov)
    grid = grid_for(ar2.wold, g.length)
    coefficient = solve_wh_prediction(g, ar2.wold, grid, cross_check=False, cov=ar2.cov)
    gridded = solve_wh_prediction(g, ar2.wold, grid, route="grid", cov=ar2.cov)
    assert_allclose(gridded.h.values, coefficient.h.values, atol=1e-8)


def test_prediction_cross_check_failure(ar2) -> None:
    g = make_rhs("sparse", ar2.cov)
    with pytest.raises(NumericalConsistencyError):
        solve_wh_prediction(g, ar2.wold, grid_for(ar2.wold, g.length), tolerance=1e-300)


def test_prediction_rejects_unknown_route(ar1) -> None:
    with pytest.raises(ValueError):
        solve_wh_prediction([1.0], ar1.wold, grid_for(ar1.wold, 1), route="fft")


@pytest.mark.parametrize("kind", RHS_KINDS)
def test_three_way_solver_agreement(case, kind) -> None:
    g = make_rhs(kind, case.cov)
    grid = grid_for(case.wold, g.length)
    classical = solve_wh_classical(g, case.wold, grid, cov=case.cov)
    prediction = solve_wh_prediction(g, case.wold, grid, cov=case.cov)
    dense = toeplitz_solve_truncated(ToeplitzSpec(case.cov, 400), g)

    scale = max(1.0, float(np.max(np.abs(classical.h.values))))
    assert np.max(np.abs(classical.h.values - prediction.h.values)) <= 1e-8 * scale
    assert_allclose(classical.h.values[:200], dense.h.values[:200], atol=1e-6)
    assert_allclose(prediction.h.values[:200], dense.h.values[:200], atol=1e-6)


def test_solution_grid_is_transform_of_coefficients(arma11) -> None:
    g = make_rhs("sparse", arma11.cov)
    solution = solve_wh_classical(g, arma11.wold, grid_for(arma11.wold, g.length))
    expected = transfer_on_grid(solution.h.values, solution.n_grid)
    assert np.max(np.abs(solution.H_grid - expected)) <= 1e-10


def test_g_minus_white_noise(white) -> None:
    extension = g_minus([1.0, 2.0, 3.0], white.wold)
    assert not np.any(extension.neg)


def test_g_minus_ar1_extension(ar1) -> None:
    g = rhs_cross_cov_shift(ar1.cov, 1)
    extension = g_minus(g, ar1.wold)
    assert extension.neg[0] == pytest.approx(1.0 / 3.0, abs=1e-10)

    solution = solve_wh_classical(g, ar1.wold, grid_for(ar1.wold, g.length))
    direct = sum(h * ar1.cov.at(np.array([-1 - j]))[0] for j, h in enumerate(solution.h.values))
    assert direct == pytest.approx(extension.neg[0], abs=1e-10)


@pytest.mark.parametrize("kind", ["unit", "sparse"])
def test_deconvolution_identity(case, kind) -> None:
    g = make_rhs(kind, case.cov)
    wold = case.wold
    grid = grid_for(wold, g.length)
    solution = solve_wh_classical(g, wold, grid)
    extension = g_minus(g, wold)

    n = grid.n_grid
    both_sides = transfer_on_grid(g.values, n) + conjugate_transfer_on_grid(
        np.concatenate(([0.0], extension.neg)), n
    )
    product = wold.density_on(n) * solution.H_grid
    scale = max(1.0, float(np.max(np.abs(product))))
    assert np.max(np.abs(both_sides - product)) <= 1e-8 * scale


def test_m_step_filter_examples(ar1, white, ma1) -> None:
    h = m_step_filter(ar1.wold, 2, grid_for(ar1.wold), cov=ar1.cov).h.values
    assert h[0] == pytest.approx(0.25, abs=1e-12)
    assert np.max(np.abs(h[1:])) < 1e-12

    h = m_step_filter(white.wold, 1, grid_for(white.wold)).h.values
    assert not np.any(h)

    h = m_step_filter(ma1.wold, 1, grid_for(ma1.wold), cov=ma1.cov).h.values
    assert_allclose(h[:20], -((-0.4) ** (np.arange(20) + 1)), atol=1e-10)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_m_step_filter_equals_multistep_coeffs(case, m) -> None:
    solution = m_step_filter(case.wold, m, grid_for(case.wold))
    reference = multistep_coeffs(case.wold, m, solution.h.length).values
    assert np.max(np.abs(solution.h.values - reference)) <= 1e-10


def test_concurrent_filter_examples(ar1) -> None:
    h = concurrent_from_twosided(TwoSidedSeq.delta(0), ar1.wold, 5).values
    assert_allclose(h, [1.0, 0.0, 0.0, 0.0, 0.0])

    h = concurrent_from_twosided(TwoSidedSeq.delta(1), ar1.wold, 5).values
    assert_allclose(h, [0.5, 0.0, 0.0, 0.0, 0.0], atol=1e-12)

    h = concurrent_from_twosided(TwoSidedSeq.delta(-1), ar1.wold, 5).values
    assert_allclose(h, [0.0, 1.0, 0.0, 0.0, 0.0])


@pytest.mark.parametrize("m", [1, 3])
def test_two_sided_consistency(ar2, ma1, m) -> None:
    for fixture in (ar2, ma1):
        cov = fixture.cov
        span = cov.truncation_length + m
        cross = TwoSidedSeq(cov.at(np.arange(-span, span + 1) + m))
        a = twosided_from_cross_covariance(cross, cov, half_width=m + 2)
        assert a.at(m) == pytest.approx(1.0, abs=1e-10)

        expected = m_step_filter(fixture.wold, m, grid_for(fixture.wold)).h.values
        h = concurrent_from_twosided(a, fixture.wold, expected.size).values
        assert np.max(np.abs(h - expected)) <= 1e-8


@pytest.mark.parametrize("ell", [0, 1, 2, 7, 20])
def test_shifted_prediction_identity(ar2, ma1, ell) -> None:
    for fixture in (ar2, ma1):
        wold = fixture.wold
        grid = grid_for(wold)
        n = grid.n_grid
        psi_conj = conjugate_transfer_on_grid(wold.psi, n)
        lhs = exp_on_grid(ell, n) + psi_conj * np.conj(phi_tail(wold, ell, grid))
        head = np.concatenate(([1.0], -wold.phi[:ell]))
        rhs = exp_on_grid(ell, n) * psi_conj * conjugate_transfer_on_grid(head, n)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10


@pytest.mark.parametrize("j", [0, 1, 4])
def test_multistep_generating_function(ar2, j) -> None:
    wold = ar2.wold
    grid = grid_for(wold)
    length = wold.truncation_length
    series = np.zeros(length + 1)
    for ell in range(1, length + 1):
        series[ell] = multistep_coeffs(wold, ell, j + 1).values[j]
    lhs = transfer_on_grid(series, grid.n_grid)
    rhs = transfer_on_grid(wold.psi, grid.n_grid) * phi_tail(wold, j, grid)
    assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_verify_normal_equations_examples(white, ar1) -> None:
    report = verify_normal_equations(white.cov, [1.5, 0.5], [3.0, 1.0])
    assert report.max_residual == 0.0
    assert report.check_len == 2 + 20

    g = rhs_cross_cov_shift(ar1.cov, 1)
    h = np.zeros(5)
    h[0] = 0.5
    assert verify_normal_equations(ar1.cov, h, g).max_residual <= 1e-10

    h[0] += 0.1
    report = verify_normal_equations(ar1.cov, h, g)
    assert report.residuals[0] >= 0.1 * ar1.cov.values[0] - 1e-12
