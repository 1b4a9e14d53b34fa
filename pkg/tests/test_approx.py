import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.approx import DECAY_COLUMNS, ApproxConfig, baxter_terms, decay_study, fit_Hp
from src.covmodel import SpectralGrid
from src.wh_core import CausalSeq, solve_wh_classical

UNIT = CausalSeq.of([1.0])


def test_fit_hp_exact_inside_model_class(ar1) -> None:
    grid = SpectralGrid.bare(1024)
    for p in (1, 3, 8):
        approx = fit_Hp(UNIT, ar1.cov, p, grid)
        truth = solve_wh_classical(UNIT, ar1.wold, grid)
        width = approx.h.length
        assert_allclose(approx.h.values, truth.h.values[:width], atol=1e-12)
        assert approx.method_tag == "ar_p"


def test_fit_hp_white_noise(white) -> None:
    g = CausalSeq.of([3.0, 1.0])
    approx = fit_Hp(g, white.cov, 1, SpectralGrid.bare(64))
    assert_allclose(approx.h.values[:2], [1.5, 0.5], atol=1e-15)
    assert not np.any(approx.h.values[2:])


@pytest.mark.parametrize("p", [2, 5, 12])
def test_fit_hp_solves_its_own_normal_equations(ma1, p) -> None:
    g = CausalSeq.of([1.0, -0.3, 0.2])
    approx = fit_Hp(g, ma1.cov, p, SpectralGrid.bare(256))
    assert approx.residual <= 1e-8


def test_fit_hp_rejects_zero_order(ar1) -> None:
    with pytest.raises(ValueError):
        fit_Hp(UNIT, ar1.cov, 0, SpectralGrid.bare(64))


def test_baxter_terms_vanish_inside_model_class(ar1, ar2) -> None:
    for p in (1, 2, 4):
        lhs, tail = baxter_terms(ar1.cov, p, 16)
        assert lhs == pytest.approx(0.0, abs=1e-12)
        assert tail == pytest.approx(0.0, abs=1e-12)
    for p in (2, 3, 4):
        lhs, tail = baxter_terms(ar2.cov, p, 16)
        assert lhs == pytest.approx(0.0, abs=1e-12)
        assert tail == pytest.approx(0.0, abs=1e-12)


def test_baxter_tail_of_ma1(ma1) -> None:
    _, tail = baxter_terms(ma1.cov, 2, 60)
    assert tail == pytest.approx(0.064 / 0.6, abs=1e-8)


@pytest.mark.parametrize("name", ["ma1", "arma11", "polynomial"])
def test_baxter_ratio_stays_bounded(name, request) -> None:
    cov = request.getfixturevalue(name).cov
    ratios = []
    tails = []
    for p in (2, 4, 8, 16, 32):
        lhs, tail = baxter_terms(cov, p, 128)
        tails.append(tail)
        if tail > 1e-12:
            ratios.append(lhs / tail)
    assert all(b <= a + 1e-15 for a, b in zip(tails, tails[1:]))
    assert ratios and max(ratios) < 10.0


def test_baxter_requires_long_reference(ma1) -> None:
    with pytest.raises(ValueError):
        baxter_terms(ma1.cov, 8, 16)


def test_approx_config_validation(ar1) -> None:
    with pytest.raises(ValueError):
        ApproxConfig(cov=ar1.cov, g=UNIT, p_list=[4, 2])
    with pytest.raises(ValueError):
        ApproxConfig(cov=ar1.cov, g=UNIT, p_list=[2, 4], reference_order=10)
    config = ApproxConfig(cov=ar1.cov, g=UNIT, p_list=[2, 4])
    assert config.reference_order == 16


def test_decay_study_exact_for_ar1(ar1) -> None:
    study = decay_study(ApproxConfig(cov=ar1.cov, g=UNIT, p_list=[1, 2, 4], reference_order=16))
    assert [row.p for row in study.rows] == [1, 2, 4]
    assert all(row.sup_err <= 1e-10 for row in study.rows)
    frame = study.to_frame()
    assert list(frame.columns) == DECAY_COLUMNS


def test_decay_study_geometric_rate(ma1) -> None:
    study = decay_study(
        ApproxConfig(cov=ma1.cov, g=UNIT, p_list=[2, 4, 6, 8, 10], reference_order=60)
    )
    errors = [row.sup_err for row in study.rows]
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert study.semilog_slope == pytest.approx(math.log(0.4), rel=0.2)
    assert study.reference_residual * 100 <= min(errors)
    assert study.uniform_bound_holds is True
    assert all(row.sup_g == 1.0 and row.sup_Gplus == pytest.approx(1.0) for row in study.rows)


def test_decay_study_polynomial_rate(polynomial) -> None:
    study = decay_study(
        ApproxConfig(
            cov=polynomial.cov, g=UNIT, p_list=[8, 16, 32, 64], reference_order=512
        )
    )
    assert study.slope is not None and study.slope <= -2.5
    assert study.c_fit is not None and study.c_fit > 0
    assert study.uniform_bound_holds is True
    tails = [row.ar_tail for row in study.rows]
    assert all(b <= a for a, b in zip(tails, tails[1:]))


def test_decay_study_summary_keys(ma1) -> None:
    study = decay_study(ApproxConfig(cov=ma1.cov, g=UNIT, p_list=[2, 4], reference_order=16))
    summary = study.summary()
    assert set(summary) == {
        "slope",
        "semilog_slope",
        "C_fit",
        "reference_residual",
        "uniform_bound_holds",
    }
    # no order reaches 8, so there is no anchor for the uniform constant
    assert summary["C_fit"] is None and summary["uniform_bound_holds"] is None


def test_decay_study_threaded_matches_serial(ma1, monkeypatch) -> None:
    from config.settings import settings

    config = ApproxConfig(cov=ma1.cov, g=UNIT, p_list=[2, 4, 8], reference_order=32)
    serial = decay_study(config)
    monkeypatch.setattr(settings, "study_workers", 3)
    threaded = decay_study(config)
    assert [row.sup_err for row in threaded.rows] == [row.sup_err for row in serial.rows]
