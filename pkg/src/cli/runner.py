"""Batch front-end: ``python -m src.cli <command> <config.json>``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import settings

from ..approx import ApproxConfig, decay_study
from ..covmodel import (
    CovarianceSequence,
    SpectralGrid,
    WoldFactorization,
    default_grid_size,
    default_truncation,
    eval_spectral_density,
    wold_from_covariance,
)
from ..errors import ConfigurationError, ResidualToleranceError, WienerHopfError
from ..monitoring.metrics import snapshot, write_textfile
from ..storage.artifact_ledger import ArtifactLedger
from ..toeplitz import (
    ToeplitzSpec,
    dense_inverse,
    finite_inverse_levinson,
    finite_inverse_matrix,
    inverse_row,
    toeplitz_solve_truncated,
)
from ..wh_core import (
    m_step_filter,
    multistep_coeffs,
    solve_wh_classical,
    solve_wh_prediction,
    verify_normal_equations,
)
from .config import COMMANDS, METHODS, RunConfig, load_run_config

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
INVERT_TAGS = {
    "corollary": "corollary",
    "dense": "dense",
    "finite": "finite_eq219",
    "levinson": "levinson",
}


@dataclass
class RunResult:
    command: str
    files: List[Path] = field(default_factory=list)
    root: str = ""
    summary: Dict[str, object] = field(default_factory=dict)


def _table_bytes(frame: pd.DataFrame, fmt: str) -> bytes:
    if fmt == "json":
        records = frame.to_dict(orient="records")
        text = json.dumps(records, sort_keys=True, indent=2, default=lambda value: value.item())
        return (text + "\n").encode("utf-8")
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n").encode(
        "utf-8"
    )


def _factorize(config: RunConfig, cov: CovarianceSequence) -> Tuple[WoldFactorization, SpectralGrid]:
    numeric = config.numeric
    order = numeric.order
    if order is None:
        order = min(settings.ar_order, cov.truncation_length)
    length = numeric.truncation_length or default_truncation(cov.truncation_length, order)
    n_grid = numeric.n_grid or default_grid_size(length)
    wold = wold_from_covariance(
        cov,
        order,
        n_grid,
        truncation_length=length,
        tolerance=numeric.factorization_tolerance,
    )
    return wold, SpectralGrid.bare(n_grid)


def _run_factorize(config: RunConfig, ledger: ArtifactLedger, result: RunResult) -> None:
    cov = config.covariance()
    wold, grid = _factorize(config, cov)
    density = eval_spectral_density(cov, grid.n_grid)
    payload = {
        "sigma2": wold.sigma2,
        "phi": wold.phi[: wold.order].tolist(),
        "psi": wold.psi.tolist(),
        "order": wold.order,
        "truncation_length": wold.truncation_length,
        "n_grid": grid.n_grid,
        "residual": wold.residual,
        "f_min": density.minimum,
        "f_max": density.maximum,
    }
    result.files.append(ledger.write_json("factorize.json", payload))
    result.summary = {key: payload[key] for key in ("sigma2", "order", "residual")}


def _check_residual(method: str, residual: float, tolerance: Optional[float]) -> None:
    tol = settings.solve_tolerance if tolerance is None else tolerance
    if not residual <= tol:
        raise ResidualToleranceError(
            f"{method} solve residual {residual:.3g} exceeds tolerance {tol:.3g}",
            residual=residual,
            tolerance=tol,
            method=method,
        )


def _write_filter(
    name: str,
    h: np.ndarray,
    summary: Dict[str, object],
    config: RunConfig,
    ledger: ArtifactLedger,
    result: RunResult,
) -> None:
    frame = pd.DataFrame({"j": np.arange(h.size), "h_j": h})
    suffix = config.output.format
    result.files.append(ledger.write(f"{name}.{suffix}", _table_bytes(frame, suffix)))
    result.files.append(ledger.write_json(f"{name}.summary.json", summary))
    result.summary = summary


def _run_solve(config: RunConfig, ledger: ArtifactLedger, result: RunResult) -> None:
    numeric = config.numeric
    method = numeric.method
    cov = config.covariance()
    g = config.rhs_sequence(cov)

    if method == "oracle":
        n = numeric.dense_n or settings.dense_n
        dense = toeplitz_solve_truncated(ToeplitzSpec(cov, n), g)
        check_len = min(g.length + settings.residual_padding, n - 1)
        report = verify_normal_equations(cov, dense.h, g, check_len)
        h, residual, tail_energy = dense.h.values, report.max_residual, 0.0
    else:
        wold, grid = _factorize(config, cov)
        if method == "classical":
            solution = solve_wh_classical(g, wold, grid, cov=cov)
        else:
            solution = solve_wh_prediction(
                g,
                wold,
                grid,
                route=numeric.route,
                tolerance=numeric.grid_route_tolerance,
                cov=cov,
            )
        h, residual = solution.h.values, solution.residual
        check_len, tail_energy = solution.check_len, solution.tail_energy

    _check_residual(method, residual, numeric.solve_tolerance)
    summary = {
        "method": method,
        "residual": residual,
        "check_len": int(check_len),
        "tail_energy": tail_energy,
        "n": int(h.size),
    }
    _write_filter("solve", h, summary, config, ledger, result)


def _run_invert(config: RunConfig, ledger: ArtifactLedger, result: RunResult) -> None:
    numeric = config.numeric
    method = numeric.method
    rows, cols = list(numeric.rows), list(numeric.cols)
    cov = config.covariance()

    if method == "corollary":
        wold, _ = _factorize(config, cov)
        width = max(cols) + 1
        block = np.array([inverse_row(wold, k, width).values[cols] for k in rows])
    else:
        n = numeric.dense_n or settings.dense_n
        if max(rows + cols) >= n:
            raise ConfigurationError(
                f"requested entries fall outside the {n}x{n} truncated matrix", n=n
            )
        spec = ToeplitzSpec(cov, n)
        if method == "dense":
            block = dense_inverse(spec, cols)[rows]
        elif method == "levinson":
            block = finite_inverse_levinson(spec)[np.ix_(rows, cols)]
        else:
            wold, _ = _factorize(config, cov)
            block = finite_inverse_matrix(
                spec,
                rows=rows,
                cols=cols,
                wold=wold,
                tolerance=numeric.window_tail_tolerance,
            )

    k_index, j_index = np.meshgrid(rows, cols, indexing="ij")
    frame = pd.DataFrame(
        {
            "k": k_index.ravel(),
            "j": j_index.ravel(),
            "d_kj": np.asarray(block, dtype=float).ravel(),
            "method": INVERT_TAGS[method],
        }
    )
    suffix = config.output.format
    result.files.append(ledger.write(f"invert.{suffix}", _table_bytes(frame, suffix)))
    result.summary = {"method": INVERT_TAGS[method], "entries": int(frame.shape[0])}


def _run_predict(config: RunConfig, ledger: ArtifactLedger, result: RunResult) -> None:
    numeric = config.numeric
    cov = config.covariance()
    wold, grid = _factorize(config, cov)
    solution = m_step_filter(wold, numeric.m, grid, cov=cov)
    _check_residual("prediction", solution.residual, numeric.solve_tolerance)
    h = solution.h.values
    reference = multistep_coeffs(wold, numeric.m, h.size).values
    summary = {
        "m": numeric.m,
        "multistep_agreement": float(np.max(np.abs(h - reference))),
        "residual": solution.residual,
        "n": int(h.size),
    }
    _write_filter("predict", h, summary, config, ledger, result)


def _run_approx_study(config: RunConfig, ledger: ArtifactLedger, result: RunResult) -> None:
    numeric = config.numeric
    cov = config.covariance()
    study = decay_study(
        ApproxConfig(
            cov=cov,
            g=config.rhs_sequence(cov),
            p_list=numeric.p_list or list(settings.p_list),
            reference_order=numeric.reference_order,
            n_grid=numeric.n_grid,
            smoothness_k=settings.smoothness_k
            if numeric.smoothness_k is None
            else numeric.smoothness_k,
        )
    )
    suffix = config.output.format
    result.files.append(
        ledger.write(f"approx_study.{suffix}", _table_bytes(study.to_frame(), suffix))
    )
    result.files.append(ledger.write_json("approx_study.summary.json", study.summary()))
    result.summary = study.summary()


HANDLERS: Dict[str, Callable[[RunConfig, ArtifactLedger, RunResult], None]] = {
    "factorize": _run_factorize,
    "solve": _run_solve,
    "invert": _run_invert,
    "predict": _run_predict,
    "approx-study": _run_approx_study,
}


def run(config: RunConfig) -> RunResult:
    """Execute one run; artifacts and ``manifest.json`` go to ``config.output.path``."""

    result = RunResult(command=config.command)
    ledger = ArtifactLedger(config.output.path)
    HANDLERS[config.command](config, ledger, result)
    result.files.append(ledger.close())
    result.root = ledger.get_current_root()
    logger.info("%s finished: root=%s files=%s", config.command, result.root, len(result.files))
    return result


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wiener-hopf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        cmd = sub.add_parser(command)
        cmd.add_argument("config", help="JSON run configuration")
        cmd.add_argument("--out", help="output directory (overrides output.path)")
        cmd.add_argument("--format", choices=("csv", "json"))
        if command in METHODS:
            cmd.add_argument("--method", choices=METHODS[command])
        if command == "invert":
            cmd.add_argument("--rows", type=int, nargs="+")
            cmd.add_argument("--cols", type=int, nargs="+")
        if command == "predict":
            cmd.add_argument("--m", type=int)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {
        "command": args.command,
        "output": {"path": args.out, "format": args.format},
        "numeric": {
            "method": getattr(args, "method", None),
            "rows": getattr(args, "rows", None),
            "cols": getattr(args, "cols", None),
            "m": getattr(args, "m", None),
        },
    }


def _report_error(exc: WienerHopfError) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc), "details": exc.details()}
    sys.stderr.write(json.dumps(payload, sort_keys=True, default=str) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = _build_parser().parse_args(argv)
    try:
        config = load_run_config(args.config, _overrides(args))
        result = run(config)
    except WienerHopfError as exc:
        logger.error("%s failed: %s", args.command, exc)
        _report_error(exc)
        return exc.exit_code
    except ValueError as exc:
        logger.error("%s failed: %s", args.command, exc)
        _report_error(ConfigurationError(str(exc)))
        return ConfigurationError.exit_code
    finally:
        if settings.metrics_textfile:
            write_textfile(settings.metrics_textfile)

    logger.debug("metrics: %s", snapshot())
    sys.stdout.write(json.dumps({"root": result.root, "summary": result.summary}, sort_keys=True,
                                default=str) + "\n")
    return 0
