from typing import Dict

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

REGISTRY = CollectorRegistry()

SOLVER_CALLS = Counter(
    "wh_solver_calls_total", "Wiener-Hopf solver invocations", ["method"], registry=REGISTRY
)
SOLVE_SECONDS = Histogram(
    "wh_solve_seconds", "Wall time of a Wiener-Hopf solve", ["method"], registry=REGISTRY
)
FACTORIZATIONS = Counter(
    "wh_factorizations_total", "Wold factorizations computed", registry=REGISTRY
)
FACTORIZATION_RESIDUAL = Gauge(
    "wh_factorization_residual", "Relative spectral residual of the last factorization",
    registry=REGISTRY,
)

_state: Dict[str, float] = {}


def record_solve(method: str, seconds: float) -> None:
    SOLVER_CALLS.labels(method=method).inc()
    SOLVE_SECONDS.labels(method=method).observe(seconds)
    key = f"solves.{method}"
    _state[key] = _state.get(key, 0.0) + 1.0


def record_factorization(residual: float) -> None:
    FACTORIZATIONS.inc()
    FACTORIZATION_RESIDUAL.set(residual)
    _state["factorizations"] = _state.get("factorizations", 0.0) + 1.0


def snapshot() -> Dict[str, float]:
    return dict(_state)


def write_textfile(path: str) -> None:
    write_to_textfile(path, REGISTRY)
