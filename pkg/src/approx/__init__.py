"""AR(p) approximation of Wiener-Hopf solutions and the decay study."""

from .ar_approx import (
    DECAY_COLUMNS,
    ApproxConfig,
    DecayRow,
    DecayStudy,
    baxter_terms,
    decay_study,
    fit_Hp,
)

__all__ = [
    "DECAY_COLUMNS",
    "ApproxConfig",
    "DecayRow",
    "DecayStudy",
    "baxter_terms",
    "decay_study",
    "fit_Hp",
]
