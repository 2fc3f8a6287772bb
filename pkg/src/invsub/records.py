"""Result records shared by the two inversion engines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class RenewalEstimate:
    """One renewal-function evaluation.

    ``n_used`` counts extrapolation-table rows for the Post-Widder engine
    and processed intervals for the Bromwich engine.  ``dU`` is None when
    the method does not produce a density estimate.
    """

    t: float
    U: float
    dU: Optional[float]
    method: str
    est_error: float
    converged: bool
    n_used: int
