"""Dimension-only coherence formulas for the circuit's two superposition stages.

After the first Hadamard layer the state is an equal-magnitude superposition
over N = 2^n basis states; after the oracle and second Hadamard layer it is
one over N^2/4 (for a nonzero pairing mask).  Every panel measure therefore
admits a closed form in N alone, evaluated here in floating point without
building any state, which keeps dimensions up to 2^20 cheap.

The change ``final - hadamard`` is positive for every panel measure when
N > 4, zero at N = 4, and negative when N < 4, so the second half of the
circuit produces coherence exactly when n >= 3.

The l1 value at the final stage has two candidate algebraic forms,
N^2/4 - 1 and N^2/2 - 1; see ``final_stage_l1_candidates``.  Dense
simulation at small n confirms N^2/4 - 1 (the p = 1 matrix-norm value), and
that is the form used everywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import DEFAULT_PANEL, CoherenceMeasure
from .tolerances import TOL

__all__ = [
    "REGIME_PANEL",
    "REGIME_PRODUCTION",
    "REGIME_NEUTRAL",
    "REGIME_DEPLETION",
    "RegimeVerdict",
    "uniform_superposition_coherence",
    "hadamard_stage_coherence",
    "final_stage_coherence",
    "final_stage_l1_candidates",
    "coherence_delta",
    "classify_regime",
]

REGIME_PANEL: tuple[CoherenceMeasure, ...] = DEFAULT_PANEL
REGIME_PRODUCTION = "production"
REGIME_NEUTRAL = "neutral"
REGIME_DEPLETION = "depletion"

MAX_CLOSED_FORM_BITS = 20


@dataclass(frozen=True)
class RegimeVerdict:
    """Per-measure coherence changes at a dimension and their common sign."""

    dim: int
    deltas: dict[CoherenceMeasure, float]
    regime: str


def _require_dim(dim: int) -> None:
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"dimension must be a power of two at least 2, got {dim}")
    if dim > 1 << MAX_CLOSED_FORM_BITS:
        raise ValueError(f"dimension exceeds 2^{MAX_CLOSED_FORM_BITS}: {dim}")


def uniform_superposition_coherence(support: int, measure: CoherenceMeasure) -> float:
    """Coherence of an equal-magnitude superposition over ``support`` basis states."""
    if support < 1:
        raise ValueError(f"support must be positive, got {support}")
    m = float(support)
    kind = measure.kind
    if kind == "tsallis":
        alpha = measure.param
        if abs(alpha - 1.0) <= TOL.tsallis_limit_window:
            return math.log(m)
        return (m ** (1.0 - 1.0 / alpha) - 1.0) / (alpha - 1.0)
    if kind == "l1p":
        return (m - 1.0) ** (1.0 / measure.param)
    if kind == "rel_entropy":
        return math.log2(m)
    if kind == "skew_info":
        return 1.0 - 1.0 / m
    return m - 1.0


def hadamard_stage_coherence(dim: int, measure: CoherenceMeasure) -> float:
    """Closed form after the first Hadamard layer: a uniform superposition over dim."""
    _require_dim(dim)
    return uniform_superposition_coherence(dim, measure)


def final_stage_coherence(dim: int, measure: CoherenceMeasure) -> float:
    """Closed form after the second Hadamard layer, for a nonzero pairing mask.

    Written in the dim-explicit shape rather than by substituting the
    support count, so cross-checks against ``uniform_superposition_coherence``
    at support dim^2/4 exercise genuinely different arithmetic.
    """
    _require_dim(dim)
    n = float(dim)
    kind = measure.kind
    if kind == "tsallis":
        alpha = measure.param
        if abs(alpha - 1.0) <= TOL.tsallis_limit_window:
            return math.log(n * n / 4.0)
        return (4.0 ** (1.0 / alpha - 1.0) * n ** (2.0 - 2.0 / alpha) - 1.0) / (alpha - 1.0)
    if kind == "l1p":
        return (n * n / 4.0 - 1.0) ** (1.0 / measure.param)
    if kind == "rel_entropy":
        return math.log2(n * n / 4.0)
    if kind == "skew_info":
        return 1.0 - 4.0 / (n * n)
    return n * n / 4.0 - 1.0


def final_stage_l1_candidates(dim: int) -> dict[str, float]:
    """Both published candidates for the final-stage l1 value.

    ``quarter_form`` is dim^2/4 - 1, the p = 1 specialization of the matrix
    norm; ``half_form`` is dim^2/2 - 1, an alternate statement.  They cannot
    both be right: dense simulation (n = 2 gives 3, n = 3 gives 15) confirms
    the quarter form.
    """
    _require_dim(dim)
    n = float(dim)
    return {"quarter_form": n * n / 4.0 - 1.0, "half_form": n * n / 2.0 - 1.0}


def coherence_delta(dim: int, measure: CoherenceMeasure) -> float:
    """Coherence change across the oracle plus second Hadamard layer."""
    return final_stage_coherence(dim, measure) - hadamard_stage_coherence(dim, measure)


def classify_regime(dim: int, band: float = TOL.neutral_band) -> RegimeVerdict:
    """Sign of the coherence change over the standard measure panel.

    The panel must agree: all deltas above +band, all below -band, or all
    inside the band.  Mixed signs indicate an internal inconsistency.
    """
    deltas = {measure: coherence_delta(dim, measure) for measure in REGIME_PANEL}
    values = np.array(list(deltas.values()))
    if (values > band).all():
        regime = REGIME_PRODUCTION
    elif (values < -band).all():
        regime = REGIME_DEPLETION
    elif (np.abs(values) <= band).all():
        regime = REGIME_NEUTRAL
    else:
        raise ArithmeticError(f"inconsistent delta signs at dim={dim}: {deltas}")
    return RegimeVerdict(dim, deltas, regime)
