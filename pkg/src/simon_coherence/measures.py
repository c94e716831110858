"""Coherence quantifiers in the computational basis.

Five quantifiers are provided, each vanishing on diagonal states and
invariant under basis relabeling:

* Tsallis relative-entropy coherence of order alpha in (0,1) or (1,2]:
  ``(sum_j <j|rho^alpha|j>^(1/alpha) - 1) / (alpha - 1)``.
* l_{1,p} matrix-norm coherence for p in [1,2]: the l_1 norm over columns of
  the column-wise l_p norms of rho with its diagonal removed.
* Relative entropy of coherence ``S(diag(rho)) - S(rho)`` in bits.
* Skew-information coherence ``1 - sum_j <j|sqrt(rho)|j>^2``.
* l_1 coherence, the sum of off-diagonal magnitudes.

Dense-path functions take a density matrix; ``pure_state_coherence``
evaluates the same quantities directly from pure-state amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import StateVector, dephase, is_rank_one, matrix_power, require_alpha
from .tolerances import TOL

__all__ = [
    "CoherenceMeasure",
    "CoherenceValue",
    "tsallis",
    "l1p",
    "REL_ENTROPY",
    "SKEW_INFO",
    "L1",
    "DEFAULT_PANEL",
    "METHOD_DENSE",
    "METHOD_PURE",
    "METHOD_CLOSED",
    "lqp_norm",
    "tsallis_coherence",
    "l1p_coherence",
    "relative_entropy_coherence",
    "skew_information_coherence",
    "l1_coherence",
    "dense_coherence",
    "pure_state_coherence",
]

METHOD_DENSE = "dense"
METHOD_PURE = "pure_fast"
METHOD_CLOSED = "closed_form"

_KINDS = ("tsallis", "l1p", "rel_entropy", "skew_info", "l1")


def _require_p(p: float) -> None:
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"p must lie in [1, 2], got {p}")


@dataclass(frozen=True)
class CoherenceMeasure:
    """Tagged choice of quantifier; parameter ranges enforced at construction."""

    kind: str
    param: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "tsallis":
            if self.param is None:
                raise ValueError("tsallis needs an order alpha")
            require_alpha(float(self.param))
        elif self.kind == "l1p":
            if self.param is None:
                raise ValueError("l1p needs an exponent p")
            _require_p(float(self.param))
        elif self.param is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    def label(self) -> str:
        if self.kind == "tsallis":
            return f"tsallis(alpha={self.param:g})"
        if self.kind == "l1p":
            return f"l1p(p={self.param:g})"
        return self.kind

    def params_dict(self) -> dict[str, float]:
        if self.kind == "tsallis":
            return {"alpha": float(self.param)}
        if self.kind == "l1p":
            return {"p": float(self.param)}
        return {}


def tsallis(alpha: float) -> CoherenceMeasure:
    return CoherenceMeasure("tsallis", float(alpha))


def l1p(p: float) -> CoherenceMeasure:
    return CoherenceMeasure("l1p", float(p))


REL_ENTROPY = CoherenceMeasure("rel_entropy")
SKEW_INFO = CoherenceMeasure("skew_info")
L1 = CoherenceMeasure("l1")

DEFAULT_PANEL: tuple[CoherenceMeasure, ...] = (
    tsallis(0.5),
    tsallis(2.0),
    l1p(1.0),
    l1p(2.0),
    REL_ENTROPY,
    SKEW_INFO,
)


@dataclass(frozen=True)
class CoherenceValue:
    """A computed coherence together with the route that produced it."""

    measure: CoherenceMeasure
    method: str
    value: float

    def __post_init__(self) -> None:
        if self.method not in (METHOD_DENSE, METHOD_PURE, METHOD_CLOSED):
            raise ValueError(f"unknown method {self.method!r}")


def _clamp(value: float) -> float:
    # roundoff may dip slightly negative; anything beyond the clamp is a bug
    if value < -TOL.coherence_clamp:
        raise ArithmeticError(f"coherence evaluated to {value:.3e}, beyond roundoff")
    return 0.0 if value <= 0.0 else float(value)


def lqp_norm(matrix: np.ndarray, q: float, p: float) -> float:
    """l_q norm over columns of column-wise l_p norms: general utility, q, p >= 1."""
    if q < 1.0 or p < 1.0:
        raise ValueError(f"q and p must be at least 1, got q={q}, p={p}")
    mags = np.abs(np.asarray(matrix))
    column_norms = (mags**p).sum(axis=0) ** (1.0 / p)
    return float((column_norms**q).sum() ** (1.0 / q))


def tsallis_coherence(rho: np.ndarray, alpha: float) -> float:
    """Tsallis relative-entropy coherence of order alpha.

    Orders within TOL.tsallis_limit_window of 1 delegate to the alpha -> 1
    limit, ln(2) times the relative entropy of coherence.
    """
    if abs(alpha - 1.0) <= TOL.tsallis_limit_window:
        return math.log(2.0) * relative_entropy_coherence(rho)
    require_alpha(alpha)
    powered = matrix_power(rho, alpha)
    diag = np.diag(powered).real
    safe = np.where(diag > TOL.diag_power_floor, diag, 1.0)
    roots = np.where(diag > TOL.diag_power_floor, np.exp(np.log(safe) / alpha), 0.0)
    return _clamp((roots.sum() - 1.0) / (alpha - 1.0))


def l1p_coherence(rho: np.ndarray, p: float) -> float:
    """l_{1,p} coherence: lqp_norm of rho with its diagonal removed, q = 1."""
    _require_p(p)
    rho = np.asarray(rho)
    return _clamp(lqp_norm(rho - dephase(rho), 1.0, p))


def relative_entropy_coherence(rho: np.ndarray) -> float:
    """S(diag(rho)) - S(rho) in bits; spectrum at or below the floor contributes 0."""
    rho = np.asarray(rho)
    spectrum = np.linalg.eigvalsh(rho)
    return _clamp(_shannon_bits(np.diag(rho).real) - _shannon_bits(spectrum))


def skew_information_coherence(rho: np.ndarray) -> float:
    """1 - sum_j <j|sqrt(rho)|j>^2; sqrt(rho) = rho on rank-one input."""
    root = matrix_power(rho, 0.5)
    diag = np.diag(root).real
    return _clamp(1.0 - float((diag**2).sum()))


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of off-diagonal magnitudes."""
    mags = np.abs(np.asarray(rho))
    return _clamp(float(mags.sum() - np.trace(mags)))


def dense_coherence(rho: np.ndarray, measure: CoherenceMeasure) -> float:
    """Dispatch a measure over the density-matrix path."""
    if measure.kind == "tsallis":
        return tsallis_coherence(rho, measure.param)
    if measure.kind == "l1p":
        return l1p_coherence(rho, measure.param)
    if measure.kind == "rel_entropy":
        return relative_entropy_coherence(rho)
    if measure.kind == "skew_info":
        return skew_information_coherence(rho)
    return l1_coherence(rho)


def pure_state_coherence(psi: StateVector | np.ndarray, measure: CoherenceMeasure) -> float:
    """Evaluate a measure from pure-state amplitudes without forming the matrix.

    Agrees with the dense path on |psi><psi| within TOL.cross_method.
    """
    amps = psi.amps if isinstance(psi, StateVector) else np.asarray(psi, dtype=np.complex128)
    mags = np.abs(amps.reshape(-1))
    probs = mags**2
    kind = measure.kind
    if kind == "tsallis":
        alpha = measure.param
        if abs(alpha - 1.0) <= TOL.tsallis_limit_window:
            return math.log(2.0) * _shannon_bits(probs)
        require_alpha(alpha)
        safe = np.where(probs > TOL.diag_power_floor, probs, 1.0)
        roots = np.where(probs > TOL.diag_power_floor, np.exp(np.log(safe) / alpha), 0.0)
        return _clamp((roots.sum() - 1.0) / (alpha - 1.0))
    if kind == "l1p":
        p = measure.param
        _require_p(p)
        powered = mags**p
        complements = np.clip(powered.sum() - powered, 0.0, None)
        return _clamp(float((mags * complements ** (1.0 / p)).sum()))
    if kind == "rel_entropy":
        return _clamp(_shannon_bits(probs))
    if kind == "skew_info":
        return _clamp(1.0 - float((probs**2).sum()))
    total = mags.sum()
    return _clamp(float(total * total - probs.sum()))


def _shannon_bits(weights: np.ndarray) -> float:
    """Shannon entropy in bits; weights at or below the eigenvalue floor contribute 0."""
    weights = np.asarray(weights, dtype=float)
    positive = weights[weights > TOL.eigenvalue_floor]
    return float(-(positive * np.log2(positive)).sum())
