"""Numerical tolerances shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Every cutoff used by the simulator, measures, and verification paths."""

    norm: float = 1e-12                 # |norm(psi) - 1| at construction
    hermiticity: float = 1e-12          # max entry of |rho - rho^dagger|
    trace: float = 1e-12                # |tr(rho) - 1|
    psd: float = 1e-10                  # eigenvalues allowed down to -psd
    eigenvalue_floor: float = 1e-12     # lambda at or below this treated as 0
    diag_power_floor: float = 1e-15     # <j|rho^a|j> at or below this contributes 0
    rank_one: float = 1e-10             # purity within this of 1 triggers pure shortcuts
    coherence_clamp: float = 1e-10      # negative roundoff clamped to 0 down to -this
    cross_method: float = 1e-9          # dense vs pure vs closed-form agreement
    reconstruction: float = 1e-9        # V diag(w) V^dagger rebuild error
    tsallis_limit_window: float = 1e-9  # |alpha - 1| inside this delegates to the log form
    neutral_band: float = 1e-12         # |delta| inside this classifies as neutral
    amplitude_match: float = 1e-12      # entrywise state comparisons


TOL = Tolerances()
