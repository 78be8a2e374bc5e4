"""Central record of the numerical tolerances used across the package.

Every threshold a check relies on lives in one frozen record, so a single
override can retune an entire run (for instance from a CLI config file)
without touching call sites.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    symmetry: float = 1e-12               # operator symmetry defect
    orthonormality: float = 1e-8          # pairwise basis inner products
    b0_normalization: float = 1e-10       # |<b0,b0> - 1|
    spectrum_collision: float = 1e-9      # min distance of a shift from the spectrum
    pairing_normalization: float = 1e-10  # |<w,beta> - 1|
    quadrature_consistency: float = 1e-10 # mu0 cross-check against its quadrature form
    contour_imag: float = 1e-8            # imaginary residue of the contour projection
    bound_slack: float = 1e-9             # absolute slack in the convergence bound audit
    growth_law_rel: float = 1e-8
    value_equality_rel: float = 1e-6
    tail_rel: float = 1e-8
    dominance_rel: float = 1e-6
    hjb_residual_rel: float = 1e-9
    transversality_tail_rel: float = 1e-6
    perron_realness: float = 1e-9
    perron_simplicity: float = 1e-9
    perron_positivity: float = 1e-12
    metzler_slack: float = 1e-12
    underflow_floor: float = 1e-300

    def replace(self, **overrides: float) -> "Tolerances":
        """Return a copy with the given fields overridden."""
        return dataclasses.replace(self, **overrides)


DEFAULT_TOLERANCES = Tolerances()
