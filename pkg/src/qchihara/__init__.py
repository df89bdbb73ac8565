"""qchihara: exact and numeric verification of q-Hermite and
Al-Salam-Chihara polynomial identities.

Layers:

* :mod:`qchihara.qcore` - exact sparse polynomial ring and q-primitives;
* :mod:`qchihara.families` - the three recurrence families and basis
  conversions;
* :mod:`qchihara.genfun` - generating functions (convolution identities,
  numeric product checks);
* :mod:`qchihara.identities` - connection formula, B/H duality, moment
  functional orthogonality;
* :mod:`qchihara.measures` - densities, Poisson-Mehler kernel,
  quadrature validation (|q| < 1);
* :mod:`qchihara.discrete` - the q > 1 finite measures;
* :mod:`qchihara.hankel` - determinant-ratio identities;
* :mod:`qchihara.cli` - the ``qchihara`` command.
"""

from .qcore import (
    MultiPoly,
    ExactDivisionError,
    VARIABLES,
    as_finite_complex,
    q_binomial,
    q_factorial,
    q_int,
    q_int_difference,
)
from .families import (
    HermiteExpansion,
    PolyFamily,
    asc_poly,
    b_poly,
    hermite_coefficients,
    hermite_poly,
    monomial_to_hermite,
)
from .identities import MomentFunctional, apply_functional
from .reporting import Check, Report

__version__ = "0.1.0"

__all__ = [
    "MultiPoly",
    "ExactDivisionError",
    "VARIABLES",
    "as_finite_complex",
    "q_int",
    "q_factorial",
    "q_binomial",
    "q_int_difference",
    "PolyFamily",
    "HermiteExpansion",
    "hermite_poly",
    "b_poly",
    "asc_poly",
    "monomial_to_hermite",
    "hermite_coefficients",
    "MomentFunctional",
    "apply_functional",
    "Check",
    "Report",
    "__version__",
]
