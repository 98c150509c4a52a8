"""anisub: bivariate subordinators, their right-continuous inverses, and
Markov processes time-changed componentwise by those inverses.

The package couples exact-in-distribution samplers with the closed-form
Laplace-domain expressions they must reproduce, plus a verification engine
that checks every identity by Monte Carlo and reports machine-readable
verdicts.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .models import (CommonFactor, IndependentStable, SpectralMeasure,
                     SpectralStable, StableTerm, marginal_standard_atom,
                     single_atom_model)

__all__ = ["__version__", "BACKEND", "SpectralMeasure", "SpectralStable",
           "IndependentStable", "CommonFactor", "StableTerm",
           "single_atom_model", "marginal_standard_atom"]
