"""Model descriptors for bivariate subordinators.

Three families are supported, all reducible to a common *factor* form

    (H1(x), H2(x)) = sum_j (a1_j, a2_j) * Z_j(x),

where the Z_j are independent one-sided stable subordinators with Laplace
transform ``E exp(-eta Z_j(x)) = exp(-x * rate_j * eta**alpha_j)``.  The factor
list is the single source of truth shared by the closed-form evaluators and
the samplers, so simulated laws and analytic formulas can never drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "Factor",
    "SpectralMeasure",
    "SpectralStable",
    "IndependentStable",
    "StableTerm",
    "CommonFactor",
    "BivariateModel",
    "factor_arrays",
    "check_alpha",
    "single_atom_model",
    "marginal_standard_atom",
    "HALF_PI",
]

HALF_PI = np.pi / 2


def check_alpha(alpha: float, name: str = "alpha") -> float:
    """Stability indexes are restricted to the infinite-activity, driftless
    range (0, 1)."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {alpha}")
    return alpha


@dataclass(frozen=True)
class Factor:
    """One independent stable driver and its loading on the two components."""

    alpha: float
    rate: float
    a1: float
    a2: float


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite angular measure on [0, pi/2].

    ``atoms`` is a sequence of ``(angle, weight)`` pairs.  A continuous part
    may be supplied in tabulated form: density values at quadrature nodes
    together with the matching quadrature weights; it is folded into weighted
    atoms for both evaluation and simulation.
    """

    atoms: Tuple[Tuple[float, float], ...] = ()
    density_nodes: Optional[Tuple[float, ...]] = None
    density_weights: Optional[Tuple[float, ...]] = None
    density_values: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((float(a), float(w)) for a, w in self.atoms))
        for name in ("density_nodes", "density_weights", "density_values"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(float(x) for x in v))
        tab = [self.density_nodes, self.density_weights, self.density_values]
        if any(v is not None for v in tab):
            if any(v is None for v in tab) or len({len(v) for v in tab}) != 1:
                raise DomainError("tabulated density needs nodes, weights and "
                                  "values of equal length")
        for a, w in self.atoms:
            if not 0.0 <= a <= HALF_PI:
                raise DomainError(f"atom angle {a} outside [0, pi/2]")
            if w < 0.0:
                raise DomainError(f"atom weight {w} is negative")
        if self.density_nodes is not None:
            for x in self.density_nodes:
                if not 0.0 <= x <= HALF_PI:
                    raise DomainError(f"density node {x} outside [0, pi/2]")
            if any(w < 0 for w in self.density_weights):
                raise DomainError("quadrature weights must be nonnegative")
            if any(v < 0 for v in self.density_values):
                raise DomainError("density values must be nonnegative")
        if not self.total_mass > 0.0:
            raise DomainError("spectral measure must have positive total mass")

    @classmethod
    def from_density(cls, fn, n_nodes: int = 64) -> "SpectralMeasure":
        """Tabulate a density callable with Gauss-Legendre nodes on [0, pi/2]."""
        x, w = np.polynomial.legendre.leggauss(int(n_nodes))
        nodes = HALF_PI * (x + 1.0) / 2.0
        weights = HALF_PI * w / 2.0
        values = np.asarray([fn(t) for t in nodes], dtype=float)
        return cls(density_nodes=tuple(nodes), density_weights=tuple(weights),
                   density_values=tuple(values))

    @property
    def total_mass(self) -> float:
        mass = sum(w for _, w in self.atoms)
        if self.density_nodes is not None:
            mass += float(np.dot(self.density_weights, self.density_values))
        return mass

    def discretized(self) -> Tuple[np.ndarray, np.ndarray]:
        """All mass as weighted atoms: ``(angles, weights)`` arrays."""
        angles = [a for a, _ in self.atoms]
        weights = [w for _, w in self.atoms]
        if self.density_nodes is not None:
            angles.extend(self.density_nodes)
            weights.extend(w * v for w, v in zip(self.density_weights, self.density_values))
        return np.asarray(angles, dtype=float), np.asarray(weights, dtype=float)

    def normalized(self) -> "SpectralMeasure":
        """Rescale to total mass one (an angular probability law)."""
        angles, weights = self.discretized()
        return SpectralMeasure(atoms=tuple(zip(angles, weights / weights.sum())))


def _standard_intensity(alpha: float) -> float:
    # makes a unit atom at angle 0 produce the unit-scale exponent eta**alpha
    return 1.0 / special.gamma(1.0 - alpha)


@dataclass(frozen=True)
class SpectralStable:
    """Bivariate stable subordinator given by a polar jump measure:
    radial power law of index ``alpha`` times the angular measure ``m``,
    with overall intensity ``c`` (default: the standard normalization
    ``1/Gamma(1-alpha)``, under which a unit atom at angle theta contributes
    ``(eta1*cos(theta) + eta2*sin(theta))**alpha`` to the exponent)."""

    alpha: float
    m: SpectralMeasure
    c: Optional[float] = None

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.c is not None and not self.c > 0:
            raise DomainError(f"intensity c must be positive, got {self.c}")

    @property
    def intensity(self) -> float:
        return _standard_intensity(self.alpha) if self.c is None else float(self.c)

    def factors(self) -> Tuple[Factor, ...]:
        angles, weights = self.m.discretized()
        rate = self.intensity * special.gamma(1.0 - self.alpha)
        out = []
        for a, w in zip(angles, weights):
            if w <= 0.0:
                continue
            # endpoint atoms are exactly axis-aligned (cos(pi/2) is 6e-17 in
            # floating point and would leak a spurious cross-loading), and
            # the sine loading is evaluated as cos(pi/2 - a) so symmetric
            # angles get exactly mirrored coefficients
            ca = 0.0 if a == HALF_PI else float(np.cos(a))
            sa = 0.0 if a == 0.0 else float(np.cos(HALF_PI - a))
            out.append(Factor(self.alpha, rate * w, ca, sa))
        return tuple(out)

    @property
    def label(self) -> str:
        return f"spectral-stable(alpha={self.alpha})"


@dataclass(frozen=True)
class IndependentStable:
    """Independent stable marginals with exponents ``scale_k * eta**alpha``."""

    alpha: float
    scale1: float = 1.0
    scale2: float = 1.0

    def __post_init__(self):
        check_alpha(self.alpha)
        if not (self.scale1 > 0 and self.scale2 > 0):
            raise DomainError("marginal scales must be positive")

    def factors(self) -> Tuple[Factor, ...]:
        return (Factor(self.alpha, self.scale1, 1.0, 0.0),
                Factor(self.alpha, self.scale2, 0.0, 1.0))

    @property
    def label(self) -> str:
        return f"independent-stable(alpha={self.alpha})"


@dataclass(frozen=True)
class StableTerm:
    """Univariate stable subordinator descriptor: exponent ``scale * eta**alpha``."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        check_alpha(self.alpha)
        if not self.scale > 0:
            raise DomainError("scale must be positive")


@dataclass(frozen=True)
class CommonFactor:
    """Each component is an idiosyncratic subordinator plus a scaled shared
    one: ``H1 = Y1 + c1*Z`` and ``H2 = Y2 + c2*Z``."""

    term1: StableTerm
    term2: StableTerm
    shared: StableTerm
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise DomainError("common-factor loadings must be nonnegative")

    def factors(self) -> Tuple[Factor, ...]:
        out = [Factor(self.term1.alpha, self.term1.scale, 1.0, 0.0),
               Factor(self.term2.alpha, self.term2.scale, 0.0, 1.0)]
        if self.c1 > 0 or self.c2 > 0:
            out.append(Factor(self.shared.alpha, self.shared.scale, self.c1, self.c2))
        return tuple(out)

    @property
    def label(self) -> str:
        return "common-factor"


BivariateModel = Union[SpectralStable, IndependentStable, CommonFactor]


def factor_arrays(model: BivariateModel):
    """Factor list as flat arrays ``(alphas, rates, a1, a2)`` for the kernels."""
    fs = model.factors()
    return (np.asarray([f.alpha for f in fs]),
            np.asarray([f.rate for f in fs]),
            np.asarray([f.a1 for f in fs]),
            np.asarray([f.a2 for f in fs]))


def single_atom_model(alpha: float, angle: float = np.pi / 4, weight: float = 1.0,
                      c: Optional[float] = None) -> SpectralStable:
    """Stable model whose angular measure is one atom (default: the bisector)."""
    return SpectralStable(alpha, SpectralMeasure(atoms=((angle, weight),)), c=c)


def marginal_standard_atom(alpha: float) -> SpectralStable:
    """Bisector-atom model weighted so both marginal exponents are exactly
    ``eta**alpha`` (weight ``2**(alpha/2)`` under the standard intensity)."""
    return single_atom_model(alpha, np.pi / 4, 2.0 ** (alpha / 2.0))
