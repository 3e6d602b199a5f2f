"""Ordered momentum-dependent-mass kinetic operator and its reduction.

Implements the two-parameter symmetrized kinetic operator
-1/2 [M^a D M^b D M^c + M^c D M^b D M^a] (units with 2*m0 = 1, so constant
mass gives -d^2/dp^2), the ambiguity-dependent effective potential, and the
reduced conservative form -D (1/M) D + V_eff, for numerical verification of
the operator identity relating them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SampledFunction, derivative, require_same_grid


@dataclass(frozen=True)
class AmbiguityParams:
    """Ordering parameters (a, b, c) with a + b + c = -1 enforced exactly."""

    a: float
    b: float

    @property
    def c(self) -> float:
        return -1.0 - self.a - self.b


@dataclass(frozen=True)
class MassFunction:
    """Dimensionless positive mass profile with precomputed derivatives."""

    M: SampledFunction
    dM: SampledFunction
    d2M: SampledFunction

    def __post_init__(self):
        require_same_grid(self.M, self.dM, self.d2M)
        if np.any(self.M.values <= 0):
            raise ValueError("mass function must be positive everywhere")

    @classmethod
    def from_profile(cls, M: SampledFunction) -> "MassFunction":
        return cls(M=M, dM=derivative(M, 1), d2M=derivative(M, 2))


def _power(M: SampledFunction, expo: float) -> SampledFunction:
    # M > 0 is guaranteed, so fractional powers via exp(expo*log M) are safe.
    return SampledFunction(M.grid, np.exp(expo * np.log(M.values)))


def vonroos_apply(
    mass: MassFunction, amb: AmbiguityParams, phi: SampledFunction
) -> SampledFunction:
    """Apply -1/2 [M^a D M^b D M^c + M^c D M^b D M^a] to phi."""
    require_same_grid(mass.M, phi)

    def ordered(e1: float, e2: float, e3: float) -> SampledFunction:
        inner = derivative(_power(mass.M, e3) * phi, 1)
        return _power(mass.M, e1) * derivative(_power(mass.M, e2) * inner, 1)

    t1 = ordered(amb.a, amb.b, amb.c)
    t2 = ordered(amb.c, amb.b, amb.a)
    return -0.5 * (t1 + t2)


def effective_potential_vonroos(
    mass: MassFunction, V: SampledFunction, amb: AmbiguityParams
) -> SampledFunction:
    """V + (b+1)/2 * M''/M^2 - [a(a+b+1)+b+1] * M'^2/M^3."""
    require_same_grid(mass.M, V)
    a, b = amb.a, amb.b
    m, dm, d2m = mass.M, mass.dM, mass.d2M
    return (
        V
        + 0.5 * (b + 1.0) * d2m / (m * m)
        - (a * (a + b + 1.0) + b + 1.0) * dm * dm / (m * m * m)
    )


def reduced_form_apply(
    mass: MassFunction,
    amb: AmbiguityParams,
    V: SampledFunction,
    phi: SampledFunction,
) -> SampledFunction:
    """Apply -D (1/M) D + V_eff to phi (conservative reduced form)."""
    require_same_grid(mass.M, V, phi)
    flux = derivative(phi, 1) / mass.M
    veff = effective_potential_vonroos(mass, V, amb)
    return -derivative(flux, 1) + veff * phi
