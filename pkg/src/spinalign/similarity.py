"""Bloch vectors, inter-chain angles and subsystem-wise similarity measures.

The chain similarity F compares two equal-length chains site by site: it is
the sum over sites of the cosine of the angle between the corresponding
single-site Bloch vectors, so F ranges over [-N, N] and reaches N exactly
when every pair of vectors is aligned. A general subset similarity sums a
per-subset comparison function over an arbitrary family of subsystem masks;
two comparison kinds are provided (single-site cosine and subset purity
matching).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UndefinedDirectionError, ValidationError
from .hilbert import PAULI, DensityMatrix, StateVector, partial_trace

# Sites whose Bloch vector is shorter than this have no usable direction;
# the cosine metric is meaningless for (nearly) maximally mixed sites.
DIRECTION_FLOOR = 1e-6


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector v with |v| <= 1 representing rho = (I + v·sigma)/2."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm > 1.0 + 1e-10:
            raise ValidationError(f"Bloch vector norm {self.norm!r} exceeds 1")

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


Z_AXIS = BlochVector(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class AngleProfile:
    """Signed per-site angles from candidate to target Bloch vectors.

    Angles are measured in the plane orthogonal to +z, positive when the
    candidate vector must rotate counterclockwise (about +z) to meet the
    target. The sums drive the rotation optimizer: sum_cos equals the chain
    similarity whenever all vectors lie in the xy plane.
    """

    thetas: tuple[float, ...]

    def __post_init__(self):
        if not self.thetas:
            raise ValidationError("angle profile needs at least one site")

    @property
    def n_sites(self) -> int:
        return len(self.thetas)

    @property
    def sum_sin(self) -> float:
        return float(np.sum(np.sin(self.thetas)))

    @property
    def sum_cos(self) -> float:
        return float(np.sum(np.cos(self.thetas)))


class SubsetFunctionKind(enum.Enum):
    """Per-subset comparison functions available to the general similarity."""

    COSINE_SINGLE_SITE = "cosine-single-site"
    PURITY = "purity"


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    """Bloch vector (tr ρX, tr ρY, tr ρZ) of a single-qubit density matrix."""
    if rho.dim != 2:
        raise ValidationError(f"expected a 2x2 density matrix, got dim {rho.dim}")
    m = rho.entries
    return BlochVector(
        float(np.trace(m @ PAULI["X"]).real),
        float(np.trace(m @ PAULI["Y"]).real),
        float(np.trace(m @ PAULI["Z"]).real),
    )


def cos_theta(rho_t: DensityMatrix, rho_c: DensityMatrix) -> float:
    """Cosine of the angle between the Bloch vectors of two single-qubit states.

    Computed purely from traces:
        (2 tr(ρ_t ρ_c) - 1) / sqrt(2 tr ρ_c² - 1) / sqrt(2 tr ρ_t² - 1),
    which coincides with r·c/(r c) for the two Bloch vectors.
    """
    if rho_t.dim != 2 or rho_c.dim != 2:
        raise ValidationError("cos_theta is defined for single-qubit density matrices")
    nt2 = 2.0 * rho_t.purity - 1.0
    nc2 = 2.0 * rho_c.purity - 1.0
    if nt2 < DIRECTION_FLOOR**2 or nc2 < DIRECTION_FLOOR**2:
        raise UndefinedDirectionError(
            "Bloch norm below direction floor; angle undefined for a maximally mixed site"
        )
    overlap = 2.0 * float(np.trace(rho_t.entries @ rho_c.entries).real) - 1.0
    return overlap / math.sqrt(nt2) / math.sqrt(nc2)


def signed_theta(c: BlochVector, r: BlochVector, axis: BlochVector) -> float:
    """Signed angle from c to r about ``axis``, in (-pi, pi].

    Positive means c must rotate counterclockwise about the axis to meet r.
    Both vectors must have a non-negligible component orthogonal to the axis.
    """
    if abs(axis.norm - 1.0) > 1e-12:
        raise ValidationError("rotation axis must be a unit vector")
    cv, rv, av = c.as_array(), r.as_array(), axis.as_array()
    c_par = float(cv @ av)
    r_par = float(rv @ av)
    c_perp2 = float(cv @ cv) - c_par**2
    r_perp2 = float(rv @ rv) - r_par**2
    if c_perp2 < DIRECTION_FLOOR**2 or r_perp2 < DIRECTION_FLOOR**2:
        raise UndefinedDirectionError("vector has no component orthogonal to the axis")
    theta = math.atan2(float(av @ np.cross(cv, rv)), float(cv @ rv) - c_par * r_par)
    return math.pi if theta <= -math.pi else theta


def similarity_chain(state_t: StateVector, state_c: StateVector) -> tuple[float, AngleProfile]:
    """Chain similarity F = Σ_k cos θ_k plus the signed angle profile about +z."""
    if state_t.n_sites != state_c.n_sites:
        raise ValidationError(
            f"chains differ in length: {state_t.n_sites} vs {state_c.n_sites}"
        )
    f = 0.0
    thetas = []
    for k in range(1, state_t.n_sites + 1):
        mask = 1 << (k - 1)
        rho_t = partial_trace(state_t, mask)
        rho_c = partial_trace(state_c, mask)
        f += cos_theta(rho_t, rho_c)
        thetas.append(signed_theta(bloch_vector(rho_c), bloch_vector(rho_t), Z_AXIS))
    return f, AngleProfile(tuple(thetas))


def enumerate_bipartition_subsets(n: int) -> list[int]:
    """All non-empty proper subset masks of n sites, ascending; count is 2^n - 2."""
    if n < 2:
        raise ValidationError("bipartitions need at least 2 sites")
    return list(range(1, 2**n - 1))


def purity_term(rho_t: DensityMatrix, rho_c: DensityMatrix) -> float:
    """Purity-matching score 1 - (tr ρ_t² - tr ρ_c²)², equal to 1 iff purities agree."""
    if rho_t.dim != rho_c.dim:
        raise ValidationError(f"dimension mismatch: {rho_t.dim} vs {rho_c.dim}")
    return 1.0 - (rho_t.purity - rho_c.purity) ** 2


def similarity_general(
    state_t: StateVector,
    state_c: StateVector,
    subsets: Sequence[int],
    kind: SubsetFunctionKind,
) -> float:
    """Sum of the chosen per-subset function over reduced density matrix pairs."""
    if state_t.n_sites != state_c.n_sites:
        raise ValidationError("chains differ in length")
    total = 0.0
    for mask in subsets:
        if kind is SubsetFunctionKind.COSINE_SINGLE_SITE and mask.bit_count() != 1:
            raise ValidationError(
                f"cosine similarity applies to singleton subsets only, got mask {mask:#x}"
            )
        rho_t = partial_trace(state_t, mask)
        rho_c = partial_trace(state_c, mask)
        if kind is SubsetFunctionKind.COSINE_SINGLE_SITE:
            total += cos_theta(rho_t, rho_c)
        elif kind is SubsetFunctionKind.PURITY:
            total += purity_term(rho_t, rho_c)
        else:
            raise ValidationError(f"unknown subset function kind {kind!r}")
    return total
