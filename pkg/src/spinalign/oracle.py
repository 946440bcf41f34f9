"""Black-box similarity oracles with strict information hiding.

An oracle is constructed from a target chain spec, solves the target ground
state once, and afterwards answers only similarity queries: the exact value,
a bounded uniformly-noisy value, or a single-shot projective-measurement
estimate. The hidden state and field values are never exposed; the public
surface is the behavior kind, the remaining budget, a fingerprint of the
construction parameters, and the query operations.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, ground_state
from .errors import QueryBudgetError, ValidationError
from .hilbert import StateVector, partial_trace
from .similarity import cos_theta


class OracleKind(enum.Enum):
    EXACT = "exact"
    NOISY = "noisy"
    MEASURED = "measured"


@dataclass(frozen=True)
class MeasurementRecord:
    """Per-site projective outcomes m_k and the estimate F = 2 Σ m_k - N."""

    bits: tuple[int, ...]
    f_estimate: float

    def __post_init__(self):
        if self.f_estimate != 2 * sum(self.bits) - len(self.bits):
            raise ValidationError("f_estimate must equal 2·Σm_k - N exactly")


class Oracle:
    """Budgeted similarity black box; construct with :func:`make_oracle`."""

    def __init__(self, target: ChainSpec, kind: OracleKind, budget: int, seed: int,
                 epsilon: float):
        if budget < 0:
            raise ValidationError("budget must be non-negative")
        if epsilon < 0:
            raise ValidationError("epsilon must be non-negative")
        self._kind = kind
        self._epsilon = float(epsilon)
        self._budget = int(budget)
        self._rng = np.random.default_rng(seed)
        gs = ground_state(target)
        self._target_rhos = tuple(
            partial_trace(gs.state, 1 << k) for k in range(target.n_sites)
        )
        self._n_sites = target.n_sites
        # Per-site Bernoulli probabilities are cached per candidate object so
        # repeated shots against the same state stay cheap.
        self._cached_state: StateVector | None = None
        self._cached_probs: np.ndarray | None = None
        digest = hashlib.sha256(
            repr((target.n_sites, target.coupling, target.fields,
                  kind.value, budget, seed, float(epsilon))).encode()
        )
        self._fingerprint = digest.hexdigest()

    @property
    def kind(self) -> OracleKind:
        return self._kind

    @property
    def n_sites(self) -> int:
        return self._n_sites

    @property
    def remaining_budget(self) -> int:
        return self._budget

    @property
    def fingerprint(self) -> str:
        """Hash of the construction parameters; reveals nothing about the target."""
        return self._fingerprint

    def _charge(self) -> None:
        if self._budget < 1:
            raise QueryBudgetError("oracle query budget exhausted")
        self._budget -= 1

    def _validate_candidate(self, candidate: StateVector) -> None:
        if candidate.n_sites != self._n_sites:
            raise ValidationError(
                f"candidate has {candidate.n_sites} sites, oracle target has {self._n_sites}"
            )

    def _cos_thetas(self, candidate: StateVector) -> np.ndarray:
        self._validate_candidate(candidate)
        return np.array([
            cos_theta(rho_t, partial_trace(candidate, 1 << k))
            for k, rho_t in enumerate(self._target_rhos)
        ])

    def _exact_f(self, candidate: StateVector) -> float:
        return float(self._cos_thetas(candidate).sum())

    def query(self, candidate: StateVector) -> float:
        """Budgeted similarity reply according to the oracle's behavior kind."""
        if self._kind is OracleKind.EXACT:
            return query_exact(self, candidate)
        if self._kind is OracleKind.NOISY:
            return query_noisy(self, candidate)
        return query_measured(self, candidate)[0]

    def verification_query(self, candidate: StateVector) -> float:
        """Diagnostic exact similarity; unbudgeted, for reporting only."""
        return self._exact_f(candidate)


def query_exact(oracle: Oracle, candidate: StateVector) -> float:
    """Exact chain similarity between the hidden target and the candidate."""
    if oracle.kind is not OracleKind.EXACT:
        raise ValidationError(f"oracle kind is {oracle.kind.value}, not exact")
    oracle._validate_candidate(candidate)
    oracle._charge()
    return oracle._exact_f(candidate)


def query_noisy(oracle: Oracle, candidate: StateVector) -> float:
    """Similarity plus uniform noise on (-ε, ε) from the oracle's seeded stream."""
    if oracle.kind is not OracleKind.NOISY:
        raise ValidationError(f"oracle kind is {oracle.kind.value}, not noisy")
    oracle._validate_candidate(candidate)
    oracle._charge()
    f = oracle._exact_f(candidate)
    if oracle._epsilon == 0.0:
        return f
    return f + oracle._rng.uniform(-oracle._epsilon, oracle._epsilon)


def query_measured(oracle: Oracle, candidate: StateVector) -> tuple[float, MeasurementRecord]:
    """One projective shot per site: m_k ~ Bernoulli((cos θ_k + 1)/2), F = 2 Σ m_k - N.

    The per-site probabilities use the exact cos θ_k at any coupling; they
    coincide with physical single-copy measurement statistics in the weakly
    coupled limit where the chain state factorizes.
    """
    if oracle.kind is not OracleKind.MEASURED:
        raise ValidationError(f"oracle kind is {oracle.kind.value}, not measured")
    oracle._validate_candidate(candidate)
    oracle._charge()
    if oracle._cached_state is candidate:
        probs = oracle._cached_probs
    else:
        probs = (oracle._cos_thetas(candidate) + 1.0) / 2.0
        oracle._cached_state = candidate
        oracle._cached_probs = probs
    bits = oracle._rng.random(oracle.n_sites) < probs
    m = int(bits.sum())
    f_est = float(2 * m - oracle.n_sites)
    return f_est, MeasurementRecord(tuple(int(b) for b in bits), f_est)


def make_oracle(
    target: ChainSpec,
    kind: OracleKind = OracleKind.EXACT,
    budget: int = 1,
    seed: int = 0,
    epsilon: float = 0.0,
) -> Oracle:
    """Program a target into a fresh black box; the state is solved once here."""
    return Oracle(target, kind, budget, seed, epsilon)
