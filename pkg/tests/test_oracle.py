import numpy as np
import pytest

from spinalign import (
    ChainSpec,
    MeasurementRecord,
    OracleKind,
    QueryBudgetError,
    ValidationError,
    ground_state,
    make_oracle,
    product_state,
    query_exact,
    query_measured,
    query_noisy,
)

TARGET = ChainSpec(4, 1.0, (0.5,) * 4)
CANDIDATE_SPEC = ChainSpec(4, 1.0, (-0.5,) * 4)


@pytest.fixture(scope="module")
def candidate_j1():
    return ground_state(CANDIDATE_SPEC).state


class TestExactOracle:
    def test_perfect_candidate(self, candidate_j1):
        oracle = make_oracle(CANDIDATE_SPEC, OracleKind.EXACT, budget=1)
        assert query_exact(oracle, candidate_j1) == pytest.approx(4.0, abs=1e-9)

    def test_product_chains(self):
        oracle = make_oracle(ChainSpec(4, 0.0, (0.5,) * 4), OracleKind.EXACT, budget=1)
        cand = ground_state(ChainSpec(4, 0.0, (-0.5,) * 4)).state
        assert query_exact(oracle, cand) == pytest.approx(2.4, abs=1e-9)

    def test_budget_enforced(self, candidate_j1):
        oracle = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        query_exact(oracle, candidate_j1)
        with pytest.raises(QueryBudgetError):
            query_exact(oracle, candidate_j1)
        assert oracle.remaining_budget == 0

    def test_kind_checked(self, candidate_j1):
        oracle = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        with pytest.raises(ValidationError):
            query_noisy(oracle, candidate_j1)


class TestNoisyOracle:
    def test_zero_width_equals_exact(self, candidate_j1):
        noisy = make_oracle(TARGET, OracleKind.NOISY, budget=1, seed=1, epsilon=0.0)
        exact = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        assert query_noisy(noisy, candidate_j1) == query_exact(exact, candidate_j1)

    def test_seeded_reproducibility(self, candidate_j1):
        a = make_oracle(TARGET, OracleKind.NOISY, budget=5, seed=99, epsilon=0.1)
        b = make_oracle(TARGET, OracleKind.NOISY, budget=5, seed=99, epsilon=0.1)
        seq_a = [query_noisy(a, candidate_j1) for _ in range(5)]
        seq_b = [query_noisy(b, candidate_j1) for _ in range(5)]
        assert seq_a == seq_b

    def test_noise_bounded(self, candidate_j1):
        eps = 0.05
        oracle = make_oracle(TARGET, OracleKind.NOISY, budget=500, seed=7, epsilon=eps)
        exact = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        f_true = query_exact(exact, candidate_j1)
        for _ in range(500):
            assert abs(query_noisy(oracle, candidate_j1) - f_true) < eps


class TestMeasuredOracle:
    def test_aligned_target_is_deterministic(self, candidate_j1):
        oracle = make_oracle(CANDIDATE_SPEC, OracleKind.MEASURED, budget=200, seed=2)
        for _ in range(200):
            f_est, record = query_measured(oracle, candidate_j1)
            assert f_est == 4.0
            assert record.bits == (1, 1, 1, 1)

    def test_antipodal_candidate_is_deterministic(self):
        # target Bloch vectors point along -x; the |+...+> product state points
        # along +x, so every site has theta = pi and every shot must miss
        oracle = make_oracle(ChainSpec(4, 0.0, (0.0,) * 4), OracleKind.MEASURED,
                             budget=200, seed=3)
        plus = np.array([1, 1]) / np.sqrt(2)
        anti = product_state([plus] * 4)
        for _ in range(200):
            f_est, record = query_measured(oracle, anti)
            assert f_est == -4.0
            assert record.bits == (0, 0, 0, 0)

    def test_estimate_matches_bit_count(self, candidate_j1):
        oracle = make_oracle(TARGET, OracleKind.MEASURED, budget=50, seed=4)
        for _ in range(50):
            f_est, record = query_measured(oracle, candidate_j1)
            assert f_est == 2 * sum(record.bits) - 4

    def test_variance_matches_binomial_formula(self, candidate_j1):
        from spinalign import similarity_chain

        target_state = ground_state(TARGET).state
        _, profile = similarity_chain(target_state, candidate_j1)
        probs = (np.cos(profile.thetas) + 1) / 2
        expected_std = 2 * np.sqrt(np.sum(probs * (1 - probs)))
        trials = 10_000
        oracle = make_oracle(TARGET, OracleKind.MEASURED, budget=trials, seed=5)
        estimates = np.array([query_measured(oracle, candidate_j1)[0] for _ in range(trials)])
        assert abs(estimates.std(ddof=1) - expected_std) <= 0.05 * expected_std
        assert estimates.std(ddof=1) <= 2.0

    def test_unbiased_over_many_trials(self, candidate_j1):
        trials = 100_000
        oracle = make_oracle(TARGET, OracleKind.MEASURED, budget=trials, seed=6)
        exact = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        f_true = query_exact(exact, candidate_j1)
        estimates = np.array([query_measured(oracle, candidate_j1)[0] for _ in range(trials)])
        se = estimates.std(ddof=1) / np.sqrt(trials)
        assert abs(estimates.mean() - f_true) <= 3 * se


class TestOracleSurface:
    def test_budget_never_negative(self, candidate_j1):
        oracle = make_oracle(TARGET, OracleKind.EXACT, budget=2)
        oracle.query(candidate_j1)
        oracle.query(candidate_j1)
        with pytest.raises(QueryBudgetError):
            oracle.query(candidate_j1)
        assert oracle.remaining_budget == 0

    def test_verification_channel_is_unbudgeted(self, candidate_j1):
        oracle = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        before = oracle.remaining_budget
        oracle.verification_query(candidate_j1)
        assert oracle.remaining_budget == before

    def test_query_dispatches_by_kind(self, candidate_j1):
        exact = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        noisy = make_oracle(TARGET, OracleKind.NOISY, budget=1, seed=1, epsilon=0.0)
        assert exact.query(candidate_j1) == noisy.query(candidate_j1)
        measured = make_oracle(TARGET, OracleKind.MEASURED, budget=1, seed=1)
        assert measured.query(candidate_j1) in {-4.0, -2.0, 0.0, 2.0, 4.0}

    def test_public_surface_hides_the_target(self):
        oracle = make_oracle(TARGET, OracleKind.EXACT, budget=1, seed=0)
        public = {name for name in dir(oracle) if not name.startswith("_")}
        assert public == {
            "kind", "n_sites", "remaining_budget", "fingerprint",
            "query", "verification_query",
        }
        assert isinstance(oracle.fingerprint, str)
        # none of the public values resembles the hidden field assignment
        for name in ("kind", "n_sites", "remaining_budget", "fingerprint"):
            value = getattr(oracle, name)
            assert not isinstance(value, (np.ndarray, ChainSpec))

    def test_equal_seeds_give_identical_noisy_streams(self, candidate_j1):
        a = make_oracle(TARGET, OracleKind.NOISY, budget=3, seed=11, epsilon=0.2)
        b = make_oracle(TARGET, OracleKind.NOISY, budget=3, seed=11, epsilon=0.2)
        assert a.fingerprint == b.fingerprint
        assert [a.query(candidate_j1) for _ in range(3)] == [
            b.query(candidate_j1) for _ in range(3)
        ]

    def test_mismatched_candidate_rejected_without_charge(self):
        oracle = make_oracle(TARGET, OracleKind.EXACT, budget=1)
        small = ground_state(ChainSpec(2, 0.0, (0.0, 0.0))).state
        with pytest.raises(ValidationError):
            oracle.query(small)
        assert oracle.remaining_budget == 1


class TestMeasurementRecord:
    def test_estimate_identity_enforced(self):
        MeasurementRecord((1, 0, 1, 1), 2.0)
        with pytest.raises(ValidationError):
            MeasurementRecord((1, 0, 1, 1), 1.0)


def test_make_oracle_validates_inputs():
    with pytest.raises(ValidationError):
        make_oracle(TARGET, OracleKind.EXACT, budget=-1)
    with pytest.raises(ValidationError):
        make_oracle(TARGET, OracleKind.NOISY, budget=1, epsilon=-0.1)
