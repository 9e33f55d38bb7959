import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reset_oco.base import BaseLearner, Hedge, LifecycleError, factory
from reset_oco.domain import ContractError, Linear, Simplex
from reset_oco.reset import Reset, mixing_coefficients, psi
from reset_oco.segtree import all_vertices

mpmath.mp.dps = 60


def psi_oracle(rho, a, b, horizon):
    eta = mpmath.sqrt(2 * mpmath.log(2) / horizon)
    num = mpmath.mpf(rho) * mpmath.exp(-a * eta)
    return num / (num + (1 - mpmath.mpf(rho)) * mpmath.exp(-b * eta))


class Fixed(BaseLearner):
    """Base learner that always plays the same action."""

    def __init__(self, action, horizon):
        super().__init__(horizon)
        self.action = np.asarray(action, dtype=float)

    @property
    def gamma(self):
        return 0.0

    def _action(self):
        return self.action.copy()

    def _step(self, loss):
        pass


def fixed_by_level(actions):
    return lambda horizon: Fixed(actions[int(horizon).bit_length() - 1], horizon)


class TestPsi:
    @pytest.mark.parametrize("rho", [0.0, 0.1, 0.5, 0.93, 1.0])
    def test_equal_losses_fixed_point(self, rho):
        assert psi(rho, 0.37, 0.37, 9) == pytest.approx(rho, abs=1e-16)

    def test_degenerate_weight(self):
        assert psi(1.0, 0.9, 0.1, 4) == 1.0
        assert psi(0.0, 0.1, 0.9, 4) == 0.0

    def test_high_precision_value(self):
        expected = psi_oracle(0.5, 0, 1, 1)
        assert float(mpmath.sqrt(2 * mpmath.log(2))) == pytest.approx(1.17741, abs=1e-5)
        assert psi(0.5, 0.0, 1.0, 1) == pytest.approx(float(expected), abs=1e-15)
        assert float(expected) == pytest.approx(0.76448, abs=1e-5)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.integers(1, 4096))
    def test_matches_oracle(self, rho, a, b, horizon):
        out = psi(rho, a, b, horizon)
        assert 0.0 <= out <= 1.0
        assert out == pytest.approx(float(psi_oracle(rho, a, b, horizon)), abs=1e-14)
        if a < b and 0 < rho < 1:
            assert out >= rho

    def test_strictly_increases_when_first_is_better(self):
        assert psi(0.3, 0.1, 0.6, 8) > 0.3

    def test_rejects_bad_rho(self):
        with pytest.raises(ContractError):
            psi(1.5, 0.0, 0.0, 1)


class TestConstruction:
    def test_single_level(self):
        r = Reset(1, factory("hedge", Simplex(3)))
        assert r.tau == 0 and r.levels == 1
        assert [l.horizon for l in r.learners] == [1]

    def test_eight_trials(self):
        r = Reset(8, factory("hedge", Simplex(3)))
        assert [l.horizon for l in r.learners] == [1, 2, 4, 8]
        assert r.mu[1:] == [0.5, 0.5, 0.5]
        assert r.t == 1

    @pytest.mark.parametrize("T", [0, 6, 12, -4])
    def test_not_power_of_two(self, T):
        with pytest.raises(ContractError):
            Reset(T, factory("hedge", Simplex(2)))


class TestQuery:
    def test_single_level_is_base(self, rng):
        r = Reset(1, factory("hedge", Simplex(3)))
        np.testing.assert_array_equal(r.query(), Hedge(3, 1).query())

    def test_identical_base_actions(self):
        w = np.array([0.2, 0.3, 0.5])
        r = Reset(16, lambda h: Fixed(w, h))
        r.mu = [0.5, 0.9, 0.1, 0.33, 0.7]
        np.testing.assert_allclose(r.query(), w, atol=1e-15)

    def test_three_level_expansion(self):
        ws = [np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0])]
        r = Reset(4, fixed_by_level(ws))
        x = r.query()
        np.testing.assert_allclose(x, 0.5 * ws[2] + 0.25 * ws[1] + 0.25 * ws[0], atol=1e-15)
        np.testing.assert_allclose(r.mixing_coefficients(), [0.25, 0.25, 0.5], atol=1e-15)

    def test_double_query_rejected(self):
        r = Reset(4, factory("hedge", Simplex(2)))
        r.query()
        with pytest.raises(LifecycleError):
            r.query()

    def test_update_without_query_rejected(self):
        r = Reset(4, factory("hedge", Simplex(2)))
        with pytest.raises(LifecycleError):
            r.update(Linear([0.0, 1.0]))

    def test_horizon_exhausted(self):
        r = Reset(2, factory("hedge", Simplex(2)))
        for _ in range(2):
            r.query()
            r.update(Linear([0.0, 1.0]))
        with pytest.raises(LifecycleError):
            r.query()


class TestUpdate:
    def _advance(self, r, trials, g=(0.0, 1.0)):
        for _ in range(trials):
            r.query()
            r.update(Linear(list(g)))

    def test_trial_four_of_eight(self):
        r = Reset(8, factory("hedge", Simplex(2)), record=True)
        self._advance(r, 4)
        kinds = {lvl: kind for t, lvl, kind, _ in r.events if t == 4}
        assert kinds == {0: "reset", 1: "reset", 2: "reset", 3: "step"}
        assert r.mu[1] == r.mu[2] == 0.5
        assert r.learners[3].rounds == 4

    def test_trial_eight_resets_everything(self):
        r = Reset(8, factory("hedge", Simplex(2)), record=True)
        self._advance(r, 8)
        assert all(kind == "reset" for t, _, kind, _ in r.events if t == 8)
        assert all(l.rounds == 0 for l in r.learners)
        assert r.mu[1:] == [0.5] * 3

    def test_equal_losses_leave_mu(self):
        w = np.array([0.5, 0.5])
        r = Reset(8, lambda h: Fixed(w, h))
        r.mu = [0.5, 0.5, 0.8, 0.3]
        r.query()
        r.update(Linear([0.2, 0.9]))
        assert r.mu[2:] == [0.8, 0.3]
        assert r.mu[1] == 0.5

    def test_mu_moves_towards_better_level(self):
        ws = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
        r = Reset(2, fixed_by_level(ws))
        r.query()
        r.update(Linear([1.0, 0.0]))  # level 1's action is better
        assert r.mu[1] == pytest.approx(psi(0.5, 0.0, 1.0, 2))
        assert r.mu[1] > 0.5


def test_mixing_coefficients_examples(rng):
    np.testing.assert_allclose(mixing_coefficients([0.5, 0.5, 0.5]), [0.25, 0.25, 0.5])
    np.testing.assert_allclose(mixing_coefficients([0.5, 0.3, 0.6, 1.0]), [0, 0, 0, 1.0])
    for _ in range(100):
        mu = rng.random(rng.integers(1, 12))
        assert mixing_coefficients(mu).sum() == pytest.approx(1.0, abs=1e-12)


def test_coefficients_reconstruct_action(rng):
    n = 5
    r = Reset(64, factory("hedge", Simplex(n)))
    for t in range(64):
        x = r.query()
        c = r.mixing_coefficients()
        assert c.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(c @ np.vstack(r.base_actions), x, atol=1e-12)
        assert abs(x.sum() - 1.0) <= 1e-9 and x.min() >= 0
        r.update(Linear(rng.random(n)))


def test_psi_iteration_is_two_expert_hedge(rng):
    for _ in range(100):
        n = int(rng.integers(1, 40))
        horizon = int(rng.integers(1, 64))
        a, b = rng.random(n), rng.random(n)
        rho = 0.5
        eta = math.sqrt(2 * math.log(2) / horizon)
        for t in range(n):
            rho = psi(rho, a[t], b[t], horizon)
            gap = a[: t + 1].sum() - b[: t + 1].sum()
            assert rho == pytest.approx(1.0 / (1.0 + math.exp(eta * gap)), abs=1e-9)


def test_two_expert_bound_exhaustive_binary():
    n = 8
    bound = math.sqrt(2 * math.log(2) * n)
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    for seq in itertools.product(pairs, repeat=n):
        rho, mix = 0.5, 0.0
        for a, b in seq:
            mix += rho * a + (1 - rho) * b
            rho = psi(rho, a, b, n)
        A = sum(a for a, _ in seq)
        B = sum(b for _, b in seq)
        assert mix <= min(A, B) + bound + 1e-9


def test_reset_schedule_matches_segment_tree():
    T = 64
    r = Reset(T, factory("hedge", Simplex(3)), record=True)
    rng = np.random.default_rng(7)
    mu_at_start = {}  # (level, t) -> mu used on trial t
    fresh_at_start = {}
    for t in range(1, T + 1):
        for lvl in range(r.levels):
            mu_at_start[lvl, t] = r.mu[lvl]
            fresh_at_start[lvl, t] = r.learners[lvl].rounds == 0 and r.learners[lvl].horizon == 2**lvl
        r.query()
        r.update(Linear(rng.random(3)))
    kind = {(t, lvl): k for t, lvl, k, _ in r.events}
    for v in all_vertices(T):
        h = v.height
        if h >= 1:
            assert mu_at_start[h, v.left] == 0.5
        assert fresh_at_start[h, v.left]
        for t in range(v.left, v.right):
            assert kind[t, h] == "step"
        assert kind[v.right, h] == "reset"


def test_per_trial_call_counts():
    T = 32
    r = Reset(T, factory("hedge", Simplex(2)))
    for t in range(1, T + 1):
        r.query()
        r.update(Linear([0.3, 0.6]))
        c = r.counter
        assert c.queries == r.levels
        assert c.updates + c.initialises == r.levels
        assert c.initialises == (t & -t).bit_length()
        assert len(r.learners) == r.levels


def test_mu_stays_open(rng):
    r = Reset(256, factory("hedge", Simplex(4)))
    for _ in range(256):
        r.query()
        r.update(Linear(rng.random(4)))
        assert all(0.0 < m < 1.0 for m in r.mu[1:])
