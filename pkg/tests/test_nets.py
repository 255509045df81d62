import numpy as np
import pytest

from graphalign.errors import DataError
from graphalign.nets import (
    CLAMP_EPS,
    AdamState,
    CriticParams,
    MapperParams,
    adam_step,
    critic_forward,
    critic_from_dict,
    critic_param_list,
    critic_to_dict,
    init_critic,
    init_mapper,
    leaky_relu,
    make_adam,
    mapper_forward,
    mapper_from_dict,
    mapper_param_list,
    mapper_to_dict,
    sigmoid,
)


class TestActivations:
    def test_sigmoid_midpoint(self):
        assert sigmoid(np.array([0.0]))[0] == pytest.approx(0.5)

    def test_sigmoid_stable_at_extremes(self):
        with np.errstate(over="raise"):
            out = sigmoid(np.array([-1000.0, 1000.0]))
        assert 0.0 <= out[0] < 1e-12
        assert 1.0 - 1e-12 < out[1] <= 1.0

    def test_leaky_relu(self):
        x = np.array([-2.0, 0.0, 3.0])
        assert np.allclose(leaky_relu(x, 0.2), [-0.4, 0.0, 3.0])


class TestInit:
    def test_mapper_near_identity(self, rng):
        p = init_mapper(6, rng, noise=0.01)
        assert np.allclose(p.weight, np.eye(6), atol=0.08)
        assert (p.bias == 0).all()

    def test_mapper_zero_noise_exact_identity(self, rng):
        p = init_mapper(4, rng, noise=0.0)
        assert (p.weight == np.eye(4)).all()

    def test_critic_shapes(self, rng):
        c = init_critic(5, rng, hidden_units=7, scale=0.1)
        assert c.w1.shape == (7, 5)
        assert c.b1.shape == (7,)
        assert c.w2.shape == (1, 7)
        assert c.b2.shape == (1,)
        assert (c.b1 == 0).all() and (c.b2 == 0).all()

    def test_deterministic_given_rng(self):
        a = init_mapper(4, np.random.default_rng(3))
        b = init_mapper(4, np.random.default_rng(3))
        assert (a.weight == b.weight).all()

    def test_variant_validated(self, rng):
        with pytest.raises(DataError):
            init_mapper(4, rng, variant="cubic")


class TestForward:
    def test_linear_mapper_is_affine(self, rng):
        p = init_mapper(3, rng, noise=0.3)
        x = rng.standard_normal((5, 3))
        assert np.allclose(mapper_forward(p, x), x @ p.weight.T + p.bias)

    def test_nonlinear_mapper_bends_negatives(self):
        p = MapperParams("nonlinear", np.eye(2), np.zeros(2), slope=0.5)
        out = mapper_forward(p, np.array([[-2.0, 4.0]]))
        assert np.allclose(out, [[-1.0, 4.0]])

    def test_single_vector_in_single_vector_out(self, rng):
        p = init_mapper(3, rng)
        out = mapper_forward(p, np.zeros(3))
        assert out.shape == (3,)

    def test_dimension_mismatch_rejected(self, rng):
        p = init_mapper(3, rng)
        with pytest.raises(DataError):
            mapper_forward(p, np.zeros((2, 4)))

    def test_critic_outputs_probabilities(self, rng):
        c = init_critic(4, rng, hidden_units=8, scale=0.5)
        x = rng.standard_normal((10, 4))
        probs = critic_forward(c, x)
        assert probs.shape == (10,)
        assert (probs > 0).all() and (probs < 1).all()

    def test_critic_clamp_under_saturation(self, rng):
        c = init_critic(2, rng, hidden_units=4, scale=100.0)
        probs = critic_forward(c, 1e6 * np.ones((3, 2)))
        assert (probs >= CLAMP_EPS).all()
        assert (probs <= 1.0 - CLAMP_EPS).all()

    def test_zero_critic_outputs_half(self):
        c = CriticParams(np.zeros((4, 3)), np.zeros(4), np.zeros((1, 4)), np.zeros(1))
        assert np.allclose(critic_forward(c, np.ones((2, 3))), 0.5)


class TestSerialization:
    def test_mapper_round_trip_exact(self, rng):
        p = init_mapper(4, rng, variant="nonlinear", noise=0.2)
        q = mapper_from_dict(mapper_to_dict(p))
        assert q.variant == p.variant
        assert (q.weight == p.weight).all()
        assert (q.bias == p.bias).all()

    def test_critic_round_trip_exact(self, rng):
        c = init_critic(3, rng, hidden_units=5, scale=0.3)
        d = critic_from_dict(critic_to_dict(c))
        for a, b in zip(critic_param_list(c), critic_param_list(d)):
            assert (a == b).all()

    def test_bad_shapes_rejected(self):
        with pytest.raises(DataError):
            mapper_from_dict({"variant": "linear", "weight": [[1.0, 0.0]], "bias": [0.0]})
        with pytest.raises(DataError):
            critic_from_dict({"w1": [[1.0]], "b1": [0.0, 0.0], "w2": [[1.0]], "b2": [0.0]})

    def test_copy_is_deep(self, rng):
        p = init_mapper(3, rng)
        q = p.copy()
        q.weight[0, 0] += 1.0
        assert p.weight[0, 0] != q.weight[0, 0]


def reference_adam(params, grads_seq, lr, b1, b2, eps):
    """Textbook ADAM with bias correction, for cross-checking."""
    params = [p.copy() for p in params]
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    for t, grads in enumerate(grads_seq, start=1):
        for i, g in enumerate(grads):
            m[i] = b1 * m[i] + (1 - b1) * g
            v[i] = b2 * v[i] + (1 - b2) * g * g
            m_hat = m[i] / (1 - b1**t)
            v_hat = v[i] / (1 - b2**t)
            params[i] = params[i] - lr * m_hat / (np.sqrt(v_hat) + eps)
    return params


class TestAdam:
    def test_matches_reference_implementation(self, rng):
        params = [rng.standard_normal((3, 3)), rng.standard_normal(3)]
        grads_seq = [[rng.standard_normal((3, 3)), rng.standard_normal(3)] for _ in range(7)]
        expect = reference_adam(params, grads_seq, lr=0.05, b1=0.5, b2=0.999, eps=1e-8)

        live = [p.copy() for p in params]
        state = make_adam(live, lr=0.05, beta1=0.5, beta2=0.999, eps=1e-8)
        for grads in grads_seq:
            adam_step(state, live, grads)
        for a, b in zip(live, expect):
            assert np.allclose(a, b, atol=1e-12)

    def test_updates_in_place(self, rng):
        p = [rng.standard_normal(4)]
        state = make_adam(p, lr=0.1)
        before = p[0].copy()
        adam_step(state, p, [np.ones(4)])
        assert (p[0] != before).any()

    def test_step_counter(self, rng):
        p = [np.zeros(2)]
        state = make_adam(p, lr=0.1)
        adam_step(state, p, [np.ones(2)])
        adam_step(state, p, [np.ones(2)])
        assert state.step_count == 2

    def test_shape_mismatch_rejected(self, rng):
        p = [np.zeros((2, 2))]
        state = make_adam(p, lr=0.1)
        with pytest.raises(DataError):
            adam_step(state, p, [np.zeros(3)])

    def test_length_mismatch_rejected(self, rng):
        p = [np.zeros(2)]
        state = make_adam(p, lr=0.1)
        with pytest.raises(DataError):
            adam_step(state, p, [np.zeros(2), np.zeros(2)])


class TestParamLists:
    def test_mapper_param_list_views(self, rng):
        p = init_mapper(3, rng)
        lst = mapper_param_list(p)
        lst[0][0, 0] = 42.0
        assert p.weight[0, 0] == 42.0

    def test_critic_param_list_order(self, rng):
        c = init_critic(3, rng, hidden_units=4)
        lst = critic_param_list(c)
        assert [a.shape for a in lst] == [(4, 3), (4,), (1, 4), (1,)]
