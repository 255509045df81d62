"""Dense neural kernel: mapper and critic networks, exact gradients, ADAM.

Two fixed architectures cover everything the aligner needs:

* mapper — a single d x d affine layer (optionally followed by a leaky ReLU
  in the "nonlinear" variant), initialized near the identity;
* critic — a two-layer fully connected net (default 512 hidden units, leaky
  ReLU, sigmoid output) whose output probabilities are clamped to
  ``[CLAMP_EPS, 1 - CLAMP_EPS]`` so downstream logs never see 0 or 1.

Forward passes cache pre-activations; the matching backward functions return
exact reverse-mode gradients.  The leaky-ReLU subgradient at 0 is taken as 1.
Everything operates on float64 batches of shape (m, d).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .validation import check_choice, check_count, check_positive

CLAMP_EPS = 1e-7

MAPPER_VARIANTS = ("linear", "nonlinear")


def leaky_relu(x, slope=0.2):
    x = np.asarray(x, dtype=np.float64)
    if not 0.0 < slope < 1.0:
        raise DataError("slope must lie in (0, 1), got %r" % slope)
    return np.where(x >= 0, x, slope * x)


def sigmoid(z):
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class MapperParams:
    variant: str
    weight: np.ndarray  # (d, d)
    bias: np.ndarray  # (d,)
    slope: float = 0.2

    @property
    def dim(self):
        return self.weight.shape[0]

    def copy(self):
        return MapperParams(self.variant, self.weight.copy(), self.bias.copy(), self.slope)


@dataclass
class CriticParams:
    w1: np.ndarray  # (h, d)
    b1: np.ndarray  # (h,)
    w2: np.ndarray  # (1, h)
    b2: np.ndarray  # (1,)
    slope: float = 0.2

    @property
    def dim(self):
        return self.w1.shape[1]

    @property
    def hidden_units(self):
        return self.w1.shape[0]

    def copy(self):
        return CriticParams(
            self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy(), self.slope
        )


def init_mapper(dim, rng, variant="linear", noise=0.01, slope=0.2):
    """Identity plus gaussian noise (sigma = ``noise``); zero bias."""
    check_choice(variant, MAPPER_VARIANTS, "variant")
    check_count(dim, "dim", 1)
    weight = np.eye(dim) + noise * rng.standard_normal((dim, dim))
    return MapperParams(variant, weight, np.zeros(dim), slope)


def init_critic(dim, rng, hidden_units=512, scale=0.02, slope=0.2):
    """Gaussian weights (sigma = ``scale``); zero biases."""
    check_count(dim, "dim", 1)
    check_count(hidden_units, "hidden_units", 1)
    check_positive(scale, "scale")
    w1 = scale * rng.standard_normal((hidden_units, dim))
    w2 = scale * rng.standard_normal((1, hidden_units))
    return CriticParams(w1, np.zeros(hidden_units), w2, np.zeros(1), slope)


def _as_batch(x, dim, name):
    a = np.asarray(x, dtype=np.float64)
    squeeze = a.ndim == 1
    if squeeze:
        a = a[None, :]
    if a.ndim != 2 or a.shape[1] != dim:
        raise DataError("%s must have dimension %d, got shape %s" % (name, dim, (a.shape,)))
    return a, squeeze


def mapper_forward(p, x):
    """Apply the mapper to a d-vector or an (m, d) batch."""
    a, squeeze = _as_batch(x, p.dim, "x")
    y, _ = _mapper_forward(p, a)
    return y[0] if squeeze else y


def _mapper_forward(p, x):
    z = x @ p.weight.T + p.bias
    if p.variant == "linear":
        return z, z
    return np.where(z >= 0, z, p.slope * z), z


def _mapper_backward(p, x, z, d_out):
    """Gradients of a scalar loss given d(loss)/d(output)."""
    if p.variant == "linear":
        dz = d_out
    else:
        dz = d_out * np.where(z >= 0, 1.0, p.slope)
    d_weight = dz.T @ x
    d_bias = dz.sum(axis=0)
    d_x = dz @ p.weight
    return d_weight, d_bias, d_x


def critic_forward(p, x):
    """Probability that ``x`` is a real sample; clamped inside (0, 1)."""
    a, squeeze = _as_batch(x, p.dim, "x")
    probs, _, _ = _critic_forward(p, a)
    return probs[0] if squeeze else probs


def _critic_forward(p, x):
    z1 = x @ p.w1.T + p.b1
    a1 = np.where(z1 >= 0, z1, p.slope * z1)
    z2 = a1 @ p.w2.T + p.b2
    probs = np.clip(sigmoid(z2[:, 0]), CLAMP_EPS, 1.0 - CLAMP_EPS)
    return probs, z1, a1


def _critic_backward(p, x, z1, a1, d_z2):
    """Gradients given d(loss)/d(logit); returns ((dw1, db1, dw2, db2), dx)."""
    dz2 = d_z2[:, None]
    d_w2 = dz2.T @ a1
    d_b2 = dz2.sum(axis=0)
    d_a1 = dz2 @ p.w2
    dz1 = d_a1 * np.where(z1 >= 0, 1.0, p.slope)
    d_w1 = dz1.T @ x
    d_b1 = dz1.sum(axis=0)
    d_x = dz1 @ p.w1
    return (d_w1, d_b1, d_w2, d_b2), d_x


def mapper_param_list(p):
    return [p.weight, p.bias]


def critic_param_list(p):
    return [p.w1, p.b1, p.w2, p.b2]


@dataclass
class AdamState:
    lr: float
    beta1: float = 0.5
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    first_moment: list = field(default_factory=list)
    second_moment: list = field(default_factory=list)


def make_adam(params, lr, beta1=0.5, beta2=0.999, eps=1e-8):
    state = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps)
    state.first_moment = [np.zeros_like(p) for p in params]
    state.second_moment = [np.zeros_like(p) for p in params]
    return state


def adam_step(state, params, grads):
    """Standard bias-corrected ADAM update, in place on ``params``."""
    if len(params) != len(grads) or len(params) != len(state.first_moment):
        raise DataError("parameter/gradient list lengths disagree")
    state.step_count += 1
    t = state.step_count
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        if p.shape != g.shape:
            raise DataError(
                "gradient shape %s does not match parameter shape %s" % (g.shape, p.shape)
            )
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        p -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    return state, params


def mapper_to_dict(p):
    return {
        "variant": p.variant,
        "slope": p.slope,
        "weight": p.weight.tolist(),
        "bias": p.bias.tolist(),
    }


def mapper_from_dict(d):
    p = MapperParams(
        check_choice(d["variant"], MAPPER_VARIANTS, "variant"),
        np.asarray(d["weight"], dtype=np.float64),
        np.asarray(d["bias"], dtype=np.float64),
        float(d.get("slope", 0.2)),
    )
    if p.weight.ndim != 2 or p.weight.shape[0] != p.weight.shape[1]:
        raise DataError("mapper weight must be square")
    if p.bias.shape != (p.weight.shape[0],):
        raise DataError("mapper bias shape mismatch")
    return p


def critic_to_dict(p):
    return {
        "slope": p.slope,
        "w1": p.w1.tolist(),
        "b1": p.b1.tolist(),
        "w2": p.w2.tolist(),
        "b2": p.b2.tolist(),
    }


def critic_from_dict(d):
    p = CriticParams(
        np.asarray(d["w1"], dtype=np.float64),
        np.asarray(d["b1"], dtype=np.float64),
        np.asarray(d["w2"], dtype=np.float64),
        np.asarray(d["b2"], dtype=np.float64),
        float(d.get("slope", 0.2)),
    )
    h, dim = p.w1.shape
    if p.b1.shape != (h,) or p.w2.shape != (1, h) or p.b2.shape != (1,):
        raise DataError("critic parameter shapes disagree")
    return p
