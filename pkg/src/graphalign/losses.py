"""Adversarial, cycle, and total losses with exact analytic gradients.

Conventions
-----------
* ``adv_loss_1to2`` is the value the critic of graph 2 ascends and the
  1-to-2 mapper descends (in saturating mode):
  mean log D2(x2) + mean log(1 - D2(G12(x1))).
* ``adv_loss_2to1`` mirrors it with the graphs swapped.
* ``cycle_loss`` is the mean L1 reconstruction error of both round trips.
* ``total_loss`` composes them: adv12 + adv21 + lambda * cycle.

Gradient functions return ``(value, grads)`` where ``grads`` maps a network
name ("g12", "g21", "d1", "d2") to a list of arrays ordered like
``mapper_param_list`` / ``critic_param_list``.  All gradients are of the
*stated value*; callers choose ascent or descent.  In nonsaturating mode the
mapper gradients come from ``-mean log D(G(x))`` instead of
``mean log(1 - D(G(x)))`` (same optimum, stronger early gradients); the
reported value stays the literal composed loss.
"""

import numpy as np

from .errors import DataError
from .nets import _critic_backward, _critic_forward, _mapper_backward, _mapper_forward
from .validation import as_float_matrix, check_same_dim

GENERATOR_LOSS_MODES = ("saturating", "nonsaturating")


def _check_batches(b1, b2):
    b1 = as_float_matrix(b1, "batch1")
    b2 = as_float_matrix(b2, "batch2")
    check_same_dim(b1, b2, "batch1", "batch2")
    return b1, b2


def _zip_add(a, b):
    return [x + y for x, y in zip(a, b)]


def _scaled(grads, c):
    return [c * g for g in grads]


def adv_loss_1to2(g12, d2, batch1, batch2):
    """Eq. value: mean log D2(real x2) + mean log(1 - D2(G12(x1)))."""
    value, _ = _adv_grads(g12, d2, batch1, batch2, want_grads=False)
    return value


def adv_loss_2to1(g21, d1, batch1, batch2):
    """Mirror image: mean log D1(real x1) + mean log(1 - D1(G21(x2)))."""
    value, _ = _adv_grads(g21, d1, batch2, batch1, want_grads=False)
    return value


def cycle_loss(g12, g21, batch1, batch2):
    b1, b2 = _check_batches(batch1, batch2)
    y1, _ = _mapper_forward(g12, b1)
    c1, _ = _mapper_forward(g21, y1)
    y2, _ = _mapper_forward(g21, b2)
    c2, _ = _mapper_forward(g12, y2)
    return float(
        np.abs(c1 - b1).sum() / b1.shape[0] + np.abs(c2 - b2).sum() / b2.shape[0]
    )


def total_loss(g12, g21, d1, d2, batch1, batch2, lam):
    if lam < 0:
        raise DataError("lambda must be >= 0")
    return (
        adv_loss_1to2(g12, d2, batch1, batch2)
        + adv_loss_2to1(g21, d1, batch1, batch2)
        + lam * cycle_loss(g12, g21, batch1, batch2)
    )


def _adv_grads(mapper, critic, source_batch, real_batch, want_grads=True, mode="saturating"):
    """Shared forward/backward for one adversarial direction.

    ``source_batch`` feeds the mapper; ``real_batch`` is the critic's real
    side.  Returns (value, (mapper_grads, critic_grads, None)) with value
    always the saturating (literal) form.
    """
    src, real = _check_batches(source_batch, real_batch)
    if mapper.dim != src.shape[1]:
        raise DataError("mapper dimension %d does not match data" % mapper.dim)
    m_src = src.shape[0]
    m_real = real.shape[0]
    fake, z_fake = _mapper_forward(mapper, src)
    p_real, z1_r, a1_r = _critic_forward(critic, real)
    p_fake, z1_f, a1_f = _critic_forward(critic, fake)
    value = float(np.mean(np.log(p_real)) + np.mean(np.log(1.0 - p_fake)))
    if not want_grads:
        return value, None
    # d(value)/d(logit): real side (1 - p)/m, fake side -p/m
    dz_real = (1.0 - p_real) / m_real
    (dw1_r, db1_r, dw2_r, db2_r), _ = _critic_backward(critic, real, z1_r, a1_r, dz_real)
    dz_fake = -p_fake / m_src
    (dw1_f, db1_f, dw2_f, db2_f), dx_fake = _critic_backward(
        critic, fake, z1_f, a1_f, dz_fake
    )
    critic_grads = [dw1_r + dw1_f, db1_r + db1_f, dw2_r + dw2_f, db2_r + db2_f]
    if mode == "nonsaturating":
        # mapper instead descends -mean log D(G(x)); recompute its pull
        dz_gen = -(1.0 - p_fake) / m_src
        _, dx_fake = _critic_backward(critic, fake, z1_f, a1_f, dz_gen)
    d_weight, d_bias, _ = _mapper_backward(mapper, src, z_fake, dx_fake)
    return value, ([d_weight, d_bias], critic_grads)


def adv_loss_1to2_grads(g12, d2, batch1, batch2):
    value, (mg, cg) = _adv_grads(g12, d2, batch1, batch2)
    return value, {"g12": mg, "d2": cg}


def adv_loss_2to1_grads(g21, d1, batch1, batch2):
    value, (mg, cg) = _adv_grads(g21, d1, batch2, batch1)
    return value, {"g21": mg, "d1": cg}


def cycle_loss_grads(g12, g21, batch1, batch2):
    b1, b2 = _check_batches(batch1, batch2)
    m1, m2 = b1.shape[0], b2.shape[0]
    # round trip 1: x1 -> g12 -> g21 -> compare with x1
    y1, zy1 = _mapper_forward(g12, b1)
    c1, zc1 = _mapper_forward(g21, y1)
    diff1 = c1 - b1
    d_c1 = np.sign(diff1) / m1
    dw21_out, db21_out, d_y1 = _mapper_backward(g21, y1, zc1, d_c1)
    dw12_in, db12_in, _ = _mapper_backward(g12, b1, zy1, d_y1)
    # round trip 2: x2 -> g21 -> g12 -> compare with x2
    y2, zy2 = _mapper_forward(g21, b2)
    c2, zc2 = _mapper_forward(g12, y2)
    diff2 = c2 - b2
    d_c2 = np.sign(diff2) / m2
    dw12_out, db12_out, d_y2 = _mapper_backward(g12, y2, zc2, d_c2)
    dw21_in, db21_in, _ = _mapper_backward(g21, b2, zy2, d_y2)
    value = float(np.abs(diff1).sum() / m1 + np.abs(diff2).sum() / m2)
    grads = {
        "g12": [dw12_in + dw12_out, db12_in + db12_out],
        "g21": [dw21_in + dw21_out, db21_in + db21_out],
    }
    return value, grads


def total_loss_grads(g12, g21, d1, d2, batch1, batch2, lam):
    """Literal composed loss and its gradients for every parameter."""
    if lam < 0:
        raise DataError("lambda must be >= 0")
    v12, g_a = adv_loss_1to2_grads(g12, d2, batch1, batch2)
    v21, g_b = adv_loss_2to1_grads(g21, d1, batch1, batch2)
    vc, g_c = cycle_loss_grads(g12, g21, batch1, batch2)
    grads = {
        "g12": _zip_add(g_a["g12"], _scaled(g_c["g12"], lam)),
        "g21": _zip_add(g_b["g21"], _scaled(g_c["g21"], lam)),
        "d1": g_b["d1"],
        "d2": g_a["d2"],
    }
    return v12 + v21 + lam * vc, grads


def generator_step_grads(g12, g21, d1, d2, batch1, batch2, lam, mode="saturating"):
    """Mapper gradients for one generator descent step.

    Returns ``(literal total value, g12 grads, g21 grads)``.  ``mode``
    selects saturating (literal) or nonsaturating mapper pulls; the value is
    the literal composed loss either way.
    """
    if mode not in GENERATOR_LOSS_MODES:
        raise DataError("unknown generator loss mode %r" % mode)
    v12, (mg12, _) = _adv_grads(g12, d2, batch1, batch2, mode=mode)
    v21, (mg21, _) = _adv_grads(g21, d1, batch2, batch1, mode=mode)
    vc, g_c = cycle_loss_grads(g12, g21, batch1, batch2)
    g12_grads = _zip_add(mg12, _scaled(g_c["g12"], lam))
    g21_grads = _zip_add(mg21, _scaled(g_c["g21"], lam))
    return v12 + v21 + lam * vc, g12_grads, g21_grads


def discriminator_step_grads(g12, g21, d1, d2, batch1, batch2):
    """Critic gradients of the adversarial values (ascent direction).

    Returns ``(adv12, adv21, d1 grads, d2 grads)``; callers negate the grads
    to ascend with a minimizing optimizer.
    """
    v12, (_, d2_grads) = _adv_grads(g12, d2, batch1, batch2)
    v21, (_, d1_grads) = _adv_grads(g21, d1, batch2, batch1)
    return v12, v21, d1_grads, d2_grads
