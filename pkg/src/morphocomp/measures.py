"""Quantifications of morphological computation on a sensorimotor loop.

Two families are implemented, each normalised to [0, 1] with 0 meaning the
controller fully accounts for the behaviour and 1 meaning the body and
environment do.

Concept 1 (inverse to the action's influence on the next state):
  * ``mc_a``    on world-level joints p(w, a, w')
  * ``asoc_a``  on sensor-level joints p(s, a, s')
  * ``c_a``     interventional variant for reactive policies
  * ``c_a_deliberative``  interventional variant conditioning on an
    internal controller state instead of the sensor

Concept 2 (proportional to the world's influence on itself):
  * ``mc_w``    on world-level joints
  * ``asoc_w``  on sensor-level joints
  * ``c_w``     divergence from a world model with the state-to-state
    influence severed

World-level and sensor-level entry points are deliberately distinct even
though the arithmetic coincides: empirical callers never see the true world
state and must not conflate the two readings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .prob import (
    DimensionError,
    Distribution,
    Joint3,
    Kernel2,
    Kernel3,
    SupportError,
    compose_joint,
    conditional_mutual_information,
    entropy_normalizer,
)

MEASURE_NAMES = ("mc_a", "mc_w", "asoc_a", "asoc_w", "c_a", "c_a_d", "c_w")

# Values may stray this far outside [0, 1] from float accumulation before a
# report treats them as evidence of a bug.
RANGE_TOL = 1e-9

# The two forms of c_a are algebraically identical; a larger gap signals an
# implementation or estimation fault.
DUAL_FORM_TOL = 1e-9


class ConsistencyError(RuntimeError):
    """Two quantities that must agree by construction do not."""


@dataclass(frozen=True, eq=False)
class IntrinsicModel:
    """Everything an agent can estimate about its own loop.

    sensor_prior p(s), policy p(a|s) and world_model p(s'|s,a), with the
    next-sensor alphabet equal to the current-sensor alphabet.
    """

    sensor_prior: Distribution
    policy: Kernel2  # sensor -> action
    world_model: Kernel3  # (sensor, action) -> next sensor

    def __post_init__(self):
        s = self.sensor_prior.alphabet
        if self.policy.source != s or self.world_model.source1 != s:
            raise DimensionError("policy/world model must condition on the sensor alphabet")
        if self.world_model.source2 != self.policy.target:
            raise DimensionError("world model action alphabet differs from policy output")
        if self.world_model.target != s:
            raise DimensionError("world model must map back into the sensor alphabet")

    @property
    def sensor_alphabet(self):
        return self.sensor_prior.alphabet

    @property
    def action_alphabet(self):
        return self.policy.target


@dataclass(frozen=True)
class MeasureReport:
    """Named measure values in [0, 1] plus run metadata."""

    values: dict[str, float]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        clamped = {}
        for name, value in self.values.items():
            if name not in MEASURE_NAMES:
                raise ValueError(f"unknown measure name {name!r}")
            if not (-RANGE_TOL <= value <= 1.0 + RANGE_TOL):
                raise ConsistencyError(
                    f"measure {name} = {value!r} is outside [0, 1] beyond tolerance"
                )
            clamped[name] = min(max(float(value), 0.0), 1.0)
        object.__setattr__(self, "values", clamped)

    def __getitem__(self, name: str) -> float:
        return self.values[name]


def _square_normalizer(joint: Joint3) -> float:
    if joint.x.size != joint.z.size:
        raise DimensionError(
            "current-state and next-state axes must share one alphabet"
        )
    return entropy_normalizer(joint.z)


def mc_a(joint: Joint3) -> float:
    """Morphological computation as the missing action effect, world level.

    1 - I(W'; A | W) / ln|W| on a joint p(w, a, w').
    """
    return 1.0 - conditional_mutual_information(joint, source=1, given=0) / _square_normalizer(joint)


def mc_w(joint: Joint3) -> float:
    """Morphological computation as the world's own effect, world level.

    I(W'; W | A) / ln|W| on a joint p(w, a, w').
    """
    return conditional_mutual_information(joint, source=0, given=1) / _square_normalizer(joint)


def asoc_a(joint: Joint3) -> float:
    """Sensor-level reading of :func:`mc_a` on a joint p(s, a, s')."""
    return 1.0 - conditional_mutual_information(joint, source=1, given=0) / _square_normalizer(joint)


def asoc_w(joint: Joint3) -> float:
    """Sensor-level reading of :func:`mc_w` on a joint p(s, a, s')."""
    return conditional_mutual_information(joint, source=0, given=1) / _square_normalizer(joint)


def do_a(model: IntrinsicModel) -> Kernel2:
    """Interventional kernel p(s'|do(a)) = sum_s p(s'|s,a) p(s).

    Identifiable from observational data because the action screens off the
    sensor on the path into the next sensor state.
    """
    rows = np.einsum("s,sat->at", model.sensor_prior.probs, model.world_model.entries)
    return Kernel2(model.action_alphabet, model.sensor_alphabet, rows)


def do_s(model: IntrinsicModel) -> Kernel2:
    """Interventional kernel p(s'|do(s)) = sum_a p(a|s) p(s'|do(a))."""
    rows = model.policy.rows @ do_a(model).rows
    return Kernel2(model.sensor_alphabet, model.sensor_alphabet, rows)


def action_prior(model: IntrinsicModel) -> Distribution:
    """Marginal action distribution p(a) = sum_s p(s) p(a|s)."""
    return Distribution(model.action_alphabet, model.sensor_prior.probs @ model.policy.rows)


def cif(kernel: Kernel2, prior: Distribution) -> float:
    """Causal information flow from the intervened variable into the target.

    sum_x p(x) sum_z k(z|x) ln[ k(z|x) / sum_x' p(x') k(z|x') ], the mutual
    information of the post-intervention joint p(x) k(z|x).
    """
    if kernel.source != prior.alphabet:
        raise DimensionError("cif prior must range over the kernel's source alphabet")
    K = kernel.rows
    weights = prior.probs[:, None] * K
    mixture = prior.probs @ K
    ratio = np.ones_like(K)
    np.divide(K, mixture[None, :], out=ratio, where=weights > 0)
    value = float(np.sum(weights * np.log(ratio), where=weights > 0))
    return value if value > 0.0 else 0.0


def c_a(model: IntrinsicModel) -> float:
    """Causal measure of the missing action effect for a reactive policy.

    Evaluates both equivalent forms,
      1 + (CIF(S -> S') - CIF(A -> S')) / ln|S|   and
      1 - D(p(s'|do(a)) || p(s'|do(s))) / ln|S|  weighted by p(s,a),
    checks that they agree to :data:`DUAL_FORM_TOL` and returns the value.
    """
    log_n = entropy_normalizer(model.sensor_alphabet)
    kernel_a = do_a(model)
    kernel_s = do_s(model)
    p_s = model.sensor_prior
    p_a = action_prior(model)

    flow_form = 1.0 + (cif(kernel_s, p_s) - cif(kernel_a, p_a)) / log_n

    weights = p_s.probs[:, None] * model.policy.rows  # p(s, a)
    div = _interventional_divergence(weights, kernel_a.rows, kernel_s.rows)
    kl_form = 1.0 - div / log_n

    if abs(flow_form - kl_form) > DUAL_FORM_TOL:
        raise ConsistencyError(
            f"causal-measure forms disagree: flow {flow_form!r} vs kl {kl_form!r}"
        )
    return kl_form


def _interventional_divergence(
    weights: np.ndarray, rows_a: np.ndarray, rows_c: np.ndarray
) -> float:
    """sum_{c,a} w(c,a) sum_z rows_a(z|a) ln[ rows_a(z|a) / rows_c(z|c) ].

    weights has shape (C, A); rows_a (A, Z); rows_c (C, Z).
    """
    p = rows_a[None, :, :]
    q = rows_c[:, None, :]
    active = (weights[:, :, None] > 0) & (p > 0)
    if bool((active & (q == 0)).any()):
        index = np.argwhere(active & (q == 0))[0]
        raise SupportError(
            "intervened-on-state kernel has zero mass where the action kernel "
            f"is positive at (c, a, z) = {tuple(int(i) for i in index)}",
            index=tuple(int(i) for i in index),
        )
    ratio = np.ones(np.broadcast_shapes(p.shape, q.shape))
    np.divide(p, q, out=ratio, where=active)
    inner = np.sum(np.broadcast_to(p, ratio.shape) * np.log(ratio), axis=2, where=active)
    return float(np.sum(weights * inner))


def c_a_deliberative(
    controller_prior: Distribution,
    controller_policy: Kernel2,
    do_c_kernel: Kernel2,
    do_a_kernel: Kernel2,
    joint_ca: np.ndarray,
) -> float:
    """Causal measure of the missing action effect for a non-reactive agent.

    The internal controller state takes the sensor's role:
    1 - (1/ln|S|) sum_{c,a} p(c,a) sum_s' p(s'|do(a)) ln[p(s'|do(a))/p(s'|do(c))].
    """
    if controller_policy.source != controller_prior.alphabet:
        raise DimensionError("controller policy must condition on the controller alphabet")
    if do_c_kernel.source != controller_prior.alphabet:
        raise DimensionError("do(c) kernel must range over the controller alphabet")
    if do_a_kernel.source != controller_policy.target:
        raise DimensionError("do(a) kernel must range over the action alphabet")
    if do_c_kernel.target != do_a_kernel.target:
        raise DimensionError("both interventional kernels must share the target alphabet")

    joint_ca = np.asarray(joint_ca, dtype=np.float64)
    expected = controller_prior.probs[:, None] * controller_policy.rows
    if joint_ca.shape != expected.shape:
        raise DimensionError(f"joint p(c,a) of shape {joint_ca.shape}, expected {expected.shape}")
    if np.abs(joint_ca - expected).max() > RANGE_TOL:
        raise ConsistencyError("joint p(c,a) is inconsistent with prior and policy")

    log_n = entropy_normalizer(do_a_kernel.target)
    div = _interventional_divergence(joint_ca, do_a_kernel.rows, do_c_kernel.rows)
    return 1.0 - div / log_n


def c_w(model: IntrinsicModel) -> float:
    """Morphological computation as conditional dependence of the world on itself.

    Compares the predicted next-sensor conditional p(s'|s) against the same
    quantity recomputed under the assumption that the world state has no
    direct influence on its successor,
      ptilde(s'|s) = sum_a p(a|s) sum_s'' p(s'|s'',a) p(a|s'') p(s'') / p(a),
    and returns D(p(s'|s) || ptilde(s'|s)) / ln|S| under the prior p(s).
    """
    log_n = entropy_normalizer(model.sensor_alphabet)
    p = model.sensor_prior.probs
    pi = model.policy.rows
    world = model.world_model.entries

    p_next_given_s = np.einsum("sa,sat->st", pi, world)
    p_a = p @ pi
    unreachable = (p_a == 0) & (pi.max(axis=0) > 0)
    if unreachable.any():
        index = int(np.argmax(unreachable))
        raise SupportError(
            f"action {index} has policy mass but zero marginal probability",
            index=index,
        )
    numer = np.einsum("sat,sa,s->at", world, pi, p)
    p_next_given_a = np.divide(
        numer, p_a[:, None], out=np.zeros_like(numer), where=p_a[:, None] > 0
    )
    severed = pi @ p_next_given_a  # ptilde(s'|s)

    row_dev = np.abs(severed.sum(axis=1) - 1.0).max()
    if row_dev > RANGE_TOL:
        raise ConsistencyError(
            f"severed world model rows sum to 1 +/- {row_dev:.3e}"
        )

    weights = p[:, None] * p_next_given_s
    active = weights > 0
    if bool((active & (severed == 0)).any()):
        index = np.argwhere(active & (severed == 0))[0]
        raise SupportError(
            "severed world model has zero mass on an observed transition "
            f"(s, s') = {tuple(int(i) for i in index)}",
            index=tuple(int(i) for i in index),
        )
    ratio = np.ones_like(severed)
    np.divide(p_next_given_s, severed, out=ratio, where=active)
    value = float(np.sum(weights * np.log(ratio), where=active))
    return max(value, 0.0) / log_n


INTRINSIC_MEASURES = ("asoc_a", "asoc_w", "c_a", "c_w")


def intrinsic_measures(
    model: IntrinsicModel, names=INTRINSIC_MEASURES
) -> dict[str, float]:
    """Evaluate a named subset of the intrinsic measures on one model."""
    values: dict[str, float] = {}
    joint = None
    for name in names:
        if name in ("asoc_a", "asoc_w"):
            if joint is None:
                joint = compose_joint(model.sensor_prior, model.policy, model.world_model)
            values[name] = asoc_a(joint) if name == "asoc_a" else asoc_w(joint)
        elif name == "c_a":
            values[name] = c_a(model)
        elif name == "c_w":
            values[name] = c_w(model)
        else:
            raise ValueError(f"{name!r} is not an intrinsic measure")
    return values
