"""Closed-form binary sensorimotor loop for validating the measures.

All variables live on the signed binary alphabet {-1, +1}.  Each transition
map is a two-point softmax whose sharpness is one scalar parameter, so the
loop interpolates smoothly between fully random and fully deterministic:

  world kernel   a(w'|w,a)  ~ exp(phi w'w + psi w'a)   phi: state coupling,
                                                       psi: action coupling
  sensor map     b(s|w)     ~ exp(zeta s w)
  policy         pi(a|s)    ~ exp(mu a s)
  state prior    p(w)       ~ exp(tau w)

Everything downstream (joints, estimated-model equivalents, measure values)
is evaluated exactly; no sampling is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .measures import IntrinsicModel, MeasureReport, intrinsic_measures, mc_a, mc_w
from .prob import Alphabet, Distribution, Joint3, Kernel2, Kernel3, SupportError, chain, compose_joint

SIGNS = np.array([-1.0, 1.0])
BINARY = Alphabet(2, ("-1", "+1"))

# Sweep defaults: surfaces over [0, 5] as plotted, with 20 standing in for
# "effectively deterministic" (the softmax is then within 5e-18 of a Dirac).
DEFAULT_GRID = tuple(np.linspace(0.0, 5.0, 51))
DEFAULT_MU_VALUES = (0.0, 1.0, 20.0)
STRICT = 20.0


@dataclass(frozen=True)
class BinaryParams:
    phi: float  # world self-coupling
    psi: float  # action coupling
    zeta: float = STRICT  # sensor sharpness
    mu: float = 0.0  # policy sharpness
    tau: float = 0.0  # world-prior bias

    def __post_init__(self):
        if min(self.phi, self.psi, self.zeta, self.mu) < 0:
            raise ValueError("coupling parameters must be non-negative")


def _softmax_last(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    weights = np.exp(shifted)
    return weights / weights.sum(axis=-1, keepdims=True)


def kernels(params: BinaryParams):
    """The four transition maps (world kernel, sensor map, policy, prior)."""
    w = SIGNS
    world_logits = (
        params.phi * w[None, None, :] * w[:, None, None]
        + params.psi * w[None, None, :] * w[None, :, None]
    )
    alpha = Kernel3(BINARY, BINARY, BINARY, _softmax_last(world_logits))
    beta = Kernel2(BINARY, BINARY, _softmax_last(params.zeta * w[None, :] * w[:, None]))
    pi = Kernel2(BINARY, BINARY, _softmax_last(params.mu * w[None, :] * w[:, None]))
    p_w = Distribution(BINARY, _softmax_last(params.tau * w))
    return alpha, beta, pi, p_w


def world_joint(params: BinaryParams) -> Joint3:
    """Exact single-step joint p(w, a, w') of the loop."""
    alpha, beta, pi, p_w = kernels(params)
    sensor_to_action = chain(beta, pi)  # p(a|w) with the sensor summed out
    return compose_joint(p_w, sensor_to_action, alpha)


def intrinsic_model(params: BinaryParams) -> IntrinsicModel:
    """Sensor-level model (p(s), p(a|s), p(s'|s,a)) implied by the loop.

    The sensor-conditional world model marginalises the hidden state:
    p(s'|s,a) = sum_{w,w'} b(s'|w') a(w'|w,a) b(s|w) p(w) / p(s), which is
    exactly what a perfect estimator would converge to.
    """
    alpha, beta, pi, p_w = kernels(params)
    p_s = p_w.probs @ beta.rows
    if (p_s == 0).any():
        index = int(np.argmax(p_s == 0))
        raise SupportError(
            f"sensor symbol {index} has zero marginal probability", index=index
        )
    joint_rows = np.einsum(
        "w,ws,wau,ut->sat", p_w.probs, beta.rows, alpha.entries, beta.rows
    )
    world = joint_rows / p_s[:, None, None]
    return IntrinsicModel(
        Distribution(BINARY, p_s),
        pi,
        Kernel3(BINARY, BINARY, BINARY, world),
    )


def point_measures(phi: float, psi: float, mu: float, zeta: float, tau: float) -> MeasureReport:
    """All six swept measures at one parameter point, evaluated exactly."""
    params = BinaryParams(phi=phi, psi=psi, zeta=zeta, mu=mu, tau=tau)
    joint = world_joint(params)
    values = {"mc_a": mc_a(joint), "mc_w": mc_w(joint)}
    values.update(intrinsic_measures(intrinsic_model(params)))
    return MeasureReport(
        values,
        metadata={"phi": phi, "psi": psi, "mu": mu, "zeta": zeta, "tau": tau},
    )


def sweep(
    phi_values=DEFAULT_GRID,
    psi_values=DEFAULT_GRID,
    mu_values=DEFAULT_MU_VALUES,
    zeta: float = STRICT,
    tau: float = 0.0,
) -> list[MeasureReport]:
    """Measure surfaces over a (phi, psi, mu) grid, rows in grid order."""
    phi_values, psi_values, mu_values = map(tuple, (phi_values, psi_values, mu_values))
    if not (phi_values and psi_values and mu_values):
        raise ValueError("sweep grids must be non-empty")
    return [
        point_measures(float(phi), float(psi), float(mu), zeta, tau)
        for phi, psi, mu in product(phi_values, psi_values, mu_values)
    ]
