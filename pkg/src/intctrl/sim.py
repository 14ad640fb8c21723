"""Discrete-time state-space realization and closed-loop simulation."""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .poly import Polynomial, RationalTF


class AlgebraicLoopError(ValueError):
    """Both the plant and the controller's feedback channel feed through."""


@dataclass(frozen=True)
class StateSpace:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name,
                               np.atleast_2d(np.asarray(getattr(self, name),
                                                        dtype=float)))
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise ValueError("A must be square")
        if self.B.shape[0] != n or self.C.shape[1] != n:
            raise ValueError("B/C dimensions inconsistent with A")
        if self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise ValueError("D dimensions inconsistent with B and C")

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.C.shape[0]


def realize_tf(tf: RationalTF) -> StateSpace:
    """Controllable canonical realization of a proper SISO transfer function.

    The state matrix is the companion form whose last row holds the negated
    monic-denominator coefficients, so an integer monic denominator yields
    an all-integer state matrix.  A biproper input gets its direct term
    extracted by one division step.
    """
    if tf.den.is_zero:
        raise ValueError("denominator must be nonzero")
    if not tf.is_proper:
        raise ValueError("transfer function must be proper")
    den = Polynomial(tf.den.coeffs / tf.den.leading)
    num = Polynomial(tf.num.coeffs / tf.den.leading)
    n = den.coeffs.size - 1
    if n == 0:
        return StateSpace(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)),
                          np.array([[num.coeffs[0] if not num.is_zero else 0.0]]))
    d_term, strict = divmod(num, den)
    d0 = d_term.coeffs[0] if not d_term.is_zero else 0.0
    A = np.zeros((n, n))
    A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -den.coeffs[:-1]
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    C = np.zeros((1, n))
    C[0, : strict.coeffs.size] = strict.coeffs
    return StateSpace(A, B, C, np.array([[d0]]))


def realize_controller(den: Polynomial, num_y: Polynomial,
                       num_r: Polynomial) -> StateSpace:
    """Shared-state realization of the two-input controller
    ``u = (num_y * y + num_r * r) / den``.

    Companion structure transposed relative to :func:`realize_tf` (first
    column holds the negated denominator coefficients) so that a single
    state chain serves both input channels; the integer-denominator =>
    integer-state-matrix property is identical.
    """
    if den.is_zero:
        raise ValueError("denominator must be nonzero")
    scale = den.leading
    den = Polynomial(den.coeffs / scale)
    n = den.coeffs.size - 1
    chans = []
    for num in (num_y, num_r):
        num = Polynomial(num.coeffs / scale)
        if not num.is_zero and num.coeffs.size > den.coeffs.size:
            raise ValueError("improper controller channel")
        d_term, strict = divmod(num, den)
        chans.append((d_term.coeffs[0] if not d_term.is_zero else 0.0, strict))
    if n == 0:
        return StateSpace(np.zeros((0, 0)), np.zeros((0, 2)), np.zeros((1, 0)),
                          np.array([[chans[0][0], chans[1][0]]]))
    A = np.zeros((n, n))
    A[:, 0] = -den.coeffs[:-1][::-1]
    A[:-1, 1:] = np.eye(n - 1)
    B = np.zeros((n, 2))
    D = np.zeros((1, 2))
    for j, (d0, strict) in enumerate(chans):
        # numerator taps enter high power first; the direct term folds the
        # denominator back out of the strictly proper part
        taps = np.zeros(n)
        taps[: strict.coeffs.size] = strict.coeffs
        B[:, j] = taps[::-1]
        D[0, j] = d0
    C = np.zeros((1, n))
    C[0, 0] = 1.0
    return StateSpace(A, B, C, D)


class SimulationResult(NamedTuple):
    y: np.ndarray
    u: np.ndarray
    r: np.ndarray
    diverged: bool
    steps: int


def simulate_loop(plant: StateSpace, controller: StateSpace,
                  reference: Sequence[float] | float, steps: int,
                  x0_plant: np.ndarray | None = None,
                  x0_ctrl: np.ndarray | None = None,
                  divergence_limit: float = 1e12) -> SimulationResult:
    """Run the feedback loop ``u = controller(y, r)``, ``y = plant(u)``.

    The loop must be well-posed: either the plant is strictly proper or the
    controller's output-feedback channel is.  Divergence (|y| beyond the
    limit) aborts with the flag set instead of overflowing silently.
    """
    if plant.n_inputs != 1 or plant.n_outputs != 1:
        raise ValueError("plant must be SISO")
    if controller.n_inputs != 2 or controller.n_outputs != 1:
        raise ValueError("controller must map (y, r) -> u")
    dp = float(plant.D[0, 0])
    dcy = float(controller.D[0, 0])
    if dp != 0.0 and dcy != 0.0:
        raise AlgebraicLoopError(
            "both plant and controller feedback channel have direct terms")
    r_seq = (np.full(steps, float(reference))
             if np.isscalar(reference) else np.asarray(reference, dtype=float))
    if r_seq.size < steps:
        raise ValueError("reference sequence shorter than the simulation")
    xp = np.zeros(plant.n_states) if x0_plant is None else np.asarray(x0_plant, dtype=float)
    xc = np.zeros(controller.n_states) if x0_ctrl is None else np.asarray(x0_ctrl, dtype=float)
    y = np.zeros(steps)
    u = np.zeros(steps)
    for k in range(steps):
        rk = r_seq[k]
        if dp == 0.0:
            yk = float((plant.C @ xp)[0])
            uk = float((controller.C @ xc + controller.D @ np.array([yk, rk]))[0])
        else:
            uk = float((controller.C @ xc + controller.D @ np.array([0.0, rk]))[0])
            yk = float((plant.C @ xp)[0]) + dp * uk
        y[k] = yk
        u[k] = uk
        if abs(yk) > divergence_limit or not np.isfinite(yk):
            return SimulationResult(y[: k + 1], u[: k + 1], r_seq[: k + 1],
                                    True, k + 1)
        xp = plant.A @ xp + plant.B[:, 0] * uk
        xc = controller.A @ xc + controller.B @ np.array([yk, rk])
    return SimulationResult(y, u, r_seq[:steps], False, steps)


def write_trajectory_csv(fp: io.TextIOBase, result: SimulationResult) -> None:
    """CSV with header ``k,r,u,y``, one row per step, 17 significant digits."""
    fp.write("k,r,u,y\n")
    for k in range(result.steps):
        fp.write(f"{k},{result.r[k]:.17g},{result.u[k]:.17g},{result.y[k]:.17g}\n")
