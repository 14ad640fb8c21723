"""Machine-checkable certificates and closed-loop analysis.

Certificates never raise on failed conditions; they report.  The same code
path powers both the test suite and the command-line ``analyze`` command,
and synthesis routines decide for themselves whether a failed certificate
is an error.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .bezout import coprime_check
from .numeric import poly_roots, schur_check
from .poly import Polynomial, RationalTF

IDENTITY_RTOL = 1e-8
INT_TOL = 1e-6
TF_EQUAL_RTOL = 1e-6
#: coprimality quality below which a warning is attached downstream
QUALITY_WARN = 1e-6


@dataclass
class Certificate:
    """Evidence that a polynomial triple solves its synthesis problem.

    ``passed`` holds exactly when every condition boolean is true and the
    defining identity's residual is within tolerance.  ``witnesses`` carry
    the measured scalars behind each verdict (spectral radii, degree gaps,
    worst distance of coefficients from integers, ...).
    """

    kind: str
    identity_residual: float
    residual_tol: float
    conditions: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.identity_residual <= self.residual_tol
                and all(self.conditions.values()))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "identity_residual": self.identity_residual,
            "residual_tol": self.residual_tol,
            "conditions": dict(self.conditions),
            "witnesses": dict(self.witnesses),
            "warnings": list(self.warnings),
            "details": dict(self.details),
        }


def closed_loop_poly(plant_den: Polynomial, plant_num: Polynomial,
                     ctrl_den: Polynomial, ctrl_num: Polynomial) -> Polynomial:
    """Characteristic polynomial ``plant_den*ctrl_den - plant_num*ctrl_num``.

    The feedback sign is baked into the controller numerator (a stabilizing
    synthesis returns the negated identity cofactor), so this combination is
    the loop denominator as-is.
    """
    return plant_den * ctrl_den - plant_num * ctrl_num


def _integer_deviation(p: Polynomial) -> float:
    if p.is_zero:
        return 0.0
    return float(np.max(np.abs(p.coeffs - np.round(p.coeffs))))


def _deg(p: Polynomial) -> int:
    return -1 if p.is_zero else p.coeffs.size - 1


def certify_stabilization(plant_den: Polynomial, plant_num: Polynomial,
                          alpha: Polynomial, beta: Polynomial,
                          gamma: Polynomial, *,
                          residual_rtol: float = IDENTITY_RTOL,
                          int_tol: float = INT_TOL) -> Certificate:
    """Check ``alpha*plant_den + beta*plant_num = gamma`` and the side
    conditions: alpha integer monic, gamma Schur monic, deg(beta) < deg(alpha).
    """
    residual = (alpha * plant_den + beta * plant_num - gamma).max_abs()
    scale = max(1.0, (alpha * plant_den).max_abs(), (beta * plant_num).max_abs(),
                gamma.max_abs())
    cert = Certificate("stabilization", residual, residual_rtol * scale)

    int_dev = _integer_deviation(alpha)
    cert.conditions["alpha_integer"] = int_dev <= int_tol
    cert.conditions["alpha_monic"] = alpha.is_monic(int_tol)
    cert.witnesses["alpha_integer_deviation"] = int_dev

    gs = schur_check(gamma)
    cert.conditions["gamma_schur"] = gs.is_schur
    cert.conditions["gamma_monic"] = gamma.is_monic()
    cert.witnesses["gamma_spectral_radius"] = gs.spectral_radius
    if gs.near_boundary:
        cert.warnings.append(
            f"gamma spectral radius {gs.spectral_radius:.9f} is within the "
            "near-unit-circle band; the stability verdict is fragile")

    cert.conditions["degree_gap"] = _deg(beta) < _deg(alpha)
    cert.witnesses["alpha_degree"] = float(_deg(alpha))
    cert.witnesses["beta_degree"] = float(_deg(beta))

    quality = coprime_check(plant_den, plant_num).quality
    cert.witnesses["plant_coprimality_quality"] = quality
    if quality < QUALITY_WARN:
        cert.warnings.append(
            f"plant coprimality quality {quality:.3e} is marginal; the "
            "synthesis problem is numerically delicate")
    return cert


def tf_equal(t1: RationalTF, t2: RationalTF, tol: float = TF_EQUAL_RTOL) -> bool:
    """Equality of transfer functions by cross-multiplication.

    ``num1*den2 - num2*den1`` must vanish to ``tol`` relative to the larger
    product's coefficient scale; common factors (including unstable or
    mis-scaled ones) cancel without any root finding.
    """
    if t1.den.is_zero or t2.den.is_zero:
        raise ValueError("transfer function denominators must be nonzero")
    left = t1.num * t2.den
    right = t2.num * t1.den
    scale = max(1.0, left.max_abs(), right.max_abs())
    return (left - right).max_abs() <= tol * scale


def closed_loop_tf(plant_den: Polynomial, plant_num: Polynomial,
                   ctrl_den: Polynomial, num_y: Polynomial,
                   num_r: Polynomial) -> RationalTF:
    """Reference-to-output transfer function of the two-input-controller loop."""
    return RationalTF(num_r * plant_num,
                      closed_loop_poly(plant_den, plant_num, ctrl_den, num_y))


def certify_conversion(plant_den: Polynomial, plant_num: Polynomial,
                       pre, conv, *,
                       residual_rtol: float = IDENTITY_RTOL,
                       int_tol: float = INT_TOL,
                       tf_tol: float = TF_EQUAL_RTOL) -> Certificate:
    """Certificate for an integer-coefficient conversion.

    ``pre`` and ``conv`` are the pre-designed and converted two-input
    controllers (``conv`` also carries the solution triple).  Checks: the
    converted denominator is integer monic; the solution triple satisfies
    its identity; the reference-to-output transfer function is preserved;
    the converted loop is internally stable; and the converted loop
    denominator factors through the original one by the Schur factor.
    """
    alpha, beta, gamma = conv.alpha, conv.beta, conv.gamma
    residual = (alpha * pre.den + beta * plant_num - gamma).max_abs()
    scale = max(1.0, (alpha * pre.den).max_abs(), (beta * plant_num).max_abs(),
                gamma.max_abs())
    cert = Certificate("conversion", residual, residual_rtol * scale)

    int_dev = _integer_deviation(gamma)
    cert.conditions["converted_den_integer"] = int_dev <= int_tol
    cert.conditions["converted_den_monic"] = gamma.is_monic(int_tol)
    cert.conditions["converted_den_matches_gamma"] = conv.den.allclose(gamma, 1e-12)
    cert.witnesses["gamma_integer_deviation"] = int_dev

    asch = schur_check(alpha)
    cert.conditions["alpha_schur"] = asch.is_schur
    cert.conditions["alpha_monic"] = alpha.is_monic()
    cert.witnesses["alpha_spectral_radius"] = asch.spectral_radius

    n = _deg(plant_den)
    cert.conditions["degree_gap"] = _deg(beta) < _deg(gamma) - n
    cert.witnesses["beta_degree"] = float(_deg(beta))
    cert.witnesses["gamma_degree"] = float(_deg(gamma))

    t_pre = closed_loop_tf(plant_den, plant_num, pre.den, pre.num_y, pre.num_r)
    t_conv = closed_loop_tf(plant_den, plant_num, conv.den, conv.num_y, conv.num_r)
    cert.conditions["tf_preserved"] = tf_equal(t_pre, t_conv, tf_tol)

    loop = t_conv.den
    ls = schur_check(loop)
    cert.conditions["internally_stable"] = ls.is_schur
    cert.witnesses["closed_loop_spectral_radius"] = ls.spectral_radius
    if ls.near_boundary:
        cert.warnings.append(
            f"closed-loop spectral radius {ls.spectral_radius:.9f} is within "
            "the near-unit-circle band")

    factored = alpha * t_pre.den
    fact_resid = (loop - factored).max_abs()
    fact_scale = max(1.0, loop.max_abs(), factored.max_abs())
    cert.conditions["loop_factorization"] = fact_resid <= residual_rtol * fact_scale
    cert.witnesses["loop_factorization_residual"] = fact_resid / fact_scale

    dc = t_conv.num(1.0) / t_conv.den(1.0) if abs(t_conv.den(1.0)) > 0 else float("inf")
    cert.witnesses["dc_gain"] = float(np.real(dc))

    # transient shaping is not compensated; report the cancelled pole-zero
    # locations (the Schur factor's roots) for inspection
    if not alpha.is_zero and alpha.coeffs.size > 1:
        cert.details["cancelled_roots"] = [
            [float(r.real), float(r.imag)] for r in poly_roots(alpha)]
    else:
        cert.details["cancelled_roots"] = []

    quality = coprime_check(pre.den, plant_num).quality
    cert.witnesses["den_num_coprimality_quality"] = quality
    if quality < QUALITY_WARN:
        cert.warnings.append(
            f"controller/numerator coprimality quality {quality:.3e} is marginal")
    return cert
