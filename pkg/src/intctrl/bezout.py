"""Polynomial Diophantine solves, the Bezout identity and coprimality tests.

The central operation solves ``p * r + s * m = q`` for the unique ``(r, s)``
with ``deg(s) < deg(p)``, where ``m`` is a fixed modulus polynomial coprime
to ``p``.  It is realised as one dense pivoted solve of the square
coefficient-matching system rather than an extended-Euclidean chain:
floating-point Euclid on polynomials is numerically fragile, while the
square system is well-posed exactly when the coprimality holds.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .numeric import SingularMatrixError, solve_linear
from .poly import Polynomial, _trimmed

COPRIME_TOL = 1e-8


class NotCoprimeError(ValueError):
    """The inputs share a common factor to working tolerance."""

    def __init__(self, message: str, pivot: float | None = None):
        self.pivot = pivot
        super().__init__(message)


class DiophantineSolution(NamedTuple):
    r: Polynomial
    s: Polynomial


class CoprimalityResult(NamedTuple):
    coprime: bool
    #: Reciprocal condition estimate of the Sylvester matrix
    #: (smallest over largest singular value); 1.0 for constant inputs.
    quality: float


def solve_diophantine(p: Polynomial, q: Polynomial, modulus: Polynomial,
                      residual_tol: float = 1e-10) -> DiophantineSolution:
    """Unique ``(r, s)`` with ``p*r + s*modulus = q`` and ``deg(s) < deg(p)``.

    Requires ``deg(q) >= deg(p)``, ``p`` monic and coprime to ``modulus``,
    and ``deg(p) - 1 + deg(modulus) <= deg(q)`` so the coefficient-matching
    system is square of dimension ``deg(q) + 1``.  Then
    ``deg(r) = deg(q) - deg(p)``; when additionally the degree inequality is
    strict (every use in this package), ``r`` is monic whenever ``q`` is.

    A power-series fast path handles ``p = z**k`` (invert the modulus modulo
    ``z**k``, using ``modulus(0) != 0``); it meets the same contract and is
    cross-checked against the dense route by the test suite.
    """
    if p.is_zero or modulus.is_zero:
        raise ValueError("p and modulus must be nonzero")
    if not p.is_monic():
        raise ValueError("p must be monic (normalize before calling)")
    dp = p.coeffs.size - 1
    dm = modulus.coeffs.size - 1
    dq = q.coeffs.size - 1 if not q.is_zero else 0
    if q.is_zero or dq < dp:
        raise ValueError(f"deg(q) = {dq if not q.is_zero else None} "
                         f"must be >= deg(p) = {dp}")
    if dp - 1 + dm > dq:
        raise ValueError("deg(p) - 1 + deg(modulus) must not exceed deg(q)")

    scale = max(1.0, q.max_abs())

    def residual(r: Polynomial, s: Polynomial) -> float:
        return (p * r + s * modulus - q).max_abs()

    if dp > 0 and _is_monomial(p):
        # power-series route can amplify when the modulus has roots well
        # inside the unit disk; fall back to the dense solve before failing
        r, s = _monomial_fast_path(dp, q, modulus)
        if residual(r, s) <= residual_tol * scale:
            return DiophantineSolution(r, s)
    r, s = _dense_solve(p, q, modulus)
    err = residual(r, s)
    if err > residual_tol * scale:
        raise NotCoprimeError(
            f"Diophantine residual {err:.3e} exceeds {residual_tol:.1e} * {scale:.3e}; "
            "inputs are close to sharing a factor")
    return DiophantineSolution(r, s)


def _is_monomial(p: Polynomial) -> bool:
    return bool(np.all(p.coeffs[:-1] == 0.0))


def _dense_solve(p: Polynomial, q: Polynomial, modulus: Polynomial):
    dp = p.coeffs.size - 1
    dm = modulus.coeffs.size - 1
    dq = q.coeffs.size - 1
    dr = dq - dp
    dim = dq + 1
    A = np.zeros((dim, dim))
    for j in range(dr + 1):
        A[j : j + dp + 1, j] = p.coeffs
    for i in range(dp):
        A[i : i + dm + 1, dr + 1 + i] = modulus.coeffs
    rhs = np.zeros(dim)
    rhs[: q.coeffs.size] = q.coeffs
    try:
        x = solve_linear(A, rhs)
    except SingularMatrixError as exc:
        raise NotCoprimeError(
            f"coefficient system singular to tolerance (pivot {exc.pivot:.3e}): "
            "p and modulus are not coprime", pivot=exc.pivot) from exc
    return Polynomial(x[: dr + 1]), _trimmed(x[dr + 1 :])


def _monomial_fast_path(k: int, q: Polynomial, modulus: Polynomial):
    # s = q * modulus^{-1} mod z^k, then r = (q - s*modulus) / z^k exactly.
    m0 = modulus.coeffs[0]
    if m0 == 0.0:
        raise NotCoprimeError("modulus(0) = 0: z^k and modulus share a root at 0")
    inv = np.zeros(k)
    inv[0] = 1.0 / m0
    m = np.zeros(k)
    m[: min(k, modulus.coeffs.size)] = modulus.coeffs[:k]
    for i in range(1, k):
        inv[i] = -np.dot(m[1 : i + 1][::-1], inv[:i]) / m0
    qlow = np.zeros(k)
    qlow[: min(k, q.coeffs.size)] = q.coeffs[:k]
    s = np.convolve(qlow, inv)[:k]
    rest = (q - Polynomial(s) * modulus).coeffs
    r = rest[k:] if rest.size > k else np.zeros(0)
    return Polynomial(r), _trimmed(s)


def bezout_identity(den: Polynomial, num: Polynomial,
                    residual_tol: float = 1e-10) -> tuple[Polynomial, Polynomial]:
    """Unique ``(u, v)`` with ``u*den + v*num = 1`` under the degree bounds
    ``deg(u) < deg(num)`` and ``deg(v) < deg(den)``.

    For a constant ``num`` the pair degenerates to ``u = 0, v = 1/num``.
    """
    if den.is_zero or num.is_zero:
        raise ValueError("inputs must be nonzero")
    dd = den.coeffs.size - 1
    dn = num.coeffs.size - 1
    if dn == 0:
        return Polynomial.zero(), Polynomial([1.0 / num.coeffs[0]])
    if dd == 0:
        return Polynomial([1.0 / den.coeffs[0]]), Polynomial.zero()
    dim = dd + dn
    A = np.zeros((dim, dim))
    for j in range(dn):
        A[j : j + dd + 1, j] = den.coeffs
    for i in range(dd):
        A[i : i + dn + 1, dn + i] = num.coeffs
    rhs = np.zeros(dim)
    rhs[0] = 1.0
    try:
        x = solve_linear(A, rhs)
    except SingularMatrixError as exc:
        raise NotCoprimeError(
            f"Bezout system singular to tolerance (pivot {exc.pivot:.3e})",
            pivot=exc.pivot) from exc
    u, v = Polynomial(x[:dn]), Polynomial(x[dn:])
    err = (u * den + v * num - Polynomial.one()).max_abs()
    if err > residual_tol * max(1.0, den.max_abs(), num.max_abs()):
        raise NotCoprimeError(f"Bezout residual {err:.3e} above tolerance")
    return u, v


def sylvester_matrix(a: Polynomial, b: Polynomial) -> np.ndarray:
    """Classical Sylvester matrix of two nonconstant polynomials."""
    da, db = a.coeffs.size - 1, b.coeffs.size - 1
    if da < 1 or db < 1:
        raise ValueError("both polynomials must have degree >= 1")
    S = np.zeros((da + db, da + db))
    for i in range(db):
        S[i : i + da + 1, i] = a.descending()
    for i in range(da):
        S[i : i + db + 1, db + i] = b.descending()
    return S


def coprime_check(a: Polynomial, b: Polynomial,
                  tol: float = COPRIME_TOL) -> CoprimalityResult:
    """Coprimality verdict with a scale-free quality scalar.

    ``quality`` is the reciprocal condition estimate (smallest / largest
    singular value) of the Sylvester matrix after each polynomial is scaled
    to unit coefficient magnitude, so the verdict reflects root separation
    rather than units; the pair is declared coprime when ``quality > tol``.
    Nonzero constants are coprime to everything.
    """
    if a.is_zero or b.is_zero:
        raise ValueError("coprimality of a zero polynomial is undefined")
    if a.coeffs.size == 1 or b.coeffs.size == 1:
        return CoprimalityResult(True, 1.0)
    an = Polynomial(a.coeffs / a.max_abs())
    bn = Polynomial(b.coeffs / b.max_abs())
    sv = np.linalg.svd(sylvester_matrix(an, bn), compute_uv=False)
    quality = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    return CoprimalityResult(quality > tol, quality)
