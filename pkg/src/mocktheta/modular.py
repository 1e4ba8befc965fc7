"""Multiprecision evaluation of eta, E4 and the level 6 form F, and the
Heegner-point trace that recovers alpha(n).

Points handed to the q-series always satisfy Im(tau) >= sqrt(3)/12, so
|q| <= exp(-pi sqrt(3)/6) ~ 0.404 and the series converge geometrically.
Level 6 Heegner points themselves can sit arbitrarily close to the real
line; they are only ever reached through the coset identities in
:func:`F_at_class`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath
from mpmath import mpf, mpc

from .quadforms import (
    CosetAssignment,
    QForm,
    assign_coset,
    heegner_point,
    reduced_primitive_forms,
    square_divisors_with_sign,
)

MIN_IM = math.sqrt(3) / 12 - 1e-6
_WORST_ABS_Q = math.exp(-math.pi * math.sqrt(3) / 6)
GUARD_BITS = 96
DEFAULT_RESIDUAL_TOL = mpf("1e-6")


class CertificationError(ArithmeticError):
    """Rounding of a trace could not be certified at the working precision."""


def discriminant(n: int) -> int:
    return 1 - 24 * n


def _e4_terms_needed(abs_q: float, bits: int) -> int:
    # 240 * 2 K^4 |q|^K / (1 - |q|) < 2^-bits
    if abs_q == 0.0:
        return 1
    log2q = math.log2(abs_q)
    k = 1
    while math.log2(480.0) + 4 * math.log2(k) + k * log2q - math.log2(1 - abs_q) > -bits:
        k += 1
    return k


def _eta_terms_needed(abs_q: float, bits: int) -> int:
    """Largest k in the pentagonal sum sum (-1)^k q^{k(3k-1)/2} to keep."""
    if abs_q == 0.0:
        return 0
    log2q = math.log2(abs_q)
    k = 0
    # remaining terms are bounded by 2|q|^{e}/(1-|q|) with e the next exponent
    while 1 + ((k + 1) * (3 * (k + 1) - 1) // 2) * log2q - math.log2(1 - abs_q) > -bits:
        k += 1
    return k


@dataclass(frozen=True)
class PrecisionPolicy:
    n: int
    working_bits: int
    eta_terms: int
    e4_terms: int
    residual_tol: mpf = field(default=DEFAULT_RESIDUAL_TOL)

    @classmethod
    def for_n(cls, n: int, bits: int | None = None, scale: int = 1,
              residual_tol=DEFAULT_RESIDUAL_TOL) -> PrecisionPolicy:
        """Policy for the trace at n.

        The largest single class term has size exp(pi sqrt|D_n| / 6) while the
        answer is only of size exp(pi sqrt|D_n| / 12), hence the sizing.
        ``scale`` multiplies the derived precision (used for robustness runs).
        """
        if n < 1:
            raise ValueError("n must be positive")
        D = abs(discriminant(n))
        need = (math.ceil(math.pi * math.sqrt(D) / 6 * math.log2(math.e))
                + math.ceil(2 * math.log2(24 * n + 2)) + GUARD_BITS)
        if bits is None:
            bits = need
        elif bits < need:
            raise ValueError(f"{bits} bits is below the minimum {need} for n={n}")
        bits *= scale
        return cls(n, bits, _eta_terms_needed(_WORST_ABS_Q, bits),
                   _e4_terms_needed(_WORST_ABS_Q, bits), mpf(residual_tol))

    @classmethod
    def with_bits(cls, bits: int) -> PrecisionPolicy:
        """Policy for standalone evaluations not tied to a trace."""
        return cls(0, bits, _eta_terms_needed(_WORST_ABS_Q, bits),
                   _e4_terms_needed(_WORST_ABS_Q, bits))


def _policy(policy) -> PrecisionPolicy:
    if isinstance(policy, PrecisionPolicy):
        return policy
    return PrecisionPolicy.with_bits(int(policy))


def _check_point(tau) -> None:
    if mpmath.im(tau) < MIN_IM:
        raise ValueError(f"Im(tau) = {mpmath.nstr(mpmath.im(tau), 8)} is below sqrt(3)/12")


def _euler(q, bits: int, cap: int):
    """prod (1 - q^k) = sum_k (-1)^k q^{k(3k-1)/2} over k in Z."""
    k_max = min(cap, _eta_terms_needed(float(abs(q)), bits))
    total = mpc(1)
    for k in range(1, k_max + 1):
        e1 = k * (3 * k - 1) // 2
        term = q**e1 * (1 + q**k)  # exponents k(3k-1)/2 and k(3k+1)/2
        total += -term if k % 2 else term
    return total


def _e4_series(q, bits: int, cap: int, sigma3: list[int]):
    k_max = min(cap, _e4_terms_needed(float(abs(q)), bits))
    total = mpc(0)
    power = mpc(1)
    for k in range(1, k_max + 1):
        power *= q
        total += sigma3[k] * power
    return 1 + 240 * total


_SIGMA3: list[int] = [0]


def _sigma3_upto(k: int) -> list[int]:
    global _SIGMA3
    if len(_SIGMA3) <= k:
        from .series import sigma3_table
        _SIGMA3 = sigma3_table(max(k, 2 * len(_SIGMA3)))
    return _SIGMA3


def eta(tau, policy) -> mpc:
    """Dedekind eta, q^{1/24} prod (1 - q^n) with q^{1/24} = e(tau/24)."""
    pol = _policy(policy)
    with mpmath.workprec(pol.working_bits + 16):
        tau = mpc(tau)
        _check_point(tau)
        q = mpmath.expjpi(2 * tau)
        pre = mpmath.expjpi(tau / 12)
        return +(pre * _euler(q, pol.working_bits, pol.eta_terms))


def e4(tau, policy) -> mpc:
    """Weight 4 Eisenstein series 1 + 240 sum sigma_3(k) q^k."""
    pol = _policy(policy)
    with mpmath.workprec(pol.working_bits + 16):
        tau = mpc(tau)
        _check_point(tau)
        q = mpmath.expjpi(2 * tau)
        return +_e4_series(q, pol.working_bits, pol.e4_terms, _sigma3_upto(pol.e4_terms))


def F_eval(tau, policy) -> mpc:
    """F = -(1/40)(E4(z) + 4E4(2z) - 9E4(3z) - 36E4(6z)) / (eta(z)eta(2z)eta(3z)eta(6z))^2."""
    pol = _policy(policy)
    bits = pol.working_bits
    with mpmath.workprec(bits + 16):
        tau = mpc(tau)
        _check_point(tau)
        q = mpmath.expjpi(2 * tau)
        s3 = _sigma3_upto(pol.e4_terms)
        powers = {1: q, 2: q * q}
        powers[3] = powers[2] * q
        powers[6] = powers[3] * powers[3]
        num = (_e4_series(powers[1], bits, pol.e4_terms, s3)
               + 4 * _e4_series(powers[2], bits, pol.e4_terms, s3)
               - 9 * _e4_series(powers[3], bits, pol.e4_terms, s3)
               - 36 * _e4_series(powers[6], bits, pol.e4_terms, s3))
        prod = mpc(1)
        for m in (1, 2, 3, 6):
            prod *= _euler(powers[m], bits, pol.eta_terms)
        # the four q^{m/24} prefactors combine to q^{1/2}, squared to q
        return +(-num / (40 * q * prod * prod))


def _class_argument(Qr: QForm, assignment: CosetAssignment, bits: int):
    hp = heegner_point(Qr, bits + 16)
    h = assignment.width
    shift = assignment.shift + 1 if assignment.cusp_class == "one_third" else assignment.shift
    with mpmath.workprec(bits + 16):
        return (hp.tau + shift) / h


def F_at_class(Qr: QForm, assignment: CosetAssignment, policy) -> mpc:
    """F at the level 6 Heegner point tau_{Q o gamma^-1} = gamma(tau_Q).

    Computed as +-F((tau_Q + shift) / width), which keeps Im >= sqrt(3)/12.
    """
    pol = _policy(policy)
    arg = _class_argument(Qr, assignment, pol.working_bits)
    value = F_eval(arg, pol)
    with mpmath.workprec(pol.working_bits + 16):
        # unary minus rounds to the ambient precision, so negate in here
        return value if assignment.sign > 0 else -value


class ClassTerm(NamedTuple):
    u: int
    sign: int
    form: QForm
    assignment: CosetAssignment
    value: mpc  # already multiplied by the genus sign


@dataclass(frozen=True)
class TraceResult:
    n: int
    S: mpc
    per_class_terms: tuple[ClassTerm, ...]
    alpha_real: mpf
    alpha_int: int
    residual: mpf
    policy: PrecisionPolicy


def trace_S(n: int, policy: PrecisionPolicy | None = None, certify: bool = True) -> TraceResult:
    """S(n) = sum_{u^2 | D_n} eps(u) sum_{Q reduced primitive, disc D_n/u^2} F(gamma_Q tau_Q)
    and alpha(n) = -Im S(n) / sqrt|D_n| rounded to the nearest integer.

    Raises CertificationError when the rounding residual reaches the policy
    tolerance (and ``certify`` is set).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if policy is None:
        policy = PrecisionPolicy.for_n(n)
    D = discriminant(n)
    terms = []
    with mpmath.workprec(policy.working_bits + 16):
        S = mpc(0)
        for u, eps in square_divisors_with_sign(D):
            for Q in reduced_primitive_forms(D // (u * u)):
                A = assign_coset(Q)
                value = eps * F_at_class(Q, A, policy)
                terms.append(ClassTerm(u, eps, Q, A, value))
                S += value
        alpha_real = -S.imag / mpmath.sqrt(-D)
        alpha_int = int(mpmath.nint(alpha_real))
        residual = abs(alpha_real - alpha_int)
    if certify and residual >= policy.residual_tol:
        raise CertificationError(
            f"n={n}: residual {mpmath.nstr(residual, 5)} at {policy.working_bits} bits")
    return TraceResult(n, S, tuple(terms), alpha_real, alpha_int, residual, policy)


def trace_alpha(n: int, scale: int = 1) -> TraceResult:
    return trace_S(n, PrecisionPolicy.for_n(n, scale=scale))


# -- main term and error bound ---------------------------------------------

def l_of(n, prec: int = 128) -> mpf:
    """l(n) = pi sqrt(24n - 1) / 6; n may be real."""
    with mpmath.workprec(prec):
        return mpmath.pi * mpmath.sqrt(24 * mpf(n) - 1) / 6


def main_term(n: int, prec: int = 128) -> mpf:
    """(-1)^{n+1} sqrt(6) / sqrt(24n - 1) * exp(l(n) / 2)."""
    with mpmath.workprec(prec):
        sign = 1 if n % 2 else -1
        return sign * mpmath.sqrt(6) / mpmath.sqrt(24 * n - 1) * mpmath.exp(l_of(n, prec) / 2)


def q_exponent(n: int, prec: int = 128) -> mpf:
    """log|D_n| / |log log |D_n| - 1.1714|."""
    with mpmath.workprec(prec):
        L = mpmath.log(abs(discriminant(n)))
        return L / abs(mpmath.log(L) - mpf("1.1714"))


def error_term(n: int, prec: int = 128) -> mpf:
    """Bound on |alpha(n) - main_term(n)|: 4.30e23 2^{q(n)} |D_n|^2 exp(l(n)/3)."""
    with mpmath.workprec(prec):
        D = abs(discriminant(n))
        return mpf("4.30e23") * mpf(2) ** q_exponent(n, prec) * D * D * mpmath.exp(l_of(n, prec) / 3)
