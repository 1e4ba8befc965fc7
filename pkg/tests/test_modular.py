import math

from hypothesis import given, settings, strategies as st
import mpmath
from mpmath import mpc, mpf
import pytest

from mocktheta.modular import (
    CertificationError,
    PrecisionPolicy,
    F_at_class,
    F_eval,
    e4,
    error_term,
    eta,
    l_of,
    main_term,
    q_exponent,
    trace_S,
)
from mocktheta.quadforms import (
    COSETS,
    CUSP_SIGN,
    CUSP_WIDTH,
    CosetAssignment,
    QForm,
    assign_coset,
    heegner_point,
    hurwitz_class_number,
    reduced_primitive_forms,
)
from mocktheta.series import f_weakly_holomorphic_coeffs, mock_theta_coeffs

BITS = 200


def close(x, y, bits):
    with mpmath.workprec(bits + 64):
        return abs(x - y) <= mpf(2) ** -bits * max(1, abs(y))


class TestEta:
    def test_closed_form_at_i(self):
        with mpmath.workprec(BITS):
            expect = mpmath.gamma(mpf(1) / 4) / (2 * mpmath.pi ** (mpf(3) / 4))
            assert close(eta(mpc(0, 1), BITS), expect, 170)

    def test_translation_phase(self):
        with mpmath.workprec(BITS):
            tau = mpc(mpf(1) / 2, mpf(1) / 2)
            lhs = eta(tau + 1, BITS)
            rhs = mpmath.expjpi(mpf(1) / 12) * eta(tau, BITS)
            assert close(lhs, rhs, 170)

    def test_doubling(self):
        with mpmath.workprec(BITS):
            assert close(eta(mpc(0, 2), BITS), eta(mpc(0, 1), BITS) / mpf(2) ** (mpf(3) / 8), 170)

    @settings(max_examples=15, deadline=None)
    @given(st.floats(-0.5, 0.5), st.floats(0.2, 3.0))
    def test_against_mpmath(self, x, y):
        tau = mpc(x, y)
        with mpmath.workprec(80):
            assert close(eta(tau, 80), mpmath.eta(tau), 60)

    def test_rejects_low_points(self):
        with pytest.raises(ValueError):
            eta(mpc(0, 0.1), 64)


class TestE4:
    def test_closed_form_at_i(self):
        with mpmath.workprec(BITS):
            expect = 3 * mpmath.gamma(mpf(1) / 4) ** 8 / (2 * mpmath.pi) ** 6
            assert close(e4(mpc(0, 1), BITS), expect, 170)

    def test_high_point(self):
        # E4(30i) - 1 is dominated by 240 e^{-60 pi} ~ 3.3e-80
        with mpmath.workprec(300):
            value = e4(mpc(0, 30), 300)
            lead = 240 * mpmath.exp(-60 * mpmath.pi)
            assert abs(value - 1) < mpf(10) ** -79
            assert abs(value - 1 - lead) < mpf(10) ** -85

    def test_periodic(self):
        with mpmath.workprec(BITS):
            tau = mpc(mpf(137) / 1000, mpf(61) / 100)
            shifted = tau + 1
        assert close(e4(shifted, BITS), e4(tau, BITS), 170)


class TestF:
    def test_q_expansion_at_10i(self):
        c = f_weakly_holomorphic_coeffs(3)
        with mpmath.workprec(BITS):
            q = mpmath.exp(-20 * mpmath.pi)
            series = sum(c[n] * q**n for n in range(-1, 4))
            assert abs(F_eval(mpc(0, 10), BITS) - series) < mpf(10) ** -30 * abs(series)

    def test_q_expansion_at_i(self):
        # |q| = e^{-2 pi}; 80 exact coefficients are far more than enough
        c = f_weakly_holomorphic_coeffs(80)
        with mpmath.workprec(BITS):
            q = mpmath.exp(-2 * mpmath.pi)
            series = mpmath.fsum(c[n] * q**n for n in range(-1, 81))
            assert close(F_eval(mpc(0, 1), BITS), series, 150)

    def test_periodic(self):
        with mpmath.workprec(BITS):
            tau = mpc(mpf(3) / 10, mpf(1) / 2)
            shifted = tau + 1
        assert close(F_eval(shifted, BITS), F_eval(tau, BITS), 170)

    def test_two_routes_for_n_equals_1(self):
        Q = QForm(1, 1, 6)
        A = assign_coset(Q)
        assert A.level6_form == QForm(6, 1, 1)
        with mpmath.workprec(BITS):
            direct = F_eval((-1 + mpc(0, 1) * mpmath.sqrt(23)) / 12, BITS)
        assert close(F_at_class(Q, A, BITS), direct, 150)

    def test_two_routes_where_direct_is_safe(self):
        checked = 0
        for n in range(1, 40):
            D = 1 - 24 * n
            for Q in reduced_primitive_forms(D):
                A = assign_coset(Q)
                L = A.level6_form
                if mpmath.sqrt(-D) / (2 * L.a) < 0.5:
                    continue
                via = F_at_class(Q, A, BITS)
                direct = F_eval(heegner_point(L, BITS + 16).tau, BITS)
                assert close(via, direct, BITS // 2), (n, Q)
                checked += 1
        assert checked > 20

    def test_identity_coset_is_direct_evaluation(self):
        Q = QForm(6, 1, 10)
        A = assign_coset(Q)
        assert A.cusp_class == "infinity"
        assert F_at_class(Q, A, BITS) == F_eval(heegner_point(Q, BITS + 16).tau, BITS)

    @pytest.mark.parametrize("coset", COSETS, ids=lambda c: f"{c.cusp_class}-{c.shift}")
    def test_leading_terms_at_each_cusp(self, coset):
        # +-F((z + shift')/h) = zeta e(-z/h) - 4 beta(h) + O(e^{-2 pi y / h})
        h = CUSP_WIDTH[coset.cusp_class]
        beta = 1 if h in (1, 2) else -1
        A = CosetAssignment(coset.gamma, coset.cusp_class, h, coset.shift, QForm(6, 1, 1))
        shift = coset.shift + 1 if coset.cusp_class == "one_third" else coset.shift
        with mpmath.workprec(BITS):
            z = mpc("0.37", 8)
            value = CUSP_SIGN[coset.cusp_class] * F_eval((z + shift) / h, BITS)
            zeta = mpmath.expjpi(mpf(A.zeta_exponent) / 3)
            lead = zeta * mpmath.expjpi(-2 * z / h) - 4 * beta
            bound = mpmath.exp(-2 * mpmath.pi * 8 / h) * mpmath.exp(4 * mpmath.pi)
            assert abs(value - lead) < bound


class TestTrace:
    @pytest.mark.parametrize("n", [1, 2, 3, 24, 47, 116])
    def test_agrees_with_series(self, n):
        res = trace_S(n)
        assert res.alpha_int == mock_theta_coeffs(n)[n]
        assert res.residual < mpf("1e-6")

    def test_class_count_and_signs(self):
        res = trace_S(24)
        assert len(res.per_class_terms) == hurwitz_class_number(-575)
        assert {(t.u, t.sign) for t in res.per_class_terms} == {(1, 1), (5, -1)}
        with mpmath.workprec(res.policy.working_bits + 16):
            acc = mpc(0)
            for t in res.per_class_terms:
                acc += t.value
        assert acc == res.S

    def test_leading_term_magnitude_at_n1(self):
        res = trace_S(1)
        term = next(t for t in res.per_class_terms if t.form == QForm(1, 1, 6))
        assert (term.assignment.cusp_class, term.assignment.shift) == ("zero", 1)
        scale = mpmath.exp(mpmath.pi * mpmath.sqrt(23) / 6)
        assert abs(abs(term.value) / scale - 1) < 0.05

    @pytest.mark.parametrize("n", range(6, 51))
    def test_exact_cancellation(self, n):
        res = trace_S(n)
        special = {QForm(1, 1, 6 * n), QForm(2, 1, 3 * n), QForm(3, 1, 2 * n), QForm(6, 1, n)}
        total = sum((t.value for t in res.per_class_terms if t.u == 1 and t.form in special), mpc(0))
        assert abs(total) / mpmath.exp(mpmath.pi * mpmath.sqrt(24 * n - 1) / 6) < 1e-3

    def test_subleading_identity(self):
        # |Im S / e^{l/2} - (-1)^n sqrt 6| shrinks block by block
        samples = []
        for n in range(20, 201, 20):
            res = trace_S(n)
            with mpmath.workprec(res.policy.working_bits):
                dev = abs(res.S.imag / mpmath.exp(l_of(n) / 2) - (-1) ** n * mpmath.sqrt(6))
            samples.append(dev)
        blocks = [max(samples[i:i + 2]) for i in range(0, len(samples), 2)]
        assert all(x > y for x, y in zip(blocks, blocks[1:]))

    def test_certification_failure(self):
        pol = PrecisionPolicy.for_n(5, residual_tol=mpf("1e-80"))
        with pytest.raises(CertificationError):
            trace_S(5, pol)
        assert trace_S(5, pol, certify=False).alpha_int == 3

    def test_policy_floor(self):
        need = PrecisionPolicy.for_n(50).working_bits
        with pytest.raises(ValueError):
            PrecisionPolicy.for_n(50, bits=need - 1)
        assert PrecisionPolicy.for_n(50, scale=2).working_bits == 2 * need

    def test_policy_tail_bounds(self):
        pol = PrecisionPolicy.for_n(100)
        absq = math.exp(-math.pi * math.sqrt(3) / 6)
        k = pol.e4_terms
        assert math.log2(480) + 4 * math.log2(k) + k * math.log2(absq) - math.log2(1 - absq) <= -pol.working_bits


class TestMainTerm:
    def test_n1(self):
        with mpmath.workprec(128):
            expect = mpmath.sqrt(6) / mpmath.sqrt(23) * mpmath.exp(mpmath.pi * mpmath.sqrt(23) / 12)
        assert close(main_term(1), expect, 120)
        assert abs(main_term(1) - mpf("1.792")) < 1e-3
        E1 = 1 - main_term(1)
        assert abs(E1 - mpf("-0.7926")) < 1e-4
        assert abs(E1) < error_term(1)

    def test_sign_alternates(self):
        assert all(main_term(n) * (-1) ** (n + 1) > 0 for n in range(1, 51))

    def test_q_exponent(self):
        L = math.log(23)
        assert abs(q_exponent(1) - L / abs(math.log(L) - 1.1714)) < 1e-12

    def test_bound_at_n1_is_large(self):
        assert error_term(1) > mpf(10) ** 25
