#pragma once

// Matrix formulation of the same dynamics closed_form.hpp solves.
//
// The coherence column X = (rho12, rho21, alpha30) obeys
//
//   dX/dtau = eps * [A0 + A1(tau)] X,
//
// and a two-scale expansion in t1 = tau (fast) and t2 = eps*tau (slow) gives
//
//   X(tau) ~ [I + eps W(tau, eps tau)] e^{A0 eps tau} X(0)
//
// with the propagator e^{A0 t2} = Q diag(e^{i t2}, e^{-i t2}, 1) Q^{-1}
// evaluated by eigendecomposition.  This file keeps every matrix of that
// construction individually buildable, because the assembled result is used as
// an independent cross-check against the explicit trigonometric formulas.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rabi/core.hpp"

namespace rabi {

struct Matrix3C {
    // Row-major entries.
    std::array<complexd, 9> m{};

    complexd& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
    const complexd& operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

    static Matrix3C zero() { return {}; }

    static Matrix3C identity() {
        Matrix3C I;
        I(0, 0) = I(1, 1) = I(2, 2) = 1.0;
        return I;
    }
};

inline Matrix3C operator+(const Matrix3C& a, const Matrix3C& b) {
    Matrix3C r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

inline Matrix3C operator-(const Matrix3C& a, const Matrix3C& b) {
    Matrix3C r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

inline Matrix3C operator*(const complexd& s, const Matrix3C& a) {
    Matrix3C r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
    return r;
}

inline Matrix3C operator*(const Matrix3C& a, const Matrix3C& b) {
    Matrix3C r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

inline StateVector3 operator*(const Matrix3C& a, const StateVector3& v) {
    return {a(0, 0) * v.x1 + a(0, 1) * v.x2 + a(0, 2) * v.x3,
            a(1, 0) * v.x1 + a(1, 1) * v.x2 + a(1, 2) * v.x3,
            a(2, 0) * v.x1 + a(2, 1) * v.x2 + a(2, 2) * v.x3};
}

inline complexd det(const Matrix3C& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Closed-form 3x3 inverse, adjugate over determinant.
inline Matrix3C inverse(const Matrix3C& a) {
    const complexd d = det(a);
    if (std::abs(d) == 0.0) throw std::domain_error("inverse: singular 3x3 matrix");
    Matrix3C r;
    r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
    r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
    r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
    r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
    r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
    r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
    r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
    r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
    r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    return r;
}

inline Matrix3C commutator(const Matrix3C& a, const Matrix3C& b) { return a * b - b * a; }

inline double frobenius_norm(const Matrix3C& a) {
    double s = 0.0;
    for (const auto& e : a.m) s += std::norm(e);
    return std::sqrt(s);
}

inline double euclidean_norm(const StateVector3& v) {
    return std::sqrt(std::norm(v.x1) + std::norm(v.x2) + std::norm(v.x3));
}

// The named matrices of the two-scale construction.  A1, A2, A4 depend on the
// fast time t1; D's exponential, G1 and W on the slow time t2; the rest are
// constant.  Unused time arguments are ignored.
enum class MsMatrixId { A0, A1, A2, A3, A4, Q, Qinv, D, ExpD, B, G1, W, U };

inline MsMatrixId ms_matrix_id_from_string(std::string_view name) {
    if (name == "A0") return MsMatrixId::A0;
    if (name == "A1") return MsMatrixId::A1;
    if (name == "A2") return MsMatrixId::A2;
    if (name == "A3") return MsMatrixId::A3;
    if (name == "A4") return MsMatrixId::A4;
    if (name == "Q") return MsMatrixId::Q;
    if (name == "Qinv") return MsMatrixId::Qinv;
    if (name == "D") return MsMatrixId::D;
    if (name == "expD") return MsMatrixId::ExpD;
    if (name == "B") return MsMatrixId::B;
    if (name == "G1") return MsMatrixId::G1;
    if (name == "W") return MsMatrixId::W;
    if (name == "U") return MsMatrixId::U;
    throw std::invalid_argument("unknown matrix id '" + std::string(name) +
                                "' (expected one of A0 A1 A2 A3 A4 Q Qinv D expD B G1 W U)");
}

namespace detail {

inline const complexd kI{0.0, 1.0};

inline Matrix3C mat_A0() {
    Matrix3C a;
    a(0, 2) = kI * 0.5;
    a(1, 2) = -kI * 0.5;
    a(2, 0) = kI;
    a(2, 1) = -kI;
    return a;
}

inline Matrix3C mat_A1(double t1) {
    const complexd ep = std::exp(kI * t1);   // e^{+i t1}
    const complexd em = std::conj(ep);       // e^{-i t1}
    Matrix3C a;
    a(0, 2) = kI * 0.5 * em;
    a(1, 2) = -kI * 0.5 * ep;
    a(2, 0) = kI * ep;
    a(2, 1) = -kI * em;
    return a;
}

inline Matrix3C mat_A2(double t1) {
    const complexd ep = std::exp(kI * t1);
    const complexd em = std::conj(ep);
    Matrix3C a;
    a(0, 2) = -0.5 * em;
    a(1, 2) = -0.5 * ep;
    a(2, 0) = ep;
    a(2, 1) = em;
    return a;
}

inline Matrix3C mat_A3() {
    Matrix3C a;
    a(0, 0) = kI * 0.5;
    a(1, 1) = -kI * 0.5;
    return a;
}

inline Matrix3C mat_A4(double t1) {
    const complexd e2p = std::exp(kI * (2.0 * t1));
    Matrix3C a;
    a(0, 1) = -0.25 * std::conj(e2p);
    a(1, 0) = -0.25 * e2p;
    return a;
}

inline Matrix3C mat_Q() {
    Matrix3C q;
    q(0, 0) = 1.0;  q(0, 1) = -1.0; q(0, 2) = 1.0;
    q(1, 0) = -1.0; q(1, 1) = 1.0;  q(1, 2) = 1.0;
    q(2, 0) = 2.0;  q(2, 1) = 2.0;  q(2, 2) = 0.0;
    return q;
}

inline const Matrix3C& mat_Qinv() {
    static const Matrix3C qinv = inverse(mat_Q());
    return qinv;
}

inline Matrix3C mat_D() {
    Matrix3C d;
    d(0, 0) = kI;
    d(1, 1) = -kI;
    return d;
}

inline Matrix3C mat_expD(double t2) {
    Matrix3C e;
    e(0, 0) = std::exp(kI * t2);
    e(1, 1) = std::exp(-kI * t2);
    e(2, 2) = 1.0;
    return e;
}

inline Matrix3C mat_G1(double t2) {
    const double s = std::sin(t2);
    const double sh2 = std::sin(t2 / 2.0) * std::sin(t2 / 2.0);
    Matrix3C g;
    g(0, 0) = -kI * 0.5 * s;
    g(0, 2) = 0.5 * sh2;
    g(1, 1) = kI * 0.5 * s;
    g(1, 2) = 0.5 * sh2;
    g(2, 0) = sh2;
    g(2, 1) = sh2;
    return g;
}

inline Matrix3C mat_U() {
    Matrix3C u;
    u(0, 0) = 1.0; u(0, 1) = 1.0;
    u(1, 0) = -kI; u(1, 1) = kI;
    u(2, 2) = 1.0;
    return u;
}

}  // namespace detail

// Slow-time propagator e^{A0 t2} via the eigendecomposition A0 = Q D Q^{-1}.
inline Matrix3C expm_A0(double t2) {
    return detail::mat_Q() * detail::mat_expD(t2) * detail::mat_Qinv();
}

inline Matrix3C ms_matrix(MsMatrixId id, double t1 = 0.0, double t2 = 0.0) {
    using detail::mat_A2;
    switch (id) {
        case MsMatrixId::A0: return detail::mat_A0();
        case MsMatrixId::A1: return detail::mat_A1(t1);
        case MsMatrixId::A2: return mat_A2(t1);
        case MsMatrixId::A3: return detail::mat_A3();
        case MsMatrixId::A4: return detail::mat_A4(t1);
        case MsMatrixId::Q: return detail::mat_Q();
        case MsMatrixId::Qinv: return detail::mat_Qinv();
        case MsMatrixId::D: return detail::mat_D();
        case MsMatrixId::ExpD: return detail::mat_expD(t2);
        case MsMatrixId::B:
            return detail::mat_Qinv() *
                   (detail::mat_A3() - commutator(detail::mat_A0(), mat_A2(0.0))) * detail::mat_Q();
        case MsMatrixId::G1: return detail::mat_G1(t2);
        case MsMatrixId::W:
            // W(t1, t2) = G1(t2) e^{-A0 t2} + A2(t1) - A2(0); W(0,0) = 0.
            return detail::mat_G1(t2) * expm_A0(-t2) + mat_A2(t1) - mat_A2(0.0);
        case MsMatrixId::U: return detail::mat_U();
    }
    throw std::invalid_argument("ms_matrix: unknown matrix id");
}

// One-term (RWA) matrix propagation, X(tau) = Q e^{eps D tau} Q^{-1} X(0).
inline StateVector3 rwa_matrix_form(const StateVector3& x0, double eps, double tau) {
    return detail::mat_Q() * (detail::mat_expD(eps * tau) * (detail::mat_Qinv() * x0));
}

// Two-term matrix propagation, X(tau) = [I + eps W(tau, eps tau)] e^{A0 eps tau} X(0).
// Components (x1, x3) must reproduce ms2_density.
inline StateVector3 x1_matrix_form(const StateVector3& x0, double eps, double tau) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw std::invalid_argument("x1_matrix_form: eps must lie in (0,1), got " + std::to_string(eps));
    }
    const Matrix3C w = ms_matrix(MsMatrixId::W, tau, eps * tau);
    const Matrix3C prop = (Matrix3C::identity() + eps * w) * expm_A0(eps * tau);
    return prop * x0;
}

// First-order corrector Y1(t1, t2) = W(t1, t2) e^{A0 t2} X0.
inline StateVector3 y1_full(const StateVector3& x0, double t1, double t2) {
    return ms_matrix(MsMatrixId::W, t1, t2) * (expm_A0(t2) * x0);
}

// Residual of the O(1) secularity condition dY0/dt2 = A0 Y0 along
// Y0(0, t2) = e^{A0 t2} X0, with the slow derivative taken by central
// differences of step h.  Analytically zero, so what is measured is the
// O(h^2) finite-difference error.
inline double secular_residual_O1(const StateVector3& x0, double t2, double h = 1e-5) {
    const StateVector3 y0 = expm_A0(t2) * x0;
    const StateVector3 yp = expm_A0(t2 + h) * x0;
    const StateVector3 ym = expm_A0(t2 - h) * x0;
    const StateVector3 lhs = detail::mat_A0() * y0;
    const StateVector3 fd{(yp.x1 - ym.x1) / (2.0 * h), (yp.x2 - ym.x2) / (2.0 * h),
                          (yp.x3 - ym.x3) / (2.0 * h)};
    return euclidean_norm({lhs.x1 - fd.x1, lhs.x2 - fd.x2, lhs.x3 - fd.x3});
}

// Residual of the O(eps) secularity condition
// dY1/dt2 = A0 Y1 - ([A0, A2(0)] - A3) Y0 along Y1(0, t2) = G1(t2) X0.
inline double secular_residual_O2(const StateVector3& x0, double t2, double h = 1e-5) {
    const StateVector3 y0 = expm_A0(t2) * x0;
    const StateVector3 y1 = detail::mat_G1(t2) * x0;
    const StateVector3 yp = detail::mat_G1(t2 + h) * x0;
    const StateVector3 ym = detail::mat_G1(t2 - h) * x0;
    const StateVector3 dy1{(yp.x1 - ym.x1) / (2.0 * h), (yp.x2 - ym.x2) / (2.0 * h),
                           (yp.x3 - ym.x3) / (2.0 * h)};
    const Matrix3C k = commutator(detail::mat_A0(), detail::mat_A2(0.0)) - detail::mat_A3();
    const StateVector3 a = detail::mat_A0() * y1;
    const StateVector3 b = k * y0;
    return euclidean_norm({dy1.x1 - a.x1 + b.x1, dy1.x2 - a.x2 + b.x2, dy1.x3 - a.x3 + b.x3});
}

}  // namespace rabi
