#pragma once

// Closed-form solutions of the resonant optical Bloch equations
//
//   dr/dtau = -eps * (xhat + w(tau)) x r,   w(tau) = (cos tau, -sin tau, 0),
//
// at two levels of approximation:
//
//   rwa_*  -- rotating-wave approximation: drop w(tau) entirely.  r precesses
//             about xhat with angular speed eps, i.e. one term of a
//             multiple-scales expansion in the slow time eps*tau.
//   ms2_*  -- two-term multiple-scales solution: keeps the counterrotating
//             term to first order in eps, which adds the fast nutation that
//             the RWA misses and costs no extra structure to evaluate.
//
// All formulas are exact trigonometric expressions in (eps, tau); nothing here
// integrates anything.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/core.hpp"

namespace rabi {

// A sampled Bloch-vector curve.  label identifies how it was produced:
// "exact" (numerical integration), "rwa", "ms2" or "ms2n" (normalized ms2).
struct Trajectory {
    std::vector<double> taus;
    std::vector<Vec3> points;
    std::string label;
};

namespace detail {

inline void require_ms_epsilon(double eps, const char* who) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw std::invalid_argument(std::string(who) + ": eps must lie in (0,1), got " + std::to_string(eps));
    }
}

}  // namespace detail

// One-term (RWA) propagation of a Bloch vector: rotation about xhat by the
// slow angle eps*tau.
inline Vec3 rwa_bloch(const Vec3& r0, double eps, double tau) {
    const double c = std::cos(eps * tau);
    const double s = std::sin(eps * tau);
    return {r0.x, c * r0.y + s * r0.z, -s * r0.y + c * r0.z};
}

// Same propagation on the density parametrization.  alpha30 is assembled from
// real terms only, so the populations stay exactly real.
inline DensityState rwa_density(const DensityState& d0, double eps, double tau) {
    const double ch = std::cos(eps * tau / 2.0);
    const double sh = std::sin(eps * tau / 2.0);
    const double C = std::cos(eps * tau);
    const double S = std::sin(eps * tau);
    const complexd r12 = d0.rho12 * (ch * ch) + std::conj(d0.rho12) * (sh * sh) +
                         complexd{0.0, 0.5} * (d0.alpha30 * S);
    const double a30 = -2.0 * d0.rho12.imag() * S + d0.alpha30 * C;
    return {r12, a30};
}

// Two-term multiple-scales propagation of the density parametrization.  The
// O(eps) pieces carry the fast phases e^{-i tau}; everything multiplying
// alpha30 in the populations is combined into explicitly real form.
inline DensityState ms2_density(const DensityState& d0, double eps, double tau) {
    detail::require_ms_epsilon(eps, "ms2_density");
    const double u = d0.rho12.real();
    const double v = d0.rho12.imag();
    const double z0 = d0.alpha30;

    const double ch = std::cos(eps * tau / 2.0), sh = std::sin(eps * tau / 2.0);
    const double C = std::cos(eps * tau), S = std::sin(eps * tau);
    const double ct = std::cos(tau), st = std::sin(tau);
    const complexd efast{ct, -st};  // e^{-i tau}
    const complexd i{0.0, 1.0};

    const complexd r12 = d0.rho12 * (ch * ch - i * (eps / 2.0) * efast * S) +
                         std::conj(d0.rho12) * (sh * sh - i * (eps / 2.0) * S * (1.0 - efast)) +
                         z0 * (i * 0.5 * S + (eps / 2.0) * (ch * ch - efast * C));

    // alpha30: the rho12(0) and conj(rho12(0)) terms collapse to
    // -eps * [u*(1 - 2 cos tau + C) + 2 v C sin tau] on top of the RWA part.
    const double a30 = -2.0 * v * S + z0 * (C - eps * S * st) -
                       eps * (u * (1.0 - 2.0 * ct + C) + 2.0 * v * C * st);

    return {r12, a30};
}

// Rotation geometry of the Bloch equation written as dr/dtau = q * Qhat x r.
// At tau = pi (mod 2*pi) the counterrotating drive cancels the static part,
// the instantaneous rotation axis is undefined and `axis` is left empty; the
// rate q = -eps*|xhat + w| is still fine (it vanishes there).
struct GeometricFrame {
    Vec3 w_hat;                 // counterrotating drive direction, unit
    Vec3 w2_hat;                // slow tilt axis, unit
    Vec3 w3;                    // first-order displacement generator
    std::optional<Vec3> axis;   // Qhat, unit; empty exactly at the singular phases
    double q = 0.0;             // signed rotation rate, always <= 0
};

inline GeometricFrame geometric_frame(double eps, double tau) {
    const double ct = std::cos(tau), st = std::sin(tau);
    const double ch = std::cos(eps * tau / 2.0), sh = std::sin(eps * tau / 2.0);

    GeometricFrame f;
    f.w_hat = {ct, -st, 0.0};
    f.w2_hat = {0.0, sh, ch};
    // w3 = integral_0^tau w dtau' + sin(eps tau/2) * w2_hat, expanded.
    f.w3 = {st, ct - ch * ch, sh * ch};

    const Vec3 a{1.0 + ct, -st, 0.0};  // xhat + w
    const double n = norm(a);
    f.q = -eps * n;
    if (n > 1e-12) f.axis = (1.0 / n) * a;
    return f;
}

// Two-term solution in Bloch form: the RWA rotation plus the first-order
// displacement, r = r_RWA - eps * w3 x r_RWA.  Agrees with ms2_density
// through the Bloch map to rounding.
inline Vec3 ms2_bloch(const Vec3& r0, double eps, double tau) {
    detail::require_ms_epsilon(eps, "ms2_bloch");
    const Vec3 rw = rwa_bloch(r0, eps, tau);
    const double ct = std::cos(tau), st = std::sin(tau);
    const double ch = std::cos(eps * tau / 2.0), sh = std::sin(eps * tau / 2.0);
    const Vec3 w3{st, ct - ch * ch, sh * ch};
    return rw - eps * cross(w3, rw);
}

// Magnitudes of the matrix-element differences between the two-term solution
// and the RWA, evaluated from the explicit O(eps) difference terms (not by
// subtracting the two solutions).  For any physical initial state
// d_rho12 <= 2*eps and d_alpha30 <= 4*eps for all tau.
struct RwaDeviation {
    double d_rho12 = 0.0;
    double d_alpha30 = 0.0;
};

inline RwaDeviation rwa_deviation(const DensityState& d0, double eps, double tau) {
    const double u = d0.rho12.real();
    const double v = d0.rho12.imag();
    const double z0 = d0.alpha30;

    const double ch = std::cos(eps * tau / 2.0);
    const double C = std::cos(eps * tau), S = std::sin(eps * tau);
    const double ct = std::cos(tau), st = std::sin(tau);
    const complexd efast{ct, -st};
    const complexd i{0.0, 1.0};

    const complexd d12 = z0 * (eps / 2.0) * (ch * ch - efast * C) -
                         d0.rho12 * (i * (eps / 2.0) * efast * S) -
                         std::conj(d0.rho12) * (i * (eps / 2.0) * S * (1.0 - efast));

    const double d30 = -eps * (z0 * S * st + u * (1.0 - 2.0 * ct + C) + 2.0 * v * C * st);

    return {std::abs(d12), std::abs(d30)};
}

// Upper-level population for a system started in the ground state,
// p2(tau) = sin^2(eps tau/2) + (eps/2) sin(eps tau) sin(tau).  The O(eps)
// correction can push the expression slightly outside [0,1]; `value` is the
// clipped number and `clamped` says whether clipping happened.
struct ExcitedPopulation {
    double value = 0.0;
    double raw = 0.0;
    bool clamped = false;
};

inline ExcitedPopulation excited_population_ground_start(double eps, double tau) {
    detail::require_ms_epsilon(eps, "excited_population_ground_start");
    const double sh = std::sin(eps * tau / 2.0);
    const double p = sh * sh + (eps / 2.0) * std::sin(eps * tau) * std::sin(tau);
    ExcitedPopulation out;
    out.raw = p;
    out.value = std::min(1.0, std::max(0.0, p));
    out.clamped = (out.value != p);
    return out;
}

// Closed-form curves sampled on a given tau grid, for plotting next to the
// numerically integrated one.
inline Trajectory sample_rwa(const Vec3& r0, double eps, std::span<const double> taus) {
    Trajectory t;
    t.label = "rwa";
    t.taus.assign(taus.begin(), taus.end());
    t.points.reserve(taus.size());
    for (double tau : taus) t.points.push_back(rwa_bloch(r0, eps, tau));
    return t;
}

inline Trajectory sample_ms2(const Vec3& r0, double eps, std::span<const double> taus) {
    Trajectory t;
    t.label = "ms2";
    t.taus.assign(taus.begin(), taus.end());
    t.points.reserve(taus.size());
    for (double tau : taus) t.points.push_back(ms2_bloch(r0, eps, tau));
    return t;
}

// ms2 renormalized to the initial coherence length.  For a pure start this is
// the radial projection back onto the unit sphere.
inline Trajectory sample_ms2_normalized(const Vec3& r0, double eps, std::span<const double> taus) {
    Trajectory t;
    t.label = "ms2n";
    t.taus.assign(taus.begin(), taus.end());
    t.points.reserve(taus.size());
    const double n0 = norm(r0);
    for (double tau : taus) t.points.push_back(n0 * normalized(ms2_bloch(r0, eps, tau)));
    return t;
}

}  // namespace rabi
