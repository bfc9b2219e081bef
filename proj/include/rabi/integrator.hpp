#pragma once

// Reference integration of the resonant optical Bloch equations
//
//   d alpha10/dtau =  eps * sin(tau) * alpha30
//   d alpha20/dtau =  eps * (1 + cos(tau)) * alpha30
//   d alpha30/dtau = -eps * [sin(tau) * alpha10 + (1 + cos(tau)) * alpha20]
//
// i.e. dr/dtau = -eps (xhat + w(tau)) x r.  The flow is a pure rotation, so
// |r| is conserved; how well the integrator keeps it is itself a useful check.
//
// The workhorse is classical fixed-step RK4 on the tau mesh the error sweeps
// are defined on.  A Dormand-Prince 5(4) adaptive run is kept alongside as an
// independent cross-check of the endpoint.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "rabi/closed_form.hpp"
#include "rabi/core.hpp"

namespace rabi {

struct IntegrationConfig {
    double dtau = 1e-3;          // mesh step
    double tau_max = 0.0;        // integrate over [0, tau_max]
    std::size_t sample_stride = 1;  // keep every n-th mesh point in the returned trajectory

    void validate() const {
        if (!(dtau > 0.0)) throw std::invalid_argument("IntegrationConfig: dtau must be positive");
        if (!(tau_max >= 0.0)) throw std::invalid_argument("IntegrationConfig: tau_max must be >= 0");
        if (sample_stride == 0) throw std::invalid_argument("IntegrationConfig: sample_stride must be >= 1");
    }
};

inline Vec3 bloch_rhs(double tau, const Vec3& r, double eps) {
    const double st = std::sin(tau);
    const double cp = 1.0 + std::cos(tau);
    return {eps * st * r.z, eps * cp * r.z, -eps * (st * r.x + cp * r.y)};
}

namespace detail {

inline Vec3 rk4_step(double tau, const Vec3& r, double h, double eps) {
    const Vec3 k1 = bloch_rhs(tau, r, eps);
    const Vec3 k2 = bloch_rhs(tau + h / 2.0, r + (h / 2.0) * k1, eps);
    const Vec3 k3 = bloch_rhs(tau + h / 2.0, r + (h / 2.0) * k2, eps);
    const Vec3 k4 = bloch_rhs(tau + h, r + h * k3, eps);
    return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline bool finite(const Vec3& r) {
    return std::isfinite(r.x) && std::isfinite(r.y) && std::isfinite(r.z);
}

}  // namespace detail

// Fixed-step RK4 over the mesh tau_k = k*dtau, with one shortened final step
// landing exactly on tau_max.  The callback sees every mesh point, tau = 0
// included, so sweeps can consume the trajectory without storing it.
template <typename Callback>
void integrate_stream(const Vec3& r0, double eps, const IntegrationConfig& cfg, Callback&& cb) {
    cfg.validate();
    if (!detail::finite(r0)) throw std::runtime_error("integrate: initial state is not finite");

    Vec3 r = r0;
    cb(0.0, r);

    // Full dtau steps stop one short of tau_max; the last step is shortened
    // (or stretched by at most rounding) so the mesh ends exactly on tau_max.
    auto n_full = static_cast<std::size_t>(cfg.tau_max / cfg.dtau);
    if (n_full > 0 && static_cast<double>(n_full) * cfg.dtau >= cfg.tau_max - 1e-12 * std::max(1.0, cfg.tau_max)) {
        --n_full;
    }
    for (std::size_t k = 0; k < n_full; ++k) {
        const double tau = static_cast<double>(k) * cfg.dtau;
        r = detail::rk4_step(tau, r, cfg.dtau, eps);
        if (!detail::finite(r)) {
            throw std::runtime_error("integrate: state became non-finite at step " + std::to_string(k + 1) +
                                     " (tau ~ " + std::to_string(tau + cfg.dtau) + ")");
        }
        cb(static_cast<double>(k + 1) * cfg.dtau, r);
    }

    const double reached = static_cast<double>(n_full) * cfg.dtau;
    const double rest = cfg.tau_max - reached;
    if (rest > 0.0) {
        r = detail::rk4_step(reached, r, rest, eps);
        if (!detail::finite(r)) {
            throw std::runtime_error("integrate: state became non-finite on the final step");
        }
        cb(cfg.tau_max, r);
    }
}

// Same integration, returning a stored trajectory sampled every
// cfg.sample_stride mesh points (first and last points always kept).
inline Trajectory integrate(const Vec3& r0, double eps, const IntegrationConfig& cfg) {
    Trajectory t;
    t.label = "exact";
    std::size_t k = 0;
    double last_tau = -1.0;
    integrate_stream(r0, eps, cfg, [&](double tau, const Vec3& r) {
        if (k % cfg.sample_stride == 0) {
            t.taus.push_back(tau);
            t.points.push_back(r);
            last_tau = tau;
        }
        ++k;
        if (tau == cfg.tau_max && last_tau != tau) {  // keep the endpoint regardless of stride
            t.taus.push_back(tau);
            t.points.push_back(r);
        }
    });
    return t;
}

// Endpoint of the same initial-value problem by an embedded Dormand-Prince
// 5(4) pair with standard proportional step control.  tol acts as both the
// absolute and relative tolerance.
inline Vec3 integrate_adaptive_check(const Vec3& r0, double eps, double tau_max, double tol) {
    if (!(tol >= 1e-12 && tol <= 1e-6)) {
        throw std::invalid_argument("integrate_adaptive_check: tol must lie in [1e-12, 1e-6]");
    }
    if (!(tau_max >= 0.0)) throw std::invalid_argument("integrate_adaptive_check: tau_max must be >= 0");

    // Dormand-Prince coefficients (the usual DOPRI5 tableau).
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    Vec3 r = r0;
    double tau = 0.0;
    double h = std::min(0.1, tau_max > 0.0 ? tau_max : 0.1);

    while (tau < tau_max) {
        if (h < 1e-12) {
            throw std::runtime_error("integrate_adaptive_check: step size underflow at tau = " +
                                     std::to_string(tau));
        }
        if (tau + h > tau_max) h = tau_max - tau;

        const Vec3 k1 = bloch_rhs(tau, r, eps);
        const Vec3 k2 = bloch_rhs(tau + c2 * h, r + h * (a21 * k1), eps);
        const Vec3 k3 = bloch_rhs(tau + c3 * h, r + h * (a31 * k1 + a32 * k2), eps);
        const Vec3 k4 = bloch_rhs(tau + c4 * h, r + h * (a41 * k1 + a42 * k2 + a43 * k3), eps);
        const Vec3 k5 = bloch_rhs(tau + c5 * h, r + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), eps);
        const Vec3 k6 = bloch_rhs(tau + h, r + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), eps);
        const Vec3 r5 = r + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec3 k7 = bloch_rhs(tau + h, r5, eps);

        const Vec3 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = tol + tol * std::max(norm(r), norm(r5));
        const double en = norm(err) / scale;

        if (!detail::finite(r5)) {
            throw std::runtime_error("integrate_adaptive_check: state became non-finite at tau = " +
                                     std::to_string(tau));
        }

        if (en <= 1.0) {
            tau += h;
            r = r5;
        }
        const double grow = 0.9 * std::pow(en > 0.0 ? 1.0 / en : 1e8, 0.2);
        h *= std::min(5.0, std::max(0.2, grow));
    }
    return r;
}

}  // namespace rabi
