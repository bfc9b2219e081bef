#pragma once

// The two-term solution is accurate but not exactly trace-preserving in the
// quadratic invariant: the coherence length grows like
//
//   |r(tau)|^2 = |r0|^2 + eps^2 (|E1|^2 + |E2|^2),
//
// so a propagated pure state drifts slightly outside the unit sphere.  The
// repair step projects it back: radial normalization for pure states, and a
// convex recombination of normalized pure branches for mixed ones.  The
// normalized solution is never less accurate than the raw one in practice and
// restores exact purity by construction.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/closed_form.hpp"
#include "rabi/core.hpp"

namespace rabi {

// Radial projection onto the unit sphere: (rho12, alpha30) / N with
// N = sqrt(alpha30^2 + 4 |rho12|^2).  The completely mixed state (N = 0) has
// no direction to project along and is rejected.
inline DensityState normalize_pure(const DensityState& d) {
    const double n = coherence_norm(d);
    if (n == 0.0) {
        throw std::domain_error("normalize_pure: coherence vector vanishes (completely mixed state)");
    }
    return {d.rho12 / n, d.alpha30 / n};
}

// Two-term propagation of a pure state followed by renormalization.  The
// input must be pure (up to the decomposition tolerance below).
inline DensityState evolve_pure_normalized(const DensityState& d0, double eps, double tau) {
    const double n0 = coherence_norm(d0);
    if (std::abs(n0 - 1.0) > 1e-10) {
        throw std::invalid_argument("evolve_pure_normalized: initial state is not pure (|r0| = " +
                                    std::to_string(n0) + ")");
    }
    return normalize_pure(ms2_density(d0, eps, tau));
}

// Convex mixture of pure states: rho = sum_k weights[k] * components[k].
struct PureDecomposition {
    std::vector<double> weights;
    std::vector<DensityState> components;

    void validate() const {
        if (weights.size() != components.size() || weights.empty()) {
            throw std::invalid_argument("PureDecomposition: need matching, nonempty weights/components");
        }
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0 && w <= 1.0)) {
                throw std::invalid_argument("PureDecomposition: weights must lie in [0,1]");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument("PureDecomposition: weights must sum to 1, got " + std::to_string(sum));
        }
        for (const auto& c : components) {
            if (std::abs(coherence_norm(c) - 1.0) > 1e-10) {
                throw std::invalid_argument("PureDecomposition: components must be pure states");
            }
        }
    }

    // Spectral decomposition of a density state into two antipodal pure
    // states with weights (1 +- |r|)/2.  For the completely mixed state the
    // eigenbasis is arbitrary; this picks the computational (z) axis.
    static PureDecomposition eigen_decomposition(const DensityState& d) {
        const double n = coherence_norm(d);
        if (n > 1.0 + kPurityTol) {
            throw std::invalid_argument("eigen_decomposition: |r| > 1, not a density state");
        }
        DensityState up{complexd{0.0, 0.0}, 1.0};
        DensityState down{complexd{0.0, 0.0}, -1.0};
        if (n > 0.0) {
            up = {d.rho12 / n, d.alpha30 / n};
            down = {-d.rho12 / n, -d.alpha30 / n};
        }
        return {{0.5 * (1.0 + n), 0.5 * (1.0 - n)}, {up, down}};
    }
};

// Mixed-state propagation: evolve each pure branch with the normalized
// two-term solution and recombine with the original weights.
inline DensityState evolve_mixed(const PureDecomposition& mix, double eps, double tau) {
    mix.validate();
    DensityState out{complexd{0.0, 0.0}, 0.0};
    for (std::size_t k = 0; k < mix.weights.size(); ++k) {
        const DensityState b = evolve_pure_normalized(mix.components[k], eps, tau);
        out.rho12 += mix.weights[k] * b.rho12;
        out.alpha30 += mix.weights[k] * b.alpha30;
    }
    return out;
}

namespace detail {

// The O(eps) matrix-element corrections whose magnitudes control the norm
// growth of the two-term solution.
inline void norm_growth_terms(const DensityState& d0, double eps, double tau, complexd& e1, double& e2) {
    const double u = d0.rho12.real();
    const double v = d0.rho12.imag();
    const double z0 = d0.alpha30;

    const double ch = std::cos(eps * tau / 2.0);
    const double C = std::cos(eps * tau), S = std::sin(eps * tau);
    const double ct = std::cos(tau), st = std::sin(tau);
    const complexd efast{ct, -st};  // e^{-i tau}
    const complexd i{0.0, 1.0};

    e1 = S * (2.0 * efast - 1.0) * v - i * S * u + z0 * (ch * ch - efast * C);
    e2 = 2.0 * (ch * ch - ct) * u + S * st * z0 + 2.0 * C * st * v;
}

}  // namespace detail

// Squared coherence length of the two-term solution, from the closed-form
// growth law rather than from the propagated state itself.  Never smaller
// than |r0|^2.
inline double ms_norm_sq(const DensityState& d0, double eps, double tau) {
    complexd e1;
    double e2 = 0.0;
    detail::norm_growth_terms(d0, eps, tau, e1, e2);
    const double r0sq = d0.alpha30 * d0.alpha30 + 4.0 * std::norm(d0.rho12);
    return r0sq + eps * eps * (std::norm(e1) + e2 * e2);
}

}  // namespace rabi
