#pragma once

// Core state types for a resonantly driven two-level system.
//
// Everything below works in nondimensional variables: the coupling ratio
// eps = Omega0 / (2*omega1) and the scaled time tau = 2*omega1*t.  Dimensional
// angular frequencies enter only through ModelParams, i.e. at the tool boundary.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace rabi {

using complexd = std::complex<double>;

// Classification tolerance for "pure" / "physical" checks on density states.
inline constexpr double kPurityTol = 1e-12;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm_sq(const Vec3& a) { return a.x * a.x + a.y * a.y + a.z * a.z; }
inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (n == 0.0) throw std::domain_error("normalized: zero vector has no direction");
    return (1.0 / n) * a;
}

// Coherence vector of the interaction-picture density matrix.  Components are
// (alpha10, alpha20, alpha30) = (2 Re rho12, 2 Im rho12, rho22 - rho11); pure
// states sit on the unit sphere, mixed states strictly inside.
using BlochVector = Vec3;

// Minimal parametrization of a 2x2 density matrix: the off-diagonal element
// and the population inversion.  rho11 = (1 - alpha30)/2, rho22 = (1 + alpha30)/2.
struct DensityState {
    complexd rho12{0.0, 0.0};
    double alpha30 = 0.0;
};

struct SphericalAngles {
    double theta = 0.0;  // polar, [0, pi]
    double phi = 0.0;    // azimuthal, [0, 2*pi)
};

// Coherence column (x1, x2, x3) = (rho12, rho21, alpha30) used by the matrix
// formulation.  x2 = conj(x1) and Im x3 = 0 whenever it encodes a density state.
struct StateVector3 {
    complexd x1{0.0, 0.0};
    complexd x2{0.0, 0.0};
    complexd x3{0.0, 0.0};
};

inline BlochVector bloch_from_density(const DensityState& d) {
    return {2.0 * d.rho12.real(), 2.0 * d.rho12.imag(), d.alpha30};
}

inline DensityState density_from_bloch(const BlochVector& r) {
    return {complexd{r.x / 2.0, r.y / 2.0}, r.z};
}

// Unit Bloch vector for the pure state cos(theta/2)|1> + e^{i phi} sin(theta/2)|2>.
inline BlochVector bloch_from_angles(const SphericalAngles& a) {
    if (!(a.theta >= 0.0 && a.theta <= std::numbers::pi) ||
        !(a.phi >= 0.0 && a.phi < 2.0 * std::numbers::pi)) {
        throw std::invalid_argument("bloch_from_angles: need theta in [0,pi], phi in [0,2*pi), got theta=" +
                                    std::to_string(a.theta) + " phi=" + std::to_string(a.phi));
    }
    const double st = std::sin(a.theta);
    return {st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta)};
}

// |r| of the coherence vector, computed from the density parametrization.
inline double coherence_norm(const DensityState& d) {
    return std::sqrt(d.alpha30 * d.alpha30 + 4.0 * std::norm(d.rho12));
}

// Eigenvalues of the 2x2 density matrix, (p_plus, p_minus).  They depend on the
// state only through |r|: p_pm = (1 pm |r|)/2.
inline std::pair<double, double> purity_eigenvalues(const DensityState& d) {
    const double n = coherence_norm(d);
    return {0.5 + 0.5 * n, 0.5 - 0.5 * n};
}

inline bool is_physical(const DensityState& d, double tol = kPurityTol) {
    return coherence_norm(d) <= 1.0 + tol;
}

inline bool is_pure(const DensityState& d, double tol = kPurityTol) {
    return std::abs(coherence_norm(d) - 1.0) <= tol;
}

inline StateVector3 state_vector(const DensityState& d) {
    return {d.rho12, std::conj(d.rho12), complexd{d.alpha30, 0.0}};
}

// Inverse of state_vector; x2 and Im x3 are redundant and dropped.
inline DensityState density_from_state_vector(const StateVector3& v) {
    return {v.x1, v.x3.real()};
}

// Drive/transition parameters.  epsilon = Omega0/(2*omega1) is the only number
// the dynamics depends on; the angular frequencies are kept (when known) so the
// tool layer can convert between lab time and tau.
struct ModelParams {
    double epsilon = 0.0;
    std::optional<double> omega1;  // transition angular frequency, rad/s
    std::optional<double> Omega0;  // Rabi angular frequency, rad/s

    static ModelParams from_epsilon(double eps) {
        require_epsilon(eps);
        return {eps, std::nullopt, std::nullopt};
    }

    static ModelParams from_frequencies(double omega1, double Omega0) {
        if (!(omega1 > 0.0) || !(Omega0 > 0.0)) {
            throw std::invalid_argument("ModelParams: angular frequencies must be positive");
        }
        const double eps = Omega0 / (2.0 * omega1);
        require_epsilon(eps);
        return {eps, omega1, Omega0};
    }

    double tau_from_time(double t) const { return 2.0 * require_omega1() * t; }
    double time_from_tau(double tau) const { return tau / (2.0 * require_omega1()); }

  private:
    static void require_epsilon(double eps) {
        if (!(eps > 0.0) || !(eps < 1.0)) {
            throw std::invalid_argument("ModelParams: epsilon must lie in (0,1), got " + std::to_string(eps));
        }
    }
    double require_omega1() const {
        if (!omega1) throw std::logic_error("ModelParams: no dimensional frequency attached");
        return *omega1;
    }
};

}  // namespace rabi
