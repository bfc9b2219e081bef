#pragma once

// Not-a-knot cubic spline interpolation, used to draw smooth error curves
// through the swept epsilon knots.  "Not-a-knot" makes the third derivative
// continuous across the second and next-to-last knots, which is what lets the
// spline reproduce a single cubic exactly; that property doubles as its test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabi {

class CubicSpline {
  public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        if (n < 4 || y_.size() != n) {
            throw std::invalid_argument("CubicSpline: need at least 4 knots and matching y values");
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(x_[i + 1] > x_[i])) {
                throw std::invalid_argument("CubicSpline: knot abscissae must be strictly increasing");
            }
        }

        // Second derivatives M_i from the C2 conditions on interior knots plus
        // the two not-a-knot end rows; small dense solve, the curves here have
        // at most a few dozen knots.
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
        a[0][0] = -h[1];
        a[0][1] = h[0] + h[1];
        a[0][2] = -h[0];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            a[i][i - 1] = h[i - 1];
            a[i][i] = 2.0 * (h[i - 1] + h[i]);
            a[i][i + 1] = h[i];
            a[i][n] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
        }
        a[n - 1][n - 3] = -h[n - 2];
        a[n - 1][n - 2] = h[n - 3] + h[n - 2];
        a[n - 1][n - 1] = -h[n - 3];

        // Gaussian elimination with partial pivoting.
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r) {
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            }
            if (a[piv][col] == 0.0) throw std::runtime_error("CubicSpline: singular interpolation system");
            std::swap(a[col], a[piv]);
            for (std::size_t r = col + 1; r < n; ++r) {
                const double f = a[r][col] / a[col][col];
                if (f == 0.0) continue;
                for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
            }
        }
        m_.assign(n, 0.0);
        for (std::size_t i = n; i-- > 0;) {
            double s = a[i][n];
            for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * m_[c];
            m_[i] = s / a[i][i];
        }
    }

    // Evaluate; x must lie inside the knot range (the spline is an
    // interpolant, not an extrapolant).
    double operator()(double x) const {
        if (!(x >= x_.front() && x <= x_.back())) {
            throw std::out_of_range("CubicSpline: x = " + std::to_string(x) + " outside knot range [" +
                                    std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
        }
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        if (i + 1 >= x_.size()) i = x_.size() - 2;

        const double hi = x_[i + 1] - x_[i];
        const double t = x - x_[i];
        const double b = (y_[i + 1] - y_[i]) / hi - hi * (2.0 * m_[i] + m_[i + 1]) / 6.0;
        const double d = (m_[i + 1] - m_[i]) / (6.0 * hi);
        return y_[i] + t * (b + t * (0.5 * m_[i] + t * d));
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::size_t knot_count() const { return x_.size(); }
    const std::vector<double>& knots() const { return x_; }

    // Piecewise second derivative at the knots; exposed because third-
    // derivative continuity across the outer interior knots is the defining
    // end condition and worth asserting directly.
    const std::vector<double>& second_derivatives() const { return m_; }

  private:
    std::vector<double> x_, y_;
    std::vector<double> m_;
};

}  // namespace rabi
