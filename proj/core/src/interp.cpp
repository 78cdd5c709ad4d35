#include "hypflow/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace hypflow {

MonotoneCubic::MonotoneCubic(double x0, double dx, std::span<const double> y)
    : x0_(x0), dx_(dx), y_(y.begin(), y.end()) {
    const size_t n = y_.size();
    if (n < 2 || !(dx > 0))
        throw std::invalid_argument("MonotoneCubic: need >= 2 samples and dx > 0");
    d_.resize(n);
    std::vector<double> s(n - 1); // secant slopes
    for (size_t i = 0; i + 1 < n; ++i) s[i] = (y_[i + 1] - y_[i]) / dx;
    d_[0] = s[0];
    d_[n - 1] = s[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0; // local extremum: flatten to preserve monotone pieces
        } else {
            // Harmonic mean of neighboring secants (Fritsch-Carlson region).
            d_[i] = 2.0 * s[i - 1] * s[i] / (s[i - 1] + s[i]);
        }
    }
    // Endpoint limiter: keep |d| <= 3|s| with matching sign.
    auto clamp_end = [](double& d, double sec) {
        if (sec == 0.0 || d * sec < 0.0)
            d = 0.0;
        else if (std::abs(d) > 3.0 * std::abs(sec))
            d = 3.0 * sec;
    };
    clamp_end(d_[0], s[0]);
    clamp_end(d_[n - 1], s[n - 2]);
}

double MonotoneCubic::operator()(double x) const {
    const size_t n = y_.size();
    const double t_all = (x - x0_) / dx_;
    if (t_all <= 0.0) return y_.front();
    if (t_all >= static_cast<double>(n - 1)) return y_.back();
    size_t i = static_cast<size_t>(t_all);
    if (i >= n - 1) i = n - 2;
    const double t = t_all - static_cast<double>(i);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y_[i] + h10 * dx_ * d_[i] + h01 * y_[i + 1] + h11 * dx_ * d_[i + 1];
}

} // namespace hypflow
