#include "hypflow/coords.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypflow {

PointZ x_to_z(const PointX& p) {
    if (!(p.x1 > 0))
        throw std::domain_error("x_to_z: x1 must be > 0, got " + std::to_string(p.x1));
    if (!(p.x2 > 0))
        throw std::domain_error("x_to_z: x2 must be > 0, got " + std::to_string(p.x2));
    return {std::log(p.x1 * p.x2), std::log(p.x2 / p.x1)};
}

PointX z_to_x(const PointZ& p) {
    // exp overflows past ~709.78; reject rather than return inf.
    constexpr double exp_max = 709.7;
    const double a = 0.5 * (p.z1 - p.z2); // log x1
    const double b = 0.5 * (p.z1 + p.z2); // log x2
    if (!(a < exp_max) || !(b < exp_max))
        throw std::range_error("z_to_x: coordinates overflow the double range");
    return {std::exp(a), std::exp(b)};
}

SupportStrip SupportStrip::from_box(double x1_min, double x1_max, double x2_max) {
    if (!(x1_min > 0) || !(x1_max >= x1_min) || !(x2_max > 0))
        throw std::domain_error("SupportStrip::from_box: need 0 < x1_min <= x1_max and x2_max > 0");
    SupportStrip s;
    s.x1_min = x1_min;
    s.x1_max = x1_max;
    s.x2_max = x2_max;
    s.delta0 = x1_min;
    s.z1_max = std::log(x1_max * x2_max);
    // z1 - z2 = 2 log x1 >= 2 log x1_min and z1 + z2 = 2 log x2 <= 2 log x2_max,
    // so the minimal half-strip constant covering the box (and z1_max <= K) is:
    s.K = std::max({-2.0 * std::log(x1_min), 2.0 * std::log(x2_max), s.z1_max});
    if (!(s.K > 0)) s.K = 1.0; // degenerate boxes (e.g. [1,1]x(0,1]); keep K positive
    return s;
}

bool SupportStrip::contains(const PointZ& z) const {
    return z.z1 - z.z2 >= -K && z.z1 + z.z2 <= K && z.z1 <= z1_max;
}

bool SupportStrip::section(double z1, double& lo, double& hi) const {
    lo = z1 - 2.0 * std::log(x1_max);
    hi = std::min(z1 - 2.0 * std::log(x1_min), 2.0 * std::log(x2_max) - z1);
    return lo <= hi;
}

} // namespace hypflow
