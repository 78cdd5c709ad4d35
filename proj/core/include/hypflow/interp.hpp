#pragma once

// Monotone cubic (Fritsch-Carlson) interpolation on a uniform grid.  Used to
// read the phase and memory profiles off-grid; monotone data yields a
// monotone interpolant, so interpolated phases inherit the profile's
// monotonicity in z1.  Evaluation outside the grid clamps to the edge values
// (the profiles are flat beyond the support's influence).

#include <span>
#include <vector>

namespace hypflow {

class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(double x0, double dx, std::span<const double> y);

    double operator()(double x) const;

private:
    double x0_ = 0.0, dx_ = 1.0;
    std::vector<double> y_;
    std::vector<double> d_; // node derivatives after the monotone limiter
};

} // namespace hypflow
