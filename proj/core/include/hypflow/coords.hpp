#pragma once

// Coordinate maps between the open first quadrant of the (x1,x2) plane and
// the logarithmic coordinates
//
//     z1 = log(x1*x2),   z2 = log(x2/x1),
//
// under which hyperbolas x1*x2 = const become vertical lines and transport
// along hyperbolas becomes vertical translation.  The inverse map is
// x1 = exp((z1-z2)/2), x2 = exp((z1+z2)/2), defined on all of R^2.

#include <string>

namespace hypflow {

struct PointX {
    double x1; // horizontal coordinate, must stay > 0
    double x2; // vertical coordinate
};

struct PointZ {
    double z1; // log(x1*x2)
    double z2; // log(x2/x1)
};

// Forward map. Throws std::domain_error naming the offending field when a
// coordinate is not strictly positive (boundary points have no z-image).
PointZ x_to_z(const PointX& p);

// Inverse map, defined for all finite z. Throws std::range_error when the
// result would overflow the double range.
PointX z_to_x(const PointZ& p);

// Geometry of the support of the initial data in z-coordinates.  For data
// supported in the box [x1_min, x1_max] x [0, x2_max] the z-image lies in the
// half-strip { -K <= z1 - z2, z1 + z2 <= K } and left of z1_max_strip.
struct SupportStrip {
    double K = 0;       // half-strip constant, > 0
    double z1_max = 0;  // right edge of the support in z1 (= log(x1_max*x2_max))
    double delta0 = 0;  // minimal x1 over the support box, > 0
    double x1_min = 0;  // support box [x1_min, x1_max] x [0, x2_max]
    double x1_max = 0;
    double x2_max = 0;

    // Smallest admissible strip for the given box.
    static SupportStrip from_box(double x1_min, double x1_max, double x2_max);

    // True when z satisfies the half-strip inequalities and z1 <= z1_max.
    bool contains(const PointZ& z) const;

    // z2-interval of the box image on the vertical line z1 (the section that
    // all z2-integrals run over). Returns false when the line misses the box
    // (z1 > z1_max); otherwise lo/hi bound the section:
    //   lo = z1 - 2 log x1_max,  hi = min(z1 - 2 log x1_min, 2 log x2_max - z1).
    bool section(double z1, double& lo, double& hi) const;
};

} // namespace hypflow
