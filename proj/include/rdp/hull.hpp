#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace rdp {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Triangle of the hull boundary; vertices counter-clockwise seen from outside.
struct HullFacet {
    std::array<std::size_t, 3> v{};
    /// Unit outward normal and offset: normal . p = offset on the facet plane.
    Point3 normal;
    double offset = 0.0;
};

/// 3-D convex hull by quickhull. Points within eps of a facet plane are treated
/// as lying on it. Throws InputError if the points are (nearly) coplanar.
std::vector<HullFacet> convex_hull_3d(const std::vector<Point3>& pts, double eps = 1e-12);

} // namespace rdp
