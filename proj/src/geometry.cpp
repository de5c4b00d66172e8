#include "flexagg/geometry.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_point.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <cmath>

namespace flexagg {

namespace bg = boost::geometry;

double convex_hull_area(std::span<const Point2> points) {
    if (points.size() < 3) return 0.0;
    using point = bg::model::d2::point_xy<double>;
    bg::model::multi_point<point> cloud;
    cloud.reserve(points.size());
    for (const auto& p : points) cloud.emplace_back(p.x, p.y);
    bg::model::polygon<point> hull;
    bg::convex_hull(cloud, hull);
    return std::abs(bg::area(hull));
}

}  // namespace flexagg
