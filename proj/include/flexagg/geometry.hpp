#pragma once

#include <span>

namespace flexagg {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Area of the convex hull; 0 for fewer than three points or collinear input.
double convex_hull_area(std::span<const Point2> points);

}  // namespace flexagg
