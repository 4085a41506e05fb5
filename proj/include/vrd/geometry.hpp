#pragma once

#include <cmath>
#include <cstdlib>

#include "vrd/model.hpp"

namespace vrd {

inline double manhattan(Point a, Point b) {
    return static_cast<double>(std::llabs(a.x - b.x) + std::llabs(a.y - b.y));
}

inline double euclidean(Point a, Point b) {
    const double dx = static_cast<double>(a.x - b.x);
    const double dy = static_cast<double>(a.y - b.y);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace vrd
