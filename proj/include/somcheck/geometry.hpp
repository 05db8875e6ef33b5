#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

namespace somcheck {

enum class Axis { Horizontal, Vertical };

/// Pixel rectangle in screen coordinates, origin top-left, x1<=x2, y1<=y2.
struct Bounds {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    int width() const { return x2 - x1; }
    int height() const { return y2 - y1; }

    bool valid() const { return x1 <= x2 && y1 <= y2 && x1 >= 0 && y1 >= 0; }

    /// Swaps flipped edges; real hierarchy dumps occasionally contain them.
    Bounds normalized() const {
        Bounds b = *this;
        if (b.x1 > b.x2) std::swap(b.x1, b.x2);
        if (b.y1 > b.y2) std::swap(b.y1, b.y2);
        return b;
    }

    std::pair<double, double> center() const {
        return {(x1 + x2) / 2.0, (y1 + y2) / 2.0};
    }

    bool intersects(const Bounds& o) const {
        return x1 < o.x2 && o.x1 < x2 && y1 < o.y2 && o.y1 < y2;
    }

    Bounds translated(int dx, int dy) const {
        return {x1 + dx, y1 + dy, x2 + dx, y2 + dy};
    }

    bool operator==(const Bounds& o) const = default;
};

inline std::int64_t area(const Bounds& b) {
    return static_cast<std::int64_t>(b.width()) * b.height();
}

inline std::int64_t intersection_area(const Bounds& a, const Bounds& b) {
    const int w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const int h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (w <= 0 || h <= 0) return 0;
    return static_cast<std::int64_t>(w) * h;
}

inline double center_distance(const Bounds& a, const Bounds& b) {
    const auto [ax, ay] = a.center();
    const auto [bx, by] = b.center();
    return std::hypot(ax - bx, ay - by);
}

/// Length of the overlap of the two boxes' projections onto the given axis.
/// Negative values mean the projections are disjoint.
inline int projection_overlap(const Bounds& a, const Bounds& b, Axis axis) {
    if (axis == Axis::Horizontal)
        return std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    return std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
}

/// Gap between the facing edges along the axis; 0 when the intervals overlap.
inline int edge_gap(const Bounds& a, const Bounds& b, Axis axis) {
    int lo_a, hi_a, lo_b, hi_b;
    if (axis == Axis::Horizontal) {
        lo_a = a.x1; hi_a = a.x2; lo_b = b.x1; hi_b = b.x2;
    } else {
        lo_a = a.y1; hi_a = a.y2; lo_b = b.y1; hi_b = b.y2;
    }
    if (lo_b >= hi_a) return lo_b - hi_a;
    if (lo_a >= hi_b) return lo_a - hi_b;
    return 0;
}

}  // namespace somcheck
