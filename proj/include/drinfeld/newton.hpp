#pragma once
#include "drinfeld/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace drinfeld {

struct NewtonPoint {
    std::int64_t x;
    RatInf y;  // nullopt = +inf
};

struct Segment {
    Rat slope;
    std::int64_t length;  // multiplicity
};

class NewtonPolygon {
public:
    // errors: fewer than two finite points, repeated x
    explicit NewtonPolygon(std::vector<NewtonPoint> points);

    const std::vector<NewtonPoint>& points() const { return points_; }
    // vertices of the lower convex hull, left to right
    const std::vector<std::pair<std::int64_t, Rat>>& hull() const { return hull_; }
    // slopes with multiplicities, nondecreasing
    const std::vector<Segment>& slopes() const { return slopes_; }

    bool is_vertex(std::int64_t x) const;
    // value of the hull at x within its x-span
    Rat value_at(std::int64_t x) const;
    std::int64_t x_min() const { return hull_.front().first; }
    std::int64_t x_max() const { return hull_.back().first; }
    // total length of segments with slope < s (resp. == s)
    std::int64_t length_below(const Rat& s) const;
    std::int64_t length_at(const Rat& s) const;

private:
    std::vector<NewtonPoint> points_;
    std::vector<std::pair<std::int64_t, Rat>> hull_;
    std::vector<Segment> slopes_;
};

}  // namespace drinfeld
