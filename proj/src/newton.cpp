#include "drinfeld/newton.hpp"

#include "drinfeld/errors.hpp"

#include <algorithm>
#include <set>

namespace drinfeld {

NewtonPolygon::NewtonPolygon(std::vector<NewtonPoint> points) : points_(std::move(points)) {
    std::set<std::int64_t> xs;
    std::vector<std::pair<std::int64_t, Rat>> fin;
    for (const auto& p : points_) {
        if (!xs.insert(p.x).second) throw PreconditionError("Newton polygon: repeated x = " + std::to_string(p.x));
        if (p.y) fin.emplace_back(p.x, *p.y);
    }
    if (fin.size() < 2) throw PreconditionError("Newton polygon needs at least two finite points");
    std::sort(fin.begin(), fin.end(), [](auto& a, auto& b) { return a.first < b.first; });
    // monotone chain, lower part; drop collinear middle points
    for (const auto& pt : fin) {
        while (hull_.size() >= 2) {
            const auto& a = hull_[hull_.size() - 2];
            const auto& b = hull_.back();
            // keep b only if slope(a,b) < slope(b,pt)
            Rat s1 = (b.second - a.second) / Rat(b.first - a.first);
            Rat s2 = (pt.second - b.second) / Rat(pt.first - b.first);
            if (s1 < s2) break;
            hull_.pop_back();
        }
        hull_.push_back(pt);
    }
    for (std::size_t i = 1; i < hull_.size(); ++i) {
        auto len = hull_[i].first - hull_[i - 1].first;
        slopes_.push_back({(hull_[i].second - hull_[i - 1].second) / Rat(len), len});
    }
}

bool NewtonPolygon::is_vertex(std::int64_t x) const {
    return std::any_of(hull_.begin(), hull_.end(), [x](auto& v) { return v.first == x; });
}

Rat NewtonPolygon::value_at(std::int64_t x) const {
    if (x < x_min() || x > x_max()) throw PreconditionError("x outside the Newton polygon span");
    for (std::size_t i = 1; i < hull_.size(); ++i) {
        if (x <= hull_[i].first) {
            const auto& a = hull_[i - 1];
            const auto& b = hull_[i];
            return a.second + (b.second - a.second) * Rat(x - a.first, b.first - a.first);
        }
    }
    return hull_.front().second;
}

std::int64_t NewtonPolygon::length_below(const Rat& s) const {
    std::int64_t n = 0;
    for (auto& g : slopes_)
        if (g.slope < s) n += g.length;
    return n;
}

std::int64_t NewtonPolygon::length_at(const Rat& s) const {
    std::int64_t n = 0;
    for (auto& g : slopes_)
        if (g.slope == s) n += g.length;
    return n;
}

}  // namespace drinfeld
