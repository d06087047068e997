#pragma once
#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace drinfeld {

using Rat = boost::rational<std::int64_t>;
// nullopt stands for +infinity
using RatInf = std::optional<Rat>;

std::string to_string(const Rat& r);
std::string to_string(const RatInf& r);
// accepts "a", "a/b", "-a/b", "inf"
RatInf parse_rat_inf(const std::string& s);
Rat parse_rat(const std::string& s);

inline bool inf_less(const RatInf& a, const RatInf& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}
inline RatInf inf_min(const RatInf& a, const RatInf& b) { return inf_less(b, a) ? b : a; }

std::int64_t floor_rat(const Rat& r);
std::int64_t ceil_rat(const Rat& r);

}  // namespace drinfeld
