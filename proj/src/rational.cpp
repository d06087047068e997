#include "drinfeld/rational.hpp"

#include "drinfeld/errors.hpp"

#include <cctype>

namespace drinfeld {

std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_string(const RatInf& r) { return r ? to_string(*r) : std::string("inf"); }

static std::int64_t parse_int(const std::string& s, const std::string& whole) {
    if (s.empty()) throw ParseError("empty integer in '" + whole + "'", 0, 1);
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') i = 1;
    if (i == s.size()) throw ParseError("bad integer in '" + whole + "'", 0, 1);
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j])))
            throw ParseError("bad character in rational '" + whole + "'", 0, j + 1);
    return std::stoll(s);
}

RatInf parse_rat_inf(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::nullopt;
    return parse_rat(s);
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s, s));
    auto num = parse_int(s.substr(0, slash), s);
    auto den = parse_int(s.substr(slash + 1), s);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'", 0, slash + 2);
    return Rat(num, den);
}

std::int64_t floor_rat(const Rat& r) {
    auto n = r.numerator(), d = r.denominator();
    auto f = n / d;
    if ((n % d != 0) && (n < 0)) --f;
    return f;
}

std::int64_t ceil_rat(const Rat& r) { return -floor_rat(-r); }

}  // namespace drinfeld
