#pragma once
#include "drinfeld/apoly.hpp"
#include "drinfeld/local.hpp"

#include <string>

namespace drinfeld {

// Symbols: T (the variable of A), g (generator of F_q over F_p), integers.
APoly parse_apoly(const FieldCtx* F, const std::string& s, std::size_t line = 0, std::size_t col0 = 0);
// as above, with '/' and negative exponents
RatFunc parse_ratfunc(const FieldCtx* F, const std::string& s, std::size_t line = 0, std::size_t col0 = 0);
// Symbols: pi, w (uniformizer of the ramified ring, pi = w^E), g, integers; result truncated to prec
LocalElem parse_local(const LocalRing* R, const std::string& s, int prec, std::size_t line = 0, std::size_t col0 = 0);

}  // namespace drinfeld
