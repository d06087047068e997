#pragma once
#include "drinfeld/errors.hpp"
#include "drinfeld/local.hpp"

#include <optional>
#include <string>
#include <vector>

namespace drinfeld {

// binom(n, k) mod p by Lucas
std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p);

// f(s) = sum_{j <= J} a_j binom(s, j), plus omitted terms of valuation >= tail
struct MahlerFunction {
    std::vector<LocalElem> a;
    RatInf tail;  // nullopt: nothing omitted

    const LocalRing* ring() const { return a.front().ring(); }
    int J() const { return static_cast<int>(a.size()) - 1; }
};

MahlerFunction mahler_constant(const LocalElem& c, int J);
MahlerFunction operator+(const MahlerFunction& f, const MahlerFunction& g);
MahlerFunction operator-(const MahlerFunction& f, const MahlerFunction& g);
MahlerFunction operator*(const MahlerFunction& f, const MahlerFunction& g);
MahlerFunction scale(const MahlerFunction& f, const LocalElem& c);
// f / pi^k
MahlerFunction div_pi_pow(const MahlerFunction& f, int k);

// sum_m c_m [prod_i (1 + z_i)^{n_im}] in O[[1 + pi A_p]], character index mod q^d - 1
struct IwasawaElem {
    struct Term {
        std::vector<int> exps;
        LocalElem coeff;
    };
    int chi = 0;
    std::vector<Term> terms;
};
IwasawaElem operator*(const IwasawaElem& x, const IwasawaElem& y);
IwasawaElem operator+(const IwasawaElem& x, const IwasawaElem& y);

// errors: v(z_i) < 1, exponent arity mismatch, negative exponents
MahlerFunction mahler_embed(const IwasawaElem& x, const std::vector<LocalElem>& gens, int J);

// f(k) for an integer k >= 0; beyond J the result is cut at the tail bound
LocalElem eval_weight(const MahlerFunction& f, std::uint64_t k);

// p-adic weight: residue character and base-p digits of s (little-endian)
struct WeightChar {
    int chi = 0;
    std::vector<std::uint32_t> digits;
    bool exact = false;  // s is the nonnegative integer with exactly these digits

    static WeightChar from_int(std::uint64_t k, std::uint32_t p, std::uint64_t Qd);
};
// f(s) for p-adic s; binom(s, j) mod p needs only the digits of s below j's top digit
LocalElem eval_weight(const MahlerFunction& f, const WeightChar& s, std::uint32_t p);

// min_j v(a_j); nullopt for the zero function
RatInf gauss_valuation(const MahlerFunction& f);
bool lambda_plus_member(const MahlerFunction& f);

struct WeightDistance {
    bool same_char = false;
    std::optional<int> vp;  // nullopt: infinite (or meaningless when the characters differ)
    bool exact = true;      // false when vp is only a lower bound from truncated digits
};
WeightDistance weight_distance(const WeightChar& k, const WeightChar& kp);

// a_j = Delta^j f(0) from the values f(0), ..., f(J)
MahlerFunction mahler_from_values(const std::vector<LocalElem>& values);

// {"q","d","gens":[...],"terms":[{"coeff","exps"}],"chi"} with entries as polynomials in pi
struct WeightExpr {
    LocalRingPtr R;
    std::uint32_t p = 0;
    std::vector<LocalElem> gens;
    IwasawaElem x;
};
WeightExpr parse_weight_expr(const std::string& json_text, int prec);

}  // namespace drinfeld
