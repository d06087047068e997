#pragma once
#include "drinfeld/newton.hpp"
#include "drinfeld/tau.hpp"

#include <map>
#include <vector>

namespace drinfeld {

// height h: tau-adic valuation of phi_pi (mod p) divided by d = deg(pi)
int height(const DrinfeldModule<Fq>& phi, const APoly& pi);
// tau^d coefficient of phi_pi
Fq hasse_invariant(const DrinfeldModule<Fq>& phi, const APoly& pi);

struct StratumLabel {
    int h = 0, r = 0;
    int i = 0;           // i(w) = h
    std::vector<int> w;  // w[j-1] = w(j)
    int l = 0;           // sum over j != i of j - w(j)
};
StratumLabel stratum_label(int h, int r);

// Newton slopes of the p-torsion polygon of a module reduced mod p. Points are
// (r - i, y_i) for the tau^{di} coefficient: y = 1 for i = 0 (the linear term pi),
// 0 when the reduced coefficient is nonzero, +inf when it vanishes. Slopes are
// returned one per unit length, nondecreasing.
std::vector<Rat> reduced_newton_slopes(const DrinfeldModule<Fq>& phi, const APoly& pi);

// log_q of |phi[p]| over a splitting field of the residue-field coefficients.
// The splitting degree is the exponent of GL_{r-1}(A/p), Frobenius acting A/p-linearly.
struct TorsionCount {
    std::uint32_t ext_degree = 0;   // degree of the splitting extension over the coefficient field
    std::uint32_t log_p_count = 0;  // |phi[p]| = p^log_p_count
    Rat log_q_count;
};
TorsionCount torsion_count(const DrinfeldModule<Fq>& phi, FieldPtr coeff_field, const APoly& pi);

struct CensusRow {
    int h = 0;
    std::uint64_t count = 0;
    double exponent_estimate = 0;  // log_{q^e}(count)
    int l_w = 0;
};
struct Census {
    std::uint32_t q = 0, r = 0, e = 0;
    std::uint64_t total = 0;
    std::uint64_t hasse_mismatch = 0;  // modules with (Ha != 0) != (h == 1); expected 0
    std::vector<CensusRow> rows;       // h = 1..r
};

// Enumerates phi_T = theta + g_1 tau + ... + g_{r-1} tau^{r-1} + Delta tau^r over F_{q^e},
// theta the root of the degree-1 prime.
Census strata_census(std::uint32_t q, std::uint32_t r, const std::string& prime, std::uint32_t e,
                     unsigned jobs = 1, std::uint64_t bound = 1ull << 26);

// degree of the interpolating polynomial through (x_i, y_i), by exact divided differences;
// -1 when every y is 0. errors: repeated abscissae, fewer than one point
int interpolated_degree(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts);

}  // namespace drinfeld
