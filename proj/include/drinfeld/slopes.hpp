#pragma once
#include "drinfeld/apoly.hpp"
#include "drinfeld/errors.hpp"
#include "drinfeld/local.hpp"
#include "drinfeld/newton.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drinfeld {

template <class R>
using Mat = std::vector<std::vector<R>>;

// Operator on the weight-k space with basis X^{k-2-n} Y^n, n = 0..k-2, entries in F_q(T).
// Column n is the image of the n-th basis vector.
struct UMatrix {
    std::uint64_t q = 0;
    int k = 0;
    FieldPtr F;
    Mat<RatFunc> M;
    int dim() const { return static_cast<int>(M.size()); }
};

// sum_{b in F_q} b^m (0^0 = 1), as an integer mod p: -1 when m > 0 and (q-1) | m, else 0
int power_sum(std::uint64_t q, std::uint64_t m);

// f -> (1/pi) sum_b f(X, bX + pi Y), pi = T
UMatrix u_matrix(int k, std::uint64_t q);
// U plus the extra coset pi^{k-1} f(pi X, Y)
UMatrix t_matrix_level_one(int k, std::uint64_t q);

// entries in F_q((pi)) at the prime; monomial entries at pi = T stay exact.
// The elements point into `ring`, which must outlive them.
struct LocalMatrix {
    LocalRingPtr ring;
    Mat<LocalElem> m;
};
LocalMatrix localize_matrix(const UMatrix& U, const APoly& prime, int prec);
LocalMatrix localize_matrix(const UMatrix& U, const Localizer& loc);

// coefficients c_0 = 1, c_1, ..., c_n of det(lambda - A); division-free
template <class R>
std::vector<R> berkowitz(const Mat<R>& A, const R& zero, const R& one);

// det(1 - X U) = sum a_n X^n
struct CharSeries {
    std::vector<LocalElem> a;
    int dim = 0;  // D
    LocalRingPtr keep;  // owner of the ring when built from a LocalMatrix
};
CharSeries char_series(const Mat<LocalElem>& U, int N = -1);
CharSeries char_series(const LocalMatrix& U, int N = -1);

struct SlopeRow {
    RatInf slope;  // nullopt = infinite
    int multiplicity = 0;
    bool classical = false;
};
struct SlopeTable {
    int k = 0;
    std::vector<SlopeRow> rows;  // finite slopes ascending, then infinity
    int count(const Rat& s) const;
    int count_below(const Rat& s) const;
};
// errors: a_0 != 1, indeterminate coefficients that may touch the hull
SlopeTable slope_table(const CharSeries& cs, int k = 0);
SlopeTable classicity_filter(SlopeTable st, int k, int r = 2);

bool is_integral(const Mat<LocalElem>& U);

int ordinary_rank(const CharSeries& cs);
int ordinary_rank(int k, std::uint64_t q);

struct Projector {
    Mat<LocalElem> e;
    int iterations = 0;  // powering steps until idempotent (0 when trivial)
    int rank_mod_pi = 0;
};
// slope-0 spectral projector; integral U: lim U^{n!} by powering; otherwise only the rank-0 case
Projector ordinary_projector(const Mat<LocalElem>& U, int prec);

struct GmEntry {
    int n = 0;
    RatInf val;  // v(a_n(k) - a_n(k'))
    bool lower_bound = false;
};
// errors: k and k' in different classes mod q-1
std::vector<GmEntry> gm_scan(int k, int kp, std::uint64_t q, int N, int prec, bool use_T = false);

struct VnRow {
    int k = 0;
    int n = 0;  // number of slopes below the cut
    bool tie = false;
    int region = 0;
};
std::vector<VnRow> vn_regions(const std::map<int, CharSeries>& samples, const Rat& cut);

struct Weierstrass {
    std::vector<LocalElem> Q;  // degree = #slopes below the cut, Q(0) = 1
    std::vector<LocalElem> P;  // P(0) = 1
    Rat residual;              // min valuation of the coefficients of QP - F
    int iterations = 0;
};
// errors: slope on the cut, no convergence at the given precision
Weierstrass weierstrass_factor(const CharSeries& cs, const Rat& cut, int max_iter = 400);

// "q=.. k=.. dim=.." then dim rows of comma-separated rational functions in T
UMatrix ingest_matrix(const std::string& text);
std::string emit_matrix(const UMatrix& U);

std::vector<LocalElem> poly_mul(const std::vector<LocalElem>& a, const std::vector<LocalElem>& b);

// ---------------------------------------------------------------------------------------

namespace detail {
inline bool exact_zero_entry(const LocalElem& x) { return x.is_exact_zero(); }
inline bool exact_zero_entry(const RatFunc& x) { return x.is_zero(); }
inline bool exact_zero_entry(const APoly& x) { return x.is_zero(); }
inline bool exact_zero_entry(const Fq& x) { return x.is_zero(); }
}  // namespace detail

template <class R>
std::vector<R> berkowitz(const Mat<R>& A, const R& zero, const R& one) {
    const std::size_t n = A.size();
    for (auto& row : A)
        if (row.size() != n) throw PreconditionError("matrix is not square");
    if (n == 0) return {one};
    std::vector<R> v{one, zero - A[0][0]};
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<R> t(r + 2, zero);
        t[0] = one;
        t[1] = zero - A[r][r];
        bool row_zero = true;
        for (std::size_t j = 0; j < r; ++j) row_zero = row_zero && detail::exact_zero_entry(A[r][j]);
        if (!row_zero) {
            std::vector<R> w(r, zero);
            for (std::size_t i = 0; i < r; ++i) w[i] = A[i][r];
            for (std::size_t j = 2; j <= r + 1; ++j) {
                R dot = zero;
                for (std::size_t i = 0; i < r; ++i)
                    if (!detail::exact_zero_entry(A[r][i]) && !detail::exact_zero_entry(w[i])) dot = dot + A[r][i] * w[i];
                t[j] = zero - dot;
                if (j == r + 1) break;
                std::vector<R> nw(r, zero);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t l = 0; l < r; ++l)
                        if (!detail::exact_zero_entry(A[i][l]) && !detail::exact_zero_entry(w[l])) nw[i] = nw[i] + A[i][l] * w[l];
                w = std::move(nw);
            }
        }
        std::vector<R> nv(r + 2, zero);
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, r); ++j)
                if (!detail::exact_zero_entry(t[i - j]) && !detail::exact_zero_entry(v[j])) nv[i] = nv[i] + t[i - j] * v[j];
        v = std::move(nv);
    }
    return v;
}

}  // namespace drinfeld
