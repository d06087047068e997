#include "drinfeld/slopes.hpp"

#include "drinfeld/parsing.hpp"
#include "drinfeld/weights.hpp"

#include <algorithm>
#include <sstream>

namespace drinfeld {

namespace {

RatFunc monomial(const FieldCtx* F, std::uint32_t c, int e) {
    APoly a = APoly::constant(F, c);
    if (e >= 0) return RatFunc(a * APoly::T(F).pow(static_cast<std::uint64_t>(e)));
    return RatFunc(a, APoly::T(F).pow(static_cast<std::uint64_t>(-e)));
}

LocalElem series_coeff(const std::vector<LocalElem>& a, std::size_t n, const LocalRing* R) {
    return n < a.size() ? a[n] : LocalElem::zero(R);
}

Mat<LocalElem> mat_mul(const Mat<LocalElem>& A, const Mat<LocalElem>& B, int prec) {
    const std::size_t n = A.size();
    const LocalRing* R = A[0][0].ring();
    Mat<LocalElem> C(n, std::vector<LocalElem>(n, LocalElem::zero(R)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            if (A[i][l].is_exact_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!B[l][j].is_exact_zero()) C[i][j] += A[i][l] * B[l][j];
        }
    for (auto& row : C)
        for (auto& x : row) x = x.truncate(prec);
    return C;
}

Mat<LocalElem> mat_pow(Mat<LocalElem> A, std::uint64_t e, int prec) {
    const std::size_t n = A.size();
    const LocalRing* R = A[0][0].ring();
    Mat<LocalElem> out(n, std::vector<LocalElem>(n, LocalElem::zero(R)));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = LocalElem::one(R);
    while (e) {
        if (e & 1) out = mat_mul(out, A, prec);
        e >>= 1;
        if (e) A = mat_mul(A, A, prec);
    }
    return out;
}

bool mat_agree(const Mat<LocalElem>& A, const Mat<LocalElem>& B) {
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j)
            if (!(A[i][j] - B[i][j]).is_zero()) return false;
    return true;
}

// rank over the residue field of the reduction mod w
int residue_rank(const Mat<LocalElem>& A) {
    if (A.empty()) return 0;
    const FieldCtx& K = *A[0][0].ring()->F;
    std::vector<std::vector<std::uint32_t>> m;
    for (auto& row : A) {
        std::vector<std::uint32_t> r;
        for (auto& x : row) {
            if (x.val_lb() < 0) throw PreconditionError("matrix is not integral");
            r.push_back(x.coeff(0));
        }
        m.push_back(std::move(r));
    }
    int rank = 0;
    const std::size_t cols = m[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
        std::size_t piv = static_cast<std::size_t>(rank);
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
        const auto& pr = m[static_cast<std::size_t>(rank)];
        const std::uint32_t inv = K.inv(pr[c]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == static_cast<std::size_t>(rank) || m[i][c] == 0) continue;
            const std::uint32_t f = K.mul(m[i][c], inv);
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = K.sub(m[i][j], K.mul(f, pr[j]));
        }
        ++rank;
    }
    return rank;
}

// hull points of a series; indeterminate coefficients must stay strictly above
struct SeriesHull {
    std::optional<NewtonPolygon> np;
    int deg = 0;
};

SeriesHull series_hull(const std::vector<LocalElem>& a) {
    std::vector<NewtonPoint> known;
    std::vector<std::pair<std::int64_t, Rat>> unknown;
    int deg = 0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (a[n].is_exact_zero()) continue;
        if (a[n].val_known()) {
            known.push_back({static_cast<std::int64_t>(n), a[n].vpi()});
            deg = static_cast<int>(n);
        } else {
            unknown.emplace_back(static_cast<std::int64_t>(n), a[n].vpi_lb());
        }
    }
    SeriesHull h;
    h.deg = deg;
    for (auto& [x, lb] : unknown)
        if (x > deg) throw PrecisionError("coefficient a_" + std::to_string(x) + " is zero only to precision; degree undetermined");
    if (known.size() < 2) return h;
    h.np.emplace(known);
    for (auto& [x, lb] : unknown)
        if (lb <= h.np->value_at(x))
            throw PrecisionError("coefficient a_" + std::to_string(x) + " is indeterminate and may touch the Newton polygon");
    return h;
}

std::vector<LocalElem> truncate_all(std::vector<LocalElem> v, int N) {
    for (auto& x : v) x = x.truncate(N);
    return v;
}

// 1/P mod X^len for P(0) = 1
std::vector<LocalElem> series_inv(const std::vector<LocalElem>& P, std::size_t len, int N) {
    const LocalRing* R = P[0].ring();
    std::vector<LocalElem> inv(len, LocalElem::zero(R));
    inv[0] = LocalElem::one(R);
    for (std::size_t m = 1; m < len; ++m) {
        LocalElem acc = LocalElem::zero(R);
        for (std::size_t j = 1; j <= m && j < P.size(); ++j) acc += P[j] * inv[m - j];
        inv[m] = (-acc).truncate(N);
    }
    return inv;
}

// Gaussian elimination with minimal-valuation pivots
std::vector<LocalElem> solve(Mat<LocalElem> A, std::vector<LocalElem> b) {
    const std::size_t n = A.size();
    std::vector<std::size_t> col_of(n);
    std::vector<bool> used(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        std::optional<std::size_t> piv;
        for (std::size_t r = 0; r < n; ++r) {
            if (used[r] || !A[r][c].val_known() || A[r][c].is_exact_zero()) continue;
            if (A[r][c].is_zero()) continue;
            if (!piv || A[r][c].val_lb() < A[*piv][c].val_lb()) piv = r;
        }
        if (!piv) throw PrecisionError("factorization system is singular at this precision");
        used[*piv] = true;
        col_of[c] = *piv;
        const LocalElem inv = A[*piv][c].inv();
        for (std::size_t r = 0; r < n; ++r) {
            if (r == *piv || A[r][c].is_exact_zero()) continue;
            const LocalElem f = A[r][c] * inv;
            for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[*piv][j];
            b[r] -= f * b[*piv];
        }
    }
    std::vector<LocalElem> x(n);
    for (std::size_t c = 0; c < n; ++c) x[c] = b[col_of[c]] / A[col_of[c]][c];
    return x;
}

}  // namespace

int power_sum(std::uint64_t q, std::uint64_t m) {
    if (m == 0) return 0;  // q * 1 = 0 in characteristic p
    return m % (q - 1) == 0 ? -1 : 0;
}

UMatrix u_matrix(int k, std::uint64_t q) {
    if (k < 2) throw PreconditionError("weight must be >= 2");
    if (k > 400) throw PreconditionError("weight above the supported bound 400");
    auto [p, a] = prime_power(q);
    UMatrix U;
    U.q = q;
    U.k = k;
    U.F = FieldCtx::make(p, a);
    const FieldCtx* F = U.F.get();
    const int D = k - 1;
    U.M.assign(static_cast<std::size_t>(D), std::vector<RatFunc>(static_cast<std::size_t>(D), RatFunc(APoly(F))));
    // Y^n -> (1/pi) (bX + pi Y)^n X^{k-2-n}: coefficient binom(n,i) pi^i S(n-i) on X^{k-2-i} Y^i
    for (int n = 0; n < D; ++n)
        for (int i = 0; i <= n; ++i) {
            const int s = power_sum(q, static_cast<std::uint64_t>(n - i));
            if (!s) continue;
            const auto b = binom_mod_p(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i), p);
            if (!b) continue;
            const std::uint32_t c = F->from_int(static_cast<long long>(s) * b);
            U.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = monomial(F, c, i - 1);
        }
    return U;
}

UMatrix t_matrix_level_one(int k, std::uint64_t q) {
    UMatrix T = u_matrix(k, q);
    const FieldCtx* F = T.F.get();
    // pi^{k-1} f(pi X, Y): X^{k-2-n} Y^n picks up pi^{k-1} pi^{k-2-n}; the exponent k-1 keeps T = U mod pi from k = 2 on
    for (int n = 0; n < T.dim(); ++n) {
        auto& e = T.M[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)];
        e = e + monomial(F, 1, (k - 1) + (k - 2 - n));
    }
    return T;
}

LocalMatrix localize_matrix(const UMatrix& U, const APoly& prime, int prec) {
    return localize_matrix(U, Localizer(U.F, prime, prec));
}

LocalMatrix localize_matrix(const UMatrix& U, const Localizer& loc) {
    const APoly& prime = loc.prime();
    const LocalRing* R = loc.ring().get();
    const bool at_T = prime == APoly::T(U.F.get());
    Mat<LocalElem> out;
    for (auto& row : U.M) {
        std::vector<LocalElem> r;
        for (auto& x : row) {
            if (x.is_zero()) {
                r.push_back(LocalElem::zero(R));
                continue;
            }
            const auto& den = x.den();
            bool mono = at_T;
            for (int i = 0; mono && i < den.deg(); ++i) mono = den.coeff(i) == 0;
            if (mono) {
                std::vector<std::uint32_t> c(x.num().coeffs().begin(), x.num().coeffs().end());
                r.emplace_back(R, -den.deg(), c, LocalElem::kExact);
            } else {
                r.push_back(loc(x));
            }
        }
        out.push_back(std::move(r));
    }
    return {loc.ring(), std::move(out)};
}

CharSeries char_series(const LocalMatrix& U, int N) {
    CharSeries cs = char_series(U.m, N);
    cs.keep = U.ring;
    return cs;
}

CharSeries char_series(const Mat<LocalElem>& U, int N) {
    CharSeries cs;
    cs.dim = static_cast<int>(U.size());
    if (U.empty()) throw PreconditionError("empty matrix");
    const LocalRing* R = U[0][0].ring();
    cs.a = berkowitz(U, LocalElem::zero(R), LocalElem::one(R));
    if (N >= 0 && static_cast<std::size_t>(N) + 1 < cs.a.size()) cs.a.resize(static_cast<std::size_t>(N) + 1);
    return cs;
}

int SlopeTable::count(const Rat& s) const {
    int c = 0;
    for (auto& r : rows)
        if (r.slope && *r.slope == s) c += r.multiplicity;
    return c;
}

int SlopeTable::count_below(const Rat& s) const {
    int c = 0;
    for (auto& r : rows)
        if (r.slope && *r.slope < s) c += r.multiplicity;
    return c;
}

SlopeTable slope_table(const CharSeries& cs, int k) {
    if (cs.a.empty() || !cs.a[0].val_known() || !(cs.a[0] - LocalElem::one(cs.a[0].ring())).is_zero())
        throw PreconditionError("characteristic series must have constant term 1");
    auto h = series_hull(cs.a);
    SlopeTable st;
    st.k = k;
    if (h.np)
        for (auto& s : h.np->slopes()) st.rows.push_back({RatInf(s.slope), static_cast<int>(s.length), false});
    if (cs.dim > h.deg) st.rows.push_back({std::nullopt, cs.dim - h.deg, false});
    return k ? classicity_filter(st, k) : st;
}

SlopeTable classicity_filter(SlopeTable st, int k, int r) {
    st.k = k;
    for (auto& row : st.rows) row.classical = row.slope && *row.slope < Rat(k - r + 1);
    return st;
}

bool is_integral(const Mat<LocalElem>& U) {
    for (auto& row : U)
        for (auto& x : row)
            if (x.val_lb() < 0) return false;
    return true;
}

int ordinary_rank(const CharSeries& cs) { return slope_table(cs).count(Rat(0)); }

int ordinary_rank(int k, std::uint64_t q) {
    auto U = u_matrix(k, q);
    return ordinary_rank(char_series(localize_matrix(U, APoly::T(U.F.get()), 32)));
}

Projector ordinary_projector(const Mat<LocalElem>& U, int prec) {
    if (U.empty()) throw PreconditionError("empty matrix");
    const LocalRing* R = U[0][0].ring();
    const std::size_t n = U.size();
    Projector pr;
    const int N = prec * R->E;
    if (!is_integral(U)) {
        if (ordinary_rank(char_series(U)) != 0)
            throw PreconditionError("non-integral operator with a slope-0 part: no lattice to iterate on");
        pr.e.assign(n, std::vector<LocalElem>(n, LocalElem::zero(R)));
        return pr;
    }
    Mat<LocalElem> A = U;
    for (auto& row : A)
        for (auto& x : row) x = x.truncate(N);
    // unit eigenvalues satisfy u^{|k|-1} = 1 mod w; then p-th powers converge
    const std::uint64_t Qf = R->F->q();
    const std::uint32_t p = R->F->p();
    Mat<LocalElem> E = mat_pow(A, Qf - 1, N);
    for (int it = 0; it < 200; ++it) {
        auto Ep = mat_pow(E, p, N);
        ++pr.iterations;
        const bool stable = mat_agree(Ep, E);
        E = std::move(Ep);
        if (stable && mat_agree(mat_mul(E, E, N), E)) {
            pr.e = E;
            pr.rank_mod_pi = residue_rank(E);
            return pr;
        }
    }
    throw PrecisionError("powers of U did not stabilize");
}

std::vector<GmEntry> gm_scan(int k, int kp, std::uint64_t q, int N, int prec, bool use_T) {
    if ((k - kp) % static_cast<int>(q - 1) != 0)
        throw PreconditionError("weights " + std::to_string(k) + " and " + std::to_string(kp) + " lie in different classes mod q-1");
    auto [p, e] = prime_power(q);
    auto F = FieldCtx::make(p, e);
    const Localizer loc(F, APoly::T(F.get()), prec);
    auto series = [&](int w) {
        auto M = use_T ? t_matrix_level_one(w, q) : u_matrix(w, q);
        return char_series(localize_matrix(M, loc), N);
    };
    auto a = series(k), b = series(kp);
    const LocalRing* R = a.a[0].ring();
    std::vector<GmEntry> out;
    for (int n = 0; n <= N; ++n) {
        const auto d = series_coeff(a.a, static_cast<std::size_t>(n), R) - series_coeff(b.a, static_cast<std::size_t>(n), R);
        GmEntry e;
        e.n = n;
        if (d.is_exact_zero()) {
            e.val = std::nullopt;
        } else if (!d.val_known()) {
            e.val = d.vpi_lb();
            e.lower_bound = true;
        } else {
            e.val = d.vpi();
        }
        out.push_back(e);
    }
    return out;
}

std::vector<VnRow> vn_regions(const std::map<int, CharSeries>& samples, const Rat& cut) {
    std::vector<VnRow> out;
    for (auto& [k, cs] : samples) {
        std::optional<Rat> best;
        int n = 0, ties = 0;
        std::vector<std::pair<int, Rat>> lbs;
        for (std::size_t m = 0; m < cs.a.size(); ++m) {
            const auto& c = cs.a[m];
            if (c.is_exact_zero()) continue;
            if (!c.val_known()) {
                lbs.emplace_back(static_cast<int>(m), c.vpi_lb() - cut * Rat(static_cast<std::int64_t>(m)));
                continue;
            }
            const Rat v = *c.vpi() - cut * Rat(static_cast<std::int64_t>(m));
            if (!best || v < *best) {
                best = v;
                n = static_cast<int>(m);
                ties = 0;
            } else if (v == *best) {
                ++ties;
            }
        }
        for (auto& [m, lb] : lbs)
            if (best && lb <= *best) throw PrecisionError("coefficient a_" + std::to_string(m) + " too imprecise for the cut");
        VnRow row;
        row.k = k;
        row.n = n;
        row.tie = ties > 0;
        out.push_back(row);
    }
    int region = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i > 0 && (out[i].n != out[i - 1].n || out[i].tie || out[i - 1].tie)) ++region;
        out[i].region = region;
    }
    return out;
}

std::vector<LocalElem> poly_mul(const std::vector<LocalElem>& a, const std::vector<LocalElem>& b) {
    if (a.empty() || b.empty()) return {};
    const LocalRing* R = a[0].ring();
    std::vector<LocalElem> c(a.size() + b.size() - 1, LocalElem::zero(R));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_exact_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_exact_zero()) c[i + j] += a[i] * b[j];
    }
    return c;
}

Weierstrass weierstrass_factor(const CharSeries& cs, const Rat& cut, int max_iter) {
    const auto st = slope_table(cs);
    if (st.count(cut) > 0) throw PreconditionError("a slope lies exactly on the cut " + to_string(cut));
    const int n = st.count_below(cut);
    const LocalRing* R = cs.a[0].ring();
    const int D = series_hull(cs.a).deg;
    int N = LocalElem::kExact;
    for (int m = 0; m <= D; ++m) N = std::min(N, cs.a[static_cast<std::size_t>(m)].prec());
    if (N >= LocalElem::kExact) N = R->rel_cap;
    auto F = truncate_all(std::vector<LocalElem>(cs.a.begin(), cs.a.begin() + D + 1), N);
    Weierstrass w;
    if (n == 0 || n == D) {
        // one side is trivial
        std::vector<LocalElem> one{LocalElem::one(R)};
        w.Q = n == 0 ? one : F;
        w.P = n == 0 ? F : one;
        w.residual = Rat(N, R->E);
        return w;
    }
    // Newton runs on the data lifted to exact values, at a guarded working precision;
    // each correction is re-lifted so the solve's precision loss does not accumulate
    const int W = 3 * N;
    auto lift = [&](const LocalElem& x) {
        return x.is_zero() ? LocalElem::zero(R) : LocalElem(R, x.start(), x.coeffs(), LocalElem::kExact).truncate(W);
    };
    auto exact = [&](const LocalElem& x) { return x.is_zero() ? LocalElem::zero(R) : LocalElem(R, x.start(), x.coeffs(), LocalElem::kExact); };
    std::vector<LocalElem> G;
    for (auto& x : F) G.push_back(exact(x));
    // start: Q = a_0 + ... + a_n X^n, P = 1 + sum_m (a_{n+m}/a_n) X^m
    std::vector<LocalElem> Q(G.begin(), G.begin() + n + 1);
    std::vector<LocalElem> P{LocalElem::one(R)};
    for (int m = 1; m <= D - n; ++m) P.push_back(exact(lift(G[static_cast<std::size_t>(n + m)] / G[static_cast<std::size_t>(n)])));
    auto residual = [&](const std::vector<LocalElem>& q, const std::vector<LocalElem>& p, const std::vector<LocalElem>& f, int cut_at) {
        auto qp = poly_mul(q, p);
        std::vector<LocalElem> e;
        for (int j = 0; j <= D; ++j) e.push_back((f[static_cast<std::size_t>(j)] - series_coeff(qp, static_cast<std::size_t>(j), R)).truncate(cut_at));
        return e;
    };
    auto min_val = [&](const std::vector<LocalElem>& e) {
        int v = W;
        for (auto& x : e) v = std::min(v, x.val_lb());
        return v;
    };
    int best = -1;
    for (int it = 0; it < max_iter; ++it) {
        auto E = residual(Q, P, G, W);
        const int v = min_val(E);
        if (v >= W || v <= best) break;
        best = v;
        w.iterations = it + 1;
        // Q dP + P dQ = E in degrees 1..D, dQ in X..X^n, dP in X..X^{D-n}
        Mat<LocalElem> A(static_cast<std::size_t>(D), std::vector<LocalElem>(static_cast<std::size_t>(D), LocalElem::zero(R)));
        std::vector<LocalElem> b;
        for (int j = 1; j <= D; ++j) {
            auto row = static_cast<std::size_t>(j - 1);
            for (int i = 1; i <= n; ++i)
                if (j - i >= 0) A[row][static_cast<std::size_t>(i - 1)] = series_coeff(P, static_cast<std::size_t>(j - i), R).truncate(W);
            for (int i = 1; i <= D - n; ++i)
                if (j - i >= 0) A[row][static_cast<std::size_t>(n + i - 1)] = series_coeff(Q, static_cast<std::size_t>(j - i), R).truncate(W);
            b.push_back(E[static_cast<std::size_t>(j)]);
        }
        auto x = solve(A, b);
        for (int i = 1; i <= n; ++i) Q[static_cast<std::size_t>(i)] = exact(lift(Q[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(i - 1)]));
        for (int i = 1; i <= D - n; ++i)
            P[static_cast<std::size_t>(i)] = exact(lift(P[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(n + i - 1)]));
    }
    // against the data as given
    const auto E = residual(Q, P, F, N);
    Rat res(N, R->E);
    for (auto& x : E) res = std::min(res, x.is_zero() ? x.vpi_lb() : *x.vpi());
    if (res < Rat(N - 2 * R->E, R->E)) throw PrecisionError("factorization did not converge; raise the precision");
    for (auto& x : Q) x = x.truncate(N);
    for (auto& x : P) x = x.truncate(N);
    w.Q = Q;
    w.P = P;
    w.residual = res;
    return w;
}

UMatrix ingest_matrix(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    UMatrix U;
    int dim = -1;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        if (!header) {
            std::istringstream hs(line);
            std::string tok;
            std::map<std::string, long long> kv;
            std::size_t col = 0;
            while (hs >> tok) {
                col = line.find(tok, col);
                const auto eq = tok.find('=');
                if (eq == std::string::npos) throw ParseError("header token \"" + tok + "\" is not key=value", lineno, col + 1);
                try {
                    std::size_t used = 0;
                    const std::string val = tok.substr(eq + 1);
                    long long v = std::stoll(val, &used);
                    if (used != val.size()) throw std::invalid_argument(val);
                    kv[tok.substr(0, eq)] = v;
                } catch (const std::logic_error&) {
                    throw ParseError("header value in \"" + tok + "\" is not an integer", lineno, col + eq + 2);
                }
                col += tok.size();
            }
            for (const char* key : {"q", "k", "dim"})
                if (!kv.count(key)) throw ParseError(std::string("header lacks ") + key, lineno, 1);
            if (kv["q"] < 2) throw ParseError("q must be >= 2", lineno, 1);
            auto [p, a] = prime_power(static_cast<std::uint64_t>(kv["q"]));
            U.q = static_cast<std::uint64_t>(kv["q"]);
            U.k = static_cast<int>(kv["k"]);
            dim = static_cast<int>(kv["dim"]);
            if (dim < 1 || dim > 1000) throw ParseError("dim out of range", lineno, 1);
            U.F = FieldCtx::make(p, a);
            header = true;
            continue;
        }
        if (U.dim() == dim) throw ParseError("more rows than dim = " + std::to_string(dim), lineno, 1);
        std::vector<RatFunc> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (cell.find_first_not_of(" \t") == std::string::npos) throw ParseError("empty entry", lineno, start + 1);
            row.push_back(parse_ratfunc(U.F.get(), cell, lineno, start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (static_cast<int>(row.size()) != dim)
            throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(dim), lineno, 1);
        U.M.push_back(std::move(row));
    }
    if (!header) throw ParseError("missing header line", lineno ? lineno : 1, 1);
    if (U.dim() != dim) throw ParseError("expected " + std::to_string(dim) + " rows, found " + std::to_string(U.dim()), lineno, 1);
    return U;
}

std::string emit_matrix(const UMatrix& U) {
    std::ostringstream out;
    out << "q=" << U.q << " k=" << U.k << " dim=" << U.dim() << "\n";
    for (auto& row : U.M) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? ", " : "") << row[j].to_string();
        out << "\n";
    }
    return out.str();
}

}  // namespace drinfeld
