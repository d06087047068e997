#include "drinfeld/strata.hpp"

#include "drinfeld/parsing.hpp"

#include <cmath>
#include <thread>

namespace drinfeld {


int height(const DrinfeldModule<Fq>& phi, const APoly& pi) {
    auto phipi = phi_eval(phi, pi);
    const int v = phipi.val();
    if (v < 0) throw PreconditionError("phi_pi vanishes identically");
    const int d = pi.deg();
    if (v % d != 0) throw PreconditionError("tau-valuation of phi_pi not divisible by deg(pi)");
    const int h = v / d;
    if (h < 1 || h > phi.r) throw PreconditionError("module is not of characteristic p (height out of range)");
    return h;
}

Fq hasse_invariant(const DrinfeldModule<Fq>& phi, const APoly& pi) {
    auto phipi = phi_eval(phi, pi);
    if (phipi.is_zero()) throw PreconditionError("phi_pi vanishes identically");
    if (!phipi.coeff(0).is_zero()) throw PreconditionError("module is not of characteristic p");
    return phipi.coeff(pi.deg());
}

StratumLabel stratum_label(int h, int r) {
    if (r < 1 || h < 1 || h > r) throw PreconditionError("height must satisfy 1 <= h <= r");
    StratumLabel s;
    s.h = h;
    s.r = r;
    s.i = h;
    s.w.resize(static_cast<std::size_t>(r));
    for (int j = 1; j <= r; ++j) s.w[static_cast<std::size_t>(j - 1)] = j < h ? j : (j == h ? r : j - 1);
    for (int j = 1; j <= r; ++j)
        if (j != s.i) s.l += j - s.w[static_cast<std::size_t>(j - 1)];
    return s;
}

std::vector<Rat> reduced_newton_slopes(const DrinfeldModule<Fq>& phi, const APoly& pi) {
    auto phipi = phi_eval(phi, pi);
    const int d = pi.deg();
    const int r = phi.r;
    std::vector<NewtonPoint> pts;
    for (int i = 0; i <= r; ++i) {
        RatInf y;
        if (i == 0)
            y = Rat(1);
        else if (!phipi.coeff(d * i).is_zero())
            y = Rat(0);
        pts.push_back({r - i, y});
    }
    NewtonPolygon np(pts);
    std::vector<Rat> out;
    for (auto& s : np.slopes())
        for (std::int64_t k = 0; k < s.length; ++k) out.push_back(s.slope);
    return out;
}

TorsionCount torsion_count(const DrinfeldModule<Fq>& phi, FieldPtr coeff_field, const APoly& pi) {
    auto phipi = phi_eval(phi, pi);
    std::uint64_t Qd = 1;
    for (int i = 0; i < pi.deg(); ++i) Qd *= phi.q;
    TorsionCount t;
    t.ext_degree = phi.r == 1 ? 1 : static_cast<std::uint32_t>(gl_exponent(static_cast<std::uint32_t>(phi.r - 1), static_cast<std::uint32_t>(Qd)));
    t.log_p_count = kernel_dim_in_extension(phipi, coeff_field, t.ext_degree);
    std::uint32_t a = 0;
    for (std::uint64_t x = phi.q; x > 1; x /= coeff_field->p()) ++a;
    t.log_q_count = Rat(t.log_p_count, a);
    return t;
}

Census strata_census(std::uint32_t q, std::uint32_t r, const std::string& prime, std::uint32_t e, unsigned jobs,
                     std::uint64_t bound) {
    if (r < 1) throw PreconditionError("rank must be >= 1");
    if (e < 1) throw PreconditionError("extension degree must be >= 1");
    auto [p, a] = prime_power(q);
    auto Fq_ = FieldCtx::make(p, a);
    APoly pi = parse_apoly(Fq_.get(), prime);
    if (pi.deg() != 1 || pi.lead() != 1) throw PreconditionError("census needs a monic degree-1 prime");
    std::uint64_t Q = 1, tuples = 1;
    for (std::uint32_t i = 0; i < e; ++i) Q *= q;
    for (std::uint32_t i = 0; i < r; ++i) {
        tuples *= Q;
        if (tuples > bound) throw PreconditionError("census size q^(e*r) exceeds the brute-force bound");
    }
    FieldPtr K = FieldCtx::make(p, a * e);
    FieldEmbedding emb(Fq_, K);
    const FieldCtx* k = K.get();
    const std::uint32_t theta = k->neg(emb(pi.coeff(0)));
    std::function<Fq(std::uint32_t)> scalar = [k, emb](std::uint32_t x) { return Fq(k, emb(x)); };

    // tuple index -> (g_1..g_{r-1}, Delta - 1)
    const std::uint64_t n = tuples / Q * (Q - 1);
    jobs = std::max(1u, jobs);
    std::vector<std::vector<std::uint64_t>> counts(jobs, std::vector<std::uint64_t>(r + 1, 0));
    std::vector<std::uint64_t> mismatch(jobs, 0);
    auto work = [&](unsigned w) {
        for (std::uint64_t idx = w; idx < n; idx += jobs) {
            std::vector<Fq> c(r + 1, Fq(k, 0));
            c[0] = Fq(k, theta);
            std::uint64_t t = idx;
            for (std::uint32_t i = 1; i < r; ++i) {
                c[i] = Fq(k, static_cast<std::uint32_t>(t % Q));
                t /= Q;
            }
            c[r] = Fq(k, static_cast<std::uint32_t>(t % (Q - 1)) + 1);
            auto phi = DrinfeldModule<Fq>::make(q, TauPoly<Fq>(Fq(k, 0), q, c), scalar);
            int h = height(phi, pi);
            counts[w][static_cast<std::size_t>(h)]++;
            bool ha = !hasse_invariant(phi, pi).is_zero();
            if (ha != (h == 1)) mismatch[w]++;
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (unsigned w = 0; w < jobs; ++w) th.emplace_back(work, w);
        for (auto& x : th) x.join();
    }
    Census out;
    out.q = q;
    out.r = r;
    out.e = e;
    out.total = n;
    for (unsigned w = 0; w < jobs; ++w) out.hasse_mismatch += mismatch[w];
    for (std::uint32_t h = 1; h <= r; ++h) {
        CensusRow row;
        row.h = static_cast<int>(h);
        for (unsigned w = 0; w < jobs; ++w) row.count += counts[w][h];
        row.exponent_estimate = row.count ? std::log(static_cast<double>(row.count)) / std::log(static_cast<double>(Q)) : 0.0;
        row.l_w = stratum_label(static_cast<int>(h), static_cast<int>(r)).l;
        out.rows.push_back(row);
    }
    return out;
}

int interpolated_degree(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
    if (pts.empty()) throw PreconditionError("no points to interpolate");
    const std::size_t n = pts.size();
    std::vector<Rat> dd;
    for (auto& [x, y] : pts) dd.push_back(Rat(y));
    int deg = dd[0] != Rat(0) ? 0 : -1;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = n - 1; i >= k; --i) {
            const std::int64_t dx = pts[i].first - pts[i - k].first;
            if (dx == 0) throw PreconditionError("repeated abscissa in interpolation");
            dd[i] = (dd[i] - dd[i - 1]) / Rat(dx);
        }
        if (dd[k] != Rat(0)) deg = static_cast<int>(k);
    }
    return deg;
}

}  // namespace drinfeld
