#include "drinfeld/canonical.hpp"

#include "drinfeld/parsing.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <exception>
#include <thread>

namespace drinfeld {

namespace {

std::uint64_t upow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

LocalElem pi_of(const LocalRing* R) { return LocalElem::pi_pow(R, 1); }

bool is_pi(const LocalElem& x) {
    auto diff = x - pi_of(x.ring());
    return diff.is_zero() && x.val_known();
}

// smallest absolute precision (w-digits) among the coefficients
int working_prec(const TauPoly<LocalElem>& f) {
    int n = LocalElem::kExact;
    for (auto& c : f.coeffs()) n = std::min(n, c.prec());
    if (n >= LocalElem::kExact) n = f.coeffs().front().ring()->rel_cap;
    return n;
}

Rat residual_of(const TauPoly<LocalElem>& rem, int fallback, int E) {
    Rat out(fallback, E);
    for (auto& c : rem.coeffs()) {
        if (!c.is_zero()) throw PreconditionError("twisted division leaves a nonzero remainder " + c.to_string());
        out = std::min(out, c.vpi_lb());
    }
    return out;
}

}  // namespace

DrinfeldModule<LocalElem> LocalDrinfeld::as_module() const {
    FieldEmbedding emb(base, R->F);
    const LocalRing* Rp = R.get();
    return DrinfeldModule<LocalElem>::make(Q, phi_pi, [emb, Rp](std::uint32_t a) { return LocalElem::constant(Rp, emb(a)); });
}

LocalDrinfeld make_local_drinfeld(std::uint64_t q, int d, LocalRingPtr R, std::vector<LocalElem> coeffs) {
    if (d < 1) throw PreconditionError("prime degree must be >= 1");
    if (coeffs.size() < 2) throw PreconditionError("local module needs rank >= 1");
    auto [p, a] = prime_power(q);
    if (R->F->p() != p || R->F->e() % (a * static_cast<std::uint32_t>(d)) != 0)
        throw PreconditionError("residue field does not contain F_{q^d}");
    if (!is_pi(coeffs[0])) throw PreconditionError("linear coefficient of phi_pi must be pi, got " + coeffs[0].to_string());
    coeffs[0] = pi_of(R.get());
    auto lead = coeffs.back().wval();
    if (!lead || *lead != 0) throw PreconditionError("leading coefficient of phi_pi must be a unit");
    LocalDrinfeld m;
    m.q = q;
    m.d = d;
    m.Q = upow(q, d);
    m.r = static_cast<int>(coeffs.size()) - 1;
    m.base = FieldCtx::make(p, a);
    m.R = R;
    m.phi_pi = TauPoly<LocalElem>(LocalElem::zero(R.get()), m.Q, std::move(coeffs));
    return m;
}

RatInf v_hasse(const LocalDrinfeld& phi) { return phi.coeff(1).vpi(); }

NewtonPolygon local_newton(const LocalDrinfeld& phi) {
    std::vector<NewtonPoint> known;
    std::vector<std::pair<std::int64_t, Rat>> unknown;
    for (int i = 0; i <= phi.r; ++i) {
        const auto& c = phi.coeff(i);
        const auto x = static_cast<std::int64_t>(upow(phi.Q, i));
        if (c.val_known())
            known.push_back({x, c.vpi()});
        else
            unknown.emplace_back(x, c.vpi_lb());
    }
    NewtonPolygon np(known);
    for (auto& [x, lb] : unknown)
        if (lb <= np.value_at(x))
            throw PrecisionError("coefficient at Z^" + std::to_string(x) + " is zero to precision " + to_string(RatInf(lb)) +
                                 " and may touch the Newton polygon");
    return np;
}

CanSubReport can_sub_exists(const LocalDrinfeld& phi, int n) {
    if (n < 1) throw PreconditionError("echelon must be >= 1");
    for (auto& c : phi.phi_pi.coeffs())
        if (!c.is_exact() && c.prec_pi() <= Rat(2)) throw PrecisionError("coefficients must be known beyond pi^2");
    CanSubReport rep;
    auto hasse = [](const LocalDrinfeld& m) { return m.coeff(1).val_known() ? m.coeff(1).vpi() : RatInf(m.coeff(1).vpi_lb()); };
    const RatInf v = hasse(phi);
    rep.sufficient = phi.coeff(1).val_known() && v && *v < Rat(1, 2 * static_cast<std::int64_t>(upow(phi.Q, n - 1)));
    LocalDrinfeld cur = phi;
    rep.hasse_chain.push_back(v);
    // left cofactor of the previous step; its kernel is phi[pi]/C_1 inside the quotient
    std::optional<TauPoly<LocalElem>> hat;
    for (int level = 1;; ++level) {
        if (!local_newton(cur).is_vertex(static_cast<std::int64_t>(cur.Q))) break;
        if (level == n && !hat) {
            rep.exists = true;
            break;
        }
        auto H = can_sub_kernel(cur);
        if (hat) {
            // the next step must leave phi[pi], else C_n is not cyclic
            auto rem = skew_right_divide(*hat, H.ell).second;
            bool inside = true;
            for (auto& c : rem.coeffs()) inside = inside && c.is_zero();
            if (inside) break;
        }
        if (level == n) {
            rep.exists = true;
            break;
        }
        hat = skew_right_divide(cur.phi_pi, H.ell).first;
        cur = quotient(cur, H);
        rep.hasse_chain.push_back(hasse(cur));
    }
    return rep;
}

StrictPiece can_sub_kernel(const LocalDrinfeld& phi, KernelCertificate* cert) {
    const LocalRing* R = phi.ring();
    if (!local_newton(phi).is_vertex(static_cast<std::int64_t>(phi.Q)))
        throw PreconditionError("no Newton break at Z^Q: canonical subgroup does not exist");
    const Rat v1 = *phi.coeff(1).vpi();
    const int N = working_prec(phi.phi_pi);
    // remainder of phi_pi by (a + tau) is P(a) = sum (-1)^i a_i a^{e_i}, e_i = 1 + Q + ... + Q^{i-1}
    std::vector<long long> e(static_cast<std::size_t>(phi.r) + 1, 0);
    for (int i = 1; i <= phi.r; ++i) e[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i - 1)] * static_cast<long long>(phi.Q) + 1;
    auto P = [&](const LocalElem& a, bool deriv) {
        LocalElem acc = LocalElem::zero(R);
        for (int i = deriv ? 1 : 0; i <= phi.r; ++i) {
            // e_i is 1 mod p, so d/da a^{e_i} = a^{e_i - 1}
            auto t = phi.coeff(i) * a.pow(e[static_cast<std::size_t>(i)] - (deriv ? 1 : 0));
            acc = (i % 2) ? acc - t : acc + t;
        }
        return acc;
    };
    LocalElem a = (pi_of(R) / phi.coeff(1)).truncate(N);
    int it = 0;
    for (; it < 200; ++it) {
        auto val = P(a, false);
        if (val.is_zero()) break;
        auto step = val / P(a, true);
        if (step.is_zero()) break;
        a = (a - step).truncate(N);
    }
    if (!P(a, false).is_zero())
        throw PrecisionError("kernel iteration did not settle; try precision >= " +
                             std::to_string(2 * (N / R->E) + 2));
    const auto va = a.vpi();
    if (!va || *va != Rat(1) - v1) throw PrecisionError("kernel coefficient valuation is not determined at this precision");
    StrictPiece H;
    H.ell = TauPoly<LocalElem>(LocalElem::zero(R), phi.Q, {a, LocalElem::one(R)});
    H.m = 1;
    auto [quot, rem] = skew_right_divide(phi.phi_pi, H.ell);
    const Rat res = residual_of(rem, N, R->E);
    if (cert) {
        cert->iterations = it;
        cert->residual = res;
    }
    return H;
}

Rat deg_pi(const StrictPiece& H) {
    if (H.ell.deg() < 1) throw PreconditionError("piece must have positive tau-degree");
    auto lead = H.ell.coeffs().back().wval();
    if (!lead || *lead != 0) throw PreconditionError("defining polynomial is not monic up to a unit");
    auto v = H.ell.coeffs().front().vpi();
    if (!v) throw PreconditionError("linear coefficient vanishes: piece is not etale over the generic fiber");
    return *v;
}

Rat htt_exponent(const LocalDrinfeld& phi) {
    auto H = can_sub_kernel(phi);
    const Rat va = deg_pi(H);
    const Rat Qm1(static_cast<std::int64_t>(phi.Q) - 1);
    const Rat w = (Rat(1) - va) / Qm1;
    const RatInf v = v_hasse(phi);
    if (v && w < *v / Qm1) throw PreconditionError("cokernel exponent below v(Ha)/(Q-1)");
    return w;
}

LocalDrinfeld quotient(const LocalDrinfeld& phi, const StrictPiece& H) {
    auto psi = quotient_by_kernel(phi.as_module(), H.ell);
    return make_local_drinfeld(phi.q, phi.d, phi.R, psi.phi_T.coeffs());
}

StrictPiece line_piece(const LocalElem& z, std::uint64_t Q) {
    const LocalRing* R = z.ring();
    StrictPiece H;
    H.ell = TauPoly<LocalElem>(LocalElem::zero(R), Q, {-z.pow(static_cast<long long>(Q) - 1), LocalElem::one(R)});
    H.m = 1;
    return H;
}

SplitRank2 make_split_rank2(std::uint64_t q, int d, LocalRingPtr R, const LocalElem& z1, const LocalElem& z2) {
    const LocalRing* Rp = R.get();
    const std::uint64_t Q = upow(q, d);
    if (z1.is_zero()) throw PreconditionError("torsion basis element is zero");
    auto l1 = line_piece(z1, Q);
    auto w = l1.ell.eval(z2);
    if (w.is_zero()) throw PreconditionError("torsion basis is dependent over F_Q");
    auto l2 = line_piece(w, Q);
    auto P = l2.ell * l1.ell;
    const auto b = P.coeffs().front();
    auto vb = b.wval();
    if (!vb || *vb != Rp->E)
        throw PreconditionError("torsion basis gives linear coefficient of valuation " + to_string(b.vpi()) + ", need 1");
    const auto u = pi_of(Rp) / b;
    std::vector<LocalElem> c;
    for (auto& x : P.coeffs()) c.push_back(u * x);
    c[0] = pi_of(Rp);
    SplitRank2 s{make_local_drinfeld(q, d, R, c), z1, z2, {}};
    auto [p, a] = prime_power(q);
    auto FQ = FieldCtx::make(p, a * static_cast<std::uint32_t>(d));
    FieldEmbedding emb(FQ, R->F);
    s.lines.push_back(z1);
    for (std::uint32_t k = 0; k < FQ->q(); ++k) s.lines.push_back(z2 + LocalElem::constant(Rp, emb(k)) * z1);
    return s;
}

std::vector<UpEdge> up_correspondence(const SplitRank2& y, std::size_t H, unsigned jobs) {
    if (y.phi.r != 2) throw PreconditionError("correspondence is implemented in rank 2");
    if (H >= y.lines.size()) throw PreconditionError("line index out of range");
    std::vector<std::size_t> idx;
    for (std::size_t L = 0; L < y.lines.size(); ++L)
        if (L != H) idx.push_back(L);
    std::vector<UpEdge> out(idx.size());
    std::vector<std::exception_ptr> err(idx.size());
    auto one = [&](std::size_t k) {
        try {
            UpEdge& e = out[k];
            e.L = idx[k];
            auto lL = line_piece(y.lines[e.L], y.phi.Q);
            e.target = quotient(y.phi, lL);
            e.image_gen = lL.ell.eval(y.lines[H]);
            e.image = line_piece(e.image_gen, y.phi.Q);
            e.deg = deg_pi(e.image);
            auto [quot, rem] = skew_right_divide(e.target.phi_pi, e.image.ell);
            e.residual = residual_of(rem, working_prec(e.target.phi_pi), y.phi.R->E);
        } catch (...) {
            err[k] = std::current_exception();
        }
    };
    jobs = std::max(1u, jobs);
    if (jobs == 1) {
        for (std::size_t k = 0; k < idx.size(); ++k) one(k);
    } else {
        std::vector<std::thread> th;
        for (unsigned w = 0; w < jobs; ++w)
            th.emplace_back([&, w] {
                for (std::size_t k = w; k < idx.size(); k += jobs) one(k);
            });
        for (auto& t : th) t.join();
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

std::size_t canonical_line(const SplitRank2& y) {
    std::size_t best = 0;
    Rat bd = deg_pi(line_piece(y.lines[0], y.phi.Q));
    for (std::size_t i = 1; i < y.lines.size(); ++i) {
        Rat d = deg_pi(line_piece(y.lines[i], y.phi.Q));
        if (d > bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

DynamicsReport deg_dynamics_check(const SplitRank2& y, std::size_t H, unsigned jobs) {
    DynamicsReport rep;
    rep.deg_y = deg_pi(line_piece(y.lines.at(H), y.phi.Q));
    const bool boundary = rep.deg_y == Rat(0) || rep.deg_y == Rat(1);
    for (auto& e : up_correspondence(y, H, jobs)) {
        rep.degs.emplace_back(e.L, e.deg);
        const Rat inc = e.deg - rep.deg_y;
        if (inc < Rat(0)) rep.monotone = false;
        if (inc == Rat(0)) {
            ++rep.equalities;
            if (!boundary) rep.classification_ok = false;
        }
        rep.min_increment = inf_min(rep.min_increment, RatInf(inc));
    }
    return rep;
}

std::string local_to_string(const LocalElem& x) { return x.to_string(); }

LocalInput parse_local_module_json(const std::string& text, int prec) {
    if (prec < 3) throw PreconditionError("precision must be >= 3");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0, e.byte);
    }
    if (!j.is_object()) throw PreconditionError("module JSON must be an object");
    LocalInput in;
    if (j.contains("phi_T")) {
        auto desc = parse_module_json(text);
        if (desc.prime.deg() != 1) throw PreconditionError("local analysis of a global module needs a degree-1 prime");
        Localizer loc(desc.F, desc.prime, prec);
        auto phipi = phi_eval(desc.phi, desc.prime);
        std::vector<LocalElem> c;
        for (auto& x : phipi.coeffs()) c.push_back(loc(x));
        in.phi = make_local_drinfeld(desc.phi.q, 1, loc.ring(), c);
        return in;
    }
    auto geti = [&](const char* k, std::int64_t dflt) -> std::int64_t {
        if (!j.contains(k)) {
            if (dflt < 0) throw PreconditionError(std::string("module JSON lacks \"") + k + "\"");
            return dflt;
        }
        if (!j.at(k).is_number_integer()) throw PreconditionError(std::string("\"") + k + "\" must be an integer");
        return j.at(k).get<std::int64_t>();
    };
    const auto q = geti("q", -1);
    const auto d = geti("d", 1);
    const auto E = geti("E", 1);
    const auto f = geti("f", d);
    if (q < 2 || d < 1 || E < 1 || f < 1 || E > 4096) throw PreconditionError("q, d, E, f out of range");
    auto [p, a] = prime_power(static_cast<std::uint64_t>(q));
    auto F = FieldCtx::make(p, a * static_cast<std::uint32_t>(f));
    const int N = prec * static_cast<int>(E);
    auto R = make_local_ring(F, static_cast<int>(E), N);
    auto list = [&](const char* k) {
        const auto& arr = j.at(k);
        if (!arr.is_array()) throw PreconditionError(std::string("\"") + k + "\" must be an array");
        std::vector<LocalElem> c;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string()) throw PreconditionError(std::string(k) + "[" + std::to_string(i) + "] must be a string");
            try {
                c.push_back(parse_local(R.get(), arr[i].get<std::string>(), N));
            } catch (const ParseError& pe) {
                throw ParseError(std::string(k) + "[" + std::to_string(i) + "]: " + pe.what(), 0, pe.column);
            }
        }
        return c;
    };
    if (j.contains("phi_pi")) {
        auto c = list("phi_pi");
        // the linear coefficient is pi by definition; keep it exact
        if (!c.empty() && is_pi(c[0])) c[0] = pi_of(R.get());
        in.phi = make_local_drinfeld(static_cast<std::uint64_t>(q), static_cast<int>(d), R, c);
        return in;
    }
    if (j.contains("torsion_basis")) {
        auto z = list("torsion_basis");
        if (z.size() != 2) throw PreconditionError("\"torsion_basis\" must have two entries");
        in.split = make_split_rank2(static_cast<std::uint64_t>(q), static_cast<int>(d), R, z[0], z[1]);
        in.phi = in.split->phi;
        return in;
    }
    throw PreconditionError("module JSON needs \"phi_T\", \"phi_pi\" or \"torsion_basis\"");
}

}  // namespace drinfeld
