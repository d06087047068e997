#include "drinfeld/weights.hpp"

#include "drinfeld/parsing.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

namespace drinfeld {

namespace {

LocalElem int_elem(const LocalRing* R, long long n) { return LocalElem::constant(R, R->F->from_int(n)); }

RatInf val_lb_of(const LocalElem& x) { return x.is_exact_zero() ? RatInf() : RatInf(x.vpi_lb()); }

RatInf min_lb(const MahlerFunction& f) {
    RatInf m;
    for (auto& c : f.a) m = inf_min(m, val_lb_of(c));
    return m;
}

// cut x at valuation t (pi-units)
LocalElem cut(const LocalElem& x, const RatInf& t) {
    if (!t) return x;
    const int E = x.ring()->E;
    const Rat w = *t * Rat(E);
    return x.truncate(static_cast<int>(ceil_rat(w)));
}

MahlerFunction pad(const MahlerFunction& f, int J) {
    MahlerFunction g = f;
    while (g.J() < J) g.a.push_back(LocalElem::zero(f.ring()));
    return g;
}

void check_same(const MahlerFunction& f, const MahlerFunction& g) {
    if (f.a.empty() || g.a.empty()) throw PreconditionError("empty Mahler expansion");
    if (f.ring() != g.ring()) throw PreconditionError("Mahler expansions over different rings");
}

}  // namespace

std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    while (k > 0 || n > 0) {
        const std::uint64_t nd = n % p, kd = k % p;
        if (kd > nd) return 0;
        // small binomial mod p via multiplicative formula with inverses
        std::uint64_t num = 1, den = 1;
        for (std::uint64_t i = 0; i < kd; ++i) {
            num = num * ((nd - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        std::uint64_t inv = 1, b = den, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * b % p;
            b = b * b % p;
            e >>= 1;
        }
        r = r * (num * inv % p) % p;
        n /= p;
        k /= p;
    }
    return static_cast<std::uint32_t>(r);
}

MahlerFunction mahler_constant(const LocalElem& c, int J) {
    if (J < 0) throw PreconditionError("truncation index must be >= 0");
    MahlerFunction f;
    f.a.assign(static_cast<std::size_t>(J) + 1, LocalElem::zero(c.ring()));
    f.a[0] = c;
    return f;
}

MahlerFunction operator+(const MahlerFunction& f0, const MahlerFunction& g0) {
    check_same(f0, g0);
    const int J = std::max(f0.J(), g0.J());
    auto f = pad(f0, J), g = pad(g0, J);
    MahlerFunction h;
    for (int j = 0; j <= J; ++j) h.a.push_back(f.a[static_cast<std::size_t>(j)] + g.a[static_cast<std::size_t>(j)]);
    h.tail = inf_min(f.tail, g.tail);
    return h;
}

MahlerFunction operator-(const MahlerFunction& f, const MahlerFunction& g) {
    return f + scale(g, -LocalElem::one(g.ring()));
}

MahlerFunction scale(const MahlerFunction& f, const LocalElem& c) {
    MahlerFunction h;
    for (auto& x : f.a) h.a.push_back(c * x);
    if (f.tail) {
        if (c.is_exact_zero()) h.tail = std::nullopt;
        else h.tail = *f.tail + c.vpi_lb();
    }
    return h;
}

MahlerFunction div_pi_pow(const MahlerFunction& f, int k) {
    MahlerFunction h;
    const int E = f.ring()->E;
    for (auto& x : f.a) h.a.push_back(x.shift(-k * E));
    if (f.tail) h.tail = *f.tail - Rat(k);
    return h;
}

MahlerFunction operator*(const MahlerFunction& f, const MahlerFunction& g) {
    check_same(f, g);
    const LocalRing* R = f.ring();
    const std::uint32_t p = R->F->p();
    const int J = std::min(f.J(), g.J());
    MahlerFunction h;
    h.a.assign(static_cast<std::size_t>(J) + 1, LocalElem::zero(R));
    RatInf dropped;
    // binom(s,i) binom(s,j) = sum_n binom(n,i) binom(i,n-j) binom(s,n), max(i,j) <= n <= i+j
    std::map<int, LocalElem> over;
    for (int i = 0; i <= f.J(); ++i) {
        const auto& fi = f.a[static_cast<std::size_t>(i)];
        if (fi.is_exact_zero()) continue;
        for (int j = 0; j <= g.J(); ++j) {
            const auto& gj = g.a[static_cast<std::size_t>(j)];
            if (gj.is_exact_zero()) continue;
            const auto prod = fi * gj;
            for (int n = std::max(i, j); n <= i + j; ++n) {
                const auto c = binom_mod_p(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i), p) *
                               binom_mod_p(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n - j), p) % p;
                if (!c) continue;
                auto t = int_elem(R, c) * prod;
                if (n <= J) h.a[static_cast<std::size_t>(n)] += t;
                else {
                    auto it = over.find(n);
                    if (it == over.end()) over.emplace(n, t);
                    else it->second += t;
                }
            }
        }
    }
    // c_n for n <= J only involves stored coefficients; the rest is bounded below
    for (auto& [n, c] : over) dropped = inf_min(dropped, val_lb_of(c));
    const RatInf mf = inf_min(min_lb(f), f.tail), mg = inf_min(min_lb(g), g.tail);
    RatInf t = dropped;
    if (f.tail && mg) t = inf_min(t, RatInf(*f.tail + *mg));
    if (g.tail && mf) t = inf_min(t, RatInf(*g.tail + *mf));
    h.tail = t;
    return h;
}

IwasawaElem operator*(const IwasawaElem& x, const IwasawaElem& y) {
    IwasawaElem z;
    z.chi = x.chi + y.chi;
    for (auto& s : x.terms)
        for (auto& t : y.terms) {
            if (s.exps.size() != t.exps.size()) throw PreconditionError("group-like arity mismatch");
            IwasawaElem::Term u{s.exps, s.coeff * t.coeff};
            for (std::size_t i = 0; i < u.exps.size(); ++i) u.exps[i] += t.exps[i];
            z.terms.push_back(std::move(u));
        }
    return z;
}

IwasawaElem operator+(const IwasawaElem& x, const IwasawaElem& y) {
    if (x.chi != y.chi) throw PreconditionError("sum of elements in different character components");
    IwasawaElem z = x;
    z.terms.insert(z.terms.end(), y.terms.begin(), y.terms.end());
    return z;
}

MahlerFunction mahler_embed(const IwasawaElem& x, const std::vector<LocalElem>& gens, int J) {
    if (gens.empty()) throw PreconditionError("no group-like generators");
    if (J < 0) throw PreconditionError("truncation index must be >= 0");
    const LocalRing* R = gens.front().ring();
    for (auto& z : gens) {
        if (z.ring() != R) throw PreconditionError("generators over different rings");
        if (z.vpi_lb() < Rat(1)) {
            if (z.val_known()) throw PreconditionError("generator 1 + z with v(z) = " + to_string(z.vpi()) + " < 1 is not in 1 + pi A_p");
            throw PrecisionError("valuation of a generator is not determined");
        }
    }
    MahlerFunction f = mahler_constant(LocalElem::zero(R), J);
    for (auto& t : x.terms) {
        if (t.exps.size() != gens.size()) throw PreconditionError("group-like arity mismatch");
        LocalElem u = LocalElem::one(R);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (t.exps[i] < 0) throw PreconditionError("negative exponents of group-likes are not supported");
            u *= (LocalElem::one(R) + gens[i]).pow(t.exps[i]);
        }
        // [1 + z] -> sum_j z^j binom(s, j)
        const LocalElem z = u - LocalElem::one(R);
        MahlerFunction g;
        LocalElem zp = t.coeff;
        for (int j = 0; j <= J; ++j) {
            g.a.push_back(zp);
            zp = zp * z;
        }
        if (!zp.is_exact_zero()) g.tail = z.is_exact_zero() ? RatInf() : RatInf(zp.vpi_lb());
        if (z.is_exact_zero()) g.tail = std::nullopt;
        f = f + g;
    }
    return f;
}

LocalElem eval_weight(const MahlerFunction& f, std::uint64_t k) {
    const LocalRing* R = f.ring();
    const std::uint32_t p = R->F->p();
    LocalElem acc = LocalElem::zero(R);
    const std::uint64_t top = std::min<std::uint64_t>(k, static_cast<std::uint64_t>(f.J()));
    for (std::uint64_t j = 0; j <= top; ++j) {
        const auto c = binom_mod_p(k, j, p);
        if (c) acc += int_elem(R, c) * f.a[j];
    }
    if (k > static_cast<std::uint64_t>(f.J()) && f.tail) {
        acc = cut(acc, f.tail);
        if (acc.is_zero() && !acc.is_exact())
            throw PrecisionError("Mahler expansion truncated too early to evaluate at k = " + std::to_string(k));
    }
    return acc;
}

WeightChar WeightChar::from_int(std::uint64_t k, std::uint32_t p, std::uint64_t Qd) {
    WeightChar w;
    w.chi = static_cast<int>(k % (Qd - 1));
    for (std::uint64_t t = k; t; t /= p) w.digits.push_back(static_cast<std::uint32_t>(t % p));
    w.exact = true;
    return w;
}

LocalElem eval_weight(const MahlerFunction& f, const WeightChar& s, std::uint32_t p) {
    const LocalRing* R = f.ring();
    if (R->F->p() != p) throw PreconditionError("weight digits in a different characteristic");
    if (s.exact && s.digits.size() < 40) {
        std::uint64_t k = 0;
        for (std::size_t i = s.digits.size(); i-- > 0;) k = k * p + s.digits[i];
        return eval_weight(f, k);
    }
    // binom(s, j) mod p = prod_i binom(s_i, j_i); undetermined once j has a digit past the known ones
    LocalElem acc = LocalElem::zero(R);
    RatInf unknown = f.tail;
    for (int j = 0; j <= f.J(); ++j) {
        std::uint64_t c = 1;
        std::uint64_t jj = static_cast<std::uint64_t>(j);
        std::size_t i = 0;
        bool determined = true;
        while (jj) {
            const std::uint32_t jd = static_cast<std::uint32_t>(jj % p);
            if (i >= s.digits.size()) {
                determined = false;
                break;
            }
            c = c * binom_mod_p(s.digits[i], jd, p) % p;
            jj /= p;
            ++i;
        }
        if (!determined) {
            unknown = inf_min(unknown, val_lb_of(f.a[static_cast<std::size_t>(j)]));
            continue;
        }
        if (c) acc += int_elem(R, static_cast<long long>(c)) * f.a[static_cast<std::size_t>(j)];
    }
    return cut(acc, unknown);
}

RatInf gauss_valuation(const MahlerFunction& f) {
    RatInf known;
    RatInf undecided = f.tail;
    bool any_known = false;
    for (auto& c : f.a) {
        if (c.is_exact_zero()) continue;
        if (c.val_known()) {
            known = inf_min(known, c.vpi());
            any_known = true;
        } else {
            undecided = inf_min(undecided, RatInf(c.vpi_lb()));
        }
    }
    if (!any_known) {
        if (!undecided) return std::nullopt;
        throw PrecisionError("all Mahler coefficients are indeterminate");
    }
    if (undecided && !inf_less(known, undecided))
        throw PrecisionError("truncation tail or indeterminate coefficient may lower the sup norm below " + to_string(known));
    return known;
}

bool lambda_plus_member(const MahlerFunction& f) {
    const RatInf v = gauss_valuation(f);
    return !v || *v >= Rat(0);
}

WeightDistance weight_distance(const WeightChar& k, const WeightChar& kp) {
    WeightDistance d;
    d.same_char = k.chi == kp.chi;
    if (!d.same_char) return d;
    const std::size_t n = std::max(k.digits.size(), kp.digits.size());
    auto digit = [](const WeightChar& w, std::size_t i) -> std::optional<std::uint32_t> {
        if (i < w.digits.size()) return w.digits[i];
        if (w.exact) return 0u;
        return std::nullopt;
    };
    for (std::size_t i = 0; i < n; ++i) {
        auto a = digit(k, i), b = digit(kp, i);
        if (!a || !b) {
            d.vp = static_cast<int>(i);
            d.exact = false;
            return d;
        }
        if (*a != *b) {
            d.vp = static_cast<int>(i);
            return d;
        }
    }
    if (!(k.exact && kp.exact)) {
        d.vp = static_cast<int>(n);
        d.exact = false;
    }
    return d;
}

MahlerFunction mahler_from_values(const std::vector<LocalElem>& values) {
    if (values.empty()) throw PreconditionError("no values to invert");
    const LocalRing* R = values.front().ring();
    const std::uint32_t p = R->F->p();
    MahlerFunction f;
    for (std::size_t j = 0; j < values.size(); ++j) {
        LocalElem acc = LocalElem::zero(R);
        for (std::size_t i = 0; i <= j; ++i) {
            const auto c = binom_mod_p(j, i, p);
            if (!c) continue;
            const auto t = int_elem(R, c) * values[i];
            acc = ((j - i) % 2) ? acc - t : acc + t;
        }
        f.a.push_back(acc);
    }
    return f;
}

WeightExpr parse_weight_expr(const std::string& text, int prec) {
    if (prec < 1) throw PreconditionError("precision must be >= 1");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0, e.byte);
    }
    if (!j.is_object() || !j.contains("q") || !j.at("q").is_number_integer())
        throw PreconditionError("weight expression needs an integer \"q\"");
    const auto q = j.at("q").get<std::int64_t>();
    const auto d = j.value("d", 1);
    if (q < 2 || d < 1) throw PreconditionError("q, d out of range");
    auto [p, a] = prime_power(static_cast<std::uint64_t>(q));
    WeightExpr w;
    w.p = p;
    w.R = make_local_ring(FieldCtx::make(p, a * static_cast<std::uint32_t>(d)), 1, prec);
    if (!j.contains("gens") || !j.at("gens").is_array() || j.at("gens").empty())
        throw PreconditionError("weight expression needs a nonempty \"gens\" array");
    const auto& gens = j.at("gens");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (!gens[i].is_string()) throw PreconditionError("gens[" + std::to_string(i) + "] must be a string");
        try {
            w.gens.push_back(parse_local(w.R.get(), gens[i].get<std::string>(), prec));
        } catch (const ParseError& pe) {
            throw ParseError("gens[" + std::to_string(i) + "]: " + pe.what(), 0, pe.column);
        }
    }
    std::uint64_t Qd = 1;
    for (int i = 0; i < d; ++i) Qd *= static_cast<std::uint64_t>(q);
    const auto chi = j.value("chi", 0);
    if (chi < 0 || static_cast<std::uint64_t>(chi) >= Qd - 1 + (Qd == 2 ? 1 : 0))
        throw PreconditionError("character index out of range");
    w.x.chi = chi;
    if (!j.contains("terms") || !j.at("terms").is_array()) throw PreconditionError("weight expression needs a \"terms\" array");
    for (auto& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("exps") || !t.at("exps").is_array())
            throw PreconditionError("each term needs an \"exps\" array");
        IwasawaElem::Term term;
        for (auto& e : t.at("exps")) {
            if (!e.is_number_integer()) throw PreconditionError("exponents must be integers");
            term.exps.push_back(e.get<int>());
        }
        if (term.exps.size() != w.gens.size()) throw PreconditionError("exponent vector length differs from gens");
        term.coeff = parse_local(w.R.get(), t.value("coeff", std::string("1")), prec);
        w.x.terms.push_back(std::move(term));
    }
    return w;
}

}  // namespace drinfeld
