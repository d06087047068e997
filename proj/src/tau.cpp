#include "drinfeld/tau.hpp"

#include "drinfeld/parsing.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace drinfeld {

namespace {

std::uint32_t log_base(std::uint64_t n, std::uint32_t p) {
    std::uint32_t k = 0;
    while (n > 1) {
        if (n % p) throw PreconditionError(std::to_string(n) + " is not a power of " + std::to_string(p));
        n /= p;
        ++k;
    }
    return k;
}

}  // namespace

KernelPoints kernel_points(const TauPoly<Fq>& ell, FieldPtr coeff_field, std::uint32_t ext, std::uint64_t bound) {
    if (ell.is_zero()) throw PreconditionError("kernel of the zero polynomial");
    if (ext < 1) throw PreconditionError("extension degree must be >= 1");
    const std::uint32_t p = coeff_field->p();
    const std::uint32_t a = log_base(ell.q(), p);
    std::uint64_t size = 1;
    for (std::uint32_t i = 0; i < a * ext; ++i) {
        size *= p;
        if (size > bound) throw PreconditionError("brute-force bound exceeded: q^e = " + std::to_string(ell.q()) + "^" + std::to_string(ext));
    }
    FieldPtr K = coeff_field->q() == size ? coeff_field : FieldCtx::make(p, a * ext, bound);
    if (K->e() % coeff_field->e() != 0)
        throw PreconditionError("coefficient field does not embed in F_{q^" + std::to_string(ext) + "}");
    std::vector<std::uint32_t> c;
    if (K == coeff_field) {
        for (auto& x : ell.coeffs()) c.push_back(x.v);
    } else {
        FieldEmbedding emb(coeff_field, K);
        for (auto& x : ell.coeffs()) c.push_back(emb(x.v));
    }
    KernelPoints out{K, {}};
    const auto& F = *K;
    for (std::uint32_t x = 0; x < F.q(); ++x) {
        std::uint32_t acc = 0, xp = x;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) xp = F.pow(xp, ell.q());
            if (c[i]) acc = F.add(acc, F.mul(c[i], xp));
        }
        if (acc == 0) out.roots.push_back(x);
    }
    return out;
}

std::uint32_t kernel_dim_in_extension(const TauPoly<Fq>& ell, FieldPtr coeff_field, std::uint32_t m) {
    if (ell.is_zero()) throw PreconditionError("kernel of the zero polynomial");
    ExtField K(coeff_field, m);
    const std::uint32_t n = K.prime_dim();
    std::vector<ExtField::Elem> c;
    for (auto& x : ell.coeffs()) c.push_back(K.embed(x.v));
    std::vector<std::vector<std::uint32_t>> rows;
    for (std::uint32_t j = 0; j < n; ++j) {
        std::vector<std::uint32_t> e(n, 0);
        e[j] = 1;
        auto b = K.from_coords(e);
        auto acc = K.zero();
        auto bp = b;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) bp = K.pow(bp, ell.q());
            acc = K.add(acc, K.mul(c[i], bp));
        }
        rows.push_back(K.coords(acc));
    }
    return n - static_cast<std::uint32_t>(rank_mod_p(rows, coeff_field->p()));
}

std::uint64_t gl_exponent(std::uint32_t n, std::uint32_t q) {
    auto [p, e] = prime_power(q);
    auto F = FieldCtx::make(p, e);
    const std::uint32_t n2 = n * n;
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n2; ++i) {
        total *= q;
        if (total > 2000000) throw PreconditionError("GL_n(F_q) too large to enumerate");
    }
    using M = std::vector<std::uint32_t>;
    auto mul = [&](const M& A, const M& B) {
        M C(n2, 0);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t k = 0; k < n; ++k) {
                if (!A[i * n + k]) continue;
                for (std::uint32_t j = 0; j < n; ++j) C[i * n + j] = F->add(C[i * n + j], F->mul(A[i * n + k], B[k * n + j]));
            }
        return C;
    };
    auto invertible = [&](M A) {
        for (std::uint32_t col = 0, row = 0; col < n; ++col, ++row) {
            std::uint32_t piv = row;
            while (piv < n && !A[piv * n + col]) ++piv;
            if (piv == n) return false;
            for (std::uint32_t j = 0; j < n; ++j) std::swap(A[piv * n + j], A[row * n + j]);
            for (std::uint32_t r = row + 1; r < n; ++r) {
                std::uint32_t f = F->div(A[r * n + col], A[row * n + col]);
                for (std::uint32_t j = 0; j < n; ++j) A[r * n + j] = F->sub(A[r * n + j], F->mul(f, A[row * n + j]));
            }
        }
        return true;
    };
    M I(n2, 0);
    for (std::uint32_t i = 0; i < n; ++i) I[i * n + i] = 1;
    std::uint64_t ex = 1;
    for (std::uint64_t code = 0; code < total; ++code) {
        M A(n2);
        std::uint64_t t = code;
        for (auto& x : A) {
            x = static_cast<std::uint32_t>(t % q);
            t /= q;
        }
        if (!invertible(A)) continue;
        M P = A;
        std::uint64_t ord = 1;
        while (P != I) {
            P = mul(P, A);
            ++ord;
        }
        ex = std::lcm(ex, ord);
    }
    return ex;
}

DrinfeldModule<APoly> module_over_A(FieldPtr F, const std::vector<APoly>& phiT) {
    const FieldCtx* f = F.get();
    TauPoly<APoly> t(APoly(f), F->q(), phiT);
    if (t.deg() + 1 != static_cast<int>(phiT.size()))
        throw PreconditionError("leading coefficient of phi_T is zero");
    return DrinfeldModule<APoly>::make(F->q(), t, [f](std::uint32_t a) { return APoly::constant(f, a); });
}

ModuleDescriptor parse_module_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0, e.byte);
    }
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("module descriptor lacks \"") + key + "\"");
        return j.at(key);
    };
    if (!need("q").is_number_integer()) throw PreconditionError("\"q\" must be an integer");
    if (!need("r").is_number_integer()) throw PreconditionError("\"r\" must be an integer");
    const auto q = need("q").get<std::int64_t>();
    const auto r = need("r").get<std::int64_t>();
    if (q < 2) throw PreconditionError("q must be >= 2");
    if (r < 1) throw PreconditionError("rank must be >= 1");
    auto [p, e] = prime_power(static_cast<std::uint64_t>(q));
    ModuleDescriptor d;
    d.F = FieldCtx::make(p, e);
    const FieldCtx* F = d.F.get();
    std::string prime = j.value("prime", std::string("T"));
    d.prime = parse_apoly(F, prime);
    if (d.prime.deg() < 1 || d.prime.lead() != 1) throw PreconditionError("prime generator must be monic of positive degree");
    if (!poly::irreducible(*F, d.prime.coeffs())) throw PreconditionError("prime " + prime + " is reducible");
    const auto& arr = need("phi_T");
    if (!arr.is_array()) throw PreconditionError("\"phi_T\" must be an array");
    if (static_cast<std::int64_t>(arr.size()) != r + 1)
        throw PreconditionError("\"phi_T\" must have r+1 = " + std::to_string(r + 1) + " entries");
    std::vector<APoly> c;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) throw PreconditionError("phi_T[" + std::to_string(i) + "] must be a string");
        try {
            c.push_back(parse_apoly(F, arr[i].get<std::string>()));
        } catch (const ParseError& pe) {
            throw ParseError(std::string("phi_T[") + std::to_string(i) + "]: " + pe.what(), 0, pe.column);
        }
    }
    if (c[0] != APoly::T(F)) throw PreconditionError("phi_T[0] must be T (the structure map is the identity)");
    if (c.back().is_zero()) throw PreconditionError("leading coefficient of phi_T is zero");
    d.phi = module_over_A(d.F, c);
    return d;
}

std::string module_to_json(const ModuleDescriptor& d) {
    nlohmann::json j;
    j["q"] = d.F->q();
    j["r"] = d.phi.r;
    j["prime"] = d.prime.to_string();
    nlohmann::json arr = nlohmann::json::array();
    for (auto& c : d.phi.phi_T.coeffs()) arr.push_back(c.to_string());
    j["phi_T"] = arr;
    return j.dump();
}

ReducedModule reduce_mod_prime(const ModuleDescriptor& d) {
    const int deg = d.prime.deg();
    FieldPtr K = deg == 1 ? d.F : FieldCtx::make(d.F->p(), d.F->e() * static_cast<std::uint32_t>(deg));
    FieldEmbedding emb(d.F, K);
    std::vector<std::uint32_t> pc;
    for (auto c : d.prime.coeffs()) pc.push_back(emb(c));
    std::uint32_t theta = 0;
    bool found = false;
    for (std::uint32_t x = 0; x < K->q() && !found; ++x)
        if (poly::eval(*K, pc, x) == 0) {
            theta = x;
            found = true;
        }
    if (!found) throw PreconditionError("prime has no root in its residue field");
    const FieldCtx* k = K.get();
    std::vector<Fq> c;
    for (auto& a : d.phi.phi_T.coeffs()) {
        std::vector<std::uint32_t> ac;
        for (auto x : a.coeffs()) ac.push_back(emb(x));
        c.emplace_back(k, poly::eval(*K, ac, theta));
    }
    TauPoly<Fq> t(Fq(k, 0), d.F->q(), c);
    ReducedModule out{K, {}};
    out.phi.q = d.F->q();
    out.phi.r = d.phi.r;
    out.phi.phi_T = t;
    out.phi.scalar = [k, emb](std::uint32_t a) { return Fq(k, emb(a)); };
    return out;
}

std::string tau_to_string(const TauPoly<Fq>& f) {
    std::string s;
    for (int i = 0; i <= f.deg(); ++i) {
        auto c = f.coeff(i);
        if (c.is_zero()) continue;
        std::string cs = c.F->to_string(c.v);
        if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
        std::string mono = i == 0 ? "" : (i == 1 ? "tau" : "tau^" + std::to_string(i));
        if (!s.empty()) s += " + ";
        s += i == 0 ? cs : (cs == "1" ? mono : cs + "*" + mono);
    }
    return s.empty() ? "0" : s;
}

std::string tau_to_string(const TauPoly<APoly>& f) {
    std::string s;
    for (int i = 0; i <= f.deg(); ++i) {
        auto c = f.coeff(i);
        if (c.is_zero()) continue;
        std::string cs = c.to_string();
        if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
        std::string mono = i == 0 ? "" : (i == 1 ? "tau" : "tau^" + std::to_string(i));
        if (!s.empty()) s += " + ";
        s += i == 0 ? cs : (cs == "1" ? mono : cs + "*" + mono);
    }
    return s.empty() ? "0" : s;
}

}  // namespace drinfeld
