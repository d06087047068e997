#pragma once
#include "drinfeld/apoly.hpp"
#include "drinfeld/errors.hpp"
#include "drinfeld/field.hpp"
#include "drinfeld/local.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace drinfeld {

// Coefficient-ring hooks. Each ring type provides frob(x, q) next to its definition.
inline bool exact_zero(const Fq& x) { return x.is_zero(); }
inline bool exact_zero(const APoly& x) { return x.is_zero(); }
inline bool exact_zero(const LocalElem& x) { return x.is_exact_zero(); }
// zero as far as the representation knows
inline bool known_zero(const Fq& x) { return x.is_zero(); }
inline bool known_zero(const APoly& x) { return x.is_zero(); }
inline bool known_zero(const LocalElem& x) { return x.is_zero(); }
inline Fq ring_inverse(const Fq& x) {
    if (x.is_zero()) throw PreconditionError("leading coefficient is not invertible");
    return x.inv();
}
inline APoly ring_inverse(const APoly& x) {
    if (x.deg() != 0) throw PreconditionError("leading coefficient is not invertible in F_q[T]");
    return x.inv();
}
inline LocalElem ring_inverse(const LocalElem& x) {
    if (x.is_zero()) throw PrecisionError("leading coefficient is zero to precision");
    return x.inv();
}

// sum c_i tau^i with tau * a = a^q * tau
template <class R>
class TauPoly {
public:
    TauPoly() = default;
    TauPoly(R proto, std::uint64_t q, std::vector<R> c = {}) : proto_(proto.zero_like()), q_(q), c_(std::move(c)) {
        trim();
    }
    static TauPoly constant(const R& a, std::uint64_t q) { return TauPoly(a, q, {a}); }
    static TauPoly tau_pow(const R& proto, std::uint64_t q, int n) {
        std::vector<R> c(static_cast<std::size_t>(n) + 1, proto.zero_like());
        c.back() = proto.one_like();
        return TauPoly(proto, q, std::move(c));
    }

    std::uint64_t q() const { return q_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<R>& coeffs() const { return c_; }
    R coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : proto_; }
    const R& proto() const { return proto_; }
    // tau-adic valuation: first coefficient not known to vanish; -1 for zero
    int val() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!known_zero(c_[i])) return static_cast<int>(i);
        return -1;
    }

    friend TauPoly operator+(const TauPoly& a, const TauPoly& b) {
        check(a, b);
        std::vector<R> c(std::max(a.c_.size(), b.c_.size()), a.proto_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return TauPoly(a.proto_, a.q_, std::move(c));
    }
    friend TauPoly operator-(const TauPoly& a, const TauPoly& b) {
        check(a, b);
        std::vector<R> c(std::max(a.c_.size(), b.c_.size()), a.proto_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
        return TauPoly(a.proto_, a.q_, std::move(c));
    }
    // composition: (f*g)(x) = f(g(x))
    friend TauPoly operator*(const TauPoly& f, const TauPoly& g) {
        check(f, g);
        if (f.is_zero() || g.is_zero()) return TauPoly(f.proto_, f.q_);
        std::vector<R> c(f.c_.size() + g.c_.size() - 1, f.proto_);
        std::vector<R> gt = g.c_;  // g_j^{q^i}
        for (std::size_t i = 0; i < f.c_.size(); ++i) {
            if (i) for (auto& x : gt) x = frob(x, f.q_);
            if (exact_zero(f.c_[i])) continue;
            for (std::size_t j = 0; j < gt.size(); ++j) c[i + j] = c[i + j] + f.c_[i] * gt[j];
        }
        return TauPoly(f.proto_, f.q_, std::move(c));
    }
    TauPoly scale_left(const R& a) const {
        std::vector<R> c = c_;
        for (auto& x : c) x = a * x;
        return TauPoly(proto_, q_, std::move(c));
    }
    // additive polynomial value sum c_i x^{q^i}
    R eval(const R& x) const {
        R acc = proto_, xp = x;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) xp = frob(xp, q_);
            acc = acc + c_[i] * xp;
        }
        return acc;
    }
    template <class S, class F>
    TauPoly<S> map(const S& proto, F&& f) const {
        std::vector<S> c;
        for (auto& x : c_) c.push_back(f(x));
        return TauPoly<S>(proto, q_, std::move(c));
    }
    friend bool operator==(const TauPoly& a, const TauPoly& b) {
        return a.q_ == b.q_ && a.c_.size() == b.c_.size() && std::equal(a.c_.begin(), a.c_.end(), b.c_.begin());
    }

private:
    static void check(const TauPoly& a, const TauPoly& b) {
        if (a.q_ != b.q_) throw PreconditionError("twisted polynomials with different twists");
    }
    void trim() {
        while (!c_.empty() && exact_zero(c_.back())) c_.pop_back();
    }
    R proto_{};
    std::uint64_t q_ = 0;
    std::vector<R> c_;
};

// f = quot * g + rem with deg(rem) < deg(g)
template <class R>
std::pair<TauPoly<R>, TauPoly<R>> skew_right_divide(const TauPoly<R>& f, const TauPoly<R>& g) {
    if (g.is_zero()) throw PreconditionError("division by the zero twisted polynomial");
    if (f.q() != g.q()) throw PreconditionError("twisted polynomials with different twists");
    const int m = g.deg();
    const std::uint64_t q = f.q();
    std::vector<R> r = f.coeffs();
    if (static_cast<int>(r.size()) - 1 < m) return {TauPoly<R>(f.proto(), q), f};
    std::vector<R> quot(r.size() - static_cast<std::size_t>(m), f.proto());
    // g_j^{q^k} for k = 0.. ; leading inverse likewise
    std::vector<std::vector<R>> gpow{g.coeffs()};
    std::vector<R> linv{ring_inverse(g.coeffs().back())};
    for (int i = static_cast<int>(r.size()) - 1; i >= m; --i) {
        const std::size_t k = static_cast<std::size_t>(i - m);
        while (gpow.size() <= k) {
            auto nx = gpow.back();
            for (auto& x : nx) x = frob(x, q);
            gpow.push_back(std::move(nx));
            linv.push_back(frob(linv.back(), q));
        }
        R c = r[static_cast<std::size_t>(i)] * linv[k];
        quot[k] = c;
        for (int j = 0; j < m; ++j) {
            auto& slot = r[k + static_cast<std::size_t>(j)];
            slot = slot - c * gpow[k][static_cast<std::size_t>(j)];
        }
        r[static_cast<std::size_t>(i)] = f.proto();
    }
    r.resize(static_cast<std::size_t>(m));
    return {TauPoly<R>(f.proto(), q, std::move(quot)), TauPoly<R>(f.proto(), q, std::move(r))};
}

// rank-r module phi: A = F_q[T] -> R{tau}, determined by phi_T
template <class R>
struct DrinfeldModule {
    std::uint64_t q = 0;
    int r = 0;
    TauPoly<R> phi_T;
    // image of constants of F_q in R
    std::function<R(std::uint32_t)> scalar;

    static DrinfeldModule make(std::uint64_t q, TauPoly<R> phiT, std::function<R(std::uint32_t)> scalar) {
        if (phiT.q() != q) throw PreconditionError("twist of phi_T differs from q");
        if (phiT.deg() < 1) throw PreconditionError("phi_T must have positive tau-degree");
        DrinfeldModule m;
        m.q = q;
        m.r = phiT.deg();
        m.phi_T = std::move(phiT);
        m.scalar = std::move(scalar);
        return m;
    }
};

// image of a in R{tau}; errors on a = 0
template <class R>
TauPoly<R> phi_eval(const DrinfeldModule<R>& phi, const APoly& a) {
    if (a.is_zero()) throw PreconditionError("phi_eval of the zero element");
    const R& proto = phi.phi_T.proto();
    TauPoly<R> acc(proto, phi.q);
    for (std::size_t i = a.coeffs().size(); i-- > 0;) {
        acc = acc * phi.phi_T + TauPoly<R>::constant(phi.scalar(a.coeffs()[i]), phi.q);
    }
    return acc;
}

// psi with psi_T * ell = ell * phi_T; errors when ker(ell) is not phi-stable
template <class R>
DrinfeldModule<R> quotient_by_kernel(const DrinfeldModule<R>& phi, const TauPoly<R>& ell) {
    auto [psiT, rem] = skew_right_divide(ell * phi.phi_T, ell);
    for (auto& c : rem.coeffs())
        if (!known_zero(c)) throw PreconditionError("kernel is not stable under phi (nonzero remainder)");
    return DrinfeldModule<R>::make(phi.q, psiT, phi.scalar);
}

// Roots of an additive polynomial over a table field, by exhaustive search in F_{q^e}
// (q = twist). Coefficients are embedded into the target field.
struct KernelPoints {
    FieldPtr field;
    std::vector<std::uint32_t> roots;  // sorted
};
KernelPoints kernel_points(const TauPoly<Fq>& ell, FieldPtr coeff_field, std::uint32_t ext,
                           std::uint64_t bound = FieldCtx::kDefaultBound);

// log_p of the number of roots of ell in the degree-m extension of its coefficient field,
// via the F_p-rank of x -> ell(x)
std::uint32_t kernel_dim_in_extension(const TauPoly<Fq>& ell, FieldPtr coeff_field, std::uint32_t m);

// Exponent of GL_n(F_q): lcm of element orders, by enumeration (small n, q only).
std::uint64_t gl_exponent(std::uint32_t n, std::uint32_t q);

// JSON descriptor {"q", "r", "prime", "phi_T": [...]} for modules over A
struct ModuleDescriptor {
    FieldPtr F;
    APoly prime;
    DrinfeldModule<APoly> phi;
};
ModuleDescriptor parse_module_json(const std::string& text);
std::string module_to_json(const ModuleDescriptor& d);
DrinfeldModule<APoly> module_over_A(FieldPtr F, const std::vector<APoly>& phiT);

// reduction modulo a prime: coefficients land in A/p = F_{q^d}
struct ReducedModule {
    FieldPtr residue;
    DrinfeldModule<Fq> phi;
};
ReducedModule reduce_mod_prime(const ModuleDescriptor& d);

std::string tau_to_string(const TauPoly<Fq>& f);
std::string tau_to_string(const TauPoly<APoly>& f);

}  // namespace drinfeld
