#pragma once
#include "drinfeld/apoly.hpp"
#include "drinfeld/field.hpp"
#include "drinfeld/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace drinfeld {

// F_{q^f}[[w]] with pi = w^E. Valuations are reported in pi-units (v_w / E).
struct LocalRing {
    FieldPtr F;
    int E = 1;
    // relative precision (w-units) used when an exact quotient is an infinite series
    int rel_cap = 64;
};
using LocalRingPtr = std::shared_ptr<const LocalRing>;

LocalRingPtr make_local_ring(FieldPtr F, int E, int rel_cap);

// Truncated Laurent series sum_{i >= start} c_i w^i, known modulo w^prec.
// prec == kExact marks a finite exact Laurent polynomial.
class LocalElem {
public:
    static constexpr int kExact = 1 << 28;

    LocalElem() = default;
    LocalElem(const LocalRing* R, int start, std::vector<std::uint32_t> c, int prec);

    static LocalElem zero(const LocalRing* R, int prec = kExact) { return LocalElem(R, 0, {}, prec); }
    static LocalElem constant(const LocalRing* R, std::uint32_t a, int prec = kExact) {
        return LocalElem(R, 0, {a}, prec);
    }
    static LocalElem one(const LocalRing* R) { return constant(R, 1); }
    // w^n, exact
    static LocalElem w_pow(const LocalRing* R, int n) { return LocalElem(R, n, {1}, kExact); }
    // pi^n, exact
    static LocalElem pi_pow(const LocalRing* R, int n) { return w_pow(R, n * R->E); }

    const LocalRing* ring() const { return R_; }
    int start() const { return start_; }
    int prec() const { return prec_; }
    bool is_exact() const { return prec_ >= kExact; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    std::uint32_t coeff(int i) const;  // coefficient of w^i

    // zero as far as known (exact zero or zero to precision)
    bool is_zero() const { return c_.empty(); }
    bool is_exact_zero() const { return c_.empty() && is_exact(); }
    bool val_known() const { return !c_.empty() || is_exact(); }
    // w-adic valuation, or prec when indeterminate (a lower bound)
    int val_lb() const { return c_.empty() ? prec_ : start_; }
    // w-adic valuation; throws PrecisionError when indeterminate, nullopt for exact zero
    std::optional<int> wval() const;
    // pi-adic valuation as a rational; nullopt = +inf (exact zero)
    RatInf vpi() const;
    Rat vpi_lb() const { return Rat(val_lb(), R_->E); }
    Rat prec_pi() const { return Rat(prec_, R_->E); }

    LocalElem truncate(int N) const;  // reduce absolute precision to min(prec, N)
    LocalElem zero_like() const { return zero(R_); }
    LocalElem one_like() const { return one(R_); }
    LocalElem inv() const;
    LocalElem pow(long long n) const;
    LocalElem shift(int n) const;  // times w^n

    friend LocalElem operator+(const LocalElem& a, const LocalElem& b);
    friend LocalElem operator-(const LocalElem& a, const LocalElem& b);
    friend LocalElem operator*(const LocalElem& a, const LocalElem& b);
    friend LocalElem operator/(const LocalElem& a, const LocalElem& b);
    LocalElem operator-() const;
    LocalElem& operator+=(const LocalElem& o) { return *this = *this + o; }
    LocalElem& operator-=(const LocalElem& o) { return *this = *this - o; }
    LocalElem& operator*=(const LocalElem& o) { return *this = *this * o; }

    // same value to the common precision, and same precision
    friend bool operator==(const LocalElem& a, const LocalElem& b) {
        return a.prec_ == b.prec_ && a.start_ == b.start_ && a.c_ == b.c_;
    }

    std::string to_string() const;

private:
    void normalize();
    const LocalRing* R_ = nullptr;
    int start_ = 0;
    std::vector<std::uint32_t> c_;
    int prec_ = kExact;
};

// x -> x^Q, coefficientwise in characteristic p
LocalElem frob(const LocalElem& a, std::uint64_t Q);

// true when a and b agree modulo w^N (both must be known that far)
bool agree_mod(const LocalElem& a, const LocalElem& b, int N);

// Completion of A = F_q[T] at a prime f of degree d.
class Localizer {
public:
    Localizer(FieldPtr Fq, const APoly& f, int N);

    const LocalRingPtr& ring() const { return R_; }
    const FieldPtr& base_field() const { return Fq_; }
    int degree() const { return d_; }
    int prec() const { return N_; }
    const APoly& prime() const { return f_; }
    std::uint32_t embed_const(std::uint32_t a) const { return emb_(a); }
    // image of T in F_{q^d}[[pi]]
    const LocalElem& T_image() const { return t_; }
    LocalElem operator()(const APoly& a) const;
    LocalElem operator()(const RatFunc& a) const;

private:
    LocalElem raw(const APoly& a) const;
    FieldPtr Fq_;
    APoly f_;
    int d_, N_;
    LocalRingPtr R_;
    FieldEmbedding emb_;
    LocalElem t_;
};

// errors: reducible f, N < 1
Localizer prime_localize(FieldPtr Fq, const APoly& f, int N);

}  // namespace drinfeld
