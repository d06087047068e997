#pragma once
#include "drinfeld/field.hpp"

#include <string>
#include <vector>

namespace drinfeld {

// Dense polynomial helpers over a table field, low-to-high, trimmed.
namespace poly {
using Vec = std::vector<std::uint32_t>;
void trim(Vec& a);
int deg(const Vec& a);  // -1 for zero
Vec add(const FieldCtx& F, const Vec& a, const Vec& b);
Vec sub(const FieldCtx& F, const Vec& a, const Vec& b);
Vec mul(const FieldCtx& F, const Vec& a, const Vec& b);
Vec scale(const FieldCtx& F, std::uint32_t c, const Vec& a);
// a = q*b + r, b != 0
void divmod(const FieldCtx& F, const Vec& a, const Vec& b, Vec& q, Vec& r);
Vec mod(const FieldCtx& F, const Vec& a, const Vec& b);
Vec gcd(const FieldCtx& F, Vec a, Vec b);  // monic
Vec powmod(const FieldCtx& F, Vec a, std::uint64_t n, const Vec& m);
Vec monic(const FieldCtx& F, const Vec& a);
std::uint32_t eval(const FieldCtx& F, const Vec& a, std::uint32_t x);
// irreducibility over F via gcd(f, x^{Q^i} - x) = 1 for i <= deg/2, Q = |F|
bool irreducible(const FieldCtx& F, const Vec& f);
}  // namespace poly

// Element of A = F_q[T].
class APoly {
public:
    static constexpr int kDegZero = -1;

    APoly() = default;
    explicit APoly(const FieldCtx* F) : F_(F) {}
    APoly(const FieldCtx* F, std::vector<std::uint32_t> c) : F_(F), c_(std::move(c)) { poly::trim(c_); }
    static APoly constant(const FieldCtx* F, std::uint32_t a) { return APoly(F, {a}); }
    static APoly T(const FieldCtx* F) { return APoly(F, {0, 1}); }

    const FieldCtx* field() const { return F_; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::uint32_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    std::uint32_t lead() const { return c_.empty() ? 0 : c_.back(); }

    friend bool operator==(const APoly& a, const APoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const APoly& a, const APoly& b) { return !(a == b); }
    friend APoly operator+(const APoly& a, const APoly& b);
    friend APoly operator-(const APoly& a, const APoly& b);
    friend APoly operator*(const APoly& a, const APoly& b);
    APoly operator-() const;
    APoly& operator+=(const APoly& o) { return *this = *this + o; }
    APoly& operator*=(const APoly& o) { return *this = *this * o; }
    // exact division only (units of A are constants); throws otherwise
    friend APoly operator/(const APoly& a, const APoly& b);
    APoly pow(std::uint64_t n) const;
    std::uint32_t eval(std::uint32_t x) const { return poly::eval(*F_, c_, x); }
    APoly zero_like() const { return APoly(F_); }
    APoly one_like() const { return constant(F_, 1); }
    APoly inv() const;  // constants only

    std::string to_string(const std::string& var = "T") const;

private:
    const FieldCtx* F_ = nullptr;
    std::vector<std::uint32_t> c_;
};

// (sum c_i T^i)^q = sum c_i^q T^{iq}
APoly frob(const APoly& a, std::uint64_t q);

// divmod in A
void divmod(const APoly& a, const APoly& b, APoly& q, APoly& r);

// Element of F_q(T), numerator/denominator coprime, denominator monic.
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(APoly num);
    RatFunc(APoly num, APoly den);

    const APoly& num() const { return num_; }
    const APoly& den() const { return den_; }
    const FieldCtx* field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc operator-() const { return RatFunc(-num_, den_); }
    RatFunc pow(std::int64_t n) const;

    // "num" or "(num)/(den)"
    std::string to_string() const;

private:
    APoly num_, den_;
};

}  // namespace drinfeld
