#include "drinfeld/apoly.hpp"

#include "drinfeld/errors.hpp"

namespace drinfeld {
namespace poly {

void trim(Vec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Vec& a) { return static_cast<int>(a.size()) - 1; }

Vec add(const FieldCtx& F, const Vec& a, const Vec& b) {
    Vec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Vec sub(const FieldCtx& F, const Vec& a, const Vec& b) {
    Vec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Vec mul(const FieldCtx& F, const Vec& a, const Vec& b) {
    if (a.empty() || b.empty()) return {};
    Vec r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j]) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

Vec scale(const FieldCtx& F, std::uint32_t c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(c, a[i]);
    trim(r);
    return r;
}

void divmod(const FieldCtx& F, const Vec& a, const Vec& b, Vec& q, Vec& r) {
    if (b.empty()) throw PreconditionError("polynomial division by zero");
    r = a;
    trim(r);
    q.clear();
    if (r.size() < b.size()) return;
    q.assign(r.size() - b.size() + 1, 0);
    const std::uint32_t li = F.inv(b.back());
    for (std::size_t k = r.size(); k-- >= b.size();) {
        std::uint32_t c = F.mul(r[k], li);
        if (c) {
            std::size_t shift = k - (b.size() - 1);
            q[shift] = c;
            for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = F.sub(r[shift + j], F.mul(c, b[j]));
        }
        if (k == 0) break;
    }
    trim(r);
    trim(q);
}

Vec mod(const FieldCtx& F, const Vec& a, const Vec& b) {
    Vec q, r;
    divmod(F, a, b, q, r);
    return r;
}

Vec monic(const FieldCtx& F, const Vec& a) {
    if (a.empty()) return a;
    return scale(F, F.inv(a.back()), a);
}

Vec gcd(const FieldCtx& F, Vec a, Vec b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Vec r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

Vec powmod(const FieldCtx& F, Vec a, std::uint64_t n, const Vec& m) {
    Vec r = {1};
    r = mod(F, r, m);
    a = mod(F, a, m);
    while (n) {
        if (n & 1) r = mod(F, mul(F, r, a), m);
        n >>= 1;
        if (n) a = mod(F, mul(F, a, a), m);
    }
    return r;
}

std::uint32_t eval(const FieldCtx& F, const Vec& a, std::uint32_t x) {
    std::uint32_t acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a[i]);
    return acc;
}

bool irreducible(const FieldCtx& F, const Vec& f0) {
    Vec f = f0;
    trim(f);
    const int n = deg(f);
    if (n < 1) return false;
    if (n == 1) return true;
    Vec x = {0, 1};
    Vec xp = x;  // x^{Q^i} mod f
    for (int i = 1; i <= n / 2; ++i) {
        xp = powmod(F, xp, F.q(), f);
        Vec g = gcd(F, f, sub(F, xp, x));
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace poly

static void check_same(const APoly& a, const APoly& b) {
    if (a.field() != b.field() && a.field() && b.field())
        throw PreconditionError("polynomials over different fields");
}

APoly operator+(const APoly& a, const APoly& b) {
    check_same(a, b);
    const FieldCtx* F = a.field() ? a.field() : b.field();
    return APoly(F, poly::add(*F, a.coeffs(), b.coeffs()));
}

APoly operator-(const APoly& a, const APoly& b) {
    check_same(a, b);
    const FieldCtx* F = a.field() ? a.field() : b.field();
    return APoly(F, poly::sub(*F, a.coeffs(), b.coeffs()));
}

APoly operator*(const APoly& a, const APoly& b) {
    check_same(a, b);
    const FieldCtx* F = a.field() ? a.field() : b.field();
    return APoly(F, poly::mul(*F, a.coeffs(), b.coeffs()));
}

APoly APoly::operator-() const { return APoly(F_) - *this; }

APoly operator/(const APoly& a, const APoly& b) {
    APoly q, r;
    divmod(a, b, q, r);
    if (!r.is_zero()) throw PreconditionError("inexact division in F_q[T]");
    return q;
}

void divmod(const APoly& a, const APoly& b, APoly& q, APoly& r) {
    check_same(a, b);
    poly::Vec qq, rr;
    poly::divmod(*a.field(), a.coeffs(), b.coeffs(), qq, rr);
    q = APoly(a.field(), qq);
    r = APoly(a.field(), rr);
}

APoly APoly::pow(std::uint64_t n) const {
    APoly r = one_like(), b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

APoly APoly::inv() const {
    if (deg() != 0) throw PreconditionError("non-unit in F_q[T] has no inverse");
    return constant(F_, F_->inv(c_[0]));
}

std::string APoly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (!c_[i]) continue;
        std::string c = F_->to_string(c_[i]);
        bool compound = c.find('+') != std::string::npos;
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        std::string term;
        if (i == 0)
            term = compound ? "(" + c + ")" : c;
        else if (c == "1")
            term = mono;
        else
            term = (compound ? "(" + c + ")" : c) + "*" + mono;
        if (!s.empty()) s += "+";
        s += term;
    }
    return s;
}

APoly frob(const APoly& a, std::uint64_t q) {
    if (a.is_zero()) return a;
    std::vector<std::uint32_t> c((a.coeffs().size() - 1) * q + 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i * q] = a.field()->pow(a.coeffs()[i], q);
    return APoly(a.field(), c);
}

RatFunc::RatFunc(APoly num) : num_(std::move(num)), den_(APoly::constant(num_.field(), 1)) {}

RatFunc::RatFunc(APoly num, APoly den) {
    if (den.is_zero()) throw PreconditionError("rational function with zero denominator");
    const FieldCtx* F = den.field();
    if (!num.field()) num = APoly(F);
    auto g = APoly(F, poly::gcd(*F, num.coeffs(), den.coeffs()));
    if (num.is_zero()) g = den;
    num = num / g;
    den = den / g;
    auto li = APoly::constant(F, F->inv(den.lead()));
    num_ = num * li;
    den_ = den * li;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_); }
RatFunc operator-(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_); }
RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.num_, a.den_ * b.den_); }
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw PreconditionError("division by zero rational function");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc RatFunc::pow(std::int64_t n) const {
    if (n < 0) return RatFunc(den_, num_).pow(-n);
    return RatFunc(num_.pow(static_cast<std::uint64_t>(n)), den_.pow(static_cast<std::uint64_t>(n)));
}

std::string RatFunc::to_string() const {
    if (den_.deg() == 0) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace drinfeld
