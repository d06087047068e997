#include "drinfeld/local.hpp"

#include "drinfeld/errors.hpp"

#include <algorithm>

namespace drinfeld {

LocalRingPtr make_local_ring(FieldPtr F, int E, int rel_cap) {
    if (E < 1) throw PreconditionError("ramification index must be >= 1");
    if (rel_cap < 1) throw PreconditionError("precision must be >= 1");
    auto R = std::make_shared<LocalRing>();
    R->F = std::move(F);
    R->E = E;
    R->rel_cap = rel_cap;
    return R;
}

namespace {
constexpr int kExact = LocalElem::kExact;

int add_prec(long long a, long long b) {
    long long s = a + b;
    if (s >= kExact) return kExact;
    if (s <= -kExact) return -kExact + 1;
    return static_cast<int>(s);
}

void check_ring(const LocalElem& a, const LocalElem& b) {
    if (a.ring() != b.ring()) throw PreconditionError("local elements from different rings");
}
}  // namespace

LocalElem::LocalElem(const LocalRing* R, int start, std::vector<std::uint32_t> c, int prec)
    : R_(R), start_(start), c_(std::move(c)), prec_(prec) {
    normalize();
}

void LocalElem::normalize() {
    if (!is_exact()) {
        long long keep = static_cast<long long>(prec_) - start_;
        if (keep < 0) keep = 0;
        if (static_cast<long long>(c_.size()) > keep) c_.resize(static_cast<std::size_t>(keep));
    }
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        start_ = 0;
        return;
    }
    if (lead) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        start_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint32_t LocalElem::coeff(int i) const {
    long long k = static_cast<long long>(i) - start_;
    if (k < 0 || k >= static_cast<long long>(c_.size())) return 0;
    return c_[static_cast<std::size_t>(k)];
}

std::optional<int> LocalElem::wval() const {
    if (!c_.empty()) return start_;
    if (is_exact()) return std::nullopt;
    throw PrecisionError("valuation indeterminate: element is zero modulo w^" + std::to_string(prec_));
}

RatInf LocalElem::vpi() const {
    auto v = wval();
    if (!v) return std::nullopt;
    return Rat(*v, R_->E);
}

LocalElem LocalElem::truncate(int N) const { return LocalElem(R_, start_, c_, std::min(prec_, N)); }

LocalElem LocalElem::shift(int n) const {
    return LocalElem(R_, start_ + n, c_, is_exact() ? kExact : add_prec(prec_, n));
}

LocalElem operator+(const LocalElem& a, const LocalElem& b) {
    check_ring(a, b);
    int prec = std::min(a.prec_, b.prec_);
    if (a.c_.empty()) return LocalElem(b.R_, b.start_, b.c_, prec);
    if (b.c_.empty()) return LocalElem(a.R_, a.start_, a.c_, prec);
    int lo = std::min(a.start_, b.start_);
    long long hi = std::max<long long>(a.start_ + static_cast<long long>(a.c_.size()),
                                       b.start_ + static_cast<long long>(b.c_.size()));
    if (prec < kExact) hi = std::min<long long>(hi, prec);
    if (hi <= lo) return LocalElem(a.R_, 0, {}, prec);
    std::vector<std::uint32_t> c(static_cast<std::size_t>(hi - lo), 0);
    const auto& F = *a.R_->F;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        long long k = a.start_ + static_cast<long long>(i) - lo;
        if (k < static_cast<long long>(c.size())) c[static_cast<std::size_t>(k)] = a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
        long long k = b.start_ + static_cast<long long>(i) - lo;
        if (k < static_cast<long long>(c.size())) c[static_cast<std::size_t>(k)] = F.add(c[static_cast<std::size_t>(k)], b.c_[i]);
    }
    return LocalElem(a.R_, lo, std::move(c), prec);
}

LocalElem LocalElem::operator-() const {
    std::vector<std::uint32_t> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = R_->F->neg(c_[i]);
    return LocalElem(R_, start_, std::move(c), prec_);
}

LocalElem operator-(const LocalElem& a, const LocalElem& b) { return a + (-b); }

LocalElem operator*(const LocalElem& a, const LocalElem& b) {
    check_ring(a, b);
    int prec;
    if (a.is_exact() && b.is_exact())
        prec = kExact;
    else if (a.is_exact_zero() || b.is_exact_zero())
        prec = kExact;
    else
        prec = std::min(add_prec(a.prec_, b.val_lb()), add_prec(b.prec_, a.val_lb()));
    if (a.c_.empty() || b.c_.empty()) return LocalElem(a.R_, 0, {}, prec);
    const int lo = a.start_ + b.start_;
    long long len = static_cast<long long>(a.c_.size() + b.c_.size() - 1);
    if (prec < kExact) len = std::min<long long>(len, static_cast<long long>(prec) - lo);
    if (len <= 0) return LocalElem(a.R_, 0, {}, prec);
    std::vector<std::uint32_t> c(static_cast<std::size_t>(len), 0);
    const auto& F = *a.R_->F;
    for (std::size_t i = 0; i < a.c_.size() && static_cast<long long>(i) < len; ++i) {
        if (!a.c_[i]) continue;
        const std::size_t jmax = std::min<std::size_t>(b.c_.size(), static_cast<std::size_t>(len) - i);
        for (std::size_t j = 0; j < jmax; ++j)
            if (b.c_[j]) c[i + j] = F.add(c[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return LocalElem(a.R_, lo, std::move(c), prec);
}

LocalElem LocalElem::inv() const { return one(R_) / *this; }

LocalElem operator/(const LocalElem& a, const LocalElem& b) {
    check_ring(a, b);
    if (b.c_.empty()) {
        if (b.is_exact()) throw PreconditionError("division by zero in local ring");
        throw PrecisionError("division by an element that is zero to precision w^" + std::to_string(b.prec_));
    }
    const int vb = b.start_;
    if (a.is_exact_zero()) return LocalElem::zero(a.R_);
    const int va = a.val_lb();
    const bool b_mono = b.c_.size() == 1;
    const long long rb = b.is_exact() ? static_cast<long long>(kExact) : static_cast<long long>(b.prec_) - vb;
    long long P;  // absolute precision of the result
    if (a.is_exact() && b.is_exact()) {
        P = b_mono ? kExact : static_cast<long long>(va) - vb + a.R_->rel_cap;
    } else if (a.is_exact()) {
        P = static_cast<long long>(va) - vb + rb;
    } else if (b.is_exact()) {
        P = static_cast<long long>(a.prec_) - vb;
    } else {
        P = std::min(static_cast<long long>(a.prec_) - vb, static_cast<long long>(va) - vb + rb);
    }
    const auto& F = *a.R_->F;
    if (a.c_.empty()) return LocalElem(a.R_, 0, {}, static_cast<int>(P));
    if (b_mono) {
        std::uint32_t iv = F.inv(b.c_[0]);
        std::vector<std::uint32_t> c(a.c_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.mul(a.c_[i], iv);
        int prec = P >= kExact ? kExact : static_cast<int>(P);
        return LocalElem(a.R_, a.start_ - vb, std::move(c), prec);
    }
    // inverse of the unit part of b to the needed relative length
    long long need = P - (static_cast<long long>(va) - vb);
    if (need <= 0) return LocalElem(a.R_, 0, {}, static_cast<int>(P));
    const std::size_t L = static_cast<std::size_t>(need);
    std::vector<std::uint32_t> binv(L, 0);
    const std::uint32_t b0i = F.inv(b.c_[0]);
    binv[0] = b0i;
    for (std::size_t n = 1; n < L; ++n) {
        std::uint32_t s = 0;
        const std::size_t imax = std::min(n, b.c_.size() - 1);
        for (std::size_t i = 1; i <= imax; ++i)
            if (b.c_[i] && binv[n - i]) s = F.add(s, F.mul(b.c_[i], binv[n - i]));
        binv[n] = F.neg(F.mul(b0i, s));
    }
    LocalElem bi(a.R_, -vb, std::move(binv), static_cast<int>(std::min<long long>(kExact - 1, -vb + need)));
    LocalElem r = a * bi;
    return r.truncate(static_cast<int>(P));
}

LocalElem LocalElem::pow(long long n) const {
    if (n < 0) return inv().pow(-n);
    LocalElem r = one(R_), b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

LocalElem frob(const LocalElem& a, std::uint64_t Q) {
    const auto& F = *a.ring()->F;
    const auto Qi = static_cast<long long>(Q);
    int prec = a.is_exact() ? LocalElem::kExact : add_prec(static_cast<long long>(a.prec()) * Qi, 0);
    if (a.coeffs().empty()) return LocalElem(a.ring(), 0, {}, prec);
    long long len = static_cast<long long>(a.coeffs().size() - 1) * Qi + 1;
    const long long st = static_cast<long long>(a.start()) * Qi;
    if (!a.is_exact()) len = std::min(len, static_cast<long long>(prec) - st);
    std::vector<std::uint32_t> c(static_cast<std::size_t>(std::max<long long>(len, 0)), 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        long long k = static_cast<long long>(i) * Qi;
        if (k < len) c[static_cast<std::size_t>(k)] = F.pow(a.coeffs()[i], Q);
    }
    return LocalElem(a.ring(), static_cast<int>(st), std::move(c), prec);
}

bool agree_mod(const LocalElem& a, const LocalElem& b, int N) {
    if (a.prec() < N || b.prec() < N) return false;
    return (a - b).val_lb() >= N;
}

std::string LocalElem::to_string() const {
    const std::string var = R_->E == 1 ? "pi" : "w";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i]) continue;
        int ex = start_ + static_cast<int>(i);
        std::string c = R_->F->to_string(c_[i]);
        if (c.find('+') != std::string::npos) c = "(" + c + ")";
        std::string mono = ex == 0 ? "" : (ex == 1 ? var : var + "^" + (ex < 0 ? "(" + std::to_string(ex) + ")" : std::to_string(ex)));
        std::string term = ex == 0 ? c : (c == "1" ? mono : c + "*" + mono);
        if (!s.empty()) s += " + ";
        s += term;
    }
    if (s.empty()) s = "0";
    if (!is_exact()) s += " + O(" + var + "^" + std::to_string(prec_) + ")";
    return s;
}

Localizer::Localizer(FieldPtr Fq, const APoly& f, int N)
    : Fq_(std::move(Fq)),
      f_(f),
      d_(f.deg()),
      N_(N),
      R_(d_ >= 1 ? make_local_ring(d_ == 1 ? Fq_ : FieldCtx::make(Fq_->p(), Fq_->e() * static_cast<std::uint32_t>(d_)), 1, std::max(N, 1))
                 : nullptr),
      emb_(Fq_, R_ ? R_->F : Fq_) {
    if (N < 1) throw PreconditionError("localization precision must be >= 1");
    if (f.is_zero() || f.deg() < 1) throw PreconditionError("prime must have positive degree");
    if (f.field() != Fq_.get()) throw PreconditionError("prime is not over the given field");
    if (f.lead() != 1) throw PreconditionError("prime generator must be monic");
    if (!poly::irreducible(*Fq_, f.coeffs())) throw PreconditionError("polynomial " + f.to_string() + " is reducible");
    const LocalRing* R = R_.get();
    const auto& K = *R->F;
    // coefficients of f and f' pushed into the residue field
    std::vector<std::uint32_t> fc(f.coeffs().size());
    for (std::size_t i = 0; i < fc.size(); ++i) fc[i] = emb_(f.coeffs()[i]);
    auto eval_series = [&](const std::vector<std::uint32_t>& pc, const LocalElem& x) {
        LocalElem acc = LocalElem::zero(R);
        for (std::size_t i = pc.size(); i-- > 0;) acc = acc * x + LocalElem::constant(R, pc[i]);
        return acc;
    };
    if (d_ == 1) {
        // f = T + a, so T = pi - a
        t_ = LocalElem(R, 0, {K.neg(fc[0]), 1}, LocalElem::kExact);
        return;
    }
    std::uint32_t theta = 0;
    bool found = false;
    for (std::uint32_t x = 0; x < K.q() && !found; ++x)
        if (poly::eval(K, fc, x) == 0) {
            theta = x;
            found = true;
        }
    if (!found) throw PreconditionError("no root of the prime in its residue field");
    std::vector<std::uint32_t> dfc;
    for (std::size_t i = 1; i < fc.size(); ++i) dfc.push_back(K.mul(K.from_int(static_cast<long long>(i)), fc[i]));
    // Newton iteration for f(t) = pi, t(0) = theta
    LocalElem t = LocalElem::constant(R, theta, 1);
    const LocalElem pi = LocalElem::pi_pow(R, 1);
    for (int prec = 1; prec < N;) {
        prec = std::min(2 * prec, N);
        LocalElem tt = LocalElem(R, t.start(), t.coeffs(), prec);
        LocalElem num = eval_series(fc, tt) - pi;
        LocalElem den = eval_series(dfc, tt);
        t = (tt - num / den).truncate(prec);
    }
    t_ = LocalElem(R, t.start(), t.coeffs(), N);
}

LocalElem Localizer::raw(const APoly& a) const {
    if (a.field() != Fq_.get() && !a.is_zero()) throw PreconditionError("element of a different A");
    const LocalRing* R = R_.get();
    LocalElem acc = LocalElem::zero(R);
    for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = acc * t_ + LocalElem::constant(R, emb_(a.coeffs()[i]));
    return acc;
}

LocalElem Localizer::operator()(const APoly& a) const { return raw(a).truncate(N_); }

LocalElem Localizer::operator()(const RatFunc& a) const { return (raw(a.num()) / raw(a.den())).truncate(N_); }

Localizer prime_localize(FieldPtr Fq, const APoly& f, int N) { return Localizer(std::move(Fq), f, N); }

}  // namespace drinfeld
