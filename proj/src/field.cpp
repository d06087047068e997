#include "drinfeld/field.hpp"

#include "drinfeld/apoly.hpp"
#include "drinfeld/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace drinfeld {

std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t q) {
    if (q < 2) throw PreconditionError("q must be a prime power >= 2");
    std::uint64_t p = q;
    for (std::uint64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    std::uint32_t e = 0;
    for (std::uint64_t n = q; n > 1; n /= p) {
        if (n % p) throw PreconditionError(std::to_string(q) + " is not a prime power");
        ++e;
    }
    return {static_cast<std::uint32_t>(p), e};
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

std::vector<std::uint32_t> to_digits(std::uint32_t a, std::uint32_t p, std::uint32_t e) {
    std::vector<std::uint32_t> d(e);
    for (std::uint32_t i = 0; i < e; ++i) {
        d[i] = a % p;
        a /= p;
    }
    return d;
}

std::uint32_t from_digits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
    std::uint32_t a = 0;
    for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
    return a;
}

}  // namespace

FieldPtr FieldCtx::make(std::uint32_t p, std::uint32_t e, std::uint64_t bound) {
    if (!is_prime(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
    if (e < 1) throw PreconditionError("field degree must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > bound) throw PreconditionError("field size " + std::to_string(p) + "^" + std::to_string(e) +
                                               " exceeds bound " + std::to_string(bound));
    }
    // tables are deterministic in (p, e); share one context so values from separate calls mix
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::weak_ptr<const FieldCtx>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto hit = cache[{p, e}].lock()) return hit;
    auto F = std::shared_ptr<FieldCtx>(new FieldCtx());
    cache[{p, e}] = F;
    F->p_ = p;
    F->e_ = e;
    F->q_ = static_cast<std::uint32_t>(q);
    F->char2_ = (p == 2);

    const std::uint32_t Q = F->q_;
    // scan monic degree-e candidates m = x^e + sum c_i x^i with c_0 != 0; accept when x has order q-1
    std::vector<std::uint32_t> c(e, 0);
    std::vector<std::uint32_t> exps(Q - 1);
    for (std::uint64_t code = 0;; ++code) {
        if (code >= q) throw PreconditionError("no primitive polynomial found");  // unreachable
        auto d = to_digits(static_cast<std::uint32_t>(code), p, e);
        if (d[0] == 0) continue;
        // multiplication by x in F_p[x]/(m) on digit vectors
        std::vector<std::uint32_t> cur(e, 0);
        cur[0] = 1;
        bool ok = true;
        for (std::uint32_t i = 0; i < Q - 1; ++i) {
            exps[i] = from_digits(cur, p);
            if (i > 0 && exps[i] == 1) {
                ok = false;
                break;
            }
            std::uint32_t top = cur[e - 1];
            for (std::uint32_t j = e - 1; j > 0; --j) cur[j] = cur[j - 1];
            cur[0] = 0;
            for (std::uint32_t j = 0; j < e; ++j) cur[j] = (cur[j] + (p - (top * d[j]) % p)) % p;
        }
        if (!ok || from_digits(cur, p) != 1) continue;
        F->modulus_ = d;
        F->modulus_.push_back(1);
        break;
    }
    F->exp_.resize(2 * (Q - 1));
    F->log_.assign(Q, 0);
    for (std::uint32_t i = 0; i < Q - 1; ++i) {
        F->exp_[i] = F->exp_[i + Q - 1] = exps[i];
        F->log_[exps[i]] = i;
    }
    if (Q == 2) {  // exps has one entry; keep exp_ well formed
        F->exp_ = {1, 1};
    }
    return F;
}

std::uint32_t FieldCtx::add(std::uint32_t a, std::uint32_t b) const {
    if (char2_) return a ^ b;
    if (e_ == 1) {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t r = 0, m = 1;
    while (a || b) {
        std::uint32_t s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * m;
        a /= p_;
        b /= p_;
        m *= p_;
    }
    return r;
}

std::uint32_t FieldCtx::neg(std::uint32_t a) const {
    if (char2_) return a;
    std::uint32_t r = 0, m = 1;
    while (a) {
        std::uint32_t d = a % p_;
        r += (d ? p_ - d : 0) * m;
        a /= p_;
        m *= p_;
    }
    return r;
}

std::uint32_t FieldCtx::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t FieldCtx::inv(std::uint32_t a) const {
    if (a == 0) throw PreconditionError("division by zero in F_" + std::to_string(q_));
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::uint32_t FieldCtx::div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }

std::uint32_t FieldCtx::pow(std::uint32_t a, std::uint64_t n) const {
    if (n == 0) return 1;
    if (a == 0) return 0;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (n % (q_ - 1))) % (q_ - 1)];
}

std::uint32_t FieldCtx::log(std::uint32_t a) const {
    if (a == 0) throw PreconditionError("log of zero");
    return log_[a];
}

std::uint32_t FieldCtx::from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t FieldCtx::frob_inv(std::uint32_t a, std::uint64_t qpow) const {
    // x -> x^qpow is a bijection; its inverse is x -> x^{qpow^{k-1}} for the order k
    if (a == 0) return 0;
    std::uint64_t t = qpow % (q_ - 1 ? q_ - 1 : 1);
    std::uint64_t acc = 1;
    // find k with qpow^k == 1 mod (q-1)
    std::uint64_t cur = t;
    while (cur % (q_ - 1) != 1 % (q_ - 1)) {
        acc = (acc * t) % (q_ - 1);
        cur = (cur * t) % (q_ - 1);
    }
    return pow(a, acc);
}

std::string FieldCtx::to_string(std::uint32_t a) const {
    if (e_ == 1) return std::to_string(a);
    auto d = to_digits(a, p_, e_);
    std::string s;
    for (std::size_t i = d.size(); i-- > 0;) {
        if (!d[i]) continue;
        if (!s.empty()) s += "+";
        std::string mono = i == 0 ? "" : (i == 1 ? "g" : "g^" + std::to_string(i));
        if (i == 0)
            s += std::to_string(d[i]);
        else if (d[i] == 1)
            s += mono;
        else
            s += std::to_string(d[i]) + "*" + mono;
    }
    return s.empty() ? "0" : s;
}

FieldEmbedding::FieldEmbedding(FieldPtr sub, FieldPtr super) : sub_(std::move(sub)), super_(std::move(super)) {
    if (sub_->p() != super_->p() || super_->e() % sub_->e() != 0)
        throw PreconditionError("no embedding F_" + std::to_string(sub_->q()) + " -> F_" +
                                std::to_string(super_->q()));
    const auto& S = *super_;
    const auto& m = sub_->modulus();
    // root of the sub modulus inside the super field
    std::uint32_t beta = 0;
    bool found = false;
    for (std::uint32_t x = 1; x < S.q() && !found; ++x) {
        std::uint32_t acc = 0;
        for (std::size_t i = m.size(); i-- > 0;) acc = S.add(S.mul(acc, x), S.from_int(m[i]));
        if (acc == 0) {
            beta = x;
            found = true;
        }
    }
    if (!found) throw PreconditionError("embedding root not found");
    map_.resize(sub_->q());
    const std::uint32_t p = sub_->p(), e = sub_->e();
    for (std::uint32_t a = 0; a < sub_->q(); ++a) {
        auto d = to_digits(a, p, e);
        std::uint32_t acc = 0;
        for (std::size_t i = d.size(); i-- > 0;) acc = S.add(S.mul(acc, beta), S.from_int(d[i]));
        map_[a] = acc;
    }
}

ExtField::ExtField(FieldPtr base, std::uint32_t m) : F_(std::move(base)), m_(m) {
    if (m == 0) throw PreconditionError("extension degree must be >= 1");
    const auto& F = *F_;
    if (m == 1) {
        g_ = {0, 1};
        return;
    }
    // deterministic scan over x^m + (low-degree part) encoded in base q
    for (std::uint64_t code = 1;; ++code) {
        poly::Vec g(m + 1, 0);
        g[m] = 1;
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < m && c; ++i) {
            g[i] = static_cast<std::uint32_t>(c % F.q());
            c /= F.q();
        }
        if (g[0] == 0) continue;
        if (poly::irreducible(F, g)) {
            g_ = g;
            return;
        }
    }
}

ExtField::Elem ExtField::one() const {
    Elem r(m_, 0);
    r[0] = 1;
    return r;
}

ExtField::Elem ExtField::embed(std::uint32_t a) const {
    Elem r(m_, 0);
    r[0] = a;
    return r;
}

ExtField::Elem ExtField::add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (std::uint32_t i = 0; i < m_; ++i) r[i] = F_->add(a[i], b[i]);
    return r;
}

ExtField::Elem ExtField::scale(std::uint32_t c, const Elem& a) const {
    Elem r(m_);
    for (std::uint32_t i = 0; i < m_; ++i) r[i] = F_->mul(c, a[i]);
    return r;
}

ExtField::Elem ExtField::mul(const Elem& a, const Elem& b) const {
    const auto& F = *F_;
    std::vector<std::uint32_t> t(2 * m_ - 1, 0);
    for (std::uint32_t i = 0; i < m_; ++i) {
        if (!a[i]) continue;
        for (std::uint32_t j = 0; j < m_; ++j)
            if (b[j]) t[i + j] = F.add(t[i + j], F.mul(a[i], b[j]));
    }
    // reduce with monic g
    for (std::size_t k = t.size(); k-- > m_;) {
        std::uint32_t c = t[k];
        if (!c) continue;
        t[k] = 0;
        for (std::uint32_t j = 0; j < m_; ++j) t[k - m_ + j] = F.sub(t[k - m_ + j], F.mul(c, g_[j]));
    }
    t.resize(m_);
    return t;
}

ExtField::Elem ExtField::pow(Elem a, std::uint64_t n) const {
    Elem r = one();
    while (n) {
        if (n & 1) r = mul(r, a);
        n >>= 1;
        if (n) a = mul(a, a);
    }
    return r;
}

bool ExtField::is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](std::uint32_t x) { return x == 0; });
}

std::vector<std::uint32_t> ExtField::coords(const Elem& a) const {
    std::vector<std::uint32_t> c;
    c.reserve(prime_dim());
    for (auto x : a) {
        auto d = to_digits(x, F_->p(), F_->e());
        c.insert(c.end(), d.begin(), d.end());
    }
    return c;
}

ExtField::Elem ExtField::from_coords(const std::vector<std::uint32_t>& c) const {
    Elem r(m_);
    const auto e = F_->e();
    for (std::uint32_t i = 0; i < m_; ++i)
        r[i] = from_digits(std::vector<std::uint32_t>(c.begin() + i * e, c.begin() + (i + 1) * e), F_->p());
    return r;
}

std::size_t rank_mod_p(std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t p) {
    if (rows.empty()) return 0;
    const std::size_t ncol = rows[0].size();
    std::size_t rank = 0;
    auto inv = [p](std::uint32_t a) {
        std::uint64_t r = 1, b = a, n = p - 2;
        while (n) {
            if (n & 1) r = r * b % p;
            b = b * b % p;
            n >>= 1;
        }
        return static_cast<std::uint32_t>(r);
    };
    for (std::size_t col = 0; col < ncol && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        std::uint32_t iv = inv(rows[rank][col]);
        for (auto& x : rows[rank]) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * iv % p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            std::uint32_t f = rows[r][col];
            for (std::size_t c = col; c < ncol; ++c)
                rows[r][c] = static_cast<std::uint32_t>((rows[r][c] + static_cast<std::uint64_t>(p - f) * rows[rank][c]) % p);
        }
        ++rank;
    }
    return rank;
}

}  // namespace drinfeld
