#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace drinfeld {

// F_{p^e}. Elements are integers in [0, q): base-p digits are the coordinates
// in the power basis of a primitive root of `modulus`.
class FieldCtx {
public:
    static constexpr std::uint64_t kDefaultBound = 1u << 20;

    static std::shared_ptr<const FieldCtx> make(std::uint32_t p, std::uint32_t e,
                                                std::uint64_t bound = kDefaultBound);

    std::uint32_t p() const { return p_; }
    std::uint32_t e() const { return e_; }
    std::uint32_t q() const { return q_; }
    // monic, degree e, low-to-high over F_p
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    std::uint32_t gen() const { return exp_[1]; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t div(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t pow(std::uint32_t a, std::uint64_t n) const;
    std::uint32_t from_int(long long n) const;  // image of an integer
    std::uint32_t gen_pow(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }
    std::uint32_t log(std::uint32_t a) const;  // a != 0
    // p-th root (Frobenius is bijective)
    std::uint32_t frob_inv(std::uint32_t a, std::uint64_t qpow) const;
    bool in_subfield(std::uint32_t a, std::uint32_t sub_size) const { return pow(a, sub_size) == a; }

    std::string to_string(std::uint32_t a) const;  // e.g. "2*g^3" style is avoided: digits polynomial in g

private:
    FieldCtx() = default;
    std::uint32_t p_ = 0, e_ = 0, q_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> exp_, log_;
    bool char2_ = false;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

bool is_prime(std::uint64_t n);
// q = p^e; errors when q is not a prime power
std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t q);

// Value type carrying its field.
struct Fq {
    const FieldCtx* F = nullptr;
    std::uint32_t v = 0;

    Fq() = default;
    Fq(const FieldCtx* f, std::uint32_t x) : F(f), v(x) {}

    bool is_zero() const { return v == 0; }
    friend bool operator==(const Fq& a, const Fq& b) { return a.v == b.v && a.F == b.F; }
    friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }
    friend Fq operator+(const Fq& a, const Fq& b) { return {a.F, a.F->add(a.v, b.v)}; }
    friend Fq operator-(const Fq& a, const Fq& b) { return {a.F, a.F->sub(a.v, b.v)}; }
    friend Fq operator*(const Fq& a, const Fq& b) { return {a.F, a.F->mul(a.v, b.v)}; }
    friend Fq operator/(const Fq& a, const Fq& b) { return {a.F, a.F->div(a.v, b.v)}; }
    Fq operator-() const { return {F, F->neg(v)}; }
    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator-=(const Fq& o) { return *this = *this - o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }
    Fq inv() const { return {F, F->inv(v)}; }
    Fq pow(std::uint64_t n) const { return {F, F->pow(v, n)}; }
    Fq zero_like() const { return {F, 0}; }
    Fq one_like() const { return {F, 1}; }
};

inline Fq frob(const Fq& a, std::uint64_t q) { return a.pow(q); }

// Embedding of a subfield context into a larger one with the same characteristic.
class FieldEmbedding {
public:
    FieldEmbedding(FieldPtr sub, FieldPtr super);
    std::uint32_t operator()(std::uint32_t x) const { return map_[x]; }
    const FieldPtr& sub() const { return sub_; }
    const FieldPtr& super() const { return super_; }

private:
    FieldPtr sub_, super_;
    std::vector<std::uint32_t> map_;
};

// Polynomial-basis extension F[y]/(g) of a table field, for splitting fields too
// large for log tables. Elements are vectors of length m over F.
class ExtField {
public:
    using Elem = std::vector<std::uint32_t>;
    // picks the first irreducible monic g of degree m found by a deterministic scan
    ExtField(FieldPtr base, std::uint32_t m);

    const FieldPtr& base() const { return F_; }
    std::uint32_t degree() const { return m_; }
    // dimension over the prime field
    std::uint32_t prime_dim() const { return m_ * F_->e(); }

    Elem zero() const { return Elem(m_, 0); }
    Elem one() const;
    Elem embed(std::uint32_t a) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem scale(std::uint32_t c, const Elem& a) const;
    Elem pow(Elem a, std::uint64_t n) const;
    bool is_zero(const Elem& a) const;
    // coordinates over F_p, length prime_dim()
    std::vector<std::uint32_t> coords(const Elem& a) const;
    Elem from_coords(const std::vector<std::uint32_t>& c) const;

private:
    FieldPtr F_;
    std::uint32_t m_;
    std::vector<std::uint32_t> g_;  // monic, length m+1
};

// Rank of a matrix over F_p (rows of equal length), destroys the input.
std::size_t rank_mod_p(std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t p);

}  // namespace drinfeld
