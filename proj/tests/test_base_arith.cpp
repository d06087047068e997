#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "drinfeld/apoly.hpp"
#include "drinfeld/errors.hpp"
#include "drinfeld/field.hpp"
#include "drinfeld/local.hpp"
#include "drinfeld/newton.hpp"
#include "drinfeld/parsing.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace drinfeld;

TEST_CASE("field_make small fields") {
    auto F2 = FieldCtx::make(2, 1);
    CHECK(F2->q() == 2);
    CHECK(F2->add(1, 1) == 0);
    CHECK(F2->mul(1, 1) == 1);

    auto F9 = FieldCtx::make(3, 2);
    auto g = F9->gen();
    CHECK(F9->pow(g, 8) == 1);
    CHECK(F9->pow(g, 4) != 1);

    auto F8 = FieldCtx::make(2, 3);
    for (std::uint32_t x = 0; x < 8; ++x) CHECK(F8->pow(x, 8) == x);
}

TEST_CASE("field_make rejects bad input") {
    CHECK_THROWS_AS(FieldCtx::make(4, 1), PreconditionError);
    CHECK_THROWS_AS(FieldCtx::make(1, 1), PreconditionError);
    CHECK_THROWS_AS(FieldCtx::make(2, 21), PreconditionError);
    CHECK_THROWS_AS(FieldCtx::make(3, 2, 8), PreconditionError);
    CHECK_NOTHROW(FieldCtx::make(2, 20));
}

TEST_CASE("field axioms exhaustive for q <= 9") {
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
        auto F = FieldCtx::make(p, e);
        const auto q = F->q();
        bool ok = true;
        for (std::uint32_t a = 0; a < q; ++a) {
            ok &= F->pow(a, q) == a;
            ok &= F->add(a, F->neg(a)) == 0;
            if (a) ok &= F->mul(a, F->inv(a)) == 1;
            for (std::uint32_t b = 0; b < q; ++b) {
                ok &= F->add(a, b) == F->add(b, a);
                ok &= F->mul(a, b) == F->mul(b, a);
                for (std::uint32_t c = 0; c < q; ++c) {
                    ok &= F->add(F->add(a, b), c) == F->add(a, F->add(b, c));
                    ok &= F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c));
                    ok &= F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c));
                }
            }
        }
        CHECK_MESSAGE(ok, "q=" << q);
    }
}

TEST_CASE("field embedding is a ring morphism") {
    auto F4 = FieldCtx::make(2, 2);
    auto F16 = FieldCtx::make(2, 4);
    FieldEmbedding emb(F4, F16);
    for (std::uint32_t a = 0; a < 4; ++a)
        for (std::uint32_t b = 0; b < 4; ++b) {
            CHECK(emb(F4->add(a, b)) == F16->add(emb(a), emb(b)));
            CHECK(emb(F4->mul(a, b)) == F16->mul(emb(a), emb(b)));
        }
    CHECK_THROWS_AS(FieldEmbedding(FieldCtx::make(2, 3), F16), PreconditionError);
}

TEST_CASE("extension field arithmetic matches the table field") {
    auto F2 = FieldCtx::make(2, 1);
    ExtField K(F2, 6);
    auto x = K.zero();
    x[1] = 1;
    // every element satisfies a^{2^6} = a
    for (std::uint32_t code = 0; code < 64; ++code) {
        std::vector<std::uint32_t> c(6);
        for (int i = 0; i < 6; ++i) c[i] = (code >> i) & 1;
        auto a = K.from_coords(c);
        CHECK(K.pow(a, 64) == a);
    }
    CHECK(K.pow(x, 63) == K.one());
}

TEST_CASE("polynomial ring axioms, exhaustive small cases") {
    auto enum_polys = [](FieldPtr F, int maxdeg) {
        std::vector<APoly> out;
        std::uint64_t n = 1;
        for (int i = 0; i <= maxdeg; ++i) n *= F->q();
        for (std::uint64_t code = 0; code < n; ++code) {
            std::vector<std::uint32_t> c;
            std::uint64_t t = code;
            for (int i = 0; i <= maxdeg; ++i) {
                c.push_back(static_cast<std::uint32_t>(t % F->q()));
                t /= F->q();
            }
            out.emplace_back(F.get(), c);
        }
        return out;
    };
    for (auto [p, e, d] : std::vector<std::tuple<int, int, int>>{{2, 1, 4}, {3, 1, 2}, {2, 2, 2}}) {
        auto F = FieldCtx::make(p, e);
        auto P = enum_polys(F, d);
        bool ok = true;
        for (auto& a : P)
            for (auto& b : P) {
                ok &= (a * b) == (b * a);
                if (!b.is_zero()) {
                    APoly qq, rr;
                    divmod(a, b, qq, rr);
                    ok &= (qq * b + rr) == a && rr.deg() < b.deg();
                }
                for (auto& c : P) {
                    ok &= ((a + b) + c) == (a + (b + c));
                    ok &= ((a * b) * c) == (a * (b * c));
                    ok &= (a * (b + c)) == (a * b + a * c);
                }
            }
        CHECK_MESSAGE(ok, "q=" << F->q());
    }
    auto F = FieldCtx::make(3, 1);
    CHECK(APoly(F.get()).deg() == APoly::kDegZero);
    CHECK(APoly(F.get(), {1, 2, 0, 0}).deg() == 1);
}

TEST_CASE("irreducibility test agrees with root count for degree <= 3") {
    auto F = FieldCtx::make(3, 1);
    for (std::uint32_t code = 0; code < 27; ++code) {
        std::vector<std::uint32_t> c = {code % 3, (code / 3) % 3, (code / 9) % 3, 1};
        bool has_root = false;
        for (std::uint32_t x = 0; x < 3; ++x) has_root |= poly::eval(*F, c, x) == 0;
        CHECK(poly::irreducible(*F, c) == !has_root);
    }
}

TEST_CASE("prime_localize examples") {
    auto F2 = FieldCtx::make(2, 1);
    auto T2 = APoly::T(F2.get());
    auto L = prime_localize(F2, T2, 10);
    auto x = L(T2);
    CHECK(x.vpi() == RatInf(Rat(1)));
    CHECK(x.coeff(1) == 1);
    CHECK(L(T2 * T2 + T2).vpi() == RatInf(Rat(1)));

    auto F3 = FieldCtx::make(3, 1);
    auto T3 = APoly::T(F3.get());
    auto one = APoly::constant(F3.get(), 1);
    auto L3 = prime_localize(F3, T3 + one, 10);
    CHECK(L3((T3 + one).pow(3)).vpi() == RatInf(Rat(3)));
    CHECK(L3(T3).vpi() == RatInf(Rat(0)));

    CHECK_THROWS_AS(prime_localize(F3, T3 * T3, 5), PreconditionError);
    CHECK_THROWS_AS(prime_localize(F3, T3, 0), PreconditionError);
}

TEST_CASE("prime_localize at a degree-2 prime") {
    auto F3 = FieldCtx::make(3, 1);
    auto T = APoly::T(F3.get());
    auto f = T * T + APoly::constant(F3.get(), 1);  // irreducible over F_3
    auto L = prime_localize(F3, f, 12);
    CHECK(L.ring()->F->q() == 9);
    // f maps to pi
    auto img = L(f);
    CHECK(agree_mod(img, LocalElem::pi_pow(L.ring().get(), 1).truncate(12), 12));
    // valuation of f^3 * (T+1)
    auto a = f.pow(3) * (T + APoly::constant(F3.get(), 1));
    CHECK(L(a).vpi() == RatInf(Rat(3)));
    // ring morphism on a few products
    std::mt19937 rng(5);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::uint32_t> c1(4), c2(4);
        for (auto& c : c1) c = rng() % 3;
        for (auto& c : c2) c = rng() % 3;
        APoly u(F3.get(), c1), v(F3.get(), c2);
        CHECK(agree_mod(L(u * v), L(u) * L(v), 12));
        CHECK(agree_mod(L(u + v), L(u) + L(v), 12));
    }
}

namespace {
LocalElem random_exact(const LocalRing* R, std::mt19937& rng, int lo, int len) {
    std::vector<std::uint32_t> c(len);
    for (auto& x : c) x = rng() % R->F->q();
    return LocalElem(R, lo, c, LocalElem::kExact);
}
}  // namespace

TEST_CASE("local arithmetic: valuations and honest precision") {
    auto F = FieldCtx::make(3, 2);
    auto Rp = make_local_ring(F, 2, 40);
    const LocalRing* R = Rp.get();
    std::mt19937 rng(11);
    for (int t = 0; t < 300; ++t) {
        auto x = random_exact(R, rng, static_cast<int>(rng() % 5) - 1, 12);
        auto y = random_exact(R, rng, static_cast<int>(rng() % 5), 12);
        if (x.is_zero() || y.is_zero()) continue;
        int nx = x.start() + 1 + static_cast<int>(rng() % 8), ny = y.start() + 1 + static_cast<int>(rng() % 8);
        auto xt = x.truncate(nx), yt = y.truncate(ny);
        // valuation additivity
        CHECK(*(x * y).wval() == *x.wval() + *y.wval());
        // truncated results agree with exact results up to their claimed precision
        auto s = xt + yt, d = xt - yt, m = xt * yt, qd = xt / yt;
        CHECK((s - (x + y)).val_lb() >= s.prec());
        CHECK((d - (x - y)).val_lb() >= d.prec());
        CHECK((m - (x * y)).val_lb() >= m.prec());
        auto qe = x / y;  // exact/exact non-monomial: rel_cap digits
        CHECK(qe.prec() >= qd.prec());
        CHECK((qd - qe).val_lb() >= qd.prec());
        CHECK(((qe * y) - x).val_lb() >= qe.prec() + *y.wval());
        // Frobenius is additive and multiplicative
        CHECK((frob(x + y, 9) - (frob(x, 9) + frob(y, 9))).is_exact_zero());
        CHECK((frob(xt * yt, 3) - frob(xt, 3) * frob(yt, 3)).val_lb() >= frob(xt * yt, 3).prec());
    }
}

TEST_CASE("local arithmetic: indeterminate valuations are flagged") {
    auto F = FieldCtx::make(2, 1);
    auto Rp = make_local_ring(F, 1, 20);
    const LocalRing* R = Rp.get();
    auto a = LocalElem::pi_pow(R, 3).truncate(5);
    auto b = LocalElem::pi_pow(R, 3).truncate(5);
    auto z = a - b;
    CHECK(z.is_zero());
    CHECK_FALSE(z.val_known());
    CHECK_THROWS_AS(z.vpi(), PrecisionError);
    CHECK_THROWS_AS(a / z, PrecisionError);
    CHECK_THROWS_AS(a / LocalElem::zero(R), PreconditionError);
    CHECK(LocalElem::zero(R).vpi() == std::nullopt);
}

TEST_CASE("Newton polygon examples") {
    const std::int64_t q = 3;
    NewtonPolygon a({{0, std::nullopt}, {1, Rat(1)}, {q, Rat(0)}});
    REQUIRE(a.slopes().size() == 1);
    CHECK(a.slopes()[0].slope == Rat(-1, 2));
    CHECK(a.slopes()[0].length == 2);

    // break at (q, v(a_1)) with v(a_1)=0 and v(a_2)=0: a slope-0 segment appears
    NewtonPolygon b({{1, Rat(1)}, {q, Rat(0)}, {q * q, Rat(0)}});
    CHECK(b.is_vertex(q));
    bool has0 = false;
    for (auto& s : b.slopes()) has0 |= s.slope == Rat(0);
    CHECK(has0);

    CHECK_THROWS_AS(NewtonPolygon({{0, Rat(1)}, {1, std::nullopt}}), PreconditionError);
    CHECK_THROWS_AS(NewtonPolygon({{0, Rat(1)}, {0, Rat(2)}, {1, Rat(0)}}), PreconditionError);
}

TEST_CASE("Newton polygon equals the brute-force lower hull") {
    std::mt19937 rng(2024);
    for (int t = 0; t < 500; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);  // up to 8 points
        std::set<std::int64_t> xs;
        while (static_cast<int>(xs.size()) < n) xs.insert(static_cast<std::int64_t>(rng() % 12));
        std::vector<NewtonPoint> pts;
        std::vector<std::pair<std::int64_t, Rat>> fin;
        for (auto x : xs) {
            if (rng() % 6 == 0 && fin.size() + 1 < xs.size()) {
                pts.push_back({x, std::nullopt});
                continue;
            }
            Rat y(static_cast<std::int64_t>(rng() % 21) - 10, 1 + static_cast<std::int64_t>(rng() % 4));
            pts.push_back({x, y});
            fin.emplace_back(x, y);
        }
        if (fin.size() < 2) continue;
        NewtonPolygon np(pts);
        auto env = oracle::lower_envelope(fin);
        for (auto& [x, v] : env) CHECK(np.value_at(x) == v);
        std::vector<Rat> mine;
        for (auto& s : np.slopes())
            for (std::int64_t i = 0; i < s.length; ++i) mine.push_back(s.slope);
        CHECK(mine == oracle::unit_slopes(env));
        // convexity and multiplicity sum
        std::int64_t total = 0;
        for (std::size_t i = 0; i < np.slopes().size(); ++i) {
            total += np.slopes()[i].length;
            if (i) CHECK(np.slopes()[i - 1].slope < np.slopes()[i].slope);
        }
        CHECK(total == np.x_max() - np.x_min());
    }
}

TEST_CASE("expression parsing reports positions") {
    auto F = FieldCtx::make(3, 2);
    auto a = parse_apoly(F.get(), "T^2 + g*T - 1");
    CHECK(a.deg() == 2);
    CHECK(a.coeff(1) == F->gen());
    CHECK(a.coeff(0) == F->from_int(-1));
    try {
        parse_apoly(F.get(), "T^2 + $");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.column == 7);
    }
    CHECK_THROWS_AS(parse_apoly(F.get(), "T + x"), ParseError);
    CHECK_THROWS_AS(parse_apoly(F.get(), "(T+1"), ParseError);
    auto r = parse_ratfunc(F.get(), "1/(T+1)");
    CHECK(r.den().deg() == 1);
    auto F3 = FieldCtx::make(3, 1);
    auto Rp = make_local_ring(F3, 4, 40);
    auto x = parse_local(Rp.get(), "pi + w^2 + 2", 40);
    CHECK(x.coeff(0) == 2);
    CHECK(x.coeff(2) == 1);
    CHECK(x.coeff(4) == 1);
}
