#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "drinfeld/canonical.hpp"
#include "drinfeld/parsing.hpp"
#include "oracles.hpp"

#include <random>

using namespace drinfeld;

namespace {

struct Ring {
    FieldPtr F;
    LocalRingPtr R;
    int N;  // absolute precision in w-digits
};

Ring ring(std::uint32_t p, std::uint32_t e, int E, int prec_pi) {
    Ring g;
    g.F = FieldCtx::make(p, e);
    g.N = prec_pi * E;
    g.R = make_local_ring(g.F, E, g.N);
    return g;
}

// u * w^v with u a random unit series, known to N digits
LocalElem rand_elem(const Ring& g, int v, std::mt19937& rng) {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(std::max(g.N - v, 1)));
    for (auto& x : c) x = rng() % g.F->q();
    c[0] = 1 + rng() % (g.F->q() - 1);
    return LocalElem(g.R.get(), v, c, g.N);
}

LocalDrinfeld rank2(const Ring& g, std::uint64_t q, int v1_w, std::mt19937& rng) {
    return make_local_drinfeld(q, 1, g.R, {LocalElem::pi_pow(g.R.get(), 1), rand_elem(g, v1_w, rng), rand_elem(g, 0, rng)});
}

bool oracle_break(const LocalDrinfeld& phi) {
    std::vector<std::pair<std::int64_t, Rat>> pts;
    std::int64_t x = 1;
    for (int i = 0; i <= phi.r; ++i, x *= static_cast<std::int64_t>(phi.Q))
        if (auto v = phi.coeff(i).vpi()) pts.emplace_back(x, *v);
    auto env = oracle::lower_envelope(pts);
    const auto Q = static_cast<std::int64_t>(phi.Q);
    auto v1 = phi.coeff(1).vpi();
    if (!v1 || env.at(Q) != *v1) return false;
    return env.at(Q) - env.at(Q - 1) < env.at(Q + 1) - env.at(Q);
}

}  // namespace

TEST_CASE("existence examples") {
    auto g = ring(3, 1, 4, 24);
    std::mt19937 rng(1);
    auto ord = rank2(g, 3, 0, rng);
    for (int n = 1; n <= 3; ++n) CHECK(can_sub_exists(ord, n).exists);
    // boundary v(Ha) = 3/4 = q/(1+q) is excluded
    auto edge = rank2(g, 3, 3, rng);
    CHECK(*v_hasse(edge) == Rat(3, 4));
    CHECK_FALSE(can_sub_exists(edge).exists);
    CHECK_THROWS_AS(can_sub_kernel(edge), PreconditionError);
    auto half = rank2(g, 3, 2, rng);
    CHECK(can_sub_exists(half).exists);
    CHECK(epsilon_bound(3) == Rat(1, 4));
}

TEST_CASE("kernel examples and cokernel exponent") {
    std::mt19937 rng(2);
    auto g = ring(3, 1, 6, 24);
    auto ord = rank2(g, 3, 0, rng);
    auto H = can_sub_kernel(ord);
    CHECK(deg_pi(H) == Rat(1));
    CHECK(htt_exponent(ord) == Rat(0));
    auto third = rank2(g, 3, 2, rng);  // v(Ha) = 1/3
    CHECK(deg_pi(can_sub_kernel(third)) == Rat(2, 3));
    auto half = rank2(g, 3, 3, rng);
    CHECK(deg_pi(can_sub_kernel(half)) == Rat(1, 2));
    CHECK(htt_exponent(half) == Rat(1, 4));
}

TEST_CASE("degree of pieces") {
    auto g = ring(3, 1, 1, 20);
    const LocalRing* R = g.R.get();
    TauPoly<LocalElem> mult(LocalElem::zero(R), 3, {LocalElem::pi_pow(R, 1), LocalElem::one(R)});
    CHECK(deg_pi({mult, 1}) == Rat(1));
    TauPoly<LocalElem> et(LocalElem::zero(R), 3, {LocalElem::constant(R, 2), LocalElem::one(R)});
    CHECK(deg_pi({et, 1}) == Rat(0));
    TauPoly<LocalElem> bad(LocalElem::zero(R), 3, {LocalElem::one(R), LocalElem::pi_pow(R, 1)});
    CHECK_THROWS_AS(deg_pi({bad, 1}), PreconditionError);
}

TEST_CASE("degree is additive under composition (200 random pairs)") {
    std::mt19937 rng(3);
    for (std::uint32_t q : {2u, 3u}) {
        auto g = ring(q, 1, 6, 16);
        for (int t = 0; t < 100; ++t) {
            auto mk = [&](int m) {
                std::vector<LocalElem> c;
                for (int i = 0; i < m; ++i) c.push_back(rand_elem(g, static_cast<int>(rng() % 13), rng));
                c.push_back(rand_elem(g, 0, rng));
                return StrictPiece{TauPoly<LocalElem>(LocalElem::zero(g.R.get()), q, c), m};
            };
            auto l1 = mk(1 + static_cast<int>(rng() % 2));
            auto l2 = mk(1 + static_cast<int>(rng() % 2));
            StrictPiece comp{l2.ell * l1.ell, l1.m + l2.m};
            CHECK(deg_pi(comp) == deg_pi(l1) + deg_pi(l2));
            CHECK(deg_pi(comp) >= Rat(0));
            CHECK(deg_pi(comp) <= Rat(comp.m * 12, 6));
        }
    }
}

TEST_CASE("random rank-2 modules: break test, certificate, cokernel exponent") {
    std::mt19937 rng(4);
    auto g = ring(3, 1, 12, 24);
    int existing = 0;
    for (int t = 0; t < 120; ++t) {
        const int n = static_cast<int>(rng() % 14);  // v(Ha) = n/12 in [0, 13/12]
        auto phi = rank2(g, 3, n, rng);
        const bool br = oracle_break(phi);
        CHECK(br == (Rat(n, 12) < Rat(3, 4)));
        auto rep = can_sub_exists(phi);
        CHECK(rep.exists == br);
        if (!br) continue;
        ++existing;
        KernelCertificate cert;
        auto H = can_sub_kernel(phi, &cert);
        CHECK(cert.residual >= Rat(22));
        const Rat va = deg_pi(H);
        CHECK(va == Rat(1) - Rat(n, 12));
        CHECK(va >= Rat(0));
        CHECK(va <= Rat(1));
        auto [quot, rem] = skew_right_divide(phi.phi_pi, H.ell);
        for (auto& c : rem.coeffs()) CHECK(c.is_zero());
        const Rat w = htt_exponent(phi);
        CHECK(w == (Rat(1) - va) / Rat(2));
        CHECK(w >= Rat(n, 12) / Rat(2));
    }
    CHECK(existing > 50);
}

TEST_CASE("rank 3 break test agrees with the oracle") {
    std::mt19937 rng(5);
    auto g = ring(2, 1, 6, 20);
    for (int t = 0; t < 60; ++t) {
        const int v1 = static_cast<int>(rng() % 10), v2 = static_cast<int>(rng() % 10);
        auto phi = make_local_drinfeld(2, 1, g.R,
                                       {LocalElem::pi_pow(g.R.get(), 1), rand_elem(g, v1, rng), rand_elem(g, v2, rng), rand_elem(g, 0, rng)});
        const bool br = oracle_break(phi);
        CHECK(can_sub_exists(phi).exists == br);
        if (br) {
            KernelCertificate cert;
            auto H = can_sub_kernel(phi, &cert);
            CHECK(cert.residual >= Rat(18));
            CHECK(deg_pi(H) == Rat(1) - Rat(v1, 6));
        }
    }
}

TEST_CASE("iterated echelon: sufficient bound implies existence; quotient multiplies v(Ha) by Q") {
    std::mt19937 rng(6);
    auto g = ring(3, 1, 36, 12);
    for (int t = 0; t < 30; ++t) {
        const int n = static_cast<int>(rng() % 27);
        auto phi = rank2(g, 3, n, rng);
        for (int e = 1; e <= 3; ++e) {
            auto rep = can_sub_exists(phi, e);
            if (rep.sufficient) CHECK(rep.exists);
            // iterated condition: Q^{e-1} v < Q/(Q+1)
            Rat v(n, 36), bound(3, 4);
            for (int k = 1; k < e; ++k) bound /= 3;
            CHECK(rep.exists == (v < bound));
        }
        if (Rat(n, 36) < Rat(1, 4)) {
            auto psi = quotient(phi, can_sub_kernel(phi));
            CHECK(*v_hasse(psi) == Rat(3 * n, 36));
        }
    }
}

TEST_CASE("precision errors") {
    auto g = ring(3, 1, 1, 2);
    std::mt19937 rng(7);
    auto phi = rank2(g, 3, 1, rng);
    CHECK_THROWS_AS(can_sub_exists(phi), PrecisionError);
    auto h = ring(3, 1, 1, 10);
    const LocalRing* R = h.R.get();
    // a_1 known only to be divisible by pi^10: indeterminate and on the hull's side
    auto phi2 = make_local_drinfeld(3, 1, h.R, {LocalElem::pi_pow(R, 1), LocalElem::zero(R, 10), LocalElem::one(R)});
    CHECK_FALSE(can_sub_exists(phi2).exists);
    auto phi4 = make_local_drinfeld(3, 1, h.R, {LocalElem::pi_pow(R, 1), LocalElem::pi_pow(R, 1), LocalElem::zero(R, 0), LocalElem::one(R)});
    CHECK_THROWS_AS(local_newton(phi4), PrecisionError);
    CHECK_THROWS_AS(make_local_drinfeld(3, 1, h.R, {LocalElem::one(R), LocalElem::one(R)}), PreconditionError);
    CHECK_THROWS_AS(make_local_drinfeld(3, 1, h.R, {LocalElem::pi_pow(R, 1), LocalElem::pi_pow(R, 1)}), PreconditionError);
}

TEST_CASE("split rank 2: lines, kernels and the correspondence") {
    // Q = 3: (Q-1) A + (Q^2-Q) B = E with z1 ~ w^A, z2 ~ w^B
    const int E = 24;
    std::mt19937 rng(8);
    auto g = ring(3, 1, E, 12);
    for (int B : {0, 1, 2}) {
        const int A = (E - 6 * B) / 2;
        auto y = make_split_rank2(3, 1, g.R, rand_elem(g, A, rng), rand_elem(g, B, rng));
        REQUIRE(y.lines.size() == 4);
        // every basis vector is killed by phi_pi
        for (auto& z : y.lines) CHECK(y.phi.phi_pi.eval(z).is_zero());
        const std::size_t H = canonical_line(y);
        CHECK(H == 0);
        // the canonical line matches the slope factorization
        auto K = can_sub_kernel(y.phi);
        auto lH = line_piece(y.lines[H], 3);
        CHECK(deg_pi(K) == deg_pi(lH));
        CHECK((K.ell.coeffs()[0] - lH.ell.coeffs()[0]).is_zero());
        // its Q points
        FieldEmbedding emb(FieldCtx::make(3, 1), g.F);
        for (std::uint32_t c = 0; c < 3; ++c)
            CHECK(K.ell.eval(LocalElem::constant(g.R.get(), emb(c)) * y.z1).is_zero());
        for (std::size_t h = 0; h < y.lines.size(); ++h) {
            auto ups = up_correspondence(y, h);
            CHECK(ups.size() == 3);
            for (auto& e : ups) CHECK(e.residual >= Rat(9));
        }
        auto rep = deg_dynamics_check(y, H);
        CHECK(rep.monotone);
        CHECK(rep.classification_ok);
        if (B == 0) {
            CHECK(rep.deg_y == Rat(1));
            for (auto& [L, d] : rep.degs) CHECK(d == Rat(1));
            // etale H: exactly the canonical supplement keeps degree 0
            auto et = deg_dynamics_check(y, 1);
            CHECK(et.deg_y == Rat(0));
            CHECK(et.equalities == 1);
            CHECK(et.monotone);
        } else {
            CHECK(rep.deg_y > Rat(0));
            CHECK(rep.deg_y < Rat(1));
            CHECK(rep.equalities == 0);
            CHECK(*rep.min_increment > Rat(0));
        }
        auto par = up_correspondence(y, H, 3);
        auto seq = up_correspondence(y, H, 1);
        for (std::size_t k = 0; k < par.size(); ++k) CHECK(par[k].deg == seq[k].deg);
    }
}

TEST_CASE("local module JSON") {
    auto a = parse_local_module_json(R"({"q":3,"r":2,"prime":"T","phi_T":["T","T^2+1","1"]})", 10);
    CHECK(a.phi.r == 2);
    CHECK(*v_hasse(a.phi) == Rat(0));
    auto b = parse_local_module_json(R"({"q":3,"E":4,"phi_pi":["pi","w^2","1 + w"]})", 10);
    CHECK(*v_hasse(b.phi) == Rat(1, 2));
    CHECK(can_sub_exists(b.phi).exists);
    auto c = parse_local_module_json(R"({"q":3,"E":24,"torsion_basis":["w^12","1 + w"]})", 8);
    REQUIRE(c.split);
    CHECK(c.split->lines.size() == 4);
    CHECK_THROWS_AS(parse_local_module_json(R"({"q":3,"E":4,"phi_pi":["pi","w^","1"]})", 10), ParseError);
    CHECK_THROWS_AS(parse_local_module_json(R"({"q":3,"E":4,"phi_pi":["1","w","1"]})", 10), PreconditionError);
    CHECK_THROWS_AS(parse_local_module_json(R"({"q":3,"r":2,"prime":"T^2+1","phi_T":["T","1","1"]})", 10), PreconditionError);
    CHECK_THROWS_AS(parse_local_module_json(R"({"q":3,"E":24,"torsion_basis":["w","w"]})", 8), PreconditionError);
    CHECK_THROWS_AS(parse_local_module_json("{\"q\":3,", 8), ParseError);
}
