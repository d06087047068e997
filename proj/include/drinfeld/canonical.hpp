#pragma once
#include "drinfeld/local.hpp"
#include "drinfeld/newton.hpp"
#include "drinfeld/tau.hpp"

#include <string>
#include <vector>

namespace drinfeld {

// phi_pi(Z) = pi Z + a_1 Z^Q + ... + a_r Z^{Q^r}, Q = q^d, over F_{q^f}[[w]], w^E = pi.
// Stored as a twisted polynomial in tau_Q.
struct LocalDrinfeld {
    std::uint64_t q = 0;
    int d = 1;
    std::uint64_t Q = 0;
    int r = 0;
    FieldPtr base;  // F_q
    LocalRingPtr R;
    TauPoly<LocalElem> phi_pi;

    DrinfeldModule<LocalElem> as_module() const;
    const LocalElem& coeff(int i) const { return phi_pi.coeffs()[static_cast<std::size_t>(i)]; }
    const LocalRing* ring() const { return R.get(); }
};

// errors: linear coefficient not pi, non-unit leading coefficient, rank < 1,
// residue field not containing F_Q
LocalDrinfeld make_local_drinfeld(std::uint64_t q, int d, LocalRingPtr R, std::vector<LocalElem> coeffs);

// order Q^m piece cut out by a monic twisted polynomial of tau_Q-degree m
struct StrictPiece {
    TauPoly<LocalElem> ell;
    int m = 0;
};

inline Rat epsilon_bound(std::uint64_t Q) { return Rat(1, static_cast<std::int64_t>(Q) + 1); }

RatInf v_hasse(const LocalDrinfeld& phi);

// Newton polygon of phi_pi(Z) at points (Q^i, v(a_i)). Coefficients only known to be zero
// to precision raise PrecisionError if they could touch the hull.
NewtonPolygon local_newton(const LocalDrinfeld& phi);

struct CanSubReport {
    bool exists = false;      // break test, iterated through quotients for n > 1
    bool sufficient = false;  // v(Ha) < 1/(2 Q^{n-1})
    // v(Ha) of phi, phi/C_1, ...; a lower bound where Ha is zero to precision
    std::vector<RatInf> hasse_chain;
};
CanSubReport can_sub_exists(const LocalDrinfeld& phi, int n = 1);

struct KernelCertificate {
    int iterations = 0;
    Rat residual;  // pi-adic valuation bound of the remainder of phi_pi by ell
};
// ell = a + tau_Q; errors when no break at Q or the iteration does not settle
StrictPiece can_sub_kernel(const LocalDrinfeld& phi, KernelCertificate* cert = nullptr);

// v(c_0) - v(c_m); leading coefficient must be a unit
Rat deg_pi(const StrictPiece& H);

// (1 - v(a))/(Q - 1); throws if below v(Ha)/(Q - 1)
Rat htt_exponent(const LocalDrinfeld& phi);

// quotient by a piece, renormalized to a LocalDrinfeld
LocalDrinfeld quotient(const LocalDrinfeld& phi, const StrictPiece& H);

// --- rank 2 with rational p-torsion -------------------------------------------------

// line through z: Z^Q - z^{Q-1} Z
StrictPiece line_piece(const LocalElem& z, std::uint64_t Q);

struct SplitRank2 {
    LocalDrinfeld phi;
    LocalElem z1, z2;
    // generators of the Q + 1 lines: z1, then z2 + c z1 for c in F_Q
    std::vector<LocalElem> lines;
};
// phi_pi = (pi / b) * prod_{v in span(z1, z2)} (Z - v), b the linear coefficient of the product.
// errors: v(b) != 1, dependent basis
SplitRank2 make_split_rank2(std::uint64_t q, int d, LocalRingPtr R, const LocalElem& z1, const LocalElem& z2);

struct UpEdge {
    std::size_t L = 0;  // line index
    LocalDrinfeld target;
    LocalElem image_gen;
    StrictPiece image;
    Rat deg;
    Rat residual;  // valuation bound of target_pi mod image
};
std::vector<UpEdge> up_correspondence(const SplitRank2& y, std::size_t H, unsigned jobs = 1);

struct DynamicsReport {
    Rat deg_y;
    std::vector<std::pair<std::size_t, Rat>> degs;  // (L, deg x)
    bool monotone = true;
    bool classification_ok = true;  // equality only when deg_y is 0 or 1
    std::size_t equalities = 0;
    RatInf min_increment;
};
DynamicsReport deg_dynamics_check(const SplitRank2& y, std::size_t H, unsigned jobs = 1);

// line index with the largest degree
std::size_t canonical_line(const SplitRank2& y);

// --- I/O ----------------------------------------------------------------------------

// Accepts a global descriptor {"q","r","prime","phi_T"} (degree-1 prime, localized),
// a local form {"q","d","E","f","phi_pi":[...]} or {"q","d","E","f","torsion_basis":[z1,z2]}.
// prec is in pi-units.
struct LocalInput {
    LocalDrinfeld phi;
    std::optional<SplitRank2> split;
};
LocalInput parse_local_module_json(const std::string& text, int prec);

std::string local_to_string(const LocalElem& x);

}  // namespace drinfeld
