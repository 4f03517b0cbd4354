#pragma once

// Local Whittaker functions of the Eisenstein series attached to a binary
// quadratic space (E_ell, delta * Norm): exact congruence-volume counting
// at ell away from p and infinity, interpolation in X = xi(ell) as a
// Laurent fraction, the closed forms at p and at the archimedean place,
// and global coefficient assembly.

#include "padicrs/characters.hpp"
#include "padicrs/qexp.hpp"
#include "padicrs/theta.hpp"

namespace padicrs {

// the local quadratic space V_{2,ell} = (E_ell, delta * N) together with the
// self-dual-measure bookkeeping for psi_u; delta = eps_unit * ell^delta_val
struct LocalQuadSpace {
    long ell;
    QuadFieldData E;
    long delta_val = 0;      // v_ell(delta)
    long delta_unit = 1;     // unit part of delta (an integer prime to ell)
    int splitting;           // +1 / -1 / 0
    long vD;                 // v_ell(D_E)

    static LocalQuadSpace make(const QuadFieldData& E, long ell, long delta_val = 0,
                               long delta_unit = 1) {
        return LocalQuadSpace{ell, E, delta_val, delta_unit, E.splitting(ell),
                              E.disc_valuation(ell)};
    }
};

// Schwartz cells on V_2 at ell (same shape as the theta cells); standard
// means the indicator of O_{E,ell} x {v(u) = 0}
struct SchwartzPlaceEis {
    long ell = 0;
    bool standard = true;
    std::vector<ThetaCell> cells;

    // cells for the indicator of O_{E,ell}^* (x-part) -- condition (phi cond)
    static SchwartzPlaceEis unit_support(const QuadFieldData& E, long ell);
};

// exact volume of D_n(a) = {x in V_2 : u q(x) in a + ell^n Z_ell} against the
// phi_2 cell weights, under the self-dual measure for psi_u (normalised by
// |D_ell|^{-1/2}, so the result is rational).  Exact lattice-point counting
// with hierarchical Hensel lifting; no spherical shortcut.
Rational volume_Dn(const LocalQuadSpace& sp, const Rational& a, const Rational& u, long n,
                   const SchwartzPlaceEis& phi2);

// certified stabilisation: recomputing with the counting modulus bumped by
// one and two leaves volume_Dn unchanged (runs the internal counter at
// higher levels); throws on failure
void volume_Dn_certify(const LocalQuadSpace& sp, const Rational& a, const Rational& u, long n,
                       const SchwartzPlaceEis& phi2);

// the |d|^{-3/2} |D|^{-1/2}-normalised local Whittaker function at ell as a
// Laurent fraction in X = xi(ell); regular (denominator 1) for standard
// phi_2, otherwise with denominator dividing 1 - eta(ell) X / ell
struct WhittakerInterp {
    LaurentFraction frac;     // variable 0 is X = xi_ell(ell)
    long tail_start = 0;      // first n of the certified geometric regime
    bool regular = true;      // denominator cleared exactly
};

WhittakerInterp interpolate_whittaker(const LocalQuadSpace& sp, const Rational& a,
                                      const Rational& u, const SchwartzPlaceEis& phi2);

// evaluation at a character value x0 = xi_ell(ell); reports poles
CycloRat whittaker_nonarch(const LocalQuadSpace& sp, const Rational& a, const Rational& u,
                           const CycloRat& xi_ell, const SchwartzPlaceEis& phi2);

// the place p: normalised closed form xi_p(-1) kappa2'(u) 1[v_p(a) >= 0, u in U0]
// kappa2' is a smooth character of U0 = 1 + pZ_p given by a value table mod p^r
struct SmoothCharUp {
    long p = 5;
    long r = 1;                  // values factor through (1 + pZ_p)/(1 + p^r Z_p)
    long order = 1;              // values in mu_order
    std::vector<long> exps;      // exponent table indexed by (u mod p^r), -1 off U0
    CycloRat value(const Rational& u) const;
    bool in_U0(const Rational& u) const;
    static SmoothCharUp trivial(long p);
};

CycloRat whittaker_p(const Rational& a, const Rational& u, const CycloRat& xi_at_minus1,
                     const SmoothCharUp& kappa2, long p);

// archimedean closed form: (-1)^k * 2 * a^{k+k0} * Q_{k0,k}((4 pi a y)^{-1})
// e^{-2 pi a y}; returned as the rational prefactor (Graded carries the
// formal (2 pi i)-grading cancellations of the Laguerre data) and the
// Q-polynomial in T/a
struct ArchWhittaker {
    Graded prefactor;        // rational part 2 (-1)^k a^{k+k0}, trivial grading
    TPoly<CycloRat> qpoly;   // Q_{k0,k}(T / a) expanded in T
};

std::vector<Rational> laguerre_P(long k0, long k);   // rational coeffs, grading (-k0,-k)
std::vector<Rational> qpoly_Q(long k0, long k);      // Q_{k0,k}, Q(0) = 1
ArchWhittaker whittaker_arch(const Rational& a, long k0, long k);

// ---------------------------------------------------------------------------
// Global assembly: the p-adic q-expansion of E_r(u, phi2; xi, k) at y = 1.
struct EisensteinDatum {
    QuadFieldData E;
    DirichletChar xi = DirichletChar::trivial(1);
    long k0 = 0;
    long k = 0;
    long p = 5;
    long r = 1;
    SmoothCharUp kappa2 = SmoothCharUp::trivial(5);
    std::vector<SchwartzPlaceEis> places;  // non-standard places away from p
    int eps_V2 = -1;                       // epsilon(V_2): -1 coherent, +1 incoherent
    std::vector<long> delta_val;           // optional per-place twists, parallel to places

    // lambda = -eps(V2) * 2 / (|D|^{1/2} L^{(p)}(1,eta)) in the completed
    // (rational) reading: |D|^{1/2} L^{(p)}(1,eta) = |D| * (2h/w) * (1 - eta(p)/p)
    Rational lambda() const;
};

// coefficient at index b and twist u (positive rational, unit outside the
// declared places), as the lambda-normalised product of local values
CycloRat eisenstein_coefficient(const EisensteinDatum& datum, const Rational& b,
                                const Rational& u);

// the twisted nearly-holomorphic table up to index bound B: coefficient
// polynomials 2 (-1)^k b^{k+k0} Q_{k0,k}(T/b) * prod_ell W-hat * lambda
TwistedExp<CycloRat> eisenstein_global_coeffs(const EisensteinDatum& datum, int64_t B,
                                              const std::vector<Rational>& twists);

}  // namespace padicrs
