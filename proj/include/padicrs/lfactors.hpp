#pragma once

// Abelian local L-, epsilon- and gamma-factors, their Galois equivariance,
// and the interpolation factors e_v, e_{p infinity}, e_p(ad).  Values are
// cyclotomic numbers carrying a formal half-integral power of q where the
// Hecke normalisation introduces q^{1/2}; the assembled interpolation
// factors must come out with integral q-exponent.

#include "padicrs/characters.hpp"
#include "padicrs/laurent.hpp"

namespace padicrs {

// value * q^{qhalf/2}; the grading must clear before a value leaves lfactors
struct QGraded {
    CycloRat val;
    long qhalf = 0;

    explicit QGraded(CycloRat v, long h = 0) : val(std::move(v)), qhalf(h) {}

    friend QGraded operator*(const QGraded& a, const QGraded& b) {
        return QGraded(a.val * b.val, a.qhalf + b.qhalf);
    }
    friend QGraded operator/(const QGraded& a, const QGraded& b) {
        return QGraded(a.val * cyclo_inverse(b.val), a.qhalf - b.qhalf);
    }
    CycloRat materialize(const Rational& q) const {
        if (qhalf % 2 != 0) throw std::domain_error("QGraded: dangling half power of q");
        return val.scale(rat_pow(q, qhalf / 2));
    }
};

// a character of a local field F_v (or E_w) together with an integral or
// half-integral twist exponent s in |.|^s, kept formal
struct AbelianWDRep {
    long q;               // residue cardinality of the base field
    LocalCharQ chi;       // the smooth character (uniformizer value + unit table)
    long twist_half = 0;  // |.|^{twist_half / 2}

    AbelianWDRep dual_shift() const;  // W^*(1) = chi^{-1} |.|^{1 - s}
};

// Gauss sum of a primitive character mod ell^r against the level-0 standard
// additive character: sum chi(x) zeta_{ell^r}^x over units mod ell^r
CycloRat gauss_sum(const DirichletChar& chi);

// epsilon factor of a ramified chi (conductor r >= 1, psi level 0):
// eps = chi(ell)^r * g(chi^{-1}); unramified chi has eps = 1
CycloRat epsilon_factor(const LocalCharQ& chi, long ell);

// inverse Deligne-Langlands gamma factor gamma(W, psi)^{-1} =
// L(W) / (eps(W, psi) L(W^*(1))) for an abelian W over a field with
// residue cardinality W.q
QGraded gamma_inv(const AbelianWDRep& W);

// interpolation factor e_v at a place v | p (Eq-(ev) shape):
//   prod_{w|v} gamma(chi_w alpha_v |.| o N_{E_w/F_v}, psi_{E,w})^{-1}
//   / gamma(omega^{-1} alpha^2 |.|^2, psi_v)^{-1} * Lscr(V)^{-1}
// for unramified principal series data at p: alpha = unit root value at p,
// omega = central character value, (c1, c2) = chi at the primes above p
// (split: two values; inert: single value with q_w = p^2).
struct OrdinaryDataP {
    long p;
    CycloRat alpha;      // U_p eigencharacter value at p (unit)
    CycloRat omega_p;    // central character value at p
    CycloRat alpha2;     // second Satake value: alpha * alpha2 = omega_p * p
    bool split;          // splitting of p in E
    CycloRat chi_w1, chi_w2;  // chi at the primes above p (chi_w2 unused if inert)
};

CycloRat ev_factor(const OrdinaryDataP& data);

// e_p(ad): gamma(ad^{++}, psi)^{-1} zeta_p(2) / L(1, pi_p, ad)
CycloRat ep_adjoint(const OrdinaryDataP& data);

// e_{p infinity} = i^{k0 [F:Q]} * prod_v e_v; i is tracked as zeta_4
CycloRat e_pinf(const std::vector<CycloRat>& ev_values, long k0);

}  // namespace padicrs
