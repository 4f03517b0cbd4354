#pragma once

// Local Waldspurger zeta integrals at finite places: spherical Whittaker
// values by the Casselman-Shalika formula, the unramified cell-sum
// evaluation of the normalised integral R-natural (validating that it
// equals 1), the explicit non-vanishing test vector at an inert place, and
// the desk-scale global/local ratio experiment.

#include "padicrs/characters.hpp"
#include "padicrs/laurent.hpp"
#include "padicrs/lfactors.hpp"

namespace padicrs {

// values a + b sqrt(q): products of Casselman-Shalika terms carry half-
// integral q-powers that only cancel in normalised ratios
struct SqrtQVal {
    CycloRat ev, od;  // value = ev + od * sqrt(q)
    long q;

    explicit SqrtQVal(long q_, CycloRat e, CycloRat o) : ev(std::move(e)), od(std::move(o)), q(q_) {}
    static SqrtQVal of(long q, CycloRat e) { return SqrtQVal(q, std::move(e), cyclo_of(Rational(0))); }
    friend SqrtQVal operator+(const SqrtQVal& a, const SqrtQVal& b) {
        return SqrtQVal(a.q, a.ev + b.ev, a.od + b.od);
    }
    friend SqrtQVal operator*(const SqrtQVal& a, const SqrtQVal& b) {
        return SqrtQVal(a.q, a.ev * b.ev + (a.od * b.od).scale(Rational(a.q)),
                        a.ev * b.od + a.od * b.ev);
    }
    bool is_zero() const { return ev.is_zero() && od.is_zero(); }
    SqrtQVal inverse() const {
        // 1/(e + o sqrt q) = (e - o sqrt q) / (e^2 - q o^2)
        CycloRat nrm = ev * ev - (od * od).scale(Rational(q));
        CycloRat ni = cyclo_inverse(nrm);
        return SqrtQVal(q, ev * ni, -(od * ni));
    }
};

struct UnramifiedPS {
    long ell;
    CycloRat alpha1, alpha2;  // unitary Satake parameters

    // spherical Whittaker value: 0 for n < 0, q^{-n/2} h_n(alpha) otherwise
    SqrtQVal cs_whittaker(long n) const;
};

// local character data of E_ell for the torus integral: split (two unramified
// values) or inert (one value at ell)
struct TorusChar {
    bool split = false;
    CycloRat c1 = cyclo_of(Rational(1));
    CycloRat c2 = cyclo_of(Rational(1));  // split: values at the two primes; inert: c1 at ell
};

struct RvResult {
    SqrtQVal value;          // the normalised R-natural, exact partial sum
    Rational tail_bound;     // certified archimedean bound on the dropped tail
    long truncation;         // N
};

// unramified normalised Waldspurger integral by explicit cell summation;
// all data unramified, standard Schwartz function, psi level 0
RvResult rv_unramified(const UnramifiedPS& pi, const TorusChar& chi, long N);

// the non-vanishing test vector at an inert place: phi_2 = 1_{O_E^*} x 1_{Z^*}
// with phi_1 standard; returns the exact ratio R(test) / R(standard)
struct NnvResult {
    SqrtQVal ratio;      // R(test vector) / R(spherical)
    bool nonzero;
    bool phi2_vanishes_at_zero;  // phi_2(0, u) = 0 for all u
};

NnvResult nnv_vector(const QuadFieldData& E, long ell, const UnramifiedPS& pi,
                     const TorusChar& chi);

// R-natural for a general finite Schwartz datum at a split or inert place,
// via the K-averaged cell sum.  phi2_unit_support = true replaces the
// standard phi_2 by the unit indicator (the datum used in the experiments).
SqrtQVal rv_general(const QuadFieldData& E, long ell, const UnramifiedPS& pi,
                    const TorusChar& chi, bool phi2_unit_support, long N);

}  // namespace padicrs
