#pragma once

// Fourier coefficients of the weight (0,1)+|l| twisted theta series of an
// imaginary quadratic E: exact lattice enumeration against a finite
// Schwartz datum.  Only the y = 1 coefficient slices are materialised;
// the kernel module recovers everything else by reindexing.

#include "padicrs/characters.hpp"
#include "padicrs/qexp.hpp"

namespace padicrs {

// finite Schwartz datum at one prime: either standard (indicator of
// O_{E,ell} with unit u-support) or an explicit cell table.  A cell is the
// coset rep + ell^level * O_{E,ell}; reps may have denominators.  u_window
// lists the permitted v_ell(u) values (standard: {0}).
struct ThetaCell {
    Rational rep_x, rep_y;  // coordinates w.r.t. the basis {1, omega}
    long level = 0;
    CycloRat value = cyclo_of(Rational(1));
};

struct SchwartzPlaceTheta {
    long ell = 0;
    bool standard = true;
    std::vector<ThetaCell> cells;
    std::vector<long> u_window{0};
};

struct ThetaDatum {
    QuadFieldData E;
    HeckeCharE chi;      // finite-order character used to weight lattice points
    long l0 = 0, l = 0;  // algebraic weight (l0, l), same parity
    std::vector<SchwartzPlaceTheta> places;  // non-standard places only

    static ThetaDatum standard(const QuadFieldData& E) {
        return ThetaDatum{E, HeckeCharE::trivial(E), 0, 0, {}};
    }
};

// embedding sqrt(D) -> quadratic Gauss sum in Q(zeta_|D|); fixes the choice
// of root once and for all so x^l monomials are exact cyclotomic values
CycloRat sqrtD_as_cyclo(const QuadFieldData& E);
CycloRat quad_to_cyclo(const QuadFieldData& E, const QuadElem& x);

// theta coefficient table at y = 1 up to index bound B (indices scaled by
// denom_scale inside the returned expansion when cells have denominators)
TwistedExp<CycloRat> theta_coefficients(const ThetaDatum& datum, int64_t B);

// regularised torus average: (2 L(1,eta) / h_E) * [O_E^* : mu] * sum of the
// supplied coset values (the caller provides the mu-folded finite table)
CycloRat regularized_torus_average(const std::vector<CycloRat>& coset_values,
                                   const QuadFieldData& E, long mu_size);

}  // namespace padicrs
