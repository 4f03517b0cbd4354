#pragma once

// The theta-Eisenstein kernel: local J factors and their two-variable
// Laurent interpolation, the level-n kernel coefficients of Lemma-FW-I
// shape, the Riemann-sum p-adic measure on the unit subgroup U0, the
// ordinary family coefficients, and the global/local ratio experiment.
//
// Kernel coefficients at Riemann level n are the exact convolution
//   W(c) = lambda * sum_{0 < A < p^{n!} c} Ttheta(A) * TE(p^{n!} c - A)
// where Ttheta carries the chi-weighted ideal-shell counts and the p-level
// theta weight kappa1'(A) 1_{U0}(A), and TE carries the product of
// normalised local Whittaker values together with the p-factor
// xi_p(-1) kappa2'(A) and the archimedean monomial (-1)^k B^{k+k0}.

#include "padicrs/characters.hpp"
#include "padicrs/eisenstein.hpp"
#include "padicrs/qexp.hpp"
#include "padicrs/theta.hpp"
#include "padicrs/waldspurger.hpp"

namespace padicrs {

struct KernelDatum {
    QuadFieldData E;
    HeckeCharE chi;                 // finite-order character of E (h = 1)
    DirichletChar xi;
    long p;
    long r = 1;                     // p-level; must exceed all conductors
    SmoothCharUp kappa1, kappa2;
    long l0 = 0, l = 0, k0 = 0, k = 0;
    std::vector<SchwartzPlaceTheta> theta_places;  // away from p
    std::vector<SchwartzPlaceEis> eis_places;      // away from p (incl. phi-cond place)
    int eps_V2 = -1;

    KernelDatum(const QuadFieldData& E_, long p_)
        : E(E_),
          chi(HeckeCharE::trivial(E_)),
          xi(DirichletChar::trivial(1)),
          p(p_),
          kappa1(SmoothCharUp::trivial(p_)),
          kappa2(SmoothCharUp::trivial(p_)) {}

    // lambda = -eps(V2) 2 / (|D|^{1/2} L^{(p)}(1,eta)), completed reading
    Rational lambda() const;
    // admissibility: (phi cond) at some inert place among the eis cells
    bool has_phi_cond_inert() const;
};

// local J factor at ell away from p, evaluated at unramified character
// values (xi_val = xi(ell); chi values from the datum's global character):
// theta ideal-shell sum times the normalised Whittaker value at c - a
CycloRat jv_local(const KernelDatum& datum, long ell, const Rational& a, const Rational& c);

// two-variable interpolation: variable 0 is X = xi(ell), variables 1,2 are
// Y_w = chi at the primes above ell (one variable when ell is not split)
LaurentFraction jv_interpolate(const KernelDatum& datum, long ell, const Rational& a,
                               const Rational& c);

// evaluation of jv_interpolate at explicit character values
CycloRat jv_eval(const KernelDatum& datum, long ell, const Rational& a, const Rational& c,
                 const CycloRat& xi_val, const CycloRat& y1, const CycloRat& y2);

// kernel coefficient at Riemann level n, exact value mod p^prec
PadicElem kernel_coefficient(const KernelDatum& datum, int64_t c, int n, int prec);

// ---------------------------------------------------------------------------
// p-adic measure on U0 = 1 + pZ_p attached to (J^p, c): per-level coset
// tables assembled from the level-N Riemann sums.  Fiber-sum compatibility
// across coset levels is exact by construction; the stabilisation
// certificate compares cutoff levels N-1 and N.
struct UnitMeasure {
    long p;
    int64_t c;
    int master_level;            // cutoff p^{master_level!}
    int coset_levels;            // tables for k = 1..coset_levels
    int prec;                    // working precision of the table values
    int stab_precision;          // cutoff-direction agreement mod p^stab_precision
    std::vector<std::map<long, PadicElem>> tables;  // [k-1][b mod p^k]

    PadicElem value(long b, int k) const;
    // integrate a coset-sampled function at coset level k
    PadicElem integrate(const std::function<PadicElem(long)>& f, int k) const;
};

UnitMeasure build_measure(const KernelDatum& datum, int64_t c, int target_prec,
                          int master_level, int coset_levels);

// ordinary family coefficients: W(c) = lambda 1[v_p(c) >= 0] int kappa1 kappa2 dmu
QExp<PadicElem> iord_coefficients(const KernelDatum& datum, int64_t B, int prec, int level);

// the star-product route: assemble theta and Eisenstein tables up to
// p^{level!} * B, contract, project, and reindex; returns the same
// coefficient range as iord_coefficients for the cross-check
QExp<PadicElem> iord_via_star_product(const KernelDatum& datum, int64_t B, int prec, int level);

// ---------------------------------------------------------------------------
// Ratio experiment: two admissible Schwartz data differing at one split
// prime ell0; global ratio via eigencomponent extraction against fixture
// expansions, local ratio via the Waldspurger machinery.
struct RatioExperiment {
    KernelDatum datum1, datum2;  // differ at ell0 only
    long ell0;
    bool datum2_unit_support;    // the modification used on the local side
    QExp<Rational> eigenform;    // fixture (integral coefficients)
    CycloRat alpha;              // unit root of the fixture at p
    int prec;
    int level;
    int64_t B;
};

struct RatioResult {
    PadicElem lhs_ratio;      // ell_f(I1) / ell_f(I2)
    SqrtQVal rhs_ratio;       // R(phi1) / R(phi2) at ell0
    int agreement_valuation;  // v_p(lhs - rhs) capped at prec
    Rational extraction_residual;  // diagnostic for the fixture solve
};

RatioResult ratio_consistency(const RatioExperiment& exp);

}  // namespace padicrs
