#pragma once

// Finite-order characters: Dirichlet characters of Q (value tables on
// (Z/N)^* built from generator assignments), ray-class characters of an
// imaginary quadratic E with h = 1 (value tables on (O/M)^* trivial on
// units), their local components, and Dirichlet L-values at s = 0 via
// generalized Bernoulli numbers.

#include "padicrs/cyclo.hpp"
#include "padicrs/quadfield.hpp"

#include <map>
#include <optional>

namespace padicrs {

class DirichletChar {
public:
    // trivial character mod N
    static DirichletChar trivial(long N = 1);

    // quadratic character attached to a fundamental discriminant D (Kronecker symbol)
    static DirichletChar kronecker_char(long D);

    // character defined by exponents on the canonical generators of (Z/N)^*;
    // gens/orders expose the factor structure, exps give the image
    // zeta_order^{exps[i]} of generator i where order = group exponent
    static DirichletChar from_exponents(long N, const std::vector<long>& exps);

    long modulus() const { return N_; }
    long value_order() const { return order_; }  // values lie in mu_order

    bool defined_at(const Int& a) const { return mpz_gcd_ui(nullptr, a.get_mpz_t(), N_) == 1; }

    // exponent e with chi(a) = zeta_order^e, or nullopt when gcd(a,N) > 1
    std::optional<long> exponent(const Int& a) const;
    CycloRat operator()(const Int& a) const;

    bool is_trivial() const;
    int sign() const;  // chi(-1)
    long conductor() const;
    DirichletChar primitive_part() const;
    DirichletChar inverse() const;
    DirichletChar times(const DirichletChar& other) const;

    // canonical generators of (Z/N)^* with their orders
    static std::pair<std::vector<long>, std::vector<long>> unit_group_generators(long N);

private:
    DirichletChar() = default;
    long N_ = 1;
    long order_ = 1;
    std::vector<long> table_;  // index a in [0,N): exponent of zeta_order, or -1
};

// -B_{1,chi} for primitive nontrivial chi; rational (as CycloRat) when chi quadratic
CycloRat dirichlet_L_at_0(const DirichletChar& chi);

// completed L(1, eta_E) = L(0, eta_E) = -B_{1,eta}, cross-checked against 2h/w
Rational completed_L1_eta(const QuadFieldData& E);

// ---------------------------------------------------------------------------
// Local characters of Q_ell^*
struct LocalCharQ {
    long ell = 0;
    CycloRat unram_value = cyclo_of(Rational(1));  // value at the uniformizer
    long cond = 0;                                 // conductor exponent r
    long unit_order = 1;                           // unit values in mu_unit_order
    std::vector<long> unit_table;                  // on (Z/ell^r)^*, exponent or -1

    bool unramified() const { return cond == 0; }
    CycloRat at_uniformizer() const { return unram_value; }
    CycloRat on_unit(const Int& u) const;
    CycloRat value(const Int& x) const;  // full value at nonzero x in Q^* subset Q_ell^*
};

// local component at ell of the idelic character attached to chi mod N:
// unramified value chi^{(ell)}(ell), unit action chi_ell(u)^{-1}
LocalCharQ local_component(const DirichletChar& chi, long ell);

// ---------------------------------------------------------------------------
// Finite-order Hecke characters of E (class number 1): chi((beta)) =
// chitab(beta mod M), well-defined because the table is trivial on units.
class HeckeCharE {
public:
    // trivial character (modulus 1)
    static HeckeCharE trivial(const QuadFieldData& E);

    // character of (O/M)^* from exponent assignments on its generators;
    // throws unless trivial on the torsion units of O_E
    static HeckeCharE from_unit_exponents(const QuadFieldData& E, long M,
                                          const std::vector<long>& exps);

    const QuadFieldData& field() const { return E_; }
    long modulus() const { return M_; }
    long value_order() const { return order_; }

    bool defined_at(const QuadElem& beta) const;
    CycloRat at_element(const QuadElem& beta) const;  // chitab(beta mod M)

    // value on the ideal (beta); requires gcd(N(beta), M) = 1
    CycloRat at_ideal_gen(const QuadElem& beta) const { return at_element(beta); }

    // restriction to A^*: the Dirichlet character a -> chi((a))
    DirichletChar restriction_to_Q() const;

    bool is_trivial() const { return order_ == 1; }

    // group structure of (O/M)^*: generators and orders
    static std::pair<std::vector<QuadElem>, std::vector<long>> unit_group_generators(
        const QuadFieldData& E, long M);

private:
    HeckeCharE(QuadFieldData E) : E_(E) {}
    long index_of(const QuadElem& beta) const;

    QuadFieldData E_;
    long M_ = 1;
    long order_ = 1;
    std::vector<QuadElem> residues_;  // units of O/M
    std::vector<long> expo_;          // parallel exponent table
};

// local component data of a HeckeCharE at a rational prime ell:
// split ell: two LocalCharQ (at the prime and its conjugate);
// inert/ramified: the value at a uniformizer of E_w
struct LocalCharE {
    int splitting = -1;                 // +1 split, -1 inert, 0 ramified
    long ell = 0;
    std::vector<LocalCharQ> split_comps;  // size 2 when split
    CycloRat inert_unif_value = cyclo_of(Rational(1));
};

LocalCharE local_component_E(const HeckeCharE& chi, long ell);

}  // namespace padicrs
