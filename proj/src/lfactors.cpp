#include "padicrs/lfactors.hpp"

namespace padicrs {

AbelianWDRep AbelianWDRep::dual_shift() const {
    AbelianWDRep d;
    d.q = q;
    d.chi.ell = chi.ell;
    d.chi.cond = chi.cond;
    d.chi.unit_order = chi.unit_order;
    d.chi.unram_value = cyclo_inverse(chi.unram_value);
    if (chi.cond > 0) {
        d.chi.unit_table = chi.unit_table;
        for (auto& e : d.chi.unit_table)
            if (e >= 0) e = (chi.unit_order - e) % chi.unit_order;
    }
    d.twist_half = 2 - twist_half;
    return d;
}

CycloRat gauss_sum(const DirichletChar& chi) {
    long N = chi.modulus();
    if (chi.conductor() != N) throw std::domain_error("gauss_sum: character not primitive");
    if (chi.is_trivial()) throw std::domain_error("gauss_sum: trivial character");
    CycloRat g = cyclo_of(Rational(0));
    for (long x = 1; x < N; ++x) {
        auto e = chi.exponent(Int(x));
        if (!e) continue;
        g = g + zeta(chi.value_order(), *e) * zeta(N, x);
    }
    return g;
}

CycloRat epsilon_factor(const LocalCharQ& chi, long ell) {
    if (chi.cond == 0) return cyclo_of(Rational(1));  // psi level 0
    long N = 1;
    for (long i = 0; i < chi.cond; ++i) N *= ell;
    // eps(chi, psi) = chi(ell)^r * sum_u chi^{-1}(u) zeta_{ell^r}^u
    CycloRat g = cyclo_of(Rational(0));
    for (long u = 1; u < N; ++u) {
        if (u % ell == 0) continue;
        g = g + cyclo_inverse(chi.on_unit(Int(u))) * zeta(N, u);
    }
    CycloRat piv = cyclo_of(Rational(1));
    for (long i = 0; i < chi.cond; ++i) piv = piv * chi.unram_value;
    return piv * g;
}

QGraded gamma_inv(const AbelianWDRep& W) {
    // gamma(W, psi)^{-1} = L(W) / (eps(W, psi) L(W^*(1)))
    auto dual = W.dual_shift();
    if (W.chi.cond == 0) {
        // unramified: eps = 1; L-factors need integral q-powers
        if (W.twist_half % 2 != 0)
            throw std::domain_error("gamma_inv: unramified with half-integral twist");
        Rational qs = rat_pow(Rational(W.q), -W.twist_half / 2);
        Rational qs_dual = rat_pow(Rational(W.q), -dual.twist_half / 2);
        CycloRat x = W.chi.unram_value.scale(qs);
        CycloRat y = dual.chi.unram_value.scale(qs_dual);
        CycloRat num = cyclo_of(Rational(1)) - y;  // 1/L(W^*(1))
        CycloRat den = cyclo_of(Rational(1)) - x;  // 1/L(W)
        if (den.is_zero()) throw PoleError("gamma_inv: pole of L(W)");
        return QGraded(num * cyclo_inverse(den), 0);
    }
    // ramified: L = L(dual) = 1; eps(chi |.|^{h/2}, psi) = eps(chi,psi) q^{-h r/2}
    CycloRat e = epsilon_factor(W.chi, W.chi.ell);
    return QGraded(cyclo_inverse(e), -W.twist_half * W.chi.cond);
}

namespace {
// Euler-style building block (1 - x)^{-1} handled as multiplication by (1-x)
CycloRat one_minus(const CycloRat& x) { return cyclo_of(Rational(1)) - x; }
}  // namespace

CycloRat ev_factor(const OrdinaryDataP& d) {
    Rational p(d.p);
    Rational pinv = ratio(1, d.p);
    CycloRat one = cyclo_of(Rational(1));
    // Frobenius eigenvalues of V_pi (arithmetic normalisation): alpha, alpha2
    // numerator gamma factors: characters chi_w * (alpha o N) * (|.| o N) of E_w
    CycloRat num = one;
    auto gamma_inv_unram = [&](const CycloRat& frob_value, const Rational& qw) -> CycloRat {
        // gamma^{-1} = (1 - x^{-1} q_w^{-1}) / (1 - x)
        CycloRat x = frob_value;
        CycloRat nu = one - cyclo_inverse(x).scale(Rational(1) / qw);
        CycloRat de = one - x;
        if (de.is_zero()) throw PoleError("ev_factor: L-pole in a numerator gamma");
        return nu * cyclo_inverse(de);
    };
    if (d.split) {
        // two primes, q_w = p; Frobenius value chi_w * alpha * p^{-1}
        num = num * gamma_inv_unram(d.chi_w1 * d.alpha.scale(pinv), p);
        num = num * gamma_inv_unram(d.chi_w2 * d.alpha.scale(pinv), p);
    } else {
        // one prime, q_w = p^2, norm composition squares the Frobenius value
        num = num * gamma_inv_unram(d.chi_w1 * (d.alpha * d.alpha).scale(pinv * pinv), p * p);
    }
    // denominator: gamma(ad^{++})^{-1} with ad^{++} = omega^{-1} alpha^2 |.|^2
    CycloRat x_ad = cyclo_inverse(d.omega_p) * (d.alpha * d.alpha).scale(pinv * pinv);
    CycloRat den = gamma_inv_unram(x_ad, p);

    // Lscr(V)^{-1} = L(1,eta_v) L(1,pi_v,ad) / (zeta_v(2) L(1/2, pi_Ev x chi_v))
    int eta_p = d.split ? 1 : -1;
    CycloRat L_eta_inv = one - cyclo_of(ratio(eta_p, d.p));        // 1/L(1,eta)
    CycloRat zeta2_inv = one - cyclo_of(ratio(1, (long)d.p * d.p));  // 1/zeta(2)
    // L(1, pi, ad)^{-1} = (1 - 1/p)(1 - (a1/a2)/p)(1 - (a2/a1)/p)
    CycloRat r12 = d.alpha * cyclo_inverse(d.alpha2);
    CycloRat Lad_inv = (one - cyclo_of(pinv)) * (one - r12.scale(pinv)) *
                       (one - cyclo_inverse(r12).scale(pinv));
    // L(1/2, pi_E x chi): motivic, Frobenius values chi_w alpha_i^{f} q_w^{-1}
    CycloRat Lhalf_inv = one;
    if (d.split) {
        for (auto* cw : {&d.chi_w1, &d.chi_w2})
            for (auto* al : {&d.alpha, &d.alpha2})
                Lhalf_inv = Lhalf_inv * one_minus((*cw) * (*al).scale(pinv));
    } else {
        for (auto* al : {&d.alpha, &d.alpha2})
            Lhalf_inv = Lhalf_inv *
                        one_minus(d.chi_w1 * ((*al) * (*al)).scale(pinv * pinv));
    }
    // assemble: num / den * [L_eta * L_ad / (zeta2 * Lhalf)]^{... } careful:
    // Lscr = zeta(2) Lhalf / (L_eta L_ad);  Lscr^{-1} = L_eta L_ad / (zeta(2) Lhalf)
    //       = (1/L_eta_inv) ... invert the inverses:
    CycloRat Lscr_inv = cyclo_inverse(L_eta_inv) * cyclo_inverse(Lad_inv) * zeta2_inv * Lhalf_inv;
    if (den.is_zero()) throw PoleError("ev_factor: pole in the adjoint gamma");
    return num * cyclo_inverse(den) * Lscr_inv;
}

CycloRat ep_adjoint(const OrdinaryDataP& d) {
    Rational pinv = ratio(1, d.p);
    CycloRat one = cyclo_of(Rational(1));
    CycloRat x_ad = cyclo_inverse(d.omega_p) * (d.alpha * d.alpha).scale(pinv * pinv);
    CycloRat nu = one - cyclo_inverse(x_ad).scale(pinv);
    CycloRat de = one - x_ad;
    if (de.is_zero()) throw PoleError("ep_adjoint: pole");
    CycloRat gamma_ad_inv = nu * cyclo_inverse(de);
    CycloRat zeta2 = cyclo_inverse(one - cyclo_of(pinv * pinv));
    CycloRat r12 = d.alpha * cyclo_inverse(d.alpha2);
    CycloRat Lad_inv = (one - cyclo_of(pinv)) * (one - r12.scale(pinv)) *
                       (one - cyclo_inverse(r12).scale(pinv));
    return gamma_ad_inv * zeta2 * Lad_inv;
}

CycloRat e_pinf(const std::vector<CycloRat>& ev_values, long k0) {
    CycloRat out = zeta(4, ((k0 % 4) + 4) % 4);  // i^{k0 [F:Q]}, F = Q
    for (auto& v : ev_values) out = out * v;
    return out;
}

}  // namespace padicrs
