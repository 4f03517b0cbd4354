#include "padicrs/waldspurger.hpp"

namespace padicrs {

SqrtQVal UnramifiedPS::cs_whittaker(long n) const {
    CycloRat zero = cyclo_of(Rational(0));
    if (n < 0) return SqrtQVal::of(ell, zero);
    // h_n = sum_{i+j=n} alpha1^i alpha2^j
    CycloRat h = zero;
    CycloRat a1 = cyclo_of(Rational(1));
    std::vector<CycloRat> a1p{a1}, a2p{a1};
    for (long i = 1; i <= n; ++i) {
        a1p.push_back(a1p.back() * alpha1);
        a2p.push_back(a2p.back() * alpha2);
    }
    for (long i = 0; i <= n; ++i) h = h + a1p[i] * a2p[n - i];
    // q^{-n/2}
    Rational qpow = rat_pow(ratio(1, ell), n / 2);
    if (n % 2 == 0) return SqrtQVal(ell, h.scale(qpow), zero);
    // odd: q^{-(n+1)/2} sqrt(q)
    return SqrtQVal(ell, zero, h.scale(rat_pow(ratio(1, ell), (n + 1) / 2)));
}

namespace {

// archimedean bound |sum c_i zeta^i| <= sum |c_i| under every embedding
Rational cyclo_abs_bound(const CycloRat& x) {
    Rational b(0);
    for (auto& c : x.coeffs()) b += abs(c);
    return b;
}

Rational sqrtq_abs_bound(const SqrtQVal& v) {
    // |ev| + |od| sqrt(q) <= |ev| + |od| * q
    return cyclo_abs_bound(v.ev) + cyclo_abs_bound(v.od) * Rational(v.q);
}

// torus shell sum S_n for the standard datum
CycloRat shell_sum(long ell, const TorusChar& chi, long n) {
    CycloRat zero = cyclo_of(Rational(0));
    if (chi.split) {
        CycloRat s = zero;
        for (long j = 0; j <= n; ++j) {
            CycloRat term = cyclo_of(Rational(1));
            for (long i = 0; i < j; ++i) term = term * chi.c1;
            for (long i = 0; i < n - j; ++i) term = term * chi.c2;
            s = s + term;
        }
        return s;
    }
    if (n % 2 != 0) return zero;
    CycloRat s = cyclo_of(Rational(1));
    for (long i = 0; i < n / 2; ++i) s = s * chi.c1;
    return s;
}

// L(1/2, pi_{E,v} x chi_v)^{-1} in the unitary normalisation, as SqrtQVal
SqrtQVal Lhalf_inverse(const UnramifiedPS& pi, const TorusChar& chi) {
    long q = pi.ell;
    CycloRat zero = cyclo_of(Rational(0));
    SqrtQVal one = SqrtQVal::of(q, cyclo_of(Rational(1)));
    SqrtQVal acc = one;
    if (chi.split) {
        for (auto* c : {&chi.c1, &chi.c2})
            for (auto* a : {&pi.alpha1, &pi.alpha2}) {
                // 1 - c alpha q^{-1/2}
                SqrtQVal f(q, cyclo_of(Rational(1)), -((*c) * (*a)).scale(ratio(1, q)));
                acc = acc * f;
            }
    } else {
        for (auto* a : {&pi.alpha1, &pi.alpha2}) {
            // base change: 1 - c alpha^2 q^{-1}
            SqrtQVal f(q, cyclo_of(Rational(1)) - (chi.c1 * (*a) * (*a)).scale(ratio(1, q)),
                       zero);
            acc = acc * f;
        }
    }
    return acc;
}

}  // namespace

RvResult rv_unramified(const UnramifiedPS& pi, const TorusChar& chi, long N) {
    long q = pi.ell;
    CycloRat zero = cyclo_of(Rational(0));
    SqrtQVal R(q, zero, zero);
    for (long n = 0; n <= N; ++n) {
        auto w = pi.cs_whittaker(n);
        auto s = shell_sum(q, chi, n);
        if (s.is_zero()) continue;
        R = R + w * SqrtQVal::of(q, s);
    }
    // vol(K) = zeta_ell(2)^{-1} cancels the zeta_ell(2) of the R-natural
    // normalisation, leaving R-nat = L(1,eta) * (cell sum) / L(1/2)
    int eta = chi.split ? 1 : -1;
    CycloRat L_eta = cyclo_inverse(cyclo_of(Rational(1) - ratio(eta, q)));
    SqrtQVal Rnat = R * SqrtQVal::of(q, L_eta) * Lhalf_inverse(pi, chi);

    // tail certificate: |W(n) S_n| <= (n+1) * (n+1) * qb^n with qb >= q^{-1/2},
    // times the fixed normalisation bound
    Rational qb = ratio(1, 1);
    {
        // smallest k/1024 with (k/1024)^2 >= 1/q
        long k = 1;
        while (Int(k) * k * q < Int(1024) * 1024) ++k;
        qb = ratio(k, 1024);
    }
    Rational norm_bound = cyclo_abs_bound(L_eta) * sqrtq_abs_bound(Lhalf_inverse(pi, chi));
    Rational tail(0);
    Rational power = rat_pow(qb, N + 1);
    for (long n = N + 1; n <= N + 400; ++n) {
        tail += Rational((n + 1) * (n + 1)) * power;
        power *= qb;
    }
    // geometric remainder for n > N + 400
    tail += Rational((N + 402) * (N + 402)) * power / (Rational(1) - qb) / (Rational(1) - qb);
    RvResult out{Rnat, tail * norm_bound, N};
    return out;
}

// ---------------------------------------------------------------------------
// K-averaged evaluation of the x2-component at x2 = 0 for the unit-support
// phi_2 = 1_{O_E^*} (inert or split ell, unramified).  Everything reduces to
// quadratic Gauss-type sums over O_E / ell^2.

namespace {

struct Phi2Bar {
    long ell;
    // value at (0, u) indexed by u mod ell^2 (units)
    std::map<long, CycloRat> at_zero;
};

// sum of psi(c N(x)/ell^2) over x in O/ell^2, divided by ell^4 (volume)
CycloRat gauss_norm_avg(const QuadFieldData& E, long ell, long cnum) {
    long m = ell * ell;
    CycloRat acc = cyclo_of(Rational(0));
    for (long x = 0; x < m; ++x)
        for (long y = 0; y < m; ++y) {
            Int nn = (((Int(x) * x + Int(E.tr_om) * x * y + Int(E.nm_om) * y * y) % m) * cnum) % m;
            long n = to_long(nn);
            acc = acc + zeta(m, n);
        }
    return acc.scale(ratio(1, (long)m * m));
}

// phi_2-bar(0, u) for phi2 = unit indicator, averaged over the cosets
// K / U_0(ell^2) with representatives {nbar(b) : b mod ell^2} and
// {n(ell c) w : c mod ell}.  The second family evaluates at x2 = 0 to
// (r(w) phi2)(0, u) = vol(O^*) independently of c.  Gamma factors of the
// two V-components cancel pairwise and are omitted.
Phi2Bar make_phi2bar(const QuadFieldData& E, long ell) {
    Phi2Bar out;
    out.ell = ell;
    long m = ell * ell;
    long index = m + ell;  // ell^2 + ell cosets
    // sanity: with the standard phi2 = 1_O these formulas must average to 1
    {
        CycloRat acc = cyclo_of(Rational(m));            // nbar(b) terms, all equal 1
        acc = acc + cyclo_of(Rational(ell));             // n(ell c) w terms: int 1_O = 1
        if (!(acc.scale(ratio(1, index)) == cyclo_of(Rational(1))))
            throw std::logic_error("make_phi2bar: coset bookkeeping broken");
    }
    for (long u = 1; u < m; ++u) {
        if (u % ell == 0) continue;
        CycloRat acc = cyclo_of(Rational(0));
        // nbar(b) = w^{-1} n(-b) w: value at (0, u) equals
        //   int psi(-b u N(x)) [1_O - ell^{-2} 1_{ell^{-1} O}](x) dx
        // (b = 0 term is phi2(0,u) = 0)
        for (long b = 1; b < m; ++b) {
            CycloRat t1 = cyclo_of(Rational(1));
            Int cc = ((Int(-b) * u % m) + m) % m;
            long c = to_long(cc);
            CycloRat t2 = gauss_norm_avg(E, ell, c);
            acc = acc + (t1 - t2);
        }
        // n(ell c) w terms: phase trivial at x = 0, value = vol(O^*)
        acc = acc + cyclo_of(Rational(ell) * (Rational(1) - ratio(1, (long)ell * ell)));
        out.at_zero.emplace(u, acc.scale(ratio(1, index)));
    }
    return out;
}

}  // namespace

SqrtQVal rv_general(const QuadFieldData& E, long ell, const UnramifiedPS& pi,
                    const TorusChar& chi, bool phi2_unit_support, long N) {
    if (!phi2_unit_support) return rv_unramified(pi, chi, N).value;
    if (pi.ell != ell) throw std::domain_error("rv_general: prime mismatch");
    auto pb = make_phi2bar(E, ell);
    long m = ell * ell;
    // the shells contribute u = ell^{-n} N(t); averaging over the unit part
    // of t runs N(u0) over the norm residues of units mod ell^2
    CycloRat avg_phi = cyclo_of(Rational(0));
    {
        std::map<long, long> counts;
        long total = 0;
        for (long x = 0; x < m; ++x)
            for (long y = 0; y < m; ++y) {
                Int nn = (Int(x) * x + Int(E.tr_om) * x * y + Int(E.nm_om) * y * y) % m;
                long n = to_long(nn);
                if (n % ell == 0) continue;
                counts[n]++;
                ++total;
            }
        for (auto& [n, c] : counts) avg_phi = avg_phi + pb.at_zero.at(n).scale(Rational(c));
        avg_phi = avg_phi.scale(ratio(1, total));
    }

    CycloRat zero = cyclo_of(Rational(0));
    SqrtQVal R(ell, zero, zero);
    for (long n = 0; n <= N; ++n) {
        auto w = pi.cs_whittaker(n);
        auto s = shell_sum(ell, chi, n);
        if (s.is_zero()) continue;
        R = R + w * SqrtQVal::of(ell, s * avg_phi);
    }
    int eta = chi.split ? 1 : -1;
    CycloRat L_eta = cyclo_inverse(cyclo_of(Rational(1) - ratio(eta, ell)));
    return R * SqrtQVal::of(ell, L_eta) * Lhalf_inverse(pi, chi);
}

NnvResult nnv_vector(const QuadFieldData& E, long ell, const UnramifiedPS& pi,
                     const TorusChar& chi) {
    if (E.splitting(ell) >= 0)
        throw std::domain_error("nnv_vector: requires an inert place");
    // self-duality omega_pi * chi|_F = 1 at ell
    CycloRat sd = pi.alpha1 * pi.alpha2 * chi.c1;
    if (!(sd == cyclo_of(Rational(1))))
        throw std::domain_error("nnv_vector: self-duality violated");
    long N = 60;
    auto test = rv_general(E, ell, pi, chi, true, N);
    auto standard = rv_unramified(pi, chi, N).value;
    NnvResult out{SqrtQVal(ell, cyclo_of(Rational(0)), cyclo_of(Rational(0))), false, true};
    if (standard.is_zero()) throw std::logic_error("nnv_vector: spherical integral vanished");
    out.ratio = test * standard.inverse();
    out.nonzero = !test.is_zero();
    return out;
}

}  // namespace padicrs
