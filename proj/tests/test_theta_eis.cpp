#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicrs/eisenstein.hpp"
#include "padicrs/theta.hpp"

#include <random>

using namespace padicrs;

namespace {
std::mt19937_64 rng(0x7177);
CycloRat czero = cyclo_of(Rational(0));

// independent oracle: count solutions of the binary norm form by exhaustive
// box search (no reuse of elements_of_norm)
long norm_count_box(const QuadFieldData& E, long n) {
    long count = 0;
    long ybound = 1;
    while (ybound * ybound * (-E.D) <= 4 * n) ++ybound;
    long xbound = 1;
    while (xbound * xbound <= 4 * n) ++xbound;
    for (long y = -ybound; y <= ybound; ++y)
        for (long x = -xbound - std::labs(E.tr_om * y); x <= xbound + std::labs(E.tr_om * y); ++x)
            if (x * x + E.tr_om * x * y + E.nm_om * y * y == n) ++count;
    return count;
}
}  // namespace

TEST_CASE("theta coefficients: Gaussian integers") {
    auto E = QuadFieldData::make(1);
    auto table = theta_coefficients(ThetaDatum::standard(E), 10);
    auto u1 = UClass::of(Rational(1));
    auto& sl = table.slices.at(u1);
    CHECK(table.denom_scale == 1);
    std::vector<long> expect{4, 4, 0, 4, 8, 0, 0, 4, 4, 8};
    for (long n = 1; n <= 10; ++n)
        CHECK(sl.coeff(n).value_at_zero(czero) == cyclo_of(Rational(expect[n - 1])));
}

TEST_CASE("theta oracle: d in {1,2,3,7,11} against box counting, B = 200") {
    for (long d : {1L, 2L, 3L, 7L, 11L}) {
        auto E = QuadFieldData::make(d);
        auto table = theta_coefficients(ThetaDatum::standard(E), 200);
        auto& sl = table.slices.at(UClass::of(Rational(1)));
        for (long n = 1; n <= 200; ++n) {
            long oracle = norm_count_box(E, n);
            auto got = sl.coeff(n).value_at_zero(czero);
            CHECK(got == cyclo_of(Rational(oracle)));
        }
    }
}

TEST_CASE("theta Hecke multiplicativity for class number one") {
    for (long d : {1L, 3L, 7L}) {
        auto E = QuadFieldData::make(d);
        auto table = theta_coefficients(ThetaDatum::standard(E), 500);
        auto& sl = table.slices.at(UClass::of(Rational(1)));
        long w = E.w;
        auto r = [&](long n) {
            auto v = sl.coeff(n).value_at_zero(czero);
            return v.is_zero() ? Rational(0) : v.scalar_part() / w;
        };
        for (long m = 2; m <= 25; ++m)
            for (long n = 2; n <= 500 / m; ++n)
                if (std::gcd(m, n) == 1) CHECK(r(m * n) == r(m) * r(n));
    }
}

TEST_CASE("theta central twist law at a split prime") {
    // datum translated by r(z,1), z the idele of a split prime ell: the
    // coefficient table of the translate at twist u equals the standard table
    // at twist u / ell^2 -- checked through the u-window mechanism
    auto E = QuadFieldData::make(1);
    long ell = 5;
    ThetaDatum datum = ThetaDatum::standard(E);
    SchwartzPlaceTheta pl;
    pl.ell = ell;
    pl.standard = false;
    // phi'(x, u) = phi(ell x, ell^{-2} u): support x in ell^{-1} O, u-window {2}
    ThetaCell cell;
    cell.rep_x = Rational(0);
    cell.rep_y = Rational(0);
    cell.level = -1;  // ell^{-1} O_E
    pl.cells.push_back(cell);
    pl.u_window = {2};
    datum.places.push_back(pl);

    auto translated = theta_coefficients(datum, 12);
    auto standard = theta_coefficients(ThetaDatum::standard(E), 40);

    // index a at twist u = ell^2 of the translate corresponds to the standard
    // coefficient at index a' = a * ell^2... the defining sums coincide term
    // by term under x -> ell x, so compare:
    auto& tr = translated.slices.at(UClass::of(Rational(25)));
    auto& st = standard.slices.at(UClass::of(Rational(1)));
    for (long a = 1; a <= 12; ++a) {
        // translate: sum over x in ell^{-1}O with 25 q(x) = a <=> z = 5x in O,
        // q(z) = a: matches the standard coefficient at index a
        auto lhs = tr.coeff(a * translated.denom_scale).value_at_zero(czero);
        auto rhs = st.coeff(a).value_at_zero(czero);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("regularized torus average") {
    auto E = QuadFieldData::make(1);  // h = 1, w = 4, L(1,eta) = 1/2
    // constant function on a single class, trivial mu-folding (mu = units)
    auto v = regularized_torus_average({cyclo_of(Rational(1))}, E, 4);
    CHECK(v == cyclo_of(Rational(1)));  // 2 * (1/2) / 1 * [w/4 = 1] * 1
    // mu = {1,-1}: index 2
    auto v2 = regularized_torus_average({cyclo_of(Rational(1))}, E, 2);
    CHECK(v2 == cyclo_of(Rational(2)));
    // linearity over disjointly-supported tables
    auto a = cyclo_of(ratio(3, 7)), b = zeta(4);
    auto vj = regularized_torus_average({a, b}, E, 4);
    auto va = regularized_torus_average({a}, E, 4);
    auto vb = regularized_torus_average({b}, E, 4);
    CHECK(vj == va + vb);
}

// ---------------------------------------------------------------------------

TEST_CASE("volume_Dn: spec values and stabilization certificates") {
    auto E = QuadFieldData::make(1);
    SchwartzPlaceEis std3;
    std3.ell = 3;
    auto sp3 = LocalQuadSpace::make(E, 3);
    // inert 3: norms = 1 mod 3 in F_9: 4 of 9
    CHECK(volume_Dn(sp3, Rational(1), Rational(1), 1, std3) == ratio(4, 9));
    CHECK(volume_Dn(sp3, Rational(1), Rational(1), 0, std3) == Rational(1));
    // v(a) < 0, n >= 1: empty
    CHECK(volume_Dn(sp3, ratio(1, 3), Rational(1), 1, std3) == Rational(0));
    volume_Dn_certify(sp3, Rational(1), Rational(1), 1, std3);
    volume_Dn_certify(sp3, Rational(9), Rational(1), 3, std3);
    volume_Dn_certify(sp3, Rational(2), Rational(5), 2, std3);

    // brute-force cross-check at small ell and n: count over (O/ell^n)^2
    for (long ell : {3L, 5L, 13L}) {
        auto sp = LocalQuadSpace::make(E, ell);
        SchwartzPlaceEis stds;
        stds.ell = ell;
        for (long n = 1; n <= 2; ++n) {
            long mod = 1;
            for (long i = 0; i < n; ++i) mod *= ell;
            for (long a : {1L, 2L, ell, ell + 1}) {
                long cnt = 0;
                for (long x = 0; x < mod; ++x)
                    for (long y = 0; y < mod; ++y)
                        if (((x * x + y * y) - a) % mod == 0) ++cnt;
                Rational expect = ratio(cnt, mod * mod);
                CHECK(volume_Dn(sp, Rational(a), Rational(1), n, stds) == expect);
            }
        }
    }
}

TEST_CASE("spherical Whittaker normalization by the counting path, ell <= 50") {
    auto E1 = QuadFieldData::make(1);
    auto E7 = QuadFieldData::make(7);
    for (auto* Ep : {&E1, &E7}) {
        const auto& E = *Ep;
        for (long ell = 3; ell <= 50; ++ell) {
            if (!is_prime(Int(ell))) continue;
            if ((-E.D) % ell == 0) continue;  // unramified places only
            auto sp = LocalQuadSpace::make(E, ell);
            SchwartzPlaceEis stds;
            stds.ell = ell;
            // on the support: v(a) = 0, v(u) = 0 -> exactly 1
            auto w = interpolate_whittaker(sp, Rational(1), Rational(1), stds);
            CHECK(w.regular);
            CHECK(w.frac == LaurentFraction(LaurentPoly(Rational(1))));
            auto w2 = interpolate_whittaker(sp, Rational(ell + 1), Rational(2), stds);
            CHECK(w2.frac == LaurentFraction(LaurentPoly(Rational(1))));
            // off the support: v(a) < 0 or v(u) != 0 -> 0
            auto w3 = interpolate_whittaker(sp, ratio(1, ell), Rational(1), stds);
            CHECK(w3.frac == LaurentFraction(LaurentPoly(Rational(0))));
            auto w4 = interpolate_whittaker(sp, Rational(1), Rational(ell), stds);
            CHECK(w4.frac == LaurentFraction(LaurentPoly(Rational(0))));
        }
    }
}

TEST_CASE("deeper indices: divisor-sum values from the counting path") {
    auto E = QuadFieldData::make(1);
    auto X = LaurentPoly::variable(0);
    auto one = LaurentPoly(Rational(1));
    for (long ell : {5L, 13L, 3L, 7L}) {
        auto sp = LocalQuadSpace::make(E, ell);
        SchwartzPlaceEis stds;
        stds.ell = ell;
        int eta = E.splitting(ell);
        for (long v = 0; v <= 4; ++v) {
            Rational a = rat_pow(Rational(ell), v) * 2;
            if (val_p(a, Int(ell)) != v) a = rat_pow(Rational(ell), v);
            auto w = interpolate_whittaker(sp, a, Rational(1), stds);
            // sigma_X = sum_{j<=v} (eta X)^j
            LaurentPoly expect;
            for (long j = 0; j <= v; ++j) {
                Rational c = (eta < 0 && j % 2 == 1) ? Rational(-1) : Rational(1);
                expect = expect + LaurentPoly::monomial(Expo{(int)j, 0, 0, 0}, cyclo_of(c));
            }
            CHECK(w.frac == LaurentFraction(expect));
        }
    }
}

TEST_CASE("interpolation agreement at random character points") {
    auto E = QuadFieldData::make(1);
    std::vector<std::pair<long, long>> pts{{3, 1}, {5, 2}, {7, 3}, {12, 5}};  // (order, k)
    for (long ell : {3L, 5L, 7L, 11L, 13L, 17L, 19L}) {
        auto sp = LocalQuadSpace::make(E, ell);
        SchwartzPlaceEis stds;
        stds.ell = ell;
        auto phic = SchwartzPlaceEis::unit_support(E, ell);
        for (auto& [ord, k] : pts) {
            CycloRat x0 = zeta(ord, k);
            for (long a : {1L, 2L, ell, ell * ell, 3 * ell}) {
                for (auto* phi : {&stds, &phic}) {
                    auto interp = interpolate_whittaker(sp, Rational(a), Rational(1), *phi);
                    CycloRat direct = whittaker_nonarch(sp, Rational(a), Rational(1), x0, *phi);
                    CHECK(interp.frac.eval({x0}) == direct);
                }
            }
        }
    }
}

TEST_CASE("whittaker_p closed form") {
    auto k2 = SmoothCharUp::trivial(5);
    CycloRat one = cyclo_of(Rational(1));
    // a unit, u = 1 -> xi(-1)
    CHECK(whittaker_p(Rational(2), Rational(1), one, k2, 5) == one);
    CHECK(whittaker_p(Rational(2), Rational(6), one, k2, 5) == one);  // 6 in 1+5Z_5
    // u not in U0 -> 0
    CHECK(whittaker_p(Rational(2), Rational(2), one, k2, 5).is_zero());
    CHECK(whittaker_p(Rational(2), Rational(5), one, k2, 5).is_zero());
    // v_p(a) = -1 -> 0
    CHECK(whittaker_p(ratio(1, 5), Rational(1), one, k2, 5).is_zero());
    // nontrivial xi(-1)
    CHECK(whittaker_p(Rational(3), Rational(1), -one, k2, 5) == -one);
}

TEST_CASE("laguerre and Q polynomials") {
    // P_{k0,k}(0) = (k+k0)! with grading; Q(0) = 1
    auto P = laguerre_P(2, 3);
    CHECK(P[0] == Rational(120));  // (3+2)!
    auto Q = qpoly_Q(2, 3);
    CHECK(Q[0] == Rational(1));
    // Q_{k0,k}(X) explicit for k=1: 1 - (1+k0) X
    for (long k0 : {0L, 1L, 3L}) {
        auto q1 = qpoly_Q(k0, 1);
        CHECK(q1[0] == Rational(1));
        CHECK(q1[1] == Rational(-(1 + k0)));
    }
    // consistency with Lemma eis exp L at k=0: arch value 2 a^{k0}, Q = 1
    auto aw = whittaker_arch(Rational(3), 2, 0);
    CHECK(aw.prefactor.val == cyclo_of(Rational(2 * 9)));
    CHECK(aw.qpoly.c.size() == 1);
    // a < 0 -> 0
    CHECK(whittaker_arch(Rational(-2), 2, 1).prefactor.val.is_zero());
}

TEST_CASE("eisenstein differential-operator law (index-power rule), k <= 3") {
    auto E = QuadFieldData::make(1);
    EisensteinDatum d0;
    d0.E = E;
    d0.p = 5;
    d0.kappa2 = SmoothCharUp::trivial(5);
    d0.places.push_back(SchwartzPlaceEis::unit_support(E, 3));
    std::vector<Rational> twists{Rational(1)};
    auto e0 = eisenstein_global_coeffs(d0, 40, twists);
    for (long k = 1; k <= 3; ++k) {
        EisensteinDatum dk = d0;
        dk.k = k;
        auto ek = eisenstein_global_coeffs(dk, 40, twists);
        auto& sl0 = e0.slices.at(UClass::of(Rational(1)));
        auto& slk = ek.slices.at(UClass::of(Rational(1)));
        for (long b = 1; b <= 40; ++b) {
            auto c0 = sl0.coeff(b).value_at_zero(czero);
            auto ck = slk.coeff(b).value_at_zero(czero);
            Rational scale = rat_pow(Rational(b), k);
            if (k % 2 == 1) scale = -scale;
            CHECK(ck == c0.scale(scale));
        }
    }
}

TEST_CASE("E(xi,k) equals (-1)^k delta^k E(xi,0) as nearly holomorphic expansions") {
    // Corollary at coefficient level: assemble E(xi,k) directly and compare
    // with maass_shimura applied to the k = 0 assembly.
    auto E = QuadFieldData::make(1);
    EisensteinDatum d0;
    d0.E = E;
    d0.p = 5;
    d0.kappa2 = SmoothCharUp::trivial(5);
    d0.places.push_back(SchwartzPlaceEis::unit_support(E, 3));
    std::vector<Rational> twists{Rational(1)};
    auto e0 = eisenstein_global_coeffs(d0, 20, twists);
    auto& sl0 = e0.slices.at(UClass::of(Rational(1)));
    long w0 = 1;  // weight of E(xi,0) for k0 = 0
    for (long k = 1; k <= 2; ++k) {
        EisensteinDatum dk = d0;
        dk.k = k;
        auto ek = eisenstein_global_coeffs(dk, 20, twists);
        auto& slk = ek.slices.at(UClass::of(Rational(1)));
        auto raised = maass_shimura(sl0, w0, (int)k, czero);
        for (long b = 1; b <= 20; ++b) {
            auto lhs = slk.coeff(b);
            auto rhs = raised.coeff(b);
            if (k % 2 == 1) rhs = TPoly<CycloRat>{} - rhs;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("phi cond at an inert place forces vanishing against unit twists") {
    // with phi_2 = unit indicator at inert 3, the x2 = 0 value vanishes, so
    // the constant term of the corresponding Eisenstein series is 0; at the
    // coefficient level we check the datum kills indices with v_3(b) >= 1
    // incompatible with the unit-norm support
    auto E = QuadFieldData::make(1);
    EisensteinDatum d;
    d.E = E;
    d.p = 5;
    d.kappa2 = SmoothCharUp::trivial(5);
    d.places.push_back(SchwartzPlaceEis::unit_support(E, 3));
    // W-hat at 3 for the unit-support datum vanishes at trivial xi when
    // v_3(b) = 1 (no unit has norm divisible by 3)
    auto sp3 = LocalQuadSpace::make(E, 3);
    auto w = whittaker_nonarch(sp3, Rational(3), Rational(1), cyclo_of(Rational(1)),
                               d.places[0]);
    CHECK(w.is_zero());
}

TEST_CASE("classical Eisenstein oracle: proportional to divisor sums away from D and p") {
    auto E = QuadFieldData::make(1);
    EisensteinDatum d;
    d.E = E;
    d.p = 5;
    d.kappa2 = SmoothCharUp::trivial(5);
    std::vector<Rational> twists{Rational(1)};
    auto e = eisenstein_global_coeffs(d, 60, twists);
    auto& sl = e.slices.at(UClass::of(Rational(1)));
    auto eta = DirichletChar::kronecker_char(E.D);
    // independently coded divisor-sum oracle
    auto sigma_eta = [&](long n) {
        Rational s(0);
        for (long dd = 1; dd <= n; ++dd)
            if (n % dd == 0) {
                auto v = eta(Int(dd));
                if (!v.is_zero()) s += v.scalar_part();
            }
        return s;
    };
    // proportionality on indices coprime to 2*5 (D- and p-structure excluded)
    Rational base_ratio(0);
    for (long b = 1; b <= 60; ++b) {
        if (b % 2 == 0 || b % 5 == 0) continue;
        auto c = sl.coeff(b).value_at_zero(czero);
        Rational oracle = sigma_eta(b);
        if (oracle == 0) {
            CHECK(c.is_zero());
            continue;
        }
        REQUIRE(c.is_scalar());
        Rational rat = c.scalar_part() / oracle;
        if (base_ratio == 0) base_ratio = rat;
        CHECK(rat == base_ratio);
    }
    CHECK(base_ratio != 0);
}
