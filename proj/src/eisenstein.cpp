#include "padicrs/eisenstein.hpp"

namespace padicrs {

SchwartzPlaceEis SchwartzPlaceEis::unit_support(const QuadFieldData& E, long ell) {
    // O_{E,ell}^* as a union of unit cells mod ell
    SchwartzPlaceEis out;
    out.ell = ell;
    out.standard = false;
    for (long x = 0; x < ell; ++x)
        for (long y = 0; y < ell; ++y) {
            QuadElem e{Int(x), Int(y)};
            if (quad_norm(E, e) % ell != 0) {
                ThetaCell c;
                c.rep_x = Rational((long)x);
                c.rep_y = Rational((long)y);
                c.level = 1;
                out.cells.push_back(c);
            }
        }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Exact congruence-volume counter for Q(z) = Uu * N(z) on cells of O_{E,ell}.
// All residue arithmetic is done modulo ell^modlevel.

struct Counter {
    const QuadFieldData* E;
    long ell;
    Int Uu;        // unit part of u * delta (as residue)
    Int target;    // a' (integral)
    long n;        // target congruence level
    Int mod;       // ell^modlevel, modlevel >= n + 1
    long modlevel;

    Int norm(const Int& x, const Int& y) const {
        return (((x * x + x * y * E->tr_om + y * y * E->nm_om) % mod) * Uu) % mod;
    }

    long vmod(const Int& g) const {
        Int r = ((g % mod) + mod) % mod;
        if (r == 0) return modlevel;
        long v = 0;
        while (r % ell == 0) { r /= ell; ++v; }
        return v;
    }

    // vol{z in c + ell^k O : Q(z) = target mod ell^n}, vol(O) = 1
    Rational frac(const Int& cx, const Int& cy, long k) const {
        if (n <= 0) return rat_pow(ratio(1, ell), 2 * k);
        Int g = norm(cx, cy) - target;
        if (k >= n) return vmod(g) >= n ? rat_pow(ratio(1, ell), 2 * k) : Rational(0);
        // content t of the linear functional B(c, .) = Uu*(2c1 + tr c2, tr c1 + 2 nm c2)
        Int L1 = (2 * cx + E->tr_om * cy) % mod, L2 = (E->tr_om * cx + 2 * E->nm_om * cy) % mod;
        long t = std::min(vmod(L1), vmod(L2));
        if (t < k) {
            // uniform image regime: image of Q on the cell is Q(c) + ell^{k+t} O
            if (k + t >= n) return vmod(g) >= n ? rat_pow(ratio(1, ell), 2 * k) : Rational(0);
            if (vmod(g) < k + t) return Rational(0);
            return rat_pow(ratio(1, ell), 2 * k) * rat_pow(ratio(1, ell), n - k - t);
        }
        // singular cell: subdivide one level
        Rational acc(0);
        for (long y0 = 0; y0 < ell; ++y0)
            for (long x0 = 0; x0 < ell; ++x0) {
                Int pk = int_pow(Int(ell), k);
                acc += frac((cx + pk * x0) % mod, (cy + pk * y0) % mod, k + 1);
            }
        return acc;
    }
};

// level-1 primitive solution counts #{x in (O/ell)^2 : N(x) = b, x != 0};
// enumerated for ell <= 50 (the certified counting range), closed form
// beyond (validated against the enumeration in the test suite)
long primitive_count_mod_ell(const QuadFieldData& E, long ell, long b) {
    b = ((b % ell) + ell) % ell;
    if (ell <= 50) {
        static std::map<std::pair<long, long>, std::vector<long>> cache;
        auto key = std::make_pair((long)E.d, ell);
        auto it = cache.find(key);
        if (it == cache.end()) {
            std::vector<long> cnt(ell, 0);
            for (long x = 0; x < ell; ++x)
                for (long y = 0; y < ell; ++y) {
                    if (x == 0 && y == 0) continue;
                    Int vv = (Int(x) * x + Int(E.tr_om) * x * y + Int(E.nm_om) * y * y) % ell;
                    long v = to_long(vv);
                    cnt[v]++;
                }
            it = cache.emplace(key, std::move(cnt)).first;
        }
        return it->second[b];
    }
    int s = E.splitting(ell);
    if (s > 0) return b == 0 ? 2 * (ell - 1) : ell - 1;
    if (s < 0) return b == 0 ? 0 : ell + 1;
    throw std::logic_error("primitive_count_mod_ell: ramified ell needs enumeration");
}

// closed stratum sum for the standard lattice at an unramified place:
// vol{z in O : Uu N(z) = a' mod ell^{n'}}, z = ell^j y with y primitive
Rational vol_standard_unram(const QuadFieldData& E, long ell, const Rational& Uunit,
                            const Rational& a2, long n2) {
    if (n2 <= 0) return Rational(1);
    long va = (a2 == 0) ? (1 << 20) : val_p(a2, Int(ell));
    if (va < 0) return Rational(0);
    Rational vol(0);
    long j = 0;
    for (; 2 * j < n2; ++j) {
        long nn = n2 - 2 * j;
        if (va < 2 * j) continue;
        // b = a' / (ell^{2j} Uu) mod ell
        long bres;
        if (va >= 2 * j + 1) {
            bres = 0;
        } else {
            Rational b = a2 * rat_pow(Rational(ell), -2 * j) / Uunit;
            Int num = b.get_num() % ell, den = b.get_den() % ell;
            bres = to_long((num * mod_inverse(((den % ell) + ell) % ell, Int(ell))) % ell);
            bres = ((bres % ell) + ell) % ell;
        }
        long p1 = primitive_count_mod_ell(E, ell, bres);
        if (p1 == 0) continue;
        // stratum volume: ell^{-2j} * p1 * ell^{-(nn+1)}
        vol += rat_pow(ratio(1, ell), 2 * j) * Rational(p1) * rat_pow(ratio(1, ell), nn + 1);
    }
    // deep stratum: all z in ell^j O, condition v(a') >= n'
    if (va >= n2) vol += rat_pow(ratio(1, ell), 2 * j);
    return vol;
}

// weighted, normalised volume of D_n(a) for general rational a, u and cells.
// Returns |D_ell|^{-1/2} * (self-dual volume); counting modulus is
// n' + extra (extra >= 1), exposed for the stabilisation certificate.
CycloRat volume_Dn_impl(const LocalQuadSpace& sp, const Rational& a, const Rational& u,
                        long n, const SchwartzPlaceEis& phi2, long extra) {
    long ell = sp.ell;
    // U = u * delta
    Rational U = u * Rational(sp.delta_unit) * rat_pow(Rational(ell), sp.delta_val);
    long vU = val_p(U, Int(ell));
    // scaling: cells (and hence x) live in ell^{-s} O
    long s = 0;
    if (!phi2.standard)
        for (auto& c : phi2.cells) {
            auto vx = (c.rep_x == 0) ? 0 : std::min(0L, val_p(c.rep_x, Int(ell)));
            auto vy = (c.rep_y == 0) ? 0 : std::min(0L, val_p(c.rep_y, Int(ell)));
            s = std::max(s, -std::min(vx, vy));
        }
    // condition on z = ell^s x: N(z) * Uu = ell^{2s} a / ell^{vU} mod ell^{n + 2s - vU}
    long n2 = n + 2 * s - vU;
    Rational a2 = a * rat_pow(Rational(ell), 2 * s - vU);
    // unit part of U as integer residue
    Rational Uunit = U * rat_pow(Rational(ell), -vU);

    // fast closed path: standard cell data at an unramified place
    if (phi2.standard && sp.vD == 0 && extra <= 2) {
        Rational v = vol_standard_unram(sp.E, ell, U * rat_pow(Rational(ell), -vU), a2, n2);
        return cyclo_of(v * rat_pow(ratio(1, ell), vU));
    }

    // empty if target is non-integral at a level the congruence can see
    long va2 = (a2 == 0) ? (1 << 20) : val_p(a2, Int(ell));
    if (va2 < 0 && n2 > va2) return cyclo_of(Rational(0));
    if (va2 < 0) {
        // n2 <= va2 < 0: the congruence is vacuous on the whole space; the
        // phi2-weighted volume is just the cell volume
        CycloRat acc = cyclo_of(Rational(0));
        if (phi2.standard) {
            acc = cyclo_of(Rational(1));
        } else {
            for (auto& c : phi2.cells)
                acc = acc + c.value.scale(rat_pow(ratio(1, ell), 2 * (c.level + s)) *
                                          rat_pow(Rational(ell), 2 * s));
            return acc.scale(rat_pow(ratio(1, ell), vU));
        }
        return acc.scale(rat_pow(ratio(1, ell), vU));
    }

    Counter ct;
    ct.E = &sp.E;
    ct.ell = ell;
    ct.n = n2;
    ct.modlevel = std::max(n2 + extra, 1L);
    ct.mod = int_pow(Int(ell), ct.modlevel);
    // residues of Uunit and a2 (both ell-integral now)
    auto to_res = [&](const Rational& q) -> Int {
        Int den = q.get_den();
        return ((q.get_num() % ct.mod) * mod_inverse(((den % ct.mod) + ct.mod) % ct.mod, ct.mod)) %
               ct.mod;
    };
    ct.Uu = to_res(Uunit);
    ct.target = to_res(a2);

    CycloRat acc = cyclo_of(Rational(0));
    if (phi2.standard) {
        acc = cyclo_of(ct.frac(Int(0), Int(0), 0));
    } else {
        for (auto& c : phi2.cells) {
            // z-cell: ell^s * rep + ell^{level + s} O
            Rational zx = c.rep_x * rat_pow(Rational(ell), s);
            Rational zy = c.rep_y * rat_pow(Rational(ell), s);
            Rational f = ct.frac(to_res(zx), to_res(zy), c.level + s);
            acc = acc + c.value.scale(f);
        }
    }
    // measure normalisation: |U| * (x-scaling ell^{2s})
    return acc.scale(rat_pow(ratio(1, ell), vU) * rat_pow(Rational(ell), 2 * s));
}

}  // namespace

Rational volume_Dn(const LocalQuadSpace& sp, const Rational& a, const Rational& u, long n,
                   const SchwartzPlaceEis& phi2) {
    auto v = volume_Dn_impl(sp, a, u, n, phi2, 2);
    if (!v.is_scalar()) throw std::logic_error("volume_Dn: non-rational cell weights");
    return v.scalar_part();
}

void volume_Dn_certify(const LocalQuadSpace& sp, const Rational& a, const Rational& u, long n,
                       const SchwartzPlaceEis& phi2) {
    auto v1 = volume_Dn_impl(sp, a, u, n, phi2, 2);
    auto v2 = volume_Dn_impl(sp, a, u, n, phi2, 3);
    auto v3 = volume_Dn_impl(sp, a, u, n, phi2, 4);
    if (!(v1 == v2) || !(v2 == v3))
        throw std::logic_error("volume_Dn: counting modulus not stabilized");
}

WhittakerInterp interpolate_whittaker(const LocalQuadSpace& sp, const Rational& a,
                                      const Rational& u, const SchwartzPlaceEis& phi2) {
    long ell = sp.ell;
    // u-support of phi_2 is the units (standard and unit-cell data alike)
    if (val_p(u, Int(ell)) != 0) {
        WhittakerInterp out;
        out.frac = LaurentFraction(LaurentPoly(Rational(0)));
        return out;
    }
    long va = (a == 0) ? -1 : val_p(a, Int(ell));
    if (a == 0) throw std::domain_error("interpolate_whittaker: index 0 not supported");

    // volumes until the certified geometric regime vol_{n+1} = vol_n / ell
    long cell_depth = 0;
    if (!phi2.standard)
        for (auto& c : phi2.cells) cell_depth = std::max(cell_depth, c.level);
    long budget = std::max(va, 0L) + sp.vD + sp.delta_val + 2 * cell_depth +
                  (ell == 2 ? 4 : 2) + 6;
    std::vector<CycloRat> vols;
    long n0 = -1;
    for (long n = 0; n <= budget; ++n) {
        vols.push_back(volume_Dn_impl(sp, a, u, n, phi2, 2));
        size_t sz = vols.size();
        if (sz >= 3) {
            auto scaled1 = vols[sz - 2].scale(ratio(1, ell));
            auto scaled0 = vols[sz - 3].scale(ratio(1, ell));
            if (vols[sz - 1] == scaled1 && vols[sz - 2] == scaled0) {
                n0 = (long)sz - 3;
                break;
            }
        }
    }
    if (n0 < 0)
        throw BudgetExhausted("interpolate_whittaker: geometric tail not certified at ell=" +
                              std::to_string(ell));

    // (1-X) * sum_{n<=n0} (ell X)^n vol_n + ell^{n0} vol_{n0} X^{n0+1},
    // divided by (1 - eta(ell) X / ell)
    auto X = LaurentPoly::variable(0);
    LaurentPoly S;
    Rational po(1);
    for (long n = 0; n <= n0; ++n) {
        LaurentPoly mono = LaurentPoly::monomial(Expo{(int)n, 0, 0, 0}, vols[n].scale(po));
        S = S + mono;
        po *= ell;
    }
    LaurentPoly one(Rational(1));
    LaurentPoly num = (one - X) * S +
                      LaurentPoly::monomial(Expo{(int)(n0 + 1), 0, 0, 0},
                                            vols[n0].scale(rat_pow(Rational(ell), n0)));
    int eta_ell = sp.splitting;  // eta(ell); 0 at ramified ell means L-factor 1
    WhittakerInterp out;
    out.tail_start = n0;
    if (eta_ell == 0) {
        out.frac = LaurentFraction(num);
        out.regular = true;
        return out;
    }
    LaurentPoly den = one - X.scale(cyclo_of(ratio(eta_ell, ell)));
    LaurentFraction fr(num, den);
    auto simp = fr.simplified(0);
    out.frac = simp;
    out.regular = simp.den_is_one();
    return out;
}

CycloRat whittaker_nonarch(const LocalQuadSpace& sp, const Rational& a, const Rational& u,
                           const CycloRat& xi_ell, const SchwartzPlaceEis& phi2) {
    auto interp = interpolate_whittaker(sp, a, u, phi2);
    return interp.frac.eval({xi_ell});
}

// ---------------------------------------------------------------------------

SmoothCharUp SmoothCharUp::trivial(long p) {
    SmoothCharUp k;
    k.p = p;
    k.r = 1;
    k.order = 1;
    k.exps.assign(p, -1);
    k.exps[1 % p] = 0;  // only the class of 1 mod p lies in U0 at r = 1
    return k;
}

bool SmoothCharUp::in_U0(const Rational& u) const {
    if (val_p(u, Int(p)) != 0) return false;
    Int pr = int_pow(Int(p), r);
    Int num = ((u.get_num() % pr) + pr) % pr;
    Int den = ((u.get_den() % pr) + pr) % pr;
    Int res = (num * mod_inverse(den, pr)) % pr;
    // U0 = 1 + pZ_p
    return res % p == 1 % p;
}

CycloRat SmoothCharUp::value(const Rational& u) const {
    if (!in_U0(u)) return cyclo_of(Rational(0));
    Int pr = int_pow(Int(p), r);
    Int num = ((u.get_num() % pr) + pr) % pr;
    Int den = ((u.get_den() % pr) + pr) % pr;
    long res = to_long((num * mod_inverse(den, pr)) % pr);
    long e = exps[res];
    if (e < 0) throw std::logic_error("SmoothCharUp: missing table entry inside U0");
    return zeta(order, e);
}

CycloRat whittaker_p(const Rational& a, const Rational& u, const CycloRat& xi_at_minus1,
                     const SmoothCharUp& kappa2, long p) {
    if (a != 0 && val_p(a, Int(p)) < 0) return cyclo_of(Rational(0));
    if (!kappa2.in_U0(u)) return cyclo_of(Rational(0));
    return xi_at_minus1 * kappa2.value(u);
}

// ---------------------------------------------------------------------------

std::vector<Rational> laguerre_P(long k0, long k) {
    if (k < 0 || k + k0 < 0) throw std::domain_error("laguerre_P: need k >= 0, k + k0 >= 0");
    // P(X) = (k+k0)! sum_j C(k,j) (-X)^j / j!   (grading (2 pi i)^{-k0} (4 pi)^{-k})
    std::vector<Rational> c(k + 1, Rational(0));
    Int fac = 1;
    for (long i = 2; i <= k + k0; ++i) fac *= i;
    for (long j = 0; j <= k; ++j) {
        Int bin, jfac = 1;
        mpz_bin_uiui(bin.get_mpz_t(), k, j);
        for (long i = 2; i <= j; ++i) jfac *= i;
        Rational v = ratio(fac * bin, jfac);
        c[j] = (j % 2 == 0) ? v : -v;
    }
    return c;
}

std::vector<Rational> qpoly_Q(long k0, long k) {
    if (k < 0 || k + k0 < 0) throw std::domain_error("qpoly_Q: need k >= 0, k + k0 >= 0");
    // Q(X) = sum_j C(k,j) (k+k0)!/(j+k0)! (-X)^{k-j}
    std::vector<Rational> c(k + 1, Rational(0));
    for (long j = 0; j <= k; ++j) {
        Int bin;
        mpz_bin_uiui(bin.get_mpz_t(), k, j);
        Int num = 1;
        for (long t = j + k0 + 1; t <= k + k0; ++t) num *= t;
        long i = k - j;
        Rational v = Rational(bin * num);
        c[i] = (i % 2 == 0) ? v : -v;
    }
    if (c[0] != 1) throw std::logic_error("qpoly_Q: Q(0) != 1");
    return c;
}

ArchWhittaker whittaker_arch(const Rational& a, long k0, long k) {
    if (a <= 0) {
        // vanishes for a < 0 (and index 0 carries no arch monomial here)
        return ArchWhittaker{Graded(cyclo_of(Rational(0)), 0, 0), TPoly<CycloRat>{}};
    }
    Rational pref = Rational(2) * rat_pow(a, k + k0);
    if (k % 2 == 1) pref = -pref;
    auto Q = qpoly_Q(k0, k);
    TPoly<CycloRat> qp;
    for (long i = 0; i <= k; ++i) qp.c.push_back(cyclo_of(Q[i] * rat_pow(a, -i)));
    qp.trim();
    return ArchWhittaker{Graded(cyclo_of(pref), 0, 0), qp};
}

// ---------------------------------------------------------------------------

Rational EisensteinDatum::lambda() const {
    // completed reading: |D|^{1/2} L^{(p)}(1,eta) = |D| (2h/w) (1 - eta(p)/p)
    Rational Lp = ratio(2 * E.h, E.w) * (Rational(1) - ratio(E.splitting(p), p));
    Rational denom = Rational(-E.D) * Lp;
    return ratio(-eps_V2 * 2, 1) / denom;
}

CycloRat eisenstein_coefficient(const EisensteinDatum& datum, const Rational& b,
                                const Rational& u) {
    // relevant places: primes of b, u, D, and all declared places, away from p
    std::vector<long> rel;
    auto add_primes = [&](Int n) {
        n = abs(n);
        if (n == 0) return;
        for (auto& [q, e] : factorize(n)) {
            long ql = to_long(q);
            if (ql != datum.p && std::find(rel.begin(), rel.end(), ql) == rel.end())
                rel.push_back(ql);
        }
    };
    add_primes(b.get_num());
    add_primes(b.get_den());
    add_primes(u.get_num());
    add_primes(u.get_den());
    add_primes(Int(-datum.E.D));
    for (auto& pl : datum.places)
        if (pl.ell != datum.p && std::find(rel.begin(), rel.end(), pl.ell) == rel.end())
            rel.push_back(pl.ell);

    CycloRat prod = cyclo_of(datum.lambda() * Rational(2));  // lambda * 2^{[F:Q]}
    // p-part
    auto xi_p = local_component(datum.xi, datum.p);
    CycloRat xim1 = xi_p.cond == 0 ? cyclo_of(Rational(1)) : xi_p.on_unit(Int(-1));
    prod = prod * whittaker_p(b, u, xim1, datum.kappa2, datum.p);
    if (prod.is_zero()) return prod;
    // finite places away from p
    for (long ell : rel) {
        long dval = 0;
        SchwartzPlaceEis std_phi;
        std_phi.ell = ell;
        const SchwartzPlaceEis* phi = &std_phi;
        for (size_t i = 0; i < datum.places.size(); ++i)
            if (datum.places[i].ell == ell) {
                phi = &datum.places[i];
                if (i < datum.delta_val.size()) dval = datum.delta_val[i];
            }
        auto sp = LocalQuadSpace::make(datum.E, ell, dval);
        auto xi_l = local_component(datum.xi, ell);
        if (xi_l.cond != 0)
            throw std::domain_error("eisenstein_coefficient: xi ramified at a finite place");
        prod = prod * whittaker_nonarch(sp, b, u, xi_l.at_uniformizer(), *phi);
        if (prod.is_zero()) return prod;
    }
    // b^{k + k0} from the p-adic normalisation of the archimedean monomial
    prod = prod.scale(rat_pow(b, datum.k + datum.k0));
    if (datum.k % 2 == 1) prod = -prod;
    return prod;
}

TwistedExp<CycloRat> eisenstein_global_coeffs(const EisensteinDatum& datum, int64_t B,
                                              const std::vector<Rational>& twists) {
    TwistedExp<CycloRat> out;
    out.bound = B;
    out.weight = {-datum.k0, 1 + datum.k0 + 2 * datum.k};
    CycloRat czero = cyclo_of(Rational(0));
    for (auto& u : twists) {
        auto& sl = out.slice(UClass::of(u));
        for (int64_t b = 1; b <= B; ++b) {
            CycloRat v = eisenstein_coefficient(datum, Rational((long)b), u);
            if (v.is_zero()) continue;
            // T-polynomial: constant part v, higher T-coefficients from Q(T/b)
            auto aw = whittaker_arch(Rational((long)b), datum.k0, datum.k);
            TPoly<CycloRat> poly;
            for (size_t i = 0; i < aw.qpoly.c.size(); ++i) poly.c.push_back(v * aw.qpoly.c[i]);
            poly.trim();
            if (!poly.is_zero()) sl.set(b, poly);
        }
    }
    return out;
}

}  // namespace padicrs
