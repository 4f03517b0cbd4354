#include "padicrs/theta.hpp"

namespace padicrs {

CycloRat sqrtD_as_cyclo(const QuadFieldData& E) {
    // quadratic Gauss sum of the Kronecker character mod |D|: its square is D
    long N = -E.D;
    auto eta = DirichletChar::kronecker_char(E.D);
    CycloRat g = cyclo_of(Rational(0));
    for (long a = 1; a < N; ++a) {
        auto e = eta.exponent(Int(a));
        if (!e) continue;
        g = g + zeta(N, a).scale(*e == 0 ? Rational(1) : Rational(-1));
    }
    if (!(g * g == cyclo_of(Rational(E.D))))
        throw std::logic_error("sqrtD_as_cyclo: Gauss sum square check failed");
    return g;
}

CycloRat quad_to_cyclo(const QuadFieldData& E, const QuadElem& x) {
    static std::map<long, CycloRat> cache;
    auto it = cache.find(E.d);
    if (it == cache.end()) it = cache.emplace(E.d, sqrtD_as_cyclo(E)).first;
    const CycloRat& sqrtD = it->second;
    // omega = (tr_om + sqrt(D')) / 2 with D' = tr^2 - 4 nm = D or 4D-scaled
    // for half_basis: omega = (1 + sqrt(-d))/2 = (1 + sqrtD)/2 (D = -d)
    // else: omega = sqrt(-d) = sqrtD / 2 when D = -4d
    CycloRat om = E.half_basis ? (cyclo_of(Rational(1)) + sqrtD).scale(ratio(1, 2))
                               : sqrtD.scale(ratio(1, 2));
    return cyclo_of(Rational(x.x)) + om.scale(Rational(x.y));
}

namespace {

// v_ell of a rational (x != 0), with a large sentinel for 0
long vl(const Rational& x, long ell) {
    if (x == 0) return 1 << 20;
    return val_p(x, Int(ell));
}

bool in_cell(const QuadFieldData&, const ThetaCell& c, long ell, const Rational& x,
             const Rational& y) {
    return vl(x - c.rep_x, ell) >= c.level && vl(y - c.rep_y, ell) >= c.level;
}

}  // namespace

TwistedExp<CycloRat> theta_coefficients(const ThetaDatum& datum, int64_t B) {
    const auto& E = datum.E;
    // denominator scale from cell reps
    long scale = 1;
    for (auto& pl : datum.places) {
        if (pl.standard) continue;
        long s = 0;
        for (auto& c : pl.cells) {
            s = std::max(s, -std::min({0L, vl(c.rep_x, pl.ell), vl(c.rep_y, pl.ell), c.level}));
        }
        for (long i = 0; i < s; ++i) scale *= pl.ell;
    }
    // u-classes: products of ell^w over declared windows
    std::vector<Rational> uclasses{Rational(1)};
    for (auto& pl : datum.places) {
        std::vector<Rational> next;
        for (auto& u : uclasses)
            for (long w : pl.u_window) {
                Rational f = rat_pow(Rational(pl.ell), w);
                next.push_back(u * f);
            }
        uclasses = std::move(next);
    }

    long uden = 1;
    for (auto& pl : datum.places) {
        long wmin = 0;
        for (long w : pl.u_window) wmin = std::min(wmin, w);
        for (long i = 0; i < -wmin; ++i) uden *= pl.ell;
    }

    TwistedExp<CycloRat> out;
    out.denom_scale = (int64_t)scale * scale * uden;
    out.bound = B * out.denom_scale;
    out.weight = {datum.l0, 1 + std::labs(datum.l)};
    CycloRat czero = cyclo_of(Rational(0));

    for (auto& u : uclasses) {
        auto& sl = out.slice(UClass::of(u));
        // enumerate z in O_E with N(z) <= scale^2 * B * den(u); x = z / scale
        Int zbound = Int(scale) * Int(scale) * Int(B) * u.get_den();
        Int ymax;
        mpz_sqrt(ymax.get_mpz_t(), Int(4 * zbound / (-E.D)).get_mpz_t());
        for (Int zy = -ymax; zy <= ymax; ++zy) {
            // x^2 + tr*zy*x + nm*zy^2 <= zbound
            Int A = E.tr_om * zy, C = E.nm_om * zy * zy - zbound;
            Int disc = A * A - 4 * C;
            if (disc < 0) continue;
            Int sq;
            mpz_sqrt(sq.get_mpz_t(), disc.get_mpz_t());
            Int xlo = (-A - sq) / 2 - 2, xhi = (-A + sq) / 2 + 2;
            for (Int zx = xlo; zx <= xhi; ++zx) {
                QuadElem z{zx, zy};
                Int nz = quad_norm(E, z);
                if (nz <= 0 || nz > zbound) continue;
                Rational xx = ratio(z.x, scale), xy = ratio(z.y, scale);
                // q(x) = nz / scale^2; index a = u * q(x)
                Rational qa = u * ratio(nz, Int(scale) * scale);
                // membership and value over the declared places
                CycloRat val = cyclo_of(Rational(1));
                bool ok = true;
                for (auto& pl : datum.places) {
                    if (pl.standard) continue;
                    CycloRat cellval = czero;
                    bool found = false;
                    for (auto& c : pl.cells)
                        if (in_cell(E, c, pl.ell, xx, xy)) {
                            cellval = c.value;
                            found = true;
                            break;
                        }
                    if (!found) { ok = false; break; }
                    val = val * cellval;
                }
                if (!ok) continue;
                // standard-at-all-other-places: x integral there; with reps
                // scaled by 1/scale the only non-integrality is at declared places
                // character weight
                if (!datum.chi.is_trivial()) {
                    if (!datum.chi.defined_at(z)) continue;  // support coprime to cond
                    val = val * datum.chi.at_element(z);
                }
                // archimedean monomial x^l (or conj(x)^{-l}), |u|-power
                if (datum.l != 0) {
                    QuadElem base = datum.l > 0 ? z : quad_conj(E, z);
                    CycloRat xc = quad_to_cyclo(E, base).scale(ratio(1, scale));
                    CycloRat mono = cyclo_of(Rational(1));
                    for (long i = 0; i < std::labs(datum.l); ++i) mono = mono * xc;
                    val = val * mono;
                }
                Rational upow = rat_pow(u, 0);  // placeholder for |u|^{(-l0+|l|)/2}
                long ex = (-datum.l0 + std::labs(datum.l)) / 2;
                upow = rat_pow(u, ex);
                val = val.scale(upow);

                Rational idx = qa * Rational((long)out.denom_scale);
                if (idx.get_den() != 1) throw std::logic_error("theta: index scale too small");
                int64_t key = to_long(idx.get_num());
                if (key > out.bound || key <= 0) continue;
                auto cur = sl.coeff(key).value_at_zero(czero);
                sl.set(key, TPoly<CycloRat>::constant(cur + val));
            }
        }
    }
    return out;
}

CycloRat regularized_torus_average(const std::vector<CycloRat>& coset_values,
                                   const QuadFieldData& E, long mu_size) {
    if (E.w % mu_size != 0)
        throw std::domain_error("regularized_torus_average: mu must divide the unit group");
    Rational L = completed_L1_eta(E);
    Rational factor = Rational(2) * L / Rational(E.h) * Rational(E.w / mu_size);
    CycloRat acc = cyclo_of(Rational(0));
    for (auto& v : coset_values) acc = acc + v;
    return acc.scale(factor);
}

}  // namespace padicrs
