#pragma once

// Imaginary quadratic field data E = Q(sqrt(-d)) at desk scale: integer
// ring arithmetic on the standard basis, discriminant and unit data,
// per-prime splitting, class number by brute-force reduced-form counting,
// and lattice-point enumeration for norm equations.

#include "padicrs/arith.hpp"

#include <cstdlib>
#include <vector>

namespace padicrs {

// number of primitive reduced binary quadratic forms of discriminant D < 0
inline long class_number_by_forms(long D) {
    if (D >= 0 || (D % 4 != 0 && ((D % 4) + 4) % 4 != 1))
        throw std::domain_error("class_number_by_forms: need D < 0, D = 0,1 mod 4");
    long h = 0;
    for (long a = 1; a * a <= -D / 3; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (std::gcd(std::gcd(a, b >= 0 ? b : -b), c) != 1) continue;
            if (b < 0 && (a == c || a == -b)) continue;  // avoid double count
            ++h;
        }
    }
    return h;
}

struct QuadFieldData {
    long d;  // squarefree positive, E = Q(sqrt(-d))
    long D;  // field discriminant (negative)
    long h;  // class number
    long w;  // number of roots of unity
    bool half_basis;  // true when d = 3 mod 4, omega = (1+sqrt(-d))/2

    // omega satisfies x^2 - tr_om*x + nm_om = 0
    long tr_om, nm_om;

    static QuadFieldData make(long d) {
        if (d <= 0) throw std::domain_error("QuadFieldData: d must be positive");
        for (long q = 2; q * q <= d; ++q)
            if (d % (q * q) == 0) throw std::domain_error("QuadFieldData: d must be squarefree");
        QuadFieldData E;
        E.d = d;
        E.half_basis = (d % 4 == 3);
        E.D = E.half_basis ? -d : -4 * d;
        E.h = class_number_by_forms(E.D);
        E.w = (d == 1) ? 4 : (d == 3) ? 6 : 2;
        if (E.half_basis) {
            E.tr_om = 1;
            E.nm_om = (1 + d) / 4;
        } else {
            E.tr_om = 0;
            E.nm_om = d;
        }
        return E;
    }

    // +1 split, -1 inert, 0 ramified
    int splitting(long ell) const { return kronecker(Int(D), Int(ell)); }

    long disc_valuation(long ell) const {
        long D_abs = -D, v = 0;
        while (D_abs % ell == 0) { D_abs /= ell; ++v; }
        return v;
    }
};

// x + y*omega in O_E
struct QuadElem {
    Int x, y;

    bool operator==(const QuadElem& o) const { return x == o.x && y == o.y; }
};

inline QuadElem quad_mul(const QuadFieldData& E, const QuadElem& a, const QuadElem& b) {
    // omega^2 = tr_om * omega - nm_om
    Int xy = a.x * b.y + a.y * b.x;
    return {a.x * b.x - a.y * b.y * E.nm_om, xy + a.y * b.y * E.tr_om};
}

inline QuadElem quad_conj(const QuadFieldData& E, const QuadElem& a) {
    // conj(omega) = tr_om - omega
    return {a.x + a.y * E.tr_om, -a.y};
}

inline Int quad_norm(const QuadFieldData& E, const QuadElem& a) {
    return a.x * a.x + a.x * a.y * E.tr_om + a.y * a.y * E.nm_om;
}

inline Int quad_trace(const QuadFieldData& E, const QuadElem& a) {
    return 2 * a.x + a.y * E.tr_om;
}

// torsion units of O_E
inline std::vector<QuadElem> unit_group(const QuadFieldData& E) {
    std::vector<QuadElem> us = {{Int(1), Int(0)}, {Int(-1), Int(0)}};
    if (E.d == 1) {
        us.push_back({Int(0), Int(1)});
        us.push_back({Int(0), Int(-1)});
    } else if (E.d == 3) {
        // omega = (1+sqrt(-3))/2 is a 6th root of unity
        us.push_back({Int(0), Int(1)});
        us.push_back({Int(0), Int(-1)});
        us.push_back({Int(1), Int(-1)});
        us.push_back({Int(-1), Int(1)});
    }
    return us;
}

// all x + y*omega with norm exactly n (exhaustive box enumeration)
inline std::vector<QuadElem> elements_of_norm(const QuadFieldData& E, const Int& n) {
    std::vector<QuadElem> out;
    if (n <= 0) return out;
    // N(x,y) = x^2 + tr*xy + nm*y^2 = (x + tr*y/2)^2 + (-D/4) y^2  with tr in {0,1}
    // bound |y| <= sqrt(4n / -D)
    Int ymax;
    mpz_sqrt(ymax.get_mpz_t(), Int(4 * n / (-E.D)).get_mpz_t());
    for (Int y = -ymax; y <= ymax; ++y) {
        // solve x^2 + tr*y*x + (nm*y^2 - n) = 0 over Z
        Int A = E.tr_om * y, C = E.nm_om * y * y - n;
        Int disc = A * A - 4 * C;
        if (disc < 0) continue;
        Int s;
        mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
        if (s * s != disc) continue;
        for (int sgn : {+1, -1}) {
            Int num = -A + sgn * s;
            if (num % 2 != 0) continue;
            QuadElem e{num / 2, y};
            if (quad_norm(E, e) == n) {
                bool dup = false;
                for (auto& f : out)
                    if (f == e) { dup = true; break; }
                if (!dup) out.push_back(e);
            }
            if (s == 0) break;
        }
    }
    return out;
}

// representation count r(n) = #{x in O_E : N(x) = n}
inline long repr_count(const QuadFieldData& E, const Int& n) {
    return (long)elements_of_norm(E, n).size();
}

// generator of a degree-one prime above a split ell (norm equation); for
// ramified ell returns the ramified prime generator. Requires h = 1.
inline QuadElem prime_above(const QuadFieldData& E, long ell) {
    if (E.h != 1) throw std::domain_error("prime_above: requires class number 1");
    int s = E.splitting(ell);
    if (s < 0) throw std::domain_error("prime_above: ell is inert");
    auto cands = elements_of_norm(E, Int(ell));
    if (cands.empty()) throw std::logic_error("prime_above: no generator found");
    return cands.front();
}

}  // namespace padicrs
