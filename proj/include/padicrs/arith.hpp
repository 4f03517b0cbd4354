#pragma once

// Exact arithmetic substrate: arbitrary-precision integers and rationals
// (GMP-backed) plus the small number-theoretic helpers everything else
// leans on.  All values are immutable after construction and all
// operations are pure.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicrs {

using Int = mpz_class;
using Rational = mpq_class;

// mpq_class(num, den) does not canonicalize; always build fractions here
inline Rational ratio(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("ratio: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rational rat_pow(const Rational& b, long e) {
    if (e >= 0) {
        Rational r;
        mpz_pow_ui(r.get_num_mpz_t(), b.get_num().get_mpz_t(), (unsigned long)e);
        mpz_pow_ui(r.get_den_mpz_t(), b.get_den().get_mpz_t(), (unsigned long)e);
        r.canonicalize();
        return r;
    }
    if (b == 0) throw std::domain_error("rat_pow: 0 to negative power");
    return rat_pow(Rational(b.get_den(), b.get_num()), -e);
}

inline Int mod_pow(Int b, Int e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("mod_inverse: not invertible");
    return r;
}

// v_p of a nonzero integer.
inline long val_p(Int n, const Int& p) {
    if (n == 0) throw std::domain_error("val_p(0)");
    long v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

inline long val_p(const Rational& x, const Int& p) {
    if (x == 0) throw std::domain_error("val_p(0)");
    return val_p(x.get_num(), p) - val_p(x.get_den(), p);
}

// Kronecker symbol (a|n).
inline int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline bool is_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0; }

// Trial-division factorization; fine at desk scale.
inline std::vector<std::pair<Int, long>> factorize(Int n) {
    if (n <= 0) throw std::domain_error("factorize: need n > 0");
    std::vector<std::pair<Int, long>> out;
    for (Int d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            long e = 0;
            while (n % d == 0) { n /= d; ++e; }
            out.push_back({d, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

// Smallest-prime-factor sieve for bulk factorization of small indices.
inline std::vector<int32_t> spf_sieve(int64_t bound) {
    std::vector<int32_t> spf(bound + 1, 0);
    for (int64_t i = 2; i <= bound; ++i) {
        if (spf[i] == 0) {
            for (int64_t j = i; j <= bound; j += i)
                if (spf[j] == 0) spf[j] = (int32_t)i;
        }
    }
    return spf;
}

inline Int euler_phi(const Int& n) {
    Int r = 1;
    for (auto& [p, e] : factorize(n)) r *= int_pow(p, e - 1) * (p - 1);
    return r;
}

inline long to_long(const Int& n) {
    if (!n.fits_slong_p()) throw std::overflow_error("to_long: out of range");
    return n.get_si();
}

inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace padicrs
