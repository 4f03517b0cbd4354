#pragma once

// Elements of cyclotomic rings Q(zeta_M) (or Z_p(zeta_M) with p-adic
// coefficients), stored on the power basis {zeta^i : 0 <= i < phi(M)}
// and reduced modulo the M-th cyclotomic polynomial.  The power basis
// gives exact, canonical equality tests at a fixed conductor; values at
// different conductors are compared after raising both to the lcm.

#include "padicrs/arith.hpp"
#include "padicrs/padic.hpp"

#include <map>
#include <numeric>

namespace padicrs {

// Integer cyclotomic polynomials and power reduction tables, cached.
namespace cyclo_detail {

inline std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> c(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// exact division of integer polynomials (b monic divides a)
inline std::vector<Int> poly_divexact(std::vector<Int> a, const std::vector<Int>& b) {
    std::vector<Int> q(a.size() - b.size() + 1, Int(0));
    for (long i = (long)q.size() - 1; i >= 0; --i) {
        Int c = a[i + b.size() - 1];
        q[i] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
    }
    for (auto& c : a)
        if (c != 0) throw std::logic_error("poly_divexact: not divisible");
    return q;
}

inline const std::vector<Int>& cyclotomic_poly(long M) {
    static std::map<long, std::vector<Int>> cache;
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    // x^M - 1 divided by all lower cyclotomics
    std::vector<Int> num(M + 1, Int(0));
    num[0] = -1;
    num[M] = 1;
    for (long d = 1; d < M; ++d)
        if (M % d == 0) num = poly_divexact(num, cyclotomic_poly(d));
    return cache.emplace(M, std::move(num)).first->second;
}

// rows[k] = x^k mod Phi_M on the power basis, for 0 <= k < 2M
struct ReductionTable {
    long phi;
    std::vector<std::vector<Int>> rows;
};

inline const ReductionTable& reduction_table(long M) {
    static std::map<long, ReductionTable> cache;
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    const auto& phiM = cyclotomic_poly(M);
    long n = (long)phiM.size() - 1;
    ReductionTable t;
    t.phi = n;
    t.rows.resize(2 * M);
    for (long k = 0; k < 2 * M; ++k) {
        std::vector<Int> row(n, Int(0));
        if (k < n) {
            row[k] = 1;
        } else {
            // x^k = x * x^(k-1), then reduce the top coefficient
            const auto& prev = t.rows[k - 1];
            std::vector<Int> tmp(n + 1, Int(0));
            for (long i = 0; i < n; ++i) tmp[i + 1] = prev[i];
            Int top = tmp[n];
            for (long i = 0; i < n; ++i) row[i] = tmp[i] - top * phiM[i];
        }
        t.rows[k] = std::move(row);
    }
    return cache.emplace(M, std::move(t)).first->second;
}

template <class R>
struct RingOf;

template <>
struct RingOf<Rational> {
    static Rational from_int(const Rational&, const Int& n) { return Rational(n); }
};
template <>
struct RingOf<PadicElem> {
    static PadicElem from_int(const PadicElem& w, const Int& n) {
        return PadicElem(w.prime(), w.precision(), n);
    }
};

}  // namespace cyclo_detail

template <class R>
class Cyclo {
public:
    // zero of conductor 1 needs a witness for p-adic coefficients
    explicit Cyclo(R scalar) : M_(1), c_{std::move(scalar)} {}

    Cyclo(long M, std::vector<R> coeffs) : M_(M), c_(std::move(coeffs)) {
        if ((long)c_.size() != phi()) throw std::domain_error("Cyclo: bad coefficient count");
    }

    static Cyclo zero(long M, const R& witness) {
        long n = cyclo_detail::reduction_table(M).phi;
        std::vector<R> c(n, witness - witness);
        return Cyclo(M, std::move(c));
    }

    static Cyclo scalar_at(long M, R s) {
        auto z = zero(M, s);
        z.c_[0] = std::move(s);
        return z;
    }

    // zeta_M^k, coefficient ring given by witness
    static Cyclo root_of_unity(long M, long k, const R& witness) {
        const auto& t = cyclo_detail::reduction_table(M);
        k = ((k % M) + M) % M;
        auto z = zero(M, witness);
        const auto& row = t.rows[k];
        for (long i = 0; i < t.phi; ++i)
            z.c_[i] = z.c_[i] + cyclo_detail::RingOf<R>::from_int(witness, row[i]);
        return z;
    }

    long conductor() const { return M_; }
    long phi() const { return cyclo_detail::reduction_table(M_).phi; }
    const std::vector<R>& coeffs() const { return c_; }
    const R& witness() const { return c_[0]; }

    bool is_zero() const {
        for (auto& x : c_)
            if (!(x == c_[0] - c_[0])) return false;
        return true;
    }
    bool is_scalar() const {
        R z = c_[0] - c_[0];
        for (size_t i = 1; i < c_.size(); ++i)
            if (!(c_[i] == z)) return false;
        return true;
    }
    const R& scalar_part() const {
        if (!is_scalar()) throw std::domain_error("Cyclo: not a scalar");
        return c_[0];
    }

    Cyclo raise_conductor(long M2) const {
        if (M2 == M_) return *this;
        if (M2 % M_ != 0) throw std::domain_error("Cyclo: conductor not multiple");
        const auto& t = cyclo_detail::reduction_table(M2);
        long step = M2 / M_;
        auto out = zero(M2, c_[0]);
        for (long i = 0; i < (long)c_.size(); ++i) {
            const auto& row = t.rows[(i * step) % (2 * M2)];
            for (long j = 0; j < t.phi; ++j)
                out.c_[j] = out.c_[j] + c_[i] * cyclo_detail::RingOf<R>::from_int(c_[0], row[j]);
        }
        return out;
    }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        auto [x, y] = at_common(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] = x.c_[i] + y.c_[i];
        return x;
    }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) {
        auto [x, y] = at_common(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] = x.c_[i] - y.c_[i];
        return x;
    }
    Cyclo operator-() const {
        Cyclo z = *this;
        for (auto& x : z.c_) x = (c_[0] - c_[0]) - x;
        return z;
    }

    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        auto [x, y] = at_common(a, b);
        const auto& t = cyclo_detail::reduction_table(x.M_);
        R zero_r = x.c_[0] - x.c_[0];
        std::vector<R> prod(2 * t.phi - 1, zero_r);
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i] == zero_r) continue;
            for (size_t j = 0; j < y.c_.size(); ++j) prod[i + j] = prod[i + j] + x.c_[i] * y.c_[j];
        }
        auto out = zero(x.M_, x.c_[0]);
        for (long k = 0; k < (long)prod.size(); ++k) {
            if (prod[k] == zero_r) continue;
            if (k < t.phi) {
                out.c_[k] = out.c_[k] + prod[k];
            } else {
                const auto& row = t.rows[k];
                for (long j = 0; j < t.phi; ++j)
                    out.c_[j] = out.c_[j] + prod[k] * cyclo_detail::RingOf<R>::from_int(x.c_[0], row[j]);
            }
        }
        return out;
    }

    Cyclo scale(const R& s) const {
        Cyclo z = *this;
        for (auto& x : z.c_) x = x * s;
        return z;
    }

    // Galois action zeta_M -> zeta_M^a, gcd(a, M) = 1
    Cyclo galois(long a) const {
        a = ((a % M_) + M_) % M_;
        if (std::gcd(a, M_) != 1) throw std::domain_error("Cyclo::galois: a not coprime to M");
        const auto& t = cyclo_detail::reduction_table(M_);
        auto out = zero(M_, c_[0]);
        for (long i = 0; i < (long)c_.size(); ++i) {
            const auto& row = t.rows[(long)((__int128)i * a % M_)];
            for (long j = 0; j < t.phi; ++j)
                out.c_[j] = out.c_[j] + c_[i] * cyclo_detail::RingOf<R>::from_int(c_[0], row[j]);
        }
        return out;
    }

    Cyclo conj() const { return M_ == 1 ? *this : galois(M_ - 1); }

    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        auto [x, y] = at_common(a, b);
        return x.c_ == y.c_;
    }
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    std::string str() const {
        std::string s;
        bool first = true;
        R zero_r = c_[0] - c_[0];
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == zero_r) continue;
            if (!first) s += " + ";
            s += coeff_str(c_[i]);
            if (i > 0) s += "*zeta(" + std::to_string(M_) + ")^" + std::to_string(i);
            first = false;
        }
        return first ? "0" : s;
    }

private:
    static std::string coeff_str(const Rational& q) { return q.get_str(); }
    static std::string coeff_str(const PadicElem& x) { return x.str(); }

    static std::pair<Cyclo, Cyclo> at_common(const Cyclo& a, const Cyclo& b) {
        long M = std::lcm(a.M_, b.M_);
        return {a.raise_conductor(M), b.raise_conductor(M)};
    }

    long M_;
    std::vector<R> c_;
};

using CycloRat = Cyclo<Rational>;
using CycloPad = Cyclo<PadicElem>;

namespace cyclo_detail {
template <class T>
struct RingOf<Cyclo<T>> {
    static Cyclo<T> from_int(const Cyclo<T>& w, const Int& n) {
        return Cyclo<T>::scalar_at(w.conductor(), RingOf<T>::from_int(w.witness(), n));
    }
};
}  // namespace cyclo_detail

inline CycloRat cyclo_of(const Rational& q) { return CycloRat(q); }
inline CycloRat zeta(long M, long k = 1) { return CycloRat::root_of_unity(M, k, Rational(0)); }

// inverse in Q(zeta_M) by linear algebra on the power basis
inline CycloRat cyclo_inverse(const CycloRat& x) {
    if (x.is_zero()) throw std::domain_error("cyclo_inverse: zero");
    if (x.is_scalar()) return cyclo_of(Rational(1) / x.scalar_part());
    long n = x.phi();
    // columns of the multiplication-by-x matrix
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
    for (long j = 0; j < n; ++j) {
        auto col = (x * CycloRat::root_of_unity(x.conductor(), j, Rational(0))).coeffs();
        for (long i = 0; i < n; ++i) m[i][j] = col[i];
    }
    m[0][n] = 1;  // solve x * y = 1
    for (long c = 0, r = 0; c < n && r < n; ++c) {
        long piv = -1;
        for (long i = r; i < n; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        Rational d = m[r][c];
        for (long j = c; j <= n; ++j) m[r][j] /= d;
        for (long i = 0; i < n; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (long j = c; j <= n; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    std::vector<Rational> sol(n, Rational(0));
    for (long r2 = 0; r2 < n; ++r2) {
        long lead = -1;
        for (long c = 0; c < n; ++c)
            if (m[r2][c] != 0) { lead = c; break; }
        if (lead >= 0) sol[lead] = m[r2][n];
        else if (m[r2][n] != 0)
            throw std::logic_error("cyclo_inverse: inconsistent system");
    }
    return CycloRat(x.conductor(), std::move(sol));
}

// reduce a rational cyclotomic value mod p^prec coefficientwise
inline CycloPad to_padic(const CycloRat& x, const Int& p, int prec) {
    std::vector<PadicElem> c;
    c.reserve(x.coeffs().size());
    for (auto& q : x.coeffs()) c.push_back(PadicElem::from_rational(p, prec, q));
    return CycloPad(x.conductor(), std::move(c));
}

}  // namespace padicrs
