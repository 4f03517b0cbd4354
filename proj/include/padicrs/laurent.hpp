#pragma once

// Sparse Laurent polynomials and fractions in up to four named variables,
// with cyclotomic-rational coefficients.  These carry the interpolated
// local Whittaker and J functions: evaluation at a character point is
// exact substitution, and a zero denominator at the point is reported as
// a pole rather than silently mangled.

#include "padicrs/cyclo.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>

namespace padicrs {

constexpr int kMaxLaurentVars = 4;
using Expo = std::array<int, kMaxLaurentVars>;

class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(CycloRat c) {
        if (!c.is_zero()) terms_.emplace(Expo{0, 0, 0, 0}, std::move(c));
    }
    explicit LaurentPoly(const Rational& q) : LaurentPoly(cyclo_of(q)) {}

    static LaurentPoly variable(int v, int exponent = 1) {
        LaurentPoly p;
        Expo e{0, 0, 0, 0};
        e[v] = exponent;
        p.terms_.emplace(e, cyclo_of(Rational(1)));
        return p;
    }
    static LaurentPoly monomial(const Expo& e, CycloRat c) {
        LaurentPoly p;
        if (!c.is_zero()) p.terms_.emplace(e, std::move(c));
        return p;
    }

    const std::map<Expo, CycloRat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0, 0} &&
               terms_.begin()->second == cyclo_of(Rational(1));
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Expo e;
                for (int i = 0; i < kMaxLaurentVars; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    LaurentPoly scale(const CycloRat& s) const {
        LaurentPoly r;
        for (auto& [e, c] : terms_) r.add_term(e, c * s);
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return (a - b).is_zero();
    }

    CycloRat eval(const std::vector<CycloRat>& point) const {
        CycloRat acc = cyclo_of(Rational(0));
        for (auto& [e, c] : terms_) {
            CycloRat t = c;
            for (int v = 0; v < kMaxLaurentVars; ++v) {
                if (e[v] == 0) continue;
                if ((size_t)v >= point.size())
                    throw std::domain_error("LaurentPoly::eval: missing variable value");
                CycloRat base = point[v];
                int k = e[v];
                if (k < 0) { base = cyclo_inverse(base); k = -k; }
                for (int i = 0; i < k; ++i) t = t * base;
            }
            acc = acc + t;
        }
        return acc;
    }

    // exact division along variable v; treats both sides as polynomials in
    // X_v with Laurent coefficients in the other variables and long-divides
    // from the top degree. Returns nullopt when the remainder is nonzero.
    std::optional<LaurentPoly> divide_exact(const LaurentPoly& d, int v) const {
        if (d.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
        if (is_zero()) return LaurentPoly();
        auto deg_range = [&](const LaurentPoly& p) {
            int lo = p.terms_.begin()->first[v], hi = lo;
            for (auto& [e, c] : p.terms_) {
                lo = std::min(lo, e[v]);
                hi = std::max(hi, e[v]);
            }
            return std::pair<int, int>{lo, hi};
        };
        auto [nlo, nhi] = deg_range(*this);
        auto [dlo, dhi] = deg_range(d);
        // leading coefficient of d in X_v (a Laurent poly in the other vars)
        LaurentPoly dlead;
        for (auto& [e, c] : d.terms_)
            if (e[v] == dhi) {
                Expo e2 = e;
                e2[v] = 0;
                dlead.add_term(e2, c);
            }
        // need an invertible (monomial) leading coefficient for clean division
        if (dlead.terms_.size() != 1) return std::nullopt;
        auto [dle, dlc] = *dlead.terms_.begin();
        CycloRat dlc_inv = cyclo_inverse(dlc);

        LaurentPoly rem = *this, quot;
        for (int step = nhi; step >= dhi + std::min(nlo - dlo, 0) - 1; --step) {
            if (rem.is_zero()) break;
            auto [rlo, rhi] = deg_range(rem);
            if (rhi < dhi) break;
            LaurentPoly rlead;
            for (auto& [e, c] : rem.terms_)
                if (e[v] == rhi) {
                    Expo e2 = e;
                    e2[v] = 0;
                    rlead.add_term(e2, c);
                }
            LaurentPoly t;
            for (auto& [e, c] : rlead.terms_) {
                Expo e2;
                for (int i = 0; i < kMaxLaurentVars; ++i) e2[i] = e[i] - dle[i];
                e2[v] = rhi - dhi;
                t.add_term(e2, c * dlc_inv);
            }
            quot = quot + t;
            rem = rem - t * d;
        }
        if (!rem.is_zero()) return std::nullopt;
        return quot;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [e, c] : terms_) {
            if (!first) s += " + ";
            s += "(" + c.str() + ")";
            for (int v = 0; v < kMaxLaurentVars; ++v)
                if (e[v] != 0) {
                    s += "*" + (v < (int)names.size() ? names[v] : "v" + std::to_string(v));
                    if (e[v] != 1) s += "^" + std::to_string(e[v]);
                }
            first = false;
        }
        return s;
    }

private:
    void add_term(const Expo& e, const CycloRat& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<Expo, CycloRat> terms_;
};

struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

class LaurentFraction {
public:
    LaurentFraction() : num_(), den_(LaurentPoly(Rational(1))) {}
    explicit LaurentFraction(LaurentPoly num)
        : num_(std::move(num)), den_(LaurentPoly(Rational(1))) {}
    LaurentFraction(LaurentPoly num, LaurentPoly den)
        : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("LaurentFraction: zero denominator");
    }

    static LaurentFraction constant(const Rational& q) { return LaurentFraction(LaurentPoly(q)); }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool den_is_one() const { return den_.is_one(); }

    friend LaurentFraction operator+(const LaurentFraction& a, const LaurentFraction& b) {
        return LaurentFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend LaurentFraction operator-(const LaurentFraction& a, const LaurentFraction& b) {
        return LaurentFraction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend LaurentFraction operator*(const LaurentFraction& a, const LaurentFraction& b) {
        return LaurentFraction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend LaurentFraction operator/(const LaurentFraction& a, const LaurentFraction& b) {
        if (b.num_.is_zero()) throw std::domain_error("LaurentFraction: division by zero");
        return LaurentFraction(a.num_ * b.den_, a.den_ * b.num_);
    }

    // try to clear the denominator along variable v
    LaurentFraction simplified(int v) const {
        if (den_.is_one()) return *this;
        auto q = num_.divide_exact(den_, v);
        if (q) return LaurentFraction(*q);
        return *this;
    }

    CycloRat eval(const std::vector<CycloRat>& point) const {
        CycloRat d = den_.eval(point);
        if (d.is_zero()) throw PoleError("LaurentFraction: pole at evaluation point");
        return num_.eval(point) * cyclo_inverse(d);
    }

    friend bool operator==(const LaurentFraction& a, const LaurentFraction& b) {
        return (a.num_ * b.den_) == (b.num_ * a.den_);
    }

private:
    LaurentPoly num_, den_;
};

// Values with a formal transcendental grading: val * (2*pi*i)^g1 * (4*pi)^g2.
// Archimedean Whittaker data stays in this form; gradings must cancel before
// a value may flow into p-adic coefficients.
struct Graded {
    CycloRat val;
    int pow_2pi_i = 0;
    int pow_4pi = 0;

    Graded(CycloRat v, int a, int b) : val(std::move(v)), pow_2pi_i(a), pow_4pi(b) {}
    explicit Graded(const Rational& q) : val(cyclo_of(q)) {}

    bool gradings_trivial() const { return pow_2pi_i == 0 && pow_4pi == 0; }

    friend Graded operator*(const Graded& a, const Graded& b) {
        return Graded(a.val * b.val, a.pow_2pi_i + b.pow_2pi_i, a.pow_4pi + b.pow_4pi);
    }
    friend Graded operator+(const Graded& a, const Graded& b) {
        if (a.val.is_zero()) return b;
        if (b.val.is_zero()) return a;
        if (a.pow_2pi_i != b.pow_2pi_i || a.pow_4pi != b.pow_4pi)
            throw std::domain_error("Graded: adding incompatible gradings");
        return Graded(a.val + b.val, a.pow_2pi_i, a.pow_4pi);
    }
    friend bool operator==(const Graded& a, const Graded& b) {
        if (a.val.is_zero() && b.val.is_zero()) return true;
        return a.val == b.val && a.pow_2pi_i == b.pow_2pi_i && a.pow_4pi == b.pow_4pi;
    }
};

}  // namespace padicrs
