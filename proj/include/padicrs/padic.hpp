#pragma once

// Fixed-precision p-adic integers.  A value is a residue mod p^m together
// with the claimed precision m; arithmetic never reports more precision
// than its inputs justify (min rule).  Division is restricted to units;
// dividing by p is a separate explicit valuation shift so the precision
// bookkeeping stays honest.

#include "padicrs/arith.hpp"

namespace padicrs {

class PadicElem {
public:
    PadicElem() : p_(2), prec_(1), res_(0) {}

    PadicElem(Int p, int prec, Int value) : p_(std::move(p)), prec_(prec) {
        if (p_ < 2) throw std::domain_error("PadicElem: prime must be >= 2");
        if (prec_ < 1) throw std::domain_error("PadicElem: precision must be >= 1");
        Int m = modulus();
        res_ = ((value % m) + m) % m;
    }

    static PadicElem from_rational(const Int& p, int prec, const Rational& x) {
        Int m = int_pow(p, prec);
        Int den = x.get_den();
        if (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t()))
            throw std::domain_error("PadicElem: denominator not a p-unit");
        return PadicElem(p, prec, x.get_num() * mod_inverse(den % m, m));
    }

    const Int& prime() const { return p_; }
    int precision() const { return prec_; }
    const Int& residue() const { return res_; }
    Int modulus() const { return int_pow(p_, prec_); }

    bool is_zero() const { return res_ == 0; }
    bool is_unit() const { return res_ % p_ != 0; }

    // valuation of the residue; values >= prec mean "zero at this precision"
    int valuation() const {
        if (res_ == 0) return prec_;
        return (int)val_p(res_, p_);
    }

    PadicElem at_precision(int m) const {
        if (m > prec_)
            throw std::domain_error("PadicElem: cannot raise claimed precision");
        return PadicElem(p_, m, res_);
    }

    friend PadicElem operator+(const PadicElem& a, const PadicElem& b) {
        int m = a.joint(b);
        return PadicElem(a.p_, m, a.res_ + b.res_);
    }
    friend PadicElem operator-(const PadicElem& a, const PadicElem& b) {
        int m = a.joint(b);
        return PadicElem(a.p_, m, a.res_ - b.res_);
    }
    friend PadicElem operator*(const PadicElem& a, const PadicElem& b) {
        int m = a.joint(b);
        return PadicElem(a.p_, m, a.res_ * b.res_);
    }
    PadicElem operator-() const { return PadicElem(p_, prec_, -res_); }

    PadicElem inverse() const {
        if (!is_unit()) throw std::domain_error("PadicElem: inverse of non-unit");
        return PadicElem(p_, prec_, mod_inverse(res_, modulus()));
    }
    friend PadicElem operator/(const PadicElem& a, const PadicElem& b) {
        return a * b.inverse();
    }

    // x -> x / p^k, defined only when p^k | residue; precision drops by k.
    PadicElem shift_down(int k) const {
        if (k < 0) throw std::domain_error("shift_down: negative shift");
        if (prec_ - k < 1) throw std::domain_error("shift_down: precision exhausted");
        Int pk = int_pow(p_, k);
        if (res_ % pk != 0) throw std::domain_error("shift_down: residue not divisible");
        return PadicElem(p_, prec_ - k, res_ / pk);
    }
    PadicElem shift_up(int k) const {
        if (k < 0) throw std::domain_error("shift_up: negative shift");
        return PadicElem(p_, prec_, res_ * int_pow(p_, k));
    }

    PadicElem pow(const Int& e) const {
        if (e < 0) return inverse().pow(-e);
        return PadicElem(p_, prec_, mod_pow(res_, e, modulus()));
    }

    // equality as claimed: same prime, same precision, same residue
    friend bool operator==(const PadicElem& a, const PadicElem& b) {
        return a.p_ == b.p_ && a.prec_ == b.prec_ && a.res_ == b.res_;
    }
    friend bool operator!=(const PadicElem& a, const PadicElem& b) { return !(a == b); }

    // congruence at the joint precision (capped by min of claims)
    bool congruent(const PadicElem& b, int m) const {
        if (p_ != b.p_) return false;
        int mm = std::min({m, prec_, b.prec_});
        Int mod = int_pow(p_, mm);
        return (res_ - b.res_) % mod == 0;
    }

    std::string str() const {
        return res_.get_str() + " mod " + p_.get_str() + "^" + std::to_string(prec_);
    }

private:
    int joint(const PadicElem& b) const {
        if (p_ != b.p_) throw std::domain_error("PadicElem: prime mismatch");
        return std::min(prec_, b.prec_);
    }

    Int p_;
    int prec_;
    Int res_;
};

}  // namespace padicrs
