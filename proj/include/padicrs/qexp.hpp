#pragma once

// q-expansion engine: truncated coefficient sequences for holomorphic,
// nearly holomorphic, twisted and p-adic forms.  Indices are integers
// n <= bound standing for the rational index n / denom_scale; an absent
// index inside the bound is zero, anything past the bound is unknown and
// every operation records the largest index it can certify.
//
// Nearly holomorphic coefficients are polynomials in one formal variable
// T = (4*pi*y)^{-1}; specialising T -> 0 recovers a plain expansion.

#include "padicrs/cyclo.hpp"
#include "padicrs/laurent.hpp"

#include <functional>
#include <map>

namespace padicrs {

struct WeightMeta {
    long w0 = 0;
    long w = 0;
};

template <class R>
struct QExp {
    int64_t bound = 0;
    int64_t denom_scale = 1;
    WeightMeta weight;
    long level = 1;
    std::map<int64_t, R> a;

    R coeff(int64_t n, const R& zero) const {
        auto it = a.find(n);
        return it == a.end() ? zero : it->second;
    }
    void set(int64_t n, R v) {
        if (n > bound) throw std::domain_error("QExp::set: index beyond certified bound");
        a.insert_or_assign(n, std::move(v));
    }
};

// coefficient polynomials in T, low degree first
template <class R>
struct TPoly {
    std::vector<R> c;

    static TPoly zero() { return TPoly{}; }
    static TPoly constant(R v) { return TPoly{{std::move(v)}}; }
    int degree() const { return (int)c.size() - 1; }
    bool is_zero() const {
        for (auto& x : c)
            if (!(x == x - x)) return false;
        return true;
    }
    R value_at_zero(const R& zero) const { return c.empty() ? zero : c[0]; }
    void trim() {
        while (!c.empty() && c.back() == c.back() - c.back()) c.pop_back();
    }
    friend TPoly operator+(const TPoly& p, const TPoly& q) {
        TPoly r = p;
        if (q.c.size() > r.c.size()) r.c.resize(q.c.size(), q.c[0] - q.c[0]);
        for (size_t i = 0; i < q.c.size(); ++i) r.c[i] = r.c[i] + q.c[i];
        r.trim();
        return r;
    }
    friend TPoly operator-(const TPoly& p, const TPoly& q) {
        TPoly r = p;
        if (q.c.size() > r.c.size()) r.c.resize(q.c.size(), q.c[0] - q.c[0]);
        for (size_t i = 0; i < q.c.size(); ++i) r.c[i] = r.c[i] - q.c[i];
        r.trim();
        return r;
    }
    friend TPoly operator*(const TPoly& p, const TPoly& q) {
        if (p.c.empty() || q.c.empty()) return TPoly{};
        TPoly r;
        r.c.assign(p.c.size() + q.c.size() - 1, p.c[0] - p.c[0]);
        for (size_t i = 0; i < p.c.size(); ++i)
            for (size_t j = 0; j < q.c.size(); ++j) r.c[i + j] = r.c[i + j] + p.c[i] * q.c[j];
        r.trim();
        return r;
    }
    friend bool operator==(const TPoly& p, const TPoly& q) { return (p - q).is_zero(); }
};

template <class R>
struct NearlyHolExp {
    int64_t bound = 0;
    int64_t denom_scale = 1;
    WeightMeta weight;
    long level = 1;
    int degree_bound = 0;
    std::map<int64_t, TPoly<R>> a;

    TPoly<R> coeff(int64_t n) const {
        auto it = a.find(n);
        return it == a.end() ? TPoly<R>{} : it->second;
    }
    void set(int64_t n, TPoly<R> v) {
        if (n > bound) throw std::domain_error("NearlyHolExp::set: index beyond bound");
        v.trim();
        if ((int)v.c.size() - 1 > degree_bound) degree_bound = (int)v.c.size() - 1;
        a.insert_or_assign(n, std::move(v));
    }

    // T -> 0 specialisation
    QExp<R> at_T_zero(const R& zero) const {
        QExp<R> f;
        f.bound = bound;
        f.denom_scale = denom_scale;
        f.weight = weight;
        f.level = level;
        for (auto& [n, p] : a) {
            R v = p.value_at_zero(zero);
            if (!(v == zero)) f.a.emplace(n, v);
        }
        return f;
    }

    static NearlyHolExp from_plain(const QExp<R>& f) {
        NearlyHolExp g;
        g.bound = f.bound;
        g.denom_scale = f.denom_scale;
        g.weight = f.weight;
        g.level = f.level;
        for (auto& [n, v] : f.a) g.a.emplace(n, TPoly<R>::constant(v));
        return g;
    }
};

// twist classes: positive rationals carrying the finite-idele data of u
struct UClass {
    Int num = 1, den = 1;

    static UClass of(const Rational& q) {
        if (q <= 0) throw std::domain_error("UClass: must be positive");
        return UClass{q.get_num(), q.get_den()};
    }
    Rational value() const { return ratio(num, den); }
    friend bool operator<(const UClass& x, const UClass& y) {
        return x.num * y.den < y.num * x.den;
    }
    friend bool operator==(const UClass& x, const UClass& y) {
        return x.num == y.num && x.den == y.den;
    }
};

template <class R>
struct TwistedExp {
    int64_t bound = 0;
    int64_t denom_scale = 1;
    WeightMeta weight;
    long level = 1;
    std::map<UClass, NearlyHolExp<R>> slices;

    NearlyHolExp<R>& slice(const UClass& u) {
        auto it = slices.find(u);
        if (it == slices.end()) {
            NearlyHolExp<R> s;
            s.bound = bound;
            s.denom_scale = denom_scale;
            s.weight = weight;
            s.level = level;
            it = slices.emplace(u, std::move(s)).first;
        }
        return it->second;
    }
};

// --------------------------------------------------------------------------
// Maass-Shimura operator on coefficient polynomials.
//
// On the coefficient of index a (rational index n/denom_scale), the raising
// operator of weight w iterated k times acts by
//   sum_j C(k,j) * [(w+j)(w+j+1)...(w+k-1)] * (-1)^{k-j} T^{k-j} * d^j(P)
// with d(P) = T^2 P' + a P.  Weights shift by 2 per step.

template <class R>
TPoly<R> tpoly_d_operator(const TPoly<R>& p, const Rational& a, const R& witness) {
    // d(P) = T^2 P' + a P
    TPoly<R> out;
    if (p.c.empty()) return out;
    R zero = witness - witness;
    out.c.assign(p.c.size() + 1, zero);
    for (size_t i = 0; i < p.c.size(); ++i) {
        if (i >= 1) {
            // T^2 * i * c_i * T^{i-1} = i c_i T^{i+1}
            out.c[i + 1] = out.c[i + 1] + p.c[i] * cyclo_detail::RingOf<R>::from_int(witness, Int(i));
        }
    }
    if (a.get_den() != 1) throw std::domain_error("tpoly_d_operator: fractional index scale");
    for (size_t i = 0; i < p.c.size(); ++i)
        out.c[i] = out.c[i] + p.c[i] * cyclo_detail::RingOf<R>::from_int(witness, a.get_num());
    out.trim();
    return out;
}

template <class R>
NearlyHolExp<R> maass_shimura(const NearlyHolExp<R>& f, long w, int k, const R& witness) {
    if (k < 0) throw std::domain_error("maass_shimura: k must be >= 0");
    NearlyHolExp<R> g;
    g.bound = f.bound;
    g.denom_scale = f.denom_scale;
    g.weight = {f.weight.w0, f.weight.w + 2 * k};
    g.level = f.level;
    if (k == 0) {
        g.a = f.a;
        g.degree_bound = f.degree_bound;
        return g;
    }
    R zero = witness - witness;
    for (auto& [n, p] : f.a) {
        Rational idx = ratio(n, f.denom_scale);
        if (idx.get_den() != 1)
            throw std::domain_error("maass_shimura: non-integral index unsupported");
        // iterated d^j
        std::vector<TPoly<R>> dj{p};
        for (int j = 1; j <= k; ++j) dj.push_back(tpoly_d_operator(dj.back(), idx, witness));
        TPoly<R> acc;
        for (int j = 0; j <= k; ++j) {
            // C(k,j) * prod_{t=j}^{k-1} (w+t)
            Int coef = 1;
            {
                Int bin;
                mpz_bin_uiui(bin.get_mpz_t(), k, j);
                coef = bin;
            }
            for (int t = j; t <= k - 1; ++t) coef *= (w + t);
            if ((k - j) % 2 == 1) coef = -coef;
            // term = coef * T^{k-j} * dj[j]
            TPoly<R> term;
            term.c.assign(dj[j].c.size() + (k - j), zero);
            for (size_t i = 0; i < dj[j].c.size(); ++i)
                term.c[i + (k - j)] =
                    dj[j].c[i] * cyclo_detail::RingOf<R>::from_int(witness, coef);
            acc = acc + term;
        }
        if (!acc.is_zero()) g.set(n, acc);
    }
    return g;
}

// independent oracle: compose k single raising steps
//   delta_w(P) = (a - w T) P + T^2 P'
template <class R>
NearlyHolExp<R> maass_shimura_oracle(const NearlyHolExp<R>& f, long w, int k, const R& witness) {
    NearlyHolExp<R> g = f;
    R zero = witness - witness;
    for (int step = 0; step < k; ++step) {
        long wc = w + 2 * step;
        NearlyHolExp<R> h;
        h.bound = g.bound;
        h.denom_scale = g.denom_scale;
        h.weight = {g.weight.w0, g.weight.w + 2};
        h.level = g.level;
        for (auto& [n, p] : g.a) {
            Rational idx = ratio(n, g.denom_scale);
            TPoly<R> dp = tpoly_d_operator(p, idx, witness);
            // (..) - wT * P:  note d already contains +aP
            TPoly<R> wt;
            wt.c.assign(p.c.size() + 1, zero);
            for (size_t i = 0; i < p.c.size(); ++i)
                wt.c[i + 1] = p.c[i] * cyclo_detail::RingOf<R>::from_int(witness, Int(wc));
            TPoly<R> acc = dp - wt;
            if (!acc.is_zero()) h.set(n, acc);
        }
        g = std::move(h);
    }
    g.weight = {f.weight.w0, f.weight.w + 2 * k};
    return g;
}

// --------------------------------------------------------------------------
// Holomorphic projection: the unique decomposition f = sum_r delta^r f_r
// (weights w - 2r), solved from the top T-degree down.  Requires
// w >= 2m + 1; returns f_0.  CycloRat coefficients (exact division).

struct HolProjResult {
    NearlyHolExp<CycloRat> f0;                       // the holomorphic part
    std::vector<NearlyHolExp<CycloRat>> components;  // f_r, r = 0..m
};

HolProjResult ehol_decompose(const NearlyHolExp<CycloRat>& f, long w);
inline QExp<CycloRat> ehol(const NearlyHolExp<CycloRat>& f, long w) {
    return ehol_decompose(f, w).f0.at_T_zero(cyclo_of(Rational(0)));
}

// --------------------------------------------------------------------------
// U_y on p-adic q-expansions: W_{U_y f}(c) = W_f(c y)

template <class R>
QExp<R> up_operator(const QExp<R>& f, int64_t y) {
    if (y <= 0) throw std::domain_error("up_operator: y must be positive");
    QExp<R> g;
    g.bound = f.bound / y;
    g.denom_scale = f.denom_scale;
    g.weight = f.weight;
    g.level = f.level;
    for (auto& [n, v] : f.a) {
        if (n % y == 0 && n / y <= g.bound) g.a.emplace(n / y, v);
    }
    return g;
}

struct BudgetExhausted : std::runtime_error {
    explicit BudgetExhausted(const std::string& w) : std::runtime_error(w) {}
};

struct OrdProjResult {
    QExp<PadicElem> expansion;
    int n_stop = 0;  // iterates (U_p)^{n!} agreed at n_stop-1 vs n_stop
};

// ordinary projector: iterate factorially indexed powers of U_p until two
// successive iterates agree mod p^m on all surviving indices
OrdProjResult ord_projector(const QExp<PadicElem>& f, const Int& p, int m);

// --------------------------------------------------------------------------
// Contracted star product. For F = Q and U_F = Zhat^*, the constant
// c_{U_F} = nu * 2 * h / [O^* : mu^2] evaluates to 2, and the u-sum runs
// over positive rationals (negative u killed by the archimedean support).

Rational star_constant_cUF();

template <class R>
NearlyHolExp<R> star_product(const TwistedExp<R>& f1, const TwistedExp<R>& f2,
                             const R& witness) {
    NearlyHolExp<R> out;
    out.bound = std::min(f1.bound, f2.bound);
    out.denom_scale = f1.denom_scale;
    if (f1.denom_scale != f2.denom_scale)
        throw std::domain_error("star_product: incompatible index scales");
    out.weight = {f1.weight.w0 + f2.weight.w0, f1.weight.w + f2.weight.w};
    out.level = std::lcm(f1.level, f2.level);
    Rational c = star_constant_cUF();
    R cfac = cyclo_detail::RingOf<R>::from_int(witness, c.get_num());
    if (c.get_den() != 1) throw std::logic_error("star constant not integral");
    for (auto& [u, s1] : f1.slices) {
        auto it = f2.slices.find(u);
        if (it == f2.slices.end()) continue;
        const auto& s2 = it->second;
        for (auto& [n1, p1] : s1.a) {
            if (n1 > out.bound) continue;
            for (auto& [n2, p2] : s2.a) {
                int64_t n = n1 + n2;
                if (n > out.bound) break;
                TPoly<R> term = p1 * p2;
                for (auto& x : term.c) x = x * cfac;
                auto cur = out.coeff(n);
                out.set(n, cur + term);
            }
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// eta-product expander: q * prod (1-q^n)^2 (1-q^{11n})^2 and friends.
// exponents maps n-step to power, e.g. {{1,2},{11,2}} for the level-11 form.
QExp<Rational> eta_product(const std::vector<std::pair<long, long>>& exponents, int64_t bound);

// fixture IO: header "level weight_w0 weight_w ring bound" then "index value"
void write_fixture(const std::string& path, const QExp<Rational>& f, const std::string& ring);
QExp<Rational> read_fixture(const std::string& path);

}  // namespace padicrs
