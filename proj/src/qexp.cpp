#include "padicrs/qexp.hpp"

#include <fstream>
#include <sstream>

namespace padicrs {

Rational star_constant_cUF() {
    // F = Q, U_F = Zhat^*: mu = {+-1}, nu = 2, mu^2 = {1}, [O^* : mu^2] = 2, h = 1
    return ratio(2 * 2 * 1, 2);
}

HolProjResult ehol_decompose(const NearlyHolExp<CycloRat>& f, long w) {
    int m = f.degree_bound;
    if (w < 2 * m + 1)
        throw std::domain_error("ehol: weight too small for a unique decomposition");
    CycloRat zero = cyclo_of(Rational(0));

    // residual starts as f; peel off delta^r f_r from r = m down to 0
    NearlyHolExp<CycloRat> resid = f;
    std::vector<NearlyHolExp<CycloRat>> comps(m + 1);
    for (int r = m; r >= 0; --r) {
        NearlyHolExp<CycloRat> fr;
        fr.bound = f.bound;
        fr.denom_scale = f.denom_scale;
        fr.weight = {f.weight.w0, f.weight.w - 2 * r};
        fr.level = f.level;
        // top T-degree r coefficient of resid determines f_r:
        //   coeff of T^r in delta^r(b q^a) is (-1)^r * prod_{t=1}^{r} (w - r - t) * b
        Int lead = 1;
        for (int t = 1; t <= r; ++t) lead *= (w - r - t);
        if (r % 2 == 1) lead = -lead;
        for (auto& [n, p] : resid.a) {
            if (p.degree() < r) continue;
            CycloRat top = p.c[r];
            if (top.is_zero()) continue;
            CycloRat b = top.scale(ratio(1, lead));
            fr.set(n, TPoly<CycloRat>::constant(b));
        }
        comps[r] = fr;
        if (!fr.a.empty()) {
            auto delta_r = maass_shimura(fr, w - 2 * r, r, zero);
            // subtract
            for (auto& [n, p] : delta_r.a) {
                auto cur = resid.coeff(n);
                resid.set(n, cur - p);
            }
        }
    }
    // the residual must now vanish identically
    for (auto& [n, p] : resid.a)
        if (!p.is_zero()) throw std::logic_error("ehol: decomposition failed to terminate");
    HolProjResult out;
    out.f0 = comps[0];
    out.components = std::move(comps);
    return out;
}

OrdProjResult ord_projector(const QExp<PadicElem>& f, const Int& p, int m) {
    // g_n = (U_p)^{n!} f;  g_{n+1} = U_{p^{(n+1)! - n!}} g_n
    auto agree = [&](const QExp<PadicElem>& a, const QExp<PadicElem>& b) {
        PadicElem zero(p, m, 0);
        for (int64_t n = 1; n <= b.bound; ++n) {
            auto x = a.coeff(n, zero), y = b.coeff(n, zero);
            if (!x.congruent(y, m)) return false;
        }
        return true;
    };
    int64_t pl = to_long(p);
    QExp<PadicElem> prev = up_operator(f, pl);  // 1! = 1
    int64_t fact = 1;
    for (int n = 2;; ++n) {
        // step exponent n! - (n-1)! = (n-1)! * (n-1)
        int64_t step_exp = fact * (n - 1);
        fact *= n;
        int64_t shift = 1;
        for (int64_t i = 0; i < step_exp; ++i) {
            shift *= pl;
            if (shift > prev.bound) break;
        }
        if (shift > prev.bound && prev.bound >= 1) {
            // cannot compute the next iterate inside the certified bound
            throw BudgetExhausted(
                "ord_projector: index bound exhausted before stabilization (bound " +
                std::to_string(f.bound) + ")");
        }
        QExp<PadicElem> next = up_operator(prev, shift);
        if (next.bound < 1)
            throw BudgetExhausted("ord_projector: no surviving indices at iterate " +
                                  std::to_string(n));
        if (agree(prev, next)) {
            OrdProjResult res;
            res.expansion = next;
            res.n_stop = n;
            return res;
        }
        prev = std::move(next);
    }
}

QExp<Rational> eta_product(const std::vector<std::pair<long, long>>& exponents, int64_t bound) {
    // series for prod_n (1 - q^{sn})^e via repeated multiplication by the
    // pentagonal-number expansion of prod (1 - q^{sn})
    std::vector<Rational> coeffs(bound + 1, Rational(0));
    coeffs[0] = 1;
    auto mul_euler = [&](long s) {
        // Euler: prod_{n>=1} (1 - x^n) = sum_k (-1)^k x^{k(3k-1)/2}, x = q^s
        std::vector<std::pair<int64_t, int>> terms{{0, +1}};
        for (int64_t k = 1;; ++k) {
            int64_t e1 = s * k * (3 * k - 1) / 2, e2 = s * k * (3 * k + 1) / 2;
            if (e1 > bound && e2 > bound) break;
            int sign = (k % 2 == 0) ? +1 : -1;
            if (e1 <= bound) terms.push_back({e1, sign});
            if (e2 <= bound) terms.push_back({e2, sign});
        }
        std::vector<Rational> out(bound + 1, Rational(0));
        for (auto& [e, sg] : terms)
            for (int64_t i = 0; i + e <= bound; ++i) {
                if (coeffs[i] == 0) continue;
                if (sg > 0)
                    out[i + e] += coeffs[i];
                else
                    out[i + e] -= coeffs[i];
            }
        coeffs = std::move(out);
    };
    for (auto& [s, e] : exponents)
        for (long i = 0; i < e; ++i) mul_euler(s);
    // multiply by q
    QExp<Rational> f;
    f.bound = bound;
    f.weight = {0, 2};
    for (int64_t i = 0; i + 1 <= bound; ++i)
        if (coeffs[i] != 0) f.a.emplace(i + 1, coeffs[i]);
    return f;
}

void write_fixture(const std::string& path, const QExp<Rational>& f, const std::string& ring) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_fixture: cannot open " + path);
    out << "level " << f.level << " weight " << f.weight.w0 << " " << f.weight.w << " ring "
        << ring << " bound " << f.bound << "\n";
    for (auto& [n, v] : f.a) out << n << " " << v.get_str() << "\n";
}

QExp<Rational> read_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_fixture: cannot open " + path);
    std::string kw, ring;
    QExp<Rational> f;
    in >> kw >> f.level >> kw >> f.weight.w0 >> f.weight.w >> kw >> ring >> kw >> f.bound;
    int64_t n;
    std::string val;
    while (in >> n >> val) f.a.emplace(n, Rational(val));
    return f;
}

}  // namespace padicrs
