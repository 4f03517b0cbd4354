#include "padicrs/characters.hpp"

#include <algorithm>

namespace padicrs {

namespace {

long mod_pow_l(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = (long)((__int128)r * b % m);
        b = (long)((__int128)b * b % m);
        e >>= 1;
    }
    return r;
}

long order_mod(long a, long m) {
    long o = 1, x = a % m;
    while (x != 1 % m) {
        x = (long)((__int128)x * (a % m) % m);
        ++o;
        if (o > 4 * m) throw std::logic_error("order_mod: no order (not a unit?)");
    }
    return o;
}

long primitive_root(long pe, long p) {
    long phi = pe / p * (p - 1);
    auto fac = factorize(Int(phi));
    for (long g = 2; g < pe; ++g) {
        if (std::gcd(g, pe) != 1) continue;
        bool ok = true;
        for (auto& [q, e] : fac)
            if (mod_pow_l(g, phi / to_long(q), pe) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

}  // namespace

std::pair<std::vector<long>, std::vector<long>> DirichletChar::unit_group_generators(long N) {
    std::vector<long> gens, orders;
    if (N == 1) return {gens, orders};
    auto fac = factorize(Int(N));
    for (auto& [pz, e] : fac) {
        long p = to_long(pz);
        long pe = 1;
        for (long i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 1) continue;
            // -1 and (for 2^e >= 8) 5 generate
            long g1 = pe - 1;
            gens.push_back(g1);
            orders.push_back(2);
            if (e >= 3) {
                gens.push_back(5 % pe);
                orders.push_back(pe / 4);
            }
        } else {
            gens.push_back(primitive_root(pe, p));
            orders.push_back(pe / p * (p - 1));
        }
        // lift the generator g of (Z/pe)^* to one that is 1 mod N/pe
        // (done below in from_exponents via CRT)
    }
    // CRT-lift: generator for factor i congruent to g mod pe_i and 1 elsewhere
    std::vector<long> lifted;
    size_t gi = 0;
    for (auto& [pz, e] : fac) {
        long p = to_long(pz);
        long pe = 1;
        for (long i = 0; i < e; ++i) pe *= p;
        size_t count = (p == 2) ? (e == 1 ? 0 : (e >= 3 ? 2 : 1)) : 1;
        for (size_t k = 0; k < count; ++k, ++gi) {
            long g = gens[gi];
            long rest = N / pe;
            long x;
            if (rest == 1) {
                x = g % N;
            } else {
                Int inv_pe = mod_inverse(Int(pe) % rest, Int(rest));
                // x = g mod pe, 1 mod rest
                Int xv = Int(g) + Int(pe) * ((Int(1) - Int(g)) * inv_pe % rest);
                xv = ((xv % N) + N) % N;
                x = to_long(xv);
            }
            lifted.push_back(x);
        }
    }
    return {lifted, orders};
}

DirichletChar DirichletChar::from_exponents(long N, const std::vector<long>& exps) {
    auto [gens, orders] = unit_group_generators(N);
    if (exps.size() != gens.size())
        throw std::domain_error("DirichletChar: wrong number of generator exponents");
    long e = 1;
    for (long o : orders) e = std::lcm(e, o);
    if (e == 0) e = 1;
    DirichletChar chi;
    chi.N_ = N;
    chi.order_ = std::max<long>(1, e);
    chi.table_.assign(N, -1);
    // BFS closure: chi(g_i) = zeta_e^{exps[i] * (e / orders[i])}
    chi.table_[1 % N] = 0;
    bool progress = true;
    // first assign generators then close multiplicatively
    std::vector<std::pair<long, long>> seeds;
    for (size_t i = 0; i < gens.size(); ++i) {
        long k = ((exps[i] % orders[i]) + orders[i]) % orders[i];
        seeds.push_back({gens[i], k * (chi.order_ / orders[i]) % chi.order_});
    }
    std::vector<long> elems{1 % N};
    for (auto& [g, ke] : seeds) {
        std::vector<long> cur = elems;
        for (long x : cur) {
            long y = x, acc = chi.table_[x];
            for (;;) {
                y = (long)((__int128)y * g % N);
                acc = (acc + ke) % chi.order_;
                if (chi.table_[y] != -1) {
                    if (chi.table_[y] != acc)
                        throw std::domain_error("DirichletChar: inconsistent exponents");
                    break;
                }
                chi.table_[y] = acc;
                elems.push_back(y);
            }
        }
    }
    (void)progress;
    // shrink order to the actual value group
    long g = chi.order_;
    for (long v : chi.table_)
        if (v > 0) g = std::gcd(g, v);
    if (g > 1) {
        for (auto& v : chi.table_)
            if (v > 0) v /= g;
        chi.order_ /= g;
        if (chi.order_ == 0) chi.order_ = 1;
    }
    return chi;
}

DirichletChar DirichletChar::trivial(long N) {
    auto [gens, orders] = unit_group_generators(N);
    return from_exponents(N, std::vector<long>(gens.size(), 0));
}

DirichletChar DirichletChar::kronecker_char(long D) {
    long N = std::labs(D);
    DirichletChar chi;
    chi.N_ = N;
    chi.order_ = 2;
    chi.table_.assign(N, -1);
    bool all_one = true;
    for (long a = 0; a < N; ++a) {
        if (std::gcd(a, N) != 1) continue;
        int k = kronecker(Int(D), Int(a));
        chi.table_[a] = (k == 1) ? 0 : 1;
        if (k != 1) all_one = false;
    }
    if (all_one) {
        chi.order_ = 1;
        for (auto& v : chi.table_)
            if (v > 0) v = 0;
    }
    return chi;
}

std::optional<long> DirichletChar::exponent(const Int& a) const {
    Int r = ((a % N_) + N_) % N_;
    long idx = to_long(r);
    if (table_[idx] < 0) return std::nullopt;
    return table_[idx];
}

CycloRat DirichletChar::operator()(const Int& a) const {
    auto e = exponent(a);
    if (!e) return cyclo_of(Rational(0));
    return zeta(order_, *e);
}

bool DirichletChar::is_trivial() const {
    for (long v : table_)
        if (v > 0) return false;
    return true;
}

int DirichletChar::sign() const {
    auto e = exponent(Int(-1));
    if (!e) throw std::logic_error("DirichletChar::sign");
    return (*e % order_ == 0) ? 1 : ((2 * *e) % order_ == 0 ? -1 : throw std::logic_error("sign not +-1"));
}

long DirichletChar::conductor() const {
    for (long f = 1; f <= N_; ++f) {
        if (N_ % f != 0) continue;
        bool ok = true;
        for (long a = 1; a < N_ && ok; ++a) {
            if (std::gcd(a, N_) != 1) continue;
            if (a % f == 1 % f && table_[a] != 0) ok = false;
        }
        if (ok) return f;
    }
    return N_;
}

DirichletChar DirichletChar::primitive_part() const {
    long f = conductor();
    if (f == N_) return *this;
    DirichletChar chi;
    chi.N_ = f;
    chi.order_ = order_;
    chi.table_.assign(f, -1);
    for (long a = 0; a < f; ++a) {
        if (std::gcd(a, f) != 1) continue;
        // lift a to a residue mod N coprime to N
        long b = a;
        while (std::gcd(b, N_) != 1) b += f;
        chi.table_[a] = table_[b % N_];
    }
    // shrink order
    long g = chi.order_;
    for (long v : chi.table_)
        if (v > 0) g = std::gcd(g, v);
    if (g > 1) {
        for (auto& v : chi.table_)
            if (v > 0) v /= g;
        chi.order_ = std::max<long>(1, chi.order_ / g);
    }
    return chi;
}

DirichletChar DirichletChar::inverse() const {
    DirichletChar chi = *this;
    for (auto& v : chi.table_)
        if (v > 0) v = chi.order_ - v;
    return chi;
}

DirichletChar DirichletChar::times(const DirichletChar& other) const {
    long N = std::lcm(N_, other.N_);
    long e = std::lcm(order_, other.order_);
    DirichletChar chi;
    chi.N_ = N;
    chi.order_ = e;
    chi.table_.assign(N, -1);
    for (long a = 0; a < N; ++a) {
        if (std::gcd(a, N) != 1) continue;
        auto x = exponent(Int(a)), y = other.exponent(Int(a));
        chi.table_[a] = ((*x * (e / order_)) + (*y * (e / other.order_))) % e;
    }
    long g = chi.order_;
    for (long v : chi.table_)
        if (v > 0) g = std::gcd(g, v);
    if (g > 1) {
        for (auto& v : chi.table_)
            if (v > 0) v /= g;
        chi.order_ = std::max<long>(1, chi.order_ / g);
    }
    return chi;
}

CycloRat dirichlet_L_at_0(const DirichletChar& chi) {
    if (chi.is_trivial()) throw std::domain_error("dirichlet_L_at_0: trivial character");
    if (chi.conductor() != chi.modulus())
        throw std::domain_error("dirichlet_L_at_0: character not primitive");
    long N = chi.modulus();
    CycloRat acc = cyclo_of(Rational(0));
    for (long a = 1; a <= N; ++a) {
        auto e = chi.exponent(Int(a));
        if (!e) continue;
        acc = acc + zeta(chi.value_order(), *e).scale(Rational(a));
    }
    return -(acc.scale(ratio(1, N)));
}

Rational completed_L1_eta(const QuadFieldData& E) {
    auto eta = DirichletChar::kronecker_char(E.D);
    auto L = dirichlet_L_at_0(eta);
    if (!L.is_scalar()) throw std::logic_error("completed_L1_eta: value not rational");
    Rational val = L.scalar_part();
    if (val != ratio(2 * E.h, E.w))
        throw std::logic_error("completed_L1_eta: class-number cross-check failed");
    return val;
}

CycloRat LocalCharQ::on_unit(const Int& u) const {
    if (cond == 0) return cyclo_of(Rational(1));
    Int m = int_pow(Int(ell), cond);
    Int r = ((u % m) + m) % m;
    long idx = to_long(r);
    long e = unit_table[idx];
    if (e < 0) throw std::domain_error("LocalCharQ: unit table undefined (non-unit)");
    return zeta(unit_order, e);
}

CycloRat LocalCharQ::value(const Int& x) const {
    if (x == 0) throw std::domain_error("LocalCharQ: value at 0");
    long v = val_p(x, Int(ell));
    Int u = x / int_pow(Int(ell), v);
    CycloRat out = cyclo_of(Rational(1));
    CycloRat piv = unram_value;
    for (long i = 0; i < std::labs(v); ++i) out = out * piv;
    if (v < 0) out = cyclo_inverse(out);
    return out * on_unit(u);
}

LocalCharQ local_component(const DirichletChar& chi, long ell) {
    LocalCharQ lc;
    lc.ell = ell;
    long N = chi.modulus();
    long r = 0, Nl = N;
    while (Nl % ell == 0) { Nl /= ell; ++r; }
    // prime-to-ell part of chi evaluated at ell
    if (r == 0) {
        lc.unram_value = chi(Int(ell));
        lc.cond = 0;
        return lc;
    }
    long elr = 1;
    for (long i = 0; i < r; ++i) elr *= ell;
    // decompose chi = chi_ell * chi_rest by CRT
    lc.cond = r;
    lc.unit_order = chi.value_order();
    lc.unit_table.assign(elr, -1);
    for (long u = 0; u < elr; ++u) {
        if (std::gcd(u, ell) != 1) continue;
        // lift u to u' = u mod ell^r, 1 mod N/ell^r; chi_ell(u) = chi(u')
        Int up;
        if (Nl == 1) {
            up = u;
        } else {
            Int inv = mod_inverse(Int(elr) % Nl, Int(Nl));
            up = Int(u) + Int(elr) * ((Int(1) - Int(u)) * inv % Nl);
            up = ((up % N) + N) % N;
        }
        auto e = chi.exponent(up);
        // local convention: unit action is the inverse of the classical value
        lc.unit_table[u] = e ? (chi.value_order() - *e) % chi.value_order() : -1;
    }
    if (Nl == 1) {
        lc.unram_value = cyclo_of(Rational(1));
    } else {
        // chi^{(ell)}(ell) = chi_rest(ell): lift ell to ell mod N/ell^r, 1 mod ell^r
        Int inv = mod_inverse(Int(Nl) % elr, Int(elr));
        Int lp = Int(ell) + Int(Nl) * ((Int(1) - Int(ell)) * inv % elr);
        lp = ((lp % N) + N) % N;
        auto e = chi.exponent(lp);
        if (!e) throw std::logic_error("local_component: bad lift");
        lc.unram_value = zeta(chi.value_order(), *e);
    }
    return lc;
}

// --------------------------------------------------------------------------
// HeckeCharE

std::pair<std::vector<QuadElem>, std::vector<long>> HeckeCharE::unit_group_generators(
    const QuadFieldData& E, long M) {
    // enumerate (O/M)^* and find a generating set greedily
    std::vector<QuadElem> units;
    for (long x = 0; x < M; ++x)
        for (long y = 0; y < M; ++y) {
            QuadElem e{Int(x), Int(y)};
            if (std::gcd(to_long(quad_norm(E, e) % M), M) == 1) units.push_back(e);
        }
    auto mul_mod = [&](const QuadElem& a, const QuadElem& b) {
        QuadElem c = quad_mul(E, a, b);
        c.x = ((c.x % M) + M) % M;
        c.y = ((c.y % M) + M) % M;
        return c;
    };
    auto find = [&](const QuadElem& a) {
        for (size_t i = 0; i < units.size(); ++i)
            if (units[i] == a) return (long)i;
        throw std::logic_error("unit_group_generators: element not found");
    };
    std::vector<char> in_span(units.size(), 0);
    QuadElem one{Int(1), Int(0)};
    in_span[find(one)] = 1;
    long span_size = 1;
    std::vector<QuadElem> gens;
    std::vector<long> orders;
    while (span_size < (long)units.size()) {
        // pick the unit of largest order not in the span
        long best = -1, best_ord = 0;
        for (size_t i = 0; i < units.size(); ++i) {
            if (in_span[i]) continue;
            long o = 1;
            QuadElem x = units[i];
            while (!(x == one)) { x = mul_mod(x, units[i]); ++o; }
            if (o > best_ord) { best_ord = o; best = (long)i; }
        }
        gens.push_back(units[best]);
        orders.push_back(best_ord);
        // close the span
        std::vector<long> cur;
        for (size_t i = 0; i < units.size(); ++i)
            if (in_span[i]) cur.push_back((long)i);
        for (long idx : cur) {
            QuadElem x = units[idx];
            for (long k = 1; k < best_ord; ++k) {
                x = mul_mod(x, units[best]);
                long j = find(x);
                if (!in_span[j]) { in_span[j] = 1; ++span_size; }
            }
        }
    }
    return {gens, orders};
}

HeckeCharE HeckeCharE::trivial(const QuadFieldData& E) {
    HeckeCharE chi(E);
    chi.M_ = 1;
    chi.order_ = 1;
    chi.residues_ = {QuadElem{Int(0), Int(0)}};
    chi.expo_ = {0};
    return chi;
}

HeckeCharE HeckeCharE::from_unit_exponents(const QuadFieldData& E, long M,
                                           const std::vector<long>& exps) {
    auto [gens, orders] = unit_group_generators(E, M);
    if (exps.size() != gens.size())
        throw std::domain_error("HeckeCharE: wrong number of generator exponents");
    long e = 1;
    for (long o : orders) e = std::lcm(e, o);
    HeckeCharE chi(E);
    chi.M_ = M;
    chi.order_ = std::max<long>(1, e);
    // enumerate units and exponents by BFS over generators
    std::map<std::pair<long, long>, long> expmap;
    auto mul_mod = [&](const QuadElem& a, const QuadElem& b) {
        QuadElem c = quad_mul(E, a, b);
        c.x = ((c.x % M) + M) % M;
        c.y = ((c.y % M) + M) % M;
        return c;
    };
    expmap[{1, 0}] = 0;
    std::vector<QuadElem> elems{QuadElem{Int(1), Int(0)}};
    for (size_t i = 0; i < gens.size(); ++i) {
        long ke = (((exps[i] % orders[i]) + orders[i]) % orders[i]) * (chi.order_ / orders[i]) %
                  chi.order_;
        std::vector<QuadElem> cur = elems;
        for (auto& x0 : cur) {
            QuadElem y = x0;
            long acc = expmap[{to_long(x0.x), to_long(x0.y)}];
            for (;;) {
                y = mul_mod(y, gens[i]);
                acc = (acc + ke) % chi.order_;
                auto key = std::make_pair(to_long(y.x), to_long(y.y));
                auto it = expmap.find(key);
                if (it != expmap.end()) {
                    if (it->second != acc)
                        throw std::domain_error("HeckeCharE: inconsistent exponents");
                    break;
                }
                expmap[key] = acc;
                elems.push_back(y);
            }
        }
    }
    for (auto& [key, v] : expmap) {
        chi.residues_.push_back(QuadElem{Int(key.first), Int(key.second)});
        chi.expo_.push_back(v);
    }
    // must be trivial on torsion units for chi((beta)) to be well-defined
    for (auto& u : unit_group(E)) {
        QuadElem r{((u.x % M) + M) % M, ((u.y % M) + M) % M};
        if (!(chi.at_element(r) == cyclo_of(Rational(1))))
            throw std::domain_error("HeckeCharE: not trivial on unit group");
    }
    return chi;
}

long HeckeCharE::index_of(const QuadElem& beta) const {
    Int bx = ((beta.x % M_) + M_) % M_, by = ((beta.y % M_) + M_) % M_;
    for (size_t i = 0; i < residues_.size(); ++i)
        if (residues_[i].x == bx && residues_[i].y == by) return (long)i;
    return -1;
}

bool HeckeCharE::defined_at(const QuadElem& beta) const {
    if (M_ == 1) return true;
    return index_of(beta) >= 0;
}

CycloRat HeckeCharE::at_element(const QuadElem& beta) const {
    if (M_ == 1) return cyclo_of(Rational(1));
    long i = index_of(beta);
    if (i < 0) throw std::domain_error("HeckeCharE: element not coprime to modulus");
    return zeta(order_, expo_[i]);
}

DirichletChar HeckeCharE::restriction_to_Q() const {
    if (M_ == 1) return DirichletChar::trivial(1);
    // omega(a) = chi((a)) for integers a coprime to M
    auto [gens, orders] = DirichletChar::unit_group_generators(M_);
    // build exponents w.r.t. the canonical generators by solving chi on them
    // (directly construct the table instead)
    // We construct via from_exponents on the canonical generators.
    std::vector<long> exps;
    long e = value_order();
    for (size_t i = 0; i < gens.size(); ++i) {
        auto v = at_element(QuadElem{Int(gens[i]), Int(0)});
        // v = zeta_e^k: recover k
        long k = -1;
        for (long j = 0; j < e; ++j)
            if (v == zeta(e, j)) { k = j; break; }
        if (k < 0) throw std::logic_error("restriction_to_Q: value not a stored root of unity");
        // from_exponents expects exponent w.r.t. zeta_{orders[i]}: chi(g)^orders[i] = 1
        if ((k * orders[i]) % e != 0)
            throw std::logic_error("restriction_to_Q: order mismatch");
        exps.push_back(k * orders[i] / e);
    }
    return DirichletChar::from_exponents(M_, exps);
}

LocalCharE local_component_E(const HeckeCharE& chi, long ell) {
    const auto& E = chi.field();
    LocalCharE out;
    out.ell = ell;
    out.splitting = E.splitting(ell);
    if (chi.modulus() != 1 && chi.modulus() % ell == 0)
        throw std::domain_error("local_component_E: ramified-at-ell components unsupported");
    if (out.splitting > 0) {
        auto pi = prime_above(E, ell);
        auto pibar = quad_conj(E, pi);
        LocalCharQ c1, c2;
        c1.ell = ell;
        c1.unram_value = chi.at_ideal_gen(pi);
        c2.ell = ell;
        c2.unram_value = chi.at_ideal_gen(pibar);
        out.split_comps = {c1, c2};
    } else if (out.splitting < 0) {
        // uniformizer ell, value chi((ell))
        out.inert_unif_value = chi.at_element(QuadElem{Int(ell), Int(0)});
    } else {
        auto pi = prime_above(E, ell);
        out.inert_unif_value = chi.at_ideal_gen(pi);
    }
    return out;
}

}  // namespace padicrs
