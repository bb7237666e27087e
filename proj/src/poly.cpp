#include "dlab/poly.hpp"

#include <algorithm>
#include <random>

namespace dlab {

SparsePoly SparsePoly::zero(int nvars) {
    SparsePoly p;
    p.nvars = nvars;
    return p;
}

SparsePoly SparsePoly::constant(int nvars, const Int& c) {
    SparsePoly p;
    p.nvars = nvars;
    if (c != 0) p.terms.push_back({std::vector<int>(nvars, 0), c});
    return p;
}

SparsePoly SparsePoly::variable(int nvars, int i) {
    DLAB_CHECK(i >= 0 && i < nvars, "variable index");
    SparsePoly p;
    p.nvars = nvars;
    std::vector<int> e(nvars, 0);
    e[i] = 1;
    p.terms.push_back({e, Int(1)});
    return p;
}

void SparsePoly::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::vector<int>, Int>> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(t);
    }
    terms.clear();
    for (auto& t : out)
        if (t.second != 0) terms.push_back(std::move(t));
}

int SparsePoly::total_degree() const {
    int d = 0;
    for (auto& t : terms) {
        int s = 0;
        for (int e : t.first) s += e;
        d = std::max(d, s);
    }
    return d;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
    DLAB_CHECK(nvars == o.nvars, "poly nvars mismatch");
    SparsePoly r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.normalize();
    return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const { return *this + o * Int(-1); }

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
    DLAB_CHECK(nvars == o.nvars, "poly nvars mismatch");
    SparsePoly r = zero(nvars);
    for (auto& t : terms)
        for (auto& s : o.terms) {
            std::vector<int> e(nvars);
            for (int i = 0; i < nvars; i++) e[i] = t.first[i] + s.first[i];
            r.terms.push_back({std::move(e), t.second * s.second});
        }
    r.normalize();
    return r;
}

SparsePoly SparsePoly::operator*(const Int& s) const {
    SparsePoly r = *this;
    if (s == 0) {
        r.terms.clear();
        return r;
    }
    for (auto& t : r.terms) t.second *= s;
    return r;
}

SparsePoly SparsePoly::derivative(int var) const {
    SparsePoly r = zero(nvars);
    for (auto& t : terms) {
        if (t.first[var] == 0) continue;
        auto e = t.first;
        Int c = t.second * e[var];
        e[var]--;
        r.terms.push_back({std::move(e), std::move(c)});
    }
    r.normalize();
    return r;
}

Int SparsePoly::eval(const std::vector<Int>& x) const {
    DLAB_CHECK((int)x.size() == nvars, "eval arity");
    Int s = 0, m;
    for (auto& t : terms) {
        m = t.second;
        for (int i = 0; i < nvars; i++)
            for (int e = 0; e < t.first[i]; e++) m *= x[i];
        s += m;
    }
    return s;
}

u64 SparsePoly::eval_mod(const std::vector<u64>& x, u64 m) const {
    DLAB_CHECK((int)x.size() == nvars, "eval arity");
    u64 s = 0;
    for (auto& t : terms) {
        u64 v = mpz_fdiv_ui(t.second.get_mpz_t(), m);
        for (int i = 0; i < nvars; i++)
            for (int e = 0; e < t.first[i]; e++) v = mulmod_u64(v, x[i] % m, m);
        s = (s + v) % m;
    }
    return s;
}

SparsePoly SparsePoly::shift_scaled(const std::vector<Int>& a, const Int& s) const {
    DLAB_CHECK((int)a.size() == nvars, "shift arity");
    // substitute x_i = a_i + s*z_i, expand monomial by monomial
    SparsePoly result = zero(nvars);
    for (auto& t : terms) {
        SparsePoly m = constant(nvars, t.second);
        for (int i = 0; i < nvars; i++) {
            if (t.first[i] == 0) continue;
            SparsePoly lin = constant(nvars, a[i]) + variable(nvars, i) * s;
            for (int e = 0; e < t.first[i]; e++) m = m * lin;
        }
        result = result + m;
    }
    return result;
}

SparsePoly SparsePoly::divided_by(const Int& d) const {
    DLAB_CHECK(d != 0, "divide by zero");
    SparsePoly r = *this;
    for (auto& t : r.terms) {
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), t.second.get_mpz_t(), d.get_mpz_t());
        DLAB_CHECK(rem == 0, "inexact coefficient division");
        t.second = q;
    }
    return r;
}

Int SparsePoly::max_abs_coeff() const {
    Int m = 0;
    for (auto& t : terms) {
        Int a = abs(t.second);
        if (a > m) m = a;
    }
    return m;
}

// ---------------------------------------------------------------- ModPoly

void ModPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

ModPoly ModPoly::from_coeffs(u64 p, std::vector<u64> coeffs) {
    ModPoly f;
    f.p = p;
    f.c = std::move(coeffs);
    for (auto& v : f.c) v %= p;
    f.trim();
    return f;
}

ModPoly ModPoly::x(u64 p) { return from_coeffs(p, {0, 1}); }
ModPoly ModPoly::constant(u64 p, u64 v) { return from_coeffs(p, {v}); }

ModPoly padd(const ModPoly& a, const ModPoly& b) {
    DLAB_CHECK(a.p == b.p, "modpoly modulus");
    ModPoly r;
    r.p = a.p;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); i++) {
        u64 s = (i < a.c.size() ? a.c[i] : 0) + (i < b.c.size() ? b.c[i] : 0);
        r.c[i] = s % a.p;
    }
    r.trim();
    return r;
}

ModPoly psub(const ModPoly& a, const ModPoly& b) {
    DLAB_CHECK(a.p == b.p, "modpoly modulus");
    ModPoly r;
    r.p = a.p;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); i++) {
        u64 av = i < a.c.size() ? a.c[i] : 0;
        u64 bv = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = (av + a.p - bv) % a.p;
    }
    r.trim();
    return r;
}

ModPoly pmul(const ModPoly& a, const ModPoly& b) {
    DLAB_CHECK(a.p == b.p, "modpoly modulus");
    ModPoly r;
    r.p = a.p;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); i++) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); j++)
            r.c[i + j] = (r.c[i + j] + mulmod_u64(a.c[i], b.c[j], a.p)) % a.p;
    }
    r.trim();
    return r;
}

ModPoly pmod(const ModPoly& a, const ModPoly& b) {
    DLAB_CHECK(a.p == b.p, "modpoly modulus");
    DLAB_CHECK(!b.is_zero(), "modpoly division by zero");
    ModPoly r = a;
    u64 p = a.p;
    u64 inv_lead = powmod_u64(b.c.back(), p - 2, p);
    while (!r.is_zero() && r.deg() >= b.deg()) {
        u64 f = mulmod_u64(r.c.back(), inv_lead, p);
        int shift = r.deg() - b.deg();
        for (int i = 0; i <= b.deg(); i++) {
            u64 sub = mulmod_u64(f, b.c[i], p);
            r.c[i + shift] = (r.c[i + shift] + p - sub) % p;
        }
        r.trim();
    }
    return r;
}

ModPoly pdiv_exact(const ModPoly& a, const ModPoly& b) {
    DLAB_CHECK(a.p == b.p, "modpoly modulus");
    ModPoly r = a, q;
    q.p = a.p;
    u64 p = a.p;
    if (a.is_zero()) return q;
    DLAB_CHECK(a.deg() >= b.deg(), "pdiv_exact degree");
    q.c.assign(a.deg() - b.deg() + 1, 0);
    u64 inv_lead = powmod_u64(b.c.back(), p - 2, p);
    while (!r.is_zero() && r.deg() >= b.deg()) {
        u64 f = mulmod_u64(r.c.back(), inv_lead, p);
        int shift = r.deg() - b.deg();
        q.c[shift] = f;
        for (int i = 0; i <= b.deg(); i++) {
            u64 sub = mulmod_u64(f, b.c[i], p);
            r.c[i + shift] = (r.c[i + shift] + p - sub) % p;
        }
        r.trim();
    }
    DLAB_CHECK(r.is_zero(), "pdiv_exact not exact");
    q.trim();
    return q;
}

ModPoly pmonic(const ModPoly& a) {
    if (a.is_zero()) return a;
    ModPoly r = a;
    u64 inv = powmod_u64(a.c.back(), a.p - 2, a.p);
    for (auto& v : r.c) v = mulmod_u64(v, inv, a.p);
    return r;
}

ModPoly pgcd(ModPoly a, ModPoly b) {
    while (!b.is_zero()) {
        ModPoly r = pmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(a);
}

ModPoly pderiv(const ModPoly& a) {
    ModPoly r;
    r.p = a.p;
    if (a.deg() < 1) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); i++) r.c[i - 1] = mulmod_u64(a.c[i], i % a.p, a.p);
    r.trim();
    return r;
}

ModPoly ppowmod(const ModPoly& base, const Int& e, const ModPoly& mod) {
    ModPoly r = ModPoly::constant(base.p, 1);
    ModPoly b = pmod(base, mod);
    Int n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) r = pmod(pmul(r, b), mod);
        b = pmod(pmul(b, b), mod);
        n >>= 1;
    }
    return r;
}

namespace {

bool poly_less(const ModPoly& a, const ModPoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    return a.c < b.c;
}

// split a squarefree product of degree-d irreducibles (Cantor-Zassenhaus)
void edf(const ModPoly& f, int d, std::mt19937_64& rng, std::vector<ModPoly>& out) {
    if (f.deg() == 0) return;
    if (f.deg() == d) {
        out.push_back(pmonic(f));
        return;
    }
    u64 p = f.p;
    for (;;) {
        std::vector<u64> rc(f.deg());
        for (auto& v : rc) v = rng() % p;
        ModPoly r = ModPoly::from_coeffs(p, rc);
        if (r.is_zero()) continue;
        ModPoly t;
        if (p == 2) {
            // trace map over F_{2^d}
            t = pmod(r, f);
            ModPoly acc = t;
            for (int i = 1; i < d; i++) {
                acc = pmod(pmul(acc, acc), f);
                t = padd(t, acc);
            }
        } else {
            Int e = (pow_int(Int((long)p), d) - 1) / 2;
            t = psub(ppowmod(r, e, f), ModPoly::constant(p, 1));
        }
        ModPoly g = pgcd(t, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf(g, d, rng, out);
            edf(pdiv_exact(f, g), d, rng, out);
            return;
        }
    }
}

// distinct-degree factorization of a squarefree monic f
std::vector<ModPoly> split_squarefree(ModPoly f, std::mt19937_64& rng) {
    std::vector<ModPoly> out;
    u64 p = f.p;
    ModPoly h = ModPoly::x(p);
    int d = 0;
    while (f.deg() > 0) {
        d++;
        if (2 * d > f.deg()) {
            out.push_back(pmonic(f));
            break;
        }
        h = ppowmod(h, Int((long)p), f);
        ModPoly g = pgcd(psub(h, ModPoly::x(p)), f);
        if (g.deg() > 0) {
            edf(g, d, rng, out);
            f = pdiv_exact(f, g);
            h = pmod(h, f);
        }
    }
    return out;
}

void factor_rec(const ModPoly& f, int mult, std::mt19937_64& rng,
                std::map<std::vector<u64>, std::pair<ModPoly, int>>& acc) {
    if (f.deg() == 0) return;
    u64 p = f.p;
    ModPoly fp = pderiv(f);
    if (fp.is_zero()) {
        // f = g(x^p) = g(x)^p over the prime field
        std::vector<u64> gc(f.deg() / (int)p + 1);
        for (size_t i = 0; i < gc.size(); i++) gc[i] = f.c[i * p];
        factor_rec(ModPoly::from_coeffs(p, std::move(gc)), mult * (int)p, rng, acc);
        return;
    }
    ModPoly g = pgcd(f, fp);
    if (g.deg() == 0) {
        for (auto& irr : split_squarefree(pmonic(f), rng)) {
            auto key = irr.c;
            auto it = acc.find(key);
            if (it == acc.end())
                acc.emplace(key, std::make_pair(irr, mult));
            else
                it->second.second += mult;
        }
        return;
    }
    factor_rec(pdiv_exact(f, g), mult, rng, acc);
    factor_rec(g, mult, rng, acc);
}

}  // namespace

std::vector<std::pair<ModPoly, int>> factor_mod_p(const ModPoly& f, u64 seed) {
    DLAB_CHECK(!f.is_zero(), "factor of zero polynomial");
    std::mt19937_64 rng(seed ^ (f.p * 0x9e3779b97f4a7c15ull));
    std::map<std::vector<u64>, std::pair<ModPoly, int>> acc;
    factor_rec(pmonic(f), 1, rng, acc);
    // consistency: multiplicities must add up to deg f
    std::vector<std::pair<ModPoly, int>> out;
    int total = 0;
    for (auto& [key, v] : acc) {
        total += v.first.deg() * v.second;
        out.push_back(v);
    }
    DLAB_CHECK(total == f.deg(), "factorization degree mismatch");
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
    return out;
}

int min_factor_degree(const ModPoly& f_in) {
    ModPoly f = pmonic(f_in);
    u64 p = f.p;
    // strip repeated factors cheaply (squarefree part)
    ModPoly fp = pderiv(f);
    if (!fp.is_zero()) {
        ModPoly g = pgcd(f, fp);
        if (g.deg() > 0) f = pdiv_exact(f, g);
    }
    ModPoly h = ModPoly::x(p);
    for (int d = 1; 2 * d <= f.deg(); d++) {
        h = ppowmod(h, Int((long)p), f);
        ModPoly g = pgcd(psub(h, ModPoly::x(p)), f);
        if (g.deg() > 0) return d;
    }
    return f.deg() == 0 ? 1 : f.deg();
}

}  // namespace dlab
