#include "dlab/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dlab {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::kExact: return "exact";
        case Provenance::kDirectCount: return "direct-count";
        case Provenance::kLatticeDeterminant: return "lattice-determinant";
        case Provenance::kMultiplicativeAssembly: return "multiplicative-assembly";
        case Provenance::kTruncated: return "truncated";
        case Provenance::kMeasuredConstant: return "measured-constant";
    }
    return "?";
}

// ------------------------------------------------------------ rho on ideals

IntMat LocalDensity::coordinate_sublattice(const IdealHnf& n) const {
    const int k = field().k;
    // kernel of [E | -H] where E embeds Z^{k-1} as vectors with last
    // coordinate zero
    IntMat M(k, (k - 1) + k);
    for (int i = 0; i < k - 1; i++) M.at(i, i) = 1;
    for (int i = 0; i < k; i++)
        for (int j = 0; j < k; j++) M.at(i, (k - 1) + j) = -n.H.at(i, j);
    IntMat K = kernel_basis(M);
    DLAB_CHECK(K.c == k - 1, "coordinate sublattice rank");
    IntMat L(k - 1, k - 1);
    for (int j = 0; j < k - 1; j++)
        for (int i = 0; i < k - 1; i++) L.at(i, j) = K.at(i, j);
    hnf_columns(L);
    for (int i = 0; i < k - 1; i++) DLAB_CHECK(L.at(i, i) > 0, "sublattice not full rank");
    return L;
}

DensityValue LocalDensity::rho_ideal(const IdealHnf& n) {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = rho_cache_.find(n);
        if (it != rho_cache_.end()) return {it->second, Provenance::kLatticeDeterminant};
    }
    IntMat L = coordinate_sublattice(n);
    Int det = 1;
    for (int i = 0; i < L.r; i++) det *= L.at(i, i);
    Rat rho = make_rat(n.norm, det);
    std::lock_guard<std::mutex> lk(mu_);
    rho_cache_.emplace(n, rho);
    return {rho, Provenance::kLatticeDeterminant};
}

Int LocalDensity::rho_direct_count(const IdealHnf& n, u64 budget) {
    const int k = field().k;
    DLAB_CHECK(n.norm.fits_ulong_p(), "rho_direct_count norm range");
    u64 m = n.norm.get_ui();
    double cost = std::pow((double)m, k - 1);
    if (cost > (double)budget)
        throw BudgetError("rho_direct_count: (Nn)^(k-1) exceeds budget");

    // i64 back-substitution fast path (entries and coordinates are < m)
    std::vector<std::vector<i64>> H(k, std::vector<i64>(k));
    for (int i = 0; i < k; i++)
        for (int j = 0; j < k; j++) {
            DLAB_CHECK(n.H.at(i, j).fits_slong_p(), "HNF entry range");
            H[i][j] = n.H.at(i, j).get_si();
        }
    auto member = [&](const std::array<i64, 8>& x) {
        std::array<i64, 8> c{};
        for (int i = k - 1; i >= 0; i--) {
            i128 s = x[i];
            for (int j = i + 1; j < k; j++) s -= (i128)H[i][j] * c[j];
            if (s % H[i][i] != 0) return false;
            c[i] = (i64)(s / H[i][i]);
        }
        return true;
    };
    u64 count = 0;
    std::array<i64, 8> x{};
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == k - 1) {
            x[k - 1] = 0;
            if (member(x)) count++;
            return;
        }
        for (u64 v = 0; v < m; v++) {
            x[pos] = (i64)v;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return Int(count);
}

// ----------------------------------------------- literal counting kernels

namespace {

struct GroupedTerm {
    int e1;
    std::array<int, 8> tail;  // exponents of x_2..x_{k-1}
    u64 c;
};

std::vector<GroupedTerm> group_mod(const SparsePoly& f, u64 m) {
    std::vector<GroupedTerm> out;
    for (auto& [e, c] : f.terms) {
        GroupedTerm t{};
        t.e1 = e[0];
        for (size_t i = 1; i < e.size(); i++) t.tail[i - 1] = e[i];
        t.c = mpz_fdiv_ui(c.get_mpz_t(), m);
        out.push_back(t);
    }
    return out;
}

// count zeros of f mod m over (Z/m)^{nvars}; Horner in the first variable
u64 count_zero_kernel(const SparsePoly& f, u64 m, bool parallel) {
    DLAB_CHECK(m >= 1 && m < (1ull << 32), "count kernel modulus range");
    if (m == 1) return 1;
    const int nv = f.nvars;
    DLAB_CHECK(nv >= 2 && nv <= 8, "count kernel arity");
    const BarrettU32 bar(m);
    const auto terms = group_mod(f, m);
    int deg1 = 0, degmax = 0;
    for (auto& t : terms) {
        deg1 = std::max(deg1, t.e1);
        for (int i = 0; i < nv - 1; i++) degmax = std::max(degmax, t.tail[i]);
    }
    degmax = std::max(degmax, deg1);

    // worker for a fixed value of the last tail coordinate
    auto slab = [&](u64 last) -> u64 {
        std::vector<std::array<u64, 16>> pows(nv - 1);  // pows[i][e]: (x_{i+2})^e
        auto fill_pows = [&](int i, u64 v) {
            pows[i][0] = 1;
            for (int e = 1; e <= degmax; e++) pows[i][e] = bar.mulmod(pows[i][e - 1], v);
        };
        fill_pows(nv - 2, last);
        std::vector<u64> coeffs(deg1 + 1);
        u64 cnt = 0;
        auto run_inner = [&]() {
            std::fill(coeffs.begin(), coeffs.end(), 0);
            for (auto& t : terms) {
                u64 v = t.c;
                for (int i = 0; i < nv - 1; i++)
                    if (t.tail[i]) v = bar.mulmod(v, pows[i][t.tail[i]]);
                coeffs[t.e1] += v;
                if (coeffs[t.e1] >= m) coeffs[t.e1] -= m;
            }
            for (u64 x1 = 0; x1 < m; x1++) {
                u64 v = coeffs[deg1];
                for (int d = deg1 - 1; d >= 0; d--) {
                    v = bar.mulmod(v, x1) + coeffs[d];
                    if (v >= m) v -= m;
                }
                if (v == 0) cnt++;
            }
        };
        // odometer over tail coordinates 0..nv-3
        auto rec = [&](auto&& self, int pos) -> void {
            if (pos < 0) {
                run_inner();
                return;
            }
            for (u64 v = 0; v < m; v++) {
                fill_pows(pos, v);
                self(self, pos - 1);
            }
        };
        rec(rec, nv - 3);
        return cnt;
    };

    u64 total = 0;
    if (parallel) {
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
        for (u64 last = 0; last < m; last++) total += slab(last);
    } else {
        for (u64 last = 0; last < m; last++) total += slab(last);
    }
    return total;
}

u64 checked_pow_cost(u64 base, int e, u64 cap) {
    // base^e, clamped at cap+1
    u64 r = 1;
    for (int i = 0; i < e; i++) {
        if (r > cap / base + 1) return cap + 1;
        r *= base;
        if (r > cap) return cap + 1;
    }
    return r;
}

}  // namespace

u64 LocalDensity::count_f_zero(u64 m) const {
    return count_zero_kernel(field().incomplete_form, m, true);
}

u64 LocalDensity::count_f_zero_serial(u64 m) const {
    // straightforward reference: odometer + per-point polynomial evaluation
    const int nv = field().k - 1;
    const auto& f = field().incomplete_form;
    std::vector<u64> x(nv, 0);
    u64 cnt = 0;
    for (;;) {
        if (f.eval_mod(x, m) == 0) cnt++;
        int i = 0;
        while (i < nv && ++x[i] == m) x[i++] = 0;
        if (i == nv) break;
    }
    return cnt;
}

DensityValue LocalDensity::varrho_direct(u64 n, u64 budget) {
    const int k = field().k;
    if (checked_pow_cost(n, k - 1, budget) > budget)
        throw BudgetError("varrho_direct: n^(k-1) exceeds budget; use the assembled route");
    u64 cnt = count_f_zero(n);
    return {make_rat(Int(cnt), pow_int(Int((long)n), k - 2)), Provenance::kDirectCount};
}

DensityValue LocalDensity::varrho_direct_serial(u64 n, u64 budget) {
    const int k = field().k;
    if (checked_pow_cost(n, k - 1, budget) > budget)
        throw BudgetError("varrho_direct: n^(k-1) exceeds budget; use the assembled route");
    u64 cnt = count_f_zero_serial(n);
    return {make_rat(Int(cnt), pow_int(Int((long)n), k - 2)), Provenance::kDirectCount};
}

DensityValue LocalDensity::varrho_crt(u64 n, u64 budget) {
    const int k = field().k;
    Rat val(1);
    for (auto [p, a] : ia_.factor_integer(Int((long)n))) {
        u64 pa = pow_u64(p, a);
        if (checked_pow_cost(pa, k - 1, budget) > budget)
            throw BudgetError("varrho_crt: prime power exceeds budget");
        u64 cnt = count_f_zero(pa);
        val *= make_rat(Int(cnt), pow_int(Int((long)pa), k - 2));
    }
    return {val, Provenance::kDirectCount};
}

DensityValue LocalDensity::varrho_assembled(u64 n) {
    Rat val(1);
    for (auto [p, a] : ia_.factor_integer(Int((long)n)))
        val *= varrho_assembled_prime_power(p, a);
    return {val, Provenance::kMultiplicativeAssembly};
}

Rat LocalDensity::varrho_assembled_prime_power(u64 p, int alpha) {
    DLAB_CHECK(alpha >= 1, "varrho prime power exponent");
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = varrho_pp_cache_.find({p, alpha});
        if (it != varrho_pp_cache_.end()) return it->second;
    }
    MuCoefficients mu = ia_.mu_coefficients_prime_power(p, alpha);
    // varrho(p^a) / p^a = sum mu(n) rho(n) / Nn
    Rat sum(0);
    for (auto& e : mu.entries) {
        Rat rho = rho_ideal(e.hnf).value;
        sum += Rat(e.coeff) * rho / Rat(e.hnf.norm);
    }
    Rat val = Rat(pow_int(Int((long)p), alpha)) * sum;
    std::lock_guard<std::mutex> lk(mu_);
    varrho_pp_cache_.emplace(std::make_pair(p, alpha), val);
    return val;
}

// --------------------------------------------------------------- varrho*

Int LocalDensity::varrho_star_brute(u64 p, int alpha) {
    if (alpha == 0) return 1;
    const int nv = field().k - 1;
    u64 m = pow_u64(p, alpha);
    const auto& f = field().incomplete_form;
    std::vector<u64> x(nv, 0);
    Int cnt = 0;
    for (;;) {
        bool primitive = false;
        for (int i = 0; i < nv; i++)
            if (x[i] % p != 0) primitive = true;
        if (primitive && f.eval_mod(x, m) == 0) cnt++;
        int i = 0;
        while (i < nv && ++x[i] == m) x[i++] = 0;
        if (i == nv) break;
    }
    return cnt;
}

Int LocalDensity::hensel_count(const SparsePoly& g, u64 p, int beta, u64 brute_budget,
                               int depth) {
    const int nv = g.nvars;
    const int k = field().k;
    if (beta <= 0) return 1;
    DLAB_CHECK(depth <= 64, "hensel recursion depth cap");
    u64 mbeta = checked_pow_cost(p, beta, brute_budget);
    if (mbeta <= brute_budget &&
        checked_pow_cost(mbeta, nv, brute_budget) <= brute_budget) {
        return Int(count_zero_kernel(g, mbeta, false));
    }
    u64 classify_budget = std::max<u64>(brute_budget, 4000000ull);
    if (checked_pow_cost(p, nv, classify_budget) > classify_budget)
        throw BudgetError("hensel_count: residue classification exceeds budget");

    std::vector<SparsePoly> grads;
    for (int i = 0; i < nv; i++) grads.push_back(g.derivative(i));
    Int total = 0;
    std::vector<u64> x(nv, 0);
    Int p2 = Int((long)p) * Int((long)p);
    for (;;) {
        if (g.eval_mod(x, p) == 0) {
            bool singular = true;
            for (int i = 0; i < nv && singular; i++)
                if (grads[i].eval_mod(x, p) != 0) singular = false;
            if (!singular) {
                total += pow_int(Int((long)p), (beta - 1) * (k - 2));
            } else if (beta == 1) {
                total += 1;
            } else {
                std::vector<Int> xz(nv);
                for (int i = 0; i < nv; i++) xz[i] = Int(x[i]);
                SparsePoly h = g.shift_scaled(xz, Int((long)p));
                Int c0 = h.eval(std::vector<Int>(nv, Int(0)));
                if (mpz_divisible_p(c0.get_mpz_t(), p2.get_mpz_t())) {
                    SparsePoly h2 = h.divided_by(p2);
                    total += pow_int(Int((long)p), nv) *
                             hensel_count(h2, p, beta - 2, brute_budget, depth + 1);
                }
                // otherwise no lift above this residue
            }
        }
        int i = 0;
        while (i < nv && ++x[i] == p) x[i++] = 0;
        if (i == nv) break;
    }
    return total;
}

Int LocalDensity::varrho_star(u64 p, int alpha, u64 brute_budget) {
    if (alpha == 0) return 1;
    const int nv = field().k - 1;
    const int k = field().k;
    u64 ma = checked_pow_cost(p, alpha, brute_budget);
    if (ma <= brute_budget && checked_pow_cost(ma, nv, brute_budget) <= brute_budget)
        return varrho_star_brute(p, alpha);
    u64 classify_budget = std::max<u64>(brute_budget, 4000000ull);
    if (checked_pow_cost(p, nv, classify_budget) > classify_budget)
        throw BudgetError("varrho_star: residue classification exceeds budget");

    const auto& f = field().incomplete_form;
    std::vector<SparsePoly> grads;
    for (int i = 0; i < nv; i++) grads.push_back(f.derivative(i));
    Int total = 0;
    std::vector<u64> x(nv, 0);
    Int p2 = Int((long)p) * Int((long)p);
    for (;;) {
        bool nonzero = false;
        for (int i = 0; i < nv; i++)
            if (x[i] != 0) nonzero = true;
        if (nonzero && f.eval_mod(x, p) == 0) {
            bool singular = true;
            for (int i = 0; i < nv && singular; i++)
                if (grads[i].eval_mod(x, p) != 0) singular = false;
            if (!singular) {
                total += pow_int(Int((long)p), (alpha - 1) * (k - 2));
            } else if (alpha == 1) {
                total += 1;
            } else {
                std::vector<Int> xz(nv);
                for (int i = 0; i < nv; i++) xz[i] = Int(x[i]);
                SparsePoly h = f.shift_scaled(xz, Int((long)p));
                Int c0 = h.eval(std::vector<Int>(nv, Int(0)));
                if (mpz_divisible_p(c0.get_mpz_t(), p2.get_mpz_t())) {
                    SparsePoly h2 = h.divided_by(p2);
                    total += pow_int(Int((long)p), nv) *
                             hensel_count(h2, p, alpha - 2, brute_budget, 1);
                }
            }
        }
        int i = 0;
        while (i < nv && ++x[i] == p) x[i++] = 0;
        if (i == nv) break;
    }
    return total;
}

// ------------------------------------------------------------ bound report

DensityBoundReport LocalDensity::check_density_bounds(u64 pmax, i64 rho_norm_bound) {
    const int k = field().k;
    DensityBoundReport rep;
    rep.pmax = pmax;
    rep.rho_norm_bound = rho_norm_bound;
    for (u64 p : primes_upto(pmax)) {
        bool deg_one = ia_.split_prime(p).f == 1;
        for (int l = 1; l <= 2 * k; l++) {
            Rat v = varrho_assembled_prime_power(p, l);
            double ratio = v.get_d() / std::pow((double)p, l / k);
            if (ratio > rep.prime_power_ratio) {
                rep.prime_power_ratio = ratio;
                rep.prime_power_argmax_p = p;
                rep.prime_power_argmax_l = l;
            }
        }
        Rat v1 = varrho_assembled_prime_power(p, 1);
        if (v1 >= Rat((long)p)) rep.varrho_p_less_than_p = false;
        if (deg_one) {
            double dev = std::fabs(v1.get_d() - k) * std::pow((double)p, 1.0 - 1.0 / k);
            if (dev > rep.split_deviation) {
                rep.split_deviation = dev;
                rep.split_argmax_p = p;
            }
        } else {
            double ratio = v1.get_d() * std::pow((double)p, 1.0 - 2.0 / k);
            if (ratio > rep.nonsplit_ratio) {
                rep.nonsplit_ratio = ratio;
                rep.nonsplit_argmax_p = p;
            }
        }
    }
    for (auto& fi : ia_.ideals_of_norm_upto(rho_norm_bound)) {
        IdealHnf h = ia_.hnf_of(fi);
        double ratio = rho_ideal(h).value.get_d() / std::pow(h.norm.get_d(), 1.0 / k);
        rep.rho_ratio = std::max(rep.rho_ratio, ratio);
    }
    return rep;
}

}  // namespace dlab
