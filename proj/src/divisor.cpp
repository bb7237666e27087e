#include "dlab/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace dlab {

// ------------------------------------------------------------------ sieve

u64 tau_pp(int k, int e) {
    // binom(e + k - 1, k - 1) as a running exact product
    u64 r = 1;
    for (int i = 1; i <= k - 1; i++) {
        r *= (u64)(e + i);
        r /= (u64)i;
    }
    return r;
}

u64 tau_from_factors(int k, const std::vector<std::pair<u64, int>>& f) {
    u64 r = 1;
    for (auto& [p, e] : f) r *= tau_pp(k, e);
    return r;
}

DivisorWindow sieve_window(i64 lo, i64 hi, u64 max_span) {
    DLAB_CHECK(lo >= 1 && lo <= hi, "sieve_window bounds");
    u64 span = (u64)(hi - lo + 1);
    if (span > max_span) throw BudgetError("sieve_window: segment too large");

    DivisorWindow W;
    W.lo = lo;
    W.hi = hi;
    auto primes = primes_upto(isqrt_u64((u64)hi));

    // pass 1: number of distinct small primes dividing each integer,
    // plus one slot for a possible leftover prime factor
    std::vector<std::uint32_t> slots(span, 1);
    for (u64 p : primes) {
        i64 start = ((lo + (i64)p - 1) / (i64)p) * (i64)p;
        for (i64 m = start; m <= hi; m += (i64)p) slots[(size_t)(m - lo)]++;
    }
    W.offsets.resize(span + 1);
    std::uint32_t acc = 0;
    for (u64 i = 0; i < span; i++) {
        W.offsets[i] = acc;
        acc += slots[i];
    }
    W.offsets[span] = acc;
    W.entries.assign(acc, 0);
    W.counts.assign(span, 0);

    // pass 2: divide out exponents
    std::vector<i64> rem(span);
    for (u64 i = 0; i < span; i++) rem[i] = lo + (i64)i;
    for (u64 p : primes) {
        i64 start = ((lo + (i64)p - 1) / (i64)p) * (i64)p;
        for (i64 m = start; m <= hi; m += (i64)p) {
            size_t i = (size_t)(m - lo);
            int e = 0;
            while (rem[i] % (i64)p == 0) {
                rem[i] /= (i64)p;
                e++;
            }
            W.entries[W.offsets[i] + W.counts[i]++] = (p << 6) | (u64)e;
        }
    }
    for (u64 i = 0; i < span; i++) {
        if (rem[i] > 1)
            W.entries[W.offsets[i] + W.counts[i]++] = (((u64)rem[i]) << 6) | 1u;
    }
    return W;
}

u64 DivisorWindow::tau(int k, i64 n) const {
    DLAB_CHECK(contains(n), "tau: value outside window");
    size_t i = (size_t)(n - lo);
    u64 r = 1;
    for (unsigned t = 0; t < counts[i]; t++) {
        int e = (int)(entries[offsets[i] + t] & 63u);
        r *= tau_pp(k, e);
    }
    return r;
}

void DivisorWindow::factors(i64 n, std::vector<std::pair<u64, int>>& out) const {
    DLAB_CHECK(contains(n), "factors: value outside window");
    out.clear();
    size_t i = (size_t)(n - lo);
    for (unsigned t = 0; t < counts[i]; t++) {
        u64 e = entries[offsets[i] + t];
        out.push_back({e >> 6, (int)(e & 63u)});
    }
}

void for_each_divisor(const std::vector<std::pair<u64, int>>& f, u64 bound,
                      const std::function<void(u64)>& fn) {
    auto rec = [&](auto&& self, size_t i, u64 d) -> void {
        if (i == f.size()) {
            fn(d);
            return;
        }
        u64 cur = d;
        for (int e = 0; e <= f[i].second; e++) {
            self(self, i + 1, cur);
            if (e == f[i].second) break;
            if (cur > bound / f[i].first) break;
            cur *= f[i].first;
        }
    };
    rec(rec, 0, 1);
}

// ---------------------------------------------------------------- M exact

namespace {

Int m_exact_impl(const FieldSpec& F, const Region& region, i64 X, u64 segment,
                 bool parallel) {
    const int k = F.k;
    std::vector<i64> values = region_f_values(F, region, X, parallel);
    if (values.empty()) return 0;
    i64 lo = values.front(), hi = values.back();
    i64 nseg = (hi - lo) / (i64)segment + 1;

    std::vector<u64> partial((size_t)nseg, 0);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (i64 s = 0; s < nseg; s++) {
        i64 a = lo + s * (i64)segment;
        i64 b = std::min<i64>(a + (i64)segment - 1, hi);
        DivisorWindow W = sieve_window(a, b, segment);
        auto first = std::lower_bound(values.begin(), values.end(), a);
        auto last = std::upper_bound(values.begin(), values.end(), b);
        u64 sum = 0;
        for (auto it = first; it != last; ++it) sum += W.tau(k, *it);
        partial[(size_t)s] = sum;
    }
    Int total = 0;
    for (u64 v : partial) total += Int(v);
    return total;
}

}  // namespace

Int m_exact(const FieldSpec& F, const Region& region, i64 X, u64 segment, bool parallel) {
    return m_exact_impl(F, region, X, segment, parallel);
}

Int m_exact_serial(const FieldSpec& F, const Region& region, i64 X, u64 segment) {
    return m_exact_impl(F, region, X, segment, false);
}

// ------------------------------------------------------------- hyperbola

namespace {

// divisor-lattice DP helpers over the sorted divisor list of n
struct DivisorLattice {
    std::vector<u64> divs;                     // sorted
    std::vector<std::vector<int>> quot_index;  // quot_index[i][j]: index of divs[i]/divs[j] or -1

    explicit DivisorLattice(const std::vector<std::pair<u64, int>>& fac) {
        for_each_divisor(fac, ~0ull, [&](u64 d) { divs.push_back(d); });
        std::sort(divs.begin(), divs.end());
        int n = (int)divs.size();
        quot_index.assign(n, std::vector<int>(n, -1));
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) {
                if (divs[i] % divs[j]) continue;
                u64 q = divs[i] / divs[j];
                auto it = std::lower_bound(divs.begin(), divs.end(), q);
                quot_index[i][j] = (int)(it - divs.begin());
            }
    }
    int index_of(u64 d) const {
        auto it = std::lower_bound(divs.begin(), divs.end(), d);
        DLAB_CHECK(it != divs.end() && *it == d, "divisor index");
        return (int)(it - divs.begin());
    }
};

// count[j][m] = ordered j-tuples with product m and every entry satisfying
// the predicate
std::vector<std::vector<u64>> tuple_dp(const DivisorLattice& L, int depth,
                                       const std::function<bool(u64)>& pred) {
    int n = (int)L.divs.size();
    std::vector<std::vector<u64>> dp(depth + 1, std::vector<u64>(n, 0));
    dp[0][0] = 1;  // divs[0] == 1
    std::vector<int> ok(n);
    for (int j = 0; j < n; j++) ok[j] = pred(L.divs[j]) ? 1 : 0;
    for (int d = 1; d <= depth; d++)
        for (int i = 0; i < n; i++) {
            u64 s = 0;
            for (int j = 0; j < n; j++) {
                if (!ok[j]) continue;
                int q = L.quot_index[i][j];
                if (q >= 0) s += dp[d - 1][q];
            }
            dp[d][i] = s;
        }
    return dp;
}

}  // namespace

HyperbolaTerms hyperbola_decompose(int k, i64 n, i64 y,
                                   const std::vector<std::pair<u64, int>>& fac) {
    DLAB_CHECK(n >= 1 && y >= 1 && k >= 2, "hyperbola arguments");
    HyperbolaTerms H;
    H.k = k;
    H.n = n;
    H.y = y;
    H.t.assign(k + 1, 0);
    H.tau = tau_from_factors(k, fac);

    DivisorLattice L(fac);
    int ni = L.index_of((u64)n);
    auto all = tuple_dp(L, k, [](u64) { return true; });        // tau_j
    auto small = tuple_dp(L, k, [&](u64 d) { return d <= (u64)y; });
    auto large = tuple_dp(L, k, [&](u64 d) { return d > (u64)y; });

    H.all_small = small[k][ni];
    // T_j = sum over m | n of large[j][m] * tau_{k-j}(n/m)
    for (int j = 1; j <= k; j++) {
        u64 s = 0;
        for (int m = 0; m < (int)L.divs.size(); m++) {
            int q = L.quot_index[ni][m];
            if (q >= 0 && large[j][m]) s += large[j][m] * all[k - j][q];
        }
        H.t[j] = s;
    }
    return H;
}

HyperbolaTerms hyperbola_decompose(int k, i64 n, i64 y) {
    std::vector<std::pair<u64, int>> fac;
    u64 v = (u64)n;
    for (u64 p = 2; p * p <= v; p++) {
        if (v % p) continue;
        int e = 0;
        while (v % p == 0) v /= p, e++;
        fac.push_back({p, e});
    }
    if (v > 1) fac.push_back({v, 1});
    return hyperbola_decompose(k, n, y, fac);
}

i64 HyperbolaTerms::reconstruct() const {
    i64 s = (i64)all_small;
    for (int j = 1; j <= k; j++) {
        i64 term = (i64)(binom_int(k, j).get_si()) * (i64)t[j];
        s += (j % 2 == 1) ? term : -term;
    }
    return s;
}

ScaleDecomposition scale_decompose(int k, i64 n, i64 X, i64 delta,
                                   const std::vector<std::pair<u64, int>>& fac) {
    ScaleDecomposition S;
    S.k = k;
    S.n = n;
    S.X = X;
    S.delta = delta;
    S.tau = tau_from_factors(k, fac);
    S.mhat.assign(k, 0);

    i64 y = X * delta;
    // tail bound 2X^{k-1}/Delta and boundary range [X^{k-1}/Delta, 2X^{k-1}]
    i64 xk1 = 1;
    for (int i = 0; i < k - 1; i++) xk1 *= X;
    u64 tail_cap = (u64)(2 * xk1 / delta);
    u64 brange_lo = (u64)(xk1 / delta), brange_hi = (u64)(2 * xk1);

    DivisorLattice L(fac);
    int ni = L.index_of((u64)n);
    auto all = tuple_dp(L, k, [](u64) { return true; });
    auto large = tuple_dp(L, k, [&](u64 d) { return d > (u64)y; });

    // Mhat_j = #{n_1..n_k = n : n_2..n_k <= tail_cap, n_2,..,n_j > y}
    //        = sum over m = n_2*...*n_k | n, m <= tail_cap of
    //          sum_{m' | m} large[j-1][m'] * tau_{k-j}(m/m')
    for (int j = 1; j <= k - 1; j++) {
        i64 s = 0;
        for (int m = 0; m < (int)L.divs.size(); m++) {
            if (L.divs[m] > tail_cap) continue;
            for (int mp = 0; mp < (int)L.divs.size(); mp++) {
                int q = L.quot_index[m][mp];
                if (q >= 0 && large[j - 1][mp])
                    s += (i64)large[j - 1][mp] * (i64)all[k - j][q];
            }
        }
        S.mhat[j] = s;
    }
    i64 recon = 0;
    for (int j = 1; j <= k - 1; j++) {
        i64 term = binom_int(k, j).get_si() * S.mhat[j];
        recon += (j % 2 == 1) ? term : -term;
    }
    S.compensation = (i64)S.tau - recon;
    // (n_2..n_k) tuples whose product falls in the boundary range; each
    // extends uniquely by n_1 = n / product
    S.boundary_count = 0;
    for (int m = 0; m < (int)L.divs.size(); m++) {
        if (L.divs[m] < brange_lo || L.divs[m] > brange_hi) continue;
        if (L.quot_index[ni][m] >= 0) S.boundary_count += all[k - 1][m];
    }
    return S;
}

// ------------------------------------------------------------- M_j and E

namespace {

// iterate all region values with factorizations from covering windows
template <typename Fn>
void with_region_factorizations(const FieldSpec& F, const Region& region, i64 X,
                                bool parallel, Fn&& fn) {
    std::vector<i64> values = region_f_values(F, region, X, parallel);
    if (values.empty()) return;
    DivisorWindow W = sieve_window(values.front(), values.back(), 1ull << 26);
    std::vector<std::pair<u64, int>> fac;
    for (i64 v : values) {
        W.factors(v, fac);
        fn(v, fac);
    }
}

}  // namespace

Int mj_empirical(const FieldSpec& F, const Region& region, i64 X, i64 delta, int j,
                 bool parallel) {
    const int k = F.k;
    DLAB_CHECK(j >= 1 && j <= k - 1, "mj_empirical: j out of range");
    i64 y = X * delta;
    i64 xk1 = 1;
    for (int i = 0; i < k - 1; i++) xk1 *= X;
    u64 tail_cap = (u64)(2 * xk1 / delta);

    Int total = 0;
    with_region_factorizations(F, region, X, parallel,
                               [&](i64, const std::vector<std::pair<u64, int>>& fac) {
        DivisorLattice L(fac);
        auto all = tuple_dp(L, k, [](u64) { return true; });
        auto large = tuple_dp(L, k, [&](u64 d) { return d > (u64)y; });
        // count tuples (n_2..n_k): product m | f(x), m <= tail_cap,
        // n_2..n_j > y; i.e. sum over m' (product of the j-1 large slots)
        // and t (product of the free slots), m' * t <= tail_cap
        u64 s = 0;
        for (int mp = 0; mp < (int)L.divs.size(); mp++) {
            if (!large[j - 1][mp]) continue;
            for (int t = 0; t < (int)L.divs.size(); t++) {
                if (!all[k - j][t]) continue;
                if (L.divs[mp] > tail_cap / L.divs[t]) continue;
                u64 prod = L.divs[mp] * L.divs[t];
                if (prod > tail_cap) continue;
                // m' * t must divide f(x): both divide; product divides iff
                // the exponent sums stay within f's factorization
                // check divisibility of the product
                bool ok = true;
                u64 m = prod;
                for (auto& [p, e] : fac) {
                    int c = 0;
                    while (m % p == 0) m /= p, c++;
                    if (c > e) {
                        ok = false;
                        break;
                    }
                }
                if (ok && m == 1) s += large[j - 1][mp] * all[k - j][t];
            }
        }
        total += Int(s);
    });
    return total;
}

Int e_empirical(const FieldSpec& F, const Region& region, i64 X, i64 delta, bool parallel) {
    const int k = F.k;
    i64 xk1 = 1;
    for (int i = 0; i < k - 1; i++) xk1 *= X;
    u64 lo = (u64)(xk1 / delta), hi = (u64)(2 * xk1);

    Int total = 0;
    with_region_factorizations(F, region, X, parallel,
                               [&](i64, const std::vector<std::pair<u64, int>>& fac) {
        u64 s = 0;
        for_each_divisor(fac, hi, [&](u64 d) {
            if (d < lo || d > hi) return;
            // tau_{k-1}(d) from the exponents of d within fac
            u64 t = 1, m = d;
            for (auto& [p, e] : fac) {
                int c = 0;
                while (m % p == 0) m /= p, c++;
                t *= tau_pp(k - 1, c);
            }
            s += t;
        });
        total += Int(s);
    });
    return total;
}

// ------------------------------------------------------------------ wolke

WolkeResult wolke_average(IdealArith& ia, i64 V,
                          const std::function<u64(u64, int)>& F_pp, bool parallel,
                          u64 point_budget) {
    const FieldSpec& F = ia.field();
    const int nv = F.k - 1;
    WolkeResult R;
    R.sum = 0;
    if (V < 1) return R;

    double ball = std::pow(2.0 * (double)V + 1, nv);
    if (ball > (double)point_budget)
        throw BudgetError("wolke_average: lattice ball exceeds point budget");

    FormEvaluatorI64 form(F);
    // trial-division bound: sqrt of the largest |f| on the ball
    Int sum_abs = 0;
    for (auto& t : form.terms) sum_abs += abs(Int(t.c));
    double fmax = sum_abs.get_d() * std::pow((double)V, F.k);
    auto primes = primes_upto((u64)std::sqrt(fmax) + 2);

    u64 total_points = 0;
    Int sum(0);
    std::vector<Int> partial;
#ifdef _OPENMP
    int nthreads = parallel ? omp_get_max_threads() : 1;
#else
    int nthreads = 1;
#endif
    partial.assign(nthreads, Int(0));
    std::vector<u64> pts(nthreads, 0);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (i64 top = -V; top <= V; top++) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        u64 local_sum = 0;
        u64 local_pts = 0;
        std::vector<i64> x(nv, 0);
        x[nv - 1] = top;
        i64 rem2 = V * V - top * top;
        if (rem2 < 0) continue;
        auto rec = [&](auto&& self, int pos, i64 budget2) -> void {
            if (pos < 0) {
                bool zero = true;
                for (int i = 0; i < nv; i++)
                    if (x[i]) zero = false;
                if (zero) return;
                local_pts++;
                i128 fv = form.eval(x.data());
                u64 n = fv >= 0 ? (u64)fv : (u64)(-fv);
                DLAB_CHECK(n != 0, "norm form vanished at nonzero point");
                u64 val = 1;
                u64 m = n;
                for (u64 p : primes) {
                    if (p * p > m) break;
                    if (m % p) continue;
                    int e = 0;
                    while (m % p == 0) m /= p, e++;
                    val *= F_pp(p, e);
                    if (val == 0) break;
                }
                if (val != 0 && m > 1) val *= F_pp(m, 1);
                local_sum += val;
                return;
            }
            i64 r = (i64)std::sqrt((double)budget2);
            while (r * r > budget2) r--;
            while ((r + 1) * (r + 1) <= budget2) r++;
            for (i64 v = -r; v <= r; v++) {
                x[pos] = v;
                self(self, pos - 1, budget2 - v * v);
            }
            x[pos] = 0;
        };
        rec(rec, nv - 2, rem2);
        partial[tid] += Int(local_sum);
        pts[tid] += local_pts;
    }
    for (int t = 0; t < nthreads; t++) {
        sum += partial[t];
        total_points += pts[t];
    }
    R.sum = sum;
    R.points = total_points;
    double denom = std::pow((double)V, nv) * std::pow(std::log((double)V), nv);
    R.ratio = denom > 0 ? sum.get_d() / denom : 0.0;
    return R;
}

std::function<u64(u64, int)> corollary_F(IdealArith& ia) {
    const int k = ia.field().k;
    return [&ia, k](u64 p, int e) -> u64 {
        return ia.is_degree_one_prime(p) ? tau_pp(k, e) : 0;
    };
}

}  // namespace dlab
