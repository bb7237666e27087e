#pragma once

#include <functional>

#include "dlab/lattice.hpp"

namespace dlab {

/* Complete factorizations of every integer in [lo, hi], from a segmented
 * sieve by primes <= sqrt(hi). Entries are packed (prime << 6 | exponent). */
struct DivisorWindow {
    i64 lo = 1, hi = 0;
    std::vector<std::uint32_t> offsets;   // per integer: start into entries
    std::vector<unsigned char> counts;    // per integer: number of entries
    std::vector<u64> entries;

    bool contains(i64 n) const { return n >= lo && n <= hi; }
    u64 tau(int k, i64 n) const;  // tau_k(n) from the exponent list
    void factors(i64 n, std::vector<std::pair<u64, int>>& out) const;
    int omega(i64 n) const { return counts[(size_t)(n - lo)]; }
};

DivisorWindow sieve_window(i64 lo, i64 hi, u64 max_span = (1ull << 22));

// tau_k from an explicit factorization
u64 tau_from_factors(int k, const std::vector<std::pair<u64, int>>& f);
u64 tau_pp(int k, int e);  // tau_k(p^e) = binom(e+k-1, k-1), exact in u64

// enumerate divisors d <= bound of the factored integer
void for_each_divisor(const std::vector<std::pair<u64, int>>& f, u64 bound,
                      const std::function<void(u64)>& fn);

// M(R_X) = sum of tau_k(f(x)) over x in R_X cap Z^{k-1}
Int m_exact(const FieldSpec& F, const Region& region, i64 X,
            u64 segment = (1ull << 22), bool parallel = true);
Int m_exact_serial(const FieldSpec& F, const Region& region, i64 X,
                   u64 segment = (1ull << 22));

// sharp-cutoff decomposition of tau_k(n) at threshold y:
// tau_k(n) = all_small + sum_j (-1)^(j-1) binom(k,j) t[j]
struct HyperbolaTerms {
    int k = 0;
    i64 n = 0, y = 0;
    u64 all_small = 0;
    std::vector<u64> t;  // t[j], 1 <= j <= k (index 0 unused)
    u64 tau = 0;         // tau_k(n) for reference
    i64 reconstruct() const;
};
HyperbolaTerms hyperbola_decompose(int k, i64 n, i64 y);
HyperbolaTerms hyperbola_decompose(int k, i64 n, i64 y,
                                   const std::vector<std::pair<u64, int>>& fac);

// scale-aware terms: Mhat_j(n) counts factorizations n_1..n_k = n with
// n_2..n_k <= 2X^{k-1}/Delta and n_2..n_j > X*Delta (n_1 free); the
// compensation tracks exactly what dropping the n_1 > X*Delta condition and
// the boundary range absorb
struct ScaleDecomposition {
    int k = 0;
    i64 n = 0, X = 0, delta = 0;
    std::vector<i64> mhat;  // index j = 1..k-1 (index 0 unused)
    i64 compensation = 0;   // tau_k(n) - sum_j (-1)^(j-1) binom(k,j) mhat[j]
    u64 boundary_count = 0; // tuples with n_2..n_k in [X^{k-1}/Delta, 2X^{k-1}]
    u64 tau = 0;
};
ScaleDecomposition scale_decompose(int k, i64 n, i64 X, i64 delta,
                                   const std::vector<std::pair<u64, int>>& fac);

// M_j and E of the sharp-cutoff decomposition, summed over the region
Int mj_empirical(const FieldSpec& F, const Region& region, i64 X, i64 delta, int j,
                 bool parallel = true);
Int e_empirical(const FieldSpec& F, const Region& region, i64 X, i64 delta,
                bool parallel = true);

// sum of F(|N(v)|) over 0 != v in Z^{k-1}, |v| <= V, for a multiplicative F
// given on prime powers; ratio against V^{k-1} (log V)^{k-1}
struct WolkeResult {
    Int sum;
    double ratio = 0;
    u64 points = 0;
};
WolkeResult wolke_average(IdealArith& ia, i64 V,
                          const std::function<u64(u64 p, int e)>& F_pp,
                          bool parallel = true, u64 point_budget = 60000000ull);

// the Corollary's F: tau_k on prime powers with residue degree one, else 0
std::function<u64(u64, int)> corollary_F(IdealArith& ia);

}  // namespace dlab
