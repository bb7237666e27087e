#pragma once

#include <map>
#include <mutex>

#include "dlab/ideal.hpp"

namespace dlab {

enum class Provenance {
    kExact,
    kDirectCount,
    kLatticeDeterminant,
    kMultiplicativeAssembly,
    kTruncated,
    kMeasuredConstant,
};

const char* provenance_name(Provenance p);

struct DensityValue {
    Rat value;
    Provenance prov = Provenance::kExact;
};

// Barrett reduction for a fixed modulus m < 2^32; products of two residues
// fit u64 and reduce without hardware division.
struct BarrettU32 {
    u64 m = 1, magic = 0;
    explicit BarrettU32(u64 modulus) : m(modulus) {
        DLAB_CHECK(m > 0 && m < (1ull << 32), "BarrettU32 modulus range");
        magic = (u64)(((u128)1 << 64) / m);  // floor(2^64 / m)
    }
    // q = (prod * magic) >> 64 underestimates prod/m by at most 2
    u64 reduce(u64 prod) const {
        u64 q = (u64)(((u128)prod * magic) >> 64);
        u64 r = prod - q * m;
        while (r >= m) r -= m;
        return r;
    }
    u64 mulmod(u64 a, u64 b) const { return reduce(a * b); }
};

struct DensityBoundReport {
    u64 pmax = 0;
    // max of varrho(p^l) / p^[l/k] over l <= 2k (prime-power density bound)
    double prime_power_ratio = 0;
    u64 prime_power_argmax_p = 0;
    int prime_power_argmax_l = 0;
    // max of |varrho(p) - k| * p^(1 - 1/k) over degree-one p
    double split_deviation = 0;
    u64 split_argmax_p = 0;
    // max of varrho(p) * p^(1 - 2/k) over non-degree-one p
    double nonsplit_ratio = 0;
    u64 nonsplit_argmax_p = 0;
    // max of rho(n) / (Nn)^(1/k) over ideals of norm <= rho_norm_bound
    double rho_ratio = 0;
    i64 rho_norm_bound = 0;
    bool varrho_p_less_than_p = true;  // varrho(p) < p for all tested p
};

/* Local densities rho (on ideals) and varrho (on integers), with the exact
 * determinant route, literal counting routes, the multiplicative assembly
 * through mu_n, and the primitive Hensel count. */
class LocalDensity {
  public:
    explicit LocalDensity(IdealArith& ia) : ia_(ia) {}

    IdealArith& ideals() { return ia_; }
    const FieldSpec& field() const { return ia_.field(); }

    // rho(n) = Nn / det(Z^{k-1} cap n), exact rational; cached by HNF
    DensityValue rho_ideal(const IdealHnf& n);
    // the (k-1)x(k-1) HNF basis of Z^{k-1} cap n
    IntMat coordinate_sublattice(const IdealHnf& n) const;
    // literal count of eq-(rho) solutions; budget bounds (Nn)^(k-1)
    Int rho_direct_count(const IdealHnf& n, u64 budget);

    // literal solution counts of f == 0 mod m over (Z/m)^{k-1}
    u64 count_f_zero_serial(u64 m) const;   // plain reference loops
    u64 count_f_zero(u64 m) const;          // Horner kernel, OpenMP

    DensityValue varrho_direct(u64 n, u64 budget = 100000000ull);
    DensityValue varrho_direct_serial(u64 n, u64 budget = 100000000ull);
    // literal at prime powers, glued by CRT; handles the composite range the
    // literal budget cannot reach
    DensityValue varrho_crt(u64 n, u64 budget = 200000000ull);
    DensityValue varrho_assembled(u64 n);
    Rat varrho_assembled_prime_power(u64 p, int alpha);

    // primitive solution count of p^alpha | f(x) with gcd(x, p) = 1
    Int varrho_star(u64 p, int alpha, u64 brute_budget = 1000000ull);
    Int varrho_star_brute(u64 p, int alpha);  // test oracle

    DensityBoundReport check_density_bounds(u64 pmax, i64 rho_norm_bound = 2000);

  private:
    IdealArith& ia_;
    std::mutex mu_;
    std::map<IdealHnf, Rat> rho_cache_;
    std::map<std::pair<u64, int>, Rat> varrho_pp_cache_;

    // #solutions of g == 0 mod p^beta (recursive Hensel descent)
    Int hensel_count(const SparsePoly& g, u64 p, int beta, u64 brute_budget, int depth);
};

}  // namespace dlab
