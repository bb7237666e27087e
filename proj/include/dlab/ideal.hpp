#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "dlab/field.hpp"
#include "dlab/linalg.hpp"

namespace dlab {

// Prime ideal above p given by a degree-f irreducible factor g of the
// minimal polynomial mod p: the ideal (p, g(theta)) with ramification e.
struct PrimeIdeal {
    u64 p = 0;
    int e = 1, f = 1;
    int index = 0;          // position among the primes above p (g sorted)
    std::vector<u64> gpoly; // coefficients of g, in [0, p)
    IntMat hnf;             // canonical upper-triangular ideal basis
    Int norm;               // p^f
};

struct SplitInfo {
    u64 p = 0;
    int e = 1, f = 1, r = 1;
    std::vector<PrimeIdeal> primes;
};

// Integral ideal as the canonical HNF basis of its lattice in omega
// coordinates; equality of ideals is equality of matrices.
struct IdealHnf {
    IntMat H;
    Int norm;
    bool operator==(const IdealHnf& o) const { return H == o.H; }
    bool operator<(const IdealHnf& o) const {
        if (norm != o.norm) return norm < o.norm;
        return H.a < o.H.a;
    }
};

struct PrimeFactor {
    u64 p = 0;
    int index = 0;
    int fdeg = 1;
    int exp = 0;
    bool operator==(const PrimeFactor&) const = default;
};

struct FactoredIdeal {
    std::vector<PrimeFactor> factors;  // sorted by (p, index), exp >= 1
    Int norm = 1;

    bool is_unit() const { return factors.empty(); }
    int exponent_of(u64 p, int index) const;
};

bool factored_divides(const FactoredIdeal& a, const FactoredIdeal& b);  // a | b

// Signed measure mu_n on ideals expressing 1_{n | Nq} as a combination of
// ideal divisibility indicators.
struct MuCoefficients {
    Int n;
    struct Entry {
        FactoredIdeal ideal;
        IdealHnf hnf;
        long coeff;
    };
    std::vector<Entry> entries;  // nonzero coefficients only
};

struct StarSharpFlat {
    Int star, sharp, flat;
};

/* Arithmetic of integral ideals over a fixed field. Splitting results and
 * prime-power lattices are cached; insertion is mutex-guarded so concurrent
 * lookups are safe. */
class IdealArith {
  public:
    explicit IdealArith(const FieldSpec& F, u64 factor_seed = 0x5eed5eed);

    const FieldSpec& field() const { return F_; }

    const SplitInfo& split_prime(u64 p);
    bool is_degree_one_prime(u64 p);  // residue degree 1 above p

    IdealHnf unit_ideal() const;
    IdealHnf ideal_from_generators(const std::vector<AlgInt>& gens) const;
    IdealHnf ideal_mul(const IdealHnf& a, const IdealHnf& b) const;
    IdealHnf prime_power(u64 p, int index, int e);
    IdealHnf hnf_of(const FactoredIdeal& I);
    IdealHnf principal_ideal(const AlgInt& g) const;

    bool divides(const IdealHnf& n, const AlgInt& x) const;
    bool ideal_divides(const IdealHnf& a, const IdealHnf& b) const;  // a | b

    std::vector<std::pair<u64, int>> factor_integer(const Int& n);

    Int a_K(const Int& n);
    std::vector<FactoredIdeal> ideals_of_norm(const Int& n);
    // all ideals of norm in [2, N] plus optionally the unit ideal; sorted by
    // (norm, factor key)
    std::vector<FactoredIdeal> ideals_of_norm_upto(i64 N, bool include_unit = false);

    StarSharpFlat star_sharp_flat(const Int& n);

    MuCoefficients mu_coefficients(const Int& n);
    // local construction at a single prime power (closed form from the
    // product-of-chains Moebius function)
    MuCoefficients mu_coefficients_prime_power(u64 p, int alpha);
    // independent test oracle; triangular solve over the divisors of
    // lcm{q : Nq = n*}; practical for small n only
    MuCoefficients mu_coefficients_bruteforce(const Int& n);

    // balanced generator of a principal ideal (class number 1)
    AlgInt principal_generator(const IdealHnf& n);

  private:
    const FieldSpec& F_;
    u64 seed_;
    std::mutex mu_;
    std::map<u64, SplitInfo> splits_;
    std::map<std::tuple<u64, int, int>, IdealHnf> prime_powers_;
    std::vector<u64> small_primes_;

    SplitInfo compute_split(u64 p) const;
    void ensure_primes(u64 upto);
};

}  // namespace dlab
