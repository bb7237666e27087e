#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dlab/numeric.hpp"

namespace dlab {

// Sparse multivariate polynomial with exact integer coefficients.
// Exponent vectors have fixed length nvars; terms are kept sorted and
// coefficient-free of zeros.
struct SparsePoly {
    int nvars = 0;
    std::vector<std::pair<std::vector<int>, Int>> terms;

    static SparsePoly zero(int nvars);
    static SparsePoly constant(int nvars, const Int& c);
    static SparsePoly variable(int nvars, int i);

    void normalize();
    bool is_zero() const { return terms.empty(); }
    int total_degree() const;

    SparsePoly operator+(const SparsePoly& o) const;
    SparsePoly operator-(const SparsePoly& o) const;
    SparsePoly operator*(const SparsePoly& o) const;
    SparsePoly operator*(const Int& s) const;

    SparsePoly derivative(int var) const;

    Int eval(const std::vector<Int>& x) const;
    u64 eval_mod(const std::vector<u64>& x, u64 m) const;

    // P(a + s * z) expanded as a polynomial in z.
    SparsePoly shift_scaled(const std::vector<Int>& a, const Int& s) const;

    // divide every coefficient by d (must be exact)
    SparsePoly divided_by(const Int& d) const;

    Int max_abs_coeff() const;
};

// Univariate polynomial over F_p, p prime (fits u64). Coefficients c[i] for
// x^i, trimmed so c.back() != 0 unless the polynomial is zero.
struct ModPoly {
    u64 p = 2;
    std::vector<u64> c;

    int deg() const { return (int)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    void trim();
    static ModPoly from_coeffs(u64 p, std::vector<u64> coeffs);
    static ModPoly x(u64 p);
    static ModPoly constant(u64 p, u64 v);
};

ModPoly pmul(const ModPoly& a, const ModPoly& b);
ModPoly pmod(const ModPoly& a, const ModPoly& b);
ModPoly pdiv_exact(const ModPoly& a, const ModPoly& b);  // requires b | a
ModPoly pgcd(ModPoly a, ModPoly b);                      // monic gcd
ModPoly padd(const ModPoly& a, const ModPoly& b);
ModPoly psub(const ModPoly& a, const ModPoly& b);
ModPoly pmonic(const ModPoly& a);
ModPoly pderiv(const ModPoly& a);
ModPoly ppowmod(const ModPoly& base, const Int& e, const ModPoly& mod);

// Full factorization of a monic polynomial over F_p into monic irreducibles
// with multiplicities, sorted canonically. Deterministic for a fixed seed.
std::vector<std::pair<ModPoly, int>> factor_mod_p(const ModPoly& f, u64 seed);

// Smallest d >= 1 such that f (monic, any multiplicities) has an irreducible
// factor of degree d. Cheap splitting-type probe used for large p.
int min_factor_degree(const ModPoly& f);

}  // namespace dlab
