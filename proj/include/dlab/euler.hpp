#pragma once

#include <map>

#include "dlab/density.hpp"
#include "dlab/real.hpp"

namespace dlab {

struct EulerProductEstimate {
    u64 p0 = 0;           // prime cutoff
    Real value;           // estimate of C
    Real tail_bound;      // empirical-constant bound on the truncation error
    double measured_coeff = 0;  // measured c with |h_p - 1| <= c p^{-(2-2/k)}
    int max_depth = 0;          // deepest nu-truncation used
};

/* The Euler-product constant
 *   C = prod_p ( sum_nu varrho(p^nu) tau_{k-1}(p^nu) / p^nu ) (1 - 1/p)^{k-1}
 * evaluated as kappa_K^{k-1} times an absolutely convergent correction
 * product, where kappa_K is the residue of the Dedekind zeta function
 * (class number formula; the raw partial product converges only
 * conditionally and cannot meet a power-law stabilization bound). */
class EulerProduct {
  public:
    explicit EulerProduct(LocalDensity& dens) : dens_(dens) {}

    struct FactorDetail {
        Real factor;       // S_p * (1 - 1/p)^{k-1}, the literal local factor
        Real h_factor;     // S_p * (1 - p^{-f})^{r(k-1)}, the corrected one
        Rat series_head;   // exact partial sum of S_p
        int depth = 0;     // nu truncation depth
        Real series_tail;  // bound on the dropped series tail
    };

    Real euler_factor(u64 p);
    const FactorDetail& factor_detail(u64 p);

    Real zeta_residue();  // 2^{r1} (2 pi)^{r2} h Reg / (w sqrt|d|)
    Real regulator();

    EulerProductEstimate constant_C(u64 p0);
    // literal partial product of eq-(C) factors (diagnostic; converges slowly)
    Real raw_partial_product(u64 p0);

    Real main_term(double volR, i64 X, const Real& C) const;

    static Int residue_coefficient_numerator(int k, int j);  // (k-j)^{k-1}
    static Rat residue_coefficient(int k, int j);            // over (k-1)!
    static bool binomial_identity_check(int k);

  private:
    LocalDensity& dens_;
    std::map<u64, FactorDetail> cache_;
};

}  // namespace dlab
