#include "dlab/euler.hpp"

#include <algorithm>
#include <cmath>

#include "dlab/divisor.hpp"

namespace dlab {

namespace {

Real rat_to_real(const Rat& q) { return Real(q); }

Real pow_real(const Real& base, int e) {
    Real r(1.0);
    for (int i = 0; i < e; i++) r = r * base;
    return r;
}

}  // namespace

const EulerProduct::FactorDetail& EulerProduct::factor_detail(u64 p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;

    const FieldSpec& F = dens_.field();
    const int k = F.k;
    const SplitInfo& sp = dens_.ideals().split_prime(p);

    // S_p = sum_nu varrho(p^nu) tau_{k-1}(p^nu) p^-nu, truncated once the
    // rigorous geometric tail drops below 2^-84. The term bound uses the
    // prime-power density bound varrho(p^l) <= c * p^[l/k] with the measured
    // constant folded into the running maximum.
    Rat head(1);
    double c_meas = 1.0;
    double logp = std::log((double)p);
    int nu = 0;
    double tail = 1e300;
    while (true) {
        nu++;
        Rat rho_pp = dens_.varrho_assembled_prime_power(p, nu);
        Rat term = rho_pp * Rat((long)tau_pp(k - 1, nu)) /
                   Rat(pow_int(Int((long)p), nu));
        head += term;
        double ratio = rho_pp.get_d() / std::pow((double)p, nu / k);
        c_meas = std::max(c_meas, ratio);
        // tail bound: sum_{m > nu} c * tau_{k-1}(p^m) p^{m/k - m}
        double q = std::pow((double)p, 1.0 / k - 1.0);
        double first = c_meas * (double)tau_pp(k - 1, nu + 1) *
                       std::exp((double)(nu + 1) * (1.0 / k - 1.0) * logp);
        double growth = std::pow((double)(nu + 2) / (nu + 1), k - 2) * q;
        if (growth < 0.95) {
            tail = first / (1.0 - growth);
            if (tail < std::ldexp(1.0, -84)) break;
        }
        DLAB_CHECK(nu < 512, "euler factor truncation did not converge");
    }

    FactorDetail d;
    d.series_head = head;
    d.depth = nu;
    d.series_tail = Real(tail);
    Real sp_real = rat_to_real(head);
    Real one(1.0), pr((long)p);
    d.factor = sp_real * pow_real(one - one / pr, k - 1);
    Real pf = pow_real(pr, sp.f);
    d.h_factor = sp_real * pow_real(one - one / pf, sp.r * (k - 1));
    return cache_.emplace(p, std::move(d)).first->second;
}

Real EulerProduct::euler_factor(u64 p) { return factor_detail(p).factor; }

Real EulerProduct::regulator() {
    const FieldSpec& F = dens_.field();
    const int k = F.k;
    int rank = (int)F.units.size();
    if (rank == 0) return Real(1.0);

    // one log column per archimedean place, weighted 1 (real) or 2 (complex)
    std::vector<int> place_root;  // representative root index
    std::vector<int> weight;
    std::vector<bool> used(k, false);
    for (int i = 0; i < k; i++) {
        if (used[i]) continue;
        if (rabs(F.roots[i].im).to_double() < 1e-30) {
            place_root.push_back(i);
            weight.push_back(1);
            used[i] = true;
        } else {
            // pair with its conjugate
            int best = -1;
            double bd = 1e300;
            for (int j = i + 1; j < k; j++) {
                if (used[j]) continue;
                double d = std::fabs(F.roots[i].re.to_double() - F.roots[j].re.to_double()) +
                           std::fabs(F.roots[i].im.to_double() + F.roots[j].im.to_double());
                if (d < bd) {
                    bd = d;
                    best = j;
                }
            }
            DLAB_CHECK(best >= 0 && bd < 1e-20, "conjugate pairing failed");
            used[i] = used[best] = true;
            place_root.push_back(i);
            weight.push_back(2);
        }
    }
    DLAB_CHECK((int)place_root.size() == rank + 1, "unit rank vs places mismatch");

    // rank x rank log matrix, dropping the last place
    std::vector<std::vector<Real>> M(rank, std::vector<Real>(rank));
    for (int t = 0; t < rank; t++) {
        auto emb = F.embeddings(F.units[t]);
        for (int c = 0; c < rank; c++) {
            Real lg = rlog(emb.values[place_root[c]].abs());
            M[t][c] = Real((long)weight[c]) * lg;
        }
    }
    // determinant by Gaussian elimination
    Real det(1.0);
    for (int i = 0; i < rank; i++) {
        int piv = i;
        for (int j = i + 1; j < rank; j++)
            if (rabs(M[j][i]) > rabs(M[piv][i])) piv = j;
        if (piv != i) {
            std::swap(M[i], M[piv]);
            det = -det;
        }
        det = det * M[i][i];
        for (int j = i + 1; j < rank; j++) {
            Real f = M[j][i] / M[i][i];
            for (int l = i; l < rank; l++) M[j][l] = M[j][l] - f * M[i][l];
        }
    }
    return rabs(det);
}

Real EulerProduct::zeta_residue() {
    const FieldSpec& F = dens_.field();
    int r1 = F.num_real_roots, r2 = (F.k - r1) / 2;
    Real two_pi = Real(2.0) * Real::pi();
    Real num = pow_real(Real(2.0), r1) * pow_real(two_pi, r2) *
               Real((long)F.class_number) * regulator();
    Int dabs = abs(F.discriminant);
    Real den = Real((long)F.torsion_order) * rsqrt(Real(dabs));
    return num / den;
}

EulerProductEstimate EulerProduct::constant_C(u64 p0) {
    const FieldSpec& F = dens_.field();
    const int k = F.k;
    DLAB_CHECK(p0 >= 100, "constant_C needs p0 >= 100");

    Real prod(1.0);
    double c_h = 0.0;
    int max_depth = 0;
    double series_tail_acc = 0.0;
    double s = 2.0 - 2.0 / k;  // correction factors are 1 + O(p^-s)
    for (u64 p : primes_upto(p0)) {
        const FactorDetail& d = factor_detail(p);
        prod = prod * d.h_factor;
        max_depth = std::max(max_depth, d.depth);
        series_tail_acc += d.series_tail.to_double();
        double dev = std::fabs(d.h_factor.to_double() - 1.0) * std::pow((double)p, s);
        c_h = std::max(c_h, dev);
    }
    Real kappa = zeta_residue();
    Real C = pow_real(kappa, k - 1) * prod;

    // sum_{p > p0} c p^-s <= c * p0^{1-s} / ((s-1) log p0)
    double tail_log =
        c_h * std::pow((double)p0, 1.0 - s) / ((s - 1.0) * std::log((double)p0));
    double tail = C.to_double() * (std::exp(1.05 * tail_log) - 1.0) + series_tail_acc;

    EulerProductEstimate est;
    est.p0 = p0;
    est.value = C;
    est.tail_bound = Real(tail);
    est.measured_coeff = c_h;
    est.max_depth = max_depth;
    return est;
}

Real EulerProduct::raw_partial_product(u64 p0) {
    Real prod(1.0);
    for (u64 p : primes_upto(p0)) prod = prod * factor_detail(p).factor;
    return prod;
}

Real EulerProduct::main_term(double volR, i64 X, const Real& C) const {
    const int k = dens_.field().k;
    if (X <= 1) return Real(0.0);
    Real logXk = rlog(Real((long)X)) * Real((long)k);
    Int fact = 1;
    for (int i = 2; i <= k - 1; i++) fact *= i;
    Real r = C * Real(volR) / Real(fact);
    r = r * pow_real(Real((long)X), k - 1);
    r = r * pow_real(logXk, k - 1);
    return r;
}

Int EulerProduct::residue_coefficient_numerator(int k, int j) {
    DLAB_CHECK(1 <= j && j <= k - 1, "residue coefficient range");
    return pow_int(Int(k - j), k - 1);
}

Rat EulerProduct::residue_coefficient(int k, int j) {
    Int fact = 1;
    for (int i = 2; i <= k - 1; i++) fact *= i;
    return make_rat(residue_coefficient_numerator(k, j), fact);
}

bool EulerProduct::binomial_identity_check(int k) {
    // sum_{j=1}^{k-1} (-1)^{j-1} binom(k,j) (k-j)^{k-1} = k^{k-1}
    Int s = 0;
    for (int j = 1; j <= k - 1; j++) {
        Int term = binom_int(k, j) * pow_int(Int(k - j), k - 1);
        if (j % 2 == 1)
            s += term;
        else
            s -= term;
    }
    return s == pow_int(Int(k), k - 1);
}

}  // namespace dlab
