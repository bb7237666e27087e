#pragma once

#include <mpfr.h>

#include <string>

#include "dlab/numeric.hpp"

namespace dlab {

// Thin RAII wrapper around mpfr_t at a fixed working precision. All
// operations round to nearest, so results are bit-stable across runs.
class Real {
  public:
    static constexpr mpfr_prec_t kPrec = 256;

    Real() { mpfr_init2(v_, kPrec), mpfr_set_zero(v_, 1); }
    explicit Real(double d) { mpfr_init2(v_, kPrec), mpfr_set_d(v_, d, MPFR_RNDN); }
    explicit Real(long n) { mpfr_init2(v_, kPrec), mpfr_set_si(v_, n, MPFR_RNDN); }
    explicit Real(const Int& z) { mpfr_init2(v_, kPrec), mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
    explicit Real(const Rat& q) { mpfr_init2(v_, kPrec), mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, kPrec), mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, kPrec), mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }

    // decimal string with the given number of significant digits
    std::string str(int digits = 40) const;

    friend Real operator+(const Real& a, const Real& b) {
        Real r;
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r;
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r;
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r;
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    Real operator-() const {
        Real r;
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

    static Real pi() {
        Real r;
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

  private:
    mpfr_t v_;
};

Real rsqrt(const Real& a);
Real rlog(const Real& a);
Real rexp(const Real& a);
Real rabs(const Real& a);
Real rpow_ui(const Real& a, unsigned long e);
Real rhypot(const Real& a, const Real& b);

struct RComplex {
    Real re, im;

    RComplex() = default;
    RComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    friend RComplex operator+(const RComplex& a, const RComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RComplex operator-(const RComplex& a, const RComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RComplex operator*(const RComplex& a, const RComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RComplex operator/(const RComplex& a, const RComplex& b) {
        Real n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    Real abs() const { return rhypot(re, im); }
};

}  // namespace dlab
