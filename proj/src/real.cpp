#include "dlab/real.hpp"

namespace dlab {

std::string Real::str(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string dig = neg ? mant.substr(1) : mant;
    // d.ddd...e<exp>, exponent relative to a single leading digit
    std::string out = (neg ? "-" : "");
    out += dig.substr(0, 1);
    if (dig.size() > 1) out += "." + dig.substr(1);
    out += "e" + std::to_string((long)e - 1);
    return out;
}

Real rsqrt(const Real& a) {
    Real r;
    mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real rlog(const Real& a) {
    Real r;
    mpfr_log(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real rexp(const Real& a) {
    Real r;
    mpfr_exp(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real rabs(const Real& a) {
    Real r;
    mpfr_abs(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real rpow_ui(const Real& a, unsigned long e) {
    Real r;
    mpfr_pow_ui(r.get(), a.get(), e, MPFR_RNDN);
    return r;
}

Real rhypot(const Real& a, const Real& b) {
    Real r;
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

}  // namespace dlab
