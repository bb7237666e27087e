#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlab {

using Int = mpz_class;
using Rat = mpq_class;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Invariant violations are bugs, not data errors.
#define DLAB_CHECK(cond, msg)                                        \
    do {                                                             \
        if (!(cond)) throw std::logic_error(std::string("check failed: ") + (msg)); \
    } while (0)

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& m) : std::runtime_error(m) {}
};
struct FieldDataError : std::runtime_error {
    explicit FieldDataError(const std::string& m) : std::runtime_error(m) {}
};

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int pow_int(const Int& base, unsigned e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline u64 pow_u64(u64 base, unsigned e) {
    u64 r = 1;
    while (e--) r *= base;
    return r;
}

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 powmod_u64(u64 base, u64 e, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        e >>= 1;
    }
    return r;
}

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = (u64)std::sqrt((double)n);
    while (r > 0 && r * r > n) r--;
    while ((r + 1) * (r + 1) <= n) r++;
    return r;
}

// binom(n, r) as exact Int
inline Int binom_int(unsigned n, unsigned r) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, r);
    return b;
}

// tau_k(p^a) = binom(a + k - 1, k - 1); fits u64 for all a <= 64, k <= 16
inline u64 tau_prime_power(unsigned k, unsigned a) {
    Int b = binom_int(a + k - 1, k - 1);
    DLAB_CHECK(b.fits_ulong_p(), "tau_prime_power overflow");
    return b.get_ui();
}

// FNV-1a over a byte string; used for config digests.
inline u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// simple primes table
std::vector<u64> primes_upto(u64 n);

}  // namespace dlab
