#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "dlab/ideal.hpp"
#include "doctest.h"

using namespace dlab;

namespace {

// splitting data for the built-ins from congruence conditions, an oracle
// independent of the factorization code
struct SplitOracle {
    int e, f, r;
};

SplitOracle cubic_oracle(u64 p) {
    if (p == 3) return {3, 1, 1};
    u64 m = p % 9;
    if (m == 1 || m == 8) return {1, 1, 3};
    return {1, 3, 1};
}

SplitOracle zeta8_oracle(u64 p) {
    if (p == 2) return {4, 1, 1};
    if (p % 8 == 1) return {1, 1, 4};
    return {1, 2, 2};
}

Int a_K_oracle(const std::string& field, u64 n) {
    Int c = 1;
    u64 m = n;
    for (u64 p = 2; p * p <= m; p++) {
        if (m % p) continue;
        int a = 0;
        while (m % p == 0) m /= p, a++;
        SplitOracle s = field == "cubic" ? cubic_oracle(p) : zeta8_oracle(p);
        if (a % s.f) return 0;
        c *= binom_int(a / s.f + s.r - 1, s.r - 1);
    }
    if (m > 1) {
        SplitOracle s = field == "cubic" ? cubic_oracle(m) : zeta8_oracle(m);
        if (s.f != 1) return 0;
        c *= s.r;
    }
    return c;
}

}  // namespace

TEST_CASE("prime splitting matches congruence oracles") {
    for (const char* name : {"cubic", "zeta8"}) {
        IdealArith ia(builtin_field(name));
        for (u64 p : primes_upto(500)) {
            const SplitInfo& s = ia.split_prime(p);
            SplitOracle o = std::string(name) == "cubic" ? cubic_oracle(p) : zeta8_oracle(p);
            INFO(name << " p=" << p);
            CHECK(s.e == o.e);
            CHECK(s.f == o.f);
            CHECK(s.r == o.r);
            CHECK(s.e * s.f * s.r == ia.field().k);
            for (auto& P : s.primes) {
                CHECK(P.e == s.e);
                CHECK(P.f == s.f);
                CHECK(P.norm == pow_int(Int((long)p), s.f));
            }
        }
    }
}

TEST_CASE("specific splittings from the worked examples") {
    IdealArith z(builtin_field("zeta8"));
    auto& s17 = z.split_prime(17);
    CHECK(s17.f == 1);
    CHECK(s17.r == 4);
    CHECK(s17.e == 1);
    auto& s3 = z.split_prime(3);
    CHECK(s3.f == 2);
    CHECK(s3.r == 2);
    IdealArith c(builtin_field("cubic"));
    auto& s2 = c.split_prime(2);
    CHECK(s2.f == 3);
    CHECK(s2.r == 1);  // theta^3 - 3 theta - 1 irreducible mod 2
}

TEST_CASE("ideal lattices are closed under the basis action") {
    IdealArith ia(builtin_field("zeta8"));
    const FieldSpec& F = ia.field();
    for (u64 p : {2ull, 3ull, 5ull, 17ull}) {
        for (auto& P : ia.split_prime(p).primes) {
            IdealHnf h{P.hnf, P.norm};
            for (int i = 0; i < F.k; i++)
                for (int j = 0; j < F.k; j++) {
                    AlgInt prod = F.mul(F.omega(i), h.H.col(j));
                    CHECK(ia.divides(h, prod));
                }
            for (int i = 0; i < F.k; i++) {
                AlgInt v = F.omega(i);
                for (auto& cc : v) cc *= h.norm;
                CHECK(ia.divides(h, v));
            }
        }
    }
}

TEST_CASE("ideals_of_norm and a_K") {
    IdealArith z(builtin_field("zeta8"));
    CHECK(z.ideals_of_norm(1).size() == 1);
    CHECK(z.a_K(1) == 1);
    CHECK(z.ideals_of_norm(3).empty());
    CHECK(z.a_K(3) == 0);
    CHECK(z.ideals_of_norm(9).size() == 2);
    CHECK(z.ideals_of_norm(17).size() == 4);

    for (const char* name : {"cubic", "zeta8"}) {
        IdealArith ia(builtin_field(name));
        for (u64 n = 1; n <= 1000; n++) {
            INFO(name << " n=" << n);
            CHECK(ia.a_K(Int((long)n)) == a_K_oracle(name, n));
        }
        for (u64 n = 2; n <= 300; n++) {
            auto ssf = ia.star_sharp_flat(Int((long)n));
            CHECK(ia.a_K(Int((long)n)) <= ia.a_K(ssf.star));
        }
    }
}

TEST_CASE("hnf product consistency with factored enumeration") {
    IdealArith ia(builtin_field("cubic"));
    std::set<std::vector<Int>> seen;
    for (auto& fi : ia.ideals_of_norm_upto(200)) {
        IdealHnf h = ia.hnf_of(fi);
        CHECK(h.norm == fi.norm);
        CHECK(seen.insert(h.H.a).second);
    }
}

TEST_CASE("star sharp flat") {
    IdealArith c(builtin_field("cubic"));
    auto r1 = c.star_sharp_flat(1);
    CHECK(r1.star == 1);
    CHECK(r1.sharp == 1);
    CHECK(r1.flat == 1);
    auto r2 = c.star_sharp_flat(2);  // inert, f = 3
    CHECK(r2.star == 8);
    CHECK(r2.sharp == 1);
    CHECK(r2.flat == 2);
    auto r17 = c.star_sharp_flat(17);
    CHECK(r17.star == 17);
    CHECK(r17.sharp == 17);
    auto r323 = c.star_sharp_flat(17 * 19);  // both split (17, 19 = +-1 mod 9)
    CHECK(r323.sharp == 17 * 19);
    CHECK(r323.star == 17 * 19);
}

TEST_CASE("mu coefficients match the brute-force solver") {
    for (const char* name : {"cubic", "zeta8"}) {
        IdealArith ia(builtin_field(name));
        for (long n = 1; n <= 24; n++) {
            MuCoefficients fast = ia.mu_coefficients(Int(n));
            MuCoefficients brute = ia.mu_coefficients_bruteforce(Int(n));
            INFO(name << " n=" << n);
            REQUIRE(fast.entries.size() == brute.entries.size());
            for (size_t i = 0; i < fast.entries.size(); i++) {
                CHECK(fast.entries[i].hnf == brute.entries[i].hnf);
                CHECK(fast.entries[i].coeff == brute.entries[i].coeff);
            }
        }
    }
}

TEST_CASE("mu split and inert structure") {
    IdealArith c(builtin_field("cubic"));
    MuCoefficients mu17 = c.mu_coefficients(17);
    CHECK(mu17.entries.size() == 7);  // nonempty subsets of 3 degree-one primes
    for (auto& e : mu17.entries) {
        int s = 0;
        bool squarefree = true;
        for (auto& pf : e.ideal.factors) {
            s += pf.exp;
            if (pf.exp > 1) squarefree = false;
        }
        CHECK(squarefree);
        CHECK(e.coeff == ((s % 2 == 1) ? 1 : -1));
    }
    MuCoefficients mu2 = c.mu_coefficients(2);
    REQUIRE(mu2.entries.size() == 1);  // inert: single entry {(p) -> 1}
    CHECK(mu2.entries[0].coeff == 1);
    CHECK(mu2.entries[0].hnf.norm == 8);
    MuCoefficients mu1 = c.mu_coefficients(1);
    REQUIRE(mu1.entries.size() == 1);
    CHECK(mu1.entries[0].hnf.norm == 1);
    CHECK(mu1.entries[0].coeff == 1);
}

TEST_CASE("mu support and bound invariants") {
    for (const char* name : {"cubic", "zeta8"}) {
        IdealArith ia(builtin_field(name));
        const int k = ia.field().k;
        for (long n = 1; n <= 40; n++) {
            MuCoefficients mu = ia.mu_coefficients(Int(n));
            auto ssf = ia.star_sharp_flat(Int(n));
            Int nk = pow_int(Int(n), k);
            int omega_n = (int)ia.factor_integer(Int(n)).size();
            Int bound = pow_int(Int(2), k * omega_n);
            for (auto& e : mu.entries) {
                CHECK(mpz_divisible_p(e.hnf.norm.get_mpz_t(), ssf.star.get_mpz_t()));
                CHECK(mpz_divisible_p(nk.get_mpz_t(), e.hnf.norm.get_mpz_t()));
                CHECK(abs(Int(e.coeff)) <= bound);
            }
        }
    }
}

TEST_CASE("divides") {
    IdealArith c(builtin_field("cubic"));
    const FieldSpec& F = c.field();
    IdealHnf unit = c.unit_ideal();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; t++) {
        AlgInt x = F.zero();
        for (auto& v : x) v = (long)(rng() % 1001) - 500;
        CHECK(c.divides(unit, x));
    }
    // degree-one prime over 17: membership is a linear congruence in the root
    auto& s = c.split_prime(17);
    REQUIRE(s.f == 1);
    for (auto& P : s.primes) {
        REQUIRE(P.gpoly.size() == 2);
        u64 root = (17 - P.gpoly[0] % 17) % 17;
        IdealHnf h{P.hnf, P.norm};
        for (int t = 0; t < 1000; t++) {
            AlgInt x = F.zero();
            for (auto& v : x) v = (long)(rng() % 201) - 100;
            Int lin = x[0] + Int((long)root) * x[1] + Int((long)(root * root % 17)) * x[2];
            bool cong = mpz_divisible_ui_p(lin.get_mpz_t(), 17) != 0;
            CHECK(c.divides(h, x) == cong);
        }
    }
    // principal rational ideal: (7) | x iff 7 divides every coordinate
    AlgInt seven = F.one();
    for (auto& v : seven) v *= 7;
    IdealHnf p7 = c.principal_ideal(seven);
    for (int t = 0; t < 200; t++) {
        AlgInt x = F.zero();
        for (auto& v : x) v = (long)(rng() % 100) - 50;
        bool all = true;
        for (auto& v : x)
            if (v % 7 != 0) all = false;
        CHECK(c.divides(p7, x) == all);
    }
}

TEST_CASE("divides implies norm divisibility") {
    IdealArith c(builtin_field("cubic"));
    const FieldSpec& F = c.field();
    std::mt19937_64 rng(6);
    for (auto& fi : c.ideals_of_norm_upto(60)) {
        IdealHnf h = c.hnf_of(fi);
        for (int t = 0; t < 20; t++) {
            AlgInt x = F.zero();
            for (auto& v : x) v = (long)(rng() % 41) - 20;
            if (c.divides(h, x)) {
                Int nx = F.norm(x);
                if (nx != 0) CHECK(mpz_divisible_p(nx.get_mpz_t(), h.norm.get_mpz_t()));
            }
        }
    }
}

TEST_CASE("principal generator") {
    IdealArith c(builtin_field("cubic"));
    IdealArith z(builtin_field("zeta8"));
    const FieldSpec& FC = c.field();

    AlgInt m5 = FC.one();
    for (auto& v : m5) v *= 5;
    IdealHnf h5 = c.principal_ideal(m5);
    AlgInt g5 = c.principal_generator(h5);
    Int n5 = FC.norm(g5);
    CHECK((n5 == h5.norm || n5 == -h5.norm));

    for (auto& P : c.split_prime(17).primes) {
        IdealHnf h{P.hnf, P.norm};
        AlgInt g = c.principal_generator(h);
        Int n = FC.norm(g);
        CHECK((n == 17 || n == -17));
        CHECK(c.divides(h, g));
        auto logs = FC.log_embedding(g);
        double mx = logs[0], mn = logs[0];
        for (double v : logs) {
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        CHECK(mx - mn <= FC.balance_band + 1e-9);
    }

    auto& s2 = z.split_prime(2);
    IdealHnf h2{s2.primes[0].hnf, s2.primes[0].norm};
    AlgInt g2 = z.principal_generator(h2);
    Int n2 = z.field().norm(g2);
    CHECK((n2 == 2 || n2 == -2));
}

TEST_CASE("eq-(upper): membership dominated by norm-n* divisor count") {
    IdealArith c(builtin_field("cubic"));
    auto qs = c.ideals_of_norm_upto(300, true);
    for (long n = 2; n <= 12; n++) {
        auto ssf = c.star_sharp_flat(Int(n));
        auto divisors = c.ideals_of_norm(ssf.star);
        for (auto& q : qs) {
            int lhs = mpz_divisible_p(q.norm.get_mpz_t(), Int(n).get_mpz_t()) ? 1 : 0;
            int rhs = 0;
            for (auto& d : divisors)
                if (factored_divides(d, q)) rhs++;
            CHECK(lhs <= rhs);
        }
    }
}
