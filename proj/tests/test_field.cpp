#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dlab/field.hpp"
#include "doctest.h"

using namespace dlab;

namespace {

AlgInt vec(std::vector<long> v) {
    AlgInt x;
    for (long c : v) x.push_back(Int(c));
    return x;
}

// the displayed quartic incomplete norm form for Q(sqrt2, i)
Int quartic_form(long x1, long x2, long x3) {
    Int a = Int(x1) * x1 - 2 * Int(x2) * x2;
    Int b = 2 * Int(x1) * x1 + 4 * Int(x2) * x2 + Int(x3) * x3;
    return a * a + Int(x3) * x3 * b;
}

}  // namespace

TEST_CASE("built-in specs pass all diagnostics") {
    for (const char* name : {"cubic", "zeta8"}) {
        const FieldSpec& F = builtin_field(name);
        FieldDiagnostics d = F.verify();
        for (auto& c : d.checks) {
            INFO(name << ": " << c.name << " " << c.detail);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("perturbed tensor fails associativity") {
    std::string text = builtin_field_text("cubic");
    FieldSpec F = load_field_from_string(text);
    F.tensor[((size_t)1 * 3 + 2) * 3 + 0] += 1;  // corrupt alpha(1,2,0)
    FieldDiagnostics d = F.verify();
    bool assoc_fail = false, minpoly_fail = false;
    for (auto& c : d.checks) {
        if (c.name == "tensor_associative" && !c.pass) assoc_fail = true;
        if (c.name == "minpoly_of_theta" && !c.pass) minpoly_fail = true;
    }
    CHECK((assoc_fail || minpoly_fail));
}

TEST_CASE("wrong discriminant is detected") {
    FieldSpec F = load_field_from_string(builtin_field_text("cubic"));
    F.discriminant = 82;
    FieldDiagnostics d = F.verify();
    bool fail = false;
    for (auto& c : d.checks)
        if (c.name == "discriminant_trace_form" && !c.pass) fail = true;
    CHECK(fail);
}

TEST_CASE("multiplication identities") {
    const FieldSpec& C = builtin_field("cubic");
    const FieldSpec& Z = builtin_field("zeta8");
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; t++) {
        AlgInt x = C.zero();
        for (auto& c : x) c = (long)(rng() % 21) - 10;
        CHECK(C.mul(C.one(), x) == x);
    }
    // sqrt2 * sqrt2 = 2
    CHECK(Z.mul(Z.omega(1), Z.omega(1)) == vec({2, 0, 0, 0}));
    // theta * theta^2 = 1 + 3 theta
    CHECK(C.mul(C.omega(1), C.omega(2)) == vec({1, 3, 0}));
}

TEST_CASE("norms") {
    const FieldSpec& C = builtin_field("cubic");
    const FieldSpec& Z = builtin_field("zeta8");
    CHECK(C.norm(C.one()) == 1);
    CHECK(Z.norm(Z.one()) == 1);
    CHECK(Z.norm(Z.omega(1)) == 4);       // N(sqrt2) = 4
    CHECK(C.norm(vec({1, 1, 0})) == -1);  // N(1 + theta) = -m(-1)

    std::mt19937_64 rng(2);
    for (int t = 0; t < 1000; t++) {
        const FieldSpec& F = (t % 2) ? C : Z;
        AlgInt x = F.zero(), y = F.zero();
        for (auto& c : x) c = (long)(rng() % 101) - 50;
        for (auto& c : y) c = (long)(rng() % 101) - 50;
        CHECK(F.norm(F.mul(x, y)) == F.norm(x) * F.norm(y));
    }
}

TEST_CASE("incomplete norm form") {
    const FieldSpec& C = builtin_field("cubic");
    const FieldSpec& Z = builtin_field("zeta8");
    CHECK(C.incomplete_norm({Int(1), Int(0)}) == 1);
    CHECK(Z.incomplete_norm({Int(1), Int(0), Int(0)}) == 1);
    CHECK(Z.incomplete_norm({Int(0), Int(1), Int(0)}) == 4);
    CHECK(Z.incomplete_norm({Int(1), Int(1), Int(1)}) == 8);

    // agrees with the displayed quartic polynomial on |x_i| <= 20
    for (long x1 = -20; x1 <= 20; x1 += 4)
        for (long x2 = -20; x2 <= 20; x2 += 4)
            for (long x3 = -20; x3 <= 20; x3 += 4)
                CHECK(Z.incomplete_norm({Int(x1), Int(x2), Int(x3)}) ==
                      quartic_form(x1, x2, x3));
    for (long x1 = -3; x1 <= 3; x1++)
        for (long x2 = -3; x2 <= 3; x2++)
            for (long x3 = -3; x3 <= 3; x3++)
                CHECK(Z.incomplete_norm({Int(x1), Int(x2), Int(x3)}) ==
                      quartic_form(x1, x2, x3));

    // incomplete norm equals the norm of the lifted element
    CHECK(C.incomplete_norm({Int(2), Int(-3)}) == C.norm(vec({2, -3, 0})));
}

TEST_CASE("embeddings") {
    const FieldSpec& C = builtin_field("cubic");
    auto e1 = C.embeddings(C.one());
    CHECK(e1.precision_ok);
    for (auto& v : e1.values) {
        CHECK(v.re.to_double() == doctest::Approx(1.0));
        CHECK(std::abs(v.im.to_double()) < 1e-60);
    }
    AlgInt two = C.one();
    two[0] = 2;
    auto e2 = C.embeddings(two);
    for (auto& v : e2.values) CHECK(v.re.to_double() == doctest::Approx(2.0));

    // theta maps to the three real roots of x^3 - 3x - 1
    auto et = C.embeddings(C.omega(1));
    std::vector<double> roots;
    for (auto& v : et.values) roots.push_back(v.re.to_double());
    std::sort(roots.begin(), roots.end());
    CHECK(roots[0] == doctest::Approx(-1.53209).epsilon(1e-4));
    CHECK(roots[1] == doctest::Approx(-0.34730).epsilon(1e-4));
    CHECK(roots[2] == doctest::Approx(1.87939).epsilon(1e-4));

    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; t++) {
        const FieldSpec& F = (t % 2) ? C : builtin_field("zeta8");
        AlgInt x = F.zero();
        bool nz = false;
        for (auto& c : x) {
            c = (long)(rng() % 41) - 20;
            if (c != 0) nz = true;
        }
        if (!nz) x[0] = 1;
        CHECK(F.embeddings(x).precision_ok);
    }
}

TEST_CASE("balance_generator") {
    const FieldSpec& C = builtin_field("cubic");
    const FieldSpec& Z = builtin_field("zeta8");

    AlgInt g = C.zero();
    g[0] = 7;
    CHECK(C.balance_generator(g) == g);  // rational integers stay put

    auto spread = [](const FieldSpec& F, const AlgInt& x) {
        auto logs = F.log_embedding(x);
        double mx = logs[0], mn = logs[0];
        for (double v : logs) {
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        return mx - mn;
    };

    // cubic: eps^5 for a fundamental unit comes back into the band
    AlgInt eps5 = C.unit_pow(C.units[0], 5);
    AlgInt bal = C.balance_generator(eps5);
    CHECK(spread(C, bal) <= C.balance_band);
    // output differs from input by a unit
    auto q = C.exact_divide(bal, eps5);
    REQUIRE(q.has_value());
    Int qn = C.norm(*q);
    CHECK((qn == 1 || qn == -1));

    // quartic: (1 + sqrt2)^3 balanced
    AlgInt u3 = Z.unit_pow(Z.units[0], 3);
    AlgInt zb = Z.balance_generator(u3);
    CHECK(spread(Z, zb) <= Z.balance_band);

    CHECK_THROWS_AS(C.balance_generator(C.zero()), UsageError);
}

TEST_CASE("field loader round trip and rejection") {
    for (const char* name : {"cubic", "zeta8"}) {
        FieldSpec F = load_field_from_string(builtin_field_text(name));
        CHECK(F.name == name);
        CHECK(F.verify().all_pass());
    }
    // non-monogenic presentation rejected
    std::string bad = builtin_field_text("cubic");
    auto pos = bad.find("basis\n");
    bad.replace(pos, 6, "basis\n2 0 0\n0 1 0\n0 0 1\n#");
    CHECK_THROWS_AS(load_field_from_string(bad), FieldDataError);
}

TEST_CASE("region membership ranges") {
    const FieldSpec& C = builtin_field("cubic");
    Region r = C.default_region();
    Int a, b;
    r.coord_range(0, Int(100), a, b);
    CHECK(a == -200);
    CHECK(b == 200);
    Region tight;
    tight.lo = {Rat(1, 3)};
    tight.hi = {Rat(1, 2)};
    tight.coord_range(0, Int(10), a, b);
    CHECK(a == 4);
    CHECK(b == 5);
}
