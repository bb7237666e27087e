#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dlab/linalg.hpp"
#include "doctest.h"

using namespace dlab;

namespace {

IntMat random_mat(std::mt19937_64& rng, int r, int c, int range) {
    IntMat M(r, c);
    for (int i = 0; i < r; i++)
        for (int j = 0; j < c; j++) M.at(i, j) = (long)(rng() % (2 * range + 1)) - range;
    return M;
}

// determinant by cofactor expansion, independent oracle
Int det_cofactor(const IntMat& M) {
    int n = M.r;
    if (n == 1) return M.at(0, 0);
    Int s = 0;
    for (int j = 0; j < n; j++) {
        if (M.at(0, j) == 0) continue;
        IntMat sub(n - 1, n - 1);
        for (int i = 1; i < n; i++) {
            int cc = 0;
            for (int c = 0; c < n; c++) {
                if (c == j) continue;
                sub.at(i - 1, cc++) = M.at(i, c);
            }
        }
        Int t = M.at(0, j) * det_cofactor(sub);
        s += (j % 2 == 0) ? t : -t;
    }
    return s;
}

}  // namespace

TEST_CASE("bareiss determinant matches cofactor expansion") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 200; t++) {
        int n = 1 + (int)(rng() % 5);
        IntMat M = random_mat(rng, n, n, 9);
        CHECK(det_bareiss(M) == det_cofactor(M));
    }
}

TEST_CASE("hnf is canonical and unimodular") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; t++) {
        int n = 2 + (int)(rng() % 3);
        IntMat M = random_mat(rng, n, n, 20);
        if (det_bareiss(M) == 0) continue;
        IntMat H = M, U;
        hnf_columns(H, &U);
        Int du = det_bareiss(U);
        CHECK((du == 1 || du == -1));
        CHECK(mat_mul(M, U) == H);
        // upper triangular, positive diagonal, reduced off-diagonals
        for (int i = 0; i < n; i++) {
            CHECK(H.at(i, i) > 0);
            for (int j = 0; j < i; j++) CHECK(H.at(i, j) == 0);
            for (int j = i + 1; j < n; j++) {
                CHECK(H.at(i, j) >= 0);
                CHECK(H.at(i, j) < H.at(i, i));
            }
        }
        // canonical: column-scrambled input gives the same HNF
        IntMat M2 = M;
        for (int j = 0; j < n; j++) {
            // add column j+1 to column j
            int j2 = (j + 1) % n;
            for (int i = 0; i < n; i++) M2.at(i, j) += M2.at(i, j2) * 3;
        }
        IntMat H2 = M2;
        hnf_columns(H2);
        CHECK(H2 == H);
    }
}

TEST_CASE("kernel basis spans the right kernel") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; t++) {
        int r = 1 + (int)(rng() % 3), c = r + 1 + (int)(rng() % 3);
        IntMat M = random_mat(rng, r, c, 8);
        IntMat K = kernel_basis(M);
        // every kernel column maps to zero
        for (int j = 0; j < K.c; j++) {
            auto v = mat_vec(M, K.col(j));
            for (auto& x : v) CHECK(x == 0);
        }
        // dimension is at least c - r
        CHECK(K.c >= c - r);
    }
}

TEST_CASE("triangular solve detects membership") {
    IntMat H(2, 2);
    H.at(0, 0) = 2;
    H.at(0, 1) = 1;
    H.at(1, 1) = 3;
    auto s1 = solve_upper_triangular(H, {Int(3), Int(3)});
    REQUIRE(s1.has_value());
    CHECK((*s1)[0] == 1);
    CHECK((*s1)[1] == 1);
    CHECK(!solve_upper_triangular(H, {Int(1), Int(0)}).has_value());
}

TEST_CASE("lll finds short vectors in scrambled diagonal lattices") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 40; t++) {
        long D = 100 + (long)(rng() % 900);
        std::vector<std::vector<Int>> b = {
            {Int(1), Int(0), Int(0)}, {Int(0), Int(1), Int(0)}, {Int(0), Int(0), Int(D)}};
        // random unimodular scramble
        for (int s = 0; s < 12; s++) {
            int i = (int)(rng() % 3), j = (int)(rng() % 3);
            if (i == j) continue;
            long q = (long)(rng() % 5) - 2;
            for (int l = 0; l < 3; l++) b[i][l] += q * b[j][l];
        }
        auto red = lll_reduce(b);
        // Hadamard: product of norms^2 >= gram det
        Int gd = gram_det(red);
        Int prod = 1;
        for (auto& v : red) prod *= dot(v, v);
        CHECK(prod >= gd);
        // shortest vector of this lattice has norm 1
        auto z = shortest_vector(red);
        CHECK(dot(z, z) == 1);
    }
}

TEST_CASE("shortest vector agrees with lll first vector up to small factor") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; t++) {
        std::vector<std::vector<Int>> b(3, std::vector<Int>(3));
        do {
            for (auto& v : b)
                for (auto& x : v) x = (long)(rng() % 41) - 20;
        } while (gram_det(b) == 0);
        auto red = lll_reduce(b);
        auto z = shortest_vector(red);
        CHECK(dot(z, z) >= 1);
        CHECK(dot(z, z) <= dot(red[0], red[0]));
        // 2^(n-1) approximation factor for LLL in dimension 3
        CHECK(dot(red[0], red[0]) <= Int(4) * dot(z, z));
    }
}
