#pragma once

#include <optional>
#include <vector>

#include "dlab/numeric.hpp"

namespace dlab {

// Dense integer matrix, row-major. Dimensions here are tiny (k <= 8-ish),
// so all algorithms favour exactness over asymptotics.
struct IntMat {
    int r = 0, c = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(int rows, int cols) : r(rows), c(cols), a((size_t)rows * cols) {}

    Int& at(int i, int j) { return a[(size_t)i * c + j]; }
    const Int& at(int i, int j) const { return a[(size_t)i * c + j]; }

    static IntMat identity(int n);

    IntMat transposed() const;
    std::vector<Int> col(int j) const;
    std::vector<Int> row(int i) const;

    bool operator==(const IntMat& o) const { return r == o.r && c == o.c && a == o.a; }
};

IntMat mat_mul(const IntMat& A, const IntMat& B);
std::vector<Int> mat_vec(const IntMat& A, const std::vector<Int>& x);

// Fraction-free Gaussian elimination (Bareiss). Exact determinant.
Int det_bareiss(IntMat M);

/* Column-style Hermite normal form: A -> A*U in place with U unimodular.
 * Zero columns are gathered on the left; the nonzero part is in echelon
 * form with pivots walking up-right. For a nonsingular square input the
 * result is upper triangular with positive diagonal and off-diagonal
 * entries reduced into [0, pivot). That form is unique, so it doubles as
 * a canonical key for lattices. */
void hnf_columns(IntMat& A, IntMat* U = nullptr);

// Basis of the right kernel {x : A x = 0}, columns = kernel vectors (HNF'd).
IntMat kernel_basis(const IntMat& A);

// Solve H c = x for upper-triangular H with nonzero diagonal; nullopt if the
// solution is not integral (i.e. x is outside the column lattice of H).
std::optional<std::vector<Int>> solve_upper_triangular(const IntMat& H,
                                                       const std::vector<Int>& x);

// Exact rational solve M y = b (square M); nullopt if M singular.
std::optional<std::vector<Rat>> solve_rational(const IntMat& M, const std::vector<Int>& b);

// det(B^T B) for a set of integer vectors (rows of B). Exact.
Int gram_det(const std::vector<std::vector<Int>>& rows);

Int dot(const std::vector<Int>& x, const std::vector<Int>& y);

// Exact-arithmetic LLL on the given basis vectors (delta = 99/100),
// followed by a sort by nondecreasing Euclidean norm.
std::vector<std::vector<Int>> lll_reduce(std::vector<std::vector<Int>> basis);

// Shortest nonzero vector by exhaustive enumeration over an LLL-reduced
// basis. Intended for tests and small determinants.
std::vector<Int> shortest_vector(const std::vector<std::vector<Int>>& basis);

}  // namespace dlab
