#include "dlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace dlab {

IntMat IntMat::identity(int n) {
    IntMat I(n, n);
    for (int i = 0; i < n; i++) I.at(i, i) = 1;
    return I;
}

IntMat IntMat::transposed() const {
    IntMat T(c, r);
    for (int i = 0; i < r; i++)
        for (int j = 0; j < c; j++) T.at(j, i) = at(i, j);
    return T;
}

std::vector<Int> IntMat::col(int j) const {
    std::vector<Int> v(r);
    for (int i = 0; i < r; i++) v[i] = at(i, j);
    return v;
}

std::vector<Int> IntMat::row(int i) const {
    std::vector<Int> v(c);
    for (int j = 0; j < c; j++) v[j] = at(i, j);
    return v;
}

IntMat mat_mul(const IntMat& A, const IntMat& B) {
    DLAB_CHECK(A.c == B.r, "mat_mul shape");
    IntMat C(A.r, B.c);
    for (int i = 0; i < A.r; i++)
        for (int l = 0; l < A.c; l++) {
            if (A.at(i, l) == 0) continue;
            for (int j = 0; j < B.c; j++) C.at(i, j) += A.at(i, l) * B.at(l, j);
        }
    return C;
}

std::vector<Int> mat_vec(const IntMat& A, const std::vector<Int>& x) {
    DLAB_CHECK((int)x.size() == A.c, "mat_vec shape");
    std::vector<Int> y(A.r);
    for (int i = 0; i < A.r; i++)
        for (int j = 0; j < A.c; j++) y[i] += A.at(i, j) * x[j];
    return y;
}

Int det_bareiss(IntMat M) {
    DLAB_CHECK(M.r == M.c, "det of non-square matrix");
    int n = M.r;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int i = 0; i < n - 1; i++) {
        if (M.at(i, i) == 0) {
            int p = -1;
            for (int j = i + 1; j < n; j++)
                if (M.at(j, i) != 0) {
                    p = j;
                    break;
                }
            if (p < 0) return 0;
            for (int j = 0; j < n; j++) std::swap(M.at(i, j), M.at(p, j));
            sign = -sign;
        }
        for (int j = i + 1; j < n; j++) {
            for (int l = i + 1; l < n; l++) {
                M.at(j, l) = (M.at(i, i) * M.at(j, l) - M.at(j, i) * M.at(i, l)) / prev;
            }
            M.at(j, i) = 0;
        }
        prev = M.at(i, i);
    }
    return sign > 0 ? M.at(n - 1, n - 1) : Int(-M.at(n - 1, n - 1));
}

void hnf_columns(IntMat& A, IntMat* U) {
    int r = A.r, c = A.c;
    if (U) *U = IntMat::identity(c);

    auto col_sub = [&](int j, int j0, const Int& q) {  // col_j -= q * col_j0
        if (q == 0) return;
        for (int i = 0; i < r; i++) A.at(i, j) -= q * A.at(i, j0);
        if (U)
            for (int i = 0; i < c; i++) U->at(i, j) -= q * U->at(i, j0);
    };
    auto col_swap = [&](int j, int l) {
        if (j == l) return;
        for (int i = 0; i < r; i++) std::swap(A.at(i, j), A.at(i, l));
        if (U)
            for (int i = 0; i < c; i++) std::swap(U->at(i, j), U->at(i, l));
    };
    auto col_neg = [&](int j) {
        for (int i = 0; i < r; i++) A.at(i, j) = -A.at(i, j);
        if (U)
            for (int i = 0; i < c; i++) U->at(i, j) = -U->at(i, j);
    };

    int col = c - 1;
    for (int row = r - 1; row >= 0 && col >= 0; row--) {
        for (;;) {
            int j0 = -1;
            for (int j = 0; j <= col; j++) {
                if (A.at(row, j) == 0) continue;
                if (j0 < 0 || mpz_cmpabs(A.at(row, j).get_mpz_t(), A.at(row, j0).get_mpz_t()) < 0)
                    j0 = j;
            }
            if (j0 < 0) break;  // this row is zero over the active columns

            bool others = false;
            for (int j = 0; j <= col; j++) {
                if (j == j0 || A.at(row, j) == 0) continue;
                others = true;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), A.at(row, j).get_mpz_t(), A.at(row, j0).get_mpz_t());
                col_sub(j, j0, q);
            }
            if (others) continue;

            col_swap(j0, col);
            if (A.at(row, col) < 0) col_neg(col);
            for (int j = col + 1; j < c; j++) {
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), A.at(row, j).get_mpz_t(), A.at(row, col).get_mpz_t());
                col_sub(j, col, q);
            }
            col--;
            break;
        }
    }
}

IntMat kernel_basis(const IntMat& A) {
    IntMat H = A, U;
    hnf_columns(H, &U);
    // zero columns of H sit on the left
    int nz = 0;
    for (int j = 0; j < H.c; j++) {
        bool zero = true;
        for (int i = 0; i < H.r && zero; i++)
            if (H.at(i, j) != 0) zero = false;
        if (zero)
            nz++;
        else
            break;
    }
    IntMat K(A.c, nz);
    for (int j = 0; j < nz; j++)
        for (int i = 0; i < A.c; i++) K.at(i, j) = U.at(i, j);
    hnf_columns(K);
    return K;
}

std::optional<std::vector<Int>> solve_upper_triangular(const IntMat& H,
                                                       const std::vector<Int>& x) {
    DLAB_CHECK(H.r == H.c && (int)x.size() == H.r, "solve_upper_triangular shape");
    int n = H.r;
    std::vector<Int> cvec(n);
    for (int i = n - 1; i >= 0; i--) {
        Int s = x[i];
        for (int j = i + 1; j < n; j++) s -= H.at(i, j) * cvec[j];
        DLAB_CHECK(H.at(i, i) != 0, "singular triangular matrix");
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), s.get_mpz_t(), H.at(i, i).get_mpz_t());
        if (rem != 0) return std::nullopt;
        cvec[i] = q;
    }
    return cvec;
}

std::optional<std::vector<Rat>> solve_rational(const IntMat& M, const std::vector<Int>& b) {
    DLAB_CHECK(M.r == M.c && (int)b.size() == M.r, "solve_rational shape");
    int n = M.r;
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) a[i][j] = Rat(M.at(i, j));
        a[i][n] = Rat(b[i]);
    }
    for (int i = 0; i < n; i++) {
        int p = -1;
        for (int j = i; j < n; j++)
            if (a[j][i] != 0) {
                p = j;
                break;
            }
        if (p < 0) return std::nullopt;
        std::swap(a[i], a[p]);
        for (int j = i + 1; j < n; j++) {
            if (a[j][i] == 0) continue;
            Rat f = a[j][i] / a[i][i];
            for (int l = i; l <= n; l++) a[j][l] -= f * a[i][l];
        }
    }
    std::vector<Rat> y(n);
    for (int i = n - 1; i >= 0; i--) {
        Rat s = a[i][n];
        for (int j = i + 1; j < n; j++) s -= a[i][j] * y[j];
        y[i] = s / a[i][i];
    }
    return y;
}

Int dot(const std::vector<Int>& x, const std::vector<Int>& y) {
    DLAB_CHECK(x.size() == y.size(), "dot length");
    Int s = 0;
    for (size_t i = 0; i < x.size(); i++) s += x[i] * y[i];
    return s;
}

Int gram_det(const std::vector<std::vector<Int>>& rows) {
    int n = (int)rows.size();
    IntMat G(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) G.at(i, j) = dot(rows[i], rows[j]);
    return det_bareiss(G);
}

namespace {

Int round_rat(const Rat& x) {
    // nearest integer, ties toward +inf
    Rat y = x + Rat(1, 2);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), y.get_num().get_mpz_t(), y.get_den().get_mpz_t());
    return q;
}

struct GramSchmidt {
    std::vector<std::vector<Rat>> mu;
    std::vector<Rat> bstar_norm;  // |b*_i|^2
};

GramSchmidt gso(const std::vector<std::vector<Int>>& b) {
    int n = (int)b.size();
    size_t d = b.empty() ? 0 : b[0].size();
    std::vector<std::vector<Rat>> bs(n, std::vector<Rat>(d));
    GramSchmidt g;
    g.mu.assign(n, std::vector<Rat>(n));
    g.bstar_norm.assign(n, Rat(0));
    for (int i = 0; i < n; i++) {
        for (size_t t = 0; t < d; t++) bs[i][t] = Rat(b[i][t]);
        for (int j = 0; j < i; j++) {
            Rat num(0);
            for (size_t t = 0; t < d; t++) num += Rat(b[i][t]) * bs[j][t];
            DLAB_CHECK(g.bstar_norm[j] != 0, "lll: dependent input vectors");
            g.mu[i][j] = num / g.bstar_norm[j];
            for (size_t t = 0; t < d; t++) bs[i][t] -= g.mu[i][j] * bs[j][t];
        }
        for (size_t t = 0; t < d; t++) g.bstar_norm[i] += bs[i][t] * bs[i][t];
    }
    return g;
}

}  // namespace

std::vector<std::vector<Int>> lll_reduce(std::vector<std::vector<Int>> b) {
    int n = (int)b.size();
    if (n <= 1) return b;
    const Rat delta(99, 100);
    int k = 1;
    GramSchmidt g = gso(b);
    while (k < n) {
        for (int j = k - 1; j >= 0; j--) {
            Int q = round_rat(g.mu[k][j]);
            if (q != 0) {
                for (size_t t = 0; t < b[k].size(); t++) b[k][t] -= q * b[j][t];
                g = gso(b);
            }
        }
        if (g.bstar_norm[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.bstar_norm[k - 1]) {
            k++;
        } else {
            std::swap(b[k], b[k - 1]);
            g = gso(b);
            k = std::max(k - 1, 1);
        }
    }
    std::sort(b.begin(), b.end(), [](const std::vector<Int>& x, const std::vector<Int>& y) {
        Int nx = dot(x, x), ny = dot(y, y);
        if (nx != ny) return nx < ny;
        return x < y;
    });
    return b;
}

std::vector<Int> shortest_vector(const std::vector<std::vector<Int>>& basis_in) {
    auto b = lll_reduce(basis_in);
    int n = (int)b.size();
    DLAB_CHECK(n >= 1, "shortest_vector: empty basis");
    Int best_norm = dot(b[0], b[0]);
    std::vector<Int> best = b[0];
    // Fincke-Pohst over the reduced basis; double precision is ample for the
    // sizes used here, and every candidate is re-checked exactly.
    std::vector<std::vector<double>> gm(n, std::vector<double>(n));
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) gm[i][j] = dot(b[i], b[j]).get_d();
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; i++) {
        double s = gm[i][i];
        for (int l = 0; l < i; l++) s -= q[l][l] * q[l][i] * q[l][i];
        q[i][i] = s;
        DLAB_CHECK(q[i][i] > 0, "shortest_vector: degenerate Gram");
        for (int j = i + 1; j < n; j++) {
            double t = gm[i][j];
            for (int l = 0; l < i; l++) t -= q[l][l] * q[l][i] * q[l][j];
            q[i][j] = t / q[i][i];
        }
    }
    double bound = best_norm.get_d() * 1.0000001 + 1e-9;
    std::vector<Int> u(n, Int(0));
    std::vector<double> ushift(n, 0.0), tpart(n + 1, 0.0);

    // recursive enumeration over levels n-1 .. 0
    auto rec = [&](auto&& self, int lvl, double budget) -> void {
        if (lvl < 0) {
            std::vector<Int> v(b[0].size(), Int(0));
            bool all_zero = true;
            for (int i = 0; i < n; i++) {
                if (u[i] != 0) all_zero = false;
                for (size_t t = 0; t < v.size(); t++) v[t] += u[i] * b[i][t];
            }
            if (all_zero) return;
            Int norm = dot(v, v);
            if (norm < best_norm || (norm == best_norm && v < best)) {
                best_norm = norm;
                best = v;
            }
            return;
        }
        double center = 0.0;
        for (int j = lvl + 1; j < n; j++) center += q[lvl][j] * u[j].get_d();
        double radius = std::sqrt(std::max(budget, 0.0) / q[lvl][lvl]);
        long lo = (long)std::ceil(-center - radius - 1e-9);
        long hi = (long)std::floor(-center + radius + 1e-9);
        for (long x = lo; x <= hi; x++) {
            u[lvl] = x;
            double contrib = q[lvl][lvl] * (x + center) * (x + center);
            self(self, lvl - 1, budget - contrib);
        }
        u[lvl] = 0;
    };
    rec(rec, n - 1, bound);
    // canonical sign: first nonzero coordinate positive
    for (auto& t : best) {
        if (t > 0) break;
        if (t < 0) {
            for (auto& s : best) s = -s;
            break;
        }
    }
    return best;
}

}  // namespace dlab
