#include "dlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <sstream>

namespace dlab {

// ------------------------------------------------------------------ Region

void Region::coord_range(int i, const Int& X, Int& a, Int& b) const {
    // a = ceil(X * lo_i), b = floor(X * hi_i)
    Rat l = lo[i] * Rat(X), h = hi[i] * Rat(X);
    mpz_cdiv_q(a.get_mpz_t(), l.get_num().get_mpz_t(), l.get_den().get_mpz_t());
    mpz_fdiv_q(b.get_mpz_t(), h.get_num().get_mpz_t(), h.get_den().get_mpz_t());
}

bool Region::box_empty() const {
    for (size_t i = 0; i < lo.size(); i++)
        if (lo[i] > hi[i]) return true;
    return false;
}

// ----------------------------------------------------------- basic algebra

AlgInt FieldSpec::one() const {
    AlgInt x = zero();
    x[0] = 1;
    return x;
}

AlgInt FieldSpec::omega(int i) const {
    AlgInt x = zero();
    x[i] = 1;
    return x;
}

AlgInt FieldSpec::from_lower(const std::vector<Int>& x) const {
    DLAB_CHECK((int)x.size() == k - 1, "from_lower arity");
    AlgInt y(x);
    y.push_back(Int(0));
    return y;
}

AlgInt FieldSpec::mul(const AlgInt& x, const AlgInt& y) const {
    if ((int)x.size() != k || (int)y.size() != k)
        throw UsageError("element size does not match field degree");
    AlgInt z = zero();
    for (int i = 0; i < k; i++) {
        if (x[i] == 0) continue;
        for (int j = 0; j < k; j++) {
            if (y[j] == 0) continue;
            Int c = x[i] * y[j];
            for (int r = 0; r < k; r++) {
                const Int& t = alpha(i, j, r);
                if (t != 0) z[r] += c * t;
            }
        }
    }
    return z;
}

AlgInt FieldSpec::add(const AlgInt& x, const AlgInt& y) const {
    DLAB_CHECK(x.size() == y.size(), "add size");
    AlgInt z = x;
    for (int i = 0; i < k; i++) z[i] += y[i];
    return z;
}

AlgInt FieldSpec::neg(const AlgInt& x) const {
    AlgInt z = x;
    for (auto& c : z) c = -c;
    return z;
}

IntMat FieldSpec::mult_matrix(const AlgInt& x) const {
    DLAB_CHECK((int)x.size() == k, "mult_matrix size");
    IntMat M(k, k);
    for (int i = 0; i < k; i++) {
        if (x[i] == 0) continue;
        for (int j = 0; j < k; j++)
            for (int r = 0; r < k; r++) {
                const Int& t = alpha(i, j, r);
                if (t != 0) M.at(r, j) += x[i] * t;
            }
    }
    return M;
}

Int FieldSpec::norm(const AlgInt& x) const { return det_bareiss(mult_matrix(x)); }

Int FieldSpec::trace(const AlgInt& x) const {
    IntMat M = mult_matrix(x);
    Int t = 0;
    for (int i = 0; i < k; i++) t += M.at(i, i);
    return t;
}

Int FieldSpec::incomplete_norm(const std::vector<Int>& x) const {
    DLAB_CHECK((int)x.size() == k - 1, "incomplete_norm arity");
    return incomplete_form.eval(x);
}

// --------------------------------------------------- symbolic norm form det

namespace {

// determinant of the k x k matrix whose (r,j) entry is the linear form
// sum_i x_i alpha(i,j,r), expanded by columns with memoization on row sets
SparsePoly symbolic_incomplete_det(const FieldSpec& F) {
    int k = F.k, nv = k - 1;
    std::vector<std::vector<SparsePoly>> M(k, std::vector<SparsePoly>(k, SparsePoly::zero(nv)));
    for (int r = 0; r < k; r++)
        for (int j = 0; j < k; j++) {
            SparsePoly e = SparsePoly::zero(nv);
            for (int i = 0; i < nv; i++) {
                const Int& c = F.alpha(i, j, r);
                if (c != 0) e = e + SparsePoly::variable(nv, i) * c;
            }
            M[r][j] = e;
        }
    std::map<unsigned, SparsePoly> memo;
    auto rec = [&](auto&& self, unsigned used, int col) -> SparsePoly {
        if (col == k) return SparsePoly::constant(nv, Int(1));
        auto it = memo.find(used);
        if (it != memo.end()) return it->second;
        SparsePoly d = SparsePoly::zero(nv);
        int idx = 0;
        for (int r = 0; r < k; r++) {
            if (used & (1u << r)) continue;
            if (!M[r][col].is_zero()) {
                SparsePoly sub = self(self, used | (1u << r), col + 1);
                SparsePoly term = M[r][col] * sub;
                d = (idx % 2 == 0) ? d + term : d - term;
            }
            idx++;
        }
        memo.emplace(used, d);
        return d;
    };
    return rec(rec, 0u, 0);
}

// Durand-Kerner in double precision, then Newton polish at full precision
std::vector<RComplex> polynomial_roots(const std::vector<Int>& mono) {
    int deg = (int)mono.size() - 1;
    std::vector<std::complex<double>> c(deg + 1);
    for (int i = 0; i <= deg; i++) c[i] = mono[i].get_d();
    DLAB_CHECK(mono[deg] == 1, "minpoly must be monic");

    auto evald = [&](std::complex<double> z) {
        std::complex<double> s = 0;
        for (int i = deg; i >= 0; i--) s = s * z + c[i];
        return s;
    };
    double radius = 1.0;
    for (int i = 0; i < deg; i++) radius = std::max(radius, std::abs(c[i].real()));
    radius += 1.0;

    std::vector<std::complex<double>> z(deg);
    for (int j = 0; j < deg; j++) {
        double ang = 2 * M_PI * j / deg + 0.4;
        z[j] = radius * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < 2000; it++) {
        double moved = 0;
        for (int j = 0; j < deg; j++) {
            std::complex<double> denom = 1;
            for (int l = 0; l < deg; l++)
                if (l != j) denom *= (z[j] - z[l]);
            std::complex<double> delta = evald(z[j]) / denom;
            z[j] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    std::sort(z.begin(), z.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    // Newton polish in 256-bit arithmetic; quadratic convergence from 1e-14
    std::vector<RComplex> out;
    for (int j = 0; j < deg; j++) {
        RComplex r(Real(z[j].real()), Real(z[j].imag()));
        for (int it = 0; it < 6; it++) {
            RComplex f(Real(0.0), Real(0.0)), fp(Real(0.0), Real(0.0));
            for (int i = deg; i >= 0; i--) {
                fp = fp * r + f;
                f = f * r + RComplex(Real(mono[i]), Real(0.0));
            }
            r = r - f / fp;
        }
        out.push_back(r);
    }
    return out;
}

double spread_of(const std::vector<double>& v) {
    double mx = v[0], mn = v[0];
    for (double x : v) {
        mx = std::max(mx, x);
        mn = std::min(mn, x);
    }
    return mx - mn;
}

}  // namespace

// ------------------------------------------------------------- embeddings

FieldSpec::EmbeddingResult FieldSpec::embeddings(const AlgInt& x) const {
    DLAB_CHECK((int)x.size() == k, "embeddings size");
    EmbeddingResult res;
    res.values.reserve(k);
    for (int s = 0; s < k; s++) {
        RComplex v(Real(0.0), Real(0.0));
        for (int i = 0; i < k; i++) {
            if (x[i] == 0) continue;
            RComplex t = omega_emb[i][s];
            v = v + RComplex(t.re * Real(x[i]), t.im * Real(x[i]));
        }
        res.values.push_back(v);
    }
    Real prod(1.0);
    for (auto& v : res.values) prod = prod * v.abs();
    Int n = abs(norm(x));
    if (n == 0) {
        res.precision_ok = prod.to_double() < 1e-9;
    } else {
        Real rel = rabs(prod / Real(n) - Real(1.0));
        res.precision_ok = rel.to_double() < 1e-9;
    }
    return res;
}

std::vector<double> FieldSpec::log_embedding(const AlgInt& x) const {
    auto emb = embeddings(x);
    std::vector<double> out;
    out.reserve(k);
    for (auto& v : emb.values) out.push_back(rlog(v.abs()).to_double());
    return out;
}

// -------------------------------------------------------------- balancing

AlgInt FieldSpec::unit_inverse(const AlgInt& u) const {
    Int n = norm(u);
    if (n != 1 && n != -1) throw UsageError("unit_inverse: element is not a unit");
    AlgInt e1 = one();
    auto sol = solve_rational(mult_matrix(u), e1);
    DLAB_CHECK(sol.has_value(), "unit has singular multiplication matrix");
    AlgInt z(k);
    for (int i = 0; i < k; i++) {
        DLAB_CHECK((*sol)[i].get_den() == 1, "unit inverse not integral");
        z[i] = (*sol)[i].get_num();
    }
    return z;
}

AlgInt FieldSpec::unit_pow(const AlgInt& u, long e) const {
    AlgInt base = e >= 0 ? u : unit_inverse(u);
    long n = std::labs(e);
    AlgInt r = one();
    while (n > 0) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

std::optional<AlgInt> FieldSpec::exact_divide(const AlgInt& y, const AlgInt& x) const {
    auto sol = solve_rational(mult_matrix(x), y);
    if (!sol) return std::nullopt;
    AlgInt z(k);
    for (int i = 0; i < k; i++) {
        if ((*sol)[i].get_den() != 1) return std::nullopt;
        z[i] = (*sol)[i].get_num();
    }
    return z;
}

AlgInt FieldSpec::balance_generator(const AlgInt& g) const {
    bool zero_in = true;
    for (auto& c : g)
        if (c != 0) zero_in = false;
    if (zero_in) throw UsageError("balance_generator: zero input");

    int rank = (int)units.size();
    if (rank == 0) return g;

    std::vector<double> y = log_embedding(g);
    if (spread_of(y) <= balance_band) return g;

    // least squares for the real coefficient vector, then search integers
    // around it
    std::vector<std::vector<double>> V = unit_logs;  // V[t][sigma]
    double mean = 0;
    for (double v : y) mean += v;
    mean /= k;
    std::vector<double> y0(k);
    for (int s = 0; s < k; s++) y0[s] = y[s] - mean;

    std::vector<std::vector<double>> A(rank, std::vector<double>(rank + 1, 0.0));
    for (int a = 0; a < rank; a++) {
        for (int b = 0; b < rank; b++)
            for (int s = 0; s < k; s++) A[a][b] += V[a][s] * V[b][s];
        for (int s = 0; s < k; s++) A[a][rank] -= V[a][s] * y0[s];
    }
    // Gaussian elimination (SPD, tiny)
    for (int i = 0; i < rank; i++) {
        int p = i;
        for (int j = i + 1; j < rank; j++)
            if (std::fabs(A[j][i]) > std::fabs(A[p][i])) p = j;
        std::swap(A[i], A[p]);
        DLAB_CHECK(std::fabs(A[i][i]) > 1e-12, "unit log matrix singular");
        for (int j = i + 1; j < rank; j++) {
            double f = A[j][i] / A[i][i];
            for (int l = i; l <= rank; l++) A[j][l] -= f * A[i][l];
        }
    }
    std::vector<double> cstar(rank);
    for (int i = rank - 1; i >= 0; i--) {
        double s = A[i][rank];
        for (int j = i + 1; j < rank; j++) s -= A[i][j] * cstar[j];
        cstar[i] = s / A[i][i];
    }
    std::vector<long> base(rank);
    for (int i = 0; i < rank; i++) base[i] = std::lround(cstar[i]);

    for (int radius = 2; radius <= 8; radius += 3) {
        double best_spread = 1e300;
        std::vector<long> best;
        std::vector<long> cur(rank, 0);
        auto rec = [&](auto&& self, int t) -> void {
            if (t == rank) {
                std::vector<double> w = y;
                for (int a = 0; a < rank; a++)
                    for (int s = 0; s < k; s++) w[s] += cur[a] * V[a][s];
                double sp = spread_of(w);
                if (sp < best_spread - 1e-12) {
                    best_spread = sp;
                    best = cur;
                }
                return;
            }
            for (long d = -radius; d <= radius; d++) {
                cur[t] = base[t] + d;
                self(self, t + 1);
            }
        };
        rec(rec, 0);
        if (best_spread <= balance_band + 1e-9) {
            AlgInt u = one();
            for (int t = 0; t < rank; t++) u = mul(u, unit_pow(units[t], best[t]));
            return mul(g, u);
        }
    }
    throw std::logic_error("balance_generator: no unit multiple within band");
}

Region FieldSpec::default_region() const {
    Region r;
    r.lo.assign(k - 1, Rat(-2));
    r.hi.assign(k - 1, Rat(2));
    return r;
}

// ------------------------------------------------------------ diagnostics

FieldDiagnostics FieldSpec::verify() const {
    FieldDiagnostics d;
    auto add = [&](const std::string& name, bool pass, const std::string& det = "") {
        d.checks.push_back({name, pass, det});
    };

    // omega_1 is the multiplicative identity
    {
        bool ok = true;
        for (int j = 0; j < k && ok; j++)
            for (int r = 0; r < k && ok; r++)
                if (alpha(0, j, r) != (j == r ? 1 : 0)) ok = false;
        add("identity_element", ok);
    }
    // commutativity of the tensor
    {
        bool ok = true;
        for (int i = 0; i < k && ok; i++)
            for (int j = 0; j < k && ok; j++)
                for (int r = 0; r < k && ok; r++)
                    if (alpha(i, j, r) != alpha(j, i, r)) ok = false;
        add("tensor_commutative", ok);
    }
    // associativity on all basis triples
    {
        bool ok = true;
        for (int i = 0; i < k && ok; i++)
            for (int j = 0; j < k && ok; j++)
                for (int l = 0; l < k && ok; l++) {
                    AlgInt a = mul(mul(omega(i), omega(j)), omega(l));
                    AlgInt b = mul(omega(i), mul(omega(j), omega(l)));
                    if (a != b) ok = false;
                }
        add("tensor_associative", ok);
    }
    // theta satisfies its minimal polynomial inside the tensor algebra
    {
        std::vector<Int> theta_pow(k, Int(0));
        theta_pow[1] = 1;
        AlgInt theta = mat_vec(power_to_omega, theta_pow);
        AlgInt pw = one(), s = zero();
        for (int j = 0; j <= k; j++) {
            for (int r = 0; r < k; r++) s[r] += minpoly[j] * pw[r];
            if (j < k) pw = mul(pw, theta);
        }
        add("minpoly_of_theta", s == zero());
    }
    // basis change from power basis is unimodular (monogenic presentation)
    {
        Int det = det_bareiss(basis_from_power);
        add("power_basis_unimodular", det == 1 || det == -1);
    }
    // numeric roots satisfy the minimal polynomial
    {
        bool ok = (int)roots.size() == k;
        double worst = 0;
        for (auto& r : roots) {
            RComplex f(Real(0.0), Real(0.0));
            for (int i = k; i >= 0; i--) f = f * r + RComplex(Real(minpoly[i]), Real(0.0));
            worst = std::max(worst, f.abs().to_double());
        }
        ok = ok && worst < 1e-40;
        add("roots_satisfy_minpoly", ok, "max residual " + std::to_string(worst));
    }
    // conjugate product equals the norm on sample elements
    {
        std::mt19937_64 rng(20240601);
        bool ok = true;
        for (int t = 0; t < 50 && ok; t++) {
            AlgInt x(k);
            bool nonzero = false;
            for (int i = 0; i < k; i++) {
                x[i] = (long)(rng() % 19) - 9;
                if (x[i] != 0) nonzero = true;
            }
            if (!nonzero) x[0] = 1;
            ok = embeddings(x).precision_ok;
        }
        add("conjugate_product_matches_norm", ok);
    }
    // discriminant equals det of the trace form
    {
        std::vector<Int> basis_trace(k);
        for (int r = 0; r < k; r++) basis_trace[r] = trace(omega(r));
        IntMat T(k, k);
        for (int i = 0; i < k; i++)
            for (int j = 0; j < k; j++) {
                AlgInt prod = mul(omega(i), omega(j));
                Int t = 0;
                for (int r = 0; r < k; r++) t += prod[r] * basis_trace[r];
                T.at(i, j) = t;
            }
        add("discriminant_trace_form", det_bareiss(T) == discriminant);
    }
    add("class_number_one", class_number == 1);
    // units: exact norm +-1, expected count, numerically independent
    {
        int r1 = num_real_roots, r2 = (k - r1) / 2;
        int rank = r1 + r2 - 1;
        bool ok = (int)units.size() == rank;
        for (auto& u : units) {
            Int n = norm(u);
            if (n != 1 && n != -1) ok = false;
        }
        if (ok && rank > 0) {
            std::vector<std::vector<Int>> rows;  // scaled logs, crude rank check
            std::vector<std::vector<double>> L = unit_logs;
            // Gram determinant of unit log vectors must be bounded away from 0
            std::vector<std::vector<double>> G(rank, std::vector<double>(rank, 0));
            for (int a = 0; a < rank; a++)
                for (int b = 0; b < rank; b++)
                    for (int s = 0; s < k; s++) G[a][b] += L[a][s] * L[b][s];
            double det = 1;
            for (int i = 0; i < rank; i++) {
                int p = i;
                for (int j = i + 1; j < rank; j++)
                    if (std::fabs(G[j][i]) > std::fabs(G[p][i])) p = j;
                std::swap(G[i], G[p]);
                if (std::fabs(G[i][i]) < 1e-12) {
                    det = 0;
                    break;
                }
                det *= G[i][i];
                for (int j = i + 1; j < rank; j++) {
                    double f = G[j][i] / G[i][i];
                    for (int l = i; l < rank; l++) G[j][l] -= f * G[i][l];
                }
            }
            ok = std::fabs(det) > 1e-10;
        }
        add("units_norm_and_rank", ok);
    }
    // uniform splitting types at p <= 200 (Galois certificate) and
    // ramified exactly at p | disc
    {
        bool ok = true;
        for (u64 p : primes_upto(200)) {
            std::vector<u64> mc(k + 1);
            for (int i = 0; i <= k; i++) mc[i] = mpz_fdiv_ui(minpoly[i].get_mpz_t(), p);
            auto fac = factor_mod_p(ModPoly::from_coeffs(p, mc), 987654321u);
            int deg0 = fac[0].first.deg(), mult0 = fac[0].second;
            int total_r = (int)fac.size();
            for (auto& [g, m] : fac)
                if (g.deg() != deg0 || m != mult0) ok = false;
            if (deg0 * mult0 * total_r != k) ok = false;
            bool ram = mult0 > 1;
            bool divides_disc = mpz_divisible_ui_p(discriminant.get_mpz_t(), p) != 0;
            if (ram != divides_disc) ok = false;
            if (!ok) break;
        }
        add("galois_uniform_splitting_p200", ok);
    }
    // incomplete form: homogeneous of degree k, f(1,0,...,0) = 1
    {
        bool ok = true;
        for (auto& t : incomplete_form.terms) {
            int s = 0;
            for (int e : t.first) s += e;
            if (s != k) ok = false;
        }
        std::vector<Int> e1(k - 1, Int(0));
        e1[0] = 1;
        ok = ok && incomplete_form.eval(e1) == 1;
        add("incomplete_form_homogeneous_unit", ok);
    }
    return d;
}

// ----------------------------------------------------------------- loader

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
    }
    return toks;
}

}  // namespace

FieldSpec load_field_from_string(const std::string& text) {
    auto toks = tokenize(text);
    size_t pos = 0;
    auto next = [&]() -> std::string {
        if (pos >= toks.size()) throw FieldDataError("unexpected end of field spec");
        return toks[pos++];
    };
    auto next_int = [&]() -> Int { return Int(next()); };
    auto next_long = [&]() -> long {
        Int v = next_int();
        DLAB_CHECK(v.fits_slong_p(), "value out of range");
        return v.get_si();
    };

    FieldSpec F;
    bool have_degree = false;
    while (pos < toks.size()) {
        std::string key = next();
        if (key == "name") {
            F.name = next();
        } else if (key == "degree") {
            F.k = (int)next_long();
            if (F.k < 3 || F.k > 12) throw FieldDataError("degree must be in [3, 12]");
            have_degree = true;
        } else if (key == "minpoly") {
            if (!have_degree) throw FieldDataError("degree must precede minpoly");
            F.minpoly.resize(F.k + 1);
            for (int i = 0; i <= F.k; i++) F.minpoly[i] = next_int();
            if (F.minpoly[F.k] != 1) throw FieldDataError("minpoly must be monic");
        } else if (key == "basis") {
            if (!have_degree) throw FieldDataError("degree must precede basis");
            F.basis_from_power = IntMat(F.k, F.k);
            for (int i = 0; i < F.k; i++)
                for (int j = 0; j < F.k; j++) F.basis_from_power.at(i, j) = next_int();
        } else if (key == "tensor") {
            if (!have_degree) throw FieldDataError("degree must precede tensor");
            F.tensor.resize((size_t)F.k * F.k * F.k);
            for (auto& t : F.tensor) t = next_int();
        } else if (key == "discriminant") {
            F.discriminant = next_int();
        } else if (key == "class_number") {
            F.class_number = (int)next_long();
            if (F.class_number != 1)
                throw FieldDataError("only class number 1 is supported");
        } else if (key == "units") {
            long cnt = next_long();
            F.units.resize(cnt);
            for (long t = 0; t < cnt; t++) {
                F.units[t].resize(F.k);
                for (int i = 0; i < F.k; i++) F.units[t][i] = next_int();
            }
        } else if (key == "torsion") {
            F.torsion_order = (int)next_long();
        } else if (key == "precision_bits") {
            F.precision_bits = next_long();
            if (F.precision_bits < 64)
                throw FieldDataError("precision_bits must be at least 64");
        } else {
            throw FieldDataError("unknown field spec key: " + key);
        }
    }
    if (!have_degree || F.minpoly.empty() || F.tensor.empty() || F.basis_from_power.r == 0)
        throw FieldDataError("field spec incomplete");

    // derived data
    {
        Int det = det_bareiss(F.basis_from_power);
        if (det != 1 && det != -1)
            throw FieldDataError("basis change from power basis must be unimodular "
                                 "(monogenic presentation required)");
        IntMat PT = F.basis_from_power.transposed();
        F.power_to_omega = IntMat(F.k, F.k);
        for (int j = 0; j < F.k; j++) {
            std::vector<Int> e(F.k, Int(0));
            e[j] = 1;
            auto col = solve_rational(PT, e);
            DLAB_CHECK(col.has_value(), "basis matrix singular");
            for (int i = 0; i < F.k; i++) {
                DLAB_CHECK((*col)[i].get_den() == 1, "power_to_omega not integral");
                F.power_to_omega.at(i, j) = (*col)[i].get_num();
            }
        }
    }
    F.roots = polynomial_roots(F.minpoly);
    F.num_real_roots = 0;
    for (auto& r : F.roots)
        if (rabs(r.im).to_double() < 1e-30) F.num_real_roots++;

    F.omega_emb.assign(F.k, std::vector<RComplex>(F.k, RComplex(Real(0.0), Real(0.0))));
    for (int i = 0; i < F.k; i++)
        for (int s = 0; s < F.k; s++) {
            RComplex v(Real(0.0), Real(0.0));
            RComplex pw(Real(1.0), Real(0.0));
            for (int j = 0; j < F.k; j++) {
                const Int& c = F.basis_from_power.at(i, j);
                if (c != 0) v = v + RComplex(pw.re * Real(c), pw.im * Real(c));
                pw = pw * F.roots[s];
            }
            F.omega_emb[i][s] = v;
        }

    F.incomplete_form = symbolic_incomplete_det(F);

    F.unit_logs.clear();
    for (auto& u : F.units) F.unit_logs.push_back(F.log_embedding(u));
    // band: largest conjugate-log spread over the corners of the unit
    // parallelepiped, plus torsion slack and margin
    double band = 0.0;
    int rank = (int)F.units.size();
    for (unsigned mask = 0; mask < (1u << rank); mask++) {
        std::vector<double> w(F.k, 0.0);
        for (int t = 0; t < rank; t++)
            if (mask & (1u << t))
                for (int s = 0; s < F.k; s++) w[s] += F.unit_logs[t][s];
        band = std::max(band, spread_of(w));
    }
    F.balance_band = band + std::log((double)std::max(F.torsion_order, 1)) + 0.5;
    return F;
}

FieldSpec load_field_from_file(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw UsageError("cannot open field spec: " + path);
    std::string text;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
    return load_field_from_string(text);
}

std::string builtin_field_text(const std::string& name) {
    if (name == "cubic") {
        return R"(# cyclic cubic field Q[t]/(t^3 - 3t - 1), discriminant 81
name cubic
degree 3
minpoly -1 -3 0 1
basis
1 0 0
0 1 0
0 0 1
tensor
# omega_1 * .
1 0 0   0 1 0   0 0 1
# omega_2 * .
0 1 0   0 0 1   1 3 0
# omega_3 * .
0 0 1   1 3 0   0 1 3
discriminant 81
class_number 1
units 2
0 1 0
1 1 0
torsion 2
precision_bits 256
)";
    }
    if (name == "zeta8") {
        return R"(# Q(sqrt2, i) = Q(zeta_8) with basis {1, sqrt2, i, (sqrt2 + sqrt2 i)/2}
name zeta8
degree 4
minpoly 1 0 0 0 1
basis
1 0 0 0
0 1 0 -1
0 0 1 0
0 1 0 0
tensor
# omega_1 * .
1 0 0 0   0 1 0 0   0 0 1 0   0 0 0 1
# omega_2 * .
0 1 0 0   2 0 0 0   0 -1 0 2   1 0 1 0
# omega_3 * .
0 0 1 0   0 -1 0 2   -1 0 0 0   0 -1 0 1
# omega_4 * .
0 0 0 1   1 0 1 0   0 -1 0 1   0 0 1 0
discriminant 256
class_number 1
units 1
1 1 0 0
torsion 8
precision_bits 256
)";
    }
    throw UsageError("unknown built-in field: " + name);
}

const FieldSpec& builtin_field(const std::string& name) {
    static std::map<std::string, FieldSpec> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, load_field_from_string(builtin_field_text(name))).first;
    return it->second;
}

}  // namespace dlab
