#include "dlab/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace dlab {

// ------------------------------------------------------- multiplier lattice

LatticeBasis multiplier_lattice(const FieldSpec& F, const AlgInt& g) {
    bool zero = true;
    for (auto& c : g)
        if (c != 0) zero = false;
    if (zero) throw UsageError("multiplier_lattice: zero input");

    IntMat M = F.mult_matrix(g);
    IntMat last_row(1, F.k);
    for (int j = 0; j < F.k; j++) last_row.at(0, j) = M.at(F.k - 1, j);
    IntMat K = kernel_basis(last_row);
    DLAB_CHECK(K.c == F.k - 1, "multiplier lattice rank");
    LatticeBasis L;
    for (int j = 0; j < K.c; j++) L.vecs.push_back(K.col(j));
    L.gram_det = gram_det(L.vecs);
    return reduce_basis(F, std::move(L));
}

LatticeBasis reduce_basis(const FieldSpec&, LatticeBasis L) {
    L.vecs = lll_reduce(std::move(L.vecs));
    L.gram_det = gram_det(L.vecs);
    L.reduced = true;
    return L;
}

// ------------------------------------------------------------ form evaluator

FormEvaluatorI64::FormEvaluatorI64(const FieldSpec& F) : nvars(F.k - 1) {
    Int sum_abs = 0;
    for (auto& [e, c] : F.incomplete_form.terms) {
        Term t{};
        for (size_t i = 0; i < e.size(); i++) t.e[i] = e[i];
        DLAB_CHECK(c.fits_slong_p(), "incomplete form coefficient range");
        t.c = c.get_si();
        terms.push_back(t);
        sum_abs += abs(c);
    }
    sum_abs_bits = (int)mpz_sizeinbase(sum_abs.get_mpz_t(), 2);
    // |f(x)| <= sum|c| * max|x|^k; keep the total below 2^126
    double budget = std::pow(2.0, 126.0) / std::max(1.0, sum_abs.get_d());
    max_safe_coord = (i64)std::pow(budget, 1.0 / F.k);
    max_safe_coord = std::min<i64>(max_safe_coord, ((i64)1 << 61));
}

i128 FormEvaluatorI64::eval(const i64* x) const {
    i128 s = 0;
    for (auto& t : terms) {
        i128 v = t.c;
        for (int i = 0; i < nvars; i++)
            for (int e = 0; e < t.e[i]; e++) v *= x[i];
        s += v;
    }
    return s;
}

// --------------------------------------------------------- point enumeration

namespace {

struct EnumContext {
    const FieldSpec* F;
    const IntMat* L;  // column basis, upper triangular, or null for Z^{k-1}
    std::vector<i64> box_lo, box_hi;
    i128 f_lo, f_hi;
    FormEvaluatorI64 form;

    EnumContext(const FieldSpec& field, const IntMat* lat, const Region& region, i64 X)
        : F(&field), L(lat), form(field) {
        int nv = field.k - 1;
        box_lo.resize(nv);
        box_hi.resize(nv);
        for (int i = 0; i < nv; i++) {
            Int a, b;
            region.coord_range(i, Int(X), a, b);
            DLAB_CHECK(a.fits_slong_p() && b.fits_slong_p(), "region range");
            box_lo[i] = a.get_si();
            box_hi[i] = b.get_si();
            DLAB_CHECK(std::max(std::llabs(box_lo[i]), std::llabs(box_hi[i])) <=
                           form.max_safe_coord,
                       "coordinates exceed exact-evaluation range");
        }
        i128 xk = 1;
        for (int i = 0; i < field.k; i++) xk *= X;
        f_lo = xk;
        f_hi = 2 * xk;
    }
};

// enumerate c from the bottom level (nv-1) upward; callback on full points
template <typename Fn>
void enumerate_level(const EnumContext& ctx, std::vector<i64>& c, std::vector<i64>& x,
                     int level, u64& nodes, u64 node_budget, Fn&& emit) {
    int nv = (int)ctx.box_lo.size();
    if (level < 0) {
        i128 v = ctx.form.eval(x.data());
        if (v >= ctx.f_lo && v <= ctx.f_hi) emit(x.data());
        return;
    }
    // x_level = L[level][level] * c_level + offset from higher levels
    i64 diag = 1, off = 0;
    if (ctx.L) {
        diag = ctx.L->at(level, level).get_si();
        i128 o = 0;
        for (int j = level + 1; j < nv; j++) o += (i128)ctx.L->at(level, j).get_si() * c[j];
        DLAB_CHECK(o <= (i128)INT64_MAX && o >= (i128)INT64_MIN, "offset overflow");
        off = (i64)o;
    }
    // c range from box_lo <= diag*c + off <= box_hi, diag > 0
    i64 lo = ctx.box_lo[level] - off, hi = ctx.box_hi[level] - off;
    i64 clo = lo >= 0 ? (lo + diag - 1) / diag : -((-lo) / diag);
    i64 chi = hi >= 0 ? hi / diag : -((-hi + diag - 1) / diag);
    for (i64 cv = clo; cv <= chi; cv++) {
        if (++nodes > node_budget) throw BudgetError("lattice enumeration budget exceeded");
        c[level] = cv;
        x[level] = diag * cv + off;
        enumerate_level(ctx, c, x, level - 1, nodes, node_budget, emit);
    }
}

template <typename Fn>
void enumerate_points(const EnumContext& ctx, bool parallel, u64 node_budget, Fn&& emit) {
    int nv = (int)ctx.box_lo.size();
    int top = nv - 1;
    i64 diag = ctx.L ? ctx.L->at(top, top).get_si() : 1;
    i64 lo = ctx.box_lo[top], hi = ctx.box_hi[top];
    i64 clo = lo >= 0 ? (lo + diag - 1) / diag : -((-lo) / diag);
    i64 chi = hi >= 0 ? hi / diag : -((-hi + diag - 1) / diag);
    if (chi < clo) return;

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (i64 cv = clo; cv <= chi; cv++) {
        std::vector<i64> c(nv, 0), x(nv, 0);
        u64 nodes = 0;
        c[top] = cv;
        x[top] = diag * cv;
        enumerate_level(ctx, c, x, top - 1, nodes, node_budget, emit);
    }
}

}  // namespace

Int count_lattice_points_in_region(const FieldSpec& F, const IntMat& L, const Region& region,
                                   i64 X, bool parallel, u64 node_budget) {
    EnumContext ctx(F, &L, region, X);
    u64 total = 0;
    enumerate_points(ctx, parallel, node_budget, [&](const i64*) {
#pragma omp atomic
        total++;
    });
    return Int(total);
}

std::vector<i64> region_f_values(const FieldSpec& F, const Region& region, i64 X,
                                 bool parallel) {
    EnumContext ctx(F, nullptr, region, X);
    std::vector<i64> values;
    const int maxthreads = 256;
    std::vector<std::vector<i64>> buckets(maxthreads);
    enumerate_points(ctx, parallel, 1ull << 40, [&](const i64* x) {
        i128 v = ctx.form.eval(x);
        int t = 0;
#ifdef _OPENMP
        t = omp_get_thread_num();
#endif
        buckets[t % maxthreads].push_back((i64)v);
    });
    for (auto& b : buckets) values.insert(values.end(), b.begin(), b.end());
    std::sort(values.begin(), values.end());
    return values;
}

Envelope error_envelope(LocalDensity& dens, const IdealHnf& n, i64 X) {
    const FieldSpec& F = dens.field();
    const int k = F.k;
    AlgInt g = dens.ideals().principal_generator(n);
    LatticeBasis lam = multiplier_lattice(F, g);
    std::vector<Int> z = shortest_vector(lam.vecs);
    double znorm = std::sqrt(dot(z, z).get_d());
    double N = n.norm.get_d();
    Envelope env;
    env.znorm = znorm;
    env.main_env = 1.0 + std::pow((double)X, k - 2) /
                             (std::pow(znorm, k - 2) * std::pow(N, (k - 2.0) / k));
    env.graded_env = 0;
    for (int j = 1; j <= k - 2; j++)
        env.graded_env +=
            std::pow((double)X, j) / (std::pow(znorm, j) * std::pow(N, (double)j / k));
    return env;
}

CountResult count_exact(LocalDensity& dens, const IdealHnf& n, const Region& region, i64 X,
                        double volR, bool parallel) {
    const FieldSpec& F = dens.field();
    CountResult r;
    r.norm = n.norm;
    r.rho = dens.rho_ideal(n).value;
    IntMat L = dens.coordinate_sublattice(n);
    r.exact = count_lattice_points_in_region(F, L, region, X, parallel);
    r.main_term = r.rho.get_d() / n.norm.get_d() * volR * std::pow((double)X, F.k - 1);
    r.env = error_envelope(dens, n, X);
    return r;
}

// ---------------------------------------------------------------- volume

VolumeResult region_volume(const FieldSpec& F, const Region& region, double tol,
                           u64 cell_budget, bool parallel) {
    const int nv = F.k - 1;
    if (region.box_empty()) {
        VolumeResult r;
        r.inner = Rat(0);
        r.outer = Rat(0);
        return r;
    }
    // common denominator of all endpoints
    Int Q = 1;
    for (int i = 0; i < nv; i++) {
        Int d1 = region.lo[i].get_den(), d2 = region.hi[i].get_den();
        Int l;
        mpz_lcm(l.get_mpz_t(), Q.get_mpz_t(), d1.get_mpz_t());
        mpz_lcm(Q.get_mpz_t(), l.get_mpz_t(), d2.get_mpz_t());
    }
    std::vector<i64> nlo(nv), nhi(nv);
    for (int i = 0; i < nv; i++) {
        Rat l = region.lo[i] * Rat(Q), h = region.hi[i] * Rat(Q);
        DLAB_CHECK(l.get_den() == 1 && h.get_den() == 1, "volume scaling");
        DLAB_CHECK(l.get_num().fits_slong_p() && h.get_num().fits_slong_p(), "volume range");
        nlo[i] = l.get_num().get_si();
        nhi[i] = h.get_num().get_si();
        DLAB_CHECK(nlo[i] < nhi[i], "degenerate box axis");
    }

    FormEvaluatorI64 form(F);

    // fold axes where f is even and the box is symmetric about 0; the folded
    // octant carries the full volume exactly, and positive coordinates keep
    // the interval bounds tight
    int folds = 0;
    for (int i = 0; i < nv; i++) {
        if (nlo[i] != -nhi[i] || nhi[i] <= 0) continue;
        bool even = true;
        for (auto& t : form.terms)
            if (t.e[i] % 2) even = false;
        if (!even) continue;
        nlo[i] = 0;
        folds++;
    }

    Rat box_vol(1);
    for (int i = 0; i < nv; i++) box_vol *= Rat(Int(nhi[i] - nlo[i]), Q);
    box_vol *= pow_int(Int(2), folds);

    // gradient term lists for the centered form (each homogeneous of
    // degree k-1)
    std::vector<std::vector<FormEvaluatorI64::Term>> grads(nv);
    {
        for (int i = 0; i < nv; i++) {
            SparsePoly g = F.incomplete_form.derivative(i);
            for (auto& [e, c] : g.terms) {
                FormEvaluatorI64::Term t{};
                for (size_t s = 0; s < e.size(); s++) t.e[s] = e[s];
                DLAB_CHECK(c.fits_slong_p(), "gradient coefficient range");
                t.c = c.get_si();
                grads[i].push_back(t);
            }
        }
    }

    // interval bounds of a homogeneous term list over the integer corner box
    auto interval_of = [&](const std::vector<FormEvaluatorI64::Term>& terms,
                           const std::array<i64, 8>& a, const std::array<i64, 8>& b,
                           i128& out_lo, i128& out_hi) {
        i128 flo = 0, fhi = 0;
        for (auto& t : terms) {
            i128 mlo = t.c, mhi = t.c;
            for (int i = 0; i < nv; i++) {
                int e = t.e[i];
                if (e == 0) continue;
                i128 pa = 1, pb = 1;
                for (int s = 0; s < e; s++) pa *= a[i], pb *= b[i];
                i128 plo, phi;
                if (e % 2 == 1) {
                    plo = pa;
                    phi = pb;
                } else {
                    phi = std::max(pa, pb);
                    if (a[i] <= 0 && 0 <= b[i])
                        plo = 0;
                    else
                        plo = std::min(pa, pb);
                }
                i128 c1 = mlo * plo, c2 = mlo * phi, c3 = mhi * plo, c4 = mhi * phi;
                mlo = std::min(std::min(c1, c2), std::min(c3, c4));
                mhi = std::max(std::max(c1, c2), std::max(c3, c4));
            }
            flo += mlo;
            fhi += mhi;
        }
        out_lo = flo;
        out_hi = fhi;
    };

    /* Classify the cell with index idx at depth d: 1 inside, -1 outside,
     * 0 boundary. Cell spans numerators
     * [nlo*2^d + (nhi-nlo)*j, ... + (j+1)] over Q*2^d per axis. Two rigorous
     * range estimates are intersected: the monomial interval sum and the
     * centered form f(mid) +- sum_i |df/dx_i|(cell) * h_i/2. The centered
     * form is what keeps the boundary layer thin near the flat directions
     * of the form. */
    i64 Qs = Q.get_si();
    auto classify = [&](const std::array<i64, 8>& idx, int d) -> int {
        i64 two_d = (i64)1 << d;
        std::array<i64, 8> a{}, b{}, mid2{};
        for (int i = 0; i < nv; i++) {
            i64 span = nhi[i] - nlo[i];
            a[i] = nlo[i] * two_d + span * idx[i];
            b[i] = a[i] + span;
            mid2[i] = a[i] + b[i];  // midpoint at denominator 2*Q*2^d
        }
        i128 scale = 1;
        for (int i = 0; i < F.k; i++) scale *= (i128)Qs * two_d;

        i128 flo, fhi;
        interval_of(form.terms, a, b, flo, fhi);
        if (flo >= scale && fhi <= 2 * scale) return 1;
        if (fhi < scale || flo > 2 * scale) return -1;

        // centered form at scale 2^k * scale
        i128 fmid = form.eval(mid2.data());
        i128 width2 = 0;  // sum |grad_i| * span_i, at scale (Q 2^d)^k
        for (int i = 0; i < nv; i++) {
            i128 glo, ghi;
            interval_of(grads[i], a, b, glo, ghi);
            i128 gabs = std::max(glo < 0 ? -glo : glo, ghi < 0 ? -ghi : ghi);
            width2 += gabs * (b[i] - a[i]);
        }
        // half-width at scale 2^k * scale is width2 * 2^{k-1}
        i128 half = width2 << (F.k - 1);
        i128 scale2 = scale << F.k;
        i128 clo = fmid - half, chi = fmid + half;
        i128 lo2 = std::max(flo << F.k, clo), hi2 = std::min(fhi << F.k, chi);
        if (lo2 >= scale2 && hi2 <= 2 * scale2) return 1;
        if (hi2 < scale2 || lo2 > 2 * scale2) return -1;
        return 0;
    };

    int maxn_bits = 1;
    for (int i = 0; i < nv; i++) {
        Int m((long)std::max(std::abs(nlo[i]), std::abs(nhi[i])));
        maxn_bits = std::max(maxn_bits, (int)mpz_sizeinbase(m.get_mpz_t(), 2));
    }

    /* Iterative-deepening DFS: refine boundary cells down to a depth cap D,
     * counting inner and boundary volume in exact units of box_vol/2^{D*nv}.
     * If the bracket is still wider than tol, deepen and re-run; the last
     * level dominates the cost, so the rerun roughly doubles work while
     * keeping memory at O(depth). */
    for (int D = 3;; D++) {
        if (F.k * (D + 3 + maxn_bits) + form.sum_abs_bits + 6 > 126)
            throw BudgetError("region_volume: depth exceeds exact-arithmetic range");
        DLAB_CHECK(D * nv <= 62, "volume unit accounting range");

        // seed cells at a shallow depth for parallelism
        int d0 = std::min(D, parallel ? 3 : 0);
        std::vector<std::array<i64, 8>> seeds;
        {
            std::array<i64, 8> idx{};
            auto rec = [&](auto&& self, int pos) -> void {
                if (pos == nv) {
                    seeds.push_back(idx);
                    return;
                }
                for (i64 v = 0; v < ((i64)1 << d0); v++) {
                    idx[pos] = v;
                    self(self, pos + 1);
                }
            };
            rec(rec, 0);
        }

        u64 n_seeds = seeds.size();
        std::vector<u64> inner_units(n_seeds, 0), boundary_units(n_seeds, 0),
            cells(n_seeds, 0);
        std::atomic<u64> global_cells{0};
        std::atomic<bool> over_budget{false};

#pragma omp parallel for schedule(dynamic) if (parallel)
        for (u64 s = 0; s < n_seeds; s++) {
            u64 in = 0, bd = 0, used = 0, unsynced = 0;
            auto rec = [&](auto&& self, std::array<i64, 8>& idx, int d) -> void {
                if (over_budget.load(std::memory_order_relaxed)) return;
                used++;
                if (++unsynced >= 4096) {
                    if (global_cells.fetch_add(unsynced, std::memory_order_relaxed) +
                            unsynced > cell_budget)
                        over_budget.store(true, std::memory_order_relaxed);
                    unsynced = 0;
                }
                int c = classify(idx, d);
                if (c < 0) return;
                if (c > 0) {
                    in += (u64)1 << ((u64)(D - d) * nv);
                    return;
                }
                if (d == D) {
                    bd++;
                    return;
                }
                std::array<i64, 8> ch{};
                for (unsigned mask = 0; mask < (1u << nv); mask++) {
                    for (int i = 0; i < nv; i++)
                        ch[i] = 2 * idx[i] + ((mask >> i) & 1);
                    self(self, ch, d + 1);
                }
            };
            rec(rec, seeds[s], d0);
            global_cells.fetch_add(unsynced, std::memory_order_relaxed);
            inner_units[s] = in;
            boundary_units[s] = bd;
            cells[s] = used;
        }
        if (over_budget.load())
            throw BudgetError("region_volume: tolerance unreachable under cell budget");

        // the budget applies per refinement pass (the deepest pass dominates)
        u64 in_total = 0, bd_total = 0, cells_total = 0;
        for (u64 s = 0; s < n_seeds; s++) {
            in_total += inner_units[s];
            bd_total += boundary_units[s];
            cells_total += cells[s];
        }
        if (cells_total > cell_budget)
            throw BudgetError("region_volume: tolerance unreachable under cell budget");

        Rat unit = box_vol / pow_int(Int(2), D * nv);
        Rat inner_vol = Rat(Int(in_total)) * unit;
        Rat boundary_vol = Rat(Int(bd_total)) * unit;
        if (boundary_vol.get_d() <= tol || bd_total == 0) {
            VolumeResult r;
            r.inner = inner_vol;
            r.outer = inner_vol + boundary_vol;
            r.value = (r.inner.get_d() + r.outer.get_d()) / 2;
            r.half_gap = boundary_vol.get_d() / 2;
            r.cells_used = cells_total;
            r.depth = D;
            return r;
        }
    }
}

}  // namespace dlab
