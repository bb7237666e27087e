#pragma once

#include <array>

#include "dlab/density.hpp"

namespace dlab {

struct LatticeBasis {
    std::vector<std::vector<Int>> vecs;  // ordered by nondecreasing norm
    Int gram_det;                        // det(B B^T); square of the covolume
    bool reduced = false;
};

struct Envelope {
    double main_env = 0;    // 1 + X^{k-2} / (|z|^{k-2} (Nn)^{(k-2)/k})
    double graded_env = 0;  // sum_{j=1}^{k-2} X^j / (|z|^j (Nn)^{j/k})
    double znorm = 0;       // Euclidean length of the shortest multiplier
};

struct CountResult {
    Int exact;
    Rat rho;
    Int norm;
    double main_term = 0;  // rho/Nn * vol(R_X)
    Envelope env;
};

struct VolumeResult {
    double value = 0;     // midpoint of [inner, outer]
    double half_gap = 0;  // (outer - inner) / 2
    Rat inner, outer;     // exact dyadic bounds
    u64 cells_used = 0;
    int depth = 0;
};

// rank-(k-1) lattice of b with (g*b) supported away from the last
// coordinate; basis LLL-reduced and sorted by norm
LatticeBasis multiplier_lattice(const FieldSpec& F, const AlgInt& g);
LatticeBasis reduce_basis(const FieldSpec& F, LatticeBasis L);

// fast exact evaluator for the incomplete form at small integer points
struct FormEvaluatorI64 {
    explicit FormEvaluatorI64(const FieldSpec& F);
    i64 max_safe_coord;  // |x_i| bound under which evaluation cannot overflow
    int sum_abs_bits = 0;
    i128 eval(const i64* x) const;

    int nvars;
    struct Term {
        std::array<int, 8> e;
        i64 c;
    };
    std::vector<Term> terms;
};

// exact count of lattice points of the column lattice L (upper triangular,
// (k-1)x(k-1)) lying in the region at scale X
Int count_lattice_points_in_region(const FieldSpec& F, const IntMat& L, const Region& region,
                                   i64 X, bool parallel, u64 node_budget = 1ull << 40);

// all values f(x) over x in R_X cap Z^{k-1}, ascending
std::vector<i64> region_f_values(const FieldSpec& F, const Region& region, i64 X,
                                 bool parallel);

Envelope error_envelope(LocalDensity& dens, const IdealHnf& n, i64 X);

CountResult count_exact(LocalDensity& dens, const IdealHnf& n, const Region& region, i64 X,
                        double volR, bool parallel = true);

// deterministic dyadic inner/outer refinement of vol{x in box : f(x) in [1,2]}
VolumeResult region_volume(const FieldSpec& F, const Region& region, double tol,
                           u64 cell_budget, bool parallel = true);

}  // namespace dlab
