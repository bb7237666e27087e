#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlab/linalg.hpp"
#include "dlab/numeric.hpp"
#include "dlab/poly.hpp"
#include "dlab/real.hpp"

namespace dlab {

// Element of O_K as exact integer coordinates w.r.t. the integral basis
// omega_1..omega_k (omega_1 = 1). Vectors of length k-1 are lifted by a
// trailing zero coordinate.
using AlgInt = std::vector<Int>;

// Axis-aligned rational box in R^{k-1}; the region itself is the part of the
// box where the incomplete norm form lies in [1, 2].
struct Region {
    std::vector<Rat> lo, hi;

    int dim() const { return (int)lo.size(); }
    // integer coordinate range of the scaled box [X*lo_i, X*hi_i]
    void coord_range(int i, const Int& X, Int& a, Int& b) const;
    bool box_empty() const;
};

struct FieldDiagnostics {
    struct Check {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Check> checks;
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/* A Galois number field of degree k >= 3 presented by an integral basis and
 * multiplication tensor. Monogenic, class number 1. The two built-in fields
 * are the cyclic cubic of discriminant 81 and Q(sqrt2, i) = Q(zeta_8). */
struct FieldSpec {
    std::string name;
    int k = 0;
    std::vector<Int> minpoly;   // length k+1, monic, index = power of theta
    IntMat basis_from_power;    // row i = omega_i written in powers of theta
    std::vector<Int> tensor;    // alpha[i][j][r], row-major k^3
    Int discriminant;
    int class_number = 1;
    std::vector<AlgInt> units;  // fundamental units, omega coordinates
    int torsion_order = 2;
    long precision_bits = 256;

    // derived at load time
    IntMat power_to_omega;                        // theta-power coords -> omega coords
    std::vector<RComplex> roots;                  // theta^sigma (Durand-Kerner)
    std::vector<std::vector<RComplex>> omega_emb; // omega_emb[i][sigma]
    int num_real_roots = 0;
    SparsePoly incomplete_form;                   // f(x_1..x_{k-1})
    double balance_band = 0.0;                    // B_K
    std::vector<std::vector<double>> unit_logs;   // unit_logs[t][sigma]

    const Int& alpha(int i, int j, int r) const {
        return tensor[((size_t)i * k + j) * k + r];
    }

    AlgInt zero() const { return AlgInt(k, Int(0)); }
    AlgInt one() const;
    AlgInt omega(int i) const;
    AlgInt from_lower(const std::vector<Int>& x) const;  // pad k-1 coords with 0

    AlgInt mul(const AlgInt& x, const AlgInt& y) const;
    AlgInt add(const AlgInt& x, const AlgInt& y) const;
    AlgInt neg(const AlgInt& x) const;
    IntMat mult_matrix(const AlgInt& x) const;
    Int norm(const AlgInt& x) const;
    Int trace(const AlgInt& x) const;
    Int incomplete_norm(const std::vector<Int>& x) const;  // x has k-1 coords

    struct EmbeddingResult {
        std::vector<RComplex> values;
        bool precision_ok;  // product-vs-norm check within 1e-9 relative
    };
    EmbeddingResult embeddings(const AlgInt& x) const;
    std::vector<double> log_embedding(const AlgInt& x) const;

    // multiply by a unit so that max - min of log|.^sigma| is within the
    // per-field band B_K
    AlgInt balance_generator(const AlgInt& g) const;

    // exact inverse of a unit (norm +-1); throws if x is not a unit
    AlgInt unit_inverse(const AlgInt& u) const;
    AlgInt unit_pow(const AlgInt& u, long e) const;

    // quotient y/x in K if it lies in O_K (exact)
    std::optional<AlgInt> exact_divide(const AlgInt& y, const AlgInt& x) const;

    Region default_region() const;  // box [-2,2]^{k-1}

    FieldDiagnostics verify() const;
};

// Loader for the documented key/value field format; see data/ for the two
// shipped specs. Derives roots, embeddings, the incomplete form and the
// balance band.
FieldSpec load_field_from_string(const std::string& text);
FieldSpec load_field_from_file(const std::string& path);
const FieldSpec& builtin_field(const std::string& name);  // "cubic" | "zeta8"
std::string builtin_field_text(const std::string& name);

}  // namespace dlab
