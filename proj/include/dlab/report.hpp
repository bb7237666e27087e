#pragma once

#include <string>
#include <vector>

#include "dlab/field.hpp"
#include "dlab/real.hpp"

namespace dlab {

/* Experiment configuration: field, region, scales, budgets and seed. File
 * format is line-oriented `key = value`; CLI flags override. */
struct ExperimentConfig {
    std::string field_id = "cubic";       // cubic | zeta8 | path to a spec file
    std::vector<Rat> region_lo, region_hi;  // empty = field default box
    std::vector<i64> xs = {50, 100, 200, 400};
    i64 delta = 4;
    u64 p0 = 2000;
    u64 sieve_segment = 1ull << 22;
    u64 enum_budget = 1ull << 40;
    u64 volume_cells = 200000000ull;
    double volume_tol = 1e-4;
    u64 wolke_budget = 60000000ull;
    u64 seed = 0x5eed5eedull;
    std::string outdir = "out";

    void validate() const;
    std::string canonical_string() const;  // key-sorted, for the digest
    u64 digest() const { return fnv1a(canonical_string()); }

    static ExperimentConfig from_file(const std::string& path);
    void apply_line(const std::string& line);  // "key = value"
};

// Column-oriented table with a provenance tag per column. CSV output is
// byte-deterministic for a fixed table.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::string> provenance;  // same length as columns
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

std::string rat_str(const Rat& q);      // "num/den"
std::string real_str(const Real& x, int digits = 24);
std::string fixed_str(double x);        // deterministic %.17g

void write_csv(const Table& t, const std::string& path);
std::string render_csv(const Table& t);

// JSON summary: manifest (config digest, versions), tables with provenance,
// and free-form extras like timings
struct JsonReport {
    const ExperimentConfig* config = nullptr;
    std::vector<const Table*> tables;
    std::vector<std::pair<std::string, std::string>> extras;  // key, raw json value
    void write(const std::string& path) const;
};

Region region_from_config(const FieldSpec& F, const ExperimentConfig& cfg);

}  // namespace dlab
