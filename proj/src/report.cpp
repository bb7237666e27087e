#include "dlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dlab/real.hpp"
#include "json.hpp"

namespace dlab {

void ExperimentConfig::validate() const {
    if (xs.empty()) throw UsageError("config: X list empty");
    for (size_t i = 1; i < xs.size(); i++)
        if (xs[i] <= xs[i - 1]) throw UsageError("config: X list must be sorted ascending");
    for (i64 x : xs)
        if (x < 1) throw UsageError("config: X must be positive");
    if (delta < 2) throw UsageError("config: delta must be >= 2");
    if (!sieve_segment || !enum_budget || !volume_cells || !wolke_budget || !p0)
        throw UsageError("config: budgets must be positive");
    if (volume_tol <= 0) throw UsageError("config: volume_tol must be positive");
    if (region_lo.size() != region_hi.size())
        throw UsageError("config: region bounds length mismatch");
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream os;
    os << "delta=" << delta << "\n";
    os << "enum_budget=" << enum_budget << "\n";
    os << "field=" << field_id << "\n";
    os << "outdir=" << outdir << "\n";
    os << "p0=" << p0 << "\n";
    os << "region=";
    for (size_t i = 0; i < region_lo.size(); i++)
        os << rat_str(region_lo[i]) << "," << rat_str(region_hi[i]) << ";";
    os << "\n";
    os << "seed=" << seed << "\n";
    os << "sieve_segment=" << sieve_segment << "\n";
    os << "volume_cells=" << volume_cells << "\n";
    os << "volume_tol=" << fixed_str(volume_tol) << "\n";
    os << "wolke_budget=" << wolke_budget << "\n";
    os << "xs=";
    for (i64 x : xs) os << x << ",";
    os << "\n";
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        // allow decimals with short fractional part
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rat(Int(s));
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        Int den = pow_int(Int(10), (unsigned)fp.size());
        Int num = Int(ip.empty() || ip == "-" ? "0" : ip) * den;
        Int frac = Int(fp.empty() ? "0" : fp);
        num += neg ? -frac : frac;
        return make_rat(num, den);
    }
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace

void ExperimentConfig::apply_line(const std::string& line) {
    std::string l = line;
    auto hash = l.find('#');
    if (hash != std::string::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) return;
    auto eq = l.find('=');
    if (eq == std::string::npos) throw UsageError("config: expected key = value: " + l);
    std::string key = trim(l.substr(0, eq)), val = trim(l.substr(eq + 1));
    if (key == "field") {
        field_id = val;
    } else if (key == "region") {
        auto parts = split(val, ',');
        if (parts.size() % 2) throw UsageError("config: region needs lo,hi pairs");
        region_lo.clear();
        region_hi.clear();
        for (size_t i = 0; i < parts.size(); i += 2) {
            region_lo.push_back(parse_rat(parts[i]));
            region_hi.push_back(parse_rat(parts[i + 1]));
        }
    } else if (key == "xs") {
        xs.clear();
        for (auto& p : split(val, ',')) xs.push_back(std::stoll(p));
    } else if (key == "delta") {
        delta = std::stoll(val);
    } else if (key == "p0") {
        p0 = std::stoull(val);
    } else if (key == "sieve_segment") {
        sieve_segment = std::stoull(val);
    } else if (key == "enum_budget") {
        enum_budget = std::stoull(val);
    } else if (key == "volume_cells") {
        volume_cells = std::stoull(val);
    } else if (key == "volume_tol") {
        volume_tol = std::stod(val);
    } else if (key == "wolke_budget") {
        wolke_budget = std::stoull(val);
    } else if (key == "seed") {
        seed = std::stoull(val);
    } else if (key == "outdir") {
        outdir = val;
    } else {
        throw UsageError("config: unknown key " + key);
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config: " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) cfg.apply_line(line);
    cfg.validate();
    return cfg;
}

// ------------------------------------------------------------------ tables

void Table::add_row(std::vector<std::string> row) {
    DLAB_CHECK(row.size() == columns.size(), "table row arity");
    rows.push_back(std::move(row));
}

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q.get_num();
    if (q.get_den() != 1) os << "/" << q.get_den();
    return os.str();
}

std::string real_str(const Real& x, int digits) { return x.str(digits); }

std::string fixed_str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render_csv(const Table& t) {
    std::ostringstream os;
    for (size_t i = 0; i < t.columns.size(); i++)
        os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "\n");
    for (auto& row : t.rows)
        for (size_t i = 0; i < row.size(); i++)
            os << row[i] << (i + 1 < row.size() ? "," : "\n");
    return os.str();
}

void write_csv(const Table& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << render_csv(t);
}

void JsonReport::write(const std::string& path) const {
    nlohmann::ordered_json j;
    j["manifest"]["tool"] = "divisorlab";
    j["manifest"]["version"] = "1.0.0";
    j["manifest"]["gmp"] = gmp_version;
    j["manifest"]["mpfr"] = mpfr_get_version();
    if (config) {
        j["manifest"]["config_digest"] = config->digest();
        j["manifest"]["config"] = config->canonical_string();
    }
    for (auto& [k, v] : extras) j["extras"][k] = nlohmann::ordered_json::parse(v);
    for (const Table* t : tables) {
        nlohmann::ordered_json jt;
        jt["columns"] = t->columns;
        jt["provenance"] = t->provenance;
        jt["rows"] = t->rows;
        j["tables"][t->name] = jt;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << j.dump(2) << "\n";
}

Region region_from_config(const FieldSpec& F, const ExperimentConfig& cfg) {
    if (cfg.region_lo.empty()) return F.default_region();
    if ((int)cfg.region_lo.size() != F.k - 1)
        throw UsageError("config: region dimension must be k-1");
    Region r;
    r.lo = cfg.region_lo;
    r.hi = cfg.region_hi;
    return r;
}

}  // namespace dlab
