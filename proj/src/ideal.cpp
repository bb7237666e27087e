#include "dlab/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dlab {

int FactoredIdeal::exponent_of(u64 p, int index) const {
    for (auto& pf : factors)
        if (pf.p == p && pf.index == index) return pf.exp;
    return 0;
}

bool factored_divides(const FactoredIdeal& a, const FactoredIdeal& b) {
    for (auto& pf : a.factors)
        if (b.exponent_of(pf.p, pf.index) < pf.exp) return false;
    return true;
}

IdealArith::IdealArith(const FieldSpec& F, u64 factor_seed) : F_(F), seed_(factor_seed) {}

void IdealArith::ensure_primes(u64 upto) {
    if (!small_primes_.empty() && small_primes_.back() >= upto) return;
    small_primes_ = primes_upto(std::max<u64>(upto, 1u << 10));
}

// --------------------------------------------------------------- splitting

SplitInfo IdealArith::compute_split(u64 p) const {
    const int k = F_.k;
    std::vector<u64> mc(k + 1);
    for (int i = 0; i <= k; i++) mc[i] = mpz_fdiv_ui(F_.minpoly[i].get_mpz_t(), p);
    auto fac = factor_mod_p(ModPoly::from_coeffs(p, mc), seed_);

    SplitInfo s;
    s.p = p;
    s.r = (int)fac.size();
    s.f = fac[0].first.deg();
    s.e = fac[0].second;
    for (auto& [g, m] : fac) {
        if (g.deg() != s.f || m != s.e)
            throw FieldDataError("non-uniform splitting at p = " + std::to_string(p) +
                                 " (field is not Galois)");
    }
    DLAB_CHECK(s.e * s.f * s.r == k, "efr != k");
    bool ramified = s.e > 1;
    bool divides_disc = mpz_divisible_ui_p(F_.discriminant.get_mpz_t(), p) != 0;
    DLAB_CHECK(ramified == divides_disc, "ramification inconsistent with discriminant");

    // theta in omega coordinates
    std::vector<Int> theta_pow(k, Int(0));
    theta_pow[1] = 1;
    AlgInt theta = mat_vec(F_.power_to_omega, theta_pow);

    int idx = 0;
    for (auto& [g, mult] : fac) {
        PrimeIdeal P;
        P.p = p;
        P.e = s.e;
        P.f = s.f;
        P.index = idx++;
        P.gpoly.assign(g.c.begin(), g.c.end());
        // g(theta) in omega coordinates
        AlgInt gtheta = F_.zero(), pw = F_.one();
        for (size_t j = 0; j < P.gpoly.size(); j++) {
            for (int r = 0; r < k; r++) gtheta[r] += Int(P.gpoly[j]) * pw[r];
            if (j + 1 < P.gpoly.size()) pw = F_.mul(pw, theta);
        }
        AlgInt pone = F_.one();
        for (auto& c : pone) c *= Int(p);
        IdealHnf h = ideal_from_generators({pone, gtheta});
        P.norm = pow_int(Int((long)p), P.f);
        DLAB_CHECK(h.norm == P.norm, "prime ideal norm mismatch");
        P.hnf = h.H;
        s.primes.push_back(std::move(P));
    }
    return s;
}

const SplitInfo& IdealArith::split_prime(u64 p) {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = splits_.find(p);
        if (it != splits_.end()) return it->second;
    }
    SplitInfo s = compute_split(p);
    std::lock_guard<std::mutex> lk(mu_);
    return splits_.emplace(p, std::move(s)).first->second;
}

bool IdealArith::is_degree_one_prime(u64 p) {
    if (mpz_divisible_ui_p(F_.discriminant.get_mpz_t(), p) || p < 1000)
        return split_prime(p).f == 1;
    // unramified: cheap distinct-degree probe, no ideal construction
    std::vector<u64> mc(F_.k + 1);
    for (int i = 0; i <= F_.k; i++) mc[i] = mpz_fdiv_ui(F_.minpoly[i].get_mpz_t(), p);
    return min_factor_degree(ModPoly::from_coeffs(p, mc)) == 1;
}

// ------------------------------------------------------------ HNF algebra

IdealHnf IdealArith::unit_ideal() const {
    IdealHnf h;
    h.H = IntMat::identity(F_.k);
    h.norm = 1;
    return h;
}

IdealHnf IdealArith::ideal_from_generators(const std::vector<AlgInt>& gens) const {
    const int k = F_.k;
    IntMat M(k, k * (int)gens.size());
    for (size_t g = 0; g < gens.size(); g++) {
        IntMat mm = F_.mult_matrix(gens[g]);
        for (int i = 0; i < k; i++)
            for (int j = 0; j < k; j++) M.at(i, (int)g * k + j) = mm.at(i, j);
    }
    hnf_columns(M);
    IdealHnf h;
    h.H = IntMat(k, k);
    for (int i = 0; i < k; i++)
        for (int j = 0; j < k; j++) h.H.at(i, j) = M.at(i, M.c - k + j);
    Int det = 1;
    for (int i = 0; i < k; i++) det *= h.H.at(i, i);
    DLAB_CHECK(det > 0, "ideal lattice not full rank");
    h.norm = det;
    return h;
}

IdealHnf IdealArith::ideal_mul(const IdealHnf& a, const IdealHnf& b) const {
    const int k = F_.k;
    std::vector<AlgInt> gens;
    gens.reserve((size_t)k * k);
    for (int i = 0; i < k; i++)
        for (int j = 0; j < k; j++) gens.push_back(F_.mul(a.H.col(i), b.H.col(j)));
    IdealHnf h = ideal_from_generators(gens);
    DLAB_CHECK(h.norm == a.norm * b.norm, "ideal norm not multiplicative");
    return h;
}

IdealHnf IdealArith::prime_power(u64 p, int index, int e) {
    DLAB_CHECK(e >= 0, "negative ideal exponent");
    if (e == 0) return unit_ideal();
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = prime_powers_.find({p, index, e});
        if (it != prime_powers_.end()) return it->second;
    }
    const SplitInfo& s = split_prime(p);
    DLAB_CHECK(index < s.r, "prime index out of range");
    IdealHnf base;
    base.H = s.primes[index].hnf;
    base.norm = s.primes[index].norm;
    IdealHnf acc = unit_ideal();
    int n = e;
    IdealHnf sq = base;
    while (n > 0) {
        if (n & 1) acc = ideal_mul(acc, sq);
        n >>= 1;
        if (n) sq = ideal_mul(sq, sq);
    }
    std::lock_guard<std::mutex> lk(mu_);
    return prime_powers_.emplace(std::make_tuple(p, index, e), std::move(acc)).first->second;
}

IdealHnf IdealArith::hnf_of(const FactoredIdeal& I) {
    IdealHnf acc = unit_ideal();
    for (auto& pf : I.factors) acc = ideal_mul(acc, prime_power(pf.p, pf.index, pf.exp));
    return acc;
}

IdealHnf IdealArith::principal_ideal(const AlgInt& g) const {
    return ideal_from_generators({g});
}

bool IdealArith::divides(const IdealHnf& n, const AlgInt& x) const {
    return solve_upper_triangular(n.H, x).has_value();
}

bool IdealArith::ideal_divides(const IdealHnf& a, const IdealHnf& b) const {
    for (int j = 0; j < b.H.c; j++)
        if (!solve_upper_triangular(a.H, b.H.col(j)).has_value()) return false;
    return true;
}

// ------------------------------------------------------------ enumeration

std::vector<std::pair<u64, int>> IdealArith::factor_integer(const Int& n) {
    DLAB_CHECK(n >= 1, "factor_integer needs n >= 1");
    DLAB_CHECK(n.fits_ulong_p(), "factor_integer range");
    u64 v = n.get_ui();
    std::vector<std::pair<u64, int>> out;
    if (v == 1) return out;
    ensure_primes(isqrt_u64(v) + 1);
    for (u64 p : small_primes_) {
        if (p * p > v) break;
        if (v % p == 0) {
            int e = 0;
            while (v % p == 0) v /= p, e++;
            out.push_back({p, e});
        }
    }
    if (v > 1) out.push_back({v, 1});
    return out;
}

namespace {

void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        cur.push_back(total);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; v++) {
        cur.push_back(v);
        compositions(total - v, parts - 1, cur, emit);
        cur.pop_back();
    }
}

}  // namespace

Int IdealArith::a_K(const Int& n) {
    if (n == 1) return 1;
    Int count = 1;
    for (auto [p, a] : factor_integer(n)) {
        const SplitInfo& s = split_prime(p);
        if (a % s.f != 0) return 0;
        count *= binom_int(a / s.f + s.r - 1, s.r - 1);
    }
    return count;
}

std::vector<FactoredIdeal> IdealArith::ideals_of_norm(const Int& n) {
    std::vector<FactoredIdeal> out;
    if (n == 1) {
        out.push_back(FactoredIdeal{});
        return out;
    }
    auto fac = factor_integer(n);
    std::vector<std::vector<std::vector<PrimeFactor>>> options;  // per prime p
    for (auto [p, a] : fac) {
        const SplitInfo& s = split_prime(p);
        if (a % s.f != 0) return {};
        int total = a / s.f;
        std::vector<std::vector<PrimeFactor>> opts;
        std::vector<int> cur;
        compositions(total, s.r, cur, [&](const std::vector<int>& comp) {
            std::vector<PrimeFactor> fs;
            for (int i = 0; i < s.r; i++)
                if (comp[i] > 0) fs.push_back({p, i, s.f, comp[i]});
            opts.push_back(std::move(fs));
        });
        options.push_back(std::move(opts));
    }
    // cartesian product
    std::vector<FactoredIdeal> acc = {FactoredIdeal{}};
    for (auto& opts : options) {
        std::vector<FactoredIdeal> next;
        for (auto& base : acc)
            for (auto& o : opts) {
                FactoredIdeal fi = base;
                fi.factors.insert(fi.factors.end(), o.begin(), o.end());
                next.push_back(std::move(fi));
            }
        acc = std::move(next);
    }
    for (auto& fi : acc) {
        fi.norm = 1;
        for (auto& pf : fi.factors) fi.norm *= pow_int(Int((long)pf.p), pf.fdeg * pf.exp);
        DLAB_CHECK(fi.norm == n, "ideals_of_norm: norm mismatch");
    }
    std::sort(acc.begin(), acc.end(), [](const FactoredIdeal& a, const FactoredIdeal& b) {
        auto key = [](const FactoredIdeal& x) {
            std::vector<std::tuple<u64, int, int>> v;
            for (auto& pf : x.factors) v.push_back({pf.p, pf.index, pf.exp});
            return v;
        };
        return key(a) < key(b);
    });
    return acc;
}

std::vector<FactoredIdeal> IdealArith::ideals_of_norm_upto(i64 N, bool include_unit) {
    std::vector<FactoredIdeal> out;
    if (include_unit) out.push_back(FactoredIdeal{});
    for (i64 n = 2; n <= N; n++) {
        auto v = ideals_of_norm(Int(n));
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

StarSharpFlat IdealArith::star_sharp_flat(const Int& n) {
    StarSharpFlat r{1, 1, 1};
    for (auto [p, a] : factor_integer(n)) {
        const SplitInfo& s = split_prime(p);
        int ceil_af = (a + s.f - 1) / s.f;
        r.star *= pow_int(Int((long)p), s.f * ceil_af);
        if (s.f == 1)
            r.sharp *= pow_int(Int((long)p), a);
        else
            r.flat *= pow_int(Int((long)p), a);
    }
    return r;
}

// -------------------------------------------------------------------- mu

namespace {

// nonzero local coefficient for an exponent vector over the primes above p:
// with S = sum a_i and m = #{a_i > 0}, mu = (-1)^(S-t) * binom(m-1, S-t)
// when 0 <= S-t <= m-1, else 0.
long local_mu_coeff(const std::vector<int>& a, int t) {
    int S = 0, m = 0;
    for (int v : a) {
        S += v;
        if (v > 0) m++;
    }
    int lo = S - t;
    if (lo < 0 || lo > m - 1) return 0;
    Int b = binom_int(m - 1, lo);
    DLAB_CHECK(b.fits_slong_p(), "mu coefficient overflow");
    return (lo % 2 == 0 ? 1 : -1) * b.get_si();
}

}  // namespace

MuCoefficients IdealArith::mu_coefficients_prime_power(u64 p, int alpha) {
    DLAB_CHECK(alpha >= 1, "mu prime power exponent");
    const SplitInfo& s = split_prime(p);
    int t = (alpha + s.f - 1) / s.f;  // ceil(alpha / f)
    MuCoefficients mu;
    mu.n = pow_int(Int((long)p), alpha);
    std::vector<int> cur(s.r, 0);
    // exponent vectors with a_i <= t and t <= S <= t + r - 1 (support region)
    auto rec = [&](auto&& self, int pos, int sum) -> void {
        if (sum > t + s.r - 1) return;
        if (pos == s.r) {
            if (sum < t) return;
            long c = local_mu_coeff(cur, t);
            if (c == 0) return;
            FactoredIdeal fi;
            for (int i = 0; i < s.r; i++)
                if (cur[i] > 0) fi.factors.push_back({p, i, s.f, cur[i]});
            fi.norm = pow_int(Int((long)p), s.f * sum);
            MuCoefficients::Entry e;
            e.hnf = hnf_of(fi);
            e.ideal = std::move(fi);
            e.coeff = c;
            mu.entries.push_back(std::move(e));
            return;
        }
        for (int v = 0; v <= t; v++) {
            cur[pos] = v;
            self(self, pos + 1, sum + v);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, 0);
    std::sort(mu.entries.begin(), mu.entries.end(),
              [](const MuCoefficients::Entry& a, const MuCoefficients::Entry& b) {
                  return a.hnf < b.hnf;
              });
    return mu;
}

MuCoefficients IdealArith::mu_coefficients(const Int& n) {
    MuCoefficients mu;
    mu.n = n;
    std::vector<MuCoefficients::Entry> acc;
    {
        MuCoefficients::Entry unit;
        unit.hnf = unit_ideal();
        unit.ideal = FactoredIdeal{};
        unit.coeff = 1;
        acc.push_back(std::move(unit));
    }
    for (auto [p, a] : factor_integer(n)) {
        MuCoefficients local = mu_coefficients_prime_power(p, a);
        std::vector<MuCoefficients::Entry> next;
        for (auto& base : acc)
            for (auto& le : local.entries) {
                MuCoefficients::Entry e;
                e.ideal = base.ideal;
                e.ideal.factors.insert(e.ideal.factors.end(), le.ideal.factors.begin(),
                                       le.ideal.factors.end());
                e.ideal.norm = base.ideal.norm * le.ideal.norm;
                e.hnf = ideal_mul(base.hnf, le.hnf);
                e.coeff = base.coeff * le.coeff;
                next.push_back(std::move(e));
            }
        acc = std::move(next);
    }
    mu.entries = std::move(acc);
    std::sort(mu.entries.begin(), mu.entries.end(),
              [](const MuCoefficients::Entry& a, const MuCoefficients::Entry& b) {
                  return a.hnf < b.hnf;
              });
    return mu;
}

MuCoefficients IdealArith::mu_coefficients_bruteforce(const Int& n) {
    // divisors of lcm{q : Nq = n*} are the exponent boxes prod p_i^{<=t_p}
    struct PrimeSlot {
        u64 p;
        int index, f, t;
    };
    std::vector<PrimeSlot> slots;
    std::vector<std::pair<u64, int>> nf = factor_integer(n);
    for (auto [p, a] : nf) {
        const SplitInfo& s = split_prime(p);
        int t = (a + s.f - 1) / s.f;
        for (int i = 0; i < s.r; i++) slots.push_back({p, i, s.f, t});
    }
    std::vector<std::vector<int>> divisors;  // exponent per slot
    std::vector<int> cur(slots.size(), 0);
    auto rec = [&](auto&& self, size_t pos) -> void {
        if (pos == slots.size()) {
            divisors.push_back(cur);
            return;
        }
        for (int v = 0; v <= slots[pos].t; v++) {
            cur[pos] = v;
            self(self, pos + 1);
        }
        cur[pos] = 0;
    };
    rec(rec, 0);

    auto norm_of = [&](const std::vector<int>& d) {
        Int norm = 1;
        for (size_t i = 0; i < slots.size(); i++)
            norm *= pow_int(Int((long)slots[i].p), slots[i].f * d[i]);
        return norm;
    };
    auto n_divides_norm = [&](const std::vector<int>& d) {
        for (auto [p, a] : nf) {
            long vp = 0;
            for (size_t i = 0; i < slots.size(); i++)
                if (slots[i].p == p) vp += (long)slots[i].f * d[i];
            if (vp < a) return false;
        }
        return true;
    };
    // order compatible with divisibility
    std::sort(divisors.begin(), divisors.end(), [&](const auto& a, const auto& b) {
        Int na = norm_of(a), nb = norm_of(b);
        if (na != nb) return na < nb;
        return a < b;
    });
    std::vector<long> coeff(divisors.size(), 0);
    for (size_t i = 0; i < divisors.size(); i++) {
        long target = n_divides_norm(divisors[i]) ? 1 : 0;
        long sum = 0;
        for (size_t j = 0; j < i; j++) {
            bool div = true;
            for (size_t s = 0; s < slots.size(); s++)
                if (divisors[j][s] > divisors[i][s]) div = false;
            if (div) sum += coeff[j];
        }
        coeff[i] = target - sum;
    }
    MuCoefficients mu;
    mu.n = n;
    for (size_t i = 0; i < divisors.size(); i++) {
        if (coeff[i] == 0) continue;
        FactoredIdeal fi;
        for (size_t s = 0; s < slots.size(); s++)
            if (divisors[i][s] > 0)
                fi.factors.push_back({slots[s].p, slots[s].index, slots[s].f, divisors[i][s]});
        fi.norm = norm_of(divisors[i]);
        MuCoefficients::Entry e;
        e.hnf = hnf_of(fi);
        e.ideal = std::move(fi);
        e.coeff = coeff[i];
        mu.entries.push_back(std::move(e));
    }
    std::sort(mu.entries.begin(), mu.entries.end(),
              [](const MuCoefficients::Entry& a, const MuCoefficients::Entry& b) {
                  return a.hnf < b.hnf;
              });
    return mu;
}

// ------------------------------------------------------ principal generator

AlgInt IdealArith::principal_generator(const IdealHnf& n) {
    const int k = F_.k;
    if (n.norm == 1) return F_.one();

    // Gram of the ideal basis under the Minkowski embedding
    std::vector<std::vector<RComplex>> emb(k);
    for (int j = 0; j < k; j++) emb[j] = F_.embeddings(n.H.col(j)).values;
    std::vector<std::vector<double>> G(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; i++)
        for (int j = 0; j < k; j++) {
            double s = 0;
            for (int t = 0; t < k; t++) {
                s += emb[i][t].re.to_double() * emb[j][t].re.to_double() +
                     emb[i][t].im.to_double() * emb[j][t].im.to_double();
            }
            G[i][j] = s;
        }
    double nk = std::pow(n.norm.get_d(), 1.0 / k);
    // Minkowski-style start: the ideal lattice has covolume Nn sqrt|d|, so
    // short vectors exist at |x^sigma| ~ (Nn)^{1/k} d^{1/2k}; grow if the
    // short ones fail to generate
    double gamma = 1.3 * std::pow(std::fabs(F_.discriminant.get_d()), 0.5 / k);

    for (int attempt = 0; attempt < 12; attempt++, gamma *= 1.6) {
        double bound = k * gamma * gamma * nk * nk;
        // Fincke-Pohst setup
        std::vector<std::vector<double>> q(k, std::vector<double>(k, 0.0));
        bool ok = true;
        for (int i = 0; i < k && ok; i++) {
            double s = G[i][i];
            for (int l = 0; l < i; l++) s -= q[l][l] * q[l][i] * q[l][i];
            if (s <= 0) ok = false;
            q[i][i] = s;
            for (int j = i + 1; j < k; j++) {
                double t = G[i][j];
                for (int l = 0; l < i; l++) t -= q[l][l] * q[l][i] * q[l][j];
                q[i][j] = t / q[i][i];
            }
        }
        DLAB_CHECK(ok, "principal_generator: bad Gram");

        std::vector<AlgInt> found;
        std::vector<long> u(k, 0);
        auto rec = [&](auto&& self, int lvl, double budget) -> void {
            if (lvl < 0) {
                AlgInt x(k, Int(0));
                bool zero = true;
                for (int i = 0; i < k; i++) {
                    if (u[i] == 0) continue;
                    zero = false;
                    for (int r = 0; r < k; r++) x[r] += Int(u[i]) * n.H.at(r, i);
                }
                if (zero) return;
                Int nrm = F_.norm(x);
                if (nrm == n.norm || nrm == -n.norm) found.push_back(x);
                return;
            }
            double center = 0;
            for (int j = lvl + 1; j < k; j++) center += q[lvl][j] * (double)u[j];
            double radius = std::sqrt(std::max(budget, 0.0) / q[lvl][lvl]);
            long lo = (long)std::ceil(-center - radius - 1e-9);
            long hi = (long)std::floor(-center + radius + 1e-9);
            for (long v = lo; v <= hi; v++) {
                u[lvl] = v;
                double contrib = q[lvl][lvl] * (v + center) * (v + center);
                self(self, lvl - 1, budget - contrib);
            }
            u[lvl] = 0;
        };
        rec(rec, k - 1, bound);
        if (!found.empty()) {
            std::sort(found.begin(), found.end());
            AlgInt g = F_.balance_generator(found.front());
            DLAB_CHECK(divides(n, g), "generator not in ideal");
            Int nrm = F_.norm(g);
            DLAB_CHECK(nrm == n.norm || nrm == -n.norm, "generator norm mismatch");
            return g;
        }
    }
    throw BudgetError("principal_generator: no generator within enumeration bound "
                      "(class number > 1 or corrupt data)");
}

}  // namespace dlab
