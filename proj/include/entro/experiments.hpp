#pragma once

// Config-driven experiment cells behind the CLI `run` subcommand.  Each kind
// validates its parameter block, runs on a worker pool, and reports files to
// write plus a pass/fail verdict.  CSV bodies are deterministic functions of
// the config (seed included); wall-clock data only ever lands in meta.json.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entro/bound_calculus.hpp"
#include "entro/entropy_oracle.hpp"
#include "entro/envelopes.hpp"
#include "entro/errors.hpp"
#include "entro/growth.hpp"
#include "entro/hset.hpp"
#include "entro/kuhn.hpp"
#include "entro/operator_matrix.hpp"
#include "entro/ratefit.hpp"
#include "entro/rng.hpp"
#include "entro/schutt.hpp"
#include "entro/summation.hpp"
#include "entro/tree.hpp"
#include "entro/tree_partition.hpp"

namespace entro {

using json = nlohmann::json;

// Schema violations exit with the usage code; the message names the field.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

namespace expdetail {

inline const json& require_field(const json& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw ConfigError("config: missing field '" + key + "'");
    return *it;
}

inline double num_field(const json& cfg, const std::string& key) {
    const json& v = require_field(cfg, key);
    if (!v.is_number()) throw ConfigError("config: field '" + key + "' must be a number");
    return v.get<double>();
}

inline long long int_field(const json& cfg, const std::string& key) {
    const json& v = require_field(cfg, key);
    if (!v.is_number_integer()) throw ConfigError("config: field '" + key + "' must be an integer");
    return v.get<long long>();
}

inline long long int_or(const json& cfg, const std::string& key, long long dflt) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return dflt;
    if (!it->is_number_integer()) throw ConfigError("config: field '" + key + "' must be an integer");
    return it->get<long long>();
}

inline double num_or(const json& cfg, const std::string& key, double dflt) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return dflt;
    if (!it->is_number()) throw ConfigError("config: field '" + key + "' must be a number");
    return it->get<double>();
}

inline std::string str_field(const json& cfg, const std::string& key) {
    const json& v = require_field(cfg, key);
    if (!v.is_string()) throw ConfigError("config: field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline Exponent exponent_field(const json& cfg, const std::string& key) {
    const json& v = require_field(cfg, key);
    try {
        if (v.is_string()) return Exponent::parse(v.get<std::string>());
        if (v.is_number()) return Exponent::finite(v.get<double>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config: field '" + key + "': " + e.what());
    }
    throw ConfigError("config: field '" + key + "' must be a number or \"inf\"");
}

inline std::string fd(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline HSetProfile hset_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "binary") return HSetProfile::binary();
        if (s == "quaternary") return HSetProfile::quaternary();
        if (s == "logarithmic") return HSetProfile::logarithmic();
        throw ConfigError("config: field 'profile': unknown preset '" + s + "'");
    }
    if (!j.is_object()) throw ConfigError("config: field 'profile' must be a preset name or object");
    TauSpec tau = TauSpec::constant();
    if (j.contains("tau_nu")) tau = TauSpec::log_pow(num_field(j, "tau_nu"));
    try {
        return HSetProfile::make(num_field(j, "theta"), num_field(j, "gamma"), tau,
                                 static_cast<int>(int_or(j, "m_star", 1)),
                                 num_or(j, "c_star", 2.0), num_or(j, "t_floor", 0.25));
    } catch (const InfeasibleProfile& e) {
        throw ConfigError(std::string("config: field 'profile': ") + e.what());
    }
}

inline WeightProfile weights_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: field 'weights' must be an object");
    WeightProfile wp;
    wp.kappa_u = num_or(j, "kappa_u", 0.0);
    wp.alpha_u = num_or(j, "alpha_u", 0.0);
    wp.kappa_w = num_or(j, "kappa_w", 0.0);
    wp.alpha_w = num_or(j, "alpha_w", 0.0);
    wp.m_star = static_cast<int>(int_or(j, "m_star", 1));
    if (j.contains("lambda_u")) wp.rho_u = RhoSpec::log_pow(num_field(j, "lambda_u"));
    if (j.contains("lambda_w")) wp.rho_w = RhoSpec::log_pow(num_field(j, "lambda_w"));
    return wp;
}

inline SigmaSeq sigma_from_json(const json& j) {
    std::string type = str_field(j, "type");
    if (type == "geometric") return GeometricSeq{num_field(j, "c"), num_field(j, "ratio")};
    if (type == "power-law") return PowerLawSeq{num_field(j, "c"), num_field(j, "s")};
    if (type == "finite") {
        const json& vals = require_field(j, "values");
        if (!vals.is_array() || vals.empty())
            throw ConfigError("config: field 'values' must be a non-empty array");
        FiniteSeq f;
        for (const json& v : vals) f.values.push_back(v.get<double>());
        return f;
    }
    throw ConfigError("config: field 'type': unknown sequence '" + type + "'");
}

inline OperatorMatrix op_from_json(const json& j, Exponent p, Exponent q, std::uint64_t seed) {
    std::string type = str_field(j, "type");
    if (type == "identity") {
        long long dim = int_field(j, "dim");
        if (dim < 1 || dim > 4) throw ConfigError("config: field 'dim' must be in [1,4]");
        return OperatorMatrix::identity(static_cast<int>(dim), p, q);
    }
    if (type == "diagonal") {
        const json& e = require_field(j, "entries");
        if (!e.is_array() || e.empty())
            throw ConfigError("config: field 'entries' must be a non-empty array");
        std::vector<double> d;
        for (const json& v : e) d.push_back(v.get<double>());
        return OperatorMatrix::diagonal(d, p, q);
    }
    if (type == "random") {
        long long rows = int_field(j, "rows"), cols = int_field(j, "cols");
        if (rows < 1 || cols < 1 || cols > 4)
            throw ConfigError("config: fields 'rows'/'cols' must be >= 1 with cols <= 4");
        OperatorMatrix T(static_cast<int>(rows), static_cast<int>(cols), p, q);
        SplitMix64 rng(hash_mix(seed, 0x9e3779b97f4a7c15ull));
        for (double& x : T.a) x = 2.0 * rng.next_unit() - 1.0;
        return T;
    }
    throw ConfigError("config: field 'type': unknown operator '" + type + "'");
}

// Tiny worker pool: cells claim indices from a shared counter and write into
// index-addressed slots, so output order never depends on scheduling.
template <class Fn>
inline void parallel_cells(int jobs, int count, Fn&& fn) {
    if (count <= 0) return;
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (std::thread& t : workers) t.join();
    for (std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace expdetail

struct ExperimentOutcome {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;  // human-readable findings, echoed into meta.json
    // filename -> body; CSVs and reports, all timestamp-free
    std::vector<std::pair<std::string, std::string>> files;

    void note(std::string s) { notes.push_back(std::move(s)); }
    void fail(std::string s) {
        pass = false;
        notes.push_back("FAIL: " + std::move(s));
    }
};

// ---------------------------------------------------------------------------
// kind = entropy-oracle: bracket e_k for a small matrix, emit k,lower,upper.

inline ExperimentOutcome run_entropy_oracle_experiment(const json& cfg, std::uint64_t seed) {
    using namespace expdetail;
    ExperimentOutcome out;
    Exponent p = exponent_field(cfg, "p"), q = exponent_field(cfg, "q");
    OperatorMatrix T = op_from_json(require_field(cfg, "op"), p, q, seed);
    int k_max = static_cast<int>(int_or(cfg, "k_max", 6));
    double mesh = num_or(cfg, "mesh", 0.05);
    OracleOptions opts;
    opts.restarts = static_cast<int>(int_or(cfg, "restarts", 32));
    opts.seed_salt = seed;
    OracleProfile prof = entropy_oracle_profile(T, k_max, mesh, opts);
    std::string csv = "k,lower,upper\n";
    for (int k = 1; k <= k_max; ++k) {
        csv += std::to_string(k) + "," + fd(prof.lower[k - 1]) + "," + fd(prof.upper[k - 1]) + "\n";
        if (prof.lower[k - 1] > prof.upper[k - 1])
            out.fail("bracket inverted at k=" + std::to_string(k));
    }
    out.files.emplace_back("results.csv", csv);
    out.note("k_max=" + std::to_string(k_max) + " mesh=" + fd(mesh));
    return out;
}

// ---------------------------------------------------------------------------
// kind = schutt-band: identity blocks nu x nu; envelope over oracle midpoint
// must stay inside [1/band, band] for every (p, q) pair.

struct SchuttBandRow {
    int nu = 0, k = 0;
    Exponent p, q;
    double envelope = 0.0, midpoint = 0.0, ratio = 0.0;
};

struct SchuttBandResult {
    std::vector<SchuttBandRow> rows;
    double ratio_min = 0.0, ratio_max = 0.0;
    double band = 0.0;  // configured threshold
    bool pass = false;
};

inline SchuttBandResult run_schutt_band(const std::vector<int>& nus,
                                        const std::vector<Exponent>& ps,
                                        const std::vector<Exponent>& qs, int k_max,
                                        double band, std::uint64_t seed, int jobs,
                                        int restarts = 8) {
    if (band <= 0.0) throw ConfigError("config: field 'band' must be positive");
    for (int nu : nus)
        if (nu < 1 || nu > 4) throw ConfigError("config: field 'nu' entries must be in [1,4]");
    struct Cell {
        int nu;
        Exponent p, q;
        std::vector<SchuttBandRow> rows;
    };
    std::vector<Cell> cells;
    for (Exponent p : ps)
        for (Exponent q : qs)
            for (int nu : nus) cells.push_back({nu, p, q, {}});

    expdetail::parallel_cells(jobs, static_cast<int>(cells.size()), [&](int i) {
        Cell& c = cells[static_cast<size_t>(i)];
        // finer nets are affordable in low dimension only
        double mesh = c.nu <= 2 ? 0.02 : (c.nu == 3 ? 0.06 : 0.15);
        OracleOptions opts;
        opts.restarts = restarts;
        opts.seed_salt = seed;
        OperatorMatrix id = OperatorMatrix::identity(c.nu, c.p, c.q);
        OracleProfile prof = entropy_oracle_profile(id, k_max, mesh, opts);
        for (int k = 1; k <= k_max; ++k) {
            SchuttBandRow row;
            row.nu = c.nu;
            row.k = k;
            row.p = c.p;
            row.q = c.q;
            row.envelope = schutt_envelope(c.p, c.q, c.nu, k);
            row.midpoint = 0.5 * (prof.lower[k - 1] + prof.upper[k - 1]);
            row.ratio = row.envelope / row.midpoint;
            c.rows.push_back(row);
        }
    });

    SchuttBandResult res;
    res.band = band;
    bool first = true;
    for (const Cell& c : cells)
        for (const SchuttBandRow& row : c.rows) {
            res.rows.push_back(row);
            if (first || row.ratio < res.ratio_min) res.ratio_min = row.ratio;
            if (first || row.ratio > res.ratio_max) res.ratio_max = row.ratio;
            first = false;
        }
    res.pass = !first && res.ratio_min >= 1.0 / band && res.ratio_max <= band;
    return res;
}

inline ExperimentOutcome run_schutt_band_experiment(const json& cfg, std::uint64_t seed,
                                                    int jobs) {
    using namespace expdetail;
    ExperimentOutcome out;
    std::vector<int> nus;
    const json& jnu = require_field(cfg, "nu");
    if (!jnu.is_array() || jnu.empty()) throw ConfigError("config: field 'nu' must be an array");
    for (const json& v : jnu) nus.push_back(v.get<int>());
    auto exps = [&](const char* key) {
        std::vector<Exponent> es;
        const json& je = require_field(cfg, key);
        if (!je.is_array() || je.empty())
            throw ConfigError(std::string("config: field '") + key + "' must be an array");
        for (const json& v : je)
            es.push_back(v.is_string() ? Exponent::parse(v.get<std::string>())
                                       : Exponent::finite(v.get<double>()));
        return es;
    };
    double band = num_or(cfg, "band", 16.0);
    if (!(band > 0.0)) throw ConfigError("config: field 'band' must be positive");
    int k_max = static_cast<int>(int_or(cfg, "k_max", 8));
    SchuttBandResult res = run_schutt_band(nus, exps("p"), exps("q"), k_max, band, seed, jobs,
                                           static_cast<int>(int_or(cfg, "restarts", 8)));
    std::string csv = "nu,p,q,k,envelope,midpoint,ratio\n";
    for (const SchuttBandRow& r : res.rows)
        csv += std::to_string(r.nu) + "," + r.p.str() + "," + r.q.str() + "," +
               std::to_string(r.k) + "," + fd(r.envelope) + "," + fd(r.midpoint) + "," +
               fd(r.ratio) + "\n";
    out.files.emplace_back("results.csv", csv);
    // one realized band constant per (p, q): smallest B with all its ratios in [1/B, B]
    std::vector<std::pair<std::string, double>> pq_band;
    for (const SchuttBandRow& r : res.rows) {
        std::string key = r.p.str() + "," + r.q.str();
        double need = std::max(r.ratio, 1.0 / r.ratio);
        auto it = std::find_if(pq_band.begin(), pq_band.end(),
                               [&](const auto& e) { return e.first == key; });
        if (it == pq_band.end()) pq_band.emplace_back(key, need);
        else it->second = std::max(it->second, need);
    }
    std::string bands = "p,q,band\n";
    for (const auto& [key, b] : pq_band) bands += key + "," + fd(b) + "\n";
    out.files.emplace_back("bands.csv", bands);
    out.note("ratios in [" + fd(res.ratio_min) + ", " + fd(res.ratio_max) + "], band " + fd(band));
    if (!res.pass)
        out.fail("envelope/oracle ratio leaves [1/" + fd(band) + ", " + fd(band) + "]");
    return out;
}

// ---------------------------------------------------------------------------
// kind = kuhn: omega_n series for a diagonal profile.

inline ExperimentOutcome run_kuhn_experiment(const json& cfg) {
    using namespace expdetail;
    ExperimentOutcome out;
    SigmaSeq sig = sigma_from_json(require_field(cfg, "sigma"));
    Exponent p = exponent_field(cfg, "p"), q = exponent_field(cfg, "q");
    long long n_max = int_or(cfg, "n_max", 32);
    if (n_max < 1) throw ConfigError("config: field 'n_max' must be >= 1");
    RateSeries series;
    try {
        for (long long n = 1; n <= n_max; ++n) {
            double w = kuhn_omega(sig, p, q, n);
            if (w > 0.0) series.push(n, w);
        }
        long long dbl_n = int_or(cfg, "doubling_n", 8);
        double dbl = check_doubling(sig, p, q, dbl_n);
        out.note("doubling constant over n<=" + std::to_string(dbl_n) + ": " + fd(dbl));
    } catch (const DivergenceError& e) {
        out.fail(e.what());
    }
    out.files.emplace_back("results.csv", to_csv(series));
    return out;
}

// ---------------------------------------------------------------------------
// kind = tree-gen: generate an h-set tree and re-verify its ratio condition.

inline ExperimentOutcome run_tree_gen_experiment(const json& cfg) {
    using namespace expdetail;
    ExperimentOutcome out;
    HSetProfile prof = hset_from_json(require_field(cfg, "profile"));
    int depth = static_cast<int>(int_field(cfg, "depth"));
    int offset = static_cast<int>(int_or(cfg, "level_offset", 0));
    long long guard = int_or(cfg, "vertex_guard", 10000000);
    HSetTreeResult gen = generate_hset_tree(prof, depth, offset, guard);
    HSetConditionReport rep = verify_hset_condition(gen.tree, prof, 2000000, offset);
    std::string csv = "n,value\n";  // global level -> population, root at `offset`
    for (size_t l = 0; l < gen.level_population.size(); ++l)
        csv += std::to_string(offset + static_cast<long long>(l)) + "," +
               std::to_string(gen.level_population[l]) + "\n";
    out.files.emplace_back("results.csv", csv);
    out.files.emplace_back("tree.txt", serialize_tree(gen.tree));
    out.note("vertices=" + std::to_string(gen.tree.size()) + " quality=[" + fd(rep.q_min) + ", " +
             fd(rep.q_max) + "]");
    if (!gen.deficient_levels.empty())
        out.note("deficient levels: " + std::to_string(gen.deficient_levels.size()));
    if (!rep.pass) out.fail("generated tree violates the ratio condition");
    return out;
}

// ---------------------------------------------------------------------------
// kind = partition-fuzz: random trees/weights, every invariant re-verified.

inline ExperimentOutcome run_partition_fuzz_experiment(const json& cfg, std::uint64_t seed,
                                                       int jobs) {
    using namespace expdetail;
    ExperimentOutcome out;
    long long trials = int_or(cfg, "trees", 100);
    long long v_max = int_or(cfg, "v_max", 1000);
    int dy_depth = static_cast<int>(int_or(cfg, "dyadic_depth", 3));
    if (trials < 1 || v_max < 1 || dy_depth < 0)
        throw ConfigError("config: fields 'trees'/'v_max'/'dyadic_depth' out of range");

    struct Trial {
        long long parts = 0;
        double witness = 0.0, ratio = 0.0;
        std::string violation;
    };
    std::vector<Trial> results(static_cast<size_t>(trials));
    expdetail::parallel_cells(jobs, static_cast<int>(trials), [&](int i) {
        SplitMix64 rng(hash_mix(seed, static_cast<std::uint64_t>(i)));
        int V = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v_max)));
        int k = 2 + static_cast<int>(rng.next_below(4));  // branching in 2..5
        RootedTree t = random_tree(rng.next(), V, k);
        std::vector<double> phi(static_cast<size_t>(V));
        for (double& w : phi) w = 0.125 + rng.next_unit();
        long long n = 1;
        {
            long long cap = 1;
            while (cap * 2 <= V) cap *= 2;
            // dyadic n in [1, cap]
            int emax = 0;
            for (long long c = cap; c > 1; c /= 2) ++emax;
            n = 1LL << rng.next_below(static_cast<std::uint64_t>(emax + 1));
        }
        Trial& tr = results[static_cast<size_t>(i)];
        BalancedPartitionReport rep = partition_balanced(t, phi, n);
        PartitionCheck chk = verify_partition_lemma(t, phi, rep);
        tr.parts = rep.parts_count;
        tr.witness = rep.witness_C;
        tr.ratio = chk.max_nonsingleton_ratio;
        if (!chk.pass) {
            tr.violation = chk.violation;
            return;
        }
        if (rep.parts_count > (2LL * k + 4) * n) {
            tr.violation = "parts_count exceeds (2k+4) n";
            return;
        }
        DyadicChainResult chain = dyadic_chain(t, phi, std::min(dy_depth, 8));
        for (size_t lv = 0; lv + 1 < chain.levels.size(); ++lv) {
            NestingCheck nest = verify_nesting(chain.levels[lv].parts, chain.levels[lv + 1].parts);
            if (!nest.pass) {
                tr.violation = nest.violation;
                return;
            }
        }
    });

    double max_witness = 0.0, max_ratio = 0.0;
    long long failures = 0;
    std::string csv = "trial,parts,witness\n";
    for (size_t i = 0; i < results.size(); ++i) {
        const Trial& tr = results[i];
        csv += std::to_string(i + 1) + "," + std::to_string(tr.parts) + "," + fd(tr.witness) + "\n";
        max_witness = std::max(max_witness, tr.witness);
        max_ratio = std::max(max_ratio, tr.ratio);
        if (!tr.violation.empty()) {
            ++failures;
            if (failures == 1) out.fail("trial " + std::to_string(i + 1) + ": " + tr.violation);
        }
    }
    json report;
    report["trials"] = trials;
    report["failures"] = failures;
    report["max_witness_C"] = max_witness;
    report["max_nonsingleton_ratio"] = max_ratio;
    report["pass"] = failures == 0;
    out.files.emplace_back("results.csv", csv);
    out.files.emplace_back("report.json", report.dump(2) + "\n");
    out.note("max witness C = " + fd(max_witness));
    return out;
}

// ---------------------------------------------------------------------------
// kind = sumop-norm: one operator, all norm routes.

inline SummationOperator sumop_from_json(const json& cfg, Exponent p, Exponent q,
                                         std::uint64_t seed) {
    using namespace expdetail;
    const json& jt = require_field(cfg, "tree");
    std::string type = str_field(jt, "type");
    RootedTree tree;
    int offset = 0;
    if (type == "random") {
        long long v = int_field(jt, "v");
        if (v < 1 || v > 2000000) throw ConfigError("config: field 'v' out of range");
        tree = random_tree(hash_mix(seed, 0x517cc1b727220a95ull), static_cast<int>(v),
                           static_cast<int>(int_or(jt, "k", 3)));
    } else if (type == "hset") {
        HSetProfile prof = hset_from_json(require_field(jt, "profile"));
        offset = static_cast<int>(int_or(jt, "level_offset", 0));
        tree = generate_hset_tree(prof, static_cast<int>(int_field(jt, "depth")), offset,
                                  int_or(jt, "vertex_guard", 2000000))
                   .tree;
    } else {
        throw ConfigError("config: field 'type': unknown tree source '" + type + "'");
    }
    if (cfg.contains("weights"))
        return SummationOperator::from_profile(tree, weights_from_json(cfg["weights"]), p, q,
                                               offset);
    // fallback: unit weights
    std::vector<double> ones(static_cast<size_t>(tree.size()), 1.0);
    return SummationOperator::from_weights(tree, ones, ones, p, q);
}

inline ExperimentOutcome run_sumop_norm_experiment(const json& cfg, std::uint64_t seed) {
    using namespace expdetail;
    ExperimentOutcome out;
    Exponent p = exponent_field(cfg, "p"), q = exponent_field(cfg, "q");
    SummationOperator s = sumop_from_json(cfg, p, q, seed);
    int restarts = static_cast<int>(int_or(cfg, "restarts", 64));
    NormEstimate est = norm_estimate(s, restarts, seed);
    double upper = norm_upper_bound(s);
    std::string csv = "method,value\n";
    csv += "estimate," + fd(est.value) + "\n";
    csv += "upper," + fd(upper) + "\n";
    if (est.value > upper * (1.0 + 1e-9))
        out.fail("ascent estimate exceeds the closed-form upper bound");
    if (norm_exact_available(p, q)) {
        double exact = norm_exact(s);
        csv += "exact," + fd(exact) + "\n";
        double rel = std::fabs(est.value - exact) / std::max(exact, 1e-300);
        out.note("estimate vs exact relative gap: " + fd(rel));
        if (rel > num_or(cfg, "tol", 1e-6))
            out.fail("estimate misses the exact norm beyond tolerance");
    }
    out.note("vertices=" + std::to_string(s.size()));
    out.files.emplace_back("results.csv", csv);
    return out;
}

// ---------------------------------------------------------------------------
// kind = cj-band: per-level subtree norms against the closed form C(j).

inline ExperimentOutcome run_cj_band_experiment_cfg(const json& cfg, std::uint64_t seed) {
    using namespace expdetail;
    ExperimentOutcome out;
    HSetProfile hp = hset_from_json(require_field(cfg, "profile"));
    WeightProfile wp = weights_from_json(require_field(cfg, "weights"));
    Exponent p = exponent_field(cfg, "p"), q = exponent_field(cfg, "q");
    int j_lo = static_cast<int>(int_or(cfg, "j_lo", 2));
    int j_hi = static_cast<int>(int_or(cfg, "j_hi", 8));
    double band = num_or(cfg, "band", 32.0);
    if (!(band > 0.0)) throw ConfigError("config: field 'band' must be positive");
    CjBandOptions opts;
    opts.subtree_depth = static_cast<int>(int_or(cfg, "depth", 8));
    opts.restarts = static_cast<int>(int_or(cfg, "restarts", 24));
    opts.seed = seed;
    opts.vertex_guard = int_or(cfg, "vertex_guard", 2000000);
    CjBandReport rep = cj_band_experiment(wp, hp, p, q, j_lo, j_hi, opts);
    std::string csv = "j,norm,envelope,ratio\n";
    for (const CjBandRow& row : rep.rows)
        csv += std::to_string(row.j) + "," + fd(row.norm) + "," + fd(row.envelope) + "," +
               fd(row.ratio) + "\n";
    out.files.emplace_back("results.csv", csv);
    out.note("band = " + fd(rep.band) + " over j in [" + std::to_string(j_lo) + ", " +
             std::to_string(j_hi) + "]");
    if (rep.band > band)
        out.fail("ratio band " + fd(rep.band) + " exceeds threshold " + fd(band));
    return out;
}

// ---------------------------------------------------------------------------
// kind = envelope: sample a closed-form envelope on a dyadic n-grid.

inline TreeEnvelopeParams tree_envelope_params_from_json(const json& cfg) {
    using namespace expdetail;
    TreeEnvelopeParams par;
    par.profile = hset_from_json(require_field(cfg, "profile"));
    par.weights = weights_from_json(require_field(cfg, "weights"));
    par.p = exponent_field(cfg, "p");
    par.q = exponent_field(cfg, "q");
    return par;
}

inline SobolevEnvelopeParams sobolev_params_from_json(const json& cfg) {
    using namespace expdetail;
    SobolevEnvelopeParams par;
    par.r = num_field(cfg, "r");
    par.d = num_field(cfg, "d");
    par.p = exponent_field(cfg, "p");
    par.q = exponent_field(cfg, "q");
    par.profile = hset_from_json(require_field(cfg, "profile"));
    par.beta_g = num_or(cfg, "beta_g", 0.0);
    par.alpha_g = num_or(cfg, "alpha_g", 0.0);
    par.beta_v = num_or(cfg, "beta_v", 0.0);
    par.alpha_v = num_or(cfg, "alpha_v", 0.0);
    if (cfg.contains("lambda_g")) par.rho_g = RhoSpec::log_pow(num_field(cfg, "lambda_g"));
    if (cfg.contains("lambda_v")) par.rho_v = RhoSpec::log_pow(num_field(cfg, "lambda_v"));
    return par;
}

// One labeled point of whichever envelope family the config names.
inline EnvelopeValue envelope_point(const json& cfg, long long n) {
    using namespace expdetail;
    std::string family = str_field(cfg, "family");
    if (family == "tree-decay") return theorem8_envelope(tree_envelope_params_from_json(cfg), n);
    if (family == "tree-flat") return theorem9_envelope(tree_envelope_params_from_json(cfg), n);
    if (family == "sobolev") {
        SobolevValue v = sobolev_envelopes(sobolev_params_from_json(cfg), n);
        return {v.theorem_id + "/" + v.case_id, v.value};
    }
    throw ConfigError("config: field 'family': unknown envelope family '" + family + "'");
}

inline ExperimentOutcome run_envelope_experiment(const json& cfg) {
    using namespace expdetail;
    ExperimentOutcome out;
    int lo = static_cast<int>(int_or(cfg, "n_log2_from", 4));
    int hi = static_cast<int>(int_or(cfg, "n_log2_to", 20));
    if (lo < 2 || hi < lo) throw ConfigError("config: fields 'n_log2_from'/'n_log2_to' invalid");

    RateSeries series;
    std::string case_id;
    for (int e = lo; e <= hi; ++e) {
        EnvelopeValue v = envelope_point(cfg, 1LL << e);
        series.push(1LL << e, v.value);
        case_id = v.case_id;
    }
    out.files.emplace_back("results.csv", to_csv(series));
    out.note("branch: " + case_id);
    if (cfg.contains("expect_power") && series.size() >= 6) {
        SlopeFit fit = slope_fit(series);
        double want = num_field(cfg, "expect_power");
        out.note("fitted power " + fd(fit.power) + ", expected " + fd(want));
        if (std::fabs(fit.power - want) > num_or(cfg, "tol_power", 0.05))
            out.fail("fitted power off target");
    }
    return out;
}

// ---------------------------------------------------------------------------
// kind = slope: fit a provided or referenced series.

inline ExperimentOutcome run_slope_experiment(const json& cfg) {
    using namespace expdetail;
    ExperimentOutcome out;
    RateSeries series;
    if (cfg.contains("series")) {
        const json& arr = cfg["series"];
        if (!arr.is_array()) throw ConfigError("config: field 'series' must be an array");
        for (const json& row : arr) {
            if (!row.is_array() || row.size() != 2)
                throw ConfigError("config: field 'series' rows must be [n, value]");
            series.push(row[0].get<long long>(), row[1].get<double>());
        }
    } else if (cfg.contains("csv")) {
        std::ifstream in(cfg["csv"].get<std::string>());
        if (!in) throw ConfigError("config: field 'csv': cannot open file");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        series = from_csv(text);
    } else {
        throw ConfigError("config: field 'series' or 'csv' required");
    }
    SlopeFit fit = slope_fit(series);
    std::string csv = "quantity,value\n";
    csv += "power," + fd(fit.power) + "\n";
    csv += "log_power," + fd(fit.log_power) + "\n";
    csv += "intercept," + fd(fit.intercept) + "\n";
    csv += "residual," + fd(fit.residual) + "\n";
    out.files.emplace_back("results.csv", csv);
    out.note("power " + fd(fit.power) + ", log power " + fd(fit.log_power));
    if (cfg.contains("expect_power") &&
        std::fabs(fit.power - num_field(cfg, "expect_power")) > num_or(cfg, "tol_power", 0.05))
        out.fail("fitted power off target");
    if (cfg.contains("expect_log_power") &&
        std::fabs(fit.log_power - num_field(cfg, "expect_log_power")) >
            num_or(cfg, "tol_log_power", 0.5))
        out.fail("fitted log power off target");
    return out;
}

// ---------------------------------------------------------------------------

inline ExperimentOutcome run_experiment(const json& cfg, int jobs, std::uint64_t seed) {
    using namespace expdetail;
    if (!cfg.is_object()) throw ConfigError("config: top level must be a JSON object");
    std::string kind = str_field(cfg, "kind");
    ExperimentOutcome out;
    if (kind == "entropy-oracle") out = run_entropy_oracle_experiment(cfg, seed);
    else if (kind == "schutt-band") out = run_schutt_band_experiment(cfg, seed, jobs);
    else if (kind == "kuhn") out = run_kuhn_experiment(cfg);
    else if (kind == "tree-gen") out = run_tree_gen_experiment(cfg);
    else if (kind == "partition-fuzz") out = run_partition_fuzz_experiment(cfg, seed, jobs);
    else if (kind == "sumop-norm") out = run_sumop_norm_experiment(cfg, seed);
    else if (kind == "cj-band") out = run_cj_band_experiment_cfg(cfg, seed);
    else if (kind == "envelope") out = run_envelope_experiment(cfg);
    else if (kind == "slope") out = run_slope_experiment(cfg);
    else throw ConfigError("config: field 'kind': unknown experiment '" + kind + "'");
    out.name = cfg.contains("name") && cfg["name"].is_string() ? cfg["name"].get<std::string>()
                                                               : kind;
    return out;
}

// Seed resolution: config field unless the CLI provided an override.
inline std::uint64_t experiment_seed(const json& cfg, const std::uint64_t* override_seed) {
    if (override_seed) return *override_seed;
    const json& s = expdetail::require_field(cfg, "seed");
    if (!s.is_number_integer()) throw ConfigError("config: field 'seed' must be an integer");
    return s.get<std::uint64_t>();
}

// Writes artifacts under out_dir/<name>/: every reported file verbatim plus
// meta.json carrying the config echo, timing, and verdict.  Timestamps live
// only here, never in result bodies.
inline void write_experiment_artifacts(const ExperimentOutcome& out, const json& cfg,
                                       std::uint64_t seed, const std::string& out_dir,
                                       double duration_ms) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(out_dir) / out.name;
    fs::create_directories(dir);
    for (const auto& [name, body] : out.files) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        f << body;
    }
    json meta;
    meta["config"] = cfg;
    meta["seed"] = seed;
    meta["verdict"] = out.pass ? "pass" : "fail";
    meta["notes"] = out.notes;
    meta["duration_ms"] = duration_ms;
    meta["generated_at_unix"] = static_cast<long long>(std::time(nullptr));
    meta["library"] = "entro 0.1.0";
    std::ofstream f(dir / "meta.json", std::ios::binary);
    f << meta.dump(2) << "\n";
}

}  // namespace entro
