// Command-line front end: config-driven experiment runs, the acceptance gate,
// and direct access to the tree / summation-operator / envelope / oracle
// building blocks.  Exit codes: 0 success, 1 usage or schema error, 2
// scientific failure (violated band, failed verification, refused regime).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entro/acceptance.hpp"
#include "entro/experiments.hpp"

using namespace entro;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file '" + path + "'");
    out << body;
}

// Preset name or an inline JSON object.
json profile_json(const std::string& s) {
    if (!s.empty() && s.front() == '{') return json::parse(s);
    return json(s);
}

// Map every failure mode onto the documented exit codes.
template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ScaleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnsupportedRegime& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleProfile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Shared run path: execute, write artifacts when requested, echo results.
// `primary` selects the artifact echoed to stdout when no --out directory is
// given: nullptr = nothing, "" = first artifact, otherwise the named one.
int execute(json cfg, int jobs, const std::uint64_t* seed_override, const std::string& out_dir,
            const char* primary) {
    std::uint64_t seed = experiment_seed(cfg, seed_override);
    auto t0 = std::chrono::steady_clock::now();
    ExperimentOutcome out = run_experiment(cfg, jobs, seed);
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!out_dir.empty()) {
        write_experiment_artifacts(out, cfg, seed, out_dir, ms);
        for (const auto& [name, body] : out.files)
            std::cerr << "wrote " << out_dir << "/" << out.name << "/" << name << "\n";
        std::cerr << "wrote " << out_dir << "/" << out.name << "/meta.json\n";
    } else if (primary != nullptr && !out.files.empty()) {
        if (primary[0] == '\0') {
            std::cout << out.files.front().second;
        } else {
            for (const auto& [name, body] : out.files)
                if (name == primary) {
                    std::cout << body;
                    break;
                }
        }
    }
    for (const std::string& n : out.notes) std::cerr << n << "\n";
    std::cerr << "verdict: " << (out.pass ? "pass" : "fail") << "\n";
    return out.pass ? 0 : 2;
}

struct WeightFlags {
    double kappa_u = 0.0, alpha_u = 0.0, lambda_u = 0.0;
    double kappa_w = 0.0, alpha_w = 0.0, lambda_w = 0.0;
    int m_star = 1;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--kappa-u", kappa_u, "exponential decay rate of u");
        cmd->add_option("--alpha-u", alpha_u, "polynomial log correction of u");
        cmd->add_option("--lambda-u", lambda_u, "slowly varying log-power of u");
        cmd->add_option("--kappa-w", kappa_w, "exponential decay rate of w");
        cmd->add_option("--alpha-w", alpha_w, "polynomial log correction of w");
        cmd->add_option("--lambda-w", lambda_w, "slowly varying log-power of w");
        cmd->add_option("--m-star", m_star, "level stride of the profile");
    }
    json to_json() const {
        json j = {{"kappa_u", kappa_u}, {"alpha_u", alpha_u}, {"kappa_w", kappa_w},
                  {"alpha_w", alpha_w}, {"m_star", m_star}};
        if (lambda_u != 0.0) j["lambda_u"] = lambda_u;
        if (lambda_w != 0.0) j["lambda_w"] = lambda_w;
        return j;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-number toolkit: order envelopes, balanced tree partitions, "
                 "two-weight summation operators, and brute-force covering oracles"};
    app.require_subcommand(1);
    app.fallthrough();  // let --jobs/--seed/--out appear after the subcommand

    int jobs = 1;
    std::uint64_t seed_flag = 0;
    std::string out_dir;
    app.add_option("--jobs", jobs, "worker threads for cell-parallel experiments")
        ->check(CLI::PositiveNumber);
    CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "seed override");
    app.add_option("--out", out_dir, "artifact directory (results + meta.json)");

    // ---- run ----
    auto* cmd_run = app.add_subcommand("run", "execute an experiment from a JSON config");
    std::string config_path;
    cmd_run->add_option("config", config_path, "experiment config (single JSON document)")
        ->required();

    // ---- acceptance ----
    auto* cmd_accept = app.add_subcommand("acceptance", "run the acceptance criteria");
    std::vector<std::string> suites;
    double band = 16.0;
    cmd_accept->add_option("suite", suites, "criterion names (default all)");
    cmd_accept->add_option("--band", band, "ratio band for the schutt-band criterion");

    // ---- tree ----
    auto* cmd_tree = app.add_subcommand("tree", "generate, verify, partition trees");
    cmd_tree->require_subcommand(1);
    std::string profile_str = "binary";
    int depth = 6, offset = 0;
    long long guard = 10000000;
    auto* tree_gen = cmd_tree->add_subcommand("gen", "generate a tree from a branching profile");
    tree_gen->add_option("--profile", profile_str,
                         "preset (binary|quaternary|logarithmic) or inline JSON");
    tree_gen->add_option("--depth", depth, "levels below the root")->required();
    tree_gen->add_option("--offset", offset, "global level of the root");
    tree_gen->add_option("--guard", guard, "vertex count guard");

    auto* tree_verify = cmd_tree->add_subcommand("verify", "re-check the branching condition");
    std::string tree_path;
    tree_verify->add_option("file", tree_path, "serialized tree (id parent level)")->required();
    tree_verify->add_option("--profile", profile_str,
                            "preset (binary|quaternary|logarithmic) or inline JSON");
    tree_verify->add_option("--offset", offset, "global level of the root");

    auto* tree_part = cmd_tree->add_subcommand("partition", "balanced partition of a tree");
    long long parts_n = 1;
    std::string weights_path;
    tree_part->add_option("file", tree_path, "serialized tree (id parent level)")->required();
    tree_part->add_option("--parts", parts_n, "target part count n")->required();
    tree_part->add_option("--weights", weights_path, "vertex weights, one per line (default 1)");

    // ---- sumop ----
    auto* cmd_sumop = app.add_subcommand("sumop", "summation operator norms and bands");
    cmd_sumop->require_subcommand(1);
    auto* sumop_norm = cmd_sumop->add_subcommand("norm", "norm bounds for one operator");
    std::string op_path, sumop_tree_path, dump_path, p_str = "2", q_str = "2";
    std::vector<long long> random_vk;
    WeightFlags wf_norm;
    int restarts = 64;
    sumop_norm->add_option("--operator", op_path, "operator dump file (tree rows + level rows)");
    sumop_norm->add_option("--tree", sumop_tree_path, "serialized tree; weights from profile flags");
    sumop_norm->add_option("--random", random_vk, "random tree: vertex count and branching")
        ->expected(2);
    sumop_norm->add_option("--offset", offset, "global level of the root (with --tree)");
    wf_norm.add_to(sumop_norm);
    sumop_norm->add_option("-p,--p", p_str, "source exponent (number or inf)");
    sumop_norm->add_option("-q,--q", q_str, "target exponent (number or inf)");
    sumop_norm->add_option("--restarts", restarts, "ascent restarts");
    sumop_norm->add_option("--dump", dump_path, "also write the operator dump here");

    auto* sumop_band = cmd_sumop->add_subcommand("band", "per-level norm against the closed form");
    WeightFlags wf_band;
    int j_lo = 2, j_hi = 8, band_depth = 8;
    double cj_band = 32.0;
    sumop_band->add_option("--profile", profile_str,
                           "preset (binary|quaternary|logarithmic) or inline JSON");
    wf_band.add_to(sumop_band);
    sumop_band->add_option("-p,--p", p_str, "source exponent");
    sumop_band->add_option("-q,--q", q_str, "target exponent");
    sumop_band->add_option("--j-lo", j_lo, "first level");
    sumop_band->add_option("--j-hi", j_hi, "last level");
    sumop_band->add_option("--depth", band_depth, "generated subtree depth");
    sumop_band->add_option("--restarts", restarts, "ascent restarts outside exact regimes");
    sumop_band->add_option("--band", cj_band, "allowed max/min ratio");

    // ---- envelope ----
    auto* cmd_env = app.add_subcommand("envelope", "closed-form order envelopes");
    auto* env_eval = cmd_env->add_subcommand("eval", "evaluate an envelope");
    cmd_env->require_subcommand(1);
    std::string family = "tree-decay";
    WeightFlags wf_env;
    long long n_single = 0;
    int n_from = 4, n_to = 20;
    double sob_r = 1.0, sob_d = 1.0, beta_g = 0.0, alpha_g = 0.0, lambda_g = 0.0;
    double beta_v = 0.0, alpha_v = 0.0, lambda_v = 0.0;
    env_eval->add_option("--family", family, "tree-decay | tree-flat | sobolev");
    env_eval->add_option("--profile", profile_str,
                         "preset (binary|quaternary|logarithmic) or inline JSON");
    wf_env.add_to(env_eval);
    env_eval->add_option("-p,--p", p_str, "source exponent");
    env_eval->add_option("-q,--q", q_str, "target exponent");
    env_eval->add_option("-n,--n", n_single, "single argument; prints branch and value");
    env_eval->add_option("--n-from", n_from, "log2 of the first grid point");
    env_eval->add_option("--n-to", n_to, "log2 of the last grid point");
    env_eval->add_option("--r", sob_r, "smoothness (sobolev)");
    env_eval->add_option("--d", sob_d, "ambient dimension (sobolev)");
    env_eval->add_option("--beta-g", beta_g, "source weight exponent (sobolev)");
    env_eval->add_option("--alpha-g", alpha_g, "source log correction (sobolev)");
    env_eval->add_option("--lambda-g", lambda_g, "source slowly varying power (sobolev)");
    env_eval->add_option("--beta-v", beta_v, "target weight exponent (sobolev)");
    env_eval->add_option("--alpha-v", alpha_v, "target log correction (sobolev)");
    env_eval->add_option("--lambda-v", lambda_v, "target slowly varying power (sobolev)");

    // ---- entropy ----
    auto* cmd_ent = app.add_subcommand("entropy", "brute-force entropy-number oracle");
    auto* ent_oracle = cmd_ent->add_subcommand("oracle", "bracket e_k for a small matrix");
    cmd_ent->require_subcommand(1);
    int id_dim = 0, k_max = 6;
    double mesh = 0.05;
    std::vector<double> diag_entries;
    std::vector<long long> rand_rc;
    int oracle_restarts = 32;
    ent_oracle->add_option("--identity", id_dim, "identity on this dimension (<= 4)");
    ent_oracle->add_option("--diagonal", diag_entries, "diagonal entries (<= 4)");
    ent_oracle->add_option("--random", rand_rc, "random matrix: rows cols")->expected(2);
    ent_oracle->add_option("-p,--p", p_str, "source exponent");
    ent_oracle->add_option("-q,--q", q_str, "target exponent");
    ent_oracle->add_option("-k,--k", k_max, "largest entropy index");
    ent_oracle->add_option("--mesh", mesh, "net mesh in (0, 1/2]");
    ent_oracle->add_option("--restarts", oracle_restarts, "greedy restarts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // every parse failure is a usage error
    }

    const std::uint64_t* seed_ptr = seed_opt->count() ? &seed_flag : nullptr;
    std::uint64_t seed_or_zero = seed_opt->count() ? seed_flag : 0;

    if (cmd_run->parsed()) {
        return guarded([&] {
            json cfg = json::parse(read_file(config_path));
            std::string dir = out_dir;
            if (dir.empty() && cfg.contains("out") && cfg["out"].is_string())
                dir = cfg["out"].get<std::string>();
            if (dir.empty()) dir = "out";
            return execute(std::move(cfg), jobs, seed_ptr, dir, nullptr);
        });
    }

    if (cmd_accept->parsed()) {
        return guarded([&] {
            AcceptanceOptions opts;
            if (seed_ptr) opts.seed = *seed_ptr;
            opts.jobs = jobs;
            opts.schutt_band = band;
            return run_acceptance(resolve_acceptance_subset(suites), opts, std::cout);
        });
    }

    if (cmd_tree->parsed()) {
        return guarded([&] {
            if (tree_gen->parsed()) {
                json cfg = {{"kind", "tree-gen"}, {"seed", 0},       {"profile", profile_json(profile_str)},
                            {"depth", depth},    {"level_offset", offset}, {"vertex_guard", guard}};
                return execute(std::move(cfg), jobs, seed_ptr, out_dir, "tree.txt");
            }
            if (tree_verify->parsed()) {
                RootedTree t = parse_tree(read_file(tree_path));
                HSetProfile prof = expdetail::hset_from_json(profile_json(profile_str));
                HSetConditionReport rep = verify_hset_condition(t, prof, 2000000, offset);
                std::cout << "vertices " << t.size() << "\ndepth " << t.depth() << "\nquality ["
                          << rep.q_min << ", " << rep.q_max << "]\nband [" << 1.0 / prof.c_star
                          << ", " << prof.c_star << "]\nresult "
                          << (rep.pass ? "pass" : "fail") << "\n";
                return rep.pass ? 0 : 2;
            }
            // partition
            RootedTree t = parse_tree(read_file(tree_path));
            std::vector<double> phi(static_cast<size_t>(t.size()), 1.0);
            if (!weights_path.empty()) {
                std::istringstream in(read_file(weights_path));
                phi.clear();
                double x;
                while (in >> x) phi.push_back(x);
                if (static_cast<int>(phi.size()) != t.size())
                    throw ConfigError("weights file: expected " + std::to_string(t.size()) +
                                      " values, got " + std::to_string(phi.size()));
            }
            BalancedPartitionReport rep = partition_balanced(t, phi, parts_n);
            PartitionCheck chk = verify_partition_lemma(t, phi, rep);
            std::cout << serialize_partition(rep.parts);
            std::cerr << "parts " << rep.parts_count << ", witness C " << rep.witness_C << "\n";
            if (!chk.pass) {
                std::cerr << "error: " << chk.violation << "\n";
                return 2;
            }
            return 0;
        });
    }

    if (cmd_sumop->parsed()) {
        return guarded([&] {
            Exponent p = Exponent::parse(p_str), q = Exponent::parse(q_str);
            if (sumop_norm->parsed()) {
                SummationOperator s;
                if (!op_path.empty()) {
                    s = parse_operator(read_file(op_path), p, q);
                } else if (!sumop_tree_path.empty()) {
                    RootedTree t = parse_tree(read_file(sumop_tree_path));
                    s = SummationOperator::from_profile(t, expdetail::weights_from_json(
                                                               wf_norm.to_json()),
                                                        p, q, offset);
                } else if (random_vk.size() == 2) {
                    RootedTree t = random_tree(seed_or_zero, static_cast<int>(random_vk[0]),
                                               static_cast<int>(random_vk[1]));
                    s = SummationOperator::from_profile(t, expdetail::weights_from_json(
                                                               wf_norm.to_json()),
                                                        p, q, 0);
                } else {
                    throw ConfigError("sumop norm: need --operator, --tree, or --random");
                }
                NormEstimate est = norm_estimate(s, restarts, seed_or_zero);
                std::cout << "method,value\n";
                std::cout << "estimate," << expdetail::fd(est.value) << "\n";
                std::cout << "upper," << expdetail::fd(norm_upper_bound(s)) << "\n";
                if (norm_exact_available(p, q))
                    std::cout << "exact," << expdetail::fd(norm_exact(s)) << "\n";
                if (!dump_path.empty()) write_file(dump_path, serialize_operator(s));
                return 0;
            }
            // band
            json cfg = {{"kind", "cj-band"},
                        {"seed", 0},
                        {"profile", profile_json(profile_str)},
                        {"weights", wf_band.to_json()},
                        {"p", p_str},
                        {"q", q_str},
                        {"j_lo", j_lo},
                        {"j_hi", j_hi},
                        {"depth", band_depth},
                        {"restarts", restarts},
                        {"band", cj_band}};
            return execute(std::move(cfg), jobs, seed_ptr, out_dir, "");
        });
    }

    if (cmd_env->parsed()) {
        return guarded([&] {
            json cfg = {{"kind", "envelope"}, {"seed", 0}, {"family", family},
                        {"profile", profile_json(profile_str)}, {"p", p_str}, {"q", q_str},
                        {"n_log2_from", n_from}, {"n_log2_to", n_to}};
            if (family == "sobolev") {
                cfg["r"] = sob_r;
                cfg["d"] = sob_d;
                cfg["beta_g"] = beta_g;
                cfg["alpha_g"] = alpha_g;
                cfg["beta_v"] = beta_v;
                cfg["alpha_v"] = alpha_v;
                if (lambda_g != 0.0) cfg["lambda_g"] = lambda_g;
                if (lambda_v != 0.0) cfg["lambda_v"] = lambda_v;
            } else {
                cfg["weights"] = wf_env.to_json();
            }
            if (n_single > 0) {
                EnvelopeValue v = envelope_point(cfg, n_single);
                std::cout << v.case_id << " " << expdetail::fd(v.value) << "\n";
                return 0;
            }
            return execute(std::move(cfg), jobs, seed_ptr, out_dir, "");
        });
    }

    if (cmd_ent->parsed()) {
        return guarded([&] {
            json op;
            if (id_dim > 0) op = {{"type", "identity"}, {"dim", id_dim}};
            else if (!diag_entries.empty()) op = {{"type", "diagonal"}, {"entries", diag_entries}};
            else if (rand_rc.size() == 2)
                op = {{"type", "random"}, {"rows", rand_rc[0]}, {"cols", rand_rc[1]}};
            else throw ConfigError("entropy oracle: need --identity, --diagonal, or --random");
            json cfg = {{"kind", "entropy-oracle"}, {"seed", 0},   {"op", op},
                        {"p", p_str},               {"q", q_str},  {"k_max", k_max},
                        {"mesh", mesh},             {"restarts", oracle_restarts}};
            return execute(std::move(cfg), jobs, seed_ptr, out_dir, "");
        });
    }

    std::cerr << "error: no subcommand\n";
    return 1;
}
