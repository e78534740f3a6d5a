// Acceptance gate runner.  Prints one pass/fail line per criterion and exits
// 0 (all pass), 2 (scientific failure), or 1 (usage).

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "entro/acceptance.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: acceptance [suite...] [--seed S] [--jobs N] [--band B]\n"
          "  suite    criterion names (default: all); 'all' selects everything,\n"
          "           an explicit empty string selects nothing (vacuous pass)\n"
          "  --seed   base seed for every randomized criterion\n"
          "  --jobs   worker threads for the parallel criteria\n"
          "  --band   ratio band for the schutt-band criterion (default 16)\n"
          "suites:";
    for (const std::string& n : entro::acceptance_names()) os << " " << n;
    os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    entro::AcceptanceOptions opts;
    std::vector<std::string> tokens;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto value = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "error: missing value after " << arg << "\n";
                std::exit(1);
            }
            return argv[++i];
        };
        try {
            if (arg == "--seed") opts.seed = std::stoull(value());
            else if (arg == "--jobs") opts.jobs = std::max(1, std::stoi(value()));
            else if (arg == "--band") opts.schutt_band = std::stod(value());
            else if (arg == "-h" || arg == "--help") {
                usage(std::cout);
                return 0;
            } else if (!arg.empty() && arg[0] == '-') {
                std::cerr << "error: unknown flag " << arg << "\n";
                usage(std::cerr);
                return 1;
            } else {
                tokens.push_back(arg);
            }
        } catch (const std::exception&) {
            std::cerr << "error: bad value for " << arg << "\n";
            return 1;
        }
    }
    try {
        std::vector<int> ids = entro::resolve_acceptance_subset(tokens);
        return entro::run_acceptance(ids, opts, std::cout);
    } catch (const entro::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
