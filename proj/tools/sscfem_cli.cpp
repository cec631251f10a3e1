// sscfem-cli: run a configured experiment through the C interface.
#include "sscfem/sscfem.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kUsage = 2;
constexpr int kSolver = 3;

void print_line(const char* line, void*) { std::printf("%s\n", line); }

int report(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, ssc_last_error());
    return kUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite element LP solver for one dimensional singular stochastic control"};
    std::string config_path;
    std::optional<std::string> outdir;
    std::optional<std::string> sweep;
    std::optional<unsigned long long> seed;
    bool oracle = false;
    bool mc = false;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value configuration file")->required();
    app.add_option("--outdir", outdir, "output directory (overrides the config)");
    app.add_option("--sweep", sweep, "level range a..b, solves n = m = i for each i");
    app.add_flag("--oracle", oracle, "compare against the bounded follower reference");
    app.add_flag("--mc", mc, "Monte Carlo check of the extracted control");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_flag("--quiet", quiet, "suppress progress lines");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    ssc_config* cfg = nullptr;
    if (ssc_config_load(config_path.c_str(), &cfg) != SSC_OK) {
        return report("config");
    }
    std::vector<std::pair<std::string, std::string>> overrides;
    if (outdir) {
        overrides.emplace_back("outdir", *outdir);
    }
    if (sweep) {
        overrides.emplace_back("sweep", *sweep);
    }
    if (oracle) {
        overrides.emplace_back("oracle", "true");
    }
    if (mc) {
        overrides.emplace_back("mc", "true");
    }
    if (seed) {
        overrides.emplace_back("mc.seed", std::to_string(*seed));
    }
    if (quiet) {
        overrides.emplace_back("quiet", "true");
    }
    for (const auto& [key, value] : overrides) {
        if (ssc_config_set(cfg, key.c_str(), value.c_str()) != SSC_OK) {
            ssc_config_destroy(cfg);
            return report(("--" + key).c_str());
        }
    }

    int exit_code = 0;
    const ssc_status st = ssc_run(cfg, print_line, nullptr, &exit_code);
    ssc_config_destroy(cfg);
    if (st == SSC_OK) {
        return exit_code;
    }
    if (st == SSC_ERR_SOLVER) {
        std::fprintf(stderr, "error: %s\n", ssc_last_error());
        return kSolver;
    }
    if (exit_code == 0) {
        std::fprintf(stderr, "error: %s\n", ssc_last_error());
        return kUsage;
    }
    return exit_code;
}
