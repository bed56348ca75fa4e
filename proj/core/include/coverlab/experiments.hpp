#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coverlab/bounds.hpp"
#include "coverlab/config.hpp"
#include "coverlab/rng.hpp"
#include "coverlab/space.hpp"

namespace coverlab {

struct ExperimentResult {
    bool any_violated = false;
    std::map<std::string, double> metrics;
    std::vector<BoundReport> reports;
    std::string summary_json;
    std::filesystem::path out_dir;
    std::vector<std::filesystem::path> csv_files;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> defaults;  // key, default
};

std::vector<ExperimentInfo> list_experiments();

// Schema check: known experiment, required keys present, no unknown keys.
// Throws ConfigError with the offending field path.
void validate_experiment_config(const ExperimentConfig& cfg);

// Dispatches to the named experiment and writes summary.json plus the
// experiment's CSV tables under out_dir (COVERLAB_OUT_DIR overrides the
// config's out_dir). CSV bytes depend only on (config keys minus threads,
// seed), never on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// ---- operations also exposed directly ---------------------------------------

struct MinMuSearchResult {
    SeedDistribution best_mu;
    std::vector<double> best_weights;
    double ec_hat = 0.0;  // fresh-stream estimate for the returned mu
    double ec_se = 0.0;
    std::vector<std::pair<std::size_t, double>> trace;  // (iteration, ec during search)
};

// Heuristic minimization of E C over atom weights on a fixed support for the
// growth model: iterative reweighting toward each atom's last-coverer
// frequency, candidates compared under common random numbers. No optimality
// claim.
MinMuSearchResult min_mu_search(const Space& space, const std::vector<Point>& support,
                                std::size_t reps, std::size_t iters,
                                const RngStream& rng, unsigned threads = 1);

struct EvenVsUniformResult {
    double mean_even = 0.0;
    double mean_uniform = 0.0;
    double se_diff = 0.0;  // paired SE of mean(even) - mean(uniform)
    std::size_t reps = 0;
    BoundReport report;
};

// Paired-seed comparison on the circle of integer circumference L between
// uniform-on-L-evenly-spaced-atoms and uniform-on-the-circle. The fixed-radius
// case carries a directional verdict; the growth case only records.
EvenVsUniformResult evenly_spaced_vs_uniform(std::size_t L, bool growth_model, double r0,
                                             std::size_t reps, const RngStream& rng,
                                             unsigned threads = 1);

}  // namespace coverlab
