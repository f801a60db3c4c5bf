#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hlest/probing.hpp"

namespace hlest {

struct AdaptiveConfig {
    int M = 1;
    int log2_d = 1;
    double eps = 0.125;
    double c = default_confidence();
    std::vector<double> g_true;
    ProbingModel model = Ideal{};
    std::uint64_t seed = 42;
    double shot_constant = 9.0;
    bool allow_fallback = true;  // Grover model: use the HS route below ceil(q*)
    int p = 3;

    void validate() const;
};

struct IterationRecord {
    int q = 0;
    double delta_q = 0;
    int shots = 0;
    std::vector<double> medians;
    std::vector<double> u_before;
    std::vector<double> u_after;
    std::uint64_t queries_this_round = 0;
    std::string route;      // "ideal", "hs", "grover-exact", "grover-bound"
    bool succeeded = true;  // simulation-only diagnostic, compares against g_true
};

struct RunResult {
    std::vector<double> estimates;
    std::vector<IterationRecord> ledger;
    std::uint64_t total_queries = 0;
    bool all_rounds_succeeded = true;
    int first_failed_round = -1;
};

int shot_count(int M, double delta_q, double constant = 9.0);

// Lower-middle order statistic per coordinate.
std::vector<double> coordinate_median(const std::vector<Outcome>& samples);

double update_step(double u_q, double median_g, int q);

// Per-shot preparation cost used in the ledger for the given route.
std::uint64_t per_shot_queries(const AdaptiveConfig& config, int q, bool grover_route);

RunResult run_adaptive(const AdaptiveConfig& config);

struct MseReport {
    std::vector<double> per_observable_mse;
    double max_mse = 0;
    std::size_t argmax = 0;
    double mean_total_queries = 0;
    std::vector<double> ci95;  // normal-approximation half-widths
    double success_rate = 0;   // fraction of runs with every round successful
};

// Run r uses seed derive_seed(config.seed, r).
MseReport mse_harness(const AdaptiveConfig& config, int n_runs);

}  // namespace hlest
