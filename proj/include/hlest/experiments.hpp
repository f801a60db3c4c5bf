#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlest/adaptive.hpp"

namespace hlest {

inline constexpr const char* kVersion = "hlest 0.1.0";

struct ExperimentConfig {
    std::string command;
    int M = 30;
    std::uint64_t d = 2;
    double eps = 1.0 / 32.0;
    std::vector<double> eps_add;  // empty: command default
    std::vector<double> delta;    // empty: command default
    double c = 0;                 // 0: command default
    int runs = 200;
    std::uint64_t seed = 42;
    std::string model = "ideal";
    std::string out;
    int overhead = 10;
    int g_sets = 26;
    int n_mc = 10000;
    int a = 1;

    int log2_d() const;
    void validate() const;
    std::string to_json() const;
};

struct ConfigError : std::runtime_error {
    int line = 0;
    ConfigError(int line_, const std::string& msg);
};

// Applies a flat JSON object onto cfg. Errors carry the offending line.
void apply_config_json(const std::string& text, ExperimentConfig& cfg);

std::vector<double> default_eps_add_grid();  // 2^{-a}, a = -3..13
std::vector<double> default_delta_grid();    // 2^{-j}, j = 0..12

// Uniform on [-1,1]^M from stream derive_seed(seed, set_index).
std::vector<double> random_g_set(int M, std::uint64_t seed, std::uint64_t set_index);

ProbingModel model_from_name(const std::string& name);

std::string provenance_header(const ExperimentConfig& cfg);

struct Fig4Row {
    double eps_add;
    int adaptive_qubits;
    int baseline_qubits;
};
std::vector<Fig4Row> run_fig4(const ExperimentConfig& cfg);

struct Fig5Row {
    std::string method;  // "baseline" or "adaptive"
    double eps_add;      // adaptive rows: target eps
    double delta;        // adaptive rows: c
    int n_med;           // adaptive rows: 0
    double t_queries;
    double t_rescaled;
    double rmse_worst;   // adaptive rows: the guaranteed eps
    double rmse_avg;
};
std::vector<Fig5Row> run_fig5(const ExperimentConfig& cfg, bool include_adaptive = true);

struct Fig6Row {
    double n_qubits;
    std::string m_law;  // "N^2", "N^3", "N^4", "2^N", or "qmax" marker rows
    double m_value;     // marker rows: eps
    double q_star;      // marker rows: q_max
};
std::vector<Fig6Row> run_fig6(const ExperimentConfig& cfg);

std::string fig4_csv(const ExperimentConfig& cfg);
std::string fig5_csv(const ExperimentConfig& cfg);
std::string fig6_csv(const ExperimentConfig& cfg);
std::string adaptive_csv(const ExperimentConfig& cfg);
std::string baseline_csv(const ExperimentConfig& cfg);
std::string resources_csv(const ExperimentConfig& cfg);
std::string threshold_csv(const ExperimentConfig& cfg);
std::string micro_csv(const ExperimentConfig& cfg);

std::string run_command(const ExperimentConfig& cfg);

}  // namespace hlest
