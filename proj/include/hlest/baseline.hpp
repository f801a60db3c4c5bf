#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hlest/grid.hpp"

namespace hlest {

using Rational = boost::multiprecision::cpp_rational;

// a_l = (-1)^{l-1}/l * C(m,|l|)/C(m+|l|,|l|), a_0 = 0, for l = -m..m.
std::vector<Rational> central_diff_coeffs_exact(int m);
std::vector<double> central_diff_coeffs(int m);

struct BaselineParams {
    int M = 1;
    double eps_add = 0;
    double c = 2.0;
    int m = 0;
    double r = 0;
    int s = 0;   // ceil(log2(3 c r)), usually negative
    int n1 = 0;  // ceil(log2(4 / (eps_add r)))
    int n = 0;   // n1 + s, qubits per register
    double delta = 1.0;
    int N_med = 1;
    std::vector<double> a;  // central_diff_coeffs(m)
};

// delta = 1 is allowed and gives N_med = 1.
BaselineParams baseline_params(int M, double eps_add, double delta, double c = 2.0);

// h(x) = 2^{-s} sum_l a_l f(l r x), f(x) = 1/2 + sin(2 sum_j x_j g_j) / 2.
double h_function(const std::vector<double>& x, const std::vector<double>& g_true, const BaselineParams& params);

// Outcome distribution of register 1 after QFT^dagger. Exact for M = 1,
// otherwise averaged over n_mc uniform draws of the other registers.
OutcomeDistribution marginal_distribution(const std::vector<double>& g_true, const BaselineParams& params,
                                          int n_mc = 10000, std::uint64_t seed = 42);

using MedianDistribution = OutcomeDistribution;

MedianDistribution median_distribution(const OutcomeDistribution& p_single, int N_med);

struct BaselineQueries {
    std::uint64_t T_NonIter = 0;
    double T_tilde = 0;
};

BaselineQueries baseline_queries(const BaselineParams& params, int overhead = 10);

// Estimator (2^s / r) k for the median outcome k.
double baseline_estimate(double k, const BaselineParams& params);

// Exact MSE of the median estimator for observable 1 given its marginal.
double baseline_mse(const OutcomeDistribution& marginal, double g1, const BaselineParams& params);

// Total qubits (n M + 1 + log2 d).
int baseline_qubits_exact(const BaselineParams& params, int log2_d);

}  // namespace hlest
