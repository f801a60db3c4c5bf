#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hlest {

// G_p: 2^p points mu/2^p - 1/2 + 1/2^{p+1}, ordered by mu.
struct GridRegister {
    int p = 0;
    std::vector<double> points;

    static GridRegister make(int p);
    std::size_t size() const { return points.size(); }
    double point(std::size_t mu) const { return points.at(mu); }
    std::size_t index_of(double x) const;
};

std::vector<double> grid_points(int p);
double grid_point(int p, std::uint64_t mu);

// Entry (k, x) = 2^{-p/2} exp(2 pi i 2^p x k).
Eigen::MatrixXcd qft_grid(int p);

struct OutcomeDistribution {
    GridRegister reg;
    std::vector<double> pmf;
};

// |2^{-p} sum_x exp(2 pi i 2^p x delta)|^2, the Fejer-type kernel.
double phase_kernel(int p, double delta);

OutcomeDistribution linear_phase_outcome_dist(int p, double g);

double tail_probability(const OutcomeDistribution& dist, double g, double threshold);
double tail_probability(int p, double g, double threshold);

struct SineState {
    GridRegister reg;
    std::vector<double> amplitudes;
};

SineState sine_state(int p);

// E[cos 2 pi (k - g')] for input amplitudes a, minimised over g'.
double min_expected_cos(const std::vector<double>& a);

struct SineStateCheck {
    double min_eigenvalue = 0;
    double proxy_mse_sine = 0;
    double proxy_mse_uniform_worst = 0;
    double eigenvector_residual = 0;
    double eigenvector_distance = 0;
};

SineStateCheck sine_state_mse_check(int p);

}  // namespace hlest
